use num_complex::Complex64;

use crate::CMatrix;

use super::space::AtomicMeasureSpace;
use super::SpatialError;

/// `(E, F, η, f)` on an atomic space, stored as triples `(y, η(y), f(y))`
/// for `y ∈ F`, sorted by `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialSystem {
    map: Vec<(usize, usize, Complex64)>,
}

impl SpatialSystem {
    pub fn new(mut map: Vec<(usize, usize, Complex64)>) -> Result<Self, SpatialError> {
        map.sort_by_key(|&(y, _, _)| y);
        let bad = |m: String| Err(SpatialError::InvalidSystem(m));
        if map.windows(2).any(|w| w[0].0 == w[1].0) {
            return bad("η is not a function: repeated point of F".into());
        }
        let mut image: Vec<usize> = map.iter().map(|&(_, x, _)| x).collect();
        image.sort_unstable();
        if image.windows(2).any(|w| w[0] == w[1]) {
            return bad("η is not injective".into());
        }
        if let Some(&(y, _, f)) = map.iter().find(|(_, _, f)| (f.norm() - 1.0).abs() > 1e-12) {
            return bad(format!("phase at atom {y} has modulus {}", f.norm()));
        }
        Ok(SpatialSystem { map })
    }

    /// `η` order-preserving from the sorted list `f_set` onto `e_set`, with a
    /// constant phase.
    pub fn order_preserving(e_set: &[usize], f_set: &[usize], phase: Complex64) -> Result<Self, SpatialError> {
        if e_set.len() != f_set.len() {
            return Err(SpatialError::InvalidSystem(format!(
                "|E| = {} but |F| = {}",
                e_set.len(),
                f_set.len()
            )));
        }
        Self::new(f_set.iter().zip(e_set).map(|(&y, &x)| (y, x, phase)).collect())
    }

    /// The identity system on the given atoms.
    pub fn identity(atoms: &[usize]) -> Self {
        Self::order_preserving(atoms, atoms, Complex64::new(1.0, 0.0)).expect("identity is a bijection")
    }

    pub fn triples(&self) -> &[(usize, usize, Complex64)] {
        &self.map
    }

    /// The domain `E`, sorted.
    pub fn e_set(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.map.iter().map(|&(_, x, _)| x).collect();
        e.sort_unstable();
        e
    }

    /// The range `F`, sorted.
    pub fn f_set(&self) -> Vec<usize> {
        self.map.iter().map(|&(y, _, _)| y).collect()
    }

    /// `(F, E, η⁻¹, f̄∘η⁻¹)`.
    pub fn reverse(&self) -> Self {
        let mut map: Vec<_> = self.map.iter().map(|&(y, x, f)| (x, y, f.conj())).collect();
        map.sort_by_key(|&(y, _, _)| y);
        SpatialSystem { map }
    }

    /// The system of `s₂ s₁` where `self = s₂`: `z ↦ η₁(η₂(z))` on
    /// `{z ∈ F₂ : η₂(z) ∈ F₁}` with phase `f₂(z) f₁(η₂(z))`.
    pub fn compose_after(&self, first: &SpatialSystem) -> Self {
        let map = self
            .map
            .iter()
            .filter_map(|&(z, w, f2)| {
                first
                    .map
                    .binary_search_by_key(&w, |&(y, _, _)| y)
                    .ok()
                    .map(|i| (z, first.map[i].1, f2 * first.map[i].2))
            })
            .collect();
        SpatialSystem { map }
    }

    pub fn check_against(&self, space: &AtomicMeasureSpace) -> Result<(), SpatialError> {
        let n = space.len();
        if self.map.iter().any(|&(y, x, _)| y >= n || x >= n) {
            return Err(SpatialError::InvalidSystem(
                "system refers to atoms outside the space".into(),
            ));
        }
        Ok(())
    }

    /// `s[y, η(y)] = f(y) (μ_{η(y)} / μ_y)^{1/p}`.
    pub fn matrix(&self, space: &AtomicMeasureSpace, p: f64) -> CMatrix {
        let n = space.len();
        let mut m = CMatrix::zeros(n, n);
        for &(y, x, f) in &self.map {
            m[(y, x)] = f * (space.weights[x] / space.weights[y]).powf(1.0 / p);
        }
        m
    }
}

/// A matrix over the atoms, optionally certified as spatial.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialOperator {
    pub matrix: CMatrix,
    pub certificate: Option<SpatialSystem>,
}

impl SpatialOperator {
    pub fn uncertified(matrix: CMatrix) -> Self {
        SpatialOperator {
            matrix,
            certificate: None,
        }
    }

    /// Largest entry deviation between the stored matrix and the one the
    /// certificate induces.
    pub fn certificate_residual(&self, space: &AtomicMeasureSpace, p: f64) -> Option<f64> {
        let sys = self.certificate.as_ref()?;
        Some(max_abs(&(&self.matrix - sys.matrix(space, p))))
    }

    /// Multiplication by the indicator of `atoms`.
    pub fn indicator(n: usize, atoms: &[usize]) -> Self {
        let sys = SpatialSystem::identity(atoms);
        let mut m = CMatrix::zeros(n, n);
        for &i in atoms {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        SpatialOperator {
            matrix: m,
            certificate: Some(sys),
        }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        let certificate = if (z.norm() - 1.0).abs() <= 1e-12 {
            self.certificate.as_ref().map(|c| SpatialSystem {
                map: c.map.iter().map(|&(y, x, f)| (y, x, f * z)).collect(),
            })
        } else {
            None
        };
        SpatialOperator {
            matrix: self.matrix.map(|a| a * z),
            certificate,
        }
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn spi_matrix(space: &AtomicMeasureSpace, sys: &SpatialSystem, p: f64) -> Result<SpatialOperator, SpatialError> {
    super::check_exponent(p)?;
    sys.check_against(space)?;
    Ok(SpatialOperator {
        matrix: sys.matrix(space, p),
        certificate: Some(sys.clone()),
    })
}

/// `s₂ s₁`.
pub fn spi_compose(s2: &SpatialOperator, s1: &SpatialOperator) -> Result<SpatialOperator, SpatialError> {
    if s2.matrix.shape() != s1.matrix.shape() {
        return Err(SpatialError::SpaceMismatch);
    }
    let (Some(c2), Some(c1)) = (&s2.certificate, &s1.certificate) else {
        return Err(SpatialError::MissingCertificate);
    };
    Ok(SpatialOperator {
        matrix: &s2.matrix * &s1.matrix,
        certificate: Some(c2.compose_after(c1)),
    })
}

pub fn spi_reverse(s: &SpatialOperator, space: &AtomicMeasureSpace, p: f64) -> Result<SpatialOperator, SpatialError> {
    let sys = s.certificate.as_ref().ok_or(SpatialError::MissingCertificate)?;
    spi_matrix(space, &sys.reverse(), p)
}

/// Heuristic recovery of a spatial system from a bare matrix: at most one
/// nonzero per row and column, with moduli matching the weight factors.
/// A `Some` answer is always a valid certificate; `None` is not a proof that
/// the matrix is not spatial.
pub fn recover_certificate(matrix: &CMatrix, space: &AtomicMeasureSpace, p: f64, tol: f64) -> Option<SpatialSystem> {
    let n = space.len();
    if matrix.shape() != (n, n) {
        return None;
    }
    let mut map = Vec::new();
    for y in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&x| matrix[(y, x)].norm() > tol).collect();
        match nz.as_slice() {
            [] => {}
            [x] => {
                let scale = (space.weights[*x] / space.weights[y]).powf(1.0 / p);
                let f = matrix[(y, *x)] / scale;
                if (f.norm() - 1.0).abs() > tol {
                    return None;
                }
                map.push((y, *x, f / f.norm()));
            }
            _ => return None,
        }
    }
    SpatialSystem::new(map).ok()
}
