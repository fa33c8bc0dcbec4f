use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::graphs::Path;
use crate::leavitt::{
    rational_from_f64, reduced_monomials, BasisPolicy, Element, Monomial, NumericElement, RationalComplex, Scalar,
};
use crate::spatial::CkFamily;
use crate::CMatrix;

use super::report::{Status, VerificationReport};
use super::TOL;

/// Outcome of [`injectivity_on_level`].
#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    pub level: usize,
    pub basis_size: usize,
    pub rank: usize,
    pub kernel_dimension: usize,
    /// Elimination ran over exact rationals.
    pub exact: bool,
    #[serde(serialize_with = "witness_terms")]
    pub kernel_witnesses: Vec<NumericElement>,
    pub witness_labels: Vec<String>,
    pub report: VerificationReport,
}

fn witness_terms<S: Serializer>(ws: &[NumericElement], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(ws.iter().map(|w| w.to_json_value().terms))
}

type SparseRows<C> = Vec<BTreeMap<usize, C>>;

fn sparse<C: Scalar>(m: &CMatrix, conv: &impl Fn(Complex64) -> C) -> SparseRows<C> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .filter(|&j| m[(i, j)] != Complex64::new(0.0, 0.0))
                .map(|j| (j, conv(m[(i, j)])))
                .collect()
        })
        .collect()
}

fn sparse_mul<C: Scalar>(a: &SparseRows<C>, b: &SparseRows<C>) -> SparseRows<C> {
    a.iter()
        .map(|row| {
            let mut out: BTreeMap<usize, C> = BTreeMap::new();
            for (k, x) in row {
                for (j, y) in &b[*k] {
                    let term = x.clone() * y.clone();
                    match out.get_mut(j) {
                        Some(acc) => *acc = acc.clone() + term,
                        None => {
                            out.insert(*j, term);
                        }
                    }
                }
            }
            out.retain(|_, c| !c.is_negligible());
            out
        })
        .collect()
}

/// The generator matrices over `C`, with cached path products.
struct SparseFamily<'a, C: Scalar> {
    fam: &'a CkFamily,
    s: Vec<SparseRows<C>>,
    t: Vec<SparseRows<C>>,
    e: Vec<SparseRows<C>>,
    s_paths: HashMap<Path, SparseRows<C>>,
    t_paths: HashMap<Path, SparseRows<C>>,
}

impl<'a, C: Scalar> SparseFamily<'a, C> {
    fn new(fam: &'a CkFamily, conv: impl Fn(Complex64) -> C) -> Self {
        SparseFamily {
            fam,
            s: fam.s.iter().map(|op| sparse(&op.matrix, &conv)).collect(),
            t: fam.t.iter().map(|op| sparse(&op.matrix, &conv)).collect(),
            e: fam.e.iter().map(|op| sparse(&op.matrix, &conv)).collect(),
            s_paths: HashMap::new(),
            t_paths: HashMap::new(),
        }
    }

    fn s_path(&mut self, alpha: &Path) -> SparseRows<C> {
        if let Some(m) = self.s_paths.get(alpha) {
            return m.clone();
        }
        let mut acc = self.e[alpha.source().index()].clone();
        for &a in alpha.edges().iter().rev() {
            acc = sparse_mul(&self.s[a.index()], &acc);
        }
        self.s_paths.insert(alpha.clone(), acc.clone());
        acc
    }

    fn t_path(&mut self, beta: &Path) -> SparseRows<C> {
        if let Some(m) = self.t_paths.get(beta) {
            return m.clone();
        }
        let mut acc = self.e[beta.source().index()].clone();
        for &b in beta.edges().iter().rev() {
            acc = sparse_mul(&acc, &self.t[b.index()]);
        }
        self.t_paths.insert(beta.clone(), acc.clone());
        acc
    }

    /// `π(s_α t_β)` flattened row-major.
    fn image(&mut self, m: &Monomial) -> BTreeMap<usize, C> {
        let n = self.fam.dimension();
        let prod = sparse_mul(&self.s_path(&m.alpha), &self.t_path(&m.beta));
        let mut out = BTreeMap::new();
        for (i, row) in prod.into_iter().enumerate() {
            for (j, c) in row {
                out.insert(i * n + j, c);
            }
        }
        out
    }
}

fn exact_entry(z: Complex64) -> Option<RationalComplex> {
    let small = |x: f64| {
        let r = rational_from_f64(x)?;
        (r.denom().bits() <= 21).then_some(r)
    };
    Some(RationalComplex::new(small(z.re)?, small(z.im)?))
}

fn family_is_exact(fam: &CkFamily) -> bool {
    fam.s
        .iter()
        .chain(&fam.t)
        .chain(&fam.e)
        .all(|op| op.matrix.iter().all(|&z| exact_entry(z).is_some()))
}

/// Incremental elimination. Returns the rank and, for every column that is
/// dependent on the earlier ones, the relation `e_j + Σ c_i e_i` (as a sparse
/// coefficient map over columns) that the columns satisfy.
fn relations<C: Scalar + std::ops::Div<Output = C>>(
    columns: &[BTreeMap<usize, C>],
    negligible: impl Fn(&C) -> bool,
    magnitude: impl Fn(&C) -> f64,
) -> (usize, Vec<BTreeMap<usize, C>>) {
    // (pivot index, reduced column, combination of input columns producing it)
    type Pivot<C> = (usize, BTreeMap<usize, C>, BTreeMap<usize, C>);
    let mut pivots: Vec<Pivot<C>> = Vec::new();
    let mut kernel = Vec::new();
    let axpy = |target: &mut BTreeMap<usize, C>, c: &C, x: &BTreeMap<usize, C>| {
        for (k, v) in x {
            let term = c.clone() * v.clone();
            let next = match target.get(k) {
                Some(cur) => cur.clone() - term,
                None => -term,
            };
            if negligible(&next) {
                target.remove(k);
            } else {
                target.insert(*k, next);
            }
        }
    };
    for (j, col) in columns.iter().enumerate() {
        let mut r = col.clone();
        let mut combo = BTreeMap::from([(j, C::one())]);
        for (key, vec, pc) in &pivots {
            if let Some(c) = r.get(key).cloned() {
                axpy(&mut r, &c, vec);
                axpy(&mut combo, &c, pc);
                r.remove(key);
            }
        }
        if r.is_empty() {
            kernel.push(combo);
            continue;
        }
        let (&key, pivot) = r
            .iter()
            .max_by(|x, y| magnitude(x.1).total_cmp(&magnitude(y.1)).then(y.0.cmp(x.0)))
            .expect("nonempty");
        let inv = C::one() / pivot.clone();
        let scale = |m: BTreeMap<usize, C>| {
            m.into_iter()
                .map(|(k, v)| (k, v * inv.clone()))
                .collect::<BTreeMap<_, _>>()
        };
        pivots.push((key, scale(r), scale(combo)));
    }
    (pivots.len(), kernel)
}

fn numeric_rank(columns: &[BTreeMap<usize, Complex64>]) -> usize {
    let rows: BTreeSet<usize> = columns.iter().flat_map(|c| c.keys().copied()).collect();
    if rows.is_empty() {
        return 0;
    }
    let row_index: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut m = CMatrix::zeros(rows.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (k, &z) in col {
            m[(row_index[k], j)] = z;
        }
    }
    let m = if m.nrows() > m.ncols() { m.qr().r() } else { m };
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > TOL * top).count()
}

/// Kernel of `π` on the span of reduced monomials `s_α t_β` with
/// `|α|, |β| ≤ k`.
///
/// Elimination is exact when every generator matrix entry is a dyadic
/// rational with a small denominator (unit weights and phases in
/// `{±1, ±i}`, for instance); otherwise the kernel dimension comes from an
/// SVD with threshold `1e-9·σ_max` and witnesses from pivoted elimination.
pub fn injectivity_on_level(fam: &CkFamily, k: usize, policy: &Arc<BasisPolicy>) -> InjectivityReport {
    let g = &fam.graph;
    let basis = reduced_monomials(g, policy, k);
    let exact = family_is_exact(fam);
    let (rank, witnesses, labels, detail) = if exact {
        let mut sf = SparseFamily::<RationalComplex>::new(fam, |z| exact_entry(z).expect("checked exact"));
        let columns: Vec<_> = basis.iter().map(|m| sf.image(m)).collect();
        let (rank, kernel) = relations(
            &columns,
            |c| c.is_negligible(),
            |c| c.re.to_f64().unwrap_or(0.0).abs() + c.im.to_f64().unwrap_or(0.0).abs(),
        );
        let elems: Vec<Element<RationalComplex>> = kernel
            .into_iter()
            .map(|combo| Element::from_terms(g, combo.into_iter().map(|(i, c)| (basis[i].clone(), c))))
            .collect();
        let labels: Vec<String> = elems.iter().map(|w| w.display()).collect();
        (
            rank,
            elems.iter().map(|w| w.to_numeric()).collect::<Vec<_>>(),
            labels,
            "exact elimination".to_string(),
        )
    } else {
        let mut sf = SparseFamily::<Complex64>::new(fam, |z| z);
        let columns: Vec<_> = basis.iter().map(|m| sf.image(m)).collect();
        let scale = columns
            .iter()
            .flat_map(|c| c.values())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let cutoff = TOL * scale.max(f64::MIN_POSITIVE);
        let (elim_rank, kernel) = relations(&columns, |c| c.norm() <= cutoff, |c| c.norm());
        let rank = numeric_rank(&columns);
        let elems: Vec<NumericElement> = kernel
            .into_iter()
            .map(|combo| Element::from_terms(g, combo.into_iter().map(|(i, c)| (basis[i].clone(), c))))
            .collect();
        let labels: Vec<String> = elems.iter().map(|w| w.display()).collect();
        let detail = if elim_rank == rank {
            "SVD rank".to_string()
        } else {
            format!("SVD rank {rank}; pivoted elimination found rank {elim_rank}")
        };
        (rank, elems, labels, detail)
    };
    let kernel_dimension = basis.len() - rank;
    let mut report = VerificationReport::new(format!(
        "π on level {k} of {} ({} reduced monomials)",
        g.name().unwrap_or("graph"),
        basis.len()
    ));
    let detail = if kernel_dimension == 0 {
        detail
    } else {
        format!("{detail}; kernel contains {}", labels_preview(&labels))
    };
    report.push(
        "π injective on level",
        Status::from_bool(kernel_dimension == 0),
        kernel_dimension as f64,
        detail,
    );
    InjectivityReport {
        level: k,
        basis_size: basis.len(),
        rank,
        kernel_dimension,
        exact,
        kernel_witnesses: witnesses,
        witness_labels: labels,
        report,
    }
}

fn labels_preview(labels: &[String]) -> String {
    let shown: Vec<&str> = labels.iter().take(3).map(String::as_str).collect();
    let more = if labels.len() > 3 {
        format!(" and {} more", labels.len() - 3)
    } else {
        String::new()
    };
    format!("{}{more}", shown.join("; "))
}
