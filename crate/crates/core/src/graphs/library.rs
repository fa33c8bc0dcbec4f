//! Small named graphs and seeded random generators.

use rand::Rng;

use super::Graph;

/// `v --a--> w`.
pub fn a2() -> Graph {
    Graph::new(["v", "w"], [("a", "v", "w")])
        .expect("valid")
        .with_name("a2")
}

/// `u <-a- v <-b- w`.
pub fn chain3() -> Graph {
    Graph::new(["u", "v", "w"], [("a", "v", "u"), ("b", "w", "v")])
        .expect("valid")
        .with_name("chain3")
}

/// One vertex with a loop `a`.
pub fn single_loop() -> Graph {
    Graph::new(["v"], [("a", "v", "v")]).expect("valid").with_name("loop")
}

/// Loop `a` at `v` with entry `c` from `w`.
pub fn loop_with_entry() -> Graph {
    Graph::new(["v", "w"], [("a", "v", "v"), ("c", "w", "v")])
        .expect("valid")
        .with_name("loop-entry")
}

/// `n` loops at a single vertex; edges `a`, `b`, `c`, ...
pub fn cuntz(n: usize) -> Graph {
    assert!((1..=26).contains(&n), "cuntz graph needs 1..=26 loops");
    let edges: Vec<(String, String, String)> = (0..n)
        .map(|i| (((b'a' + i as u8) as char).to_string(), "v".into(), "v".into()))
        .collect();
    Graph::new(["v"], edges).expect("valid").with_name(format!("O{n}"))
}

/// Random multigraph on `1..=max_vertices` vertices with up to `max_edges`
/// edges (loops allowed). Vertices are `v0, v1, ...`, edges `e0, e1, ...`.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Graph {
    let n = rng.random_range(1..=max_vertices.max(1));
    let m = rng.random_range(0..=max_edges);
    let edges: Vec<(String, String, String)> = (0..m)
        .map(|i| {
            let s = rng.random_range(0..n);
            let r = rng.random_range(0..n);
            (edge_name(i, m), format!("v{s}"), format!("v{r}"))
        })
        .collect();
    Graph::new((0..n).map(|i| format!("v{i}")), edges).expect("valid")
}

/// Random acyclic multigraph: every edge runs from a lower to a higher
/// vertex index.
pub fn random_acyclic_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Graph {
    let n = rng.random_range(1..=max_vertices.max(1));
    let m = if n == 1 { 0 } else { rng.random_range(0..=max_edges) };
    let edges: Vec<(String, String, String)> = (0..m)
        .map(|i| {
            let s = rng.random_range(0..n - 1);
            let r = rng.random_range(s + 1..n);
            (edge_name(i, m), format!("v{s}"), format!("v{r}"))
        })
        .collect();
    Graph::new((0..n).map(|i| format!("v{i}")), edges).expect("valid")
}

// zero-padded so that id order matches creation order
fn edge_name(i: usize, total: usize) -> String {
    let width = total.saturating_sub(1).to_string().len();
    format!("e{i:0width$}")
}
