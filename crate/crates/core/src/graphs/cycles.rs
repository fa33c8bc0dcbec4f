use std::collections::{BTreeSet, VecDeque};

use super::{EdgeId, Graph, GraphError, Path, VertexId};

/// A cycle (pairwise-distinct edges, `r(α) = s(α)`) rotated so that its least
/// edge comes first, together with all of its entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub path: Path,
    /// Edges `a` with `r(a) = r(αᵢ)` and `a ≠ αᵢ` for some `i`, sorted.
    pub entries: Vec<EdgeId>,
}

impl Cycle {
    pub fn has_entry(&self) -> bool {
        !self.entries.is_empty()
    }
}

/// All cycles of `g` up to rotation, in canonical order.
pub fn find_cycles(g: &Graph) -> Vec<Cycle> {
    let mut found = Vec::new();
    for start in g.edge_ids() {
        let mut stack = vec![start];
        let mut used = vec![false; g.edge_count()];
        used[start.index()] = true;
        extend_cycles(g, start, &mut stack, &mut used, &mut found);
    }
    found.sort();
    found
        .into_iter()
        .map(|edges| {
            let path = Path::new(g, edges).expect("cycle search only follows composable edges");
            let mut entries = BTreeSet::new();
            for &e in path.edges() {
                for &a in g.receives(g.range(e)) {
                    if a != e {
                        entries.insert(a);
                    }
                }
            }
            Cycle {
                path,
                entries: entries.into_iter().collect(),
            }
        })
        .collect()
}

fn extend_cycles(g: &Graph, start: EdgeId, stack: &mut Vec<EdgeId>, used: &mut [bool], out: &mut Vec<Vec<EdgeId>>) {
    let tail = g.source(*stack.last().unwrap());
    if tail == g.range(start) {
        out.push(stack.clone());
    }
    for &e in g.receives(tail) {
        if e <= start || used[e.index()] {
            continue;
        }
        used[e.index()] = true;
        stack.push(e);
        extend_cycles(g, start, stack, used, out);
        stack.pop();
        used[e.index()] = false;
    }
}

/// True when every cycle of `g` has an entry.
pub fn satisfies_condition_l(g: &Graph) -> bool {
    find_cycles(g).iter().all(Cycle::has_entry)
}

/// `α_k ≠ α_{|α|}` for all `k < |α|`.
pub fn is_nonreturning(p: &Path) -> bool {
    match p.edges().split_last() {
        None => true,
        Some((last, rest)) => !rest.contains(last),
    }
}

/// Finds a nonreturning path `λ` with `r(λ) = v` and `|λ| ≥ min_len`.
///
/// For each candidate last edge `e`, searches breadth-first for a path
/// `λ'` with `r(λ') = v`, `s(λ') = r(e)`, `|λ'| ≥ min_len - 1` that avoids `e`,
/// over states `(vertex, min(length, min_len - 1))`. The search is exhaustive
/// over that finite state space, so `NoSuchPath` means no such path exists.
/// Among the candidates the shortest wins, ties broken lexicographically.
pub fn find_nonreturning_path(g: &Graph, v: VertexId, min_len: usize) -> Result<Path, GraphError> {
    let no_path = || GraphError::NoSuchPath {
        vertex: g.vertex_name(v).to_string(),
        min_len,
    };
    if min_len == 0 {
        return Ok(Path::vertex(v));
    }
    let cap = min_len - 1;
    let mut best: Option<Path> = None;
    for last in g.edge_ids() {
        let Some(prefix) = shortest_avoiding(g, v, g.range(last), cap, last) else {
            continue;
        };
        let lambda = prefix.push(g, last).expect("prefix ends at r(last)");
        let better = match &best {
            None => true,
            Some(b) => (lambda.len(), &lambda) < (b.len(), b),
        };
        if better {
            best = Some(lambda);
        }
    }
    let lambda = best.ok_or_else(no_path)?;
    debug_assert!(is_nonreturning(&lambda) && lambda.range(g) == v && lambda.len() >= min_len);
    Ok(lambda)
}

fn shortest_avoiding(g: &Graph, from: VertexId, to: VertexId, cap: usize, avoid: EdgeId) -> Option<Path> {
    let width = cap + 1;
    let state = |vtx: VertexId, len: usize| vtx.index() * width + len;
    let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; g.vertex_count() * width];
    let mut seen = vec![false; g.vertex_count() * width];
    let start = state(from, 0);
    seen[start] = true;
    let mut queue = VecDeque::from([(from, 0usize)]);
    while let Some((u, len)) = queue.pop_front() {
        if u == to && len == cap {
            let mut edges = Vec::new();
            let mut cur = state(u, len);
            while let Some((prev, e)) = parent[cur] {
                edges.push(e);
                cur = prev;
            }
            edges.reverse();
            return Some(if edges.is_empty() {
                Path::vertex(from)
            } else {
                Path::new(g, edges).expect("search follows composable edges")
            });
        }
        for &e in g.receives(u) {
            if e == avoid {
                continue;
            }
            let next = (g.source(e), (len + 1).min(cap));
            let id = state(next.0, next.1);
            if !seen[id] {
                seen[id] = true;
                parent[id] = Some((state(u, len), e));
                queue.push_back(next);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_with_entry() -> Graph {
        Graph::new(["v", "w"], [("a", "v", "v"), ("c", "w", "v")]).unwrap()
    }

    /// Exhaustive oracle: every path with range `v` and length in
    /// `min_len..=max_len` that is nonreturning.
    fn brute_nonreturning(g: &Graph, v: VertexId, min_len: usize, max_len: usize) -> Vec<Path> {
        super::super::enumerate_paths(g, max_len, None)
            .into_iter()
            .filter(|p| p.range(g) == v && p.len() >= min_len && is_nonreturning(p))
            .collect()
    }

    #[test]
    fn cycle_examples() {
        let lp = Graph::new(["v"], [("a", "v", "v")]).unwrap();
        let cs = find_cycles(&lp);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].entries.is_empty());

        let g = loop_with_entry();
        let cs = find_cycles(&g);
        assert_eq!(cs.len(), 1);
        assert_eq!(g.path_label(&cs[0].path), "a");
        assert_eq!(cs[0].entries, [g.edge_id("c").unwrap()]);
        assert!(satisfies_condition_l(&g));

        let a2 = Graph::new(["v", "w"], [("a", "v", "w")]).unwrap();
        assert!(find_cycles(&a2).is_empty());
    }

    #[test]
    fn cycles_are_canonical_rotations() {
        // two-cycle v -a-> w -b-> v, plus figure eight at v
        let g = Graph::new(["v", "w"], [("a", "v", "w"), ("b", "w", "v"), ("c", "v", "v")]).unwrap();
        let labels: Vec<String> = find_cycles(&g).iter().map(|c| g.path_label(&c.path)).collect();
        // a then b: s(a)=v=r(b); cycle "ab" has r(ab)=w=s(ab); "acb" uses the loop too
        assert_eq!(labels, ["ab", "acb", "c"]);
    }

    #[test]
    fn nonreturning_examples() {
        let g = loop_with_entry();
        let v = g.vertex("v").unwrap();
        let lam = find_nonreturning_path(&g, v, 2).unwrap();
        assert_eq!(g.path_label(&lam), "ac");
        assert!(brute_nonreturning(&g, v, 2, 2).contains(&lam));

        let chain = Graph::new(["u", "v", "w"], [("a", "v", "u"), ("b", "w", "v")]).unwrap();
        let lam = find_nonreturning_path(&chain, chain.vertex("u").unwrap(), 2).unwrap();
        assert_eq!(chain.path_label(&lam), "ab");

        let lp = Graph::new(["v"], [("a", "v", "v")]).unwrap();
        let v = lp.vertex("v").unwrap();
        assert!(brute_nonreturning(&lp, v, 2, 8).is_empty());
        assert!(matches!(
            find_nonreturning_path(&lp, v, 2),
            Err(GraphError::NoSuchPath { .. })
        ));
        assert_eq!(lp.path_label(&find_nonreturning_path(&lp, v, 1).unwrap()), "a");
    }

    #[test]
    fn nonreturning_agrees_with_brute_force_on_long_requests() {
        let g = Graph::new(
            ["u", "v", "w"],
            [("a", "v", "v"), ("b", "u", "v"), ("c", "v", "u"), ("d", "w", "u")],
        )
        .unwrap();
        for v in g.vertices() {
            for min_len in 1..=5 {
                let brute = brute_nonreturning(&g, v, min_len, min_len + g.edge_count() + 1);
                match find_nonreturning_path(&g, v, min_len) {
                    Ok(lam) => {
                        assert!(is_nonreturning(&lam));
                        assert_eq!(lam.range(&g), v);
                        let shortest = brute.iter().map(Path::len).min().unwrap();
                        assert_eq!(lam.len(), shortest);
                    }
                    Err(_) => assert!(brute.is_empty()),
                }
            }
        }
    }
}
