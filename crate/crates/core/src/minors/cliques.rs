use serde::Serialize;

use crate::graph::Graph;

/// Four-clique count against the `4n − 15` bound for K6-minor-free graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FourCliqueBound {
    pub clique_count: u64,
    pub bound: i64,
    /// More 4-cliques than the bound: the graph must contain a K6 minor.
    pub implies_k6: bool,
}

pub fn count_four_cliques(g: &Graph) -> u64 {
    let mut count = 0;
    for (a, b) in g.edges() {
        let common: Vec<usize> = g
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&c| c > b && g.has_edge(b, c))
            .collect();
        for (i, &c) in common.iter().enumerate() {
            count += common[i + 1..].iter().filter(|&&d| g.has_edge(c, d)).count() as u64;
        }
    }
    count
}

pub fn four_clique_bound_check(g: &Graph) -> FourCliqueBound {
    assert!(g.n() >= 4, "bound is stated for n >= 4");
    let clique_count = count_four_cliques(g);
    let bound = 4 * g.n() as i64 - 15;
    FourCliqueBound {
        clique_count,
        bound,
        implies_k6: clique_count as i64 > bound,
    }
}
