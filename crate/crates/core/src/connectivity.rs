//! Vertex connectivity by unit-capacity max-flow on the vertex-split network.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Vertex connectivity with a minimum separating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub kappa: usize,
    /// A minimum vertex cut; empty for complete or disconnected graphs.
    pub cut: Vec<usize>,
}

const INF: u32 = u32::MAX / 2;

struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn arc(&mut self, u: usize, v: usize, c: u32) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Breadth-first search in the residual network; returns parent arcs.
    fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let parent = self.bfs(s);
        let mut r: Vec<bool> = parent.iter().map(Option::is_some).collect();
        r[s] = true;
        r
    }

    /// Unit augmentations until `limit` is reached or no path remains.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit {
            let parent = self.bfs(s);
            if parent[t].is_none() {
                break;
            }
            let mut v = t;
            while v != s {
                let e = parent[v].expect("path arc");
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

/// Minimum vertex cut separating the non-adjacent vertices `s` and `t`.
pub fn local_vertex_cut(g: &Graph, s: usize, t: usize) -> Vec<usize> {
    assert!(s != t && !g.has_edge(s, t), "s and t must be distinct and non-adjacent");
    let n = g.n();
    // vertex v splits into in = 2v and out = 2v + 1
    let mut net = FlowNet::new(2 * n);
    for v in 0..n {
        let c = if v == s || v == t { INF } else { 1 };
        net.arc(2 * v, 2 * v + 1, c);
    }
    for (u, w) in g.edges() {
        net.arc(2 * u + 1, 2 * w, INF);
        net.arc(2 * w + 1, 2 * u, INF);
    }
    net.max_flow(2 * s + 1, 2 * t, n);
    let r = net.reachable(2 * s + 1);
    (0..n).filter(|&v| r[2 * v] && !r[2 * v + 1]).collect()
}

/// Vertex connectivity κ(G), following Esfahanian–Hakimi: with `v` of minimum
/// degree, κ is the least local connectivity over `v` against its
/// non-neighbors and over non-adjacent pairs of neighbors of `v`.
pub fn vertex_connectivity(g: &Graph) -> Connectivity {
    let n = g.n();
    if n <= 1 {
        return Connectivity { kappa: 0, cut: Vec::new() };
    }
    if !g.is_connected() {
        return Connectivity { kappa: 0, cut: Vec::new() };
    }
    let (_, v) = g.min_degree().expect("non-empty graph");
    let mut best: Option<Vec<usize>> = None;
    let mut consider = |cut: Vec<usize>| {
        if best.as_ref().is_none_or(|b| cut.len() < b.len()) {
            best = Some(cut);
        }
    };
    for w in 0..n {
        if w != v && !g.has_edge(v, w) {
            consider(local_vertex_cut(g, v, w));
        }
    }
    let nbrs = g.neighbors(v);
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            if !g.has_edge(x, y) {
                consider(local_vertex_cut(g, x, y));
            }
        }
    }
    match best {
        Some(cut) => Connectivity {
            kappa: cut.len(),
            cut,
        },
        // v is universal and its neighborhood a clique: the graph is complete
        None => Connectivity {
            kappa: n - 1,
            cut: Vec::new(),
        },
    }
}

/// k-connected: more than k vertices and no separating set of fewer than k vertices.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    g.n() > k && vertex_connectivity(g).kappa >= k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bipyramid() -> Graph {
        // A,B,C = 0,1,2; D,E = 3,4
        Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2)])
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(vertex_connectivity(&Graph::complete(5)).kappa, 4);
        assert_eq!(vertex_connectivity(&Graph::complete(6)).kappa, 5);
    }

    #[test]
    fn bipyramid_cut() {
        let c = vertex_connectivity(&bipyramid());
        assert_eq!(c.kappa, 3);
        assert_eq!(c.cut, vec![0, 1, 2]);
    }

    #[test]
    fn cycle_and_petersen() {
        assert_eq!(vertex_connectivity(&Graph::cycle(7)).kappa, 2);
        assert_eq!(vertex_connectivity(&Graph::petersen()).kappa, 3);
    }

    #[test]
    fn disconnected_graph() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        assert_eq!(vertex_connectivity(&g), Connectivity { kappa: 0, cut: vec![] });
    }

    #[test]
    fn returned_cut_separates() {
        let g = Graph::petersen();
        let c = vertex_connectivity(&g);
        assert!(!g.is_connected_without(&c.cut));
    }
}
