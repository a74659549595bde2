//! Slow, independent reference implementations used to check the library.
#![allow(dead_code)]

use std::collections::HashMap;

use tuttet::{generators, Graph, Point3, TetMesh};

/// Meshes expected to satisfy every hypothesis: pass validation and exclude
/// both K6 and K3,3,1.
pub fn positive_corpus() -> Vec<(&'static str, TetMesh)> {
    vec![
        ("split-tet", generators::split_tet()),
        ("bipyramid-cone", generators::bipyramid_cone()),
        ("octahedron-cone", generators::octahedron_cone()),
        ("pentagonal-bipyramid-cone", generators::pentagonal_bipyramid_cone()),
        ("stacked-octahedron", generators::stacked_octahedron()),
    ]
}

/// Every generator output that builds into a complex.
pub fn all_meshes() -> Vec<(&'static str, TetMesh)> {
    let mut v: Vec<(&'static str, TetMesh)> = generators::NAMES
        .iter()
        .map(|&n| (n, generators::by_name(n).unwrap()))
        .collect();
    v.push(("split-tet-chain", generators::split_tet_chain()));
    v
}

/// Simple graph on at most 16 vertices as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Small {
    adj: Vec<u16>,
}

impl Small {
    fn from_graph(g: &Graph) -> Small {
        assert!(g.n() <= 16);
        let mut adj = vec![0u16; g.n()];
        for (u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Small { adj }
    }

    fn edges(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    /// Merges `v` into `u` and drops `v`.
    fn contract(&self, u: usize, v: usize) -> Small {
        let n = self.adj.len();
        let relabel = |x: usize| if x == v { u } else { x };
        let index = |x: usize| if x > v { x - 1 } else { x };
        let mut adj = vec![0u16; n - 1];
        for a in 0..n {
            for b in 0..n {
                let (a2, b2) = (relabel(a), relabel(b));
                if self.has(a, b) && a2 != b2 {
                    adj[index(a2)] |= 1 << index(b2);
                }
            }
        }
        Small { adj }
    }
}

/// Whether `pattern` embeds as a (not necessarily induced) subgraph of `host`.
fn is_subgraph(host: &Small, pattern: &Small) -> bool {
    fn extend(host: &Small, pattern: &Small, map: &mut Vec<usize>, used: u16) -> bool {
        let p = map.len();
        if p == pattern.adj.len() {
            return true;
        }
        for h in 0..host.adj.len() {
            if used & (1 << h) != 0 {
                continue;
            }
            if host.adj[h].count_ones() < pattern.adj[p].count_ones() {
                continue;
            }
            let ok = (0..p).all(|q| !pattern.has(p, q) || host.has(h, map[q]));
            if ok {
                map.push(h);
                if extend(host, pattern, map, used | (1 << h)) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    host.adj.len() >= pattern.adj.len() && host.edges() >= pattern.edges() && extend(host, pattern, &mut Vec::new(), 0)
}

/// Minor test by exhaustive contraction: `pattern` is a minor of `host` iff
/// it is a subgraph of some graph obtained from `host` by contracting edges
/// (vertex and edge deletions are absorbed by the subgraph test).
pub fn brute_force_minor(host: &Graph, pattern: &Graph) -> bool {
    fn go(g: &Small, pattern: &Small, memo: &mut HashMap<Small, bool>) -> bool {
        if let Some(&r) = memo.get(g) {
            return r;
        }
        let r = if g.adj.len() < pattern.adj.len() || g.edges() < pattern.edges() {
            false
        } else if is_subgraph(g, pattern) {
            true
        } else {
            let n = g.adj.len();
            let mut found = false;
            'outer: for u in 0..n {
                for v in u + 1..n {
                    if g.has(u, v) {
                        if go(&g.contract(u, v), pattern, memo) {
                            found = true;
                            break 'outer;
                        }
                    }
                }
            }
            found
        };
        memo.insert(g.clone(), r);
        r
    }
    let h = Small::from_graph(host);
    go(&h, &Small::from_graph(pattern), &mut HashMap::new())
}

/// Vertex connectivity by trying every vertex subset in order of size.
pub fn brute_force_connectivity(g: &Graph) -> usize {
    let n = g.n();
    for k in 0..n.saturating_sub(1) {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let removed: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            if !g.is_connected_without(&removed) {
                return k;
            }
        }
    }
    n.saturating_sub(1)
}

fn det3(a: Point3, b: Point3, c: Point3) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn volume(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    let s = |x: Point3| [x[0] - a[0], x[1] - a[1], x[2] - a[2]];
    det3(s(b), s(c), s(d)) / 6.0
}

/// Smallest barycentric coordinate of `p` in `tet`, as sub-volume ratios.
pub fn min_barycentric(tet: [Point3; 4], p: Point3) -> f64 {
    let [a, b, c, d] = tet;
    let total = volume(a, b, c, d);
    [
        volume(p, b, c, d),
        volume(a, p, c, d),
        volume(a, b, p, d),
        volume(a, b, c, p),
    ]
    .iter()
    .map(|v| v / total)
    .fold(f64::INFINITY, f64::min)
}

/// Number of tets whose barycentric coordinates of `p` all exceed `eps`.
pub fn count_containing(tets: &[[Point3; 4]], p: Point3, eps: f64) -> usize {
    tets.iter().filter(|t| min_barycentric(**t, p) > eps).count()
}
