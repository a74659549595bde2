//! The Petersen family, generated as the ΔY / YΔ closure of K6.

use crate::graph::Graph;

/// Replaces triangle `(a, b, c)` by a new vertex joined to `a`, `b`, `c`.
pub fn delta_y(g: &Graph, [a, b, c]: [usize; 3]) -> Graph {
    let tri = |u: usize, v: usize| {
        let s = [a, b, c];
        s.contains(&u) && s.contains(&v)
    };
    let n = g.n();
    let mut h = Graph::from_edges(n + 1, g.edges().filter(|&(u, v)| !tri(u, v)));
    for x in [a, b, c] {
        h.add_edge(x, n);
    }
    h
}

/// Replaces a degree-3 vertex `w` by a triangle on its neighbors.
pub fn y_delta(g: &Graph, w: usize) -> Graph {
    assert_eq!(g.degree(w), 3, "YΔ needs a degree-3 vertex");
    let relabel = |v: usize| if v > w { v - 1 } else { v };
    let mut h = Graph::from_edges(
        g.n() - 1,
        g.edges().filter(|&(u, v)| u != w && v != w).map(|(u, v)| (relabel(u), relabel(v))),
    );
    let ns: Vec<usize> = g.neighbors(w).iter().map(|&v| relabel(v)).collect();
    h.add_edge(ns[0], ns[1]);
    h.add_edge(ns[1], ns[2]);
    h.add_edge(ns[0], ns[2]);
    h
}

/// Backtracking isomorphism test with degree filtering; intended for small graphs.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    fn extend(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = map.len();
        if v == g.n() {
            return true;
        }
        for w in 0..h.n() {
            if used[w] || g.degree(v) != h.degree(w) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], w)) {
                used[w] = true;
                map.push(w);
                if extend(g, h, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(g, h, &mut Vec::with_capacity(g.n()), &mut vec![false; h.n()])
}

fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for (a, b) in g.edges() {
        for &c in g.neighbors(b) {
            if c > b && g.has_edge(a, c) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// The seven graphs of the Petersen family with conventional names.
pub fn petersen_family() -> Vec<(&'static str, Graph)> {
    let mut family: Vec<Graph> = vec![Graph::complete(6)];
    let mut i = 0;
    while i < family.len() {
        let g = family[i].clone();
        let mut next: Vec<Graph> = triangles(&g).into_iter().map(|t| delta_y(&g, t)).collect();
        for w in 0..g.n() {
            let ns = g.neighbors(w);
            if ns.len() == 3
                && !g.has_edge(ns[0], ns[1])
                && !g.has_edge(ns[1], ns[2])
                && !g.has_edge(ns[0], ns[2])
            {
                next.push(y_delta(&g, w));
            }
        }
        for h in next {
            if !family.iter().any(|f| is_isomorphic(f, &h)) {
                family.push(h);
            }
        }
        i += 1;
    }
    let k331 = Graph::complete_multipartite(&[3, 3, 1]);
    let k44e = {
        let full = Graph::complete_multipartite(&[4, 4]);
        Graph::from_edges(8, full.edges().filter(|&e| e != (0, 4)))
    };
    let mut named: Vec<(&'static str, Graph)> = family
        .into_iter()
        .map(|g| {
            let name = match g.n() {
                6 => "K6",
                7 if is_isomorphic(&g, &k331) => "K3,3,1",
                7 => "P7",
                8 if is_isomorphic(&g, &k44e) => "K4,4-e",
                8 => "P8",
                9 => "P9",
                _ if is_isomorphic(&g, &Graph::petersen()) => "Petersen",
                _ => "unknown",
            };
            (name, g)
        })
        .collect();
    named.sort_by_key(|(name, g)| (g.n(), *name));
    named
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_has_seven_members_with_fifteen_edges() {
        let fam = petersen_family();
        let names: Vec<&str> = fam.iter().map(|(n, _)| *n).collect();
        assert_eq!(names, vec!["K6", "K3,3,1", "P7", "K4,4-e", "P8", "P9", "Petersen"]);
        assert!(fam.iter().all(|(_, g)| g.edge_count() == 15));
    }

    #[test]
    fn delta_y_then_y_delta_round_trips() {
        let k6 = Graph::complete(6);
        let p7 = delta_y(&k6, [0, 1, 2]);
        assert_eq!((p7.n(), p7.edge_count()), (7, 15));
        assert!(is_isomorphic(&y_delta(&p7, 6), &k6));
    }

    #[test]
    fn isomorphism_distinguishes_relabelings() {
        let c5 = Graph::cycle(5);
        let star_like = Graph::from_edges(5, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]);
        assert!(is_isomorphic(&c5, &star_like));
        let path = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(!is_isomorphic(&c5, &path));
    }
}
