//! Exact branch-set search for a minor model.
//!
//! Each pattern vertex `p` owns a connected set of host vertices whose
//! smallest element is its root. The search interleaves two moves:
//!
//! * root the next unrooted pattern vertex at some free host vertex;
//! * for an unrealized pattern edge `(p, q)`, pick a free host vertex `u`
//!   next to one of the two sets and branch on "`u` joins that set" versus
//!   "`u` never joins that set".
//!
//! The second move is a binary split of the solution space, so the search is
//! exhaustive. A node is pruned when two rooted pattern neighbors can no longer
//! be joined through vertices each is still allowed to absorb.

use crate::graph::Graph;

const FREE: usize = usize::MAX;

pub(crate) enum Outcome {
    Found(Vec<Vec<usize>>),
    Exhausted,
    OutOfBudget,
}

pub(crate) struct BranchSetSearch<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    pattern_edges: Vec<(usize, usize)>,
    /// Pattern vertices in rooting order.
    order: Vec<usize>,
    /// Previous vertex of the same twin class in rooting order.
    twin_prev: Vec<Option<usize>>,
    owner: Vec<usize>,
    /// Bitmask over pattern vertices that a host vertex may not join.
    forbid: Vec<u64>,
    sets: Vec<Vec<usize>>,
    root: Vec<usize>,
    pub(crate) nodes: u64,
    budget: u64,
}

impl<'a> BranchSetSearch<'a> {
    pub(crate) fn new(host: &'a Graph, pattern: &'a Graph, budget: u64) -> Self {
        let k = pattern.n();
        assert!(k <= 64, "patterns are limited to 64 vertices");
        let order = rooting_order(pattern);
        let mut twin_prev = vec![None; k];
        for (i, &p) in order.iter().enumerate() {
            twin_prev[p] = order[..i].iter().rev().copied().find(|&q| are_twins(pattern, p, q));
        }
        BranchSetSearch {
            host,
            pattern,
            pattern_edges: pattern.edges().collect(),
            order,
            twin_prev,
            owner: vec![FREE; host.n()],
            forbid: vec![0; host.n()],
            sets: vec![Vec::new(); k],
            root: vec![FREE; k],
            nodes: 0,
            budget,
        }
    }

    pub(crate) fn run(&mut self) -> Outcome {
        self.step()
    }

    fn allowed(&self, h: usize, p: usize) -> bool {
        self.owner[h] == FREE && self.forbid[h] & (1 << p) == 0 && h > self.root[p]
    }

    fn realized(&self, p: usize, q: usize) -> bool {
        self.sets[p]
            .iter()
            .any(|&h| self.host.neighbors(h).iter().any(|&w| self.owner[w] == q))
    }

    /// Host vertices in `S_p` or reachable from it through vertices `p` may absorb.
    fn reach(&self, p: usize) -> Vec<bool> {
        let mut mark = vec![false; self.host.n()];
        let mut stack = self.sets[p].clone();
        for &h in &stack {
            mark[h] = true;
        }
        while let Some(h) = stack.pop() {
            for &w in self.host.neighbors(h) {
                if !mark[w] && self.allowed(w, p) {
                    mark[w] = true;
                    stack.push(w);
                }
            }
        }
        mark
    }

    fn joinable(&self, reach_p: &[bool], reach_q: &[bool]) -> bool {
        (0..self.host.n()).any(|h| {
            reach_p[h] && (reach_q[h] || self.host.neighbors(h).iter().any(|&w| reach_q[w]))
        })
    }

    fn assign(&mut self, h: usize, p: usize) {
        self.owner[h] = p;
        self.sets[p].push(h);
    }

    fn unassign(&mut self, h: usize, p: usize) {
        self.owner[h] = FREE;
        let last = self.sets[p].pop();
        debug_assert_eq!(last, Some(h));
    }

    fn step(&mut self) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Outcome::OutOfBudget;
        }
        let k = self.pattern.n();
        let free = self.owner.iter().filter(|&&o| o == FREE).count();
        let unrooted = self.root.iter().filter(|&&r| r == FREE).count();
        if unrooted > free {
            return Outcome::Exhausted;
        }

        let reach: Vec<Option<Vec<bool>>> = (0..k)
            .map(|p| (self.root[p] != FREE).then(|| self.reach(p)))
            .collect();
        let mut open_edge = None;
        for &(p, q) in &self.pattern_edges {
            let (Some(rp), Some(rq)) = (&reach[p], &reach[q]) else {
                continue;
            };
            if self.realized(p, q) {
                continue;
            }
            if !self.joinable(rp, rq) {
                return Outcome::Exhausted;
            }
            if open_edge.is_none() {
                open_edge = Some((p, q));
            }
        }

        if let Some((p, q)) = open_edge {
            return self.grow(p, q);
        }
        match self.order.iter().copied().find(|&p| self.root[p] == FREE) {
            Some(p) => self.place_root(p),
            None => Outcome::Found(self.sets.clone()),
        }
    }

    fn place_root(&mut self, p: usize) -> Outcome {
        let min_root = self.twin_prev[p].map_or(0, |q| self.root[q] + 1);
        for h in min_root..self.host.n() {
            if self.owner[h] != FREE || self.forbid[h] & (1 << p) != 0 {
                continue;
            }
            if self.host.degree(h) == 0 && self.pattern.degree(p) > 0 {
                continue;
            }
            self.root[p] = h;
            self.assign(h, p);
            let out = self.step();
            self.unassign(h, p);
            self.root[p] = FREE;
            if !matches!(out, Outcome::Exhausted) {
                return out;
            }
        }
        Outcome::Exhausted
    }

    fn frontier_candidate(&self, p: usize) -> Option<usize> {
        self.sets[p]
            .iter()
            .flat_map(|&h| self.host.neighbors(h).iter().copied())
            .filter(|&w| self.allowed(w, p))
            .min_by_key(|&w| std::cmp::Reverse(self.host.degree(w)))
    }

    fn grow(&mut self, p: usize, q: usize) -> Outcome {
        let (side, u) = match self.frontier_candidate(p) {
            Some(u) => (p, u),
            None => match self.frontier_candidate(q) {
                Some(u) => (q, u),
                None => return Outcome::Exhausted,
            },
        };
        self.assign(u, side);
        let out = self.step();
        self.unassign(u, side);
        if !matches!(out, Outcome::Exhausted) {
            return out;
        }
        self.forbid[u] |= 1 << side;
        let out = self.step();
        self.forbid[u] &= !(1 << side);
        out
    }
}

fn are_twins(g: &Graph, p: usize, q: usize) -> bool {
    let strip = |a: usize, b: usize| -> Vec<usize> {
        g.neighbors(a).iter().copied().filter(|&x| x != b).collect()
    };
    strip(p, q) == strip(q, p)
}

/// Breadth-first order from a maximum-degree vertex, so each pattern vertex is
/// rooted next to already-placed neighbors.
fn rooting_order(pattern: &Graph) -> Vec<usize> {
    let k = pattern.n();
    let mut order = Vec::with_capacity(k);
    let mut seen = vec![false; k];
    while order.len() < k {
        let start = (0..k)
            .filter(|&v| !seen[v])
            .max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)))
            .expect("unvisited vertex");
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = pattern.neighbors(v).iter().copied().filter(|&w| !seen[w]).collect();
            next.sort_by_key(|&w| std::cmp::Reverse(pattern.degree(w)));
            for w in next {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}
