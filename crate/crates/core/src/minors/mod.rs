//! Minor testing for the linkless-embedding obstructions K6 and K3,3,1,
//! plus the four-clique counting bound.

mod cliques;
mod petersen;
mod search;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use search::{BranchSetSearch, Outcome};

pub use cliques::{count_four_cliques, four_clique_bound_check, FourCliqueBound};
pub use petersen::{delta_y, is_isomorphic, petersen_family, y_delta};

/// Default search budget in explored nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorQueryResult {
    pub answer: Answer,
    /// Branch set (host vertices) of each pattern vertex when `answer` is yes.
    pub model: Option<Vec<Vec<usize>>>,
    pub nodes_explored: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("model has {got} branch sets for a pattern on {expected} vertices")]
    WrongArity { got: usize, expected: usize },
    #[error("branch set {0} is empty")]
    EmptySet(usize),
    #[error("host vertex {vertex} out of range")]
    OutOfRange { vertex: usize },
    #[error("host vertex {vertex} appears in more than one branch set")]
    Overlap { vertex: usize },
    #[error("branch set {0} is not connected")]
    Disconnected(usize),
    #[error("pattern edge ({0}, {1}) has no host edge between its branch sets")]
    MissingEdge(usize, usize),
}

/// Checks that `model` is a minor model of `pattern` in `host`: disjoint,
/// non-empty, connected branch sets with a host edge for every pattern edge.
pub fn verify_model(host: &Graph, pattern: &Graph, model: &[Vec<usize>]) -> Result<(), ModelError> {
    if model.len() != pattern.n() {
        return Err(ModelError::WrongArity {
            got: model.len(),
            expected: pattern.n(),
        });
    }
    let mut owner = vec![None; host.n()];
    for (p, set) in model.iter().enumerate() {
        if set.is_empty() {
            return Err(ModelError::EmptySet(p));
        }
        for &h in set {
            if h >= host.n() {
                return Err(ModelError::OutOfRange { vertex: h });
            }
            if owner[h].replace(p).is_some() {
                return Err(ModelError::Overlap { vertex: h });
            }
        }
    }
    for (p, set) in model.iter().enumerate() {
        let mut seen = vec![set[0]];
        let mut stack = vec![set[0]];
        while let Some(h) = stack.pop() {
            for &w in host.neighbors(h) {
                if owner[w] == Some(p) && !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        if seen.len() != set.len() {
            return Err(ModelError::Disconnected(p));
        }
    }
    for (p, q) in pattern.edges() {
        let joined = model[p]
            .iter()
            .any(|&h| host.neighbors(h).iter().any(|&w| owner[w] == Some(q)));
        if !joined {
            return Err(ModelError::MissingEdge(p, q));
        }
    }
    Ok(())
}

/// Decides whether `pattern` is a minor of `host` within `budget` search nodes.
pub fn has_minor(host: &Graph, pattern: &Graph, budget: u64) -> MinorQueryResult {
    assert!(budget > 0, "budget must be positive");
    assert!(pattern.is_connected(), "pattern must be connected");
    let no = |nodes| MinorQueryResult {
        answer: Answer::No,
        model: None,
        nodes_explored: nodes,
    };
    if host.n() < pattern.n() || host.edge_count() < pattern.edge_count() {
        return no(0);
    }
    let mut search = BranchSetSearch::new(host, pattern, budget);
    let outcome = search.run();
    let nodes = search.nodes.min(budget);
    match outcome {
        Outcome::Found(model) => {
            debug_assert_eq!(verify_model(host, pattern, &model), Ok(()));
            MinorQueryResult {
                answer: Answer::Yes,
                model: Some(model),
                nodes_explored: nodes,
            }
        }
        Outcome::Exhausted => no(nodes),
        Outcome::OutOfBudget => MinorQueryResult {
            answer: Answer::Unknown,
            model: None,
            nodes_explored: nodes,
        },
    }
}

pub fn k6() -> Graph {
    Graph::complete(6)
}

/// Complete tripartite graph with parts of sizes 3, 3 and 1.
pub fn k331() -> Graph {
    Graph::complete_multipartite(&[3, 3, 1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinklessCheck {
    pub k6: MinorQueryResult,
    pub k331: MinorQueryResult,
}

impl LinklessCheck {
    /// `Some(true)` if both minors are excluded, `Some(false)` if either is
    /// present, `None` if a query ran out of budget.
    pub fn passed(&self) -> Option<bool> {
        match (self.k6.answer, self.k331.answer) {
            (Answer::Yes, _) | (_, Answer::Yes) => Some(false),
            (Answer::No, Answer::No) => Some(true),
            _ => None,
        }
    }
}

pub fn linkless_exclusion_check(graph: &Graph, budget: u64) -> LinklessCheck {
    LinklessCheck {
        k6: has_minor(graph, &k6(), budget),
        k331: has_minor(graph, &k331(), budget),
    }
}

/// Queries every member of the Petersen family.
pub fn petersen_family_check(graph: &Graph, budget: u64) -> Vec<(&'static str, MinorQueryResult)> {
    petersen_family()
        .into_iter()
        .map(|(name, pattern)| (name, has_minor(graph, &pattern, budget)))
        .collect()
}
