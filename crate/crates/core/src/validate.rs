//! Combinatorial hypotheses of the tetrahedral Tutte theorem, collected into
//! a [`ValidationReport`].

use serde::Serialize;

use crate::complex::{Complex, FaceKey};
use crate::connectivity::{is_k_connected, vertex_connectivity};
use crate::graph::Graph;
use crate::mesh::VertexId;
use crate::minors::{Answer, LinklessCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Partial,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Witness {
    Faces { faces: Vec<FaceKey> },
    VertexCut { vertices: Vec<VertexId> },
    Vertices { vertices: Vec<VertexId> },
    Ears { tets: Vec<usize>, low_degree: Vec<VertexId> },
    Minor { pattern: String, model: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, status: Status, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            status,
            witness: None,
            detail: detail.into(),
        }
    }

    fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }
}

pub const BALL_TOPOLOGY: &str = "ball_topology";
pub const BOUNDARY_TRIANGLES: &str = "boundary_triangles";
pub const FOUR_CONNECTED: &str = "four_connected";
pub const LINK_THREE_CONNECTED: &str = "link_three_connected";
pub const NO_EARS_MIN_DEGREE: &str = "no_ears_min_degree";
pub const NO_K6_K331_MINOR: &str = "no_k6_k331_minor";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub verdict: Status,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.name)
            .collect()
    }
}

/// Euler characteristics and connectivity. These are necessary conditions for
/// a ball; simple connectivity itself is not certified.
pub fn check_ball_topology(complex: &Complex) -> CheckResult {
    let e = complex.euler_check();
    let detail = format!(
        "chi={} boundary_chi={} connected={} boundary_connected={} (necessary conditions only)",
        e.chi_complex, e.chi_boundary, e.complex_connected, e.boundary_connected
    );
    let status = if e.is_ball_candidate { Status::Pass } else { Status::Fail };
    CheckResult::new(BALL_TOPOLOGY, status, detail)
}

/// Every face spanned by three boundary vertices must itself be a boundary face.
pub fn check_boundary_triangle_condition(complex: &Complex) -> CheckResult {
    let bad: Vec<FaceKey> = complex
        .interior_faces()
        .map(|(f, _)| f)
        .filter(|f| f.iter().all(|&v| complex.is_boundary_vertex(v)))
        .collect();
    if bad.is_empty() {
        CheckResult::new(BOUNDARY_TRIANGLES, Status::Pass, "no interior face on three boundary vertices")
    } else {
        CheckResult::new(
            BOUNDARY_TRIANGLES,
            Status::Fail,
            format!("{} interior face(s) span only boundary vertices", bad.len()),
        )
        .with_witness(Witness::Faces { faces: bad })
    }
}

pub fn check_four_connected(graph: &Graph) -> CheckResult {
    if graph.n() < 5 {
        return CheckResult::new(
            FOUR_CONNECTED,
            Status::Fail,
            format!("graph has {} vertices; 4-connectivity needs at least 5", graph.n()),
        );
    }
    let c = vertex_connectivity(graph);
    let detail = format!("vertex connectivity {}", c.kappa);
    if c.kappa >= 4 {
        CheckResult::new(FOUR_CONNECTED, Status::Pass, detail)
    } else {
        CheckResult::new(FOUR_CONNECTED, Status::Fail, detail).with_witness(Witness::VertexCut {
            vertices: c.cut.into_iter().map(VertexId).collect(),
        })
    }
}

/// Vertices whose link graph is not 3-connected.
pub fn deficient_links(complex: &Complex) -> Vec<VertexId> {
    (0..complex.n_vertices())
        .map(VertexId)
        .filter(|&v| !complex.vertex_tets(v).is_empty())
        .filter(|&v| !is_k_connected(&complex.vertex_link(v).to_graph().0, 3))
        .collect()
}

pub fn check_link_connectivity(complex: &Complex) -> CheckResult {
    let bad = deficient_links(complex);
    if bad.is_empty() {
        CheckResult::new(LINK_THREE_CONNECTED, Status::Pass, "every vertex link is 3-connected")
    } else {
        CheckResult::new(
            LINK_THREE_CONNECTED,
            Status::Fail,
            format!("{} vertex link(s) are not 3-connected", bad.len()),
        )
        .with_witness(Witness::Vertices { vertices: bad })
    }
}

pub fn check_no_ears_and_degree(complex: &Complex) -> CheckResult {
    if complex.interior_vertices().is_empty() {
        return CheckResult::new(NO_EARS_MIN_DEGREE, Status::Skipped, "vacuous: no interior vertices");
    }
    let ears: Vec<usize> = (0..complex.n_tets())
        .filter(|&t| complex.boundary_face_count(t) >= 3)
        .collect();
    let graph = complex.graph();
    let low: Vec<VertexId> = (0..graph.n())
        .filter(|&v| graph.degree(v) < 4)
        .map(VertexId)
        .collect();
    if ears.is_empty() && low.is_empty() {
        CheckResult::new(NO_EARS_MIN_DEGREE, Status::Pass, "no ears; every vertex has degree >= 4")
    } else {
        CheckResult::new(
            NO_EARS_MIN_DEGREE,
            Status::Fail,
            format!("{} ear tet(s), {} vertex(es) of degree < 4", ears.len(), low.len()),
        )
        .with_witness(Witness::Ears {
            tets: ears,
            low_degree: low,
        })
    }
}

pub fn check_minor_exclusion(minors: Option<&LinklessCheck>) -> CheckResult {
    let Some(m) = minors else {
        return CheckResult::new(NO_K6_K331_MINOR, Status::Skipped, "minor search not run");
    };
    let detail = format!(
        "K6: {:?} ({} nodes), K3,3,1: {:?} ({} nodes)",
        m.k6.answer, m.k6.nodes_explored, m.k331.answer, m.k331.nodes_explored
    );
    let found = [("K6", &m.k6), ("K3,3,1", &m.k331)]
        .into_iter()
        .find(|(_, r)| r.answer == Answer::Yes);
    match (found, m.passed()) {
        (Some((name, r)), _) => CheckResult::new(NO_K6_K331_MINOR, Status::Fail, detail).with_witness(
            Witness::Minor {
                pattern: name.to_string(),
                model: r.model.clone().unwrap_or_default(),
            },
        ),
        (None, Some(true)) => CheckResult::new(NO_K6_K331_MINOR, Status::Pass, detail),
        _ => CheckResult::new(NO_K6_K331_MINOR, Status::Partial, detail),
    }
}

/// Runs every combinatorial check. The verdict is `fail` if any check fails,
/// `partial` if none fails but one is inconclusive, `pass` otherwise.
pub fn validate_all(complex: &Complex, minors: Option<&LinklessCheck>) -> ValidationReport {
    let checks = vec![
        check_ball_topology(complex),
        check_boundary_triangle_condition(complex),
        check_four_connected(&complex.graph()),
        check_link_connectivity(complex),
        check_no_ears_and_degree(complex),
        check_minor_exclusion(minors),
    ];
    let verdict = if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Partial) {
        Status::Partial
    } else {
        Status::Pass
    };
    ValidationReport { verdict, checks }
}
