//! Convex-combination embedding: boundary placement, weight assembly and the
//! linear solve for interior positions.
//!
//! Each interior vertex `v` is placed at `x(v) = Σ_w b(v,w) x(w)` over its
//! graph neighbors `w`, with `b(v,w) > 0` and `Σ_w b(v,w) = 1`. Splitting the
//! neighbors into interior (I) and boundary (B) vertices gives, per axis,
//! `(I − B_II) X_I = B_IB X_B`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Complex, FaceKey};
use crate::geom::{self, Tolerance};
use crate::mesh::{Point3, VertexId};

/// Smallest admissible weight.
pub const MIN_WEIGHT: f64 = 1e-9;
/// Row-sum tolerance for the assembled matrix.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Row-sum tolerance accepted from user-supplied weights before renormalization.
pub const USER_ROW_SUM_TOL: f64 = 1e-9;
/// Required relative Eq. residual of a solve.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Interior count above which the iterative solver is used.
pub const DENSE_LIMIT: usize = 2000;
const PIVOT_MIN: f64 = 1e-14;
const GS_TOL: f64 = 1e-12;
const GS_MAX_SWEEPS: usize = 1_000_000;
const MAX_RESAMPLES: usize = 100_000;
const ANGLE_MIN: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("boundary coordinates are required")]
    MissingCoordinates,
    #[error("boundary face {face:?} has zero area")]
    DegenerateFace { face: FaceKey },
    #[error("boundary is not strictly convex: vertex {vertex} is not strictly inside the plane of face {face:?}")]
    NotConvex { face: FaceKey, vertex: VertexId },
    #[error("boundary vertex {vertex} coincides with the boundary centroid")]
    NotStarShaped { vertex: VertexId },
    #[error("boundary vertices {a} and {b} project to the same direction")]
    ProjectionCollision { a: VertexId, b: VertexId },
    #[error("projected boundary is not strictly convex at face {face:?} (vertex {vertex})")]
    NotConvexAfterProjection { face: FaceKey, vertex: VertexId },
    #[error("bad user weights for vertex {vertex}: {reason}")]
    BadUserWeights { vertex: VertexId, reason: String },
    #[error("could not sample admissible weights for vertex {vertex}")]
    WeightSampling { vertex: VertexId },
    #[error("mesh graph is not connected")]
    DisconnectedGraph,
    #[error("linear system is singular (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },
    #[error("iterative solve did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityCheck {
    pub ok: bool,
    /// Smallest inner distance of a non-incident boundary vertex to a face
    /// plane, relative to the bounding-box diagonal (negative when violated).
    pub min_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(FaceKey, VertexId)>,
}

/// Strict convexity of the boundary surface under `coords` (indexed by vertex id;
/// only boundary entries are read).
pub fn check_strict_convexity(
    complex: &Complex,
    coords: &[Point3],
    tol: &Tolerance,
) -> Result<ConvexityCheck, EmbedError> {
    let bverts: Vec<VertexId> = complex.boundary_vertices().iter().copied().collect();
    let pts: Vec<Point3> = bverts.iter().map(|v| coords[v.0]).collect();
    let center = geom::centroid(&pts);
    let diag = geom::bbox_diagonal(&pts);
    let mut worst: Option<(f64, FaceKey, VertexId)> = None;
    for face in complex.boundary_faces() {
        let [a, b, c] = face.map(|v| coords[v.0]);
        let n = geom::cross(geom::sub(b, a), geom::sub(c, a));
        let len = geom::norm(n);
        if len <= 2.0 * tol.area(diag) {
            return Err(EmbedError::DegenerateFace { face: *face });
        }
        let mut n = geom::scale(n, 1.0 / len);
        if geom::dot(n, geom::sub(center, a)) > 0.0 {
            n = geom::scale(n, -1.0);
        }
        for (v, p) in bverts.iter().zip(&pts) {
            if face.contains(v) {
                continue;
            }
            let inner = -geom::dot(n, geom::sub(*p, a));
            if worst.is_none_or(|(m, _, _)| inner < m) {
                worst = Some((inner, *face, *v));
            }
        }
    }
    let (margin, face, vertex) = worst.ok_or(EmbedError::Internal("boundary has no faces".into()))?;
    let ok = margin > tol.length(diag);
    Ok(ConvexityCheck {
        ok,
        min_margin: margin / diag,
        witness: (!ok).then_some((face, vertex)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementStrategy {
    AsGiven,
    SphereNormalize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryPlacement {
    pub strategy: PlacementStrategy,
    pub coords: BTreeMap<VertexId, Point3>,
}

/// Fixes boundary positions. `input` is indexed by vertex id.
///
/// `SphereNormalize` projects each boundary vertex radially onto the unit
/// sphere around the arithmetic mean of the boundary vertices.
pub fn place_boundary(
    complex: &Complex,
    strategy: PlacementStrategy,
    input: &[Point3],
    tol: &Tolerance,
) -> Result<BoundaryPlacement, EmbedError> {
    if input.len() != complex.n_vertices() {
        return Err(EmbedError::MissingCoordinates);
    }
    let mut placed: Vec<Point3> = input.to_vec();
    if strategy == PlacementStrategy::SphereNormalize {
        let center = geom::centroid(complex.boundary_vertices().iter().map(|v| &input[v.0]));
        let mut dirs: Vec<(VertexId, Point3)> = Vec::new();
        for &v in complex.boundary_vertices() {
            let d = geom::sub(input[v.0], center);
            let len = geom::norm(d);
            if len == 0.0 {
                return Err(EmbedError::NotStarShaped { vertex: v });
            }
            let u = geom::scale(d, 1.0 / len);
            if let Some((w, _)) = dirs.iter().find(|(_, e)| angle(u, *e) < ANGLE_MIN) {
                return Err(EmbedError::ProjectionCollision { a: *w, b: v });
            }
            dirs.push((v, u));
            placed[v.0] = geom::add(center, u);
        }
    }
    let check = check_strict_convexity(complex, &placed, tol)?;
    if let Some((face, vertex)) = check.witness {
        return Err(match strategy {
            PlacementStrategy::AsGiven => EmbedError::NotConvex { face, vertex },
            PlacementStrategy::SphereNormalize => EmbedError::NotConvexAfterProjection { face, vertex },
        });
    }
    Ok(BoundaryPlacement {
        strategy,
        coords: complex
            .boundary_vertices()
            .iter()
            .map(|&v| (v, placed[v.0]))
            .collect(),
    })
}

fn angle(u: Point3, v: Point3) -> f64 {
    // atan2 form stays accurate for nearly parallel unit vectors
    geom::norm(geom::cross(u, v)).atan2(geom::dot(u, v))
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightScheme {
    Uniform,
    /// Independent Dirichlet(alpha) rows, reproducible from `seed`.
    Dirichlet { alpha: f64, seed: u64 },
    User(BTreeMap<VertexId, Vec<(VertexId, f64)>>),
}

/// Row-stochastic positive weights, one row per interior vertex covering
/// exactly its graph neighbors (ascending).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightMatrix {
    pub rows: BTreeMap<VertexId, Vec<(VertexId, f64)>>,
}

impl WeightMatrix {
    pub fn row(&self, v: VertexId) -> Option<&[(VertexId, f64)]> {
        self.rows.get(&v).map(Vec::as_slice)
    }

    pub fn weight(&self, v: VertexId, w: VertexId) -> Option<f64> {
        self.row(v)?.iter().find(|(u, _)| *u == w).map(|&(_, b)| b)
    }

    /// Checks support, positivity and row sums against `complex`.
    pub fn check(&self, complex: &Complex) -> Result<(), EmbedError> {
        let graph = complex.graph();
        let interior = complex.interior_vertices();
        if self.rows.len() != interior.len() {
            return Err(EmbedError::Internal("weight rows do not match interior vertices".into()));
        }
        for v in interior {
            let row = self.row(v).ok_or(EmbedError::Internal(format!("missing row {v}")))?;
            let support: Vec<usize> = row.iter().map(|(w, _)| w.0).collect();
            if support != graph.neighbors(v.0) {
                return Err(EmbedError::Internal(format!("row {v} has wrong support")));
            }
            if row.iter().any(|&(_, b)| !(b >= MIN_WEIGHT)) {
                return Err(EmbedError::Internal(format!("row {v} has a weight below {MIN_WEIGHT}")));
            }
            let sum: f64 = row.iter().map(|&(_, b)| b).sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(EmbedError::Internal(format!("row {v} sums to {sum}")));
            }
        }
        Ok(())
    }
}

pub fn assemble_weights(complex: &Complex, scheme: &WeightScheme) -> Result<WeightMatrix, EmbedError> {
    let graph = complex.graph();
    let interior = complex.interior_vertices();
    let mut rows = BTreeMap::new();
    match scheme {
        WeightScheme::Uniform => {
            for v in interior {
                let ns = graph.neighbors(v.0);
                let b = 1.0 / ns.len() as f64;
                rows.insert(v, ns.iter().map(|&w| (VertexId(w), b)).collect());
            }
        }
        WeightScheme::Dirichlet { alpha, seed } => {
            let gamma = Gamma::new(*alpha, 1.0)
                .map_err(|e| EmbedError::Internal(format!("invalid Dirichlet concentration: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for v in interior {
                let ns = graph.neighbors(v.0);
                let mut attempt = 0;
                let row = loop {
                    attempt += 1;
                    if attempt > MAX_RESAMPLES {
                        return Err(EmbedError::WeightSampling { vertex: v });
                    }
                    let draws: Vec<f64> = ns.iter().map(|_| gamma.sample(&mut rng)).collect();
                    let sum: f64 = draws.iter().sum();
                    if !(sum > 0.0) || !sum.is_finite() {
                        continue;
                    }
                    let row: Vec<f64> = draws.iter().map(|g| g / sum).collect();
                    if row.iter().all(|&b| b >= MIN_WEIGHT) {
                        break row;
                    }
                };
                rows.insert(v, ns.iter().map(|&w| VertexId(w)).zip(row).collect());
            }
        }
        WeightScheme::User(table) => {
            for v in interior {
                let bad = |reason: String| EmbedError::BadUserWeights { vertex: v, reason };
                let given = table.get(&v).ok_or_else(|| bad("row missing".into()))?;
                let mut row = given.clone();
                row.sort_by_key(|(w, _)| *w);
                let support: Vec<usize> = row.iter().map(|(w, _)| w.0).collect();
                if support != graph.neighbors(v.0) {
                    return Err(bad(format!(
                        "support {support:?} differs from neighbors {:?}",
                        graph.neighbors(v.0)
                    )));
                }
                if let Some(&(w, b)) = row.iter().find(|&&(_, b)| !(b >= MIN_WEIGHT)) {
                    return Err(bad(format!("weight {b} on neighbor {w} is below {MIN_WEIGHT}")));
                }
                let sum: f64 = row.iter().map(|&(_, b)| b).sum();
                if (sum - 1.0).abs() > USER_ROW_SUM_TOL {
                    return Err(bad(format!("row sums to {sum}")));
                }
                for (_, b) in &mut row {
                    *b /= sum;
                }
                rows.insert(v, row);
            }
        }
    }
    Ok(WeightMatrix { rows })
}

/// A complex with a full coordinate assignment.
#[derive(Clone, Debug)]
pub struct RealizedMesh {
    /// Oriented so that boundary faces point outward under `coords`.
    pub complex: Complex,
    pub coords: Vec<Point3>,
    /// Relative max-norm residual of the convex-combination equations, when
    /// the realization came from a solve.
    pub residual: Option<f64>,
    /// True when there were no interior vertices to solve for.
    pub vacuous: bool,
}

impl RealizedMesh {
    /// Wraps given coordinates without solving (e.g. a realization read from disk).
    pub fn from_coords(mut complex: Complex, coords: Vec<Point3>) -> Self {
        complex.orient_to(&coords);
        RealizedMesh {
            complex,
            coords,
            residual: None,
            vacuous: false,
        }
    }

    pub fn diagonal(&self) -> f64 {
        geom::bbox_diagonal(&self.coords)
    }

    pub fn to_mesh(&self) -> crate::TetMesh {
        self.complex
            .mesh()
            .with_coords(self.coords.clone())
            .expect("realized coordinates are finite and complete")
    }
}

/// Relative max-norm residual `max |x(v) − Σ b(v,w) x(w)| / d`, `d` the
/// bounding-box diagonal of the boundary.
pub fn eq_residual(complex: &Complex, weights: &WeightMatrix, coords: &[Point3]) -> f64 {
    let diag = geom::bbox_diagonal(complex.boundary_vertices().iter().map(|v| &coords[v.0]));
    let mut worst: f64 = 0.0;
    for (v, row) in &weights.rows {
        let mut avg = [0.0; 3];
        for &(w, b) in row {
            avg = geom::add(avg, geom::scale(coords[w.0], b));
        }
        let r = geom::sub(coords[v.0], avg);
        worst = worst.max(r.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    }
    worst / diag
}

/// Solves for interior positions with the boundary fixed by `placement`.
pub fn solve_positions(
    complex: &Complex,
    weights: &WeightMatrix,
    placement: &BoundaryPlacement,
) -> Result<RealizedMesh, EmbedError> {
    if !complex.graph().is_connected() {
        return Err(EmbedError::DisconnectedGraph);
    }
    weights.check(complex)?;
    let interior = complex.interior_vertices();
    let mut coords = vec![[0.0; 3]; complex.n_vertices()];
    for &v in complex.boundary_vertices() {
        coords[v.0] = *placement.coords.get(&v).ok_or(EmbedError::MissingCoordinates)?;
    }
    let mut oriented = complex.clone();
    oriented.orient_to(&coords);
    if interior.is_empty() {
        return Ok(RealizedMesh {
            complex: oriented,
            coords,
            residual: Some(0.0),
            vacuous: true,
        });
    }

    let slot: BTreeMap<VertexId, usize> = interior.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = interior.len();
    // rhs = B_IB X_B, off-diagonal interior couplings kept per row
    let mut rhs = vec![[0.0; 3]; m];
    let mut couplings: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for (i, v) in interior.iter().enumerate() {
        for &(w, b) in weights.row(*v).expect("checked") {
            match slot.get(&w) {
                Some(&j) => couplings[i].push((j, b)),
                None => rhs[i] = geom::add(rhs[i], geom::scale(coords[w.0], b)),
            }
        }
    }
    let solution = if m <= DENSE_LIMIT {
        solve_dense(&couplings, &rhs)?
    } else {
        solve_gauss_seidel(&couplings, &rhs, &coords, complex)?
    };
    for (i, v) in interior.iter().enumerate() {
        coords[v.0] = solution[i];
    }

    let residual = eq_residual(complex, weights, &coords);
    if !(residual <= RESIDUAL_TOL) {
        return Err(EmbedError::NotConverged { residual });
    }
    check_local_hulls(weights, &coords, complex)?;
    Ok(RealizedMesh {
        complex: oriented,
        coords,
        residual: Some(residual),
        vacuous: false,
    })
}

fn solve_dense(couplings: &[Vec<(usize, f64)>], rhs: &[Point3]) -> Result<Vec<Point3>, EmbedError> {
    let m = rhs.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (i, row) in couplings.iter().enumerate() {
        for &(j, b) in row {
            a[(i, j)] -= b;
        }
    }
    let b = DMatrix::from_fn(m, 3, |i, k| rhs[i][k]);
    let lu = a.lu();
    let pivot = lu.u().diagonal().iter().fold(f64::INFINITY, |p, x| p.min(x.abs()));
    if !(pivot > PIVOT_MIN) {
        return Err(EmbedError::SingularSystem { pivot });
    }
    let x = lu.solve(&b).ok_or(EmbedError::SingularSystem { pivot })?;
    Ok((0..m).map(|i| [x[(i, 0)], x[(i, 1)], x[(i, 2)]]).collect())
}

fn solve_gauss_seidel(
    couplings: &[Vec<(usize, f64)>],
    rhs: &[Point3],
    coords: &[Point3],
    complex: &Complex,
) -> Result<Vec<Point3>, EmbedError> {
    let boundary: Vec<&Point3> = complex.boundary_vertices().iter().map(|v| &coords[v.0]).collect();
    let diag = geom::bbox_diagonal(boundary.iter().copied());
    let start = geom::centroid(boundary);
    let mut x = vec![start; rhs.len()];
    let mut residual = f64::INFINITY;
    for _ in 0..GS_MAX_SWEEPS {
        for i in 0..x.len() {
            let mut next = rhs[i];
            for &(j, b) in &couplings[i] {
                next = geom::add(next, geom::scale(x[j], b));
            }
            x[i] = next;
        }
        residual = 0.0;
        for i in 0..x.len() {
            let mut r = rhs[i];
            for &(j, b) in &couplings[i] {
                r = geom::add(r, geom::scale(x[j], b));
            }
            let d = geom::sub(x[i], r);
            residual = d.iter().fold(residual, |m, v| m.max(v.abs()));
        }
        residual /= diag;
        if residual <= GS_TOL {
            return Ok(x);
        }
    }
    Err(EmbedError::NotConverged { residual })
}

/// Every interior vertex must lie within its neighbors' per-axis range (with
/// `1e-12·d` slack); positive weights make this hold for an exact solution.
fn check_local_hulls(weights: &WeightMatrix, coords: &[Point3], complex: &Complex) -> Result<(), EmbedError> {
    let diag = geom::bbox_diagonal(complex.boundary_vertices().iter().map(|v| &coords[v.0]));
    let slack = 1e-12 * diag;
    for (v, row) in &weights.rows {
        let x = coords[v.0];
        for k in 0..3 {
            let lo = row.iter().map(|(w, _)| coords[w.0][k]).fold(f64::INFINITY, f64::min);
            let hi = row.iter().map(|(w, _)| coords[w.0][k]).fold(f64::NEG_INFINITY, f64::max);
            if x[k] < lo - slack || x[k] > hi + slack {
                return Err(EmbedError::Internal(format!(
                    "vertex {v} leaves the hull of its neighbors on axis {k}"
                )));
            }
        }
    }
    Ok(())
}

/// Interior vertices (with axis) that are not strictly between the boundary
/// extremes along a coordinate axis.
pub fn maximum_principle_violations(realized: &RealizedMesh) -> Vec<(VertexId, usize)> {
    let c = &realized.complex;
    let Some((lo, hi)) = geom::bounds(c.boundary_vertices().iter().map(|v| &realized.coords[v.0])) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for v in c.interior_vertices() {
        let x = realized.coords[v.0];
        for k in 0..3 {
            if !(lo[k] < x[k] && x[k] < hi[k]) {
                out.push((v, k));
            }
        }
    }
    out
}

/// Uniform/Dirichlet weights, as-given boundary, and solve in one call.
pub fn embed_mesh(
    complex: &Complex,
    scheme: &WeightScheme,
    strategy: PlacementStrategy,
    tol: &Tolerance,
) -> Result<RealizedMesh, EmbedError> {
    let input = complex.mesh().coords().ok_or(EmbedError::MissingCoordinates)?;
    let placement = place_boundary(complex, strategy, input, tol)?;
    let weights = assemble_weights(complex, scheme)?;
    solve_positions(complex, &weights, &placement)
}
