//! Independent certification of a realization: orientation, local face and
//! star conditions, and global injectivity by point containment counting.

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::FaceKey;
use crate::embed::RealizedMesh;
use crate::geom::{self, Tolerance};
use crate::mesh::{Point3, VertexId};

pub use crate::geom::signed_volume;

/// Embedding certificates require the volume identity gap below this.
pub const VOLUME_GAP_TOL: f64 = 1e-9;
const MAX_ATTEMPTS_PER_SAMPLE: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Embedded,
    Degenerate,
    Flipped,
    Overlapping,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrientationCheck {
    pub all_positive: bool,
    pub min_signed_volume: f64,
    /// Tets with signed volume at most the volume tolerance.
    pub witnesses: Vec<usize>,
    /// Subset of `witnesses` with clearly negative volume.
    pub flipped: Vec<usize>,
}

fn tet_coords(realized: &RealizedMesh, t: usize) -> [Point3; 4] {
    realized.complex.oriented_tets()[t].map(|v| realized.coords[v.0])
}

fn tet_volume(realized: &RealizedMesh, t: usize) -> f64 {
    let [a, b, c, d] = tet_coords(realized, t);
    signed_volume(a, b, c, d)
}

pub fn check_orientation(realized: &RealizedMesh, tol: &Tolerance) -> OrientationCheck {
    let eps = tol.volume(realized.diagonal());
    let vols: Vec<f64> = (0..realized.complex.n_tets()).map(|t| tet_volume(realized, t)).collect();
    let witnesses: Vec<usize> = (0..vols.len()).filter(|&t| vols[t] <= eps).collect();
    let flipped = witnesses.iter().copied().filter(|&t| vols[t] < -eps).collect();
    OrientationCheck {
        all_positive: witnesses.is_empty(),
        min_signed_volume: vols.iter().copied().fold(f64::INFINITY, f64::min),
        witnesses,
        flipped,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceSideCheck {
    pub ok: bool,
    /// Interior faces whose plane is undefined (area below tolerance).
    pub degenerate: Vec<FaceKey>,
    /// Interior faces whose two opposite vertices are not strictly on opposite sides.
    pub same_side: Vec<FaceKey>,
}

/// For every interior face, the two opposite vertices must lie strictly on
/// opposite sides of the face plane.
pub fn check_interior_face_sides(realized: &RealizedMesh, tol: &Tolerance) -> FaceSideCheck {
    let diag = realized.diagonal();
    let x = &realized.coords;
    let mut degenerate = Vec::new();
    let mut same_side = Vec::new();
    for (face, [u, l]) in realized.complex.interior_faces() {
        let [a, b, c] = face.map(|v| x[v.0]);
        let n = geom::cross(geom::sub(b, a), geom::sub(c, a));
        let len = geom::norm(n);
        if len <= 2.0 * tol.area(diag) {
            degenerate.push(face);
            continue;
        }
        let n = geom::scale(n, 1.0 / len);
        let du = geom::dot(n, geom::sub(x[u.0], a));
        let dl = geom::dot(n, geom::sub(x[l.0], a));
        let eps = tol.length(diag);
        if !(du * dl < 0.0 && du.abs() > eps && dl.abs() > eps) {
            same_side.push(face);
        }
    }
    FaceSideCheck {
        ok: degenerate.is_empty() && same_side.is_empty(),
        degenerate,
        same_side,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarCheck {
    pub ok: bool,
    /// Smallest singular value of a centered neighbor matrix over interior vertices.
    pub min_singular_value: f64,
    /// Shortest edge of the whole mesh.
    pub min_edge_length: f64,
    /// Interior vertices with a flat star or a too-short incident edge.
    pub witnesses: Vec<VertexId>,
}

pub fn check_star_nondegeneracy(realized: &RealizedMesh, tol: &Tolerance) -> StarCheck {
    let eps = tol.length(realized.diagonal());
    let x = &realized.coords;
    let graph = realized.complex.graph();
    let min_edge_length = graph
        .edges()
        .map(|(u, v)| geom::norm(geom::sub(x[u], x[v])))
        .fold(f64::INFINITY, f64::min);
    let mut min_sv = f64::INFINITY;
    let mut witnesses = Vec::new();
    for v in realized.complex.interior_vertices() {
        let ns = graph.neighbors(v.0);
        let mean = geom::centroid(ns.iter().map(|&w| &x[w]));
        let mut cov = Matrix3::zeros();
        for &w in ns {
            let d = Vector3::from(geom::sub(x[w], mean));
            cov += d * d.transpose();
        }
        // singular values of the n×3 matrix are square roots of the Gram eigenvalues
        let sv = cov.symmetric_eigenvalues().min().max(0.0).sqrt();
        min_sv = min_sv.min(sv);
        let short = ns.iter().any(|&w| geom::norm(geom::sub(x[w], x[v.0])) <= eps);
        if !(sv > eps) || short {
            witnesses.push(v);
        }
    }
    StarCheck {
        ok: witnesses.is_empty(),
        min_singular_value: min_sv,
        min_edge_length,
        witnesses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Random interior points in addition to the tet barycenters.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            samples: 1000,
            seed: crate::DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentCheck {
    pub ok: bool,
    pub samples_checked: usize,
    /// Candidates discarded for lying within tolerance of a face or the boundary.
    pub near_face: usize,
    /// Every checked sample with the number of tets strictly containing it.
    #[serde(skip)]
    pub counts: Vec<(Point3, usize)>,
}

/// Barycentric coordinates via a precomputed inverse of the edge matrix.
struct TetFrame {
    origin: Point3,
    inverse: Matrix3<f64>,
}

impl TetFrame {
    fn new([a, b, c, d]: [Point3; 4]) -> Option<Self> {
        let m = Matrix3::from_columns(&[
            Vector3::from(geom::sub(b, a)),
            Vector3::from(geom::sub(c, a)),
            Vector3::from(geom::sub(d, a)),
        ]);
        m.try_inverse().map(|inverse| TetFrame { origin: a, inverse })
    }

    fn min_barycentric(&self, p: Point3) -> f64 {
        let l = self.inverse * Vector3::from(geom::sub(p, self.origin));
        (1.0 - l.sum()).min(l.min())
    }
}

enum Sample {
    Count(usize),
    NearFace,
}

struct Counter<'a> {
    frames: Vec<Option<TetFrame>>,
    realized: &'a RealizedMesh,
    eps: f64,
}

impl Counter<'_> {
    fn classify(&self, p: Point3) -> Sample {
        let mut count = 0;
        for f in &self.frames {
            let Some(f) = f else { continue };
            let m = f.min_barycentric(p);
            if m > self.eps {
                count += 1;
            } else if m >= -self.eps {
                return Sample::NearFace;
            }
        }
        Sample::Count(count)
    }

    /// Winding number of the oriented boundary around `p` (1 inside, 0 outside).
    fn winding(&self, p: Point3) -> f64 {
        let x = &self.realized.coords;
        let mut total = 0.0;
        for [a, b, c] in self.realized.complex.boundary_oriented_faces() {
            let (a, b, c) = (geom::sub(x[a.0], p), geom::sub(x[b.0], p), geom::sub(x[c.0], p));
            let (la, lb, lc) = (geom::norm(a), geom::norm(b), geom::norm(c));
            let num = geom::triple(a, b, c);
            let den = la * lb * lc + geom::dot(a, b) * lc + geom::dot(b, c) * la + geom::dot(c, a) * lb;
            total += 2.0 * num.atan2(den);
        }
        total / (4.0 * std::f64::consts::PI)
    }
}

/// Counts, for the tet barycenters and `spec.samples` random interior points,
/// how many tets strictly contain each point. Passes when every count is one.
pub fn containment_certificate(realized: &RealizedMesh, spec: &SampleSpec, tol: &Tolerance) -> ContainmentCheck {
    let n_tets = realized.complex.n_tets();
    let counter = Counter {
        frames: (0..n_tets).map(|t| TetFrame::new(tet_coords(realized, t))).collect(),
        realized,
        eps: tol.eps_c,
    };
    let mut points: Vec<Point3> = (0..n_tets).map(|t| geom::centroid(&tet_coords(realized, t))).collect();
    let mut near_face = 0;
    let classified: Vec<Sample> = points.par_iter().map(|&p| counter.classify(p)).collect();
    let mut counts: Vec<(Point3, usize)> = Vec::new();
    for (p, s) in points.drain(..).zip(classified) {
        match s {
            Sample::Count(c) => counts.push((p, c)),
            Sample::NearFace => near_face += 1,
        }
    }

    let boundary: Vec<&Point3> = realized
        .complex
        .boundary_vertices()
        .iter()
        .map(|v| &realized.coords[v.0])
        .collect();
    if let Some((lo, hi)) = geom::bounds(boundary.iter().copied()) {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut accepted = 0;
        let mut attempts = 0;
        let max_attempts = spec.samples.saturating_mul(MAX_ATTEMPTS_PER_SAMPLE);
        // candidates are drawn in batches so classification can run in parallel
        // while the accepted sequence stays a function of the seed alone
        while accepted < spec.samples && attempts < max_attempts {
            let batch = (spec.samples - accepted).max(16).min(max_attempts - attempts);
            let candidates: Vec<Point3> = (0..batch)
                .map(|_| std::array::from_fn(|k| lo[k] + (hi[k] - lo[k]) * rng.random::<f64>()))
                .collect();
            attempts += batch;
            let results: Vec<Option<Sample>> = candidates
                .par_iter()
                .map(|&p| {
                    let w = counter.winding(p);
                    if (w - 1.0).abs() < 0.5 {
                        Some(counter.classify(p))
                    } else {
                        None
                    }
                })
                .collect();
            for (p, r) in candidates.into_iter().zip(results) {
                if accepted == spec.samples {
                    break;
                }
                match r {
                    None => {}
                    Some(Sample::NearFace) => near_face += 1,
                    Some(Sample::Count(c)) => {
                        counts.push((p, c));
                        accepted += 1;
                    }
                }
            }
        }
    }
    ContainmentCheck {
        ok: counts.iter().all(|&(_, c)| c == 1),
        samples_checked: counts.len(),
        near_face,
        counts,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VolumeIdentity {
    pub tet_volume_sum: f64,
    pub boundary_volume: f64,
    pub gap: f64,
}

/// Relative gap between the total unsigned tet volume and the volume enclosed
/// by the boundary. Folds and overlaps make the tets cover more than the
/// enclosed volume.
pub fn volume_identity(realized: &RealizedMesh) -> VolumeIdentity {
    let sum: f64 = (0..realized.complex.n_tets()).map(|t| tet_volume(realized, t).abs()).sum();
    let boundary = realized.complex.boundary_volume(&realized.coords).abs();
    VolumeIdentity {
        tet_volume_sum: sum,
        boundary_volume: boundary,
        gap: (sum - boundary).abs() / boundary,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub tolerance: Tolerance,
    pub samples: SampleSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingCertificate {
    pub verdict: Verdict,
    pub all_positive: bool,
    pub min_signed_volume: f64,
    pub face_condition_ok: bool,
    pub star_rank_ok: bool,
    pub min_edge_length: f64,
    pub containment_ok: bool,
    pub samples_checked: usize,
    pub samples_near_face: usize,
    pub volume_identity_gap: f64,
    pub nonpositive_tets: Vec<usize>,
    pub flipped_tets: Vec<usize>,
    pub degenerate_faces: Vec<FaceKey>,
    pub same_side_faces: Vec<FaceKey>,
    pub flat_stars: Vec<VertexId>,
}

impl EmbeddingCertificate {
    pub fn is_embedded(&self) -> bool {
        self.verdict == Verdict::Embedded
    }
}

pub fn certify(realized: &RealizedMesh, opts: &CertifyOptions) -> EmbeddingCertificate {
    let tol = &opts.tolerance;
    let orientation = check_orientation(realized, tol);
    let faces = check_interior_face_sides(realized, tol);
    let stars = check_star_nondegeneracy(realized, tol);
    let containment = if orientation.all_positive {
        Some(containment_certificate(realized, &opts.samples, tol))
    } else {
        None
    };
    let identity = volume_identity(realized);
    let containment_ok = containment.as_ref().is_some_and(|c| c.ok);
    let gap_ok = identity.gap <= VOLUME_GAP_TOL;

    let zero_measure = orientation.witnesses.len() > orientation.flipped.len()
        || !faces.degenerate.is_empty()
        || !stars.ok;
    let verdict = if zero_measure {
        Verdict::Degenerate
    } else if !orientation.flipped.is_empty() {
        Verdict::Flipped
    } else if !containment_ok || !gap_ok || !faces.ok {
        Verdict::Overlapping
    } else {
        Verdict::Embedded
    };
    EmbeddingCertificate {
        verdict,
        all_positive: orientation.all_positive,
        min_signed_volume: orientation.min_signed_volume,
        face_condition_ok: faces.ok,
        star_rank_ok: stars.ok,
        min_edge_length: stars.min_edge_length,
        containment_ok,
        samples_checked: containment.as_ref().map_or(0, |c| c.samples_checked),
        samples_near_face: containment.as_ref().map_or(0, |c| c.near_face),
        volume_identity_gap: identity.gap,
        nonpositive_tets: orientation.witnesses,
        flipped_tets: orientation.flipped,
        degenerate_faces: faces.degenerate,
        same_side_faces: faces.same_side,
        flat_stars: stars.witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{embed_mesh, PlacementStrategy, WeightScheme};
    use crate::{generators, Complex, TetMesh};

    fn uniform(m: TetMesh) -> RealizedMesh {
        let c = Complex::build(m).unwrap();
        embed_mesh(&c, &WeightScheme::Uniform, PlacementStrategy::AsGiven, &Tolerance::default()).unwrap()
    }

    fn given(m: TetMesh) -> RealizedMesh {
        let coords = m.coords().unwrap().to_vec();
        RealizedMesh::from_coords(Complex::build(m).unwrap(), coords)
    }

    #[test]
    fn signed_volume_examples() {
        let o = [0.0; 3];
        assert_eq!(signed_volume(o, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]), 1.0 / 6.0);
        assert_eq!(signed_volume(o, o, [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]), 0.0);
    }

    #[test]
    fn split_tet_uniform() {
        let r = uniform(generators::split_tet());
        let tol = Tolerance::default();
        let o = check_orientation(&r, &tol);
        assert!(o.all_positive);
        assert!((o.min_signed_volume - 1.0 / 24.0).abs() < 1e-15);
        for t in 0..4 {
            assert!((tet_volume(&r, t) - 1.0 / 24.0).abs() < 1e-15);
        }
        let f = check_interior_face_sides(&r, &tol);
        assert!(f.ok);
        assert!(check_star_nondegeneracy(&r, &tol).ok);
        let vi = volume_identity(&r);
        assert!(vi.gap < 1e-15);
        let cert = certify(&r, &CertifyOptions::default());
        assert_eq!(cert.verdict, Verdict::Embedded);
        assert_eq!(cert.samples_checked, 1004);
    }

    #[test]
    fn point_in_one_tet() {
        let r = uniform(generators::split_tet());
        let counter = Counter {
            frames: (0..4).map(|t| TetFrame::new(tet_coords(&r, t))).collect(),
            realized: &r,
            eps: 1e-9,
        };
        assert!(matches!(counter.classify([0.1, 0.2, 0.05]), Sample::Count(1)));
        // on the edge from A to the apex, shared by three tets
        assert!(matches!(counter.classify([0.1, 0.1, 0.1]), Sample::NearFace));
        assert!(matches!(counter.classify([2.0, 0.1, 0.1]), Sample::Count(0)));
        assert!((counter.winding([0.1, 0.2, 0.05]) - 1.0).abs() < 1e-12);
        assert!(counter.winding([2.0, 0.1, 0.1]).abs() < 1e-12);
    }

    #[test]
    fn floater_uniform_is_degenerate() {
        let r = uniform(generators::floater());
        let tol = Tolerance::default();
        let o = check_orientation(&r, &tol);
        assert!(!o.all_positive);
        assert_eq!(o.witnesses, vec![0, 1, 2, 3]);
        assert!(o.min_signed_volume.abs() <= 1e-12);
        assert!(!check_star_nondegeneracy(&r, &tol).ok);
        assert!(!check_interior_face_sides(&r, &tol).degenerate.is_empty());
        assert_eq!(certify(&r, &CertifyOptions::default()).verdict, Verdict::Degenerate);
    }

    #[test]
    fn default_floater_coordinates_embed() {
        let cert = certify(&given(generators::floater()), &CertifyOptions::default());
        assert_eq!(cert.verdict, Verdict::Embedded, "{cert:?}");
    }

    #[test]
    fn moved_vertex_flips() {
        let mut r = uniform(generators::split_tet());
        r.coords[4] = [0.25, 0.25, -0.1];
        let tol = Tolerance::default();
        let f = check_interior_face_sides(&r, &tol);
        assert!(!f.ok);
        assert!(!f.same_side.is_empty());
        let cert = certify(&r, &CertifyOptions::default());
        assert_eq!(cert.verdict, Verdict::Flipped);
        assert_eq!(cert.flipped_tets.len(), 1);
        // two folded layers over the flipped tet
        let flipped = tet_volume(&r, cert.flipped_tets[0]).abs();
        let vi = volume_identity(&r);
        assert!((vi.gap - 2.0 * flipped / vi.boundary_volume).abs() < 1e-12);
    }

    #[test]
    fn flat_star_is_degenerate() {
        let mut r = uniform(generators::split_tet());
        for v in 0..4 {
            r.coords[v][2] = 0.0;
        }
        r.coords[4][2] = 0.0;
        assert!(!check_star_nondegeneracy(&r, &Tolerance::default()).ok);
    }

    #[test]
    fn overlapping_tets_are_counted_twice() {
        // two positive tets sharing no face, the second inside the first; the
        // complex builder rejects such input, so the counter is exercised directly
        let coords = vec![
            [0.0, 0.0, 0.0],
            [4.0, 0.0, 0.0],
            [0.0, 4.0, 0.0],
            [0.0, 0.0, 4.0],
            [0.5, 0.5, 0.5],
            [1.5, 0.5, 0.5],
            [0.5, 1.5, 0.5],
            [0.5, 0.5, 1.5],
        ];
        let tol = Tolerance::default();
        let frames: Vec<Option<TetFrame>> = [[0, 1, 2, 3], [4, 5, 6, 7]]
            .iter()
            .map(|t: &[usize; 4]| TetFrame::new(t.map(|v| coords[v])))
            .collect();
        let inside_both = [0.7, 0.7, 0.7];
        let n = frames
            .iter()
            .flatten()
            .filter(|f| f.min_barycentric(inside_both) > tol.eps_c)
            .count();
        assert_eq!(n, 2);
    }

    #[test]
    fn containment_is_reproducible() {
        let r = given(generators::octahedron_cone());
        let spec = SampleSpec { samples: 200, seed: 9 };
        let a = containment_certificate(&r, &spec, &Tolerance::default());
        let b = containment_certificate(&r, &spec, &Tolerance::default());
        assert_eq!(a, b);
        assert!(a.ok);
        assert_eq!(a.samples_checked, 200 + r.complex.n_tets());
    }
}
