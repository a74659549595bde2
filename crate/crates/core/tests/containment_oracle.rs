mod common;

use tuttet::embed::{embed_mesh, PlacementStrategy, WeightScheme};
use tuttet::verify::{containment_certificate, SampleSpec};
use tuttet::{Complex, Point3, RealizedMesh, Tolerance};

fn tets(r: &RealizedMesh) -> Vec<[Point3; 4]> {
    r.complex.oriented_tets().iter().map(|t| t.map(|v| r.coords[v.0])).collect()
}

/// Re-counts every certificate sample against every tet independently.
fn disagreements(r: &RealizedMesh, spec: &SampleSpec) -> (usize, usize) {
    let tol = Tolerance::default();
    let cert = containment_certificate(r, spec, &tol);
    let all = tets(r);
    let bad = cert
        .counts
        .iter()
        .filter(|&&(p, count)| common::count_containing(&all, p, tol.eps_c) != count)
        .count();
    assert_eq!(cert.ok, cert.counts.iter().all(|&(_, c)| c == 1));
    (bad, cert.samples_checked)
}

#[test]
fn corpus_realizations_agree_with_oracle() {
    for (name, mesh) in common::all_meshes() {
        let Some(coords) = mesh.coords().map(<[Point3]>::to_vec) else { continue };
        let c = Complex::build(mesh).unwrap();
        let r = RealizedMesh::from_coords(c, coords);
        let (bad, checked) = disagreements(&r, &SampleSpec { samples: 1000, seed: 7 });
        assert_eq!(bad, 0, "{name}");
        assert!(checked >= 1000, "{name}");
    }
}

#[test]
fn folded_realizations_agree_with_oracle() {
    // small alpha folds the floater, so some samples are covered two or three times
    let c = Complex::build(tuttet::generators::floater()).unwrap();
    let mut multiply_covered = 0;
    for seed in 0..20 {
        let r = embed_mesh(&c, &WeightScheme::Dirichlet { alpha: 0.1, seed }, PlacementStrategy::AsGiven, &Tolerance::default())
            .unwrap();
        let spec = SampleSpec { samples: 1000, seed };
        let (bad, _) = disagreements(&r, &spec);
        assert_eq!(bad, 0, "seed {seed}");
        let cert = containment_certificate(&r, &spec, &Tolerance::default());
        multiply_covered += cert.counts.iter().filter(|&&(_, c)| c > 1).count();
    }
    assert!(multiply_covered > 0);
}
