mod common;

use proptest::prelude::*;
use tuttet::embed::{
    assemble_weights, embed_mesh, eq_residual, maximum_principle_violations, place_boundary, solve_positions,
    PlacementStrategy, WeightScheme, RESIDUAL_TOL,
};
use tuttet::minors::{linkless_exclusion_check, DEFAULT_BUDGET};
use tuttet::validate::{validate_all, Status};
use tuttet::verify::{certify, containment_certificate, CertifyOptions, SampleSpec, Verdict};
use tuttet::{Complex, Tolerance};

#[test]
fn positive_corpus_satisfies_every_hypothesis() {
    for (name, mesh) in common::positive_corpus() {
        let c = Complex::build(mesh).unwrap();
        let minors = linkless_exclusion_check(&c.graph(), DEFAULT_BUDGET);
        assert_eq!(minors.passed(), Some(true), "{name}");
        let report = validate_all(&c, Some(&minors));
        assert_eq!(report.verdict, Status::Pass, "{name}: {:?}", report.failed());
        assert!(c.n_vertices() <= 12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Positive weights on a mesh meeting every hypothesis always embed.
    #[test]
    fn random_weights_embed_positive_corpus(m in 0usize..5, seed in any::<u64>(), alpha in 0.05f64..5.0) {
        let (_, mesh) = &common::positive_corpus()[m];
        let c = Complex::build(mesh.clone()).unwrap();
        let tol = Tolerance::default();
        let r = embed_mesh(&c, &WeightScheme::Dirichlet { alpha, seed }, PlacementStrategy::AsGiven, &tol).unwrap();
        prop_assert!(r.residual.unwrap() <= RESIDUAL_TOL);
        prop_assert!(maximum_principle_violations(&r).is_empty());
        let opts = CertifyOptions { tolerance: tol, samples: SampleSpec { samples: 200, seed } };
        let cert = certify(&r, &opts);
        prop_assert_eq!(cert.verdict, Verdict::Embedded);
        prop_assert!(cert.min_signed_volume > 0.0);
        prop_assert!(cert.volume_identity_gap <= 1e-9);
    }

    /// Residual and maximum principle hold for every solve, embedded or not.
    #[test]
    fn solver_contract_on_all_meshes(m in 0usize..8, seed in any::<u64>(), alpha in 0.05f64..5.0) {
        let (_, mesh) = &common::all_meshes()[m];
        let c = Complex::build(mesh.clone()).unwrap();
        let tol = Tolerance::default();
        let Ok(placement) = place_boundary(&c, PlacementStrategy::AsGiven, mesh.coords().unwrap(), &tol) else {
            return Ok(());
        };
        let w = assemble_weights(&c, &WeightScheme::Dirichlet { alpha, seed }).unwrap();
        let r = solve_positions(&c, &w, &placement).unwrap();
        prop_assert!(eq_residual(&c, &w, &r.coords) <= RESIDUAL_TOL);
        prop_assert!(maximum_principle_violations(&r).is_empty());
        for v in c.boundary_vertices() {
            prop_assert_eq!(r.coords[v.0], mesh.coords().unwrap()[v.0]);
        }
    }

    /// Sphere placement of the convex corpus boundaries stays convex and embeds.
    #[test]
    fn sphere_placement_embeds(m in 0usize..5, seed in any::<u64>()) {
        let (_, mesh) = &common::positive_corpus()[m];
        let c = Complex::build(mesh.clone()).unwrap();
        let tol = Tolerance::default();
        let r = embed_mesh(&c, &WeightScheme::Dirichlet { alpha: 1.0, seed }, PlacementStrategy::SphereNormalize, &tol).unwrap();
        let opts = CertifyOptions { tolerance: tol, samples: SampleSpec { samples: 100, seed } };
        prop_assert_eq!(certify(&r, &opts).verdict, Verdict::Embedded);
    }
}

#[test]
fn solves_are_deterministic() {
    for (_, mesh) in common::positive_corpus() {
        let c = Complex::build(mesh).unwrap();
        let scheme = WeightScheme::Dirichlet { alpha: 0.3, seed: 99 };
        let tol = Tolerance::default();
        let a = embed_mesh(&c, &scheme, PlacementStrategy::AsGiven, &tol).unwrap();
        let b = embed_mesh(&c, &scheme, PlacementStrategy::AsGiven, &tol).unwrap();
        assert_eq!(a.coords, b.coords);
        let spec = SampleSpec { samples: 300, seed: 4 };
        assert_eq!(containment_certificate(&a, &spec, &tol), containment_certificate(&b, &spec, &tol));
    }
}

#[test]
fn floater_fails_for_some_weights_and_embeds_for_others() {
    let c = Complex::build(tuttet::generators::floater()).unwrap();
    let tol = Tolerance::default();
    let mut verdicts = std::collections::BTreeSet::new();
    for seed in 0..200 {
        let r = embed_mesh(&c, &WeightScheme::Dirichlet { alpha: 0.1, seed }, PlacementStrategy::AsGiven, &tol).unwrap();
        let opts = CertifyOptions { tolerance: tol, samples: SampleSpec { samples: 100, seed } };
        verdicts.insert(format!("{:?}", certify(&r, &opts).verdict));
    }
    assert!(verdicts.contains("Flipped"));
    assert!(verdicts.contains("Embedded"));
}
