mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use tuttet::complex::oriented_faces;
use tuttet::validate::validate_all;
use tuttet::{generators, mesh_graph, Complex, TetMesh, VertexId};

/// Relabels vertices by `perm`, reorders tets and rotates each tet's corner list.
fn shuffled(mesh: &TetMesh, perm: &[usize], tet_order: &[usize], rot: &[usize]) -> TetMesh {
    let tets: Vec<[usize; 4]> = tet_order
        .iter()
        .map(|&i| {
            let t = mesh.tets()[i];
            let mut out = t.map(|v| perm[v.0]);
            out.rotate_left(rot[i] % 4);
            out
        })
        .collect();
    let coords = mesh.coords().map(|c| {
        let mut out = vec![[0.0; 3]; c.len()];
        for (v, p) in c.iter().enumerate() {
            out[perm[v]] = *p;
        }
        out
    });
    TetMesh::from_indices(mesh.n_vertices(), &tets, coords).unwrap()
}

fn relabeling() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>, Vec<usize>)> {
    let n_meshes = common::all_meshes().len();
    (0..n_meshes).prop_flat_map(|m| {
        let mesh = common::all_meshes()[m].1.clone();
        let n = mesh.n_vertices();
        let t = mesh.tets().len();
        (
            Just(m),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..t).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(0usize..4, t),
        )
    })
}

fn consistently_oriented(c: &Complex) -> bool {
    let mut seen = BTreeSet::new();
    for &t in c.oriented_tets() {
        for f in oriented_faces(t) {
            // the same oriented triangle may not appear twice
            let r = [f[0], f[1], f[2]];
            let rotations = [r, [r[1], r[2], r[0]], [r[2], r[0], r[1]]];
            let canonical = *rotations.iter().min().unwrap();
            if !seen.insert(canonical) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_and_checks_are_label_invariant((m, perm, order, rot) in relabeling()) {
        let (_, mesh) = &common::all_meshes()[m];
        let a = Complex::build(mesh.clone()).unwrap();
        let b = Complex::build(shuffled(mesh, &perm, &order, &rot)).unwrap();

        let ga = mesh_graph(&a);
        let gb = mesh_graph(&b);
        let mapped: BTreeSet<(usize, usize)> = ga
            .edges()
            .map(|(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
            .collect();
        prop_assert_eq!(mapped, gb.edges().collect::<BTreeSet<_>>());

        let bf: BTreeSet<[usize; 3]> = a
            .boundary_faces()
            .iter()
            .map(|f| {
                let mut x = f.map(|v| perm[v.0]);
                x.sort();
                x
            })
            .collect();
        prop_assert_eq!(bf, b.boundary_faces().iter().map(|f| f.map(|v| v.0)).collect::<BTreeSet<_>>());

        let ia: BTreeSet<usize> = a.interior_vertices().iter().map(|v| perm[v.0]).collect();
        prop_assert_eq!(ia, b.interior_vertices().iter().map(|v| v.0).collect::<BTreeSet<_>>());

        prop_assert_eq!(a.euler_check(), b.euler_check());
        prop_assert!(consistently_oriented(&b));

        let ra = validate_all(&a, None);
        let rb = validate_all(&b, None);
        prop_assert_eq!(ra.verdict, rb.verdict);
        let sa: Vec<_> = ra.checks.iter().map(|c| (c.name, c.status)).collect();
        let sb: Vec<_> = rb.checks.iter().map(|c| (c.name, c.status)).collect();
        prop_assert_eq!(sa, sb);

        if let Some(coords) = b.mesh().coords() {
            let va = a.boundary_volume(a.mesh().coords().unwrap());
            let vb = b.boundary_volume(coords);
            prop_assert!(vb > 0.0);
            prop_assert!((va - vb).abs() <= 1e-12 * va.abs());
        }
    }
}

#[test]
fn link_euler_characteristics() {
    for (name, mesh) in common::all_meshes() {
        let c = Complex::build(mesh).unwrap();
        if !c.euler_check().is_ball_candidate {
            continue;
        }
        for v in 0..c.n_vertices() {
            let v = VertexId(v);
            let link = c.vertex_link(v);
            let expected = if c.is_boundary_vertex(v) { 1 } else { 2 };
            assert_eq!(link.euler_characteristic(), expected, "{name} {v}");
            assert_eq!(link.is_closed, !c.is_boundary_vertex(v));
        }
    }
}

#[test]
fn euler_characteristics_of_reference_meshes() {
    for m in [generators::split_tet(), generators::floater()] {
        let e = Complex::build(m).unwrap().euler_check();
        assert_eq!((e.chi_complex, e.chi_boundary, e.is_ball_candidate), (1, 2, true));
    }
    let single = TetMesh::from_indices(4, &[[0, 1, 2, 3]], None).unwrap();
    let e = Complex::build(single).unwrap().euler_check();
    assert_eq!((e.chi_complex, e.chi_boundary), (1, 2));
    let torus = Complex::build(generators::solid_torus(4)).unwrap().euler_check();
    assert!(!torus.is_ball_candidate);
}
