//! Small reference meshes.
//!
//! Vertex numbering for the two canonical meshes: `A=0, B=1, C=2, D=3` are the
//! corners of the unit right tetrahedron, followed by the interior vertices.

use crate::mesh::{Point3, TetMesh};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

fn unit_corners() -> Vec<Point3> {
    vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

fn build(n: usize, tets: &[[usize; 4]], coords: Option<Vec<Point3>>) -> TetMesh {
    TetMesh::from_indices(n, tets, coords).expect("generator output is a valid mesh")
}

/// Two adjacent interior vertices `U=4`, `V=5` inside a tetrahedron; the graph is K6.
pub fn floater() -> TetMesh {
    const U: usize = 4;
    const V: usize = 5;
    let mut coords = unit_corners();
    // U, V on the segment joining the midpoints of AC and BD, so the edge
    // UV pierces the ring A-B-C-D
    coords.push([0.20, 0.30, 0.20]);
    coords.push([0.30, 0.20, 0.30]);
    build(
        6,
        &[
            [U, V, A, B],
            [U, V, B, C],
            [U, V, C, D],
            [U, V, D, A],
            [U, A, B, C],
            [U, A, C, D],
            [V, A, B, D],
            [V, B, C, D],
        ],
        Some(coords),
    )
}

/// A tetrahedron split at an interior vertex `U=4`; the graph is K5.
pub fn split_tet() -> TetMesh {
    const U: usize = 4;
    let mut coords = unit_corners();
    coords.push([0.25, 0.25, 0.25]);
    build(5, &[[A, B, C, U], [A, B, D, U], [A, C, D, U], [B, C, D, U]], Some(coords))
}

/// Cone from an interior vertex (placed at the origin, index `boundary.len()`)
/// over a closed triangulated boundary.
fn cone(boundary: Vec<Point3>, faces: &[[usize; 3]]) -> TetMesh {
    let apex = boundary.len();
    let mut coords = boundary;
    coords.push([0.0; 3]);
    let tets: Vec<[usize; 4]> = faces.iter().map(|f| [f[0], f[1], f[2], apex]).collect();
    build(apex + 1, &tets, Some(coords))
}

/// Triangular bipyramid (equator `0..3`, poles 3 and 4) coned from an interior vertex.
pub fn bipyramid_cone() -> TetMesh {
    let s = 3f64.sqrt() / 2.0;
    let boundary = vec![
        [1.0, 0.0, 0.0],
        [-0.5, s, 0.0],
        [-0.5, -s, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let faces = [[3, 0, 1], [3, 1, 2], [3, 2, 0], [4, 0, 1], [4, 1, 2], [4, 2, 0]];
    cone(boundary, &faces)
}

/// Pentagonal bipyramid (equator `0..5`, poles 5 and 6) coned from an interior vertex.
pub fn pentagonal_bipyramid_cone() -> TetMesh {
    let mut boundary: Vec<Point3> = (0..5)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / 5.0;
            [t.cos(), t.sin(), 0.0]
        })
        .collect();
    boundary.push([0.0, 0.0, 1.0]);
    boundary.push([0.0, 0.0, -1.0]);
    let faces: Vec<[usize; 3]> = (0..5)
        .flat_map(|i| [[5, i, (i + 1) % 5], [6, i, (i + 1) % 5]])
        .collect();
    cone(boundary, &faces)
}

fn octahedron() -> (Vec<Point3>, Vec<[usize; 3]>) {
    // +x, -x, +y, -y, +z, -z
    let boundary = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut faces = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                faces.push([x, y, z]);
            }
        }
    }
    (boundary, faces)
}

/// Regular octahedron coned from its center (vertex 6).
pub fn octahedron_cone() -> TetMesh {
    let (boundary, faces) = octahedron();
    cone(boundary, &faces)
}

/// [`octahedron_cone`] with the tet over face `(+x, +y, +z)` split at a second
/// interior vertex (7), so the mesh has two adjacent interior vertices.
pub fn stacked_octahedron() -> TetMesh {
    let (boundary, faces) = octahedron();
    const O: usize = 6;
    const U: usize = 7;
    let mut tets: Vec<[usize; 4]> = Vec::new();
    for f in faces {
        if f == [0, 2, 4] {
            tets.extend([[0, 2, 4, U], [0, 2, O, U], [2, 4, O, U], [0, 4, O, U]]);
        } else {
            tets.push([f[0], f[1], f[2], O]);
        }
    }
    let mut coords = boundary;
    coords.push([0.0; 3]);
    coords.push([0.25, 0.25, 0.25]);
    build(8, &tets, Some(coords))
}

/// Two tets glued along face ABC; every vertex is on the boundary.
pub fn two_tets() -> TetMesh {
    let mut coords = unit_corners();
    coords.push([0.3, 0.3, -1.0]);
    build(5, &[[A, B, C, D], [A, B, C, 4]], Some(coords))
}

/// [`split_tet`] with an ear: an extra tet glued to boundary face ABC with apex 5.
pub fn split_tet_with_ear() -> TetMesh {
    let mut coords = split_tet().coords().expect("coords").to_vec();
    coords.push([0.3, 0.3, -0.5]);
    build(
        6,
        &[[A, B, C, 4], [A, B, D, 4], [A, C, D, 4], [B, C, D, 4], [A, B, C, 5]],
        Some(coords),
    )
}

/// Chain of three face-adjacent tets (vertices `0..6`), each split at its own
/// interior vertex (`6..9`).
pub fn split_tet_chain() -> TetMesh {
    let chain = [[0, 1, 2, 3], [1, 2, 3, 4], [2, 3, 4, 5]];
    let mut tets = Vec::new();
    for (k, t) in chain.iter().enumerate() {
        let u = 6 + k;
        for skip in 0..4 {
            let mut tet = [u; 4];
            let mut j = 0;
            for (i, &v) in t.iter().enumerate() {
                if i != skip {
                    tet[j] = v;
                    j += 1;
                }
            }
            tets.push(tet);
        }
    }
    build(9, &tets, None)
}

/// Triangulated solid torus: a ring of `segments` triangular prisms, each cut into three tets.
pub fn solid_torus(segments: usize) -> TetMesh {
    assert!(segments >= 3, "a ring needs at least three segments");
    let (a, b, c) = (|i: usize| 3 * i, |i: usize| 3 * i + 1, |i: usize| 3 * i + 2);
    let mut tets = Vec::new();
    for i in 0..segments {
        let j = (i + 1) % segments;
        tets.push([a(i), b(i), c(i), a(j)]);
        tets.push([b(i), c(i), a(j), b(j)]);
        tets.push([c(i), a(j), b(j), c(j)]);
    }
    build(3 * segments, &tets, None)
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "floater",
    "split-tet",
    "bipyramid-cone",
    "octahedron-cone",
    "pentagonal-bipyramid-cone",
    "stacked-octahedron",
    "two-tets",
    "split-tet-ear",
];

pub fn by_name(name: &str) -> Option<TetMesh> {
    Some(match name {
        "floater" => floater(),
        "split-tet" => split_tet(),
        "bipyramid-cone" => bipyramid_cone(),
        "octahedron-cone" => octahedron_cone(),
        "pentagonal-bipyramid-cone" => pentagonal_bipyramid_cone(),
        "stacked-octahedron" => stacked_octahedron(),
        "two-tets" => two_tets(),
        "split-tet-ear" => split_tet_with_ear(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_generator_builds() {
        for name in NAMES {
            let m = by_name(name).unwrap();
            assert!(crate::Complex::build(m).is_ok(), "{name}");
        }
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn floater_shape() {
        let m = floater();
        assert_eq!((m.n_vertices(), m.tets().len()), (6, 8));
    }

    #[test]
    fn chain_has_nine_vertices() {
        let m = split_tet_chain();
        assert_eq!((m.n_vertices(), m.tets().len()), (9, 12));
    }
}
