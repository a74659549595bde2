//! Incidence structure derived from a [`TetMesh`]: faces, edges, boundary
//! classification, vertex links and a consistent orientation of all tets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::geom;
use crate::graph::Graph;
use crate::mesh::{Point3, TetMesh, VertexId};

/// Triangle keyed by its sorted vertex ids.
pub type FaceKey = [VertexId; 3];
/// Edge keyed by its sorted vertex ids.
pub type EdgeKey = [VertexId; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("face {face:?} is shared by {count} tets")]
    FaceOverShared { face: FaceKey, count: usize },
    #[error("orientation cannot be propagated consistently (conflict at tet {tet})")]
    NonOrientable { tet: usize },
    #[error("tets are not connected through faces ({components} components)")]
    DisconnectedDual { components: usize },
    #[error("edge {edge:?} is non-manifold")]
    NonManifoldEdge { edge: EdgeKey },
    #[error("vertex {vertex} is non-manifold (its link is disconnected)")]
    NonManifoldVertex { vertex: VertexId },
}

pub(crate) fn sorted3(mut f: [VertexId; 3]) -> FaceKey {
    f.sort_unstable();
    f
}

pub(crate) fn sorted2(a: VertexId, b: VertexId) -> EdgeKey {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Parity of the permutation taking `f` to sorted order (true = odd).
fn odd_parity(f: [VertexId; 3]) -> bool {
    let inversions = (f[0] > f[1]) as u8 + (f[0] > f[2]) as u8 + (f[1] > f[2]) as u8;
    inversions % 2 == 1
}

/// Faces of an oriented tet `[a, b, c, d]` with induced orientation, listed
/// opposite to `a`, `b`, `c`, `d`. For a tet with positive signed volume the
/// induced orientation is outward (right-hand rule).
pub fn oriented_faces(t: [VertexId; 4]) -> [[VertexId; 3]; 4] {
    let [a, b, c, d] = t;
    [[b, c, d], [a, d, c], [a, b, d], [a, c, b]]
}

fn flipped(t: [VertexId; 4]) -> [VertexId; 4] {
    [t[0], t[1], t[3], t[2]]
}

/// Necessary ball conditions based on Euler characteristics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub chi_complex: i64,
    pub chi_boundary: i64,
    pub complex_connected: bool,
    pub boundary_connected: bool,
    pub is_ball_candidate: bool,
}

/// Link of a vertex: the faces opposite to it in its incident tets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkGraph {
    pub center: VertexId,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeKey>,
    pub faces: Vec<FaceKey>,
    /// True iff the center is an interior vertex (the link is a closed surface).
    pub is_closed: bool,
}

impl LinkGraph {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Link as a [`Graph`] on local indices, plus the local → global map.
    pub fn to_graph(&self) -> (Graph, Vec<VertexId>) {
        let local = |v: VertexId| self.vertices.binary_search(&v).expect("link vertex");
        let g = Graph::from_edges(
            self.vertices.len(),
            self.edges.iter().map(|e| (local(e[0]), local(e[1]))),
        );
        (g, self.vertices.clone())
    }
}

/// Simplicial 3-complex with derived incidence maps. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Complex {
    mesh: TetMesh,
    faces: BTreeMap<FaceKey, Vec<usize>>,
    edges: BTreeMap<EdgeKey, usize>,
    boundary_faces: BTreeSet<FaceKey>,
    boundary_vertices: BTreeSet<VertexId>,
    oriented_tets: Vec<[VertexId; 4]>,
    vertex_tets: Vec<Vec<usize>>,
}

impl Complex {
    /// Derives the incidence structure and orients every tet consistently.
    ///
    /// When the mesh carries coordinates, the global orientation is chosen so
    /// that the total signed volume is positive, i.e. induced boundary
    /// orientations point outward.
    pub fn build(mesh: TetMesh) -> Result<Complex, ComplexError> {
        let n = mesh.n_vertices();
        let mut faces: BTreeMap<FaceKey, Vec<usize>> = BTreeMap::new();
        let mut edges: BTreeMap<EdgeKey, usize> = BTreeMap::new();
        let mut vertex_tets = vec![Vec::new(); n];
        for (t, tet) in mesh.tets().iter().enumerate() {
            for f in oriented_faces(*tet) {
                faces.entry(sorted3(f)).or_default().push(t);
            }
            for i in 0..4 {
                vertex_tets[tet[i].0].push(t);
                for j in i + 1..4 {
                    *edges.entry(sorted2(tet[i], tet[j])).or_default() += 1;
                }
            }
        }
        if let Some((face, ts)) = faces.iter().find(|(_, ts)| ts.len() > 2) {
            return Err(ComplexError::FaceOverShared {
                face: *face,
                count: ts.len(),
            });
        }
        let boundary_faces: BTreeSet<FaceKey> = faces
            .iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(f, _)| *f)
            .collect();
        let boundary_vertices = boundary_faces.iter().flatten().copied().collect();

        let mut complex = Complex {
            oriented_tets: Vec::new(),
            mesh,
            faces,
            edges,
            boundary_faces,
            boundary_vertices,
            vertex_tets,
        };
        complex.oriented_tets = complex.propagate_orientation()?;
        complex.check_manifold_edges()?;
        complex.check_manifold_vertices()?;
        if let Some(coords) = complex.mesh.coords().map(<[Point3]>::to_vec) {
            complex.orient_to(&coords);
        }
        Ok(complex)
    }

    fn propagate_orientation(&self) -> Result<Vec<[VertexId; 4]>, ComplexError> {
        let tets = self.mesh.tets();
        let mut oriented: Vec<Option<[VertexId; 4]>> = vec![None; tets.len()];
        let mut components = 0;
        let mut first_conflict = None;
        for seed in 0..tets.len() {
            if oriented[seed].is_some() {
                continue;
            }
            components += 1;
            oriented[seed] = Some(tets[seed]);
            let mut queue = VecDeque::from([seed]);
            while let Some(t) = queue.pop_front() {
                let tet = oriented[t].expect("queued tets are oriented");
                for f in oriented_faces(tet) {
                    let key = sorted3(f);
                    let parity = odd_parity(f);
                    let Some(&other) = self.faces[&key].iter().find(|&&o| o != t) else {
                        continue;
                    };
                    let induced = |o: [VertexId; 4]| {
                        let g = oriented_faces(o)
                            .into_iter()
                            .find(|g| sorted3(*g) == key)
                            .expect("shared face");
                        odd_parity(g)
                    };
                    match oriented[other] {
                        Some(o) => {
                            if induced(o) == parity && first_conflict.is_none() {
                                first_conflict = Some(other);
                            }
                        }
                        None => {
                            let mut o = tets[other];
                            if induced(o) == parity {
                                o = flipped(o);
                            }
                            oriented[other] = Some(o);
                            queue.push_back(other);
                        }
                    }
                }
            }
        }
        if components > 1 {
            return Err(ComplexError::DisconnectedDual { components });
        }
        if let Some(tet) = first_conflict {
            return Err(ComplexError::NonOrientable { tet });
        }
        Ok(oriented.into_iter().map(|o| o.expect("all visited")).collect())
    }

    fn check_manifold_edges(&self) -> Result<(), ComplexError> {
        for edge in self.edges.keys() {
            let [x, y] = *edge;
            let around: Vec<usize> = self.vertex_tets[x.0]
                .iter()
                .copied()
                .filter(|&t| self.mesh.tets()[t].contains(&y))
                .collect();
            let mut boundary_count = 0;
            let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &t in &around {
                for &z in self.mesh.tets()[t].iter().filter(|&&z| z != x && z != y) {
                    let key = sorted3([x, y, z]);
                    let inc = &self.faces[&key];
                    if inc.len() == 1 {
                        boundary_count += 1;
                    } else {
                        let o = if inc[0] == t { inc[1] } else { inc[0] };
                        adj.entry(t).or_default().push(o);
                    }
                }
            }
            // each boundary face containing the edge was seen once
            let fan_ok = boundary_count == 0 || boundary_count == 2;
            let mut seen = BTreeSet::from([around[0]]);
            let mut stack = vec![around[0]];
            while let Some(t) = stack.pop() {
                for &o in adj.get(&t).into_iter().flatten() {
                    if seen.insert(o) {
                        stack.push(o);
                    }
                }
            }
            if !fan_ok || seen.len() != around.len() {
                return Err(ComplexError::NonManifoldEdge { edge: *edge });
            }
        }
        Ok(())
    }

    fn check_manifold_vertices(&self) -> Result<(), ComplexError> {
        for (v, tets) in self.vertex_tets.iter().enumerate() {
            if tets.is_empty() {
                continue;
            }
            let v = VertexId(v);
            let mut seen = BTreeSet::from([tets[0]]);
            let mut stack = vec![tets[0]];
            while let Some(t) = stack.pop() {
                for f in oriented_faces(self.mesh.tets()[t]) {
                    if !f.contains(&v) {
                        continue;
                    }
                    for &o in &self.faces[&sorted3(f)] {
                        if seen.insert(o) {
                            stack.push(o);
                        }
                    }
                }
            }
            if seen.len() != tets.len() {
                return Err(ComplexError::NonManifoldVertex { vertex: v });
            }
        }
        Ok(())
    }

    /// Flips the global orientation if needed so that the total signed volume
    /// under `coords` is positive. Returns true if a flip happened.
    pub fn orient_to(&mut self, coords: &[Point3]) -> bool {
        let total = self.boundary_volume(coords);
        let flip = if total != 0.0 {
            total < 0.0
        } else {
            let [a, b, c, d] = self.oriented_tets[0].map(|v| coords[v.0]);
            geom::signed_volume(a, b, c, d) < 0.0
        };
        if flip {
            for t in &mut self.oriented_tets {
                *t = flipped(*t);
            }
        }
        flip
    }

    /// Volume enclosed by the oriented boundary surface (divergence theorem).
    pub fn boundary_volume(&self, coords: &[Point3]) -> f64 {
        self.boundary_oriented_faces()
            .map(|[a, b, c]| geom::triple(coords[a.0], coords[b.0], coords[c.0]) / 6.0)
            .sum()
    }

    pub fn mesh(&self) -> &TetMesh {
        &self.mesh
    }

    pub fn n_vertices(&self) -> usize {
        self.mesh.n_vertices()
    }

    pub fn n_tets(&self) -> usize {
        self.oriented_tets.len()
    }

    pub fn faces(&self) -> &BTreeMap<FaceKey, Vec<usize>> {
        &self.faces
    }

    pub fn edges(&self) -> &BTreeMap<EdgeKey, usize> {
        &self.edges
    }

    pub fn boundary_faces(&self) -> &BTreeSet<FaceKey> {
        &self.boundary_faces
    }

    pub fn boundary_vertices(&self) -> &BTreeSet<VertexId> {
        &self.boundary_vertices
    }

    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.boundary_vertices.contains(&v)
    }

    /// Vertices used by some tet and not on the boundary, ascending.
    pub fn interior_vertices(&self) -> Vec<VertexId> {
        (0..self.n_vertices())
            .map(VertexId)
            .filter(|v| !self.vertex_tets[v.0].is_empty() && !self.is_boundary_vertex(*v))
            .collect()
    }

    pub fn oriented_tets(&self) -> &[[VertexId; 4]] {
        &self.oriented_tets
    }

    pub fn vertex_tets(&self, v: VertexId) -> &[usize] {
        &self.vertex_tets[v.0]
    }

    /// Interior faces with the two vertices opposite to them.
    pub fn interior_faces(&self) -> impl Iterator<Item = (FaceKey, [VertexId; 2])> + '_ {
        self.faces.iter().filter(|(_, ts)| ts.len() == 2).map(move |(f, ts)| {
            let opp = |t: usize| {
                *self.mesh.tets()[t]
                    .iter()
                    .find(|v| !f.contains(v))
                    .expect("tet has a vertex off its face")
            };
            (*f, [opp(ts[0]), opp(ts[1])])
        })
    }

    /// Boundary triangles with the outward orientation induced by the tets.
    pub fn boundary_oriented_faces(&self) -> impl Iterator<Item = [VertexId; 3]> + '_ {
        self.oriented_tets.iter().flat_map(move |&t| {
            oriented_faces(t)
                .into_iter()
                .filter(move |f| self.boundary_faces.contains(&sorted3(*f)))
        })
    }

    /// Number of faces of tet `t` that lie on the boundary.
    pub fn boundary_face_count(&self, t: usize) -> usize {
        oriented_faces(self.mesh.tets()[t])
            .into_iter()
            .filter(|f| self.boundary_faces.contains(&sorted3(*f)))
            .count()
    }

    pub fn euler_check(&self) -> EulerCheck {
        let v = self.n_vertices() as i64;
        let e = self.edges.len() as i64;
        let f = self.faces.len() as i64;
        let t = self.n_tets() as i64;
        let boundary_edges: BTreeSet<EdgeKey> = self
            .boundary_faces
            .iter()
            .flat_map(|&[a, b, c]| [sorted2(a, b), sorted2(b, c), sorted2(a, c)])
            .collect();
        let vb = self.boundary_vertices.len() as i64;
        let chi_boundary = vb - boundary_edges.len() as i64 + self.boundary_faces.len() as i64;

        let bverts: Vec<VertexId> = self.boundary_vertices.iter().copied().collect();
        let local = |x: VertexId| bverts.binary_search(&x).expect("boundary vertex");
        let boundary_graph = Graph::from_edges(
            bverts.len(),
            boundary_edges.iter().map(|e| (local(e[0]), local(e[1]))),
        );
        let complex_connected = self.graph().is_connected();
        let boundary_connected = boundary_graph.is_connected();
        let chi_complex = v - e + f - t;
        EulerCheck {
            chi_complex,
            chi_boundary,
            complex_connected,
            boundary_connected,
            is_ball_candidate: chi_complex == 1
                && chi_boundary == 2
                && complex_connected
                && boundary_connected,
        }
    }

    pub fn vertex_link(&self, v: VertexId) -> LinkGraph {
        let mut faces = BTreeSet::new();
        for &t in &self.vertex_tets[v.0] {
            let tet = self.mesh.tets()[t];
            let mut opp = [VertexId(0); 3];
            let mut k = 0;
            for &w in tet.iter().filter(|&&w| w != v) {
                opp[k] = w;
                k += 1;
            }
            faces.insert(sorted3(opp));
        }
        let edges: BTreeSet<EdgeKey> = faces
            .iter()
            .flat_map(|&[a, b, c]| [sorted2(a, b), sorted2(b, c), sorted2(a, c)])
            .collect();
        let vertices: BTreeSet<VertexId> = faces.iter().flatten().copied().collect();
        LinkGraph {
            center: v,
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
            faces: faces.into_iter().collect(),
            is_closed: !self.is_boundary_vertex(v),
        }
    }

    /// The tetrahedral graph: mesh vertices and edges.
    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.n_vertices(), self.edges.keys().map(|e| (e[0].0, e[1].0)))
    }
}

/// Free-function form of [`Complex::build`].
pub fn build_complex(mesh: TetMesh) -> Result<Complex, ComplexError> {
    Complex::build(mesh)
}

pub fn mesh_graph(complex: &Complex) -> Graph {
    complex.graph()
}
