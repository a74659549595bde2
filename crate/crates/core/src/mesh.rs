//! Raw tetrahedral mesh input: vertex count, tetrahedra and optional coordinates.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex index in `0..n_vertices`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Point3 = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("tet {tet} references vertex {vertex}, but the mesh has {n_vertices} vertices")]
    IndexOutOfRange {
        tet: usize,
        vertex: usize,
        n_vertices: usize,
    },
    #[error("tet {tet} repeats vertex {vertex}")]
    RepeatedVertex { tet: usize, vertex: usize },
    #[error("tets {first} and {second} span the same vertex set")]
    DuplicateTet { first: usize, second: usize },
    #[error("{got} coordinates given for {n_vertices} vertices")]
    CoordinateCount { got: usize, n_vertices: usize },
    #[error("coordinate of vertex {0} is not finite")]
    NonFiniteCoordinate(usize),
    #[error("mesh has no tetrahedra")]
    Empty,
}

/// A tetrahedral mesh as read from disk.
///
/// Construction through [`TetMesh::new`] enforces that every tet has four
/// distinct in-range vertices and that no two tets share a vertex set.
#[derive(Clone, Debug, PartialEq)]
pub struct TetMesh {
    n_vertices: usize,
    tets: Vec<[VertexId; 4]>,
    coords: Option<Vec<Point3>>,
}

impl TetMesh {
    pub fn new(
        n_vertices: usize,
        tets: Vec<[VertexId; 4]>,
        coords: Option<Vec<Point3>>,
    ) -> Result<Self, MeshError> {
        if tets.is_empty() {
            return Err(MeshError::Empty);
        }
        let mut seen = std::collections::HashMap::with_capacity(tets.len());
        for (t, tet) in tets.iter().enumerate() {
            for (k, v) in tet.iter().enumerate() {
                if v.0 >= n_vertices {
                    return Err(MeshError::IndexOutOfRange {
                        tet: t,
                        vertex: v.0,
                        n_vertices,
                    });
                }
                if tet[..k].contains(v) {
                    return Err(MeshError::RepeatedVertex { tet: t, vertex: v.0 });
                }
            }
            let mut key = *tet;
            key.sort_unstable();
            if let Some(first) = seen.insert(key, t) {
                return Err(MeshError::DuplicateTet { first, second: t });
            }
        }
        if let Some(c) = &coords {
            if c.len() != n_vertices {
                return Err(MeshError::CoordinateCount {
                    got: c.len(),
                    n_vertices,
                });
            }
            if let Some(i) = c.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
                return Err(MeshError::NonFiniteCoordinate(i));
            }
        }
        Ok(TetMesh {
            n_vertices,
            tets,
            coords,
        })
    }

    /// Convenience constructor from plain indices.
    pub fn from_indices(
        n_vertices: usize,
        tets: &[[usize; 4]],
        coords: Option<Vec<Point3>>,
    ) -> Result<Self, MeshError> {
        let tets = tets.iter().map(|t| t.map(VertexId)).collect();
        Self::new(n_vertices, tets, coords)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn tets(&self) -> &[[VertexId; 4]] {
        &self.tets
    }

    pub fn coords(&self) -> Option<&[Point3]> {
        self.coords.as_deref()
    }

    /// Same connectivity with a new coordinate assignment.
    pub fn with_coords(&self, coords: Vec<Point3>) -> Result<Self, MeshError> {
        Self::new(self.n_vertices, self.tets.clone(), Some(coords))
    }

    pub fn without_coords(&self) -> Self {
        TetMesh {
            n_vertices: self.n_vertices,
            tets: self.tets.clone(),
            coords: None,
        }
    }

    /// Vertices that appear in at least one tet.
    pub fn used_vertices(&self) -> HashSet<VertexId> {
        self.tets.iter().flatten().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_repeated_vertex() {
        let err = TetMesh::from_indices(4, &[[0, 0, 1, 2]], None).unwrap_err();
        assert_eq!(err, MeshError::RepeatedVertex { tet: 0, vertex: 0 });
    }

    #[test]
    fn rejects_out_of_range() {
        let err = TetMesh::from_indices(4, &[[0, 1, 2, 4]], None).unwrap_err();
        assert!(matches!(err, MeshError::IndexOutOfRange { vertex: 4, .. }));
    }

    #[test]
    fn rejects_duplicate_tet_in_any_order() {
        let err = TetMesh::from_indices(4, &[[0, 1, 2, 3], [3, 2, 1, 0]], None).unwrap_err();
        assert_eq!(err, MeshError::DuplicateTet { first: 0, second: 1 });
    }

    #[test]
    fn rejects_bad_coordinate_count() {
        let err = TetMesh::from_indices(4, &[[0, 1, 2, 3]], Some(vec![[0.0; 3]; 3])).unwrap_err();
        assert!(matches!(err, MeshError::CoordinateCount { got: 3, n_vertices: 4 }));
    }
}
