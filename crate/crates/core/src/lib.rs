//! Convex-combination (Tutte-style) embeddings of tetrahedral meshes: mesh
//! validation against the combinatorial hypotheses, minor testing for K6 and
//! K3,3,1, the linear solve, and independent embedding certificates.

pub mod complex;
pub mod connectivity;
pub mod embed;
pub mod experiment;
pub mod generators;
pub mod geom;
pub mod graph;
pub mod io;
pub mod mesh;
pub mod minors;
pub mod validate;
pub mod verify;

pub use complex::{build_complex, mesh_graph, Complex, ComplexError};
pub use embed::{EmbedError, RealizedMesh};
pub use geom::Tolerance;
pub use graph::Graph;
pub use mesh::{MeshError, Point3, TetMesh, VertexId};
pub use verify::{certify, EmbeddingCertificate, Verdict};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x7e7_5eed;
