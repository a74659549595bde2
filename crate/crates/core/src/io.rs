//! Mesh files: a small JSON document and TetGen `.node`/`.ele` pairs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mesh::{MeshError, Point3, TetMesh};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: tet {tet} references vertex {vertex}, but only {n_vertices} vertices exist")]
    IndexOutOfRange {
        path: PathBuf,
        tet: usize,
        vertex: i64,
        n_vertices: usize,
    },
    #[error("{path}: {message}")]
    InconsistentCounts { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Mesh {
        path: PathBuf,
        #[source]
        source: MeshError,
    },
    #[error("unsupported format version {0}")]
    Version(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    /// A `.node`/`.ele` pair sharing a stem.
    TetGen,
}

impl Format {
    /// TetGen for `.node`/`.ele` paths, JSON otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("node" | "ele") => Format::TetGen,
            _ => Format::Json,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Point3>>,
    pub tets: Vec<[i64; 4]>,
}

impl From<&TetMesh> for MeshFile {
    fn from(m: &TetMesh) -> Self {
        MeshFile {
            version: FORMAT_VERSION,
            vertices: m.coords().map(<[Point3]>::to_vec),
            tets: m.tets().iter().map(|t| t.map(|v| v.0 as i64)).collect(),
        }
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.into(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Read {
        path: path.into(),
        source,
    })
}

/// Builds a mesh from raw tets, checking indices before anything else.
fn assemble(path: &Path, n: usize, tets: &[[i64; 4]], coords: Option<Vec<Point3>>) -> Result<TetMesh, IoError> {
    let mut checked = Vec::with_capacity(tets.len());
    for (i, t) in tets.iter().enumerate() {
        if let Some(&v) = t.iter().find(|&&v| v < 0 || v as usize >= n) {
            return Err(IoError::IndexOutOfRange {
                path: path.into(),
                tet: i,
                vertex: v,
                n_vertices: n,
            });
        }
        checked.push(t.map(|v| v as usize));
    }
    TetMesh::from_indices(n, &checked, coords).map_err(|source| IoError::Mesh {
        path: path.into(),
        source,
    })
}

/// Parses the JSON format. Without a `vertices` array the vertex count is one
/// more than the largest index.
pub fn parse_json(text: &str, path: &Path) -> Result<TetMesh, IoError> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.version != FORMAT_VERSION {
        return Err(IoError::Version(file.version));
    }
    let n = match &file.vertices {
        Some(v) => v.len(),
        None => file.tets.iter().flatten().map(|&v| v.max(0) as usize + 1).max().unwrap_or(0),
    };
    assemble(path, n, &file.tets, file.vertices)
}

pub fn to_json(mesh: &TetMesh) -> String {
    let mut s = serde_json::to_string_pretty(&MeshFile::from(mesh)).expect("mesh files serialize");
    s.push('\n');
    s
}

/// Non-comment lines as (1-based line number, tokens with 1-based columns).
fn data_lines(text: &str) -> Vec<(usize, Vec<(usize, &str)>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (j, ch) in body.char_indices() {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        tokens.push((s + 1, &body[s..j]));
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some(s) = start {
                tokens.push((s + 1, &body[s..]));
            }
            (!tokens.is_empty()).then_some((i + 1, tokens))
        })
        .collect()
}

struct Tokens<'a> {
    path: &'a Path,
    lines: Vec<(usize, Vec<(usize, &'a str)>)>,
}

impl<'a> Tokens<'a> {
    fn parse<T: std::str::FromStr>(&self, line: usize, idx: usize, what: &str) -> Result<T, IoError> {
        let (lineno, toks) = &self.lines[line];
        let err = |column, message| IoError::Parse {
            path: self.path.into(),
            line: *lineno,
            column,
            message,
        };
        let &(col, tok) = toks
            .get(idx)
            .ok_or_else(|| err(toks.last().map_or(1, |(c, t)| c + t.len()), format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| err(col, format!("expected {what}, found `{tok}`")))
    }

    fn header(&self, what: &str) -> Result<(usize, Vec<usize>), IoError> {
        if self.lines.is_empty() {
            return Err(IoError::Parse {
                path: self.path.into(),
                line: 1,
                column: 1,
                message: format!("missing {what} header"),
            });
        }
        let n: usize = self.parse(0, 0, "count")?;
        let rest = (1..self.lines[0].1.len())
            .map(|i| self.parse(0, i, "header field"))
            .collect::<Result<Vec<usize>, _>>()?;
        if self.lines.len() - 1 != n {
            return Err(IoError::InconsistentCounts {
                path: self.path.into(),
                message: format!("header declares {n} {what} entries, found {}", self.lines.len() - 1),
            });
        }
        Ok((n, rest))
    }
}

/// Parses a TetGen pair. The index base is taken from the first node index.
pub fn parse_tetgen(node: &str, ele: &str, node_path: &Path, ele_path: &Path) -> Result<TetMesh, IoError> {
    let nodes = Tokens {
        path: node_path,
        lines: data_lines(node),
    };
    let (n, header) = nodes.header("node")?;
    if header.first().is_some_and(|&d| d != 3) {
        return Err(IoError::Parse {
            path: node_path.into(),
            line: nodes.lines[0].0,
            column: nodes.lines[0].1[1].0,
            message: "only 3-dimensional node files are supported".into(),
        });
    }
    let mut base = 0;
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        let id: i64 = nodes.parse(i + 1, 0, "node index")?;
        if i == 0 {
            base = id;
            if base != 0 && base != 1 {
                return Err(IoError::InconsistentCounts {
                    path: node_path.into(),
                    message: format!("first node index is {id}, expected 0 or 1"),
                });
            }
        }
        if id != base + i as i64 {
            return Err(IoError::InconsistentCounts {
                path: node_path.into(),
                message: format!("node {id} out of sequence, expected {}", base + i as i64),
            });
        }
        let p: Point3 = [
            nodes.parse(i + 1, 1, "x coordinate")?,
            nodes.parse(i + 1, 2, "y coordinate")?,
            nodes.parse(i + 1, 3, "z coordinate")?,
        ];
        coords.push(p);
    }

    let eles = Tokens {
        path: ele_path,
        lines: data_lines(ele),
    };
    let (m, header) = eles.header("element")?;
    if header.first().is_some_and(|&k| k != 4) {
        return Err(IoError::Parse {
            path: ele_path.into(),
            line: eles.lines[0].0,
            column: eles.lines[0].1[1].0,
            message: "only 4-node tetrahedra are supported".into(),
        });
    }
    let mut tets = Vec::with_capacity(m);
    for i in 0..m {
        let mut t = [0i64; 4];
        for (k, slot) in t.iter_mut().enumerate() {
            *slot = eles.parse::<i64>(i + 1, k + 1, "node index")? - base;
        }
        tets.push(t);
    }
    assemble(ele_path, n, &tets, Some(coords))
}

/// TetGen text for `mesh`, 0-based. Meshes without coordinates cannot be written.
pub fn to_tetgen(mesh: &TetMesh) -> Option<(String, String)> {
    let coords = mesh.coords()?;
    let mut node = format!("{} 3 0 0\n", coords.len());
    for (i, p) in coords.iter().enumerate() {
        node.push_str(&format!("{i} {:?} {:?} {:?}\n", p[0], p[1], p[2]));
    }
    let mut ele = format!("{} 4 0\n", mesh.tets().len());
    for (i, t) in mesh.tets().iter().enumerate() {
        ele.push_str(&format!("{i} {} {} {} {}\n", t[0], t[1], t[2], t[3]));
    }
    Some((node, ele))
}

fn tetgen_paths(path: &Path) -> (PathBuf, PathBuf) {
    (path.with_extension("node"), path.with_extension("ele"))
}

pub fn load_mesh(path: &Path, format: Format) -> Result<TetMesh, IoError> {
    match format {
        Format::Json => parse_json(&read(path)?, path),
        Format::TetGen => {
            let (node, ele) = tetgen_paths(path);
            parse_tetgen(&read(&node)?, &read(&ele)?, &node, &ele)
        }
    }
}

pub fn save_mesh(mesh: &TetMesh, path: &Path, format: Format) -> Result<(), IoError> {
    match format {
        Format::Json => write(path, &to_json(mesh)),
        Format::TetGen => {
            let (node_path, ele_path) = tetgen_paths(path);
            let (node, ele) = to_tetgen(mesh).ok_or_else(|| IoError::InconsistentCounts {
                path: path.into(),
                message: "TetGen output needs vertex coordinates".into(),
            })?;
            write(&node_path, &node)?;
            write(&ele_path, &ele)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn p() -> &'static Path {
        Path::new("test")
    }

    #[test]
    fn minimal_json() {
        let m = parse_json(r#"{"version": 1, "tets": [[0, 1, 2, 3]]}"#, p()).unwrap();
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.tets().len(), 1);
        assert!(m.coords().is_none());
    }

    #[test]
    fn repeated_index_is_rejected() {
        let e = parse_json(r#"{"version": 1, "tets": [[0, 0, 1, 2]]}"#, p()).unwrap_err();
        assert!(matches!(e, IoError::Mesh { source: MeshError::RepeatedVertex { .. }, .. }));
    }

    #[test]
    fn out_of_range_and_negative_indices() {
        let text = r#"{"version": 1, "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]], "tets": [[0, 1, 2, 4]]}"#;
        assert!(matches!(parse_json(text, p()), Err(IoError::IndexOutOfRange { vertex: 4, .. })));
        let text = r#"{"version": 1, "tets": [[0, 1, 2, -1]]}"#;
        assert!(matches!(parse_json(text, p()), Err(IoError::IndexOutOfRange { vertex: -1, .. })));
    }

    #[test]
    fn json_errors_carry_positions() {
        let e = parse_json("{\"version\": 1,\n \"tets\": [[0, 1, 2, x]]}", p()).unwrap_err();
        match e {
            IoError::Parse { line, column, .. } => assert_eq!((line, column), (2, 21)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_json(r#"{"version": 2, "tets": []}"#, p()),
            Err(IoError::Version(2))
        ));
    }

    #[test]
    fn json_round_trip() {
        for m in [generators::floater(), generators::split_tet().without_coords()] {
            let text = to_json(&m);
            let back = parse_json(&text, p()).unwrap();
            assert_eq!(back, m);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn tetgen_one_based() {
        let node = "# unit tet\n4 3 0 0\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1 # apex\n";
        let ele = "1 4 0\n1 1 2 3 4\n";
        let m = parse_tetgen(node, ele, p(), p()).unwrap();
        assert_eq!(m.tets()[0].map(|v| v.0), [0, 1, 2, 3]);
        assert_eq!(m.coords().unwrap()[3], [0.0, 0.0, 1.0]);
    }

    #[test]
    fn tetgen_errors() {
        let node = "4 3 0 0\n0 0 0 0\n1 1 0 0\n2 0 1 0\n3 0 0 1\n";
        let e = parse_tetgen(node, "1 4 0\n0 0 1 2 4\n", p(), p()).unwrap_err();
        assert!(matches!(e, IoError::IndexOutOfRange { vertex: 4, .. }));
        let e = parse_tetgen(node, "2 4 0\n0 0 1 2 3\n", p(), p()).unwrap_err();
        assert!(matches!(e, IoError::InconsistentCounts { .. }));
        let e = parse_tetgen("2 3 0 0\n0 0 0 0\n1 1 zero 0\n", "", p(), p()).unwrap_err();
        match e {
            IoError::Parse { line, column, .. } => assert_eq!((line, column), (3, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tetgen_round_trip() {
        let m = generators::stacked_octahedron();
        let (node, ele) = to_tetgen(&m).unwrap();
        let back = parse_tetgen(&node, &ele, p(), p()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn files_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let m = generators::floater();
        let json = dir.path().join("f6.json");
        save_mesh(&m, &json, Format::Json).unwrap();
        assert_eq!(load_mesh(&json, Format::from_path(&json)).unwrap(), m);
        let tg = dir.path().join("f6.node");
        save_mesh(&m, &tg, Format::TetGen).unwrap();
        assert!(dir.path().join("f6.ele").exists());
        assert_eq!(load_mesh(&tg, Format::from_path(&tg)).unwrap(), m);
        assert!(matches!(
            load_mesh(&dir.path().join("missing.json"), Format::Json),
            Err(IoError::Read { .. })
        ));
    }
}
