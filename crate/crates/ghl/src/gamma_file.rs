//! Parser for vertex-oriented graph files.
//!
//! ```text
//! gamma <name>
//! vertices <k>
//! edge <ename> <u> <v>          # 0-based vertices, loops allowed (u = v)
//! orient <v> <dart,dart,...>    # darts written <ename>.0 / <ename>.1
//! base <v>                      # optional
//! ```
//!
//! Blank lines and `#` comments are ignored. Every vertex needs exactly one
//! `orient` line covering its darts exactly once. Errors carry the line
//! number of the offending statement.

use std::collections::BTreeMap;
use std::path::Path;

use ghl_core::halfedge::HalfEdgeGraph;
use ghl_core::morita::VertexOrientedGraph;

use crate::{CliError, CliResult};

/// A parsed gamma file: the oriented graph plus the optional base vertex.
#[derive(Debug, Clone)]
pub struct GammaFile {
    pub gamma: VertexOrientedGraph,
    pub base: Option<u32>,
}

pub fn read_gamma_file(path: &Path) -> CliResult<GammaFile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_gamma(&text, path)
}

pub fn parse_gamma(text: &str, path: &Path) -> CliResult<GammaFile> {
    let err = |line: usize, msg: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut name: Option<String> = None;
    let mut num_vertices: Option<u32> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut edge_names: BTreeMap<String, u32> = BTreeMap::new();
    let mut orient_lines: BTreeMap<u32, (usize, Vec<String>)> = BTreeMap::new();
    let mut base: Option<u32> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        match keyword {
            "gamma" => {
                if rest.len() != 1 {
                    return Err(err(lineno, "expected: gamma <name>".into()));
                }
                name = Some(rest[0].to_string());
            }
            "vertices" => {
                let k: u32 = rest
                    .first()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(lineno, "expected: vertices <count>".into()))?;
                if k == 0 {
                    return Err(err(lineno, "vertex count must be positive".into()));
                }
                num_vertices = Some(k);
            }
            "edge" => {
                let nv = num_vertices
                    .ok_or_else(|| err(lineno, "edge before vertices line".into()))?;
                if rest.len() != 3 {
                    return Err(err(lineno, "expected: edge <name> <u> <v>".into()));
                }
                let ename = rest[0].to_string();
                if edge_names.contains_key(&ename) {
                    return Err(err(lineno, format!("duplicate edge name {ename}")));
                }
                let u: u32 = rest[1]
                    .parse()
                    .map_err(|_| err(lineno, format!("bad vertex index {}", rest[1])))?;
                let v: u32 = rest[2]
                    .parse()
                    .map_err(|_| err(lineno, format!("bad vertex index {}", rest[2])))?;
                if u >= nv || v >= nv {
                    return Err(err(lineno, format!("vertex index out of range 0..{nv}")));
                }
                edge_names.insert(ename, edges.len() as u32);
                edges.push((u, v));
            }
            "orient" => {
                let nv = num_vertices
                    .ok_or_else(|| err(lineno, "orient before vertices line".into()))?;
                if rest.len() != 2 {
                    return Err(err(lineno, "expected: orient <v> <dart,dart,...>".into()));
                }
                let v: u32 = rest[0]
                    .parse()
                    .map_err(|_| err(lineno, format!("bad vertex index {}", rest[0])))?;
                if v >= nv {
                    return Err(err(lineno, format!("vertex index out of range 0..{nv}")));
                }
                if orient_lines.contains_key(&v) {
                    return Err(err(lineno, format!("second orient line for vertex {v}")));
                }
                let darts: Vec<String> =
                    rest[1].split(',').map(|s| s.trim().to_string()).collect();
                orient_lines.insert(v, (lineno, darts));
            }
            "base" => {
                let v: u32 = rest
                    .first()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(lineno, "expected: base <v>".into()))?;
                base = Some(v);
            }
            other => {
                return Err(err(lineno, format!("unknown keyword {other}")));
            }
        }
    }

    let name = name.ok_or_else(|| err(0, "missing gamma line".into()))?;
    let nv = num_vertices.ok_or_else(|| err(0, "missing vertices line".into()))?;
    if let Some(b) = base {
        if b >= nv {
            return Err(err(0, format!("base vertex {b} out of range 0..{nv}")));
        }
    }
    let graph = HalfEdgeGraph::from_edges(nv, &edges, None)
        .map_err(|e| err(0, format!("{e}")))?;

    // translate dart names per vertex, demanding exact coverage
    let mut orientations: Vec<Vec<u32>> = Vec::with_capacity(nv as usize);
    for v in 0..nv {
        let Some((lineno, darts)) = orient_lines.get(&v) else {
            return Err(err(0, format!("missing orient line for vertex {v}")));
        };
        let mut ord: Vec<u32> = Vec::with_capacity(darts.len());
        for dname in darts {
            let (ename, side) = dname.rsplit_once('.').ok_or_else(|| {
                err(*lineno, format!("dart {dname} is not of the form <edge>.0|1"))
            })?;
            let side: u32 = match side {
                "0" => 0,
                "1" => 1,
                _ => {
                    return Err(err(
                        *lineno,
                        format!("dart {dname} must end in .0 or .1"),
                    ))
                }
            };
            let e = edge_names
                .get(ename)
                .ok_or_else(|| err(*lineno, format!("unknown edge name {ename}")))?;
            ord.push(2 * e + side);
        }
        let mut expected = graph.darts_at(v);
        let mut got = ord.clone();
        expected.sort_unstable();
        got.sort_unstable();
        if expected != got {
            return Err(err(
                *lineno,
                format!("orient line for vertex {v} must list its darts exactly once"),
            ));
        }
        orientations.push(ord);
    }

    let gamma = VertexOrientedGraph::new(graph, orientations, &name)
        .map_err(|e| err(0, format!("{e}")))?;
    Ok(GammaFile { gamma, base })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<GammaFile> {
        parse_gamma(text, Path::new("test.gamma"))
    }

    #[test]
    fn parses_theta() {
        let g = parse(
            "gamma theta\nvertices 2\nedge a 0 1\nedge b 0 1\nedge c 0 1\n\
             orient 0 a.0,b.0,c.0\norient 1 a.1,b.1,c.1\nbase 0\n",
        )
        .unwrap();
        assert_eq!(g.gamma.name(), "theta");
        assert!(g.gamma.is_admissible());
        assert_eq!(g.base, Some(0));
    }

    #[test]
    fn loops_are_allowed() {
        // valences: 0 -> 3+2 = 5? no: loop at 0 gives 2 darts, plus 3 edges
        let g = parse(
            "gamma loopy\nvertices 2\nedge l 0 0\nedge a 0 1\nedge b 0 1\nedge c 0 1\n\
             orient 0 l.0,l.1,a.0,b.0,c.0\norient 1 a.1,b.1,c.1\n",
        )
        .unwrap();
        assert_eq!(g.gamma.valences(), vec![5, 3]);
        assert!(g.gamma.is_admissible());
    }

    #[test]
    fn missing_orient_names_the_vertex() {
        let e = parse(
            "gamma bad\nvertices 2\nedge a 0 1\nedge b 0 1\nedge c 0 1\norient 0 a.0,b.0,c.0\n",
        )
        .unwrap_err();
        assert!(format!("{e}").contains("vertex 1"), "{e}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("gamma bad\nvertices 2\nedge a 0 5\n").unwrap_err();
        assert!(format!("{e}").contains(":3:"), "{e}");
        let e = parse("gamma bad\nvertices 1\nedge a 0 0\norient 0 a.0,a.2\n").unwrap_err();
        assert!(format!("{e}").contains(":4:"), "{e}");
    }
}
