//! Where a graph comes from: a catalog name, a JSON spec file, or an edge list.

use std::fs;
use std::path::{Path, PathBuf};

use endscope_core::{FiniteGraph, GraphSpec};
use serde::Deserialize;

use crate::error::{Failure, Result};

/// A resolved graph plus the defaults its source carries.
#[derive(Clone, Debug)]
pub struct GraphSource {
    pub spec: GraphSpec,
    pub basepoint: Option<String>,
    pub radius: Option<u32>,
}

/// `{kind, params, basepoint, radius}`; finite graphs carry `edges` inline or
/// name an `edge_list` file relative to the spec file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    kind: String,
    #[serde(default)]
    params: Vec<u32>,
    basepoint: Option<String>,
    radius: Option<u32>,
    edges: Option<Vec<(String, String)>>,
    edge_list: Option<PathBuf>,
}

/// Parses an edge list: one `u v` pair per line, a lone key for an isolated
/// vertex, `#` starts a comment.
pub fn parse_edge_list(text: &str) -> std::result::Result<FiniteGraph, String> {
    let mut pairs = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[..] {
            [v] => pairs.push((v, v)),
            [u, v] => pairs.push((u, v)),
            _ => return Err(format!("line {}: expected one or two keys", no + 1)),
        }
    }
    if pairs.is_empty() {
        return Err("no vertices".into());
    }
    FiniteGraph::from_edges(pairs).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn from_spec_file(path: &Path) -> Result<GraphSource> {
    let file: SpecFile = serde_json::from_str(&read(path)?).map_err(|e| Failure::parse(path, e))?;
    let spec = match file.kind.as_str() {
        "finite" => {
            let graph = match (file.edges, file.edge_list) {
                (Some(edges), None) => FiniteGraph::from_edges(edges)?,
                (None, Some(list)) => {
                    let list = path.parent().unwrap_or(Path::new(".")).join(list);
                    parse_edge_list(&read(&list)?).map_err(|m| Failure::parse(&list, m))?
                }
                _ => return Err(Failure::parse(path, "finite graphs need exactly one of edges and edge_list")),
            };
            GraphSpec::finite(graph)
        }
        kind => {
            let params: Vec<String> = file.params.iter().map(u32::to_string).collect();
            let name = if params.is_empty() { kind.to_string() } else { format!("{kind}:{}", params.join(",")) };
            GraphSpec::parse_catalog(&name)?
        }
    };
    Ok(GraphSource { spec, basepoint: file.basepoint, radius: file.radius })
}

/// Resolves `--graph`. Existing files win over catalog names; `.json` files
/// are spec files, anything else is an edge list.
pub fn load_graph(arg: &str) -> Result<GraphSource> {
    let path = Path::new(arg);
    if path.is_file() {
        if path.extension().is_some_and(|e| e == "json") {
            return from_spec_file(path);
        }
        let graph = parse_edge_list(&read(path)?).map_err(|m| Failure::parse(path, m))?;
        return Ok(GraphSource { spec: GraphSpec::finite(graph), basepoint: None, radius: None });
    }
    Ok(GraphSource { spec: GraphSpec::parse_catalog(arg)?, basepoint: None, radius: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_lists() {
        let g = parse_edge_list("# square\na b\nb c\nc d\nd a\n\nz  # isolated\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 4));
        assert!(parse_edge_list("a b c").is_err());
        assert!(parse_edge_list("# nothing").is_err());
    }

    #[test]
    fn spec_files() {
        let dir = std::env::temp_dir().join(format!("endscope-source-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let f = dir.join("f2.json");
        fs::write(&f, r#"{"kind": "free-group", "params": [2], "basepoint": "e", "radius": 6}"#).unwrap();
        let s = load_graph(f.to_str().unwrap()).unwrap();
        assert_eq!((s.spec.ident().as_str(), s.radius), ("free-group(2)", Some(6)));
        fs::write(dir.join("tri.edges"), "a b\nb c\nc a\n").unwrap();
        let f = dir.join("tri.json");
        fs::write(&f, r#"{"kind": "finite", "edge_list": "tri.edges"}"#).unwrap();
        assert!(!load_graph(f.to_str().unwrap()).unwrap().spec.is_cayley());
        fs::write(&f, r#"{"kind": "finite", "colour": 1}"#).unwrap();
        assert!(matches!(load_graph(f.to_str().unwrap()), Err(Failure::Parse { .. })));
        fs::remove_dir_all(&dir).unwrap();
    }
}
