//! DOT and JSON renderings of a window, optionally colored by a partition.

use std::fmt::Write;

use endscope_core::ends::ComponentPartition;
use endscope_core::Window;
use serde::Serialize;

// Graphviz X11 names, cycled when a partition has more components.
const PALETTE: &[&str] = &[
    "lightblue", "lightsalmon", "palegreen", "khaki", "plum", "lightpink", "aquamarine", "wheat", "lightgray",
    "lightcoral", "thistle", "lightcyan",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Vertices in window order labeled `key` and distance, then edges by key.
pub fn to_dot(w: &Window, partition: Option<&ComponentPartition>) -> String {
    let mut out = String::new();
    writeln!(out, "graph endscope {{").unwrap();
    writeln!(out, "  // {} around {} at radius {}", w.spec().ident(), w.basepoint(), w.radius()).unwrap();
    if partition.is_some() {
        writeln!(out, "  node [style=filled];").unwrap();
    }
    for v in w.vertices() {
        let key = w.key(v).as_str();
        let label = quote(&format!("{key}\\nd={}", w.distance(v)));
        match partition {
            Some(p) => {
                let color = PALETTE[p.component_of(v) % PALETTE.len()];
                writeln!(out, "  {} [label={label}, fillcolor={color}];", quote(key)).unwrap();
            }
            None => writeln!(out, "  {} [label={label}];", quote(key)).unwrap(),
        }
    }
    let mut edges: Vec<_> = w.edges().map(|(e, _, _)| w.edge_keys(e)).collect();
    edges.sort();
    for e in edges {
        writeln!(out, "  {} -- {};", quote(e.a.as_str()), quote(e.b.as_str())).unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct VertexDto {
    pub key: String,
    pub distance: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
}

#[derive(Serialize)]
pub struct WindowDto {
    pub schema: &'static str,
    pub graph: String,
    pub basepoint: String,
    pub radius: u32,
    pub closed: bool,
    pub vertices: Vec<VertexDto>,
    pub edges: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
}

pub fn to_json(w: &Window, partition: Option<&ComponentPartition>) -> WindowDto {
    let mut edges: Vec<_> = w.edges().map(|(e, _, _)| w.edge_keys(e)).collect();
    edges.sort();
    WindowDto {
        schema: "endscope.window/1",
        graph: w.spec().ident(),
        basepoint: w.basepoint().to_string(),
        radius: w.radius(),
        closed: w.is_closed(),
        vertices: w
            .vertices()
            .map(|v| VertexDto {
                key: w.key(v).to_string(),
                distance: w.distance(v),
                component: partition.map(|p| p.component_of(v)),
            })
            .collect(),
        edges: edges.into_iter().map(|e| [e.a.to_string(), e.b.to_string()]).collect(),
        components: partition.map(|p| p.components().iter().map(|c| c.id.to_string()).collect()),
    }
}
