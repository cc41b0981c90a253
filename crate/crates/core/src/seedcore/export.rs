//! DOT and JSON renderings of a quiver.
//!
//! JSON layout (`schema` 1):
//!
//! ```text
//! { "schema": 1, "n": 2,
//!   "vertices": [ { "name": "g_1_1", "kind": "stable", "order": 1 }, ... ],
//!   "arrows":   [ { "from": "g_1_1", "to": "g_2_2", "multiplicity": 1 }, ... ] }
//! ```
//!
//! Vertices follow the quiver's vertex order, arrows are sorted by name.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Quiver, VertexKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub name: String,
    pub kind: String,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub from: String,
    pub to: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub schema: u32,
    pub n: usize,
    pub vertices: Vec<VertexDoc>,
    pub arrows: Vec<ArrowDoc>,
}

impl QuiverDoc {
    pub fn from_quiver(q: &Quiver) -> Self {
        Self {
            schema: 1,
            n: q.n,
            vertices: q
                .vertices
                .iter()
                .map(|v| VertexDoc {
                    name: v.name(),
                    kind: match v.kind {
                        VertexKind::Mutable => "mutable",
                        VertexKind::Stable => "stable",
                        VertexKind::Isolated => "isolated",
                    }
                    .to_string(),
                    order: v.order,
                })
                .collect(),
            arrows: q
                .named_arrows()
                .into_iter()
                .map(|(from, to, multiplicity)| ArrowDoc {
                    from,
                    to,
                    multiplicity,
                })
                .collect(),
        }
    }
}

pub fn to_json(q: &Quiver) -> String {
    serde_json::to_string_pretty(&QuiverDoc::from_quiver(q)).expect("quiver document serializes")
}

/// DOT digraph: boxes for stable vertices, dashed boxes for isolated ones,
/// a hexagon for the special vertex; parallel arrows are repeated edges.
pub fn to_dot(q: &Quiver) -> String {
    let mut out = String::new();
    writeln!(out, "digraph Q{} {{", q.n).unwrap();
    for v in &q.vertices {
        let attrs = match v.kind {
            VertexKind::Stable => " [shape=box]",
            VertexKind::Isolated => " [shape=box, style=dashed]",
            VertexKind::Mutable if v.is_special() => " [shape=hexagon]",
            VertexKind::Mutable => "",
        };
        writeln!(out, "  \"{}\"{};", v.name(), attrs).unwrap();
    }
    for (from, to, m) in q.named_arrows() {
        for _ in 0..m {
            writeln!(out, "  \"{from}\" -> \"{to}\";").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
