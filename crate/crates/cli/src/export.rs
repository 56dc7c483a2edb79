//! DOT graphs and JSON records for quivers and reports.

use std::fmt::Write as _;

use serde::Serialize;
use strongdim::arquiver::{ARQuiver, DerivedWindow, GammaBar};
use strongdim::{Complex, Field, MonomialAlgebra, PathMatrix};

use crate::algfile::AlgebraFile;

pub const SCHEMA_VERSION: u32 = 1;

/// Entry syntax shared with algebra files: `2*a b + e2`, rows split by `;`.
pub fn matrix_text<F: Field>(alg: &MonomialAlgebra, m: &PathMatrix<F>) -> String {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| {
                    let e = m.entry(r, c);
                    if e.is_empty() {
                        return "0".to_string();
                    }
                    e.iter()
                        .map(|(&p, x)| {
                            let path = alg.path(p);
                            let name = if path.arrows.is_empty() {
                                format!("e{}", alg.quiver().vertex_id(path.source))
                            } else {
                                path.arrows
                                    .iter()
                                    .map(|&a| alg.quiver().arrows()[a].name.as_str())
                                    .collect::<Vec<_>>()
                                    .join(" ")
                            };
                            if x.is_one() {
                                name
                            } else {
                                format!("{x}*{name}")
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" + ")
                })
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Cells and differentials, one line per nonzero differential of the support.
pub fn complex_lines<F: Field>(alg: &MonomialAlgebra, x: &Complex<F>) -> Vec<String> {
    let Some((r, s)) = x.support() else {
        return Vec::new();
    };
    (r..s)
        .map(|pos| {
            let name = |p: usize| {
                x.cell(p)
                    .iter()
                    .map(|&v| format!("P{}", alg.quiver().vertex_id(v)))
                    .collect::<Vec<_>>()
                    .join("+")
            };
            let name = |p: usize| if x.cell(p).is_empty() { "0".to_string() } else { name(p) };
            format!("d{pos}: {} -> {} = [{}]", name(pos), name(pos + 1), matrix_text(alg, x.diff(pos)))
        })
        .collect()
}

/// Compact label such as `P3->P2->0`.
pub fn class_label<F: Field>(alg: &MonomialAlgebra, x: &Complex<F>) -> String {
    x.describe(alg).replace(" -> ", "->")
}

/// Stable node id from the full text of a representative.
pub fn class_id<F: Field>(alg: &MonomialAlgebra, x: &Complex<F>) -> String {
    let mut text = x.describe(alg);
    for pos in 1..x.window() {
        let _ = write!(text, "|{}", matrix_text(alg, x.diff(pos)));
    }
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("c{h:016x}")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VertexRecord {
    pub id: String,
    pub label: String,
    pub cells: Vec<Vec<u32>>,
    pub projective: bool,
    pub injective: bool,
    pub proj_injective: bool,
    pub length: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArrowRecord {
    pub source: String,
    pub target: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct TauRecord {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MiddleRecord {
    pub class: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConflationRecord {
    pub x: String,
    pub middle: Vec<MiddleRecord>,
    pub z: String,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuiverRecord {
    pub window: usize,
    pub closed: bool,
    pub vertices: Vec<VertexRecord>,
    pub arrows: Vec<ArrowRecord>,
    pub tau: Vec<TauRecord>,
    pub conflations: Vec<ConflationRecord>,
}

pub fn quiver_record<F: Field>(alg: &MonomialAlgebra, q: &ARQuiver<F>) -> QuiverRecord {
    let ids: Vec<String> = (0..q.len()).map(|k| class_id(alg, q.class(k))).collect();
    QuiverRecord {
        window: q.window(),
        closed: q.universe.closed,
        vertices: (0..q.len())
            .map(|k| {
                let x = q.class(k);
                VertexRecord {
                    id: ids[k].clone(),
                    label: class_label(alg, x),
                    cells: x
                        .cells()
                        .iter()
                        .map(|c| c.iter().map(|&v| alg.quiver().vertex_id(v)).collect())
                        .collect(),
                    projective: q.flags[k].projective,
                    injective: q.flags[k].injective,
                    proj_injective: q.flags[k].proj_injective(),
                    length: x.length(alg),
                }
            })
            .collect(),
        arrows: q
            .arrows
            .iter()
            .map(|(&(s, t), &m)| ArrowRecord {
                source: ids[s].clone(),
                target: ids[t].clone(),
                multiplicity: m,
            })
            .collect(),
        tau: q
            .tau
            .iter()
            .map(|(&z, &x)| TauRecord {
                from: ids[z].clone(),
                to: ids[x].clone(),
            })
            .collect(),
        conflations: q
            .conflations
            .iter()
            .map(|c| ConflationRecord {
                x: ids[c.x_class].clone(),
                middle: c
                    .middle
                    .iter()
                    .map(|(&k, &m)| MiddleRecord {
                        class: ids[k].clone(),
                        multiplicity: m,
                    })
                    .collect(),
                z: ids[c.z_class].clone(),
                certified: c.certified,
            })
            .collect(),
    }
}

/// One node per class, solid arrows with multiplicities, dashed `τ` edges from `Z` to `τZ`.
pub fn quiver_dot(name: &str, q: &QuiverRecord) -> String {
    let mut s = format!("digraph {} {{\n  rankdir=LR;\n  node [fontname=\"monospace\"];\n", quote(name));
    for v in &q.vertices {
        let shape = if v.projective { "box" } else { "ellipse" };
        let peripheries = if v.injective { 2 } else { 1 };
        let _ = writeln!(
            s,
            "  {} [label={}, shape={shape}, peripheries={peripheries}];",
            v.id,
            quote(&v.label)
        );
    }
    for a in &q.arrows {
        let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", a.source, a.target, a.multiplicity);
    }
    for t in &q.tau {
        let _ = writeln!(s, "  {} -> {} [style=dashed, constraint=false];", t.from, t.to);
    }
    s.push_str("}\n");
    s
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WindowVertexRecord {
    pub id: String,
    pub label: String,
    pub class: String,
    pub t: i64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DerivedRecord {
    pub eta: usize,
    pub gamma_bar: Vec<String>,
    pub anchor: String,
    pub vertices: Vec<WindowVertexRecord>,
    pub arrows: Vec<ArrowRecord>,
    pub tau: Vec<TauRecord>,
    pub unglued: Vec<i64>,
}

pub fn derived_record<F: Field>(
    alg: &MonomialAlgebra,
    q: &ARQuiver<F>,
    gb: &GammaBar,
    w: &DerivedWindow,
) -> DerivedRecord {
    let class_ids: Vec<String> = gb.classes.iter().map(|&k| class_id(alg, q.class(k))).collect();
    let ids: Vec<String> = w
        .vertices
        .iter()
        .map(|&(v, t)| {
            let t = if t < 0 { format!("m{}", -t) } else { t.to_string() };
            format!("{}_t{t}", class_ids[v])
        })
        .collect();
    DerivedRecord {
        eta: gb.eta,
        gamma_bar: class_ids.clone(),
        anchor: class_ids[gb.anchor].clone(),
        vertices: w
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &(v, t))| WindowVertexRecord {
                id: ids[i].clone(),
                label: format!("({}, {t})", class_label(alg, q.class(gb.classes[v]))),
                class: class_ids[v].clone(),
                t,
            })
            .collect(),
        arrows: w
            .quiver
            .arrows
            .iter()
            .map(|(&(s, t), &m)| ArrowRecord {
                source: ids[s].clone(),
                target: ids[t].clone(),
                multiplicity: m,
            })
            .collect(),
        tau: w
            .quiver
            .tau
            .iter()
            .map(|(&z, &x)| TauRecord {
                from: ids[z].clone(),
                to: ids[x].clone(),
            })
            .collect(),
        unglued: w.unglued.clone(),
    }
}

pub fn derived_dot(name: &str, d: &DerivedRecord) -> String {
    let mut s = format!("digraph {} {{\n  rankdir=LR;\n  node [fontname=\"monospace\"];\n", quote(name));
    for v in &d.vertices {
        let _ = writeln!(s, "  {} [label={}];", v.id, quote(&v.label));
    }
    for a in &d.arrows {
        let _ = writeln!(s, "  {} -> {} [label=\"{}\"];", a.source, a.target, a.multiplicity);
    }
    for t in &d.tau {
        let _ = writeln!(s, "  {} -> {} [style=dashed, constraint=false];", t.from, t.to);
    }
    s.push_str("}\n");
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowEcho {
    pub name: String,
    pub source: u32,
    pub target: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraEcho {
    pub vertices: Vec<u32>,
    pub arrows: Vec<ArrowEcho>,
    pub relations: Vec<Vec<String>>,
    pub field: String,
}

impl From<&AlgebraFile> for AlgebraEcho {
    fn from(f: &AlgebraFile) -> Self {
        AlgebraEcho {
            vertices: f.vertices.clone(),
            arrows: f
                .arrows
                .iter()
                .map(|a| ArrowEcho {
                    name: a.name.clone(),
                    source: a.source,
                    target: a.target,
                })
                .collect(),
            relations: f.relations.clone(),
            field: f.field.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub config: serde_json::Value,
    pub algebra: AlgebraEcho,
    pub payload: serde_json::Value,
    /// Every universe behind the payload was certified closed.
    pub certified: bool,
    pub timing_ms: u128,
}
