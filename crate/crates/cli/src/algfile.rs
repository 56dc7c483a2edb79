//! Plain-text algebra descriptions.
//!
//! ```text
//! vertices: 1 2 3
//! arrow a: 1 -> 2
//! arrow b: 2 -> 3
//! relation: a b
//! field: rational
//! ```
//!
//! An optional complex may follow as `cell <pos>: <vertex ids>` lines and
//! `differential <pos>: <matrix>` lines. Matrix rows are separated by `;`,
//! entries by `,`, and an entry is a sum of terms such as `2*a b + e2` or `0`.

use std::fmt::Write as _;

use strongdim::{Complex, Field, FieldTag, MonomialAlgebra, PathMatrix};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    pub source: u32,
    pub target: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSpec {
    Trivial(u32),
    Arrows(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub path: PathSpec,
}

/// Entry `(r, c)` of a differential is a sum of terms; an empty sum is zero.
pub type EntrySpec = Vec<Term>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexDecl {
    pub cells: Vec<Vec<u32>>,
    pub diffs: Vec<Vec<Vec<EntrySpec>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub vertices: Vec<u32>,
    pub arrows: Vec<ArrowDecl>,
    pub relations: Vec<Vec<String>>,
    pub field: FieldTag,
    pub complex: Option<ComplexDecl>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn parse_id(line: usize, s: &str) -> Result<u32, ParseError> {
    s.parse().map_err(|_| err(line, format!("invalid vertex id `{s}`")))
}

fn parse_field(line: usize, s: &str) -> Result<FieldTag, ParseError> {
    match s {
        "rational" => Ok(FieldTag::Rational),
        "gf2" => Ok(FieldTag::Prime(2)),
        "gf3" => Ok(FieldTag::Prime(3)),
        _ => Err(err(line, format!("unknown field `{s}` (expected rational, gf2 or gf3)"))),
    }
}

fn parse_term(line: usize, s: &str) -> Result<Term, ParseError> {
    let (coeff, path) = match s.split_once('*') {
        Some((c, p)) => (
            c.trim().parse::<i64>().map_err(|_| err(line, format!("invalid coefficient `{c}`")))?,
            p.trim(),
        ),
        None => (1, s.trim()),
    };
    let words: Vec<&str> = path.split_whitespace().collect();
    let path = match words.as_slice() {
        [] => return Err(err(line, "empty term")),
        [w] if w.starts_with('e') && w[1..].parse::<u32>().is_ok() => PathSpec::Trivial(w[1..].parse().expect("checked")),
        _ => PathSpec::Arrows(words.iter().map(|w| w.to_string()).collect()),
    };
    Ok(Term { coeff, path })
}

fn parse_matrix(line: usize, s: &str) -> Result<Vec<Vec<EntrySpec>>, ParseError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|entry| {
                    let entry = entry.trim();
                    if entry == "0" {
                        Ok(Vec::new())
                    } else {
                        entry.split('+').map(|t| parse_term(line, t)).collect()
                    }
                })
                .collect()
        })
        .collect()
}

fn positional(line: usize, key: &str, word: &str) -> Result<usize, ParseError> {
    let pos: usize = key[word.len()..]
        .trim()
        .parse()
        .map_err(|_| err(line, format!("`{key}` needs a position")))?;
    if pos == 0 {
        return Err(err(line, "positions start at 1"));
    }
    Ok(pos)
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut vertices: Option<Vec<u32>> = None;
        let mut arrows = Vec::new();
        let mut relations = Vec::new();
        let mut field = None;
        let mut cells: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut diffs: Vec<(usize, Vec<Vec<EntrySpec>>)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once(':')
                .ok_or_else(|| err(line, "expected `key: value`"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "vertices" => {
                    if vertices.is_some() {
                        return Err(err(line, "duplicate `vertices`"));
                    }
                    vertices = Some(
                        value
                            .split_whitespace()
                            .map(|s| parse_id(line, s))
                            .collect::<Result<_, _>>()?,
                    );
                }
                "field" => {
                    if field.is_some() {
                        return Err(err(line, "duplicate `field`"));
                    }
                    field = Some(parse_field(line, value)?);
                }
                "relation" => {
                    let words: Vec<String> = value.split_whitespace().map(String::from).collect();
                    if words.is_empty() {
                        return Err(err(line, "empty relation"));
                    }
                    relations.push(words);
                }
                _ if key.starts_with("arrow ") => {
                    let name = key["arrow ".len()..].trim();
                    if name.is_empty() || name.contains(char::is_whitespace) {
                        return Err(err(line, "arrow names are single words"));
                    }
                    let (s, t) = value
                        .split_once("->")
                        .ok_or_else(|| err(line, "expected `source -> target`"))?;
                    arrows.push(ArrowDecl {
                        name: name.to_string(),
                        source: parse_id(line, s.trim())?,
                        target: parse_id(line, t.trim())?,
                    });
                }
                _ if key.starts_with("cell") => {
                    let pos = positional(line, key, "cell")?;
                    if cells.iter().any(|(p, _)| *p == pos) {
                        return Err(err(line, format!("duplicate cell {pos}")));
                    }
                    let ids = value
                        .split_whitespace()
                        .map(|s| parse_id(line, s))
                        .collect::<Result<_, _>>()?;
                    cells.push((pos, ids));
                }
                _ if key.starts_with("differential") => {
                    let pos = positional(line, key, "differential")?;
                    if diffs.iter().any(|(p, _)| *p == pos) {
                        return Err(err(line, format!("duplicate differential {pos}")));
                    }
                    diffs.push((pos, parse_matrix(line, value)?));
                }
                _ => return Err(err(line, format!("unknown key `{key}`"))),
            }
        }
        let vertices = vertices.ok_or_else(|| err(0, "missing `vertices`"))?;
        let field = field.ok_or_else(|| err(0, "missing `field`"))?;
        let complex = if cells.is_empty() && diffs.is_empty() {
            None
        } else {
            cells.sort_by_key(|(p, _)| *p);
            diffs.sort_by_key(|(p, _)| *p);
            let window = cells.len();
            if cells.iter().enumerate().any(|(i, (p, _))| *p != i + 1) {
                return Err(err(0, "cells must be numbered 1, 2, … without gaps"));
            }
            let diffs: Vec<Vec<Vec<EntrySpec>>> = (1..window)
                .map(|pos| {
                    diffs
                        .iter()
                        .find(|(p, _)| *p == pos)
                        .map(|(_, m)| m.clone())
                        .unwrap_or_default()
                })
                .collect();
            Some(ComplexDecl {
                cells: cells.into_iter().map(|(_, c)| c).collect(),
                diffs,
            })
        };
        Ok(AlgebraFile {
            vertices,
            arrows,
            relations,
            field,
            complex,
        })
    }

    /// Canonical text form; parsing it gives back the same model.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let ids: Vec<String> = self.vertices.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "vertices: {}", ids.join(" "));
        for a in &self.arrows {
            let _ = writeln!(s, "arrow {}: {} -> {}", a.name, a.source, a.target);
        }
        for r in &self.relations {
            let _ = writeln!(s, "relation: {}", r.join(" "));
        }
        let _ = writeln!(s, "field: {}", self.field);
        if let Some(c) = &self.complex {
            for (i, cell) in c.cells.iter().enumerate() {
                let ids: Vec<String> = cell.iter().map(u32::to_string).collect();
                let _ = writeln!(s, "cell {}: {}", i + 1, ids.join(" "));
            }
            for (i, m) in c.diffs.iter().enumerate() {
                let rows: Vec<String> = m
                    .iter()
                    .map(|row| row.iter().map(entry_text).collect::<Vec<_>>().join(", "))
                    .collect();
                let _ = writeln!(s, "differential {}: {}", i + 1, rows.join("; "));
            }
        }
        s.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
    }

    pub fn build(&self) -> strongdim::Result<MonomialAlgebra> {
        let arrows: Vec<(&str, u32, u32)> = self
            .arrows
            .iter()
            .map(|a| (a.name.as_str(), a.source, a.target))
            .collect();
        let rels: Vec<Vec<&str>> = self
            .relations
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        let rel_refs: Vec<&[&str]> = rels.iter().map(Vec::as_slice).collect();
        MonomialAlgebra::from_spec(&self.vertices, &arrows, &rel_refs, self.field)
    }

    /// The declared complex; differentials must square to zero.
    pub fn build_complex<F: Field>(&self, alg: &MonomialAlgebra) -> strongdim::Result<Option<Complex<F>>> {
        let Some(decl) = &self.complex else {
            return Ok(None);
        };
        let bad = |m: String| strongdim::Error::ShapeMismatch(m);
        let index = |id: u32| {
            alg.quiver()
                .vertex_index(id)
                .ok_or_else(|| bad(format!("undeclared vertex {id}")))
        };
        let cells: Vec<Vec<usize>> = decl
            .cells
            .iter()
            .map(|c| c.iter().map(|&id| index(id)).collect::<strongdim::Result<_>>())
            .collect::<strongdim::Result<_>>()?;
        let mut diffs = Vec::new();
        for (i, spec) in decl.diffs.iter().enumerate() {
            let (rows, cols) = (&cells[i + 1], &cells[i]);
            let mut m = PathMatrix::<F>::zero(rows.clone(), cols.clone());
            let shaped = if rows.is_empty() || cols.is_empty() {
                spec.is_empty() || spec.iter().all(Vec::is_empty)
            } else {
                spec.len() == rows.len() && spec.iter().all(|r| r.len() == cols.len())
            };
            if !shaped {
                return Err(bad(format!("differential {} must be {}x{}", i + 1, rows.len(), cols.len())));
            }
            for (r, row) in spec.iter().enumerate() {
                for (c, entry) in row.iter().enumerate() {
                    for term in entry {
                        let (start, arrows) = match &term.path {
                            PathSpec::Trivial(id) => (index(*id)?, Vec::new()),
                            PathSpec::Arrows(names) => {
                                let idx: Vec<usize> = names
                                    .iter()
                                    .map(|n| {
                                        alg.quiver()
                                            .arrow_index(n)
                                            .ok_or_else(|| bad(format!("unknown arrow {n}")))
                                    })
                                    .collect::<strongdim::Result<_>>()?;
                                (alg.quiver().arrows()[idx[0]].source, idx)
                            }
                        };
                        let p = alg
                            .path_index(start, &arrows)
                            .ok_or_else(|| bad(format!("differential {}: not a nonzero path", i + 1)))?;
                        let path = alg.path(p);
                        if path.source != rows[r] || path.target != cols[c] {
                            return Err(bad(format!(
                                "differential {} entry ({}, {}) has the wrong endpoints",
                                i + 1,
                                r + 1,
                                c + 1
                            )));
                        }
                        let e = m.entry_mut(r, c);
                        let cur = e.remove(&p).unwrap_or_else(F::zero) + F::from_i64(term.coeff);
                        if !cur.is_zero() {
                            e.insert(p, cur);
                        }
                    }
                }
            }
            diffs.push(m);
        }
        Complex::new(alg, cells.len(), cells, diffs).map(Some)
    }
}

fn entry_text(e: &EntrySpec) -> String {
    if e.is_empty() {
        return "0".into();
    }
    e.iter()
        .map(|t| {
            let path = match &t.path {
                PathSpec::Trivial(v) => format!("e{v}"),
                PathSpec::Arrows(a) => a.join(" "),
            };
            if t.coeff == 1 {
                path
            } else {
                format!("{}*{path}", t.coeff)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX45: &str = "# Example 4.5\nvertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelation: a b\nfield: rational\n";

    #[test]
    fn parses_and_round_trips() {
        let f = AlgebraFile::parse(EX45).unwrap();
        assert_eq!(f.vertices, vec![1, 2, 3]);
        assert_eq!(f.relations, vec![vec!["a".to_string(), "b".to_string()]]);
        assert_eq!(AlgebraFile::parse(&f.to_text()).unwrap(), f);
        assert_eq!(f.build().unwrap().dim(), 5);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_fields() {
        assert_eq!(AlgebraFile::parse("vertices: 1\nfield: rational\ncolour: red\n").unwrap_err().line, 3);
        assert!(AlgebraFile::parse("vertices: 1\nfield: reals\n").is_err());
        assert!(AlgebraFile::parse("vertices: 1\n").is_err());
        assert!(AlgebraFile::parse("vertices: 1\nvertices: 2\nfield: gf2\n").is_err());
    }

    #[test]
    fn declared_complexes() {
        let text = format!("{EX45}cell 1: 3\ncell 2: 2\ncell 3: 1\ndifferential 1: b\ndifferential 2: a\n");
        let f = AlgebraFile::parse(&text).unwrap();
        assert_eq!(AlgebraFile::parse(&f.to_text()).unwrap(), f);
        let alg = f.build().unwrap();
        let x = f.build_complex::<strongdim::Rational>(&alg).unwrap().unwrap();
        assert_eq!(x.describe(&alg), "P3 -> P2 -> P1");
        let bad = format!("{EX45}cell 1: 2\ncell 2: 2\ncell 3: 2\ndifferential 1: e2\ndifferential 2: -1*e2\n");
        let f = AlgebraFile::parse(&bad).unwrap();
        assert!(f.build_complex::<strongdim::Rational>(&alg).is_err());
    }
}
