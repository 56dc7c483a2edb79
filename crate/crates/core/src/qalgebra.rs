//! Finite-dimensional monomial bound quiver algebras, their projectives and
//! finite-dimensional right modules.
//!
//! Conventions: paths compose left to right (`ab` is "a then b"), modules are
//! right modules and `P_v = e_v Λ` is spanned by the paths starting at `v`.
//! A morphism `P_a -> P_b` is left multiplication by an element of `e_b Λ e_a`,
//! i.e. a combination of paths from `b` to `a`; composing `P_a -> P_b -> P_c`
//! multiplies the path of the second map by the path of the first.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SpanBuilder};

pub const DEFAULT_PATH_CAP: usize = 10_000;
pub const DEFAULT_RESOLUTION_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    /// Index of the source vertex.
    pub source: usize,
    /// Index of the target vertex.
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<u32>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from external vertex ids and `(name, source id, target id)` arrows.
    pub fn new(vertices: &[u32], arrows: &[(&str, u32, u32)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in vertices {
            if !seen.insert(*v) {
                return Err(Error::MalformedQuiver(format!("duplicate vertex {v}")));
            }
        }
        let index = |id: u32| {
            vertices
                .iter()
                .position(|&v| v == id)
                .ok_or_else(|| Error::MalformedQuiver(format!("undeclared vertex {id}")))
        };
        let mut names = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for &(name, s, t) in arrows {
            if !names.insert(name.to_string()) {
                return Err(Error::MalformedQuiver(format!("duplicate arrow {name}")));
            }
            out.push(Arrow {
                name: name.to_string(),
                source: index(s)?,
                target: index(t)?,
            });
        }
        Ok(Quiver {
            vertices: vertices.to_vec(),
            arrows: out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[u32] {
        &self.vertices
    }

    pub fn vertex_id(&self, index: usize) -> u32 {
        self.vertices[index]
    }

    pub fn vertex_index(&self, id: u32) -> Option<usize> {
        self.vertices.iter().position(|&v| v == id)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rational,
    Prime(u32),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "rational"),
            FieldTag::Prime(p) => write!(f, "gf{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// A monomial algebra `kQ / <relations>` with its canonical path basis.
#[derive(Clone, Debug)]
pub struct MonomialAlgebra {
    quiver: Quiver,
    relations: Vec<Vec<usize>>,
    field: FieldTag,
    paths: Vec<Path>,
    lookup: HashMap<(usize, Vec<usize>), usize>,
    between: Vec<Vec<Vec<usize>>>,
    product: Vec<Option<usize>>,
    trivial: Vec<usize>,
}

impl MonomialAlgebra {
    pub fn new(quiver: Quiver, relations: Vec<Vec<usize>>, field: FieldTag) -> Result<Self> {
        Self::with_cap(quiver, relations, field, DEFAULT_PATH_CAP)
    }

    /// Convenience constructor from external ids and arrow names.
    pub fn from_spec(
        vertices: &[u32],
        arrows: &[(&str, u32, u32)],
        relations: &[&[&str]],
        field: FieldTag,
    ) -> Result<Self> {
        let quiver = Quiver::new(vertices, arrows)?;
        let rels = relations
            .iter()
            .map(|r| {
                r.iter()
                    .map(|name| {
                        quiver.arrow_index(name).ok_or_else(|| {
                            Error::MalformedRelation(format!("unknown arrow {name}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(quiver, rels, field)
    }

    pub fn with_cap(
        quiver: Quiver,
        relations: Vec<Vec<usize>>,
        field: FieldTag,
        cap: usize,
    ) -> Result<Self> {
        for rel in &relations {
            if rel.len() < 2 {
                return Err(Error::MalformedRelation(
                    "relations must have length at least 2".into(),
                ));
            }
            for &a in rel {
                if a >= quiver.arrows.len() {
                    return Err(Error::MalformedRelation(format!("unknown arrow index {a}")));
                }
            }
            for w in rel.windows(2) {
                if quiver.arrows[w[0]].target != quiver.arrows[w[1]].source {
                    return Err(Error::MalformedRelation(format!(
                        "arrows {} and {} do not compose",
                        quiver.arrows[w[0]].name, quiver.arrows[w[1]].name
                    )));
                }
            }
        }
        // Keep only relations not containing another relation.
        let mut reduced: Vec<Vec<usize>> = Vec::new();
        for (i, rel) in relations.iter().enumerate() {
            let redundant = relations.iter().enumerate().any(|(j, other)| {
                j != i
                    && contains_subpath(rel, other)
                    && (other.len() < rel.len() || (other == rel && j < i))
            });
            if !redundant {
                reduced.push(rel.clone());
            }
        }

        let nv = quiver.vertex_count();
        let mut paths = Vec::new();
        let mut queue = VecDeque::new();
        for v in 0..nv {
            paths.push(Path {
                source: v,
                target: v,
                arrows: Vec::new(),
            });
            queue.push_back(paths.len() - 1);
        }
        while let Some(pi) = queue.pop_front() {
            let base = paths[pi].clone();
            for (ai, arrow) in quiver.arrows.iter().enumerate() {
                if arrow.source != base.target {
                    continue;
                }
                let mut arrows = base.arrows.clone();
                arrows.push(ai);
                if reduced.iter().any(|r| arrows.ends_with(r)) {
                    continue;
                }
                if paths.len() >= cap {
                    return Err(Error::InfiniteDimensional { cap });
                }
                paths.push(Path {
                    source: base.source,
                    target: arrow.target,
                    arrows,
                });
                queue.push_back(paths.len() - 1);
            }
        }
        let mut lookup = HashMap::new();
        let mut between = vec![vec![Vec::new(); nv]; nv];
        let mut trivial = vec![0; nv];
        for (i, p) in paths.iter().enumerate() {
            lookup.insert((p.source, p.arrows.clone()), i);
            between[p.source][p.target].push(i);
            if p.is_trivial() {
                trivial[p.source] = i;
            }
        }
        let dim = paths.len();
        let mut product = vec![None; dim * dim];
        for (i, p) in paths.iter().enumerate() {
            for (j, q) in paths.iter().enumerate() {
                if p.target != q.source {
                    continue;
                }
                let mut arrows = p.arrows.clone();
                arrows.extend_from_slice(&q.arrows);
                product[i * dim + j] = lookup.get(&(p.source, arrows)).copied();
            }
        }
        Ok(MonomialAlgebra {
            quiver,
            relations: reduced,
            field,
            paths,
            lookup,
            between,
            product,
            trivial,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn arrow_ends(&self) -> Vec<(usize, usize)> {
        self.quiver.arrows.iter().map(|a| (a.source, a.target)).collect()
    }

    pub fn relations(&self) -> &[Vec<usize>] {
        &self.relations
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    /// Index of the vertex with external id `id`; panics when undeclared.
    pub fn vertex(&self, id: u32) -> usize {
        self.quiver
            .vertex_index(id)
            .unwrap_or_else(|| panic!("undeclared vertex {id}"))
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn path_index(&self, source: usize, arrows: &[usize]) -> Option<usize> {
        self.lookup.get(&(source, arrows.to_vec())).copied()
    }

    /// Basis paths from `from` to `to`.
    pub fn paths_between(&self, from: usize, to: usize) -> &[usize] {
        &self.between[from][to]
    }

    pub fn trivial_path(&self, v: usize) -> usize {
        self.trivial[v]
    }

    /// Product of two basis paths, `None` when it vanishes or does not compose.
    pub fn path_product(&self, i: usize, j: usize) -> Option<usize> {
        self.product[i * self.paths.len() + j]
    }

    /// Length of the longest nonzero path.
    pub fn loewy_bound(&self) -> usize {
        self.paths.iter().map(Path::len).max().unwrap_or(0)
    }

    pub fn path_name(&self, i: usize) -> String {
        let p = &self.paths[i];
        if p.is_trivial() {
            format!("e{}", self.quiver.vertex_id(p.source))
        } else {
            p.arrows
                .iter()
                .map(|&a| self.quiver.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("")
        }
    }

    /// Basis of `Hom(P_a, P_b)`: the paths from `b` to `a`.
    pub fn hom_proj_basis<F: Field>(&self, a: usize, b: usize) -> Vec<AlgElement<F>> {
        self.paths_between(b, a)
            .iter()
            .map(|&p| AlgElement::basis(self, p))
            .collect()
    }

    pub fn multiply<F: Field>(&self, x: &AlgElement<F>, y: &AlgElement<F>) -> Result<AlgElement<F>> {
        if x.target != y.source {
            return Err(Error::IncomposableElements(format!(
                "target {} of the left factor differs from source {} of the right factor",
                self.quiver.vertex_id(x.target),
                self.quiver.vertex_id(y.source)
            )));
        }
        Ok(AlgElement {
            source: x.source,
            target: y.target,
            coeffs: self.mul_coeffs(&x.coeffs, &y.coeffs),
        })
    }

    pub(crate) fn mul_coeffs<F: Field>(&self, x: &Coeffs<F>, y: &Coeffs<F>) -> Coeffs<F> {
        let mut out: Coeffs<F> = BTreeMap::new();
        for (&i, a) in x {
            for (&j, b) in y {
                if let Some(k) = self.path_product(i, j) {
                    add_term(&mut out, k, a.clone() * b.clone());
                }
            }
        }
        out
    }

    /// `P_v` with basis the paths starting at `v`.
    pub fn projective_as_module<F: Field>(&self, v: usize) -> FinModule<F> {
        let nv = self.vertex_count();
        let dims: Vec<usize> = (0..nv).map(|w| self.between[v][w].len()).collect();
        let actions = self
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, arrow)| {
                let mut m = Matrix::zeros(dims[arrow.target], dims[arrow.source]);
                let arrow_path = self.path_index(arrow.source, &[ai]).expect("arrow is a path");
                for (c, &p) in self.between[v][arrow.source].iter().enumerate() {
                    if let Some(q) = self.path_product(p, arrow_path) {
                        let r = self.between[v][arrow.target]
                            .iter()
                            .position(|&x| x == q)
                            .expect("product ends at arrow target");
                        m[(r, c)] = F::one();
                    }
                }
                m
            })
            .collect();
        FinModule {
            dims,
            actions,
            ends: self.arrow_ends(),
        }
    }

    pub fn simple_as_module<F: Field>(&self, v: usize) -> FinModule<F> {
        let nv = self.vertex_count();
        let dims: Vec<usize> = (0..nv).map(|w| usize::from(w == v)).collect();
        let actions = self
            .quiver
            .arrows
            .iter()
            .map(|a| Matrix::zeros(dims[a.target], dims[a.source]))
            .collect();
        FinModule {
            dims,
            actions,
            ends: self.arrow_ends(),
        }
    }

    pub fn regular_module<F: Field>(&self) -> FinModule<F> {
        (0..self.vertex_count())
            .map(|v| self.projective_as_module(v))
            .reduce(|a, b| a.direct_sum(&b))
            .unwrap_or_else(|| FinModule::zero(self))
    }

    /// The module map `⊕ P_{cols} -> ⊕ P_{rows}` given by a matrix of path-algebra elements.
    pub fn realize<F: Field>(&self, m: &PathMatrix<F>) -> ModuleMap<F> {
        let source = m
            .cols
            .iter()
            .map(|&v| self.projective_as_module::<F>(v))
            .fold(FinModule::zero(self), |acc, p| acc.direct_sum(&p));
        let target = m
            .rows
            .iter()
            .map(|&v| self.projective_as_module::<F>(v))
            .fold(FinModule::zero(self), |acc, p| acc.direct_sum(&p));
        let nv = self.vertex_count();
        let comps = (0..nv)
            .map(|w| {
                let mut mat: Matrix<F> = Matrix::zeros(target.dims[w], source.dims[w]);
                let mut col_off = 0;
                for (c, &cv) in m.cols.iter().enumerate() {
                    let src_paths = &self.between[cv][w];
                    let mut row_off = 0;
                    for (r, &rv) in m.rows.iter().enumerate() {
                        let dst_paths = &self.between[rv][w];
                        for (&q, coef) in m.entry(r, c) {
                            for (ci, &x) in src_paths.iter().enumerate() {
                                if let Some(y) = self.path_product(q, x) {
                                    let ri = dst_paths.iter().position(|&z| z == y).unwrap();
                                    let v = mat[(row_off + ri, col_off + ci)].clone() + coef.clone();
                                    mat[(row_off + ri, col_off + ci)] = v;
                                }
                            }
                        }
                        row_off += dst_paths.len();
                    }
                    col_off += src_paths.len();
                }
                mat
            })
            .collect();
        ModuleMap {
            source,
            target,
            comps,
        }
    }

    /// Global dimension via minimal projective resolutions of the simples.
    pub fn global_dimension<F: Field>(&self) -> Result<usize> {
        self.global_dimension_capped::<F>(DEFAULT_RESOLUTION_CAP)
    }

    pub fn global_dimension_capped<F: Field>(&self, cap: usize) -> Result<usize> {
        let mut best = 0;
        for v in 0..self.vertex_count() {
            best = best.max(self.projective_dimension::<F>(&self.simple_as_module(v), cap).map_err(
                |_| Error::ResolutionCapExceeded {
                    vertex: self.quiver.vertex_id(v),
                    cap,
                },
            )?);
        }
        Ok(best)
    }

    /// Length of a minimal projective resolution of `m`.
    pub fn projective_dimension<F: Field>(&self, m: &FinModule<F>, cap: usize) -> Result<usize> {
        let mut current = m.clone();
        for step in 0..=cap {
            let cover = self.projective_cover(&current);
            let kernel = cover.kernel();
            if kernel.total_dim() == 0 {
                return Ok(step);
            }
            current = kernel;
        }
        Err(Error::ResolutionCapExceeded { vertex: 0, cap })
    }

    /// Projective cover `⊕ P_v -> m`.
    pub fn projective_cover<F: Field>(&self, m: &FinModule<F>) -> ModuleMap<F> {
        let nv = self.vertex_count();
        let mut gens: Vec<(usize, Vec<F>)> = Vec::new();
        for w in 0..nv {
            let mut span = SpanBuilder::new(m.dims[w]);
            for (ai, a) in self.quiver.arrows.iter().enumerate() {
                if a.target != w {
                    continue;
                }
                for c in 0..m.actions[ai].cols() {
                    span.insert(&m.actions[ai].column(c));
                }
            }
            for i in 0..m.dims[w] {
                let mut e = vec![F::zero(); m.dims[w]];
                e[i] = F::one();
                if span.insert(&e) {
                    gens.push((w, e));
                }
            }
        }
        let source = gens
            .iter()
            .map(|(v, _)| self.projective_as_module::<F>(*v))
            .fold(FinModule::zero(self), |acc, p| acc.direct_sum(&p));
        let comps = (0..nv)
            .map(|w| {
                let mut cols = Vec::new();
                for (v, g) in &gens {
                    for &p in &self.between[*v][w] {
                        cols.push(m.act_path(self, g, p));
                    }
                }
                Matrix::from_columns(m.dims[w], &cols)
            })
            .collect();
        ModuleMap {
            source,
            target: m.clone(),
            comps,
        }
    }

    /// `dim Hom(m, Λ)`.
    pub fn hom_to_regular<F: Field>(&self, m: &FinModule<F>) -> usize {
        (0..self.vertex_count())
            .map(|v| hom_module(m, &self.projective_as_module(v)))
            .sum()
    }
}

fn contains_subpath(hay: &[usize], needle: &[usize]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

pub type Coeffs<F> = BTreeMap<usize, F>;

pub(crate) fn add_term<F: Field>(c: &mut Coeffs<F>, k: usize, v: F) {
    if v.is_zero() {
        return;
    }
    let entry = c.entry(k).or_insert_with(F::zero);
    *entry = entry.clone() + v;
    if entry.is_zero() {
        c.remove(&k);
    }
}

/// An element of `e_source Λ e_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement<F> {
    pub source: usize,
    pub target: usize,
    pub coeffs: Coeffs<F>,
}

impl<F: Field> AlgElement<F> {
    pub fn zero(source: usize, target: usize) -> Self {
        AlgElement {
            source,
            target,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(alg: &MonomialAlgebra, path: usize) -> Self {
        let p = alg.path(path);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(path, F::one());
        AlgElement {
            source: p.source,
            target: p.target,
            coeffs,
        }
    }

    pub fn idempotent(alg: &MonomialAlgebra, v: usize) -> Self {
        Self::basis(alg, alg.trivial_path(v))
    }

    /// The element given by a sequence of arrow names.
    pub fn from_arrows(alg: &MonomialAlgebra, names: &[&str]) -> Option<Self> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| alg.quiver().arrow_index(n))
            .collect::<Option<_>>()?;
        let first = alg.quiver().arrows()[*idx.first()?].source;
        let target = alg.quiver().arrows()[*idx.last()?].target;
        match alg.path_index(first, &idx) {
            Some(p) => Some(Self::basis(alg, p)),
            None => Some(Self::zero(first, target)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.source, self.target);
        for (&k, v) in &self.coeffs {
            add_term(&mut out.coeffs, k, v.clone() * s.clone());
        }
        out
    }
}

/// A matrix of path-algebra elements; entry `(r, c)` is a morphism
/// `P_{cols[c]} -> P_{rows[r]}`, i.e. a combination of paths from `rows[r]` to `cols[c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMatrix<F> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    entries: Vec<Coeffs<F>>,
}

impl<F: Field> PathMatrix<F> {
    pub fn zero(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        let n = rows.len() * cols.len();
        PathMatrix {
            rows,
            cols,
            entries: vec![BTreeMap::new(); n],
        }
    }

    pub fn identity(alg: &MonomialAlgebra, vertices: &[usize]) -> Self {
        let mut m = Self::zero(vertices.to_vec(), vertices.to_vec());
        for (i, &v) in vertices.iter().enumerate() {
            m.entry_mut(i, i).insert(alg.trivial_path(v), F::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Coeffs<F> {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Coeffs<F> {
        let n = self.cols.len();
        &mut self.entries[r * n + c]
    }

    pub fn element(&self, r: usize, c: usize) -> AlgElement<F> {
        AlgElement {
            source: self.rows[r],
            target: self.cols[c],
            coeffs: self.entry(r, c).clone(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, e: &AlgElement<F>) -> Result<()> {
        if e.source != self.rows[r] || e.target != self.cols[c] {
            if e.is_zero() {
                self.entry_mut(r, c).clear();
                return Ok(());
            }
            return Err(Error::ShapeMismatch(format!(
                "entry ({r}, {c}) needs a path from vertex index {} to {}",
                self.rows[r], self.cols[c]
            )));
        }
        *self.entry_mut(r, c) = e.coeffs.clone();
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_empty())
    }

    /// `self * other`: first `other`, then `self`.
    pub fn mul(&self, alg: &MonomialAlgebra, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "path matrix shape mismatch");
        let mut out = Self::zero(self.rows.clone(), other.cols.clone());
        for r in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = self.entry(r, k);
                if a.is_empty() {
                    continue;
                }
                for c in 0..other.ncols() {
                    let b = other.entry(k, c);
                    if b.is_empty() {
                        continue;
                    }
                    let prod = alg.mul_coeffs(a, b);
                    let dst = out.entry_mut(r, c);
                    for (p, v) in prod {
                        add_term(dst, p, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((&self.rows, &self.cols), (&other.rows, &other.cols));
        let mut out = self.clone();
        for (dst, src) in out.entries.iter_mut().zip(&other.entries) {
            for (&p, v) in src {
                add_term(dst, p, v.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero(self.rows.clone(), self.cols.clone());
        if s.is_zero() {
            return out;
        }
        for (dst, src) in out.entries.iter_mut().zip(&self.entries) {
            for (&p, v) in src {
                dst.insert(p, v.clone() * s.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zero(
            rows.iter().map(|&r| self.rows[r]).collect(),
            cols.iter().map(|&c| self.cols[c]).collect(),
        );
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                *out.entry_mut(i, j) = self.entry(r, c).clone();
            }
        }
        out
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let mut out = Self::zero(
            a.rows.iter().chain(&c.rows).copied().collect(),
            a.cols.iter().chain(&b.cols).copied().collect(),
        );
        let (ra, ca) = (a.nrows(), a.ncols());
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, ca), (c, ra, 0), (d, ra, ca)] {
            for r in 0..blk.nrows() {
                for col in 0..blk.ncols() {
                    *out.entry_mut(r0 + r, c0 + col) = blk.entry(r, col).clone();
                }
            }
        }
        out
    }

    /// The scalar block of trivial-path coefficients between summands at vertex `v`.
    pub fn top_block(&self, alg: &MonomialAlgebra, v: usize) -> Matrix<F> {
        let rs: Vec<usize> = (0..self.nrows()).filter(|&r| self.rows[r] == v).collect();
        let cs: Vec<usize> = (0..self.ncols()).filter(|&c| self.cols[c] == v).collect();
        let e = alg.trivial_path(v);
        let mut m = Matrix::zeros(rs.len(), cs.len());
        for (i, &r) in rs.iter().enumerate() {
            for (j, &c) in cs.iter().enumerate() {
                if let Some(x) = self.entry(r, c).get(&e) {
                    m[(i, j)] = x.clone();
                }
            }
        }
        m
    }

    /// Whether the map of projectives is a split monomorphism.
    pub fn is_section(&self, alg: &MonomialAlgebra) -> bool {
        (0..alg.vertex_count()).all(|v| {
            let t = self.top_block(alg, v);
            t.rank() == t.cols()
        })
    }

    /// Whether the map of projectives is a split epimorphism.
    pub fn is_retraction(&self, alg: &MonomialAlgebra) -> bool {
        (0..alg.vertex_count()).all(|v| {
            let t = self.top_block(alg, v);
            t.rank() == t.rows()
        })
    }

    pub fn is_invertible(&self, alg: &MonomialAlgebra) -> bool {
        let mut rs = self.rows.clone();
        let mut cs = self.cols.clone();
        rs.sort_unstable();
        cs.sort_unstable();
        rs == cs && self.is_section(alg)
    }

    /// Inverse of a square matrix with invertible top part.
    pub fn inverse(&self, alg: &MonomialAlgebra) -> Option<Self> {
        if !self.is_invertible(alg) {
            return None;
        }
        // Scalar part T between equal vertices; self = T + R with R radical.
        let n = self.nrows();
        let mut top = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if self.rows[r] == self.cols[c] {
                    if let Some(x) = self.entry(r, c).get(&alg.trivial_path(self.rows[r])) {
                        top[(r, c)] = x.clone();
                    }
                }
            }
        }
        let tinv = top.inverse()?;
        // T^{-1} as a path matrix from rows back to cols.
        let mut tinv_pm = Self::zero(self.cols.clone(), self.rows.clone());
        for r in 0..n {
            for c in 0..n {
                let x = &tinv[(r, c)];
                if !x.is_zero() {
                    debug_assert_eq!(self.cols[r], self.rows[c]);
                    tinv_pm
                        .entry_mut(r, c)
                        .insert(alg.trivial_path(self.cols[r]), x.clone());
                }
            }
        }
        // self = T (1 + T^{-1} R) ; inverse = sum_k (-T^{-1}R)^k T^{-1}
        let id = Self::identity(alg, &self.cols);
        let u = tinv_pm.mul(alg, self); // 1 + N with N nilpotent
        let nil = u.sub(&id);
        let neg_nil = nil.neg();
        let mut term = id.clone();
        let mut sum = id.clone();
        for _ in 0..=alg.loewy_bound() + 1 {
            term = term.mul(alg, &neg_nil);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        Some(sum.mul(alg, &tinv_pm))
    }

    pub fn coefficient_vector(&self) -> Vec<(usize, usize, usize, F)> {
        let mut out = Vec::new();
        for r in 0..self.nrows() {
            for c in 0..self.ncols() {
                for (&p, v) in self.entry(r, c) {
                    out.push((r, c, p, v.clone()));
                }
            }
        }
        out
    }
}

/// A finite-dimensional right module: one vector space per vertex and one
/// matrix per arrow (acting on column vectors, `dims[target] x dims[source]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinModule<F> {
    pub dims: Vec<usize>,
    pub actions: Vec<Matrix<F>>,
    /// `(source, target)` vertex indices of every arrow.
    pub ends: Vec<(usize, usize)>,
}

impl<F: Field> FinModule<F> {
    pub fn zero(alg: &MonomialAlgebra) -> Self {
        FinModule {
            dims: vec![0; alg.vertex_count()],
            actions: alg.quiver().arrows().iter().map(|_| Matrix::zeros(0, 0)).collect(),
            ends: alg.arrow_ends(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        m[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        FinModule {
            dims,
            actions,
            ends: self.ends.clone(),
        }
    }

    /// `m · p` for a vector at the source of basis path `p`.
    pub fn act_path(&self, alg: &MonomialAlgebra, m: &[F], p: usize) -> Vec<F> {
        let path = alg.path(p);
        let mut v = m.to_vec();
        for &a in &path.arrows {
            v = self.actions[a].mul_vec(&v);
        }
        v
    }

    /// Checks action shapes and that every relation acts as zero.
    pub fn validate(&self, alg: &MonomialAlgebra) -> Result<()> {
        for (ai, a) in alg.quiver().arrows().iter().enumerate() {
            let m = &self.actions[ai];
            if m.rows() != self.dims[a.target] || m.cols() != self.dims[a.source] {
                return Err(Error::ShapeMismatch(format!("action of arrow {}", a.name)));
            }
        }
        for rel in alg.relations() {
            let first = alg.quiver().arrows()[rel[0]].source;
            let mut acc = Matrix::identity(self.dims[first]);
            for &a in rel {
                acc = self.actions[a].mul(&acc);
            }
            if !acc.is_zero() {
                return Err(Error::ShapeMismatch("relation does not act as zero".into()));
            }
        }
        Ok(())
    }
}

/// A module homomorphism given per vertex.
#[derive(Clone, Debug)]
pub struct ModuleMap<F> {
    pub source: FinModule<F>,
    pub target: FinModule<F>,
    pub comps: Vec<Matrix<F>>,
}

impl<F: Field> ModuleMap<F> {
    pub fn validate(&self, alg: &MonomialAlgebra) -> Result<()> {
        for (w, c) in self.comps.iter().enumerate() {
            if c.rows() != self.target.dims[w] || c.cols() != self.source.dims[w] {
                return Err(Error::ShapeMismatch(format!("component at vertex index {w}")));
            }
        }
        for (ai, a) in alg.quiver().arrows().iter().enumerate() {
            let lhs = self.comps[a.target].mul(&self.source.actions[ai]);
            let rhs = self.target.actions[ai].mul(&self.comps[a.source]);
            if lhs != rhs {
                return Err(Error::ShapeMismatch(format!(
                    "map does not commute with arrow {}",
                    a.name
                )));
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.cols())
    }

    pub fn kernel(&self) -> FinModule<F> {
        let bases: Vec<Matrix<F>> = self
            .comps
            .iter()
            .map(|c| {
                let ns = c.nullspace();
                Matrix::from_columns(c.cols(), &ns.basis)
            })
            .collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let actions = self
            .source
            .actions
            .iter()
            .enumerate()
            .map(|(ai, act)| {
                let (s, t) = self.source.ends[ai];
                let mut m = Matrix::zeros(dims[t], dims[s]);
                for j in 0..dims[s] {
                    let image = act.mul_vec(&bases[s].column(j));
                    let coords = bases[t].solve(&image).expect("kernel is a submodule");
                    for (i, x) in coords.into_iter().enumerate() {
                        m[(i, j)] = x;
                    }
                }
                m
            })
            .collect();
        FinModule {
            dims,
            actions,
            ends: self.source.ends.clone(),
        }
    }

    pub fn cokernel(&self) -> FinModule<F> {
        // For every vertex: lifts of a quotient basis and the projection matrix.
        let mut lifts = Vec::new();
        let mut projections = Vec::new();
        for (w, c) in self.comps.iter().enumerate() {
            let n = self.target.dims[w];
            let mut span = SpanBuilder::new(n);
            for j in 0..c.cols() {
                span.insert(&c.column(j));
            }
            let image_basis = span.basis();
            let mut chosen = Vec::new();
            for i in 0..n {
                let mut e = vec![F::zero(); n];
                e[i] = F::one();
                if span.insert(&e) {
                    chosen.push(e);
                }
            }
            let mut all = image_basis.clone();
            all.extend(chosen.iter().cloned());
            let basis = Matrix::from_columns(n, &all);
            let inv = basis.inverse().expect("completed basis");
            let q = chosen.len();
            let mut proj = Matrix::zeros(q, n);
            for i in 0..q {
                for j in 0..n {
                    proj[(i, j)] = inv[(image_basis.len() + i, j)].clone();
                }
            }
            lifts.push(Matrix::from_columns(n, &chosen));
            projections.push(proj);
        }
        let dims: Vec<usize> = projections.iter().map(Matrix::rows).collect();
        let actions = self
            .target
            .actions
            .iter()
            .enumerate()
            .map(|(ai, act)| {
                let (s, t) = self.target.ends[ai];
                if dims[s] == 0 || dims[t] == 0 {
                    return Matrix::zeros(dims[t], dims[s]);
                }
                projections[t].mul(&act.mul(&lifts[s]))
            })
            .collect();
        FinModule {
            dims,
            actions,
            ends: self.target.ends.clone(),
        }
    }
}

/// `dim Hom(m, n)`: the intertwining equations solved per vertex.
pub fn hom_module<F: Field>(m: &FinModule<F>, n: &FinModule<F>) -> usize {
    let nv = m.dims.len();
    let mut offsets = Vec::with_capacity(nv);
    let mut total = 0;
    for w in 0..nv {
        offsets.push(total);
        total += n.dims[w] * m.dims[w];
    }
    if total == 0 {
        return 0;
    }
    let var = |w: usize, i: usize, j: usize| offsets[w] + i * m.dims[w] + j;
    let mut rows: Vec<Vec<F>> = Vec::new();
    for (ai, (am, an)) in m.actions.iter().zip(&n.actions).enumerate() {
        let (s, t) = m.ends[ai];
        // an * f_s - f_t * am = 0, entries (i, j) with i < n.dims[t], j < m.dims[s]
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let mut row = vec![F::zero(); total];
                for k in 0..n.dims[s] {
                    let a = &an[(i, k)];
                    if !a.is_zero() {
                        row[var(s, k, j)] = row[var(s, k, j)].clone() + a.clone();
                    }
                }
                for k in 0..m.dims[t] {
                    let b = &am[(k, j)];
                    if !b.is_zero() {
                        row[var(t, i, k)] = row[var(t, i, k)].clone() - b.clone();
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return total;
    }
    total - Matrix::from_rows(rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_rational::BigRational;

    type Q = BigRational;

    fn a2() -> MonomialAlgebra {
        MonomialAlgebra::from_spec(&[1, 2], &[("a", 1, 2)], &[], FieldTag::Rational).unwrap()
    }

    fn ex45() -> MonomialAlgebra {
        MonomialAlgebra::from_spec(
            &[1, 2, 3],
            &[("alpha", 1, 2), ("beta", 2, 3)],
            &[&["alpha", "beta"]],
            FieldTag::Rational,
        )
        .unwrap()
    }

    fn ex47() -> MonomialAlgebra {
        MonomialAlgebra::from_spec(
            &[1, 2, 3, 4, 5, 6],
            &[
                ("alpha", 1, 2),
                ("beta", 2, 3),
                ("gamma", 3, 4),
                ("delta", 4, 5),
                ("eta", 5, 6),
            ],
            &[&["alpha", "beta"], &["beta", "gamma"], &["delta", "eta"]],
            FieldTag::Rational,
        )
        .unwrap()
    }

    fn single() -> MonomialAlgebra {
        MonomialAlgebra::from_spec(&[1], &[], &[], FieldTag::Rational).unwrap()
    }

    #[test]
    fn path_basis_of_linear_quiver_with_relation() {
        let alg = ex45();
        assert_eq!(alg.dim(), 5);
        let names: Vec<String> = (0..alg.dim()).map(|i| alg.path_name(i)).collect();
        assert_eq!(names, ["e1", "e2", "e3", "alpha", "beta"]);
        assert_eq!(single().dim(), 1);
        assert_eq!(ex47().dim(), 12);
    }

    #[test]
    fn build_errors() {
        let cyclic = MonomialAlgebra::from_spec(&[1], &[("x", 1, 1)], &[], FieldTag::Rational);
        assert!(matches!(cyclic, Err(Error::InfiniteDimensional { .. })));
        let bad = MonomialAlgebra::from_spec(
            &[1, 2, 3],
            &[("a", 1, 2), ("b", 2, 3)],
            &[&["b", "a"]],
            FieldTag::Rational,
        );
        assert!(matches!(bad, Err(Error::MalformedRelation(_))));
        let undeclared = Quiver::new(&[1], &[("a", 1, 2)]);
        assert!(matches!(undeclared, Err(Error::MalformedQuiver(_))));
        let dup = Quiver::new(&[1, 1], &[]);
        assert!(matches!(dup, Err(Error::MalformedQuiver(_))));
    }

    #[test]
    fn cycle_killed_by_relation_is_finite() {
        let alg =
            MonomialAlgebra::from_spec(&[1], &[("x", 1, 1)], &[&["x", "x"], &["x", "x", "x"]], FieldTag::Rational)
                .unwrap();
        assert_eq!(alg.dim(), 2);
        assert_eq!(alg.relations().len(), 1);
    }

    #[test]
    fn hom_between_projectives() {
        let alg = ex45();
        let (v1, v2, v3) = (alg.vertex(1), alg.vertex(2), alg.vertex(3));
        let h = alg.hom_proj_basis::<Q>(v3, v2);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0], AlgElement::from_arrows(&alg, &["beta"]).unwrap());
        for v in 0..3 {
            assert!(alg.hom_proj_basis::<Q>(v, v).contains(&AlgElement::idempotent(&alg, v)));
        }
        let beta = &alg.hom_proj_basis::<Q>(v3, v2)[0];
        let alpha = &alg.hom_proj_basis::<Q>(v2, v1)[0];
        assert!(alg.multiply(alpha, beta).unwrap().is_zero());
        let total: usize = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .map(|(a, b)| alg.hom_proj_basis::<Q>(a, b).len())
            .sum();
        assert_eq!(total, alg.dim());
    }

    #[test]
    fn multiplication() {
        let alg = ex45();
        let e1 = AlgElement::<Q>::idempotent(&alg, 0);
        assert_eq!(alg.multiply(&e1, &e1).unwrap(), e1);
        let alpha = AlgElement::<Q>::from_arrows(&alg, &["alpha"]).unwrap();
        let beta = AlgElement::<Q>::from_arrows(&alg, &["beta"]).unwrap();
        assert!(alg.multiply(&alpha, &beta).unwrap().is_zero());
        assert!(matches!(
            alg.multiply(&beta, &alpha),
            Err(Error::IncomposableElements(_))
        ));
        let alg7 = ex47();
        let d = AlgElement::<Q>::from_arrows(&alg7, &["delta"]).unwrap();
        let e = AlgElement::<Q>::from_arrows(&alg7, &["eta"]).unwrap();
        assert!(alg7.multiply(&d, &e).unwrap().is_zero());
        let g = AlgElement::<Q>::from_arrows(&alg7, &["gamma"]).unwrap();
        assert!(!alg7.multiply(&g, &d).unwrap().is_zero());
    }

    #[test]
    fn associativity_on_basis_paths() {
        for alg in [ex45(), ex47()] {
            let n = alg.dim();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let left = alg.path_product(i, j).and_then(|ij| alg.path_product(ij, k));
                        let right = alg.path_product(j, k).and_then(|jk| alg.path_product(i, jk));
                        let composable =
                            alg.path(i).target == alg.path(j).source && alg.path(j).target == alg.path(k).source;
                        if composable {
                            assert_eq!(left, right);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn modules_of_projectives_and_simples() {
        let alg = ex45();
        let p1 = alg.projective_as_module::<Q>(0);
        assert_eq!(p1.dims, vec![1, 1, 0]);
        for v in 0..3 {
            alg.projective_as_module::<Q>(v).validate(&alg).unwrap();
            assert_eq!(alg.simple_as_module::<Q>(v).total_dim(), 1);
        }
        let s = single();
        assert_eq!(s.projective_as_module::<Q>(0), s.simple_as_module::<Q>(0));
    }

    #[test]
    fn hom_into_regular_module() {
        let alg = ex45();
        assert!(alg.hom_to_regular(&alg.simple_as_module::<Q>(1)) >= 1);
        let a = a2();
        assert_eq!(a.hom_to_regular(&a.simple_as_module::<Q>(0)), 0);
        assert_eq!(a.hom_to_regular(&a.simple_as_module::<Q>(1)), 2);
    }

    #[test]
    fn yoneda_dimension() {
        for alg in [ex45(), ex47(), a2()] {
            let modules: Vec<FinModule<Q>> = (0..alg.vertex_count())
                .flat_map(|v| [alg.projective_as_module(v), alg.simple_as_module(v)])
                .chain([alg.regular_module()])
                .collect();
            for m in &modules {
                for v in 0..alg.vertex_count() {
                    assert_eq!(hom_module(&alg.projective_as_module(v), m), m.dims[v]);
                }
            }
        }
    }

    #[test]
    fn kernel_and_cokernel() {
        let alg = ex45();
        let id = PathMatrix::<Q>::identity(&alg, &[1]);
        let map = alg.realize(&id);
        map.validate(&alg).unwrap();
        assert_eq!(map.kernel().total_dim(), 0);
        assert_eq!(map.cokernel().total_dim(), 0);
        // beta: P3 -> P2 has cokernel S2 and zero kernel.
        let mut m = PathMatrix::<Q>::zero(vec![1], vec![2]);
        m.set(0, 0, &AlgElement::from_arrows(&alg, &["beta"]).unwrap()).unwrap();
        let f = alg.realize(&m);
        f.validate(&alg).unwrap();
        assert!(f.is_injective());
        let c = f.cokernel();
        assert_eq!(c.dims, vec![0, 1, 0]);
        c.validate(&alg).unwrap();
        // alpha: P2 -> P1 has kernel P3 (spanned by beta).
        let mut m = PathMatrix::<Q>::zero(vec![0], vec![1]);
        m.set(0, 0, &AlgElement::from_arrows(&alg, &["alpha"]).unwrap()).unwrap();
        let k = alg.realize(&m).kernel();
        assert_eq!(k.dims, vec![0, 0, 1]);
        k.validate(&alg).unwrap();
    }

    #[test]
    fn global_dimensions() {
        assert_eq!(single().global_dimension::<Q>().unwrap(), 0);
        assert_eq!(a2().global_dimension::<Q>().unwrap(), 1);
        assert_eq!(ex45().global_dimension::<Q>().unwrap(), 2);
        assert_eq!(ex47().global_dimension::<Q>().unwrap(), 3);
        assert_eq!(ex47().global_dimension::<Fp<2>>().unwrap(), 3);
    }

    #[test]
    fn path_matrix_inverse() {
        let alg = ex45();
        let mut m = PathMatrix::<Q>::identity(&alg, &[0, 1]);
        m.set(0, 1, &AlgElement::from_arrows(&alg, &["alpha"]).unwrap()).unwrap();
        let inv = m.inverse(&alg).unwrap();
        assert_eq!(m.mul(&alg, &inv), PathMatrix::identity(&alg, &[0, 1]));
        assert_eq!(inv.mul(&alg, &m), PathMatrix::identity(&alg, &[0, 1]));
    }
}
