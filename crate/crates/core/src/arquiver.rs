//! Auslander-Reiten quivers of `C_n(projΛ)` over a closed universe.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::complexcat::{ChainMap, Complex};
use crate::enumerate::{enumerate_indecomposables, EnumConfig, Universe};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homlin::{
    assemble_extension, decompose_with_maps, ext_classes, has_section, hom_basis, local_end, Layout,
};
use crate::linalg::{Matrix, SpanBuilder};
use crate::qalgebra::MonomialAlgebra;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClassFlags {
    pub projective: bool,
    pub injective: bool,
}

impl ClassFlags {
    pub fn proj_injective(&self) -> bool {
        self.projective && self.injective
    }
}

/// Flags of an indecomposable: `J_k(P)` and `T(P)` are projective, `J_k(P)` and `S(P)` injective.
pub fn class_flags<F: Field>(x: &Complex<F>) -> ClassFlags {
    let n = x.window();
    let stalk_at = |pos: usize| x.summand_count() == 1 && x.support() == Some((pos, pos));
    let j = x.is_j_type();
    ClassFlags {
        projective: j || stalk_at(n),
        injective: j || stalk_at(1),
    }
}

#[derive(Clone, Debug)]
pub struct Conflation<F> {
    pub x: Complex<F>,
    pub y: Complex<F>,
    pub z: Complex<F>,
    pub i: ChainMap<F>,
    pub d: ChainMap<F>,
    pub x_class: usize,
    pub z_class: usize,
    /// Classes of the indecomposable summands of `Y` with multiplicities.
    pub middle: BTreeMap<usize, usize>,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrreducibleShape {
    AllSections,
    AllRetractions,
    /// 1-based position of the component that is neither forced shape.
    SplitAt(usize),
}

#[derive(Clone, Debug)]
pub struct ARQuiver<F> {
    pub universe: Universe<F>,
    pub flags: Vec<ClassFlags>,
    pub arrows: BTreeMap<(usize, usize), usize>,
    /// Irreducible maps spanning `rad/rad²` for every arrow.
    pub irreducibles: BTreeMap<(usize, usize), Vec<ChainMap<F>>>,
    pub conflations: Vec<Conflation<F>>,
    pub tau: BTreeMap<usize, usize>,
    rad: Vec<Vec<Vec<ChainMap<F>>>>,
}

/// Enumerates `C_n(projΛ)` and builds its AR quiver.
pub fn build_ar_quiver<F: Field>(alg: &MonomialAlgebra, n: usize) -> Result<ARQuiver<F>> {
    let universe = enumerate_indecomposables(alg, n, &EnumConfig::default())?;
    ARQuiver::from_universe(alg, universe)
}

impl<F: Field> ARQuiver<F> {
    pub fn window(&self) -> usize {
        self.universe.window
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn class(&self, i: usize) -> &Complex<F> {
        &self.universe.reps[i]
    }

    /// Basis of `rad(X_i, X_j)`.
    pub fn rad(&self, i: usize, j: usize) -> &[ChainMap<F>] {
        &self.rad[i][j]
    }

    pub fn from_universe(alg: &MonomialAlgebra, universe: Universe<F>) -> Result<Self> {
        if !universe.closed {
            return Err(Error::NotClosed(universe.window));
        }
        let n = universe.len();
        let flags = universe.reps.iter().map(class_flags).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let rad_flat: Vec<Result<Vec<ChainMap<F>>>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                if i == j {
                    Ok(universe.locals[i].radical())
                } else {
                    Ok(hom_basis(alg, &universe.reps[i], &universe.reps[j])?.basis)
                }
            })
            .collect();
        let mut rad: Vec<Vec<Vec<ChainMap<F>>>> = vec![Vec::with_capacity(n); n];
        for ((i, _), r) in pairs.iter().zip(rad_flat) {
            rad[*i].push(r?);
        }
        let irr: Vec<Vec<ChainMap<F>>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                if rad[i][j].is_empty() {
                    return Vec::new();
                }
                let layout = Layout::new(alg, &universe.reps[i], &universe.reps[j], 0);
                let mut span = SpanBuilder::new(layout.len());
                for (row, col) in rad[i].iter().zip(&rad) {
                    for f in row {
                        for g in &col[j] {
                            span.insert(&layout.to_vec(&g.compose(alg, f)));
                        }
                    }
                }
                rad[i][j]
                    .iter()
                    .filter(|h| span.insert(&layout.to_vec(h)))
                    .cloned()
                    .collect()
            })
            .collect();
        let mut arrows = BTreeMap::new();
        let mut irreducibles = BTreeMap::new();
        for (&(i, j), maps) in pairs.iter().zip(irr) {
            if !maps.is_empty() {
                arrows.insert((i, j), maps.len());
                irreducibles.insert((i, j), maps);
            }
        }
        let mut q = ARQuiver {
            universe,
            flags,
            arrows,
            irreducibles,
            conflations: Vec::new(),
            tau: BTreeMap::new(),
            rad,
        };
        let targets: Vec<usize> = (0..n).filter(|&z| !q.flags[z].projective).collect();
        let found: Vec<Result<Conflation<F>>> = targets
            .par_iter()
            .map(|&z| q.almost_split_ending_at(alg, z))
            .collect();
        for c in found {
            let c = c?;
            q.tau.insert(c.z_class, c.x_class);
            q.conflations.push(c);
        }
        Ok(q)
    }

    /// The almost split conflation ending at class `z`, found by searching the
    /// socle of `Ext(Z, X)` over all candidate classes `X` and certified.
    pub fn almost_split_ending_at(&self, alg: &MonomialAlgebra, z: usize) -> Result<Conflation<F>> {
        if self.flags[z].projective {
            return Err(Error::Precondition(format!(
                "{} is E-projective",
                self.class(z).describe_support(alg)
            )));
        }
        let zc = self.class(z);
        let mut table = Vec::new();
        let mut certified = Vec::new();
        for x in 0..self.len() {
            if self.flags[x].injective {
                continue;
            }
            let ext = ext_classes(alg, zc, self.class(x))?;
            if ext.dim() == 0 {
                continue;
            }
            let socle = self.socle_classes(alg, z, x, &ext.reps)?;
            table.push(format!(
                "{}: ext {} socle {}",
                self.class(x).describe_support(alg),
                ext.dim(),
                socle.len()
            ));
            let Some(c) = socle.first() else {
                continue;
            };
            let sigma = ext.combine(c);
            let (y, i, d) = assemble_extension(alg, zc, self.class(x), &sigma)?;
            let mut conflation = Conflation {
                x: self.class(x).clone(),
                y,
                z: zc.clone(),
                i,
                d,
                x_class: x,
                z_class: z,
                middle: BTreeMap::new(),
                certified: false,
            };
            if !self.certify(alg, &conflation)? {
                return Err(Error::CertificationFailure(format!(
                    "{} -> Y -> {}",
                    conflation.x.describe_support(alg),
                    zc.describe_support(alg)
                )));
            }
            conflation.middle = self.middle_classes(alg, &conflation.y)?;
            conflation.certified = true;
            certified.push(conflation);
        }
        match certified.len() {
            0 => Err(Error::NoCandidateFound(format!(
                "{} [{}]",
                zc.describe_support(alg),
                table.join("; ")
            ))),
            1 => Ok(certified.pop().expect("one element")),
            _ => Err(Error::MultipleCertified(zc.describe_support(alg))),
        }
    }

    /// Coefficient vectors of classes `σ` with `σ g` a boundary for every radical `g: W -> Z`.
    fn socle_classes(
        &self,
        alg: &MonomialAlgebra,
        z: usize,
        x: usize,
        reps: &[ChainMap<F>],
    ) -> Result<Vec<Vec<F>>> {
        let m = reps.len();
        type Block<F> = (Vec<Vec<F>>, Vec<Vec<F>>);
        let mut blocks: Vec<Block<F>> = Vec::new();
        for w in 0..self.len() {
            if self.rad[w][z].is_empty() {
                continue;
            }
            let ext = ext_classes(alg, self.class(w), self.class(x))?;
            let bounds: Vec<Vec<F>> = ext
                .boundary_basis()
                .iter()
                .map(|b| ext.layout.to_vec(b))
                .collect();
            for g in &self.rad[w][z] {
                let pulled: Vec<Vec<F>> = reps
                    .iter()
                    .map(|s| ext.layout.to_vec(&s.compose(alg, g)))
                    .collect();
                blocks.push((pulled, bounds.clone()));
            }
        }
        let rows: usize = blocks.iter().map(|(a, _)| a.first().map_or(0, Vec::len)).sum();
        let cols = m + blocks.iter().map(|(_, b)| b.len()).sum::<usize>();
        if rows == 0 {
            return Ok((0..m)
                .map(|k| (0..m).map(|l| if k == l { F::one() } else { F::zero() }).collect())
                .collect());
        }
        let mut mat = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, m);
        for (pulled, bounds) in &blocks {
            let len = pulled[0].len();
            for (k, v) in pulled.iter().enumerate() {
                for (r, a) in v.iter().enumerate() {
                    mat[(r0 + r, k)] = a.clone();
                }
            }
            for (k, v) in bounds.iter().enumerate() {
                for (r, a) in v.iter().enumerate() {
                    mat[(r0 + r, c0 + k)] = a.clone();
                }
            }
            r0 += len;
            c0 += bounds.len();
        }
        let mut span = SpanBuilder::new(m);
        let mut out = Vec::new();
        for v in mat.nullspace().basis {
            let c = v[..m].to_vec();
            if span.insert(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }

    fn middle_classes(&self, alg: &MonomialAlgebra, y: &Complex<F>) -> Result<BTreeMap<usize, usize>> {
        let mut out = BTreeMap::new();
        for (w, _, _) in decompose_with_maps(alg, y)? {
            let (k, _) = self
                .universe
                .find(alg, &w.canonical(alg))?
                .ok_or_else(|| Error::IncompleteUniverse(w.describe_support(alg)))?;
            *out.entry(k).or_insert(0) += 1;
        }
        Ok(out)
    }

    fn certify(&self, alg: &MonomialAlgebra, c: &Conflation<F>) -> Result<bool> {
        Ok(local_end(alg, &c.x)?.is_some()
            && local_end(alg, &c.z)?.is_some()
            && rows_split(alg, c)
            && self.is_right_almost_split(alg, &c.y, &c.d, c.z_class)?
            && self.is_minimal(alg, &c.y, &c.d, c.z_class)?)
    }

    /// `d: Y -> Z_z` is not a retraction and every radical map into `Z_z` factors through it.
    pub fn is_right_almost_split(
        &self,
        alg: &MonomialAlgebra,
        y: &Complex<F>,
        d: &ChainMap<F>,
        z: usize,
    ) -> Result<bool> {
        if has_section(alg, y, self.class(z), d)? {
            return Ok(false);
        }
        self.radical_factors(alg, z, &[(y.clone(), d.clone())])
    }

    /// Every radical map into `Z_z` factors through one of the given maps.
    fn radical_factors(&self, alg: &MonomialAlgebra, z: usize, maps: &[(Complex<F>, ChainMap<F>)]) -> Result<bool> {
        let zc = self.class(z);
        for w in 0..self.len() {
            if self.rad[w][z].is_empty() {
                continue;
            }
            let wc = self.class(w);
            let layout = Layout::new(alg, wc, zc, 0);
            let mut span = SpanBuilder::new(layout.len());
            for (y, d) in maps {
                for u in hom_basis(alg, wc, y)?.basis {
                    span.insert(&layout.to_vec(&d.compose(alg, &u)));
                }
            }
            if !self.rad[w][z].iter().all(|h| span.contains(&layout.to_vec(h))) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A right almost split `d: Y -> Z_z` is minimal when no proper summand of `Y` still is.
    pub fn is_minimal(&self, alg: &MonomialAlgebra, y: &Complex<F>, d: &ChainMap<F>, z: usize) -> Result<bool> {
        let parts = decompose_with_maps(alg, y)?;
        if parts.len() <= 1 {
            return Ok(true);
        }
        let restricted: Vec<(Complex<F>, ChainMap<F>)> = parts
            .iter()
            .map(|(w, s, _)| (w.clone(), d.compose(alg, s)))
            .collect();
        for k in 0..restricted.len() {
            let others: Vec<_> = restricted
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .map(|(_, p)| p.clone())
                .collect();
            if self.radical_factors(alg, z, &others)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Classes other than proj-injectives with both boundary cells nonzero.
    pub fn boundary_violations(&self) -> Vec<usize> {
        let n = self.window();
        (0..self.len())
            .filter(|&k| {
                let x = self.class(k);
                !self.flags[k].proj_injective() && !x.cell(1).is_empty() && !x.cell(n).is_empty()
            })
            .collect()
    }

    /// Violations of the shape of irreducible maps on every arrow representative.
    pub fn shape_violations(&self, alg: &MonomialAlgebra) -> Vec<String> {
        let mut out = Vec::new();
        for (&(i, j), maps) in &self.irreducibles {
            for f in maps {
                if let Err(e) = classify_irreducible_components(alg, f) {
                    out.push(format!(
                        "{} -> {}: {e}",
                        self.class(i).describe_support(alg),
                        self.class(j).describe_support(alg)
                    ));
                }
            }
        }
        out
    }

    /// Violations of conflation soundness: indecomposable ends, split rows,
    /// middle terms matching arrows, one conflation per non-projective end.
    pub fn conflation_violations(&self, alg: &MonomialAlgebra) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let mut ends: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &self.conflations {
            let name = format!(
                "{} -> {}",
                c.x.describe_support(alg),
                c.z.describe_support(alg)
            );
            *ends.entry(c.z_class).or_insert(0) += 1;
            if !c.certified {
                out.push(format!("{name}: not certified"));
            }
            if local_end(alg, &c.x)?.is_none() || local_end(alg, &c.z)?.is_none() {
                out.push(format!("{name}: decomposable end term"));
            }
            if !rows_split(alg, c) {
                out.push(format!("{name}: rows are not split exact"));
            }
            let middle = self.middle_classes(alg, &c.y)?;
            let out_of_x: BTreeMap<usize, usize> = self
                .arrows
                .iter()
                .filter(|((s, _), _)| *s == c.x_class)
                .map(|((_, t), m)| (*t, *m))
                .collect();
            let into_z: BTreeMap<usize, usize> = self
                .arrows
                .iter()
                .filter(|((_, t), _)| *t == c.z_class)
                .map(|((s, _), m)| (*s, *m))
                .collect();
            if middle != out_of_x || middle != into_z || middle != c.middle {
                out.push(format!("{name}: middle term does not match arrow multiplicities"));
            }
        }
        for z in 0..self.len() {
            let count = ends.get(&z).copied().unwrap_or(0);
            let expected = usize::from(!self.flags[z].projective);
            if count != expected {
                out.push(format!(
                    "{}: {count} conflations end here, expected {expected}",
                    self.class(z).describe_support(alg)
                ));
            }
        }
        Ok(out)
    }

    /// Undirected connected components of the arrows restricted to `keep`.
    pub fn components(&self, keep: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in keep {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !comp.insert(v) {
                    continue;
                }
                for &(s, t) in self.arrows.keys() {
                    if s == v && keep.contains(&t) && !comp.contains(&t) {
                        stack.push(t);
                    }
                    if t == v && keep.contains(&s) && !comp.contains(&s) {
                        stack.push(s);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }
}

/// Degreewise: `i` a section, `d` a retraction, `d i = 0` and `Y = X ⊕ Z` in size.
fn rows_split<F: Field>(alg: &MonomialAlgebra, c: &Conflation<F>) -> bool {
    let n = c.y.window();
    (0..n).all(|j| {
        let ij = &c.i.comps[j];
        let dj = &c.d.comps[j];
        ij.is_section(alg)
            && dj.is_retraction(alg)
            && dj.mul(alg, ij).is_zero()
            && c.y.cells()[j].len() == c.x.cells()[j].len() + c.z.cells()[j].len()
    }) && c.i.is_chain_map(alg, &c.x, &c.y)
        && c.d.is_chain_map(alg, &c.y, &c.z)
}

/// Shape of the components of an irreducible map: sections after some position
/// and retractions before it. Sections take precedence over retractions.
pub fn classify_irreducible_components<F: Field>(
    alg: &MonomialAlgebra,
    f: &ChainMap<F>,
) -> Result<IrreducibleShape> {
    if f.comps.iter().all(|c| c.is_invertible(alg)) {
        return Err(Error::Precondition("isomorphisms are split".into()));
    }
    let sections: Vec<bool> = f.comps.iter().map(|c| c.is_section(alg)).collect();
    let retractions: Vec<bool> = f.comps.iter().map(|c| c.is_retraction(alg)).collect();
    if sections.iter().all(|&s| s) {
        return Ok(IrreducibleShape::AllSections);
    }
    if retractions.iter().all(|&r| r) {
        return Ok(IrreducibleShape::AllRetractions);
    }
    (0..f.comps.len())
        .find(|&i0| retractions[..i0].iter().all(|&r| r) && sections[i0 + 1..].iter().all(|&s| s))
        .map(|i0| IrreducibleShape::SplitAt(i0 + 1))
        .ok_or_else(|| {
            Error::ShapeViolation(format!("sections {sections:?}, retractions {retractions:?}"))
        })
}

/// A finite translation quiver with labelled vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationQuiver {
    pub labels: Vec<String>,
    pub arrows: BTreeMap<(usize, usize), usize>,
    pub tau: BTreeMap<usize, usize>,
}

impl TranslationQuiver {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Whether a bijection of vertices carries arrows (with multiplicities) and `τ` onto each other.
    pub fn is_isomorphic(&self, other: &TranslationQuiver) -> bool {
        let n = self.len();
        if n != other.len() || self.arrows.len() != other.arrows.len() || self.tau.len() != other.tau.len() {
            return false;
        }
        let profile = |q: &TranslationQuiver, v: usize| {
            let out: usize = q.arrows.iter().filter(|((s, _), _)| *s == v).map(|(_, m)| m).sum();
            let inn: usize = q.arrows.iter().filter(|((_, t), _)| *t == v).map(|(_, m)| m).sum();
            (out, inn, q.tau.contains_key(&v), q.tau.values().any(|&x| x == v))
        };
        let a: Vec<_> = (0..n).map(|v| profile(self, v)).collect();
        let b: Vec<_> = (0..n).map(|v| profile(other, v)).collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_iso(other, &a, &b, 0, &mut map, &mut used)
    }

    fn extend_iso(
        &self,
        other: &TranslationQuiver,
        a: &[(usize, usize, bool, bool)],
        b: &[(usize, usize, bool, bool)],
        v: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == self.len() {
            return true;
        }
        for w in 0..other.len() {
            if used[w] || a[v] != b[w] {
                continue;
            }
            map[v] = w;
            let consistent = (0..=v).all(|u| {
                let (mu, mv) = (map[u], w);
                self.arrows.get(&(u, v)) == other.arrows.get(&(mu, mv))
                    && self.arrows.get(&(v, u)) == other.arrows.get(&(mv, mu))
                    && (self.tau.get(&v) == Some(&u)) == (other.tau.get(&mv) == Some(&mu))
                    && (self.tau.get(&u) == Some(&v)) == (other.tau.get(&mu) == Some(&mv))
            });
            if consistent {
                used[w] = true;
                if self.extend_iso(other, a, b, v + 1, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        map[v] = usize::MAX;
        false
    }
}

/// Stalk type of a class: `S(P)` sits at position 1, `T(P)` at the last position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stalk {
    S(usize),
    T(usize),
}

/// The reduced component `Γ̄` of the quiver at window `η+1`.
#[derive(Clone, Debug)]
pub struct GammaBar {
    pub eta: usize,
    /// Class indices in the source quiver, in quiver order.
    pub classes: Vec<usize>,
    pub anchor: usize,
    pub quiver: TranslationQuiver,
    pub stalks: Vec<Option<Stalk>>,
}

pub fn gamma_bar<F: Field>(alg: &MonomialAlgebra, q: &ARQuiver<F>) -> Result<GammaBar> {
    let n = q.window();
    if n < 2 {
        return Err(Error::EtaZero);
    }
    let keep: BTreeSet<usize> = (0..q.len()).filter(|&k| !q.flags[k].proj_injective()).collect();
    let mut anchors: Vec<usize> = keep
        .iter()
        .copied()
        .filter(|&k| !q.class(k).can_extend_left(alg) && !q.class(k).can_extend_right(alg))
        .collect();
    anchors.sort_by_key(|&k| q.class(k).cell(1).is_empty() || q.class(k).cell(n).is_empty());
    let comps: Vec<BTreeSet<usize>> = q
        .components(&keep)
        .into_iter()
        .filter(|c| anchors.iter().any(|a| c.contains(a)))
        .collect();
    let comp = match comps.len() {
        0 => {
            let dump: Vec<String> = keep.iter().map(|&k| q.class(k).describe_support(alg)).collect();
            return Err(Error::NoAnchorFound(dump.join(", ")));
        }
        1 => comps.into_iter().next().expect("one component"),
        _ => {
            let dump: Vec<String> = comps
                .iter()
                .map(|c| {
                    let names: Vec<String> = c.iter().map(|&k| q.class(k).describe_support(alg)).collect();
                    format!("{{{}}}", names.join(", "))
                })
                .collect();
            return Err(Error::NoAnchorFound(format!("anchors in several components: {}", dump.join(" "))));
        }
    };
    let classes: Vec<usize> = comp.into_iter().collect();
    let local: BTreeMap<usize, usize> = classes.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let anchor = anchors
        .iter()
        .find_map(|a| local.get(a).copied())
        .expect("component holds an anchor");
    let quiver = TranslationQuiver {
        labels: classes.iter().map(|&k| q.class(k).describe(alg)).collect(),
        arrows: q
            .arrows
            .iter()
            .filter_map(|(&(s, t), &m)| Some(((*local.get(&s)?, *local.get(&t)?), m)))
            .collect(),
        tau: q
            .tau
            .iter()
            .filter_map(|(z, x)| Some((*local.get(z)?, *local.get(x)?)))
            .collect(),
    };
    let stalks = classes
        .iter()
        .map(|&k| {
            let x = q.class(k);
            match (x.summand_count(), x.support()) {
                (1, Some((1, 1))) => Some(Stalk::S(x.cell(1)[0])),
                (1, Some((p, _))) if p == n => Some(Stalk::T(x.cell(n)[0])),
                _ => None,
            }
        })
        .collect();
    Ok(GammaBar {
        eta: n - 1,
        classes,
        anchor,
        quiver,
        stalks,
    })
}

/// Translates of `Γ̄` for `t` in `[t_min, t_max]`, vertices ordered by `t` then class.
/// Consecutive translates are glued by `τ(T(P)⟨t+1⟩) = S(P)⟨t⟩` and the connecting
/// arrows those meshes force.
#[derive(Clone, Debug)]
pub struct DerivedWindow {
    pub quiver: TranslationQuiver,
    /// `(Γ̄ vertex, t)` for every vertex.
    pub vertices: Vec<(usize, i64)>,
    /// Translate boundaries `t -> t+1` without a derivable connecting arrow.
    pub unglued: Vec<i64>,
}

pub fn derived_window(gb: &GammaBar, t_min: i64, t_max: i64) -> Result<DerivedWindow> {
    if t_min > t_max {
        return Err(Error::Precondition(format!("t-min {t_min} exceeds t-max {t_max}")));
    }
    let m = gb.quiver.len();
    let copies = (t_max - t_min + 1) as usize;
    let id = |v: usize, c: usize| c * m + v;
    let mut out = TranslationQuiver::default();
    let mut vertices = Vec::new();
    for c in 0..copies {
        let t = t_min + c as i64;
        for (v, label) in gb.quiver.labels.iter().enumerate() {
            out.labels.push(format!("{label} <{t}>"));
            vertices.push((v, t));
        }
        for (&(s, e), &mult) in &gb.quiver.arrows {
            out.arrows.insert((id(s, c), id(e, c)), mult);
        }
        for (&z, &x) in &gb.quiver.tau {
            out.tau.insert(id(z, c), id(x, c));
        }
    }
    let glue: Vec<(usize, usize)> = (0..m)
        .filter_map(|z| match gb.stalks[z] {
            Some(Stalk::T(p)) => (0..m)
                .find(|&x| gb.stalks[x] == Some(Stalk::S(p)))
                .map(|x| (z, x)),
            _ => None,
        })
        .collect();
    let mut unglued = Vec::new();
    for c in 0..copies.saturating_sub(1) {
        let mut connecting = 0;
        for &(z, x) in &glue {
            let (zz, xx) = (id(z, c + 1), id(x, c));
            out.tau.insert(zz, xx);
            for (&(s, e), &mult) in &gb.quiver.arrows {
                if e == z {
                    connecting += 1;
                    let key = (xx, id(s, c + 1));
                    let cur = out.arrows.get(&key).copied().unwrap_or(0);
                    out.arrows.insert(key, cur.max(mult));
                }
                if s == x {
                    connecting += 1;
                    let key = (id(e, c), zz);
                    let cur = out.arrows.get(&key).copied().unwrap_or(0);
                    out.arrows.insert(key, cur.max(mult));
                }
            }
        }
        if connecting == 0 {
            unglued.push(t_min + c as i64);
        }
    }
    Ok(DerivedWindow {
        quiver: out,
        vertices,
        unglued,
    })
}

/// The `η = 0` window: one isolated vertex per projective and translate.
pub fn point_window(alg: &MonomialAlgebra, t_min: i64, t_max: i64) -> Result<TranslationQuiver> {
    if t_min > t_max {
        return Err(Error::Precondition(format!("t-min {t_min} exceeds t-max {t_max}")));
    }
    let mut out = TranslationQuiver::default();
    for t in t_min..=t_max {
        for v in 0..alg.vertex_count() {
            out.labels.push(format!("P{} <{t}>", alg.quiver().vertex_id(v)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct WindowComparison {
    pub small_window: usize,
    pub big_window: usize,
    pub big_conflations: usize,
    pub small_conflations: usize,
    pub violations: Vec<String>,
}

impl WindowComparison {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Classes of `big` isomorphic to embeddings of classes of `small`.
pub fn embedded_classes<F: Field>(
    alg: &MonomialAlgebra,
    small: &ARQuiver<F>,
    big: &ARQuiver<F>,
) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for x in &small.universe.reps {
        for e in embeddings(x, big.window()) {
            if let Some((k, _)) = big.universe.find(alg, &e)? {
                out.insert(k);
            }
        }
    }
    Ok(out)
}

/// All placements of `x` into a larger window by embedding on the left or right.
fn embeddings<F: Field>(x: &Complex<F>, window: usize) -> Vec<Complex<F>> {
    let extra = window - x.window();
    (0..=extra)
        .map(|left| {
            let mut y = x.clone();
            for _ in 0..left {
                y = y.embed_left();
            }
            for _ in left..extra {
                y = y.embed_right();
            }
            y
        })
        .collect()
}

/// Compares almost split conflations at window `η+1` (`small`) and `n` (`big`) up to translation.
pub fn check_theorem_3_21<F: Field>(
    alg: &MonomialAlgebra,
    small: &ARQuiver<F>,
    big: &ARQuiver<F>,
) -> Result<WindowComparison> {
    let mut report = WindowComparison {
        small_window: small.window(),
        big_window: big.window(),
        big_conflations: big.conflations.len(),
        small_conflations: small.conflations.len(),
        violations: Vec::new(),
    };
    if small.window() < 2 {
        report.violations.push("eta is zero".into());
        return Ok(report);
    }
    for c in &big.conflations {
        if !restricts(alg, small, &c.x, &c.y, &c.z)? {
            report.violations.push(format!(
                "window {} conflation {} -> {} has no counterpart at window {}",
                big.window(),
                c.x.describe(alg),
                c.z.describe(alg),
                small.window()
            ));
        }
    }
    for c in &small.conflations {
        let mut found = false;
        let (xs, ys, zs) = (
            embeddings(&c.x, big.window()),
            embeddings(&c.y, big.window()),
            embeddings(&c.z, big.window()),
        );
        for ((x, y), z) in xs.iter().zip(&ys).zip(&zs) {
            if matches_conflation(alg, big, x, y, z)? {
                found = true;
                break;
            }
        }
        if !found {
            report.violations.push(format!(
                "window {} conflation {} -> {} does not embed into window {}",
                small.window(),
                c.x.describe(alg),
                c.z.describe(alg),
                big.window()
            ));
        }
    }
    for k in big.boundary_violations() {
        report.violations.push(format!(
            "class {} has both boundary cells nonzero",
            big.class(k).describe(alg)
        ));
    }
    Ok(report)
}

/// Drops empty boundary cells down to the small window and looks for the matching conflation.
fn restricts<F: Field>(
    alg: &MonomialAlgebra,
    small: &ARQuiver<F>,
    x: &Complex<F>,
    y: &Complex<F>,
    z: &Complex<F>,
) -> Result<bool> {
    if x.window() == small.window() {
        return matches_conflation(alg, small, x, y, z);
    }
    let n = x.window();
    let empty = |pos: usize| [x, y, z].iter().all(|c| c.cell(pos).is_empty());
    if empty(1) && restricts(alg, small, &x.drop_first(), &y.drop_first(), &z.drop_first())? {
        return Ok(true);
    }
    if empty(n) && restricts(alg, small, &x.drop_last(), &y.drop_last(), &z.drop_last())? {
        return Ok(true);
    }
    Ok(false)
}

fn matches_conflation<F: Field>(
    alg: &MonomialAlgebra,
    q: &ARQuiver<F>,
    x: &Complex<F>,
    y: &Complex<F>,
    z: &Complex<F>,
) -> Result<bool> {
    let (Some((xk, _)), Some((zk, _))) = (q.universe.find(alg, x)?, q.universe.find(alg, z)?) else {
        return Ok(false);
    };
    let Some(c) = q.conflations.iter().find(|c| c.z_class == zk) else {
        return Ok(false);
    };
    Ok(c.x_class == xk && c.certified && q.middle_classes(alg, y)? == c.middle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::FieldTag;
    use num_rational::BigRational;

    type Q = BigRational;

    fn alg(vs: &[u32], arrows: &[(&str, u32, u32)], rels: &[&[&str]]) -> MonomialAlgebra {
        MonomialAlgebra::from_spec(vs, arrows, rels, FieldTag::Rational).unwrap()
    }

    #[test]
    fn single_vertex_window_two() {
        let a = alg(&[1], &[], &[]);
        let q = build_ar_quiver::<Q>(&a, 2).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.arrows.len(), 2);
        assert_eq!(q.conflations.len(), 1);
        assert!(q.conflation_violations(&a).unwrap().is_empty());
        assert!(q.shape_violations(&a).is_empty());
    }

    #[test]
    fn a2_and_example_45() {
        let a = alg(&[1, 2], &[("a", 1, 2)], &[]);
        let q = build_ar_quiver::<Q>(&a, 2).unwrap();
        assert!(q.conflation_violations(&a).unwrap().is_empty());
        assert!(q.shape_violations(&a).is_empty());
        let b = alg(&[1, 2, 3], &[("a", 1, 2), ("b", 2, 3)], &[&["a", "b"]]);
        let q = build_ar_quiver::<Q>(&b, 3).unwrap();
        assert!(q.conflation_violations(&b).unwrap().is_empty());
        assert!(q.shape_violations(&b).is_empty());
    }

    fn zigzag(len: usize) -> TranslationQuiver {
        TranslationQuiver {
            labels: (0..len).map(|k| k.to_string()).collect(),
            arrows: (1..len).map(|k| ((k - 1, k), 1)).collect(),
            tau: (2..len).map(|k| (k, k - 2)).collect(),
        }
    }

    #[test]
    fn gamma_bar_and_derived_window() {
        let a = alg(&[1, 2], &[("a", 1, 2)], &[]);
        let q = build_ar_quiver::<Q>(&a, 2).unwrap();
        let gb = gamma_bar(&a, &q).unwrap();
        assert_eq!(gb.quiver.labels[gb.anchor], "P2 -> P1");
        let w = derived_window(&gb, -2, 2).unwrap();
        assert_eq!(w.quiver.len(), 5 * gb.quiver.len());
        assert!(w.unglued.is_empty());
        assert!(w.quiver.is_isomorphic(&zigzag(w.quiver.len())));
        let w0 = derived_window(&gb, 0, 0).unwrap();
        assert_eq!((&w0.quiver.arrows, &w0.quiver.tau), (&gb.quiver.arrows, &gb.quiver.tau));
        let b = alg(&[1, 2, 3], &[("a", 1, 2), ("b", 2, 3)], &[&["a", "b"]]);
        let q3 = build_ar_quiver::<Q>(&b, 3).unwrap();
        let gb = gamma_bar(&b, &q3).unwrap();
        let w = derived_window(&gb, -1, 1).unwrap();
        assert!(w.unglued.is_empty());
    }

    #[test]
    fn windows_agree_up_to_translation() {
        let a = alg(&[1, 2], &[("a", 1, 2)], &[]);
        let r = check_theorem_3_21(&a, &build_ar_quiver::<Q>(&a, 2).unwrap(), &build_ar_quiver::<Q>(&a, 3).unwrap()).unwrap();
        assert!(r.passed());
        let b = alg(&[1, 2, 3], &[("a", 1, 2), ("b", 2, 3)], &[&["a", "b"]]);
        let q4 = build_ar_quiver::<Q>(&b, 4).unwrap();
        assert!(q4.boundary_violations().is_empty());
        assert!(q4.conflation_violations(&b).unwrap().is_empty());
        let r = check_theorem_3_21(&b, &build_ar_quiver::<Q>(&b, 3).unwrap(), &q4).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn single_vertex_details() {
        let a = alg(&[1], &[], &[]);
        let q = build_ar_quiver::<Q>(&a, 2).unwrap();
        let find = |desc: &str| (0..q.len()).find(|&k| q.class(k).describe(&a) == desc).unwrap();
        let (s, j, t) = (find("P1 -> 0"), find("P1 -> P1"), find("0 -> P1"));
        assert_eq!(q.arrows.keys().copied().collect::<Vec<_>>().len(), 2);
        assert!(q.arrows.contains_key(&(t, j)) && q.arrows.contains_key(&(j, s)));
        let c = q.almost_split_ending_at(&a, s).unwrap();
        assert_eq!((c.x_class, c.middle.keys().copied().collect::<Vec<_>>()), (t, vec![j]));
        assert!(matches!(q.almost_split_ending_at(&a, t), Err(Error::Precondition(_))));
        assert!(q.is_right_almost_split(&a, &c.y, &c.d, s).unwrap());
        let zero = Complex::<Q>::zero(2);
        assert!(!q
            .is_right_almost_split(&a, &zero, &ChainMap::zero(&zero, q.class(s), 0), s)
            .unwrap());
        let id = ChainMap::identity(&a, q.class(s));
        assert!(!q.is_right_almost_split(&a, q.class(s), &id, s).unwrap());
        assert!(matches!(classify_irreducible_components(&a, &id), Err(Error::Precondition(_))));
        assert_eq!(
            classify_irreducible_components(&a, &q.irreducibles[&(j, s)][0]).unwrap(),
            IrreducibleShape::AllRetractions
        );
        assert_eq!(
            classify_irreducible_components(&a, &q.irreducibles[&(t, j)][0]).unwrap(),
            IrreducibleShape::AllSections
        );
        assert!(matches!(gamma_bar(&a, &build_ar_quiver::<Q>(&a, 1).unwrap()), Err(Error::EtaZero)));
    }

    #[test]
    fn new_conflation_at_eta_plus_one() {
        let b = alg(&[1, 2, 3], &[("a", 1, 2), ("b", 2, 3)], &[&["a", "b"]]);
        let q2 = build_ar_quiver::<Q>(&b, 2).unwrap();
        let q3 = build_ar_quiver::<Q>(&b, 3).unwrap();
        let w = (0..q3.len()).find(|&k| q3.class(k).describe(&b) == "P3 -> P2 -> P1").unwrap();
        let c = q3.conflations.iter().find(|c| c.z_class == w).unwrap();
        assert!(c.certified);
        assert!(!embedded_classes(&b, &q2, &q3).unwrap().contains(&c.z_class));
    }

    #[test]
    fn mismatched_quivers_are_not_isomorphic() {
        let mut z = zigzag(6);
        assert!(z.is_isomorphic(&zigzag(6)));
        z.tau.remove(&5);
        assert!(!z.is_isomorphic(&zigzag(6)));
        assert!(!zigzag(5).is_isomorphic(&zigzag(6)));
    }
}
