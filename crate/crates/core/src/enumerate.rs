//! Lists of indecomposable complexes in a window, up to isomorphism.
//!
//! The closure engine starts from stalks and `J_k(P)` and closes under
//! one-cell extensions, cones and middle terms of extensions. The brute force
//! enumerator over a prime field serves as an independent oracle.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::complexcat::{cone, make_j, make_stalk, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::field::{Field, FiniteField};
use crate::homlin::{
    assemble_extension, decompose_local, ext_classes, find_isomorphism, hom_basis, local_end,
    LocalEnd,
};
use crate::qalgebra::{MonomialAlgebra, PathMatrix};

#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub max_rounds: usize,
    /// Largest total number of summands allowed in a representative.
    pub max_multiplicity: usize,
    pub extensions: bool,
    pub cones: bool,
    pub middle_terms: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_rounds: 50,
            max_multiplicity: 24,
            extensions: true,
            cones: true,
            middle_terms: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub rounds: usize,
    pub candidates: usize,
    pub cap_hits: usize,
}

/// Representatives of the indecomposables of `C_n(projΛ)`.
#[derive(Clone, Debug)]
pub struct Universe<F> {
    pub window: usize,
    pub reps: Vec<Complex<F>>,
    pub locals: Vec<LocalEnd<F>>,
    pub closed: bool,
    pub stats: EnumStats,
    buckets: HashMap<Vec<Vec<usize>>, Vec<usize>>,
}

impl<F: Field> Universe<F> {
    pub fn empty(window: usize) -> Self {
        Universe {
            window,
            reps: Vec::new(),
            locals: Vec::new(),
            closed: true,
            stats: EnumStats::default(),
            buckets: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the class of an indecomposable `x` and an isomorphism from the representative to `x`.
    pub fn find(&self, alg: &MonomialAlgebra, x: &Complex<F>) -> Result<Option<(usize, ChainMap<F>)>> {
        let Some(bucket) = self.buckets.get(&x.signature()) else {
            return Ok(None);
        };
        for &i in bucket {
            if let Some(iso) = find_isomorphism(alg, &self.reps[i], &self.locals[i], x)? {
                return Ok(Some((i, iso)));
            }
        }
        Ok(None)
    }

    /// Adds an indecomposable if it is new; returns whether it was added.
    pub fn insert(&mut self, alg: &MonomialAlgebra, x: Complex<F>, local: LocalEnd<F>) -> Result<bool> {
        if self.find(alg, &x)?.is_some() {
            return Ok(false);
        }
        self.buckets.entry(x.signature()).or_default().push(self.reps.len());
        self.reps.push(x);
        self.locals.push(local);
        Ok(true)
    }

    /// Sorts representatives by support, then by cell vertex ids.
    pub fn sort(&mut self, alg: &MonomialAlgebra) {
        let key = |x: &Complex<F>| {
            let support = x.support().unwrap_or((0, 0));
            let ids: Vec<Vec<u32>> = x
                .cells()
                .iter()
                .map(|c| c.iter().map(|&v| alg.quiver().vertex_id(v)).collect())
                .collect();
            (support, ids, x.describe(alg))
        };
        let mut order: Vec<usize> = (0..self.reps.len()).collect();
        order.sort_by_cached_key(|&i| key(&self.reps[i]));
        let reps = order.iter().map(|&i| self.reps[i].clone()).collect();
        let locals = order.iter().map(|&i| self.locals[i].clone()).collect();
        self.reps = reps;
        self.locals = locals;
        self.buckets.clear();
        for (i, x) in self.reps.iter().enumerate() {
            self.buckets.entry(x.signature()).or_default().push(i);
        }
    }

    /// Cell signatures with vertex ids, sorted, one per class.
    pub fn signatures(&self, alg: &MonomialAlgebra) -> Vec<Vec<Vec<u32>>> {
        let mut out: Vec<Vec<Vec<u32>>> = self
            .reps
            .iter()
            .map(|x| {
                x.cells()
                    .iter()
                    .map(|c| {
                        let mut ids: Vec<u32> = c.iter().map(|&v| alg.quiver().vertex_id(v)).collect();
                        ids.sort_unstable();
                        ids
                    })
                    .collect()
            })
            .collect();
        out.sort();
        out
    }

    pub fn lengths(&self, alg: &MonomialAlgebra) -> Vec<usize> {
        self.reps.iter().map(|x| x.length(alg)).collect()
    }

    /// Largest per-cell multiplicity of a representative.
    pub fn cell_bound(x: &Complex<F>) -> usize {
        x.cells().iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Maximal length over a closed universe, with the index of a witness.
pub fn max_length<F: Field>(alg: &MonomialAlgebra, universe: &Universe<F>) -> Result<(usize, Option<usize>)> {
    if !universe.closed {
        return Err(Error::NotClosed(universe.window));
    }
    let mut best = (0, None);
    for (i, l) in universe.lengths(alg).into_iter().enumerate() {
        if best.1.is_none() || l > best.0 {
            best = (l, Some(i));
        }
    }
    Ok(best)
}

type Found<F> = Vec<(Complex<F>, LocalEnd<F>)>;

/// Closure engine: seeds, then extensions, cones and middle terms until a quiet round.
pub fn enumerate_indecomposables<F: Field>(
    alg: &MonomialAlgebra,
    n: usize,
    config: &EnumConfig,
) -> Result<Universe<F>> {
    let mut universe = Universe::empty(n);
    universe.closed = false;
    let nv = alg.vertex_count();
    for v in 0..nv {
        for pos in 1..=n {
            let x = make_stalk::<F>(v, pos, n)?;
            let local = local_end(alg, &x)?.expect("stalks are indecomposable");
            universe.insert(alg, x.canonical(alg), local)?;
        }
        for k in 1..n {
            let x = make_j::<F>(alg, v, k, n)?;
            let local = local_end(alg, &x)?.expect("J complexes are indecomposable");
            universe.insert(alg, x, local)?;
        }
    }
    let mut start = 0;
    for round in 0..config.max_rounds {
        universe.stats.rounds = round + 1;
        let end = universe.len();
        let mut tasks: Vec<(usize, usize)> = Vec::new();
        for i in 0..end {
            for j in 0..end {
                if i >= start || j >= start {
                    tasks.push((i, j));
                }
            }
        }
        let reps = &universe.reps;
        let results: Vec<Result<Found<F>>> = tasks
            .par_iter()
            .map(|&(i, j)| {
                let mut found = Vec::new();
                if i == j && i >= start {
                    found.extend(shifts(alg, &reps[i])?);
                }
                if config.cones {
                    found.extend(cone_pieces(alg, &reps[i], &reps[j])?);
                }
                if config.middle_terms || config.extensions {
                    found.extend(middle_pieces(alg, &reps[i], &reps[j])?);
                }
                Ok(found)
            })
            .collect();
        let mut added = 0;
        for r in results {
            for (x, local) in r? {
                universe.stats.candidates += 1;
                if x.summand_count() > config.max_multiplicity {
                    universe.stats.cap_hits += 1;
                    continue;
                }
                if universe.insert(alg, x, local)? {
                    added += 1;
                }
            }
        }
        start = end;
        if added == 0 {
            universe.closed = universe.stats.cap_hits == 0;
            break;
        }
    }
    universe.sort(alg);
    Ok(universe)
}

/// All placements of `x` inside its window.
fn shifts<F: Field>(alg: &MonomialAlgebra, x: &Complex<F>) -> Result<Found<F>> {
    let n = x.window();
    let Some((r, s)) = x.support() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for new_r in 1..=n - (s - r) {
        let p = new_r as isize - r as isize;
        if p == 0 {
            continue;
        }
        let y = x.shift_window(p, n)?;
        if let Some(local) = local_end(alg, &y)? {
            out.push((y, local));
        }
    }
    Ok(out)
}

/// Summands of cones of basis maps (and their sum) from `x` to `y`, placed in the window.
fn cone_pieces<F: Field>(alg: &MonomialAlgebra, x: &Complex<F>, y: &Complex<F>) -> Result<Found<F>> {
    let hom = hom_basis(alg, x, y)?;
    if hom.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut maps = hom.basis.clone();
    if hom.dim() > 1 {
        maps.push(hom.combine(&vec![F::one(); hom.dim()]));
    }
    let n = x.window();
    let mut out = Vec::new();
    for f in maps {
        let c = cone(x, y, &f)?.strip_contractible(alg);
        let Some((r, s)) = c.support() else {
            continue;
        };
        if s - r + 1 > n {
            continue;
        }
        let placed = c.shift_window(1 - r as isize, n)?;
        out.extend(decompose_local(alg, &placed)?);
    }
    Ok(out)
}

/// Summands of middle terms of extensions of `z` by `x` for each basis class and their sum.
fn middle_pieces<F: Field>(alg: &MonomialAlgebra, z: &Complex<F>, x: &Complex<F>) -> Result<Found<F>> {
    let ext = ext_classes(alg, z, x)?;
    if ext.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut classes = ext.reps.clone();
    if ext.dim() > 1 {
        classes.push(ext.combine(&vec![F::one(); ext.dim()]));
    }
    let mut out = Vec::new();
    for sigma in classes {
        let (y, _, _) = assemble_extension(alg, z, x, &sigma)?;
        out.extend(decompose_local(alg, &y)?);
    }
    Ok(out)
}

/// Default limit on the number of candidate complexes the brute force search visits.
pub const BRUTE_FORCE_LIMIT: u128 = 20_000_000;

/// Exhaustive search over all complexes with at most `bound` summands per cell
/// and all differentials over the finite field `F`.
pub fn brute_force_indecomposables<F: FiniteField>(
    alg: &MonomialAlgebra,
    n: usize,
    bound: usize,
    limit: u128,
) -> Result<Universe<F>> {
    let mut universe = Universe::empty(n);
    if bound == 0 {
        return Ok(universe);
    }
    let options = multisets(alg, bound);
    let q = F::elements().len() as u128;
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..options.len()).map(move |o| {
                    let mut t = t.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    let mut total: u128 = 0;
    for t in &tuples {
        let mut size: u128 = 1;
        for i in 0..n.saturating_sub(1) {
            let slots = slot_count(alg, &options[t[i + 1]], &options[t[i]]);
            size = size.saturating_mul(q.saturating_pow(slots as u32));
        }
        total = total.saturating_add(size);
    }
    if total > limit {
        return Err(Error::SearchSpaceTooLarge(total));
    }
    let elements = F::elements();
    let found: Vec<Result<Found<F>>> = tuples
        .par_iter()
        .map(|t| {
            let cells: Vec<Vec<usize>> = t.iter().map(|&o| options[o].clone()).collect();
            if cells.iter().all(Vec::is_empty) {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            let mut diffs = Vec::new();
            search_diffs(alg, &cells, &elements, &mut diffs, &mut out)?;
            Ok(out)
        })
        .collect();
    for r in found {
        for (x, local) in r? {
            universe.stats.candidates += 1;
            universe.insert(alg, x, local)?;
        }
    }
    universe.sort(alg);
    Ok(universe)
}

/// Multisets of vertices of size at most `bound`, sorted by vertex id.
fn multisets(alg: &MonomialAlgebra, bound: usize) -> Vec<Vec<usize>> {
    let mut verts: Vec<usize> = (0..alg.vertex_count()).collect();
    verts.sort_by_key(|&v| alg.quiver().vertex_id(v));
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..bound {
        let mut next = Vec::new();
        for (m, from) in &frontier {
            for (k, &v) in verts.iter().enumerate().skip(*from) {
                let mut m2 = m.clone();
                m2.push(v);
                out.push(m2.clone());
                next.push((m2, k));
            }
        }
        frontier = next;
    }
    out
}

fn slot_count(alg: &MonomialAlgebra, rows: &[usize], cols: &[usize]) -> usize {
    rows.iter()
        .flat_map(|&r| cols.iter().map(move |&c| alg.paths_between(r, c).len()))
        .sum()
}

fn search_diffs<F: FiniteField>(
    alg: &MonomialAlgebra,
    cells: &[Vec<usize>],
    elements: &[F],
    diffs: &mut Vec<PathMatrix<F>>,
    out: &mut Found<F>,
) -> Result<()> {
    let n = cells.len();
    let i = diffs.len();
    if i + 1 == n {
        let x = Complex::from_parts(n, cells.to_vec(), diffs.clone());
        if has_isolated_summand(&x) {
            return Ok(());
        }
        if let Some(local) = local_end(alg, &x)? {
            out.push((x, local));
        }
        return Ok(());
    }
    let rows = &cells[i + 1];
    let cols = &cells[i];
    let slots: Vec<(usize, usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(r, &rv)| {
            cols.iter().enumerate().flat_map(move |(c, &cv)| {
                alg.paths_between(rv, cv).iter().map(move |&p| (r, c, p))
            })
        })
        .collect();
    let mut counter = vec![0usize; slots.len()];
    loop {
        let mut d = PathMatrix::zero(rows.clone(), cols.clone());
        for (k, &(r, c, p)) in slots.iter().enumerate() {
            let v = &elements[counter[k]];
            if !v.is_zero() {
                d.entry_mut(r, c).insert(p, v.clone());
            }
        }
        if i == 0 || d.mul(alg, &diffs[i - 1]).is_zero() {
            diffs.push(d);
            search_diffs(alg, cells, elements, diffs, out)?;
            diffs.pop();
        }
        let mut k = 0;
        loop {
            if k == slots.len() {
                return Ok(());
            }
            counter[k] += 1;
            if counter[k] < elements.len() {
                break;
            }
            counter[k] = 0;
            k += 1;
        }
    }
}

/// A summand with no incoming and no outgoing differential entries in a complex
/// with more than one summand splits off.
fn has_isolated_summand<F: Field>(x: &Complex<F>) -> bool {
    if x.summand_count() <= 1 {
        return false;
    }
    let n = x.window();
    for pos in 0..n {
        for idx in 0..x.cells()[pos].len() {
            let incoming = pos > 0 && {
                let d = &x.diffs()[pos - 1];
                (0..d.ncols()).any(|c| !d.entry(idx, c).is_empty())
            };
            let outgoing = pos + 1 < n && {
                let d = &x.diffs()[pos];
                (0..d.nrows()).any(|r| !d.entry(r, idx).is_empty())
            };
            if !incoming && !outgoing {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::homlin::is_isomorphic;
    use crate::qalgebra::{AlgElement, FieldTag};
    use num_rational::BigRational;

    type Q = BigRational;
    type G = Fp<2>;

    fn single(tag: FieldTag) -> MonomialAlgebra {
        MonomialAlgebra::from_spec(&[1], &[], &[], tag).unwrap()
    }

    fn a2(tag: FieldTag) -> MonomialAlgebra {
        MonomialAlgebra::from_spec(&[1, 2], &[("a", 1, 2)], &[], tag).unwrap()
    }

    fn ex45(tag: FieldTag) -> MonomialAlgebra {
        MonomialAlgebra::from_spec(
            &[1, 2, 3],
            &[("alpha", 1, 2), ("beta", 2, 3)],
            &[&["alpha", "beta"]],
            tag,
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_window_two() {
        let alg = single(FieldTag::Rational);
        let u = enumerate_indecomposables::<Q>(&alg, 2, &EnumConfig::default()).unwrap();
        assert!(u.closed);
        assert_eq!(u.len(), 3);
        assert_eq!(max_length(&alg, &u).unwrap().0, 0);
    }

    #[test]
    fn a2_window_two() {
        let alg = a2(FieldTag::Rational);
        let u = enumerate_indecomposables::<Q>(&alg, 2, &EnumConfig::default()).unwrap();
        assert!(u.closed);
        assert_eq!(u.len(), 7);
        let (len, w) = max_length(&alg, &u).unwrap();
        assert_eq!(len, 1);
        assert_eq!(u.reps[w.unwrap()].describe(&alg), "P2 -> P1");
    }

    #[test]
    fn example_45_contains_full_support_complexes() {
        let alg = ex45(FieldTag::Rational);
        let u = enumerate_indecomposables::<Q>(&alg, 2, &EnumConfig::default()).unwrap();
        assert!(u.reps.iter().any(|x| x.describe(&alg) == "P3 -> P2"));
        let u3 = enumerate_indecomposables::<Q>(&alg, 3, &EnumConfig::default()).unwrap();
        let (len, w) = max_length(&alg, &u3).unwrap();
        assert_eq!(len, 2);
        let e = |names: &[&str]| {
            let el = AlgElement::from_arrows(&alg, names).unwrap();
            let mut m = PathMatrix::zero(vec![el.source], vec![el.target]);
            m.set(0, 0, &el).unwrap();
            m
        };
        let expected = Complex::<Q>::new(
            &alg,
            3,
            vec![vec![2], vec![1], vec![0]],
            vec![e(&["beta"]), e(&["alpha"])],
        )
        .unwrap();
        assert!(is_isomorphic(&alg, &u3.reps[w.unwrap()], &expected).unwrap());
    }

    #[test]
    fn oracle_counts() {
        let alg = single(FieldTag::Prime(2));
        assert_eq!(brute_force_indecomposables::<G>(&alg, 2, 1, BRUTE_FORCE_LIMIT).unwrap().len(), 3);
        assert!(brute_force_indecomposables::<G>(&alg, 2, 0, BRUTE_FORCE_LIMIT).unwrap().is_empty());
        let alg = a2(FieldTag::Prime(2));
        let oracle = brute_force_indecomposables::<G>(&alg, 2, 2, BRUTE_FORCE_LIMIT).unwrap();
        let closure = enumerate_indecomposables::<G>(&alg, 2, &EnumConfig::default()).unwrap();
        assert_eq!(oracle.len(), 7);
        assert_eq!(oracle.signatures(&alg), closure.signatures(&alg));
    }

    #[test]
    fn oracle_refuses_huge_searches() {
        let alg = ex45(FieldTag::Prime(2));
        assert!(matches!(
            brute_force_indecomposables::<G>(&alg, 4, 3, 1000),
            Err(Error::SearchSpaceTooLarge(_))
        ));
    }

    #[test]
    fn unclosed_universe_has_no_max_length() {
        let alg = single(FieldTag::Rational);
        let mut u = enumerate_indecomposables::<Q>(&alg, 2, &EnumConfig::default()).unwrap();
        u.closed = false;
        assert!(matches!(max_length(&alg, &u), Err(Error::NotClosed(2))));
    }
}
