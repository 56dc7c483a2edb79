//! Strong global dimension from the first window whose indecomposables all
//! have an empty boundary cell.

use std::fmt::Write as _;

use crate::arquiver::class_flags;
use crate::complexcat::Complex;
use crate::enumerate::{enumerate_indecomposables, max_length, EnumConfig, Universe};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::qalgebra::MonomialAlgebra;

pub const DEFAULT_MAX_N: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowRow {
    pub n: usize,
    pub classes: usize,
    pub violators: usize,
    pub max_length: usize,
    pub closed: bool,
}

#[derive(Clone, Debug)]
pub struct SgldimReport<F> {
    pub m0: usize,
    pub sgldim: usize,
    pub witness: Complex<F>,
    pub per_window: Vec<WindowRow>,
    pub terminated: bool,
    pub cap_note: Option<String>,
}

/// Classes with both boundary cells nonzero, proj-injectives excluded.
pub fn boundary_violators<F: Field>(universe: &Universe<F>) -> Vec<usize> {
    let n = universe.window;
    (0..universe.len())
        .filter(|&k| {
            let x = &universe.reps[k];
            !class_flags(x).proj_injective() && !x.cell(1).is_empty() && !x.cell(n).is_empty()
        })
        .collect()
}

fn closed_universe<F: Field>(alg: &MonomialAlgebra, n: usize) -> Result<Universe<F>> {
    let u = enumerate_indecomposables(alg, n, &EnumConfig::default())?;
    if !u.closed {
        return Err(Error::NotClosed(n));
    }
    Ok(u)
}

fn row<F: Field>(alg: &MonomialAlgebra, u: &Universe<F>) -> Result<(WindowRow, Option<usize>)> {
    let (len, witness) = max_length(alg, u)?;
    Ok((
        WindowRow {
            n: u.window,
            classes: u.len(),
            violators: boundary_violators(u).len(),
            max_length: len,
            closed: u.closed,
        },
        witness,
    ))
}

fn cap_message(rows: &[WindowRow], max_n: usize) -> String {
    let mut s = format!(
        "no window up to {max_n} terminated; the strong global dimension is infinite or the cap is too small\n"
    );
    for r in rows {
        let _ = writeln!(s, "n = {}: {} classes, {} violators", r.n, r.classes, r.violators);
    }
    s
}

/// Loops over windows `n = 2, 3, …` until no class has both boundary cells nonzero.
pub fn compute_sgldim<F: Field>(alg: &MonomialAlgebra, max_n: usize) -> Result<SgldimReport<F>> {
    let mut rows = Vec::new();
    let mut previous: Option<Universe<F>> = None;
    for n in 2..=max_n {
        let u = closed_universe::<F>(alg, n)?;
        let (r, _) = row(alg, &u)?;
        let done = r.violators == 0;
        rows.push(r);
        if done {
            let below = match previous {
                Some(p) => p,
                None => closed_universe::<F>(alg, n - 1)?,
            };
            let (len, w) = max_length(alg, &below)?;
            let witness = below.reps[w.expect("windows hold stalks")].clone();
            return Ok(SgldimReport {
                m0: n,
                sgldim: len,
                witness,
                per_window: rows,
                terminated: true,
                cap_note: None,
            });
        }
        previous = Some(u);
    }
    Err(Error::CapExceeded(cap_message(&rows, max_n)))
}

/// Grows the window until the maximal length is equal for two consecutive windows.
pub fn sgldim_fast<F: Field>(alg: &MonomialAlgebra, max_n: usize) -> Result<SgldimReport<F>> {
    let mut rows: Vec<WindowRow> = Vec::new();
    for n in 1..=max_n {
        let u = closed_universe::<F>(alg, n)?;
        let (r, w) = row(alg, &u)?;
        let stable = rows.last().is_some_and(|p| p.max_length == r.max_length);
        let len = r.max_length;
        rows.push(r);
        if stable {
            return Ok(SgldimReport {
                m0: len + 2,
                sgldim: len,
                witness: u.reps[w.expect("windows hold stalks")].clone(),
                per_window: rows,
                terminated: true,
                cap_note: None,
            });
        }
    }
    Err(Error::CapExceeded(cap_message(&rows, max_n)))
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
    fn single_vertex() {
        let a = alg(&[1], &[], &[]);
        let r = compute_sgldim::<Q>(&a, 8).unwrap();
        assert_eq!((r.m0, r.sgldim), (2, 0));
        assert_eq!(sgldim_fast::<Q>(&a, 8).unwrap().sgldim, 0);
    }

    #[test]
    fn example_45() {
        let a = alg(&[1, 2, 3], &[("a", 1, 2), ("b", 2, 3)], &[&["a", "b"]]);
        let r = compute_sgldim::<Q>(&a, 8).unwrap();
        assert_eq!((r.m0, r.sgldim), (4, 2));
        assert_eq!(r.per_window.iter().map(|w| w.n).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(r.witness.length(&a), 2);
        assert_eq!(r.witness.describe(&a), "P3 -> P2 -> P1");
        let f = sgldim_fast::<Q>(&a, 8).unwrap();
        assert_eq!((f.m0, f.sgldim), (4, 2));
    }

    #[test]
    fn a2_and_cap() {
        let a = alg(&[1, 2], &[("a", 1, 2)], &[]);
        assert_eq!(compute_sgldim::<Q>(&a, 8).unwrap().sgldim, 1);
        assert_eq!(sgldim_fast::<Q>(&a, 8).unwrap().sgldim, 1);
        let b = alg(&[1, 2, 3], &[("a", 1, 2), ("b", 2, 3)], &[&["a", "b"]]);
        assert!(matches!(compute_sgldim::<Q>(&b, 3), Err(Error::CapExceeded(_))));
    }
}
