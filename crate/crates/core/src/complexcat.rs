//! Complexes of projectives with a fixed window `1..=n`, chain maps between
//! them and the window functors.
//!
//! Positions are 1-based in the public API. Internally `cells[i]` holds the
//! summands at position `i + 1` and `diffs[i]` is the differential from
//! position `i + 1` to position `i + 2`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::qalgebra::{MonomialAlgebra, PathMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex<F> {
    window: usize,
    cells: Vec<Vec<usize>>,
    diffs: Vec<PathMatrix<F>>,
}

/// A family of maps `X^i -> Y^{i + degree}`. Degree 0 maps are chain maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap<F> {
    pub degree: usize,
    pub comps: Vec<PathMatrix<F>>,
}

impl<F: Field> Complex<F> {
    pub fn new(
        alg: &MonomialAlgebra,
        window: usize,
        cells: Vec<Vec<usize>>,
        diffs: Vec<PathMatrix<F>>,
    ) -> Result<Self> {
        if window == 0 || cells.len() != window || diffs.len() != window - 1 {
            return Err(Error::ShapeMismatch(format!(
                "window {window} needs {window} cells and {} differentials",
                window.saturating_sub(1)
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.cols != cells[i] || d.rows != cells[i + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "differential {} does not match its cells",
                    i + 1
                )));
            }
        }
        let x = Complex {
            window,
            cells,
            diffs,
        };
        if !x.is_complex(alg) {
            return Err(Error::ShapeMismatch("differentials do not square to zero".into()));
        }
        Ok(x)
    }

    pub(crate) fn from_parts(window: usize, cells: Vec<Vec<usize>>, diffs: Vec<PathMatrix<F>>) -> Self {
        debug_assert_eq!(cells.len(), window);
        debug_assert_eq!(diffs.len() + 1, window);
        Complex {
            window,
            cells,
            diffs,
        }
    }

    pub fn zero(window: usize) -> Self {
        Complex {
            window,
            cells: vec![Vec::new(); window],
            diffs: (1..window).map(|_| PathMatrix::zero(Vec::new(), Vec::new())).collect(),
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Summands at position `pos` (1-based).
    pub fn cell(&self, pos: usize) -> &[usize] {
        &self.cells[pos - 1]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Differential from position `pos` to `pos + 1`.
    pub fn diff(&self, pos: usize) -> &PathMatrix<F> {
        &self.diffs[pos - 1]
    }

    pub fn diffs(&self) -> &[PathMatrix<F>] {
        &self.diffs
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn summand_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_complex(&self, alg: &MonomialAlgebra) -> bool {
        self.diffs
            .windows(2)
            .all(|w| w[1].mul(alg, &w[0]).is_zero())
    }

    /// First and last nonempty positions.
    pub fn support(&self) -> Option<(usize, usize)> {
        let first = self.cells.iter().position(|c| !c.is_empty())?;
        let last = self.cells.iter().rposition(|c| !c.is_empty())?;
        Some((first + 1, last + 1))
    }

    /// Sorted multiset of summands per position, used to bucket iso classes.
    pub fn signature(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// Reorders every cell by vertex id (stable); returns the complex and the
    /// permutation of each cell (`perm[pos][new] = old`).
    pub fn canonical_with_perm(&self, alg: &MonomialAlgebra) -> (Self, Vec<Vec<usize>>) {
        let perms: Vec<Vec<usize>> = self
            .cells
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = (0..c.len()).collect();
                idx.sort_by_key(|&i| alg.quiver().vertex_id(c[i]));
                idx
            })
            .collect();
        let cells = self
            .cells
            .iter()
            .zip(&perms)
            .map(|(c, p)| p.iter().map(|&i| c[i]).collect())
            .collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| d.select(&perms[i + 1], &perms[i]))
            .collect();
        (Complex::from_parts(self.window, cells, diffs), perms)
    }

    pub fn canonical(&self, alg: &MonomialAlgebra) -> Self {
        self.canonical_with_perm(alg).0
    }

    /// Human readable form such as `P3 -> P2 -> P1`, with `0` for empty cells
    /// inside the window.
    pub fn describe(&self, alg: &MonomialAlgebra) -> String {
        self.cells
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "0".to_string()
                } else {
                    c.iter()
                        .map(|&v| format!("P{}", alg.quiver().vertex_id(v)))
                        .collect::<Vec<_>>()
                        .join("+")
                }
            })
            .collect::<Vec<_>>()
            .join(" -> ")
    }

    /// The complex on its support only, e.g. `P3 -> P2 -> P1`.
    pub fn describe_support(&self, alg: &MonomialAlgebra) -> String {
        match self.support() {
            None => "0".into(),
            Some((r, s)) => {
                let inner = Complex::from_parts(
                    s - r + 1,
                    self.cells[r - 1..s].to_vec(),
                    self.diffs[r - 1..s - 1].to_vec(),
                );
                inner.describe(alg)
            }
        }
    }

    /// Homotopy-minimal form: removes every contractible summand.
    pub fn strip_contractible(&self, alg: &MonomialAlgebra) -> Self {
        let mut x = self.clone();
        while let Some((i, r, c)) = x.find_invertible_entry(alg) {
            x = x.eliminate(alg, i, r, c);
        }
        x
    }

    fn find_invertible_entry(&self, alg: &MonomialAlgebra) -> Option<(usize, usize, usize)> {
        for (i, d) in self.diffs.iter().enumerate() {
            for r in 0..d.nrows() {
                for c in 0..d.ncols() {
                    if d.rows[r] == d.cols[c]
                        && d.entry(r, c).contains_key(&alg.trivial_path(d.rows[r]))
                    {
                        return Some((i, r, c));
                    }
                }
            }
        }
        None
    }

    /// Gaussian elimination of the invertible entry `(r, c)` of `diffs[i]`.
    fn eliminate(&self, alg: &MonomialAlgebra, i: usize, r: usize, c: usize) -> Self {
        let d = &self.diffs[i];
        let keep_rows: Vec<usize> = (0..d.nrows()).filter(|&x| x != r).collect();
        let keep_cols: Vec<usize> = (0..d.ncols()).filter(|&x| x != c).collect();
        let phi = d.select(&[r], &[c]);
        let phi_inv = phi.inverse(alg).expect("entry with unit top is invertible");
        let gamma = d.select(&keep_rows, &[c]);
        let delta = d.select(&[r], &keep_cols);
        let eps = d.select(&keep_rows, &keep_cols);
        let new_d = eps.sub(&gamma.mul(alg, &phi_inv).mul(alg, &delta));
        let mut cells = self.cells.clone();
        cells[i] = keep_cols.iter().map(|&x| self.cells[i][x]).collect();
        cells[i + 1] = keep_rows.iter().map(|&x| self.cells[i + 1][x]).collect();
        let mut diffs = self.diffs.clone();
        diffs[i] = new_d;
        if i > 0 {
            let prev = &self.diffs[i - 1];
            let all: Vec<usize> = (0..prev.ncols()).collect();
            diffs[i - 1] = prev.select(&keep_cols, &all);
        }
        if i + 1 < self.diffs.len() {
            let next = &self.diffs[i + 1];
            let all: Vec<usize> = (0..next.nrows()).collect();
            diffs[i + 1] = next.select(&all, &keep_rows);
        }
        Complex::from_parts(self.window, cells, diffs)
    }

    /// `ℓ(X) = s - r` for the minimal form supported on `[r, s]`; zero for the zero complex.
    pub fn length(&self, alg: &MonomialAlgebra) -> usize {
        self.strip_contractible(alg)
            .support()
            .map_or(0, |(r, s)| s - r)
    }

    /// Whether `d^1` fails to be a monomorphism. An empty first cell gives `false`.
    pub fn can_extend_left(&self, alg: &MonomialAlgebra) -> bool {
        if self.cells[0].is_empty() {
            return false;
        }
        if self.window == 1 {
            return true;
        }
        !alg.realize(&self.diffs[0]).is_injective()
    }

    /// Whether `Hom(coker d^{n-1}, Λ)` is nonzero.
    pub fn can_extend_right(&self, alg: &MonomialAlgebra) -> bool {
        let last = &self.cells[self.window - 1];
        if last.is_empty() {
            return false;
        }
        let d = if self.window == 1 {
            PathMatrix::zero(last.clone(), Vec::new())
        } else {
            self.diffs[self.window - 2].clone()
        };
        let coker = alg.realize(&d).cokernel();
        alg.hom_to_regular(&coker) > 0
    }

    /// `X^0 -> X^1 -> ... -> X^n` in window `n + 1`, with `d0` from `[p0]` to the first cell.
    pub fn extend_left(&self, alg: &MonomialAlgebra, p0: usize, d0: &PathMatrix<F>) -> Result<Self> {
        if d0.cols != [p0] || d0.rows != self.cells[0] {
            return Err(Error::NotAnExtension("d0 does not map P0 into the first cell".into()));
        }
        if d0.is_zero() {
            return Err(Error::NotAnExtension("d0 must be nonzero".into()));
        }
        if self.window > 1 && !self.diffs[0].mul(alg, d0).is_zero() {
            return Err(Error::NotAnExtension("d1 d0 is nonzero".into()));
        }
        let mut cells = vec![vec![p0]];
        cells.extend(self.cells.iter().cloned());
        let mut diffs = vec![d0.clone()];
        diffs.extend(self.diffs.iter().cloned());
        Ok(Complex::from_parts(self.window + 1, cells, diffs))
    }

    /// `X^1 -> ... -> X^n -> X^{n+1}` in window `n + 1`, with `dm` from the last cell to `[pm]`.
    pub fn extend_right(&self, alg: &MonomialAlgebra, pm: usize, dm: &PathMatrix<F>) -> Result<Self> {
        let last = &self.cells[self.window - 1];
        if dm.rows != [pm] || &dm.cols != last {
            return Err(Error::NotAnExtension("dm does not map the last cell into Pm".into()));
        }
        if dm.is_zero() {
            return Err(Error::NotAnExtension("dm must be nonzero".into()));
        }
        if self.window > 1 && !dm.mul(alg, &self.diffs[self.window - 2]).is_zero() {
            return Err(Error::NotAnExtension("dm d(n-1) is nonzero".into()));
        }
        let mut cells = self.cells.clone();
        cells.push(vec![pm]);
        let mut diffs = self.diffs.clone();
        diffs.push(dm.clone());
        Ok(Complex::from_parts(self.window + 1, cells, diffs))
    }

    /// Moves position `j` to `j + p` inside a window of size `new_window`.
    pub fn shift_window(&self, p: isize, new_window: usize) -> Result<Self> {
        let old = |k: usize| -> Option<usize> {
            let o = k as isize - p;
            (o >= 0 && (o as usize) < self.window).then_some(o as usize)
        };
        for (j, c) in self.cells.iter().enumerate() {
            let k = j as isize + p;
            if !c.is_empty() && (k < 0 || k as usize >= new_window) {
                return Err(Error::SupportOverflow(new_window));
            }
        }
        if new_window == 0 {
            return Err(Error::SupportOverflow(0));
        }
        let cells: Vec<Vec<usize>> = (0..new_window)
            .map(|k| old(k).map(|o| self.cells[o].clone()).unwrap_or_default())
            .collect();
        let diffs = (0..new_window - 1)
            .map(|k| match (old(k), old(k + 1)) {
                (Some(a), Some(_)) => self.diffs[a].clone(),
                _ => PathMatrix::zero(cells[k + 1].clone(), cells[k].clone()),
            })
            .collect();
        Ok(Complex::from_parts(new_window, cells, diffs))
    }

    /// The functor `i_{-1}`: prepend an empty cell.
    pub fn embed_left(&self) -> Self {
        self.shift_window(1, self.window + 1).expect("always fits")
    }

    /// The functor `i_0`: append an empty cell.
    pub fn embed_right(&self) -> Self {
        self.shift_window(0, self.window + 1).expect("always fits")
    }

    /// The functor `π_1`: forget the first cell.
    pub fn drop_first(&self) -> Self {
        assert!(self.window >= 2, "window too small to drop a cell");
        Complex::from_parts(
            self.window - 1,
            self.cells[1..].to_vec(),
            self.diffs[1..].to_vec(),
        )
    }

    /// The functor `π_0`: forget the last cell.
    pub fn drop_last(&self) -> Self {
        assert!(self.window >= 2, "window too small to drop a cell");
        Complex::from_parts(
            self.window - 1,
            self.cells[..self.window - 1].to_vec(),
            self.diffs[..self.window - 2].to_vec(),
        )
    }

    /// Cellwise concatenation with block-diagonal differentials, without reordering.
    pub fn direct_sum_raw(&self, other: &Self) -> Result<Self> {
        if self.window != other.window {
            return Err(Error::WindowMismatch(self.window, other.window));
        }
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        let diffs = self
            .diffs
            .iter()
            .zip(&other.diffs)
            .map(|(a, b)| block_diag(a, b))
            .collect();
        Ok(Complex::from_parts(self.window, cells, diffs))
    }

    pub fn direct_sum(&self, alg: &MonomialAlgebra, other: &Self) -> Result<Self> {
        Ok(self.direct_sum_raw(other)?.canonical(alg))
    }

    /// Whether the complex is `J_k(P)` for some `k` and `P`.
    pub fn is_j_type(&self) -> bool {
        match self.support() {
            Some((r, s)) => {
                s == r + 1
                    && self.cells[r - 1].len() == 1
                    && self.cells[s - 1].len() == 1
                    && self.cells[r - 1] == self.cells[s - 1]
                    && !self.diffs[r - 1].is_zero()
                    && self.summand_count() == 2
            }
            None => false,
        }
    }
}

pub(crate) fn block_diag<F: Field>(a: &PathMatrix<F>, b: &PathMatrix<F>) -> PathMatrix<F> {
    PathMatrix::blocks(
        a,
        &PathMatrix::zero(a.rows.clone(), b.cols.clone()),
        &PathMatrix::zero(b.rows.clone(), a.cols.clone()),
        b,
    )
}

/// `J_k(P)`: `P` at positions `k` and `k + 1` joined by the identity.
pub fn make_j<F: Field>(alg: &MonomialAlgebra, p: usize, k: usize, n: usize) -> Result<Complex<F>> {
    if k == 0 || k >= n {
        return Err(Error::PositionOutOfRange { pos: k, window: n });
    }
    let mut x = Complex::zero(n);
    x.cells[k - 1] = vec![p];
    x.cells[k] = vec![p];
    for i in 0..n - 1 {
        x.diffs[i] = PathMatrix::zero(x.cells[i + 1].clone(), x.cells[i].clone());
    }
    x.diffs[k - 1] = PathMatrix::identity(alg, &[p]);
    Ok(x)
}

/// The stalk complex with `P` at position `pos`.
pub fn make_stalk<F: Field>(p: usize, pos: usize, n: usize) -> Result<Complex<F>> {
    if pos == 0 || pos > n {
        return Err(Error::PositionOutOfRange { pos, window: n });
    }
    let mut x = Complex::zero(n);
    x.cells[pos - 1] = vec![p];
    for i in 0..n - 1 {
        x.diffs[i] = PathMatrix::zero(x.cells[i + 1].clone(), x.cells[i].clone());
    }
    Ok(x)
}

/// Mapping cone of a chain map `f: X -> Y` with differential `[[-d_X, 0], [f, d_Y]]`
/// on `X^{i+1} ⊕ Y^i`. The window grows by one exactly when `X^1` is nonempty.
pub fn cone<F: Field>(
    x: &Complex<F>,
    y: &Complex<F>,
    f: &ChainMap<F>,
) -> Result<Complex<F>> {
    if x.window != y.window {
        return Err(Error::WindowMismatch(x.window, y.window));
    }
    let n = x.window;
    let xc = |i: usize| -> Vec<usize> {
        if (1..=n).contains(&i) {
            x.cells[i - 1].clone()
        } else {
            Vec::new()
        }
    };
    let yc = |i: usize| -> Vec<usize> {
        if (1..=n).contains(&i) {
            y.cells[i - 1].clone()
        } else {
            Vec::new()
        }
    };
    let dx = |i: usize| -> PathMatrix<F> {
        if i >= 1 && i < n {
            x.diffs[i - 1].clone()
        } else {
            PathMatrix::zero(xc(i + 1), xc(i))
        }
    };
    let dy = |i: usize| -> PathMatrix<F> {
        if i >= 1 && i < n {
            y.diffs[i - 1].clone()
        } else {
            PathMatrix::zero(yc(i + 1), yc(i))
        }
    };
    let fi = |i: usize| -> PathMatrix<F> {
        if (1..=n).contains(&i) {
            f.comps[i - 1].clone()
        } else {
            PathMatrix::zero(yc(i), xc(i))
        }
    };
    // Cone degree i carries X^{i+1} ⊕ Y^i for i = 0..=n.
    let cell = |i: usize| -> Vec<usize> { xc(i + 1).into_iter().chain(yc(i)).collect() };
    let diff = |i: usize| -> PathMatrix<F> {
        PathMatrix::blocks(
            &dx(i + 1).neg(),
            &PathMatrix::zero(xc(i + 2), yc(i)),
            &fi(i + 1),
            &dy(i),
        )
    };
    if x.cells[0].is_empty() {
        let cells = (1..=n).map(cell).collect();
        let diffs = (1..n).map(diff).collect();
        Ok(Complex::from_parts(n, cells, diffs))
    } else {
        let cells = (0..=n).map(cell).collect();
        let diffs = (0..n).map(diff).collect();
        Ok(Complex::from_parts(n + 1, cells, diffs))
    }
}

/// A complex built from a stream of choices: `pick(m)` returns an index below `m`.
/// Cell `i` gets `sizes[i]` summands and each differential is a combination of
/// solutions of `d_i d_{i-1} = 0` with small integer coefficients.
pub fn complex_from_picks<F: Field>(
    alg: &MonomialAlgebra,
    sizes: &[usize],
    pick: &mut dyn FnMut(usize) -> usize,
) -> Complex<F> {
    let nv = alg.vertex_count();
    let cells: Vec<Vec<usize>> = sizes
        .iter()
        .map(|&s| (0..s).map(|_| pick(nv)).collect())
        .collect();
    let mut diffs: Vec<PathMatrix<F>> = Vec::new();
    for i in 0..cells.len().saturating_sub(1) {
        let (rows, cols) = (&cells[i + 1], &cells[i]);
        let slots: Vec<(usize, usize, usize)> = rows
            .iter()
            .enumerate()
            .flat_map(|(r, &rv)| {
                cols.iter()
                    .enumerate()
                    .flat_map(move |(c, &cv)| alg.paths_between(rv, cv).iter().map(move |&p| (r, c, p)))
            })
            .collect();
        let unit = |k: usize| {
            let (r, c, p) = slots[k];
            let mut m = PathMatrix::zero(rows.clone(), cols.clone());
            m.entry_mut(r, c).insert(p, F::one());
            m
        };
        let free: Vec<Vec<F>> = match diffs.last() {
            None => (0..slots.len())
                .map(|k| (0..slots.len()).map(|l| if k == l { F::one() } else { F::zero() }).collect())
                .collect(),
            Some(prev) => {
                let products: Vec<PathMatrix<F>> = (0..slots.len()).map(|k| unit(k).mul(alg, prev)).collect();
                let mut keys = std::collections::BTreeMap::new();
                for m in &products {
                    for r in 0..m.nrows() {
                        for c in 0..m.ncols() {
                            for &p in m.entry(r, c).keys() {
                                let next = keys.len();
                                keys.entry((r, c, p)).or_insert(next);
                            }
                        }
                    }
                }
                let columns: Vec<Vec<F>> = products
                    .iter()
                    .map(|m| {
                        let mut v = vec![F::zero(); keys.len()];
                        for r in 0..m.nrows() {
                            for c in 0..m.ncols() {
                                for (p, x) in m.entry(r, c) {
                                    v[keys[&(r, c, *p)]] = x.clone();
                                }
                            }
                        }
                        v
                    })
                    .collect();
                Matrix::from_columns(keys.len(), &columns).nullspace().basis
            }
        };
        let mut d = PathMatrix::zero(rows.clone(), cols.clone());
        for v in &free {
            let coef = F::from_i64(pick(5) as i64 - 2);
            if coef.is_zero() {
                continue;
            }
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (r, c, p) = slots[k];
                let e = d.entry_mut(r, c);
                let cur = e.remove(&p).unwrap_or_else(F::zero) + coef.clone() * x.clone();
                if !cur.is_zero() {
                    e.insert(p, cur);
                }
            }
        }
        diffs.push(d);
    }
    Complex::from_parts(sizes.len(), cells, diffs)
}

impl<F: Field> ChainMap<F> {
    pub fn zero(x: &Complex<F>, y: &Complex<F>, degree: usize) -> Self {
        let comps = (0..x.window.saturating_sub(degree))
            .map(|i| PathMatrix::zero(y.cells[i + degree].clone(), x.cells[i].clone()))
            .collect();
        ChainMap { degree, comps }
    }

    pub fn identity(alg: &MonomialAlgebra, x: &Complex<F>) -> Self {
        ChainMap {
            degree: 0,
            comps: x.cells.iter().map(|c| PathMatrix::identity(alg, c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(PathMatrix::is_zero)
    }

    /// `d_Y f = f d_X` for a degree 0 family.
    pub fn is_chain_map(&self, alg: &MonomialAlgebra, x: &Complex<F>, y: &Complex<F>) -> bool {
        if self.degree != 0 || x.window != y.window || self.comps.len() != x.window {
            return false;
        }
        for (i, c) in self.comps.iter().enumerate() {
            if c.cols != x.cells[i] || c.rows != y.cells[i] {
                return false;
            }
        }
        (0..x.window.saturating_sub(1)).all(|i| {
            y.diffs[i]
                .mul(alg, &self.comps[i])
                .sub(&self.comps[i + 1].mul(alg, &x.diffs[i]))
                .is_zero()
        })
    }

    /// `self ∘ other` (first `other`). Degrees add.
    pub fn compose(&self, alg: &MonomialAlgebra, other: &Self) -> Self {
        ChainMap {
            degree: self.degree + other.degree,
            comps: self
                .comps
                .iter()
                .skip(other.degree)
                .zip(&other.comps)
                .map(|(a, b)| a.mul(alg, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ChainMap {
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, s: &F) -> Self {
        ChainMap {
            degree: self.degree,
            comps: self.comps.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn embed_left(&self) -> Self {
        let first = PathMatrix::zero(Vec::new(), Vec::new());
        ChainMap {
            degree: self.degree,
            comps: std::iter::once(first).chain(self.comps.iter().cloned()).collect(),
        }
    }

    pub fn embed_right(&self) -> Self {
        let mut comps = self.comps.clone();
        comps.push(PathMatrix::zero(Vec::new(), Vec::new()));
        ChainMap {
            degree: self.degree,
            comps,
        }
    }

    pub fn drop_first(&self) -> Self {
        ChainMap {
            degree: self.degree,
            comps: self.comps[1..].to_vec(),
        }
    }

    pub fn drop_last(&self) -> Self {
        ChainMap {
            degree: self.degree,
            comps: self.comps[..self.comps.len() - 1].to_vec(),
        }
    }

    /// Re-indexes components after reordering cells (`perm[pos][new] = old`).
    pub fn permute(&self, source_perm: &[Vec<usize>], target_perm: &[Vec<usize>]) -> Self {
        ChainMap {
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .enumerate()
                .map(|(i, c)| c.select(&target_perm[i + self.degree], &source_perm[i]))
                .collect(),
        }
    }
}
