//! Formal Laurent series in up to four commuting variables, stored on a finite exponent
//! window, together with δ-function and binomial expansions.
//!
//! Every stored coefficient is exact. A window only selects which coefficients are kept; the
//! per-variable `exhaustive` flags record whether the window is known to contain every
//! nonzero coefficient in that variable.

mod jacobi;

pub use jacobi::{
    component_sides, jacobi_sides_voa, jacobi_sides_voc, ComponentSides,
    JacobiOperands, JacobiSides, JacobiWeights, VoaOperands, VocOperands, DEFAULT_BOX_LIMIT,
};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::fock::{FockVector, Scalar, TensorVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    X0,
    X1,
    X2,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::X0, Var::X1, Var::X2];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::X0 => 1,
            Var::X1 => 2,
            Var::X2 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::X0 => "x0",
            Var::X1 => "x1",
            Var::X2 => "x2",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponents indexed by [`Var::index`]; variables outside a window carry exponent 0.
pub type Exponents = [i64; 4];

pub fn exponents(pairs: &[(Var, i64)]) -> Exponents {
    let mut e = [0; 4];
    for &(v, x) in pairs {
        e[v.index()] = x;
    }
    e
}

/// Inclusive per-variable exponent bounds.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExponentWindow {
    bounds: [Option<(i64, i64)>; 4],
}

impl ExponentWindow {
    pub fn new(bounds: &[(Var, i64, i64)]) -> Result<Self> {
        let mut out = ExponentWindow::default();
        for &(var, lo, hi) in bounds {
            if lo > hi {
                return Err(Error::DegenerateWindow {
                    var: var.name(),
                    lo,
                    hi,
                });
            }
            out.bounds[var.index()] = Some((lo, hi));
        }
        Ok(out)
    }

    /// The same `[lo, hi]` range for each listed variable.
    pub fn cube(vars: &[Var], lo: i64, hi: i64) -> Result<Self> {
        let bounds: Vec<_> = vars.iter().map(|&v| (v, lo, hi)).collect();
        Self::new(&bounds)
    }

    pub fn bounds(&self, var: Var) -> Option<(i64, i64)> {
        self.bounds[var.index()]
    }

    pub fn require(&self, var: Var) -> Result<(i64, i64)> {
        self.bounds(var).ok_or(Error::MissingVariable(var.name()))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        Var::ALL.into_iter().filter(|v| self.bounds[v.index()].is_some())
    }

    pub fn contains(&self, e: &Exponents) -> bool {
        self.bounds.iter().zip(e).all(|(b, &x)| match b {
            Some((lo, hi)) => *lo <= x && x <= *hi,
            None => x == 0,
        })
    }

    /// True when every cell of `self` lies in `other`.
    pub fn is_within(&self, other: &ExponentWindow) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .all(|(a, b)| match (a, b) {
                (None, None) => true,
                (None, Some((lo, hi))) => *lo <= 0 && 0 <= *hi,
                (Some(_), None) => false,
                (Some((alo, ahi)), Some((blo, bhi))) => blo <= alo && ahi <= bhi,
            })
    }

    pub fn cells(&self) -> u64 {
        self.bounds
            .iter()
            .flatten()
            .map(|(lo, hi)| (hi - lo + 1) as u64)
            .product()
    }

    /// Cells in lexicographic order of `(x, x0, x1, x2)`.
    pub fn iter(&self) -> impl Iterator<Item = Exponents> + '_ {
        let ranges: Vec<(i64, i64)> = self
            .bounds
            .iter()
            .map(|b| b.unwrap_or((0, 0)))
            .collect();
        let mut current: Option<Exponents> = Some([ranges[0].0, ranges[1].0, ranges[2].0, ranges[3].0]);
        std::iter::from_fn(move || {
            let out = current?;
            let mut next = out;
            let mut i = 4;
            loop {
                if i == 0 {
                    current = None;
                    break;
                }
                i -= 1;
                if next[i] < ranges[i].1 {
                    next[i] += 1;
                    current = Some(next);
                    break;
                }
                next[i] = ranges[i].0;
            }
            Some(out)
        })
    }
}

impl fmt::Display for ExponentWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars()
            .map(|v| {
                let (lo, hi) = self.bounds(v).unwrap();
                format!("{v}:[{lo},{hi}]")
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Payloads that a windowed series may carry.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `self += factor * other`.
    fn add_scaled(&mut self, other: &Self, factor: &Scalar);
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, factor: &Scalar) {
        *self += other * factor;
    }
}

impl Coefficient for FockVector {
    fn zero() -> Self {
        FockVector::zero()
    }
    fn is_zero(&self) -> bool {
        FockVector::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, factor: &Scalar) {
        FockVector::add_scaled(self, other, factor)
    }
}

impl Coefficient for TensorVector {
    fn zero() -> Self {
        TensorVector::zero()
    }
    fn is_zero(&self) -> bool {
        TensorVector::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, factor: &Scalar) {
        TensorVector::add_scaled(self, other, factor)
    }
}

/// A Laurent expression known exactly on `window`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedSeries<T> {
    window: ExponentWindow,
    coefficients: BTreeMap<Exponents, T>,
    exhaustive: [bool; 4],
}

impl<T: Coefficient> WindowedSeries<T> {
    pub fn new(window: ExponentWindow) -> Self {
        WindowedSeries {
            window,
            coefficients: BTreeMap::new(),
            exhaustive: [false; 4],
        }
    }

    /// Evaluates `f` on every cell of `window` accepted by `keep`.
    pub fn from_fn<K, F>(window: ExponentWindow, mut keep: K, mut f: F) -> Self
    where
        K: FnMut(&Exponents) -> bool,
        F: FnMut(&Exponents) -> T,
    {
        let mut out = Self::new(window);
        let cells: Vec<Exponents> = out.window.iter().filter(|e| keep(e)).collect();
        for e in cells {
            let value = f(&e);
            if !value.is_zero() {
                out.coefficients.insert(e, value);
            }
        }
        out
    }

    pub fn window(&self) -> &ExponentWindow {
        &self.window
    }

    pub fn is_exhaustive(&self, var: Var) -> bool {
        self.exhaustive[var.index()]
    }

    pub fn set_exhaustive(&mut self, var: Var, value: bool) {
        self.exhaustive[var.index()] = value;
    }

    /// Adds `value` at `e`; cells outside the window are dropped.
    pub fn accumulate(&mut self, e: Exponents, value: &T, factor: &Scalar) {
        if !self.window.contains(&e) || value.is_zero() || Zero::is_zero(factor) {
            return;
        }
        let slot = self.coefficients.entry(e).or_insert_with(T::zero);
        slot.add_scaled(value, factor);
        if slot.is_zero() {
            self.coefficients.remove(&e);
        }
    }

    /// The coefficient at `e`, or `None` when `e` lies outside the window.
    pub fn coefficient(&self, e: &Exponents) -> Option<T> {
        if !self.window.contains(e) {
            return None;
        }
        Some(self.coefficients.get(e).cloned().unwrap_or_else(T::zero))
    }

    /// Nonzero coefficients in window order.
    pub fn iter(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.coefficients.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        let mut out = Self::new(self.window.clone());
        out.exhaustive = self.exhaustive;
        for (e, v) in &self.coefficients {
            out.accumulate(*e, v, factor);
        }
        out
    }

    /// `self - other` on a shared window.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.window, other.window, "window mismatch");
        let mut out = self.clone();
        for (e, v) in &other.coefficients {
            out.accumulate(*e, v, &-Scalar::one());
        }
        for i in 0..4 {
            out.exhaustive[i] = self.exhaustive[i] && other.exhaustive[i];
        }
        out
    }

    /// Restriction to a sub-window.
    pub fn restrict(&self, window: &ExponentWindow) -> Self {
        assert!(window.is_within(&self.window), "restriction must shrink the window");
        let mut out = Self::new(window.clone());
        for (e, v) in &self.coefficients {
            if window.contains(e) {
                out.coefficients.insert(*e, v.clone());
            }
        }
        out
    }

    pub fn map<U: Coefficient, F: FnMut(&T) -> U>(&self, mut f: F) -> WindowedSeries<U> {
        let mut out = WindowedSeries::new(self.window.clone());
        out.exhaustive = self.exhaustive;
        for (e, v) in &self.coefficients {
            let u = f(v);
            if !u.is_zero() {
                out.coefficients.insert(*e, u);
            }
        }
        out
    }

    /// First cell of the shared window where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<Exponents> {
        assert_eq!(self.window, other.window, "window mismatch");
        self.coefficients
            .keys()
            .chain(other.coefficients.keys())
            .filter(|e| self.coefficients.get(*e) != other.coefficients.get(*e))
            .min()
            .copied()
    }
}

/// The product of a scalar series and a payload series, kept on `target`.
///
/// The result is exact on `target` provided the two factor windows contain every pair of
/// nonzero coefficients whose exponents add up to a target cell.
pub fn multiply_into<T: Coefficient>(
    scalars: &WindowedSeries<Scalar>,
    payload: &WindowedSeries<T>,
    target: ExponentWindow,
) -> WindowedSeries<T> {
    let mut out = WindowedSeries::new(target);
    for (es, s) in scalars.iter() {
        for (ep, p) in payload.iter() {
            let e = [es[0] + ep[0], es[1] + ep[1], es[2] + ep[2], es[3] + ep[3]];
            out.accumulate(e, p, s);
        }
    }
    out
}

/// Sign inside a binomial `(a ± b)^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn scalar(self) -> Scalar {
        match self {
            Sign::Plus => Scalar::one(),
            Sign::Minus => -Scalar::one(),
        }
    }
}

/// `(a ± b)^n` expanded in nonnegative powers of `b`, kept on `window`.
pub fn binomial_expand(
    a: Var,
    b: Var,
    sign: Sign,
    n: i64,
    window: &ExponentWindow,
) -> Result<WindowedSeries<Scalar>> {
    if a == b {
        return Err(Error::Config(format!(
            "binomial expansion needs two distinct variables, got {a} twice"
        )));
    }
    let (alo, ahi) = window.require(a)?;
    let (blo, bhi) = window.require(b)?;
    let mut out = WindowedSeries::new(window.clone());
    add_binomial_terms(&mut out, a, b, sign, n, &[], &Scalar::one());
    // With n ≥ 0 the expansion has exponents 0..=n in each variable.
    if n >= 0 {
        out.set_exhaustive(a, alo <= 0 && n <= ahi);
        out.set_exhaustive(b, blo <= 0 && n <= bhi);
    }
    Ok(out)
}

// Adds `factor · Σ_j C(n,j) (±1)^j a^{n-j} b^j` at offset `fixed`, restricted to the
// series window.
fn add_binomial_terms(
    out: &mut WindowedSeries<Scalar>,
    a: Var,
    b: Var,
    sign: Sign,
    n: i64,
    fixed: &[(Var, i64)],
    factor: &Scalar,
) {
    let Some((alo, ahi)) = out.window().bounds(a) else {
        return;
    };
    let Some((blo, bhi)) = out.window().bounds(b) else {
        return;
    };
    // b exponent j ≥ 0, a exponent n - j.
    let jlo = blo.max(0).max(n - ahi);
    let jhi = bhi.min(n - alo);
    let mut jhi = jhi;
    if n >= 0 {
        jhi = jhi.min(n);
    }
    let s = sign.scalar();
    for j in jlo..=jhi {
        let c = Scalar::from_integer(binomial(n, j as u64));
        if Zero::is_zero(&c) {
            continue;
        }
        let sj = if j % 2 == 0 { Scalar::one() } else { s.clone() };
        let mut e = exponents(fixed);
        e[a.index()] = n - j;
        e[b.index()] = j;
        out.accumulate(e, &(c * sj), factor);
    }
}

/// The δ-function expansions used by the Jacobi identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaPattern {
    /// `δ(x) = Σ_n x^n` in a single variable.
    Plain(Var),
    /// `x0^{-1} δ((x1 - x2)/x0)`.
    X1MinusX2OverX0,
    /// `x0^{-1} δ((x2 - x1)/(-x0))`.
    X2MinusX1OverNegX0,
    /// `x2^{-1} δ((x1 - x0)/x2)`.
    X1MinusX0OverX2,
}

/// Expands `pattern` on `window`: `Σ_n (numerator)^n (denominator)^{-n}` with the numerator
/// binomially expanded in nonnegative powers of its second variable.
pub fn delta_series(pattern: DeltaPattern, window: &ExponentWindow) -> Result<WindowedSeries<Scalar>> {
    let mut out = WindowedSeries::new(window.clone());
    let (prefactor, a, b, alternating) = match pattern {
        DeltaPattern::Plain(var) => {
            let (lo, hi) = window.require(var)?;
            for n in lo..=hi {
                out.accumulate(exponents(&[(var, n)]), &Scalar::one(), &Scalar::one());
            }
            return Ok(out);
        }
        DeltaPattern::X1MinusX2OverX0 => (Var::X0, Var::X1, Var::X2, false),
        DeltaPattern::X2MinusX1OverNegX0 => (Var::X0, Var::X2, Var::X1, true),
        DeltaPattern::X1MinusX0OverX2 => (Var::X2, Var::X1, Var::X0, false),
    };
    let (plo, phi) = window.require(prefactor)?;
    window.require(a)?;
    window.require(b)?;
    for p in plo..=phi {
        // prefactor^{-1} · prefactor^{-n} = prefactor^p  ⇒  n = -p - 1
        let n = -p - 1;
        let factor = if alternating && n % 2 != 0 {
            -Scalar::one()
        } else {
            Scalar::one()
        };
        add_binomial_terms(&mut out, a, b, Sign::Minus, n, &[(prefactor, p)], &factor);
    }
    Ok(out)
}
