//! Heisenberg modes acting on M(1), the diagonal bilinear form, and
//! normal-ordered products of derivative fields.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::combinatorics::{binomial, binomial_i128, factorial};
use crate::fock::{Factor, FockVector, Mode, Monomial, Scalar, TensorVector};

/// An ordered product of modes; the rightmost mode acts first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModeWord(pub Vec<Mode>);

impl ModeWord {
    pub fn new(modes: Vec<Mode>) -> Self {
        ModeWord(modes)
    }

    /// The word `γ_r(n_r)···γ_1(n_1)` that annihilates `m = γ_1(-n_1)···γ_r(-n_r)` down to a
    /// multiple of the vacuum.
    pub fn annihilating(m: &Monomial) -> Self {
        ModeWord(
            m.factors()
                .iter()
                .rev()
                .map(|f| Mode::annihilation(f.color, f.n))
                .collect(),
        )
    }
}

/// Action of a single mode on a basis monomial; the result is at most one monomial.
pub fn apply_mode_monomial(mode: Mode, m: &Monomial) -> Option<(Monomial, Scalar)> {
    if mode.is_creation() {
        let f = Factor::new(mode.color(), (-mode.level()) as u32);
        return Some((m.with_factor(f), Scalar::one()));
    }
    let f = Factor::new(mode.color(), mode.level() as u32);
    let mult = m.multiplicity(f);
    if mult == 0 {
        return None;
    }
    let removed = m.without_factor(f)?;
    Some((removed, Scalar::from_integer(BigInt::from(mult) * mode.level())))
}

pub fn apply_mode(mode: Mode, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (m, c) in v.terms() {
        if let Some((r, s)) = apply_mode_monomial(mode, m) {
            out.add_term(r, s * c);
        }
    }
    out
}

pub fn apply_word(word: &ModeWord, v: &FockVector) -> FockVector {
    word.0
        .iter()
        .rev()
        .fold(v.clone(), |acc, &mode| apply_mode(mode, &acc))
}

/// `p(v) = ∏ m! · n^m` over the distinct factors `γ_c(-n)` of multiplicity `m`.
pub fn p_value(m: &Monomial) -> BigInt {
    m.grouped()
        .into_iter()
        .fold(BigInt::one(), |acc, (f, mult)| {
            acc * factorial(mult as u64) * BigInt::from(f.n).pow(mult as u32)
        })
}

/// `p(v)` obtained by applying the annihilating word to `v` and reading off the vacuum coefficient.
pub fn p_value_by_word(m: &Monomial) -> Scalar {
    let result = apply_word(&ModeWord::annihilating(m), &FockVector::monomial(m.clone()));
    debug_assert!(result.keys().all(Monomial::is_vacuum));
    result.coefficient(&Monomial::vacuum())
}

pub fn p_scalar(m: &Monomial) -> Scalar {
    Scalar::from_integer(p_value(m))
}

/// The form with `(u, v) = δ_{u,v} p(u)` on basis monomials.
pub fn bilinear_form(u: &FockVector, v: &FockVector) -> Scalar {
    let (small, large) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    small.terms().fold(Scalar::zero(), |acc, (m, c)| {
        let other = large.coefficient(m);
        if other.is_zero() {
            acc
        } else {
            acc + c * other * p_scalar(m)
        }
    })
}

/// `(u₁ ⊗ u₂, v₁ ⊗ v₂) = (u₁, v₁)(u₂, v₂)` extended bilinearly.
pub fn tensor_form(s: &TensorVector, t: &TensorVector) -> Scalar {
    let (small, large) = if s.len() <= t.len() { (s, t) } else { (t, s) };
    small.terms().fold(Scalar::zero(), |acc, (key, c)| {
        let other = large.coefficient(key);
        if other.is_zero() {
            acc
        } else {
            acc + c * other * p_scalar(&key.0) * p_scalar(&key.1)
        }
    })
}

/// Coefficient of `x^exponent` in `:∏_j (1/(n_j-1)!) (d/dx)^{n_j-1} γ_{c_j}(x):` applied to `v`.
///
/// Each factor `(c, n)` is the series `Σ_{m≠0} C(-m-1, n-1) γ_c(m) x^{-m-n}`; the
/// annihilation parts act first.
pub fn normal_order_apply(factors: &[Factor], exponent: i64, v: &FockVector) -> FockVector {
    normal_order(factors, exponent, v, Side::Direct)
}

/// The adjoint, with respect to the bilinear form, of the operator computed by
/// [`normal_order_apply`]: every mode `γ(m)` is replaced by `γ(-m)` with the same scalar
/// weights, so the flipped creation modes act first.
pub fn normal_order_adjoint_apply(
    factors: &[Factor],
    exponent: i64,
    u: &FockVector,
) -> FockVector {
    normal_order(factors, exponent, u, Side::Adjoint)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Direct,
    Adjoint,
}

impl Side {
    // Mode index attached to an annihilating action of level `a` (sign +) or a creating
    // action of level `b` (sign -), relative to the original series.
    fn sign(self) -> i64 {
        match self {
            Side::Direct => 1,
            Side::Adjoint => -1,
        }
    }
}

/// Coefficient arithmetic for the normal-ordering walk: machine integers with overflow
/// detection first, big integers as the fallback.
trait WalkCoeff: Clone + Sized {
    fn unit() -> Self;
    fn series_weight(mode_index: i64, n: u32) -> Option<Self>;
    fn from_small(k: i64) -> Self;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn add_assign(&mut self, other: &Self) -> Option<()>;
    fn is_nil(&self) -> bool;
    fn into_scalar(self) -> Scalar;
}

impl WalkCoeff for i128 {
    fn unit() -> Self {
        1
    }
    fn series_weight(mode_index: i64, n: u32) -> Option<Self> {
        binomial_i128(-mode_index - 1, (n - 1) as u64)
    }
    fn from_small(k: i64) -> Self {
        k as i128
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn add_assign(&mut self, other: &Self) -> Option<()> {
        *self = self.checked_add(*other)?;
        Some(())
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn into_scalar(self) -> Scalar {
        Scalar::from_integer(BigInt::from(self))
    }
}

impl WalkCoeff for BigInt {
    fn unit() -> Self {
        One::one()
    }
    fn series_weight(mode_index: i64, n: u32) -> Option<Self> {
        Some(binomial(-mode_index - 1, (n - 1) as u64))
    }
    fn from_small(k: i64) -> Self {
        BigInt::from(k)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn add_assign(&mut self, other: &Self) -> Option<()> {
        *self += other;
        Some(())
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn into_scalar(self) -> Scalar {
        Scalar::from_integer(self)
    }
}

fn normal_order(factors: &[Factor], exponent: i64, v: &FockVector, side: Side) -> FockVector {
    let total_n: i64 = factors.iter().map(|f| f.n as i64).sum();
    // Σ_j m_j over the original mode indices.
    let mode_sum = -exponent - total_n;
    let mut out = FockVector::zero();
    for (m, c) in v.terms() {
        let image = walk::<i128>(factors, side, mode_sum, m)
            .unwrap_or_else(|| walk::<BigInt>(factors, side, mode_sum, m).expect("exact walk"));
        out.add_scaled(&image, c);
    }
    out
}

fn walk<C: WalkCoeff>(factors: &[Factor], side: Side, mode_sum: i64, m: &Monomial) -> Option<FockVector> {
    // Identical factors are handled as one run so that each multiset of choices is visited
    // once, weighted by its number of orderings.
    let mut runs: Vec<(Factor, u32)> = Vec::new();
    for &f in factors {
        match runs.last_mut() {
            Some((g, r)) if *g == f => *r += 1,
            _ => runs.push((f, 1)),
        }
    }
    let mut walker = Walker {
        runs: &runs,
        side,
        mode_sum,
        deferred: Vec::with_capacity(runs.len()),
        out: BTreeMap::new(),
    };
    walker.annihilate(0, m.clone(), C::unit(), 0)?;
    Some(FockVector::from_terms(
        walker
            .out
            .into_iter()
            .filter(|(_, c)| !c.is_nil())
            .map(|(k, c)| (k, c.into_scalar())),
    ))
}

fn choose<C: WalkCoeff>(n: u32, k: u32) -> C {
    C::from_small(binomial_i128(n as i64, k as u64).expect("small binomial") as i64)
}

struct Walker<'a, C> {
    runs: &'a [(Factor, u32)],
    side: Side,
    mode_sum: i64,
    deferred: Vec<(Factor, u32)>,
    out: BTreeMap<Monomial, C>,
}

impl<C: WalkCoeff> Walker<'_, C> {
    fn min_creation_level(&self, f: Factor) -> i64 {
        match self.side {
            Side::Direct => f.n as i64,
            Side::Adjoint => 1,
        }
    }

    // For run `ri`, chooses how many copies are deferred to the creation phase; the rest
    // annihilate at levels present in `current`. Returns `None` on coefficient overflow.
    fn annihilate(&mut self, ri: usize, current: Monomial, coeff: C, annihilated: i64) -> Option<()> {
        if ri == self.runs.len() {
            // Σ creation levels = Σ annihilation levels − sign · Σ m.
            let total = annihilated - self.side.sign() * self.mode_sum;
            let deferred = std::mem::take(&mut self.deferred);
            let done = self.create(&deferred, 0, current, coeff, total);
            self.deferred = deferred;
            return done;
        }
        let (f, count) = self.runs[ri];
        for d in 0..=count {
            if d > 0 {
                self.deferred.push((f, d));
            }
            let c = coeff.mul(&choose(count, d))?;
            let done = self.annihilate_levels(ri, count - d, 0, current.clone(), c, annihilated);
            if d > 0 {
                self.deferred.pop();
            }
            done?;
        }
        Some(())
    }

    // Distributes `left` annihilating copies of run `ri` over levels above `floor`.
    fn annihilate_levels(
        &mut self,
        ri: usize,
        left: u32,
        floor: u32,
        current: Monomial,
        coeff: C,
        annihilated: i64,
    ) -> Option<()> {
        if left == 0 {
            return self.annihilate(ri + 1, current, coeff, annihilated);
        }
        let f = self.runs[ri].0;
        let mut levels: Vec<u32> = current
            .factors()
            .iter()
            .filter(|g| g.color == f.color && g.n > floor)
            .map(|g| g.n)
            .collect();
        levels.dedup();
        for a in levels {
            let weight = C::series_weight(self.side.sign() * a as i64, f.n)?;
            if weight.is_nil() {
                continue;
            }
            let g = Factor::new(f.color, a);
            let mut next = current.clone();
            let mut c = coeff.clone();
            for k in 1..=left {
                let mult = next.multiplicity(g) as i64;
                if mult == 0 {
                    break;
                }
                next = next.without_factor(g).expect("level present");
                c = c.mul(&weight)?.mul(&C::from_small(mult * a as i64))?;
                let with_count = c.mul(&choose(left, k))?;
                self.annihilate_levels(
                    ri,
                    left - k,
                    a,
                    next.clone(),
                    with_count,
                    annihilated + (k * a) as i64,
                )?;
            }
        }
        Some(())
    }

    // Assigns creation levels to the deferred runs, non-decreasing within a run.
    fn create(
        &mut self,
        deferred: &[(Factor, u32)],
        di: usize,
        current: Monomial,
        coeff: C,
        remaining: i64,
    ) -> Option<()> {
        if di == deferred.len() {
            if remaining == 0 {
                match self.out.entry(current) {
                    Entry::Vacant(e) => {
                        e.insert(coeff);
                    }
                    Entry::Occupied(mut e) => e.get_mut().add_assign(&coeff)?,
                }
            }
            return Some(());
        }
        let (f, count) = deferred[di];
        self.create_levels(deferred, di, count, self.min_creation_level(f), current, coeff, remaining)
    }

    #[allow(clippy::too_many_arguments)]
    fn create_levels(
        &mut self,
        deferred: &[(Factor, u32)],
        di: usize,
        left: u32,
        lo: i64,
        current: Monomial,
        coeff: C,
        remaining: i64,
    ) -> Option<()> {
        if left == 0 {
            return self.create(deferred, di + 1, current, coeff, remaining);
        }
        let f = deferred[di].0;
        let later: i64 = deferred[di + 1..]
            .iter()
            .map(|&(g, r)| r as i64 * self.min_creation_level(g))
            .sum();
        let left = left as i64;
        // The smallest remaining choice (all `left` copies at level `b`) must fit.
        let mut b = lo;
        while left * b + later <= remaining {
            let weight = C::series_weight(-self.side.sign() * b, f.n)?;
            if !weight.is_nil() {
                let mut next = current.clone();
                let mut c = coeff.clone();
                for k in 1..=left {
                    let after = remaining - k * b;
                    next = next.with_factor(Factor::new(f.color, b as u32));
                    c = c.mul(&weight)?;
                    if after < (left - k) * (b + 1) + later {
                        continue;
                    }
                    let with_count = c.mul(&choose(left as u32, k as u32))?;
                    self.create_levels(
                        deferred,
                        di,
                        (left - k) as u32,
                        b + 1,
                        next.clone(),
                        with_count,
                        after,
                    )?;
                }
            }
            b += 1;
        }
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{basis_up_to, scalar, Rank};

    fn mono(pairs: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    fn vec_of(pairs: &[(u32, u32)]) -> FockVector {
        FockVector::monomial(mono(pairs))
    }

    #[test]
    fn mode_examples() {
        let one = FockVector::vacuum();
        assert_eq!(
            apply_mode(Mode::annihilation(1, 1), &vec_of(&[(1, 1)])),
            one
        );
        assert!(apply_mode(Mode::annihilation(1, 1), &vec_of(&[(2, 1)])).is_zero());
        assert_eq!(apply_mode(Mode::creation(1, 2), &one), vec_of(&[(1, 2)]));
        assert_eq!(
            apply_mode(Mode::annihilation(1, 2), &vec_of(&[(1, 2), (1, 2)])),
            vec_of(&[(1, 2)]).scale(&scalar(4))
        );
    }

    #[test]
    fn word_examples() {
        let one = FockVector::vacuum();
        let w = ModeWord::new(vec![Mode::annihilation(1, 1), Mode::creation(1, 1)]);
        assert_eq!(apply_word(&w, &one), one);
        assert_eq!(apply_word(&ModeWord::default(), &vec_of(&[(1, 3)])), vec_of(&[(1, 3)]));
        let w = ModeWord::new(vec![Mode::creation(1, 1), Mode::annihilation(1, 1)]);
        assert!(apply_word(&w, &one).is_zero());
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_value(&Monomial::vacuum()), BigInt::one());
        for n in 1..6 {
            assert_eq!(p_value(&mono(&[(1, n)])), BigInt::from(n));
            assert_eq!(p_value_by_word(&mono(&[(1, n)])), scalar(n as i64));
        }
        assert_eq!(p_value(&mono(&[(1, 1), (1, 1)])), BigInt::from(2));
        assert_eq!(p_value_by_word(&mono(&[(1, 1), (1, 1)])), scalar(2));
    }

    #[test]
    fn p_closed_form_matches_word() {
        for d in 1..=2 {
            for m in basis_up_to(Rank::new(d).unwrap(), 7) {
                assert_eq!(p_scalar(&m), p_value_by_word(&m), "{m}");
            }
        }
    }

    #[test]
    fn form_examples() {
        let one = FockVector::vacuum();
        assert_eq!(bilinear_form(&one, &one), scalar(1));
        assert_eq!(bilinear_form(&vec_of(&[(1, 1)]), &vec_of(&[(1, 2)])), scalar(0));
        let sq = vec_of(&[(1, 1), (1, 1)]);
        assert_eq!(bilinear_form(&sq, &sq), scalar(2));
    }

    #[test]
    fn normal_order_examples() {
        let one = FockVector::vacuum();
        let v = vec_of(&[(1, 4)]);
        assert_eq!(normal_order_apply(&[], 0, &v), v);
        assert!(normal_order_apply(&[], 2, &v).is_zero());
        assert!(normal_order_apply(&[Factor::new(1, 1)], -1, &one).is_zero());
        assert_eq!(normal_order_apply(&[Factor::new(1, 1)], 0, &one), vec_of(&[(1, 1)]));
    }

    #[test]
    fn derivative_field_on_vacuum_creates_its_state() {
        // x^0 coefficient of (1/(n-1)!) (d/dx)^{n-1} γ(x) on the vacuum is γ(-n).
        for n in 1..6 {
            let got = normal_order_apply(&[Factor::new(1, n)], 0, &FockVector::vacuum());
            assert_eq!(got, vec_of(&[(1, n)]));
        }
    }

    #[test]
    fn adjoint_really_is_adjoint() {
        let rank = Rank::new(2).unwrap();
        let basis = basis_up_to(rank, 4);
        let fields: [&[Factor]; 3] = [
            &[Factor::new(1, 1)],
            &[Factor::new(1, 2), Factor::new(2, 1)],
            &[Factor::new(1, 1), Factor::new(1, 1)],
        ];
        for factors in fields {
            for e in -6..=4 {
                for a in &basis {
                    let av = FockVector::monomial(a.clone());
                    let direct = normal_order_apply(factors, e, &av);
                    for b in &basis {
                        let bv = FockVector::monomial(b.clone());
                        let adj = normal_order_adjoint_apply(factors, e, &bv);
                        assert_eq!(bilinear_form(&direct, &bv), bilinear_form(&av, &adj));
                    }
                }
            }
        }
    }
}
