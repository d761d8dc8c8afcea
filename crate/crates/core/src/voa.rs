//! The vertex operator algebra `(M(1), Y, 𝟙, ω)`.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::factorial;
use crate::error::Result;
use crate::faults::Faults;
use crate::fock::{self, ratio, scalar, FockVector, Mode, Monomial, Rank, Scalar};
use crate::heisenberg::{apply_mode_monomial, normal_order_apply};

type YKey = (Monomial, i64, Monomial);

/// Rank, distinguished vectors and memo tables for `M(1)`.
pub struct VoaContext {
    rank: Rank,
    vacuum: FockVector,
    omega: FockVector,
    faults: Faults,
    y_cache: DashMap<YKey, Arc<FockVector>>,
    l_cache: DashMap<(i64, Monomial), Arc<FockVector>>,
    basis_cache: DashMap<usize, Arc<Vec<Monomial>>>,
}

impl fmt::Debug for VoaContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VoaContext")
            .field("rank", &self.rank)
            .field("faults", &self.faults)
            .finish_non_exhaustive()
    }
}

impl VoaContext {
    pub fn new(rank: Rank) -> Self {
        Self::with_faults(rank, Faults::none())
    }

    pub fn with_faults(rank: Rank, faults: Faults) -> Self {
        VoaContext {
            rank,
            vacuum: FockVector::vacuum(),
            omega: FockVector::omega(rank),
            faults,
            y_cache: DashMap::new(),
            l_cache: DashMap::new(),
            basis_cache: DashMap::new(),
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn vacuum(&self) -> &FockVector {
        &self.vacuum
    }

    pub fn omega(&self) -> &FockVector {
        &self.omega
    }

    pub fn faults(&self) -> Faults {
        self.faults
    }

    pub fn check(&self, v: &FockVector) -> Result<()> {
        self.rank.admits(v)
    }

    pub fn basis(&self, weight: usize) -> Arc<Vec<Monomial>> {
        self.basis_cache
            .entry(weight)
            .or_insert_with(|| Arc::new(fock::basis_of_weight(self.rank, weight)))
            .clone()
    }

    pub fn basis_up_to(&self, max_weight: usize) -> Vec<Monomial> {
        (0..=max_weight)
            .flat_map(|w| self.basis(w).as_ref().clone())
            .collect()
    }

    /// `v_k w`, the coefficient of `x^{-k-1}` in `Y(v, x) w`.
    pub fn y_coefficient(&self, v: &FockVector, k: i64, w: &FockVector) -> Result<FockVector> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.y(v, k, w))
    }

    /// Unchecked `v_k w`.
    pub fn y(&self, v: &FockVector, k: i64, w: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (a, ca) in v.terms() {
            for (b, cb) in w.terms() {
                out.add_scaled(&self.y_monomial(a, k, b), &(ca * cb));
            }
        }
        out
    }

    /// `v_k w` on basis monomials, memoized.
    pub fn y_monomial(&self, v: &Monomial, k: i64, w: &Monomial) -> Arc<FockVector> {
        let key = (v.clone(), k, w.clone());
        if let Some(hit) = self.y_cache.get(&key) {
            return hit.clone();
        }
        let value = Arc::new(normal_order_apply(
            v.factors(),
            -k - 1,
            &FockVector::monomial(w.clone()),
        ));
        let target = v.weight() as i64 + w.weight() as i64 - k - 1;
        assert!(
            value.keys().all(|m| m.weight() as i64 == target),
            "grading violated by ({v})_{k} {w}"
        );
        self.y_cache.insert(key, value.clone());
        value
    }

    /// `[v_{-1}𝟙, v_{-2}𝟙, …, v_{-order-1}𝟙]`, the coefficients of `x^0 … x^order` in `Y(v,x)𝟙`.
    pub fn creation_series(&self, v: &FockVector, order: usize) -> Vec<FockVector> {
        (0..=order as i64)
            .map(|m| self.y(v, -m - 1, &self.vacuum))
            .collect()
    }

    /// `[v, L(-1)v, L(-1)²v/2!, …]`, the coefficients of `e^{xL(-1)} v`.
    pub fn exp_l_minus_one(&self, v: &FockVector, order: usize) -> Vec<FockVector> {
        let mut out = Vec::with_capacity(order + 1);
        let mut power = v.clone();
        for m in 0..=order {
            let inv = Scalar::new(BigInt::one(), factorial(m as u64));
            out.push(power.scale(&inv));
            power = self.virasoro_apply(-1, &power);
        }
        out
    }

    /// `L(k) v` from the explicit normal-ordered quadratic expressions.
    pub fn virasoro_apply(&self, k: i64, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in v.terms() {
            out.add_scaled(&self.virasoro_monomial(k, m), c);
        }
        out
    }

    pub fn virasoro_monomial(&self, k: i64, m: &Monomial) -> Arc<FockVector> {
        let key = (k, m.clone());
        if let Some(hit) = self.l_cache.get(&key) {
            return hit.clone();
        }
        let value = Arc::new(self.virasoro_uncached(k, m));
        let target = m.weight() as i64 - k;
        assert!(
            value.keys().all(|r| r.weight() as i64 == target),
            "grading violated by L({k}){m}"
        );
        self.l_cache.insert(key, value.clone());
        value
    }

    fn virasoro_uncached(&self, k: i64, m: &Monomial) -> FockVector {
        if k == 0 {
            return FockVector::monomial(m.clone()).scale(&scalar(m.weight() as i64));
        }
        let weight = m.weight() as i64;
        let half = ratio(1, 2);
        let mut out = FockVector::zero();
        let quadratic_sign = if k > 0 && self.faults.flip_virasoro_sign {
            -Scalar::one()
        } else {
            Scalar::one()
        };
        for color in self.rank.colors() {
            let kk = k.abs();
            // ½ Σ_{j=1}^{|k|-1} γ(±j) γ(±(|k|-j))
            for j in 1..kk {
                let (left, right) = if k > 0 { (j, kk - j) } else { (-j, -(kk - j)) };
                if let Some((r, s)) = pair_action(color, left, right, m) {
                    out.add_term(r, s * &half * &quadratic_sign);
                }
            }
            // Σ_{j≥1} γ(-j-|k|) γ(j) for k<0, Σ_{j≥1} γ(-j) γ(k+j) for k>0; the annihilator
            // level cannot exceed the weight of `m`.
            let (creator_shift, annihilator_shift) = if k > 0 { (0, k) } else { (kk, 0) };
            for j in 1..=(weight - annihilator_shift).max(0) {
                let left = -(j + creator_shift);
                let right = j + annihilator_shift;
                if let Some((r, s)) = pair_action(color, left, right, m) {
                    out.add_term(r, s);
                }
            }
        }
        out
    }
}

/// `γ_c(left) γ_c(right) m`, with `right` acting first.
fn pair_action(color: u32, left: i64, right: i64, m: &Monomial) -> Option<(Monomial, Scalar)> {
    let first = Mode::new(color, right).ok()?;
    let second = Mode::new(color, left).ok()?;
    let (mid, s1) = apply_mode_monomial(first, m)?;
    let (out, s2) = apply_mode_monomial(second, &mid)?;
    let s = s1 * s2;
    (!s.is_zero()).then_some((out, s))
}
