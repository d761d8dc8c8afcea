//! The vertex operator coalgebra `(M(1), Ŷ, c, ρ)` adjoint to `(M(1), Y, 𝟙, ω)` under the
//! diagonal bilinear form.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::faults::Faults;
use crate::fock::{FockVector, Monomial, Rank, Scalar, TensorVector};
use crate::heisenberg::{bilinear_form, normal_order_adjoint_apply, p_scalar};
use crate::voa::VoaContext;

/// Conversions between formal-variable exponents and operator indices.
///
/// `Ŷ(x)u = Σ Δ_k(u) x^{-k-1}` and `(ρ ⊗ Id)Ŷ(x) = Σ L(j) x^{j-2}`.
pub mod index {
    /// Index `k` of `Δ_k` carried by `x^exponent` in `Ŷ(x)`.
    pub fn coproduct_index(exponent: i64) -> i64 {
        -exponent - 1
    }

    /// Exponent of `x` multiplying `Δ_k`.
    pub fn coproduct_exponent(k: i64) -> i64 {
        -k - 1
    }

    /// Exponent of `x` multiplying `L(j)` in `(ρ ⊗ Id)Ŷ(x)`.
    pub fn co_virasoro_exponent(j: i64) -> i64 {
        j - 2
    }

    /// The `Δ` index whose `ρ`-contraction is `L(j)`.
    pub fn coproduct_index_for_virasoro(j: i64) -> i64 {
        coproduct_index(co_virasoro_exponent(j))
    }
}

type AdjKey = (Monomial, i64, Monomial);

pub struct VocContext {
    voa: VoaContext,
    adj_cache: DashMap<AdjKey, Arc<FockVector>>,
    coproduct_cache: DashMap<(Monomial, i64), Arc<TensorVector>>,
}

impl fmt::Debug for VocContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VocContext")
            .field("voa", &self.voa)
            .finish_non_exhaustive()
    }
}

impl VocContext {
    pub fn new(rank: Rank) -> Self {
        Self::from_voa(VoaContext::new(rank))
    }

    pub fn with_faults(rank: Rank, faults: Faults) -> Self {
        Self::from_voa(VoaContext::with_faults(rank, faults))
    }

    pub fn from_voa(voa: VoaContext) -> Self {
        VocContext {
            voa,
            adj_cache: DashMap::new(),
            coproduct_cache: DashMap::new(),
        }
    }

    pub fn voa(&self) -> &VoaContext {
        &self.voa
    }

    pub fn rank(&self) -> Rank {
        self.voa.rank()
    }

    /// `(v_k)^† u` for basis monomials: the operator adjoint to `w ↦ v_k w`.
    pub fn adjoint_monomial(&self, v: &Monomial, k: i64, u: &Monomial) -> Arc<FockVector> {
        let key = (v.clone(), k, u.clone());
        if let Some(hit) = self.adj_cache.get(&key) {
            return hit.clone();
        }
        let value = Arc::new(normal_order_adjoint_apply(
            v.factors(),
            index::coproduct_exponent(k),
            &FockVector::monomial(u.clone()),
        ));
        self.adj_cache.insert(key, value.clone());
        value
    }

    fn normalization(&self, v: &Monomial) -> Scalar {
        if self.voa.faults().drop_p_normalization {
            Scalar::one()
        } else {
            p_scalar(v).recip()
        }
    }

    /// `Δ_k(u) = Σ_v (1/p(v)) v ⊗ (v_k)^† u`, summed over the finitely many basis `v` allowed
    /// by grading.
    pub fn coproduct_coefficient(&self, u: &FockVector, k: i64) -> Result<TensorVector> {
        self.voa.check(u)?;
        Ok(self.coproduct(u, k))
    }

    pub fn coproduct(&self, u: &FockVector, k: i64) -> TensorVector {
        let mut out = TensorVector::zero();
        for (m, c) in u.terms() {
            out.add_scaled(&self.coproduct_monomial(m, k), c);
        }
        out
    }

    pub fn coproduct_monomial(&self, u: &Monomial, k: i64) -> Arc<TensorVector> {
        let key = (u.clone(), k);
        if let Some(hit) = self.coproduct_cache.get(&key) {
            return hit.clone();
        }
        let mut out = TensorVector::zero();
        // Left slot weight ranges over 0..=wt(u) + k + 1.
        let top = u.weight() as i64 + k + 1;
        for s in 0..=top.max(-1) {
            for v in self.voa.basis(s as usize).iter() {
                let right = self.adjoint_monomial(v, k, u);
                if right.is_zero() {
                    continue;
                }
                let norm = self.normalization(v);
                for (w, cw) in right.terms() {
                    out.add_term((v.clone(), w.clone()), cw * &norm);
                }
            }
        }
        let target = u.weight() as i64 + k + 1;
        assert!(
            out.keys().all(|(l, r)| (l.weight() + r.weight()) as i64 == target),
            "grading violated by Delta_{k}({u})"
        );
        let value = Arc::new(out);
        self.coproduct_cache.insert(key, value.clone());
        value
    }

    /// Coefficient vector of `left ⊗ ·` in `Δ_k(u)`.
    pub fn coproduct_left_slice(&self, u: &FockVector, k: i64, left: &Monomial) -> FockVector {
        let norm = self.normalization(left);
        let mut out = FockVector::zero();
        for (m, c) in u.terms() {
            out.add_scaled(&self.adjoint_monomial(left, k, m), &(c * &norm));
        }
        out
    }

    /// Coefficient vector of `· ⊗ right` in `Δ_k(u)`.
    pub fn coproduct_right_slice(&self, u: &FockVector, k: i64, right: &Monomial) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in u.terms() {
            // Grading fixes the left weight at wt(u) + k + 1 - wt(right).
            let s = m.weight() as i64 + k + 1 - right.weight() as i64;
            if s < 0 {
                continue;
            }
            for v in self.voa.basis(s as usize).iter() {
                let coeff = self.adjoint_monomial(v, k, m).coefficient(right);
                if coeff.is_zero() {
                    continue;
                }
                out.add_term(v.clone(), coeff * c * self.normalization(v));
            }
        }
        out
    }

    /// `(Δ_k(u), v ⊗ w)` computed from the `v`-slice.
    pub fn coproduct_pair(&self, u: &FockVector, k: i64, v: &Monomial, w: &Monomial) -> Scalar {
        let slice = self.coproduct_left_slice(u, k, v);
        let c = slice.coefficient(w);
        if c.is_zero() {
            return c;
        }
        c * p_scalar(v) * p_scalar(w)
    }

    /// `c(u) = (u, 𝟙)`.
    pub fn covacuum(&self, u: &FockVector) -> Scalar {
        bilinear_form(u, self.voa.vacuum())
    }

    /// `ρ(u) = (u, ω)`.
    pub fn co_virasoro(&self, u: &FockVector) -> Scalar {
        bilinear_form(u, self.voa.omega())
    }

    /// `L(j)u` read off from `(ρ ⊗ Id) Ŷ(x) u` at `x^{j-2}`.
    pub fn co_virasoro_mode(&self, j: i64, u: &FockVector) -> FockVector {
        let k = index::coproduct_index_for_virasoro(j);
        // ρ is supported on the summands of ω, so only those left slices contribute.
        let mut out = FockVector::zero();
        for (left, _) in self.voa.omega().terms() {
            let weight = self.co_virasoro(&FockVector::monomial(left.clone()));
            out.add_scaled(&self.coproduct_left_slice(u, k, left), &weight);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ratio, scalar, tensor};

    fn ctx(d: u32) -> VocContext {
        VocContext::new(Rank::new(d).unwrap())
    }

    fn mono(pairs: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    fn v(pairs: &[(u32, u32)]) -> FockVector {
        FockVector::monomial(mono(pairs))
    }

    #[test]
    fn index_bookkeeping() {
        assert_eq!(index::coproduct_index(index::coproduct_exponent(7)), 7);
        assert_eq!(index::coproduct_index_for_virasoro(0), 1);
        assert_eq!(index::coproduct_index_for_virasoro(-2), 3);
    }

    #[test]
    fn vacuum_left_term_only_at_minus_one() {
        let c = ctx(1);
        let u = v(&[(1, 2), (1, 1)]);
        for k in -5..5 {
            let slice = c.coproduct(&u, k).left_slice(&Monomial::vacuum());
            if k == -1 {
                assert_eq!(slice, u);
            } else {
                assert!(slice.is_zero(), "k={k}");
            }
        }
    }

    #[test]
    fn delta_one_of_vacuum() {
        let c = ctx(1);
        let g = mono(&[(1, 1)]);
        let d1 = c.coproduct(c.voa().vacuum(), 1);
        assert_eq!(d1.coefficient(&(g.clone(), g.clone())), scalar(1));
        let probe = tensor(&FockVector::monomial(g.clone()), &FockVector::monomial(g));
        assert_eq!(crate::heisenberg::tensor_form(&d1, &probe), scalar(1));
    }

    #[test]
    fn vanishes_below_truncation() {
        let c = ctx(2);
        for m in c.voa().basis_up_to(3) {
            let u = FockVector::monomial(m.clone());
            let bound = -(m.weight() as i64) - 1;
            for k in bound - 4..bound {
                assert!(c.coproduct(&u, k).is_zero());
            }
        }
    }

    #[test]
    fn slices_match_full_coproduct() {
        let c = ctx(2);
        let basis = c.voa().basis_up_to(2);
        for m in &basis {
            let u = FockVector::monomial(m.clone());
            for k in -3..3 {
                let full = c.coproduct(&u, k);
                for b in &basis {
                    assert_eq!(full.left_slice(b), c.coproduct_left_slice(&u, k, b));
                    let by_right = FockVector::from_terms(
                        full.terms()
                            .filter(|((_, r), _)| r == b)
                            .map(|((l, _), s)| (l.clone(), s.clone())),
                    );
                    assert_eq!(by_right, c.coproduct_right_slice(&u, k, b));
                }
            }
        }
    }

    #[test]
    fn covacuum_examples() {
        let c = ctx(1);
        assert_eq!(c.covacuum(c.voa().vacuum()), scalar(1));
        assert_eq!(c.covacuum(&v(&[(1, 1)])), scalar(0));
        let mixed = &FockVector::vacuum().scale(&scalar(3)) + &v(&[(1, 2)]).scale(&scalar(5));
        assert_eq!(c.covacuum(&mixed), scalar(3));
    }

    #[test]
    fn co_virasoro_examples() {
        let c = ctx(2);
        assert_eq!(c.co_virasoro(&v(&[(1, 1), (1, 1)])), scalar(1));
        assert_eq!(c.co_virasoro(&v(&[(1, 2)])), scalar(0));
        assert_eq!(c.co_virasoro(c.voa().omega()), scalar(1));
        let c1 = ctx(1);
        assert_eq!(c1.co_virasoro(c1.voa().omega()), ratio(1, 2));
    }

    #[test]
    fn co_virasoro_mode_examples() {
        let c = ctx(1);
        let u = v(&[(1, 2), (1, 1)]);
        assert_eq!(c.co_virasoro_mode(0, &u), u.scale(&scalar(3)));
        assert_eq!(c.co_virasoro_mode(-2, c.voa().vacuum()), *c.voa().omega());
        assert!(c.co_virasoro_mode(1, &v(&[(1, 1)])).is_zero());
    }

    #[test]
    fn co_virasoro_mode_matches_full_contraction() {
        let c = ctx(2);
        for m in c.voa().basis_up_to(3) {
            let u = FockVector::monomial(m);
            for j in -3..=3 {
                let k = index::coproduct_index_for_virasoro(j);
                let full = c.coproduct(&u, k).contract_left(|l| {
                    c.co_virasoro(&FockVector::monomial(l.clone()))
                });
                assert_eq!(full, c.co_virasoro_mode(j, &u));
            }
        }
    }
}
