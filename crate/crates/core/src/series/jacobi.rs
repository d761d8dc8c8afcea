//! Assembly of both sides of the Jacobi identity as three-variable windowed series.
//!
//! Each side is a δ-function series times an operator product. The operator products are
//! evaluated on finite boxes whose extent follows from the truncation bound
//! `a_k b = 0` for `k > wt a + wt b - 1`, so every retained coefficient is an exact finite sum.

use num_traits::{One, Zero};

use super::{
    delta_series, multiply_into, DeltaPattern, ExponentWindow, Exponents, Var,
    WindowedSeries,
};
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::fock::{tensor, FockVector, Scalar};
use crate::heisenberg::p_scalar;
use crate::voa::VoaContext;
use crate::voc::VocContext;

/// Upper bound on the number of operator-product cells evaluated per term.
pub const DEFAULT_BOX_LIMIT: u64 = 250_000;

/// Weight bounds of the three arguments `(u, v, w)` of `Y(u,x1)Y(v,x2)w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JacobiWeights {
    pub u: usize,
    pub v: usize,
    pub w: usize,
}

impl JacobiWeights {
    pub fn total(&self) -> i64 {
        (self.u + self.v + self.w) as i64
    }
}

/// The three operator products entering the Jacobi identity.
pub trait JacobiOperands {
    type Value: super::Coefficient;

    /// Upper bounds on the argument weights, used for truncation.
    fn weights(&self) -> JacobiWeights;
    /// `u_p v_q w`.
    fn first(&self, p: i64, q: i64) -> Self::Value;
    /// `v_q u_p w`.
    fn second(&self, q: i64, p: i64) -> Self::Value;
    /// `(u_r v)_q w`.
    fn third(&self, r: i64, q: i64) -> Self::Value;
    /// Whether an operator-product coefficient whose two exponents sum to `degree` can be
    /// nonzero.
    fn admissible_degree(&self, _degree: i64) -> bool {
        true
    }
}

/// Both sides of the identity plus the three separately δ-multiplied terms.
#[derive(Clone, Debug)]
pub struct JacobiSides<T> {
    /// `x0^{-1}δ((x1-x2)/x0) Y(u,x1)Y(v,x2)w - x0^{-1}δ((x2-x1)/(-x0)) Y(v,x2)Y(u,x1)w`.
    pub lhs: WindowedSeries<T>,
    /// `x2^{-1}δ((x1-x0)/x2) Y(Y(u,x0)v,x2)w`.
    pub rhs: WindowedSeries<T>,
    /// The three terms, the second one without its minus sign.
    pub terms: [WindowedSeries<T>; 3],
}

impl<T: super::Coefficient> JacobiSides<T> {
    pub fn first_mismatch(&self) -> Option<Exponents> {
        self.lhs.first_mismatch(&self.rhs)
    }
}

fn window_or_empty(bounds: &[(Var, i64, i64)]) -> Option<ExponentWindow> {
    if bounds.iter().any(|(_, lo, hi)| lo > hi) {
        return None;
    }
    ExponentWindow::new(bounds).ok()
}

fn check_box(window: &ExponentWindow, limit: u64) -> Result<()> {
    let cells = window.cells();
    if cells > limit {
        return Err(Error::WindowTooLarge { cells, limit });
    }
    Ok(())
}

/// Assembles both sides of the Jacobi identity on the `(x0, x1, x2)` part of `window`.
pub fn assemble<O: JacobiOperands>(
    ops: &O,
    window: &ExponentWindow,
    box_limit: u64,
) -> Result<JacobiSides<O::Value>> {
    let (alo, ahi) = window.require(Var::X0)?;
    let (blo, bhi) = window.require(Var::X1)?;
    let (clo, chi) = window.require(Var::X2)?;
    let target = ExponentWindow::new(&[
        (Var::X0, alo, ahi),
        (Var::X1, blo, bhi),
        (Var::X2, clo, chi),
    ])?;
    let weights = ops.weights();
    let pmax = (weights.u + weights.w) as i64 - 1;
    let qmax = (weights.v + weights.w) as i64 - 1;
    let rmax = (weights.u + weights.v) as i64 - 1;
    // Every δ term has total degree -1, so only operator cells of degree in this range
    // reach the target.
    let degree_lo = alo + blo + clo + 1;
    let degree_hi = ahi + bhi + chi + 1;
    let keep = |e: &Exponents| {
        let d: i64 = e.iter().sum();
        d >= degree_lo && d <= degree_hi && ops.admissible_degree(d)
    };
    let x0 = Var::X0.index();
    let x1 = Var::X1.index();
    let x2 = Var::X2.index();

    // Term 1: x0^{-1}δ((x1-x2)/x0) · Σ u_p v_q w x1^{-p-1} x2^{-q-1}.
    let mut first = WindowedSeries::new(target.clone());
    if let Some(boxed) = window_or_empty(&[
        (Var::X1, blo + alo + 1, bhi + ahi + chi + qmax + 3),
        (Var::X2, -qmax - 1, chi),
    ]) {
        check_box(&boxed, box_limit)?;
        let (e1lo, e1hi) = boxed.bounds(Var::X1).unwrap();
        let (e2lo, e2hi) = boxed.bounds(Var::X2).unwrap();
        let product = WindowedSeries::from_fn(boxed, keep, |e| ops.first(-e[x1] - 1, -e[x2] - 1));
        if let Some(dwin) = window_or_empty(&[
            (Var::X0, alo, ahi),
            (Var::X1, blo - e1hi, bhi - e1lo),
            (Var::X2, (clo - e2hi).max(0), chi - e2lo),
        ]) {
            let delta = delta_series(DeltaPattern::X1MinusX2OverX0, &dwin)?;
            first = multiply_into(&delta, &product, target.clone());
        }
    }

    // Term 2: x0^{-1}δ((x2-x1)/(-x0)) · Σ v_q u_p w x1^{-p-1} x2^{-q-1}.
    let mut second = WindowedSeries::new(target.clone());
    if let Some(boxed) = window_or_empty(&[
        (Var::X1, -pmax - 1, bhi),
        (Var::X2, clo + alo + 1, chi + ahi + bhi + pmax + 3),
    ]) {
        check_box(&boxed, box_limit)?;
        let (e1lo, e1hi) = boxed.bounds(Var::X1).unwrap();
        let (e2lo, e2hi) = boxed.bounds(Var::X2).unwrap();
        let product =
            WindowedSeries::from_fn(boxed, keep, |e| ops.second(-e[x2] - 1, -e[x1] - 1));
        if let Some(dwin) = window_or_empty(&[
            (Var::X0, alo, ahi),
            (Var::X1, (blo - e1hi).max(0), bhi - e1lo),
            (Var::X2, clo - e2hi, chi - e2lo),
        ]) {
            let delta = delta_series(DeltaPattern::X2MinusX1OverNegX0, &dwin)?;
            second = multiply_into(&delta, &product, target.clone());
        }
    }

    // Term 3: x2^{-1}δ((x1-x0)/x2) · Σ (u_r v)_q w x0^{-r-1} x2^{-q-1}.
    let mut third = WindowedSeries::new(target.clone());
    if let Some(boxed) = window_or_empty(&[
        (Var::X0, -rmax - 1, ahi),
        (Var::X2, clo + blo + 1, chi + bhi + ahi + rmax + 3),
    ]) {
        check_box(&boxed, box_limit)?;
        let (e0lo, e0hi) = boxed.bounds(Var::X0).unwrap();
        let (e2lo, e2hi) = boxed.bounds(Var::X2).unwrap();
        let product = WindowedSeries::from_fn(boxed, keep, |e| ops.third(-e[x0] - 1, -e[x2] - 1));
        if let Some(dwin) = window_or_empty(&[
            (Var::X0, (alo - e0hi).max(0), ahi - e0lo),
            (Var::X1, blo, bhi),
            (Var::X2, clo - e2hi, chi - e2lo),
        ]) {
            let delta = delta_series(DeltaPattern::X1MinusX0OverX2, &dwin)?;
            third = multiply_into(&delta, &product, target.clone());
        }
    }

    let lhs = first.sub(&second);
    Ok(JacobiSides {
        lhs,
        rhs: third.clone(),
        terms: [first, second, third],
    })
}

/// The three Jacobi terms at one coefficient, computed from the residue-extracted component
/// formulas instead of δ-series products.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSides<T> {
    pub first: T,
    pub second: T,
    pub third: T,
}

impl<T: super::Coefficient> ComponentSides<T> {
    pub fn lhs(&self) -> T {
        let mut out = self.first.clone();
        out.add_scaled(&self.second, &-Scalar::one());
        out
    }
}

/// Coefficient of `x0^a x1^b x2^c` of each Jacobi term, with `l = -a-1`, `m = -b-1`, `n = -c-1`:
///
/// * `Σ_i (-1)^i C(l,i) u_{m+l-i} v_{n+i} w`
/// * `Σ_i (-1)^{l+i} C(l,i) v_{n+l-i} u_{m+i} w`
/// * `Σ_i C(m,i) (u_{l+i} v)_{m+n-i} w`
pub fn component_sides<O: JacobiOperands>(ops: &O, cell: &Exponents) -> ComponentSides<O::Value> {
    let l = -cell[Var::X0.index()] - 1;
    let m = -cell[Var::X1.index()] - 1;
    let n = -cell[Var::X2.index()] - 1;
    let weights = ops.weights();
    let pmax = (weights.u + weights.w) as i64 - 1;
    let qmax = (weights.v + weights.w) as i64 - 1;
    let rmax = (weights.u + weights.v) as i64 - 1;
    let sign = |i: i64| {
        if i.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    };
    let choose = |top: i64, i: i64| Scalar::from_integer(binomial(top, i as u64));

    let mut first = <O::Value as super::Coefficient>::zero();
    for i in 0..=(qmax - n) {
        let c = choose(l, i) * sign(i);
        if !c.is_zero() {
            super::Coefficient::add_scaled(&mut first, &ops.first(m + l - i, n + i), &c);
        }
    }
    let mut second = <O::Value as super::Coefficient>::zero();
    for i in 0..=(pmax - m) {
        let c = choose(l, i) * sign(l + i);
        if !c.is_zero() {
            super::Coefficient::add_scaled(&mut second, &ops.second(n + l - i, m + i), &c);
        }
    }
    let mut third = <O::Value as super::Coefficient>::zero();
    for i in 0..=(rmax - l) {
        let c = choose(m, i);
        if !c.is_zero() {
            super::Coefficient::add_scaled(&mut third, &ops.third(l + i, m + n - i), &c);
        }
    }
    ComponentSides {
        first,
        second,
        third,
    }
}

fn max_weight(v: &FockVector) -> usize {
    v.keys().map(|m| m.weight()).max().unwrap_or(0)
}

fn min_weight(v: &FockVector) -> usize {
    v.keys().map(|m| m.weight()).min().unwrap_or(0)
}

/// Vertex-operator products `Y(u,x1)Y(v,x2)w` and friends.
pub struct VoaOperands<'a> {
    pub ctx: &'a VoaContext,
    pub u: &'a FockVector,
    pub v: &'a FockVector,
    pub w: &'a FockVector,
}

impl JacobiOperands for VoaOperands<'_> {
    type Value = FockVector;

    fn weights(&self) -> JacobiWeights {
        JacobiWeights {
            u: max_weight(self.u),
            v: max_weight(self.v),
            w: max_weight(self.w),
        }
    }

    fn first(&self, p: i64, q: i64) -> FockVector {
        self.ctx.y(self.u, p, &self.ctx.y(self.v, q, self.w))
    }

    fn second(&self, q: i64, p: i64) -> FockVector {
        self.ctx.y(self.v, q, &self.ctx.y(self.u, p, self.w))
    }

    fn third(&self, r: i64, q: i64) -> FockVector {
        self.ctx.y(&self.ctx.y(self.u, r, self.v), q, self.w)
    }

    fn admissible_degree(&self, degree: i64) -> bool {
        // Output weight is wt u + wt v + wt w + degree.
        self.weights().total() + degree >= 0
    }
}

/// Coproduct iterates of `u` paired against probe vectors `v1 ⊗ v2 ⊗ v3`.
pub struct VocOperands<'a> {
    pub ctx: &'a VocContext,
    pub u: &'a FockVector,
    pub probes: [&'a FockVector; 3],
}

impl JacobiOperands for VocOperands<'_> {
    type Value = Scalar;

    fn weights(&self) -> JacobiWeights {
        JacobiWeights {
            u: max_weight(self.probes[0]),
            v: max_weight(self.probes[1]),
            w: max_weight(self.probes[2]),
        }
    }

    /// `((Id ⊗ Ŷ(x2)) Ŷ(x1) u, v1 ⊗ v2 ⊗ v3)` at `Δ_q` inside `Δ_p`.
    fn first(&self, p: i64, q: i64) -> Scalar {
        let [v1, v2, v3] = self.probes;
        let mut total = Scalar::zero();
        for (a, ca) in v1.terms() {
            let slice = self.ctx.coproduct_left_slice(self.u, p, a);
            if slice.is_zero() {
                continue;
            }
            for (b, cb) in v2.terms() {
                for (c, cc) in v3.terms() {
                    let pair = self.ctx.coproduct_pair(&slice, q, b, c);
                    total += pair * p_scalar(a) * ca * cb * cc;
                }
            }
        }
        total
    }

    /// `((T ⊗ Id)(Id ⊗ Ŷ(x1)) Ŷ(x2) u, v1 ⊗ v2 ⊗ v3)`; `T` is moved onto the probe.
    fn second(&self, q: i64, p: i64) -> Scalar {
        let [v1, v2, v3] = self.probes;
        let swapped = tensor(v1, v2).transpose_left();
        let mut total = Scalar::zero();
        for ((a, b), cab) in swapped.terms() {
            let slice = self.ctx.coproduct_left_slice(self.u, q, a);
            if slice.is_zero() {
                continue;
            }
            for (c, cc) in v3.terms() {
                let pair = self.ctx.coproduct_pair(&slice, p, b, c);
                total += pair * p_scalar(a) * cab * cc;
            }
        }
        total
    }

    /// `((Ŷ(x0) ⊗ Id) Ŷ(x2) u, v1 ⊗ v2 ⊗ v3)`.
    fn third(&self, r: i64, q: i64) -> Scalar {
        let [v1, v2, v3] = self.probes;
        let mut total = Scalar::zero();
        for (c, cc) in v3.terms() {
            let slice = self.ctx.coproduct_right_slice(self.u, q, c);
            if slice.is_zero() {
                continue;
            }
            for (a, ca) in v1.terms() {
                for (b, cb) in v2.terms() {
                    let pair = self.ctx.coproduct_pair(&slice, r, a, b);
                    total += pair * p_scalar(c) * ca * cb * cc;
                }
            }
        }
        total
    }

    fn admissible_degree(&self, degree: i64) -> bool {
        // The pairing with u vanishes unless wt u = wt v1 + wt v2 + wt v3 + degree.
        let lo = min_weight(self.probes[0]) + min_weight(self.probes[1]) + min_weight(self.probes[2]);
        let hi = self.weights().total();
        self.u.keys().any(|m| {
            let shift = m.weight() as i64 - degree;
            shift >= lo as i64 && shift <= hi
        })
    }
}

/// Both sides of the vertex-algebra Jacobi identity applied to `w`.
pub fn jacobi_sides_voa(
    ctx: &VoaContext,
    u: &FockVector,
    v: &FockVector,
    w: &FockVector,
    window: &ExponentWindow,
) -> Result<JacobiSides<FockVector>> {
    assemble(&VoaOperands { ctx, u, v, w }, window, DEFAULT_BOX_LIMIT)
}

/// Both sides of the coalgebra Jacobi identity for `u`, paired against `v1 ⊗ v2 ⊗ v3`.
pub fn jacobi_sides_voc(
    ctx: &VocContext,
    u: &FockVector,
    probes: [&FockVector; 3],
    window: &ExponentWindow,
) -> Result<JacobiSides<Scalar>> {
    assemble(&VocOperands { ctx, u, probes }, window, DEFAULT_BOX_LIMIT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{Monomial, Rank};
    use crate::heisenberg::bilinear_form;
    use crate::series::exponents;

    fn cube(lo: i64, hi: i64) -> ExponentWindow {
        ExponentWindow::cube(&[Var::X0, Var::X1, Var::X2], lo, hi).unwrap()
    }

    fn v(pairs: &[(u32, u32)]) -> FockVector {
        FockVector::monomial(Monomial::from_pairs(pairs))
    }

    #[test]
    fn vacuum_first_argument() {
        let ctx = VoaContext::new(Rank::new(1).unwrap());
        let one = FockVector::vacuum();
        let g = v(&[(1, 1)]);
        let sides = jacobi_sides_voa(&ctx, &one, &g, &g, &cube(-3, 3)).unwrap();
        assert_eq!(sides.first_mismatch(), None);
        assert!(sides.lhs.nonzero_count() > 0);
    }

    #[test]
    fn gamma_gamma_vacuum() {
        let ctx = VoaContext::new(Rank::new(1).unwrap());
        let g = v(&[(1, 1)]);
        let sides = jacobi_sides_voa(&ctx, &g, &g, &FockVector::vacuum(), &cube(-4, 4)).unwrap();
        assert_eq!(sides.first_mismatch(), None);
    }

    #[test]
    fn gamma_cubed() {
        let ctx = VoaContext::new(Rank::new(1).unwrap());
        let g = v(&[(1, 1)]);
        let sides = jacobi_sides_voa(&ctx, &g, &g, &g, &cube(-3, 3)).unwrap();
        assert_eq!(sides.first_mismatch(), None);
        // x0^{-2} x1^{-1} x2^0 carries (γ(1)γ(-1)𝟙)_{-1} γ(-1) = γ(-1).
        let cell = exponents(&[(Var::X0, -2), (Var::X1, -1), (Var::X2, 0)]);
        assert_eq!(sides.rhs.coefficient(&cell), Some(g.clone()));
    }

    #[test]
    fn windowed_matches_components() {
        let ctx = VoaContext::new(Rank::new(1).unwrap());
        let g = v(&[(1, 1)]);
        let h = v(&[(1, 2)]);
        let ops = VoaOperands { ctx: &ctx, u: &g, v: &h, w: &g };
        let win = cube(-3, 3);
        let sides = assemble(&ops, &win, DEFAULT_BOX_LIMIT).unwrap();
        for cell in win.iter() {
            let comp = component_sides(&ops, &cell);
            assert_eq!(sides.terms[0].coefficient(&cell), Some(comp.first.clone()));
            assert_eq!(sides.terms[1].coefficient(&cell), Some(comp.second.clone()));
            assert_eq!(sides.terms[2].coefficient(&cell), Some(comp.third.clone()));
        }
    }

    #[test]
    fn voc_pairings_equal_voa_pairings() {
        let voc = VocContext::new(Rank::new(1).unwrap());
        let g = v(&[(1, 1)]);
        let h = v(&[(1, 2)]);
        let one = FockVector::vacuum();
        let win = cube(-3, 3);
        let voa_sides = jacobi_sides_voa(voc.voa(), &g, &one, &g, &win).unwrap();
        for u in [&h, &g, &v(&[(1, 1), (1, 1)])] {
            let voc_sides = jacobi_sides_voc(&voc, u, [&g, &one, &g], &win).unwrap();
            for i in 0..3 {
                let paired = voa_sides.terms[i].map(|x| bilinear_form(u, x));
                assert_eq!(paired.first_mismatch(&voc_sides.terms[i]), None, "term {i}");
            }
            assert_eq!(voc_sides.first_mismatch(), None);
        }
    }

    #[test]
    fn oversized_box_is_reported() {
        let ctx = VoaContext::new(Rank::new(1).unwrap());
        let g = v(&[(1, 1)]);
        let ops = VoaOperands { ctx: &ctx, u: &g, v: &g, w: &g };
        let err = assemble(&ops, &cube(-3, 3), 10).unwrap_err();
        assert!(matches!(err, Error::WindowTooLarge { .. }));
    }
}
