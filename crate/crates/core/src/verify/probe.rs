//! Single checks: each probe names one identity instance and evaluates both of its sides.
//!
//! Probes are what report witnesses carry, so every failure can be replayed by feeding the
//! probe back through [`evaluate`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::factorial;
use crate::error::Result;
use crate::faults::Faults;
use crate::fock::{ratio, scalar, FockVector, Monomial, Rank, Scalar, TensorVector};
use crate::heisenberg::bilinear_form;
use crate::series::{exponents, jacobi_sides_voa, jacobi_sides_voc, ExponentWindow, Var};
use crate::voa::VoaContext;
use crate::voc::VocContext;

mod mono_text {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::expr::parse_monomial;
    use crate::fock::Monomial;

    pub fn serialize<S: Serializer>(m: &Monomial, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(m)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Monomial, D::Error> {
        let text = String::deserialize(d)?;
        parse_monomial(&text).map_err(D::Error::custom)
    }
}

/// Which side of the invariance formula carries the operator `e^{xL(1)}(-x^{-2})^{L(0)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvarianceVariant {
    /// `(Y(u,x)v, w) = (u, Y(e^{xL(1)}(-x^{-2})^{L(0)} v, x^{-1}) w)` as printed.
    Literal,
    /// `(Y(u,x)v, w) = (v, Y(e^{xL(1)}(-x^{-2})^{L(0)} u, x^{-1}) w)`.
    Standard,
}

/// One instance of one identity. Monomials serialize in the vector grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Probe {
    /// `𝟙_k w` against `δ_{k,-1} w`.
    Unit {
        k: i64,
        #[serde(with = "mono_text")]
        w: Monomial,
    },
    /// `v_{-m-1}𝟙` against `L(-1)^m v / m!`.
    Creation {
        #[serde(with = "mono_text")]
        v: Monomial,
        m: u32,
    },
    /// `v_k 𝟙` against 0 for `k ≥ 0`.
    CreationRegular {
        #[serde(with = "mono_text")]
        v: Monomial,
        k: i64,
    },
    /// `v_k w` against 0 above the truncation bound.
    Truncation {
        #[serde(with = "mono_text")]
        v: Monomial,
        k: i64,
        #[serde(with = "mono_text")]
        w: Monomial,
    },
    /// Components of `v_k w` outside weight `wt v + wt w - k - 1`, against 0.
    YGrading {
        #[serde(with = "mono_text")]
        v: Monomial,
        k: i64,
        #[serde(with = "mono_text")]
        w: Monomial,
    },
    /// `L(0)v` against `wt(v) v`.
    WeightOperator {
        #[serde(with = "mono_text")]
        v: Monomial,
    },
    /// `(L(-1)v)_k w` against `-k v_{k-1} w`.
    Derivative {
        #[serde(with = "mono_text")]
        v: Monomial,
        k: i64,
        #[serde(with = "mono_text")]
        w: Monomial,
    },
    /// One coefficient of both sides of the vertex-algebra Jacobi identity.
    VoaJacobi {
        #[serde(with = "mono_text")]
        u: Monomial,
        #[serde(with = "mono_text")]
        v: Monomial,
        #[serde(with = "mono_text")]
        w: Monomial,
        cell: [i64; 3],
        window: [i64; 2],
    },
    /// `[L(j),L(k)]v` against `(j-k)L(j+k)v + (j³-j)/12 δ_{j,-k} d v`, using the explicit
    /// `L` or, when `coalgebra` is set, the modes read off the coproduct.
    Bracket {
        j: i64,
        k: i64,
        #[serde(with = "mono_text")]
        v: Monomial,
        coalgebra: bool,
    },
    /// Explicit `L(k)v` against `ω_{k+1} v`.
    OmegaModes {
        k: i64,
        #[serde(with = "mono_text")]
        v: Monomial,
    },
    /// `(ρ ⊗ Id)` coefficient at `x^{j-2}` against the explicit `L(j)u`.
    CoVirasoro {
        j: i64,
        #[serde(with = "mono_text")]
        u: Monomial,
    },
    /// `(c ⊗ Id)Δ_k(u)` against `δ_{k,-1} u`.
    Counit {
        #[serde(with = "mono_text")]
        u: Monomial,
        k: i64,
    },
    /// `(Id ⊗ c)Δ_{-m-1}(u)` against `L(1)^m u / m!`.
    Cocreation {
        #[serde(with = "mono_text")]
        u: Monomial,
        m: u32,
    },
    /// `((Id ⊗ c)Δ_{-m-1}(u), v)` against `(u, L(-1)^m v) / m!`.
    CocreationPaired {
        #[serde(with = "mono_text")]
        u: Monomial,
        m: u32,
        #[serde(with = "mono_text")]
        v: Monomial,
    },
    /// `(Id ⊗ c)Δ_k(u)` against 0 for `k ≥ 0`.
    CocreationRegular {
        #[serde(with = "mono_text")]
        u: Monomial,
        k: i64,
    },
    /// `Δ_k(u)` against 0 below the truncation bound.
    CoTruncation {
        #[serde(with = "mono_text")]
        u: Monomial,
        k: i64,
    },
    /// Terms of `Δ_k(u)` whose slot weights do not add up to `wt u + k + 1`, against 0.
    CoGrading {
        #[serde(with = "mono_text")]
        u: Monomial,
        k: i64,
    },
    /// `(L(1) ⊗ Id)Δ_k(u)` against `-k Δ_{k-1}(u)`.
    CoDerivative {
        #[serde(with = "mono_text")]
        u: Monomial,
        k: i64,
    },
    /// One coefficient of both sides of the coalgebra Jacobi identity paired with `v1⊗v2⊗v3`.
    VocJacobi {
        #[serde(with = "mono_text")]
        u: Monomial,
        #[serde(with = "mono_text")]
        v1: Monomial,
        #[serde(with = "mono_text")]
        v2: Monomial,
        #[serde(with = "mono_text")]
        v3: Monomial,
        cell: [i64; 3],
        window: [i64; 2],
    },
    /// `(Δ_k(u), v ⊗ w)` against `(u, v_k w)`.
    Adjunction {
        #[serde(with = "mono_text")]
        u: Monomial,
        k: i64,
        #[serde(with = "mono_text")]
        v: Monomial,
        #[serde(with = "mono_text")]
        w: Monomial,
    },
    /// `(L(k)u, v)` against `(u, L(-k)v)`.
    Preserving {
        k: i64,
        #[serde(with = "mono_text")]
        u: Monomial,
        #[serde(with = "mono_text")]
        v: Monomial,
    },
    /// `(u, v)` against 0 for monomials of different weight.
    Graded {
        #[serde(with = "mono_text")]
        u: Monomial,
        #[serde(with = "mono_text")]
        v: Monomial,
    },
    /// Coefficient of `x^exponent` on both sides of the invariance formula.
    Invariance {
        variant: InvarianceVariant,
        #[serde(with = "mono_text")]
        u: Monomial,
        #[serde(with = "mono_text")]
        v: Monomial,
        #[serde(with = "mono_text")]
        w: Monomial,
        exponent: i64,
    },
}

/// A computed side of a check.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Vector(FockVector),
    Tensor(TensorVector),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Vector(v) => write!(f, "{v}"),
            Value::Tensor(t) => {
                if t.is_zero() {
                    return write!(f, "0");
                }
                for (i, ((l, r), c)) in t.terms().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*({l} ⊗ {r})")?;
                }
                Ok(())
            }
        }
    }
}

/// Shared contexts for one rank and fault setting.
#[derive(Debug)]
pub struct Engine {
    voc: VocContext,
}

impl Engine {
    pub fn new(rank: Rank, faults: Faults) -> Self {
        Engine {
            voc: VocContext::with_faults(rank, faults),
        }
    }

    pub fn voa(&self) -> &VoaContext {
        self.voc.voa()
    }

    pub fn voc(&self) -> &VocContext {
        &self.voc
    }

    pub fn rank(&self) -> Rank {
        self.voc.rank()
    }
}

fn vec_of(m: &Monomial) -> FockVector {
    FockVector::monomial(m.clone())
}

fn inverse_factorial(m: u32) -> Scalar {
    Scalar::new(BigInt::one(), factorial(m as u64))
}

/// `L(j)^m v`.
pub(crate) fn virasoro_power(voa: &VoaContext, j: i64, m: u32, v: &FockVector) -> FockVector {
    (0..m).fold(v.clone(), |acc, _| voa.virasoro_apply(j, &acc))
}

fn cube(window: [i64; 2]) -> Result<ExponentWindow> {
    ExponentWindow::cube(&[Var::X0, Var::X1, Var::X2], window[0], window[1])
}

fn cell_exponents(cell: [i64; 3]) -> crate::series::Exponents {
    exponents(&[(Var::X0, cell[0]), (Var::X1, cell[1]), (Var::X2, cell[2])])
}

/// `(c ⊗ Id)` of a tensor.
fn counit_contract(t: &TensorVector) -> FockVector {
    t.contract_left(|l| if l.is_vacuum() { Scalar::one() } else { Scalar::zero() })
}

/// `(Id ⊗ c)` of a tensor.
fn cocreation_contract(t: &TensorVector) -> FockVector {
    t.contract_right(|r| if r.is_vacuum() { Scalar::one() } else { Scalar::zero() })
}

/// The part of `v` outside weight `weight` (or all of `v` when `weight` is negative).
fn off_weight(v: &FockVector, weight: i64) -> FockVector {
    FockVector::from_terms(
        v.terms()
            .filter(|(m, _)| m.weight() as i64 != weight)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

fn bracket_sides<F>(op: F, d: u32, j: i64, k: i64, v: &FockVector) -> (FockVector, FockVector)
where
    F: Fn(i64, &FockVector) -> FockVector,
{
    let lhs = &op(j, &op(k, v)) - &op(k, &op(j, v));
    let mut rhs = op(j + k, v).scale(&scalar(j - k));
    if j == -k {
        let central = ratio(j * j * j - j, 12) * scalar(d as i64);
        rhs.add_scaled(v, &central);
    }
    (lhs, rhs)
}

fn invariance_rhs(
    voa: &VoaContext,
    operator_arg: &Monomial,
    paired: &Monomial,
    w: &Monomial,
    exponent: i64,
) -> Scalar {
    // Y(e^{xL(1)}(-x^{-2})^{L(0)} a, x^{-1}) = Σ_i Σ_m (-1)^{wt a}/i! (L(1)^i a)_m x^{i - 2 wt a + m + 1}.
    let wt = operator_arg.weight() as i64;
    let sign = if wt % 2 == 0 { Scalar::one() } else { -Scalar::one() };
    let mut total = Scalar::zero();
    let mut power = vec_of(operator_arg);
    for i in 0..=wt {
        if power.is_zero() {
            break;
        }
        let m = exponent - i + 2 * wt - 1;
        let coefficient = &sign * inverse_factorial(i as u32);
        let image = voa.y(&power, m, &vec_of(w));
        total += bilinear_form(&vec_of(paired), &image) * coefficient;
        power = voa.virasoro_apply(1, &power);
    }
    total
}

/// Evaluates both sides of `probe`.
pub fn evaluate(engine: &Engine, probe: &Probe) -> Result<(Value, Value)> {
    let voa = engine.voa();
    let voc = engine.voc();
    let d = engine.rank().get();
    let pair = |l: FockVector, r: FockVector| Ok((Value::Vector(l), Value::Vector(r)));
    let scalars = |l: Scalar, r: Scalar| Ok((Value::Scalar(l), Value::Scalar(r)));
    let tensors = |l: TensorVector, r: TensorVector| Ok((Value::Tensor(l), Value::Tensor(r)));
    match probe {
        Probe::Unit { k, w } => {
            let w = vec_of(w);
            let expected = if *k == -1 { w.clone() } else { FockVector::zero() };
            pair(voa.y(voa.vacuum(), *k, &w), expected)
        }
        Probe::Creation { v, m } => {
            let v = vec_of(v);
            let lhs = voa.y(&v, -(*m as i64) - 1, voa.vacuum());
            let rhs = virasoro_power(voa, -1, *m, &v).scale(&inverse_factorial(*m));
            pair(lhs, rhs)
        }
        Probe::CreationRegular { v, k } => pair(voa.y(&vec_of(v), *k, voa.vacuum()), FockVector::zero()),
        Probe::Truncation { v, k, w } => pair(voa.y(&vec_of(v), *k, &vec_of(w)), FockVector::zero()),
        Probe::YGrading { v, k, w } => {
            let image = voa.y(&vec_of(v), *k, &vec_of(w));
            let expected = v.weight() as i64 + w.weight() as i64 - k - 1;
            pair(off_weight(&image, expected), FockVector::zero())
        }
        Probe::WeightOperator { v } => {
            let v = vec_of(v);
            let wt = v.homogeneous_weight().unwrap_or(0) as i64;
            pair(voa.virasoro_apply(0, &v), v.scale(&scalar(wt)))
        }
        Probe::Derivative { v, k, w } => {
            let w = vec_of(w);
            let v = vec_of(v);
            let lhs = voa.y(&voa.virasoro_apply(-1, &v), *k, &w);
            let rhs = voa.y(&v, k - 1, &w).scale(&scalar(-k));
            pair(lhs, rhs)
        }
        Probe::VoaJacobi { u, v, w, cell, window } => {
            let sides = jacobi_sides_voa(voa, &vec_of(u), &vec_of(v), &vec_of(w), &cube(*window)?)?;
            let e = cell_exponents(*cell);
            pair(
                sides.lhs.coefficient(&e).unwrap_or_default(),
                sides.rhs.coefficient(&e).unwrap_or_default(),
            )
        }
        Probe::Bracket { j, k, v, coalgebra } => {
            let v = vec_of(v);
            let (lhs, rhs) = if *coalgebra {
                bracket_sides(|i, x| voc.co_virasoro_mode(i, x), d, *j, *k, &v)
            } else {
                bracket_sides(|i, x| voa.virasoro_apply(i, x), d, *j, *k, &v)
            };
            pair(lhs, rhs)
        }
        Probe::OmegaModes { k, v } => {
            let v = vec_of(v);
            pair(voa.virasoro_apply(*k, &v), voa.y(voa.omega(), k + 1, &v))
        }
        Probe::CoVirasoro { j, u } => {
            let u = vec_of(u);
            pair(voc.co_virasoro_mode(*j, &u), voa.virasoro_apply(*j, &u))
        }
        Probe::Counit { u, k } => {
            let u = vec_of(u);
            let expected = if *k == -1 { u.clone() } else { FockVector::zero() };
            pair(counit_contract(&voc.coproduct(&u, *k)), expected)
        }
        Probe::Cocreation { u, m } => {
            let u = vec_of(u);
            let lhs = cocreation_contract(&voc.coproduct(&u, -(*m as i64) - 1));
            let rhs = virasoro_power(voa, 1, *m, &u).scale(&inverse_factorial(*m));
            pair(lhs, rhs)
        }
        Probe::CocreationPaired { u, m, v } => {
            let uu = vec_of(u);
            let vv = vec_of(v);
            let lhs = bilinear_form(&cocreation_contract(&voc.coproduct(&uu, -(*m as i64) - 1)), &vv);
            let rhs = bilinear_form(&uu, &virasoro_power(voa, -1, *m, &vv)) * inverse_factorial(*m);
            scalars(lhs, rhs)
        }
        Probe::CocreationRegular { u, k } => {
            pair(cocreation_contract(&voc.coproduct(&vec_of(u), *k)), FockVector::zero())
        }
        Probe::CoTruncation { u, k } => tensors(voc.coproduct(&vec_of(u), *k), TensorVector::zero()),
        Probe::CoGrading { u, k } => {
            let expected = u.weight() as i64 + k + 1;
            let bad = TensorVector::from_terms(
                voc.coproduct(&vec_of(u), *k)
                    .terms()
                    .filter(|((l, r), _)| (l.weight() + r.weight()) as i64 != expected)
                    .map(|(key, c)| (key.clone(), c.clone())),
            );
            tensors(bad, TensorVector::zero())
        }
        Probe::CoDerivative { u, k } => {
            let u = vec_of(u);
            let lhs = voc
                .coproduct(&u, *k)
                .map_left(|l| voa.virasoro_apply(1, &vec_of(l)));
            let rhs = voc.coproduct(&u, k - 1).scale(&scalar(-k));
            tensors(lhs, rhs)
        }
        Probe::VocJacobi { u, v1, v2, v3, cell, window } => {
            let (a, b, c) = (vec_of(v1), vec_of(v2), vec_of(v3));
            let sides = jacobi_sides_voc(voc, &vec_of(u), [&a, &b, &c], &cube(*window)?)?;
            let e = cell_exponents(*cell);
            scalars(
                sides.lhs.coefficient(&e).unwrap_or_default(),
                sides.rhs.coefficient(&e).unwrap_or_default(),
            )
        }
        Probe::Adjunction { u, k, v, w } => {
            let lhs = voc.coproduct_pair(&vec_of(u), *k, v, w);
            let rhs = bilinear_form(&vec_of(u), &voa.y(&vec_of(v), *k, &vec_of(w)));
            scalars(lhs, rhs)
        }
        Probe::Preserving { k, u, v } => {
            let (u, v) = (vec_of(u), vec_of(v));
            let lhs = bilinear_form(&voa.virasoro_apply(*k, &u), &v);
            let rhs = bilinear_form(&u, &voa.virasoro_apply(-k, &v));
            scalars(lhs, rhs)
        }
        Probe::Graded { u, v } => scalars(bilinear_form(&vec_of(u), &vec_of(v)), Scalar::zero()),
        Probe::Invariance { variant, u, v, w, exponent } => {
            let lhs = bilinear_form(&voa.y(&vec_of(u), -exponent - 1, &vec_of(v)), &vec_of(w));
            let rhs = match variant {
                InvarianceVariant::Literal => invariance_rhs(voa, v, u, w, *exponent),
                InvarianceVariant::Standard => invariance_rhs(voa, u, v, w, *exponent),
            };
            scalars(lhs, rhs)
        }
    }
}
