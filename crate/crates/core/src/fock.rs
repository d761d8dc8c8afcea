//! The graded Fock space M(1): basis monomials in the creation modes, exact
//! rational linear combinations of them, and the tensor square.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

// Integer fast paths: `Ratio` arithmetic always renormalizes through a gcd, which dominates
// when, as is typical here, every coefficient is an integer.
pub(crate) fn mul_scalar(a: &Scalar, b: &Scalar) -> Scalar {
    if a.denom().is_one() && b.denom().is_one() {
        Scalar::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

pub(crate) fn add_assign_scalar(a: &mut Scalar, b: Scalar) {
    if a.denom().is_one() && b.denom().is_one() {
        *a = Scalar::from_integer(a.numer() + b.numer());
    } else {
        *a += b;
    }
}

/// Exact scalar field used everywhere.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Dimension of the underlying space `h`; also the central charge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Rank(u32);

impl Rank {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidRank);
        }
        Ok(Rank(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn colors(self) -> impl Iterator<Item = u32> {
        1..=self.0
    }

    pub fn check_color(self, color: u32) -> Result<()> {
        if color == 0 || color > self.0 {
            return Err(Error::ColorOutOfRange {
                color,
                rank: self.0,
            });
        }
        Ok(())
    }

    /// Checks that every monomial of `v` only uses colors available at this rank.
    pub fn admits(self, v: &FockVector) -> Result<()> {
        for (m, _) in v.terms() {
            for f in m.factors() {
                self.check_color(f.color)?;
            }
        }
        Ok(())
    }

    pub fn admits_tensor(self, t: &TensorVector) -> Result<()> {
        for ((l, r), _) in t.terms() {
            for f in l.factors().iter().chain(r.factors()) {
                self.check_color(f.color)?;
            }
        }
        Ok(())
    }
}

impl TryFrom<u32> for Rank {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Rank::new(d)
    }
}

impl From<Rank> for u32 {
    fn from(r: Rank) -> u32 {
        r.0
    }
}

/// A Heisenberg mode `γ_color(level)`. Positive levels annihilate, negative levels create.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    color: u32,
    level: i64,
}

impl Mode {
    pub fn new(color: u32, level: i64) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        if color == 0 {
            return Err(Error::ColorOutOfRange { color, rank: 0 });
        }
        Ok(Mode { color, level })
    }

    /// `γ_color(-n)`.
    pub fn creation(color: u32, n: u32) -> Self {
        assert!(color >= 1 && n >= 1);
        Mode {
            color,
            level: -(n as i64),
        }
    }

    /// `γ_color(n)`.
    pub fn annihilation(color: u32, n: u32) -> Self {
        assert!(color >= 1 && n >= 1);
        Mode {
            color,
            level: n as i64,
        }
    }

    pub fn color(self) -> u32 {
        self.color
    }

    pub fn level(self) -> i64 {
        self.level
    }

    pub fn is_creation(self) -> bool {
        self.level < 0
    }

    /// The mode paired with this one by the bilinear form, `γ(m) ↦ γ(-m)`.
    pub fn flipped(self) -> Self {
        Mode {
            color: self.color,
            level: -self.level,
        }
    }
}

/// One creation factor `γ_color(-n)` of a basis monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub color: u32,
    pub n: u32,
}

impl Factor {
    pub fn new(color: u32, n: u32) -> Self {
        assert!(color >= 1 && n >= 1, "factor needs color >= 1 and n >= 1");
        Factor { color, n }
    }
}

// Canonical order: ascending color, then descending |level|.
impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.color
            .cmp(&other.color)
            .then_with(|| other.n.cmp(&self.n))
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A basis element `γ_{c_1}(-n_1)···γ_{c_r}(-n_r)` of M(1), stored as a sorted multiset.
/// The empty monomial is the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    weight: u32,
    factors: FactorList,
}

type FactorList = SmallVec<[Factor; 6]>;

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial::default()
    }

    pub fn from_factors<I: IntoIterator<Item = Factor>>(factors: I) -> Self {
        let mut factors: FactorList = factors.into_iter().collect();
        factors.sort();
        let weight = factors.iter().map(|f| f.n).sum();
        Monomial { weight, factors }
    }

    /// Convenience constructor from `(color, n)` pairs, i.e. `γ_color(-n)`.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        Monomial::from_factors(pairs.iter().map(|&(c, n)| Factor::new(c, n)))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_vacuum(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of the levels of the factors.
    pub fn weight(&self) -> usize {
        self.weight as usize
    }

    pub fn max_color(&self) -> u32 {
        self.factors.iter().map(|f| f.color).max().unwrap_or(0)
    }

    pub fn multiplicity(&self, factor: Factor) -> usize {
        self.factors.iter().filter(|&&f| f == factor).count()
    }

    /// Distinct factors with their multiplicities, in canonical order.
    pub fn grouped(&self) -> Vec<(Factor, usize)> {
        let mut out: Vec<(Factor, usize)> = Vec::new();
        for &f in &self.factors {
            match out.last_mut() {
                Some((g, m)) if *g == f => *m += 1,
                _ => out.push((f, 1)),
            }
        }
        out
    }

    pub fn with_factor(&self, factor: Factor) -> Monomial {
        let pos = self.factors.partition_point(|f| *f <= factor);
        let mut factors = self.factors.clone();
        factors.insert(pos, factor);
        Monomial {
            weight: self.weight + factor.n,
            factors,
        }
    }

    /// Removes one copy of `factor`, if present.
    pub fn without_factor(&self, factor: Factor) -> Option<Monomial> {
        let pos = self.factors.iter().position(|&f| f == factor)?;
        let mut factors = self.factors.clone();
        factors.remove(pos);
        Some(Monomial {
            weight: self.weight - factor.n,
            factors,
        })
    }

    pub fn product(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(self.factors.iter().chain(other.factors.iter()).copied())
    }
}

// Terms are ordered by weight first, then by their canonical factor lists.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vacuum() {
            return write!(f, "1");
        }
        for (factor, mult) in self.grouped() {
            write!(f, "a{}(-{})", factor.color, factor.n)?;
            if mult > 1 {
                write!(f, "^{mult}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of weight exactly `weight`, in canonical order.
pub fn basis_of_weight(rank: Rank, weight: usize) -> Vec<Monomial> {
    // Factors are emitted in non-decreasing canonical order so each multiset appears once.
    fn extend(
        rank: u32,
        remaining: usize,
        floor: Option<Factor>,
        current: &mut Vec<Factor>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial::from_factors(current.iter().copied()));
            return;
        }
        for color in 1..=rank {
            for n in (1..=remaining as u32).rev() {
                let f = Factor { color, n };
                if floor.is_some_and(|fl| f < fl) {
                    continue;
                }
                current.push(f);
                extend(rank, remaining - n as usize, Some(f), current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(rank.get(), weight, None, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All monomials of weight at most `max_weight`.
pub fn basis_up_to(rank: Rank, max_weight: usize) -> Vec<Monomial> {
    (0..=max_weight)
        .flat_map(|w| basis_of_weight(rank, w))
        .collect()
}

/// A finite exact linear combination of basis keys with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Combination<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

/// An element of M(1).
pub type FockVector = Combination<Monomial>;
/// An element of M(1) ⊗ M(1).
pub type TensorVector = Combination<(Monomial, Monomial)>;

impl<K: Ord + Clone> Default for Combination<K> {
    fn default() -> Self {
        Combination {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, Scalar::one())
    }

    pub fn term(key: K, coefficient: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(key, coefficient);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coefficient(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: K, coefficient: Scalar) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                add_assign_scalar(e.get_mut(), coefficient);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), mul_scalar(c, factor));
        }
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Combination {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), mul_scalar(c, factor)))
                .collect(),
        }
    }

    /// Applies a linear map given on basis keys and extends it linearly.
    pub fn map_linear<L: Ord + Clone, F>(&self, mut f: F) -> Combination<L>
    where
        F: FnMut(&K) -> Combination<L>,
    {
        let mut out = Combination::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Applies a linear functional given on basis keys.
    pub fn contract<F>(&self, mut f: F) -> Scalar
    where
        F: FnMut(&K) -> Scalar,
    {
        self.terms
            .iter()
            .fold(Scalar::zero(), |acc, (k, c)| acc + f(k) * c)
    }
}

impl<K: Ord + Clone> Add for &Combination<K> {
    type Output = Combination<K>;
    fn add(self, rhs: Self) -> Combination<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl<K: Ord + Clone> Sub for &Combination<K> {
    type Output = Combination<K>;
    fn sub(self, rhs: Self) -> Combination<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl<K: Ord + Clone> Neg for &Combination<K> {
    type Output = Combination<K>;
    fn neg(self) -> Combination<K> {
        self.scale(&-Scalar::one())
    }
}

impl<K: Ord + Clone> Add for Combination<K> {
    type Output = Combination<K>;
    fn add(self, rhs: Self) -> Combination<K> {
        &self + &rhs
    }
}

impl<K: Ord + Clone> Sub for Combination<K> {
    type Output = Combination<K>;
    fn sub(self, rhs: Self) -> Combination<K> {
        &self - &rhs
    }
}

impl FockVector {
    pub fn vacuum() -> Self {
        Self::basis(Monomial::vacuum())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::basis(m)
    }

    /// `ω = ½ Σ_i γ_i(-1)²`.
    pub fn omega(rank: Rank) -> Self {
        Self::from_terms(
            rank.colors()
                .map(|c| (Monomial::from_pairs(&[(c, 1), (c, 1)]), ratio(1, 2))),
        )
    }

    /// Splits into weight-homogeneous components.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, FockVector> {
        let mut out: BTreeMap<usize, FockVector> = BTreeMap::new();
        for (m, c) in self.terms() {
            out.entry(m.weight())
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// The common weight of all terms, if the vector is nonzero and homogeneous.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut weights = self.terms().map(|(m, _)| m.weight());
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    pub fn max_color(&self) -> u32 {
        self.keys().map(Monomial::max_color).max().unwrap_or(0)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_vacuum() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

/// `u ⊗ w`.
pub fn tensor(u: &FockVector, w: &FockVector) -> TensorVector {
    let mut out = TensorVector::zero();
    for (a, ca) in u.terms() {
        for (b, cb) in w.terms() {
            out.add_term((a.clone(), b.clone()), ca * cb);
        }
    }
    out
}

impl TensorVector {
    /// Swaps the two tensor slots in every term.
    pub fn transpose_left(&self) -> TensorVector {
        TensorVector::from_terms(
            self.terms()
                .map(|((l, r), c)| ((r.clone(), l.clone()), c.clone())),
        )
    }

    /// `(f ⊗ Id)` for a linear functional `f` given on basis monomials.
    pub fn contract_left<F: FnMut(&Monomial) -> Scalar>(&self, mut f: F) -> FockVector {
        let mut out = FockVector::zero();
        for ((l, r), c) in self.terms() {
            out.add_term(r.clone(), f(l) * c);
        }
        out
    }

    /// `(Id ⊗ f)` for a linear functional `f` given on basis monomials.
    pub fn contract_right<F: FnMut(&Monomial) -> Scalar>(&self, mut f: F) -> FockVector {
        let mut out = FockVector::zero();
        for ((l, r), c) in self.terms() {
            out.add_term(l.clone(), f(r) * c);
        }
        out
    }

    /// `(A ⊗ Id)` for a linear operator `A` given on basis monomials.
    pub fn map_left<F: FnMut(&Monomial) -> FockVector>(&self, mut op: F) -> TensorVector {
        let mut out = TensorVector::zero();
        for ((l, r), c) in self.terms() {
            for (m, cm) in op(l).terms() {
                out.add_term((m.clone(), r.clone()), cm * c);
            }
        }
        out
    }

    /// The coefficient vector of `left ⊗ ·`.
    pub fn left_slice(&self, left: &Monomial) -> FockVector {
        FockVector::from_terms(
            self.terms()
                .filter(|((l, _), _)| l == left)
                .map(|((_, r), c)| (r.clone(), c.clone())),
        )
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((l, r), c)) in self.terms().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c}\t{l}\t{r}")?;
        }
        Ok(())
    }
}
