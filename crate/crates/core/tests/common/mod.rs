//! Test-side oracles that share no code with the engine.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use heisvoc_core::{FockVector, Monomial, Scalar};
use num_bigint::BigInt;

/// A mode `(color, level)`; positive levels annihilate.
pub type RawMode = (u32, i64);

/// Creation factors `(color, n)` in sorted order.
pub type Key = Vec<(u32, u32)>;

/// Expands `word · 1` in the universal enveloping algebra by moving annihilators to the right
/// with `[a_i(m), a_j(n)] = m δ_ij δ_{m+n,0}` until they hit the vacuum.
#[derive(Default)]
pub struct Rewriter {
    memo: HashMap<Vec<RawMode>, BTreeMap<Key, BigInt>>,
}

impl Rewriter {
    pub fn expand(&mut self, word: &[RawMode]) -> BTreeMap<Key, BigInt> {
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let result = match word.iter().rposition(|&(_, l)| l > 0) {
            None => {
                let mut key: Key = word.iter().map(|&(c, l)| (c, (-l) as u32)).collect();
                key.sort();
                BTreeMap::from([(key, BigInt::from(1))])
            }
            Some(i) if i + 1 == word.len() => BTreeMap::new(),
            Some(i) => {
                let (a, b) = (word[i], word[i + 1]);
                let mut swapped = word.to_vec();
                swapped.swap(i, i + 1);
                let mut out = self.expand(&swapped);
                if a.0 == b.0 && a.1 + b.1 == 0 {
                    let mut rest = word.to_vec();
                    rest.drain(i..=i + 1);
                    for (k, c) in self.expand(&rest) {
                        *out.entry(k).or_default() += c * BigInt::from(a.1);
                    }
                }
                out.retain(|_, c| *c != BigInt::from(0));
                out
            }
        };
        self.memo.insert(word.to_vec(), result.clone());
        result
    }

    /// `(u, v)` for basis monomials: the vacuum coefficient after annihilating `v` with the
    /// adjoint word of `u`.
    pub fn pairing(&mut self, u: &Monomial, v: &Monomial) -> BigInt {
        let mut word: Vec<RawMode> = u.factors().iter().map(|f| (f.color, f.n as i64)).collect();
        word.extend(creation_word(v));
        self.expand(&word)
            .get(&Vec::new())
            .cloned()
            .unwrap_or_default()
    }
}

pub fn creation_word(m: &Monomial) -> Vec<RawMode> {
    m.factors().iter().map(|f| (f.color, -(f.n as i64))).collect()
}

pub fn to_vector(map: &BTreeMap<Key, BigInt>) -> FockVector {
    FockVector::from_terms(
        map.iter()
            .map(|(k, c)| (Monomial::from_pairs(k), Scalar::from_integer(c.clone()))),
    )
}

/// All multisets of creation factors of total level `weight`, grown one factor at a time
/// and deduplicated by sorting.
pub fn brute_force_basis(rank: u32, weight: usize) -> BTreeSet<Key> {
    let mut levels: Vec<BTreeSet<Key>> = vec![BTreeSet::from([Vec::new()])];
    for total in 1..=weight {
        let mut here = BTreeSet::new();
        for n in 1..=total {
            for prev in &levels[total - n] {
                for c in 1..=rank {
                    let mut next = prev.clone();
                    next.push((c, n as u32));
                    next.sort();
                    here.insert(next);
                }
            }
        }
        levels.push(here);
    }
    levels.pop().unwrap()
}

pub fn key_of(m: &Monomial) -> Key {
    let mut k: Key = m.factors().iter().map(|f| (f.color, f.n)).collect();
    k.sort();
    k
}
