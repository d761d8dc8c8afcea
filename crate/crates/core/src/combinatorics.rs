//! Small exact combinatorial helpers shared by the engines.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Generalized binomial coefficient `C(n, k) = n (n - 1) ... (n - k + 1) / k!` for any integer `n`.
pub fn binomial(n: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n) - BigInt::from(i);
        den *= BigInt::from(i + 1);
        if num.is_zero() {
            return num;
        }
    }
    num / den
}

/// [`binomial`] in machine integers, `None` on overflow.
pub fn binomial_i128(n: i64, k: u64) -> Option<i128> {
    // Each prefix c_i = C(n, i) is an integer and c_{i+1} (i+1) = c_i (n - i).
    let mut c: i128 = 1;
    for i in 0..k as i128 {
        c = c.checked_mul(n as i128 - i)? / (i + 1);
        if c == 0 {
            return Some(0);
        }
    }
    Some(c)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}
