//! Text grammar for vectors of `M(1)`.
//!
//! ```text
//! vector   := ['+'|'-'] term (('+'|'-') term)*
//! term     := rational ['*' atom] | atom
//! atom     := monomial | 'w' | '1'
//! monomial := factor+
//! factor   := 'a' INDEX '(' '-' INT ')' ['^' INT]
//! rational := INT ['/' INT]
//! ```
//!
//! Whitespace is ignored between tokens. `1` alone is the vacuum and `w` is `ω`. The
//! printer emits the same grammar, so printed vectors parse back unchanged.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{Factor, FockVector, Monomial, Rank, Scalar};

/// Parses `text` into a vector, rejecting colors outside `1..=d`.
pub fn parse_vector(text: &str, rank: Rank) -> Result<FockVector> {
    let mut p = Parser::new(text, Some(rank));
    let v = p.vector()?;
    p.finish()?;
    Ok(v)
}

/// Parses a single monomial without a rank check; used when replaying report witnesses.
pub fn parse_monomial(text: &str) -> Result<Monomial> {
    let mut p = Parser::new(text, None);
    p.skip_ws();
    let m = if p.peek() == Some(b'1') {
        p.pos += 1;
        Monomial::vacuum()
    } else {
        p.monomial()?
    };
    p.finish()?;
    Ok(m)
}

/// Parses with colors checked only for being positive.
pub fn parse_vector_unranked(text: &str) -> Result<FockVector> {
    let mut p = Parser::new(text, None);
    let v = p.vector()?;
    p.finish()?;
    Ok(v)
}

pub fn print_vector(v: &FockVector) -> String {
    v.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: Option<Rank>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, rank: Option<Rank>) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            rank,
        }
    }

    fn error<T>(&self, position: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => self.error(
                self.pos,
                format!("expected '{}', found '{}'", byte as char, b as char),
            ),
            None => self.error(self.pos, format!("expected '{}', found end of input", byte as char)),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(b) => self.error(self.pos, format!("unexpected '{}'", b as char)),
        }
    }

    fn integer(&mut self) -> Result<(BigInt, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error(start, "expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok((digits.parse().unwrap(), start))
    }

    fn small(&mut self, what: &str) -> Result<(u32, usize)> {
        let (n, at) = self.integer()?;
        match u32::try_from(&n) {
            Ok(v) => Ok((v, at)),
            Err(_) => self.error(at, format!("{what} {n} is too large")),
        }
    }

    fn vector(&mut self) -> Result<FockVector> {
        let mut out = FockVector::zero();
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return self.error(self.pos, "empty expression"),
            _ => false,
        };
        loop {
            let term = self.term()?;
            let sign = if negative { -Scalar::one() } else { Scalar::one() };
            out.add_scaled(&term, &sign);
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<FockVector> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let coefficient = self.rational()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let atom = self.atom()?;
                    Ok(atom.scale(&coefficient))
                } else {
                    Ok(FockVector::vacuum().scale(&coefficient))
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<FockVector> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                match self.rank {
                    Some(rank) => Ok(FockVector::omega(rank)),
                    None => self.error(self.pos - 1, "'w' needs a known rank"),
                }
            }
            Some(b'1') => {
                let at = self.pos;
                let (n, _) = self.integer()?;
                if n != BigInt::one() {
                    return self.error(at, "only '1' may stand for a basis vector");
                }
                Ok(FockVector::vacuum())
            }
            Some(b'a') => Ok(FockVector::monomial(self.monomial()?)),
            Some(b) => self.error(self.pos, format!("expected a term, found '{}'", b as char)),
            None => self.error(self.pos, "expected a term, found end of input"),
        }
    }

    fn rational(&mut self) -> Result<Scalar> {
        let (num, _) = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let (den, at) = self.integer()?;
            if den.is_zero() {
                return self.error(at, "zero denominator");
            }
            Ok(Scalar::new(num, den))
        } else {
            Ok(Scalar::from_integer(num))
        }
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut factors = Vec::new();
        while self.peek() == Some(b'a') {
            self.pos += 1;
            let (color, at) = self.small("color")?;
            match self.rank {
                Some(rank) if color < 1 || color > rank.get() => {
                    return self.error(
                        at,
                        format!("color {color} out of range 1..={}", rank.get()),
                    )
                }
                None if color < 1 => return self.error(at, "color must be at least 1"),
                _ => {}
            }
            self.expect(b'(')?;
            match self.peek() {
                Some(b'-') => self.pos += 1,
                _ => return self.error(self.pos, "level must be negative, written as '-n'"),
            }
            let (n, at) = self.small("level")?;
            if n == 0 {
                return self.error(at, "level must be nonzero");
            }
            self.expect(b')')?;
            let mut power = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let (e, at) = self.small("exponent")?;
                if e == 0 {
                    return self.error(at, "exponent must be at least 1");
                }
                power = e;
            }
            for _ in 0..power {
                factors.push(Factor::new(color, n));
            }
        }
        if factors.is_empty() {
            return self.error(self.pos, "expected a factor 'a<i>(-n)'");
        }
        Ok(Monomial::from_factors(factors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ratio, scalar};

    fn rank(d: u32) -> Rank {
        Rank::new(d).unwrap()
    }

    #[test]
    fn half_gamma_squared_is_omega() {
        let v = parse_vector("1/2*a1(-1)^2", rank(1)).unwrap();
        assert_eq!(v, FockVector::omega(rank(1)));
        assert_eq!(parse_vector("w", rank(1)).unwrap(), v);
    }

    #[test]
    fn creation_factors_commute() {
        let v = parse_vector("a1(-1)a1(-2) - a1(-2)a1(-1)", rank(1)).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn color_out_of_range() {
        let err = parse_vector("a3(-1)", rank(2)).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 1, .. }), "{err:?}");
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "a1(1)", "a1(0)", "a1(-1)^0", "1/0", "a1(-1) +", "2*", "x", "a1-1)", "3a1(-1)"] {
            assert!(parse_vector(bad, rank(2)).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn whitespace_and_signs() {
        let v = parse_vector(" - 3 + 2 * a2( -1 ) a1(-3)^2 ", rank(2)).unwrap();
        let m = Monomial::from_pairs(&[(1, 3), (1, 3), (2, 1)]);
        assert_eq!(v.coefficient(&Monomial::vacuum()), scalar(-3));
        assert_eq!(v.coefficient(&m), scalar(2));
        assert_eq!(parse_vector("1", rank(1)).unwrap(), FockVector::vacuum());
        assert!(parse_vector("0", rank(1)).unwrap().is_zero());
    }

    #[test]
    fn printed_form_reparses() {
        let v = parse_vector("3 - 5*a1(-2) + 1/2*a1(-1)^2 - 7/3*a2(-1)a1(-1)", rank(2)).unwrap();
        let text = print_vector(&v);
        assert_eq!(parse_vector(&text, rank(2)).unwrap(), v);
        assert_eq!(v.coefficient(&Monomial::from_pairs(&[(1, 1), (2, 1)])), ratio(-7, 3));
    }

    #[test]
    fn monomial_replay() {
        assert_eq!(parse_monomial("1").unwrap(), Monomial::vacuum());
        assert_eq!(
            parse_monomial("a7(-2)a1(-1)").unwrap(),
            Monomial::from_pairs(&[(7, 2), (1, 1)])
        );
        assert!(parse_monomial("2*a1(-1)").is_err());
    }
}
