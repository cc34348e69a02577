//! Integer and rational primitives: exact square detection, coprime-basis
//! factor refinement, and square classes in ℚ*/ℚ*².
//!
//! The coprime basis replaces integer factorization throughout the crate.
//! A set of integers is refined by repeated gcd splitting into pairwise
//! coprime elements over which every input factors exactly; exponent
//! parities over such a basis determine square classes, which is all the
//! 2-descent needs. This stays cheap even for the 50-digit coordinates of
//! the record curves, where factoring would not.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("zero is not allowed here")]
    ZeroValue,
    #[error("value does not factor over the basis (residue {0})")]
    IncompleteFactorization(BigInt),
    #[error("square class of zero is undefined")]
    ZeroSquareClass,
}

/// Exact integer square root: `Some(k)` with `k² = n` iff `n` is a perfect
/// square. Uses the integer Newton iteration from `num` followed by an exact
/// multiplication check, so no floating point is trusted anywhere.
///
/// Panics on negative input; callers handle signs.
pub fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    assert!(!n.is_negative(), "int_sqrt of negative value");
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Nonnegative rational square root when `q` is a square in ℚ, else `None`.
pub fn is_square_rat(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let rn = int_sqrt(q.num())?;
    let rd = int_sqrt(q.den())?;
    Some(Rat::new(rn, rd).expect("den > 0"))
}

/// Pairwise coprime integers > 1 over which a set of inputs factors exactly.
///
/// No element is a perfect square (squares are replaced by their roots, which
/// preserves both pairwise coprimality and the factorization property), so
/// exponent parities over the basis determine square classes faithfully: a
/// product of distinct basis elements to odd powers can never be a square.
///
/// Serializes as a list of decimal strings so certificates stay readable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeBasis {
    elements: Vec<BigInt>,
}

impl Serialize for CoprimeBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.elements.iter().map(|b| b.to_string()).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoprimeBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<CoprimeBasis, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let mut elements = Vec::with_capacity(strings.len());
        for s in strings {
            elements.push(
                s.parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom(format!("bad integer {s:?}")))?,
            );
        }
        Ok(CoprimeBasis { elements })
    }
}

impl CoprimeBasis {
    /// Refines the given nonzero integers into a coprime basis.
    pub fn refine<I>(values: I) -> Result<CoprimeBasis, ArithError>
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        let mut basis = CoprimeBasis { elements: Vec::new() };
        for v in values {
            basis.insert(&v.into())?;
        }
        basis.strip_squares();
        Ok(basis)
    }

    pub fn elements(&self) -> &[BigInt] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Adds one more value, splitting existing elements as needed.
    pub fn insert(&mut self, value: &BigInt) -> Result<(), ArithError> {
        if value.is_zero() {
            return Err(ArithError::ZeroValue);
        }
        let mut work = vec![value.abs()];
        while let Some(x) = work.pop() {
            if x.is_one() {
                continue;
            }
            let mut split = None;
            for (i, b) in self.elements.iter().enumerate() {
                let g = x.gcd(b);
                if !g.is_one() {
                    split = Some((i, g));
                    break;
                }
            }
            match split {
                None => self.elements.push(x),
                Some((i, g)) => {
                    let b = self.elements.remove(i);
                    work.push(&x / &g);
                    work.push(&b / &g);
                    work.push(g);
                }
            }
        }
        Ok(())
    }

    /// Replaces perfect-square elements by their square roots, repeatedly.
    /// Any input that factored before still factors afterwards (with doubled
    /// exponents at the replaced positions).
    fn strip_squares(&mut self) {
        for b in &mut self.elements {
            while let Some(r) = int_sqrt(b) {
                if r.is_one() {
                    break;
                }
                *b = r;
            }
        }
        self.elements.retain(|b| !b.is_one());
        self.elements.sort();
    }

    /// Exponent vector of `|n|` over the basis, or `None` if a nontrivial
    /// residue remains.
    pub fn factor(&self, n: &BigInt) -> Option<Vec<u64>> {
        let mut m = n.abs();
        if m.is_zero() {
            return None;
        }
        let mut exps = vec![0u64; self.elements.len()];
        for (i, b) in self.elements.iter().enumerate() {
            loop {
                let (q, r) = m.div_rem(b);
                if r.is_zero() {
                    m = q;
                    exps[i] += 1;
                } else {
                    break;
                }
            }
        }
        if m.is_one() {
            Some(exps)
        } else {
            None
        }
    }
}

/// An element of ℚ*/ℚ*²: a sign and exponent parities over a coprime basis.
/// The identity class has positive sign and all parities zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClass {
    pub negative: bool,
    pub parities: Vec<bool>,
}

impl SquareClass {
    pub fn identity(basis: &CoprimeBasis) -> SquareClass {
        SquareClass { negative: false, parities: vec![false; basis.len()] }
    }

    pub fn is_identity(&self) -> bool {
        !self.negative && self.parities.iter().all(|&p| !p)
    }

    /// Group operation in ℚ*/ℚ*² (componentwise xor).
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        assert_eq!(self.parities.len(), other.parities.len());
        SquareClass {
            negative: self.negative != other.negative,
            parities: self
                .parities
                .iter()
                .zip(&other.parities)
                .map(|(a, b)| a != b)
                .collect(),
        }
    }
}

/// Square class of a nonzero rational over `basis`. Since
/// `q · den(q)² = num(q)·den(q)`, the class of `q` is the class of the
/// integer `num·den`, which must factor over the basis.
pub fn square_class(q: &Rat, basis: &CoprimeBasis) -> Result<SquareClass, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroSquareClass);
    }
    let n = q.num() * q.den();
    let exps = basis
        .factor(&n)
        .ok_or_else(|| ArithError::IncompleteFactorization(residue(&n, basis)))?;
    Ok(SquareClass {
        negative: n.is_negative(),
        parities: exps.into_iter().map(|e| e % 2 == 1).collect(),
    })
}

fn residue(n: &BigInt, basis: &CoprimeBasis) -> BigInt {
    let mut m = n.abs();
    for b in basis.elements() {
        loop {
            let (q, r) = m.div_rem(b);
            if r.is_zero() {
                m = q;
            } else {
                break;
            }
        }
    }
    m
}

/// Legendre symbol (a/p) for an odd prime p, by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    debug_assert!(p > 2 && p % 2 == 1);
    let pb = BigInt::from(p);
    let r = a.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let mut base = u64::try_from(&r).expect("reduced below p");
    let mut exp = (p - 1) / 2;
    let mut acc: u64 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    if acc == 1 {
        1
    } else {
        debug_assert_eq!(acc, p - 1);
        -1
    }
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Primes up to `n` inclusive, by sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut k = p * p;
            while k <= n {
                composite[k] = true;
                k += p;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{big, rint, rq};

    #[test]
    fn int_sqrt_examples() {
        assert_eq!(int_sqrt(&big(0)), Some(big(0)));
        // (1+3)(1+8)(1+24) = 900
        assert_eq!(int_sqrt(&big(900)), Some(big(30)));
        assert_eq!(int_sqrt(&big(2)), None);
        let huge = BigInt::from(10).pow(60u32) + 1;
        assert_eq!(int_sqrt(&(&huge * &huge)), Some(huge));
    }

    #[test]
    fn square_rat_examples() {
        assert_eq!(is_square_rat(&rq(9, 16)), Some(rq(3, 4)));
        // ab+1 for the triple {1,3,8}: 1·3+1 = 4
        assert_eq!(is_square_rat(&rint(4)), Some(rint(2)));
        assert_eq!(is_square_rat(&rint(-1)), None);
        assert_eq!(is_square_rat(&Rat::zero()), Some(Rat::zero()));
    }

    #[test]
    fn refine_examples() {
        let b = CoprimeBasis::refine([6i64, 10]).unwrap();
        let mut elems: Vec<i64> = b.elements().iter().map(|e| i64::try_from(e).unwrap()).collect();
        elems.sort();
        assert_eq!(elems, vec![2, 3, 5]);

        let b = CoprimeBasis::refine([4i64]).unwrap();
        assert_eq!(b.elements(), &[big(2)]);

        let b = CoprimeBasis::refine([7i64, 7]).unwrap();
        assert_eq!(b.elements(), &[big(7)]);

        assert!(CoprimeBasis::refine([0i64]).is_err());
    }

    #[test]
    fn refine_remultiplies() {
        let values: Vec<i64> = vec![840, -98, 33, 61, 1000000007, 121, 2 * 3 * 5 * 7 * 11];
        let basis = CoprimeBasis::refine(values.clone()).unwrap();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                assert!(basis.elements()[i].gcd(&basis.elements()[j]).is_one());
            }
        }
        for v in values {
            let exps = basis.factor(&big(v)).expect("factors");
            let mut prod = BigInt::one();
            for (b, e) in basis.elements().iter().zip(&exps) {
                prod *= b.pow(u32::try_from(*e).unwrap());
            }
            assert_eq!(prod, big(v).abs());
        }
    }

    #[test]
    fn square_class_examples() {
        let basis = CoprimeBasis::refine([2i64]).unwrap();
        let c = square_class(&rint(8), &basis).unwrap();
        assert!(!c.negative);
        assert_eq!(c.parities, vec![true]);

        let basis = CoprimeBasis::refine([2i64, 3]).unwrap();
        let c = square_class(&rq(9, 4), &basis).unwrap();
        assert!(c.is_identity());

        let basis = CoprimeBasis::refine([3i64]).unwrap();
        let c = square_class(&rint(-3), &basis).unwrap();
        assert!(c.negative);
        assert_eq!(c.parities, vec![true]);

        assert_eq!(square_class(&Rat::zero(), &basis), Err(ArithError::ZeroSquareClass));
        assert!(matches!(
            square_class(&rint(5), &basis),
            Err(ArithError::IncompleteFactorization(_))
        ));
    }

    #[test]
    fn square_basis_elements_are_stripped() {
        // 4 and 3 are coprime, so naive refinement would keep the square 4;
        // the class of 4 must still be the identity.
        let basis = CoprimeBasis::refine([4i64, 3]).unwrap();
        assert!(square_class(&rint(4), &basis).unwrap().is_identity());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&big(1), 5), 1);
        // squares mod 5 are {1, 4}
        assert_eq!(legendre(&big(2), 5), -1);
        assert_eq!(legendre(&big(10), 5), 0);
        // multiplicativity spot check
        for a in 1..7 {
            for b in 1..7 {
                assert_eq!(
                    legendre(&big(a * b), 7),
                    legendre(&big(a), 7) * legendre(&big(b), 7)
                );
            }
        }
    }

    #[test]
    fn primes_small() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(primes_up_to(1).is_empty());
    }
}
