//! Dense univariate polynomials over ℚ and exact rational root extraction.
//!
//! Root finding never factors integers: roots are isolated with Sturm chains
//! over exact integer arithmetic and then verified by substitution. This is
//! what lets torsion and halving computations work on curves whose
//! coefficients run to 50+ digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{sign_of, Rat};

/// Polynomial with rational coefficients, `coeffs[i]` the coefficient of xⁱ.
/// Trailing zeros are trimmed; the zero polynomial has an empty coefficient
/// vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 alongside `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &Rat::from_int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(Rat::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; `other` must be nonzero.
    pub fn div_rem(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.degree() < other.degree() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let d = other.degree();
        let lead_inv = other.leading().recip().expect("nonzero leading");
        let mut quot = vec![Rat::zero(); self.degree() - d + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lead_inv;
            if !c.is_zero() {
                for (j, oc) in other.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * oc);
                }
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// All rational roots, each exactly verified, sorted ascending, deduped.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        // clear denominators to an integer polynomial
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.den());
        }
        let mut ic: Vec<BigInt> =
            self.coeffs.iter().map(|c| c.num() * (&den / c.den())).collect();
        let mut roots = Vec::new();
        // strip powers of x
        let k = ic.iter().take_while(|c| c.is_zero()).count();
        if k > 0 {
            roots.push(Rat::zero());
            ic.drain(..k);
        }
        if ic.len() > 1 {
            // roots of P are z/lc for the integer roots z of the monic
            // polynomial lc^(n-1)·P(z/lc)
            let n = ic.len() - 1;
            let lc = ic[n].clone();
            let monic: Vec<BigInt> = (0..=n)
                .map(|i| if i == n { BigInt::one() } else { &ic[i] * lc.pow((n - 1 - i) as u32) })
                .collect();
            for z in integer_roots_monic(&monic) {
                let cand = Rat::new(z, lc.clone()).expect("lc nonzero");
                if self.eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

// ---- integer polynomial internals -----------------------------------------

fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let g = content(&p);
    if g.is_zero() || g.is_one() {
        return p;
    }
    for c in &mut p {
        *c /= &g;
    }
    p
}

fn derivative_int(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return Vec::new();
    }
    p[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigInt::from(i as u64 + 1))
        .collect()
}

/// `-rem(f, g)` up to a positive scalar, made primitive. Each reduction step
/// scales by the leading coefficient of `g`; an odd number of negative scale
/// factors is compensated so the overall scaling stays positive, which is
/// what Sturm sign counting needs.
fn neg_rem_signed(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let dg = g.len() - 1;
    let lc = g.last().unwrap();
    let mut r: Vec<BigInt> = f.to_vec();
    let mut scale_neg = false;
    while r.len() > dg {
        let dr = r.len() - 1;
        let c = r.last().unwrap().clone();
        for coef in r.iter_mut() {
            *coef *= lc;
        }
        if lc.is_negative() {
            scale_neg = !scale_neg;
        }
        for (j, gc) in g.iter().enumerate() {
            r[dr - dg + j] -= &c * gc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        if r.is_empty() {
            return Vec::new();
        }
    }
    // apply the negation of -rem, folded with the sign compensation
    if !scale_neg {
        for coef in r.iter_mut() {
            *coef = -std::mem::take(coef);
        }
    }
    primitive(r)
}

/// Polynomial gcd over ℤ up to sign, primitive.
fn gcd_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut f = primitive(a.to_vec());
    let mut g = primitive(b.to_vec());
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let r = neg_rem_signed(&f, &g);
        f = g;
        g = r;
    }
    f
}

fn sturm_chain(p: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let dp = derivative_int(&p);
    let mut chain = vec![p, dp];
    while chain.last().map_or(false, |t| t.len() > 1) {
        let k = chain.len();
        let r = neg_rem_signed(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    chain
}

/// Sign of `p((2k+1)/2)` via the integer `2^deg · p((2k+1)/2)`.
fn sign_at_half(p: &[BigInt], two_k_plus_1: &BigInt) -> i32 {
    let n = p.len() - 1;
    let two = BigInt::from(2);
    let mut acc = BigInt::zero();
    for (i, c) in p.iter().enumerate() {
        acc += c * two_k_plus_1.pow(i as u32) * two.pow((n - i) as u32);
    }
    sign_of(&acc)
}

fn variations(chain: &[Vec<BigInt>], two_k_plus_1: &BigInt) -> usize {
    let mut count = 0;
    let mut last = 0i32;
    for p in chain {
        if p.is_empty() {
            continue;
        }
        let s = sign_at_half(p, two_k_plus_1);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// All integer roots of a monic integer polynomial. Sturm isolation runs over
/// half-integer endpoints, where a monic integer polynomial cannot vanish
/// (its rational roots are integers), so no endpoint bookkeeping is needed;
/// width-one intervals are then checked exactly at their unique integer.
fn integer_roots_monic(p: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(p.last().is_some_and(One::is_one));
    if p.len() <= 1 {
        return Vec::new();
    }
    let dp = derivative_int(p);
    let g = gcd_int(p, &dp);
    let sf = if g.len() > 1 { exact_div_int(p, &g) } else { primitive(p.to_vec()) };
    if sf.len() <= 1 {
        return Vec::new();
    }
    let chain = sturm_chain(sf.clone());
    // Cauchy-style root bound 1 + max |a_i / lc|
    let lc: BigInt = sf.last().unwrap().abs();
    let mut maxc = BigInt::zero();
    for c in &sf[..sf.len() - 1] {
        let m = c.abs();
        if m > maxc {
            maxc = m;
        }
    }
    let bound: BigInt = &maxc / &lc + 2;
    let lo: BigInt = BigInt::from(-2) * &bound - 1; // (lo)/2 < -bound
    let hi: BigInt = BigInt::from(2) * &bound + 1; // (hi)/2 > bound
    let va = variations(&chain, &lo);
    let vb = variations(&chain, &hi);
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi, va, vb)];
    while let Some((a, b, va, vb)) = stack.pop() {
        if va <= vb {
            continue;
        }
        let width = (&b - &a) / BigInt::from(2);
        if width.is_one() {
            let k = (&a + 1u8) / BigInt::from(2);
            if eval_int(p, &k).is_zero() {
                out.push(k);
            }
            continue;
        }
        let mut mid = (&a + &b) / BigInt::from(2);
        if (&mid % BigInt::from(2)).is_zero() {
            mid += 1;
        }
        let vm = variations(&chain, &mid);
        stack.push((a, mid.clone(), va, vm));
        stack.push((mid, b, vm, vb));
    }
    out.sort();
    out
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Exact quotient of integer polynomials up to content; panics if the
/// division is not exact.
fn exact_div_int(p: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    let pp = Poly::new(p.iter().map(|c| Rat::from_int(c.clone())).collect());
    let dd = Poly::new(d.iter().map(|c| Rat::from_int(c.clone())).collect());
    let (q, r) = pp.div_rem(&dd);
    assert!(r.is_zero(), "exact_div_int: not divisible");
    let mut den = BigInt::one();
    for c in q.coeffs() {
        den = den.lcm(c.den());
    }
    primitive(q.coeffs().iter().map(|c| c.num() * (&den / c.den())).collect())
}
