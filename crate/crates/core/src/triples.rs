//! Rational Diophantine triples, the curves they induce, and the Lasić
//! parametrization with its rank-jump square conditions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_square_rat;
use crate::curve::{CurveError, PointQ, SplitCurve};
use crate::rat::Rat;

#[derive(Debug, Error)]
pub enum TripleError {
    #[error("element {0} is zero")]
    ZeroElement(Rat),
    #[error("elements {0} and {1} coincide")]
    RepeatedElement(Rat, Rat),
    #[error("{0}·{1} + 1 = {2} is not a rational square")]
    NotSquare(Rat, Rat, Rat),
    #[error("parameter denominator vanishes: {0}")]
    DegenerateParameters(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// `{a, b, c}` with the square witnesses `ab+1 = r²`, `ac+1 = s²`,
/// `bc+1 = t²`, all witnesses normalized nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiophTriple {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub r: Rat,
    pub s: Rat,
    pub t: Rat,
}

impl DiophTriple {
    /// As an unordered set: equal up to permutation.
    pub fn same_set(&self, other: &DiophTriple) -> bool {
        let mut x = [&self.a, &self.b, &self.c];
        let mut y = [&other.a, &other.b, &other.c];
        x.sort();
        y.sort();
        x == y
    }

    /// `{-a, -b, -c}`, which is again a triple with the same witnesses and
    /// the same induced curve.
    pub fn negated(&self) -> DiophTriple {
        DiophTriple {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            r: self.r.clone(),
            s: self.s.clone(),
            t: self.t.clone(),
        }
    }
}

/// Checks that `ab+1`, `ac+1`, `bc+1` are squares and that the elements are
/// nonzero and pairwise distinct.
pub fn validate_triple(a: Rat, b: Rat, c: Rat) -> Result<DiophTriple, TripleError> {
    for v in [&a, &b, &c] {
        if v.is_zero() {
            return Err(TripleError::ZeroElement(v.clone()));
        }
    }
    for (u, v) in [(&a, &b), (&a, &c), (&b, &c)] {
        if u == v {
            return Err(TripleError::RepeatedElement(u.clone(), v.clone()));
        }
    }
    let witness = |u: &Rat, v: &Rat| -> Result<Rat, TripleError> {
        let q = u * v + Rat::one();
        is_square_rat(&q).ok_or_else(|| TripleError::NotSquare(u.clone(), v.clone(), q))
    };
    let r = witness(&a, &b)?;
    let s = witness(&a, &c)?;
    let t = witness(&b, &c)?;
    Ok(DiophTriple { a, b, c, r, s, t })
}

/// The curve `y² = (x+ab)(x+ac)(x+bc)` induced by a triple, together with
/// its named points: the 2-torsion `A = [-bc, 0]`, `B = [-ac, 0]`,
/// `C = [-ab, 0]`, and `P = [0, abc]`, `S = [1, rst]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InducedCurve {
    pub curve: SplitCurve,
    pub a_pt: PointQ,
    pub b_pt: PointQ,
    pub c_pt: PointQ,
    pub p_pt: PointQ,
    pub s_pt: PointQ,
}

pub fn induced_curve(t: &DiophTriple) -> Result<InducedCurve, TripleError> {
    let ab = &t.a * &t.b;
    let ac = &t.a * &t.c;
    let bc = &t.b * &t.c;
    let curve = SplitCurve::new(-&ab, -&ac, -&bc)?;
    let p_pt = PointQ::affine(Rat::zero(), &ab * &t.c);
    let s_pt = PointQ::affine(Rat::one(), &t.r * &t.s * &t.t);
    debug_assert!(curve.contains(&p_pt) && curve.contains(&s_pt));
    Ok(InducedCurve {
        a_pt: PointQ::affine(-&bc, Rat::zero()),
        b_pt: PointQ::affine(-&ac, Rat::zero()),
        c_pt: PointQ::affine(-&ab, Rat::zero()),
        curve,
        p_pt,
        s_pt,
    })
}

/// Parameters `(t1, t2, t3)` of the Lasić parametrization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleParams {
    pub t1: Rat,
    pub t2: Rat,
    pub t3: Rat,
}

impl TripleParams {
    pub fn new(t1: Rat, t2: Rat, t3: Rat) -> Result<TripleParams, TripleError> {
        let prod = &t1 * &t2 * &t3;
        if prod == Rat::one() || prod == -Rat::one() {
            return Err(TripleError::DegenerateParameters(
                "t1·t2·t3 = ±1 makes the parametrization denominators vanish".into(),
            ));
        }
        Ok(TripleParams { t1, t2, t3 })
    }
}

/// The Lasić parametrization of rational Diophantine triples:
///
/// ```text
/// a = 2·t1·(1 + t1·t2·(1 + t2·t3)) / ((-1 + t1·t2·t3)(1 + t1·t2·t3))
/// ```
///
/// and cyclically for `b`, `c`. For nondegenerate parameters the output
/// validates as a triple by construction (the square witnesses are rational).
pub fn lasic(p: &TripleParams) -> Result<DiophTriple, TripleError> {
    let TripleParams { t1, t2, t3 } = p;
    let prod = t1 * t2 * t3;
    let den = (-Rat::one() + &prod) * (Rat::one() + &prod);
    debug_assert!(!den.is_zero());
    let two = Rat::from_int(2);
    let a = &two * t1 * (Rat::one() + t1 * t2 * (Rat::one() + t2 * t3)) / &den;
    let b = &two * t2 * (Rat::one() + t2 * t3 * (Rat::one() + t3 * t1)) / &den;
    let c = &two * t3 * (Rat::one() + t3 * t1 * (Rat::one() + t1 * t2)) / &den;
    validate_triple(a, b, c)
}

/// The three rank-jump flags: whether `t3(t3-t2)`, `t1(t1-t3)`, `t2(t2-t1)`
/// are rational squares.
pub fn square_conditions(p: &TripleParams) -> (bool, bool, bool) {
    let TripleParams { t1, t2, t3 } = p;
    (
        is_square_rat(&(t3 * &(t3 - t2))).is_some(),
        is_square_rat(&(t1 * &(t1 - t3))).is_some(),
        is_square_rat(&(t2 * &(t2 - t1))).is_some(),
    )
}

/// The extra point behind the first rank-jump condition: the abscissa with
/// `x + ab = b(c-b)/(t2·t3)` lifts to a rational point on the induced curve
/// exactly when `t3(t3-t2)` is a square. Returns `None` when the condition
/// fails.
pub fn rank_jump_point(
    p: &TripleParams,
    t: &DiophTriple,
) -> Result<Option<PointQ>, TripleError> {
    let TripleParams { t1: _, t2, t3 } = p;
    if t2.is_zero() || t3.is_zero() {
        return Err(TripleError::DegenerateParameters("t2·t3 = 0".into()));
    }
    let ab = &t.a * &t.b;
    let x = &t.b * (&t.c - &t.b) / (t2 * t3) - &ab;
    let ind = induced_curve(t)?;
    let e = ind.curve.curve();
    let y2 = x.pow(3) + &e.a2 * x.square() + &e.a4 * &x + &e.a6;
    match is_square_rat(&y2) {
        Some(y) => {
            let pt = PointQ::affine(x, y);
            debug_assert!(ind.curve.contains(&pt));
            Ok(Some(pt))
        }
        None => Ok(None),
    }
}

/// Parametric almost-perfect-cuboid solution: produces `(t1, t2, t3)` =
/// `(-s1², s2², s3²)` with `s3² - s2² = s4²` and
///
/// ```text
/// s1² + s2² = □,   s2² + s4² = □,   s1² + s2² + s4² = □,
/// ```
///
/// which makes all three rank-jump conditions hold.
pub fn cuboid_params(m: &Rat) -> Result<TripleParams, TripleError> {
    let one = Rat::one();
    let m2 = m.square();
    let s1 = Rat::from_int(2)
        * (&m2 + m + &one)
        * (&m2 - &one).square()
        * (&m2 + &one + Rat::from_int(4) * m);
    let s2 = Rat::from_int(4)
        * (&m2 + m + &one)
        * (Rat::from_int(2) * m + &one)
        * (&m2 - &one)
        * (Rat::from_int(2) * m + &m2);
    let s4 = (Rat::from_int(2) * m + &one)
        * (Rat::from_int(2) * m + &m2)
        * (Rat::from_int(3) * &m2 + Rat::from_int(2) * m + &one)
        * (&m2 + Rat::from_int(2) * m + Rat::from_int(3));
    if s1.is_zero() || s2.is_zero() || s4.is_zero() {
        return Err(TripleError::DegenerateParameters(format!(
            "cuboid parametrization degenerates at m = {m}"
        )));
    }
    let t1 = -s1.square();
    let t2 = s2.square();
    let t3 = s2.square() + s4.square();
    let s3 = is_square_rat(&t3).expect("s2² + s4² is a square by construction");
    debug_assert_eq!(s3.square() - s2.square(), s4.square());
    TripleParams::new(t1, t2, t3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rint, rq};

    #[test]
    fn validate_examples() {
        let t = validate_triple(rint(1), rint(3), rint(8)).unwrap();
        assert_eq!((t.r, t.s, t.t), (rint(2), rint(3), rint(5)));

        // the rank-12 record triple
        let t = validate_triple(
            "6125241375/11907531272".parse().unwrap(),
            "5535371271425/14277129995128".parse().unwrap(),
            "-273138178560/153430695649".parse().unwrap(),
        );
        assert!(t.is_ok());

        assert!(matches!(
            validate_triple(rint(1), rint(2), rint(3)),
            Err(TripleError::NotSquare(..))
        ));
        assert!(validate_triple(rint(0), rint(3), rint(8)).is_err());
        assert!(validate_triple(rint(3), rint(3), rint(8)).is_err());
    }

    #[test]
    fn induced_curve_138() {
        let t = validate_triple(rint(1), rint(3), rint(8)).unwrap();
        let ind = induced_curve(&t).unwrap();
        assert_eq!(ind.curve.roots(), &[rint(-24), rint(-8), rint(-3)]);
        assert_eq!(ind.p_pt, PointQ::affine(rint(0), rint(24)));
        assert_eq!(ind.s_pt, PointQ::affine(rint(1), rint(30)));
        // 2-torsion relation A + B = C
        let e = ind.curve.curve();
        let ab = e.add(&ind.a_pt, &ind.b_pt).unwrap();
        assert_eq!(ab, ind.c_pt);
    }

    #[test]
    fn lasic_rank10_parameters() {
        let p = TripleParams::new(rq(44, 29), rq(17, 42), rq(3, 44)).unwrap();
        let t = lasic(&p).unwrap();
        // the parametrization produces the negated form of the usual display
        assert_eq!(t.a, "-815848/164547".parse::<Rat>().unwrap());
        assert_eq!(t.b, "-1512524/1810017".parse::<Rat>().unwrap());
        assert_eq!(t.c, "-32060/201113".parse::<Rat>().unwrap());
        let disp = validate_triple(
            rq(815848, 164547),
            rq(1512524, 1810017),
            rq(32060, 201113),
        )
        .unwrap();
        assert!(t.negated().same_set(&disp));
        // same induced curve either way
        assert_eq!(
            induced_curve(&t).unwrap().curve,
            induced_curve(&disp).unwrap().curve
        );
    }

    #[test]
    fn lasic_degenerate() {
        assert!(TripleParams::new(rint(1), rint(1), rint(1)).is_err());
        assert!(TripleParams::new(rq(1, 2), rint(2), rint(1)).is_err());
        assert!(TripleParams::new(rq(-1, 2), rint(2), rint(1)).is_err());
    }

    #[test]
    fn square_condition_examples() {
        // t2 = t3 makes the first product zero, hence square
        let p = TripleParams::new(rint(5), rint(2), rint(2)).unwrap();
        assert!(square_conditions(&p).0);
        let p = TripleParams::new(rint(1), rint(2), rint(3)).unwrap();
        // t3(t3-t2) = 3: not a square
        assert!(!square_conditions(&p).0);
    }

    #[test]
    fn rank_jump_identity_and_point() {
        let p = TripleParams::new(rq(3, 7), rq(5, 11), rq(9, 4)).unwrap();
        let t = lasic(&p).unwrap();
        // exact identity x + ab = b(c-b)/(t2·t3) against the displayed x
        let TripleParams { t1, t2, t3 } = &p;
        let num = Rat::from_int(-4)
            * (t2.square() * t3 - t3 + t2)
            * (t3 * t1.square() * t2 + Rat::one() + t3 * t1)
            * (t2 * t3 + t2 * t3.square() * t1 + Rat::one());
        let prod = t1 * t2 * t3;
        let den = t3 * (-Rat::one() + &prod).square() * (Rat::one() + &prod).square();
        let x_displayed = num / den;
        let ab = &t.a * &t.b;
        assert_eq!(&x_displayed + &ab, &t.b * (&t.c - &t.b) / (t2 * t3));
        // the condition fails here, so no point
        assert!(!square_conditions(&p).0);
        assert!(rank_jump_point(&p, &t).unwrap().is_none());
    }

    #[test]
    fn cuboid_examples() {
        for m in [rint(2), rq(3, 5), rq(-7, 3)] {
            let p = cuboid_params(&m).unwrap();
            let (c1, c2, c3) = square_conditions(&p);
            assert!(c1 && c2 && c3, "conditions fail at m = {m}");
            let t = lasic(&p).unwrap();
            let pt = rank_jump_point(&p, &t).unwrap();
            assert!(pt.is_some());
        }
        assert!(cuboid_params(&rint(1)).is_err());
        assert!(cuboid_params(&rint(0)).is_err());
        assert!(cuboid_params(&rint(-2)).is_err());
    }
}
