//! The two-parameter family: `(u,v) ↦ (t1,t2,t3) ↦ {a,b,c}`, the model
//! `y² = x³ + A(u,v)·x² + B(u,v)·x`, and its five sections of infinite
//! order P, R, T1, T2, T3.
//!
//! The polynomial tables are transcribed from the closed-form display and
//! guarded by exact identities: every section must satisfy the curve
//! equation at any specialization, the triple route must agree with the
//! parametrization route, and the model must be ℚ-isomorphic to the curve
//! induced by the triple. A single wrong coefficient fails those checks at
//! any random parameter choice.
//!
//! One display-level correction: the x-coordinate of T1 carries the
//! opposite sign from its printed form (as printed, T1 misses the curve at
//! every specialization; negated it lands on it everywhere, consistent with
//! the rank-jump construction that defines T1).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_square_rat;
use crate::curve::{isomorphic_over_q, CurveError, CurveQ, PointQ, SplitCurve};
use crate::descent::{independence_bound, DescentError, IndependenceCertificate};
use crate::rat::{rq, Rat};
use crate::triples::{lasic, DiophTriple, TripleError, TripleParams};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("section fails the curve equation (transcription guard)")]
    SectionOffCurve,
    #[error("parametrization routes disagree (transcription guard)")]
    RouteMismatch,
    #[error("model is singular at this specialization")]
    Singular,
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Descent(#[from] DescentError),
}

/// Admissible parameters of the two-parameter family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UVParams {
    pub u: Rat,
    pub v: Rat,
}

impl UVParams {
    pub fn new(u: Rat, v: Rat) -> Result<UVParams, FamilyError> {
        let two = Rat::from_int(2);
        let bad = u.is_zero()
            || v.is_zero()
            || u == Rat::from_int(4) * &v
            || v == Rat::from_int(16) * &u
            || v == two
            || v == -&two
            || v == &two * &u
            || v == -(&two * &u);
        if bad {
            return Err(FamilyError::Degenerate(format!(
                "(u,v) = ({u},{v}) lies on the excluded locus"
            )));
        }
        Ok(UVParams { u, v })
    }
}

/// `(t1, t2, t3)` from `(u, v)`: `t1 = v²(16u-v)/(8u(u-4v))`, then
/// `t3 = -v(2t1+v)/t1`, then `t2 = -u(2t3+u)/t3`. By construction
/// `t3(t3-t2) = (t3+u)²` and `t1(t1-t3) = (t1+v)²`, and the third condition
/// holds because `t1` came from doubling the obvious point on the cubic it
/// defines; all three square conditions are therefore satisfied.
pub fn uv_to_t(q: &UVParams) -> Result<TripleParams, FamilyError> {
    let UVParams { u, v } = q;
    let t1 = v.square() * (-v + Rat::from_int(16) * u)
        / (Rat::from_int(8) * u * (Rat::from_int(-4) * v + u));
    debug_assert!(!t1.is_zero());
    let t3 = -v * (Rat::from_int(2) * &t1 + v) / &t1;
    if t3.is_zero() {
        return Err(FamilyError::Degenerate("t3 vanishes".into()));
    }
    let t2 = -u * (Rat::from_int(2) * &t3 + u) / &t3;
    Ok(TripleParams::new(t1, t2, t3)?)
}

/// The triple `{a, b, c}` of the family, via the displayed closed forms,
/// cross-checked exactly against `lasic(uv_to_t(q))`.
pub fn uv_to_triple(q: &UVParams) -> Result<DiophTriple, FamilyError> {
    let UVParams { u, v } = q;
    let f = Factors::new(u, v);
    let den_core = (Rat::from_int(2) + v)
        * (Rat::from_int(4) - Rat::from_int(2) * v + v.square())
        * (v - Rat::from_int(2))
        * (v.square() + Rat::from_int(2) * v + Rat::from_int(4));
    let two_u_m = Rat::from_int(2) * u - v;
    let two_u_p = Rat::from_int(2) * u + v;
    if den_core.is_zero() || two_u_m.is_zero() || two_u_p.is_zero() {
        return Err(FamilyError::Degenerate("triple denominator vanishes".into()));
    }
    let a = -v.square() * &f.l16 * &f.g8 / (u * &den_core * &two_u_m * &two_u_p * &f.l4);
    let b = Rat::from_int(16) * u * &f.l4 * v * &f.g4 / (&den_core * &two_u_m * &two_u_p * &f.l16);
    let c = Rat::from_int(4) * &f.g9 * &two_u_m * &two_u_p / (u * &den_core * &f.l16 * &f.l4);
    let direct = crate::triples::validate_triple(a, b, c)?;
    let routed = lasic(&uv_to_t(q)?)?;
    if direct != routed {
        return Err(FamilyError::RouteMismatch);
    }
    Ok(direct)
}

/// The family model at a specialization: `y² = x³ + A·x² + B·x` and the five
/// sections, all verified on-curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UVFamilyCurve {
    pub a_coeff: Rat,
    pub b_coeff: Rat,
    pub curve: CurveQ,
    pub p: PointQ,
    pub r: PointQ,
    pub t1: PointQ,
    pub t2: PointQ,
    pub t3: PointQ,
}

impl UVFamilyCurve {
    pub fn sections(&self) -> [&PointQ; 5] {
        [&self.p, &self.r, &self.t1, &self.t2, &self.t3]
    }
}

/// Shared factors of B and the section coordinates.
struct Factors {
    l16: Rat, // 16u - v
    l4: Rat,  // u - 4v
    g1: Rat,
    g2: Rat,
    g3: Rat,
    g4: Rat,
    g5: Rat,
    g6: Rat,
    g7: Rat,
    g8: Rat,
    g9: Rat,
    g10: Rat,
    g11: Rat,
    g12: Rat,
    g13: Rat,
    g14: Rat,
    g15: Rat,
}

impl Factors {
    fn new(u: &Rat, v: &Rat) -> Factors {
        let c = Rat::from_int;
        let u2 = u.square();
        let v2 = v.square();
        let v3 = &v2 * v;
        let v4 = &v2 * &v2;
        let v5 = &v4 * v;
        let v6 = &v4 * &v2;
        Factors {
            l16: c(16) * u - v,
            l4: u - c(4) * v,
            g1: c(8) * v * &u2 - c(8) * &u2 + c(16) * v * u - &v2 * u + &v2 + c(2) * &v3,
            g2: c(8) * v * &u2 + c(8) * &u2 - c(16) * v * u - &v2 * u - &v2 + c(2) * &v3,
            g3: c(-16) * &v2 + c(64) * &u2 + &v4 - c(16) * &v3 * u,
            g4: c(4) * v - c(64) * u + c(16) * &v2 * u - c(4) * v * &u2 - &v5
                + c(4) * &v3 * &u2,
            g5: c(2) * v * &u2 - c(16) * &u2 + c(2) * v * u + c(8) * &v2 * u - c(4) * &v2 - &v3,
            g6: c(2) * v * &u2 + c(16) * &u2 - c(2) * v * u + c(8) * &v2 * u + c(4) * &v2 - &v3,
            g7: c(16) * v * u - c(4) * &u2 - &v4 + c(4) * &v2 * &u2,
            g8: c(16) * &v2 - c(64) * &u2 - &v4 + c(16) * &v3 * u - c(4) * &v5 * u
                + &v4 * &u2,
            g9: c(64) * &v2 * &u2 - c(64) * &u2 - c(16) * &v5 * u + c(256) * v * u + &v6
                - c(16) * &v4,
            g10: c(8) * v * &u2 + c(8) * &u2 + c(32) * v * u - c(16) * &v2 * u - c(4) * &v2 - &v3,
            g11: c(8) * v * &u2 - c(8) * &u2 - c(32) * v * u - c(16) * &v2 * u + c(4) * &v2 - &v3,
            g12: -v + c(16) * u - c(4) * &v2 * u + v * &u2,
            g13: c(8) * &u2 - v * u + c(2) * &v2,
            g14: c(8) * &u2 - c(16) * v * u - &v2,
            g15: c(2) * &u2 + c(8) * v * u - &v2,
        }
    }
}

/// Coefficient table of A: `A = v · Σ c · vⁱ · uʲ`.
const A_TERMS: [(i64, u32, u32); 61] = [
    (256, 13, 0),
    (-32, 15, 0),
    (1, 17, 0),
    (140288, 9, 2),
    (741888, 7, 4),
    (-4096, 10, 1),
    (-1167360, 8, 3),
    (-21258240, 6, 5),
    (-7936, 12, 1),
    (664832, 10, 3),
    (11440128, 8, 5),
    (32192, 11, 2),
    (-2785824, 9, 4),
    (-32380416, 7, 6),
    (28747776, 5, 6),
    (6463488, 6, 7),
    (71860224, 4, 7),
    (-2205696, 5, 8),
    (1536, 14, 1),
    (-24192, 13, 2),
    (-22528, 12, 3),
    (591360, 11, 4),
    (-3244800, 10, 5),
    (-128483328, 3, 8),
    (-12979200, 8, 7),
    (7816, 15, 2),
    (-36160, 14, 3),
    (-8616, 13, 4),
    (100992, 12, 5),
    (-128, 16, 1),
    (-2023776, 11, 6),
    (4, 18, 1),
    (-449, 17, 2),
    (7824, 16, 3),
    (-31368, 15, 4),
    (2860032, 10, 7),
    (70176, 14, 5),
    (112296, 13, 6),
    (9461760, 7, 8),
    (-2785824, 9, 8),
    (-332160, 12, 7),
    (128188416, 2, 9),
    (-37027840, 4, 9),
    (-1441792, 6, 9),
    (2659328, 8, 9),
    (46368, 11, 8),
    (-6193152, 5, 10),
    (515072, 7, 10),
    (-291840, 10, 9),
    (16818240, 9, 6),
    (-29425664, 1, 10),
    (32014336, 3, 10),
    (140288, 9, 10),
    (-2097152, 2, 11),
    (1572864, 4, 11),
    (-507904, 6, 11),
    (-16384, 8, 11),
    (65536, 5, 12),
    (65536, 1, 12),
    (-131072, 3, 12),
    (1048576, 0, 11),
];

fn a_value(u: &Rat, v: &Rat) -> Rat {
    let mut sum = Rat::zero();
    for &(c, vi, uj) in A_TERMS.iter() {
        sum = sum + Rat::from_int(c) * v.pow(vi as i32) * u.pow(uj as i32);
    }
    v * sum
}

fn b_value(f: &Factors, u: &Rat, v: &Rat) -> Rat {
    Rat::from_int(4)
        * &f.g1
        * &f.g2
        * &f.g3
        * &f.g4
        * &f.g5
        * &f.g6
        * &f.g7
        * &f.g8
        * f.l16.square()
        * f.l4.square()
        * u.square()
        * v.pow(3)
}

/// Builds the specialized family curve and its five sections.
pub fn uv_curve(q: &UVParams) -> Result<UVFamilyCurve, FamilyError> {
    let UVParams { u, v } = q;
    let f = Factors::new(u, v);
    let a = a_value(u, v);
    let b = b_value(&f, u, v);
    let curve = CurveQ::short(a.clone(), b.clone(), Rat::zero())
        .map_err(|_| FamilyError::Singular)?;

    let two_u_m = Rat::from_int(2) * u - v;
    let two_u_p = Rat::from_int(2) * u + v;
    let lu = &f.l16;
    let l4 = &f.l4;
    let u2 = u.square();
    let v2 = v.square();
    let v3 = &v2 * v;

    let p = PointQ::affine(
        Rat::from_int(-4) * &f.g4 * &f.g8 * l4.square() * &u2 * lu.square() * &v3,
        Rat::from_int(8)
            * &f.g9
            * &f.g4
            * &f.g8
            * two_u_m.square()
            * two_u_p.square()
            * l4.square()
            * &u2
            * lu.square()
            * &v3,
    );
    let r = PointQ::affine(
        Rat::from_int(4) * &f.g7 * &f.g2 * v * lu * l4 * u * &f.g1 * &f.g8,
        Rat::from_int(4)
            * &f.g1
            * &f.g8
            * &f.g2
            * &f.g7
            * &f.g10
            * &f.g11
            * &two_u_p
            * &two_u_m
            * &v2
            * lu
            * l4
            * u,
    );
    let t1 = PointQ::affine(
        Rat::from_int(-16) * &f.g7 * &f.g5 * lu * l4 * u * &f.g6 * &f.g4,
        Rat::from_int(8)
            * &f.g7
            * &f.g5
            * lu
            * l4
            * u
            * &f.g6
            * &f.g12
            * &f.g13
            * &f.g9
            * &f.g4,
    );
    let t2 = PointQ::affine(
        Rat::from_int(-4) * &f.g1 * &f.g3 * &f.g7 * &f.g2 * &f.g8 * l4 * u / &v2,
        Rat::from_int(4)
            * &f.g1
            * &f.g3
            * &f.g7
            * &f.g2
            * &two_u_p
            * &two_u_m
            * &f.g14
            * &f.g9
            * &f.g8
            * l4
            * u
            / &v3,
    );
    let t3 = PointQ::affine(
        lu * &f.g4 * &f.g8 * &f.g3 * f.g15.square(),
        Rat::from_int(2)
            * &f.g3
            * &two_u_m
            * &two_u_p
            * &f.g11
            * &f.g10
            * &f.g12
            * &f.g15
            * &f.g8
            * &f.g4
            * lu,
    );

    let out = UVFamilyCurve { a_coeff: a, b_coeff: b, curve, p, r, t1, t2, t3 };
    for s in out.sections() {
        if !out.curve.contains(s) {
            return Err(FamilyError::SectionOffCurve);
        }
    }
    Ok(out)
}

/// Splits `y² = x³ + A·x² + B·x` over its rational roots `0` and the roots
/// of `x² + A·x + B` (which are rational throughout the family).
pub fn split_family_curve(fam: &UVFamilyCurve) -> Result<SplitCurve, FamilyError> {
    let disc = fam.a_coeff.square() - Rat::from_int(4) * &fam.b_coeff;
    let s = is_square_rat(&disc).ok_or_else(|| {
        FamilyError::Degenerate("quadratic factor has no rational roots".into())
    })?;
    let r1 = (-&fam.a_coeff + &s) / Rat::from_int(2);
    let r2 = (-&fam.a_coeff - &s) / Rat::from_int(2);
    Ok(SplitCurve::new(Rat::zero(), r1, r2)?)
}

/// Certifies a rank lower bound at a specialization from the five sections.
pub fn uv_certify(q: &UVParams) -> Result<IndependenceCertificate, FamilyError> {
    let fam = uv_curve(q)?;
    let split = split_family_curve(&fam)?;
    let pts: Vec<PointQ> = fam.sections().into_iter().cloned().collect();
    Ok(independence_bound(&split, &pts)?)
}

/// Checks that the specialized model is ℚ-isomorphic to the curve induced by
/// the specialized triple (a transcription guard used by the test suites).
pub fn uv_consistency(q: &UVParams) -> Result<bool, FamilyError> {
    let fam = uv_curve(q)?;
    let triple = uv_to_triple(q)?;
    let induced = crate::triples::induced_curve(&triple)?;
    Ok(isomorphic_over_q(&fam.curve, &induced.curve.curve())?.is_some())
}

/// The sixteen parameter pairs that specialize to rank-11 curves.
pub fn rank11_parameter_list() -> Vec<UVParams> {
    let pairs: [(i64, i64, i64, i64); 16] = [
        (11, 24, 5, 9),
        (-145, 6, 29, 12),
        (136, 19, 68, 5),
        (-16, 77, 4, 21),
        (473, 705, 43, 47),
        (-89, 135, 89, 45),
        (-62, 43, 93, 43),
        (71, 273, 142, 91),
        (224, 67, 7, 2),
        (-1032, 923, 172, 71),
        (-1501, 87, 158, 87),
        (1358, 1007, 194, 53),
        (-2072, 1819, 148, 107),
        (454, 481, 227, 37),
        (77, 173, 77, 173),
        (163, 137, 163, 137),
    ];
    pairs
        .into_iter()
        .map(|(un, ud, vn, vd)| {
            UVParams::new(rq(un, ud), rq(vn, vd)).expect("listed parameters are admissible")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rint;
    use crate::triples::square_conditions;

    fn params(un: i64, ud: i64, vn: i64, vd: i64) -> UVParams {
        UVParams::new(rq(un, ud), rq(vn, vd)).unwrap()
    }

    #[test]
    fn uv_to_t_21() {
        let q = params(2, 1, 1, 1);
        let t = uv_to_t(&q).unwrap();
        assert_eq!(t.t1, rq(-31, 32));
        assert_eq!(t.t2, rq(2, 15));
        assert_eq!(t.t3, rq(-30, 31));
        let (c1, c2, c3) = square_conditions(&t);
        assert!(c1 && c2 && c3);
        // the defining identities
        let u = &q.u;
        let v = &q.v;
        assert_eq!(&t.t3 * &(&t.t3 - &t.t2), (&t.t3 + u).square());
        assert_eq!(&t.t1 * &(&t.t1 - &t.t3), (&t.t1 + v).square());
    }

    #[test]
    fn degenerate_params_rejected() {
        assert!(UVParams::new(rint(4), rint(1)).is_err()); // u = 4v
        assert!(UVParams::new(rint(1), rint(16)).is_err()); // v = 16u
        assert!(UVParams::new(rint(0), rint(1)).is_err());
        assert!(UVParams::new(rint(3), rint(2)).is_err()); // v = 2
        assert!(UVParams::new(rint(3), rint(6)).is_err()); // v = 2u
    }

    #[test]
    fn triple_rank12_parameters() {
        let q = params(-95, 33, 50, 57);
        let t = uv_to_triple(&q).unwrap();
        assert_eq!(t.a, "6125241375/11907531272".parse::<Rat>().unwrap());
        assert_eq!(t.b, "5535371271425/14277129995128".parse::<Rat>().unwrap());
        assert_eq!(t.c, "-273138178560/153430695649".parse::<Rat>().unwrap());
    }

    #[test]
    fn triple_rank11_parameters() {
        let q = params(-62, 43, 93, 43);
        let t = uv_to_triple(&q).unwrap();
        assert_eq!(t.a, "21409906185/74591676404".parse::<Rat>().unwrap());
        assert_eq!(t.b, "-31580198976/18647919101".parse::<Rat>().unwrap());
        assert_eq!(t.c, "-10309975195/18647919101".parse::<Rat>().unwrap());
    }

    #[test]
    fn model_at_21_matches_display() {
        let q = params(2, 1, 1, 1);
        let fam = uv_curve(&q).unwrap();
        assert_eq!(fam.a_coeff, "21361758597".parse::<Rat>().unwrap());
        assert_eq!(fam.b_coeff, "-28803989016278714304".parse::<Rat>().unwrap());
        assert!(uv_consistency(&q).unwrap());
    }

    #[test]
    fn sections_on_curve_random() {
        // transcription guard at scattered parameters
        let samples = [
            (3, 1, 7, 1),
            (-5, 2, 9, 4),
            (7, 3, -11, 5),
            (10, 7, 3, 8),
            (-1, 1, 7, 2),
            (23, 5, -4, 7),
        ];
        for (un, ud, vn, vd) in samples {
            let q = params(un, ud, vn, vd);
            let fam = uv_curve(&q).expect("sections must verify");
            assert!(uv_consistency(&q).unwrap(), "at ({un}/{ud}, {vn}/{vd})");
            assert!(split_family_curve(&fam).is_ok());
        }
    }

    #[test]
    fn rank11_list_shape() {
        let list = rank11_parameter_list();
        assert_eq!(list.len(), 16);
        assert!(list.contains(&params(77, 173, 77, 173)));
        assert!(list.contains(&params(-62, 43, 93, 43)));
    }

    #[test]
    fn certify_21_is_five() {
        let cert = uv_certify(&params(2, 1, 1, 1)).unwrap();
        assert!(cert.bound >= 5);
    }
}
