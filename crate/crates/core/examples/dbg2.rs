use std::time::Instant;
use trident_core::family_w::*;
use trident_core::descent::independence_bound;
use trident_core::curve::SplitCurve;
use trident_core::arith::is_square_rat;
use trident_core::rat::{rq, Rat};
fn main() {
    let (c63, pts) = seven_points(&rq(-76, 3), &rq(26, 1)).unwrap();
    let disc = c63.a_coeff.square() - Rat::from_int(4) * &c63.b_coeff;
    let s = is_square_rat(&disc).unwrap();
    let split = SplitCurve::new(Rat::zero(), (-&c63.a_coeff + &s)/Rat::from_int(2), (-&c63.a_coeff - &s)/Rat::from_int(2)).unwrap();
    let t0 = Instant::now();
    let cert = independence_bound(&split, &pts).unwrap();
    println!("family7 bound {} adjoined {} ({:?})", cert.bound, cert.adjoined.len(), t0.elapsed());
}
