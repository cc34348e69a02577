use std::time::Instant;
use trident_core::family_w::*;
use trident_core::records;
use trident_core::descent::independence_bound;
use trident_core::curve::SplitCurve;
use trident_core::arith::is_square_rat;
use trident_core::rat::Rat;

fn main() {
    let w2 = records::family7b_w2();
    let t0 = Instant::now();
    let partners = solve_conditions_for_w5(&w2);
    println!("solve partners: {:?} ({:?})", partners.len(), t0.elapsed());
    let w5 = &partners[0];
    println!("w5 = {}", w5);
    let t0 = Instant::now();
    let (c62, pts) = b_side_points(&w2, w5).unwrap();
    println!("b_side_points: {} pts ({:?})", pts.len(), t0.elapsed());
    let t0 = Instant::now();
    let disc = c62.a_coeff.square() - Rat::from_int(4) * &c62.b_coeff;
    let s = is_square_rat(&disc).unwrap();
    let r1 = (-&c62.a_coeff + &s) / Rat::from_int(2);
    let r2 = (-&c62.a_coeff - &s) / Rat::from_int(2);
    let split = SplitCurve::new(Rat::zero(), r1, r2).unwrap();
    println!("split: ({:?})", t0.elapsed());
    let t0 = Instant::now();
    let cert = independence_bound(&split, &pts).unwrap();
    println!("descent bound {} adjoined {} ({:?})", cert.bound, cert.adjoined.len(), t0.elapsed());
}
