//! Harish-Chandra c-function table on the rank-one split sphere: the squared
//! highest-weight component of the unit spherical vector equals
//! binom(2j, j) / 4^j.
//!
//! Run: cargo run --release --example cfun_table

use symquant::quantize::phat_shifted;
use symquant::repmat::{build_irrep, spherical_vector_for_diagram, Precision};
use symquant::rootsys::WeightVec;
use symquant::satake::diagram_context;

fn binom(n: u64, k: u64) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn main() {
    let dc = diagram_context("AI:A1").unwrap();
    println!(
        "{:>3} {:>9} {:>22} {:>22} {:>10}",
        "j", "d_lambda", "c (nullspace)", "binom(2j,j)/4^j", "Phat"
    );
    for j in 0..=10u32 {
        let lam = WeightVec::from_ints(&[2 * j as i128]);
        let rep = build_irrep(dc.base(), &lam).unwrap();
        let sv = spherical_vector_for_diagram(&dc.diagram, &rep, Precision::Double).unwrap();
        let c = sv.c_function().unwrap();
        let closed = binom(2 * j as u64, j as u64) as f64 / 4f64.powi(j as i32);
        println!(
            "{:>3} {:>9} {:>22.16} {:>22.16} {:>10.4}",
            j,
            rep.dim,
            c,
            closed,
            phat_shifted(&lam, &dc.rrs)
        );
        assert!((c - closed).abs() < 1e-10);
    }
    println!("all rows match the closed form within 1e-10");
}
