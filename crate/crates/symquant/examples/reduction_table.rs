//! Bohr–Sommerfeld levels and the dimensions of the limit isotypic spaces:
//! each spherical weight contributes a regular level lambda + rho_hat whose
//! reduced quantization has dimension d_lambda.
//!
//! Run: cargo run --release --example reduction_table

use symquant::quantize::{moment_and_regularity, reduction_dims, GroupWord, MomentPoint};
use symquant::report::weight_str;
use symquant::rootsys::WeightVec;
use symquant::satake::diagram_context;

fn main() {
    for name in ["AI:A1", "group:A1", "AII:A3"] {
        let dc = diagram_context(name).unwrap();
        let lambdas = dc.rrs.spherical_weights(6);
        let (rows, total) = reduction_dims(&lambdas, &dc.rrs).unwrap();
        println!("{name}:");
        println!(
            "{:>10} {:>12} {:>8} {:>8}",
            "lambda", "level", "regular", "dim"
        );
        for r in &rows {
            println!(
                "{:>10} {:>12} {:>8} {:>8}",
                weight_str(&r.lambda),
                weight_str(&r.level),
                r.regular,
                r.dim
            );
        }
        println!(
            "{:>10} {:>12} {:>8} {:>8}  (direct sum)",
            "", "", "total", total
        );
        println!();
    }

    // the invariant moment value sweeps to the dominant chamber; regularity
    // is an exact lattice test
    let dc = diagram_context("AI:A2").unwrap();
    for fw in [[-3i128, 1], [2, 0], [1, 1]] {
        let p = MomentPoint {
            x: GroupWord::default(),
            xi: WeightVec::from_ints(&fw),
        };
        let (dom, reg) = moment_and_regularity(&p, &dc.rrs).unwrap();
        println!(
            "moment value of xi = {:?}: dominant {} ({})",
            fw,
            weight_str(&dom),
            if reg { "regular" } else { "on a wall" }
        );
    }
}
