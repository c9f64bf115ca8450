//! Fourier harmonics for the invariant torus: the weight-projected matrix
//! element equals the character-weighted torus average.
//!
//! Run: cargo run --release --example harmonics_check

use num_complex::Complex64;
use symquant::convexg::InvariantConvexFn;
use symquant::linalg::SplitMix64;
use symquant::quantize::{
    evaluate_section, fourier_harmonic, fourier_harmonic_torus_average, section_setup,
    AlgebraElement, GroupWord,
};
use symquant::repmat::Precision;
use symquant::report::weight_str;
use symquant::rootsys::WeightVec;
use symquant::satake::diagram_context;

fn main() {
    let dc = diagram_context("AI:A1").unwrap();
    let g = InvariantConvexFn::parse("0.5*q").unwrap();
    let lam = WeightVec::from_ints(&[4]);
    let setup = section_setup(&dc, &lam, Precision::Double).unwrap();
    let d = setup.rep.dim;

    let mut rng = SplitMix64::new(42);
    let xi = dc.geom.cone_point(&[0.3 + rng.next_f64()]);
    let word = GroupWord {
        letters: vec![AlgebraElement {
            ih: vec![rng.next_f64() - 0.5],
            re_ef: vec![rng.next_f64() - 0.5],
            im_ef: vec![rng.next_f64() - 0.5],
        }],
    };
    let v_star: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();

    println!(
        "lambda = {}, evaluation point xi = {xi:?}",
        weight_str(&lam)
    );
    println!(
        "{:>6} {:>24} {:>24} {:>10}",
        "nu", "projection", "torus average", "residual"
    );
    let mut sum = Complex64::new(0.0, 0.0);
    let mut seen = std::collections::BTreeSet::new();
    for nu in setup.rep.basis_weights.clone() {
        if !seen.insert(nu.clone()) {
            continue;
        }
        let direct = fourier_harmonic(&setup, &g, &word, &xi, &v_star, &nu);
        let avg =
            fourier_harmonic_torus_average(&setup, &dc, &g, &word, &xi, &v_star, &nu).unwrap();
        println!(
            "{:>6} {:>24} {:>24} {:>10.2e}",
            weight_str(&nu),
            format!("{:.6}{:+.6}i", direct.re, direct.im),
            format!("{:.6}{:+.6}i", avg.re, avg.im),
            (direct - avg).norm()
        );
        sum += direct;
    }
    let full = evaluate_section(&setup, &g, &word, &xi, &v_star);
    println!(
        "harmonic sum reassembles the section value: |sum - f| = {:.2e}",
        (sum - full).norm()
    );
}
