//! Coherent state transport of the isotypic frame and the scaled convergence
//! of section values to the limit polarization.
//!
//! Run: cargo run --release --example section_transport

use num_complex::Complex64;
use symquant::convexg::InvariantConvexFn;
use symquant::quantize::{
    evaluate_section_rescaled, gcst_transport, limit_section_value, section_setup, AlgebraElement,
    FrameTag, GroupWord, IsotypicSection,
};
use symquant::repmat::Precision;
use symquant::rootsys::WeightVec;
use symquant::satake::diagram_context;

fn main() {
    let h = InvariantConvexFn::parse("0.5*q").unwrap();
    let lam = WeightVec::from_ints(&[2]);

    // transport is pure frame bookkeeping: the label data never changes
    let s = IsotypicSection::new(
        lam.clone(),
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, 0.0),
        ],
        FrameTag::Schrodinger,
    )
    .unwrap();
    let s1 = gcst_transport(&s, &h, 1.5).unwrap();
    let s2 = gcst_transport(&s1, &h, 2.5).unwrap();
    println!(
        "transport: {:?} -> {:?} -> {:?}",
        s.frame, s1.frame, s2.frame
    );
    assert_eq!(s2.dual_vector, s.dual_vector);

    // scaled section values converge exponentially to the limit value
    let dc = diagram_context("AI:A1").unwrap();
    let setup = section_setup(&dc, &lam, Precision::Double).unwrap();
    let word = GroupWord {
        letters: vec![AlgebraElement {
            ih: vec![0.3],
            re_ef: vec![0.7],
            im_ef: vec![0.2],
        }],
    };
    let xi = vec![0.8];
    let v_star = vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.2, -0.1),
    ];
    let f_lim = limit_section_value(&setup, &word, &v_star);
    println!(
        "\nlimit section value F = {:.10}+{:.10}i",
        f_lim.re, f_lim.im
    );
    println!("{:>6} {:>16}", "t", "|scaled f - F|");
    for t in [2.5, 5.0, 10.0, 20.0] {
        let g_t = InvariantConvexFn::zero().add_scaled(&h, t);
        let f_t = evaluate_section_rescaled(&setup, &dc, &g_t, &word, &xi, &v_star);
        println!("{:>6} {:>16.6e}", t, (f_t - f_lim).norm());
    }
}
