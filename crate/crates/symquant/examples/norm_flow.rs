//! Norm flow of the spherical frame sections along Mabuchi rays.
//!
//! Prints the normalized ratios R(t, lambda); for large t these approach one
//! common constant (the representation-dependent factor has been divided
//! out), while the raw norms differ across lambda by that factor — the
//! non-unitarity witness.
//!
//! Run: cargo run --release --example norm_flow

use symquant::convexg::InvariantConvexFn;
use symquant::quad::QuadConfig;
use symquant::quantize::asymptotic_report;
use symquant::repmat::Precision;
use symquant::report::weight_str;
use symquant::satake::diagram_context;

fn main() {
    let dc = diagram_context("AI:A1").unwrap();
    let lambdas = dc.rrs.spherical_weights(8);
    let t_grid = [1.0, 5.0, 10.0, 20.0, 40.0];
    let cfg = QuadConfig::default();

    for spec in ["0.5*q", "0.5*q + 0.05*q^2"] {
        let h = InvariantConvexFn::parse(spec).unwrap();
        let report =
            asymptotic_report(&dc, &lambdas, &h, &t_grid, &cfg, Precision::Double).unwrap();
        println!("h = {spec} on {}", report.diagram);
        print!("{:>8}", "lambda");
        for t in &report.t_grid {
            print!(" {:>12}", format!("R(t={t})"));
        }
        println!(" {:>12}", "target");
        for (i, lam) in report.lambdas.iter().enumerate() {
            print!("{:>8}", weight_str(lam));
            for v in &report.ratios[i] {
                print!(" {:>12.8}", v);
            }
            println!(" {:>12.6e}", report.targets[i]);
        }
        println!(
            "flags: limit lambda-independent: {} (max dev {:.2e}), quadratic-exact: {} (max dev {:.2e}), non-unitarity witness: {} (spread {:.1}%)",
            report.flags.lambda_independent_limit,
            report.flags.max_limit_ratio_deviation,
            report.flags.quadratic_exact,
            report.flags.max_quadratic_deviation,
            report.flags.nonunitary_witness,
            report.flags.gq_factor_spread * 100.0
        );
        println!();
    }

    // the multiplicity-two group case: the quadratic ray is exactly flat
    let dg = diagram_context("group:A1").unwrap();
    let lambdas = dg.rrs.spherical_weights(4);
    let h = InvariantConvexFn::parse("0.5*q").unwrap();
    let report = asymptotic_report(&dg, &lambdas, &h, &t_grid, &cfg, Precision::Double).unwrap();
    println!(
        "group:A1, h = q/2: quadratic_exact = {} (max dev {:.2e}); R = sqrt(pi)/4 = {:.8}",
        report.flags.quadratic_exact,
        report.flags.max_quadratic_deviation,
        std::f64::consts::PI.sqrt() / 4.0
    );
    for (i, lam) in report.lambdas.iter().enumerate() {
        println!(
            "  lambda = ({}): R(1) = {:.10}",
            weight_str(lam),
            report.ratios[i][0]
        );
    }
}
