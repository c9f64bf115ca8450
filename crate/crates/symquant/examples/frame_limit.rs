//! Convergence of the rescaled holomorphic frame matrix to its infinite-time
//! limit along a ray from the vertical polarization.
//!
//! Run: cargo run --release --example frame_limit

use symquant::convexg::{frame_limit, frame_matrix, InvariantConvexFn};
use symquant::satake::diagram_context;

fn main() {
    let dc = diagram_context("AI:A1").unwrap();
    let g = InvariantConvexFn::zero();
    let h = InvariantConvexFn::parse("0.5*q").unwrap();
    let xi = vec![0.1];

    let t_grid = [5.0, 10.0, 25.0, 50.0];
    let report = frame_limit(&g, &h, &xi, &t_grid, &dc.geom).unwrap();
    println!(
        "ray g_t = t q/2 over xi = {xi:?} (fitted scale {:.6})",
        report.fitted_scale
    );
    println!("{:>8} {:>14}", "t", "rel distance");
    for (t, d) in &report.entries {
        println!("{:>8} {:>14.6e}", t, d);
    }
    let dists: Vec<f64> = report.entries.iter().map(|&(_, d)| d).collect();
    assert!(
        dists.windows(2).all(|w| w[1] < w[0]),
        "distances must decrease"
    );
    println!(
        "\nreport as JSON: {}",
        symquant::report::frame_limit_json(&report).trim_end()
    );

    // the unrescaled matrix at t = 0 with g = q/2 shows the cosh/sinh entries
    let gq = InvariantConvexFn::parse("0.5*q").unwrap();
    let b = frame_matrix(&gq, &h, 0.0, &[0.8], &dc.geom);
    let c = dc.geom.beta_eval(0, &[0.8]);
    println!("\nframe matrix at t=0, g=q/2, xi=0.8:");
    println!(
        "  root-row omega entry {:.8} = cosh({c:.4}) = {:.8}",
        b[(1, 1)].re,
        c.cosh()
    );
    println!(
        "  root-row dxi entry   {:.8} = sinh({c:.4})/{c:.4} = {:.8}",
        b[(1, 3)].im,
        c.sinh() / c
    );
}
