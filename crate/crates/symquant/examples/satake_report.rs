//! Restricted root data for the built-in diagram suite.
//!
//! Run: cargo run --release --example satake_report

use symquant::report::rat_str;
use symquant::satake::{diagram_context, SUITE};

fn main() {
    println!(
        "{:<12} {:>2} {:>4} {:>4} {:>2}  restricted roots (mult)",
        "diagram", "r", "n_b", "n_a", "l"
    );
    for name in SUITE {
        let dc = diagram_context(name).expect("suite diagram builds");
        let roots: Vec<String> = dc
            .rrs
            .restricted_positive_sr
            .iter()
            .zip(&dc.rrs.multiplicities)
            .map(|(beta, m)| {
                let b: Vec<String> = beta.iter().map(|&c| rat_str(c)).collect();
                format!("[{}] x{m}", b.join(" "))
            })
            .collect();
        println!(
            "{:<12} {:>2} {:>4} {:>4} {:>2}  {}",
            name,
            dc.base().rank,
            dc.rrs.n_black,
            dc.rrs.n_arrows,
            dc.rrs.rank_l,
            roots.join(", ")
        );
        let rho = dc.base().fw_to_sr(&dc.rrs.rho_hat.fw);
        let rho_s: Vec<String> = rho.iter().map(|&c| rat_str(c)).collect();
        println!("{:<12} rho_hat = [{}]", "", rho_s.join(" "));
    }
}
