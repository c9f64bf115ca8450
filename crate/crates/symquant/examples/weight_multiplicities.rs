//! Root-system combinatorics: Weyl sweeping, dimensions and Freudenthal
//! weight multiplicities.
//!
//! Run: cargo run --release --example weight_multiplicities

use symquant::report::weight_str;
use symquant::rootsys::{build_root_system_str, WeightVec};

fn main() {
    let rs = build_root_system_str("A2").unwrap();
    println!(
        "A2: {} roots, {} positive",
        rs.roots.len(),
        rs.positive_roots.len()
    );

    // sweep of -rho crosses the whole Weyl group
    let rho = rs.rho();
    let (dom, word) = rs.sweep(&rho.neg());
    println!(
        "sweep(-rho) = {} via word of length {} (longest element)",
        weight_str(&dom),
        word.len()
    );

    for fw in [[1i128, 0], [1, 1], [2, 1], [3, 0]] {
        let lam = WeightVec::from_ints(&fw);
        let dim = rs.weyl_dimension(&lam).unwrap();
        let mult = rs.freudenthal(&lam).unwrap();
        let total: u64 = mult.values().sum();
        println!(
            "\nlambda = {}: dim {dim} ({} distinct weights)",
            weight_str(&lam),
            mult.len()
        );
        for (nu, m) in &mult {
            println!("  {:>8}  x{m}", weight_str(nu));
        }
        assert_eq!(total as u128, dim);
    }
}
