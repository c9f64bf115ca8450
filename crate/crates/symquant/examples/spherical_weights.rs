//! Spherical highest weights by the Cartan–Helgason criterion, cross-checked
//! against the explicit nullspace of the isotropy generators.
//!
//! Run: cargo run --release --example spherical_weights

use symquant::repmat::{build_irrep, spherical_nullity};
use symquant::report::weight_str;
use symquant::rootsys::WeightVec;
use symquant::satake::{diagram_context, SUITE};

fn main() {
    let bound = 4u32;
    for name in SUITE {
        let dc = diagram_context(name).unwrap();
        let spherical = dc.rrs.spherical_weights(bound);
        let labels: Vec<String> = spherical.iter().map(weight_str).collect();
        println!(
            "{name}: spherical weights up to height {bound}: {}",
            labels.join(", ")
        );

        // cross-validate every dominant weight against the matrix model
        let r = dc.base().rank;
        let mut agree = 0usize;
        let mut total = 0usize;
        let mut coords = vec![0i128; r];
        enumerate(&mut coords, 0, bound as i128, &mut |c: &[i128]| {
            let lam = WeightVec::from_ints(c);
            let predicted = dc.rrs.is_spherical_weight(&lam);
            let rep = build_irrep(dc.base(), &lam).unwrap();
            let nullity = spherical_nullity(&dc.diagram, &rep).unwrap();
            total += 1;
            if predicted == (nullity == 1) {
                agree += 1;
            }
        });
        println!("{name}: nullspace oracle agrees on {agree}/{total} dominant weights");
    }
}

fn enumerate(coords: &mut Vec<i128>, idx: usize, budget: i128, visit: &mut impl FnMut(&[i128])) {
    if idx == coords.len() {
        visit(coords);
        return;
    }
    for v in 0..=budget {
        coords[idx] = v;
        enumerate(coords, idx + 1, budget - v, visit);
    }
    coords[idx] = 0;
}
