//! Invariant convex functions: gradients, Kahler potentials and Newton
//! inversion of the Legendre map.
//!
//! Run: cargo run --release --example legendre_newton

use symquant::convexg::{grad_hess, inverse_legendre, kahler_potential, InvariantConvexFn};

fn main() {
    let quadratic = InvariantConvexFn::parse("0.5*q").unwrap();
    let quartic = InvariantConvexFn::parse("0.5*q + 0.25*q^2").unwrap();

    let xi = vec![0.8, -0.3];
    for (name, g) in [("q/2", &quadratic), ("q/2 + q^2/4", &quartic)] {
        let point = grad_hess(g, &xi);
        println!("g = {name} at xi = {xi:?}:");
        println!("  grad  = {:?}", point.grad);
        println!("  kappa = {:.12}", kahler_potential(g, &xi));
    }

    // the cubic example: grad g = (1 + |xi|^2) xi = 2 e1 has the exact root r = 1
    let x = vec![2.0, 0.0];
    let xi_back = inverse_legendre(&quartic, &x).unwrap();
    println!("inverse Legendre of X = {x:?} under q/2 + q^2/4: xi = {xi_back:?}");
    assert!((xi_back[0] - 1.0).abs() < 1e-10);

    // round trip at a generic point
    let probe = vec![1.7, 0.4];
    let forward = quartic.grad(&probe);
    let back = inverse_legendre(&quartic, &forward).unwrap();
    let err: f64 = back
        .iter()
        .zip(&probe)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    println!("round trip |xi - L^-1(L(xi))| = {err:.3e}");
    assert!(err < 1e-10);
}
