//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured quantity and its threshold.
//!
//! Criterion 6 (quadratic-ray norm flatness at 1e-6 on AI:A1) fails by
//! construction of the half-form density on odd-multiplicity diagrams; see
//! the project notes. The measured drift is printed and the assertion is kept
//! faithful to the stated threshold.

use std::time::Instant;

use num_complex::Complex64;
use symquant::convexg::{
    frame_limit, grad_hess, hessian_factorization_check, inverse_legendre, InvariantConvexFn,
};
use symquant::linalg::SplitMix64;
use symquant::quad::QuadConfig;
use symquant::quantize::{
    fourier_harmonic, fourier_harmonic_torus_average, gq_correction, norm_context, norm_ratio,
    reduction_dims, section_setup, su2_weyl_orthogonality_residual, AlgebraElement, GroupWord,
};
use symquant::repmat::{build_irrep, spherical_nullity, spherical_vector_for_diagram, Precision};
use symquant::rootsys::WeightVec;
use symquant::satake::{diagram_context, DiagramContext};

const SUITE: [&str; 6] = [
    "group:A1",
    "group:A2",
    "AI:A1",
    "AI:A2",
    "AII:A3",
    "AIII:A3:p1",
];

fn budget(elapsed: std::time::Duration, seconds: f64, label: &str) {
    println!(
        "  runtime: {:.2}s (budget {seconds}s)",
        elapsed.as_secs_f64()
    );
    assert!(
        elapsed.as_secs_f64() < seconds,
        "{label} exceeded its runtime budget"
    );
}

fn mat_apply(cols: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    let r = cols.len();
    let mut out = vec![0i128; r];
    for (j, &c) in v.iter().enumerate() {
        if c != 0 {
            for k in 0..r {
                out[k] += c * cols[j][k];
            }
        }
    }
    out
}

#[test]
fn criterion_01_satake_suite_invariants() {
    let start = Instant::now();
    for name in SUITE {
        let dc = diagram_context(name).unwrap();
        let base = dc.base();
        let r = base.rank;
        let sigma = &dc.sigma.sigma_matrix;
        // sigma^2 = id, re-checked directly on the matrix
        for j in 0..r {
            let mut e = vec![0i128; r];
            e[j] = 1;
            assert_eq!(
                mat_apply(sigma, &mat_apply(sigma, &e)),
                e,
                "{name}: sigma^2"
            );
        }
        // sigma-order and sigma(Phi_0) = -Phi_0
        for root in &base.positive_roots {
            let img = mat_apply(sigma, root);
            let in_phi0 = root
                .iter()
                .enumerate()
                .all(|(k, &c)| c == 0 || dc.diagram.black.contains(&k));
            if in_phi0 {
                let neg: Vec<i128> = root.iter().map(|c| -c).collect();
                assert_eq!(img, neg, "{name}: sigma on Phi_0");
            } else {
                assert!(img.iter().all(|&c| c >= 0), "{name}: sigma-order");
            }
        }
        let expected_l = r - dc.rrs.n_black - dc.rrs.n_arrows;
        assert_eq!(dc.rrs.rank_l, expected_l, "{name}: rank formula");
        if name == "group:A1" {
            assert_eq!(dc.rrs.rank_l, 1, "group:A1 has l = r0 = 1");
        }
    }
    println!("criterion 1: PASS (sigma involution, sigma-order, Phi_0 negation, l = r - n_b - n_a on the suite)");
    budget(start.elapsed(), 1.0, "criterion 1");
}

#[test]
fn criterion_02_restricted_multiplicities() {
    let start = Instant::now();
    let ai_a2 = diagram_context("AI:A2").unwrap();
    assert!(ai_a2.rrs.multiplicities.iter().all(|&m| m == 1));
    let group_a1 = diagram_context("group:A1").unwrap();
    assert_eq!(group_a1.rrs.multiplicities, vec![2]);
    let aii = diagram_context("AII:A3").unwrap();
    assert_eq!(aii.rrs.multiplicities, vec![4]);
    println!("criterion 2: PASS (AI:A2 all m=1, group:A1 m=2, AII:A3 m=4, exact integers)");
    budget(start.elapsed(), 1.0, "criterion 2");
}

#[test]
fn criterion_03_cartan_helgason_cross_validation() {
    let start = Instant::now();
    let mut checked = 0usize;
    for name in SUITE {
        let dc = diagram_context(name).unwrap();
        let base = dc.base();
        let r = base.rank;
        // every dominant integral weight of coordinate height <= 8
        let mut coords = vec![0i128; r];
        let mut all = Vec::new();
        enumerate(&mut coords, 0, 8, &mut |c: &[i128]| {
            all.push(WeightVec::from_ints(c));
        });
        for lam in all {
            let predicted = dc.rrs.is_spherical_weight(&lam);
            let rep = build_irrep(base, &lam).unwrap();
            let nullity = spherical_nullity(&dc.diagram, &rep).unwrap();
            assert_eq!(
                predicted,
                nullity == 1,
                "{name}: lambda {:?} predicted {predicted} but nullity {nullity}",
                lam.fw
            );
            checked += 1;
        }
        if name == "AI:A1" {
            let spherical = dc.rrs.spherical_weights(8);
            let expect: Vec<WeightVec> = [0i128, 2, 4, 6, 8]
                .iter()
                .map(|&m| WeightVec::from_ints(&[m]))
                .collect();
            let mut sorted = expect;
            sorted.sort();
            assert_eq!(spherical, sorted, "AI:A1 spherical set is the even weights");
        }
    }
    println!(
        "criterion 3: PASS (Cartan-Helgason matches the nullspace oracle on {checked} weights, 100%)"
    );
    budget(start.elapsed(), 30.0, "criterion 3");
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

#[test]
fn criterion_04_c_function_binomial_table() {
    let start = Instant::now();
    let dc = diagram_context("AI:A1").unwrap();
    let precision = symquant::repmat::precision_from_env().unwrap();
    let mut worst = 0.0f64;
    for j in 0..=10u32 {
        let lam = WeightVec::from_ints(&[2 * j as i128]);
        let rep = build_irrep(dc.base(), &lam).unwrap();
        let sv = spherical_vector_for_diagram(&dc.diagram, &rep, precision).unwrap();
        let expect = binom(2 * j as u64, j as u64) as f64 / 4f64.powi(j as i32);
        let err = (sv.c_function().unwrap() - expect).abs();
        worst = worst.max(err);
        assert!(err < 1e-10, "j={j}: c deviates by {err}");
    }
    println!("criterion 4: PASS (c(2j w + rho_hat) = binom(2j,j)/4^j for j <= 10, max dev {worst:.2e} < 1e-10)");
    budget(start.elapsed(), 10.0, "criterion 4");
}

fn binom(n: u64, k: u64) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[test]
fn criterion_05_norm_asymptotics_quartic() {
    let start = Instant::now();
    let dc = diagram_context("AI:A1").unwrap();
    let h = InvariantConvexFn::parse("0.5*q + 0.05*q^2").unwrap();
    let cfg = QuadConfig::default();
    let ctx0 = norm_context(&dc, &WeightVec::from_ints(&[0]), Precision::Double).unwrap();
    let r0_40 = norm_ratio(&dc, &ctx0, &h, 40.0, &cfg).unwrap();
    let mut worst = 0.0f64;
    for m in [2i128, 4, 6, 8] {
        let ctx = norm_context(&dc, &WeightVec::from_ints(&[m]), Precision::Double).unwrap();
        let r10 = norm_ratio(&dc, &ctx, &h, 10.0, &cfg).unwrap();
        let r20 = norm_ratio(&dc, &ctx, &h, 20.0, &cfg).unwrap();
        let r40 = norm_ratio(&dc, &ctx, &h, 40.0, &cfg).unwrap();
        let dev = (r40 / r0_40 - 1.0).abs();
        worst = worst.max(dev);
        assert!(dev < 0.02, "lambda {m}: limit ratio deviates by {dev}");
        assert!(
            (r40 - r20).abs() < (r20 - r10).abs(),
            "lambda {m}: increments do not shrink"
        );
    }
    println!(
        "criterion 5: PASS (|R(40,lambda)/R(40,0) - 1| max {worst:.2e} < 0.02, increments shrink)"
    );
    budget(start.elapsed(), 60.0, "criterion 5");
}

#[test]
fn criterion_06_quadratic_exactness() {
    let start = Instant::now();
    let dc = diagram_context("AI:A1").unwrap();
    let h = InvariantConvexFn::parse("0.5*q").unwrap();
    let cfg = QuadConfig::default();
    let mut worst = 0.0f64;
    for m in [0i128, 2, 4, 6, 8] {
        let ctx = norm_context(&dc, &WeightVec::from_ints(&[m]), Precision::Double).unwrap();
        let r1 = norm_ratio(&dc, &ctx, &h, 1.0, &cfg).unwrap();
        for t in [2.0, 5.0, 10.0, 20.0, 40.0] {
            let rt = norm_ratio(&dc, &ctx, &h, t, &cfg).unwrap();
            worst = worst.max((rt / r1 - 1.0).abs());
        }
    }
    let verdict = if worst <= 1e-6 { "PASS" } else { "FAIL" };
    println!(
        "criterion 6: {verdict} (max |R(t,lambda)/R(1,lambda) - 1| = {worst:.3e} vs threshold 1e-6)"
    );
    if worst > 1e-6 {
        println!(
            "  note: structural obstruction on odd-multiplicity diagrams; the half-form density\n  \
             carries half-integer powers, so the Gaussian reduction that is exact for the\n  \
             multiplicity-two group case (verified flat to 1e-7 in the unit suite) acquires\n  \
             O(1/t) transients here. See the decisions ledger for the full analysis."
        );
    }
    budget(start.elapsed(), 30.0, "criterion 6");
    assert!(
        worst <= 1e-6,
        "quadratic-ray norms drift by {worst:.3e} on AI:A1 (threshold 1e-6); known structural \
         obstruction, documented in the decisions ledger"
    );
}

#[test]
fn criterion_07_nonunitarity_witness() {
    let start = Instant::now();
    let dc = diagram_context("AI:A1").unwrap();
    let mut factors = Vec::new();
    for m in [0i128, 2, 4, 6, 8] {
        let ctx = norm_context(&dc, &WeightVec::from_ints(&[m]), Precision::Double).unwrap();
        let (factor, _) = gq_correction(&ctx);
        factors.push((m, factor));
    }
    let f0 = factors[0].1;
    let f4 = factors.iter().find(|&&(m, _)| m == 4).unwrap().1;
    let spread = (f4 / f0 - 1.0).abs();
    assert!(
        spread > 0.10,
        "correction factors at lambda=0 and lambda=4w differ by only {spread}"
    );
    println!(
        "criterion 7: PASS (gq correction factor spread lambda=0 vs 4w: {:.1}% > 10%)",
        spread * 100.0
    );
    budget(start.elapsed(), 5.0, "criterion 7");
}

#[test]
fn criterion_08_fourier_harmonics() {
    let start = Instant::now();
    let dc = diagram_context("AI:A1").unwrap();
    let g = InvariantConvexFn::parse("0.5*q").unwrap();
    let mut worst = 0.0f64;
    for m in [0i128, 2, 4, 6] {
        let lam = WeightVec::from_ints(&[m]);
        let setup = section_setup(&dc, &lam, Precision::Double).unwrap();
        let d = setup.rep.dim;
        for point in 0..3u64 {
            let mut rng = SplitMix64::new(42 + point);
            let u = 0.3 + rng.next_f64();
            let xi = dc.geom.cone_point(&[u]);
            let letter = AlgebraElement {
                ih: vec![rng.next_f64() - 0.5],
                re_ef: vec![rng.next_f64() - 0.5],
                im_ef: vec![rng.next_f64() - 0.5],
            };
            let word = GroupWord {
                letters: vec![letter],
            };
            let v_star: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            let mut seen = std::collections::BTreeSet::new();
            for nu in setup.rep.basis_weights.clone() {
                if !seen.insert(nu.clone()) {
                    continue;
                }
                let direct = fourier_harmonic(&setup, &g, &word, &xi, &v_star, &nu);
                let avg = fourier_harmonic_torus_average(&setup, &dc, &g, &word, &xi, &v_star, &nu)
                    .unwrap();
                worst = worst.max((direct - avg).norm());
            }
        }
    }
    assert!(worst <= 1e-8, "torus average deviates by {worst}");
    println!("criterion 8: PASS (torus average vs projection residual {worst:.2e} <= 1e-8)");
    budget(start.elapsed(), 10.0, "criterion 8");
}

#[test]
fn criterion_09_frame_limit() {
    let start = Instant::now();
    let dc = diagram_context("AI:A1").unwrap();
    let g = InvariantConvexFn::zero();
    let h = InvariantConvexFn::parse("0.5*q").unwrap();
    let xi = vec![0.1];
    let report = frame_limit(&g, &h, &xi, &[25.0, 50.0], &dc.geom).unwrap();
    let d25 = report.entries[0].1;
    let d50 = report.entries[1].1;
    assert!(d50 <= 1e-3, "distance at t=50 is {d50}");
    assert!(d50 < d25, "distances do not decrease: {d25} -> {d50}");
    println!(
        "criterion 9: PASS (frame distance {d25:.2e} at t=25 -> {d50:.2e} at t=50, below 1e-3)"
    );
    budget(start.elapsed(), 5.0, "criterion 9");
}

#[test]
fn criterion_10_weyl_orthogonality_quadrature() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for m in [0i128, 1, 2, 3, 4] {
        let res = su2_weyl_orthogonality_residual(m, 64).unwrap();
        worst = worst.max(res);
        assert!(res < 1e-6, "lambda = {m}w: residual {res}");
    }
    println!(
        "criterion 10: PASS (Euler-angle quadrature vs d^-1 delta delta, max residual {worst:.2e} < 1e-6)"
    );
    budget(start.elapsed(), 30.0, "criterion 10");
}

#[test]
fn criterion_11_legendre_machinery() {
    let start = Instant::now();
    let quadratic = InvariantConvexFn::parse("0.5*q").unwrap();
    let quartic = InvariantConvexFn::parse("0.5*q + 0.05*q^2").unwrap();
    let mut worst_fd = 0.0f64;
    let mut worst_rt = 0.0f64;
    for g in [&quadratic, &quartic] {
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let xi = vec![3.0 * (rng.next_f64() - 0.5), 3.0 * (rng.next_f64() - 0.5)];
            let point = grad_hess(g, &xi);
            let fd = 1e-5;
            // optimal central-difference step for second derivatives in f64
            let fd2 = 1e-4;
            for i in 0..2 {
                let mut plus = xi.clone();
                let mut minus = xi.clone();
                plus[i] += fd;
                minus[i] -= fd;
                let d = (g.value(&plus) - g.value(&minus)) / (2.0 * fd);
                let rel = (d - point.grad[i]).abs() / (1.0 + point.grad[i].abs());
                worst_fd = worst_fd.max(rel);
                for j in 0..2 {
                    let mut pp = xi.clone();
                    pp[i] += fd2;
                    pp[j] += fd2;
                    let mut pm = xi.clone();
                    pm[i] += fd2;
                    pm[j] -= fd2;
                    let mut mp = xi.clone();
                    mp[i] -= fd2;
                    mp[j] += fd2;
                    let mut mm = xi.clone();
                    mm[i] -= fd2;
                    mm[j] -= fd2;
                    let dd = (g.value(&pp) - g.value(&pm) - g.value(&mp) + g.value(&mm))
                        / (4.0 * fd2 * fd2);
                    let rel = (dd - point.hess_a[i][j]).abs() / (1.0 + point.hess_a[i][j].abs());
                    worst_fd = worst_fd.max(rel);
                }
            }
            // Newton round trip
            let x = g.grad(&xi);
            let back = inverse_legendre(g, &x).unwrap();
            let err: f64 = back
                .iter()
                .zip(&xi)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            worst_rt = worst_rt.max(err);
        }
    }
    assert!(worst_fd <= 1e-6, "finite difference residual {worst_fd}");
    assert!(worst_rt <= 1e-10, "round trip residual {worst_rt}");
    // Hessian factorization sides agree on a regular point
    let dc = diagram_context("AI:A1").unwrap();
    let (_, _, res) = hessian_factorization_check(&quartic, &[1.3], &dc.geom).unwrap();
    assert!(res <= 1e-10);
    println!(
        "criterion 11: PASS (FD residual {worst_fd:.2e} <= 1e-6, Newton round trip {worst_rt:.2e} <= 1e-10)"
    );
    budget(start.elapsed(), 5.0, "criterion 11");
}

#[test]
fn criterion_12_reduction_bookkeeping() {
    let start = Instant::now();
    let dc = diagram_context("AI:A1").unwrap();
    let lambdas = dc.rrs.spherical_weights(8);
    let (rows, _total) = reduction_dims(&lambdas, &dc.rrs).unwrap();
    for row in &rows {
        assert!(row.regular, "level {:?} touches a wall", row.level.fw);
        let d = dc.base().weyl_dimension(&row.lambda).unwrap();
        assert_eq!(row.dim, d, "dimension mismatch at {:?}", row.lambda.fw);
    }
    println!(
        "criterion 12: PASS ({} Bohr-Sommerfeld levels regular, dims match the Weyl formula)",
        rows.len()
    );
    budget(start.elapsed(), 1.0, "criterion 12");
}

fn check_suite_context(name: &str) -> DiagramContext {
    diagram_context(name).unwrap()
}

#[test]
fn suite_contexts_all_build() {
    for name in SUITE {
        let dc = check_suite_context(name);
        assert!(dc.rrs.rank_l >= 1);
    }
}
