//! The quantum side: isotypic section bases and their transport along
//! Mabuchi rays, the large-time norm integral on the dominant chamber,
//! Fourier harmonics for the invariant torus, moment-map regularity, and the
//! reduction bookkeeping for the limit polarization.

use num_complex::Complex64;
use num_traits::Zero;

use crate::convexg::InvariantConvexFn;
use crate::linalg::{expm, CMat};
use crate::quad::{adaptive, QuadConfig};
use crate::repmat::{
    build_irrep, spherical_vector_for_diagram, IrrepMatrices, Precision, SphericalVector,
};
use crate::rootsys::{build_root_system_str, WeightVec};
use crate::satake::{DiagramContext, RestrictedRootSystem};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Isotypic sections and coherent state transport
// ---------------------------------------------------------------------------

/// Frame a section lives in along the extended quantum bundle.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameTag {
    Schrodinger,
    Kahler { h_spec: String, t: f64 },
    Limit,
}

/// A basis element of one isotypic component, tagged by its frame.
#[derive(Debug, Clone)]
pub struct IsotypicSection {
    pub lambda: WeightVec,
    pub dual_vector: Vec<Complex64>,
    pub frame: FrameTag,
}

impl IsotypicSection {
    pub fn new(lambda: WeightVec, dual_vector: Vec<Complex64>, frame: FrameTag) -> Result<Self> {
        if dual_vector.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::Domain("dual vector must be nonzero".into()));
        }
        Ok(IsotypicSection {
            lambda,
            dual_vector,
            frame,
        })
    }

    /// Constructor that also enforces the spherical-weight invariant.
    pub fn validated(
        rrs: &RestrictedRootSystem,
        lambda: WeightVec,
        dual_vector: Vec<Complex64>,
        frame: FrameTag,
    ) -> Result<Self> {
        if !rrs.is_spherical_weight(&lambda) {
            return Err(Error::Domain(format!(
                "{:?} is not a spherical weight",
                lambda.fw
            )));
        }
        IsotypicSection::new(lambda, dual_vector, frame)
    }
}

/// Schrodinger inner product `d_lambda^{-1} delta_{lambda mu} <v*, w*>`.
///
/// The dual-space pairing is the one induced by the anti-linear bijection
/// from the representation space: linear in the first argument.
pub fn schrodinger_inner(
    base: &crate::rootsys::RootSystemData,
    s1: &IsotypicSection,
    s2: &IsotypicSection,
) -> Result<Complex64> {
    if s1.frame != FrameTag::Schrodinger || s2.frame != FrameTag::Schrodinger {
        return Err(Error::Domain(
            "both sections must be in the Schrodinger frame".into(),
        ));
    }
    if s1.lambda != s2.lambda {
        return Ok(Complex64::zero());
    }
    let d = base.weyl_dimension(&s1.lambda)? as f64;
    let dot: Complex64 = s1
        .dual_vector
        .iter()
        .zip(&s2.dual_vector)
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(dot / d)
}

/// Parallel transport of the isotypic frame along a Mabuchi ray: the label
/// data is untouched and only the frame tag advances by `t * h`.
pub fn gcst_transport(
    s: &IsotypicSection,
    h: &InvariantConvexFn,
    t: f64,
) -> Result<IsotypicSection> {
    let spec = h.spec_string();
    let new_frame = match &s.frame {
        FrameTag::Schrodinger => {
            if t < 0.0 {
                return Err(Error::Domain(
                    "the ray from the Schrodinger frame is one-sided (t >= 0)".into(),
                ));
            }
            if t == 0.0 {
                FrameTag::Schrodinger
            } else {
                FrameTag::Kahler { h_spec: spec, t }
            }
        }
        FrameTag::Kahler { h_spec, t: t0 } => {
            if *h_spec != spec {
                return Err(Error::Domain(format!(
                    "transport direction `{spec}` differs from the frame ray `{h_spec}`"
                )));
            }
            let total = t0 + t;
            if total < 0.0 {
                return Err(Error::Domain(
                    "transport would leave the ray (t + t0 < 0)".into(),
                ));
            }
            if total == 0.0 {
                FrameTag::Schrodinger
            } else {
                FrameTag::Kahler {
                    h_spec: spec,
                    t: total,
                }
            }
        }
        FrameTag::Limit => {
            if t != 0.0 {
                return Err(Error::Domain(
                    "no transport away from the limit frame".into(),
                ));
            }
            FrameTag::Limit
        }
    };
    Ok(IsotypicSection {
        lambda: s.lambda.clone(),
        dual_vector: s.dual_vector.clone(),
        frame: new_frame,
    })
}

// ---------------------------------------------------------------------------
// Scalar densities on the chamber
// ---------------------------------------------------------------------------

/// ln(sinh(y)/y) for y >= 0, stable for both tiny and huge arguments.
fn ln_sinhc(y: f64) -> f64 {
    if y < 1e-4 {
        let y2 = y * y;
        (1.0 + y2 / 6.0 + y2 * y2 / 120.0).ln()
    } else {
        y + (-(-2.0 * y).exp()).ln_1p() - (2.0 * y).ln()
    }
}

/// Half-form density `eta(H) = prod (sinh(2 beta(H)) / (2 beta(H)))^{m/2}`.
pub fn eta_density(h_vec: &[f64], geom: &crate::satake::ChamberGeometry) -> f64 {
    let mut acc = 0.0;
    for i in 0..geom.betas.len() {
        let y = 2.0 * geom.beta_eval(i, h_vec).abs();
        acc += geom.mults[i] as f64 * 0.5 * ln_sinhc(y);
    }
    acc.exp()
}

/// `Phat(xi) = prod beta(xi)^{m_beta}` over the distinct restricted roots.
pub fn phat(xi: &[f64], geom: &crate::satake::ChamberGeometry) -> f64 {
    geom.phat(xi)
}

/// `P(lambda + rho_hat) = prod <beta, lambda + rho_hat>` (unit exponents).
pub fn p_upper(lambda: &WeightVec, rrs: &RestrictedRootSystem) -> f64 {
    let shifted = lambda.add(&rrs.rho_hat);
    (0..rrs.restricted_positive.len())
        .map(|i| crate::satake::rat_to_f64(rrs.pair_beta(&shifted, i)))
        .product()
}

/// `Phat(lambda + rho_hat)` evaluated exactly and converted once.
pub fn phat_shifted(lambda: &WeightVec, rrs: &RestrictedRootSystem) -> f64 {
    let shifted = lambda.add(&rrs.rho_hat);
    (0..rrs.restricted_positive.len())
        .map(|i| {
            crate::satake::rat_to_f64(rrs.pair_beta(&shifted, i)).powi(rrs.multiplicities[i] as i32)
        })
        .product()
}

// ---------------------------------------------------------------------------
// Norm-flow integral
// ---------------------------------------------------------------------------

/// Per-weight data needed by the norm integrand.
#[derive(Debug, Clone)]
pub struct NormContext {
    pub lambda: WeightVec,
    pub d_lambda: f64,
    pub c_value: f64,
    /// sigma-fixed weight profile of the spherical vector in chamber coords.
    pub profile: Vec<(Vec<f64>, f64)>,
    pub lambda_coords: Vec<f64>,
    /// lambda + rho_hat in chamber coordinates.
    pub p_coords: Vec<f64>,
    pub phat_p: f64,
}

/// Build the norm context for one spherical weight.
pub fn norm_context(
    dc: &DiagramContext,
    lambda: &WeightVec,
    precision: Precision,
) -> Result<NormContext> {
    if !dc.rrs.is_spherical_weight(lambda) {
        return Err(Error::Domain(format!(
            "{:?} is not a spherical weight",
            lambda.fw
        )));
    }
    let base = dc.base();
    let rep = build_irrep(base, lambda)?;
    let sv = spherical_vector_for_diagram(&dc.diagram, &rep, precision)?;
    let profile = sv.profile_coords(base, &dc.geom);
    let p = lambda.add(&dc.rrs.rho_hat);
    Ok(NormContext {
        lambda: lambda.clone(),
        d_lambda: rep.dim as f64,
        c_value: sv.c_function()?,
        profile,
        lambda_coords: dc.geom.weight_coords(base, lambda),
        p_coords: dc.geom.weight_coords(base, &p),
        phat_p: phat_shifted(lambda, &dc.rrs),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Log of the chamber integrand of the half-form norm at geodesic time t.
///
/// Assembled from the weight-profile trace, the double Kahler-potential
/// decay, the half-form density at `t grad h`, the Hessian determinant
/// factorization and the chamber Jacobian `Phat`; the overall scale constants
/// of the measure are fixed to one.
fn log_integrand(
    ctx: &NormContext,
    geom: &crate::satake::ChamberGeometry,
    h: &InvariantConvexFn,
    t: f64,
    xi: &[f64],
) -> f64 {
    let mut ln_phat = 0.0;
    for i in 0..geom.betas.len() {
        let b = geom.beta_eval(i, xi);
        if b <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ln_phat += geom.mults[i] as f64 * b.ln();
    }
    let q = dot(xi, xi);
    let h1 = h.d1_q(q);
    let grad: Vec<f64> = xi.iter().map(|&x| 2.0 * h1 * x).collect();

    // trace reduced to the weight profile, anchored at the highest weight
    let lam_y = dot(&ctx.lambda_coords, &grad);
    let mut trace_rest = 0.0f64;
    for (nu, w) in &ctx.profile {
        trace_rest += w * (2.0 * t * (dot(nu, &grad) - lam_y)).exp();
    }
    let ln_trace = 2.0 * t * lam_y + trace_rest.ln();

    // eta(t grad h)
    let mut ln_eta = 0.0;
    for i in 0..geom.betas.len() {
        let y = 2.0 * t * geom.beta_eval(i, &grad);
        ln_eta += geom.mults[i] as f64 * 0.5 * ln_sinhc(y);
    }

    // det(Hess_h|_{s*})^{1/2} via the eigenvalue factorization
    let l = geom.l;
    let h2 = h.d2_q(q);
    let det_a = (2.0 * h1).powi(l as i32 - 1) * (2.0 * h1 + 4.0 * q * h2);
    let sum_mult: usize = geom.mults.iter().sum();
    let ln_det_half = 0.5 * (det_a.ln() + sum_mult as f64 * (2.0 * h1).ln());

    let kappa = 2.0 * q * h1 - h.eval_q(q);
    let p_sq = dot(&ctx.p_coords, &ctx.p_coords);

    -2.0 * t * h.eval_q(p_sq) + ln_trace - 2.0 * t * kappa
        + ln_eta
        + 0.5 * geom.d as f64 * t.ln()
        + ln_det_half
        + ln_phat
}

/// Half-form norm of the spherical frame section at geodesic time t along the
/// ray generated by h, reduced to an integral over the dominant chamber.
///
/// The integrand follows the Laplace normal form of the large-time analysis
/// with every undetermined measure constant set to one; the Kahler-potential
/// decay enters with the weight that balances the trace growth so that the
/// integral localizes at `lambda + rho_hat`.
pub fn kahler_norm(
    dc: &DiagramContext,
    ctx: &NormContext,
    h: &InvariantConvexFn,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    if h.quadratic_coeff() <= 0.0 {
        return Err(Error::Domain(
            "the ray generator must be uniformly convex".into(),
        ));
    }
    if t <= 0.0 {
        return Err(Error::Domain("geodesic time must be positive".into()));
    }
    let geom = &dc.geom;
    let l = geom.l;
    if l > 2 {
        return Err(Error::Resource(
            "norm quadrature is implemented for restricted rank <= 2".into(),
        ));
    }

    // peak of the integrand sits at lambda + rho_hat
    let ln_peak = {
        let v = log_integrand(ctx, geom, h, t, &ctx.p_coords);
        if !v.is_finite() {
            return Err(Error::Numerical("integrand peak is not finite".into()));
        }
        v
    };

    let p_norm = dot(&ctx.p_coords, &ctx.p_coords).sqrt();
    let c1 = h.quadratic_coeff();
    let mut radius = 2.0 * p_norm + 8.0 / (t * c1).sqrt() + 4.0;
    let ln_tail = ln_peak + (1e-14f64).ln();
    let mut certified = false;
    for _ in 0..12 {
        if tail_certified(ctx, geom, h, t, radius, ln_tail) {
            certified = true;
            break;
        }
        radius *= 1.6;
    }
    if !certified {
        return Err(Error::Numerical(
            "could not certify the quadrature truncation radius".into(),
        ));
    }

    let jac = geom.cone_jacobian();
    let value = match l {
        1 => {
            let mut f = |u: f64| {
                let xi = geom.cone_point(&[u]);
                (log_integrand(ctx, geom, h, t, &xi) - ln_peak).exp()
            };
            adaptive(&mut f, 0.0, radius, cfg)?.value
        }
        2 => {
            let inner_cfg = QuadConfig {
                rel_tol: cfg.rel_tol * 0.25,
                ..*cfg
            };
            let failure = std::cell::RefCell::new(None);
            let mut outer = |u1: f64| {
                let mut inner = |u2: f64| {
                    let xi = geom.cone_point(&[u1, u2]);
                    (log_integrand(ctx, geom, h, t, &xi) - ln_peak).exp()
                };
                match adaptive(&mut inner, 0.0, radius, &inner_cfg) {
                    Ok(r) => r.value,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            };
            let out = adaptive(&mut outer, 0.0, radius, cfg)?.value;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            out
        }
        _ => unreachable!(),
    };
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::Numerical(format!(
            "norm integral degenerated: {value}"
        )));
    }
    Ok(value * ln_peak.exp() * jac / ctx.d_lambda)
}

/// Sample the truncation boundary: the integrand must sit below the tail
/// threshold and keep decaying outward along every sampled ray.
fn tail_certified(
    ctx: &NormContext,
    geom: &crate::satake::ChamberGeometry,
    h: &InvariantConvexFn,
    t: f64,
    radius: f64,
    ln_tail: f64,
) -> bool {
    let samples = 33usize;
    let l = geom.l;
    let check_point = |u: &[f64]| -> bool {
        let xi = geom.cone_point(u);
        let v = log_integrand(ctx, geom, h, t, &xi);
        if v > ln_tail {
            return false;
        }
        let u_out: Vec<f64> = u.iter().map(|&x| x * 1.25).collect();
        let xi_out = geom.cone_point(&u_out);
        let v_out = log_integrand(ctx, geom, h, t, &xi_out);
        v_out <= v || v_out <= ln_tail
    };
    match l {
        1 => check_point(&[radius]),
        2 => {
            for k in 0..samples {
                let s = radius * k as f64 / (samples - 1) as f64;
                if !check_point(&[radius, s]) || !check_point(&[s, radius]) {
                    return false;
                }
            }
            true
        }
        _ => false,
    }
}

/// Norm divided by its large-time target: the ratio `R(t, lambda)`.
pub fn norm_ratio(
    dc: &DiagramContext,
    ctx: &NormContext,
    h: &InvariantConvexFn,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    let raw = kahler_norm(dc, ctx, h, t, cfg)?;
    Ok(raw / norm_target(ctx))
}

/// `Phat(lambda+rho_hat)^{1/2} c(lambda+rho_hat) |sigma^0|^2`.
pub fn norm_target(ctx: &NormContext) -> f64 {
    ctx.phat_p.sqrt() * ctx.c_value / ctx.d_lambda
}

// ---------------------------------------------------------------------------
// Norm report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NormFlags {
    pub lambda_independent_limit: bool,
    pub quadratic_exact: bool,
    pub nonunitary_witness: bool,
    pub max_limit_ratio_deviation: f64,
    pub max_quadratic_deviation: f64,
    pub gq_factor_spread: f64,
}

/// Tabulated norm flow over a (lambda, t) grid.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub diagram: String,
    pub h_spec: String,
    pub lambdas: Vec<WeightVec>,
    pub t_grid: Vec<f64>,
    /// raw[i][j] = kahler_norm(lambda_i, t_j)
    pub raw: Vec<Vec<f64>>,
    /// ratios[i][j] = raw[i][j] / target_i
    pub ratios: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub flags: NormFlags,
}

/// Run the norm flow for a list of spherical weights over a time grid.
///
/// The first weight in the list is the baseline for the limit-ratio flag
/// (conventionally lambda = 0).
pub fn asymptotic_report(
    dc: &DiagramContext,
    lambdas: &[WeightVec],
    h: &InvariantConvexFn,
    t_grid: &[f64],
    cfg: &QuadConfig,
    precision: Precision,
) -> Result<NormReport> {
    if lambdas.is_empty() || t_grid.is_empty() {
        return Err(Error::Domain("empty lambda list or t grid".into()));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) || t_grid[0] <= 0.0 {
        return Err(Error::Domain(
            "t grid must be positive and increasing".into(),
        ));
    }
    let contexts: Vec<NormContext> = lambdas
        .iter()
        .map(|lam| norm_context(dc, lam, precision))
        .collect::<Result<_>>()?;
    let targets: Vec<f64> = contexts.iter().map(norm_target).collect();
    let mut raw = Vec::with_capacity(lambdas.len());
    for ctx in &contexts {
        let mut row = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            row.push(kahler_norm(dc, ctx, h, t, cfg)?);
        }
        raw.push(row);
    }
    let ratios: Vec<Vec<f64>> = raw
        .iter()
        .zip(&targets)
        .map(|(row, &tgt)| row.iter().map(|&v| v / tgt).collect())
        .collect();

    let last = t_grid.len() - 1;
    let baseline = ratios[0][last];
    let max_limit_ratio_deviation = ratios
        .iter()
        .map(|row| (row[last] / baseline - 1.0).abs())
        .fold(0.0, f64::max);
    let max_quadratic_deviation = ratios
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| (v / row[0] - 1.0).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let gq_factors: Vec<f64> = contexts
        .iter()
        .map(|ctx| gq_correction_factor(ctx))
        .collect();
    let gq_factor_spread = {
        let lo = gq_factors.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = gq_factors.iter().copied().fold(0.0, f64::max);
        if lo > 0.0 {
            hi / lo - 1.0
        } else {
            f64::INFINITY
        }
    };
    let flags = NormFlags {
        lambda_independent_limit: max_limit_ratio_deviation < 0.02,
        quadratic_exact: h.is_quadratic() && max_quadratic_deviation <= 1e-6,
        nonunitary_witness: gq_factor_spread > 0.10,
        max_limit_ratio_deviation,
        max_quadratic_deviation,
        gq_factor_spread,
    };
    Ok(NormReport {
        diagram: dc.diagram.name.clone(),
        h_spec: h.spec_string(),
        lambdas: lambdas.to_vec(),
        t_grid: t_grid.to_vec(),
        raw,
        ratios,
        targets,
        flags,
    })
}

/// Representation-dependent correction `Phat(lambda+rho_hat)^{-1/2} c^{-1}`.
pub fn gq_correction_factor(ctx: &NormContext) -> f64 {
    1.0 / (ctx.phat_p.sqrt() * ctx.c_value)
}

/// The correction factor together with the induced basis norm
/// `(Phat^{1/2} c / d)^{-1/2}`.
pub fn gq_correction(ctx: &NormContext) -> (f64, f64) {
    let factor = gq_correction_factor(ctx);
    let gq_norm = (ctx.phat_p.sqrt() * ctx.c_value / ctx.d_lambda).powf(-0.5);
    (factor, gq_norm)
}

// ---------------------------------------------------------------------------
// Section evaluation and Fourier harmonics
// ---------------------------------------------------------------------------

/// An anti-Hermitian algebra element expressed over the simple generators.
#[derive(Debug, Clone, Default)]
pub struct AlgebraElement {
    /// coefficients of i H_j
    pub ih: Vec<f64>,
    /// coefficients of E_j - F_j
    pub re_ef: Vec<f64>,
    /// coefficients of i (E_j + F_j)
    pub im_ef: Vec<f64>,
}

/// Group element given as a word of exponentials exp(X_1) ... exp(X_k).
#[derive(Debug, Clone, Default)]
pub struct GroupWord {
    pub letters: Vec<AlgebraElement>,
}

/// Evaluation setup for one spherical representation.
pub struct SectionSetup {
    pub rep: IrrepMatrices,
    pub sv: SphericalVector,
    /// chamber coordinates per basis weight (for sigma-fixed components).
    nu_coords: Vec<Vec<f64>>,
    /// integer frequencies against the simple restricted coroots.
    frequencies: Vec<Vec<i64>>,
}

pub fn section_setup(
    dc: &DiagramContext,
    lambda: &WeightVec,
    precision: Precision,
) -> Result<SectionSetup> {
    let base = dc.base();
    let rep = build_irrep(base, lambda)?;
    let sv = spherical_vector_for_diagram(&dc.diagram, &rep, precision)?;
    let geom = &dc.geom;
    let nu_coords: Vec<Vec<f64>> = rep
        .basis_weights
        .iter()
        .map(|w| geom.weight_coords(base, w))
        .collect();
    // frequencies against the simple restricted coroots
    let simple = geom.simple_betas.clone();
    let simple_norm_sq: Vec<f64> = simple.iter().map(|b| dot(b, b)).collect();
    let mut frequencies = Vec::with_capacity(rep.dim);
    for nu in &nu_coords {
        let mut f = Vec::with_capacity(geom.l);
        for (b, &n2) in simple.iter().zip(&simple_norm_sq) {
            let v = 2.0 * dot(nu, b) / n2;
            let r = v.round();
            f.push(r as i64);
        }
        frequencies.push(f);
    }
    Ok(SectionSetup {
        rep,
        sv,
        nu_coords,
        frequencies,
    })
}

impl SectionSetup {
    fn pi_word(&self, word: &GroupWord) -> CMat {
        let dim = self.rep.dim;
        let mut acc = CMat::identity(dim);
        for letter in &word.letters {
            let mut x = CMat::zeros(dim, dim);
            for (j, &c) in letter.ih.iter().enumerate() {
                if c != 0.0 {
                    for (i, hv) in self.rep.cartan_diag(j).iter().enumerate() {
                        x[(i, i)] += Complex64::new(0.0, c * hv);
                    }
                }
            }
            for (j, &c) in letter.re_ef.iter().enumerate() {
                if c != 0.0 {
                    let m = self.rep.raising[j]
                        .add(&self.rep.lowering[j].scale(Complex64::new(-1.0, 0.0)));
                    x = x.add(&m.to_dense().scale(Complex64::new(c, 0.0)));
                }
            }
            for (j, &c) in letter.im_ef.iter().enumerate() {
                if c != 0.0 {
                    let m = self.rep.raising[j].add(&self.rep.lowering[j]);
                    x = x.add(&m.to_dense().scale(Complex64::new(0.0, c)));
                }
            }
            acc = acc.mul(&expm(&x));
        }
        acc
    }

    /// Toral multipliers e^{<nu_i, Y>} applied to the spherical vector.
    fn toral_applied(&self, y: &[f64]) -> Vec<Complex64> {
        self.sv
            .coords
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c.norm_sqr() == 0.0 {
                    Complex64::zero()
                } else {
                    c * dot(&self.nu_coords[i], y).exp()
                }
            })
            .collect()
    }
}

/// Holomorphic section value `<v*, pi(x) exp(d pi(grad g_t)) v^K>` in the
/// real toral model.
pub fn evaluate_section(
    setup: &SectionSetup,
    g_t: &InvariantConvexFn,
    word: &GroupWord,
    xi: &[f64],
    v_star: &[Complex64],
) -> Complex64 {
    let y = g_t.grad(xi);
    let w = setup.toral_applied(&y);
    let u = setup.pi_word(word).matvec(&w);
    v_star.iter().zip(&u).map(|(a, b)| a * b).sum()
}

/// `e^{-<lambda, grad g_t>} f^{g_t}`, the scaled value converging to the
/// limit section as t grows.
pub fn evaluate_section_rescaled(
    setup: &SectionSetup,
    dc: &DiagramContext,
    g_t: &InvariantConvexFn,
    word: &GroupWord,
    xi: &[f64],
    v_star: &[Complex64],
) -> Complex64 {
    let y = g_t.grad(xi);
    let lam_coords = dc.geom.weight_coords(dc.base(), &setup.rep.lambda);
    let factor = (-dot(&lam_coords, &y)).exp();
    evaluate_section(setup, g_t, word, xi, v_star) * factor
}

/// Limit section value `tr(pi(x) P_lambda v^K (x) v*)`.
pub fn limit_section_value(
    setup: &SectionSetup,
    word: &GroupWord,
    v_star: &[Complex64],
) -> Complex64 {
    let p = setup.rep.weight_projection(&setup.rep.lambda);
    let w = p.matvec(&setup.sv.coords);
    let u = setup.pi_word(word).matvec(&w);
    v_star.iter().zip(&u).map(|(a, b)| a * b).sum()
}

/// The P_nu-projected harmonic of a section value.
pub fn fourier_harmonic(
    setup: &SectionSetup,
    g_t: &InvariantConvexFn,
    word: &GroupWord,
    xi: &[f64],
    v_star: &[Complex64],
    nu: &WeightVec,
) -> Complex64 {
    let y = g_t.grad(xi);
    let p = setup.rep.weight_projection(nu);
    let w = p.matvec(&setup.toral_applied(&y));
    let u = setup.pi_word(word).matvec(&w);
    v_star.iter().zip(&u).map(|(a, b)| a * b).sum()
}

/// The same harmonic computed by equispaced quadrature over the invariant
/// torus (exact for the integer character frequencies involved).
pub fn fourier_harmonic_torus_average(
    setup: &SectionSetup,
    dc: &DiagramContext,
    g_t: &InvariantConvexFn,
    word: &GroupWord,
    xi: &[f64],
    v_star: &[Complex64],
    nu: &WeightVec,
) -> Result<Complex64> {
    let geom = &dc.geom;
    // regularity of the evaluation point
    for i in 0..geom.betas.len() {
        if geom.beta_eval(i, xi) <= 1e-12 {
            return Err(Error::Domain(
                "harmonics need a regular chamber point".into(),
            ));
        }
    }
    let l = geom.l;
    // frequencies of the target weight
    let nu_c = geom.weight_coords(dc.base(), nu);
    let simple = &geom.simple_betas;
    let target: Vec<i64> = simple
        .iter()
        .map(|b| {
            let v = 2.0 * dot(&nu_c, b) / dot(b, b);
            let r = v.round();
            if (v - r).abs() > 1e-9 {
                // not a sigma-fixed lattice weight; its harmonic vanishes
                i64::MAX
            } else {
                r as i64
            }
        })
        .collect();
    if target.contains(&i64::MAX) {
        return Ok(Complex64::zero());
    }
    let span = setup
        .frequencies
        .iter()
        .flat_map(|f| f.iter().map(|&x| x.abs()))
        .chain(target.iter().map(|&x| x.abs()))
        .max()
        .unwrap_or(0);
    let n = (2 * span + 2) as usize;

    // z_i = (v*^T pi(x))_i (D w)_i
    let y = g_t.grad(xi);
    let dw = setup.toral_applied(&y);
    let pi = setup.pi_word(word);
    let dim = setup.rep.dim;
    let mut z = vec![Complex64::zero(); dim];
    for i in 0..dim {
        let mut row = Complex64::zero();
        for (j, vs) in v_star.iter().enumerate() {
            row += vs * pi[(j, i)];
        }
        z[i] = row * dw[i];
    }

    // average over the l-torus
    let mut grid = vec![0usize; l];
    let mut total = Complex64::zero();
    loop {
        let theta: Vec<f64> = grid
            .iter()
            .map(|&k| 2.0 * std::f64::consts::PI * k as f64 / n as f64)
            .collect();
        let chi_phase: f64 = target
            .iter()
            .zip(&theta)
            .map(|(&f, &th)| f as f64 * th)
            .sum();
        let chi = Complex64::new(0.0, chi_phase).exp();
        let mut fval = Complex64::zero();
        for i in 0..dim {
            if z[i].norm_sqr() == 0.0 {
                continue;
            }
            let ph: f64 = setup.frequencies[i]
                .iter()
                .zip(&theta)
                .map(|(&f, &th)| f as f64 * th)
                .sum();
            fval += z[i] * Complex64::new(0.0, -ph).exp();
        }
        total += chi * fval;
        // advance the grid odometer
        let mut carry = 0usize;
        loop {
            if carry == l {
                return Ok(total / (n as f64).powi(l as i32));
            }
            grid[carry] += 1;
            if grid[carry] < n {
                break;
            }
            grid[carry] = 0;
            carry += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Moment map and reduction bookkeeping
// ---------------------------------------------------------------------------

/// Point of the reduced phase space recorded through its toral data.
#[derive(Debug, Clone)]
pub struct MomentPoint {
    /// Group part; the invariant moment value does not depend on it.
    pub x: GroupWord,
    pub xi: WeightVec,
}

/// Invariant moment value (sweep to the dominant chamber) and regularity.
pub fn moment_and_regularity(
    p: &MomentPoint,
    rrs: &RestrictedRootSystem,
) -> Result<(WeightVec, bool)> {
    let base = rrs.base();
    let (dominant, _word) = base.sweep(&p.xi);
    if !rrs.sigma.is_fixed(&dominant) {
        return Err(Error::Domain(
            "moment value does not lie in the sigma-fixed cone".into(),
        ));
    }
    let regular = rrs.is_regular(&dominant);
    Ok((dominant, regular))
}

/// One row of the reduction table.
#[derive(Debug, Clone)]
pub struct ReductionRow {
    pub lambda: WeightVec,
    pub level: WeightVec,
    pub regular: bool,
    pub dim: u128,
}

/// Bohr–Sommerfeld levels, their regularity, and the dimensions of the limit
/// isotypic spaces.
pub fn reduction_dims(
    lambdas: &[WeightVec],
    rrs: &RestrictedRootSystem,
) -> Result<(Vec<ReductionRow>, u128)> {
    let base = rrs.base();
    let mut rows = Vec::with_capacity(lambdas.len());
    let mut total = 0u128;
    for lam in lambdas {
        if !rrs.is_spherical_weight(lam) {
            return Err(Error::Domain(format!("{:?} is not spherical", lam.fw)));
        }
        let level = lam.add(&rrs.rho_hat);
        let regular = rrs.is_regular(&level);
        let dim = base.weyl_dimension(lam)?;
        total += dim;
        rows.push(ReductionRow {
            lambda: lam.clone(),
            level,
            regular,
            dim,
        });
    }
    Ok((rows, total))
}

// ---------------------------------------------------------------------------
// Weyl orthogonality quadrature
// ---------------------------------------------------------------------------

/// Numerically integrate `conj(pi_ij) pi_kl` over SU(2) in Euler angles and
/// return the maximum deviation from `d^{-1} delta delta`.
pub fn su2_weyl_orthogonality_residual(m: i128, n_nodes: usize) -> Result<f64> {
    let rs = build_root_system_str("A1")?;
    let rep = build_irrep(&rs, &WeightVec::from_ints(&[m]))?;
    let d = rep.dim;
    let h_diag = rep.cartan_diag(0);
    let em_f = rep.raising[0].add(&rep.lowering[0].scale(Complex64::new(-1.0, 0.0)));
    let em_f = em_f.to_dense();

    let theta_nodes = crate::quad::gl_nodes(n_nodes);
    let mut accum = CMat::zeros(d * d, d * d);
    let two_pi = 2.0 * std::f64::consts::PI;
    for &(x, w_th) in &theta_nodes {
        // map [-1, 1] -> [0, pi]
        let theta = 0.5 * std::f64::consts::PI * (x + 1.0);
        let weight_theta = w_th * 0.5 * std::f64::consts::PI * theta.sin() / 2.0;
        let e_theta = expm(&em_f.scale(Complex64::new(-theta / 2.0, 0.0)));
        for kphi in 0..n_nodes {
            let phi = two_pi * kphi as f64 / n_nodes as f64;
            for kpsi in 0..n_nodes {
                let psi = 2.0 * two_pi * kpsi as f64 / n_nodes as f64;
                let weight = weight_theta / (n_nodes * n_nodes) as f64;
                // pi = D(phi) E(theta) D(psi)
                let mut pi_vec = vec![Complex64::zero(); d * d];
                for i in 0..d {
                    let dphi = Complex64::new(0.0, -phi * h_diag[i] / 2.0).exp();
                    for j in 0..d {
                        let dpsi = Complex64::new(0.0, -psi * h_diag[j] / 2.0).exp();
                        pi_vec[i * d + j] = dphi * e_theta[(i, j)] * dpsi;
                    }
                }
                for a in 0..d * d {
                    let ca = pi_vec[a].conj() * weight;
                    if ca.norm_sqr() == 0.0 {
                        continue;
                    }
                    for b in 0..d * d {
                        accum[(a, b)] += ca * pi_vec[b];
                    }
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l2 in 0..d {
                    let got = accum[(i * d + j, k * d + l2)];
                    let expect = if i == k && j == l2 {
                        1.0 / d as f64
                    } else {
                        0.0
                    };
                    worst = worst.max((got - Complex64::new(expect, 0.0)).norm());
                }
            }
        }
    }
    Ok(worst)
}
