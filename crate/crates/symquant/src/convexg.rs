//! Invariant uniformly convex functions on the dual algebra: radial
//! polynomials in q = <xi, xi>, their Legendre machinery, and the
//! large-time limit of the holomorphic frame matrix.
//!
//! Everything operates in orthonormal chamber coordinates supplied by
//! [`crate::satake::ChamberGeometry`].

use num_complex::Complex64;

use crate::linalg::{f64_solve, CMat};
use crate::satake::ChamberGeometry;
use crate::{Error, Result};

/// `g(xi) = sum c_k q^k` with `q = |xi|^2`, `c_1 > 0`, `c_k >= 0`.
///
/// Radial polynomials in the invariant quadratic are automatically
/// Ad*-invariant and compatible with the symmetric-space involution, and the
/// family is closed under `g + t h`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantConvexFn {
    /// (power, coefficient), powers strictly increasing, all >= 1.
    pub terms: Vec<(u32, f64)>,
}

impl InvariantConvexFn {
    pub fn new(mut terms: Vec<(u32, f64)>) -> Result<Self> {
        terms.retain(|&(_, c)| c != 0.0);
        terms.sort_by_key(|&(k, _)| k);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Domain("duplicate power in convex spec".into()));
            }
        }
        for &(k, c) in &terms {
            if k == 0 {
                return Err(Error::Domain("constant terms are not allowed".into()));
            }
            if c < 0.0 || !c.is_finite() {
                return Err(Error::Domain(format!(
                    "coefficient {c} of q^{k} must be >= 0"
                )));
            }
        }
        let c1 = terms
            .iter()
            .find(|&&(k, _)| k == 1)
            .map(|&(_, c)| c)
            .unwrap_or(0.0);
        if c1 <= 0.0 {
            return Err(Error::Domain(
                "uniform convexity requires a positive quadratic term".into(),
            ));
        }
        Ok(InvariantConvexFn { terms })
    }

    /// The zero function. Not uniformly convex; accepted only where a ray may
    /// start at the vertical polarization.
    pub fn zero() -> Self {
        InvariantConvexFn { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn quadratic_coeff(&self) -> f64 {
        self.terms
            .iter()
            .find(|&&(k, _)| k == 1)
            .map(|&(_, c)| c)
            .unwrap_or(0.0)
    }

    pub fn is_quadratic(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 1
    }

    /// Parse a spec string such as `"0.5*q + 0.25*q^2"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let cleaned: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Domain("empty convex spec".into()));
        }
        let mut terms = Vec::new();
        for piece in cleaned.split('+') {
            if piece.is_empty() {
                return Err(Error::Domain(format!("bad convex spec `{spec}`")));
            }
            let (coeff_str, power_str) = match piece.find('*') {
                Some(i) => (&piece[..i], &piece[i + 1..]),
                None => ("1", piece),
            };
            let coeff: f64 = coeff_str
                .parse()
                .map_err(|_| Error::Domain(format!("bad coefficient `{coeff_str}`")))?;
            let power: u32 = if power_str == "q" {
                1
            } else if let Some(p) = power_str.strip_prefix("q^") {
                p.parse()
                    .map_err(|_| Error::Domain(format!("bad power `{power_str}`")))?
            } else {
                return Err(Error::Domain(format!(
                    "bad term `{piece}` (expected c*q^k)"
                )));
            };
            terms.push((power, coeff));
        }
        InvariantConvexFn::new(terms)
    }

    pub fn spec_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|&(k, c)| {
                if k == 1 {
                    format!("{c}*q")
                } else {
                    format!("{c}*q^{k}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// g as a function of q.
    pub fn eval_q(&self, q: f64) -> f64 {
        self.terms.iter().map(|&(k, c)| c * q.powi(k as i32)).sum()
    }

    /// dg/dq.
    pub fn d1_q(&self, q: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(k, c)| c * k as f64 * q.powi(k as i32 - 1))
            .sum()
    }

    /// d^2 g / dq^2.
    pub fn d2_q(&self, q: f64) -> f64 {
        self.terms
            .iter()
            .filter(|&&(k, _)| k >= 2)
            .map(|&(k, c)| c * (k * (k - 1)) as f64 * q.powi(k as i32 - 2))
            .sum()
    }

    pub fn value(&self, xi: &[f64]) -> f64 {
        self.eval_q(norm_sq(xi))
    }

    /// Gradient, identified with a covector through the invariant form.
    pub fn grad(&self, xi: &[f64]) -> Vec<f64> {
        let s = 2.0 * self.d1_q(norm_sq(xi));
        xi.iter().map(|&x| s * x).collect()
    }

    /// Full Hessian matrix in the orthonormal coordinates.
    pub fn hess(&self, xi: &[f64]) -> Vec<Vec<f64>> {
        let q = norm_sq(xi);
        let a = 2.0 * self.d1_q(q);
        let b = 4.0 * self.d2_q(q);
        let m = xi.len();
        let mut out = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                out[i][j] = if i == j { a } else { 0.0 } + b * xi[i] * xi[j];
            }
        }
        out
    }

    /// Kahler potential kappa = <xi, grad> - g.
    pub fn kappa(&self, xi: &[f64]) -> f64 {
        let q = norm_sq(xi);
        2.0 * q * self.d1_q(q) - self.eval_q(q)
    }

    /// `g + t h` within the radial family.
    pub fn add_scaled(&self, other: &InvariantConvexFn, t: f64) -> InvariantConvexFn {
        let mut map: std::collections::BTreeMap<u32, f64> = Default::default();
        for &(k, c) in &self.terms {
            *map.entry(k).or_insert(0.0) += c;
        }
        for &(k, c) in &other.terms {
            *map.entry(k).or_insert(0.0) += t * c;
        }
        InvariantConvexFn {
            terms: map.into_iter().filter(|&(_, c)| c != 0.0).collect(),
        }
    }
}

fn norm_sq(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

/// Evaluation record of the Legendre data at one point.
#[derive(Debug, Clone)]
pub struct LegendrePoint {
    pub xi: Vec<f64>,
    pub grad: Vec<f64>,
    pub hess_a: Vec<Vec<f64>>,
    pub kappa: f64,
}

/// Gradient, Hessian and Kahler potential at a toral point.
pub fn grad_hess(g: &InvariantConvexFn, xi: &[f64]) -> LegendrePoint {
    LegendrePoint {
        xi: xi.to_vec(),
        grad: g.grad(xi),
        hess_a: g.hess(xi),
        kappa: g.kappa(xi),
    }
}

pub fn kahler_potential(g: &InvariantConvexFn, xi: &[f64]) -> f64 {
    g.kappa(xi)
}

/// Newton inversion of the Legendre map: find xi with grad g(xi) = x.
///
/// Newton steps on the convex objective g(xi) - <x, xi> with Armijo
/// backtracking; the map is a diffeomorphism, so failures indicate bugs.
pub fn inverse_legendre(g: &InvariantConvexFn, x: &[f64]) -> Result<Vec<f64>> {
    if g.quadratic_coeff() <= 0.0 {
        return Err(Error::Domain(
            "inverse Legendre needs uniform convexity".into(),
        ));
    }
    let c1 = g.quadratic_coeff();
    let mut xi: Vec<f64> = x.iter().map(|&v| v / (2.0 * c1)).collect();
    let objective = |xi: &[f64]| g.value(xi) - dot(x, xi);
    let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    for _ in 0..100 {
        let grad_obj: Vec<f64> = g.grad(&xi).iter().zip(x).map(|(gv, xv)| gv - xv).collect();
        let gnorm = grad_obj.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= 1e-13 * scale {
            break;
        }
        let hess = g.hess(&xi);
        let rhs: Vec<f64> = grad_obj.iter().map(|v| -v).collect();
        let step = f64_solve(&hess, &rhs)
            .ok_or_else(|| Error::Numerical("singular Hessian in Newton".into()))?;
        if gnorm <= 1e-6 * scale {
            // local quadratic phase: objective decrements are below rounding,
            // take the undamped step
            for (a, s) in xi.iter_mut().zip(&step) {
                *a += s;
            }
            continue;
        }
        let f0 = objective(&xi);
        let slope = dot(&grad_obj, &step);
        let mut t = 1.0f64;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = xi.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            if objective(&cand) <= f0 + 1e-4 * t * slope {
                xi = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let residual: f64 = g
        .grad(&xi)
        .iter()
        .zip(x)
        .map(|(gv, xv)| (gv - xv) * (gv - xv))
        .sum::<f64>()
        .sqrt();
    if residual > 1e-10 * scale {
        return Err(Error::Numerical(format!(
            "Newton inversion residual {residual} exceeds tolerance"
        )));
    }
    Ok(xi)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant of the Hessian block on the chamber subspace.
pub fn det_hess_a(h: &InvariantConvexFn, xi: &[f64]) -> f64 {
    det(&h.hess(xi))
}

fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut d = 1.0f64;
    for c in 0..n {
        let (p, mag) = (c..n)
            .map(|i| (i, a[i][c].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if mag < 1e-300 {
            return 0.0;
        }
        if p != c {
            a.swap(c, p);
            d = -d;
        }
        d *= a[c][c];
        for i in (c + 1)..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    d
}

/// Both sides of the Hessian determinant factorization
/// `det Hess_h|_{s*} = [Phat(grad h)/Phat(xi)] det Hess_h|_{a*}`
/// together with their relative deviation. The left side multiplies the
/// off-chamber eigenvalues root by root, the right side uses the grouped
/// products.
pub fn hessian_factorization_check(
    h: &InvariantConvexFn,
    xi: &[f64],
    geom: &ChamberGeometry,
) -> Result<(f64, f64, f64)> {
    let scale = 1.0 + xi.iter().map(|v| v.abs()).fold(0.0, f64::max);
    for i in 0..geom.betas.len() {
        if geom.beta_eval(i, xi).abs() <= 1e-12 * scale {
            return Err(Error::Domain(
                "Hessian factorization needs a regular point (wall pairing vanishes)".into(),
            ));
        }
    }
    let grad = h.grad(xi);
    let det_a = det_hess_a(h, xi);
    let mut lhs = det_a;
    for i in 0..geom.betas.len() {
        let ev = geom.beta_eval(i, &grad) / geom.beta_eval(i, xi);
        for _ in 0..geom.mults[i] {
            lhs *= ev;
        }
    }
    let rhs = geom.phat(&grad) / geom.phat(xi) * det_a;
    let residual = (lhs - rhs).abs() / rhs.abs().max(1e-300);
    Ok((lhs, rhs, residual))
}

/// Off-chamber Hessian eigenvalue of the invariant extension along a
/// restricted-root direction.
pub fn off_chamber_eigenvalue(
    h: &InvariantConvexFn,
    xi: &[f64],
    geom: &ChamberGeometry,
    beta_idx: usize,
) -> f64 {
    let grad = h.grad(xi);
    geom.beta_eval(beta_idx, &grad) / geom.beta_eval(beta_idx, xi)
}

// ---------------------------------------------------------------------------
// Frame limit
// ---------------------------------------------------------------------------

/// Convergence table for the rescaled holomorphic frame matrix.
#[derive(Debug, Clone)]
pub struct FrameLimitReport {
    /// (t, relative Frobenius distance to the limit matrix).
    pub entries: Vec<(f64, f64)>,
    /// Single fitted complex scalar (least squares at the largest t).
    pub fitted_scale: Complex64,
}

/// Frame coefficient matrix of the invariant holomorphic one-form frame over
/// a chamber point, in adapted coordinates.
///
/// Rows: l chamber rows followed by one row per restricted positive root
/// (weighted by sqrt multiplicity). Columns: [omega block | dxi block], each
/// of width l + #Sigma_+. Chamber rows carry `omega_j + i Hess(g_t)|_a`; root
/// rows carry `cosh(c) omega_beta + i sinh(c)/beta(xi) dxi_beta` with
/// `c = beta(grad g_t)` from the spectral action on the root pair.
pub fn frame_matrix(
    g: &InvariantConvexFn,
    h: &InvariantConvexFn,
    t: f64,
    xi: &[f64],
    geom: &ChamberGeometry,
) -> CMat {
    let l = geom.l;
    let p = geom.betas.len();
    let w = l + p;
    let g_t = g.add_scaled(h, t);
    let hess = g_t.hess(xi);
    let grad = g_t.grad(xi);
    let mut b = CMat::zeros(w, 2 * w);
    for j in 0..l {
        b[(j, j)] = Complex64::new(1.0, 0.0);
        for k in 0..l {
            b[(j, w + k)] = Complex64::new(0.0, hess[j][k]);
        }
    }
    for i in 0..p {
        let row = l + i;
        let weight = (geom.mults[i] as f64).sqrt();
        let c = geom.beta_eval(i, &grad);
        b[(row, l + i)] = Complex64::new(weight * c.cosh(), 0.0);
        b[(row, w + l + i)] = Complex64::new(0.0, weight * c.sinh() / geom.beta_eval(i, xi));
    }
    b
}

/// Row-rescaled frame matrix for the limit comparison. The chamber rows are
/// divided by t and compared on their dxi block only (their omega
/// coefficient is identically one before rescaling, and the limit rows are
/// pure dxi forms); root rows are rescaled by e^{-c}.
fn frame_matrix_rescaled(
    g: &InvariantConvexFn,
    h: &InvariantConvexFn,
    t: f64,
    xi: &[f64],
    geom: &ChamberGeometry,
) -> CMat {
    let l = geom.l;
    let p = geom.betas.len();
    let w = l + p;
    let g_t = g.add_scaled(h, t);
    let hess = g_t.hess(xi);
    let grad = g_t.grad(xi);
    let mut b = CMat::zeros(w, 2 * w);
    for j in 0..l {
        for k in 0..l {
            b[(j, w + k)] = Complex64::new(0.0, hess[j][k] / t);
        }
    }
    for i in 0..p {
        let row = l + i;
        let weight = (geom.mults[i] as f64).sqrt();
        let c = geom.beta_eval(i, &grad);
        // e^{-c} cosh(c) and e^{-c} sinh(c), overflow-safe
        let em2 = (-2.0 * c).exp();
        b[(row, l + i)] = Complex64::new(weight * 0.5 * (1.0 + em2), 0.0);
        b[(row, w + l + i)] =
            Complex64::new(0.0, weight * 0.5 * (1.0 - em2) / geom.beta_eval(i, xi));
    }
    b
}

fn frame_matrix_limit(h: &InvariantConvexFn, xi: &[f64], geom: &ChamberGeometry) -> CMat {
    let l = geom.l;
    let p = geom.betas.len();
    let w = l + p;
    let hess = h.hess(xi);
    let mut b = CMat::zeros(w, 2 * w);
    for j in 0..l {
        for k in 0..l {
            b[(j, w + k)] = Complex64::new(0.0, hess[j][k]);
        }
    }
    for i in 0..p {
        let row = l + i;
        let weight = (geom.mults[i] as f64).sqrt();
        b[(row, l + i)] = Complex64::new(weight * 0.5, 0.0);
        b[(row, w + l + i)] = Complex64::new(0.0, weight * 0.5 / geom.beta_eval(i, xi));
    }
    b
}

/// Rescaled frame matrices along a time grid and their distance to the limit
/// matrix, up to one fitted complex scalar (absorbing the unnormalized
/// constant of the limit statement).
pub fn frame_limit(
    g: &InvariantConvexFn,
    h: &InvariantConvexFn,
    xi: &[f64],
    t_grid: &[f64],
    geom: &ChamberGeometry,
) -> Result<FrameLimitReport> {
    let scale = 1.0 + xi.iter().map(|v| v.abs()).fold(0.0, f64::max);
    for i in 0..geom.betas.len() {
        if geom.beta_eval(i, xi).abs() <= 1e-12 * scale {
            return Err(Error::Domain(
                "frame limit needs a regular chamber point".into(),
            ));
        }
    }
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[0] >= w[1]) || t_grid[0] <= 0.0 {
        return Err(Error::Domain(
            "t grid must be increasing and positive".into(),
        ));
    }
    let b_inf = frame_matrix_limit(h, xi, geom);
    let t_max = *t_grid.last().unwrap();
    let b_max = frame_matrix_rescaled(g, h, t_max, xi, geom);
    // least squares scalar: minimize |s B(t_max) - B_inf|_F
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0f64;
    for (x, y) in b_max.data.iter().zip(b_inf.data.iter()) {
        num += y * x.conj();
        den += x.norm_sqr();
    }
    let fitted_scale = num / den;
    let norm_inf = b_inf.frobenius();
    let entries = t_grid
        .iter()
        .map(|&t| {
            let bt = frame_matrix_rescaled(g, h, t, xi, geom).scale(fitted_scale);
            (t, bt.sub(&b_inf).frobenius() / norm_inf)
        })
        .collect();
    Ok(FrameLimitReport {
        entries,
        fitted_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satake::{build_sigma, parse_diagram, restricted_roots};

    fn geom(name: &str) -> ChamberGeometry {
        let d = parse_diagram(name).unwrap();
        let s = build_sigma(&d).unwrap();
        restricted_roots(&s).unwrap().chamber_geometry().unwrap()
    }

    #[test]
    fn parse_specs() {
        let g = InvariantConvexFn::parse("0.5*q + 0.25*q^2").unwrap();
        assert_eq!(g.terms, vec![(1, 0.5), (2, 0.25)]);
        let h = InvariantConvexFn::parse("q").unwrap();
        assert_eq!(h.terms, vec![(1, 1.0)]);
        assert!(InvariantConvexFn::parse("0.5*q^2").is_err()); // no quadratic term
        assert!(InvariantConvexFn::parse("-1*q").is_err());
        assert!(InvariantConvexFn::parse("0.5*w").is_err());
    }

    #[test]
    fn quadratic_is_self_dual() {
        // g = q/2: grad = xi, Hess = I, kappa = q/2
        let g = InvariantConvexFn::parse("0.5*q").unwrap();
        let xi = vec![0.7, -1.2];
        assert_eq!(g.grad(&xi), xi);
        let h = g.hess(&xi);
        assert!((h[0][0] - 1.0).abs() < 1e-15 && h[0][1].abs() < 1e-15);
        assert!((g.kappa(&xi) - 0.5 * (0.49 + 1.44)).abs() < 1e-14);
        assert!((g.kappa(&[0.0, 0.0])).abs() < 1e-300);
    }

    #[test]
    fn quartic_closed_forms() {
        // pure quartic q^2/4 = |xi|^4/4: grad = |xi|^2 xi, kappa = (3/4)|xi|^4
        let pure = InvariantConvexFn {
            terms: vec![(2, 0.25)],
        };
        let xi = vec![0.9, 0.4];
        let q = 0.81 + 0.16;
        let grad = pure.grad(&xi);
        for i in 0..2 {
            assert!((grad[i] - q * xi[i]).abs() < 1e-14);
        }
        assert!((pure.kappa(&xi) - 0.75 * q * q).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = InvariantConvexFn::parse("0.5*q + 0.05*q^2").unwrap();
        let pts = [
            vec![0.3, -0.7],
            vec![1.5, 0.2],
            vec![-0.4, -0.9],
            vec![2.0, 1.0],
        ];
        for xi in pts {
            let grad = g.grad(&xi);
            let hess = g.hess(&xi);
            let fd = 1e-5;
            for i in 0..2 {
                let mut plus = xi.clone();
                let mut minus = xi.clone();
                plus[i] += fd;
                minus[i] -= fd;
                let d = (g.value(&plus) - g.value(&minus)) / (2.0 * fd);
                assert!((d - grad[i]).abs() <= 1e-6 * (1.0 + grad[i].abs()));
                for j in 0..2 {
                    let mut pp = xi.clone();
                    pp[i] += fd;
                    pp[j] += fd;
                    let mut pm = xi.clone();
                    pm[i] += fd;
                    pm[j] -= fd;
                    let mut mp = xi.clone();
                    mp[i] -= fd;
                    mp[j] += fd;
                    let mut mm = xi.clone();
                    mm[i] -= fd;
                    mm[j] -= fd;
                    let dd = (g.value(&pp) - g.value(&pm) - g.value(&mp) + g.value(&mm))
                        / (4.0 * fd * fd);
                    assert!(
                        (dd - hess[i][j]).abs() <= 1e-6 * (1.0 + hess[i][j].abs()),
                        "H[{i}][{j}] fd {dd} vs {}",
                        hess[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn sigma_parity_identities() {
        // restricted to chamber coordinates the gradient is odd and the
        // Hessian block even under xi -> -xi
        let g = InvariantConvexFn::parse("0.5*q + 0.1*q^3").unwrap();
        let xi = vec![0.8, -0.3];
        let neg: Vec<f64> = xi.iter().map(|x| -x).collect();
        let gp = g.grad(&xi);
        let gm = g.grad(&neg);
        for i in 0..2 {
            assert!((gp[i] + gm[i]).abs() < 1e-14);
        }
        let hp = g.hess(&xi);
        let hm = g.hess(&neg);
        for i in 0..2 {
            for j in 0..2 {
                assert!((hp[i][j] - hm[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn newton_identity_for_quadratic() {
        let g = InvariantConvexFn::parse("0.5*q").unwrap();
        let x = vec![1.3, -0.4, 0.2];
        let xi = inverse_legendre(&g, &x).unwrap();
        for i in 0..3 {
            assert!((xi[i] - x[i]).abs() < 1e-12);
        }
        let zero = inverse_legendre(&g, &[0.0, 0.0]).unwrap();
        assert!(zero.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn newton_cubic_example() {
        // g = q/2 + q^2/4: grad = (1 + |xi|^2) xi; X = 2 e1 gives r^3 + r = 2,
        // whose root is exactly r = 1
        let g = InvariantConvexFn::parse("0.5*q + 0.25*q^2").unwrap();
        let xi = inverse_legendre(&g, &[2.0, 0.0]).unwrap();
        assert!((xi[0] - 1.0).abs() < 1e-10, "{xi:?}");
        assert!(xi[1].abs() < 1e-12);
    }

    #[test]
    fn legendre_round_trip() {
        let g = InvariantConvexFn::parse("0.5*q + 0.05*q^2").unwrap();
        for xi in [vec![0.3, 0.9], vec![-1.4, 0.1], vec![2.2, -0.8]] {
            let x = g.grad(&xi);
            let back = inverse_legendre(&g, &x).unwrap();
            let err: f64 = back
                .iter()
                .zip(&xi)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-10, "round trip error {err}");
        }
    }

    #[test]
    fn factorization_trivial_for_quadratic() {
        let gm = geom("AI:A1");
        let h = InvariantConvexFn::parse("0.5*q").unwrap();
        let (lhs, rhs, res) = hessian_factorization_check(&h, &[1.0], &gm).unwrap();
        assert!((lhs - 1.0).abs() < 1e-14);
        assert!((rhs - 1.0).abs() < 1e-14);
        assert!(res < 1e-14);
    }

    #[test]
    fn factorization_quartic_s2() {
        let gm = geom("AI:A1");
        let h = InvariantConvexFn::parse("0.5*q + 0.25*q^2").unwrap();
        let xi = vec![1.0];
        let (_, _, res) = hessian_factorization_check(&h, &xi, &gm).unwrap();
        assert!(res < 1e-10);
        // off-chamber eigenvalue equals 2 h'(q), cross-checked against a
        // finite difference of the invariant radial extension
        let ev = off_chamber_eigenvalue(&h, &xi, &gm, 0);
        assert!((ev - 2.0 * h.d1_q(1.0)).abs() < 1e-12);
        let fd = 1e-5;
        let val = |a: f64, b: f64| h.eval_q(a * a + b * b);
        let second = (val(1.0, fd) - 2.0 * val(1.0, 0.0) + val(1.0, -fd)) / (fd * fd);
        assert!((second - ev).abs() < 1e-5);
    }

    #[test]
    fn factorization_wall_is_domain_error() {
        let gm = geom("AI:A1");
        let h = InvariantConvexFn::parse("0.5*q").unwrap();
        match hessian_factorization_check(&h, &[0.0], &gm) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn frame_matrix_at_t0_matches_definition() {
        // at t = 0 with g = q/2 the frame matrix carries cosh/sinh of the
        // chamber pairings themselves
        let gm = geom("AI:A1");
        let g = InvariantConvexFn::parse("0.5*q").unwrap();
        let h = InvariantConvexFn::parse("0.5*q").unwrap();
        let xi = vec![0.8];
        let b = frame_matrix(&g, &h, 0.0, &xi, &gm);
        let c = gm.beta_eval(0, &xi);
        assert!((b[(1, 1)].re - c.cosh()).abs() < 1e-13);
        assert!((b[(1, 3)].im - c.sinh() / c).abs() < 1e-13);
        assert!((b[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((b[(0, 2)].im - 1.0).abs() < 1e-13);
    }

    #[test]
    fn frame_limit_converges_s2() {
        // ray from the vertical polarization: g = 0, h = q/2
        let gm = geom("AI:A1");
        let g = InvariantConvexFn::zero();
        let h = InvariantConvexFn::parse("0.5*q").unwrap();
        let xi = vec![0.1];
        let report = frame_limit(&g, &h, &xi, &[12.5, 25.0, 50.0], &gm).unwrap();
        let d: Vec<f64> = report.entries.iter().map(|&(_, d)| d).collect();
        assert!(
            d[0] > d[1] && d[1] > d[2],
            "distances not decreasing: {d:?}"
        );
        assert!(d[2] < 1e-3, "distance at t=50: {}", d[2]);
        // diagonal chamber entry scales as t * Hess_h + O(1)
        let b = frame_matrix(&g, &h, 40.0, &xi, &gm);
        assert!((b[(0, 2)].im - 40.0 * h.hess(&xi)[0][0]).abs() < 1e-10);
    }

    #[test]
    fn frame_limit_wall_rejected() {
        let gm = geom("AI:A1");
        let g = InvariantConvexFn::zero();
        let h = InvariantConvexFn::parse("0.5*q").unwrap();
        match frame_limit(&g, &h, &[0.0], &[10.0, 20.0], &gm) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }
}
