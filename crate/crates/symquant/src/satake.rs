//! Satake diagrams, the induced involution on the root lattice, restricted
//! root systems with multiplicities, and spherical-weight enumeration.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::linalg::{rat_kernel, rat_solve};
use crate::rootsys::{build_root_system, parse_family_spec, Family, RootSystemData, WeightVec};
use crate::{rati, Error, Rat, Result};

/// Named construction behind a diagram, used by the fallback route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramKind {
    /// `U = K x K` with the factor-swapping involution.
    Group,
    /// Split form on `A_n` (all nodes white, no arrows).
    AI,
    /// `su(2m)/sp(m)`: alternating black nodes on `A_{2m-1}`.
    AII,
    /// `su(p+q)/s(u(p)+u(q))` on `A_{p+q-1}`; the payload is `p`.
    AIII(usize),
    /// Anything assembled by hand; no fallback construction available.
    Custom,
}

/// A Dynkin diagram decorated with black nodes and an arrow pairing.
#[derive(Debug, Clone)]
pub struct SatakeDiagram {
    pub name: String,
    pub kind: DiagramKind,
    pub base: RootSystemData,
    pub black: BTreeSet<usize>,
    /// Involutive pairing of white nodes (each pair listed once).
    pub arrows: Vec<(usize, usize)>,
}

/// The lattice involution induced by a Satake diagram.
#[derive(Debug, Clone)]
pub struct SigmaSystem {
    pub diagram: SatakeDiagram,
    /// Columns are the images of the simple roots, in simple-root coordinates.
    pub sigma_matrix: Vec<Vec<i128>>,
}

/// Restricted root system with multiplicities.
#[derive(Debug, Clone)]
pub struct RestrictedRootSystem {
    pub sigma: SigmaSystem,
    /// Distinct restricted positive roots (may include both beta and 2*beta).
    pub restricted_positive: Vec<WeightVec>,
    /// Same roots in half-integer simple-root coordinates.
    pub restricted_positive_sr: Vec<Vec<Rat>>,
    pub multiplicities: Vec<usize>,
    pub rho_hat: WeightVec,
    pub rank_l: usize,
    pub n_black: usize,
    pub n_arrows: usize,
}

/// Parse a diagram suite name: `group:A1`, `AI:A2`, `AII:A3`, `AIII:A3:p1`.
pub fn parse_diagram(name: &str) -> Result<SatakeDiagram> {
    let parts: Vec<&str> = name.split(':').collect();
    let bad = || Error::UnsupportedDiagram(format!("unknown diagram `{name}`"));
    if parts.len() < 2 {
        return Err(bad());
    }
    let kind_str = parts[0].to_ascii_lowercase();
    match kind_str.as_str() {
        "group" => {
            if parts.len() != 2 {
                return Err(bad());
            }
            let factor = parse_family_spec(parts[1])?;
            if factor.len() != 1 {
                return Err(Error::UnsupportedDiagram(
                    "group case expects a single simple factor".into(),
                ));
            }
            let r0 = factor[0].1;
            let base = build_root_system(&[factor[0], factor[0]])?;
            let arrows = (0..r0).map(|i| (i, i + r0)).collect();
            Ok(SatakeDiagram {
                name: name.to_string(),
                kind: DiagramKind::Group,
                base,
                black: BTreeSet::new(),
                arrows,
            })
        }
        "ai" => {
            if parts.len() != 2 {
                return Err(bad());
            }
            let spec = parse_family_spec(parts[1])?;
            if spec.len() != 1 || spec[0].0 != Family::A {
                return Err(Error::UnsupportedDiagram(
                    "AI expects a single A factor".into(),
                ));
            }
            let base = build_root_system(&spec)?;
            Ok(SatakeDiagram {
                name: name.to_string(),
                kind: DiagramKind::AI,
                base,
                black: BTreeSet::new(),
                arrows: Vec::new(),
            })
        }
        "aii" => {
            if parts.len() != 2 {
                return Err(bad());
            }
            let spec = parse_family_spec(parts[1])?;
            if spec.len() != 1 || spec[0].0 != Family::A || spec[0].1 % 2 == 0 || spec[0].1 < 3 {
                return Err(Error::UnsupportedDiagram(
                    "AII expects a single A factor of odd rank >= 3".into(),
                ));
            }
            let base = build_root_system(&spec)?;
            let black = (0..spec[0].1).step_by(2).collect();
            Ok(SatakeDiagram {
                name: name.to_string(),
                kind: DiagramKind::AII,
                base,
                black,
                arrows: Vec::new(),
            })
        }
        "aiii" => {
            if parts.len() != 3 {
                return Err(bad());
            }
            let spec = parse_family_spec(parts[1])?;
            if spec.len() != 1 || spec[0].0 != Family::A {
                return Err(Error::UnsupportedDiagram(
                    "AIII expects a single A factor".into(),
                ));
            }
            let n = spec[0].1;
            let p_str = parts[2].to_ascii_lowercase();
            let p: usize = p_str
                .strip_prefix('p')
                .and_then(|s| s.parse().ok())
                .ok_or_else(bad)?;
            if p == 0 || 2 * p > n + 1 {
                return Err(Error::UnsupportedDiagram(format!(
                    "AIII p must satisfy 1 <= p <= {}",
                    (n + 1) / 2
                )));
            }
            let base = build_root_system(&spec)?;
            // 1-based white nodes 1..=p and n+1-p..=n, arrows i <-> n+1-i
            let mut black = BTreeSet::new();
            for i in (p + 1)..=(n - p) {
                black.insert(i - 1);
            }
            let mut arrows = Vec::new();
            for i in 1..=p {
                let j = n + 1 - i;
                if i < j {
                    arrows.push((i - 1, j - 1));
                }
            }
            Ok(SatakeDiagram {
                name: name.to_string(),
                kind: DiagramKind::AIII(p),
                base,
                black,
                arrows,
            })
        }
        _ => Err(bad()),
    }
}

/// The diagram suite exercised by the built-in reports and tests.
pub const SUITE: [&str; 7] = [
    "group:A1",
    "group:A2",
    "AI:A1",
    "AI:A2",
    "AII:A3",
    "AIII:A3:p1",
    "AIII:A3:p2",
];

impl SatakeDiagram {
    /// Structural validation of the decoration.
    pub fn validate(&self) -> Result<()> {
        let r = self.base.rank;
        for &b in &self.black {
            if b >= r {
                return Err(Error::InvalidSatakeData(format!(
                    "black node {b} out of range"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for &(i, j) in &self.arrows {
            if i == j || i >= r || j >= r {
                return Err(Error::InvalidSatakeData(format!("bad arrow ({i},{j})")));
            }
            if self.black.contains(&i) || self.black.contains(&j) {
                return Err(Error::InvalidSatakeData(
                    "arrows must pair white nodes".into(),
                ));
            }
            if !seen.insert(i) || !seen.insert(j) {
                return Err(Error::InvalidSatakeData(
                    "arrow pairing is not an involution".into(),
                ));
            }
        }
        Ok(())
    }

    fn is_white(&self, i: usize) -> bool {
        !self.black.contains(&i)
    }

    /// Arrow permutation on white nodes, identity where unpaired.
    pub fn arrow_perm(&self, i: usize) -> usize {
        for &(a, b) in &self.arrows {
            if a == i {
                return b;
            }
            if b == i {
                return a;
            }
        }
        i
    }
}

/// Sweep with the reflections of a sub-root-system only (by simple index).
fn sweep_with(base: &RootSystemData, allowed: &[usize], xi: &WeightVec) -> (WeightVec, Vec<usize>) {
    let mut cur = xi.clone();
    let mut word = Vec::new();
    'outer: loop {
        for &i in allowed {
            if cur.fw[i].is_negative() {
                cur = base.reflect(&cur, i);
                word.push(i);
                continue 'outer;
            }
        }
        break;
    }
    (cur, word)
}

/// Matrix (simple-root coordinates) of a Weyl word acting on the root lattice.
fn word_matrix(base: &RootSystemData, word: &[usize]) -> Vec<Vec<i128>> {
    let r = base.rank;
    let mut cols = Vec::with_capacity(r);
    for j in 0..r {
        let alpha_j = base.root_weight(&unit_root(r, j));
        let img = base.apply_word(word, &alpha_j);
        let sr = base.fw_to_sr(&img.fw);
        let mut col = vec![0i128; r];
        for (k, c) in sr.iter().enumerate() {
            assert_eq!(c.denom(), &1, "Weyl action must preserve the root lattice");
            col[k] = *c.numer();
        }
        cols.push(col);
    }
    cols
}

fn unit_root(r: usize, j: usize) -> Vec<i128> {
    let mut v = vec![0; r];
    v[j] = 1;
    v
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

fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    b.iter().map(|col| mat_apply(a, col)).collect()
}

/// Primary construction: sigma = w0(Phi_0) composed with the arrow permutation
/// extended by the longest element's own diagram involution on black nodes.
fn build_sigma_primary(diagram: &SatakeDiagram) -> Result<Vec<Vec<i128>>> {
    let base = &diagram.base;
    let r = base.rank;
    let black: Vec<usize> = diagram.black.iter().copied().collect();

    // longest element of W(Phi_0) via sweeping a strictly Phi_0-antidominant vector
    let mut v0 = WeightVec::zero(r);
    for &b in &black {
        v0.fw[b] = rati(-1);
    }
    let (_, w0_word) = sweep_with(base, &black, &v0);
    let w0 = word_matrix(base, &w0_word);

    // black-component involution theta: w0(alpha_k) = -alpha_theta(k)
    let mut theta: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in &black {
        let img = mat_apply(&w0, &unit_root(r, k));
        let mut target = None;
        for (idx, &c) in img.iter().enumerate() {
            if c == -1
                && target.is_none()
                && img.iter().enumerate().all(|(m, &x)| m == idx || x == 0)
            {
                target = Some(idx);
            }
        }
        let t = target.ok_or_else(|| {
            Error::InvalidSatakeData("longest black element does not negate simple roots".into())
        })?;
        theta.insert(k, t);
    }

    // extended permutation: arrows on white, theta on black
    let tau: Vec<usize> = (0..r)
        .map(|j| {
            if diagram.is_white(j) {
                diagram.arrow_perm(j)
            } else {
                theta[&j]
            }
        })
        .collect();
    // tau must be a diagram automorphism
    for i in 0..r {
        for j in 0..r {
            if base.cartan[tau[i]][tau[j]] != base.cartan[i][j] {
                return Err(Error::InvalidSatakeData(
                    "arrow pairing is not a diagram symmetry".into(),
                ));
            }
        }
    }

    let tau_cols: Vec<Vec<i128>> = (0..r).map(|j| unit_root(r, tau[j])).collect();
    Ok(mat_mul(&w0, &tau_cols))
}

/// Fallback construction from the explicit ambient involution of the named
/// symmetric pair realization.
pub fn build_sigma_fallback(diagram: &SatakeDiagram) -> Result<Vec<Vec<i128>>> {
    let base = &diagram.base;
    let r = base.rank;
    let dim = base.ambient_dim;

    // ambient image of coordinate e_i as (index, sign), or full vectors
    let ambient_map: Vec<Vec<Rat>> = match diagram.kind {
        DiagramKind::AI => {
            return Ok((0..r).map(|j| unit_root(r, j)).collect());
        }
        DiagramKind::Group => {
            let half = dim / 2;
            (0..dim)
                .map(|i| {
                    let mut v = vec![rati(0); dim];
                    v[(i + half) % dim] = rati(1);
                    v
                })
                .collect()
        }
        DiagramKind::AII => (0..dim)
            .map(|i| {
                let mut v = vec![rati(0); dim];
                let partner = if i % 2 == 0 { i + 1 } else { i - 1 };
                v[partner] = rati(1);
                v
            })
            .collect(),
        DiagramKind::AIII(p) => {
            let n = dim; // ambient of A_{n-1} is R^n
            (0..dim)
                .map(|i| {
                    let one = i + 1; // 1-based
                    let mut v = vec![rati(0); dim];
                    if one <= p || one > n - p {
                        v[n - one] = rati(-1);
                    } else {
                        v[i] = rati(-1);
                    }
                    v
                })
                .collect()
        }
        DiagramKind::Custom => {
            return Err(Error::InvalidSatakeData(
                "no fallback construction for a custom diagram".into(),
            ))
        }
    };

    // image of each simple root under the ambient involution -> sr coordinates
    let form_dot = |a: &[Rat], b: &[Rat]| -> Rat {
        a.iter()
            .zip(b)
            .zip(&base.ambient_scale)
            .map(|((x, y), s)| x * y * s)
            .sum()
    };
    let mut cols = Vec::with_capacity(r);
    for j in 0..r {
        let mut img = vec![rati(0); dim];
        for (i, &c) in base.simple_roots[j].iter().enumerate() {
            if !c.is_zero() {
                for (k, x) in ambient_map[i].iter().enumerate() {
                    img[k] += c * x;
                }
            }
        }
        let rhs: Vec<Rat> = (0..r)
            .map(|i| form_dot(&img, &base.simple_roots[i]))
            .collect();
        let coords = rat_solve(&base.gram, &rhs)
            .ok_or_else(|| Error::InvalidSatakeData("fallback image outside root span".into()))?;
        let mut col = vec![0i128; r];
        for (k, c) in coords.iter().enumerate() {
            if c.denom() != &1 {
                return Err(Error::InvalidSatakeData(
                    "fallback involution not lattice-integral".into(),
                ));
            }
            col[k] = *c.numer();
        }
        cols.push(col);
    }
    Ok(cols)
}

fn validate_sigma(diagram: &SatakeDiagram, sigma: &[Vec<i128>]) -> Result<()> {
    let base = &diagram.base;
    let r = base.rank;
    // involution
    let sq = mat_mul(sigma, sigma);
    for j in 0..r {
        if sq[j] != unit_root(r, j) {
            return Err(Error::InvalidSatakeData("sigma^2 != id".into()));
        }
    }
    let root_set: BTreeSet<Vec<i128>> = base.roots.iter().cloned().collect();
    for root in &base.roots {
        let img = mat_apply(sigma, root);
        if !root_set.contains(&img) {
            return Err(Error::InvalidSatakeData(
                "sigma does not preserve the roots".into(),
            ));
        }
        let supported_on_black = root
            .iter()
            .enumerate()
            .all(|(k, &c)| c == 0 || diagram.black.contains(&k));
        if supported_on_black {
            let neg: Vec<i128> = root.iter().map(|c| -c).collect();
            if img != neg {
                return Err(Error::InvalidSatakeData("sigma != -id on Phi_0".into()));
            }
        } else {
            // sigma-order: positive roots outside Phi_0 stay positive
            let positive = root.iter().all(|&c| c >= 0);
            if positive && !img.iter().all(|&c| c >= 0) {
                return Err(Error::InvalidSatakeData("sigma-order violated".into()));
            }
        }
    }
    // shape condition on white simple roots
    for j in 0..r {
        if !diagram.is_white(j) {
            continue;
        }
        let col = &sigma[j];
        let target = diagram.arrow_perm(j);
        for (k, &c) in col.iter().enumerate() {
            if k == target {
                if c != 1 {
                    return Err(Error::InvalidSatakeData(format!(
                        "sigma(alpha_{j}) lacks unit coefficient on alpha_{target}"
                    )));
                }
            } else if diagram.is_white(k) {
                if c != 0 {
                    return Err(Error::InvalidSatakeData(format!(
                        "sigma(alpha_{j}) has white support at {k}"
                    )));
                }
            } else if c < 0 {
                return Err(Error::InvalidSatakeData(format!(
                    "sigma(alpha_{j}) has negative black coefficient at {k}"
                )));
            }
        }
    }
    Ok(())
}

/// Build the lattice involution for a diagram, falling back to the explicit
/// matrix realization when the composed-Weyl construction fails validation.
pub fn build_sigma(diagram: &SatakeDiagram) -> Result<SigmaSystem> {
    diagram.validate()?;
    let primary = build_sigma_primary(diagram).and_then(|m| {
        validate_sigma(diagram, &m)?;
        Ok(m)
    });
    let sigma_matrix = match primary {
        Ok(m) => m,
        Err(primary_err) => {
            let fb = build_sigma_fallback(diagram).and_then(|m| {
                validate_sigma(diagram, &m)?;
                Ok(m)
            });
            fb.map_err(|fb_err| {
                Error::InvalidSatakeData(format!(
                    "primary construction failed ({primary_err}); fallback failed ({fb_err})"
                ))
            })?
        }
    };
    Ok(SigmaSystem {
        diagram: diagram.clone(),
        sigma_matrix,
    })
}

impl SigmaSystem {
    pub fn base(&self) -> &RootSystemData {
        &self.diagram.base
    }

    /// Apply sigma to a vector in simple-root coordinates.
    pub fn apply_sr(&self, v: &[Rat]) -> Vec<Rat> {
        let r = self.base().rank;
        let mut out = vec![rati(0); r];
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                for k in 0..r {
                    out[k] += *c * rati(self.sigma_matrix[j][k]);
                }
            }
        }
        out
    }

    /// Apply sigma to a weight (fundamental-weight coordinates).
    pub fn apply(&self, w: &WeightVec) -> WeightVec {
        let sr = self.base().fw_to_sr(&w.fw);
        let img = self.apply_sr(&sr);
        WeightVec::new(self.base().sr_to_fw(&img))
    }

    pub fn is_fixed(&self, w: &WeightVec) -> bool {
        self.apply(w) == *w
    }
}

/// Compute the restricted root system of a sigma system.
pub fn restricted_roots(sigma: &SigmaSystem) -> Result<RestrictedRootSystem> {
    let base = sigma.base();
    let r = base.rank;
    let mut buckets: BTreeMap<Vec<Rat>, usize> = BTreeMap::new();
    let mut n_phi0_pos = 0usize;
    for root in &base.positive_roots {
        let img = mat_apply(&sigma.sigma_matrix, root);
        let proj: Vec<Rat> = root
            .iter()
            .zip(&img)
            .map(|(&a, &b)| (rati(a) + rati(b)) / rati(2))
            .collect();
        if proj.iter().all(|c| c.is_zero()) {
            n_phi0_pos += 1;
        } else {
            *buckets.entry(proj).or_insert(0) += 1;
        }
    }
    let restricted_positive_sr: Vec<Vec<Rat>> = buckets.keys().cloned().collect();
    let multiplicities: Vec<usize> = buckets.values().copied().collect();
    let restricted_positive: Vec<WeightVec> = restricted_positive_sr
        .iter()
        .map(|sr| WeightVec::new(base.sr_to_fw(sr)))
        .collect();

    let n_black = sigma.diagram.black.len();
    let n_arrows = sigma.diagram.arrows.len();
    let rank_l = r - n_black - n_arrows;

    // rho_hat two ways: half the multiplicity-weighted sum, and the sigma-fixed
    // projection of rho; they must agree exactly.
    let mut rho_hat_sr = vec![rati(0); r];
    for (sr, &m) in restricted_positive_sr.iter().zip(&multiplicities) {
        for k in 0..r {
            rho_hat_sr[k] += rati(m as i128) * sr[k] / rati(2);
        }
    }
    let rho_sr = base.fw_to_sr(&base.rho().fw);
    let rho_img = sigma.apply_sr(&rho_sr);
    for k in 0..r {
        let proj = (rho_sr[k] + rho_img[k]) / rati(2);
        if proj != rho_hat_sr[k] {
            return Err(Error::InternalInconsistency(
                "rho_hat disagrees with the sigma-fixed projection of rho".into(),
            ));
        }
    }
    let rho_hat = WeightVec::new(base.sr_to_fw(&rho_hat_sr));

    // rank check: dimension of the +1 eigenspace of sigma
    let mut m_minus_id: Vec<Vec<Rat>> = vec![vec![rati(0); r]; r];
    for j in 0..r {
        for k in 0..r {
            m_minus_id[k][j] =
                rati(sigma.sigma_matrix[j][k]) - if j == k { rati(1) } else { rati(0) };
        }
    }
    let fixed_dim = rat_kernel(&m_minus_id).len();
    if fixed_dim != rank_l {
        return Err(Error::InternalInconsistency(format!(
            "restricted rank {rank_l} != fixed-space dimension {fixed_dim}"
        )));
    }
    let total_mult: usize = multiplicities.iter().sum();
    if total_mult + n_phi0_pos != base.positive_roots.len() {
        return Err(Error::InternalInconsistency(
            "multiplicity count mismatch".into(),
        ));
    }

    let rrs = RestrictedRootSystem {
        sigma: sigma.clone(),
        restricted_positive,
        restricted_positive_sr,
        multiplicities,
        rho_hat,
        rank_l,
        n_black,
        n_arrows,
    };
    rrs.validate_reflection_closure()?;
    Ok(rrs)
}

impl RestrictedRootSystem {
    pub fn base(&self) -> &RootSystemData {
        self.sigma.base()
    }

    /// Dimension of the tangent space `s*` = l + total multiplicity.
    pub fn dim_s(&self) -> usize {
        self.rank_l + self.multiplicities.iter().sum::<usize>()
    }

    /// Number of distinct restricted positive roots.
    pub fn n_restricted_pos(&self) -> usize {
        self.restricted_positive.len()
    }

    /// The restricted system must be closed under its own reflections
    /// (possibly non-reduced: beta and 2 beta may both occur).
    fn validate_reflection_closure(&self) -> Result<()> {
        let base = self.base();
        let mut all: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for sr in &self.restricted_positive_sr {
            all.insert(sr.clone());
            all.insert(sr.iter().map(|c| -c).collect());
        }
        let form_sr = |a: &[Rat], b: &[Rat]| -> Rat {
            let mut acc = rati(0);
            for i in 0..base.rank {
                for j in 0..base.rank {
                    acc += a[i] * base.gram[i][j] * b[j];
                }
            }
            acc
        };
        for beta in &self.restricted_positive_sr {
            let bb = form_sr(beta, beta);
            for gamma in all.iter() {
                let coef = rati(2) * form_sr(gamma, beta) / bb;
                let refl: Vec<Rat> = gamma.iter().zip(beta).map(|(g, b)| g - coef * b).collect();
                if !all.contains(&refl) {
                    return Err(Error::InternalInconsistency(
                        "restricted system not closed under its reflections".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Pairing of a weight with the i-th restricted positive root.
    pub fn pair_beta(&self, w: &WeightVec, i: usize) -> Rat {
        let base = self.base();
        let ws = base.fw_to_sr(&w.fw);
        let mut acc = rati(0);
        for a in 0..base.rank {
            for b in 0..base.rank {
                acc += ws[a] * base.gram[a][b] * self.restricted_positive_sr[i][b];
            }
        }
        acc
    }

    pub fn beta_norm_sq(&self, i: usize) -> Rat {
        let base = self.base();
        let sr = &self.restricted_positive_sr[i];
        let mut acc = rati(0);
        for a in 0..base.rank {
            for b in 0..base.rank {
                acc += sr[a] * base.gram[a][b] * sr[b];
            }
        }
        acc
    }

    /// Exact regularity test: nonzero pairing with every restricted root.
    pub fn is_regular(&self, w: &WeightVec) -> bool {
        (0..self.restricted_positive.len()).all(|i| !self.pair_beta(w, i).is_zero())
    }

    /// Dominant integral sigma-fixed weights of bounded coordinate height
    /// satisfying the restricted-integrality condition.
    pub fn spherical_weights(&self, height_bound: u32) -> Vec<WeightVec> {
        let base = self.base();
        let r = base.rank;
        let mut out = Vec::new();
        let mut coords = vec![0i128; r];
        enumerate_bounded(&mut coords, 0, height_bound as i128, &mut |c| {
            let w = WeightVec::from_ints(c);
            if self.is_spherical_weight(&w) {
                out.push(w);
            }
        });
        out.sort();
        out
    }

    /// Cartan–Helgason test for a single dominant integral weight.
    pub fn is_spherical_weight(&self, w: &WeightVec) -> bool {
        if !w.is_dominant() || !w.is_integral() {
            return false;
        }
        if !self.sigma.is_fixed(w) {
            return false;
        }
        for i in 0..self.restricted_positive.len() {
            let v = self.pair_beta(w, i) / self.beta_norm_sq(i);
            if v.denom() != &1 || v.is_negative() {
                return false;
            }
        }
        true
    }
}

fn enumerate_bounded(
    coords: &mut Vec<i128>,
    idx: usize,
    budget: i128,
    visit: &mut impl FnMut(&[i128]),
) {
    if idx == coords.len() {
        visit(coords);
        return;
    }
    for v in 0..=budget {
        coords[idx] = v;
        enumerate_bounded(coords, idx + 1, budget - v, visit);
    }
    coords[idx] = 0;
}

/// Euclidean model of the sigma-fixed subspace: an orthonormal coordinate
/// system on `a*` together with the restricted data expressed in it.
#[derive(Debug, Clone)]
pub struct ChamberGeometry {
    pub l: usize,
    /// dim s* = l + sum of multiplicities.
    pub d: usize,
    pub n_sigma_pos: usize,
    /// Orthogonalized (unnormalized) rational basis of the fixed space, sr coords.
    basis_sr: Vec<Vec<Rat>>,
    basis_norm: Vec<f64>,
    gram: Vec<Vec<Rat>>,
    /// Restricted positive roots in orthonormal coordinates.
    pub betas: Vec<Vec<f64>>,
    pub mults: Vec<usize>,
    pub rho_hat: Vec<f64>,
    /// Simple restricted roots in orthonormal coordinates.
    pub simple_betas: Vec<Vec<f64>>,
    /// Unit chamber rays (dual basis to the simple restricted roots).
    pub rays: Vec<Vec<f64>>,
}

impl RestrictedRootSystem {
    /// Build the Euclidean chamber model.
    pub fn chamber_geometry(&self) -> Result<ChamberGeometry> {
        let base = self.base();
        let r = base.rank;
        // kernel of (sigma - id)
        let mut m: Vec<Vec<Rat>> = vec![vec![rati(0); r]; r];
        for j in 0..r {
            for k in 0..r {
                m[k][j] =
                    rati(self.sigma.sigma_matrix[j][k]) - if j == k { rati(1) } else { rati(0) };
            }
        }
        let raw = rat_kernel(&m);
        let form_sr = |a: &[Rat], b: &[Rat]| -> Rat {
            let mut acc = rati(0);
            for i in 0..r {
                for j in 0..r {
                    acc += a[i] * base.gram[i][j] * b[j];
                }
            }
            acc
        };
        // rational Gram–Schmidt (normalize only in f64)
        let mut basis_sr: Vec<Vec<Rat>> = Vec::new();
        for v in raw {
            let mut b = v.clone();
            for prev in &basis_sr {
                let coef = form_sr(&b, prev) / form_sr(prev, prev);
                for k in 0..r {
                    b[k] -= coef * prev[k];
                }
            }
            if !b.iter().all(|c| c.is_zero()) {
                basis_sr.push(b);
            }
        }
        if basis_sr.len() != self.rank_l {
            return Err(Error::InternalInconsistency(
                "fixed-space basis rank mismatch".into(),
            ));
        }
        let basis_norm: Vec<f64> = basis_sr
            .iter()
            .map(|b| rat_to_f64(form_sr(b, b)).sqrt())
            .collect();

        let coords_of_sr = |v: &[Rat]| -> Vec<f64> {
            basis_sr
                .iter()
                .zip(&basis_norm)
                .map(|(b, n)| rat_to_f64(form_sr(v, b)) / n)
                .collect()
        };

        let betas: Vec<Vec<f64>> = self
            .restricted_positive_sr
            .iter()
            .map(|sr| coords_of_sr(sr))
            .collect();
        let rho_hat_sr = base.fw_to_sr(&self.rho_hat.fw);
        let rho_hat = coords_of_sr(&rho_hat_sr);

        // simple restricted roots: restrictions of the white simple roots
        let mut simple_set: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for j in 0..r {
            if self.sigma.diagram.is_white(j) {
                let img = self
                    .sigma
                    .apply_sr(&unit_root(r, j).iter().map(|&c| rati(c)).collect::<Vec<_>>());
                let proj: Vec<Rat> = (0..r)
                    .map(|k| (if k == j { rati(1) } else { rati(0) } + img[k]) / rati(2))
                    .collect();
                simple_set.insert(proj);
            }
        }
        if simple_set.len() != self.rank_l {
            return Err(Error::InternalInconsistency(
                "simple restricted roots do not span the restricted rank".into(),
            ));
        }
        let simple_coords: Vec<Vec<f64>> = simple_set.iter().map(|sr| coords_of_sr(sr)).collect();
        // dual rays: beta_i(ray_j) = delta_ij, then normalize
        let l = self.rank_l;
        let mut rays = Vec::with_capacity(l);
        for j in 0..l {
            let rhs: Vec<f64> = (0..l).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            let a: Vec<Vec<f64>> = simple_coords.clone();
            let ray = crate::linalg::f64_solve(&a, &rhs)
                .ok_or_else(|| Error::InternalInconsistency("degenerate chamber rays".into()))?;
            let norm: f64 = ray.iter().map(|x| x * x).sum::<f64>().sqrt();
            rays.push(ray.into_iter().map(|x| x / norm).collect());
        }

        Ok(ChamberGeometry {
            l,
            d: self.dim_s(),
            n_sigma_pos: self.n_restricted_pos(),
            basis_sr,
            basis_norm,
            gram: base.gram.clone(),
            betas,
            mults: self.multiplicities.clone(),
            rho_hat,
            simple_betas: simple_coords,
            rays,
        })
    }
}

pub fn rat_to_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Everything derived from one named diagram, bundled for convenience.
#[derive(Debug, Clone)]
pub struct DiagramContext {
    pub diagram: SatakeDiagram,
    pub sigma: SigmaSystem,
    pub rrs: RestrictedRootSystem,
    pub geom: ChamberGeometry,
}

/// Build sigma, the restricted system and the chamber model for a suite name.
pub fn diagram_context(name: &str) -> Result<DiagramContext> {
    let diagram = parse_diagram(name)?;
    let sigma = build_sigma(&diagram)?;
    let rrs = restricted_roots(&sigma)?;
    let geom = rrs.chamber_geometry()?;
    Ok(DiagramContext {
        diagram,
        sigma,
        rrs,
        geom,
    })
}

impl DiagramContext {
    pub fn base(&self) -> &RootSystemData {
        self.sigma.base()
    }
}

impl ChamberGeometry {
    /// Coordinates of a sigma-fixed weight in the orthonormal chamber frame.
    pub fn weight_coords(&self, base: &RootSystemData, w: &WeightVec) -> Vec<f64> {
        let sr = base.fw_to_sr(&w.fw);
        let r = base.rank;
        self.basis_sr
            .iter()
            .zip(&self.basis_norm)
            .map(|(b, n)| {
                let mut acc = rati(0);
                for i in 0..r {
                    for j in 0..r {
                        acc += sr[i] * self.gram[i][j] * b[j];
                    }
                }
                rat_to_f64(acc) / n
            })
            .collect()
    }

    /// Evaluate the i-th restricted positive root on a point of `a*`.
    pub fn beta_eval(&self, i: usize, xi: &[f64]) -> f64 {
        self.betas[i].iter().zip(xi).map(|(b, x)| b * x).sum()
    }

    /// Product of positive restricted-root evaluations with multiplicities.
    pub fn phat(&self, xi: &[f64]) -> f64 {
        let mut acc = 1.0;
        for i in 0..self.betas.len() {
            acc *= self.beta_eval(i, xi).powi(self.mults[i] as i32);
        }
        acc
    }

    /// Map cone coordinates (all >= 0) to a chamber point.
    pub fn cone_point(&self, u: &[f64]) -> Vec<f64> {
        let mut xi = vec![0.0; self.l];
        for (j, &uj) in u.iter().enumerate() {
            for k in 0..self.l {
                xi[k] += uj * self.rays[j][k];
            }
        }
        xi
    }

    /// Jacobian of the cone parameterization.
    pub fn cone_jacobian(&self) -> f64 {
        match self.l {
            1 => 1.0,
            2 => (self.rays[0][0] * self.rays[1][1] - self.rays[0][1] * self.rays[1][0]).abs(),
            _ => {
                // general determinant via Gaussian elimination
                let mut m: Vec<Vec<f64>> = self.rays.clone();
                let n = self.l;
                let mut det = 1.0f64;
                for c in 0..n {
                    let (p, mag) = (c..n)
                        .map(|i| (i, m[i][c].abs()))
                        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                        .unwrap();
                    if mag < 1e-300 {
                        return 0.0;
                    }
                    if p != c {
                        m.swap(c, p);
                        det = -det;
                    }
                    det *= m[c][c];
                    for i in (c + 1)..n {
                        let f = m[i][c] / m[c][c];
                        for j in c..n {
                            m[i][j] -= f * m[c][j];
                        }
                    }
                }
                det.abs()
            }
        }
    }
}
