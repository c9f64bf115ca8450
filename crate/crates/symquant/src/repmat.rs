//! Explicit irreducible representation matrices in the unitary
//! Gelfand–Tsetlin basis, spherical vectors via nullspace computation,
//! weight projections and Harish-Chandra c-function values.
//!
//! Only type-A factors (and their products) are constructed; the built-in
//! diagram suite never needs anything else.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::dd::dot_dd;
use crate::linalg::{hermitian_eigen, rat_kernel, rat_rref, CMat, SparseC};
use crate::rootsys::{Family, RootSystemData, WeightVec};
use crate::satake::{ChamberGeometry, DiagramKind, SatakeDiagram};
use crate::{rati, Error, Rat, Result};

/// Floating-point policy for the nullspace computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    High,
}

/// Read the precision mode from `SYMQUANT_PRECISION` (double | high).
pub fn precision_from_env() -> Result<Precision> {
    match std::env::var("SYMQUANT_PRECISION") {
        Err(_) => Ok(Precision::Double),
        Ok(v) => match v.to_ascii_lowercase().as_str() {
            "" | "double" => Ok(Precision::Double),
            "high" => Ok(Precision::High),
            other => Err(Error::Usage(format!(
                "SYMQUANT_PRECISION must be `double` or `high`, got `{other}`"
            ))),
        },
    }
}

/// Default cap on the dimension of a single constructed irreducible.
pub const DEFAULT_DIM_CAP: usize = 20_000;

// ---------------------------------------------------------------------------
// Gelfand–Tsetlin patterns for one gl(n) factor
// ---------------------------------------------------------------------------

/// Rows stored by decreasing length: rows[0] has length n, rows[n-1] length 1.
type Pattern = Vec<Vec<i64>>;

fn enumerate_patterns(top: &[i64]) -> Vec<Pattern> {
    let mut out = Vec::new();
    let mut current: Pattern = vec![top.to_vec()];
    extend_pattern(&mut current, &mut out);
    out
}

fn extend_pattern(current: &mut Pattern, out: &mut Vec<Pattern>) {
    let last = current.last().unwrap().clone();
    if last.len() == 1 {
        out.push(current.clone());
        return;
    }
    let k = last.len() - 1;
    let mut row = vec![0i64; k];
    fill_row(&mut row, 0, &last, current, out);
}

fn fill_row(
    row: &mut Vec<i64>,
    idx: usize,
    upper: &[i64],
    current: &mut Pattern,
    out: &mut Vec<Pattern>,
) {
    if idx == row.len() {
        current.push(row.clone());
        extend_pattern(current, out);
        current.pop();
        return;
    }
    // interlacing: upper[idx] >= row[idx] >= upper[idx+1]
    for v in (upper[idx + 1]..=upper[idx]).rev() {
        row[idx] = v;
        fill_row(row, idx + 1, upper, current, out);
    }
}

/// gl-weight of a pattern: w_k = rowsum(len k) - rowsum(len k-1).
fn pattern_gl_weight(p: &Pattern) -> Vec<i64> {
    let n = p[0].len();
    let mut sums = vec![0i64; n + 1];
    for row in p {
        sums[row.len()] = row.iter().sum();
    }
    (1..=n).map(|k| sums[k] - sums[k - 1]).collect()
}

fn row_of_len<'a>(p: &'a Pattern, k: usize) -> &'a [i64] {
    let n = p[0].len();
    &p[n - k]
}

/// Raising coefficient for adding one to entry j (0-based) of the length-k row.
fn raising_coeff(p: &Pattern, k: usize, j: usize) -> f64 {
    let lk: Vec<i64> = row_of_len(p, k)
        .iter()
        .enumerate()
        .map(|(i, &m)| m - (i as i64 + 1))
        .collect();
    let lk1: Vec<i64> = row_of_len(p, k + 1)
        .iter()
        .enumerate()
        .map(|(i, &m)| m - (i as i64 + 1))
        .collect();
    let mut num: i128 = 1;
    for &l in &lk1 {
        num *= (l - lk[j]) as i128;
    }
    if k >= 2 {
        for (i, &m) in row_of_len(p, k - 1).iter().enumerate() {
            let l = m - (i as i64 + 1);
            num *= (l - lk[j] - 1) as i128;
        }
    }
    let mut den: i128 = 1;
    for (i, &l) in lk.iter().enumerate() {
        if i != j {
            den *= (l - lk[j]) as i128;
            den *= (l - lk[j] - 1) as i128;
        }
    }
    let ratio = -(num as f64) / den as f64;
    debug_assert!(ratio >= -1e-9, "GT coefficient must be nonnegative");
    ratio.max(0.0).sqrt()
}

struct GtFactor {
    dim: usize,
    /// su-weights in local fundamental-weight coordinates.
    weights: Vec<Vec<i128>>,
    raising: Vec<SparseC>,
    lowering: Vec<SparseC>,
}

fn build_gt_factor(rank: usize, lambda_fw: &[i128]) -> GtFactor {
    let n = rank + 1;
    let mut top = vec![0i64; n];
    for i in 0..rank {
        top[i] = lambda_fw[i..].iter().sum::<i128>() as i64;
    }
    let patterns = enumerate_patterns(&top);
    let dim = patterns.len();
    let index: BTreeMap<Pattern, usize> = patterns
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let weights: Vec<Vec<i128>> = patterns
        .iter()
        .map(|p| {
            let w = pattern_gl_weight(p);
            (0..rank).map(|i| (w[i] - w[i + 1]) as i128).collect()
        })
        .collect();
    let mut raising = Vec::with_capacity(rank);
    for k in 1..=rank {
        let mut e = SparseC::zeros(dim, dim);
        for (col, p) in patterns.iter().enumerate() {
            let n_idx = n - k;
            for j in 0..k {
                let mut q = p.clone();
                q[n_idx][j] += 1;
                if let Some(&row) = index.get(&q) {
                    let c = raising_coeff(p, k, j);
                    if c != 0.0 {
                        e.push(row, col, Complex64::new(c, 0.0));
                    }
                }
            }
        }
        raising.push(e);
    }
    let lowering = raising.iter().map(|e| e.dagger()).collect();
    GtFactor {
        dim,
        weights,
        raising,
        lowering,
    }
}

// ---------------------------------------------------------------------------
// Assembled irreducible representations
// ---------------------------------------------------------------------------

/// Generator matrices of an irreducible representation in a weight-sorted
/// orthonormal basis.
#[derive(Debug, Clone)]
pub struct IrrepMatrices {
    pub lambda: WeightVec,
    pub dim: usize,
    /// Basis weights in descending lexicographic order (highest weight first).
    pub basis_weights: Vec<WeightVec>,
    /// Simple raising operators, one per global simple root index.
    pub raising: Vec<SparseC>,
    pub lowering: Vec<SparseC>,
}

/// Build the irreducible representation with the given highest weight over a
/// product of type-A factors.
pub fn build_irrep(base: &RootSystemData, lambda: &WeightVec) -> Result<IrrepMatrices> {
    build_irrep_capped(base, lambda, DEFAULT_DIM_CAP)
}

pub fn build_irrep_capped(
    base: &RootSystemData,
    lambda: &WeightVec,
    cap: usize,
) -> Result<IrrepMatrices> {
    if !lambda.is_dominant() || !lambda.is_integral() {
        return Err(Error::Domain(format!(
            "{:?} is not dominant integral",
            lambda.fw
        )));
    }
    if base.family_spec.iter().any(|&(f, _)| f != Family::A) {
        return Err(Error::UnsupportedDiagram(
            "explicit matrices are available for type-A factors only".into(),
        ));
    }
    let dim_expected = base.weyl_dimension(lambda)?;
    if dim_expected as usize > cap {
        return Err(Error::Resource(format!(
            "dimension {dim_expected} exceeds cap {cap}"
        )));
    }

    let mut factors = Vec::new();
    let mut offset = 0usize;
    for &(_, frank) in &base.family_spec {
        let local: Vec<i128> = lambda.fw[offset..offset + frank]
            .iter()
            .map(|c| *c.numer())
            .collect();
        factors.push(build_gt_factor(frank, &local));
        offset += frank;
    }

    let dim: usize = factors.iter().map(|f| f.dim).product();
    if dim as u128 != dim_expected {
        return Err(Error::InternalInconsistency(format!(
            "GT dimension {dim} != Weyl dimension {dim_expected}"
        )));
    }

    // product basis: mixed-radix enumeration, factor 0 most significant
    let n_factors = factors.len();
    let rank = base.rank;
    let mut weights_raw: Vec<Vec<Rat>> = Vec::with_capacity(dim);
    for idx in 0..dim {
        let mut rem = idx;
        let mut locals = vec![0usize; n_factors];
        for f in (0..n_factors).rev() {
            locals[f] = rem % factors[f].dim;
            rem /= factors[f].dim;
        }
        let mut fw = Vec::with_capacity(rank);
        for (f, factor) in factors.iter().enumerate() {
            fw.extend(factor.weights[locals[f]].iter().map(|&c| rati(c)));
        }
        weights_raw.push(fw);
    }

    // sort descending lexicographic, stable
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| weights_raw[b].cmp(&weights_raw[a]));
    let mut new_index = vec![0usize; dim];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let basis_weights: Vec<WeightVec> = order
        .iter()
        .map(|&old| WeightVec::new(weights_raw[old].clone()))
        .collect();

    // padded generators: global simple index j belongs to one factor
    let stride_after = |f: usize| -> usize { factors[f + 1..].iter().map(|g| g.dim).product() };
    let stride_before = |f: usize| -> usize { factors[..f].iter().map(|g| g.dim).product() };
    let pad = |f: usize, local_mat: &SparseC| -> SparseC {
        let before = stride_before(f);
        let after = stride_after(f);
        let fdim = factors[f].dim;
        let mut out = SparseC::zeros(dim, dim);
        for (col_local, col) in local_mat.cols.iter().enumerate() {
            for &(row_local, val) in col {
                for b in 0..before {
                    for a in 0..after {
                        let col_g = (b * fdim + col_local) * after + a;
                        let row_g = (b * fdim + row_local) * after + a;
                        out.push(new_index[row_g], new_index[col_g], val);
                    }
                }
            }
        }
        out
    };

    let mut raising = Vec::with_capacity(rank);
    let mut lowering = Vec::with_capacity(rank);
    let mut f_idx = 0usize;
    let mut local_j = 0usize;
    for _ in 0..rank {
        raising.push(pad(f_idx, &factors[f_idx].raising[local_j]));
        lowering.push(pad(f_idx, &factors[f_idx].lowering[local_j]));
        local_j += 1;
        if local_j == base.family_spec[f_idx].1 {
            local_j = 0;
            f_idx += 1;
        }
    }

    Ok(IrrepMatrices {
        lambda: lambda.clone(),
        dim,
        basis_weights,
        raising,
        lowering,
    })
}

impl IrrepMatrices {
    /// Diagonal of the Cartan generator `H_i` (integer weight pairings).
    pub fn cartan_diag(&self, i: usize) -> Vec<f64> {
        self.basis_weights
            .iter()
            .map(|w| crate::satake::rat_to_f64(w.fw[i]))
            .collect()
    }

    pub fn cartan_sparse(&self, i: usize) -> SparseC {
        SparseC::from_diag_f64(&self.cartan_diag(i))
    }

    /// Orthogonal projector onto the weight-nu subspace (diagonal 0/1).
    pub fn weight_projection(&self, nu: &WeightVec) -> SparseC {
        let d: Vec<f64> = self
            .basis_weights
            .iter()
            .map(|w| if w == nu { 1.0 } else { 0.0 })
            .collect();
        SparseC::from_diag_f64(&d)
    }

    /// Maximum scaled residual of the defining commutation relations.
    pub fn relation_residual(&self) -> f64 {
        let r = self.raising.len();
        let mut worst = 0.0f64;
        for i in 0..r {
            let h = self.cartan_sparse(i);
            for j in 0..r {
                // [H_i, E_j] = alpha_j(H_i) E_j
                let lhs = h.commutator(&self.raising[j]);
                let shift = self.raising_root_pairing(i, j);
                let rhs = self.raising[j].scale(Complex64::new(shift, 0.0));
                let diff = lhs.add(&rhs.scale(Complex64::new(-1.0, 0.0)));
                worst = worst.max(diff.frobenius() / (1.0 + self.raising[j].frobenius()));
            }
        }
        for i in 0..r {
            for j in 0..r {
                let lhs = self.raising[i].commutator(&self.lowering[j]);
                let rhs = if i == j {
                    self.cartan_sparse(i)
                } else {
                    SparseC::zeros(self.dim, self.dim)
                };
                let diff = lhs.add(&rhs.scale(Complex64::new(-1.0, 0.0)));
                worst = worst.max(diff.frobenius() / (1.0 + rhs.frobenius()));
            }
        }
        worst
    }

    fn raising_root_pairing(&self, i: usize, j: usize) -> f64 {
        // alpha_j(H_i) read from any nonzero entry of E_j: weights differ by alpha_j
        for (col, entries) in self.raising[j].cols.iter().enumerate() {
            if let Some(&(row, _)) = entries.first() {
                let diff = self.basis_weights[row].fw[i] - self.basis_weights[col].fw[i];
                return crate::satake::rat_to_f64(diff);
            }
        }
        0.0
    }

    /// gl-unit matrix E_{ab} (0-based) for a single-factor type-A system.
    fn gl_unit(&self, a: usize, b: usize) -> SparseC {
        assert_ne!(a, b);
        if b == a + 1 {
            return self.raising[a].clone();
        }
        if a == b + 1 {
            return self.lowering[b].clone();
        }
        if a < b {
            self.raising[a].commutator(&self.gl_unit(a + 1, b))
        } else {
            self.gl_unit(a, b + 1).commutator(&self.lowering[b])
        }
    }

    /// Traceless diagonal matrix with the given gl-diagonal coefficients.
    fn diag_combo(&self, coeffs: &[Rat]) -> SparseC {
        let n = coeffs.len();
        let trace: Rat = coeffs.iter().copied().sum();
        let avg = trace / rati(n as i128);
        let d: Vec<Rat> = coeffs.iter().map(|&c| c - avg).collect();
        let mut diag = vec![0.0; self.dim];
        let mut acc = rati(0);
        for j in 0..n - 1 {
            acc += d[j];
            let cj = crate::satake::rat_to_f64(acc);
            if cj != 0.0 {
                let h = self.cartan_diag(j);
                for (i, hv) in h.iter().enumerate() {
                    diag[i] += cj * hv;
                }
            }
        }
        SparseC::from_diag_f64(&diag)
    }
}

// ---------------------------------------------------------------------------
// Isotropy embeddings per diagram
// ---------------------------------------------------------------------------

/// Matrices of a generating set of the complexified isotropy algebra inside
/// the given representation. The embedding is hard-coded per diagram family.
pub fn k_generators(diagram: &SatakeDiagram, rep: &IrrepMatrices) -> Result<Vec<SparseC>> {
    let base = &diagram.base;
    match diagram.kind {
        DiagramKind::AI => {
            // so(n) is generated by the adjacent antisymmetric units E_j - F_j
            Ok((0..base.rank)
                .map(|j| rep.raising[j].add(&rep.lowering[j].scale(Complex64::new(-1.0, 0.0))))
                .collect())
        }
        DiagramKind::Group => {
            // twisted diagonal {(Z, omega(Z))} with omega(X) = -X^T:
            // generators (E_j, -F_j), (F_j, -E_j), (H_j, -H_j)
            let r0 = base.rank / 2;
            let mut gens = Vec::new();
            for j in 0..r0 {
                gens.push(
                    rep.raising[j].add(&rep.lowering[j + r0].scale(Complex64::new(-1.0, 0.0))),
                );
                gens.push(
                    rep.lowering[j].add(&rep.raising[j + r0].scale(Complex64::new(-1.0, 0.0))),
                );
                let h: Vec<f64> = rep
                    .cartan_diag(j)
                    .iter()
                    .zip(rep.cartan_diag(j + r0))
                    .map(|(a, b)| a - b)
                    .collect();
                gens.push(SparseC::from_diag_f64(&h));
            }
            Ok(gens)
        }
        DiagramKind::AII | DiagramKind::AIII(_) => {
            let n = base.rank + 1;
            let theta = gl_involution(diagram.kind, n)?;
            Ok(fixed_subalgebra_matrices(rep, n, &theta))
        }
        DiagramKind::Custom => Err(Error::UnsupportedDiagram(
            "no isotropy embedding for a custom diagram".into(),
        )),
    }
}

/// The complex-linear extension of the isotropy involution on gl(n), as its
/// action on the unit-matrix basis (exact rational n^2 x n^2; theta[v][w] is
/// the w-component of theta(basis_v)).
fn gl_involution(kind: DiagramKind, n: usize) -> Result<Vec<Vec<Rat>>> {
    let idx = |a: usize, b: usize| a * n + b;
    let mut theta = vec![vec![rati(0); n * n]; n * n];
    match kind {
        DiagramKind::AII => {
            // theta(X) = -J X^T J^{-1} with J = blockdiag([[0,1],[-1,0]], ...);
            // J^{-1} = -J, hence theta(E_ab) = J E_ba J
            if n % 2 != 0 {
                return Err(Error::UnsupportedDiagram("AII needs even n".into()));
            }
            let mut j_mat = vec![vec![0i128; n]; n];
            for k in 0..n / 2 {
                j_mat[2 * k][2 * k + 1] = 1;
                j_mat[2 * k + 1][2 * k] = -1;
            }
            for a in 0..n {
                for b in 0..n {
                    // (J E_ba J)_{xy} = J_{xb} J_{ay}
                    for x in 0..n {
                        if j_mat[x][b] == 0 {
                            continue;
                        }
                        for y in 0..n {
                            let v = j_mat[x][b] * j_mat[a][y];
                            if v != 0 {
                                theta[idx(a, b)][idx(x, y)] += rati(v);
                            }
                        }
                    }
                }
            }
        }
        DiagramKind::AIII(p) => {
            // theta = Ad(S), S the coordinate permutation of the maximally
            // split realization: s(i) = n+1-i on the outer blocks (1-based)
            let s = |one: usize| -> usize {
                if one <= p || one > n - p {
                    n + 1 - one
                } else {
                    one
                }
            };
            for a in 0..n {
                for b in 0..n {
                    let sa = s(a + 1) - 1;
                    let sb = s(b + 1) - 1;
                    theta[idx(a, b)][idx(sa, sb)] = rati(1);
                }
            }
        }
        _ => {
            return Err(Error::UnsupportedDiagram(
                "no gl involution for this kind".into(),
            ))
        }
    }
    Ok(theta)
}

/// Kernel of (theta - id) on gl(n) minus its trace part, realized in the
/// representation.
fn fixed_subalgebra_matrices(rep: &IrrepMatrices, n: usize, theta: &[Vec<Rat>]) -> Vec<SparseC> {
    let dim = n * n;
    // kernel of the map theta - id: rows indexed by output component
    let mut m = vec![vec![rati(0); dim]; dim];
    for v in 0..dim {
        for w in 0..dim {
            m[w][v] = theta[v][w] - if v == w { rati(1) } else { rati(0) };
        }
    }
    let kernel = rat_kernel(&m);
    // subtract trace parts and re-reduce to an independent basis
    let mut reduced: Vec<Vec<Rat>> = Vec::new();
    for v in kernel {
        let mut t = rati(0);
        for a in 0..n {
            t += v[a * n + a];
        }
        let shift = t / rati(n as i128);
        let mut w = v.clone();
        for a in 0..n {
            w[a * n + a] -= shift;
        }
        if w.iter().any(|c| !c.is_zero()) {
            reduced.push(w);
        }
    }
    let mut rref = reduced.clone();
    let pivots = rat_rref(&mut rref);
    let basis: Vec<Vec<Rat>> = rref.into_iter().take(pivots.len()).collect();

    basis
        .iter()
        .map(|v| {
            let diag: Vec<Rat> = (0..n).map(|a| v[a * n + a]).collect();
            let mut acc = rep.diag_combo(&diag);
            for a in 0..n {
                for b in 0..n {
                    if a != b && !v[a * n + b].is_zero() {
                        let c = crate::satake::rat_to_f64(v[a * n + b]);
                        acc = acc.add(&rep.gl_unit(a, b).scale(Complex64::new(c, 0.0)));
                    }
                }
            }
            acc
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Spherical vectors
// ---------------------------------------------------------------------------

/// The K-fixed unit vector of a spherical representation.
#[derive(Debug, Clone)]
pub struct SphericalVector {
    pub lambda: WeightVec,
    pub coords: Vec<Complex64>,
    /// Squared norm of the component in each weight space.
    pub weight_profile: BTreeMap<WeightVec, f64>,
    /// Max scaled residual over the annihilator generators.
    pub residual: f64,
}

/// Relative singular-value cutoff for the nullspace rank decision.
const NULLSPACE_CUTOFF: f64 = 1e-8;

/// Compute the K-fixed vector as the nullspace of the stacked isotropy
/// generators; errors unless the nullspace dimension is exactly one.
pub fn spherical_vector(
    rep: &IrrepMatrices,
    k_mats: &[SparseC],
    precision: Precision,
) -> Result<SphericalVector> {
    let dim = rep.dim;
    // columns allowed by the diagonal (toral) generators
    let diag_gens: Vec<&SparseC> = k_mats.iter().filter(|g| g.is_diagonal()).collect();
    let off_gens: Vec<&SparseC> = k_mats.iter().filter(|g| !g.is_diagonal()).collect();
    let mut keep: Vec<usize> = Vec::new();
    'cols: for i in 0..dim {
        for g in &diag_gens {
            let dv = g.cols[i]
                .iter()
                .find(|&&(r, _)| r == i)
                .map(|&(_, v)| v)
                .unwrap_or_else(Complex64::zero);
            if dv.norm() > 1e-9 {
                continue 'cols;
            }
        }
        keep.push(i);
    }
    if keep.is_empty() {
        return Err(Error::NotSpherical(format!(
            "no weight space is annihilated by the isotropy torus for {:?}",
            rep.lambda.fw
        )));
    }

    let w = keep.len();
    let mut gram = CMat::zeros(w, w);
    for g in &off_gens {
        let cols: Vec<&Vec<(usize, Complex64)>> = keep.iter().map(|&i| &g.cols[i]).collect();
        for j1 in 0..w {
            for j2 in j1..w {
                let acc = column_dot(cols[j1], cols[j2], precision);
                gram[(j1, j2)] += acc;
            }
        }
    }
    for j1 in 0..w {
        for j2 in 0..j1 {
            gram[(j1, j2)] = gram[(j2, j1)].conj();
        }
    }

    let (eigs, vecs) = hermitian_eigen(&gram);
    let smax = eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    let floor = 1e-12 * (1.0 + smax);
    let cutoff = (NULLSPACE_CUTOFF * smax).max(floor);
    let nullity = eigs
        .iter()
        .filter(|&&e| e.max(0.0).sqrt() <= cutoff)
        .count();
    match nullity {
        0 => {
            return Err(Error::NotSpherical(format!(
                "nullspace is zero-dimensional for {:?}",
                rep.lambda.fw
            )))
        }
        1 => {}
        k => {
            return Err(Error::InternalInconsistency(format!(
                "spherical subspace has dimension {k} for {:?}",
                rep.lambda.fw
            )))
        }
    }

    let mut v = vec![Complex64::zero(); dim];
    for (slot, &i) in keep.iter().enumerate() {
        v[i] = vecs[(slot, 0)];
    }
    let mut residual = 0.0f64;
    for g in k_mats {
        let gv = g.matvec(&v);
        let r: f64 = gv.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        residual = residual.max(r / (1.0 + g.frobenius()));
    }

    // phase: first weight-ordered component of appreciable size, real positive
    let pivot = v
        .iter()
        .position(|c| c.norm() > 1e-6)
        .ok_or_else(|| Error::InternalInconsistency("null eigenvector vanished".into()))?;
    let phase = v[pivot].conj() / v[pivot].norm();
    let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in v.iter_mut() {
        *c *= phase / norm;
    }

    let mut weight_profile: BTreeMap<WeightVec, f64> = BTreeMap::new();
    for (i, c) in v.iter().enumerate() {
        let p = c.norm_sqr();
        if p > 1e-24 {
            *weight_profile
                .entry(rep.basis_weights[i].clone())
                .or_insert(0.0) += p;
        }
    }

    Ok(SphericalVector {
        lambda: rep.lambda.clone(),
        coords: v,
        weight_profile,
        residual,
    })
}

fn column_dot(
    a: &[(usize, Complex64)],
    b: &[(usize, Complex64)],
    precision: Precision,
) -> Complex64 {
    // merge by row index; GT columns are stored in row order
    let mut pairs: Vec<(Complex64, Complex64)> = Vec::new();
    let mut i = 0usize;
    let mut j = 0usize;
    while i < a.len() && j < b.len() {
        let (ra, va) = a[i];
        let (rb, vb) = b[j];
        if ra == rb {
            pairs.push((va, vb));
            i += 1;
            j += 1;
        } else if ra < rb {
            i += 1;
        } else {
            j += 1;
        }
    }
    if precision == Precision::High {
        let re_a: Vec<f64> = pairs.iter().map(|(x, _)| x.re).collect();
        let im_a: Vec<f64> = pairs.iter().map(|(x, _)| x.im).collect();
        let re_b: Vec<f64> = pairs.iter().map(|(_, y)| y.re).collect();
        let im_b: Vec<f64> = pairs.iter().map(|(_, y)| y.im).collect();
        // conj(a) * b accumulated in double-double
        let re = dot_dd(&re_a, &re_b).add(dot_dd(&im_a, &im_b)).to_f64();
        let im = dot_dd(&re_a, &im_b)
            .add(dot_dd(&im_a, &re_b).neg())
            .to_f64();
        Complex64::new(re, im)
    } else {
        pairs.iter().map(|(x, y)| x.conj() * y).sum()
    }
}

impl SphericalVector {
    /// Squared highest-weight component of the unit spherical vector.
    pub fn c_function(&self) -> Result<f64> {
        self.weight_profile
            .get(&self.lambda)
            .copied()
            .filter(|&w| w > 0.0)
            .ok_or_else(|| {
                Error::InternalInconsistency(
                    "spherical vector has no highest-weight component".into(),
                )
            })
    }

    /// `sum_nu w_nu exp(<nu, H>)` for H given in chamber coordinates.
    pub fn toral_exponential_pairing(
        &self,
        base: &RootSystemData,
        geom: &ChamberGeometry,
        h: &[f64],
    ) -> f64 {
        self.weight_profile
            .iter()
            .map(|(nu, w)| {
                let coords = geom.weight_coords(base, nu);
                let dot: f64 = coords.iter().zip(h).map(|(a, b)| a * b).sum();
                w * dot.exp()
            })
            .sum()
    }

    /// Weight profile mapped into chamber coordinates.
    pub fn profile_coords(
        &self,
        base: &RootSystemData,
        geom: &ChamberGeometry,
    ) -> Vec<(Vec<f64>, f64)> {
        self.weight_profile
            .iter()
            .map(|(nu, &w)| (geom.weight_coords(base, nu), w))
            .collect()
    }
}

/// Spherical vector for a diagram, with the embedding chosen per family.
pub fn spherical_vector_for_diagram(
    diagram: &SatakeDiagram,
    rep: &IrrepMatrices,
    precision: Precision,
) -> Result<SphericalVector> {
    let gens = k_generators(diagram, rep)?;
    spherical_vector(rep, &gens, precision)
}

/// Nullspace dimension of the stacked isotropy generators (0 or 1 expected).
pub fn spherical_nullity(diagram: &SatakeDiagram, rep: &IrrepMatrices) -> Result<usize> {
    let gens = k_generators(diagram, rep)?;
    match spherical_vector(rep, &gens, Precision::Double) {
        Ok(_) => Ok(1),
        Err(Error::NotSpherical(_)) => Ok(0),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system_str;
    use crate::satake::parse_diagram;

    fn su2_irrep(m: i128) -> IrrepMatrices {
        let rs = build_root_system_str("A1").unwrap();
        build_irrep(&rs, &WeightVec::from_ints(&[m])).unwrap()
    }

    #[test]
    fn su2_fundamental() {
        let rep = su2_irrep(1);
        assert_eq!(rep.dim, 2);
        assert_eq!(rep.cartan_diag(0), vec![1.0, -1.0]);
        let e = rep.raising[0].to_dense();
        assert!((e[(0, 1)].re - 1.0).abs() < 1e-14);
        assert!(rep.relation_residual() < 1e-12);
    }

    #[test]
    fn su2_spin_one_ladder() {
        // ladder oracle: H = diag(2,0,-2), E superdiagonal (sqrt2, sqrt2)
        let rep = su2_irrep(2);
        assert_eq!(rep.dim, 3);
        assert_eq!(rep.cartan_diag(0), vec![2.0, 0.0, -2.0]);
        let e = rep.raising[0].to_dense();
        let s = 2f64.sqrt();
        assert!((e[(0, 1)].re - s).abs() < 1e-13);
        assert!((e[(1, 2)].re - s).abs() < 1e-13);
        assert!(e[(1, 0)].norm() < 1e-15);
        assert!(rep.relation_residual() < 1e-12);
    }

    #[test]
    fn trivial_rep_is_one_dimensional() {
        let rs = build_root_system_str("A2").unwrap();
        let rep = build_irrep(&rs, &WeightVec::zero(2)).unwrap();
        assert_eq!(rep.dim, 1);
        assert!(rep.raising.iter().all(|e| e.frobenius() == 0.0));
    }

    #[test]
    fn commutation_relations_hold() {
        for (spec, lam) in [
            ("A2", vec![1i128, 1]),
            ("A2", vec![2, 1]),
            ("A3", vec![1, 0, 1]),
            ("A3", vec![0, 2, 0]),
            ("A1xA1", vec![2, 2]),
        ] {
            let rs = build_root_system_str(spec).unwrap();
            let rep = build_irrep(&rs, &WeightVec::from_ints(&lam)).unwrap();
            assert!(
                rep.relation_residual() < 1e-12,
                "{spec} {lam:?}: residual {}",
                rep.relation_residual()
            );
        }
    }

    #[test]
    fn serre_relations_hold() {
        let rs = build_root_system_str("A2").unwrap();
        let rep = build_irrep(&rs, &WeightVec::from_ints(&[2, 1])).unwrap();
        let e0 = &rep.raising[0];
        let e1 = &rep.raising[1];
        let inner = e0.commutator(e1);
        let serre = e0.commutator(&inner);
        assert!(serre.frobenius() < 1e-12);
    }

    #[test]
    fn unitarity_structure() {
        let rs = build_root_system_str("A2").unwrap();
        let rep = build_irrep(&rs, &WeightVec::from_ints(&[1, 1])).unwrap();
        for j in 0..2 {
            let diff = rep.raising[j]
                .dagger()
                .add(&rep.lowering[j].scale(Complex64::new(-1.0, 0.0)));
            assert!(diff.frobenius() < 1e-13);
        }
    }

    #[test]
    fn basis_weights_match_freudenthal() {
        let rs = build_root_system_str("A2").unwrap();
        let lam = WeightVec::from_ints(&[1, 1]);
        let rep = build_irrep(&rs, &lam).unwrap();
        let freud = rs.freudenthal(&lam).unwrap();
        let mut counted: BTreeMap<WeightVec, u64> = BTreeMap::new();
        for w in &rep.basis_weights {
            *counted.entry(w.clone()).or_insert(0) += 1;
        }
        assert_eq!(counted, freud);
    }

    #[test]
    fn projection_properties() {
        let rs = build_root_system_str("A2").unwrap();
        let rep = build_irrep(&rs, &WeightVec::from_ints(&[1, 1])).unwrap();
        let zero = WeightVec::zero(2);
        let p0 = rep.weight_projection(&zero).to_dense();
        // adjoint of A2: zero weight space is 2-dimensional
        let trace: f64 = (0..rep.dim).map(|i| p0[(i, i)].re).sum();
        assert!((trace - 2.0).abs() < 1e-14);
        // P_nu P_mu = 0 for nu != mu; sum over weights = identity
        let mut sum = CMat::zeros(rep.dim, rep.dim);
        let mut seen: std::collections::BTreeSet<WeightVec> = Default::default();
        for w in &rep.basis_weights {
            if seen.insert(w.clone()) {
                let p = rep.weight_projection(w).to_dense();
                for other in &seen {
                    if other != w {
                        let q = rep.weight_projection(other).to_dense();
                        assert!(p.mul(&q).frobenius() < 1e-16);
                    }
                }
                sum = sum.add(&p);
            }
        }
        assert!(sum.sub(&CMat::identity(rep.dim)).frobenius() < 1e-14);
        let not_a_weight = WeightVec::from_ints(&[7, 7]);
        assert_eq!(rep.weight_projection(&not_a_weight).frobenius(), 0.0);
    }

    #[test]
    fn s2_spherical_vectors() {
        let d = parse_diagram("AI:A1").unwrap();
        let rs = &d.base;
        // spin 1: profile {2: 1/2, -2: 1/2}; cross-check: the squared
        // Wigner-d m'=0 column at angle pi/2 is (1/2, 0, 1/2)
        let rep = build_irrep(rs, &WeightVec::from_ints(&[2])).unwrap();
        let sv = spherical_vector_for_diagram(&d, &rep, Precision::Double).unwrap();
        assert!(sv.residual < 1e-10);
        let p = &sv.weight_profile;
        assert!((p[&WeightVec::from_ints(&[2])] - 0.5).abs() < 1e-12);
        assert!(p
            .get(&WeightVec::from_ints(&[0]))
            .map(|v| *v < 1e-20)
            .unwrap_or(true));
        assert!((p[&WeightVec::from_ints(&[-2])] - 0.5).abs() < 1e-12);
        assert!((sv.c_function().unwrap() - 0.5).abs() < 1e-12);
        // spin 1/2 is not spherical: the so(2) generator has no kernel
        let rep1 = build_irrep(rs, &WeightVec::from_ints(&[1])).unwrap();
        match spherical_vector_for_diagram(&d, &rep1, Precision::Double) {
            Err(Error::NotSpherical(_)) => {}
            other => panic!("expected not-spherical, got {other:?}"),
        }
    }

    #[test]
    fn trivial_spherical_vector() {
        let d = parse_diagram("AI:A2").unwrap();
        let rep = build_irrep(&d.base, &WeightVec::zero(2)).unwrap();
        let sv = spherical_vector_for_diagram(&d, &rep, Precision::Double).unwrap();
        assert_eq!(sv.weight_profile.len(), 1);
        assert!((sv.weight_profile[&WeightVec::zero(2)] - 1.0).abs() < 1e-14);
        assert!((sv.c_function().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn group_case_identity_vector() {
        // End(V_m) contains the identity as the fixed vector; flat profile
        let d = parse_diagram("group:A1").unwrap();
        let rep = build_irrep(&d.base, &WeightVec::from_ints(&[2, 2])).unwrap();
        let sv = spherical_vector_for_diagram(&d, &rep, Precision::Double).unwrap();
        assert!(sv.residual < 1e-10);
        assert!((sv.c_function().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let total: f64 = sv.weight_profile.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for w in sv.weight_profile.values() {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn c_function_binomial_table() {
        // c(2j w + rho_hat) = binom(2j, j)/4^j, rederived from the nullspace
        let d = parse_diagram("AI:A1").unwrap();
        for j in 0..=6u32 {
            let rep = build_irrep(&d.base, &WeightVec::from_ints(&[2 * j as i128])).unwrap();
            let sv = spherical_vector_for_diagram(&d, &rep, Precision::Double).unwrap();
            let expect = binom(2 * j as u64, j as u64) as f64 / 4f64.powi(j as i32);
            assert!(
                (sv.c_function().unwrap() - expect).abs() < 1e-12,
                "j={j}: {} vs {expect}",
                sv.c_function().unwrap()
            );
        }
    }

    fn binom(n: u64, k: u64) -> u64 {
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn aii_kernel_dimension() {
        // sp(2) in su(4): the 6-dim rep contains the symplectic form
        let d = parse_diagram("AII:A3").unwrap();
        let rep = build_irrep(&d.base, &WeightVec::from_ints(&[0, 1, 0])).unwrap();
        assert_eq!(rep.dim, 6);
        assert_eq!(spherical_nullity(&d, &rep).unwrap(), 1);
        // the defining rep is not spherical
        let rep4 = build_irrep(&d.base, &WeightVec::from_ints(&[1, 0, 0])).unwrap();
        assert_eq!(spherical_nullity(&d, &rep4).unwrap(), 0);
    }

    #[test]
    fn aiii_p1_spherical_nullity() {
        let d = parse_diagram("AIII:A3:p1").unwrap();
        let rep = build_irrep(&d.base, &WeightVec::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(rep.dim, 15);
        assert_eq!(spherical_nullity(&d, &rep).unwrap(), 1);
        let repf = build_irrep(&d.base, &WeightVec::from_ints(&[1, 1, 0])).unwrap();
        assert_eq!(spherical_nullity(&d, &repf).unwrap(), 0);
    }

    #[test]
    fn toral_pairing_s2() {
        let d = parse_diagram("AI:A1").unwrap();
        let sig = crate::satake::build_sigma(&d).unwrap();
        let rrs = crate::satake::restricted_roots(&sig).unwrap();
        let geom = rrs.chamber_geometry().unwrap();
        let rep = build_irrep(&d.base, &WeightVec::from_ints(&[2])).unwrap();
        let sv = spherical_vector_for_diagram(&d, &rep, Precision::Double).unwrap();
        // H = 0 -> 1
        assert!((sv.toral_exponential_pairing(&d.base, &geom, &[0.0]) - 1.0).abs() < 1e-12);
        // H = s * (coroot direction): (1/2)e^{2s} + (1/2)e^{-2s} from the
        // spin-1 profile {2: 1/2, -2: 1/2}
        let s = 0.37f64;
        let h = vec![s * geom.betas[0][0]];
        let got = sv.toral_exponential_pairing(&d.base, &geom, &h);
        let expect = 0.5 * (2.0 * s).exp() + 0.5 * (-2.0 * s).exp();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
    }

    #[test]
    fn high_precision_mode_runs() {
        let d = parse_diagram("AI:A1").unwrap();
        let rep = build_irrep(&d.base, &WeightVec::from_ints(&[4])).unwrap();
        let sv = spherical_vector_for_diagram(&d, &rep, Precision::High).unwrap();
        let expect = 6.0 / 16.0;
        assert!((sv.c_function().unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn dimension_cap_enforced() {
        let rs = build_root_system_str("A3").unwrap();
        let lam = WeightVec::from_ints(&[3, 2, 3]);
        match build_irrep_capped(&rs, &lam, 100) {
            Err(Error::Resource(_)) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
    }
}
