//! Small dense/sparse complex linear algebra and exact rational elimination.
//!
//! Everything here is deterministic: fixed sweep orders, no pivot heuristics
//! that depend on floating-point ties beyond magnitude comparison.

use num_complex::Complex64;
use num_traits::Zero;

use crate::Rat;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(d: &[Complex64]) -> Self {
        let mut m = CMat::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Complex64::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::zero();
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(other.data.iter()) {
            *v += w;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(other.data.iter()) {
            *v -= w;
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum (operator 1-norm).
    pub fn norm_one(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.cols {
            let s: f64 = (0..self.rows).map(|i| self[(i, j)].norm()).sum();
            best = best.max(s);
        }
        best
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Column-major sparse complex matrix.
#[derive(Debug, Clone)]
pub struct SparseC {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseC {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseC {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn push(&mut self, row: usize, col: usize, val: Complex64) {
        if val.norm_sqr() != 0.0 {
            self.cols[col].push((row, val));
        }
    }

    pub fn from_diag_f64(d: &[f64]) -> Self {
        let mut m = SparseC::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.push(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            let x = v[j];
            if x.norm_sqr() == 0.0 {
                continue;
            }
            for &(i, a) in col {
                out[i] += a * x;
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> SparseC {
        let mut out = self.clone();
        for col in out.cols.iter_mut() {
            for e in col.iter_mut() {
                e.1 *= s;
            }
        }
        out
    }

    pub fn add(&self, other: &SparseC) -> SparseC {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.n_cols(), other.n_cols());
        let mut out = SparseC::zeros(self.rows, self.n_cols());
        for j in 0..self.n_cols() {
            let mut acc: std::collections::BTreeMap<usize, Complex64> = Default::default();
            for &(i, a) in &self.cols[j] {
                *acc.entry(i).or_insert(Complex64::zero()) += a;
            }
            for &(i, a) in &other.cols[j] {
                *acc.entry(i).or_insert(Complex64::zero()) += a;
            }
            for (i, a) in acc {
                out.push(i, j, a);
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseC) -> SparseC {
        assert_eq!(self.n_cols(), other.rows);
        let mut out = SparseC::zeros(self.rows, other.n_cols());
        for j in 0..other.n_cols() {
            let mut acc: std::collections::BTreeMap<usize, Complex64> = Default::default();
            for &(k, b) in &other.cols[j] {
                for &(i, a) in &self.cols[k] {
                    *acc.entry(i).or_insert(Complex64::zero()) += a * b;
                }
            }
            for (i, a) in acc {
                if a.norm() > 0.0 {
                    out.push(i, j, a);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &SparseC) -> SparseC {
        self.mul(other)
            .add(&other.mul(self).scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn dagger(&self) -> SparseC {
        let mut out = SparseC::zeros(self.n_cols(), self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                out.push(j, i, a.conj());
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.rows, self.n_cols());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                m[(i, j)] += a;
            }
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        self.cols
            .iter()
            .flat_map(|c| c.iter().map(|(_, a)| a.norm_sqr()))
            .sum::<f64>()
            .sqrt()
    }

    /// True when every stored entry sits on the diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().all(|&(i, a)| i == j || a.norm() < 1e-300))
    }

    /// Keep only the given columns (in order), producing a rows x keep.len() matrix.
    pub fn select_columns(&self, keep: &[usize]) -> SparseC {
        let mut out = SparseC::zeros(self.rows, keep.len());
        for (new_j, &j) in keep.iter().enumerate() {
            out.cols[new_j] = self.cols[j].clone();
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues (ascending) and the unitary matrix whose columns are
/// the corresponding eigenvectors.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    // symmetrize against rounding
    for i in 0..n {
        for j in 0..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
        }
    }
    let mut v = CMat::identity(n);
    let scale = m.frobenius().max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= 1e-30 * scale {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let absg = apq.norm();
                let phase = apq / absg;
                let tau = (aqq - app) / (2.0 * absg);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);
                // columns: col_p' = c*col_p - conj(s)*col_q ; col_q' = s*col_p + c*col_q
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c - miq * s.conj();
                    m[(i, q)] = mip * s + miq * c;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c - mqj * s;
                    m[(q, j)] = mpj * s.conj() + mqj * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s.conj();
                    v[(i, q)] = vip * s + viq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| eig[i].partial_cmp(&eig[j]).unwrap());
    let eig_sorted: Vec<f64> = order.iter().map(|&i| eig[i]).collect();
    let mut v_sorted = CMat::zeros(n, n);
    for (new_j, &j) in order.iter().enumerate() {
        for i in 0..n {
            v_sorted[(i, new_j)] = v[(i, j)];
        }
    }
    (eig_sorted, v_sorted)
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
pub fn expm(a: &CMat) -> CMat {
    assert_eq!(a.rows, a.cols);
    let norm = a.norm_one();
    let mut k = 0u32;
    let mut scaled = a.clone();
    if norm > 0.5 {
        k = (norm / 0.5).log2().ceil() as u32;
        let factor = Complex64::new(1.0 / (2f64.powi(k as i32)), 0.0);
        scaled = a.scale(factor);
    }
    let n = a.rows;
    let mut result = CMat::identity(n);
    let mut term = CMat::identity(n);
    for i in 1..=24 {
        term = term.mul(&scaled).scale(Complex64::new(1.0 / i as f64, 0.0));
        result = result.add(&term);
        if term.frobenius() < 1e-18 * result.frobenius().max(1.0) {
            break;
        }
    }
    for _ in 0..k {
        result = result.mul(&result);
    }
    result
}

/// Exact reduced row echelon form. Returns pivot columns.
pub fn rat_rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let mut pivot = None;
        for i in r..rows {
            if !m[i][c].is_zero() {
                pivot = Some(i);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in 0..cols {
            m[r][j] *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let sub = f * m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis of an exact rational matrix (as row vectors of length cols).
pub fn rat_kernel(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let pivots = rat_rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::from_integer(0); cols];
        v[free] = Rat::from_integer(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b exactly; error when the system is singular/inconsistent.
pub fn rat_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rat_rref(&mut m);
    // inconsistent?
    for row in &m {
        if row[..cols].iter().all(|x| x.is_zero()) && !row[cols].is_zero() {
            return None;
        }
    }
    if pivots.len() < cols {
        return None;
    }
    let mut x = vec![Rat::from_integer(0); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][cols];
    }
    Some(x)
}

/// Exact inverse of a square rational matrix.
pub fn rat_invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    Rat::from_integer(1)
                } else {
                    Rat::from_integer(0)
                });
            }
            r
        })
        .collect();
    let pivots = rat_rref(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Dense real linear solve (partial pivoting); small systems only.
pub fn f64_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for c in 0..n {
        let (p, mag) = (c..n)
            .map(|i| (i, m[i][c].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if mag < 1e-300 {
            return None;
        }
        m.swap(c, p);
        let piv = m[c][c];
        for j in c..=n {
            m[c][j] /= piv;
        }
        for i in 0..n {
            if i != c && m[i][c] != 0.0 {
                let f = m[i][c];
                for j in c..=n {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n]).collect())
}

/// Deterministic splitmix64 stream, used where fixed-seed pseudo-random
/// sample points are required.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform sample in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jacobi_diagonalizes_hermitian() {
        // 3x3 Hermitian with known character: check A v = lambda v.
        let mut a = CMat::zeros(3, 3);
        a[(0, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(-1.0, 0.0);
        a[(2, 2)] = c(0.5, 0.0);
        a[(0, 1)] = c(0.3, 0.7);
        a[(1, 0)] = c(0.3, -0.7);
        a[(0, 2)] = c(-0.2, 0.1);
        a[(2, 0)] = c(-0.2, -0.1);
        a[(1, 2)] = c(0.0, 0.9);
        a[(2, 1)] = c(0.0, -0.9);
        let (eig, v) = hermitian_eigen(&a);
        assert!(eig.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = eig.iter().sum();
        assert!((trace - 1.5).abs() < 1e-12);
        for k in 0..3 {
            let col: Vec<Complex64> = (0..3).map(|i| v[(i, k)]).collect();
            let av = a.matvec(&col);
            for i in 0..3 {
                assert!((av[i] - col[i] * eig[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expm_of_antihermitian_is_unitary() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 1)] = c(0.0, 1.3);
        a[(1, 0)] = c(0.0, 1.3);
        let u = expm(&a);
        let should_be_id = u.dagger().mul(&u);
        let diff = should_be_id.sub(&CMat::identity(2)).frobenius();
        assert!(diff < 1e-13);
        // exp(i*1.3*sigma_x) has cos(1.3) on the diagonal
        assert!((u[(0, 0)].re - 1.3f64.cos()).abs() < 1e-13);
    }

    #[test]
    fn rational_kernel_and_inverse() {
        use crate::rati;
        let a = vec![
            vec![rati(1), rati(2), rati(3)],
            vec![rati(2), rati(4), rati(6)],
        ];
        let k = rat_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rat = (0..3).map(|j| a[0][j] * v[j]).sum();
            assert!(dot.is_zero());
        }
        let m = vec![vec![rati(2), rati(1)], vec![rati(1), rati(1)]];
        let inv = rat_invert(&m).unwrap();
        assert_eq!(inv[0][0], rati(1));
        assert_eq!(inv[0][1], rati(-1));
    }

    #[test]
    fn sparse_matches_dense() {
        let mut s = SparseC::zeros(3, 3);
        s.push(0, 1, c(2.0, 0.0));
        s.push(2, 0, c(0.0, -1.0));
        let d = s.to_dense();
        let v = vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, 0.0)];
        let sv = s.matvec(&v);
        let dv = d.matvec(&v);
        for i in 0..3 {
            assert!((sv[i] - dv[i]).norm() < 1e-15);
        }
        let prod = s.mul(&s).to_dense();
        let dd = d.mul(&d);
        assert!(prod.sub(&dd).frobenius() < 1e-14);
    }
}
