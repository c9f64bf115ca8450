//! Reduced root-system combinatorics for products of classical families.
//!
//! All lattice data is exact rational: simple roots live in an ambient
//! coordinate space, roots are stored in simple-root coordinates, weights in
//! fundamental-weight coordinates. The invariant form is normalized so the
//! short roots of every simple factor have squared length 2.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::linalg::{rat_invert, rat_solve};
use crate::{rati, Error, Rat, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    fn letter(&self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        }
    }

    /// Number of roots of the simple factor of this family at the given rank.
    pub fn root_count(&self, rank: usize) -> usize {
        match self {
            Family::A => rank * (rank + 1),
            Family::B | Family::C => 2 * rank * rank,
            Family::D => 2 * rank * (rank - 1),
        }
    }
}

/// Weight in the fundamental-weight basis of a fixed [`RootSystemData`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightVec {
    pub fw: Vec<Rat>,
}

impl WeightVec {
    pub fn new(fw: Vec<Rat>) -> Self {
        WeightVec { fw }
    }

    pub fn from_ints(fw: &[i128]) -> Self {
        WeightVec {
            fw: fw.iter().map(|&n| rati(n)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        WeightVec {
            fw: vec![rati(0); rank],
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.fw.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.fw.iter().all(|c| c.denom() == &1)
    }

    /// Sum of fundamental-weight coordinates.
    pub fn height(&self) -> Rat {
        self.fw.iter().copied().sum()
    }

    pub fn add(&self, other: &WeightVec) -> WeightVec {
        WeightVec {
            fw: self.fw.iter().zip(&other.fw).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &WeightVec) -> WeightVec {
        WeightVec {
            fw: self.fw.iter().zip(&other.fw).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> WeightVec {
        WeightVec {
            fw: self.fw.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: Rat) -> WeightVec {
        WeightVec {
            fw: self.fw.iter().map(|a| a * s).collect(),
        }
    }
}

/// A reduced root system, possibly a product of classical factors.
#[derive(Debug, Clone)]
pub struct RootSystemData {
    pub family_spec: Vec<(Family, usize)>,
    pub rank: usize,
    pub ambient_dim: usize,
    /// Simple roots as ambient rational vectors.
    pub simple_roots: Vec<Vec<Rat>>,
    /// Diagonal ambient form scaling per coordinate (constant on each factor block).
    pub ambient_scale: Vec<Rat>,
    /// Gram matrix of the simple roots under the invariant form.
    pub gram: Vec<Vec<Rat>>,
    /// Cartan matrix `cartan[i][j] = 2<a_i,a_j>/<a_i,a_i>`.
    pub cartan: Vec<Vec<i128>>,
    inv_cartan: Vec<Vec<Rat>>,
    /// All roots in simple-root coordinates.
    pub roots: Vec<Vec<i128>>,
    /// Positive roots (nonnegative simple-root coordinates).
    pub positive_roots: Vec<Vec<i128>>,
}

/// Parse a family specification such as `"A2"`, `"A1xA1"`, `"D5xD5"`.
pub fn parse_family_spec(spec: &str) -> Result<Vec<(Family, usize)>> {
    let mut out = Vec::new();
    for part in spec.split(['x', 'X']) {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::UnsupportedDiagram(format!(
                "empty factor in `{spec}`"
            )));
        }
        let family = match part.chars().next().unwrap().to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            c => {
                return Err(Error::UnsupportedDiagram(format!(
                    "family `{c}` is not one of A, B, C, D"
                )))
            }
        };
        let rank: usize = part[1..]
            .parse()
            .map_err(|_| Error::UnsupportedDiagram(format!("bad rank in `{part}`")))?;
        if rank == 0 {
            return Err(Error::UnsupportedDiagram(format!("rank 0 in `{part}`")));
        }
        if family == Family::D && rank < 2 {
            return Err(Error::UnsupportedDiagram("D requires rank >= 2".into()));
        }
        out.push((family, rank));
    }
    if out.is_empty() {
        return Err(Error::UnsupportedDiagram(format!("empty spec `{spec}`")));
    }
    Ok(out)
}

fn factor_simple_roots(family: Family, rank: usize) -> (usize, Vec<Vec<Rat>>) {
    // ambient dimension and simple roots in the standard coordinates
    let (dim, roots): (usize, Vec<Vec<i128>>) = match family {
        Family::A => {
            let dim = rank + 1;
            let mut rs = Vec::new();
            for i in 0..rank {
                let mut v = vec![0; dim];
                v[i] = 1;
                v[i + 1] = -1;
                rs.push(v);
            }
            (dim, rs)
        }
        Family::B => {
            let dim = rank;
            let mut rs = Vec::new();
            for i in 0..rank - 1 {
                let mut v = vec![0; dim];
                v[i] = 1;
                v[i + 1] = -1;
                rs.push(v);
            }
            let mut v = vec![0; dim];
            v[rank - 1] = 1;
            rs.push(v);
            (dim, rs)
        }
        Family::C => {
            let dim = rank;
            let mut rs = Vec::new();
            for i in 0..rank - 1 {
                let mut v = vec![0; dim];
                v[i] = 1;
                v[i + 1] = -1;
                rs.push(v);
            }
            let mut v = vec![0; dim];
            v[rank - 1] = 2;
            rs.push(v);
            (dim, rs)
        }
        Family::D => {
            let dim = rank;
            let mut rs = Vec::new();
            for i in 0..rank - 1 {
                let mut v = vec![0; dim];
                v[i] = 1;
                v[i + 1] = -1;
                rs.push(v);
            }
            let mut v = vec![0; dim];
            v[rank - 2] = 1;
            v[rank - 1] = 1;
            rs.push(v);
            (dim, rs)
        }
    };
    (
        dim,
        roots
            .into_iter()
            .map(|v| v.into_iter().map(rati).collect())
            .collect(),
    )
}

fn std_dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Generate the full root set of one factor by closing the simple roots under
/// simple reflections (standard ambient coordinates, unscaled form).
fn close_under_reflections(simple: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<Rat>> = VecDeque::new();
    for r in simple {
        if seen.insert(r.clone()) {
            queue.push_back(r.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        for s in simple {
            let ss = std_dot(s, s);
            let coef = rati(2) * std_dot(&v, s) / ss;
            let refl: Vec<Rat> = v.iter().zip(s).map(|(x, y)| x - coef * y).collect();
            if seen.insert(refl.clone()) {
                queue.push_back(refl);
            }
        }
    }
    seen.into_iter().collect()
}

/// Build the product root system for the given family specification.
pub fn build_root_system(spec: &[(Family, usize)]) -> Result<RootSystemData> {
    if spec.is_empty() {
        return Err(Error::UnsupportedDiagram("empty family spec".into()));
    }
    let rank: usize = spec.iter().map(|&(_, r)| r).sum();
    let mut ambient_dim = 0usize;
    let mut simple_roots: Vec<Vec<Rat>> = Vec::new();
    let mut ambient_scale: Vec<Rat> = Vec::new();
    let mut factor_roots_ambient: Vec<(usize, Vec<Vec<Rat>>)> = Vec::new();

    for &(family, frank) in spec {
        let (fdim, froots) = factor_simple_roots(family, frank);
        let all = close_under_reflections(&froots);
        let expected = family.root_count(frank);
        if all.len() != expected {
            return Err(Error::InternalInconsistency(format!(
                "{}{} produced {} roots, expected {}",
                family.letter(),
                frank,
                all.len(),
                expected
            )));
        }
        // normalize: shortest root squared length 2 under the scaled form
        let min_sq = all
            .iter()
            .map(|r| std_dot(r, r))
            .min()
            .expect("nonempty root set");
        let scale = rati(2) / min_sq;
        factor_roots_ambient.push((ambient_dim, all));
        for fr in &froots {
            let mut v = vec![rati(0); ambient_dim];
            v.extend(fr.iter().copied());
            simple_roots.push(v);
        }
        ambient_scale.extend(std::iter::repeat_n(scale, fdim));
        ambient_dim += fdim;
    }
    // pad earlier simple roots to the full ambient dimension
    for v in simple_roots.iter_mut() {
        v.resize(ambient_dim, rati(0));
    }

    let form_dot = |a: &[Rat], b: &[Rat]| -> Rat {
        a.iter()
            .zip(b)
            .zip(&ambient_scale)
            .map(|((x, y), s)| x * y * s)
            .sum()
    };

    let mut gram = vec![vec![rati(0); rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            gram[i][j] = form_dot(&simple_roots[i], &simple_roots[j]);
        }
    }
    let mut cartan = vec![vec![0i128; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            let v = rati(2) * gram[i][j] / gram[i][i];
            if v.denom() != &1 {
                return Err(Error::InternalInconsistency(
                    "non-integral Cartan entry".into(),
                ));
            }
            cartan[i][j] = *v.numer();
        }
    }
    let cart_rat: Vec<Vec<Rat>> = cartan
        .iter()
        .map(|row| row.iter().map(|&n| rati(n)).collect())
        .collect();
    let inv_cartan = rat_invert(&cart_rat)
        .ok_or_else(|| Error::InternalInconsistency("singular Cartan matrix".into()))?;

    // roots in simple-root coordinates, factor by factor
    let mut roots: Vec<Vec<i128>> = Vec::new();
    let mut factor_base = 0usize;
    for (fi, &(_family, frank)) in spec.iter().enumerate() {
        let (offset, ref all) = factor_roots_ambient[fi];
        for r in all {
            // pad into full ambient space
            let mut amb = vec![rati(0); ambient_dim];
            for (k, &x) in r.iter().enumerate() {
                amb[offset + k] = x;
            }
            // solve Gram system for simple-root coordinates
            let rhs: Vec<Rat> = (0..rank)
                .map(|i| form_dot(&amb, &simple_roots[i]))
                .collect();
            let coords = rat_solve(&gram, &rhs)
                .ok_or_else(|| Error::InternalInconsistency("root outside simple span".into()))?;
            let mut int_coords = vec![0i128; rank];
            for (k, c) in coords.iter().enumerate() {
                if c.denom() != &1 {
                    return Err(Error::InternalInconsistency(
                        "non-integral simple-root coordinates".into(),
                    ));
                }
                int_coords[k] = *c.numer();
            }
            // sanity: support inside this factor's block
            debug_assert!(int_coords[..factor_base].iter().all(|&c| c == 0));
            roots.push(int_coords);
        }
        factor_base += frank;
    }
    let positive_roots: Vec<Vec<i128>> = roots
        .iter()
        .filter(|r| r.iter().all(|&c| c >= 0) && r.iter().any(|&c| c != 0))
        .cloned()
        .collect();
    if positive_roots.len() * 2 != roots.len() {
        return Err(Error::InternalInconsistency(
            "positive roots are not half".into(),
        ));
    }

    Ok(RootSystemData {
        family_spec: spec.to_vec(),
        rank,
        ambient_dim,
        simple_roots,
        ambient_scale,
        gram,
        cartan,
        inv_cartan,
        roots,
        positive_roots,
    })
}

/// Build from a textual spec such as `"A1xA1"`.
pub fn build_root_system_str(spec: &str) -> Result<RootSystemData> {
    build_root_system(&parse_family_spec(spec)?)
}

impl RootSystemData {
    /// Fundamental-weight coordinates -> simple-root coordinates.
    pub fn fw_to_sr(&self, fw: &[Rat]) -> Vec<Rat> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.inv_cartan[i][j] * fw[j]).sum())
            .collect()
    }

    /// Simple-root coordinates -> fundamental-weight coordinates.
    pub fn sr_to_fw(&self, sr: &[Rat]) -> Vec<Rat> {
        (0..self.rank)
            .map(|j| {
                (0..self.rank)
                    .map(|i| rati(self.cartan[j][i]) * sr[i])
                    .sum()
            })
            .collect()
    }

    /// Root (integer simple-root coordinates) as a weight vector.
    pub fn root_weight(&self, root: &[i128]) -> WeightVec {
        let sr: Vec<Rat> = root.iter().map(|&c| rati(c)).collect();
        WeightVec::new(self.sr_to_fw(&sr))
    }

    /// Invariant form on weights.
    pub fn form(&self, a: &WeightVec, b: &WeightVec) -> Rat {
        let sa = self.fw_to_sr(&a.fw);
        let sb = self.fw_to_sr(&b.fw);
        let mut acc = rati(0);
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += sa[i] * self.gram[i][j] * sb[j];
            }
        }
        acc
    }

    /// Pairing of a weight with a root given in simple-root coordinates.
    pub fn form_with_root(&self, a: &WeightVec, root: &[i128]) -> Rat {
        let sa = self.fw_to_sr(&a.fw);
        let mut acc = rati(0);
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += sa[i] * self.gram[i][j] * rati(root[j]);
            }
        }
        acc
    }

    pub fn root_norm_sq(&self, root: &[i128]) -> Rat {
        let mut acc = rati(0);
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += rati(root[i]) * self.gram[i][j] * rati(root[j]);
            }
        }
        acc
    }

    /// Half-sum of the positive roots (fundamental-weight coordinates all 1).
    pub fn rho(&self) -> WeightVec {
        WeightVec::new(vec![rati(1); self.rank])
    }

    /// Apply the simple reflection `s_i` to a weight.
    pub fn reflect(&self, w: &WeightVec, i: usize) -> WeightVec {
        let ci = w.fw[i];
        let mut fw = w.fw.clone();
        for k in 0..self.rank {
            fw[k] -= ci * rati(self.cartan[k][i]);
        }
        WeightVec::new(fw)
    }

    /// Apply a Weyl word (leftmost entry acts first).
    pub fn apply_word(&self, word: &[usize], w: &WeightVec) -> WeightVec {
        let mut cur = w.clone();
        for &i in word {
            cur = self.reflect(&cur, i);
        }
        cur
    }

    /// Sweep a toral covector to the dominant chamber.
    ///
    /// Returns the unique dominant representative together with the Weyl word
    /// that maps the input onto it (applied left to right). Ties on walls are
    /// resolved by never reflecting on a wall, which also yields the shortest
    /// word under the smallest-index-first ordering.
    pub fn sweep(&self, xi: &WeightVec) -> (WeightVec, Vec<usize>) {
        let mut cur = xi.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..self.rank {
                if cur.fw[i].is_negative() {
                    cur = self.reflect(&cur, i);
                    word.push(i);
                    continue 'outer;
                }
            }
            break;
        }
        (cur, word)
    }

    /// Weyl dimension formula, evaluated in exact rational arithmetic.
    pub fn weyl_dimension(&self, lambda: &WeightVec) -> Result<u128> {
        if !lambda.is_dominant() || !lambda.is_integral() {
            return Err(Error::Domain(format!(
                "weight {:?} is not dominant integral",
                lambda.fw
            )));
        }
        let rho = self.rho();
        let lam_rho = lambda.add(&rho);
        let mut dim = rati(1);
        for root in &self.positive_roots {
            dim *= self.form_with_root(&lam_rho, root) / self.form_with_root(&rho, root);
        }
        if dim.denom() != &1 || dim.numer() <= &0 {
            return Err(Error::InternalInconsistency(format!(
                "Weyl dimension {dim} is not a positive integer"
            )));
        }
        Ok(*dim.numer() as u128)
    }

    /// All weights of the irreducible module with the given highest weight.
    fn weight_set(&self, lambda: &WeightVec) -> BTreeSet<WeightVec> {
        let lam_sr = self.fw_to_sr(&lambda.fw);
        let mut seen: BTreeSet<WeightVec> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.clone());
        queue.push_back(lambda.clone());
        while let Some(nu) = queue.pop_front() {
            for i in 0..self.rank {
                let mut fw = nu.fw.clone();
                for k in 0..self.rank {
                    fw[k] -= rati(self.cartan[k][i]);
                }
                let cand = WeightVec::new(fw);
                if seen.contains(&cand) {
                    continue;
                }
                let (dom, _) = self.sweep(&cand);
                let dom_sr = self.fw_to_sr(&dom.fw);
                let ok = (0..self.rank).all(|k| {
                    let d = lam_sr[k] - dom_sr[k];
                    !d.is_negative() && d.denom() == &1
                });
                if ok {
                    seen.insert(cand.clone());
                    queue.push_back(cand);
                }
            }
        }
        seen
    }

    /// Weight multiplicities of the irreducible module `V_lambda` computed by
    /// the Freudenthal recursion, returned for every weight of the module.
    pub fn freudenthal(&self, lambda: &WeightVec) -> Result<BTreeMap<WeightVec, u64>> {
        if !lambda.is_dominant() || !lambda.is_integral() {
            return Err(Error::Domain(format!(
                "weight {:?} is not dominant integral",
                lambda.fw
            )));
        }
        let weights = self.weight_set(lambda);
        let rho = self.rho();
        let lam_rho_sq = self.form(&lambda.add(&rho), &lambda.add(&rho));
        let lam_sr = self.fw_to_sr(&lambda.fw);

        // dominant weights sorted by depth below lambda
        let mut dominants: Vec<(Rat, WeightVec)> = weights
            .iter()
            .filter(|w| w.is_dominant())
            .map(|w| {
                let sr = self.fw_to_sr(&w.fw);
                let depth: Rat = (0..self.rank).map(|k| lam_sr[k] - sr[k]).sum();
                (depth, w.clone())
            })
            .collect();
        dominants.sort();

        let pos_fw: Vec<WeightVec> = self
            .positive_roots
            .iter()
            .map(|r| self.root_weight(r))
            .collect();

        let mut mult: BTreeMap<WeightVec, u64> = BTreeMap::new();
        for (depth, mu) in &dominants {
            if depth.is_zero() {
                mult.insert(mu.clone(), 1);
                continue;
            }
            let mut num = rati(0);
            for (ri, root) in self.positive_roots.iter().enumerate() {
                let mut k = 1i128;
                loop {
                    let shifted = mu.add(&pos_fw[ri].scale(rati(k)));
                    if !weights.contains(&shifted) {
                        break;
                    }
                    let (dom, _) = self.sweep(&shifted);
                    let m = *mult.get(&dom).ok_or_else(|| {
                        Error::InternalInconsistency("Freudenthal order violated".into())
                    })? as i128;
                    num += rati(m) * self.form_with_root(&shifted, root);
                    k += 1;
                }
            }
            let mu_rho = mu.add(&rho);
            let denom = lam_rho_sq - self.form(&mu_rho, &mu_rho);
            let m = rati(2) * num / denom;
            if m.denom() != &1 || m.numer() <= &0 {
                return Err(Error::InternalInconsistency(format!(
                    "Freudenthal multiplicity {m} is not a positive integer"
                )));
            }
            mult.insert(mu.clone(), *m.numer() as u64);
        }

        let mut full = BTreeMap::new();
        for nu in weights {
            let (dom, _) = self.sweep(&nu);
            let m = mult[&dom];
            full.insert(nu, m);
        }
        Ok(full)
    }
}
