//! Young-Yamanouchi basis of `(ℂ^d)^{⊗n}`.
//!
//! Per shape `λ` (at most `d` rows) the vector for the first tableau and the
//! highest SU(d) weight is cut out of a computational basis state with a
//! Jucys-Murphy spectral projector. Other tableaux follow from Young's
//! orthogonal form, other weights from a lowering-operator recipe that is
//! replayed identically for every tableau. As a result
//! `⟨(λ,s,w)| π(σ) |(λ,t,w)⟩ = ρ_λ(σ)[s,t]` holds entrywise.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap, VecDeque};

use num_complex::Complex64;
use serde::Serialize;

use super::{digits_to_index, index_to_digits, swap_amplitudes, Statevector};
use crate::error::{Caps, Error, Result};
use crate::young::{enumerate_partitions, Partition, StandardTableau};
use crate::yor::Yor;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisLabel {
    pub partition: Partition,
    /// Index into `Yor::new(partition).tableaux()`.
    pub tableau: usize,
    pub weight_index: usize,
}

#[derive(Debug, Clone)]
pub struct YoungBasisVector {
    pub label: BasisLabel,
    pub tableau: StandardTableau,
    /// Occupation numbers `(#0, #1, ..., #(d−1))` of the SU(d) weight.
    pub weight: Vec<usize>,
    pub vector: Statevector,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisRecord {
    pub partition: String,
    pub tableau: Vec<Vec<usize>>,
    pub tableau_index: usize,
    pub weight_index: usize,
    pub weight: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl YoungBasisVector {
    pub fn to_record(&self) -> BasisRecord {
        BasisRecord {
            partition: self.label.partition.to_string(),
            tableau: self.tableau.rows().to_vec(),
            tableau_index: self.label.tableau,
            weight_index: self.label.weight_index,
            weight: self.weight.clone(),
            amplitudes: self.vector.to_json(),
        }
    }

    /// Largest `‖π̃(X_k)v − content_k v‖` over `k = 2..n`.
    pub fn jm_residual(&self) -> f64 {
        let v = &self.vector;
        (2..=v.n)
            .map(|k| {
                let xv = apply_jm(&v.amps, k, v.d, v.n);
                let c = self.tableau.content(k) as f64;
                xv.iter()
                    .zip(&v.amps)
                    .map(|(a, b)| (a - b * c).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
struct RecipeStep {
    src: usize,
    level: usize,
    coeffs: Vec<(usize, Complex64)>,
    inv_norm: f64,
}

/// Everything needed to produce the vectors of one shape.
#[derive(Debug, Clone)]
pub struct ShapeBlock {
    d: usize,
    n: usize,
    yor: Yor,
    seed: Statevector,
    /// BFS tree over tableaux: `(parent, k)` with `t = s_k t_parent`.
    parents: Vec<Option<(usize, usize)>>,
    bfs_order: Vec<usize>,
    recipe: Vec<RecipeStep>,
    /// Creation id of each weight index.
    order: Vec<usize>,
    /// Weight of each creation id.
    weights: Vec<Vec<usize>>,
}

impl ShapeBlock {
    fn new(partition: &Partition, d: usize, n: usize) -> Result<Self> {
        let yor = Yor::new(partition);
        let tableaux = yor.tableaux();
        let lookup: HashMap<&[Vec<usize>], usize> =
            tableaux.iter().enumerate().map(|(i, t)| (t.rows(), i)).collect();

        let mut parents = vec![None; tableaux.len()];
        let mut seen = vec![false; tableaux.len()];
        let mut bfs_order = vec![0];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for k in 1..n {
                if let Some(t2) = tableaux[i].swap_entries(k) {
                    let j = lookup[t2.rows()];
                    if !seen[j] {
                        seen[j] = true;
                        parents[j] = Some((i, k));
                        bfs_order.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        debug_assert_eq!(bfs_order.len(), tableaux.len());

        let seed = highest_weight_seed(&tableaux[0], d, n)?;
        let mut block = ShapeBlock {
            d,
            n,
            yor,
            seed,
            parents,
            bfs_order,
            recipe: Vec::new(),
            order: Vec::new(),
            weights: Vec::new(),
        };
        block.build_recipe(partition);
        Ok(block)
    }

    fn build_recipe(&mut self, partition: &Partition) {
        let d = self.d;
        let mut hw = partition.parts().to_vec();
        hw.resize(d, 0);
        let mut vecs = vec![self.seed.amps.clone()];
        let mut weights = vec![hw.clone()];
        let mut pending: BTreeMap<Reverse<Vec<usize>>, Vec<usize>> = BTreeMap::new();
        pending.insert(Reverse(hw), vec![0]);
        let mut order = Vec::new();
        let mut recipe = Vec::new();
        while let Some((Reverse(mu), ids)) = pending.pop_first() {
            order.extend_from_slice(&ids);
            for &src in &ids {
                for level in 0..d.saturating_sub(1) {
                    if mu[level] == 0 {
                        continue;
                    }
                    let mut target = mu.clone();
                    target[level] -= 1;
                    target[level + 1] += 1;
                    let mut cand = lower(&vecs[src], level, d, self.n);
                    let scale = norm(&cand);
                    let existing = pending.entry(Reverse(target.clone())).or_default();
                    let mut coeffs: Vec<(usize, Complex64)> =
                        existing.iter().map(|&j| (j, ZERO)).collect();
                    for _ in 0..2 {
                        for (slot, &j) in coeffs.iter_mut().zip(existing.iter()) {
                            let c = inner(&vecs[j], &cand);
                            slot.1 += c;
                            for (x, y) in cand.iter_mut().zip(&vecs[j]) {
                                *x -= c * y;
                            }
                        }
                    }
                    let res = norm(&cand);
                    if res > 1e-7 * scale.max(1.0) {
                        let inv_norm = 1.0 / res;
                        cand.iter_mut().for_each(|x| *x *= inv_norm);
                        existing.push(vecs.len());
                        vecs.push(cand);
                        weights.push(target);
                        recipe.push(RecipeStep {
                            src,
                            level,
                            coeffs,
                            inv_norm,
                        });
                    }
                }
            }
        }
        self.recipe = recipe;
        self.order = order;
        self.weights = weights;
    }

    pub fn partition(&self) -> &Partition {
        self.yor.partition()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        self.yor.tableaux()
    }

    pub fn yor(&self) -> &Yor {
        &self.yor
    }

    /// `dim W_λ`, the SU(d) multiplicity.
    pub fn multiplicity(&self) -> usize {
        self.order.len()
    }

    pub fn weight(&self, weight_index: usize) -> &[usize] {
        &self.weights[self.order[weight_index]]
    }

    fn move_along(&self, v: &[Complex64], parent: usize, k: usize) -> Vec<Complex64> {
        let r = self.tableaux()[parent].axial_distance(k) as f64;
        let off = (1.0 - 1.0 / (r * r)).sqrt();
        let mut out = v.to_vec();
        swap_amplitudes(&mut out, k, k + 1, self.d, self.n);
        out.iter_mut().zip(v).for_each(|(o, x)| *o = (*o - x / r) / off);
        out
    }

    /// Highest-weight vector of tableau `t`.
    fn top_vector(&self, t: usize) -> Vec<Complex64> {
        let mut path = Vec::new();
        let mut cur = t;
        while let Some((p, k)) = self.parents[cur] {
            path.push((p, k));
            cur = p;
        }
        let mut v = self.seed.amps.clone();
        for &(p, k) in path.iter().rev() {
            v = self.move_along(&v, p, k);
        }
        v
    }

    /// All weight vectors of one tableau, by creation id.
    fn replay(&self, top: Vec<Complex64>) -> Vec<Vec<Complex64>> {
        let mut vecs = vec![top];
        for step in &self.recipe {
            let mut cand = lower(&vecs[step.src], step.level, self.d, self.n);
            for &(j, c) in &step.coeffs {
                for (x, y) in cand.iter_mut().zip(&vecs[j]) {
                    *x -= c * y;
                }
            }
            cand.iter_mut().for_each(|x| *x *= step.inv_norm);
            vecs.push(cand);
        }
        vecs
    }

    fn wrap(&self, t: usize, weight_index: usize, amps: Vec<Complex64>) -> YoungBasisVector {
        YoungBasisVector {
            label: BasisLabel {
                partition: self.partition().clone(),
                tableau: t,
                weight_index,
            },
            tableau: self.tableaux()[t].clone(),
            weight: self.weight(weight_index).to_vec(),
            vector: Statevector {
                d: self.d,
                n: self.n,
                amps,
            },
        }
    }

    pub fn vector(&self, tableau: usize, weight_index: usize) -> Result<YoungBasisVector> {
        if tableau >= self.tableaux().len() || weight_index >= self.multiplicity() {
            return Err(Error::domain(format!(
                "label (tableau {tableau}, weight {weight_index}) out of range for shape {} ({} tableaux, multiplicity {})",
                self.partition(),
                self.tableaux().len(),
                self.multiplicity()
            )));
        }
        let mut all = self.replay(self.top_vector(tableau));
        let amps = std::mem::take(&mut all[self.order[weight_index]]);
        Ok(self.wrap(tableau, weight_index, amps))
    }

    /// Every vector of this shape, ordered by tableau then weight index.
    pub fn vectors(&self) -> Vec<YoungBasisVector> {
        let mut tops: Vec<Option<Vec<Complex64>>> = vec![None; self.tableaux().len()];
        tops[0] = Some(self.seed.amps.clone());
        for &t in &self.bfs_order[1..] {
            let (p, k) = self.parents[t].expect("non-root tableau has a parent");
            let v = self.move_along(tops[p].as_ref().expect("parent built first"), p, k);
            tops[t] = Some(v);
        }
        let mut out = Vec::with_capacity(tops.len() * self.multiplicity());
        for (t, top) in tops.into_iter().enumerate() {
            let mut all = self.replay(top.expect("every tableau reached"));
            for w in 0..self.multiplicity() {
                let amps = std::mem::take(&mut all[self.order[w]]);
                out.push(self.wrap(t, w, amps));
            }
        }
        out
    }
}

/// Lazily evaluated Young basis: shapes are prepared up front, vectors on demand.
#[derive(Debug, Clone)]
pub struct YoungBasis {
    n: usize,
    d: usize,
    blocks: Vec<ShapeBlock>,
}

impl YoungBasis {
    pub fn new(n: usize, d: usize, caps: &Caps) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::domain("young basis needs n ≥ 1 and d ≥ 1"));
        }
        caps.check_dense(d, n)?;
        let blocks = enumerate_partitions(n, d)
            .iter()
            .map(|p| ShapeBlock::new(p, d, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(YoungBasis { n, d, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn blocks(&self) -> &[ShapeBlock] {
        &self.blocks
    }

    pub fn block(&self, partition: &Partition) -> Option<&ShapeBlock> {
        self.blocks.iter().find(|b| b.partition() == partition)
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for t in 0..b.tableaux().len() {
                for w in 0..b.multiplicity() {
                    out.push(BasisLabel {
                        partition: b.partition().clone(),
                        tableau: t,
                        weight_index: w,
                    });
                }
            }
        }
        out
    }

    pub fn vector(&self, label: &BasisLabel) -> Result<YoungBasisVector> {
        let block = self.block(&label.partition).ok_or_else(|| {
            Error::domain(format!(
                "shape {} does not occur for n = {}, d = {}",
                label.partition, self.n, self.d
            ))
        })?;
        block.vector(label.tableau, label.weight_index)
    }

    pub fn all(&self, caps: &Caps) -> Result<Vec<YoungBasisVector>> {
        caps.check_basis(self.d, self.n)?;
        Ok(self.blocks.iter().flat_map(|b| b.vectors()).collect())
    }
}

/// The full orthonormal Young basis, ordered by shape (reverse-lex), tableau,
/// then weight index.
pub fn young_basis(n: usize, d: usize, caps: &Caps) -> Result<Vec<YoungBasisVector>> {
    caps.check_basis(d, n)?;
    YoungBasis::new(n, d, caps)?.all(caps)
}

fn highest_weight_seed(t0: &StandardTableau, d: usize, n: usize) -> Result<Statevector> {
    let contents = t0.content_vector();
    let dim = d.pow(n as u32);
    let yamanouchi: Vec<usize> = (1..=n).map(|k| t0.position(k).0).collect();
    let project_from = |idx: usize| {
        let mut v = vec![ZERO; dim];
        v[idx] = Complex64::new(1.0, 0.0);
        jm_project(v, &contents, d, n)
    };
    let mut best = project_from(digits_to_index(&yamanouchi, d));
    if norm(&best) < 1e-6 {
        let mut counts = vec![0; d];
        yamanouchi.iter().for_each(|&r| counts[r] += 1);
        for idx in 0..dim {
            let digits = index_to_digits(idx, d, n);
            let mut c = vec![0; d];
            digits.iter().for_each(|&r| c[r] += 1);
            if c == counts {
                let v = project_from(idx);
                if norm(&v) > norm(&best) {
                    best = v;
                }
            }
        }
    }
    let nrm = norm(&best);
    if nrm < 1e-9 {
        return Err(Error::domain(format!(
            "no Jucys-Murphy eigenvector found for tableau {:?}",
            t0.rows()
        )));
    }
    let peak = best.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let pivot = *best
        .iter()
        .find(|a| a.norm() >= peak - 1e-12 * nrm)
        .expect("nonzero vector has a peak");
    let phase = pivot.conj() / pivot.norm() / nrm;
    best.iter_mut().for_each(|a| *a *= phase);
    Ok(Statevector { d, n, amps: best })
}

/// Projects onto the joint eigenspace `π̃(X_k) = contents[k−1]` for all `k`.
fn jm_project(mut v: Vec<Complex64>, contents: &[i64], d: usize, n: usize) -> Vec<Complex64> {
    for k in 2..=n {
        let ck = contents[k - 1];
        let lo = -((k.min(d) - 1) as i64);
        for c in lo..k as i64 {
            if c == ck {
                continue;
            }
            let xv = apply_jm(&v, k, d, n);
            let denom = (ck - c) as f64;
            v = xv
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - y * c as f64) / denom)
                .collect();
        }
    }
    v
}

/// `π̃(X_k) v` with `X_k = Σ_{i<k} (i k)`.
fn apply_jm(v: &[Complex64], k: usize, d: usize, n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    for i in 1..k {
        let mut s = v.to_vec();
        swap_amplitudes(&mut s, i, k, d, n);
        out.iter_mut().zip(&s).for_each(|(o, x)| *o += x);
    }
    out
}

/// `Σ_q |level+1⟩⟨level|_q` applied to `v`.
fn lower(v: &[Complex64], level: usize, d: usize, n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    let strides: Vec<usize> = (0..n).map(|q| d.pow((n - 1 - q) as u32)).collect();
    for (idx, &a) in v.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        for &s in &strides {
            if (idx / s) % d == level {
                out[idx + s] += a;
            }
        }
    }
    out
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
