//! Young orthogonal representation.
//!
//! Rows and columns follow last-letter tableau order, so the restriction of
//! `ρ_λ` to `S_{n−1}` is block diagonal with one block per removable corner,
//! bottom corner first. The FFT relies on that layout.

use std::collections::HashMap;

use nalgebra::{DMatrix, Scalar};

use crate::error::{check_size, Error, Result};
use crate::permutation::Permutation;
use crate::young::{enumerate_partitions, Partition, StandardTableau};

pub type IrrepMatrix = DMatrix<f64>;

/// `ρ_λ(s_k)` stored row by row: each row has a diagonal entry and at most one
/// off-diagonal partner. The matrix is symmetric.
#[derive(Debug, Clone)]
pub struct Generator {
    diag: Vec<f64>,
    off: Vec<Option<(usize, f64)>>,
}

impl Generator {
    pub fn dense(&self) -> IrrepMatrix {
        let dim = self.diag.len();
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = self.diag[i];
            if let Some((j, v)) = self.off[i] {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `m ← G · m`, returning the number of multiply-adds spent.
    pub fn apply_left<T>(&self, m: &mut DMatrix<T>) -> u64
    where
        T: Scalar + Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let cols = m.ncols();
        let mut ops = 0u64;
        for i in 0..self.diag.len() {
            match self.off[i] {
                Some((j, _)) if j < i => continue,
                Some((j, v_ij)) => {
                    let (di, dj) = (self.diag[i], self.diag[j]);
                    let v_ji = self.off[j].map(|(_, v)| v).unwrap_or(0.0);
                    for c in 0..cols {
                        let (a, b) = (m[(i, c)], m[(j, c)]);
                        m[(i, c)] = a * di + b * v_ij;
                        m[(j, c)] = a * v_ji + b * dj;
                    }
                    ops += 4 * cols as u64;
                }
                None => {
                    let di = self.diag[i];
                    if di != 1.0 {
                        for c in 0..cols {
                            m[(i, c)] = m[(i, c)] * di;
                        }
                        ops += cols as u64;
                    }
                }
            }
        }
        ops
    }
}

/// All data needed to evaluate `ρ_λ` for one partition.
#[derive(Debug, Clone)]
pub struct Yor {
    partition: Partition,
    tableaux: Vec<StandardTableau>,
    generators: Vec<Generator>,
}

impl Yor {
    pub fn new(partition: &Partition) -> Self {
        let tableaux = partition.standard_tableaux();
        let index: HashMap<&StandardTableau, usize> =
            tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let n = partition.n();
        let generators = (1..n)
            .map(|k| {
                let mut diag = Vec::with_capacity(tableaux.len());
                let mut off = Vec::with_capacity(tableaux.len());
                for t in &tableaux {
                    let r = t.axial_distance(k) as f64;
                    diag.push(1.0 / r);
                    off.push(t.swap_entries(k).map(|u| {
                        let j = index[&u];
                        (j, (1.0 - 1.0 / (r * r)).sqrt())
                    }));
                }
                Generator { diag, off }
            })
            .collect();
        Yor {
            partition: partition.clone(),
            tableaux,
            generators,
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    /// `ρ_λ(s_k)`, `1 ≤ k ≤ n − 1`.
    pub fn generator(&self, k: usize) -> Result<&Generator> {
        if k == 0 || k >= self.n() {
            return Err(Error::domain(format!("s_{k} undefined for n = {}", self.n())));
        }
        Ok(&self.generators[k - 1])
    }

    pub fn generator_matrix(&self, k: usize) -> Result<IrrepMatrix> {
        Ok(self.generator(k)?.dense())
    }

    /// `ρ_λ(p)` through the adjacent word of `p`.
    pub fn matrix(&self, p: &Permutation) -> Result<IrrepMatrix> {
        check_size(self.n(), p.n())?;
        let mut m = DMatrix::identity(self.dim(), self.dim());
        self.apply_word_left(&p.adjacent_word(), &mut m);
        Ok(m)
    }

    /// `m ← ρ(s_k1) ⋯ ρ(s_km) · m`, returning the multiply-add count.
    pub(crate) fn apply_word_left<T>(&self, word: &[usize], m: &mut DMatrix<T>) -> u64
    where
        T: Scalar + Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        word.iter()
            .rev()
            .map(|&k| self.generators[k - 1].apply_left(m))
            .sum()
    }

    pub fn character(&self, p: &Permutation) -> Result<f64> {
        Ok(self.matrix(p)?.trace())
    }
}

/// The YOR of every partition of `n`, in reverse-lexicographic partition order.
#[derive(Debug, Clone)]
pub struct Irreps {
    n: usize,
    reps: Vec<Yor>,
}

impl Irreps {
    pub fn new(n: usize) -> Self {
        Irreps {
            n,
            reps: enumerate_partitions(n, n).iter().map(Yor::new).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reps(&self) -> &[Yor] {
        &self.reps
    }

    pub fn position(&self, partition: &Partition) -> Option<usize> {
        self.reps.iter().position(|r| r.partition() == partition)
    }

    pub fn get(&self, partition: &Partition) -> Option<&Yor> {
        self.position(partition).map(|i| &self.reps[i])
    }
}

/// Evaluates `ρ_λ(p)` on a freshly built representation.
pub fn yor(partition: &Partition, p: &Permutation) -> Result<IrrepMatrix> {
    check_size(partition.n(), p.n())?;
    Yor::new(partition).matrix(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::factorial;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn max_abs(m: &IrrepMatrix) -> f64 {
        m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }

    fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
        let mut im: Vec<usize> = (1..=n).collect();
        im.shuffle(rng);
        Permutation::from_images(&im).unwrap()
    }

    #[test]
    fn trivial_and_sign() {
        let y = Yor::new(&part(&[4]));
        for k in 1..4 {
            assert_eq!(y.generator_matrix(k).unwrap(), DMatrix::from_element(1, 1, 1.0));
        }
        let s = Yor::new(&part(&[1, 1]));
        assert_eq!(s.generator_matrix(1).unwrap(), DMatrix::from_element(1, 1, -1.0));
    }

    #[test]
    fn two_one_generators() {
        let y = Yor::new(&part(&[2, 1]));
        let g1 = y.generator_matrix(1).unwrap();
        assert_eq!(g1, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let g2 = y.generator_matrix(2).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expect = DMatrix::from_row_slice(2, 2, &[-0.5, h, h, 0.5]);
        assert!(max_abs(&(g2.clone() - expect)) < 1e-15);
        // Character of the standard irrep vanishes on transpositions.
        assert!(g1.trace().abs() < 1e-15 && g2.trace().abs() < 1e-15);
    }

    #[test]
    fn generators_are_symmetric_involutions() {
        for n in 2..=7 {
            for p in enumerate_partitions(n, n) {
                let y = Yor::new(&p);
                for k in 1..n {
                    let g = y.generator_matrix(k).unwrap();
                    let id = DMatrix::identity(y.dim(), y.dim());
                    assert!(max_abs(&(&g * &g - &id)) < 1e-12);
                    assert!(max_abs(&(&g - g.transpose())) < 1e-15);
                }
            }
        }
    }

    #[test]
    fn homomorphism_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=7 {
            for p in enumerate_partitions(n, n) {
                let y = Yor::new(&p);
                let id = DMatrix::identity(y.dim(), y.dim());
                assert_eq!(y.matrix(&Permutation::identity(n)).unwrap(), id);
                for _ in 0..200 {
                    let a = random_perm(n, &mut rng);
                    let b = random_perm(n, &mut rng);
                    let lhs = y.matrix(&a.compose(&b).unwrap()).unwrap();
                    let ra = y.matrix(&a).unwrap();
                    let rhs = &ra * y.matrix(&b).unwrap();
                    assert!(max_abs(&(lhs - rhs)) <= 1e-10, "{p}");
                    assert!(max_abs(&(ra.transpose() * &ra - &id)) <= 1e-10);
                    let inv = y.matrix(&a.inverse()).unwrap();
                    assert!(max_abs(&(&ra * inv - &id)) <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for n in 1..=6 {
            let reps: Vec<Yor> = enumerate_partitions(n, n).iter().map(Yor::new).collect();
            let perms: Vec<Permutation> = Permutation::all(n).collect();
            let chars: Vec<Vec<f64>> = reps
                .iter()
                .map(|y| perms.iter().map(|q| y.character(q).unwrap()).collect())
                .collect();
            let order = factorial(n) as f64;
            for (i, ci) in chars.iter().enumerate() {
                for (j, cj) in chars.iter().enumerate() {
                    let ip: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum::<f64>() / order;
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-9, "n={n} {i} {j} {ip}");
                }
            }
        }
        // Σ_σ χ(σ)² = |S_4| for (2,2).
        let y = Yor::new(&part(&[2, 2]));
        let s: f64 = Permutation::all(4).map(|q| y.character(&q).unwrap().powi(2)).sum();
        assert!((s - 24.0).abs() < 1e-10);
    }

    #[test]
    fn jucys_murphy_diagonal_with_contents() {
        for n in 2..=6 {
            for p in enumerate_partitions(n, n) {
                let y = Yor::new(&p);
                for k in 2..=n {
                    let mut x = DMatrix::zeros(y.dim(), y.dim());
                    for i in 1..k {
                        x += y.matrix(&Permutation::transposition(n, i, k).unwrap()).unwrap();
                    }
                    for (a, t) in y.tableaux().iter().enumerate() {
                        for b in 0..y.dim() {
                            let want = if a == b { t.content(k) as f64 } else { 0.0 };
                            assert!((x[(a, b)] - want).abs() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicities_match_weyl_dimension() {
        // Multiplicity of S^λ in (C^d)^{⊗n} is (1/n!) Σ_σ χ_λ(σ) d^{cycles(σ)}.
        for (n, d) in [(6usize, 2usize), (4, 3), (5, 3)] {
            let perms: Vec<Permutation> = Permutation::all(n).collect();
            for p in enumerate_partitions(n, d) {
                let y = Yor::new(&p);
                let total: f64 = perms
                    .iter()
                    .map(|q| {
                        let fixed = n - q.locality();
                        let cycles = q.cycles().len() + fixed;
                        y.character(q).unwrap() * (d as f64).powi(cycles as i32)
                    })
                    .sum();
                let mult = total / factorial(n) as f64;
                assert!((mult - p.weyl_dimension(d).unwrap() as f64).abs() < 1e-8, "{p}");
            }
        }
    }

    #[test]
    fn restriction_is_block_diagonal() {
        let n = 5;
        for p in enumerate_partitions(n, n) {
            let y = Yor::new(&p);
            let mut offset = 0;
            for row in p.removable_rows() {
                let sub = Yor::new(&p.remove_from_row(row));
                for k in 1..n - 1 {
                    let big = y.generator_matrix(k).unwrap();
                    let small = sub.generator_matrix(k).unwrap();
                    let block = big.view((offset, offset), (sub.dim(), sub.dim()));
                    assert!(max_abs(&(block.clone_owned() - small)) < 1e-15);
                }
                offset += sub.dim();
            }
            assert_eq!(offset, y.dim());
        }
    }

    #[test]
    fn size_mismatch() {
        assert!(yor(&part(&[2, 1]), &Permutation::identity(4)).is_err());
    }
}
