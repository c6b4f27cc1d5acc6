//! Fourier transform on `S_n`: `f̂(λ) = Σ_σ f(σ) ρ_λ(σ)`.
//!
//! The fast transform runs down the chain `S_n ⊃ S_{n−1} ⊃ ⋯ ⊃ S_1`. Every
//! `σ ∈ S_m` factors uniquely as `c_j ∘ τ` with `τ ∈ S_{m−1}`, `j = σ(m)` and
//! `c_j = s_j ∘ s_{j+1} ∘ ⋯ ∘ s_{m−1}`. Because `ρ_λ|S_{m−1}` is block diagonal
//! in last-letter order,
//! `f̂(λ) = Σ_j ρ_λ(c_j) · ⊕_{μ = λ − □} f̂_j(μ)` where `f_j(τ) = f(c_j τ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::AlgebraElement;
use crate::error::{check_size, Caps, Error, Result};
use crate::permutation::{factorial, Permutation};
use crate::young::Partition;
use crate::yor::{Irreps, Yor};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Position of `p` in coset order: `j0 · (n−1)! + rank(τ)` where `j0 = p(n) − 1`
/// and `τ ∈ S_{n−1}` is `p` with its last letter stripped and values relabeled.
pub fn coset_rank(p: &Permutation) -> usize {
    let mut a = p.map().to_vec();
    let mut rank = 0;
    for m in (1..=a.len()).rev() {
        let j0 = a[m - 1];
        rank += j0 * factorial(m - 1) as usize;
        a.truncate(m - 1);
        a.iter_mut().filter(|x| **x > j0).for_each(|x| *x -= 1);
    }
    rank
}

pub fn coset_unrank(n: usize, mut rank: usize) -> Permutation {
    let mut digits = vec![0; n];
    for m in (1..=n).rev() {
        let f = factorial(m - 1) as usize;
        digits[m - 1] = rank / f;
        rank %= f;
    }
    let mut a: Vec<usize> = Vec::with_capacity(n);
    for (m, &j0) in digits.iter().enumerate() {
        debug_assert!(j0 <= m);
        a.iter_mut().filter(|x| **x >= j0).for_each(|x| *x += 1);
        a.push(j0);
    }
    let images: Vec<usize> = a.iter().map(|x| x + 1).collect();
    Permutation::from_images(&images).expect("coset digits give a bijection")
}

/// A full table of `n!` values in coset order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseFunction {
    n: usize,
    values: Vec<Complex64>,
}

impl DenseFunction {
    pub fn new(n: usize, values: Vec<Complex64>, caps: &Caps) -> Result<Self> {
        caps.check_factorial(n)?;
        check_size(factorial(n) as usize, values.len())?;
        Ok(DenseFunction { n, values })
    }

    pub fn zeros(n: usize, caps: &Caps) -> Result<Self> {
        caps.check_factorial(n)?;
        Ok(DenseFunction {
            n,
            values: vec![ZERO; factorial(n) as usize],
        })
    }

    pub fn from_element(f: &AlgebraElement, caps: &Caps) -> Result<Self> {
        let mut out = Self::zeros(f.n(), caps)?;
        for (p, c) in f.terms() {
            out.values[coset_rank(p)] += c;
        }
        Ok(out)
    }

    /// Uniform real and imaginary parts in `[−1, 1)`.
    pub fn random(n: usize, seed: u64, caps: &Caps) -> Result<Self> {
        caps.check_factorial(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..factorial(n))
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Ok(DenseFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, p: &Permutation) -> Complex64 {
        self.values[coset_rank(p)]
    }

    pub fn to_element(&self) -> AlgebraElement {
        AlgebraElement::from_terms(
            self.n,
            self.values
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != ZERO)
                .map(|(r, c)| (coset_unrank(self.n, r), *c)),
        )
        .expect("sizes agree")
    }

    pub fn max_abs_diff(&self, other: &DenseFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    n: usize,
    blocks: Vec<(Partition, DMatrix<Complex64>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockJson {
    pub partition: String,
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl FourierCoefficients {
    pub fn new(n: usize, blocks: Vec<(Partition, DMatrix<Complex64>)>) -> Result<Self> {
        let expected = Irreps::new(n);
        check_size(expected.reps().len(), blocks.len())?;
        for ((p, m), rep) in blocks.iter().zip(expected.reps()) {
            if p != rep.partition() {
                return Err(Error::domain(format!("block {p} out of order, expected {}", rep.partition())));
            }
            check_size(rep.dim(), m.nrows())?;
            check_size(rep.dim(), m.ncols())?;
        }
        Ok(FourierCoefficients { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[(Partition, DMatrix<Complex64>)] {
        &self.blocks
    }

    pub fn block(&self, partition: &Partition) -> Option<&DMatrix<Complex64>> {
        self.blocks.iter().find(|(p, _)| p == partition).map(|(_, m)| m)
    }

    pub fn max_abs_diff(&self, other: &FourierCoefficients) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|((_, a), (_, b))| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    /// `(1/n!) Σ_λ d_λ ‖f̂(λ)‖_F²`.
    pub fn plancherel_norm_sqr(&self) -> f64 {
        let total: f64 = self
            .blocks
            .iter()
            .map(|(_, m)| m.nrows() as f64 * m.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum();
        total / factorial(self.n) as f64
    }

    pub fn to_json(&self) -> Vec<BlockJson> {
        self.blocks
            .iter()
            .map(|(p, m)| BlockJson {
                partition: p.to_string(),
                dim: m.nrows(),
                re: m.row_iter().map(|r| r.iter().map(|c| c.re).collect()).collect(),
                im: m.row_iter().map(|r| r.iter().map(|c| c.im).collect()).collect(),
            })
            .collect()
    }
}

/// A transform result with its multiply-add count.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub coefficients: FourierCoefficients,
    pub ops: u64,
}

#[derive(Debug, Clone)]
struct Level {
    irreps: Irreps,
    /// Per `λ ⊢ m`: `(index of μ in level m−1, row offset)` per removable corner.
    branches: Vec<Vec<(usize, usize)>>,
}

/// Precomputed representations of `S_1, ..., S_n` for repeated transforms.
#[derive(Debug, Clone)]
pub struct SnFourier {
    n: usize,
    levels: Vec<Level>,
}

impl SnFourier {
    pub fn new(n: usize, caps: &Caps) -> Result<Self> {
        caps.check_factorial(n)?;
        if n == 0 {
            return Err(Error::domain("S_0 has no transform here; n must be at least 1"));
        }
        let mut levels: Vec<Level> = Vec::with_capacity(n);
        for m in 1..=n {
            let irreps = Irreps::new(m);
            let branches = irreps
                .reps()
                .iter()
                .map(|rep| {
                    if m == 1 {
                        return Vec::new();
                    }
                    let below = &levels[m - 2].irreps;
                    let mut offset = 0;
                    rep.partition()
                        .removable_rows()
                        .into_iter()
                        .map(|row| {
                            let mu = rep.partition().remove_from_row(row);
                            let idx = below.position(&mu).expect("branching stays inside the level");
                            let entry = (idx, offset);
                            offset += below.reps()[idx].dim();
                            entry
                        })
                        .collect()
                })
                .collect();
            levels.push(Level { irreps, branches });
        }
        Ok(SnFourier { n, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn irreps(&self) -> &Irreps {
        &self.levels[self.n - 1].irreps
    }

    fn wrap(&self, blocks: Vec<DMatrix<Complex64>>) -> FourierCoefficients {
        FourierCoefficients {
            n: self.n,
            blocks: self
                .irreps()
                .reps()
                .iter()
                .map(|r| r.partition().clone())
                .zip(blocks)
                .collect(),
        }
    }

    /// Direct sum over the support; each `ρ_λ(σ)` is built from its adjacent word.
    pub fn naive(&self, f: &AlgebraElement) -> Result<Transformed> {
        check_size(self.n, f.n())?;
        let mut ops = 0u64;
        let blocks = self
            .irreps()
            .reps()
            .iter()
            .map(|rep| {
                let dim = rep.dim();
                let mut acc = DMatrix::from_element(dim, dim, ZERO);
                for (p, c) in f.terms() {
                    let mut m = DMatrix::<f64>::identity(dim, dim);
                    ops += rep.apply_word_left(&p.adjacent_word(), &mut m);
                    acc.zip_apply(&m, |a, x| *a += c * x);
                    ops += (dim * dim) as u64;
                }
                acc
            })
            .collect();
        Ok(Transformed {
            coefficients: self.wrap(blocks),
            ops,
        })
    }

    pub fn fft(&self, f: &DenseFunction) -> Result<Transformed> {
        check_size(self.n, f.n())?;
        let mut ops = 0u64;
        let blocks = self.fft_level(self.n, &f.values, &mut ops);
        Ok(Transformed {
            coefficients: self.wrap(blocks),
            ops,
        })
    }

    fn fft_level(&self, m: usize, vals: &[Complex64], ops: &mut u64) -> Vec<DMatrix<Complex64>> {
        if m == 1 {
            return vec![DMatrix::from_element(1, 1, vals[0])];
        }
        let level = &self.levels[m - 1];
        let reps: &[Yor] = level.irreps.reps();
        let mut out: Vec<DMatrix<Complex64>> =
            reps.iter().map(|r| DMatrix::from_element(r.dim(), r.dim(), ZERO)).collect();
        let sub = factorial(m - 1) as usize;
        for j in 1..=m {
            let inner = self.fft_level(m - 1, &vals[(j - 1) * sub..j * sub], ops);
            for (li, rep) in reps.iter().enumerate() {
                let dim = rep.dim();
                let mut block = DMatrix::from_element(dim, dim, ZERO);
                for &(mu, off) in &level.branches[li] {
                    let b = &inner[mu];
                    block
                        .view_mut((off, off), (b.nrows(), b.ncols()))
                        .copy_from(b);
                }
                for k in (j..m).rev() {
                    *ops += rep.generator(k).expect("1 ≤ k < m").apply_left(&mut block);
                }
                out[li] += block;
                *ops += (dim * dim) as u64;
            }
        }
        out
    }

    /// `f(σ) = (1/n!) Σ_λ d_λ Σ_ij f̂(λ)_ij ρ_λ(σ)_ij`, using that `ρ_λ` is real orthogonal.
    pub fn inverse(&self, coeffs: &FourierCoefficients) -> Result<DenseFunction> {
        check_size(self.n, coeffs.n)?;
        let reps = self.irreps().reps();
        check_size(reps.len(), coeffs.blocks.len())?;
        for (rep, (p, m)) in reps.iter().zip(&coeffs.blocks) {
            if rep.partition() != p || m.nrows() != rep.dim() || m.ncols() != rep.dim() {
                return Err(Error::domain(format!(
                    "block {p} of size {}×{} does not match {} of dimension {}",
                    m.nrows(),
                    m.ncols(),
                    rep.partition(),
                    rep.dim()
                )));
            }
        }
        let total = factorial(self.n) as usize;
        let scale = 1.0 / total as f64;
        let values = (0..total)
            .map(|r| {
                let sigma = coset_unrank(self.n, r);
                let word = sigma.adjacent_word();
                reps.iter()
                    .zip(&coeffs.blocks)
                    .map(|(rep, (_, f))| {
                        let mut m = DMatrix::<f64>::identity(rep.dim(), rep.dim());
                        rep.apply_word_left(&word, &mut m);
                        let s: Complex64 = f.iter().zip(m.iter()).map(|(a, b)| a * b).sum();
                        s * rep.dim() as f64
                    })
                    .sum::<Complex64>()
                    * scale
            })
            .collect();
        Ok(DenseFunction { n: self.n, values })
    }
}

pub fn fourier_naive(f: &AlgebraElement, caps: &Caps) -> Result<FourierCoefficients> {
    Ok(SnFourier::new(f.n(), caps)?.naive(f)?.coefficients)
}

pub fn fourier_fft(f: &DenseFunction, caps: &Caps) -> Result<FourierCoefficients> {
    Ok(SnFourier::new(f.n(), caps)?.fft(f)?.coefficients)
}

pub fn fourier_inverse(coeffs: &FourierCoefficients, caps: &Caps) -> Result<DenseFunction> {
    SnFourier::new(coeffs.n(), caps)?.inverse(coeffs)
}

/// `max_λ ‖(f∗g)^(λ) − f̂(λ)ĝ(λ)‖_max`.
pub fn convolution_theorem_check(f: &AlgebraElement, g: &AlgebraElement, caps: &Caps) -> Result<f64> {
    check_size(f.n(), g.n())?;
    let engine = SnFourier::new(f.n(), caps)?;
    let fg = engine.naive(&f.convolve(g)?)?.coefficients;
    let fh = engine.naive(f)?.coefficients;
    let gh = engine.naive(g)?.coefficients;
    Ok(fg
        .blocks
        .iter()
        .zip(fh.blocks.iter().zip(&gh.blocks))
        .map(|((_, c), ((_, a), (_, b)))| (c - a * b).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::random_hermitian_k_local;

    fn caps() -> Caps {
        Caps::default()
    }

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    fn random_sparse(n: usize, terms: usize, seed: u64) -> AlgebraElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total = factorial(n) as usize;
        AlgebraElement::from_terms(
            n,
            (0..terms).map(|_| {
                (
                    coset_unrank(n, rng.gen_range(0..total)),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn coset_order_is_a_bijection_and_factors() {
        for n in 1..=6 {
            for r in 0..factorial(n) as usize {
                let p = coset_unrank(n, r);
                assert_eq!(coset_rank(&p), r);
            }
        }
        // σ = c_j ∘ τ with j = σ(m), c_j = s_j ∘ ⋯ ∘ s_{m−1}.
        let m = 5;
        let sub = factorial(m - 1) as usize;
        for r in 0..factorial(m) as usize {
            let sigma = coset_unrank(m, r);
            let j = sigma.image(m);
            assert_eq!(j - 1, r / sub);
            let mut c = Permutation::identity(m);
            for k in j..m {
                c = c.compose(&Permutation::adjacent(m, k).unwrap()).unwrap();
            }
            let tau = c.inverse().compose(&sigma).unwrap();
            assert_eq!(tau.image(m), m);
            let tau_small = Permutation::from_images(&tau.images()[..m - 1]).unwrap();
            assert_eq!(coset_rank(&tau_small), r % sub);
        }
    }

    #[test]
    fn transform_examples() {
        let engine = SnFourier::new(4, &caps()).unwrap();
        let id = engine.naive(&AlgebraElement::identity(4)).unwrap().coefficients;
        for (_, m) in id.blocks() {
            assert_eq!(*m, DMatrix::identity(m.nrows(), m.ncols()));
        }
        let uniform = AlgebraElement::from_terms(
            4,
            Permutation::all(4).map(|p| (p, Complex64::new(1.0, 0.0))),
        )
        .unwrap();
        let u = engine.naive(&uniform).unwrap().coefficients;
        for (p, m) in u.blocks() {
            let want = if p.parts() == [4] { 24.0 } else { 0.0 };
            assert!(m.iter().all(|z| (z - Complex64::new(want, 0.0)).norm() < 1e-12), "{p}");
        }
        let s3 = SnFourier::new(3, &caps()).unwrap();
        let t = s3.naive(&AlgebraElement::delta(&perm("(1 2)", 3))).unwrap().coefficients;
        assert_eq!(t.blocks()[0].1[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(t.blocks()[2].1[(0, 0)], Complex64::new(-1.0, 0.0));
        let rho = crate::yor::yor(&Partition::new(vec![2, 1]).unwrap(), &perm("(1 2)", 3)).unwrap();
        assert!(t.blocks()[1].1.iter().zip(rho.iter()).all(|(a, b)| (a.re - b).abs() < 1e-15 && a.im == 0.0));
    }

    #[test]
    fn fft_matches_naive_through_n7() {
        for n in 1..=7 {
            let engine = SnFourier::new(n, &caps()).unwrap();
            let f = DenseFunction::random(n, 40 + n as u64, &caps()).unwrap();
            let fast = engine.fft(&f).unwrap();
            let slow = engine.naive(&f.to_element()).unwrap();
            let gap = fast.coefficients.max_abs_diff(&slow.coefficients);
            assert!(gap <= 1e-9, "n={n} gap={gap}");
            if n >= 5 {
                assert!(fast.ops < slow.ops, "n={n} fft={} naive={}", fast.ops, slow.ops);
            }
        }
        let engine = SnFourier::new(5, &caps()).unwrap();
        let delta = DenseFunction::from_element(&AlgebraElement::identity(5), &caps()).unwrap();
        for (_, m) in engine.fft(&delta).unwrap().coefficients.blocks() {
            assert!((m - DMatrix::identity(m.nrows(), m.ncols())).iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn inverse_round_trips() {
        let engine = SnFourier::new(4, &caps()).unwrap();
        let ident = FourierCoefficients::new(
            4,
            engine
                .irreps()
                .reps()
                .iter()
                .map(|r| (r.partition().clone(), DMatrix::identity(r.dim(), r.dim())))
                .collect(),
        )
        .unwrap();
        let back = engine.inverse(&ident).unwrap();
        let delta = DenseFunction::from_element(&AlgebraElement::identity(4), &caps()).unwrap();
        assert!(back.max_abs_diff(&delta) < 1e-12);

        for seed in 0..5 {
            let f = random_sparse(4, 6, seed);
            let coeffs = engine.naive(&f).unwrap().coefficients;
            let back = engine.inverse(&coeffs).unwrap();
            let dense = DenseFunction::from_element(&f, &caps()).unwrap();
            assert!(back.max_abs_diff(&dense) <= 1e-9);
        }
        let e5 = SnFourier::new(5, &caps()).unwrap();
        let f = DenseFunction::random(5, 9, &caps()).unwrap();
        let back = e5.inverse(&e5.fft(&f).unwrap().coefficients).unwrap();
        assert!(back.max_abs_diff(&f) <= 1e-9);
    }

    #[test]
    fn inverse_rejects_bad_blocks() {
        let engine = SnFourier::new(3, &caps()).unwrap();
        let mut coeffs = engine.naive(&AlgebraElement::identity(3)).unwrap().coefficients;
        coeffs.blocks[1].1 = DMatrix::from_element(3, 3, ZERO);
        assert!(engine.inverse(&coeffs).is_err());
        assert!(FourierCoefficients::new(3, coeffs.blocks.clone()).is_err());
    }

    #[test]
    fn parseval() {
        for n in 1..=6 {
            let engine = SnFourier::new(n, &caps()).unwrap();
            let f = DenseFunction::random(n, 70 + n as u64, &caps()).unwrap();
            let coeffs = engine.fft(&f).unwrap().coefficients;
            let lhs = f.norm_sqr();
            assert!((lhs - coeffs.plancherel_norm_sqr()).abs() <= 1e-8 * lhs, "n={n}");
        }
    }

    #[test]
    fn convolution_theorem() {
        let c = caps();
        let s = perm("(1 3 2)", 4);
        let t = perm("(2 4)", 4);
        assert!(convolution_theorem_check(&AlgebraElement::delta(&s), &AlgebraElement::delta(&t), &c).unwrap() < 1e-12);
        for seed in 0..10 {
            let f = random_sparse(4, 4, seed);
            let g = random_sparse(4, 4, seed + 100);
            assert!(convolution_theorem_check(&f, &g, &c).unwrap() <= 1e-10);
            assert!(convolution_theorem_check(&f, &AlgebraElement::identity(4), &c).unwrap() < 1e-12);
        }
        let h = random_hermitian_k_local(5, 3, 10, 3).unwrap();
        assert!(convolution_theorem_check(&h, &h, &c).unwrap() <= 1e-10);
    }

    #[test]
    fn factorial_cap() {
        assert!(matches!(SnFourier::new(9, &caps()), Err(Error::Resource(_))));
        assert!(matches!(DenseFunction::random(9, 0, &caps()), Err(Error::Resource(_))));
    }
}
