//! Sparse elements of the group algebra `ℂ[S_n]`.
//!
//! Convolution uses counting measure: `(f ∗ g)(σ) = Σ_τ f(τ) g(τ⁻¹σ)`, so `δ_e`
//! is the unit and `δ_σ ∗ δ_τ = δ_{στ}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_size, Caps, Error, Result};
use crate::permutation::{count_k_local, k_local_permutations, Permutation};
use crate::quditsim::permutation_index_map;

pub mod fourier;

pub use fourier::{
    convolution_theorem_check, fourier_fft, fourier_inverse, fourier_naive, DenseFunction,
    FourierCoefficients, SnFourier,
};

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    n: usize,
    terms: BTreeMap<Permutation, Complex64>,
    one_norm: f64,
    max_coeff: f64,
    locality: usize,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            n,
            terms: BTreeMap::new(),
            one_norm: 0.0,
            max_coeff: 0.0,
            locality: 0,
        }
    }

    pub fn delta(p: &Permutation) -> Self {
        Self::from_terms(p.n(), [(p.clone(), Complex64::new(1.0, 0.0))])
            .expect("single term has matching size")
    }

    pub fn identity(n: usize) -> Self {
        Self::delta(&Permutation::identity(n))
    }

    /// Sums repeated permutations; exact zeros are dropped.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Permutation, Complex64)>,
    {
        let mut out = Self::zero(n);
        for (p, c) in terms {
            check_size(n, p.n())?;
            *out.terms.entry(p).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        out.terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out.refresh();
        Ok(out)
    }

    pub fn add_term(&mut self, p: Permutation, c: Complex64) -> Result<()> {
        check_size(self.n, p.n())?;
        let entry = self.terms.entry(p.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&p);
        }
        self.refresh();
        Ok(())
    }

    fn refresh(&mut self) {
        self.one_norm = self.terms.values().map(|c| c.norm()).sum();
        self.max_coeff = self.terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        self.locality = self.terms.keys().map(|p| p.locality()).max().unwrap_or(0);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Permutation) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// `‖c‖₁ = Σ |c_i|`.
    pub fn one_norm(&self) -> f64 {
        self.one_norm
    }

    /// `C = max |c_i|`.
    pub fn max_coeff(&self) -> f64 {
        self.max_coeff
    }

    /// Largest number of points moved by a permutation in the support.
    pub fn locality(&self) -> usize {
        self.locality
    }

    /// Coefficient of `σ⁻¹` equals the conjugate of the coefficient of `σ`, within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms
            .iter()
            .all(|(p, c)| (self.coefficient(&p.inverse()) - c.conj()).norm() <= tol)
    }

    pub fn scale(&self, s: Complex64) -> AlgebraElement {
        Self::from_terms(self.n, self.terms.iter().map(|(p, c)| (p.clone(), c * s)))
            .expect("same size")
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        check_size(self.n, other.n)?;
        Self::from_terms(
            self.n,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(p, c)| (p.clone(), *c)),
        )
    }

    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        check_size(self.n, other.n)?;
        let mut acc: BTreeMap<Permutation, Complex64> = BTreeMap::new();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                *acc.entry(p.compose_unchecked(q)).or_default() += a * b;
            }
        }
        Self::from_terms(self.n, acc)
    }

    /// `(L_η f)(σ) = f(η⁻¹σ)`, i.e. every support point `σ` moves to `ησ`.
    pub fn left_translate(&self, eta: &Permutation) -> Result<AlgebraElement> {
        check_size(self.n, eta.n())?;
        Self::from_terms(
            self.n,
            self.terms.iter().map(|(p, c)| (eta.compose_unchecked(p), *c)),
        )
    }

    /// `f*(σ) = conj f(σ⁻¹)`; `π̃(f*) = π̃(f)†` for unitary representations.
    pub fn adjoint(&self) -> AlgebraElement {
        Self::from_terms(
            self.n,
            self.terms.iter().map(|(p, c)| (p.inverse(), c.conj())),
        )
        .expect("same size")
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| TermJson {
                    perm: p.to_string(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &ElementJson) -> Result<AlgebraElement> {
        let terms = doc
            .terms
            .iter()
            .map(|t| Ok((Permutation::parse(&t.perm, Some(doc.n))?, Complex64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(doc.n, terms)
    }

    pub fn from_json_str(text: &str) -> Result<AlgebraElement> {
        let doc: ElementJson =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("element JSON: {e}")))?;
        Self::from_json(&doc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub perm: String,
    pub re: f64,
    pub im: f64,
}

/// `π̃(f) = Σ c_i P(σ_i)` as a dense `d^n × d^n` operator.
pub fn pi_tilde_dense(f: &AlgebraElement, d: usize, caps: &Caps) -> Result<DMatrix<Complex64>> {
    if d < 2 {
        return Err(Error::domain(format!("local dimension d = {d} must be at least 2")));
    }
    let dim = caps.check_dense(d, f.n())?;
    let mut m = DMatrix::zeros(dim, dim);
    for (p, c) in f.terms() {
        let map = permutation_index_map(p, d);
        for (col, &row) in map.iter().enumerate() {
            m[(row, col)] += c;
        }
    }
    Ok(m)
}

/// A random Hermitian element supported on `num_terms` distinct permutations of
/// locality between 2 and `k`, with coefficient magnitudes in `(0, 1]`.
pub fn random_hermitian_k_local(n: usize, k: usize, num_terms: usize, seed: u64) -> Result<AlgebraElement> {
    random_hermitian_k_local_scaled(n, k, num_terms, 1.0, seed)
}

/// As [`random_hermitian_k_local`] with magnitudes in `(0, max_coeff]`.
pub fn random_hermitian_k_local_scaled(
    n: usize,
    k: usize,
    num_terms: usize,
    max_coeff: f64,
    seed: u64,
) -> Result<AlgebraElement> {
    if k < 2 || k > n {
        return Err(Error::domain(format!("locality k = {k} must satisfy 2 ≤ k ≤ n = {n}")));
    }
    let available = count_k_local(n, k)?;
    if num_terms as u128 > available {
        return Err(Error::domain(format!(
            "{num_terms} terms requested but only {available} permutations of S_{n} are {k}-local"
        )));
    }
    if !(max_coeff > 0.0) {
        return Err(Error::domain("max_coeff must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = k_local_permutations(n, k);
    let mut involutions = Vec::new();
    let mut pairs = Vec::new();
    for p in &all {
        let inv = p.inverse();
        if &inv == p {
            involutions.push(p.clone());
        } else if p < &inv {
            pairs.push((p.clone(), inv));
        }
    }
    involutions.shuffle(&mut rng);
    pairs.shuffle(&mut rng);
    // Split num_terms = singles + 2·doubles within what is available.
    let lo = num_terms.saturating_sub(involutions.len()).div_ceil(2);
    let hi = (num_terms / 2).min(pairs.len());
    let doubles = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
    let singles = num_terms - 2 * doubles;
    let magnitude = |rng: &mut ChaCha8Rng| max_coeff * (1.0 - rng.gen::<f64>());
    let mut terms = Vec::with_capacity(num_terms);
    for p in involutions.into_iter().take(singles) {
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        terms.push((p, Complex64::new(sign * magnitude(&mut rng), 0.0)));
    }
    for (p, q) in pairs.into_iter().take(doubles) {
        let c = Complex64::from_polar(magnitude(&mut rng), rng.gen_range(0.0..std::f64::consts::TAU));
        terms.push((p, c));
        terms.push((q, c.conj()));
    }
    AlgebraElement::from_terms(n, terms)
}
