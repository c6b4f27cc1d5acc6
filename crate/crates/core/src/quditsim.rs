//! Dense statevector simulation of `(ℂ^d)^{⊗n}`.
//!
//! Basis index is the base-`d` digit string with qudit 1 most significant.
//! `π(σ)` moves the qudit at position `q` to position `σ(q)`, which realizes
//! `e_{i_1} ⊗ ⋯ ↦ e_{i_{σ⁻¹(1)}} ⊗ ⋯` and satisfies `π(στ) = π(σ)π(τ)`.

mod young_basis;

pub use young_basis::{young_basis, BasisLabel, YoungBasis, YoungBasisVector};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_size, Caps, Error, Result};
use crate::group_algebra::{pi_tilde_dense, AlgebraElement};
use crate::permutation::Permutation;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    d: usize,
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn zero_state(d: usize, n: usize, caps: &Caps) -> Result<Self> {
        let dim = caps.check_dense(d, n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { d, n, amps })
    }

    /// Computational basis state from digits `(i_1, ..., i_n)`.
    pub fn basis_state(d: usize, digits: &[usize], caps: &Caps) -> Result<Self> {
        let n = digits.len();
        let dim = caps.check_dense(d, n)?;
        if digits.iter().any(|&x| x >= d) {
            return Err(Error::domain(format!("digits {digits:?} out of range for d = {d}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[digits_to_index(digits, d)] = Complex64::new(1.0, 0.0);
        Ok(Statevector { d, n, amps })
    }

    pub fn from_amplitudes(d: usize, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = crate::error::checked_pow(d, n)
            .ok_or_else(|| Error::resource(format!("{d}^{n} overflows")))?;
        check_size(dim, amps.len())?;
        Ok(Statevector { d, n, amps })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn distance(&self, other: &Statevector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amps)
    }

    pub fn apply_permutation(&self, sigma: &Permutation) -> Result<Statevector> {
        check_size(self.n, sigma.n())?;
        let map = permutation_index_map(sigma, self.d);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &j) in map.iter().enumerate() {
            out[j] = self.amps[i];
        }
        Ok(Statevector {
            d: self.d,
            n: self.n,
            amps: out,
        })
    }

    /// Swaps qudits `i` and `j` (1-based) in place.
    pub fn apply_swap(&mut self, i: usize, j: usize) {
        swap_amplitudes(&mut self.amps, i, j, self.d, self.n);
    }

    /// Runs SWAP gates `(i, j)` in list order.
    pub fn apply_swaps(&mut self, gates: &[(usize, usize)]) {
        for &(i, j) in gates {
            self.apply_swap(i, j);
        }
    }

    /// `U^{⊗n}`; `u` must be unitary to 1e-12.
    pub fn apply_local_unitary_everywhere(&self, u: &DMatrix<Complex64>) -> Result<Statevector> {
        check_size(self.d, u.nrows())?;
        check_size(self.d, u.ncols())?;
        let dev = (u.adjoint() * u - DMatrix::identity(self.d, self.d))
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()));
        if dev > 1e-12 {
            return Err(Error::domain(format!("local operator is not unitary (deviation {dev:.3e})")));
        }
        let mut out = self.clone();
        for q in 1..=self.n {
            out.apply_single_qudit(q, u);
        }
        Ok(out)
    }

    /// Applies a `d × d` matrix to qudit `q` (1-based), in place.
    pub fn apply_single_qudit(&mut self, q: usize, u: &DMatrix<Complex64>) {
        let d = self.d;
        let stride = d.pow((self.n - q) as u32);
        let mut buf = vec![Complex64::new(0.0, 0.0); d];
        for base in 0..self.amps.len() {
            if !(base / stride).is_multiple_of(d) {
                continue;
            }
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = (0..d).map(|b| u[(a, b)] * self.amps[base + b * stride]).sum();
            }
            for (a, v) in buf.iter().enumerate() {
                self.amps[base + a * stride] = *v;
            }
        }
    }

    pub fn to_json(&self) -> Vec<[f64; 2]> {
        self.amps.iter().map(|a| [a.re, a.im]).collect()
    }
}

pub(crate) fn swap_amplitudes(amps: &mut [Complex64], i: usize, j: usize, d: usize, n: usize) {
    if i == j {
        return;
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let stride_lo = d.pow((n - lo) as u32);
    let stride_hi = d.pow((n - hi) as u32);
    for idx in 0..amps.len() {
        let a = (idx / stride_lo) % d;
        let b = (idx / stride_hi) % d;
        if a < b {
            let partner = idx - a * stride_lo - b * stride_hi + b * stride_lo + a * stride_hi;
            amps.swap(idx, partner);
        }
    }
}

pub(crate) fn digits_to_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

pub(crate) fn index_to_digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for q in (0..n).rev() {
        out[q] = idx % d;
        idx /= d;
    }
    out
}

/// `map[i]` is the basis index that `π(σ)` sends basis index `i` to.
pub fn permutation_index_map(sigma: &Permutation, d: usize) -> Vec<usize> {
    let n = sigma.n();
    let dim = d.pow(n as u32);
    let weights: Vec<usize> = (0..n).map(|q| d.pow((n - 1 - q) as u32)).collect();
    let target: Vec<usize> = sigma.map().iter().map(|&p| weights[p]).collect();
    (0..dim)
        .map(|idx| {
            let mut rest = idx;
            let mut out = 0;
            for q in (0..n).rev() {
                out += (rest % d) * target[q];
                rest /= d;
            }
            out
        })
        .collect()
}

/// Adjacent SWAPs `k ↔ k+1` on a 1-D line, in execution order, realizing `π(σ)`.
/// Length is the inversion count of `σ`.
pub fn swap_network(sigma: &Permutation) -> Vec<usize> {
    let mut word = sigma.adjacent_word();
    // σ = s_k1 ∘ ⋯ ∘ s_km, so s_km runs first.
    word.reverse();
    word
}

/// Arbitrary-pair SWAP gates in execution order realizing `π(σ)`; a cycle of
/// length `m` costs `m − 1` gates.
pub fn transposition_network(sigma: &Permutation) -> Vec<(usize, usize)> {
    let mut word = sigma.transpositions();
    word.reverse();
    word
}

/// Qudit connectivity assumed when counting SWAP gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapLayout {
    /// Any two qudits can be swapped by one gate.
    AllToAll,
    /// Only neighbouring qudits on a line can be swapped.
    Line,
}

impl SwapLayout {
    /// SWAP gates (in execution order) realizing `π(σ)` under this layout.
    pub fn network(&self, sigma: &Permutation) -> Vec<(usize, usize)> {
        match self {
            SwapLayout::AllToAll => transposition_network(sigma),
            SwapLayout::Line => swap_network(sigma).into_iter().map(|k| (k, k + 1)).collect(),
        }
    }

    pub fn cost(&self, sigma: &Permutation) -> usize {
        match self {
            SwapLayout::AllToAll => sigma.locality() - sigma.cycles().len(),
            SwapLayout::Line => sigma.inversions(),
        }
    }
}

/// Exact `⟨u| exp(−itπ̃(f)) |v⟩` through a Hermitian eigendecomposition of `π̃(f)`.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    d: usize,
    n: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl ExactPropagator {
    pub fn new(f: &AlgebraElement, d: usize, caps: &Caps) -> Result<Self> {
        if !f.is_hermitian(1e-12) {
            return Err(Error::domain("π̃(f) is not Hermitian"));
        }
        let h = pi_tilde_dense(f, d, caps)?;
        Ok(Self::from_hermitian(h, d, f.n()))
    }

    pub(crate) fn from_hermitian(h: DMatrix<Complex64>, d: usize, n: usize) -> Self {
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        ExactPropagator {
            d,
            n,
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `exp(−itH)|v⟩`.
    pub fn evolve(&self, v: &Statevector, t: f64) -> Result<Statevector> {
        check_size(self.eigenvectors.nrows(), v.dim())?;
        let coords = self.eigenvectors.adjoint() * v.to_dvector();
        let phased = DVector::from_iterator(
            coords.len(),
            coords
                .iter()
                .zip(&self.eigenvalues)
                .map(|(c, &e)| c * Complex64::from_polar(1.0, -t * e)),
        );
        let out = &self.eigenvectors * phased;
        Statevector::from_amplitudes(self.d, self.n, out.iter().copied().collect())
    }

    pub fn matrix_element(&self, u: &Statevector, v: &Statevector, t: f64) -> Result<Complex64> {
        Ok(u.inner(&self.evolve(v, t)?))
    }

    /// Dense `exp(−itH)`.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&e| Complex64::from_polar(1.0, -t * e)),
        ));
        &self.eigenvectors * phases * self.eigenvectors.adjoint()
    }
}

/// One-shot `⟨u| exp(−itπ̃(f)) |v⟩` for Young basis vectors.
pub fn exact_matrix_element(
    u: &YoungBasisVector,
    v: &YoungBasisVector,
    f: &AlgebraElement,
    t: f64,
    caps: &Caps,
) -> Result<Complex64> {
    let prop = ExactPropagator::new(f, v.vector.d(), caps)?;
    prop.matrix_element(&u.vector, &v.vector, t)
}
