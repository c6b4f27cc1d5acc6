//! Qubit path: permutations rewritten as sums of Pauli strings through
//! `(i j) = ½(I + X_iX_j + Y_iY_j + Z_iZ_j)`, and the LCU pipeline run over
//! Pauli unitaries.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{check_size, Caps, Error, Result};
use crate::group_algebra::AlgebraElement;
use crate::lcu::{plan_for_norm, run_segments, Branch, LcuSegment, NormData, SimulationPlan};
use crate::permutation::Permutation;
use crate::quditsim::{Statevector, YoungBasisVector};

/// Exact dyadic coefficients.
pub type Exact = Complex<Ratio<i64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// `a·b = i^k · c`.
    pub fn product(a: Pauli, b: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (a, b) {
            (I, p) | (p, I) => (0, p),
            (p, q) if p == q => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    /// Dense 2×2 matrix.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let (o, l, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        let e = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &e)
    }
}

/// A tensor product of single-qubit Paulis; bit `q − 1` of `x`/`z` describes qubit `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64, "at most 64 qubits");
        PauliString { n, x: 0, z: 0 }
    }

    pub fn from_letters(n: usize, letters: &[(usize, Pauli)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::domain("Pauli strings support at most 64 qubits"));
        }
        let mut s = PauliString::identity(n);
        for &(q, p) in letters {
            if q == 0 || q > n {
                return Err(Error::domain(format!("qubit {q} out of range 1..={n}")));
            }
            if s.letter(q) != Pauli::I {
                return Err(Error::domain(format!("qubit {q} listed twice")));
            }
            let (bx, bz) = p.bits();
            s.x |= (bx as u64) << (q - 1);
            s.z |= (bz as u64) << (q - 1);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> (q - 1) & 1 == 1, self.z >> (q - 1) & 1 == 1)
    }

    pub fn letters(&self) -> Vec<(usize, Pauli)> {
        (1..=self.n)
            .map(|q| (q, self.letter(q)))
            .filter(|(_, p)| *p != Pauli::I)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// `self · other = i^k · s`.
    pub fn multiply(&self, other: &PauliString) -> (u8, PauliString) {
        debug_assert_eq!(self.n, other.n);
        let mut phase = 0u8;
        let mut busy = self.x | self.z | other.x | other.z;
        while busy != 0 {
            let q = busy.trailing_zeros() as usize + 1;
            busy &= busy - 1;
            let (k, _) = Pauli::product(self.letter(q), other.letter(q));
            phase = (phase + k) % 4;
        }
        (
            phase,
            PauliString {
                n: self.n,
                x: self.x ^ other.x,
                z: self.z ^ other.z,
            },
        )
    }

    fn index_masks(&self) -> (usize, usize) {
        let to_index = |m: u64| {
            (1..=self.n)
                .filter(|q| m >> (q - 1) & 1 == 1)
                .map(|q| 1usize << (self.n - q))
                .sum()
        };
        (to_index(self.x), to_index(self.z))
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Applies the string to a qubit register in place (qubit 1 most significant).
    pub fn apply(&self, amps: &mut [Complex64]) {
        let (xb, zb) = self.index_masks();
        apply_masks(amps, xb, zb, self.y_count());
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        let (xb, zb) = self.index_masks();
        for col in 0..dim {
            let (k, row) = action(col, xb, zb, self.y_count());
            m[(row, col)] = i_pow(k);
        }
        m
    }

    /// Accepts `"I"` or space-separated letters such as `"X1 Z3"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        if text == "I" || text.is_empty() {
            return Ok(PauliString::identity(n));
        }
        let letters = text
            .split_whitespace()
            .map(|tok| {
                let (head, tail) = tok.split_at(1);
                let p = match head {
                    "X" => Pauli::X,
                    "Y" => Pauli::Y,
                    "Z" => Pauli::Z,
                    _ => return Err(Error::parse(format!("bad Pauli letter in {tok:?}"))),
                };
                let q = tail
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad qubit index in {tok:?}")))?;
                Ok((q, p))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(n, &letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self.letters().iter().map(|(q, p)| format!("{p:?}{q}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `P|col⟩ = i^k |row⟩` for a string with index masks `xb`, `zb` and `ny` Y letters.
fn action(col: usize, xb: usize, zb: usize, ny: u32) -> (u8, usize) {
    let sign = ((col & zb).count_ones() % 2) as u8 * 2;
    (((ny % 4) as u8 + sign) % 4, col ^ xb)
}

fn apply_masks(amps: &mut [Complex64], xb: usize, zb: usize, ny: u32) {
    let src = amps.to_vec();
    for (col, a) in src.into_iter().enumerate() {
        let (k, row) = action(col, xb, zb, ny);
        amps[row] = a * i_pow(k);
    }
}

/// Arithmetic needed of Pauli-sum coefficients.
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + Add<Output = Self> + Mul<Output = Self>
{
    fn zero() -> Self;
    fn dyadic(num: i64, den: i64) -> Self;
    fn times_i_pow(self, k: u8) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Coefficient for Exact {
    fn zero() -> Self {
        Complex::new(Ratio::from_integer(0), Ratio::from_integer(0))
    }

    fn dyadic(num: i64, den: i64) -> Self {
        Complex::new(Ratio::new(num, den), Ratio::from_integer(0))
    }

    fn times_i_pow(self, k: u8) -> Self {
        match k % 4 {
            0 => self,
            1 => Complex::new(-self.im, self.re),
            2 => Complex::new(-self.re, -self.im),
            _ => Complex::new(self.im, -self.re),
        }
    }

    fn to_c64(&self) -> Complex64 {
        let f = |r: &Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        Complex64::new(f(&self.re), f(&self.im))
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn dyadic(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn times_i_pow(self, k: u8) -> Self {
        self * i_pow(k)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Linear combination of Pauli strings with like terms merged and zeros dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum<C = Exact> {
    n: usize,
    terms: BTreeMap<PauliString, C>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTermJson {
    pub string: String,
    pub re: f64,
    pub im: f64,
}

impl<C: Coefficient> PauliSum<C> {
    pub fn zero(n: usize) -> Self {
        PauliSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.add_term(PauliString::identity(n), C::dyadic(1, 1));
        s
    }

    pub fn add_term(&mut self, p: PauliString, c: C) {
        debug_assert_eq!(p.n(), self.n);
        let slot = self.terms.entry(p).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if *slot == C::zero() {
            self.terms.remove(&p);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PauliString) -> C {
        self.terms.get(p).cloned().unwrap_or_else(C::zero)
    }

    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).sum()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }

    /// Largest weight among non-identity strings.
    pub fn locality(&self) -> usize {
        self.terms.keys().map(|p| p.weight()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &PauliSum<C>) -> PauliSum<C> {
        let mut out = Self::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (k, r) = p.multiply(q);
                out.add_term(r, (a.clone() * b.clone()).times_i_pow(k));
            }
        }
        out
    }

    pub fn add(&self, other: &PauliSum<C>) -> PauliSum<C> {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, c.clone());
        }
        out
    }

    pub fn scale(&self, s: C) -> PauliSum<C> {
        let mut out = Self::zero(self.n);
        for (p, c) in &self.terms {
            out.add_term(*p, c.clone() * s.clone());
        }
        out
    }

    pub fn to_float(&self) -> PauliSum<Complex64> {
        let mut out = PauliSum::zero(self.n);
        for (p, c) in &self.terms {
            out.add_term(*p, c.to_c64());
        }
        out
    }

    pub fn dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (p, c) in &self.terms {
            let (xb, zb) = p.index_masks();
            let cf = c.to_c64();
            for col in 0..dim {
                let (k, row) = action(col, xb, zb, p.y_count());
                m[(row, col)] += cf * i_pow(k);
            }
        }
        m
    }

    pub fn to_json(&self) -> Vec<PauliTermJson> {
        self.terms
            .iter()
            .map(|(p, c)| {
                let z = c.to_c64();
                PauliTermJson {
                    string: p.to_string(),
                    re: z.re,
                    im: z.im,
                }
            })
            .collect()
    }
}

impl PauliSum<Exact> {
    /// Dense matrix in exact arithmetic, row-major.
    pub fn dense_exact(&self) -> Vec<Exact> {
        let dim = 1usize << self.n;
        let mut m = vec![Exact::zero(); dim * dim];
        for (p, c) in &self.terms {
            let (xb, zb) = p.index_masks();
            for col in 0..dim {
                let (k, row) = action(col, xb, zb, p.y_count());
                let slot = &mut m[row * dim + col];
                *slot += c.times_i_pow(k);
            }
        }
        m
    }
}

impl PauliSum<Complex64> {
    pub fn from_json(n: usize, terms: &[PauliTermJson]) -> Result<Self> {
        let mut out = Self::zero(n);
        for t in terms {
            out.add_term(PauliString::parse(&t.string, n)?, Complex64::new(t.re, t.im));
        }
        Ok(out)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }
}

/// `π((i j)) = ½(I + X_iX_j + Y_iY_j + Z_iZ_j)`.
pub fn transposition_to_pauli(i: usize, j: usize, n: usize) -> Result<PauliSum> {
    if i == j {
        return Err(Error::domain(format!("transposition ({i} {j}) needs distinct points")));
    }
    let mut out = PauliSum::zero(n);
    out.add_term(PauliString::identity(n), Exact::dyadic(1, 2));
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        out.add_term(PauliString::from_letters(n, &[(i, p), (j, p)])?, Exact::dyadic(1, 2));
    }
    Ok(out)
}

/// `π(σ)` as the product of its transpositions' expansions, in decomposition order.
pub fn permutation_to_pauli(sigma: &Permutation) -> Result<PauliSum> {
    let n = sigma.n();
    let mut acc = PauliSum::identity(n);
    for (i, j) in sigma.transpositions() {
        acc = acc.mul(&transposition_to_pauli(i, j, n)?);
    }
    Ok(acc)
}

/// `π̃(f)` on qubits as a Pauli sum. For Hermitian `f` the coefficients are
/// real up to rounding and their imaginary parts are dropped.
pub fn element_to_pauli(f: &AlgebraElement) -> Result<PauliSum<Complex64>> {
    let mut out = PauliSum::zero(f.n());
    for (p, c) in f.terms() {
        for (s, a) in permutation_to_pauli(p)?.terms() {
            out.add_term(*s, a.to_c64() * c);
        }
    }
    if f.is_hermitian(1e-12) {
        let mut real = PauliSum::zero(f.n());
        for (s, c) in out.terms() {
            real.add_term(*s, Complex64::new(c.re, 0.0));
        }
        out = real;
    }
    Ok(out)
}

/// `Σ_{j<k} 2^{k−1−2j} (3/4)^{k−1−j} C(k−1, j) = 2^{k−1}` in exact arithmetic.
pub fn binomial_identity_check(k: u32) -> Result<bool> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let pow = |base: Ratio<i128>, e: i64| -> Ratio<i128> {
        let mut acc = Ratio::from_integer(1);
        let b = if e < 0 { base.recip() } else { base };
        for _ in 0..e.abs() {
            acc *= b;
        }
        acc
    };
    let two = Ratio::from_integer(2i128);
    let three_quarters = Ratio::new(3i128, 4);
    let mut binom: i128 = 1;
    let mut sum = Ratio::from_integer(0i128);
    for j in 0..k as i64 {
        let term = pow(two, k as i64 - 1 - 2 * j) * pow(three_quarters, k as i64 - 1 - j) * Ratio::from_integer(binom);
        sum += term;
        binom = binom * (k as i128 - 1 - j as i128) / (j as i128 + 1);
    }
    Ok(sum == pow(two, k as i64 - 1))
}

/// A Pauli string used as an LCU branch.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliBranch {
    string: PauliString,
    xb: usize,
    zb: usize,
    ny: u32,
}

impl PauliBranch {
    pub fn new(string: PauliString) -> Self {
        let (xb, zb) = string.index_masks();
        PauliBranch {
            string,
            xb,
            zb,
            ny: string.y_count(),
        }
    }

    pub fn string(&self) -> &PauliString {
        &self.string
    }
}

impl Branch for PauliBranch {
    fn identity(n: usize) -> Self {
        PauliBranch::new(PauliString::identity(n))
    }

    fn apply(&self, amps: &mut [Complex64], d: usize, _n: usize, _adjoint: bool) {
        debug_assert_eq!(d, 2);
        // Pauli strings are Hermitian, so the adjoint is the same map.
        apply_masks(amps, self.xb, self.zb, self.ny);
    }

    fn gates(&self) -> u64 {
        self.string.weight() as u64
    }
}

/// `Σ_{m≤K} (−iΔt H)^m/m!` as a Pauli sum.
pub fn pauli_taylor(h: &PauliSum<Complex64>, delta_t: f64, order: usize) -> PauliSum<Complex64> {
    let step = h.scale(Complex64::new(0.0, -delta_t));
    let mut power = PauliSum::identity(h.n());
    let mut acc = power.clone();
    for m in 1..=order {
        power = power.mul(&step).scale(Complex64::new(1.0 / m as f64, 0.0));
        acc = acc.add(&power);
    }
    acc
}

pub fn build_pauli_segment(
    h: &PauliSum<Complex64>,
    delta_t: f64,
    order: usize,
    caps: &Caps,
) -> Result<LcuSegment<PauliBranch>> {
    let taylor = pauli_taylor(h, delta_t, order);
    let mut weighted: Vec<(Complex64, PauliBranch)> =
        taylor.terms().map(|(p, c)| (*c, PauliBranch::new(*p))).collect();
    weighted.sort_by_key(|(_, b)| !b.string.is_identity());
    LcuSegment::from_weighted(h.n(), weighted, caps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PauliGateReport {
    pub segments: usize,
    pub order: usize,
    /// Locality `k` of the group-algebra element.
    pub locality: usize,
    pub branches: usize,
    pub ancilla_dim: usize,
    pub select_calls: u64,
    /// `3·M·K`: one `k`-local Pauli application per Taylor slot per SELECT call.
    pub pauli_applications: u64,
    /// Σ over SELECT calls of the largest branch weight (single-qubit gates).
    pub single_qubit_gates: u64,
    /// `L(k) = 2^{k−1}·C`.
    pub l_k: f64,
    /// `t·L(k)·n^k·log(X)/log log(X)` with `X = t·L(k)·n^k/ε`.
    pub closed_form_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PauliMatrixElement {
    pub value: Complex64,
    pub plan: Option<SimulationPlan>,
    pub gates: Option<PauliGateReport>,
}

pub fn pauli_closed_form(n: usize, k: usize, max_coeff: f64, t: f64, epsilon: f64) -> f64 {
    let l_k = 2f64.powi(k as i32 - 1) * max_coeff;
    let base = t * l_k * (n as f64).powi(k as i32);
    let x = (base / epsilon).ln();
    let ratio = if x > 1.0 && x.ln() > 0.0 { x / x.ln() } else { x.max(1.0) };
    base * ratio
}

/// `exp(−itH)|v⟩` for a Hermitian Pauli sum; `locality` and `max_coeff`
/// describe the originating group-algebra element for the report.
pub fn evolve_pauli(
    v: &Statevector,
    h: &PauliSum<Complex64>,
    locality: usize,
    max_coeff: f64,
    t: f64,
    epsilon: f64,
    caps: &Caps,
) -> Result<(Statevector, SimulationPlan, PauliGateReport)> {
    if v.d() != 2 {
        return Err(Error::domain(format!("the Pauli path needs qubits, got d = {}", v.d())));
    }
    check_size(h.n(), v.n())?;
    if !h.is_hermitian(1e-12) {
        return Err(Error::domain("Pauli Hamiltonian is not Hermitian"));
    }
    let plan = plan_for_norm(
        NormData {
            n: h.n(),
            one_norm: h.one_norm(),
            max_coeff: h.max_coeff(),
            locality: h.locality(),
            support: h.len(),
        },
        t,
        epsilon,
    )?;
    let seg = build_pauli_segment(h, plan.delta_t, plan.order, caps)?;
    let (state, tally) = run_segments(v, &seg, plan.segments, caps)?;
    let report = PauliGateReport {
        segments: plan.segments,
        order: plan.order,
        locality,
        branches: seg.len(),
        ancilla_dim: seg.ancilla_dim(),
        select_calls: tally.select_calls,
        pauli_applications: tally.select_calls * plan.order as u64,
        single_qubit_gates: tally.swaps,
        l_k: 2f64.powi(locality as i32 - 1) * max_coeff,
        closed_form_estimate: pauli_closed_form(h.n(), locality, max_coeff, t, epsilon),
    };
    Ok((state, plan, report))
}

/// `⟨u| exp(−itπ̃(f)) |v⟩` through the Pauli expansion of `f`.
pub fn matrix_element_pauli(
    u: &YoungBasisVector,
    v: &YoungBasisVector,
    f: &AlgebraElement,
    t: f64,
    epsilon: f64,
    caps: &Caps,
) -> Result<PauliMatrixElement> {
    check_size(u.vector.dim(), v.vector.dim())?;
    if !f.is_hermitian(1e-12) {
        return Err(Error::domain("π̃(f) is not Hermitian"));
    }
    if t == 0.0 {
        return Ok(PauliMatrixElement {
            value: u.vector.inner(&v.vector),
            plan: None,
            gates: None,
        });
    }
    let h = element_to_pauli(f)?;
    let (out, plan, gates) = evolve_pauli(&v.vector, &h, f.locality(), f.max_coeff(), t, epsilon, caps)?;
    Ok(PauliMatrixElement {
        value: u.vector.inner(&out),
        plan: Some(plan),
        gates: Some(gates),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::{pi_tilde_dense, random_hermitian_k_local};
    use crate::lcu;
    use crate::quditsim::{exact_matrix_element, young_basis, SwapLayout};

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    fn exact_permutation_matrix(sigma: &Permutation) -> Vec<Exact> {
        let dim = 1usize << sigma.n();
        let mut m = vec![Exact::zero(); dim * dim];
        let map = crate::quditsim::permutation_index_map(sigma, 2);
        for (col, &row) in map.iter().enumerate() {
            m[row * dim + col] = Exact::dyadic(1, 1);
        }
        m
    }

    #[test]
    fn letter_products_match_matrices() {
        use Pauli::*;
        for a in [I, X, Y, Z] {
            for b in [I, X, Y, Z] {
                let (k, c) = Pauli::product(a, b);
                let want = a.matrix() * b.matrix();
                assert_eq!(c.matrix() * i_pow(k), want, "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn string_multiplication_and_parsing() {
        let a = PauliString::parse("X1 Y2", 3).unwrap();
        let b = PauliString::parse("Y1 Y2 Z3", 3).unwrap();
        let (k, c) = a.multiply(&b);
        let want = a.dense() * b.dense();
        assert_eq!(c.dense() * i_pow(k), want);
        assert_eq!(c.to_string(), "Z1 Z3");
        assert_eq!(PauliString::parse("I", 3).unwrap(), PauliString::identity(3));
        assert_eq!(PauliString::parse(&b.to_string(), 3).unwrap(), b);
        assert!(PauliString::parse("Q1", 3).is_err());
        assert!(PauliString::parse("X4", 3).is_err());
        assert!(PauliString::parse("X1 Z1", 3).is_err());
    }

    #[test]
    fn exchange_identity_is_exact() {
        let s = transposition_to_pauli(1, 2, 2).unwrap();
        assert_eq!(s.dense_exact(), exact_permutation_matrix(&perm("(1 2)", 2)));
        assert_eq!(s.len(), 4);
        assert_eq!(s.one_norm(), 2.0);
        assert!(transposition_to_pauli(2, 2, 3).is_err());
        // Ŝ·Ŝ = ¼(XX + YY + ZZ) has eigenvalues ¼ and −¾.
        let mut ss = s.to_float();
        ss.add_term(PauliString::identity(2), Complex64::new(-0.5, 0.0));
        let ss = ss.scale(Complex64::new(0.5, 0.0)).dense();
        let eig = ss.symmetric_eigen().eigenvalues;
        let norm = eig.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        assert!((norm - 0.75).abs() < 1e-15);
    }

    #[test]
    fn permutations_reconstruct_exactly() {
        for sigma in Permutation::all(5) {
            let p = permutation_to_pauli(&sigma).unwrap();
            assert_eq!(p.dense_exact(), exact_permutation_matrix(&sigma), "{sigma}");
        }
        assert_eq!(permutation_to_pauli(&Permutation::identity(3)).unwrap(), PauliSum::identity(3));
        let c3 = permutation_to_pauli(&perm("(1 2 3)", 3)).unwrap();
        assert!(c3.one_norm() <= 4.0);
    }

    #[test]
    fn one_norm_bounds_on_s6() {
        for sigma in Permutation::all(6) {
            let norm = permutation_to_pauli(&sigma).unwrap().one_norm();
            let k = sigma.locality();
            let bound = if k == 0 { 1.0 } else { 2f64.powi(k as i32 - 1) };
            assert!(norm <= bound + 1e-12, "{sigma}");
            // One factor of 2 per transposition; the bound is tight for single cycles.
            let transpositions = sigma.transpositions().len() as i32;
            assert!((norm - 2f64.powi(transpositions)).abs() < 1e-12, "{sigma}");
            if sigma.cycles().len() == 1 {
                assert!((norm - bound).abs() < 1e-12);
            }
        }
        let disjoint = permutation_to_pauli(&perm("(1 2)(3 4)", 6)).unwrap().one_norm();
        assert_eq!(disjoint, 4.0);
    }

    #[test]
    fn element_expansion_matches_dense() {
        let caps = Caps::default();
        let ring = AlgebraElement::from_terms(
            4,
            ["(1 2)", "(2 3)", "(3 4)", "(1 4)"]
                .iter()
                .map(|s| (perm(s, 4), Complex64::new(1.0, 0.0))),
        )
        .unwrap();
        let h = element_to_pauli(&ring).unwrap();
        assert_eq!(h.len(), 13);
        assert!((h.dense() - pi_tilde_dense(&ring, 2, &caps).unwrap()).iter().all(|z| z.norm() < 1e-15));
        assert_eq!(
            element_to_pauli(&AlgebraElement::identity(3)).unwrap(),
            PauliSum::identity(3)
        );
        for seed in 0..5 {
            let f = random_hermitian_k_local(5, 3, 9, seed).unwrap();
            let h = element_to_pauli(&f).unwrap();
            assert!(h.terms().all(|(_, c)| c.im == 0.0));
            assert!((h.dense() - pi_tilde_dense(&f, 2, &caps).unwrap()).iter().all(|z| z.norm() < 1e-12));
            let bound: f64 = f
                .terms()
                .map(|(p, c)| c.norm() * 2f64.powi(p.locality() as i32 - 1))
                .sum();
            assert!(h.one_norm() <= bound + 1e-12);
            assert!(bound <= f.len() as f64 * f.max_coeff() * 2f64.powi(f.locality() as i32 - 1) + 1e-12);
        }
    }

    #[test]
    fn binomial_identity() {
        for k in 1..=16 {
            assert!(binomial_identity_check(k).unwrap(), "k={k}");
        }
        assert!(binomial_identity_check(0).is_err());
    }

    #[test]
    fn pauli_path_agrees_with_swap_path() {
        let caps = Caps::default();
        let basis = young_basis(6, 2, &caps).unwrap();
        let f = random_hermitian_k_local(6, 3, 8, 11).unwrap();
        let (u, v) = (&basis[8], &basis[13]);
        let eps = 1e-3;
        let pauli = matrix_element_pauli(u, v, &f, 1.0, eps, &caps).unwrap();
        let swap = lcu::matrix_element(u, v, &f, 1.0, eps, SwapLayout::AllToAll, &caps).unwrap();
        let exact = exact_matrix_element(u, v, &f, 1.0, &caps).unwrap();
        assert!((pauli.value - exact).norm() <= eps);
        assert!((pauli.value - swap.value).norm() <= 2.0 * eps);
        let g = pauli.gates.unwrap();
        assert_eq!(g.pauli_applications, 3 * g.segments as u64 * g.order as u64);
        assert!(g.single_qubit_gates <= g.select_calls * 6);

        let zero = matrix_element_pauli(u, u, &f, 0.0, eps, &caps).unwrap();
        assert!((zero.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn singlet_phase_under_ring() {
        let caps = Caps::default();
        let ring = AlgebraElement::from_terms(
            4,
            ["(1 2)", "(2 3)", "(3 4)", "(1 4)"]
                .iter()
                .map(|s| (perm(s, 4), Complex64::new(1.0, 0.0))),
        )
        .unwrap();
        let basis = young_basis(4, 2, &caps).unwrap();
        for v in basis.iter().filter(|b| b.label.partition.parts() == [2, 2]) {
            let t = 0.1;
            let got = matrix_element_pauli(v, v, &ring, t, 1e-6, &caps).unwrap().value;
            let want = exact_matrix_element(v, v, &ring, t, &caps).unwrap();
            assert!((got - want).norm() <= 1e-6);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = random_hermitian_k_local(4, 3, 5, 2).unwrap();
        let h = element_to_pauli(&f).unwrap();
        let back = PauliSum::from_json(4, &h.to_json()).unwrap();
        assert_eq!(back, h);
    }
}
