//! Named invariant suites with one pass/fail line per property.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Caps, Error, Result};
use crate::group_algebra::{
    convolution_theorem_check, fourier_inverse, pi_tilde_dense, random_hermitian_k_local, DenseFunction, SnFourier,
};
use crate::lcu;
use crate::pauli_expand::{binomial_identity_check, matrix_element_pauli, permutation_to_pauli, Exact};
use crate::permutation::{
    count_k_local, derangement_count, factorial, recompose_adjacent, recompose_transpositions, Permutation,
};
use crate::quditsim::{exact_matrix_element, permutation_index_map, SwapLayout, YoungBasis};
use crate::young::{enumerate_partitions, schur_weyl_dimension_check, Partition};
use crate::yor::Irreps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Permutation,
    SchurWeyl,
    Yor,
    Fourier,
    YoungBasis,
    LcuE2e,
    Pauli,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] =
        ["permutation", "schur-weyl", "yor", "fourier", "young-basis", "lcu-e2e", "pauli", "all"];

    const EACH: [Suite; 7] = [
        Suite::Permutation,
        Suite::SchurWeyl,
        Suite::Yor,
        Suite::Fourier,
        Suite::YoungBasis,
        Suite::LcuE2e,
        Suite::Pauli,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Permutation => "permutation",
            Suite::SchurWeyl => "schur-weyl",
            Suite::Yor => "yor",
            Suite::Fourier => "fourier",
            Suite::YoungBasis => "young-basis",
            Suite::LcuE2e => "lcu-e2e",
            Suite::Pauli => "pauli",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::parse(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", "))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}::{} ({})", self.suite, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    /// Runs `body`; an error counts as a failure unless it is a resource cap.
    fn check<F>(&mut self, suite: Suite, name: &str, body: F) -> Result<()>
    where
        F: FnOnce() -> Result<(bool, String)>,
    {
        let (passed, detail) = match body() {
            Ok(r) => r,
            Err(e @ Error::Resource(_)) => return Err(e),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check {
            suite: suite.name(),
            name: name.to_string(),
            passed,
            detail,
        });
        Ok(())
    }
}

pub fn run_suite(suite: Suite, caps: &Caps) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        match s {
            Suite::Permutation => permutation_suite(&mut rep)?,
            Suite::SchurWeyl => schur_weyl_suite(&mut rep)?,
            Suite::Yor => yor_suite(&mut rep)?,
            Suite::Fourier => fourier_suite(&mut rep, caps)?,
            Suite::YoungBasis => young_basis_suite(&mut rep, caps)?,
            Suite::LcuE2e => lcu_suite(&mut rep, caps)?,
            Suite::Pauli => pauli_suite(&mut rep, caps)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(rep)
}

fn permutation_suite(rep: &mut VerifyReport) -> Result<()> {
    let s = Suite::Permutation;
    rep.check(s, "group-axioms-s4", || {
        let all: Vec<Permutation> = Permutation::all(4).collect();
        let e = Permutation::identity(4);
        for p in &all {
            if p.compose(&p.inverse())? != e || p.compose(&e)? != *p {
                return Ok((false, format!("inverse or identity fails at {p}")));
            }
            for q in &all {
                for r in all.iter().step_by(5) {
                    if p.compose(&q.compose(r)?)? != p.compose(q)?.compose(r)? {
                        return Ok((false, format!("associativity fails at {p} {q} {r}")));
                    }
                }
            }
        }
        Ok((true, "24 elements".into()))
    })?;
    rep.check(s, "words-recompose-s6", || {
        for p in Permutation::all(6) {
            let by_t = recompose_transpositions(6, &p.transpositions())?;
            let by_a = recompose_adjacent(6, &p.adjacent_word())?;
            if by_t != p || by_a != p || p.adjacent_word().len() != p.inversions() {
                return Ok((false, format!("word mismatch at {p}")));
            }
        }
        Ok((true, "720 elements".into()))
    })?;
    rep.check(s, "derangement-census-n<=8", || {
        for n in 1..=8 {
            let mut census = vec![0u128; n + 1];
            for p in Permutation::all(n) {
                census[p.locality()] += 1;
            }
            for (l, &c) in census.iter().enumerate() {
                if derangement_count(n, l)? != c {
                    return Ok((false, format!("n={n} l={l}: brute force {c}")));
                }
            }
            let k_local: u128 = census[2.min(n + 1)..=n.min(3)].iter().sum();
            if count_k_local(n, n.min(3))? != k_local {
                return Ok((false, format!("k-local count n={n}")));
            }
        }
        Ok((true, "exact against enumeration".into()))
    })
}

fn schur_weyl_suite(rep: &mut VerifyReport) -> Result<()> {
    let s = Suite::SchurWeyl;
    rep.check(s, "dimension-sum", || {
        let cases = (1..=10).map(|n| (n, 2)).chain((1..=8).map(|n| (n, 3)));
        for (n, d) in cases {
            let r = schur_weyl_dimension_check(n, d)?;
            if !r.consistent || r.total != r.expected {
                return Ok((false, format!("n={n} d={d}: {} != {}", r.total, r.expected)));
            }
        }
        Ok((true, "d=2 n<=10, d=3 n<=8".into()))
    })?;
    rep.check(s, "six-qubit-pairing", || {
        let r = schur_weyl_dimension_check(6, 2)?;
        let got: Vec<(u128, u128)> = r.rows.iter().map(|x| (x.dim_sud, x.dim_sn)).collect();
        let want = vec![(7, 1), (5, 5), (3, 9), (1, 5)];
        Ok((got == want, format!("{got:?}")))
    })?;
    rep.check(s, "hook-length-vs-tableaux", || {
        for n in 1..=8 {
            for p in enumerate_partitions(n, n) {
                if p.hook_length_dimension() != p.standard_tableaux().len() as u128 {
                    return Ok((false, format!("{p:?}")));
                }
            }
        }
        Ok((true, "n<=8".into()))
    })
}

fn yor_suite(rep: &mut VerifyReport) -> Result<()> {
    let s = Suite::Yor;
    rep.check(s, "sum-of-squares", || {
        for n in 1..=8 {
            let total: u128 = Irreps::new(n).reps().iter().map(|r| (r.dim() * r.dim()) as u128).sum();
            if total != factorial(n) {
                return Ok((false, format!("n={n}: {total}")));
            }
        }
        Ok((true, "n<=8".into()))
    })?;
    rep.check(s, "homomorphism-orthogonality-s5", || {
        let all: Vec<Permutation> = Permutation::all(5).collect();
        let mut worst: f64 = 0.0;
        for y in Irreps::new(5).reps() {
            for p in all.iter().step_by(7) {
                let rp = y.matrix(p)?;
                let eye = nalgebra::DMatrix::<f64>::identity(y.dim(), y.dim());
                worst = worst.max((&rp * rp.transpose() - eye).amax());
                for q in all.iter().step_by(11) {
                    let lhs = y.matrix(&p.compose(q)?)?;
                    worst = worst.max((lhs - &rp * y.matrix(q)?).amax());
                }
            }
        }
        Ok((worst <= 1e-12, format!("max dev {worst:.2e}")))
    })?;
    rep.check(s, "character-orthogonality-s5", || {
        let irreps = Irreps::new(5);
        let chars: Vec<Vec<f64>> = irreps
            .reps()
            .iter()
            .map(|y| Permutation::all(5).map(|p| y.character(&p)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / 120.0;
                worst = worst.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        Ok((worst <= 1e-10, format!("max dev {worst:.2e}")))
    })
}

fn fourier_suite(rep: &mut VerifyReport, caps: &Caps) -> Result<()> {
    let s = Suite::Fourier;
    rep.check(s, "fft-equals-naive-n3..6", || {
        let mut worst: f64 = 0.0;
        for n in 3..=6 {
            let engine = SnFourier::new(n, caps)?;
            let f = DenseFunction::random(n, 11 + n as u64, caps)?;
            let fast = engine.fft(&f)?.coefficients;
            let slow = engine.naive(&f.to_element())?.coefficients;
            worst = worst.max(fast.max_abs_diff(&slow));
        }
        Ok((worst <= 1e-9, format!("max abs {worst:.2e}")))
    })?;
    rep.check(s, "convolution-theorem", || {
        let mut worst: f64 = 0.0;
        for n in 3..=5 {
            let f = DenseFunction::random(n, 3, caps)?.to_element();
            let g = DenseFunction::random(n, 4, caps)?.to_element();
            worst = worst.max(convolution_theorem_check(&f, &g, caps)?);
        }
        Ok((worst <= 1e-9, format!("max dev {worst:.2e}")))
    })?;
    rep.check(s, "parseval-and-inverse", || {
        let mut worst: f64 = 0.0;
        for n in 1..=6 {
            let engine = SnFourier::new(n, caps)?;
            let f = DenseFunction::random(n, 21 + n as u64, caps)?;
            let c = engine.fft(&f)?.coefficients;
            let lhs = f.norm_sqr();
            worst = worst.max((lhs - c.plancherel_norm_sqr()).abs() / lhs);
            worst = worst.max(fourier_inverse(&c, caps)?.max_abs_diff(&f));
        }
        Ok((worst <= 1e-8, format!("max dev {worst:.2e}")))
    })
}

fn young_basis_suite(rep: &mut VerifyReport, caps: &Caps) -> Result<()> {
    let s = Suite::YoungBasis;
    rep.check(s, "gram-and-jm-residual", || {
        let mut gram: f64 = 0.0;
        let mut jm: f64 = 0.0;
        let cases = (1..=6).map(|n| (n, 2)).chain((1..=4).map(|n| (n, 3)));
        for (n, d) in cases {
            let basis = YoungBasis::new(n, d, caps)?.all(caps)?;
            if basis.len() != d.pow(n as u32) {
                return Ok((false, format!("n={n} d={d}: {} vectors", basis.len())));
            }
            for (i, u) in basis.iter().enumerate() {
                jm = jm.max(u.jm_residual());
                for v in &basis[i..] {
                    let target = if u.label == v.label { 1.0 } else { 0.0 };
                    gram = gram.max((u.vector.inner(&v.vector) - target).norm());
                }
            }
        }
        Ok((gram <= 1e-9 && jm <= 1e-9, format!("gram {gram:.2e}, jm {jm:.2e}")))
    })?;
    rep.check(s, "permutations-act-by-yor", || {
        let yb = YoungBasis::new(4, 3, caps)?;
        let mut worst: f64 = 0.0;
        for block in yb.blocks() {
            let vecs = block.vectors();
            for sigma in Permutation::all(4).step_by(5) {
                let rho = block.yor().matrix(&sigma)?;
                for v in &vecs {
                    let moved = v.vector.apply_permutation(&sigma)?;
                    for u in &vecs {
                        let want = if u.label.weight_index == v.label.weight_index {
                            rho[(u.label.tableau, v.label.tableau)]
                        } else {
                            0.0
                        };
                        worst = worst.max((u.vector.inner(&moved) - want).norm());
                    }
                }
            }
        }
        Ok((worst <= 1e-10, format!("max dev {worst:.2e}")))
    })?;
    rep.check(s, "hamiltonian-block-diagonal", || {
        let basis = YoungBasis::new(5, 2, caps)?.all(caps)?;
        let f = random_hermitian_k_local(5, 3, 6, 2)?;
        let h = pi_tilde_dense(&f, 2, caps)?;
        let mut worst: f64 = 0.0;
        for u in &basis {
            let hu = &h * u.vector.to_dvector();
            for v in &basis {
                if (&u.label.partition, u.label.weight_index) != (&v.label.partition, v.label.weight_index) {
                    worst = worst.max(v.vector.to_dvector().dotc(&hu).norm());
                }
            }
        }
        Ok((worst <= 1e-10, format!("max cross-block {worst:.2e}")))
    })
}

fn lcu_suite(rep: &mut VerifyReport, caps: &Caps) -> Result<()> {
    let s = Suite::LcuE2e;
    for (n, k, seed, t, eps) in [(4, 2, 1u64, 0.5, 1e-3), (5, 3, 2, 1.0, 1e-3), (5, 2, 3, 1.0, 1e-6)] {
        let name = format!("matrix-element-n{n}-k{k}-eps{eps:e}");
        rep.check(s, &name, || {
            let f = random_hermitian_k_local(n, k, n, seed)?;
            let yb = YoungBasis::new(n, 2, caps)?;
            let p = Partition::new(vec![n - 1, 1])?;
            let block = yb.block(&p).ok_or_else(|| Error::domain("missing block"))?;
            let u = block.vector(0, 0)?;
            let v = block.vector(block.tableaux().len() - 1, 0)?;
            let got = lcu::matrix_element(&u, &v, &f, t, eps, SwapLayout::AllToAll, caps)?;
            let want = exact_matrix_element(&u, &v, &f, t, caps)?;
            let err = (got.value - want).norm();
            let gates = got.gates.ok_or_else(|| Error::domain("no gate report"))?;
            let ok = err <= eps && gates.actual <= gates.k2mk_bound;
            Ok((ok, format!("err {err:.2e}, swaps {} <= {}", gates.actual, gates.k2mk_bound)))
        })?;
    }
    Ok(())
}

fn exact_permutation_matrix(sigma: &Permutation) -> Vec<Exact> {
    let dim = 1usize << sigma.n();
    let zero = Complex::new(Ratio::from_integer(0), Ratio::from_integer(0));
    let one = Complex::new(Ratio::from_integer(1), Ratio::from_integer(0));
    let mut m = vec![zero; dim * dim];
    for (col, row) in permutation_index_map(sigma, 2).into_iter().enumerate() {
        m[row * dim + col] = one;
    }
    m
}

fn pauli_suite(rep: &mut VerifyReport, caps: &Caps) -> Result<()> {
    let s = Suite::Pauli;
    rep.check(s, "exact-reconstruction-s4", || {
        for sigma in Permutation::all(4) {
            if permutation_to_pauli(&sigma)?.dense_exact() != exact_permutation_matrix(&sigma) {
                return Ok((false, format!("mismatch at {sigma}")));
            }
        }
        Ok((true, "24 elements, exact".into()))
    })?;
    rep.check(s, "one-norm-s6", || {
        for sigma in Permutation::all(6) {
            let norm = permutation_to_pauli(&sigma)?.one_norm();
            let bound = 2f64.powi(sigma.locality().max(1) as i32 - 1);
            if norm > bound + 1e-12 {
                return Ok((false, format!("{sigma}: {norm} > {bound}")));
            }
        }
        Ok((true, "720 elements".into()))
    })?;
    rep.check(s, "binomial-identity-k<=16", || {
        for k in 1..=16 {
            if !binomial_identity_check(k)? {
                return Ok((false, format!("k={k}")));
            }
        }
        Ok((true, "exact".into()))
    })?;
    rep.check(s, "pauli-vs-swap", || {
        let eps = 1e-3;
        let f = random_hermitian_k_local(4, 2, 4, 9)?;
        let yb = YoungBasis::new(4, 2, caps)?;
        let block = yb.block(&Partition::new(vec![2, 2])?).ok_or_else(|| Error::domain("missing block"))?;
        let u = block.vector(0, 0)?;
        let v = block.vector(1, 0)?;
        let a = lcu::matrix_element(&u, &v, &f, 1.0, eps, SwapLayout::AllToAll, caps)?.value;
        let b = matrix_element_pauli(&u, &v, &f, 1.0, eps, caps)?.value;
        let diff = (a - b).norm();
        Ok((diff <= 2.0 * eps, format!("diff {diff:.2e}")))
    })
}
