//! Truncated-Taylor LCU simulation of `exp(−itπ̃(f))` on the statevector simulator.
//!
//! The evolution is cut into `M = ⌈t‖c‖₁/ln 2⌉` segments. Each segment
//! implements `T = Σ_{m≤K} (−iΔt f)^{∗m}/m!` as a linear combination of
//! unitaries. Powers of `f` are multiplied out in the group algebra, so equal
//! products share one branch. A cancelling `±I` pair tops the 1-norm up to
//! exactly 2, which makes a single round of oblivious amplitude amplification
//! return `(3/2)T − (1/2)TT†T ≈ T`.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_size, Caps, Error, Result};
use crate::group_algebra::{pi_tilde_dense, AlgebraElement};
use crate::permutation::Permutation;
use crate::quditsim::{swap_amplitudes, Statevector, SwapLayout, YoungBasisVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Segment count, Taylor order and the a priori gate estimates for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationPlan {
    pub n: usize,
    pub t: f64,
    pub epsilon: f64,
    /// `M`.
    pub segments: usize,
    pub delta_t: f64,
    /// `K`: highest power kept in each segment.
    pub order: usize,
    /// `ε̃ = ε/M`.
    pub eps_segment: f64,
    /// Truncation target `ε/(4M)` leaving headroom for amplification.
    pub truncation_target: f64,
    /// `⌈log(1/ε̃)/log log(1/ε̃)⌉`.
    pub closed_form_order: usize,
    /// `t·C·k·n^k`.
    pub textbook_segments: f64,
    pub one_norm: f64,
    pub max_coeff: f64,
    pub locality: usize,
    /// LCU 1-norm after padding; always 2.
    pub s: f64,
    /// `Σ_{m≤K} |support f|^m`, the branch count before merging equal products.
    pub term_count: f64,
    pub layout: SwapLayout,
    /// `3·M·K·max_σ cost(σ)` over the support, as a product-form circuit would spend.
    pub predicted_swap_gates: u64,
}

/// `min K ≥ 1` with `x^K/K! ≤ target`.
pub fn taylor_order(x: f64, target: f64) -> usize {
    let mut k = 1usize;
    let mut term = x;
    while term > target {
        k += 1;
        term *= x / k as f64;
    }
    k
}

/// `⌈log(1/ε̃)/log log(1/ε̃)⌉`, falling back to `⌈log(1/ε̃)⌉` where the
/// double logarithm is below 1.
pub fn closed_form_order(eps_segment: f64) -> usize {
    let l = (1.0 / eps_segment).ln();
    let ll = l.ln();
    let k = if ll > 1.0 { l / ll } else { l };
    (k.ceil() as usize).max(1)
}

/// `t·C·k³·n^k·log(X)/log log(X)` with `X = t·C·k·n^k/ε`.
pub fn closed_form_estimate(n: usize, k: usize, max_coeff: f64, t: f64, epsilon: f64) -> f64 {
    let nk = (n as f64).powi(k as i32);
    let base = t * max_coeff * k as f64 * nk;
    let x = base / epsilon;
    let ratio = if x.ln() > 1.0 { x.ln() / x.ln().ln() } else { x.ln().max(1.0) };
    t * max_coeff * (k as f64).powi(3) * nk * ratio
}

pub fn plan(f: &AlgebraElement, t: f64, epsilon: f64, layout: SwapLayout) -> Result<SimulationPlan> {
    if !f.is_hermitian(1e-12) {
        return Err(Error::domain("π̃(f) is not Hermitian"));
    }
    let slot = f.terms().map(|(p, _)| layout.cost(p)).max().unwrap_or(0) as u64;
    let mut out = plan_for_norm(
        NormData {
            n: f.n(),
            one_norm: f.one_norm(),
            max_coeff: f.max_coeff(),
            locality: f.locality(),
            support: f.len(),
        },
        t,
        epsilon,
    )?;
    out.layout = layout;
    out.predicted_swap_gates = 3 * out.segments as u64 * out.order as u64 * slot;
    Ok(out)
}

/// Size data of a Hamiltonian written as a linear combination of unitaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormData {
    pub n: usize,
    pub one_norm: f64,
    pub max_coeff: f64,
    pub locality: usize,
    pub support: usize,
}

/// Segment count and Taylor order for any LCU decomposition with the given sizes.
pub fn plan_for_norm(data: NormData, t: f64, epsilon: f64) -> Result<SimulationPlan> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("evolution time t = {t} must be positive")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!("error budget ε = {epsilon} must lie in (0, 1)")));
    }
    let NormData {
        n,
        one_norm,
        max_coeff,
        locality: k,
        support,
    } = data;
    let segments = ((t * one_norm / LN_2).ceil() as usize).max(1);
    let delta_t = t / segments as f64;
    let eps_segment = epsilon / segments as f64;
    let truncation_target = eps_segment / 4.0;
    let order = taylor_order(delta_t * one_norm, truncation_target);
    let term_count = (0..=order).map(|m| (support as f64).powi(m as i32)).sum();
    Ok(SimulationPlan {
        n,
        t,
        epsilon,
        segments,
        delta_t,
        order,
        eps_segment,
        truncation_target,
        closed_form_order: closed_form_order(eps_segment),
        textbook_segments: t * max_coeff * k as f64 * (n as f64).powi(k as i32),
        one_norm,
        max_coeff,
        locality: k,
        s: 2.0,
        term_count,
        layout: SwapLayout::AllToAll,
        predicted_swap_gates: 0,
    })
}

/// `Σ_{m=0..K} (−iΔt)^m f^{∗m}/m!` in the group algebra.
pub fn taylor_element(f: &AlgebraElement, delta_t: f64, order: usize) -> Result<AlgebraElement> {
    let step = f.scale(Complex64::new(0.0, -delta_t));
    let mut power = AlgebraElement::identity(f.n());
    let mut acc = power.clone();
    for m in 1..=order {
        power = power.convolve(&step)?.scale(Complex64::new(1.0 / m as f64, 0.0));
        acc = acc.add(&power)?;
    }
    Ok(acc)
}

/// Dense `Σ_{m=0..K} (−iΔt·π̃(f))^m/m!`.
pub fn taylor_segment_operator(
    f: &AlgebraElement,
    delta_t: f64,
    order: usize,
    d: usize,
    caps: &Caps,
) -> Result<DMatrix<Complex64>> {
    pi_tilde_dense(&taylor_element(f, delta_t, order)?, d, caps)
}

/// A unitary selected by one ancilla value, up to a phase kept by the segment.
pub trait Branch: Clone {
    fn identity(n: usize) -> Self;
    /// Applies the unitary (or its adjoint) to a system register in place.
    fn apply(&self, amps: &mut [Complex64], d: usize, n: usize, adjoint: bool);
    /// Gates spent executing this branch.
    fn gates(&self) -> u64;
    /// Gates spent under nearest-neighbour connectivity, where that differs.
    fn line_gates(&self) -> u64 {
        self.gates()
    }
}

/// A permutation executed as a SWAP network.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationBranch {
    pub sigma: Permutation,
    network: Vec<(usize, usize)>,
    line_cost: u64,
}

impl PermutationBranch {
    pub fn new(sigma: Permutation, layout: SwapLayout) -> Self {
        let network = layout.network(&sigma);
        let line_cost = SwapLayout::Line.cost(&sigma) as u64;
        PermutationBranch {
            sigma,
            network,
            line_cost,
        }
    }

    pub fn network(&self) -> &[(usize, usize)] {
        &self.network
    }
}

impl Branch for PermutationBranch {
    fn identity(n: usize) -> Self {
        PermutationBranch::new(Permutation::identity(n), SwapLayout::AllToAll)
    }

    fn apply(&self, amps: &mut [Complex64], d: usize, n: usize, adjoint: bool) {
        if adjoint {
            for &(i, j) in self.network.iter().rev() {
                swap_amplitudes(amps, i, j, d, n);
            }
        } else {
            for &(i, j) in &self.network {
                swap_amplitudes(amps, i, j, d, n);
            }
        }
    }

    fn gates(&self) -> u64 {
        self.network.len() as u64
    }

    fn line_gates(&self) -> u64 {
        self.line_cost
    }
}

#[derive(Debug, Clone)]
pub struct LcuTerm<B> {
    pub beta: f64,
    pub phase: Complex64,
    pub op: B,
}

/// `Σ_j β_j U_j` with `Σ_j β_j = s = 2`.
#[derive(Debug, Clone)]
pub struct LcuSegment<B> {
    n: usize,
    terms: Vec<LcuTerm<B>>,
    /// Householder vector `e_0 − p` of PREPARE, `p_j = √(β_j/s)`.
    reflector: Vec<f64>,
    reflector_norm_sqr: f64,
}

/// Counters from executing one or more segments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateTally {
    pub select_calls: u64,
    /// Σ over SELECT calls of the longest branch network.
    pub swaps: u64,
    pub line_swaps: u64,
}

impl std::ops::AddAssign for GateTally {
    fn add_assign(&mut self, o: GateTally) {
        self.select_calls += o.select_calls;
        self.swaps += o.swaps;
        self.line_swaps += o.line_swaps;
    }
}

impl<B: Branch> LcuSegment<B> {
    /// Splits complex coefficients into magnitude and phase, drops zeros and
    /// appends the `+I, −I` padding pair.
    pub fn from_weighted(n: usize, weighted: Vec<(Complex64, B)>, caps: &Caps) -> Result<Self> {
        let mut terms: Vec<LcuTerm<B>> = weighted
            .into_iter()
            .filter(|(a, _)| a.norm() > 0.0)
            .map(|(a, op)| LcuTerm {
                beta: a.norm(),
                phase: a / a.norm(),
                op,
            })
            .collect();
        let total: f64 = terms.iter().map(|t| t.beta).sum();
        if total > 2.0 {
            return Err(Error::domain(format!(
                "segment 1-norm {total} exceeds 2; the step Δt‖c‖₁ is too large"
            )));
        }
        let pad = 2.0 - total;
        if pad > 0.0 {
            for phase in [ONE, -ONE] {
                terms.push(LcuTerm {
                    beta: pad / 2.0,
                    phase,
                    op: B::identity(n),
                });
            }
        }
        if terms.len() > caps.lcu_terms {
            return Err(Error::resource(format!(
                "{} LCU branches exceed the cap of {}; use a smaller K or a sparser f",
                terms.len(),
                caps.lcu_terms
            )));
        }
        let mut reflector: Vec<f64> = terms.iter().map(|t| -(t.beta / 2.0).sqrt()).collect();
        reflector[0] += 1.0;
        let reflector_norm_sqr = reflector.iter().map(|w| w * w).sum();
        Ok(LcuSegment {
            n,
            terms,
            reflector,
            reflector_norm_sqr,
        })
    }

    pub fn terms(&self) -> &[LcuTerm<B>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn s(&self) -> f64 {
        self.terms.iter().map(|t| t.beta).sum()
    }

    /// Ancilla register size: branch count rounded up to a power of two.
    /// Slots past the last branch never receive amplitude and are not stored.
    pub fn ancilla_dim(&self) -> usize {
        self.terms.len().next_power_of_two()
    }

    pub fn max_branch_gates(&self) -> u64 {
        self.terms.iter().map(|t| t.op.gates()).max().unwrap_or(0)
    }

    pub fn max_branch_line_gates(&self) -> u64 {
        self.terms.iter().map(|t| t.op.line_gates()).max().unwrap_or(0)
    }

    /// Dense `Σ_j β_j U_j`.
    pub fn dense(&self, d: usize) -> DMatrix<Complex64> {
        let dim = d.pow(self.n as u32);
        let mut out = DMatrix::from_element(dim, dim, ZERO);
        for col in 0..dim {
            for term in &self.terms {
                let mut e = vec![ZERO; dim];
                e[col] = ONE;
                term.op.apply(&mut e, d, self.n, false);
                for (row, x) in e.iter().enumerate() {
                    out[(row, col)] += term.phase * term.beta * x;
                }
            }
        }
        out
    }

    fn prepare(&self, joint: &mut [Complex64], dim: usize) {
        if self.reflector_norm_sqr < 1e-300 {
            return;
        }
        let mut dots = vec![ZERO; dim];
        for (a, &w) in self.reflector.iter().enumerate() {
            if w != 0.0 {
                for (acc, x) in dots.iter_mut().zip(&joint[a * dim..(a + 1) * dim]) {
                    *acc += x * w;
                }
            }
        }
        let scale = 2.0 / self.reflector_norm_sqr;
        for (a, &w) in self.reflector.iter().enumerate() {
            if w != 0.0 {
                for (x, dot) in joint[a * dim..(a + 1) * dim].iter_mut().zip(&dots) {
                    *x -= dot * (scale * w);
                }
            }
        }
    }

    fn select(&self, joint: &mut [Complex64], d: usize, adjoint: bool, tally: &mut GateTally) {
        let dim = joint.len() / self.terms.len();
        for (a, term) in self.terms.iter().enumerate() {
            let block = &mut joint[a * dim..(a + 1) * dim];
            term.op.apply(block, d, self.n, adjoint);
            let phase = if adjoint { term.phase.conj() } else { term.phase };
            if phase != ONE {
                block.iter_mut().for_each(|x| *x *= phase);
            }
        }
        tally.select_calls += 1;
        tally.swaps += self.max_branch_gates();
        tally.line_swaps += self.max_branch_line_gates();
    }

    fn apply_v(&self, joint: &mut [Complex64], d: usize, dim: usize, adjoint: bool, tally: &mut GateTally) {
        self.prepare(joint, dim);
        self.select(joint, d, adjoint, tally);
        self.prepare(joint, dim);
    }

    /// PREPARE · SELECT · PREPARE, one amplification round `−V R V† R V`, then
    /// projection of the ancilla onto `|0⟩`.
    pub fn run(&self, state: &Statevector, caps: &Caps) -> Result<(Statevector, GateTally)> {
        check_size(self.n, state.n())?;
        let d = state.d();
        let dim = state.dim();
        caps.check_joint(dim * self.terms.len(), "the ancilla ⊗ system register")?;
        let mut joint = vec![ZERO; dim * self.terms.len()];
        joint[..dim].copy_from_slice(state.amplitudes());
        let mut tally = GateTally::default();
        self.apply_v(&mut joint, d, dim, false, &mut tally);
        joint[..dim].iter_mut().for_each(|x| *x = -*x);
        self.apply_v(&mut joint, d, dim, true, &mut tally);
        joint[..dim].iter_mut().for_each(|x| *x = -*x);
        self.apply_v(&mut joint, d, dim, false, &mut tally);
        let out: Vec<Complex64> = joint[..dim].iter().map(|x| -x).collect();
        Ok((Statevector::from_amplitudes(d, self.n, out)?, tally))
    }
}

/// Segment for `Σ_{m≤K} (−iΔt f)^{∗m}/m!` with one branch per distinct product.
pub fn build_segment(
    f: &AlgebraElement,
    delta_t: f64,
    order: usize,
    layout: SwapLayout,
    caps: &Caps,
) -> Result<LcuSegment<PermutationBranch>> {
    let taylor = taylor_element(f, delta_t, order)?;
    if taylor.len() + 2 > caps.lcu_terms {
        return Err(Error::resource(format!(
            "{} LCU branches exceed the cap of {}; use a smaller K or a sparser f",
            taylor.len() + 2,
            caps.lcu_terms
        )));
    }
    // Identity first so PREPARE's pivot carries the largest weight.
    let mut weighted: Vec<(Complex64, PermutationBranch)> = taylor
        .terms()
        .map(|(p, c)| (*c, PermutationBranch::new(p.clone(), layout)))
        .collect();
    weighted.sort_by_key(|(_, b)| !b.sigma.is_identity());
    LcuSegment::from_weighted(f.n(), weighted, caps)
}

pub fn run_segment<B: Branch>(state: &Statevector, seg: &LcuSegment<B>, caps: &Caps) -> Result<Statevector> {
    Ok(seg.run(state, caps)?.0)
}

/// Runs the same segment `count` times.
pub fn run_segments<B: Branch>(
    v: &Statevector,
    seg: &LcuSegment<B>,
    count: usize,
    caps: &Caps,
) -> Result<(Statevector, GateTally)> {
    let mut state = v.clone();
    let mut tally = GateTally::default();
    for _ in 0..count {
        let (next, used) = seg.run(&state, caps)?;
        state = next;
        tally += used;
    }
    Ok((state, tally))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateReport {
    pub segments: usize,
    pub order: usize,
    pub locality: usize,
    pub layout: SwapLayout,
    pub branches: usize,
    pub ancilla_dim: usize,
    pub select_calls: u64,
    /// Measured SWAPs under `layout`.
    pub actual: u64,
    /// Measured SWAPs on a 1-D line.
    pub line_swaps: u64,
    /// `k²·M·K`.
    pub k2mk_bound: u64,
    pub predicted_swap_gates: u64,
    pub closed_form_estimate: f64,
}

impl GateReport {
    fn new(plan: &SimulationPlan, branches: usize, ancilla_dim: usize, tally: GateTally) -> Self {
        let k = plan.locality as u64;
        GateReport {
            segments: plan.segments,
            order: plan.order,
            locality: plan.locality,
            layout: plan.layout,
            branches,
            ancilla_dim,
            select_calls: tally.select_calls,
            actual: tally.swaps,
            line_swaps: tally.line_swaps,
            k2mk_bound: k * k * plan.segments as u64 * plan.order as u64,
            predicted_swap_gates: plan.predicted_swap_gates,
            closed_form_estimate: closed_form_estimate(plan.n, plan.locality, plan.max_coeff, plan.t, plan.epsilon),
        }
    }
}

/// Gate counts for a plan without running the simulator.
pub fn gate_count_report(plan: &SimulationPlan, f: &AlgebraElement, caps: &Caps) -> Result<GateReport> {
    let seg = build_segment(f, plan.delta_t, plan.order, plan.layout, caps)?;
    let calls = 3 * plan.segments as u64;
    let tally = GateTally {
        select_calls: calls,
        swaps: calls * seg.max_branch_gates(),
        line_swaps: calls * seg.max_branch_line_gates(),
    };
    Ok(GateReport::new(plan, seg.len(), seg.ancilla_dim(), tally))
}

/// `exp(−itπ̃(f))|v⟩` by `M` LCU segments.
pub fn evolve(
    v: &Statevector,
    f: &AlgebraElement,
    t: f64,
    epsilon: f64,
    layout: SwapLayout,
    caps: &Caps,
) -> Result<(Statevector, SimulationPlan, GateReport)> {
    check_size(f.n(), v.n())?;
    let plan = plan(f, t, epsilon, layout)?;
    let seg = build_segment(f, plan.delta_t, plan.order, layout, caps)?;
    let (state, tally) = run_segments(v, &seg, plan.segments, caps)?;
    let report = GateReport::new(&plan, seg.len(), seg.ancilla_dim(), tally);
    Ok((state, plan, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixElement {
    pub value: Complex64,
    /// `None` when `t = 0`.
    pub plan: Option<SimulationPlan>,
    pub gates: Option<GateReport>,
}

/// `⟨u| exp(−itπ̃(f)) |v⟩` with error at most `ε`.
pub fn matrix_element(
    u: &YoungBasisVector,
    v: &YoungBasisVector,
    f: &AlgebraElement,
    t: f64,
    epsilon: f64,
    layout: SwapLayout,
    caps: &Caps,
) -> Result<MatrixElement> {
    check_size(u.vector.dim(), v.vector.dim())?;
    if t == 0.0 {
        if !f.is_hermitian(1e-12) {
            return Err(Error::domain("π̃(f) is not Hermitian"));
        }
        return Ok(MatrixElement {
            value: u.vector.inner(&v.vector),
            plan: None,
            gates: None,
        });
    }
    let (out, plan, gates) = evolve(&v.vector, f, t, epsilon, layout, caps)?;
    Ok(MatrixElement {
        value: u.vector.inner(&out),
        plan: Some(plan),
        gates: Some(gates),
    })
}
