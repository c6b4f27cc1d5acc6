//! Classical Fourier baseline against the LCU circuit cost, one row per `n`.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Caps, Error, Result};
use crate::group_algebra::{random_hermitian_k_local_scaled, DenseFunction, SnFourier};
use crate::lcu::evolve;
use crate::permutation::factorial;
use crate::quditsim::{Statevector, SwapLayout};

pub const CSV_HEADER: &str =
    "n,classical_fft_ops,classical_wall_time,lcu_swap_gates,closed_form_estimate,k2mk_bound,segments,order,num_terms";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub k: usize,
    pub t: f64,
    pub epsilon: f64,
    pub max_coeff: f64,
    pub seed: u64,
    /// Terms in the random Hamiltonian; `None` means `n`.
    pub num_terms: Option<usize>,
    pub layout: SwapLayout,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_min: 4,
            n_max: 7,
            k: 3,
            t: 1.0,
            epsilon: 1e-3,
            max_coeff: 1.0,
            seed: 7,
            num_terms: None,
            layout: SwapLayout::AllToAll,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub classical_fft_ops: u64,
    /// Seconds; not deterministic.
    pub classical_wall_time: f64,
    pub lcu_swap_gates: u64,
    pub closed_form_estimate: f64,
    pub k2mk_bound: u64,
    pub segments: usize,
    pub order: usize,
    pub num_terms: usize,
}

impl BenchRow {
    pub fn ratio(&self) -> f64 {
        self.classical_fft_ops as f64 / self.lcu_swap_gates.max(1) as f64
    }

    /// `n!·n²`.
    pub fn factorial_scale(&self) -> f64 {
        factorial(self.n) as f64 * (self.n * self.n) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    /// Smallest `c` with `classical_fft_ops ≥ n!·n²/c` on every row.
    pub fitted_c: f64,
    pub ratio_increasing: bool,
    pub within_k2mk: bool,
    pub within_closed_form: bool,
}

impl BenchReport {
    /// Rows as CSV; `with_time = false` drops the wall-clock column values
    /// so the output is reproducible.
    pub fn to_csv(&self, with_time: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let time = if with_time { format!("{:.6}", r.classical_wall_time) } else { String::new() };
            let _ = writeln!(
                out,
                "{},{},{},{},{:.6e},{},{},{},{}",
                r.n,
                r.classical_fft_ops,
                time,
                r.lcu_swap_gates,
                r.closed_form_estimate,
                r.k2mk_bound,
                r.segments,
                r.order,
                r.num_terms
            );
        }
        out
    }
}

/// One row: FFT of a random `k`-local Hermitian element and an LCU run of
/// the same element on `|0…0⟩` over qubits.
pub fn bench_row(n: usize, cfg: &BenchConfig, caps: &Caps) -> Result<BenchRow> {
    caps.check_factorial(n)?;
    let num_terms = cfg.num_terms.unwrap_or(n);
    let f = random_hermitian_k_local_scaled(n, cfg.k, num_terms, cfg.max_coeff, cfg.seed ^ ((n as u64) << 32))?;

    let ft = SnFourier::new(n, caps)?;
    let dense = DenseFunction::from_element(&f, caps)?;
    let start = Instant::now();
    let out = ft.fft(&dense)?;
    let wall = start.elapsed().as_secs_f64();

    let v = Statevector::zero_state(2, n, caps)?;
    let (_, plan, report) = evolve(&v, &f, cfg.t, cfg.epsilon, cfg.layout, caps)?;
    Ok(BenchRow {
        n,
        classical_fft_ops: out.ops,
        classical_wall_time: wall,
        lcu_swap_gates: report.actual,
        closed_form_estimate: report.closed_form_estimate,
        k2mk_bound: report.k2mk_bound,
        segments: plan.segments,
        order: plan.order,
        num_terms,
    })
}

pub fn run_bench(cfg: &BenchConfig, caps: &Caps) -> Result<BenchReport> {
    if cfg.n_min > cfg.n_max || cfg.n_min < cfg.k {
        return Err(Error::domain(format!(
            "bench range {}..={} must be non-empty with n ≥ k = {}",
            cfg.n_min, cfg.n_max, cfg.k
        )));
    }
    caps.check_factorial(cfg.n_max)?;
    let rows = (cfg.n_min..=cfg.n_max)
        .map(|n| bench_row(n, cfg, caps))
        .collect::<Result<Vec<_>>>()?;
    let fitted_c = rows
        .iter()
        .map(|r| r.factorial_scale() / r.classical_fft_ops.max(1) as f64)
        .fold(0.0, f64::max);
    let ratio_increasing = rows.windows(2).all(|w| w[1].ratio() > w[0].ratio());
    let within_k2mk = rows.iter().all(|r| r.lcu_swap_gates <= r.k2mk_bound);
    let within_closed_form = rows.iter().all(|r| r.lcu_swap_gates as f64 <= r.closed_form_estimate);
    Ok(BenchReport {
        config: cfg.clone(),
        rows,
        fitted_c,
        ratio_increasing,
        within_k2mk,
        within_closed_form,
    })
}
