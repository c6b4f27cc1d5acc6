use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use symlcu::bench::{run_bench, BenchConfig};
use symlcu::error::{Caps, Error as CoreError};
use symlcu::group_algebra::{random_hermitian_k_local, AlgebraElement, DenseFunction, SnFourier};
use symlcu::lcu;
use symlcu::pauli_expand::matrix_element_pauli;
use symlcu::permutation::Permutation;
use symlcu::quditsim::{exact_matrix_element, BasisLabel, SwapLayout, YoungBasis};
use symlcu::verify::{run_suite, Suite};
use symlcu::young::{schur_weyl_dimension_check, Partition};
use symlcu::yor::yor;

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::Resource(_)) => 3,
            CliError::Verification(_) => 4,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    LcuSwap,
    LcuPauli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Layout {
    AllToAll,
    Line,
}

impl From<Layout> for SwapLayout {
    fn from(l: Layout) -> Self {
        match l {
            Layout::AllToAll => SwapLayout::AllToAll,
            Layout::Line => SwapLayout::Line,
        }
    }
}

/// Symmetric-group algebra toolkit: Schur-Weyl tables, Young representations,
/// S_n Fourier transforms and LCU simulation of Young-basis matrix elements.
#[derive(Debug, Parser)]
#[command(name = "symlcu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `bench` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest dense Hilbert-space dimension d^n.
    #[arg(long, global = true)]
    cap_dense: Option<usize>,
    /// Largest n for factorial-size objects.
    #[arg(long, global = true)]
    cap_factorial: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Schur-Weyl dimension table for (C^d)^⊗n.
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Young orthogonal matrix of a permutation.
    Irrep {
        /// Partition, e.g. "3+1".
        #[arg(long)]
        lambda: String,
        /// Permutation in cycle notation, e.g. "(1 2 3)".
        #[arg(long)]
        perm: String,
    },
    /// Fourier transform of an element (from --f) or of a seeded random dense function.
    Fft {
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Group-algebra product f * g.
    Convolve {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Young basis vectors, all of them or the one named by --label "(λ,tab,w)".
    YoungBasis {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        label: Option<String>,
    },
    /// ⟨u| exp(−itπ̃(f)) |v⟩ for Young basis labels u, v.
    Matelem {
        /// Element JSON; without it a seeded random Hermitian k-local element is used.
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Terms of the random element (default n).
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Method::LcuSwap)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Layout::AllToAll)]
        layout: Layout,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Classical FFT operation counts against LCU SWAP counts over a range of n.
    Bench {
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Terms of each random element (default n).
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, value_enum, default_value_t = Layout::AllToAll)]
        layout: Layout,
        /// Leave the wall-time column empty so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Run an invariant suite.
    Verify {
        /// permutation, schur-weyl, yor, fourier, young-basis, lcu-e2e, pauli or all.
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symlcu: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn caps(cli: &Cli) -> Caps {
    let mut c = Caps::default();
    if let Some(v) = cli.cap_dense {
        c.dense_dim = v;
    }
    if let Some(v) = cli.cap_factorial {
        c.factorial_n = v;
    }
    c
}

fn run(cli: &Cli) -> CliResult<()> {
    let caps = caps(cli);
    let (text, verdict) = match &cli.command {
        Command::Dims { n, d } => (cmd_dims(*n, *d, cli.format, &caps)?, None),
        Command::Irrep { lambda, perm } => (cmd_irrep(lambda, perm)?, None),
        Command::Fft { f, n, seed } => (cmd_fft(f.as_ref(), *n, *seed, &caps)?, None),
        Command::Convolve { f, g } => (cmd_convolve(f, g, &caps)?, None),
        Command::YoungBasis { n, d, label } => (cmd_young_basis(*n, *d, label.as_deref(), &caps)?, None),
        Command::Matelem { .. } => (cmd_matelem(&cli.command, &caps)?, None),
        Command::Bench { .. } => cmd_bench(&cli.command, cli.format, &caps)?,
        Command::Verify { suite } => cmd_verify(suite, cli.format, &caps)?,
    };
    emit(cli.out.as_ref(), &text)?;
    match verdict {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn read_element(path: &PathBuf) -> CliResult<AlgebraElement> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(AlgebraElement::from_json_str(&text)?)
}

fn cmd_dims(n: usize, d: usize, format: Option<Format>, caps: &Caps) -> CliResult<String> {
    if n == 0 || d == 0 {
        return Err(CliError::Usage("n and d must be positive".into()));
    }
    caps.check_dense(d, n)?;
    let report = schur_weyl_dimension_check(n, d)?;
    // Two-row square shapes (m,m) next to the value 2^m/(m+1).
    let square: Vec<Value> = report
        .rows
        .iter()
        .filter(|r| r.partition.rows() == 2 && r.partition.parts()[0] == r.partition.parts()[1])
        .map(|r| {
            let m = r.partition.parts()[0];
            let rhs = 2f64.powi(m as i32) / (m as f64 + 1.0);
            json!({"m": m, "dim_sn": r.dim_sn, "two_pow_m_over_m_plus_1": rhs, "dim_below": (r.dim_sn as f64) < rhs})
        })
        .collect();
    if format == Some(Format::Csv) {
        let mut s = String::from("partition,dim_sn,dim_sud,product\n");
        for r in &report.rows {
            let _ = writeln!(s, "{},{},{},{}", r.partition, r.dim_sn, r.dim_sud, r.dim_sn * r.dim_sud);
        }
        let _ = writeln!(s, "# total {} expected {} consistent {}", report.total, report.expected, report.consistent);
        return Ok(s);
    }
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| json!({"partition": r.partition.to_string(), "dim_sn": r.dim_sn, "dim_sud": r.dim_sud}))
        .collect();
    Ok(pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "d": d,
        "rows": rows,
        "total": report.total,
        "expected": report.expected,
        "consistent": report.consistent,
        "square_shapes": square,
    })))
}

fn cmd_irrep(lambda: &str, perm: &str) -> CliResult<String> {
    let p = Partition::parse(lambda)?;
    let sigma = Permutation::parse(perm, Some(p.n()))?;
    let m = yor(&p, &sigma)?;
    // Hand-written so every entry carries 17 significant digits.
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let cells: Vec<String> = (0..m.ncols()).map(|j| format!("{:.16e}", m[(i, j)] + 0.0)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    Ok(format!(
        "{{\"schema_version\": {SCHEMA_VERSION}, \"lambda\": \"{p}\", \"perm\": \"{sigma}\", \"dim\": {}, \"matrix\": [{}]}}\n",
        m.nrows(),
        rows.join(", ")
    ))
}

fn cmd_fft(path: Option<&PathBuf>, n: Option<usize>, seed: u64, caps: &Caps) -> CliResult<String> {
    let dense = match (path, n) {
        (Some(p), _) => DenseFunction::from_element(&read_element(p)?, caps)?,
        (None, Some(n)) => DenseFunction::random(n, seed, caps)?,
        (None, None) => return Err(CliError::Usage("fft needs --f or --n".into())),
    };
    let engine = SnFourier::new(dense.n(), caps)?;
    let start = Instant::now();
    let fast = engine.fft(&dense)?;
    let wall = start.elapsed().as_secs_f64();
    let slow = engine.naive(&dense.to_element())?;
    Ok(pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "n": dense.n(),
        "blocks": fast.coefficients.to_json(),
        "fft_ops": fast.ops,
        "naive_ops": slow.ops,
        "naive_fft_max_abs_diff": fast.coefficients.max_abs_diff(&slow.coefficients),
        "timing": {"wall_time": wall},
    })))
}

fn cmd_convolve(f: &PathBuf, g: &PathBuf, caps: &Caps) -> CliResult<String> {
    let f = read_element(f)?;
    let g = read_element(g)?;
    caps.check_factorial(f.n())?;
    let h = f.convolve(&g)?;
    let mut doc = serde_json::to_value(h.to_json()).expect("element JSON serializes");
    doc["schema_version"] = json!(SCHEMA_VERSION);
    Ok(pretty(&doc))
}

/// Parses `"(3+1,0,2)"`: partition, tableau index, weight index.
fn parse_label(text: &str) -> CliResult<BasisLabel> {
    let bad = || CliError::Usage(format!("label {text:?} is not of the form \"(λ,tableau,weight)\""));
    let inner = text.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let mut it = inner.rsplitn(3, ',');
    let w = it.next().ok_or_else(bad)?.trim().parse::<usize>().map_err(|_| bad())?;
    let t = it.next().ok_or_else(bad)?.trim().parse::<usize>().map_err(|_| bad())?;
    let lambda = it.next().ok_or_else(bad)?;
    let lambda = lambda.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    Ok(BasisLabel {
        partition: Partition::parse(lambda)?,
        tableau: t,
        weight_index: w,
    })
}

fn cmd_young_basis(n: usize, d: usize, label: Option<&str>, caps: &Caps) -> CliResult<String> {
    let yb = YoungBasis::new(n, d, caps)?;
    let records: Vec<Value> = match label {
        Some(l) => {
            let v = yb.vector(&parse_label(l)?)?;
            vec![serde_json::to_value(v.to_record()).expect("record serializes")]
        }
        None => yb
            .all(caps)?
            .iter()
            .map(|v| serde_json::to_value(v.to_record()).expect("record serializes"))
            .collect(),
    };
    Ok(pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "d": d,
        "vectors": records,
    })))
}

fn cmd_matelem(cmd: &Command, caps: &Caps) -> CliResult<String> {
    let Command::Matelem { f, n, d, k, terms, seed, t, eps, method, layout, u, v } = cmd else {
        unreachable!()
    };
    if !(*eps > 0.0) || !t.is_finite() {
        return Err(CliError::Usage("need eps > 0 and finite t".into()));
    }
    let f = match (f, n) {
        (Some(p), _) => read_element(p)?,
        (None, Some(n)) => random_hermitian_k_local(*n, *k, terms.unwrap_or(*n), *seed)?,
        (None, None) => return Err(CliError::Usage("matelem needs --f or --n".into())),
    };
    if let Some(n) = n {
        if *n != f.n() {
            return Err(CliError::Usage(format!("--n {n} disagrees with element on S_{}", f.n())));
        }
    }
    let yb = YoungBasis::new(f.n(), *d, caps)?;
    let uv = yb.vector(&parse_label(u)?)?;
    let vv = yb.vector(&parse_label(v)?)?;
    let oracle = exact_matrix_element(&uv, &vv, &f, *t, caps)?;
    let mut rec = json!({
        "schema_version": SCHEMA_VERSION,
        "n": f.n(),
        "d": d,
        "t": t,
        "eps": eps,
        "M": Value::Null,
        "K": Value::Null,
        "swap_count": Value::Null,
        "closed_form_estimate": Value::Null,
    });
    let value = match method {
        Method::Exact => oracle,
        Method::LcuSwap => {
            let r = lcu::matrix_element(&uv, &vv, &f, *t, *eps, (*layout).into(), caps)?;
            if let (Some(plan), Some(g)) = (&r.plan, &r.gates) {
                rec["M"] = json!(plan.segments);
                rec["K"] = json!(plan.order);
                rec["swap_count"] = json!(g.actual);
                rec["line_swap_count"] = json!(g.line_swaps);
                rec["k2mk_bound"] = json!(g.k2mk_bound);
                rec["closed_form_estimate"] = json!(g.closed_form_estimate);
            }
            r.value
        }
        Method::LcuPauli => {
            let r = matrix_element_pauli(&uv, &vv, &f, *t, *eps, caps)?;
            if let (Some(plan), Some(g)) = (&r.plan, &r.gates) {
                rec["M"] = json!(plan.segments);
                rec["K"] = json!(plan.order);
                rec["pauli_applications"] = json!(g.pauli_applications);
                rec["single_qubit_gates"] = json!(g.single_qubit_gates);
                rec["closed_form_estimate"] = json!(g.closed_form_estimate);
            }
            r.value
        }
    };
    rec["method"] = json!(match method {
        Method::Exact => "exact",
        Method::LcuSwap => "lcu-swap",
        Method::LcuPauli => "lcu-pauli",
    });
    rec["value_re"] = json!(value.re);
    rec["value_im"] = json!(value.im);
    rec["oracle_re"] = json!(oracle.re);
    rec["oracle_im"] = json!(oracle.im);
    rec["abs_err"] = json!((value - oracle).norm());
    Ok(pretty(&rec))
}

fn cmd_bench(cmd: &Command, format: Option<Format>, caps: &Caps) -> CliResult<(String, Option<String>)> {
    let Command::Bench { n_min, n_max, k, t, eps, seed, terms, layout, no_timing } = cmd else {
        unreachable!()
    };
    let cfg = BenchConfig {
        n_min: *n_min,
        n_max: *n_max,
        k: *k,
        t: *t,
        epsilon: *eps,
        seed: *seed,
        num_terms: *terms,
        layout: (*layout).into(),
        ..BenchConfig::default()
    };
    let rep = run_bench(&cfg, caps)?;
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = rep.to_csv(!no_timing);
            let _ = writeln!(
                s,
                "# fitted_c {:.6} ratio_increasing {} within_k2mk {} within_closed_form {}",
                rep.fitted_c, rep.ratio_increasing, rep.within_k2mk, rep.within_closed_form
            );
            s
        }
        Format::Json => {
            let mut doc = serde_json::to_value(&rep).expect("bench report serializes");
            doc["schema_version"] = json!(SCHEMA_VERSION);
            if *no_timing {
                for row in doc["rows"].as_array_mut().into_iter().flatten() {
                    row["classical_wall_time"] = Value::Null;
                }
            }
            pretty(&doc)
        }
    };
    let verdict = (!(rep.ratio_increasing && rep.within_k2mk))
        .then(|| "ratio not strictly increasing or SWAP count above k²MK".to_string());
    Ok((text, verdict))
}

fn cmd_verify(name: &str, format: Option<Format>, caps: &Caps) -> CliResult<(String, Option<String>)> {
    let suite: Suite = name.parse().map_err(|e: CoreError| CliError::Usage(e.to_string()))?;
    let rep = run_suite(suite, caps)?;
    let text = if format == Some(Format::Json) {
        let mut doc = serde_json::to_value(&rep).expect("report serializes");
        doc["schema_version"] = json!(SCHEMA_VERSION);
        doc["passed"] = json!(rep.passed());
        pretty(&doc)
    } else {
        let mut s = String::new();
        for c in &rep.checks {
            let _ = writeln!(s, "{c}");
        }
        let _ = writeln!(s, "{} checks, {} failed", rep.checks.len(), rep.failures());
        s
    };
    let verdict = (!rep.passed()).then(|| format!("{} check(s) failed in suite {suite}", rep.failures()));
    Ok((text, verdict))
}
