//! Command-line front end.
//!
//! States travel as JSON documents tagged by `kind`:
//!
//! ```json
//! {"kind": "product", "qubits": [[[1, 0], [0, 0]], [[0.7071067811865476, 0], [0.7071067811865476, 0]]]}
//! {"kind": "dense", "n": 1, "amps": [[1, 0], [0, 0]]}
//! {"kind": "bits", "bits": "101"}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and qubit 1 (the most significant bit)
//! comes first.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::dequant::{self, DequantError, SeparabilityReport};
use crate::numerics::Complex;
use crate::oracle::{self, GateTally};
use crate::states::{
    self, basis_product, max_amp_distance, tensor_expand_capped, BitString, DenseState,
    ProductState, Qubit, StateError, DEFAULT_DENSE_CAP,
};

/// Environment variable overriding the dense-expansion qubit cap.
pub const DENSE_CAP_ENV: &str = "DEQUANT_DENSE_CAP";

/// Largest distance `check` accepts between the two paths.
pub const CHECK_THRESHOLD: f64 = 1e-9;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INVALID_STATE: i32 = 2;
    pub const WOULD_ENTANGLE: i32 = 3;
    pub const MISMATCH: i32 = 4;
}

/// Wire form of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateDocument {
    Product { qubits: Vec<[[f64; 2]; 2]> },
    Dense { n: usize, amps: Vec<[f64; 2]> },
    Bits { bits: String },
}

/// A validated document.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Product(ProductState),
    Dense(DenseState),
    Bits(BitString),
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Field { field: String, source: StateError },
    #[error("n: declared {n} qubits but amps has {len} entries (expected 2^n)")]
    DenseLength { n: usize, len: usize },
}

fn pair(c: Complex) -> [f64; 2] {
    [c.re, c.im]
}

fn complex(p: [f64; 2]) -> Complex {
    Complex::new(p[0], p[1])
}

impl StateDocument {
    pub fn from_product(s: &ProductState) -> Self {
        StateDocument::Product {
            qubits: s
                .qubits()
                .iter()
                .map(|q| [pair(q.amp0()), pair(q.amp1())])
                .collect(),
        }
    }

    pub fn from_dense(d: &DenseState) -> Self {
        StateDocument::Dense {
            n: d.n(),
            amps: d.amps().iter().copied().map(pair).collect(),
        }
    }

    pub fn from_bits(b: &BitString) -> Self {
        StateDocument::Bits {
            bits: b.to_string(),
        }
    }

    pub fn from_state(s: &State) -> Self {
        match s {
            State::Product(p) => Self::from_product(p),
            State::Dense(d) => Self::from_dense(d),
            State::Bits(b) => Self::from_bits(b),
        }
    }

    pub fn parse(text: &str) -> Result<State, DocumentError> {
        serde_json::from_str::<StateDocument>(text)?.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents hold finite numbers")
    }

    pub fn validate(self) -> Result<State, DocumentError> {
        match self {
            StateDocument::Product { qubits } => {
                let qubits = qubits
                    .into_iter()
                    .enumerate()
                    .map(|(i, [a, b])| {
                        Qubit::new(complex(a), complex(b)).map_err(|source| DocumentError::Field {
                            field: format!("qubits[{i}]"),
                            source,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ProductState::new(qubits)
                    .map(State::Product)
                    .map_err(|source| DocumentError::Field {
                        field: "qubits".into(),
                        source,
                    })
            }
            StateDocument::Dense { n, amps } => {
                if n >= usize::BITS as usize || amps.len() != 1usize << n {
                    return Err(DocumentError::DenseLength { n, len: amps.len() });
                }
                DenseState::new(amps.into_iter().map(complex).collect())
                    .map(State::Dense)
                    .map_err(|source| DocumentError::Field {
                        field: "amps".into(),
                        source,
                    })
            }
            StateDocument::Bits { bits } => {
                bits.parse()
                    .map(State::Bits)
                    .map_err(|source| DocumentError::Field {
                        field: "bits".into(),
                        source,
                    })
            }
        }
    }
}

/// JSON form of a [`SeparabilityReport`]; `r` is `{num, logden}` with the
/// numerator as a decimal string since it can exceed 64 bits.
pub fn report_json(rep: &SeparabilityReport) -> serde_json::Value {
    let prefix: String = rep
        .prefix_bits
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    json!({
        "separable": rep.separable,
        "k": rep.k,
        "prefix_bits": prefix,
        "r": { "num": rep.r.num().to_string(), "logden": rep.r.logden() },
        "omega": pair(rep.omega),
        "failure": rep.failure.as_ref().map(|f| json!({
            "qubit": f.qubit,
            "clause": "definite_tail",
            "amp_product": f.amp_product,
            "message": f.to_string(),
        })),
    })
}

pub fn tally_json(t: &GateTally) -> serde_json::Value {
    json!({
        "hadamards": t.hadamards,
        "controlled_phases": t.controlled_phases,
        "swaps": t.swaps,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "dequant",
    version,
    about = "Linear-time classical QFT on product states, with a dense oracle"
)]
struct Cli {
    /// Magnitude at or below which an amplitude counts as zero.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_EPS)]
    eps: f64,
    /// Tolerance for phase-match and pair-product comparisons.
    #[arg(long, global = true, default_value_t = dequant::DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// QFT of a computational basis state given as a bit string.
    Basis { bits: String },
    /// QFT of a product state that stays separable.
    Transform(InputArg),
    /// Report whether the QFT keeps a product state separable.
    Analyze(InputArg),
    /// Dense reference transforms.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Compare the linear-time transform against the dense DFT.
    Check(InputArg),
    /// Time the basis-state transform against the dense oracle.
    Bench {
        #[arg(long, default_value_t = 1 << 16)]
        min: usize,
        #[arg(long, default_value_t = 1 << 20)]
        max: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Step n by one instead of doubling.
        #[arg(long)]
        linear: bool,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Direct (or FFT) discrete Fourier transform.
    Dft(InputArg),
    /// Gate-level circuit simulation; the gate tally goes to stderr.
    Circuit(InputArg),
}

#[derive(Debug, Args)]
struct InputArg {
    /// State document path, or `-` for standard input.
    input: PathBuf,
}

/// A failed command: exit code plus the diagnostic for standard error.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: exit::INVALID_STATE,
            message: message.to_string(),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::invalid(e)
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        Failure::invalid(e)
    }
}

impl From<DequantError> for Failure {
    fn from(e: DequantError) -> Self {
        let DequantError::WouldEntangle(rep) = e;
        Failure {
            code: exit::WOULD_ENTANGLE,
            message: report_json(&rep).to_string(),
        }
    }
}

struct Context<'a> {
    eps: f64,
    tol: f64,
    cap: usize,
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn read_state(&mut self, input: &InputArg) -> Result<State, Failure> {
        let text = if input.input.as_os_str() == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::invalid(format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(&input.input)
                .map_err(|e| Failure::invalid(format!("{}: {e}", input.input.display())))?
        };
        Ok(StateDocument::parse(&text)?)
    }

    fn read_product(&mut self, input: &InputArg) -> Result<ProductState, Failure> {
        match self.read_state(input)? {
            State::Product(p) => Ok(p),
            State::Bits(b) => Ok(basis_product(&b)),
            State::Dense(_) => Err(Failure::invalid(
                "kind: expected a product or bits document, got dense",
            )),
        }
    }

    fn read_dense(&mut self, input: &InputArg) -> Result<DenseState, Failure> {
        match self.read_state(input)? {
            State::Dense(d) => Ok(d),
            State::Product(p) => Ok(tensor_expand_capped(&p, self.cap)?),
            State::Bits(b) => Ok(tensor_expand_capped(&basis_product(&b), self.cap)?),
        }
    }

    fn emit(&mut self, doc: &StateDocument) -> Result<(), Failure> {
        writeln!(self.out, "{}", doc.to_json()).map_err(|e| Failure {
            code: exit::USAGE,
            message: format!("stdout: {e}"),
        })
    }

    fn emit_value(&mut self, v: &serde_json::Value) -> Result<(), Failure> {
        writeln!(self.out, "{v}").map_err(|e| Failure {
            code: exit::USAGE,
            message: format!("stdout: {e}"),
        })
    }
}

fn dense_cap_from_env() -> Result<usize, String> {
    match std::env::var(DENSE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{DENSE_CAP_ENV}: expected a qubit count, got {v:?}")),
        Err(_) => Ok(DEFAULT_DENSE_CAP),
    }
}

/// Runs the CLI on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(
        argv,
        &mut stdin.lock(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Runs the CLI against explicit streams and returns the exit code.
pub fn run_with<I, T>(
    argv: I,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                exit::USAGE
            } else {
                let _ = write!(out, "{e}");
                exit::SUCCESS
            };
            return code;
        }
    };
    let cap = match dense_cap_from_env() {
        Ok(cap) => cap,
        Err(msg) => {
            let _ = writeln!(err, "{msg}");
            return exit::USAGE;
        }
    };
    let mut ctx = Context {
        eps: cli.eps,
        tol: cli.tol,
        cap,
        stdin,
        out,
        err,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) => exit::SUCCESS,
        Err(f) => {
            let _ = writeln!(ctx.err, "{}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, ctx: &mut Context<'_>) -> Result<(), Failure> {
    match command {
        Command::Basis { bits } => {
            let a: BitString = bits
                .parse()
                .map_err(|e| Failure::invalid(format!("bits: {e}")))?;
            ctx.emit(&StateDocument::from_product(&dequant::qft_basis(&a)))
        }
        Command::Transform(input) => {
            let s = ctx.read_product(&input)?;
            let out = dequant::qft_separable(&s, ctx.tol)?;
            ctx.emit(&StateDocument::from_product(&out))
        }
        Command::Analyze(input) => {
            let s = ctx.read_product(&input)?;
            let rep = dequant::analyze_qft_separability(&s, ctx.tol);
            ctx.emit_value(&report_json(&rep))
        }
        Command::Oracle { which } => match which {
            OracleCommand::Dft(input) => {
                let d = ctx.read_dense(&input)?;
                ctx.emit(&StateDocument::from_dense(&oracle::dft(&d)))
            }
            OracleCommand::Circuit(input) => {
                let d = ctx.read_dense(&input)?;
                let (out, tally) = oracle::qft_circuit(&d);
                ctx.emit(&StateDocument::from_dense(&out))?;
                let _ = writeln!(ctx.err, "{}", tally_json(&tally));
                Ok(())
            }
        },
        Command::Check(input) => check(&input, ctx),
        Command::Bench {
            min,
            max,
            reps,
            linear,
        } => {
            if min == 0 || max < min || reps == 0 {
                return Err(Failure {
                    code: exit::USAGE,
                    message: "bench: need 1 <= min <= max and reps >= 1".into(),
                });
            }
            let _ = writeln!(ctx.out, "n,dequant_ns,oracle_ns");
            for row in bench_rows(&bench_sizes(min, max, linear), reps, ctx.cap) {
                let _ = writeln!(ctx.out, "{}", row.csv());
            }
            Ok(())
        }
    }
}

fn check(input: &InputArg, ctx: &mut Context<'_>) -> Result<(), Failure> {
    let state = ctx.read_state(input)?;
    let product = match state {
        State::Product(p) => p,
        State::Bits(b) => basis_product(&b),
        State::Dense(d) => states::factor_product(&d, ctx.eps)
            .map_err(|e| Failure::invalid(format!("amps: {e}")))?,
    };
    let fast = dequant::qft_separable(&product, ctx.tol)?;
    let fast = tensor_expand_capped(&fast, ctx.cap)?;
    let slow = oracle::dft(&tensor_expand_capped(&product, ctx.cap)?);
    let dist = max_amp_distance(&fast, &slow)?;
    ctx.emit_value(&json!({ "max_amp_distance": dist, "threshold": CHECK_THRESHOLD }))?;
    if dist > CHECK_THRESHOLD {
        return Err(Failure {
            code: exit::MISMATCH,
            message: format!("check: de-quantised and dense outputs differ by {dist:e}"),
        });
    }
    Ok(())
}

/// One line of `bench` output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub dequant_ns: u128,
    /// `None` above the dense cap.
    pub oracle_ns: Option<u128>,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        match self.oracle_ns {
            Some(o) => format!("{},{},{}", self.n, self.dequant_ns, o),
            None => format!("{},{},", self.n, self.dequant_ns),
        }
    }
}

/// `min, 2·min, 4·min, … ≤ max`, or every integer in range when `linear`.
pub fn bench_sizes(min: usize, max: usize, linear: bool) -> Vec<usize> {
    if linear {
        return (min..=max).collect();
    }
    std::iter::successors(Some(min), |&n| n.checked_mul(2))
        .take_while(|&n| n <= max)
        .collect()
}

/// A fixed, irregular `n`-bit input.
pub fn bench_input(n: usize) -> BitString {
    let bits = (0..n as u64)
        .map(|i| (i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 63) == 1)
        .collect();
    BitString::new(bits).expect("n >= 1")
}

/// Best-of-`reps` timings for each size.
///
/// Repetitions are interleaved across sizes, so a transient slowdown hits
/// every row alike instead of inflating one ratio. A single output buffer
/// sized for the largest input is touched before timing starts, which keeps
/// allocator behaviour out of the numbers.
pub fn bench_rows(sizes: &[usize], reps: usize, cap: usize) -> Vec<BenchRow> {
    let inputs: Vec<BitString> = sizes.iter().map(|&n| bench_input(n)).collect();
    let mut buf = Vec::new();
    if let Some(largest) = inputs.iter().max_by_key(|a| a.len()) {
        dequant::qft_basis_into(largest, &mut buf);
    }
    let mut rows: Vec<BenchRow> = sizes
        .iter()
        .map(|&n| BenchRow {
            n,
            dequant_ns: u128::MAX,
            oracle_ns: (n <= cap).then_some(u128::MAX),
        })
        .collect();
    for _ in 0..reps.max(1) {
        for (row, a) in rows.iter_mut().zip(&inputs) {
            let ns = time(|| {
                dequant::qft_basis_into(std::hint::black_box(a), &mut buf);
                std::hint::black_box(&buf);
            });
            row.dequant_ns = row.dequant_ns.min(ns);
            if let Some(best) = row.oracle_ns.as_mut() {
                let ns = time(|| {
                    let d = tensor_expand_capped(&basis_product(a), cap).expect("n within cap");
                    std::hint::black_box(oracle::dft(&d));
                });
                *best = (*best).min(ns);
            }
        }
    }
    rows
}

fn time(f: impl FnOnce()) -> u128 {
    let start = Instant::now();
    f();
    start.elapsed().as_nanos()
}
