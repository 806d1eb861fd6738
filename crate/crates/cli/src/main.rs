//! `checker`: command-line front end for the checker-board engine.
//!
//! Every invocation prints one JSON line (a [`RunReport`]) on stdout.
//! Exit codes: 0 on success, 1 on parse or precondition errors, 2 when a
//! numerical or structural verification fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use checker_core::tft::{self, EvalOptions};
use checker_core::verify::{self, TOLERANCE};
use checker_core::{
    chip_from_coset, compose, compose_chips, oracle_operator, thoma_character, thoma_vs_phi, CheckerBoard, Chip,
    CosetBoard, CycleType, GroupElement, MatrixOperator, Permutation, QuasidualComplex, SymbolTensor, ThomaParams,
};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const THREADS_VAR: &str = "COSET_TFT_THREADS";

#[derive(Parser)]
#[command(name = "checker", version, about = "Double cosets of the n-symmetric group and the checker TFT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single permutations.
    #[command(subcommand)]
    Perm(PermCmd),
    /// Checker-board surfaces of group elements.
    #[command(subcommand)]
    Board(BoardCmd),
    /// Labeled boards as morphisms.
    #[command(subcommand)]
    Coset(CosetCmd),
    /// State sums and operators of a symbol tensor.
    #[command(subcommand)]
    Tft(TftCmd),
    /// Two-color chips.
    #[command(subcommand)]
    Chips(ChipsCmd),
    /// Thoma characters.
    #[command(subcommand)]
    Thoma(ThomaCmd),
    /// The quasidual polygonal complex.
    #[command(subcommand)]
    Quasidual(QuasidualCmd),
    /// Batch verification runs.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum PermCmd {
    /// Cycles, cycle type and inverse of a permutation.
    Info {
        /// 1-based images, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        images: Vec<usize>,
        /// Top row of a two-row matrix; `--images` is then the bottom row.
        #[arg(long, value_delimiter = ',')]
        top: Option<Vec<usize>>,
    },
    /// The product `p∘q`, applying `q` first.
    Compose {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<usize>,
    },
}

#[derive(Args)]
struct InFile {
    /// Group element or board JSON.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum BoardCmd {
    /// Face, vertex, edge and component counts.
    Stats(InFile),
    /// Writes the dual graph in DOT format.
    Dot {
        #[command(flatten)]
        input: InFile,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CosetCmd {
    /// Canonical form of a labeled board.
    Canon(InFile),
    /// The product `a∘b`.
    Mul {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// The involution `a ↦ a^□`.
    Involute(InFile),
    /// The projection `θ`.
    Theta {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
    /// The board of a group element with the given label counts.
    FromElement {
        #[command(flatten)]
        input: InFile,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
}

#[derive(Args)]
struct BoardAndTensor {
    /// Coset board JSON.
    #[arg(long)]
    board: PathBuf,
    /// Symbol tensor JSON.
    #[arg(long)]
    tensor: PathBuf,
}

#[derive(Subcommand)]
enum TftCmd {
    /// Partition function of a closed board. Graded tensors use the super sign.
    Phi {
        #[command(flatten)]
        args: BoardAndTensor,
        /// Ignore the grading.
        #[arg(long)]
        plain: bool,
    },
    /// The operator of a labeled board.
    Op {
        #[command(flatten)]
        args: BoardAndTensor,
    },
    /// Homomorphism check on random composable pairs.
    Check {
        #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Truncated tensor-product oracle, compared with the state sum.
    Oracle {
        #[command(flatten)]
        input: InFile,
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
        /// Truncation size; defaults to the element's degree.
        #[arg(long)]
        bound: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ChipsCmd {
    /// The chip of a pair of permutations with the given label counts.
    FromPair {
        #[command(flatten)]
        input: InFile,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
    /// The composite chip `a∘b`.
    Compose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Subcommand)]
enum ThomaCmd {
    /// Character value on a cycle type.
    Eval {
        #[arg(long, value_delimiter = ',', required = true)]
        cycles: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        alphas: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        betas: Vec<String>,
    },
}

#[derive(Subcommand)]
enum QuasidualCmd {
    /// Counts, the surface test and the faces.
    Stats {
        #[command(flatten)]
        input: InFile,
        /// Also write the bipartite graph in DOT format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every acceptance check.
    All {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A single acceptance check.
    One {
        #[arg(long)]
        id: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    inputs: BTreeMap<String, String>,
    outputs: Value,
    deviations: BTreeMap<String, f64>,
    passed: bool,
    wall_time_ms: f64,
}

/// Errors that end a run with exit code 1.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

#[derive(Default)]
struct Session {
    inputs: BTreeMap<String, String>,
    deviations: BTreeMap<String, f64>,
    passed: bool,
}

impl Session {
    fn read<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        self.inputs
            .insert(path.display().to_string(), format!("{:x}", Sha256::digest(&bytes)));
        serde_json::from_slice(&bytes).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }

    fn deviation(&mut self, key: &str, value: f64) {
        self.passed &= value <= TOLERANCE;
        self.deviations.insert(key.to_string(), value);
    }
}

fn write_dot(path: &Path, dot: &str) -> Result<Value, Failure> {
    fs::write(path, dot).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(json!(path.display().to_string()))
}

/// Accepts `{"n", "perms"}` or `{"n", "gluings"}`.
fn read_board(s: &mut Session, path: &Path) -> Result<CheckerBoard, Failure> {
    let v: Value = s.read(path)?;
    if v.get("perms").is_some() {
        let g: GroupElement = serde_json::from_value(v)?;
        Ok(CheckerBoard::build(&g))
    } else {
        Ok(serde_json::from_value(v)?)
    }
}

fn read_element(s: &mut Session, path: &Path) -> Result<GroupElement, Failure> {
    Ok(read_board(s, path)?.to_element())
}

fn one_based_cycles(p: &Permutation) -> Vec<Vec<usize>> {
    p.cycles().into_iter().map(|c| c.into_iter().map(|x| x + 1).collect()).collect()
}

fn matrix_json(op: &MatrixOperator) -> Value {
    let m = op.matrix();
    let re: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let im: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
    json!({
        "target": op.target(),
        "source": op.source(),
        "slot_dim": op.slot_dim(),
        "rows": m.nrows(),
        "cols": m.ncols(),
        "re": re,
        "im": im,
    })
}

fn parse_weights(raw: &[String]) -> Result<Vec<f64>, Failure> {
    raw.iter()
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<f64>().map_err(|e| Failure(format!("weight {x:?}: {e}"))))
        .collect()
}

/// A permutation of the given cycle type on consecutive blocks.
fn with_cycle_type(lengths: &[usize]) -> Result<Permutation, Failure> {
    let mut images = Vec::new();
    for &k in lengths {
        let start = images.len();
        images.extend((0..k).map(|i| start + (i + 1) % k));
    }
    Ok(Permutation::from_images(images)?)
}

fn run(command: Command, s: &mut Session) -> Result<Value, Failure> {
    Ok(match command {
        Command::Perm(PermCmd::Info { images, top }) => {
            let p = match top {
                Some(top) => Permutation::from_two_row(&top, &images)?,
                None => Permutation::from_one_based(&images)?,
            };
            json!({
                "cycles": one_based_cycles(&p),
                "cycle_type": p.cycle_type().counts,
                "inverse": p.inverse(),
            })
        }
        Command::Perm(PermCmd::Compose { p, q }) => {
            let (p, q) = (Permutation::from_one_based(&p)?, Permutation::from_one_based(&q)?);
            json!({ "product": compose(&p, &q) })
        }
        Command::Board(BoardCmd::Stats(input)) => {
            let b = read_board(s, &input.input)?;
            json!({
                "n": b.n(),
                "size": b.size(),
                "faces": b.face_count(),
                "vertices": b.vertex_count(),
                "edges": b.edge_count(),
                "euler_characteristic": b.euler_char(),
                "components": b.components().iter().map(|c| &c.stats).collect::<Vec<_>>(),
            })
        }
        Command::Board(BoardCmd::Dot { input, out }) => {
            let b = read_board(s, &input.input)?;
            json!({ "dot": write_dot(&out, &b.to_dot())? })
        }
        Command::Coset(cmd) => run_coset(cmd, s)?,
        Command::Tft(cmd) => run_tft(cmd, s)?,
        Command::Chips(ChipsCmd::FromPair { input, alpha, beta }) => {
            let g = read_element(s, &input.input)?;
            json!({ "chip": chip_from_coset(&CosetBoard::from_element(&g, alpha, beta))? })
        }
        Command::Chips(ChipsCmd::Compose { a, b }) => {
            let a: Chip = s.read(&a)?;
            let b: Chip = s.read(&b)?;
            json!({ "chip": compose_chips(&a, &b)? })
        }
        Command::Thoma(ThomaCmd::Eval { cycles, alphas, betas }) => {
            let params = ThomaParams::new(parse_weights(&alphas)?, parse_weights(&betas)?)?;
            let value = thoma_character(&CycleType::from_lengths(&cycles), &params);
            let mass: f64 = params.alphas().iter().chain(params.betas()).sum();
            if (mass - 1.0).abs() <= 1e-12 {
                s.deviation("phi_super", thoma_vs_phi(&with_cycle_type(&cycles)?, &params)?);
            }
            json!({ "character": value, "mass": mass })
        }
        Command::Quasidual(QuasidualCmd::Stats { input, out }) => {
            let q = QuasidualComplex::build(&read_element(s, &input.input)?);
            let mut v = json!({
                "is_surface": q.is_surface(),
                "components": q.component_stats(),
                "complex": q,
            });
            if let Some(out) = out {
                v["dot"] = write_dot(&out, &q.to_dot())?;
            }
            v
        }
        Command::Verify(cmd) => {
            let outcomes = match cmd {
                VerifyCmd::All { seed } => verify::run_all(seed),
                VerifyCmd::One { id, seed } => {
                    if verify::name(id).is_none() {
                        return Err(Failure(format!("no check {id}; ids run from 1 to {}", verify::COUNT)));
                    }
                    vec![verify::run(id, seed)]
                }
            };
            for o in &outcomes {
                s.passed &= o.passed;
                if let Some(d) = o.max_deviation {
                    s.deviations.insert(format!("check_{}", o.id), d);
                }
            }
            json!({ "checks": outcomes })
        }
    })
}

fn run_coset(cmd: CosetCmd, s: &mut Session) -> Result<Value, Failure> {
    Ok(match cmd {
        CosetCmd::Canon(input) => {
            let a: CosetBoard = s.read(&input.input)?;
            let words = a.canonical_form().words();
            json!({
                "canonical_form": words,
                "digest": format!("{:x}", Sha256::digest(a.canonical_form().to_bytes())),
                "closed": a.is_closed(),
                "central": a.is_central(),
            })
        }
        CosetCmd::Mul { a, b } => {
            let a: CosetBoard = s.read(&a)?;
            let b: CosetBoard = s.read(&b)?;
            json!({ "product": a.mul(&b)? })
        }
        CosetCmd::Involute(input) => {
            let a: CosetBoard = s.read(&input.input)?;
            json!({ "involution": a.involution() })
        }
        CosetCmd::Theta { n, alpha, beta } => json!({ "theta": CosetBoard::theta(n, alpha, beta)? }),
        CosetCmd::FromElement { input, alpha, beta } => {
            let g = read_element(s, &input.input)?;
            json!({ "coset": CosetBoard::from_element(&g, alpha, beta) })
        }
    })
}

fn run_tft(cmd: TftCmd, s: &mut Session) -> Result<Value, Failure> {
    Ok(match cmd {
        TftCmd::Phi { args, plain } => {
            let a: CosetBoard = s.read(&args.board)?;
            let h: SymbolTensor = s.read(&args.tensor)?;
            let graded = h.is_graded() && !plain;
            let z = if graded { tft::phi_super(&a, &h)? } else { tft::phi(&a, &h)? };
            json!({ "re": z.re, "im": z.im, "graded": graded })
        }
        TftCmd::Op { args } => {
            let a: CosetBoard = s.read(&args.board)?;
            let h: SymbolTensor = s.read(&args.tensor)?;
            json!({ "operator": matrix_json(&tft::operator_with(&a, &h, EvalOptions::default())?) })
        }
        TftCmd::Check { dims, pairs, seed } => {
            let dev = verify::homomorphism_sweep(&dims, pairs, seed)?;
            s.deviation("homomorphism", dev);
            json!({ "dims": dims, "pairs": pairs, "seed": seed, "max_deviation": dev })
        }
        TftCmd::Oracle {
            input,
            tensor,
            alpha,
            beta,
            bound,
        } => {
            let g = read_element(s, &input.input)?;
            let h: SymbolTensor = s.read(&tensor)?;
            let bound = bound.unwrap_or(g.degree());
            let oracle = oracle_operator(&g, &h, alpha, beta, bound)?;
            let engine = tft::operator(&CosetBoard::from_element(&g, alpha, beta), &h)?;
            s.deviation("state_sum", engine.max_abs_diff(&oracle));
            json!({ "bound": bound, "operator": matrix_json(&oracle) })
        }
    })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|e| Failure(format!("{THREADS_VAR}={raw:?}: {e}")))?;
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(Failure(msg)) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    let start = Instant::now();
    let mut session = Session {
        passed: true,
        ..Session::default()
    };
    let outputs = match run(cli.command, &mut session) {
        Ok(v) => v,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let report = RunReport {
        command: std::env::args().skip(1).collect(),
        inputs: session.inputs,
        outputs,
        deviations: session.deviations,
        passed: session.passed,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
