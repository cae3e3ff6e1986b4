use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use gruss_core::dilation::{russo_dye_decompose, stinespring};
use gruss_core::example::{transpose_example, ExampleReport};
use gruss_core::gruss::{chebyshev_radius, gruss_check_with, Disk, GrussReport, SuiteReport};
use gruss_core::io::{read_map, read_matrix, to_document, MatrixDoc};
use gruss_core::posmaps::{k_positivity_falsify, SchmidtWitness, DEFAULT_ITERS, DEFAULT_RESTARTS};
use gruss_core::suites::run_all;
use gruss_core::{Error, Tolerance};

/// Grüss-type inequalities for positive maps on matrix algebras.
#[derive(Parser)]
#[command(name = "gruss", version)]
struct Cli {
    /// Base seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Trials per suite (suite only).
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// PSD tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON documents instead of text.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transpose-map counterexample with hard-coded inputs.
    PaperExample,
    /// Run every randomized verification suite.
    Suite,
    /// Defect, both Chebyshev radii and the bound for a map and two matrices.
    Defect { map: PathBuf, a: PathBuf, b: PathBuf },
    /// Distance from a matrix to the scalars.
    Radius { a: PathBuf },
    /// Two-unitary decomposition of a matrix.
    Decompose { a: PathBuf },
    /// Stinespring isometry of a unital CP map.
    Dilate { map: PathBuf },
    /// Search for a Schmidt-rank-k vector with negative Choi expectation.
    Falsify {
        map: PathBuf,
        /// Schmidt rank of the search vectors.
        k: usize,
        /// Random starting points.
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Local-search iterations per start.
        #[arg(long, default_value_t = DEFAULT_ITERS)]
        iters: usize,
    },
}

/// Rendered output plus whether the command found a mathematical failure.
struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, failed: false }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Contract(_) => 1,
        Error::Dimension(_) | Error::Domain(_) | Error::Precondition(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match cli.tol {
        None => Tolerance::default(),
        Some(x) => match Tolerance::new(Tolerance::default().hermitian_tol, x, Tolerance::default().solve_tol) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: --tol: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let outcome = match run(&cli, &tol) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut text = outcome.text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.failed as u8)
}

fn run(cli: &Cli, tol: &Tolerance) -> Result<Outcome, Error> {
    let machine = cli.machine;
    match &cli.command {
        Command::PaperExample => {
            let report = transpose_example()?;
            let text = if machine { to_document(&report) } else { render_example(&report) };
            Ok(Outcome {
                text,
                failed: !report.matches,
            })
        }
        Command::Suite => {
            let reports = run_all(cli.trials as usize, cli.seed, tol)?;
            let text = if machine { to_document(&reports) } else { render_suites(&reports) };
            Ok(Outcome {
                text,
                failed: reports.iter().any(|r| !r.ok()),
            })
        }
        Command::Defect { map, a, b } => {
            let phi = read_map(map)?;
            let (a, b) = (read_matrix(a)?, read_matrix(b)?);
            let report = gruss_check_with(&phi, &a, &b, tol)?;
            Ok(Outcome::ok(if machine { to_document(&report) } else { render_gruss(&report) }))
        }
        Command::Radius { a } => {
            let disk = chebyshev_radius(&read_matrix(a)?, tol)?;
            Ok(Outcome::ok(if machine { to_document(&disk) } else { render_disk(&disk) }))
        }
        Command::Decompose { a } => {
            let a = read_matrix(a)?;
            let dec = russo_dye_decompose(&a)?;
            let doc = DecompositionDoc {
                scale: dec.scale,
                weights: dec.weights.clone(),
                unitaries: dec.unitaries.iter().map(MatrixDoc::from).collect(),
            };
            Ok(Outcome::ok(if machine {
                to_document(&doc)
            } else {
                let mut s = format!("scale {:.12}\n", dec.scale);
                for (w, u) in dec.weights.iter().zip(&dec.unitaries) {
                    let _ = writeln!(s, "weight {w:.12}\n{}", render_matrix(u));
                }
                s
            }))
        }
        Command::Dilate { map } => {
            let d = stinespring(&read_map(map)?)?;
            let doc = DilationDoc {
                env_dim: d.env_dim,
                isometry_defect: d.isometry_defect()?,
                v: MatrixDoc::from(&d.v),
            };
            Ok(Outcome::ok(if machine {
                to_document(&doc)
            } else {
                format!(
                    "env_dim {}\nisometry defect {:.3e}\nv =\n{}",
                    doc.env_dim,
                    doc.isometry_defect,
                    render_matrix(&d.v)
                )
            }))
        }
        Command::Falsify { map, k, restarts, iters } => {
            let phi = read_map(map)?;
            let witness = k_positivity_falsify(&phi, *k, *restarts, *iters, cli.seed, tol)?;
            let doc = FalsifyDoc {
                k: *k,
                found: witness.is_some(),
                witness,
            };
            Ok(Outcome::ok(if machine {
                to_document(&doc)
            } else {
                match &doc.witness {
                    Some(w) => format!("witness found: Schmidt rank ≤ {}, value {:.9}", w.k, w.value),
                    None => format!("no witness found at k = {k} (not a proof of {k}-positivity)"),
                }
            }))
        }
    }
}

#[derive(Serialize)]
struct DecompositionDoc {
    scale: f64,
    weights: Vec<f64>,
    unitaries: Vec<MatrixDoc>,
}

#[derive(Serialize)]
struct DilationDoc {
    env_dim: usize,
    isometry_defect: f64,
    v: MatrixDoc,
}

#[derive(Serialize)]
struct FalsifyDoc {
    k: usize,
    found: bool,
    witness: Option<SchmidtWitness>,
}

fn render_complex(z: gruss_core::C64) -> String {
    format!("{:.9}{:+.9}i", z.re, z.im)
}

fn render_disk(d: &Disk) -> String {
    format!("center {}, radius {:.11}", render_complex(d.center), d.radius)
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "HOLDS"
    } else {
        "VIOLATED"
    }
}

fn render_gruss(r: &GrussReport) -> String {
    format!(
        "defect {:.9}\nradius a: {}\nradius b: {}\nbound {:.9}\nmargin {:.9}\nverdict {}\n",
        r.defect,
        render_disk(&r.radius_a),
        render_disk(&r.radius_b),
        r.bound,
        r.margin,
        verdict(r.holds)
    )
}

fn render_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.9}")).collect::<Vec<_>>().join(", ")
}

fn render_example(rep: &ExampleReport) -> String {
    let mut s = String::new();
    for case in &rep.cases {
        let r = &case.report;
        let _ = writeln!(s, "{}, inputs {}×{}", case.name, case.dim, case.dim);
        let _ = writeln!(s, "  eigenvalues of a: {}", render_list(&case.spectrum_a));
        let _ = writeln!(s, "  eigenvalues of b: {}", render_list(&case.spectrum_b));
        let _ = writeln!(s, "  radius a {:.9}  radius b {:.9}", r.radius_a.radius, r.radius_b.radius);
        let _ = writeln!(s, "  defect {:.9}, bound {:.9}, verdict {}", r.defect, r.bound, verdict(r.holds));
        if !case.matches {
            let checks = [
                ("defect", r.defect, case.expected_defect),
                ("radius a", r.radius_a.radius, case.expected_radius_a),
                ("radius b", r.radius_b.radius, case.expected_radius_b),
            ];
            for (name, got, want) in checks {
                if (got - want).abs() > gruss_core::example::EXAMPLE_TOL {
                    let _ = writeln!(s, "  MISMATCH {name}: expected {want:.12}, got {got:.12}");
                }
            }
            if r.holds {
                let _ = writeln!(s, "  MISMATCH verdict: expected VIOLATED");
            }
        }
    }
    let _ = write!(s, "{}", if rep.matches { "all values match" } else { "MISMATCH" });
    s
}

fn render_suites(reports: &[SuiteReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let tag = match (r.contractual, r.all_passed()) {
            (true, true) => "PASS",
            (true, false) => "FAIL",
            (false, _) => "INFO",
        };
        let _ = writeln!(
            s,
            "{tag}  {:<52} {:>5}/{:<5} worst margin {:.3e}",
            r.name, r.passed, r.trials, r.worst_margin
        );
    }
    s
}

fn render_matrix(a: &gruss_core::Matrix) -> String {
    let mut s = String::new();
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| render_complex(a[(i, j)])).collect();
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    s
}
