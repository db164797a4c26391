//! The `qperm` command line.
//!
//! [`run`] parses arguments and returns captured output plus an exit code, so
//! the binary is a thin shell around it and tests can drive it in-process.
//! Exit codes: 0 on success, 2 on invalid arguments, 3 on domain errors and
//! failed checks. Exact values are printed as `p/q` in every format.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::classical;
use crate::error::{Error, Result};
use crate::exactla::{format_rational, parse_rational, BigRational, RationalMatrix};
use crate::laws::{self, LawParameter, Side};
use crate::partitions::{enumerate, PartitionKind};
use crate::weingarten::{self, reference, GramStructure, MomentQuery, MonomialSpec};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "qperm", version, about = "Exact Haar integrals and moments on quantum permutation groups")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Pretty, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Non-crossing partitions.
    Nc {
        #[command(subcommand)]
        action: NcAction,
    },
    /// Gram matrix G_kn indexed by NC(k).
    Gram {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
    },
    /// Weingarten matrix W_kn = G_kn^-1.
    Weingarten {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
    },
    /// Integral of u_{i1 j1} ... u_{ik jk} (1-based indices).
    Integrate {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        cols: Vec<usize>,
    },
    /// k-th moment of u_11 + ... + u_ss.
    Moment {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        k: usize,
        /// Evaluate the closed form (k <= 4) instead of the trace formula.
        #[arg(long)]
        closed_form: bool,
    },
    /// Law of u_11 + ... + u_ss on the symmetric group S_n.
    SnLaw {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        /// Enumerate all n! permutations instead of using the formula.
        #[arg(long)]
        oracle: bool,
    },
    /// Exact moments at finite n against the limit law.
    Limits {
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        t: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        n: Vec<u64>,
    },
    /// Recompute the published matrices, closed forms and spot values.
    PaperTables,
}

#[derive(Debug, Subcommand)]
pub enum NcAction {
    Enumerate {
        #[arg(long)]
        k: usize,
        /// All set partitions instead of the non-crossing ones.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Free,
    Classical,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Free => Side::Free,
            SideArg::Classical => Side::Classical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome { stdout, stderr: String::new(), code: 0 },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("{}: {e}\n", e.name()),
            code: if e.is_argument_error() { 2 } else { 3 },
        },
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let fmt = cli.format;
    match &cli.command {
        Command::Nc { action: NcAction::Enumerate { k, all } } => {
            let kind = if *all { PartitionKind::All } else { PartitionKind::NonCrossing };
            let family = enumerate(*k, kind)?;
            Ok(match fmt {
                OutputFormat::Pretty => family.iter().map(|p| format!("{p}\n")).collect(),
                OutputFormat::Json => line(json!({
                    "k": k,
                    "kind": kind,
                    "count": family.len(),
                    "partitions": family.members(),
                })),
                OutputFormat::Csv => {
                    let mut out = String::from("index,blocks,block_count\n");
                    for (i, p) in family.iter().enumerate() {
                        let _ = writeln!(out, "{},{},{}", i, csv_cell(&p.to_string()), p.block_count());
                    }
                    out
                }
            })
        }
        Command::Gram { k, n } => matrix_output(&weingarten::gram_matrix(*k, *n)?, fmt),
        Command::Weingarten { k, n } => {
            matrix_output(&weingarten::weingarten_matrix(*k, *n)?, fmt)
        }
        Command::Integrate { n, rows, cols } => {
            let spec = MonomialSpec::new(*n, rows.clone(), cols.clone())?;
            scalar_output(&weingarten::monomial_integral(&spec)?, fmt)
        }
        Command::Moment { n, s, k, closed_form } => {
            let q = MomentQuery::new(*n, *s, *k)?;
            let v = if *closed_form {
                weingarten::closed_form_moment(&q)?
            } else {
                weingarten::truncated_moment(&q)?
            };
            scalar_output(&v, fmt)
        }
        Command::SnLaw { n, s, oracle } => {
            let law = if *oracle {
                let brute = classical::brute_force_law(*n, *s)?;
                if brute != classical::sn_law(*n, *s)? {
                    return Err(Error::Inconsistent(format!(
                        "enumeration and formula disagree at n = {n}, s = {s}"
                    )));
                }
                brute
            } else {
                classical::sn_law(*n, *s)?
            };
            Ok(match fmt {
                OutputFormat::Json => line(serde_json::to_value(&law).map_err(json_err)?),
                OutputFormat::Csv => {
                    let mut out = String::from("point,weight\n");
                    for (x, w) in law.atoms() {
                        let _ = writeln!(out, "{x},{}", format_rational(w));
                    }
                    out
                }
                OutputFormat::Pretty => law
                    .atoms()
                    .iter()
                    .map(|(x, w)| format!("{x}\t{}\n", format_rational(w)))
                    .collect(),
            })
        }
        Command::Limits { side, t, kmax, n } => {
            let t = LawParameter::new(parse_rational(t)?)?;
            let report = laws::convergence_report(*kmax, &t, n, (*side).into())?;
            Ok(match fmt {
                OutputFormat::Json => line(report.to_json()),
                OutputFormat::Csv => report.to_csv()?,
                OutputFormat::Pretty => {
                    let mut out = format!("{:>5} {:>5} {:>3}  {:>24} {:>24}\n", "n", "s", "k", "error", "error*n");
                    for r in &report.rows {
                        let _ = writeln!(
                            out,
                            "{:>5} {:>5} {:>3}  {:>24} {:>24}",
                            r.n,
                            r.s,
                            r.k,
                            format_rational(&r.error),
                            format_rational(&r.error_times_n)
                        );
                    }
                    out
                }
            })
        }
        Command::PaperTables => {
            let items = paper_tables();
            let failed = items.iter().filter(|i| !i.passed).count();
            let out = match fmt {
                OutputFormat::Json => line(json!(items
                    .iter()
                    .map(|i| json!({"item": i.name, "passed": i.passed, "detail": i.detail}))
                    .collect::<Vec<_>>())),
                OutputFormat::Csv => {
                    let mut out = String::from("item,passed,detail\n");
                    for i in &items {
                        let _ = writeln!(out, "{},{},{}", csv_cell(&i.name), i.passed, csv_cell(&i.detail));
                    }
                    out
                }
                OutputFormat::Pretty => items
                    .iter()
                    .map(|i| {
                        format!("{} {}: {}\n", if i.passed { "PASS" } else { "FAIL" }, i.name, i.detail)
                    })
                    .collect(),
            };
            if failed > 0 {
                // Print the table, then fail.
                print!("{out}");
                return Err(Error::Mismatch(format!("{failed} of {} items failed", items.len())));
            }
            Ok(out)
        }
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn line(v: serde_json::Value) -> String {
    format!("{v}\n")
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar_output(v: &BigRational, fmt: OutputFormat) -> Result<String> {
    let s = format_rational(v);
    Ok(match fmt {
        OutputFormat::Pretty => format!("{s}\n"),
        OutputFormat::Json => line(json!({ "value": s })),
        OutputFormat::Csv => format!("value\n{s}\n"),
    })
}

fn matrix_output(m: &RationalMatrix, fmt: OutputFormat) -> Result<String> {
    match fmt {
        OutputFormat::Pretty => Ok(m.to_string()),
        OutputFormat::Json => Ok(line(serde_json::to_value(m).map_err(json_err)?)),
        OutputFormat::Csv => m.to_csv(),
    }
}

/// One line of the `paper-tables` report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn item(name: impl Into<String>, outcome: Result<String>) -> TableItem {
    match outcome {
        Ok(detail) => TableItem { name: name.into(), passed: true, detail },
        Err(e) => TableItem { name: name.into(), passed: false, detail: e.to_string() },
    }
}

fn expect_eq(got: &BigRational, want: &BigRational, what: &str) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::Mismatch(format!(
            "{what}: got {}, expected {}",
            format_rational(got),
            format_rational(want)
        )))
    }
}

/// Recomputes the published Gram/Weingarten matrices for `k ≤ 4`, the closed
/// moment formulas, the two-projection values and the Catalan moments.
pub fn paper_tables() -> Vec<TableItem> {
    let mut items = Vec::new();

    items.push(item("catalan sizes k=1..7", (|| {
        let sizes = (1..=7)
            .map(|k| enumerate(k, PartitionKind::NonCrossing).map(|f| f.len()))
            .collect::<Result<Vec<_>>>()?;
        if sizes != [1, 2, 5, 14, 42, 132, 429] {
            return Err(Error::Mismatch(format!("sizes {sizes:?}")));
        }
        Ok(format!("{sizes:?}"))
    })()));

    for n in [4u64, 5, 7] {
        for k in 2..=4usize {
            let name = format!("gram and weingarten k={k} n={n}");
            items.push(item(name, match_published(k, n)));
        }
    }

    items.push(item("closed forms k<=4, 4<=n<=12, 1<=s<=n", (|| {
        let mut checked = 0;
        for k in 1..=4 {
            let st = GramStructure::new(k)?;
            for n in 4..=12u64 {
                for s in 1..=n {
                    let q = MomentQuery::new(n, s, k)?;
                    let trace = weingarten::truncated_moment_with(&st, &q)?;
                    let closed = weingarten::closed_form_moment(&q)?;
                    expect_eq(&trace, &closed, &format!("k={k} n={n} s={s}"))?;
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} exact agreements"))
    })()));

    items.push(item("two projections, 4<=n<=12, k<=4", (|| {
        let mut values = Vec::new();
        for k in 1..=4 {
            let st = GramStructure::new(k)?;
            for n in 4..=12u64 {
                let v = weingarten::truncated_moment_with(&st, &MomentQuery::new(n, 2, k)?)?;
                expect_eq(&v, &reference::two_projection_moment(n, k)?, &format!("k={k} n={n}"))?;
                if n == 4 {
                    values.push(format_rational(&v));
                }
            }
        }
        Ok(format!("n=4: {}", values.join(", ")))
    })()));

    items.push(item("u_11 has trace 1/n, 4<=n<=12", (|| {
        for n in 4..=12u64 {
            let spec = MonomialSpec::new(n, vec![1], vec![1])?;
            let v = weingarten::monomial_integral(&spec)?;
            expect_eq(&v, &BigRational::new(1.into(), n.into()), &format!("n={n}"))?;
        }
        Ok("1/n".into())
    })()));

    items.push(item("full character moments are Catalan, k<=6, 4<=n<=8", (|| {
        let catalan = [1, 2, 5, 14, 42, 132];
        for k in 1..=6 {
            let st = GramStructure::new(k)?;
            for n in 4..=8u64 {
                let v = weingarten::truncated_moment_with(&st, &MomentQuery::new(n, n, k)?)?;
                expect_eq(&v, &BigRational::from_integer(catalan[k - 1].into()), &format!("k={k} n={n}"))?;
            }
        }
        Ok(format!("{catalan:?}"))
    })()));

    items
}

/// Matches the computed Gram matrix to the published one, then checks the
/// Weingarten matrix under the same permutation where one is published.
fn match_published(k: usize, n: u64) -> Result<String> {
    let gram = weingarten::gram_matrix(k, n)?;
    let perm = weingarten::match_paper_matrix(&gram, &reference::gram(k, n)?)?;
    if k <= 3 {
        let w = crate::exactla::inverse(&gram)?;
        if w.permute_symmetric(&perm) != reference::weingarten(k, n)? {
            return Err(Error::Mismatch(format!(
                "inverse differs from the published one under permutation {perm:?}"
            )));
        }
    }
    Ok(format!("permutation {perm:?}"))
}
