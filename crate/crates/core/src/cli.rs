//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch or violated verdict,
//! 2 invalid input, 3 refusal because a work cap would be exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::arith::{prime_powers_up_to, rho, PrimePower};
use crate::binomials::{
    count_bruteforce, count_by_criterion, count_formula, criterion_witness, DegreeData,
};
use crate::census::{
    in_pool, run_report, sum_over_t, thm1_bound, thm2_floor, thm4_main, Census, ReportGrid,
    RowParams, TheoremId,
};
use crate::error::Error;
use crate::ffield::{make_field, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "irrbin",
    version,
    about = "Count irreducible binomials X^t - a over finite fields"
)]
pub struct RunConfig {
    /// Worker threads for parallel sweeps (never affects results)
    #[arg(long, global = true, default_value_t = 1, value_parser = parse_positive_usize)]
    pub workers: usize,

    /// Ceiling on q*t brute-force work
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64, value_parser = parse_positive)]
    pub cap: u64,

    /// Write CSV to this path instead of printing a table
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N_t(q) from the closed form
    Count {
        #[arg(long, value_parser = parse_positive)]
        t: u64,
        #[arg(long, value_parser = parse_count)]
        q: u64,
    },
    /// Check formula, criterion and brute-force oracle against each other
    Verify {
        #[arg(long = "max-q", value_parser = parse_count)]
        max_q: u64,
        #[arg(long = "max-t", value_parser = parse_positive)]
        max_t: u64,
    },
    /// Exact aggregate sums as CSV rows
    #[command(subcommand)]
    Census(CensusCommand),
    /// Tabulate a theorem's sums against its main term with verdicts
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum CensusCommand {
    /// sum over q <= Q of N_t(q), on a grid of Q
    #[command(name = "q-sum")]
    QSum {
        #[arg(long, value_parser = parse_positive)]
        t: u64,
        #[arg(long = "max-Q", value_parser = parse_count)]
        max_q: u64,
        #[arg(long, default_value_t = 10, value_parser = parse_positive)]
        steps: u64,
    },
    /// sum over t <= T of N_t(q), on a grid of T
    #[command(name = "t-sum")]
    TSum {
        #[arg(long, value_parser = parse_count)]
        q: u64,
        #[arg(long = "max-T", value_parser = parse_positive)]
        max_t: u64,
        /// Number of grid points; one row per T when omitted
        #[arg(long, value_parser = parse_positive)]
        steps: Option<u64>,
    },
    /// Double sum over squarefree t and q <= Q
    Double {
        #[arg(long = "Q", value_parser = parse_count)]
        q_bound: u64,
        #[arg(long = "T", value_parser = parse_positive)]
        t_bound: u64,
        /// Sum over T <= t <= 2T instead of t <= T
        #[arg(long)]
        dyadic: bool,
    },
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// T1 .. T5
    #[arg(value_parser = parse_theorem)]
    pub theorem: TheoremId,
    #[arg(long, value_delimiter = ',', value_parser = parse_positive)]
    pub t: Vec<u64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    pub q: Vec<u64>,
    #[arg(long = "Q", value_delimiter = ',', value_parser = parse_count)]
    pub q_bound: Vec<u64>,
    #[arg(long = "T", value_delimiter = ',', value_parser = parse_positive)]
    pub t_bound: Vec<u64>,
}

/// Parses `1000000`, `1_000_000`, `10^6` or `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    let bad = || format!("{s:?} is not a nonnegative integer");
    let pow = |base: &str, exp: &str| -> Result<u64, String> {
        let b: u64 = base.parse().map_err(|_| bad())?;
        let e: u32 = exp.parse().map_err(|_| bad())?;
        b.checked_pow(e)
            .ok_or_else(|| format!("{s} overflows 64 bits"))
    };
    if let Some((base, exp)) = s.split_once('^') {
        return pow(base, exp);
    }
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let m: u64 = mant.parse().map_err(|_| bad())?;
        return m
            .checked_mul(pow("10", exp)?)
            .ok_or_else(|| format!("{s} overflows 64 bits"));
    }
    s.parse().map_err(|_| bad())
}

fn parse_positive(s: &str) -> Result<u64, String> {
    match parse_count(s)? {
        0 => Err("must be positive".into()),
        n => Ok(n),
    }
}

fn parse_positive_usize(s: &str) -> Result<usize, String> {
    parse_positive(s).map(|n| n as usize)
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A header plus rows of already formatted fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(self.header.clone());
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }
}

/// Shortest round-trip decimal; empty for undefined values.
fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    run(&config, out, err)
}

pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &config.command {
        Command::Count { t, q } => cmd_count(*t, *q, out),
        Command::Verify { max_q, max_t } => cmd_verify(config, *max_q, *max_t, out),
        Command::Census(sub) => cmd_census(config, sub).and_then(|t| emit(config, &t, out)),
        Command::Report(args) => cmd_report(config, args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(config: &RunConfig, table: &Table, out: &mut dyn Write) -> Result<i32, Failure> {
    match &config.csv {
        Some(path) => fs::write(path, table.to_csv())
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?,
        None => out
            .write_all(table.to_text().as_bytes())
            .map_err(|e| invalid(e.to_string()))?,
    }
    Ok(EXIT_OK)
}

fn cmd_count(t: u64, q: u64, out: &mut dyn Write) -> Result<i32, Failure> {
    let pp = PrimePower::from_q(q)?;
    let data = DegreeData::new(t)?;
    let n = count_formula(t, pp)?;
    let branch = if data.admits(q) {
        "divides"
    } else {
        "does not divide"
    };
    writeln!(
        out,
        "t = {t}, q = {q}: N_t(q) = {n} (rad4(t) = {} {branch} q - 1 = {})",
        data.radical4,
        q - 1
    )
    .map_err(|e| invalid(e.to_string()))?;
    Ok(EXIT_OK)
}

struct Mismatch {
    t: u64,
    q: u64,
    formula: u64,
    criterion: Option<u64>,
    oracle: u64,
    witness: Option<Vec<u64>>,
}

fn cmd_verify(
    config: &RunConfig,
    max_q: u64,
    max_t: u64,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if max_q < 2 {
        return Err(invalid("--max-q must be at least 2"));
    }
    let cap = config.cap as u128;
    let work = max_q as u128 * max_t as u128;
    if work > cap {
        return Err(Failure {
            code: EXIT_CAP,
            message: format!(
                "grid needs q*t up to {work}, above the cap {cap}; lower --max-q/--max-t or raise --cap"
            ),
        });
    }
    let fields = prime_powers_up_to(max_q);
    let check_field = |pp: &PrimePower| -> Result<Option<Mismatch>, Error> {
        let field = make_field(pp.p(), pp.r())?;
        for t in 1..=max_t {
            let formula = count_formula(t, *pp)?;
            let oracle = count_bruteforce(t, &field, cap)?;
            let criterion = if t >= 2 {
                Some(count_by_criterion(t, &field, cap)?)
            } else {
                None
            };
            if formula != oracle || criterion.is_some_and(|c| c != oracle) {
                let witness = if criterion.is_some_and(|c| c != oracle) {
                    criterion_witness(t, &field, cap)?.map(|a| a.coeffs().to_vec())
                } else {
                    None
                };
                return Ok(Some(Mismatch {
                    t,
                    q: pp.q(),
                    formula,
                    criterion,
                    oracle,
                    witness,
                }));
            }
        }
        Ok(None)
    };
    let results = in_pool(config.workers, || {
        fields
            .par_iter()
            .map(check_field)
            .collect::<Result<Vec<_>, Error>>()
    })??;

    let io = |e: std::io::Error| invalid(e.to_string());
    if let Some(m) = results.into_iter().flatten().next() {
        let criterion = m.criterion.map_or("n/a".to_string(), |c| c.to_string());
        write!(
            out,
            "MISMATCH at t = {}, q = {}: formula {}, criterion {criterion}, oracle {}",
            m.t, m.q, m.formula, m.oracle
        )
        .map_err(io)?;
        if let Some(w) = m.witness {
            write!(out, ", witness a = {w:?}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
        return Ok(EXIT_MISMATCH);
    }
    writeln!(
        out,
        "verified {} prime powers q <= {max_q} and 1 <= t <= {max_t}: formula = criterion = oracle",
        fields.len()
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn linear_grid(max: u64, steps: u64, min: u64) -> Result<Vec<u64>, Failure> {
    let grid: Vec<u64> = (1..=steps)
        .map(|i| (max as u128 * i as u128 / steps as u128) as u64)
        .collect();
    if grid[0] < min {
        return Err(invalid(format!(
            "grid point {} is below {min}; use fewer steps or a larger maximum",
            grid[0]
        )));
    }
    let mut dedup = grid;
    dedup.dedup();
    Ok(dedup)
}

fn cmd_census(config: &RunConfig, sub: &CensusCommand) -> Result<Table, Failure> {
    match *sub {
        CensusCommand::QSum { t, max_q, steps } => {
            let grid = linear_grid(max_q, steps, 2)?;
            let census = Census::new(max_q)?.with_workers(config.workers);
            let rows = in_pool(config.workers, || {
                grid.par_iter()
                    .map(|&bound| -> Result<Vec<String>, Error> {
                        let exact = census.sum_over_q(t, bound)?;
                        let b1 = match thm1_bound(t, bound as f64) {
                            Err(Error::OutOfRegime(_)) => f64::NAN,
                            other => other?,
                        };
                        let b2 = thm2_floor(t, bound as f64)?;
                        Ok(vec![
                            t.to_string(),
                            bound.to_string(),
                            exact.to_string(),
                            real(b1),
                            real(b2),
                            real(exact as f64 / b1),
                            real(exact as f64 / b2),
                        ])
                    })
                    .collect::<Result<Vec<_>, Error>>()
            })??;
            Ok(Table {
                header: vec![
                    "t",
                    "Q",
                    "exact_sum",
                    "thm1_bound",
                    "thm2_floor",
                    "ratio1",
                    "ratio2",
                ],
                rows,
            })
        }
        CensusCommand::TSum { q, max_t, steps } => {
            let pp = PrimePower::from_q(q)?;
            let grid = match steps {
                Some(s) => linear_grid(max_t, s, 1)?,
                None => (1..=max_t).collect(),
            };
            let rows = grid
                .iter()
                .map(|&t_bound| -> Result<Vec<String>, Error> {
                    let exact = sum_over_t(pp, t_bound)?;
                    let r = rho(t_bound, q - 1)?;
                    let upper = (q - 1) as u128 * r as u128;
                    Ok(vec![
                        q.to_string(),
                        t_bound.to_string(),
                        exact.to_string(),
                        r.to_string(),
                        upper.to_string(),
                    ])
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(Table {
                header: vec!["q", "T", "exact_sum", "rho", "upper"],
                rows,
            })
        }
        CensusCommand::Double {
            q_bound,
            t_bound,
            dyadic,
        } => {
            if t_bound > q_bound {
                return Err(invalid(format!("T = {t_bound} exceeds Q = {q_bound}")));
            }
            let census = Census::new(q_bound)?.with_workers(config.workers);
            let exact = census.double_sum_squarefree(q_bound, t_bound, dyadic)?;
            let main = match thm4_main(q_bound as f64, t_bound as f64) {
                Err(Error::OutOfRegime(_)) => f64::NAN,
                other => other?,
            };
            Ok(Table {
                header: vec!["Q", "T", "dyadic", "exact_sum", "thm4_main", "ratio"],
                rows: vec![vec![
                    q_bound.to_string(),
                    t_bound.to_string(),
                    dyadic.to_string(),
                    exact.to_string(),
                    real(main),
                    real(exact as f64 / main),
                ]],
            })
        }
    }
}

fn cmd_report(config: &RunConfig, args: &ReportArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let require = |v: &Vec<u64>, flag: &str| -> Result<Vec<u64>, Failure> {
        if v.is_empty() {
            Err(invalid(format!("{} needs --{flag}", args.theorem)))
        } else {
            Ok(v.clone())
        }
    };
    let grid = match args.theorem {
        TheoremId::T1 | TheoremId::T2 => ReportGrid::Degrees {
            t: require(&args.t, "t")?,
            q_bounds: require(&args.q_bound, "Q")?,
        },
        TheoremId::T3 => ReportGrid::Fields {
            q: require(&args.q, "q")?,
            t_bounds: require(&args.t_bound, "T")?,
        },
        TheoremId::T4 | TheoremId::T5 => ReportGrid::Double {
            q_bounds: require(&args.q_bound, "Q")?,
            t_bounds: require(&args.t_bound, "T")?,
        },
    };
    let report = run_report(args.theorem, &grid, config.workers)?;
    let rows = report
        .rows
        .iter()
        .map(|row| {
            let (t, q, qb, tb, dy) = match row.params {
                RowParams::OverQ { t, q_bound } => (
                    t.to_string(),
                    String::new(),
                    q_bound.to_string(),
                    String::new(),
                    String::new(),
                ),
                RowParams::OverT { q, t_bound } => (
                    String::new(),
                    q.to_string(),
                    String::new(),
                    t_bound.to_string(),
                    String::new(),
                ),
                RowParams::Double {
                    q_bound,
                    t_bound,
                    dyadic,
                } => (
                    String::new(),
                    String::new(),
                    q_bound.to_string(),
                    t_bound.to_string(),
                    dyadic.to_string(),
                ),
            };
            vec![
                report.theorem.to_string(),
                t,
                q,
                qb,
                tb,
                dy,
                row.exact_sum.to_string(),
                real(row.main_term),
                real(row.ratio),
                row.verdict.to_string(),
            ]
        })
        .collect();
    let table = Table {
        header: vec![
            "theorem",
            "t",
            "q",
            "Q",
            "T",
            "dyadic",
            "exact_sum",
            "main_term",
            "ratio",
            "verdict",
        ],
        rows,
    };
    emit(config, &table, out)?;
    Ok(if report.violations().next().is_some() {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_from(
            std::iter::once("irrbin").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn number_syntax() {
        assert_eq!(parse_count("1000000"), Ok(1_000_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert_eq!(parse_count("10^9"), Ok(1_000_000_000));
        assert_eq!(parse_count("2e5"), Ok(200_000));
        assert!(parse_count("ten").is_err());
        assert!(parse_count("10^30").is_err());
        assert!(parse_positive("0").is_err());
    }

    #[test]
    fn count_command() {
        let (code, out, _) = run_args(&["count", "--t", "2", "--q", "7"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("N_t(q) = 3"), "{out}");
        assert!(out.contains("divides"));

        let (code, out, _) = run_args(&["count", "--t", "6", "--q", "8"]);
        assert_eq!(code, EXIT_OK);
        assert!(
            out.contains("N_t(q) = 0") && out.contains("does not divide"),
            "{out}"
        );

        let (code, _, err) = run_args(&["count", "--t", "2", "--q", "6"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("6 is not a prime power"), "{err}");
    }

    #[test]
    fn verify_small_grid() {
        let (code, out, _) = run_args(&["verify", "--max-q", "4", "--max-t", "2"]);
        assert_eq!(code, EXIT_OK, "{out}");
        let (code, _, err) = run_args(&["verify", "--max-q", "10^9", "--max-t", "30"]);
        assert_eq!(code, EXIT_CAP);
        assert!(err.contains("cap"));
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(run_args(&["count", "--t", "0", "--q", "7"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_INVALID);
        assert_eq!(
            run_args(&["--workers", "0", "count", "--t", "2", "--q", "7"]).0,
            EXIT_INVALID
        );
        assert_eq!(
            run_args(&["census", "q-sum", "--t", "2", "--max-Q", "10", "--steps", "10"]).0,
            EXIT_INVALID
        );
        assert_eq!(
            run_args(&["census", "double", "--Q", "10", "--T", "20"]).0,
            EXIT_INVALID
        );
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn census_tables() {
        let (code, out, _) = run_args(&["census", "t-sum", "--q", "5", "--max-T", "4"]);
        assert_eq!(code, EXIT_OK);
        let last = out.lines().last().unwrap();
        let fields: Vec<&str> = last.split_whitespace().collect();
        // sum_{t <= 4} N_t(5) = 8, rho_4(4) = 3
        assert_eq!(fields, vec!["5", "4", "8", "3", "12"]);
    }

    #[test]
    fn table_formats() {
        let t = Table {
            header: vec!["a", "bb"],
            rows: vec![vec!["1".into(), "22".into()], vec!["333".into(), "".into()]],
        };
        assert_eq!(t.to_csv(), "a,bb\n1,22\n333,\n");
        assert_eq!(t.to_text(), "  a  bb\n  1  22\n333\n");
        assert_eq!(real(0.5), "0.5");
        assert_eq!(real(1e20), "100000000000000000000");
        assert_eq!(real(f64::NAN), "");
    }
}
