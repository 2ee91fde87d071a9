//! Aggregate counts of irreducible binomials and their asymptotic main terms.
//!
//! All sums are exact `u128`; main terms are `f64`. Sums over `q <= Q` are
//! split into the prime part, found by walking the primes `p = 1 (mod
//! rad4(t))`, and the part from higher prime powers `p^r`, `r >= 2`, which is
//! enumerated directly.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::arith::{
    factorize, for_each_smooth, higher_prime_powers_up_to, paper_log, rho, squarefree_flags,
    squarefree_harmonic, PrimePower, PrimeTable, ZETA_2,
};
use crate::binomials::DegreeData;
use crate::error::{Error, Result};

/// Largest `Q` a census will sieve to.
pub const MAX_CENSUS_BOUND: u64 = 1_000_000_000;

/// Slack absorbing the `1 + o(1)` in the upper bound over `q <= Q`.
pub const THM1_SLACK: f64 = 1.1;
/// Multiple of the lower-bound scale that the sum over `q <= Q` must reach.
pub const THM2_FLOOR_FACTOR: f64 = 1.0;
/// Allowed relative deviation from the squarefree double-sum main term.
pub const THM4_TOLERANCE: f64 = 0.2;
/// Floor for the dyadic double sum as a multiple of `Q^2 / ln Q`.
pub const THM5_FLOOR: f64 = 0.1;

/// `sum_{q <= Q} N_t(q)` broken into primes and higher prime powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QSum {
    pub primes: u128,
    pub higher_powers: u128,
}

impl QSum {
    pub fn total(&self) -> u128 {
        self.primes + self.higher_powers
    }
}

/// Shared sieve data for sums over `q <= Q` up to a fixed limit.
#[derive(Debug, Clone)]
pub struct Census {
    table: PrimeTable,
    higher: Vec<PrimePower>,
    workers: usize,
}

impl Census {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidRange(format!(
                "census limit {limit} is below 2"
            )));
        }
        if limit > MAX_CENSUS_BOUND {
            return Err(Error::CapExceeded {
                work: limit as u128,
                cap: MAX_CENSUS_BOUND as u128,
            });
        }
        Ok(Census {
            table: PrimeTable::new(limit),
            higher: higher_prime_powers_up_to(limit),
            workers: 1,
        })
    }

    /// Number of worker threads for [`Census::double_sum_squarefree`].
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn limit(&self) -> u64 {
        self.table.limit()
    }

    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    fn check_bound(&self, bound: u64) -> Result<()> {
        if bound < 2 || bound > self.limit() {
            return Err(Error::InvalidRange(format!(
                "Q = {bound} must lie in [2, {}]",
                self.limit()
            )));
        }
        Ok(())
    }

    pub fn sum_over_q(&self, t: u64, bound: u64) -> Result<u128> {
        Ok(self.sum_over_q_split(t, bound)?.total())
    }

    pub fn sum_over_q_split(&self, t: u64, bound: u64) -> Result<QSum> {
        if t == 0 {
            return Err(Error::Zero("binomial degree"));
        }
        self.check_bound(bound)?;
        Ok(self.split_for(&DegreeData::new(t)?, bound))
    }

    fn split_for(&self, data: &DegreeData, bound: u64) -> QSum {
        let m = data.radical4;
        // sum of (q - 1) over admissible q, scaled by phi(t)/t at the end
        let primes_below = self.table.primes_up_to(bound);
        let prime_part: u128 = if bound / m > primes_below.len() as u64 {
            primes_below
                .iter()
                .filter(|&&p| (p - 1) % m == 0)
                .map(|&p| (p - 1) as u128)
                .sum()
        } else {
            (1..)
                .map(|k| 1 + k * m)
                .take_while(|&n| n <= bound)
                .filter(|&n| self.table.is_prime(n))
                .map(|n| (n - 1) as u128)
                .sum()
        };
        let higher_part: u128 = self
            .higher
            .iter()
            .take_while(|pp| pp.q() <= bound)
            .filter(|pp| data.admits(pp.q()))
            .map(|pp| (pp.q() - 1) as u128)
            .sum();
        let scale = |s: u128| {
            let n = s * data.phi as u128;
            assert_eq!(
                n % data.t as u128,
                0,
                "t = {} must divide the scaled sum",
                data.t
            );
            n / data.t as u128
        };
        QSum {
            primes: scale(prime_part),
            higher_powers: scale(higher_part),
        }
    }

    /// Sum over squarefree `t` of `sum_{q <= Q} N_t(q)`; the range is
    /// `1 <= t <= T`, or `T <= t <= 2T` when `dyadic`.
    pub fn double_sum_squarefree(&self, bound: u64, t_bound: u64, dyadic: bool) -> Result<u128> {
        self.check_bound(bound)?;
        if t_bound == 0 {
            return Err(Error::Zero("T"));
        }
        let (lo, hi) = degree_range(t_bound, dyadic)?;
        // t beyond Q - 1 never divides q - 1
        let hi = hi.min(bound);
        if lo > hi {
            return Ok(0);
        }
        let flags = squarefree_flags(hi);
        let degrees: Vec<u64> = (lo..=hi).filter(|&t| flags[t as usize]).collect();
        let per_degree = in_pool(self.workers, || {
            degrees
                .par_iter()
                .map(|&t| Ok(self.split_for(&DegreeData::new(t)?, bound).total()))
                .collect::<Result<Vec<u128>>>()
        })??;
        Ok(per_degree.into_iter().sum())
    }

    /// `max_{R <= Q} |pi(R; t, 1) - pi(R)/phi(t)|` from the shared sieve.
    pub fn error_term(&self, bound: u64, t: u64) -> Result<f64> {
        self.check_bound(bound)?;
        let phi = factorize(t)?.euler_phi() as f64;
        Ok(crate::arith::error_term_with(&self.table, bound, t, phi))
    }
}

fn degree_range(t_bound: u64, dyadic: bool) -> Result<(u64, u64)> {
    if dyadic {
        let hi = t_bound.checked_mul(2).ok_or(Error::Overflow("2T"))?;
        Ok((t_bound, hi))
    } else {
        Ok((1, t_bound))
    }
}

pub(crate) fn in_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidRange(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// `sum_{q <= Q} N_t(q)` over all prime powers `q`.
pub fn sum_over_q(t: u64, bound: u64) -> Result<u128> {
    Census::new(bound)?.sum_over_q(t, bound)
}

/// `sum_{t <= T} N_t(q)`; only `t` with `rad(t) | q - 1` are visited.
pub fn sum_over_t(q: PrimePower, t_bound: u64) -> Result<u128> {
    let primes: Vec<u64> = factorize(q.q() - 1)?.primes().collect();
    let mut degrees = Vec::new();
    for_each_smooth(&primes, t_bound, |t| degrees.push(t));
    degrees
        .into_iter()
        .map(|t| Ok(DegreeData::new(t)?.count(q.q()) as u128))
        .sum()
}

pub fn double_sum_squarefree(bound: u64, t_bound: u64, dyadic: bool) -> Result<u128> {
    Census::new(bound)?.double_sum_squarefree(bound, t_bound, dyadic)
}

/// `Q^2 / (rad4(t) log(Q / rad4(t)))`.
pub fn thm1_bound(t: u64, bound: f64) -> Result<f64> {
    let m = DegreeData::new(t)?.radical4 as f64;
    if m >= bound {
        return Err(Error::OutOfRegime(format!(
            "rad4({t}) = {m} is not below Q = {bound}"
        )));
    }
    Ok(bound * bound / (m * paper_log(bound / m)?))
}

/// `Q^2 / (phi(rad t)^2 (log Q)^2)`.
pub fn thm2_floor(t: u64, bound: f64) -> Result<f64> {
    if bound < 2.0 {
        return Err(Error::OutOfRegime(format!("Q = {bound} is below 2")));
    }
    let phi_rad = factorize(factorize(t)?.radical())?.euler_phi() as f64;
    let log = paper_log(bound)?;
    Ok(bound * bound / (phi_rad * phi_rad * log * log))
}

/// `Q^2 log T / (2 zeta(2) log Q)`.
pub fn thm4_main(bound: f64, t_bound: f64) -> Result<f64> {
    if bound < 2.0 || t_bound < 2.0 {
        return Err(Error::OutOfRegime(format!(
            "Q = {bound} and T = {t_bound} must both be at least 2"
        )));
    }
    Ok(bound * bound * paper_log(t_bound)? / (2.0 * ZETA_2 * paper_log(bound)?))
}

/// `(Q^2 / (2 ln Q)) * sum^#_{t <= T} 1/t`, the double-sum main term before
/// the squarefree harmonic sum is replaced by its asymptotic.
pub fn thm4_intermediate(bound: f64, t_bound: u64) -> Result<f64> {
    if bound < 2.0 {
        return Err(Error::OutOfRegime(format!("Q = {bound} is below 2")));
    }
    Ok(bound * bound / (2.0 * bound.ln()) * squarefree_harmonic(t_bound))
}

/// `Q^2 / ln Q`, the scale of the dyadic lower bound.
pub fn thm5_scale(bound: f64) -> Result<f64> {
    if bound < 2.0 {
        return Err(Error::OutOfRegime(format!("Q = {bound} is below 2")));
    }
    Ok(bound * bound / bound.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" | "1" => Ok(TheoremId::T1),
            "T2" | "2" => Ok(TheoremId::T2),
            "T3" | "3" => Ok(TheoremId::T3),
            "T4" | "4" => Ok(TheoremId::T4),
            "T5" | "5" => Ok(TheoremId::T5),
            _ => Err(Error::InvalidRange(format!("unknown theorem id {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    Informational,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Informational => "informational",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowParams {
    /// `sum_{q <= Q} N_t(q)`
    OverQ { t: u64, q_bound: u64 },
    /// `sum_{t <= T} N_t(q)`
    OverT { q: u64, t_bound: u64 },
    /// squarefree double sum
    Double {
        q_bound: u64,
        t_bound: u64,
        dyadic: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub params: RowParams,
    pub exact_sum: u128,
    pub main_term: f64,
    /// `exact_sum / main_term`, NaN when the main term is undefined.
    pub ratio: f64,
    pub verdict: Verdict,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub rows: Vec<CensusRow>,
}

impl TheoremReport {
    pub fn violations(&self) -> impl Iterator<Item = &CensusRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Violated)
    }
}

/// Parameter grid for [`run_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportGrid {
    /// Degrees `t` against bounds `Q` (T1, T2).
    Degrees { t: Vec<u64>, q_bounds: Vec<u64> },
    /// Prime powers `q` against bounds `T` (T3).
    Fields { q: Vec<u64>, t_bounds: Vec<u64> },
    /// Bounds `Q` against bounds `T` (T4 plain range, T5 dyadic range).
    Double {
        q_bounds: Vec<u64>,
        t_bounds: Vec<u64>,
    },
}

fn ratio_of(exact: u128, main: f64) -> f64 {
    if main > 0.0 {
        exact as f64 / main
    } else {
        f64::NAN
    }
}

/// Evaluates the exact sums and main terms for one theorem over a grid.
pub fn run_report(theorem: TheoremId, grid: &ReportGrid, workers: usize) -> Result<TheoremReport> {
    let mut rows = Vec::new();
    match (theorem, grid) {
        (TheoremId::T1 | TheoremId::T2, ReportGrid::Degrees { t, q_bounds }) => {
            let census = Census::new(max_of(q_bounds)?)?.with_workers(workers);
            for &bound in q_bounds {
                for &deg in t {
                    let start = Instant::now();
                    let exact = census.sum_over_q(deg, bound)?;
                    let (main, verdict_of): (Result<f64>, fn(f64) -> Verdict) = match theorem {
                        TheoremId::T1 => (thm1_bound(deg, bound as f64), |r| {
                            if r <= THM1_SLACK {
                                Verdict::Holds
                            } else {
                                Verdict::Violated
                            }
                        }),
                        _ => (thm2_floor(deg, bound as f64), |r| {
                            if r >= THM2_FLOOR_FACTOR {
                                Verdict::Holds
                            } else {
                                Verdict::Violated
                            }
                        }),
                    };
                    let (main, ratio, verdict) = match main {
                        Ok(m) => {
                            let r = ratio_of(exact, m);
                            (m, r, verdict_of(r))
                        }
                        Err(Error::OutOfRegime(_)) => (f64::NAN, f64::NAN, Verdict::Informational),
                        Err(e) => return Err(e),
                    };
                    rows.push(CensusRow {
                        params: RowParams::OverQ {
                            t: deg,
                            q_bound: bound,
                        },
                        exact_sum: exact,
                        main_term: main,
                        ratio,
                        verdict,
                        elapsed: start.elapsed(),
                    });
                }
            }
        }
        (TheoremId::T3, ReportGrid::Fields { q, t_bounds }) => {
            for &qv in q {
                let pp = PrimePower::from_q(qv)?;
                for &t_bound in t_bounds {
                    let start = Instant::now();
                    let exact = sum_over_t(pp, t_bound)?;
                    let upper = (qv - 1) as u128 * rho(t_bound, qv - 1)? as u128;
                    rows.push(CensusRow {
                        params: RowParams::OverT { q: qv, t_bound },
                        exact_sum: exact,
                        main_term: upper as f64,
                        ratio: ratio_of(exact, upper as f64),
                        verdict: if exact <= upper {
                            Verdict::Holds
                        } else {
                            Verdict::Violated
                        },
                        elapsed: start.elapsed(),
                    });
                }
            }
        }
        (TheoremId::T4 | TheoremId::T5, ReportGrid::Double { q_bounds, t_bounds }) => {
            let dyadic = theorem == TheoremId::T5;
            let census = Census::new(max_of(q_bounds)?)?.with_workers(workers);
            for &bound in q_bounds {
                for &t_bound in t_bounds {
                    if t_bound > bound {
                        return Err(Error::CapExceeded {
                            work: t_bound as u128,
                            cap: bound as u128,
                        });
                    }
                    let start = Instant::now();
                    let exact = census.double_sum_squarefree(bound, t_bound, dyadic)?;
                    let (main, verdict) = if dyadic {
                        let m = thm5_scale(bound as f64)?;
                        let v = if ratio_of(exact, m) >= THM5_FLOOR {
                            Verdict::Holds
                        } else {
                            Verdict::Violated
                        };
                        (m, v)
                    } else {
                        let m = thm4_intermediate(bound as f64, t_bound)?;
                        let v = if (ratio_of(exact, m) - 1.0).abs() <= THM4_TOLERANCE {
                            Verdict::Holds
                        } else {
                            Verdict::Violated
                        };
                        (m, v)
                    };
                    rows.push(CensusRow {
                        params: RowParams::Double {
                            q_bound: bound,
                            t_bound,
                            dyadic,
                        },
                        exact_sum: exact,
                        main_term: main,
                        ratio: ratio_of(exact, main),
                        verdict,
                        elapsed: start.elapsed(),
                    });
                }
            }
        }
        _ => {
            return Err(Error::InvalidRange(format!(
                "grid kind does not match theorem {theorem}"
            )))
        }
    }
    Ok(TheoremReport { theorem, rows })
}

fn max_of(values: &[u64]) -> Result<u64> {
    values
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::InvalidRange("empty grid".into()))
}
