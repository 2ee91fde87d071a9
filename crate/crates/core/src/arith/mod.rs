//! Exact elementary number theory: radicals, totients, primes in
//! progressions and the auxiliary counting functions used by the census.

mod factor;
mod sieve;

pub use factor::{factorize, gcd, is_prime, Factorization, TRIAL_DIVISION_LIMIT};
pub use sieve::{sieve_primes, squarefree_flags, PrimeTable};

pub(crate) use factor::{mul_mod, pow_mod};
pub(crate) use sieve::integer_sqrt;

use crate::error::{Error, Result};

/// `zeta(2) = pi^2 / 6`.
pub const ZETA_2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// A prime power `q = p^r`, `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    q: u64,
    p: u64,
    r: u32,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::Zero("prime power exponent"));
        }
        let q = p.checked_pow(r).ok_or(Error::Overflow("p^r"))?;
        Ok(PrimePower { q, p, r })
    }

    /// Recognises `q` as a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let (p, r) = factorize(q)?
            .as_prime_power()
            .ok_or(Error::NotPrimePower(q))?;
        Ok(PrimePower { q, p, r })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }
}

pub fn radical(t: u64) -> Result<u64> {
    Ok(factorize(t)?.radical())
}

/// `rad(t)` when `4` does not divide `t`, otherwise `2 rad(t)`.
pub fn radical4(t: u64) -> Result<u64> {
    let rad = radical(t)?;
    Ok(if t % 4 == 0 { 2 * rad } else { rad })
}

pub fn euler_phi(t: u64) -> Result<u64> {
    Ok(factorize(t)?.euler_phi())
}

pub fn is_squarefree(t: u64) -> Result<bool> {
    Ok(factorize(t)?.is_squarefree())
}

/// All prime powers `q <= bound`, ascending, each once.
pub fn prime_powers_up_to(bound: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for p in sieve_primes(bound) {
        let mut q = p;
        let mut r = 1;
        loop {
            out.push(PrimePower { q, p, r });
            match q.checked_mul(p) {
                Some(next) if next <= bound => {
                    q = next;
                    r += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// Prime powers `p^r <= bound` with `r >= 2`, ascending.
pub fn higher_prime_powers_up_to(bound: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for p in sieve_primes(integer_sqrt(bound)) {
        let mut q = p * p;
        let mut r = 2;
        loop {
            out.push(PrimePower { q, p, r });
            match q.checked_mul(p) {
                Some(next) if next <= bound => {
                    q = next;
                    r += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of primes `p <= bound` with `p = a (mod modulus)`.
pub fn pi_progression(bound: u64, modulus: u64, residue: i64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::Zero("progression modulus"));
    }
    let a = residue.rem_euclid(modulus as i64) as u64;
    Ok(sieve_primes(bound)
        .into_iter()
        .filter(|p| p % modulus == a)
        .count() as u64)
}

/// `max_{R <= bound} |pi(R; t, 1) - pi(R) / phi(t)|`.
///
/// Both counting functions are right-continuous steps that only move at
/// primes, so inspecting the value just after each prime is exact.
pub fn error_term(bound: u64, t: u64) -> Result<f64> {
    let phi = euler_phi(t)? as f64;
    let table = PrimeTable::new(bound);
    Ok(error_term_with(&table, bound, t, phi))
}

pub(crate) fn error_term_with(table: &PrimeTable, bound: u64, t: u64, phi: f64) -> f64 {
    let mut all = 0u64;
    let mut in_class = 0u64;
    let mut worst = 0.0f64;
    for &p in table.primes_up_to(bound) {
        all += 1;
        if p % t == 1 % t {
            in_class += 1;
        }
        worst = worst.max((in_class as f64 - all as f64 / phi).abs());
    }
    worst
}

/// Visits every `t <= bound` whose prime factors all lie in `primes`.
///
/// Depth-first over exponent vectors; runs in time proportional to the
/// number of integers visited.
pub fn for_each_smooth<F: FnMut(u64)>(primes: &[u64], bound: u64, mut visit: F) {
    fn walk<F: FnMut(u64)>(primes: &[u64], bound: u64, acc: u64, visit: &mut F) {
        visit(acc);
        for (i, &p) in primes.iter().enumerate() {
            let mut next = acc;
            loop {
                match next.checked_mul(p) {
                    Some(m) if m <= bound => {
                        next = m;
                        walk(&primes[i + 1..], bound, next, visit);
                    }
                    _ => break,
                }
            }
        }
    }
    if bound >= 1 {
        walk(primes, bound, 1, &mut visit);
    }
}

/// `rho_T(n)`: the number of `t <= T` with `rad(t) | n`.
pub fn rho(bound: u64, n: u64) -> Result<u64> {
    let primes: Vec<u64> = factorize(n)?.primes().collect();
    let mut count = 0;
    for_each_smooth(&primes, bound, |_| count += 1);
    Ok(count)
}

/// Sum of `1/t` over squarefree `t <= bound`, accumulated in ascending order.
pub fn squarefree_harmonic(bound: u64) -> f64 {
    squarefree_flags(bound)
        .iter()
        .enumerate()
        .filter(|(_, &sf)| sf)
        .fold(0.0, |acc, (t, _)| acc + 1.0 / t as f64)
}

/// `max(ln x, 2)`.
pub fn paper_log(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::NonPositiveLog(x.to_string()));
    }
    Ok(x.ln().max(2.0))
}

/// `log_k x`: `log_1 = paper_log`, `log_k x = paper_log(log_{k-1} x)`.
pub fn paper_log_iter(x: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Zero("logarithm iteration depth"));
    }
    let mut v = paper_log(x)?;
    for _ in 1..k {
        v = paper_log(v)?;
    }
    Ok(v)
}
