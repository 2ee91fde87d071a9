//! Integer factorization for 64-bit inputs.
//!
//! Trial division strips every prime factor below one million; whatever
//! survives is either prime (decided by a deterministic Miller-Rabin test)
//! or a product of large primes, which Pollard's rho (Brent's variant) splits.
//! Every step is deterministic: the rho iteration uses the fixed seed 2 and
//! walks the additive constants 1, 2, 3, ... until a split is found.

use crate::error::{Error, Result};

/// Trial division bound.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// An integer `n >= 1` together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors, `omega(n)`.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Returns `Some((p, r))` when `n = p^r` for a single prime `p`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [(p, r)] => Some((*p, *r)),
            _ => None,
        }
    }
}

/// Factors `n >= 1` completely.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero("factorize"));
    }
    let mut rest = n;
    let mut found: Vec<u64> = Vec::new();

    for p in [2u64, 3, 5] {
        while rest % p == 0 {
            found.push(p);
            rest /= p;
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0;
    while d <= TRIAL_DIVISION_LIMIT && d.saturating_mul(d) <= rest {
        while rest % d == 0 {
            found.push(d);
            rest /= d;
        }
        d += STEPS[i];
        i = (i + 1) % STEPS.len();
    }
    if rest > 1 {
        split_large(rest, &mut found);
    }

    found.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    // n has no factor below the trial bound, so it is not a perfect power of
    // a small prime; rho always finds a proper divisor for some constant.
    let d = (1u64..)
        .find_map(|c| rho_brent(n, c))
        .expect("rho eventually splits a composite");
    split_large(d, out);
    split_large(n / d, out);
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Deterministic primality test, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's cycle detection on x -> x^2 + c, batching gcds over blocks of 128.
fn rho_brent(n: u64, c: u64) -> Option<u64> {
    const BLOCK: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BLOCK.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BLOCK;
        }
        r *= 2;
        if r > 1 << 40 {
            return None;
        }
    }
    if g == n {
        // the batch overshot; replay one step at a time
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}
