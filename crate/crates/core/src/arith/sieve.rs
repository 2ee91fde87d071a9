//! Segmented sieve of Eratosthenes and a packed primality table.

const SEGMENT: u64 = 1 << 18;

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All primes `p <= limit`, ascending.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = integer_sqrt(limit);
    let base = simple_sieve(root);
    let mut primes = Vec::with_capacity(approx_pi(limit));
    primes.extend(base.iter().copied());

    let mut low = root + 1;
    let mut marks = vec![false; SEGMENT as usize];
    while low <= limit {
        let high = (low + SEGMENT - 1).min(limit);
        let len = (high - low + 1) as usize;
        marks[..len].fill(false);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut m = (low.div_ceil(p) * p).max(p * p);
            while m <= high {
                marks[(m - low) as usize] = true;
                m += p;
            }
        }
        primes.extend(
            marks[..len]
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| low + i as u64),
        );
        low = high + 1;
    }
    primes
}

fn approx_pi(x: u64) -> usize {
    if x < 17 {
        return 8;
    }
    let xf = x as f64;
    (1.3 * xf / xf.ln()) as usize
}

pub(crate) fn integer_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// A read-only table of the primes up to a fixed limit, with O(1) lookup.
///
/// Odd numbers are packed one bit each; the sorted list is kept alongside.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    odd_bits: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let primes = sieve_primes(limit);
        let words = (limit / 2 / 64 + 1) as usize;
        let mut odd_bits = vec![0u64; words];
        for &p in primes.iter().skip(1) {
            let i = (p / 2) as usize;
            odd_bits[i / 64] |= 1 << (i % 64);
        }
        PrimeTable {
            limit,
            odd_bits,
            primes,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= bound` (clamped to the table limit).
    pub fn primes_up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    /// Primality of `n`; panics if `n` exceeds the table limit.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(
            n <= self.limit,
            "{n} is beyond the prime table limit {}",
            self.limit
        );
        if n % 2 == 0 {
            return n == 2;
        }
        let i = (n / 2) as usize;
        self.odd_bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of primes `<= bound`.
    pub fn pi(&self, bound: u64) -> usize {
        self.primes_up_to(bound).len()
    }
}

/// `flags[t]` is true iff `t` is squarefree, for `0 < t <= limit`; `flags[0]` is false.
pub fn squarefree_flags(limit: u64) -> Vec<bool> {
    let n = limit as usize;
    let mut flags = vec![true; n + 1];
    flags[0] = false;
    for p in sieve_primes(integer_sqrt(limit)) {
        let sq = (p * p) as usize;
        let mut m = sq;
        while m <= n {
            flags[m] = false;
            m += sq;
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_limits() {
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        assert!(sieve_primes(1).is_empty());
        assert!(sieve_primes(0).is_empty());
        assert_eq!(sieve_primes(2), vec![2]);
    }

    #[test]
    fn segments_match_naive() {
        // crosses several segment boundaries
        let limit = 3 * SEGMENT + 12_345;
        assert_eq!(sieve_primes(limit), naive_primes(limit));
    }

    #[test]
    fn pi_of_a_million() {
        let limit = 1_000_000;
        let primes = sieve_primes(limit);
        assert_eq!(primes.len(), 78_498);
        assert_eq!(primes.len(), naive_primes(limit).len());
    }

    #[test]
    fn table_lookup() {
        let table = PrimeTable::new(10_000);
        let naive = naive_primes(10_000);
        for n in 0..=10_000 {
            assert_eq!(table.is_prime(n), naive.binary_search(&n).is_ok(), "{n}");
        }
        assert_eq!(table.pi(100), 25);
        assert_eq!(table.primes_up_to(10), &[2, 3, 5, 7]);
    }

    #[test]
    fn squarefree_small() {
        let flags = squarefree_flags(30);
        let sf: Vec<usize> = (1..=30).filter(|&t| flags[t]).collect();
        assert_eq!(
            sf,
            vec![1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]
        );
    }

    #[test]
    fn isqrt() {
        for n in 0..10_000u64 {
            let r = integer_sqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(integer_sqrt(u64::MAX), u32::MAX as u64);
    }
}
