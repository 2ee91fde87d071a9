//! Univariate polynomials over `F_q` and Rabin's irreducibility test.
//!
//! Coefficients are element codes (see [`FieldSpec::encode`]), lowest
//! degree first.

use crate::arith::factorize;
use crate::error::{Error, Result};

use super::FieldSpec;

/// A polynomial with trailing zero coefficients trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u64>,
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// `X^t - a`, with `a` given as an element code of `field`.
    pub fn binomial(t: usize, a: u64, field: &FieldSpec) -> Self {
        let mut coeffs = vec![0; t + 1];
        coeffs[t] = 1;
        coeffs[0] = field.sub_code(coeffs[0], a);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }
}

// Products of codes lie below 2^64 when p < 2^32, so sums of them can be
// deferred in u128 accumulators and reduced once.
fn lazy_prime(field: &FieldSpec) -> Option<u64> {
    (field.is_prime_field() && field.p() < 1 << 32).then_some(field.p())
}

pub fn poly_sub(a: &Poly, b: &Poly, field: &FieldSpec) -> Poly {
    let len = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..len)
        .map(|i| {
            let x = a.coeffs.get(i).copied().unwrap_or(0);
            let y = b.coeffs.get(i).copied().unwrap_or(0);
            field.sub_code(x, y)
        })
        .collect();
    Poly::new(coeffs)
}

pub fn poly_mul(a: &Poly, b: &Poly, field: &FieldSpec) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    Poly::new(mul_dense(&a.coeffs, &b.coeffs, field))
}

fn mul_dense(a: &[u64], b: &[u64], field: &FieldSpec) -> Vec<u64> {
    let len = a.len() + b.len() - 1;
    if let Some(p) = lazy_prime(field) {
        let mut acc = vec![0u128; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += (x * y) as u128;
            }
        }
        return acc.into_iter().map(|v| (v % p as u128) as u64).collect();
    }
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add_code(out[i + j], field.mul_code(x, y));
        }
    }
    out
}

fn make_monic(f: &Poly, field: &FieldSpec) -> Result<Poly> {
    let lead = f.lead().ok_or(Error::ZeroElement)?;
    if lead == 1 {
        return Ok(f.clone());
    }
    let inv = field.inv_code(lead)?;
    Ok(Poly::new(
        f.coeffs.iter().map(|&c| field.mul_code(c, inv)).collect(),
    ))
}

/// Remainder of `a` modulo a nonzero `b`.
pub fn poly_rem(a: &Poly, b: &Poly, field: &FieldSpec) -> Result<Poly> {
    let n = b.degree().ok_or(Error::ZeroElement)?;
    let inv = field.inv_code(b.coeffs[n])?;
    let mut r = a.coeffs.clone();
    while r.len() > n {
        let top = r.len() - 1;
        let c = field.mul_code(r[top], inv);
        if c != 0 {
            for (j, &bj) in b.coeffs.iter().enumerate() {
                let k = top - n + j;
                r[k] = field.sub_code(r[k], field.mul_code(c, bj));
            }
        }
        r.pop();
    }
    Ok(Poly::new(r))
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Poly, b: &Poly, field: &FieldSpec) -> Result<Poly> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = poly_rem(&x, &y, field)?;
        x = y;
        y = r;
    }
    if x.is_zero() {
        return Ok(x);
    }
    make_monic(&x, field)
}

/// Arithmetic in `F_q[X] / (f)` for monic `f` of degree `n >= 1`, residues
/// held as dense vectors of length `n`.
struct Residues<'a> {
    field: &'a FieldSpec,
    f: Vec<u64>,
    n: usize,
}

impl<'a> Residues<'a> {
    fn new(field: &'a FieldSpec, monic: &Poly) -> Self {
        let n = monic.degree().expect("nonconstant modulus");
        Residues {
            field,
            f: monic.coeffs.clone(),
            n,
        }
    }

    fn x(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        if self.n == 1 {
            v[0] = self.field.neg_code(self.f[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        v[0] = 1;
        v
    }

    fn reduce(&self, mut prod: Vec<u64>) -> Vec<u64> {
        let n = self.n;
        if prod.len() <= n {
            prod.resize(n, 0);
            return prod;
        }
        if let Some(p) = lazy_prime(self.field) {
            let pp = p as u128;
            let mut acc: Vec<u128> = prod.into_iter().map(u128::from).collect();
            let neg: Vec<u128> = self.f[..n].iter().map(|&c| ((p - c) % p) as u128).collect();
            for top in (n..acc.len()).rev() {
                let c = acc[top] % pp;
                if c == 0 {
                    continue;
                }
                for (j, &m) in neg.iter().enumerate() {
                    acc[top - n + j] += c * m;
                }
            }
            acc.truncate(n);
            return acc.into_iter().map(|v| (v % pp) as u64).collect();
        }
        let field = self.field;
        for top in (n..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                let k = top - n + j;
                prod[k] = field.sub_code(prod[k], field.mul_code(c, self.f[j]));
            }
        }
        prod.truncate(n);
        prod
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.reduce(mul_dense(a, b, self.field))
    }

    fn pow(&self, base: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }
}

/// The `q`-power Frobenius on `F_q[X] / (f)` as the matrix whose columns are
/// `X^{jq} mod f`. Coefficients are fixed by `c -> c^q`, so
/// `g(X)^q = sum g_j X^{jq}` and one application costs `n^2` operations.
struct Frobenius {
    columns: Vec<Vec<u64>>,
}

impl Frobenius {
    fn new(ring: &Residues<'_>, x_to_q: &[u64]) -> Self {
        let mut columns = Vec::with_capacity(ring.n);
        let mut col = ring.one();
        for _ in 0..ring.n {
            let next = ring.mul(&col, x_to_q);
            columns.push(col);
            col = next;
        }
        Frobenius { columns }
    }

    fn apply(&self, g: &[u64], field: &FieldSpec) -> Vec<u64> {
        let n = g.len();
        if let Some(p) = lazy_prime(field) {
            let mut acc = vec![0u128; n];
            for (col, &gj) in self.columns.iter().zip(g) {
                if gj == 0 {
                    continue;
                }
                for (a, &c) in acc.iter_mut().zip(col) {
                    *a += (gj * c) as u128;
                }
            }
            return acc.into_iter().map(|v| (v % p as u128) as u64).collect();
        }
        let mut out = vec![0u64; n];
        for (col, &gj) in self.columns.iter().zip(g) {
            if gj == 0 {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(col) {
                *o = field.add_code(*o, field.mul_code(gj, c));
            }
        }
        out
    }
}

/// Rabin's test: a polynomial `f` of degree `n` is irreducible over `F_q`
/// iff `X^{q^n} = X (mod f)` and `gcd(X^{q^{n/l}} - X, f) = 1` for every
/// prime `l | n`.
pub fn poly_is_irreducible(f: &Poly, field: &FieldSpec) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = make_monic(f, field)?;
    let ring = Residues::new(field, &f);
    let x = ring.x();
    let x_to_q = ring.pow(&x, field.q());
    let frob = Frobenius::new(&ring, &x_to_q);

    let cofactors: Vec<usize> = factorize(n as u64)?
        .primes()
        .map(|l| n / l as usize)
        .collect();
    let mut saved: Vec<(usize, Vec<u64>)> = Vec::with_capacity(cofactors.len());

    // h = X^{q^i} mod f
    let mut h = x_to_q;
    for i in 1..=n {
        if i > 1 {
            h = frob.apply(&h, field);
        }
        if cofactors.contains(&i) {
            saved.push((i, h.clone()));
        }
    }
    if h != x {
        return Ok(false);
    }
    let x_poly = Poly::new(x);
    for (_, h) in saved {
        let g = poly_sub(&Poly::new(h), &x_poly, field);
        if poly_gcd(&g, &f, field)?.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}
