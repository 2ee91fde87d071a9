//! Irreducible binomials `X^t - a` over `F_q`.
//!
//! Three independent ways to obtain `N_t(q)`, the number of `a in F_q^*`
//! for which `X^t - a` is irreducible:
//!
//! * [`count_formula`]: `N_t(q) = (phi(t)/t)(q-1)` when `rad4(t) | q-1`, else 0;
//! * [`count_by_criterion`]: counts the units satisfying the order criterion
//!   of [`binomial_irreducible_by_criterion`];
//! * [`count_bruteforce`]: runs the generic Rabin test on every binomial.

use std::fmt;

use crate::arith::{factorize, gcd, PrimePower};
use crate::error::{Error, Result};
use crate::ffield::{poly_is_irreducible, FieldElement, FieldSpec, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountMethod {
    Formula,
    Criterion,
    Oracle,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Formula => "formula",
            CountMethod::Criterion => "criterion",
            CountMethod::Oracle => "oracle",
        })
    }
}

/// `N_t(q)` together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialCount {
    pub t: u64,
    pub q: PrimePower,
    pub count: u64,
    pub method: CountMethod,
}

/// The quantities entering the closed form for a fixed degree `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeData {
    pub t: u64,
    pub phi: u64,
    pub radical: u64,
    pub radical4: u64,
}

impl DegreeData {
    pub fn new(t: u64) -> Result<Self> {
        let f = factorize(t)?;
        let radical = f.radical();
        Ok(DegreeData {
            t,
            phi: f.euler_phi(),
            radical,
            radical4: if t % 4 == 0 { 2 * radical } else { radical },
        })
    }

    /// Whether `rad4(t)` divides `q - 1`.
    pub fn admits(&self, q: u64) -> bool {
        (q - 1) % self.radical4 == 0
    }

    /// `phi(t) (q - 1) / t` for an admissible `q`, or 0.
    pub fn count(&self, q: u64) -> u64 {
        if !self.admits(q) {
            return 0;
        }
        let numerator = self.phi as u128 * (q - 1) as u128;
        assert_eq!(
            numerator % self.t as u128,
            0,
            "t = {} must divide phi(t)(q-1) when rad4(t) | q-1 (q = {q})",
            self.t
        );
        (numerator / self.t as u128) as u64
    }
}

/// Closed-form `N_t(q)`, with `N_1(q) = q - 1`.
pub fn count_formula(t: u64, q: PrimePower) -> Result<u64> {
    if t == 0 {
        return Err(Error::Zero("binomial degree"));
    }
    Ok(DegreeData::new(t)?.count(q.q()))
}

/// [`count_formula`] wrapped with its provenance.
pub fn binomial_count(t: u64, q: PrimePower) -> Result<BinomialCount> {
    Ok(BinomialCount {
        t,
        q,
        count: count_formula(t, q)?,
        method: CountMethod::Formula,
    })
}

/// The order criterion for `t >= 2` and `a != 0`: `X^t - a` is irreducible
/// iff `rad(t) | ord(a)`, `gcd(t, (q-1)/ord(a)) = 1`, and `q = 1 (mod 4)`
/// whenever `4 | t`.
pub fn binomial_irreducible_by_criterion(
    t: u64,
    a: &FieldElement,
    field: &FieldSpec,
) -> Result<bool> {
    if t < 2 {
        return Err(Error::DegreeTooSmall(t));
    }
    let order = field.mult_order(a)?;
    Ok(criterion_holds(
        t,
        factorize(t)?.radical(),
        order,
        field.q(),
    ))
}

fn criterion_holds(t: u64, radical: u64, order: u64, q: u64) -> bool {
    order % radical == 0 && gcd(t, (q - 1) / order) == 1 && (t % 4 != 0 || q % 4 == 1)
}

fn check_cap(t: u64, field: &FieldSpec, cap: u128) -> Result<()> {
    let work = field.q() as u128 * t as u128;
    if work > cap {
        return Err(Error::CapExceeded { work, cap });
    }
    Ok(())
}

/// Whether `X^t - a` passes the generic Rabin test.
pub fn binomial_irreducible_by_rabin(t: u64, a: &FieldElement, field: &FieldSpec) -> Result<bool> {
    if t == 0 {
        return Err(Error::Zero("binomial degree"));
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let a = field.encode(a);
    poly_is_irreducible(&Poly::binomial(t as usize, a, field), field)
}

/// `#{a in F_q^* : X^t - a irreducible}` by the Rabin test on each binomial.
pub fn count_bruteforce(t: u64, field: &FieldSpec, cap: u128) -> Result<u64> {
    if t == 0 {
        return Err(Error::Zero("binomial degree"));
    }
    check_cap(t, field, cap)?;
    let mut count = 0;
    for a in 1..field.q() {
        if poly_is_irreducible(&Poly::binomial(t as usize, a, field), field)? {
            count += 1;
        }
    }
    Ok(count)
}

/// `#{a in F_q^*}` passing the order criterion, `t >= 2`.
pub fn count_by_criterion(t: u64, field: &FieldSpec, cap: u128) -> Result<u64> {
    if t < 2 {
        return Err(Error::DegreeTooSmall(t));
    }
    check_cap(t, field, cap)?;
    let radical = factorize(t)?.radical();
    let mut count = 0;
    for a in 1..field.q() {
        if criterion_holds(t, radical, field.mult_order_code(a)?, field.q()) {
            count += 1;
        }
    }
    Ok(count)
}

/// The first unit on which the criterion and the Rabin test disagree.
pub fn criterion_witness(t: u64, field: &FieldSpec, cap: u128) -> Result<Option<FieldElement>> {
    check_cap(t, field, cap)?;
    for a in field.units(cap)? {
        if binomial_irreducible_by_criterion(t, &a, field)?
            != binomial_irreducible_by_rabin(t, &a, field)?
        {
            return Ok(Some(a));
        }
    }
    Ok(None)
}
