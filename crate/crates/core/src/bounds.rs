//! Exact endpoint calculators for the spectrum `S_k` and its limit points.
//!
//! Throughout, `D = 2^{k−s+1}`. Values near `s − 1` are all of the shape
//! `s − 1 − 1/(D + x)`, so most helpers work with the denominator `D + x`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::rational::{binomial, gcd_u64, int, pow2, Rational};
use crate::{Error, Result};

/// Largest `k − s` accepted; keeps `2^{k−s+2}` inside `u64`.
pub const MAX_GAP: usize = 60;

fn check_params(s: usize, k: usize, min_gap: usize) -> Result<()> {
    if s < 3 {
        return Err(Error::Parameter(format!("arity must be at least 3, got {s}")));
    }
    if k < s + min_gap {
        return Err(Error::Parameter(format!("need k >= s + {min_gap}, got s = {s}, k = {k}")));
    }
    if k - s > MAX_GAP {
        return Err(Error::Parameter(format!("k − s = {} exceeds {MAX_GAP}", k - s)));
    }
    Ok(())
}

fn big_d(s: usize, k: usize) -> u64 {
    1u64 << (k - s + 1)
}

/// `s − 1 − 1/x`.
fn near_top(s: usize, x: Rational) -> Rational {
    int(s as i64 - 1) - x.recip()
}

/// `C(k−1, s−1) − 1 − (s−1)/(k−1) + 2(1 + (s−1)/(k−1))/(C(k−1, s−1) + 2)`.
/// Every `α > 0` with `1/α` above this value obeys the zero-one k-law.
pub fn low_obeying_threshold(s: usize, k: usize) -> Result<Rational> {
    check_params(s, k, 1)?;
    let c = Rational::from_integer(binomial(k as u64 - 1, s as u64 - 1));
    let r = Rational::new(BigInt::from(s - 1), BigInt::from(k - 1));
    let two = int(2);
    Ok(&c - int(1) - &r + &two * (int(1) + &r) / (&c + &two))
}

/// `C(k−1, s−1) − 1 − (s−1)/(k−1) − 2/C(k−1, s−1)`: some `α` with `1/α`
/// above this value violates the law.
pub fn low_violating_threshold(s: usize, k: usize) -> Result<Rational> {
    check_params(s, k, 2)?;
    let c = Rational::from_integer(binomial(k as u64 - 1, s as u64 - 1));
    let r = Rational::new(BigInt::from(s - 1), BigInt::from(k - 1));
    Ok(&c - int(1) - r - int(2) / &c)
}

/// `α = s − 1 − 1/(D + a/b)` for irreducible `a/b`, `b ≤ b_max` and
/// `max(1, D − b) ≤ a ≤ D`. Sorted ascending, no duplicates.
pub fn high_obeying_set(s: usize, k: usize, b_max: u64) -> Result<Vec<Rational>> {
    check_params(s, k, 1)?;
    let d = big_d(s, k);
    let mut out = Vec::new();
    for b in 1..=b_max {
        let nu = d.saturating_sub(b).max(1);
        for a in nu..=d {
            if gcd_u64(a, b) == 1 {
                let x = Rational::from_integer(d.into()) + Rational::new(a.into(), b.into());
                out.push(near_top(s, x));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `α = s − 1 − 1/(D + a)` for `1 ≤ a ≤ D − 3`. Sorted ascending.
pub fn high_violating_set(s: usize, k: usize) -> Result<Vec<Rational>> {
    check_params(s, k, 1)?;
    let d = big_d(s, k);
    Ok((1..=d.saturating_sub(3)).map(|a| near_top(s, Rational::from_integer((d + a).into()))).collect())
}

/// The older violating family: `α = s − 1 − 1/(D + a)` for
/// `1 ≤ a ≤ 2^{k−s−2} + 2^{k−s−3} + 1`, defined for `k ≥ s + 4`.
pub fn earlier_violating_set(s: usize, k: usize) -> Result<Vec<Rational>> {
    check_params(s, k, 4)?;
    let d = big_d(s, k);
    let top = (1u64 << (k - s - 2)) + (1u64 << (k - s - 3)) + 1;
    Ok((1..=top).map(|a| near_top(s, Rational::from_integer((d + a).into()))).collect())
}

/// The two possible values of `max S_k`: `s − 1 − 1/(2^{k−s+2} − 3)` and
/// `s − 1 − 1/(2^{k−s+2} − 2)`. The first is checked against the largest
/// member of [`high_violating_set`].
pub fn max_spectrum_candidates(s: usize, k: usize) -> Result<(Rational, Rational)> {
    check_params(s, k, 1)?;
    let top = 2 * big_d(s, k);
    let lo = near_top(s, Rational::from_integer((top - 3).into()));
    let hi = near_top(s, Rational::from_integer((top - 2).into()));
    let violating = high_violating_set(s, k)?;
    if violating.last() != Some(&lo) {
        return Err(Error::Verification(format!(
            "largest violating α {:?} differs from the first candidate {lo}",
            violating.last()
        )));
    }
    Ok((lo, hi))
}

/// Membership in `Q_k = {s − 1 − 1/(D + a/b) : a, b ∈ ℕ, a ≤ D}`.
///
/// `a/b` need not be reduced, so the condition is that `1/(s − 1 − α) − D` is
/// positive with reduced numerator at most `D`.
pub fn in_exceptional_set(s: usize, k: usize, alpha: &Rational) -> Result<bool> {
    check_params(s, k, 1)?;
    let gap = int(s as i64 - 1) - alpha;
    if !gap.is_positive() {
        return Ok(false);
    }
    let x = gap.recip() - Rational::from_integer(big_d(s, k).into());
    Ok(x.is_positive() && *x.numer() <= BigInt::from(big_d(s, k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    MinSkLowerRegion,
    MinSkWitnessRegion,
    MaxSkObeys,
    MaxSkViolates,
    MinLimitPoints,
    MaxLimitPoints,
    MaxSkCandidates,
}

/// Which quantity the value bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Alpha,
    InverseAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// The true quantity is at least the value.
    Lower,
    /// The true quantity is at most the value.
    Upper,
    /// `1/α` strictly above the value implies the stated behaviour.
    Threshold,
    /// One of a finite set of possible values.
    Candidate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumBound {
    pub kind: BoundKind,
    /// Short name of the statement the row evaluates.
    pub label: &'static str,
    pub relation: Relation,
    pub measure: Measure,
    pub s: usize,
    pub k: usize,
    #[serde(skip)]
    pub value: Rational,
    /// Only valid for `k ≥ s + C` with an unspecified constant `C`.
    pub needs_unknown_constant: bool,
}

/// `1/C(k−11, s−1)`, an upper bound on `min (S_k)'`; needs `k − 11 ≥ s − 1`.
pub fn min_limit_point_upper(s: usize, k: usize) -> Result<Rational> {
    check_params(s, k, 1)?;
    if k < s + 10 {
        return Err(Error::Parameter(format!("need k >= s + 10 for C(k−11, s−1) > 0, got k = {k}")));
    }
    Ok(Rational::new(BigInt::one(), binomial(k as u64 - 11, s as u64 - 1)))
}

/// `s − 1 − 1/2^{k−s−4}`, a lower bound on `max (S_k)'`; needs `k ≥ s + 5`
/// for the value to be positive.
pub fn max_limit_point_lower(s: usize, k: usize) -> Result<Rational> {
    check_params(s, k, 5)?;
    Ok(near_top(s, Rational::from_integer(pow2((k - s - 4) as u32))))
}

/// `s − 1 − 1/2^{k−s+1}`, an upper bound on `max (S_k)'`.
pub fn max_limit_point_upper(s: usize, k: usize) -> Result<Rational> {
    check_params(s, k, 1)?;
    Ok(near_top(s, Rational::from_integer(pow2((k - s + 1) as u32))))
}

/// Every bound that applies at `(s, k)`; rows whose parameter range excludes
/// `(s, k)` are left out.
pub fn bound_table(s: usize, k: usize) -> Result<Vec<SpectrumBound>> {
    check_params(s, k, 1)?;
    let d = big_d(s, k);
    let row = |kind, label, relation, measure, value, needs_unknown_constant| SpectrumBound {
        kind,
        label,
        relation,
        measure,
        s,
        k,
        value,
        needs_unknown_constant,
    };
    let mut out = vec![row(
        BoundKind::MinSkLowerRegion,
        "obeys_below_threshold",
        Relation::Threshold,
        Measure::InverseAlpha,
        low_obeying_threshold(s, k)?,
        false,
    )];
    if k >= s + 2 {
        out.push(row(
            BoundKind::MinSkWitnessRegion,
            "violating_point_above_threshold",
            Relation::Threshold,
            Measure::InverseAlpha,
            low_violating_threshold(s, k)?,
            false,
        ));
    }
    out.push(row(
        BoundKind::MaxSkObeys,
        "interval_minus_exceptional_set",
        Relation::Upper,
        Measure::Alpha,
        near_top(s, Rational::from_integer((2 * d).into())),
        false,
    ));
    out.push(row(
        BoundKind::MaxSkObeys,
        "rational_obeying_family",
        Relation::Upper,
        Measure::Alpha,
        near_top(s, Rational::from_integer((2 * d - 2).into())),
        false,
    ));
    if k >= s + 4 {
        let top = (1u64 << (k - s - 2)) + (1u64 << (k - s - 3)) + 1;
        out.push(row(
            BoundKind::MaxSkViolates,
            "earlier_violating_family",
            Relation::Lower,
            Measure::Alpha,
            near_top(s, Rational::from_integer((d + top).into())),
            false,
        ));
    }
    if d > 3 {
        out.push(row(
            BoundKind::MaxSkViolates,
            "violating_family",
            Relation::Lower,
            Measure::Alpha,
            near_top(s, Rational::from_integer((2 * d - 3).into())),
            false,
        ));
    }
    if k >= s + 10 {
        out.push(row(
            BoundKind::MinLimitPoints,
            "min_limit_point",
            Relation::Upper,
            Measure::Alpha,
            min_limit_point_upper(s, k)?,
            true,
        ));
    }
    if k >= s + 5 {
        out.push(row(
            BoundKind::MaxLimitPoints,
            "max_limit_point_lower",
            Relation::Lower,
            Measure::Alpha,
            max_limit_point_lower(s, k)?,
            true,
        ));
    }
    out.push(row(
        BoundKind::MaxLimitPoints,
        "max_limit_point_upper",
        Relation::Upper,
        Measure::Alpha,
        max_limit_point_upper(s, k)?,
        false,
    ));
    let (c1, c2) = max_spectrum_candidates(s, k)?;
    for (label, c) in [("max_point_candidate_low", c1), ("max_point_candidate_high", c2)] {
        out.push(row(BoundKind::MaxSkCandidates, label, Relation::Candidate, Measure::Alpha, c, false));
    }
    debug_assert!(out.iter().all(|r| !r.value.is_zero()));
    Ok(out)
}
