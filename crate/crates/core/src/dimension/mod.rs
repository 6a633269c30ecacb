//! Degree-sequence algebra: Minkowski-dimension estimates from the exact
//! orders `|r_n(G)| = [K_n : K]`, and the finite-level bounds that go with
//! them.
//!
//! Each estimate `a_n = (d-1)/ln(d!) · ln(deg_n)/d^n` is held symbolically
//! as a [`LogRatio`], so comparisons against rationals such as `7/8` are
//! exact and decimal expansions are produced to any requested precision.

mod bounds;
pub mod logs;

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use bounds::*;
pub use logs::{factorial, perfect_power, LogRatio, ScaledLog};

use crate::error::{Error, Result};

/// Default number of decimal digits in reported estimates.
pub const DEFAULT_DIGITS: usize = 50;

/// Exact field degrees `[K_n : K]` for `n = 0..=N` over a tree of arity `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    base_degree: u32,
    #[serde(serialize_with = "crate::report::biguint_vec_string")]
    degrees: Vec<BigUint>,
}

impl DegreeSequence {
    /// Validates `deg_0 = 1`, `deg_n | deg_{n+1}` and
    /// `deg_n <= d!^((d^n - 1)/(d - 1))`.
    pub fn new(base_degree: u32, degrees: Vec<BigUint>) -> Result<Self> {
        if base_degree < 2 {
            return Err(Error::invalid(format!("base degree must be at least 2, got {base_degree}")));
        }
        if degrees.is_empty() {
            return Err(Error::BadSequence { index: 0, reason: "empty sequence".into() });
        }
        if !degrees[0].is_one() {
            return Err(Error::BadSequence { index: 0, reason: "deg_0 must be 1".into() });
        }
        let fact = factorial(base_degree);
        let d = BigUint::from(base_degree);
        let mut internal = BigUint::zero(); // (d^n - 1)/(d - 1)
        let mut level_width = BigUint::one(); // d^n
        for (n, deg) in degrees.iter().enumerate() {
            if deg.is_zero() {
                return Err(Error::BadSequence { index: n, reason: "degree must be positive".into() });
            }
            if n > 0 && !(deg % &degrees[n - 1]).is_zero() {
                return Err(Error::BadSequence {
                    index: n,
                    reason: format!("deg_{} = {} does not divide deg_{n} = {deg}", n - 1, degrees[n - 1]),
                });
            }
            if !within_aut_bound(deg, &fact, &internal) {
                return Err(Error::BadSequence {
                    index: n,
                    reason: format!("deg_{n} = {deg} exceeds {base_degree}!^{internal}"),
                });
            }
            internal += &level_width;
            level_width *= &d;
        }
        Ok(DegreeSequence { base_degree, degrees })
    }

    pub fn base_degree(&self) -> u32 {
        self.base_degree
    }

    pub fn degrees(&self) -> &[BigUint] {
        &self.degrees
    }

    /// Largest level index `N`.
    pub fn horizon(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degree(&self, n: usize) -> &BigUint {
        &self.degrees[n]
    }

    /// `a_n` as an exact symbolic value.
    pub fn a(&self, n: usize) -> LogRatio {
        let d = self.base_degree;
        let scale = num_traits::pow(BigUint::from(d), n);
        LogRatio::new(
            BigRational::new((d - 1).into(), scale.into()),
            self.degrees[n].clone(),
            factorial(d),
        )
    }
}

/// `deg <= fact^exp`, without materializing the power when the bit-length
/// already decides it.
fn within_aut_bound(deg: &BigUint, fact: &BigUint, exp: &BigUint) -> bool {
    let Some(e) = logs::to_u64(exp) else { return true };
    // fact >= 2, so fact^e >= 2^e
    if deg.bits() <= e {
        return true;
    }
    let fact_bits = fact.bits();
    if deg.bits() > e.saturating_mul(fact_bits).saturating_add(1) {
        return false;
    }
    *deg <= num_traits::pow(fact.clone(), e as usize)
}

/// `C_D = ln(D!)/(D - 1)`, the constant relating estimates of a map and of
/// its iterates.
pub fn iterate_constant(big_d: u64) -> ScaledLog {
    assert!(big_d >= 2);
    let fact: BigUint = (1..=big_d).map(BigUint::from).product();
    ScaledLog::new(BigRational::new(1.into(), (big_d - 1).into()), fact)
}

/// Estimator output for one degree sequence.
#[derive(Debug, Clone, Serialize)]
pub struct DimEstimate {
    pub base_degree: u32,
    pub a_values: Vec<LogRatio>,
    /// `min_{j >= n} a_j`, as an index into `a_values`.
    pub running_min_tail: Vec<usize>,
    /// `max_{j >= n} a_j`, as an index into `a_values`.
    pub running_max_tail: Vec<usize>,
    pub digits: usize,
}

impl DimEstimate {
    pub fn last(&self) -> &LogRatio {
        self.a_values.last().expect("sequence is non-empty")
    }

    /// Decimal expansions of every `a_n`.
    pub fn decimals(&self) -> Vec<String> {
        self.a_values.iter().map(|a| a.to_decimal(self.digits)).collect()
    }

    /// `a_n` as exact rationals where they are rational.
    pub fn exact_values(&self) -> Vec<Option<BigRational>> {
        self.a_values.iter().map(LogRatio::exact).collect()
    }

    /// Min and max of `a_n` over the last `window` indices.
    pub fn tail_window(&self, window: usize) -> (&LogRatio, &LogRatio) {
        let start = self.a_values.len().saturating_sub(window.max(1));
        let tail = &self.a_values[start..];
        let min = tail.iter().min_by(|a, b| a.cmp_same_base(b)).expect("non-empty tail");
        let max = tail.iter().max_by(|a, b| a.cmp_same_base(b)).expect("non-empty tail");
        (min, max)
    }
}

/// Computes every `a_n` together with the suffix envelopes.
pub fn estimate(seq: &DegreeSequence, digits: usize) -> DimEstimate {
    let a_values: Vec<LogRatio> = (0..=seq.horizon()).map(|n| seq.a(n)).collect();
    let len = a_values.len();
    let mut running_min_tail = vec![len - 1; len];
    let mut running_max_tail = vec![len - 1; len];
    for n in (0..len - 1).rev() {
        let (mn, mx) = (running_min_tail[n + 1], running_max_tail[n + 1]);
        running_min_tail[n] = if a_values[n].cmp_same_base(&a_values[mn]) == Ordering::Less { n } else { mn };
        running_max_tail[n] = if a_values[n].cmp_same_base(&a_values[mx]) == Ordering::Greater { n } else { mx };
    }
    DimEstimate { base_degree: seq.base_degree, a_values, running_min_tail, running_max_tail, digits }
}

/// One extra column in a degree table.
#[derive(Debug, Clone, Serialize)]
pub struct TableColumn {
    pub name: String,
    pub values: Vec<String>,
}

/// A degree table ready for CSV or JSON emission.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeTable {
    pub rows: Vec<DegreeRow>,
    #[serde(skip)]
    pub columns: Vec<TableColumn>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRow {
    pub n: usize,
    pub deg_n: String,
    pub a_n: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_n_exact: Option<String>,
    #[serde(flatten)]
    pub extra: std::collections::BTreeMap<String, String>,
}

impl DegreeTable {
    pub fn new(seq: &DegreeSequence, est: &DimEstimate, columns: Vec<TableColumn>) -> Self {
        let dec = est.decimals();
        let rows = (0..=seq.horizon())
            .map(|n| DegreeRow {
                n,
                deg_n: seq.degree(n).to_string(),
                a_n: dec[n].clone(),
                a_n_exact: est.a_values[n].exact().map(|r| r.to_string()),
                extra: columns
                    .iter()
                    .filter_map(|c| c.values.get(n).map(|v| (c.name.clone(), v.clone())))
                    .collect(),
            })
            .collect();
        DegreeTable { rows, columns }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,deg_n,a_n");
        for c in &self.columns {
            let _ = write!(out, ",{}", c.name);
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{},{},{}", r.n, r.deg_n, r.a_n);
            for c in &self.columns {
                let _ = write!(out, ",{}", r.extra.get(&c.name).map_or("", String::as_str));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("table serialization cannot fail")
    }
}

/// `gcd`-free check that `a` divides `b`.
pub fn divides(a: &BigUint, b: &BigUint) -> bool {
    !a.is_zero() && b.is_multiple_of(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(d: u32, v: &[u64]) -> DegreeSequence {
        DegreeSequence::new(d, v.iter().map(|&x| BigUint::from(x)).collect()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn full_image_values() {
        let est = estimate(&seq(2, &[1, 2, 8, 128]), DEFAULT_DIGITS);
        let exact: Vec<_> = est.exact_values().into_iter().map(Option::unwrap).collect();
        assert_eq!(exact, vec![q(0, 1), q(1, 2), q(3, 4), q(7, 8)]);
        assert_eq!(est.decimals()[3], format!("0.875{}", "0".repeat(47)));
    }

    #[test]
    fn trivial_sequence_is_zero() {
        let est = estimate(&seq(2, &[1, 1, 1, 1]), 10);
        assert!(est.a_values.iter().all(LogRatio::is_zero));
    }

    #[test]
    fn rejects_invariant_violations() {
        let bad = |v: &[u64]| DegreeSequence::new(2, v.iter().map(|&x| BigUint::from(x)).collect());
        assert!(matches!(bad(&[2, 2]), Err(Error::BadSequence { index: 0, .. })));
        assert!(matches!(bad(&[1, 2, 7]), Err(Error::BadSequence { index: 2, .. })));
        assert!(matches!(bad(&[1, 4]), Err(Error::BadSequence { index: 1, .. })));
        assert!(matches!(bad(&[1, 2, 16]), Err(Error::BadSequence { index: 2, .. })));
        assert!(bad(&[]).is_err());
    }

    #[test]
    fn envelopes_and_windows() {
        let est = estimate(&seq(2, &[1, 2, 4, 16]), 20);
        // a = [0, 1/2, 1/2, 1/2]
        assert_eq!(est.running_min_tail[0], 0);
        assert_eq!(est.a_values[est.running_max_tail[0]].exact(), Some(q(1, 2)));
        let (lo, hi) = est.tail_window(2);
        assert_eq!(lo.exact(), Some(q(1, 2)));
        assert_eq!(hi.exact(), Some(q(1, 2)));
    }

    #[test]
    fn irrational_estimates_print_digits() {
        // d = 3: a_1 = 2/ln 6 · ln 3 / 3
        let est = estimate(&seq(3, &[1, 3]), 12);
        assert_eq!(est.a_values[1].exact(), None);
        assert_eq!(est.decimals()[1], "0.408764795176");
    }

    #[test]
    fn csv_emission() {
        let s = seq(2, &[1, 2, 8]);
        let est = estimate(&s, 3);
        let t = DegreeTable::new(
            &s,
            &est,
            vec![TableColumn { name: "bound".into(), values: vec!["1".into(), "1".into(), "1".into()] }],
        );
        assert_eq!(t.to_csv(), "n,deg_n,a_n,bound\n0,1,0.000,1\n1,2,0.500,1\n2,8,0.750,1\n");
        assert!(t.to_json().contains(r#""a_n_exact":"3/4""#));
    }
}
