//! Finite-level checks of the periodic base point argument and the
//! pull-back degree inequality.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{apply, galois_degree_sequence, grow, TPoint, TowerField, TowerOptions};
use crate::dynamics::{is_exceptional, is_periodic, ProjPoint, RationalMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub m: usize,
    pub depth: usize,
    /// Set when the backward orbit is the cycle itself.
    pub vacuous: Option<String>,
    /// Non-periodic points tested, and how many were located.
    pub checked: usize,
    pub located: usize,
    pub failures: Vec<String>,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub full_degree: BigUint,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub omitted_degree: BigUint,
}

impl ClaimReport {
    pub fn degrees_match(&self) -> bool {
        self.full_degree == self.omitted_degree
    }

    pub fn passed(&self) -> bool {
        self.vacuous.is_some() || (self.failures.is_empty() && self.checked == self.located && self.degrees_match())
    }
}

/// For `α` of exact period `m`, checks that every non-periodic point of
/// `f^(-k)(α)`, `k <= depth - m`, lies on the forward orbit of a preimage of
/// some `β ∈ f^(-m)(α)` other than `α`, and that the tower generated
/// without the branch above `α` at level `m` has the full degree at `depth`.
pub fn periodic_claim_check(
    f: &RationalMap,
    alpha: &ProjPoint,
    m: usize,
    depth: usize,
    opts: &TowerOptions,
) -> Result<ClaimReport> {
    if m == 0 || depth < m {
        return Err(Error::invalid(format!("need 1 <= m <= N, got m = {m}, N = {depth}")));
    }
    if is_periodic(f, alpha, m, opts.bit_cap)? != Some(m) {
        return Err(Error::invalid(format!("{alpha} is not periodic of exact period {m}")));
    }
    let mut report = ClaimReport {
        m,
        depth,
        vacuous: None,
        checked: 0,
        located: 0,
        failures: Vec::new(),
        full_degree: BigUint::one(),
        omitted_degree: BigUint::one(),
    };
    if is_exceptional(f, alpha, opts.bit_cap)? {
        report.vacuous = Some("backward orbit equals the cycle".into());
        return Ok(report);
    }
    let run = galois_degree_sequence(f, alpha, depth, opts)?;
    if let Some(why) = &run.truncated {
        return Err(Error::Resource(why.clone()));
    }
    let field = &run.field;
    let a = TPoint::from(alpha);
    let cycle: Vec<TPoint> = std::iter::successors(Some(a.clone()), |p| Some(apply(f, field, p)))
        .take(m)
        .collect();
    let alpha_slot = run.points[m]
        .iter()
        .position(|p| *p == a)
        .ok_or_else(|| Error::invalid("α is missing from its own level-m preimages"))?;

    for k in 0..=depth - m {
        // level m + k vertices whose level-m ancestor is not α
        let sources: Vec<&TPoint> = (0..run.points[m + k].len())
            .filter(|&i| ancestor(&run, m + k, i, m) != alpha_slot)
            .map(|i| &run.points[m + k][i])
            .collect();
        for (j, beta) in run.points[k].iter().enumerate() {
            if cycle.contains(beta) {
                continue;
            }
            report.checked += 1;
            let found = sources.iter().any(|g| {
                std::iter::successors(Some((*g).clone()), |p| Some(apply(f, field, p)))
                    .take(m + k + 1)
                    .any(|p| p == *beta)
            });
            if found {
                report.located += 1;
            } else {
                report.failures.push(format!("level {k} vertex {j} ({beta}) not reached"));
            }
        }
    }

    report.full_degree = run.degrees[depth].clone();
    let mut restricted = TowerField::rationals();
    for r in &opts.base_radicands {
        restricted.adjoin_sqrt(&super::Elem::rational(r.clone()))?;
    }
    let base = restricted.height();
    let upper = grow(f, &mut restricted, vec![a], m, opts)?;
    let mut start = upper.points[m].clone();
    start.retain(|p| *p != TPoint::from(alpha));
    let lower = grow(f, &mut restricted, start, depth - m, opts)?;
    if let Some(why) = upper.truncated.or(lower.truncated) {
        return Err(Error::Resource(why));
    }
    report.omitted_degree = BigUint::one() << (restricted.height() - base);
    Ok(report)
}

fn ancestor(run: &super::TowerRun, level: usize, mut index: usize, target: usize) -> usize {
    for k in (target + 1..=level).rev() {
        index = run.tree.level(k)[index].parent.expect("non-root vertex");
    }
    index
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub n: usize,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub degree: BigUint,
    /// `[K_1 : K]`.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub first_level: BigUint,
    /// `[K_1(f^(-(n-1))(β)) : K_1]` for each `β ∈ f^(-1)(α)`.
    #[serde(serialize_with = "crate::report::biguint_vec_string")]
    pub branches: Vec<BigUint>,
    pub holds: bool,
}

/// `[K_n : K] <= [K_1 : K] · prod_β [K_1(f^(-(n-1))(β)) : K_1]`, with the
/// branch degrees from fresh towers over `K_1`.
pub fn pullback_check(f: &RationalMap, alpha: &ProjPoint, n: usize, opts: &TowerOptions) -> Result<PullbackReport> {
    if n == 0 {
        return Err(Error::invalid("pull-back needs n >= 1"));
    }
    let run = galois_degree_sequence(f, alpha, n, opts)?;
    if let Some(why) = &run.truncated {
        return Err(Error::Resource(why.clone()));
    }
    let first = galois_degree_sequence(f, alpha, 1, opts)?;
    let mut branches = Vec::new();
    for beta in &first.points[1] {
        let mut k1 = first.field.clone();
        let h = k1.height();
        let g = grow(f, &mut k1, vec![beta.clone()], n - 1, opts)?;
        if let Some(why) = g.truncated {
            return Err(Error::Resource(why));
        }
        branches.push(BigUint::one() << (k1.height() - h));
    }
    let degree = run.degrees[n].clone();
    let first_level = first.degrees[1].clone();
    let bound = branches.iter().fold(first_level.clone(), |acc, b| acc * b);
    Ok(PullbackReport { n, holds: degree <= bound, degree, first_level, branches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{parse_map, parse_point};

    fn claim(f: &str, a: &str, m: usize, n: usize) -> ClaimReport {
        periodic_claim_check(&parse_map(f).unwrap(), &parse_point(a).unwrap(), m, n, &TowerOptions::default()).unwrap()
    }

    #[test]
    fn basilica_claim() {
        let r = claim("x^2-1", "0", 2, 4);
        assert!(r.vacuous.is_none());
        assert!(r.checked > 0);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn chebyshev_claim() {
        let r = claim("x^2-2", "2", 1, 3);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn exceptional_is_vacuous() {
        let r = claim("x^2", "0", 1, 3);
        assert_eq!(r.vacuous.as_deref(), Some("backward orbit equals the cycle"));
        assert!(r.passed());
    }

    #[test]
    fn wrong_period_rejected() {
        let f = parse_map("x^2-1").unwrap();
        assert!(periodic_claim_check(&f, &ProjPoint::int(0), 1, 3, &TowerOptions::default()).is_err());
        assert!(periodic_claim_check(&f, &ProjPoint::int(2), 2, 3, &TowerOptions::default()).is_err());
    }

    #[test]
    fn pullback_corpus() {
        for (f, a) in [("x^2-1", "0"), ("x^2+1", "0"), ("x^2", "2"), ("x^2-2", "3")] {
            let r = pullback_check(&parse_map(f).unwrap(), &parse_point(a).unwrap(), 3, &TowerOptions::default()).unwrap();
            assert!(r.holds, "{f} at {a}: {r:?}");
        }
    }
}
