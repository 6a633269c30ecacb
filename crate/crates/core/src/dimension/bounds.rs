//! Finite-level bounds and identities on degree sequences.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::logs::{factorial, LogRatio};
use super::{iterate_constant, DegreeSequence};
use crate::aut::aut_order_formula;
use crate::error::{Error, Result};

/// Degrees of the full automorphism groups `|Aut(T_n^com)|` for `n <= N`.
pub fn full_image_sequence(d: u32, horizon: u32) -> Result<DegreeSequence> {
    let degrees = (0..=horizon)
        .map(|n| aut_order_formula(d, n))
        .collect::<Result<Vec<_>>>()?;
    DegreeSequence::new(d, degrees)
}

/// Growth bound for a tree that has collapsed at level `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseBound {
    /// `d!^(R(d^k - 1)/(d - 1)) · |Aut(T_m)|`, bounding `deg_{m+k}`.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub bound: BigUint,
    /// `R/d^m`, the resulting bound on the upper dimension.
    #[serde(serialize_with = "crate::report::rational_string")]
    pub asymptotic: BigRational,
}

/// Bound on `|Aut(T_{m+k})|` when level `m` holds only `R = level_size < d^m`
/// vertices: each later level has at most `R·d^j` vertices, and each kernel of
/// restriction permutes at most `d` children per vertex.
pub fn collapse_bound(d: u32, m: u32, level_size: &BigUint, aut_tm: &BigUint, k: u32) -> Result<CollapseBound> {
    if d < 2 {
        return Err(Error::invalid("arity must be at least 2"));
    }
    let width = num_traits::pow(BigUint::from(d), m as usize);
    if *level_size >= width {
        return Err(Error::invalid(format!(
            "level {m} has {level_size} >= {width} vertices: no collapse"
        )));
    }
    let geometric = (num_traits::pow(BigUint::from(d), k as usize) - 1u32) / (d - 1);
    let exp = (level_size * geometric)
        .to_usize()
        .ok_or_else(|| Error::too_large("collapse bound", "exponent overflow", usize::MAX))?;
    Ok(CollapseBound {
        bound: num_traits::pow(factorial(d), exp) * aut_tm,
        asymptotic: BigRational::new(level_size.clone().into(), width.into()),
    })
}

/// `1 - d^(-m)`.
pub fn periodic_bound(d: u32, m: u32) -> Result<BigRational> {
    if d < 2 || m < 1 {
        return Err(Error::invalid("periodic bound needs d >= 2 and m >= 1"));
    }
    let w: BigUint = num_traits::pow(BigUint::from(d), m as usize);
    Ok(BigRational::one() - BigRational::new(1.into(), w.into()))
}

/// Compositum inequality instance: `lhs <= Π factors`.
pub fn compositum_check(lhs: &BigUint, factors: &[BigUint]) -> bool {
    *lhs <= factors.iter().product::<BigUint>()
}

/// The degree sequence of the `m`-th iterate: `(deg_{mk})_k` over base
/// degree `d^m`. With `count = Some(K)`, requires indices up to `m·K`.
pub fn rescale_iterate(seq: &DegreeSequence, m: u32, count: Option<usize>) -> Result<DegreeSequence> {
    if m == 0 {
        return Err(Error::invalid("iterate index must be at least 1"));
    }
    let m = m as usize;
    let available = seq.horizon() / m;
    let k_max = match count {
        Some(k) if k > available => {
            return Err(Error::invalid(format!(
                "need deg up to index {}, sequence stops at {}",
                k * m,
                seq.horizon()
            )))
        }
        Some(k) => k,
        None => available,
    };
    let base = seq
        .base_degree()
        .checked_pow(m as u32)
        .ok_or_else(|| Error::too_large("iterate base degree", "overflow", u32::MAX))?;
    let degrees = (0..=k_max).map(|k| seq.degree(m * k).clone()).collect();
    DegreeSequence::new(base, degrees)
}

/// Checks `C_{d^m} · a'_k = C_d · a_{mk}` exactly for every available `k`,
/// where `a'` are the estimates of the rescaled sequence.
pub fn rescale_identity_holds(seq: &DegreeSequence, m: u32) -> Result<bool> {
    let rescaled = rescale_iterate(seq, m, None)?;
    let c_small = iterate_constant(seq.base_degree() as u64);
    let c_big = iterate_constant(rescaled.base_degree() as u64);
    Ok((0..=rescaled.horizon()).all(|k| {
        let lhs = rescaled.a(k).times_log_of_base(&c_big);
        let rhs = seq.a(m as usize * k).times_log_of_base(&c_small);
        matches!((lhs, rhs), (Some(l), Some(r)) if l.exact_eq(&r))
    }))
}

/// Outcome of comparing two maps that share an iterate `f^m = g^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharedIterateReport {
    pub levels_compared: usize,
    pub degrees_agree: bool,
    pub identities_hold: bool,
    pub f_zero: bool,
    pub g_zero: bool,
    pub zero_iff_zero: bool,
}

/// For degree sequences of `f` (degree `d`) and `g` (degree `e`) with
/// `d^m = e^n`, checks `deg_f(mk) = deg_g(nk)`, the exact identity
/// `C_{d^m}·a_{f^m}(k) = C_{e^n}·a_{g^n}(k)`, and that `a_f` vanishes on
/// the compared range iff `a_g` does.
pub fn shared_iterate_check(f: &DegreeSequence, m: u32, g: &DegreeSequence, n: u32) -> Result<SharedIterateReport> {
    let fm = rescale_iterate(f, m, None)?;
    let gn = rescale_iterate(g, n, None)?;
    if fm.base_degree() != gn.base_degree() {
        return Err(Error::invalid(format!(
            "iterates have degrees {} and {}",
            fm.base_degree(),
            gn.base_degree()
        )));
    }
    let levels = fm.horizon().min(gn.horizon());
    let degrees_agree = (0..=levels).all(|k| fm.degree(k) == gn.degree(k));
    let c = iterate_constant(fm.base_degree() as u64);
    let cf = iterate_constant(f.base_degree() as u64);
    let cg = iterate_constant(g.base_degree() as u64);
    let identities_hold = (0..=levels).all(|k| {
        // both sides equal ln(deg)/D^k; route each through its own constant
        let a = fm.a(k).times_log_of_base(&c);
        let b = gn.a(k).times_log_of_base(&c);
        let via_f = f.a(m as usize * k).times_log_of_base(&cf);
        let via_g = g.a(n as usize * k).times_log_of_base(&cg);
        match (a, b, via_f, via_g) {
            (Some(a), Some(b), Some(x), Some(y)) => a.exact_eq(&b) && a.exact_eq(&x) && b.exact_eq(&y),
            _ => false,
        }
    });
    let f_zero = (0..=levels * m as usize).all(|j| f.a(j).is_zero());
    let g_zero = (0..=levels * n as usize).all(|j| g.a(j).is_zero());
    Ok(SharedIterateReport {
        levels_compared: levels + 1,
        degrees_agree,
        identities_hold,
        f_zero,
        g_zero,
        zero_iff_zero: f_zero == g_zero,
    })
}

/// `(d-1)/ln(d!) · ln(M)/(d^m - 1)`: the dimension bound along an
/// arithmetic progression of levels when every `m`-step multiplies the
/// degree by at most `M^(d^n)`.
pub fn specialization_tail_bound(d: u32, m: u32, big_m: &BigUint) -> Result<LogRatio> {
    if d < 2 || m < 1 || big_m.is_zero() {
        return Err(Error::invalid("need d >= 2, m >= 1, M >= 1"));
    }
    let denom: BigUint = num_traits::pow(BigUint::from(d), m as usize) - 1u32;
    Ok(LogRatio::new(
        BigRational::new((d - 1).into(), denom.into()),
        big_m.clone(),
        factorial(d),
    ))
}

/// `deg_{n+m} / deg_n <= M^(d^n)` for every applicable `n`.
pub fn iterative_degree_check(seq: &DegreeSequence, m: u32, big_m: &BigUint) -> bool {
    let m = m as usize;
    let d = seq.base_degree() as usize;
    (0..seq.horizon().saturating_sub(m - 1))
        .filter(|n| n + m <= seq.horizon())
        .all(|n| {
            let ratio = seq.degree(n + m) / seq.degree(n);
            let exp = d.pow(n as u32);
            if big_m.is_one() || big_m.is_zero() {
                return ratio <= *big_m;
            }
            // M^(d^n) has at least d^n bits when M >= 2
            if ratio.bits() <= exp as u64 {
                return true;
            }
            ratio <= num_traits::pow(big_m.clone(), exp)
        })
}

/// `d^(5n)`.
pub fn genus_one_bound(d: u32, n: u32) -> BigUint {
    num_traits::pow(BigUint::from(d), 5 * n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn seq(d: u32, v: &[u64]) -> DegreeSequence {
        DegreeSequence::new(d, v.iter().map(|&x| big(x)).collect()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn full_image() {
        assert_eq!(full_image_sequence(2, 3).unwrap(), seq(2, &[1, 2, 8, 128]));
        assert_eq!(full_image_sequence(3, 2).unwrap(), seq(3, &[1, 6, 1296]));
        assert_eq!(full_image_sequence(2, 0).unwrap(), seq(2, &[1]));
        let s = full_image_sequence(3, 3).unwrap();
        for n in 0..=3u32 {
            let want = q(3i64.pow(n) - 1, 3i64.pow(n));
            assert_eq!(s.a(n as usize).exact(), Some(want));
        }
    }

    #[test]
    fn collapse() {
        let b = collapse_bound(2, 1, &big(1), &big(1), 2).unwrap();
        assert_eq!(b.bound, big(8));
        assert_eq!(b.asymptotic, q(1, 2));
        let b = collapse_bound(2, 2, &big(3), &big(2), 1).unwrap();
        assert_eq!(b.asymptotic, q(3, 4));
        assert_eq!(b.bound, big(16));
        assert!(collapse_bound(2, 1, &big(2), &big(2), 1).is_err());
    }

    #[test]
    fn periodic() {
        assert_eq!(periodic_bound(2, 1).unwrap(), q(1, 2));
        assert_eq!(periodic_bound(2, 2).unwrap(), q(3, 4));
        assert_eq!(periodic_bound(3, 1).unwrap(), q(2, 3));
        assert!(periodic_bound(2, 0).is_err());
    }

    #[test]
    fn compositum() {
        assert!(compositum_check(&big(8), &[big(2), big(4)]));
        assert!(!compositum_check(&big(9), &[big(2), big(4)]));
    }

    #[test]
    fn rescaling() {
        let s = seq(2, &[1, 2, 8, 128, 32768]);
        assert_eq!(rescale_iterate(&s, 1, None).unwrap(), s);
        let r = rescale_iterate(&s, 2, None).unwrap();
        assert_eq!(r, seq(4, &[1, 8, 32768]));
        assert!(rescale_identity_holds(&s, 2).unwrap());
        assert!(rescale_iterate(&s, 2, Some(3)).is_err());
        assert!(rescale_iterate(&s, 0, None).is_err());
        // C_4 a'_1 = C_2 a_2 = ln(8)/4
        let lhs = r.a(1).times_log_of_base(&iterate_constant(4)).unwrap();
        let want = crate::dimension::ScaledLog::new(q(1, 4), big(8));
        assert!(lhs.exact_eq(&want));
    }

    #[test]
    fn specialization() {
        assert!(specialization_tail_bound(2, 1, &big(1)).unwrap().is_zero());
        assert_eq!(specialization_tail_bound(2, 1, &big(2)).unwrap().exact(), Some(q(1, 1)));
        assert_eq!(specialization_tail_bound(2, 2, &big(4)).unwrap().exact(), Some(q(2, 3)));
        assert_eq!(specialization_tail_bound(2, 2, &big(8)).unwrap().exact(), Some(q(1, 1)));
        assert_eq!(specialization_tail_bound(3, 1, &big(6)).unwrap().exact(), Some(q(1, 1)));
        let below = specialization_tail_bound(3, 1, &big(5)).unwrap();
        assert_eq!(below.cmp_rational(&q(1, 1)), std::cmp::Ordering::Less);
    }

    #[test]
    fn iterative_degrees() {
        assert!(iterative_degree_check(&full_image_sequence(2, 4).unwrap(), 1, &big(2)));
        assert!(!iterative_degree_check(&seq(2, &[1, 2, 8]), 1, &big(1)));
        assert!(iterative_degree_check(&seq(2, &[1, 1, 1]), 1, &big(1)));
        assert!(iterative_degree_check(&seq(2, &[1, 2, 8]), 2, &big(8)));
        assert!(!iterative_degree_check(&seq(2, &[1, 2, 8]), 2, &big(7)));
    }

    #[test]
    fn genus_one() {
        assert_eq!(genus_one_bound(2, 0), big(1));
        assert_eq!(genus_one_bound(2, 1), big(32));
        assert_eq!(genus_one_bound(3, 2), big(59049));
    }

    #[test]
    fn shared_iterates() {
        // x^2 and x^4 share the iterate x^4; sequences built so that
        // deg_f(2k) = deg_g(k).
        let f = seq(2, &[1, 2, 8, 16, 64]);
        let g = seq(4, &[1, 8, 64]);
        let r = shared_iterate_check(&f, 2, &g, 1).unwrap();
        assert!(r.degrees_agree && r.identities_hold && r.zero_iff_zero);
        assert!(!r.f_zero);

        let f0 = seq(2, &[1, 1, 1, 1, 1]);
        let g0 = seq(4, &[1, 1, 1]);
        let r = shared_iterate_check(&f0, 2, &g0, 1).unwrap();
        assert!(r.f_zero && r.g_zero && r.zero_iff_zero);
    }
}
