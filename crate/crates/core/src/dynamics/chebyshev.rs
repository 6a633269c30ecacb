use serde::Serialize;

use super::poly::Poly;

/// The normalized Chebyshev polynomial `T_d`, with `T_d(x + 1/x) = x^d + x^(-d)`.
pub fn chebyshev(d: usize) -> Poly {
    let mut prev = Poly::from_ints([2]);
    if d == 0 {
        return prev;
    }
    let mut cur = Poly::x();
    for _ in 1..d {
        let next = &(&Poly::x() * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `T_d(x + 1/x) = x^d + x^(-d)`, cleared of denominators:
/// `sum_i t_i (x^2 + 1)^i x^(d-i) = x^(2d) + 1`.
pub fn laurent_identity_holds(d: usize) -> bool {
    let t = chebyshev(d);
    let x2p1 = Poly::from_ints([1, 0, 1]);
    let lhs = t.eval_form(d, &x2p1, &Poly::x());
    let mut rhs = Poly::monomial(2 * d);
    rhs = &rhs + &Poly::one();
    lhs == rhs
}

/// `T_d(-x) = (-1)^d T_d(x)`.
pub fn parity_holds(d: usize) -> bool {
    let t = chebyshev(d);
    let reflected = t.compose(&Poly::from_ints([0, -1]));
    if d % 2 == 0 {
        reflected == t
    } else {
        reflected == -&t
    }
}

/// `T_(de) = T_d ∘ T_e`.
pub fn nesting_holds(d: usize, e: usize) -> bool {
    chebyshev(d).compose(&chebyshev(e)) == chebyshev(d * e)
}

/// `(-T_d) ∘ (-T_d) = T_(d^2)`.
pub fn sign_identity_holds(d: usize) -> bool {
    let f = -&chebyshev(d);
    f.compose(&f) == chebyshev(d * d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChebyshevReport {
    pub dmax: usize,
    pub laurent: usize,
    pub parity: usize,
    pub nesting: usize,
    pub sign: usize,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ChebyshevReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, for every admissible index up to `dmax`: the Laurent
/// characterization and parity for `0 <= d <= dmax`, nesting for
/// `1 <= d, e` with `de <= dmax`, and `(-T_d)^2 = T_(d^2)` for odd
/// `3 <= d <= dmax`.
pub fn chebyshev_identities(dmax: usize) -> ChebyshevReport {
    let mut failures = Vec::new();
    let mut tally = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
        1
    };
    let laurent = (0..=dmax).map(|d| tally(laurent_identity_holds(d), format!("laurent d={d}"))).sum();
    let parity = (0..=dmax).map(|d| tally(parity_holds(d), format!("parity d={d}"))).sum();
    let mut nesting = 0;
    for d in 1..=dmax {
        for e in 1..=dmax / d {
            nesting += tally(nesting_holds(d, e), format!("nesting d={d} e={e}"));
        }
    }
    let sign = (3..=dmax)
        .step_by(2)
        .map(|d| tally(sign_identity_holds(d), format!("sign d={d}")))
        .sum();
    ChebyshevReport {
        dmax,
        laurent,
        parity,
        nesting,
        sign,
        checked: laurent + parity + nesting + sign,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_chebyshev() {
        assert_eq!(chebyshev(0), Poly::from_ints([2]));
        assert_eq!(chebyshev(1), Poly::x());
        assert_eq!(chebyshev(2), Poly::from_ints([-2, 0, 1]));
        assert_eq!(chebyshev(3), Poly::from_ints([0, -3, 0, 1]));
        assert_eq!(chebyshev(4), Poly::from_ints([2, 0, -4, 0, 1]));
    }

    #[test]
    fn identities() {
        assert!(nesting_holds(2, 3));
        assert!(sign_identity_holds(3));
        assert!(parity_holds(4));
        assert!(laurent_identity_holds(5));
        assert!(nesting_holds(2, 2));
        // the sign trick needs d odd
        assert!(!sign_identity_holds(2));
    }

    #[test]
    fn full_report() {
        let r = chebyshev_identities(12);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!((r.laurent, r.parity, r.nesting, r.sign), (13, 13, 35, 5));
        assert_eq!(r.checked, 66);
    }
}
