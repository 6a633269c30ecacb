//! Forward orbits of points and of the critical locus.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::map::{ProjPoint, RationalMap};
use super::poly::{gcd, Poly};
use crate::error::{Error, Result};

/// Forward orbits `f^k(γ)`, `k <= depth`, of every critical point `γ`.
///
/// Finite critical points are tracked all at once as a pair of residues
/// `(X_k, Y_k)` modulo the radical `w` of the Wronskian, so that
/// `f^k(γ) = (X_k(γ) : Y_k(γ))` at every root `γ` of `w`. Membership
/// questions then reduce to gcds with `w`, with no root isolation.
#[derive(Clone, Debug)]
pub struct CriticalOrbits {
    w: Poly,
    pairs: Vec<(Poly, Poly)>,
    infinity: Vec<ProjPoint>,
}

impl CriticalOrbits {
    pub fn new(f: &RationalMap, depth: usize, bit_cap: u64) -> Result<Self> {
        let cp = f.critical_points()?;
        let w = cp.wronskian.radical();
        let mut pairs = Vec::new();
        if !w.is_constant() {
            pairs.push((Poly::x().rem(&w), Poly::one()));
            for k in 1..=depth {
                let (x, y) = &pairs[k - 1];
                let d = f.degree();
                let (nx, ny) = integral_pair(
                    &f.numerator().eval_form(d, x, y).rem(&w),
                    &f.denominator().eval_form(d, x, y).rem(&w),
                );
                let bits = nx.height_bits().max(ny.height_bits());
                if bits > bit_cap {
                    return Err(Error::Resource(format!("critical orbit step {k} needs {bits}-bit coefficients")));
                }
                pairs.push((nx, ny));
            }
        }
        let mut infinity = Vec::new();
        if cp.infinity_multiplicity > 0 {
            infinity.push(ProjPoint::Infinity);
            for k in 1..=depth {
                let next = f.eval(&infinity[k - 1]);
                if next.height_bits() > bit_cap {
                    return Err(Error::Resource(format!("orbit of infinity exceeds the height cap at step {k}")));
                }
                infinity.push(next);
            }
        }
        Ok(CriticalOrbits { w, pairs, infinity })
    }

    fn depth(&self) -> usize {
        self.pairs.len().max(self.infinity.len()).saturating_sub(1)
    }

    /// Some critical point lands on `alpha` after exactly `k` steps.
    pub fn hits_at(&self, alpha: &ProjPoint, k: usize) -> bool {
        if self.infinity.get(k) == Some(alpha) {
            return true;
        }
        let Some((x, y)) = self.pairs.get(k) else { return false };
        let r = match alpha {
            ProjPoint::Finite(a) => x - &y.scale(a),
            ProjPoint::Infinity => y.clone(),
        };
        !gcd(&self.w, &r).is_constant()
    }

    /// Smallest `m` in `1..=max_m` with `alpha = f^m(γ)` for a critical `γ`.
    pub fn first_hit(&self, alpha: &ProjPoint, max_m: usize) -> Option<usize> {
        (1..=max_m.min(self.depth())).find(|&k| self.hits_at(alpha, k))
    }

    /// Some root of the finite polynomial `r` equals `f^k(γ)` for some
    /// critical `γ` and `1 <= k <= max_m`.
    pub fn meets_roots_of(&self, r: &Poly, max_m: usize) -> bool {
        let deg = r.deg0();
        (1..=max_m.min(self.depth())).any(|k| {
            if let Some(ProjPoint::Finite(v)) = self.infinity.get(k) {
                if r.eval(v).is_zero() {
                    return true;
                }
            }
            self.pairs.get(k).is_some_and(|(x, y)| {
                let v = r.eval_form(deg, x, y).rem(&self.w);
                !gcd(&self.w, &v).is_constant()
            })
        })
    }
}

/// Rescales a pair by one rational so both become integral with joint
/// content 1; the ratio at every point is unchanged.
fn integral_pair(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let joint = Poly::new(a.coeffs().iter().chain(b.coeffs()).cloned().collect());
    let prim = joint.primitive();
    let Some(idx) = joint.coeffs().iter().position(|c| !c.is_zero()) else {
        return (a.clone(), b.clone());
    };
    let k = BigRational::from_integer(prim[idx].clone()) / &joint.coeffs()[idx];
    (a.scale(&k), b.scale(&k))
}

/// Smallest `m <= depth` with `alpha = f^m(γ)` for a critical point `γ`.
pub fn is_postcritical(f: &RationalMap, alpha: &ProjPoint, depth: usize, bit_cap: u64) -> Result<Option<usize>> {
    if depth == 0 {
        return Err(Error::invalid("depth must be at least 1"));
    }
    Ok(CriticalOrbits::new(f, depth, bit_cap)?.first_hit(alpha, depth))
}

/// `|x| >= R` forces `|f(x)| >= 2|x|` for a polynomial map `f`.
fn escape_radius(f: &RationalMap) -> Option<BigRational> {
    if !f.is_polynomial() {
        return None;
    }
    let c = f.numerator().coeffs();
    let lead = c.last()?.abs();
    let s: BigRational = c[..c.len() - 1].iter().map(Signed::abs).sum();
    let r = (s + BigRational::from_integer(2.into())) / lead;
    Some(if r < BigRational::one() { BigRational::one() } else { r })
}

/// Minimal `m <= max_period` with `f^m(α) = α`.
///
/// Stops early when the orbit enters a cycle avoiding `α`, or, for
/// polynomial maps, when it leaves the escape disc and so tends to `∞`.
pub fn is_periodic(f: &RationalMap, alpha: &ProjPoint, max_period: usize, bit_cap: u64) -> Result<Option<usize>> {
    if max_period == 0 {
        return Err(Error::invalid("max period must be at least 1"));
    }
    let radius = escape_radius(f);
    let escaped = |x: &ProjPoint| matches!((x, &radius), (ProjPoint::Finite(v), Some(r)) if v.abs() >= *r);
    if escaped(alpha) {
        return Ok(None);
    }
    let mut seen = HashSet::new();
    let mut x = alpha.clone();
    for m in 1..=max_period {
        x = f.eval(&x);
        if x == *alpha {
            return Ok(Some(m));
        }
        if escaped(&x) || !seen.insert(x.clone()) {
            return Ok(None);
        }
        if x.height_bits() > bit_cap {
            return Err(Error::Resource(format!("orbit height exceeds {bit_cap} bits at step {m}")));
        }
    }
    Ok(None)
}

/// `α` is exceptional when `α ∪ f^(-1)(α) ∪ f^(-2)(α)` has at most two
/// points.
pub fn is_exceptional(f: &RationalMap, alpha: &ProjPoint, bit_cap: u64) -> Result<bool> {
    let mut finite = match alpha {
        ProjPoint::Finite(a) => Poly::new(vec![-a.clone(), BigRational::one()]),
        ProjPoint::Infinity => Poly::one(),
    };
    let mut has_inf = alpha.is_infinity();
    for n in 1..=2 {
        let pp = f.preimage_polynomial(n, alpha, bit_cap)?;
        has_inf |= pp.infinity_multiplicity > 0;
        finite = &finite * &pp.poly.radical();
    }
    Ok(finite.radical().deg0() + usize::from(has_inf) <= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::map::DEFAULT_BIT_CAP;

    fn poly_map(c: &[i64]) -> RationalMap {
        RationalMap::polynomial(Poly::from_ints(c.iter().copied()))
    }

    fn pt(v: i64) -> ProjPoint {
        ProjPoint::int(v)
    }

    #[test]
    fn postcritical_examples() {
        let cheb = poly_map(&[-2, 0, 1]);
        assert_eq!(is_postcritical(&cheb, &pt(2), 10, DEFAULT_BIT_CAP).unwrap(), Some(2));
        assert_eq!(is_postcritical(&poly_map(&[-1, 0, 1]), &pt(2), 10, DEFAULT_BIT_CAP).unwrap(), None);
        assert_eq!(is_postcritical(&poly_map(&[0, 0, 1]), &pt(0), 3, DEFAULT_BIT_CAP).unwrap(), Some(1));
        assert_eq!(is_postcritical(&poly_map(&[0, 0, 1]), &ProjPoint::Infinity, 3, DEFAULT_BIT_CAP).unwrap(), Some(1));
    }

    #[test]
    fn irrational_critical_points() {
        // x^3 - 3x: critical points ±1 map to ∓2, then 2 -> 2
        let f = poly_map(&[0, -3, 0, 1]);
        assert_eq!(is_postcritical(&f, &pt(-2), 4, DEFAULT_BIT_CAP).unwrap(), Some(1));
        // x^3 - 6x has critical points ±√2, with images ∓4√2
        let g = poly_map(&[0, -6, 0, 1]);
        let orbits = CriticalOrbits::new(&g, 3, DEFAULT_BIT_CAP).unwrap();
        assert!(orbits.meets_roots_of(&Poly::from_ints([-32, 0, 1]), 1));
        assert!(!orbits.meets_roots_of(&Poly::from_ints([-2, 0, 1]), 1));
        assert_eq!(orbits.first_hit(&pt(0), 3), None);
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(is_periodic(&poly_map(&[-1, 0, 1]), &pt(0), 10, DEFAULT_BIT_CAP).unwrap(), Some(2));
        assert_eq!(is_periodic(&poly_map(&[-2, 0, 1]), &pt(2), 10, DEFAULT_BIT_CAP).unwrap(), Some(1));
        assert_eq!(is_periodic(&poly_map(&[-1, 0, 1]), &pt(2), 20, DEFAULT_BIT_CAP).unwrap(), None);
        // preperiodic: -1/2... 1 -> 0 -> -1 -> 0 never returns to 1
        assert_eq!(is_periodic(&poly_map(&[-1, 0, 1]), &pt(1), 20, DEFAULT_BIT_CAP).unwrap(), None);
        let inv = RationalMap::new(Poly::one(), Poly::from_ints([0, 0, 1])).unwrap();
        assert_eq!(is_periodic(&inv, &ProjPoint::Infinity, 5, DEFAULT_BIT_CAP).unwrap(), Some(2));
    }

    #[test]
    fn exceptional_points() {
        let sq = poly_map(&[0, 0, 1]);
        assert!(is_exceptional(&sq, &pt(0), DEFAULT_BIT_CAP).unwrap());
        assert!(is_exceptional(&sq, &ProjPoint::Infinity, DEFAULT_BIT_CAP).unwrap());
        assert!(!is_exceptional(&sq, &pt(2), DEFAULT_BIT_CAP).unwrap());
        assert!(!is_exceptional(&poly_map(&[-1, 0, 1]), &pt(0), DEFAULT_BIT_CAP).unwrap());
    }
}
