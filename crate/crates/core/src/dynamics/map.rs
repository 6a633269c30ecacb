use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::poly::{gcd, Poly};
use crate::error::{Error, Result};

/// Default cap on coefficient height, in bits, for iterated maps.
pub const DEFAULT_BIT_CAP: u64 = 1 << 20;

/// A point of the rational projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(BigRational),
    Infinity,
}

impl ProjPoint {
    pub fn int(v: i64) -> Self {
        ProjPoint::Finite(BigRational::from_integer(v.into()))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ProjPoint::Finite(a) => Some(a),
            ProjPoint::Infinity => None,
        }
    }

    pub fn height_bits(&self) -> u64 {
        self.finite().map_or(0, |a| a.numer().bits().max(a.denom().bits()))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(a) => write!(f, "{a}"),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `f = N/D` with `gcd(N, D) = 1`, stored with integer coefficients of
/// joint content 1 and `D` having positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
    degree: usize,
}

impl RationalMap {
    /// Reduces `num/den` to lowest terms.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        if num.is_zero() {
            return Ok(Self::normalized(Poly::zero(), Poly::one()));
        }
        let g = gcd(&num, &den);
        if g.is_constant() {
            Ok(Self::normalized(num, den))
        } else {
            Ok(Self::normalized(num.div_exact(&g), den.div_exact(&g)))
        }
    }

    /// Skips the gcd; for pairs already known to be coprime.
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> Self {
        Self::normalized(num, den)
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let denoms = num.coeffs().iter().chain(den.coeffs()).fold(BigInt::one(), |l, a| l.lcm(a.denom()));
        let numers = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .fold(BigInt::zero(), |g, a| g.gcd(&(a.numer() * (&denoms / a.denom()))));
        let mut k = BigRational::new(denoms, numers);
        if den.lead().is_negative() {
            k = -k;
        }
        let (num, den) = (num.scale(&k), den.scale(&k));
        let degree = num.deg0().max(den.deg0());
        RationalMap { num, den, degree }
    }

    pub fn polynomial(p: Poly) -> Self {
        Self::normalized(p, Poly::one())
    }

    pub fn identity() -> Self {
        Self::polynomial(Poly::x())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub(crate) fn require_dynamical(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::invalid(format!("map has degree {}, need at least 2", self.degree)));
        }
        Ok(())
    }

    pub fn height_bits(&self) -> u64 {
        self.num.height_bits().max(self.den.height_bits())
    }

    pub fn eval(&self, p: &ProjPoint) -> ProjPoint {
        let (top, bottom) = match p {
            ProjPoint::Finite(a) => (self.num.eval(a), self.den.eval(a)),
            ProjPoint::Infinity => (self.num.coeff(self.degree), self.den.coeff(self.degree)),
        };
        if bottom.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(top / bottom)
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalMap) -> RationalMap {
        let num = self.num.eval_form(self.degree, &g.num, &g.den);
        let den = self.den.eval_form(self.degree, &g.num, &g.den);
        Self::from_coprime(num, den)
    }

    /// `f^n`, failing once a coefficient exceeds `bit_cap` bits.
    pub fn iterate(&self, n: usize, bit_cap: u64) -> Result<RationalMap> {
        Ok(self.iterates(n, bit_cap)?.pop().expect("f^0 is always present"))
    }

    /// `[f^0, f^1, ..., f^n]`.
    pub fn iterates(&self, n: usize, bit_cap: u64) -> Result<Vec<RationalMap>> {
        let mut out = vec![RationalMap::identity()];
        for k in 1..=n {
            let next = self.compose(&out[k - 1]);
            let bits = next.height_bits();
            if bits > bit_cap {
                return Err(Error::Resource(format!(
                    "iterate {k} has {bits}-bit coefficients, cap is {bit_cap}"
                )));
            }
            out.push(next);
        }
        Ok(out)
    }

    /// `N'D - ND'`, whose roots are the finite critical points.
    pub fn wronskian(&self) -> Poly {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    pub fn critical_points(&self) -> Result<CriticalPoints> {
        self.require_dynamical()?;
        let w = self.wronskian().primitive_poly();
        let total = 2 * self.degree - 2;
        Ok(CriticalPoints { infinity_multiplicity: total - w.deg0(), wronskian: w })
    }

    /// `b·N_n - a·D_n` for `α = (a:b)`; its roots are `f^(-n)(α)`, the
    /// missing degree being the multiplicity of `∞`.
    pub fn preimage_polynomial(&self, n: usize, alpha: &ProjPoint, bit_cap: u64) -> Result<PreimagePoly> {
        self.require_dynamical()?;
        let fnn = self.iterate(n, bit_cap)?;
        Ok(fnn.fiber(alpha))
    }

    /// Polynomial cutting out `self^(-1)(α)` for this map, as computed from
    /// its own numerator and denominator.
    pub fn fiber(&self, alpha: &ProjPoint) -> PreimagePoly {
        let poly = match alpha {
            ProjPoint::Finite(a) => &self.num - &self.den.scale(a),
            ProjPoint::Infinity => self.den.clone(),
        }
        .primitive_poly();
        PreimagePoly { infinity_multiplicity: self.degree - poly.deg0(), poly }
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let c = self.den.coeff(0);
            write!(f, "{}", self.num.scale(&c.recip()))
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Serialize for RationalMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The Wronskian of `f` plus the multiplicity of `∞` as a critical point;
/// the multiplicities add up to `2d - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoints {
    pub wronskian: Poly,
    pub infinity_multiplicity: usize,
}

/// A fiber polynomial with the multiplicity of `∞` as an extra root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimagePoly {
    pub poly: Poly,
    pub infinity_multiplicity: usize,
}

impl PreimagePoly {
    pub fn total_degree(&self) -> usize {
        self.poly.deg0() + self.infinity_multiplicity
    }

    /// Number of distinct points.
    pub fn distinct(&self) -> usize {
        self.poly.radical().deg0() + usize::from(self.infinity_multiplicity > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c.iter().copied())
    }

    fn poly_map(c: &[i64]) -> RationalMap {
        RationalMap::polynomial(p(c))
    }

    #[test]
    fn iteration() {
        let sq = poly_map(&[0, 0, 1]);
        assert_eq!(sq.iterate(3, DEFAULT_BIT_CAP).unwrap(), poly_map(&[0, 0, 0, 0, 0, 0, 0, 0, 1]));
        let basilica = poly_map(&[-1, 0, 1]);
        assert_eq!(basilica.iterate(2, DEFAULT_BIT_CAP).unwrap(), poly_map(&[0, 0, -2, 0, 1]));
        let inv_sq = RationalMap::new(Poly::one(), p(&[0, 0, 1])).unwrap();
        assert_eq!(inv_sq.iterate(2, DEFAULT_BIT_CAP).unwrap(), poly_map(&[0, 0, 0, 0, 1]));
        assert_eq!(inv_sq.iterate(0, DEFAULT_BIT_CAP).unwrap(), RationalMap::identity());
        for n in 0..=5 {
            assert_eq!(basilica.iterate(n, DEFAULT_BIT_CAP).unwrap().degree(), 1 << n);
        }
        assert!(matches!(poly_map(&[3, 0, 7]).iterate(8, 64), Err(Error::Resource(_))));
    }

    #[test]
    fn reduction_and_evaluation() {
        let f = RationalMap::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f, poly_map(&[1, 1]));
        let g = RationalMap::new(p(&[1]), p(&[0, 0, 2])).unwrap();
        assert_eq!(g.eval(&ProjPoint::int(0)), ProjPoint::Infinity);
        assert_eq!(g.eval(&ProjPoint::Infinity), ProjPoint::int(0));
        assert_eq!(poly_map(&[0, 0, 1]).eval(&ProjPoint::Infinity), ProjPoint::Infinity);
        assert_eq!(g.to_string(), "(1)/(2*x^2)");
    }

    #[test]
    fn critical_points() {
        for c in [0, -1, -2] {
            let cp = poly_map(&[c, 0, 1]).critical_points().unwrap();
            assert_eq!(cp.wronskian, p(&[0, 1]));
            assert_eq!(cp.infinity_multiplicity, 1);
        }
        let cubic = poly_map(&[0, -3, 0, 1]).critical_points().unwrap();
        assert_eq!(cubic.wronskian, p(&[-1, 0, 1]));
        assert_eq!(cubic.infinity_multiplicity, 2);
    }

    #[test]
    fn preimage_polynomials() {
        let f = poly_map(&[1, 0, 1]);
        let pp = f.preimage_polynomial(2, &ProjPoint::int(0), DEFAULT_BIT_CAP).unwrap();
        assert_eq!(pp.poly, p(&[2, 0, 2, 0, 1]));
        let sq = poly_map(&[0, 0, 1]);
        let pp = sq.preimage_polynomial(3, &ProjPoint::int(2), DEFAULT_BIT_CAP).unwrap();
        assert_eq!(pp.poly, p(&[-2, 0, 0, 0, 0, 0, 0, 0, 1]));
        let pp = poly_map(&[-1, 0, 1]).preimage_polynomial(1, &ProjPoint::int(-1), DEFAULT_BIT_CAP).unwrap();
        assert_eq!(pp.poly, p(&[0, 0, 1]));
        assert_eq!(pp.distinct(), 1);
        let pp = sq.preimage_polynomial(2, &ProjPoint::Infinity, DEFAULT_BIT_CAP).unwrap();
        assert_eq!((pp.poly.deg0(), pp.infinity_multiplicity), (0, 4));
    }
}
