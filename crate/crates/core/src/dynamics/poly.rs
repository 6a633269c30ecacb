//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with exact rational coefficients, lowest degree first and
/// never carrying trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<BigRational>,
}

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints<I: Into<BigInt>>(c: impl IntoIterator<Item = I>) -> Self {
        Poly::new(c.into_iter().map(q).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Poly::from_ints([0, 1])
    }

    pub fn constant(v: BigRational) -> Self {
        Poly::new(vec![v])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Poly { c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|a| a * k).collect() }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * q(i as u64)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.c.iter().rev().fold(Poly::zero(), |acc, a| &(&acc * g) + &Poly::constant(a.clone()))
    }

    /// The binary form of formal degree `k` evaluated at `(n, d)`:
    /// `sum_i c_i n^i d^(k-i)`.
    pub fn eval_form(&self, k: usize, n: &Poly, d: &Poly) -> Poly {
        debug_assert!(self.deg0() <= k);
        let mut n_pows = vec![Poly::one()];
        for i in 1..=self.deg0() {
            n_pows.push(&n_pows[i - 1] * n);
        }
        let mut out = Poly::zero();
        let mut d_pow = Poly::one();
        for i in (0..=k).rev() {
            if let Some(a) = self.c.get(i) {
                if !a.is_zero() {
                    out = &out + &(&n_pows[i] * &d_pow).scale(a);
                }
            }
            if i > 0 {
                d_pow = &d_pow * d;
            }
        }
        out
    }

    /// Quotient and remainder over the rationals.
    pub fn div_rem(&self, b: &Poly) -> (Poly, Poly) {
        assert!(!b.is_zero(), "division by the zero polynomial");
        let db = b.c.len() - 1;
        if self.c.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let inv = b.lead().recip();
        let mut r = self.c.clone();
        let mut quo = vec![BigRational::zero(); r.len() - db];
        for i in (0..quo.len()).rev() {
            let t = &r[i + db] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, bj) in b.c.iter().enumerate() {
                r[i + j] -= &t * bj;
            }
            quo[i] = t;
        }
        r.truncate(db);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn rem(&self, b: &Poly) -> Poly {
        self.div_rem(b).1
    }

    /// Exact quotient; panics in debug builds when `b` does not divide.
    pub fn div_exact(&self, b: &Poly) -> Poly {
        let (quo, r) = self.div_rem(b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        quo
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.c.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|a| a.numer() * (&den / a.denom())).collect();
        let mut out = int_primitive(ints);
        if out.last().is_some_and(Signed::is_negative) {
            out.iter_mut().for_each(|a| *a = -&*a);
        }
        out
    }

    pub fn primitive_poly(&self) -> Poly {
        Poly::from_ints(self.primitive())
    }

    /// Largest bit length among the numerators and denominators.
    pub fn height_bits(&self) -> u64 {
        self.c.iter().map(|a| a.numer().bits().max(a.denom().bits())).max().unwrap_or(0)
    }

    /// Squarefree part, monic.
    pub fn radical(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = gcd(self, &self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        gcd(self, &self.derivative()).is_constant()
    }

    /// Display with an arbitrary variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if mag.is_integer() {
                out.push_str(&format!("{mag}*{mono}"));
            } else {
                out.push_str(&format!("({mag})*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (a, b) in c.iter_mut().zip(&short.c) {
            *a += b;
        }
        Poly::new(c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &-o
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        // multiply over a common denominator to keep the inner loop integral
        let (sa, da) = to_ints(self);
        let (sb, db) = to_ints(o);
        let mut c = vec![BigInt::zero(); sa.len() + sb.len() - 1];
        for (i, a) in sa.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in sb.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        let den = da * db;
        Poly::new(c.into_iter().map(|v| BigRational::new(v, den.clone())).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

fn to_ints(p: &Poly) -> (Vec<BigInt>, BigInt) {
    let den = p.c.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
    (p.c.iter().map(|a| a.numer() * (&den / a.denom())).collect(), den)
}

fn int_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|a| a / &g).collect()
}

/// `lc(b)^(deg a - deg b + 1) · a mod b` over the integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().cloned().unwrap();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &lr * bj;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Monic greatest common divisor, via the primitive remainder sequence.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.primitive(), b.primitive());
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = int_primitive(pseudo_rem(&x, &y));
        x = y;
        y = r;
    }
    Poly::from_ints(x).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c.iter().copied())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert_eq!(&(&a * &a) - &p(&[1, 2, 1]), Poly::zero());
        assert_eq!(p(&[-1, 0, 1]).compose(&p(&[-1, 0, 1])), p(&[0, 0, -2, 0, 1]));
        let (quo, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(quo, p(&[1, -1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[3, 0, 1]).derivative(), p(&[0, 2]));
    }

    #[test]
    fn gcd_and_radical() {
        let a = &p(&[-1, 0, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 0, 1]) * &p(&[3, 1]);
        assert_eq!(gcd(&a, &b), p(&[-1, 0, 1]));
        assert_eq!(p(&[0, 0, 0, 0, 1]).radical(), p(&[0, 1]));
        assert!(p(&[2, 0, 2, 0, 1]).is_squarefree());
        assert_eq!(gcd(&p(&[1, 1]), &Poly::zero()), p(&[1, 1]));
    }

    #[test]
    fn forms_and_printing() {
        // x^2 + 1 as a form of degree 2 at (N, D) = (1, x): 1 + x^2
        assert_eq!(p(&[1, 0, 1]).eval_form(2, &Poly::one(), &Poly::x()), p(&[1, 0, 1]));
        assert_eq!(p(&[2, 0, 2, 0, 1]).to_string(), "x^4 + 2*x^2 + 2");
        assert_eq!(p(&[0, -3, 0, 1]).to_string(), "x^3 - 3*x");
        assert_eq!(Poly::new(vec![BigRational::new(1.into(), 2.into()), q(-1)]).to_string(), "-x + 1/2");
        assert_eq!(Poly::new(vec![q(0), BigRational::new(3.into(), 2.into())]).primitive(), vec![BigInt::from(0), BigInt::from(1)]);
    }
}
