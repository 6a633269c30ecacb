//! Multiquadratic towers `Q(√δ_1, ..., √δ_k)` with each `δ_i` in the
//! sub-tower below it.
//!
//! An element of a tower of height `k` is a vector of `2^k` rationals over
//! the basis of subset products of the formal roots: bit `i` of a
//! coordinate index records a factor `√δ_(i+1)`. Elements of a lower level
//! stay valid after the tower grows; shorter vectors are implicitly padded
//! with zeros.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Element of some tower, as coordinates in the subset-product basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    c: Vec<Q>,
}

impl Elem {
    pub fn rational(v: Q) -> Self {
        Elem { c: vec![v] }
    }

    pub fn int(v: i64) -> Self {
        Elem::rational(Q::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Elem::int(0)
    }

    pub fn one() -> Self {
        Elem::int(1)
    }

    /// Builds an element from coordinates, trimming zero upper halves.
    pub fn from_coords(mut c: Vec<Q>) -> Self {
        assert!(c.len().is_power_of_two(), "coordinate count must be a power of two");
        while c.len() > 1 && c[c.len() / 2..].iter().all(Zero::is_zero) {
            c.truncate(c.len() / 2);
        }
        Elem { c }
    }

    pub fn coords(&self) -> &[Q] {
        &self.c
    }

    /// Smallest `j` such that the element lies in the first `j` levels.
    pub fn level(&self) -> usize {
        self.c.len().trailing_zeros() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Q> {
        (self.c.len() == 1).then(|| &self.c[0])
    }

    pub fn height_bits(&self) -> u64 {
        self.c.iter().map(|a| a.numer().bits().max(a.denom().bits())).max().unwrap_or(0)
    }

    pub fn scale(&self, k: &Q) -> Elem {
        Elem::from_coords(self.c.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Elem {
        Elem { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn add(&self, o: &Elem) -> Elem {
        Elem::from_coords(add_slices(&self.c, &o.c))
    }

    pub fn sub(&self, o: &Elem) -> Elem {
        self.add(&o.neg())
    }

    /// Coordinates as strings, for reports.
    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(ToString::to_string).collect()
    }
}

fn add_slices(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (x, y) in out.iter_mut().zip(short) {
        *x += y;
    }
    out
}

fn sub_slices(a: &[Q], b: &[Q]) -> Vec<Q> {
    let neg: Vec<Q> = b.iter().map(|x| -x).collect();
    add_slices(a, &neg)
}

fn pad(a: &[Q], len: usize) -> Vec<Q> {
    let mut v = a.to_vec();
    v.resize(len, Q::zero());
    v
}

fn all_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// The shortest prefix of `v` holding all of it, with its level.
fn trim(v: &[Q]) -> (&[Q], usize) {
    let mut len = v.len();
    while len > 1 && all_zero(&v[len / 2..len]) {
        len /= 2;
    }
    (&v[..len], len.trailing_zeros() as usize)
}

/// The tower: radicand `i` lives in the sub-tower of height `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerField {
    radicands: Vec<Elem>,
}

impl Default for TowerField {
    fn default() -> Self {
        Self::rationals()
    }
}

impl TowerField {
    pub fn rationals() -> Self {
        TowerField { radicands: Vec::new() }
    }

    pub fn height(&self) -> usize {
        self.radicands.len()
    }

    /// `[F : Q] = 2^height`.
    pub fn degree(&self) -> BigUint {
        BigUint::one() << self.radicands.len()
    }

    pub fn radicands(&self) -> &[Elem] {
        &self.radicands
    }

    /// The formal root `√δ_(i+1)`.
    pub fn generator(&self, i: usize) -> Elem {
        let mut c = vec![Q::zero(); 1 << (i + 1)];
        c[1 << i] = Q::one();
        Elem { c }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let k = a.level().max(b.level());
        let len = 1 << k;
        Elem::from_coords(self.mul_at(&pad(&a.c, len), &pad(&b.c, len), k))
    }

    pub fn square(&self, a: &Elem) -> Elem {
        self.mul(a, a)
    }

    fn mul_at(&self, a: &[Q], b: &[Q], k: usize) -> Vec<Q> {
        if k == 0 {
            return vec![&a[0] * &b[0]];
        }
        let h = 1 << (k - 1);
        let (a0, a1) = a.split_at(h);
        let (b0, b1) = b.split_at(h);
        let (za1, zb1) = (all_zero(a1), all_zero(b1));
        if za1 && zb1 {
            return pad(&self.mul_at(a0, b0, k - 1), 2 * h);
        }
        if za1 || zb1 {
            // one side lies below: scale both halves of the other
            let (low, (c0, c1)) = if za1 { (a0, (b0, b1)) } else { (b0, (a0, a1)) };
            let mut out = self.mul_at(low, c0, k - 1);
            out.extend(self.mul_at(low, c1, k - 1));
            return out;
        }
        let delta = pad(&self.radicands[k - 1].c, h);
        let ac = self.mul_at(a0, b0, k - 1);
        let bd = self.mul_at(a1, b1, k - 1);
        let mixed = self.mul_at(&add_slices(a0, a1), &add_slices(b0, b1), k - 1);
        let cross = sub_slices(&sub_slices(&mixed, &ac), &bd);
        let mut out = add_slices(&ac, &self.mul_at(&bd, &delta, k - 1));
        out.extend(cross);
        out
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        Elem::from_coords(self.inv_at(&a.c, a.level()))
    }

    fn inv_at(&self, a: &[Q], k: usize) -> Vec<Q> {
        if k == 0 {
            return vec![a[0].recip()];
        }
        let h = 1 << (k - 1);
        let (a0, a1) = a.split_at(h);
        if all_zero(a1) {
            return pad(&self.inv_at(a0, k - 1), 2 * h);
        }
        // (a0 + a1 s)^-1 = (a0 - a1 s) / (a0^2 - a1^2 δ)
        let delta = pad(&self.radicands[k - 1].c, h);
        let norm = sub_slices(
            &self.mul_at(a0, a0, k - 1),
            &self.mul_at(&self.mul_at(a1, a1, k - 1), &delta, k - 1),
        );
        let (nt, nk) = trim(&norm);
        let ninv = pad(&self.inv_at(nt, nk), h);
        let mut out = self.mul_at(a0, &ninv, k - 1);
        out.extend(self.mul_at(a1, &ninv, k - 1).iter().map(|x| -x));
        out
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul(a, &self.inv(b))
    }

    /// A square root of `z` in this tower, if there is one.
    pub fn is_square(&self, z: &Elem) -> Option<Elem> {
        let k = self.height();
        let root = self.sqrt_at(&pad(&z.c, 1 << k), k).map(Elem::from_coords);
        if let Some(w) = &root {
            debug_assert_eq!(&self.square(w), z, "square root failed verification");
        }
        root
    }

    fn sqrt_at(&self, z: &[Q], k: usize) -> Option<Vec<Q>> {
        if k == 0 {
            return rational_sqrt(&z[0]).map(|r| vec![r]);
        }
        let h = 1 << (k - 1);
        let (a, b) = z.split_at(h);
        // squareness depends on the field, so no trimming here
        let sqrt = |v: &[Q]| self.sqrt_at(&pad(v, h), k - 1);
        let inv = |v: &[Q]| {
            let (t, j) = trim(v);
            pad(&self.inv_at(t, j), h)
        };
        let delta = pad(&self.radicands[k - 1].c, h);
        if all_zero(b) {
            if let Some(w) = sqrt(a) {
                return Some(pad(&w, 2 * h));
            }
            // a = u^2/δ  gives  √a = (u/δ)·√δ
            let u = sqrt(&self.mul_at(a, &delta, k - 1))?;
            let mut out = vec![Q::zero(); h];
            out.extend(self.mul_at(&u, &inv(&delta), k - 1));
            return Some(out);
        }
        let norm = sub_slices(
            &self.mul_at(a, a, k - 1),
            &self.mul_at(&self.mul_at(b, b, k - 1), &delta, k - 1),
        );
        let n = sqrt(&norm)?;
        let half = Q::new(1.into(), 2.into());
        for cand in [add_slices(a, &n), sub_slices(a, &n)] {
            let x2: Vec<Q> = cand.iter().map(|v| v * &half).collect();
            if all_zero(&x2) {
                continue;
            }
            if let Some(x) = sqrt(&x2) {
                // y = b / (2x)
                let two_x: Vec<Q> = x.iter().map(|v| v * Q::from_integer(2.into())).collect();
                let y = self.mul_at(b, &inv(&two_x), k - 1);
                let mut out = x;
                out.extend(y);
                return Some(out);
            }
        }
        None
    }

    /// Adjoins `√δ` unless `δ` is already a square. Returns a root of `δ` and
    /// whether the degree doubled.
    pub fn adjoin_sqrt(&mut self, delta: &Elem) -> Result<(Elem, bool)> {
        if delta.is_zero() {
            return Err(Error::invalid("cannot adjoin the square root of zero"));
        }
        if let Some(w) = self.is_square(delta) {
            return Ok((w, false));
        }
        let (c, simplified) = strip_square(delta);
        self.radicands.push(simplified);
        let g = self.generator(self.radicands.len() - 1);
        Ok((g.scale(&c), true))
    }
}

/// Square root of a rational, if it is a perfect square.
pub fn rational_sqrt(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    (&n * &n == *v.numer() && &d * &d == *v.denom()).then(|| Q::new(n, d))
}

/// Largest square dividing `n` among primes below the trial bound.
fn square_part(n: &BigInt) -> BigInt {
    const TRIAL: u64 = 1_000_000;
    let mut rest = n.abs();
    let mut out = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let sq = &pb * &pb;
        while rest.is_multiple_of(&sq) {
            rest /= &sq;
            out *= &pb;
        }
        while rest.is_multiple_of(&pb) {
            rest /= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

/// Writes `δ = c^2 · δ'` with `δ'` integral and as small as trial division
/// allows.
pub(crate) fn strip_square(delta: &Elem) -> (Q, Elem) {
    let den = delta.c.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
    // δ = (δ·den^2) / den^2
    let scaled: Vec<BigInt> = delta.c.iter().map(|a| (a * Q::from_integer(&den * &den)).to_integer()).collect();
    let content = scaled.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    let s = square_part(&content);
    let s2 = &s * &s;
    let reduced = Elem::from_coords(scaled.into_iter().map(|a| Q::from_integer(a / &s2)).collect());
    (Q::new(s, den), reduced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn elem(c: &[i64]) -> Elem {
        Elem::from_coords(c.iter().map(|&v| Q::from_integer(v.into())).collect())
    }

    #[test]
    fn rational_base() {
        let f = TowerField::rationals();
        assert_eq!(f.is_square(&Elem::rational(q(49, 4))), Some(Elem::rational(q(7, 2))));
        assert_eq!(f.is_square(&Elem::int(2)), None);
        assert_eq!(f.is_square(&Elem::int(-4)), None);
    }

    #[test]
    fn root_two_tower() {
        let mut f = TowerField::rationals();
        let (r, doubled) = f.adjoin_sqrt(&Elem::int(2)).unwrap();
        assert!(doubled);
        assert_eq!(f.square(&r), Elem::int(2));
        // (1 + √2)^2 = 3 + 2√2
        let w = f.is_square(&elem(&[3, 2])).unwrap();
        assert_eq!(f.square(&w), elem(&[3, 2]));
        assert!(w == elem(&[1, 1]) || w == elem(&[-1, -1]));
        // √8 = 2√2 is already there
        let (r8, doubled) = f.adjoin_sqrt(&Elem::int(8)).unwrap();
        assert!(!doubled);
        assert_eq!(f.square(&r8), Elem::int(8));
        assert_eq!(f.height(), 1);
        assert_eq!(f.adjoin_sqrt(&Elem::int(4)).unwrap(), (Elem::int(2), false));
    }

    #[test]
    fn arithmetic_in_two_levels() {
        let mut f = TowerField::rationals();
        f.adjoin_sqrt(&Elem::int(-1)).unwrap();
        let i = f.generator(0);
        f.adjoin_sqrt(&i.sub(&Elem::one())).unwrap();
        let s = f.generator(1);
        assert_eq!(f.square(&s), i.sub(&Elem::one()));
        let x = elem(&[1, 2, 3, 4]);
        let y = elem(&[-2, 0, 5, 1]);
        assert_eq!(f.mul(&f.div(&x, &y), &y), x);
        assert_eq!(f.mul(&x, &f.inv(&x)), Elem::one());
        // √(odd) in the sub-tower: 2i = (1 + i)^2
        let two_i = elem(&[0, 2]);
        let w = f.is_square(&two_i).unwrap();
        assert_eq!(f.square(&w), two_i);
        // a·δ square below: (√(i-1))^2 · stuff
        let w = f.is_square(&f.square(&f.mul(&s, &elem(&[3, 1])))).unwrap();
        assert_eq!(f.square(&w), f.square(&f.mul(&s, &elem(&[3, 1]))));
    }

    #[test]
    fn simplification() {
        let (c, d) = strip_square(&Elem::rational(q(18, 25)));
        assert_eq!(d, Elem::int(2));
        assert_eq!(c, q(3, 5));
        let (c, d) = strip_square(&elem(&[8, 4]));
        assert_eq!((c, d), (q(2, 1), elem(&[2, 1])));
        let mut f = TowerField::rationals();
        let (r, _) = f.adjoin_sqrt(&Elem::int(12)).unwrap();
        assert_eq!(f.radicands()[0], Elem::int(3));
        assert_eq!(f.square(&r), Elem::int(12));
    }
}
