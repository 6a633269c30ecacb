//! Polynomials over prime fields: distinct-degree factorization and the
//! Frobenius lower bound, plus Hensel lifting for rational roots.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::Poly;
use crate::error::{Error, Result};

type Fp = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Reduction of an integer polynomial; `None` when `p` divides the leading
/// coefficient.
fn reduce(c: &[BigInt], p: u64) -> Option<Fp> {
    let pb = BigInt::from(p);
    let out: Fp = c.iter().map(|a| a.mod_floor(&pb).to_u64().expect("residue fits")).collect();
    (out.last().copied().unwrap_or(0) != 0).then_some(out)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect())
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(c)
}

fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let li = inv(b[db], p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let t = mulmod(r[i + db], li, p);
        if t == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - mulmod(t, bj, p)) % p;
        }
        q[i] = t;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Fp {
    div_rem(a, b, p).1
}

fn monic(a: Fp, p: u64) -> Fp {
    match a.last() {
        Some(&l) if l != 1 => {
            let li = inv(l, p);
            a.into_iter().map(|x| mulmod(x, li, p)).collect()
        }
        _ => a,
    }
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(x, p)
}

fn derivative(a: &[u64], p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &x)| mulmod(x, i as u64 % p, p)).collect())
}

/// `base^e mod m`.
fn powmod_poly(base: &[u64], mut e: BigUint, m: &[u64], p: u64) -> Fp {
    let mut r: Fp = vec![1];
    let mut b = rem(base, m, p);
    while !e.is_zero() {
        if e.bit(0) {
            r = rem(&mul(&r, &b, p), m, p);
        }
        e >>= 1u32;
        if !e.is_zero() {
            b = rem(&mul(&b, &b, p), m, p);
        }
    }
    r
}

/// Degrees of the irreducible factors of a squarefree `f` over `F_p`, with
/// multiplicity, by distinct-degree factorization.
fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = monic(f.to_vec(), p);
    let mut out = Vec::new();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1;
    while f.len() > 1 {
        if 2 * i > f.len() - 1 {
            out.push(f.len() - 1);
            break;
        }
        h = powmod_poly(&h, BigUint::from(p), &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if g.len() > 1 {
            let k = (g.len() - 1) / i;
            out.extend(std::iter::repeat_n(i, k));
            f = div_rem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Factor-degree pattern of the integer polynomial `f` modulo `p`, or
/// `None` if `p` is bad for it (leading coefficient or discriminant).
pub fn factorization_pattern(f: &Poly, p: u64) -> Option<Vec<usize>> {
    let fp = reduce(&f.primitive(), p)?;
    if fp.len() <= 1 {
        return Some(Vec::new());
    }
    if gcd(&fp, &derivative(&fp, p), p).len() > 1 {
        return None;
    }
    Some(factor_degrees(&fp, p))
}

/// First `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&q| q * q <= n).all(|&q| n % q != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// Primes not exceeding `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| (2..).take_while(|q| q * q <= n).all(|q| n % q != 0)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSample {
    pub p: u64,
    pub factor_degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusBound {
    /// lcm of all observed factor degrees; divides the splitting-field degree.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub bound: BigUint,
    pub samples: Vec<PrimeSample>,
    pub skipped: Vec<u64>,
    /// The input was not squarefree and its radical was used instead.
    pub degenerate: bool,
}

/// lcm of Frobenius cycle lengths over the good primes in `primes`, for the
/// splitting field of `f`.
///
/// A non-squarefree `f` is replaced by its radical, which has the same
/// splitting field; `degenerate` records that this happened.
pub fn frobenius_bound(f: &Poly, primes: &[u64], require_good: usize) -> Result<FrobeniusBound> {
    let degenerate = !f.is_squarefree();
    let g = if degenerate { f.radical() } else { f.clone() };
    let mut bound = BigUint::one();
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        if require_good > 0 && samples.len() == require_good {
            break;
        }
        match factorization_pattern(&g, p) {
            Some(degs) => {
                for &d in &degs {
                    bound = bound.lcm(&BigUint::from(d));
                }
                samples.push(PrimeSample { p, factor_degrees: degs });
            }
            None => skipped.push(p),
        }
    }
    if samples.is_empty() {
        return Err(Error::NoGoodPrimes(format!("all of {primes:?} divide the discriminant or leading coefficient")));
    }
    Ok(FrobeniusBound { bound, samples, skipped, degenerate })
}

/// All rational roots of `f`, each listed once, in increasing order.
///
/// Roots of the radical are found modulo a small prime where it stays
/// squarefree, lifted by Newton iteration past the size bound for
/// `lead·root`, and confirmed exactly.
pub fn rational_roots(f: &Poly) -> Result<Vec<BigRational>> {
    if f.is_zero() {
        return Err(Error::invalid("every rational is a root of the zero polynomial"));
    }
    let mut g = f.radical().primitive();
    let mut roots = Vec::new();
    if g.len() > 1 && g[0].is_zero() {
        roots.push(BigRational::zero());
        g.remove(0);
    }
    if g.len() <= 1 {
        return Ok(roots);
    }
    let lead = g.last().unwrap().abs();
    let bound = BigInt::from(2) * &lead * g[0].abs() + 1u32;
    let (p, fp) = (3u64..100_000)
        .filter(|&n| (2..).take_while(|q| q * q <= n).all(|q| n % q != 0))
        .find_map(|p| {
            let fp = reduce(&g, p)?;
            (gcd(&fp, &derivative(&fp, p), p).len() == 1).then_some((p, fp))
        })
        .ok_or_else(|| Error::Resource("no small prime keeps the polynomial squarefree".into()))?;
    let poly = Poly::from_ints(g.clone());
    let dg: Vec<BigInt> = g.iter().enumerate().skip(1).map(|(i, a)| a * i).collect();
    for r0 in (0..p).filter(|&r| eval_mod(&fp, r, p) == 0) {
        let mut m = BigInt::from(p);
        let mut r = BigInt::from(r0);
        while m < bound {
            m = &m * &m;
            let fv = eval_int(&g, &r, &m);
            let dv = eval_int(&dg, &r, &m);
            let dinv = mod_inverse(&dv, &m).expect("simple root stays simple");
            r = (&r - fv * dinv).mod_floor(&m);
        }
        let mut c = (&r * &lead).mod_floor(&m);
        if &c * 2 > m {
            c -= &m;
        }
        let cand = BigRational::new(c, lead.clone());
        if poly.eval(&cand).is_zero() {
            roots.push(cand);
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &a| (mulmod(acc, x, p) + a) % p)
}

fn eval_int(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, a| (acc * x + a).mod_floor(m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}
