//! Expression grammar for maps and base points.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" unary)?
//! atom   := integer | "x" | "(" expr ")"
//! point  := "inf" | expr          (expr free of x)
//! ```
//!
//! Exponents must reduce to integer constants; negative exponents invert.
//! `-x^2` parses as `-(x^2)` and `^` associates to the right. Error
//! positions are 0-based character offsets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::map::{ProjPoint, RationalMap};
use super::poly::Poly;
use crate::error::{Error, Result};

pub const GRAMMAR_VERSION: u32 = 1;

/// Largest absolute exponent accepted.
pub const MAX_EXPONENT: u64 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    X,
    Inf,
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

fn lex(src: &str) -> Result<Lexer> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(digits.parse().expect("ascii digits")), start));
            }
            'x' | 'X' => {
                toks.push((Tok::X, i));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                toks.push((Tok::Op(c), i));
                i += 1;
            }
            'i' if chars[i..].iter().take(3).collect::<String>() == "inf" => {
                toks.push((Tok::Inf, i));
                i += 3;
            }
            '∞' => {
                toks.push((Tok::Inf, i));
                i += 1;
            }
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") }),
        }
    }
    toks.push((Tok::End, chars.len()));
    Ok(Lexer { toks, at: 0 })
}

/// A quotient of polynomials during parsing, not yet reduced.
#[derive(Clone, Debug)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn poly(p: Poly) -> Self {
        Frac { num: p, den: Poly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn constant(&self) -> Option<BigRational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0) / self.den.coeff(0))
    }

    fn add(&self, o: &Frac, sign: bool) -> Frac {
        let right = &o.num * &self.den;
        let left = &self.num * &o.den;
        let num = if sign { &left + &right } else { &left - &right };
        Frac { num, den: &self.den * &o.den }.tidy()
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }.tidy()
    }

    fn recip(&self) -> Frac {
        Frac { num: self.den.clone(), den: self.num.clone() }
    }

    fn tidy(self) -> Frac {
        if self.num.is_zero() {
            return Frac::poly(Poly::zero());
        }
        let g = super::poly::gcd(&self.num, &self.den);
        if g.is_constant() {
            self
        } else {
            Frac { num: self.num.div_exact(&g), den: self.den.div_exact(&g) }
        }
    }
}

impl Lexer {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        while let (Tok::Op(c @ ('+' | '-')), _) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            acc = acc.add(&rhs, c == '+');
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.unary()?;
        while let (Tok::Op(c @ ('*' | '/')), pos) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            if c == '*' {
                acc = acc.mul(&rhs);
            } else {
                if rhs.is_zero() {
                    return Err(Error::Parse { pos, msg: "division by zero".into() });
                }
                acc = acc.mul(&rhs.recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Frac> {
        match *self.peek() {
            (Tok::Op('-'), _) => {
                self.bump();
                let v = self.unary()?;
                Ok(Frac { num: -&v.num, den: v.den })
            }
            (Tok::Op('+'), _) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        let (Tok::Op('^'), pos) = *self.peek() else { return Ok(base) };
        self.bump();
        let e = self.unary()?;
        let e = e
            .constant()
            .filter(|c| c.is_integer())
            .and_then(|c| c.to_integer().to_i64())
            .ok_or_else(|| Error::Parse { pos, msg: "exponent must be an integer constant".into() })?;
        if e.unsigned_abs() > MAX_EXPONENT {
            return Err(Error::Parse { pos, msg: format!("exponent {e} exceeds {MAX_EXPONENT}") });
        }
        if e < 0 && base.is_zero() {
            return Err(Error::Parse { pos, msg: "zero raised to a negative power".into() });
        }
        let n = e.unsigned_abs() as usize;
        let raised = Frac { num: base.num.pow(n), den: base.den.pow(n) };
        Ok(if e < 0 { raised.recip() } else { raised })
    }

    fn atom(&mut self) -> Result<Frac> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(v) => Ok(Frac::poly(Poly::constant(BigRational::from_integer(v)))),
            Tok::X => Ok(Frac::poly(Poly::x())),
            Tok::Op('(') => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::Op(')'), _) => Ok(inner),
                    (_, p) => Err(Error::Parse { pos: p, msg: "expected ')'".into() }),
                }
            }
            Tok::Inf => Err(Error::Parse { pos, msg: "'inf' is only allowed as a whole point".into() }),
            Tok::End => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
            Tok::Op(c) => Err(Error::Parse { pos, msg: format!("unexpected '{c}'") }),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            (Tok::End, _) => Ok(()),
            (_, pos) => Err(Error::Parse { pos: *pos, msg: "expected an operator or end of input".into() }),
        }
    }
}

fn parse_frac(src: &str) -> Result<Frac> {
    let mut lx = lex(src)?;
    let v = lx.expr()?;
    lx.finish()?;
    Ok(v)
}

/// Parses a rational map in `x`, reduced to lowest terms.
pub fn parse_map(src: &str) -> Result<RationalMap> {
    let v = parse_frac(src)?;
    RationalMap::new(v.num, v.den)
}

/// Parses a polynomial in `x`.
pub fn parse_poly(src: &str) -> Result<Poly> {
    let v = parse_frac(src)?;
    if !v.den.is_constant() {
        return Err(Error::Parse { pos: 0, msg: "expected a polynomial".into() });
    }
    Ok(v.num.scale(&v.den.coeff(0).recip()))
}

/// Parses a rational point: `inf` or a constant expression.
pub fn parse_point(src: &str) -> Result<ProjPoint> {
    let mut lx = lex(src)?;
    if let (Tok::Inf, _) = lx.peek() {
        lx.bump();
        lx.finish()?;
        return Ok(ProjPoint::Infinity);
    }
    let v = lx.expr()?;
    lx.finish()?;
    match v.constant() {
        Some(c) => Ok(ProjPoint::Finite(c)),
        None => Err(Error::Parse {
            pos: src.chars().position(|c| c == 'x' || c == 'X').unwrap_or(0),
            msg: "a point must not depend on x".into(),
        }),
    }
}

impl RationalMap {
    /// Convenience wrapper around [`parse_map`].
    pub fn parse(src: &str) -> Result<Self> {
        parse_map(src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn err_pos(r: Result<impl std::fmt::Debug>) -> usize {
        match r {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn maps() {
        assert_eq!(parse_map("x^2+1").unwrap().to_string(), "x^2 + 1");
        assert_eq!(parse_map("x^2 - 1").unwrap(), RationalMap::polynomial(Poly::from_ints([-1, 0, 1])));
        assert_eq!(parse_map("x^-2").unwrap(), RationalMap::new(Poly::one(), Poly::from_ints([0, 0, 1])).unwrap());
        assert_eq!(parse_map("(x^2-1)/(x-1)").unwrap(), RationalMap::polynomial(Poly::from_ints([1, 1])));
        assert_eq!(parse_map("-x^2").unwrap(), RationalMap::polynomial(Poly::from_ints([0, 0, -1])));
        assert_eq!(parse_map("2^3^2").unwrap(), RationalMap::polynomial(Poly::from_ints([512])));
        assert_eq!(parse_map("x*x/2 + 1/2").unwrap().to_string(), "(1/2)*x^2 + 1/2");
        assert_eq!(parse_map("(x+1)^(3-1)").unwrap(), RationalMap::polynomial(Poly::from_ints([1, 2, 1])));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("inf").unwrap(), ProjPoint::Infinity);
        assert_eq!(parse_point(" -3/6 ").unwrap(), ProjPoint::Finite(BigRational::new((-1).into(), 2.into())));
        assert_eq!(parse_point("2^-1").unwrap(), ProjPoint::Finite(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_point("0").unwrap(), ProjPoint::Finite(BigRational::zero()));
    }

    #[test]
    fn error_positions() {
        assert_eq!(err_pos(parse_map("x^2 + ")), 6);
        assert_eq!(err_pos(parse_map("x^2 $ 1")), 4);
        assert_eq!(err_pos(parse_map("(x+1")), 4);
        assert_eq!(err_pos(parse_map("2x")), 1);
        assert_eq!(err_pos(parse_map("1/(x-x)")), 1);
        assert_eq!(err_pos(parse_map("x^x")), 1);
        assert_eq!(err_pos(parse_point("x+1")), 0);
        assert_eq!(err_pos(parse_point("1+inf")), 2);
        assert_eq!(err_pos(parse_map("x^5000")), 1);
    }
}
