//! Rational functions over 𝔽_p, their valuations, and a small expression parser.

use std::fmt;

use super::arith::is_prime;
use super::fp_poly::{invmod, FpPoly};
use crate::error::{Error, Result};

/// Reduced fraction num/den with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpRationalFunction {
    num: FpPoly,
    den: FpPoly,
}

impl FpRationalFunction {
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        let p = num.characteristic();
        if num.is_zero() {
            return Ok(FpRationalFunction {
                num,
                den: FpPoly::one(p),
            });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let inv = invmod(den.lead(), p);
        Ok(FpRationalFunction {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn from_poly(f: FpPoly) -> Self {
        let p = f.characteristic();
        FpRationalFunction {
            num: f,
            den: FpPoly::one(p),
        }
    }

    pub fn one(p: u64) -> Self {
        FpRationalFunction::from_poly(FpPoly::one(p))
    }

    pub fn characteristic(&self) -> u64 {
        self.num.characteristic()
    }

    pub fn numer(&self) -> &FpPoly {
        &self.num
    }

    pub fn denom(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        FpRationalFunction::new(n, self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        FpRationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        FpRationalFunction::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero rational function"));
        }
        FpRationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(FpRationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Distinct monic irreducibles dividing numerator or denominator.
    pub fn finite_places(&self) -> Vec<FpPoly> {
        let mut v: Vec<FpPoly> = self
            .num
            .factor()
            .into_iter()
            .chain(self.den.factor())
            .map(|(q, _)| q)
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

/// ord_π(f) for an irreducible π.
pub fn fp_ord_at(f: &FpRationalFunction, pi: &FpPoly) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::domain("valuation of zero"));
    }
    pi.validate_irreducible()?;
    Ok(ord_at_unchecked(f, pi))
}

pub(crate) fn ord_at_unchecked(f: &FpRationalFunction, pi: &FpPoly) -> i64 {
    f.num.ord(pi) as i64 - f.den.ord(pi) as i64
}

/// ord_∞(f) = deg(den) − deg(num).
pub fn fp_ord_infinity(f: &FpRationalFunction) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::domain("valuation of zero"));
    }
    Ok(f.den.deg() as i64 - f.num.deg() as i64)
}

impl fmt::Display for FpRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Parse an expression in `t` with + − * / ^, parentheses and integer constants.
pub fn parse_rational_function(src: &str, p: u64) -> Result<FpRationalFunction> {
    if !is_prime(&p.into()) {
        return Err(Error::validation("characteristic", format!("{p} is not prime")));
    }
    let toks = tokenize(src)?;
    let mut parser = Parser { toks, pos: 0, p };
    let v = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parse_err(src, "trailing input"));
    }
    Ok(v)
}

fn parse_err(src: &str, msg: &str) -> Error {
    Error::validation("generator", format!("cannot parse {src:?}: {msg}"))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u128),
    T,
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            't' => out.push(Tok::T),
            '+' | '-' | '*' | '/' | '^' => out.push(Tok::Op(c)),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '0'..='9' => {
                let mut n: u128 = 0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(chars[i].to_digit(10).unwrap() as u128))
                        .ok_or_else(|| parse_err(src, "integer literal too large"))?;
                    i += 1;
                }
                out.push(Tok::Num(n));
                continue;
            }
            _ => return Err(parse_err(src, &format!("unexpected character {c:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    p: u64,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: &str) -> Error {
        Error::validation("generator", format!("{msg} at token {}", self.pos))
    }

    fn expr(&mut self) -> Result<FpRationalFunction> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FpRationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op(c @ ('*' | '/'))) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = if c == '*' {
                        acc.mul(&rhs)
                    } else {
                        acc.div(&rhs).map_err(|_| self.err("division by zero"))?
                    };
                }
                // implicit multiplication: 3t, t(t+1), (t+1)(t+2)
                Some(Tok::T) | Some(Tok::LParen) | Some(Tok::Num(_)) => {
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FpRationalFunction> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if let Some(Tok::Op('+')) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) if n <= i64::MAX as u128 => {
                    self.pos += 1;
                    n as i64
                }
                _ => return Err(self.err("expected integer exponent")),
            };
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| self.err("negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FpRationalFunction> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(FpRationalFunction::from_poly(FpPoly::constant(
                    self.p,
                    (n % self.p as u128) as u64,
                )))
            }
            Some(Tok::T) => {
                self.pos += 1;
                Ok(FpRationalFunction::from_poly(FpPoly::x(self.p)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected operand")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> FpRationalFunction {
        parse_rational_function(s, 2).unwrap()
    }

    #[test]
    fn valuations_match_examples() {
        let t = FpPoly::x(2);
        let one_t = FpPoly::from_signed(2, &[1, 1]);
        assert_eq!(fp_ord_at(&rf("t^2+t"), &t).unwrap(), 1);
        assert_eq!(fp_ord_at(&rf("t^3+t^2+1"), &one_t).unwrap(), 0);
        assert_eq!(fp_ord_at(&rf("t^4+1"), &one_t).unwrap(), 4);
        assert_eq!(fp_ord_infinity(&rf("t^2+t+1")).unwrap(), -2);
        assert_eq!(fp_ord_infinity(&rf("1")).unwrap(), 0);
        assert_eq!(fp_ord_infinity(&rf("1/(t^3+1)")).unwrap(), 3);
        assert!(fp_ord_at(&rf("0"), &t).is_err());
        assert!(matches!(
            fp_ord_at(&rf("t"), &FpPoly::from_signed(2, &[1, 0, 1])),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn parser_forms() {
        assert_eq!(rf("t+1"), rf("1+t"));
        assert_eq!(rf("t/(t+1)").denom(), &FpPoly::from_signed(2, &[1, 1]));
        assert_eq!(rf("(t+1)^2"), rf("t^2+1"));
        assert_eq!(rf("t^-1"), rf("1/t"));
        assert_eq!(rf("3t"), rf("t"));
        assert!(parse_rational_function("t/0", 2).is_err());
        assert!(parse_rational_function("t+", 2).is_err());
        assert!(parse_rational_function("x", 2).is_err());
        assert!(parse_rational_function("t", 4).is_err());
        let f = parse_rational_function("2t-1", 5).unwrap();
        assert_eq!(f.numer(), &FpPoly::from_signed(5, &[-1, 2]));
    }
}
