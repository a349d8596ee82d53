//! Dyadic rationals m·2^e with directed rounding; the endpoint type of intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Exact value `m · 2^e`, normalized so that `m` is odd (or zero with `e = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if m.sign() == Sign::Minus {
        let one = BigInt::one();
        -((-m + ((&one << s) - &one)) >> s)
    } else {
        m >> s
    }
}

fn ceil_shr(m: &BigInt, s: u64) -> BigInt {
    -floor_shr(&-m, s)
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { m, e }
        } else {
            Dyadic {
                m: m >> tz,
                e: e + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            m: BigInt::one(),
            e: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite float");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        Dyadic::new(BigInt::from(mant) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Position of the leading bit: `2^(msb) ≤ |x| < 2^(msb+1)`. Zero maps to i64::MIN.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.m.bits() as i64 - 1 + self.e
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &o.m << (o.e - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.m * &o.m, self.e + o.e)
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let b = self.m.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        let m = match dir {
            Round::Down => floor_shr(&self.m, s),
            Round::Up => ceil_shr(&self.m, s),
        };
        Dyadic::new(m, self.e + s as i64)
    }

    /// Directed-rounded quotient with `prec` significant bits.
    pub fn div(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = (prec as i64 + 2 + o.m.bits() as i64 - self.m.bits() as i64).max(0);
        let num = &self.m << k as u64;
        let q = match dir {
            Round::Down => num.div_floor(&o.m),
            Round::Up => -((-num).div_floor(&o.m)),
        };
        Dyadic::new(q, self.e - o.e - k).round(prec, dir)
    }

    /// Directed-rounded square root of a non-negative value.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut s = (2 * prec as i64 + 4 - self.m.bits() as i64).max(0);
        if (self.e - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let big = &self.m << s as u64;
        let mut r = big.sqrt();
        if dir == Round::Up && &r * &r < big {
            r += 1;
        }
        Dyadic::new(r, (self.e - s) / 2).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.e >= 0 {
            &self.m << self.e as u64
        } else {
            floor_shr(&self.m, (-self.e) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.e >= 0 {
            &self.m << self.e as u64
        } else {
            ceil_shr(&self.m, (-self.e) as u64)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as u64)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    /// Rational rounded to `prec` bits in the given direction.
    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_int(q.numer().clone()).div(&Dyadic::from_int(q.denom().clone()), prec, dir)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.m.bits() as i64;
        let (top, e) = if b > 60 {
            (floor_shr(&self.m, (b - 60) as u64), self.e + b - 60)
        } else {
            (self.m.clone(), self.e)
        };
        let t = top.to_f64().unwrap();
        if e > 2000 {
            return t.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        let half = e / 2;
        t * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.msb(), other.msb());
        if ma != mb {
            let o = ma.cmp(&mb);
            return if sa > 0 { o } else { o.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_rounding_brackets() {
        let x = Dyadic::new(BigInt::from(0b1011_0111), -3);
        let lo = x.round(4, Round::Down);
        let hi = x.round(4, Round::Up);
        assert!(lo <= x && x <= hi);
        assert_eq!(hi.sub(&lo), Dyadic::new(1.into(), 1));
        let y = x.neg();
        assert!(y.round(4, Round::Down) <= y && y <= y.round(4, Round::Up));
    }

    #[test]
    fn division_and_sqrt_bracket() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 80, Round::Down);
        let hi = one.div(&three, 80, Round::Up);
        assert!(lo.mul(&three) < one && hi.mul(&three) > one);
        let two = Dyadic::from_int(2);
        let s_lo = two.sqrt(100, Round::Down);
        let s_hi = two.sqrt(100, Round::Up);
        assert!(s_lo.mul(&s_lo) < two && s_hi.mul(&s_hi) > two);
        assert!((s_lo.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn float_round_trip() {
        for x in [0.1, -3.75, 1e-300, 6.02e23, -0.0] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x);
        }
    }
}
