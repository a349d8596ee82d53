//! Recomputable real expression trees and sign decision with precision escalation.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::interval::RealInterval;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Rat(BigRational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Sqrt(Box<Expr>),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn int(n: impl Into<BigInt>) -> Expr {
        Expr::Int(n.into())
    }

    pub fn rat(q: BigRational) -> Expr {
        Expr::Rat(q)
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Box::new(self))
    }

    pub fn pow(self, k: i64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, o: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(o))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(o))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, o: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(o))
    }

    /// Enclosure at the given precision; `None` when a partial operation
    /// (division, logarithm, square root) cannot be certified at this precision.
    pub fn eval(&self, prec: u32) -> Option<RealInterval> {
        Some(match self {
            Expr::Int(n) => RealInterval::from_int(n.clone(), prec),
            Expr::Rat(q) => RealInterval::from_rational(q, prec),
            Expr::Add(a, b) => a.eval(prec)? + b.eval(prec)?,
            Expr::Sub(a, b) => a.eval(prec)? - b.eval(prec)?,
            Expr::Mul(a, b) => a.eval(prec)? * b.eval(prec)?,
            Expr::Div(a, b) => a.eval(prec)?.checked_div(&b.eval(prec)?)?,
            Expr::Neg(a) => -a.eval(prec)?,
            Expr::Pow(a, k) => a.eval(prec)?.powi_signed(*k)?,
            Expr::Sqrt(a) => {
                let x = a.eval(prec)?;
                if x.lo().signum() < 0 {
                    return None;
                }
                x.sqrt()?
            }
            Expr::Ln(a) => a.eval(prec)?.ln()?,
            Expr::Exp(a) => a.eval(prec)?.exp(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalSign {
    Negative,
    ZeroUndecided,
    Positive,
}

/// Default escalation schedule.
pub const DEFAULT_START_PRECISION: u32 = 64;
pub const DEFAULT_MAX_PRECISION: u32 = 4096;

/// Run `f` at precisions start, 2·start, … up to `max`; return the first `Some`.
pub fn escalate<T>(start: u32, max: u32, mut f: impl FnMut(u32) -> Option<T>) -> Option<T> {
    let mut p = start.max(16);
    loop {
        if let Some(t) = f(p) {
            return Some(t);
        }
        if p >= max {
            return None;
        }
        p = (p * 2).min(max);
    }
}

/// Sign of the expression, decided only when zero is excluded from an enclosure.
pub fn interval_sign(e: &Expr, start: u32, max_precision: u32) -> IntervalSign {
    escalate(start, max_precision, |p| {
        let x = e.eval(p)?;
        if x.is_positive() {
            Some(IntervalSign::Positive)
        } else if x.is_negative() {
            Some(IntervalSign::Negative)
        } else {
            None
        }
    })
    .unwrap_or(IntervalSign::ZeroUndecided)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        let l = |n: i64| Expr::int(n).ln();
        assert_eq!(
            interval_sign(&l(2).sub(l(3)), 64, 4096),
            IntervalSign::Negative
        );
        assert_eq!(
            interval_sign(&l(2).add(l(3)).sub(l(6)), 64, 1024),
            IntervalSign::ZeroUndecided
        );
        assert_eq!(
            interval_sign(&Expr::int(1).exp().ln().sub(Expr::int(1)), 64, 512),
            IntervalSign::ZeroUndecided
        );
        // 2^(1/2)·2^(1/2) − 2 − 10^-30 < 0 needs more than 64 bits
        let tiny = Expr::rat(BigRational::new(1.into(), BigInt::from(10).pow(30)));
        let e = Expr::int(2).sqrt().pow(2).sub(Expr::int(2)).sub(tiny);
        assert_eq!(interval_sign(&e, 64, 4096), IntervalSign::Negative);
    }
}
