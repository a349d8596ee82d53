//! Dense univariate polynomials over ℚ (ascending coefficients).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::kernel::interval::{horner_complex, ComplexInterval};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints<T: Into<BigInt> + Clone>(c: &[T]) -> Self {
        QPoly::new(
            c.iter()
                .map(|a| BigRational::from_integer(a.clone().into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        QPoly { c: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(a: BigRational) -> Self {
        QPoly::new(vec![a])
    }

    pub fn x() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
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

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|a| a.is_integer())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let dd = d.deg();
        let lc = d.lead();
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] / &lc;
            if coef.is_zero() {
                continue;
            }
            for (i, b) in d.c.iter().enumerate() {
                r[k + i] -= &coef * b;
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let l = self.lead();
        QPoly::new(self.c.iter().map(|a| a / &l).collect())
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s·self + t·o = g = gcd (monic).
    pub fn ext_gcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_complex(&self, z: &ComplexInterval) -> ComplexInterval {
        horner_complex(&self.c, z)
    }

    /// gcd(f, f') for a nonzero polynomial.
    pub fn repeated_part(&self) -> QPoly {
        self.gcd(&self.derivative())
    }

    pub fn is_squarefree(&self) -> bool {
        self.repeated_part().degree() == Some(0)
    }

    /// Monic square-free part f / gcd(f, f').
    pub fn squarefree_part(&self) -> QPoly {
        self.divrem(&self.repeated_part()).0.monic()
    }

    /// x^deg · f(1/x).
    pub fn reversed(&self) -> QPoly {
        let mut c = self.c.clone();
        c.reverse();
        QPoly::new(c)
    }

    /// `Some(±1)` if x^n f(1/x) = ±f(x) (roots closed under inversion).
    pub fn reciprocal_sign(&self) -> Option<i32> {
        if self.is_zero() || self.c[0].is_zero() {
            return None;
        }
        let r = self.reversed();
        if r == *self {
            Some(1)
        } else if r == self.neg() {
            Some(-1)
        } else {
            None
        }
    }

    /// Cauchy bound on root moduli.
    pub fn root_bound(&self) -> BigRational {
        let l = self.lead().abs();
        let m = self
            .c
            .iter()
            .take(self.c.len() - 1)
            .map(|a| a.abs() / &l)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    /// Resultant ∏_{f(α)=0} g(α) · lc(f)^{deg g}.
    pub fn resultant(&self, g: &QPoly) -> BigRational {
        resultant(self, g)
    }
}

fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let (da, db) = (a.deg(), b.deg());
    if db == 0 {
        return num_traits::pow(b.lead(), da);
    }
    if da == 0 {
        return num_traits::pow(a.lead(), db);
    }
    let r = a.rem(b);
    if r.is_zero() {
        return BigRational::zero();
    }
    let dr = r.deg();
    let sign = if (da * db) % 2 == 1 { -1 } else { 1 };
    let factor = num_traits::pow(b.lead(), da - dr);
    resultant(b, &r) * factor * BigRational::from_integer(sign.into())
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coef = !mag.is_one() || i == 0;
            if show_coef {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coef { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coef { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}
