//! Outward-rounded real and complex interval arithmetic.
//!
//! Endpoints are [`Dyadic`] values rounded to `prec` significant bits; every
//! operation rounds the lower endpoint down and the upper endpoint up, so an
//! interval produced from enclosing inputs always encloses the exact result.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        RealInterval::new(x.clone(), x, prec)
    }

    pub fn zero(prec: u32) -> Self {
        RealInterval::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        RealInterval::point(Dyadic::one(), prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        RealInterval::point(Dyadic::from_int(n), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        RealInterval::point(Dyadic::from_f64(x), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        RealInterval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        RealInterval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    /// Upper bound on the half-width.
    pub fn rad(&self) -> Dyadic {
        self.hi.sub(&self.lo).shl(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains(&Dyadic::from_f64(x))
    }

    pub fn overlaps(&self, o: &RealInterval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn subset_of(&self, o: &RealInterval) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    pub fn hull(&self, o: &RealInterval) -> Self {
        RealInterval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec.max(o.prec),
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Widen by `eps ≥ 0` on both sides.
    pub fn inflate(&self, eps: &Dyadic) -> Self {
        RealInterval::new(self.lo.sub(eps), self.hi.add(eps), self.prec)
    }

    pub fn shl(&self, k: i64) -> Self {
        RealInterval {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            RealInterval {
                lo: Dyadic::zero(),
                hi: self.mag(),
                prec: self.prec,
            }
        }
    }

    pub fn max(&self, o: &RealInterval) -> Self {
        RealInterval {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec.max(o.prec),
        }
    }

    pub fn min(&self, o: &RealInterval) -> Self {
        RealInterval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
            prec: self.prec.max(o.prec),
        }
    }

    /// max(x, 0).
    pub fn pos_part(&self) -> Self {
        self.max(&RealInterval::zero(self.prec))
    }

    pub fn sqr(&self) -> Self {
        let a = self.abs();
        RealInterval {
            lo: a.lo.mul(&a.lo).round(self.prec, Round::Down),
            hi: a.hi.mul(&a.hi).round(self.prec, Round::Up),
            prec: self.prec,
        }
    }

    pub fn powi(&self, n: u64) -> Self {
        if n == 0 {
            return RealInterval::one(self.prec);
        }
        let mut base = self.clone();
        let mut acc: Option<RealInterval> = None;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc.unwrap()
    }

    /// Reciprocal, `None` if the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::one();
        Some(RealInterval {
            lo: one.div(&self.hi, self.prec, Round::Down),
            hi: one.div(&self.lo, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn checked_div(&self, o: &RealInterval) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let p = self.prec.max(o.prec);
        let cands = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = cands
            .iter()
            .map(|(a, b)| a.div(b, p, Round::Down))
            .min()
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| a.div(b, p, Round::Up))
            .max()
            .unwrap();
        Some(RealInterval { lo, hi, prec: p })
    }

    pub fn powi_signed(&self, n: i64) -> Option<Self> {
        if n >= 0 {
            Some(self.powi(n as u64))
        } else {
            self.powi(n.unsigned_abs()).recip()
        }
    }

    /// Square root; the negative part of the interval is clipped.
    pub fn sqrt(&self) -> Option<Self> {
        if self.hi.signum() < 0 {
            return None;
        }
        let lo = if self.lo.signum() <= 0 {
            Dyadic::zero()
        } else {
            self.lo.sqrt(self.prec, Round::Down)
        };
        Some(RealInterval {
            lo,
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn exp(&self) -> Self {
        if self.lo == self.hi {
            return exp_enclosure(&self.lo, self.prec);
        }
        let m = self.mid();
        let r = &self.with_prec(self.prec + 8) - &RealInterval::point(m.clone(), self.prec + 8);
        if r.mag() > Dyadic::one().shl(-4) {
            let lo = exp_enclosure(&self.lo, self.prec).lo;
            let hi = exp_enclosure(&self.hi, self.prec).hi;
            return RealInterval {
                lo,
                hi,
                prec: self.prec,
            };
        }
        // 1 + t ≤ e^t ≤ 1 + t + t² for |t| ≤ 1
        let one = RealInterval::one(self.prec + 8);
        let lo = (&one + &RealInterval::point(r.lo.clone(), self.prec + 8)).lo;
        let h = RealInterval::point(r.hi.clone(), self.prec + 8);
        let hi = (&(&one + &h) + &h.sqr()).hi;
        let factor = RealInterval {
            lo,
            hi,
            prec: self.prec + 8,
        };
        (&exp_enclosure(&m, self.prec + 8) * &factor).with_prec(self.prec)
    }

    /// Natural logarithm, `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Self> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_enclosure(&self.lo, self.prec).lo;
        let hi = ln_enclosure(&self.hi, self.prec).hi;
        Some(RealInterval {
            lo,
            hi,
            prec: self.prec,
        })
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        self * &RealInterval::from_int(k.clone(), self.prec)
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        let n = self.mul_int(q.numer());
        n.checked_div(&RealInterval::from_int(q.denom().clone(), self.prec))
            .expect("positive denominator")
    }

    pub fn ln2(prec: u32) -> Self {
        ln2(prec)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo_f64(), self.hi_f64())
    }
}

impl<'a> Neg for &'a RealInterval {
    type Output = RealInterval;
    fn neg(self) -> RealInterval {
        RealInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Neg for RealInterval {
    type Output = RealInterval;
    fn neg(self) -> RealInterval {
        -&self
    }
}

impl<'a> Add<&'a RealInterval> for &'a RealInterval {
    type Output = RealInterval;
    fn add(self, o: &RealInterval) -> RealInterval {
        let p = self.prec.max(o.prec);
        RealInterval {
            lo: self.lo.add(&o.lo).round(p, Round::Down),
            hi: self.hi.add(&o.hi).round(p, Round::Up),
            prec: p,
        }
    }
}

impl<'a> Sub<&'a RealInterval> for &'a RealInterval {
    type Output = RealInterval;
    fn sub(self, o: &RealInterval) -> RealInterval {
        let p = self.prec.max(o.prec);
        RealInterval {
            lo: self.lo.sub(&o.hi).round(p, Round::Down),
            hi: self.hi.sub(&o.lo).round(p, Round::Up),
            prec: p,
        }
    }
}

impl<'a> Mul<&'a RealInterval> for &'a RealInterval {
    type Output = RealInterval;
    fn mul(self, o: &RealInterval) -> RealInterval {
        let p = self.prec.max(o.prec);
        let (a, b) = (self.lo.signum() >= 0, o.lo.signum() >= 0);
        let (c, d) = (self.hi.signum() <= 0, o.hi.signum() <= 0);
        let pair = if a && b {
            Some((self.lo.mul(&o.lo), self.hi.mul(&o.hi)))
        } else if c && d {
            Some((self.hi.mul(&o.hi), self.lo.mul(&o.lo)))
        } else if a && d {
            Some((self.hi.mul(&o.lo), self.lo.mul(&o.hi)))
        } else if c && b {
            Some((self.lo.mul(&o.hi), self.hi.mul(&o.lo)))
        } else {
            None
        };
        if let Some((lo, hi)) = pair {
            return RealInterval {
                lo: lo.round(p, Round::Down),
                hi: hi.round(p, Round::Up),
                prec: p,
            };
        }
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().round(p, Round::Down);
        let hi = c.iter().max().unwrap().round(p, Round::Up);
        RealInterval { lo, hi, prec: p }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $tr:ident, $m:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, o: &$ty) -> $ty {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(RealInterval, Add, add);
forward_owned!(RealInterval, Sub, sub);
forward_owned!(RealInterval, Mul, mul);

fn ln2_uncached(prec: u32) -> RealInterval {
    // ln 2 = 2 atanh(1/3)
    let w = prec + 16;
    let z = RealInterval::from_rational(&BigRational::new(1.into(), 3.into()), w);
    let s = atanh_series(&z, w);
    s.shl(1).with_prec(prec)
}

fn ln2(prec: u32) -> RealInterval {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, RealInterval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some((_, v)) = guard.range(prec..).next() {
            return v.with_prec(prec);
        }
    }
    let v = ln2_uncached(prec.max(128));
    cache.lock().unwrap().insert(prec.max(128), v.clone());
    v.with_prec(prec)
}

/// atanh(z) for |z| ≤ 1/3 at working precision `w`, with a rigorous tail bound.
fn atanh_series(z: &RealInterval, w: u32) -> RealInterval {
    let z2 = z.sqr();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let tiny = Dyadic::one().shl(-(w as i64) - 8);
    let mut k: u64 = 1;
    loop {
        pow = &pow * &z2;
        let term = pow
            .checked_div(&RealInterval::from_int(2 * k + 1, w))
            .unwrap();
        sum = &sum + &term;
        k += 1;
        if pow.mag() < tiny {
            break;
        }
    }
    // tail ≤ Σ_{i≥1} |pow| z^{2i} ≤ |pow| · z²/(1−z²) ≤ |pow|
    sum.inflate(&pow.mag())
}

fn ln_enclosure(d: &Dyadic, prec: u32) -> RealInterval {
    assert!(d.signum() > 0);
    let w = prec + 32;
    let mut k = d.msb();
    let mut y = d.shl(-k);
    // keep y in [1/√2, √2)
    if y.mul(&y) > Dyadic::from_int(2) {
        k += 1;
        y = y.shl(-1);
    }
    let yi = RealInterval::point(y, w);
    let one = RealInterval::one(w);
    let z = (&yi - &one).checked_div(&(&yi + &one)).unwrap();
    let s = atanh_series(&z, w).shl(1);
    let kl = if k == 0 {
        RealInterval::zero(w)
    } else {
        let guard = 64 - (k.unsigned_abs().leading_zeros());
        ln2(w + guard).mul_int(&BigInt::from(k))
    };
    (&s + &kl).with_prec(prec)
}

/// Enclosure of 1/k! at working precision `w`, cached per precision.
fn inv_factorial(k: usize, w: u32) -> RealInterval {
    thread_local! {
        static TABLE: std::cell::RefCell<BTreeMap<u32, Vec<RealInterval>>> =
            const { std::cell::RefCell::new(BTreeMap::new()) };
    }
    TABLE.with(|t| {
        let mut t = t.borrow_mut();
        let v = t.entry(w).or_insert_with(|| vec![RealInterval::one(w)]);
        while v.len() <= k {
            let n = v.len();
            let next = v[n - 1]
                .checked_div(&RealInterval::from_int(n as u64, w))
                .unwrap();
            v.push(next);
        }
        v[k].clone()
    })
}

fn exp_enclosure(d: &Dyadic, prec: u32) -> RealInterval {
    if d.is_zero() {
        return RealInterval::one(prec);
    }
    let df = d.to_f64();
    assert!(df.abs() < 1e15, "exponent too large for exp");
    let n = (df / std::f64::consts::LN_2).round() as i64;
    let guard = 64 - n.unsigned_abs().leading_zeros();
    let w = prec + 40 + guard;
    let r = &RealInterval::point(d.clone(), w) - &ln2(w).mul_int(&BigInt::from(n));
    let s: i64 = 12;
    let rr = r.shl(-s);
    let mut pow = RealInterval::one(w);
    let mut term;
    let mut sum = RealInterval::one(w);
    let tiny = Dyadic::one().shl(-(w as i64) - 8);
    let mut k: usize = 1;
    loop {
        pow = &pow * &rr;
        term = &pow * &inv_factorial(k, w);
        sum = &sum + &term;
        k += 1;
        if term.mag() < tiny {
            break;
        }
    }
    // |rr| < 1/2 so the tail after the last term is at most 2·|term|·|rr| ≤ |term|
    let mut e = sum.inflate(&term.mag());
    for _ in 0..s {
        e = e.sqr();
    }
    e.shl(n).with_prec(prec)
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: RealInterval) -> Self {
        let p = re.prec();
        ComplexInterval {
            re,
            im: RealInterval::zero(p),
        }
    }

    pub fn one(prec: u32) -> Self {
        ComplexInterval::real(RealInterval::one(prec))
    }

    pub fn zero(prec: u32) -> Self {
        ComplexInterval::real(RealInterval::zero(prec))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        ComplexInterval::real(RealInterval::from_rational(q, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexInterval::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_exact_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexInterval::new(self.re.clone(), -&self.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, o: &ComplexInterval) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn hull(&self, o: &ComplexInterval) -> Self {
        ComplexInterval::new(self.re.hull(&o.re), self.im.hull(&o.im))
    }

    pub fn abs_sqr(&self) -> RealInterval {
        if self.is_real() {
            return self.re.sqr();
        }
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> RealInterval {
        if self.is_real() {
            return self.re.abs();
        }
        self.abs_sqr().sqrt().unwrap()
    }

    pub fn sqr(&self) -> Self {
        if self.is_real() {
            return ComplexInterval::real(self.re.sqr());
        }
        self * self
    }

    pub fn powi(&self, n: u64) -> Self {
        if n == 0 {
            return ComplexInterval::one(self.prec());
        }
        let mut base = self.clone();
        let mut acc: Option<ComplexInterval> = None;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc.unwrap()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_real() {
            return self.re.recip().map(ComplexInterval::real);
        }
        let n = self.abs_sqr();
        if n.contains_zero() {
            return None;
        }
        Some(ComplexInterval::new(
            self.re.checked_div(&n)?,
            (-&self.im).checked_div(&n)?,
        ))
    }

    pub fn powi_signed(&self, n: i64) -> Option<Self> {
        if n >= 0 {
            Some(self.powi(n as u64))
        } else {
            self.powi(n.unsigned_abs()).recip()
        }
    }

    pub fn checked_div(&self, o: &ComplexInterval) -> Option<Self> {
        Some(self * &o.recip()?)
    }

    pub fn scale(&self, r: &RealInterval) -> Self {
        ComplexInterval::new(&self.re * r, &self.im * r)
    }

    /// Upper bound on the distance from the midpoint to any point of the box.
    pub fn rad(&self) -> Dyadic {
        self.re.rad().max(self.im.rad()).shl(1)
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

impl<'a> Add<&'a ComplexInterval> for &'a ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a ComplexInterval> for &'a ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a ComplexInterval> for &'a ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, o: &ComplexInterval) -> ComplexInterval {
        if self.is_real() && o.is_real() {
            return ComplexInterval::real(&self.re * &o.re);
        }
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        ComplexInterval::new(re, im)
    }
}

impl<'a> Neg for &'a ComplexInterval {
    type Output = ComplexInterval;
    fn neg(self) -> ComplexInterval {
        ComplexInterval::new(-&self.re, -&self.im)
    }
}

forward_owned!(ComplexInterval, Add, add);
forward_owned!(ComplexInterval, Sub, sub);
forward_owned!(ComplexInterval, Mul, mul);

/// Evaluate a rational-coefficient polynomial (ascending order) by Horner's rule.
pub fn horner_complex(coeffs: &[BigRational], z: &ComplexInterval) -> ComplexInterval {
    let p = z.prec();
    let mut acc = ComplexInterval::zero(p);
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + &ComplexInterval::from_rational(c, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &RealInterval, v: f64, tol: f64) -> bool {
        (x.mid_f64() - v).abs() <= tol * v.abs().max(1.0)
    }

    #[test]
    fn logarithms_and_exponentials() {
        let l2 = RealInterval::ln2(200);
        assert!(l2.contains_f64(std::f64::consts::LN_2) || close(&l2, std::f64::consts::LN_2, 1e-15));
        assert!(l2.width().to_f64() < 1e-55);
        for x in [0.001, 0.5, 1.0, 2.0, 3.0, 6.0, 1e10] {
            let i = RealInterval::from_f64(x, 128);
            let l = i.ln().unwrap();
            assert!(close(&l, x.ln(), 1e-14), "ln {x}");
            let e = l.exp();
            assert!(e.contains_f64(x), "exp(ln {x}) = {e}");
        }
        for x in [-30.0, -1.0, 0.25, 1.0, 10.0, 700.0] {
            let e = RealInterval::from_f64(x, 128).exp();
            assert!(close(&e, x.exp(), 1e-14), "exp {x}");
        }
    }

    #[test]
    fn log_identity_is_enclosed_but_not_decided() {
        let p = 256;
        let l = |n: i64| RealInterval::from_int(n, p).ln().unwrap();
        let z = &(&l(2) + &l(3)) - &l(6);
        assert!(z.contains_zero());
        assert!(z.width().to_f64() < 1e-70);
        let neg = &l(2) - &l(3);
        assert!(neg.is_negative());
    }

    #[test]
    fn complex_abs_and_recip() {
        let p = 128;
        let z = ComplexInterval::new(RealInterval::from_int(3, p), RealInterval::from_int(4, p));
        assert!(z.abs().contains_f64(5.0));
        let w = &z * &z.recip().unwrap();
        assert!(w.re.contains_f64(1.0) && w.im.contains_zero());
    }
}
