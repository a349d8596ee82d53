//! Polynomials over a prime field 𝔽_p and their factorization.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero in F_p");
    powmod(a, p - 2, p)
}

/// Polynomial over 𝔽_p, coefficients in ascending order with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|a| a % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        let c = coeffs
            .iter()
            .map(|&a| a.rem_euclid(p as i64) as u64)
            .collect();
        FpPoly::new(p, c)
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::constant(p, 1)
    }

    pub fn constant(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![a])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn scale(&self, a: u64) -> Self {
        FpPoly::new(self.p, self.c.iter().map(|&x| mulmod(x, a, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lead(), self.p))
    }

    pub fn add(&self, o: &FpPoly) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = *self.c.get(i).unwrap_or(&0);
                let b = *o.c.get(i).unwrap_or(&0);
                ((a as u128 + b as u128) % self.p as u128) as u64
            })
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn neg(&self) -> Self {
        FpPoly::new(
            self.p,
            self.c.iter().map(|&a| (self.p - a) % self.p).collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FpPoly) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpPoly::new(self.p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = FpPoly::one(self.p);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (FpPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let inv = invmod(d.lead(), p);
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = mulmod(r[k + dd], inv, p);
            q[k] = coef;
            if coef == 0 {
                continue;
            }
            for (i, &b) in d.c.iter().enumerate() {
                let t = mulmod(coef, b, p);
                r[k + i] = (r[k + i] + p - t) % p;
            }
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> Self {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &FpPoly) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &FpPoly) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, o: &FpPoly, m: &FpPoly) -> Self {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &FpPoly) -> Self {
        let mut r = FpPoly::one(self.p).rem(m);
        let mut b = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                r = r.mulmod(&b, m);
            }
            if i + 1 < bits {
                b = b.mulmod(&b, m);
            }
        }
        r
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, i as u64 % p, p))
            .collect();
        FpPoly::new(p, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| (mulmod(acc, x, self.p) + a) % self.p)
    }

    /// Multiplicity of the irreducible `pi` in a nonzero polynomial.
    pub fn ord(&self, pi: &FpPoly) -> u64 {
        assert!(!self.is_zero());
        let mut f = self.clone();
        let mut e = 0;
        loop {
            let (q, r) = f.divrem(pi);
            if !r.is_zero() {
                return e;
            }
            f = q;
            e += 1;
        }
    }

    /// g with g(x)^p = f(x), assuming f' = 0.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        FpPoly::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    /// Square-free decomposition of a monic polynomial: pairs (g, m) with f = ∏ g^m.
    pub fn squarefree_decomposition(&self) -> Vec<(FpPoly, u64)> {
        let f = self.monic();
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = f.derivative();
        let mut c = f.gcd(&d);
        let mut w = f.div_exact(&c);
        let mut i = 1u64;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.div_exact(&y);
            if z.deg() > 0 {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.div_exact(&w);
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree_decomposition() {
                out.push((g, m * self.p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let p = BigUint::from(self.p);
        let x = FpPoly::x(self.p);
        let mut f = self.clone();
        let mut h = x.rem(&f);
        let mut out = Vec::new();
        let mut i = 1;
        while f.deg() >= 2 * i {
            h = h.powmod(&p, &f);
            let g = h.sub(&x).gcd(&f);
            if g.deg() > 0 {
                f = f.div_exact(&g);
                h = h.rem(&f);
                out.push((g, i));
            }
            i += 1;
        }
        if f.deg() > 0 {
            let d = f.deg();
            out.push((f, d));
        }
        out
    }

    /// Equal-degree splitting (Cantor–Zassenhaus; trace map in characteristic 2).
    fn equal_degree(&self, d: usize, rng: &mut SplitMix) -> Vec<FpPoly> {
        let n = self.deg();
        if n == d {
            return vec![self.clone()];
        }
        let p = self.p;
        loop {
            let a = FpPoly::new(p, (0..n).map(|_| rng.next() % p).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let g0 = a.gcd(self);
            let cand = if g0.deg() > 0 {
                g0
            } else if p == 2 {
                let mut t = a.clone();
                let mut s = a.clone();
                for _ in 1..d {
                    t = t.mulmod(&t, self);
                    s = s.add(&t);
                }
                s.gcd(self)
            } else {
                let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
                a.powmod(&e, self).sub(&FpPoly::one(p)).gcd(self)
            };
            let k = cand.degree().unwrap_or(0);
            if k > 0 && k < n {
                let other = self.div_exact(&cand);
                let mut v = cand.equal_degree(d, rng);
                v.extend(other.equal_degree(d, rng));
                return v;
            }
        }
    }

    /// Factorization into monic irreducibles with multiplicities, sorted.
    pub fn factor(&self) -> Vec<(FpPoly, u64)> {
        let mut rng = SplitMix(0x9e37_79b9_7f4a_7c15);
        let mut out: Vec<(FpPoly, u64)> = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            for (h, d) in g.distinct_degree() {
                for q in h.equal_degree(d, &mut rng) {
                    out.push((q, m));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(FpPoly, u64)> = Vec::new();
        for (q, m) in out {
            match merged.last_mut() {
                Some((last, e)) if *last == q => *e += m,
                _ => merged.push((q, m)),
            }
        }
        merged
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => {
                let f = self.factor();
                f.len() == 1 && f[0].1 == 1
            }
        }
    }

    pub fn validate_irreducible(&self) -> Result<()> {
        if self.is_irreducible() {
            Ok(())
        } else {
            Err(Error::validation("pi", format!("{self} is not irreducible")))
        }
    }
}

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top.
impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
            .then(self.p.cmp(&other.p))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}*t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_signed(p, c)
    }

    #[test]
    fn factor_small_examples() {
        // t^4 + 1 = (t + 1)^4 over F_2
        let f = poly(2, &[1, 0, 0, 0, 1]);
        assert_eq!(f.factor(), vec![(poly(2, &[1, 1]), 4)]);
        // t^2 + t = t (t + 1)
        let g = poly(2, &[0, 1, 1]);
        assert_eq!(g.factor(), vec![(poly(2, &[0, 1]), 1), (poly(2, &[1, 1]), 1)]);
        // t^15 - 1 over F_2: 1 + 1 + 1 + 3 + 3 + ... degrees 1,2,4,4,4
        let h = poly(2, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let degs: Vec<usize> = h.factor().iter().map(|(q, _)| q.deg()).collect();
        assert_eq!(degs, vec![1, 2, 4, 4, 4]);
        // x^6 - 1 over F_7 splits into six linear factors
        let k = poly(7, &[-1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(k.factor().len(), 6);
    }

    #[test]
    fn factor_product_round_trip() {
        for p in [2u64, 3, 5, 13] {
            let f = poly(p, &[3, 1, 0, 2, 1, 1, 0, 4, 1]).mul(&poly(p, &[1, 1]).pow(p as u64 + 1));
            let fac = f.factor();
            let mut prod = FpPoly::one(p);
            for (q, m) in &fac {
                assert!(q.is_irreducible());
                prod = prod.mul(&q.pow(*m));
            }
            assert_eq!(prod, f.monic());
        }
    }

    #[test]
    fn irreducibility() {
        assert!(poly(2, &[1, 1, 1]).is_irreducible());
        assert!(!poly(2, &[1, 0, 1]).is_irreducible());
        assert!(poly(2, &[1, 1, 0, 1]).is_irreducible());
        assert!(poly(3, &[1, 0, 1]).is_irreducible());
        assert!(!poly(5, &[1, 0, 1]).is_irreducible());
    }
}
