//! Integer arithmetic: primality, factorization and p-adic valuations.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases. Deterministic below 3.3e24,
/// probabilistic (error < 4^-12) beyond.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_int(n: &BigInt) -> bool {
    n.sign() == Sign::Plus && is_prime(n.magnitude())
}

fn pollard_brent(n: &BigUint, c: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g;
    let mut x;
    let mut ys;
    let m = 64;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
            if k >= r || g != one {
                break;
            }
        }
        r *= 2;
        if g != one || r > 1 << 26 {
            break;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if g != one {
                break;
            }
        }
    }
    if g == *n || g == one {
        None
    } else {
        Some(g)
    }
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    for c in 1..64u64 {
        if let Some(d) = pollard_brent(&n, c) {
            let e = &n / &d;
            factor_into(d, out);
            factor_into(e, out);
            return;
        }
    }
    // Not expected for desk-scale inputs; keep the composite as an opaque atom.
    out.push(n);
}

/// Prime factorization of n ≥ 1 as (prime, exponent) pairs in ascending order.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut rest = n.clone();
    let mut primes = Vec::new();
    let mut p = 2u32;
    while p < 10_000 && !rest.is_one() {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            primes.push(bp.clone());
            rest /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_into(rest, &mut primes);
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Exponent of p in a nonzero integer.
pub fn ord_int(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// p-adic order of a nonzero rational.
pub fn padic_ord(x: &BigRational, p: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::domain("valuation of zero"));
    }
    if !is_prime_int(p) {
        return Err(Error::validation("p", format!("{p} is not prime")));
    }
    Ok(ord_int(x.numer(), p) as i64 - ord_int(x.denom(), p) as i64)
}

/// |x|_p as an exact rational.
pub fn padic_abs(x: &BigRational, p: &BigInt) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let e = ord_int(x.numer(), p) as i64 - ord_int(x.denom(), p) as i64;
    rational_pow(&BigRational::from_integer(p.clone()), -e)
}

pub fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let k = e.unsigned_abs();
    BigRational::new(
        num_traits::pow::Pow::pow(base.numer(), k),
        num_traits::pow::Pow::pow(base.denom(), k),
    )
}

/// Primes dividing the numerator or denominator of x.
pub fn rational_primes(x: &BigRational) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = factor(x.numer().magnitude())
        .into_iter()
        .chain(factor(x.denom().magnitude()))
        .map(|(q, _)| BigInt::from(q))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn bits(n: &BigInt) -> u64 {
    n.bits()
}

pub fn to_f64_log2(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let b = n.bits();
    if b < 1000 {
        n.abs().to_f64().unwrap().log2()
    } else {
        let shift = b - 60;
        let top = (n.abs() >> shift).to_f64().unwrap();
        top.log2() + shift as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_ord(&q(12, 1), &2.into()).unwrap(), 2);
        assert_eq!(padic_ord(&q(5, 6), &3.into()).unwrap(), -1);
        assert_eq!(padic_ord(&q(47, 1), &3.into()).unwrap(), 0);
        assert_eq!(padic_ord(&q(15, 1), &3.into()).unwrap(), 1);
        assert!(matches!(padic_ord(&q(0, 1), &3.into()), Err(Error::Domain(_))));
        assert!(matches!(
            padic_ord(&q(4, 1), &4.into()),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn primality_and_factoring() {
        let primes: Vec<u32> = (2..200).filter(|&n| is_prime(&BigUint::from(n))).collect();
        let naive: Vec<u32> = (2..200u32)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(primes, naive);
        let n = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64) * 12u32;
        let f = factor(&n);
        assert_eq!(
            f,
            vec![
                (2u32.into(), 2),
                (3u32.into(), 1),
                (998_244_353u64.into(), 1),
                (1_000_000_007u64.into(), 1)
            ]
        );
    }

    #[test]
    fn padic_abs_is_reciprocal_power() {
        assert_eq!(padic_abs(&q(15, 1), &3.into()), q(1, 3));
        assert_eq!(padic_abs(&q(1, 8), &2.into()), q(8, 1));
    }
}
