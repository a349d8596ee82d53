//! Exact periodic-point counts |F_j(α^n)| via place products, with an
//! independent determinant oracle for number-field systems.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebraic::matrix::ZMatrix;
use crate::error::{Error, Result};
use crate::kernel::arith::{ord_int, rational_pow};
use crate::kernel::fp_poly::FpPoly;
use crate::system::descriptor::{PrimeComponent, SystemDescriptor};

/// Default cap on the estimated bit size of intermediate values.
pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PeriodicCount {
    Finite(BigUint),
    Infinite,
}

impl PeriodicCount {
    pub fn is_infinite(&self) -> bool {
        matches!(self, PeriodicCount::Infinite)
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            PeriodicCount::Finite(v) => Some(v),
            PeriodicCount::Infinite => None,
        }
    }

    fn mul(self, o: PeriodicCount) -> PeriodicCount {
        match (self, o) {
            (PeriodicCount::Finite(a), PeriodicCount::Finite(b)) => PeriodicCount::Finite(a * b),
            _ => PeriodicCount::Infinite,
        }
    }

    fn pow(self, k: u32) -> PeriodicCount {
        match self {
            PeriodicCount::Finite(a) => PeriodicCount::Finite(num_traits::pow(a, k as usize)),
            PeriodicCount::Infinite => PeriodicCount::Infinite,
        }
    }
}

impl From<u64> for PeriodicCount {
    fn from(v: u64) -> Self {
        PeriodicCount::Finite(v.into())
    }
}

impl fmt::Display for PeriodicCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicCount::Finite(v) => write!(f, "{v}"),
            PeriodicCount::Infinite => write!(f, "inf"),
        }
    }
}

fn check_dims(sys: &SystemDescriptor, n: &[i64]) -> Result<()> {
    if n.len() != sys.d {
        return Err(Error::validation(
            "n",
            format!("expected {} coordinates, found {}", sys.d, n.len()),
        ));
    }
    Ok(())
}

fn scaled(n: &[i64], j: u64) -> Result<Vec<i64>> {
    n.iter()
        .map(|&x| {
            i64::try_from(j)
                .ok()
                .and_then(|j| x.checked_mul(j))
                .ok_or_else(|| Error::Resource("exponent overflow".into()))
        })
        .collect()
}

/// Rough bit size of ∏ g_i^{e_i} for the budget check.
fn estimated_bits(c: &PrimeComponent, e: &[i64]) -> u64 {
    let size = |i: usize| -> u64 {
        match c {
            PrimeComponent::SInteger { generators, .. } => {
                let g = &generators[i];
                g.numer().bits().max(g.denom().bits()) + 1
            }
            PrimeComponent::NumberFieldUnits { field, generators } => {
                (generators[i].height_bits() + 2) * field.degree() as u64
            }
            PrimeComponent::FunctionField { p, generators, .. } => {
                let g = &generators[i];
                let deg = g.numer().deg().max(g.denom().deg()) as u64 + 1;
                deg * (64 - p.leading_zeros() as u64)
            }
        }
    };
    e.iter()
        .enumerate()
        .map(|(i, &x)| x.unsigned_abs().saturating_mul(size(i)))
        .fold(0u64, u64::saturating_add)
}

fn budget_check(sys: &SystemDescriptor, e: &[i64], budget: u64) -> Result<()> {
    for entry in &sys.components {
        let b = estimated_bits(&entry.component, e);
        if b > budget {
            return Err(Error::Resource(format!(
                "estimated {b} bits exceeds the budget of {budget} bits"
            )));
        }
    }
    Ok(())
}

fn s_integer_count(generators: &[BigRational], primes: &[BigInt], e: &[i64]) -> PeriodicCount {
    let mut x = BigRational::one();
    for (g, &k) in generators.iter().zip(e) {
        if k != 0 {
            x *= rational_pow(g, k);
        }
    }
    if x.is_one() {
        return PeriodicCount::Infinite;
    }
    // |x − 1|_∞ ∏_{q∈S} |x − 1|_q is the S-free part of |a − b| for x = a/b
    let mut diff = (x.numer() - x.denom()).abs();
    for q in primes {
        let k = ord_int(&diff, q);
        if k > 0 {
            diff /= num_traits::pow(q.clone(), k as usize);
        }
    }
    PeriodicCount::Finite(diff.to_biguint().expect("positive"))
}

fn function_field_count(
    p: u64,
    generators: &[crate::kernel::fp_ratfunc::FpRationalFunction],
    places: &[FpPoly],
    e: &[i64],
) -> Result<PeriodicCount> {
    let mut num = FpPoly::one(p);
    let mut den = FpPoly::one(p);
    for (g, &k) in generators.iter().zip(e) {
        let (a, b) = if k >= 0 {
            (g.numer(), g.denom())
        } else {
            (g.denom(), g.numer())
        };
        let k = k.unsigned_abs();
        num = num.mul(&a.pow(k));
        den = den.mul(&b.pow(k));
    }
    let diff = num.sub(&den);
    if diff.is_zero() {
        return Ok(PeriodicCount::Infinite);
    }
    // p^{deg of the S-free part of num − den}
    let mut deg = diff.deg() as u64;
    for pi in places {
        deg -= pi.deg() as u64 * diff.ord(pi);
    }
    Ok(PeriodicCount::Finite(num_traits::pow(BigUint::from(p), deg as usize)))
}

fn number_field_count(
    field: &crate::algebraic::field::NumberField,
    generators: &[crate::algebraic::field::FieldElement],
    e: &[i64],
) -> Result<PeriodicCount> {
    let mut x = field.one();
    for (u, &k) in generators.iter().zip(e) {
        if k != 0 {
            x = field.mul(&x, &field.pow(u, k)?);
        }
    }
    if x.is_one() {
        return Ok(PeriodicCount::Infinite);
    }
    let y = field.sub(&x, &field.one());
    let nm = field.norm(&y);
    debug_assert!(nm.is_integer());
    Ok(PeriodicCount::Finite(
        nm.to_integer().abs().to_biguint().expect("nonzero"),
    ))
}

/// |F_j(α^n)| with the default bit budget.
pub fn count(sys: &SystemDescriptor, n: &[i64], j: u64) -> Result<PeriodicCount> {
    count_with_budget(sys, n, j, DEFAULT_BIT_BUDGET)
}

pub fn count_with_budget(sys: &SystemDescriptor, n: &[i64], j: u64, budget: u64) -> Result<PeriodicCount> {
    check_dims(sys, n)?;
    if j == 0 {
        return Err(Error::domain("period j must be positive"));
    }
    let e = scaled(n, j)?;
    budget_check(sys, &e, budget)?;
    let mut total = PeriodicCount::Finite(BigUint::one());
    for entry in &sys.components {
        let c = match &entry.component {
            PrimeComponent::SInteger { generators, primes } => s_integer_count(generators, primes, &e),
            PrimeComponent::FunctionField {
                p,
                generators,
                places,
            } => function_field_count(*p, generators, places, &e)?,
            PrimeComponent::NumberFieldUnits { field, generators } => {
                number_field_count(field, generators, &e)?
            }
        };
        total = total.mul(c.pow(entry.multiplicity));
    }
    Ok(total)
}

/// [count(n, 1), …, count(n, j_max)], each j tested independently.
pub fn count_sequence(sys: &SystemDescriptor, n: &[i64], j_max: u64) -> Result<Vec<PeriodicCount>> {
    if j_max == 0 {
        return Err(Error::domain("j_max must be at least 1"));
    }
    (1..=j_max)
        .into_par_iter()
        .map(|j| count(sys, n, j))
        .collect()
}

/// Counts over a box of lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicGrid {
    pub ranges: Vec<(i64, i64)>,
    pub j: u64,
    pub entries: BTreeMap<Vec<i64>, PeriodicCount>,
}

impl PeriodicGrid {
    pub fn get(&self, n: &[i64]) -> Option<&PeriodicCount> {
        self.entries.get(n)
    }
}

/// Every lattice point of a box (inclusive ranges), in lexicographic order.
pub fn lattice_box(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in ranges {
        let mut next = Vec::new();
        for p in &out {
            for x in lo..=hi {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn grid(sys: &SystemDescriptor, ranges: &[(i64, i64)]) -> Result<PeriodicGrid> {
    grid_at(sys, ranges, 1)
}

/// |Fix(α^{jn})| over a box.
pub fn grid_at(sys: &SystemDescriptor, ranges: &[(i64, i64)], j: u64) -> Result<PeriodicGrid> {
    check_dims(sys, &vec![0; ranges.len()])?;
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::validation("range", "empty range"));
    }
    let points = lattice_box(ranges);
    let counts: Vec<PeriodicCount> = points
        .par_iter()
        .map(|n| count(sys, n, j))
        .collect::<Result<_>>()?;
    Ok(PeriodicGrid {
        ranges: ranges.to_vec(),
        j,
        entries: points.into_iter().zip(counts).collect(),
    })
}

/// ∏ |det(∏ M_i^{j n_i} − I)|^multiplicity on the power-basis lattice.
pub fn det_oracle(sys: &SystemDescriptor, n: &[i64], j: u64) -> Result<PeriodicCount> {
    check_dims(sys, n)?;
    let e = scaled(n, j)?;
    budget_check(sys, &e, DEFAULT_BIT_BUDGET)?;
    let mut total = PeriodicCount::Finite(BigUint::one());
    for entry in &sys.components {
        let PrimeComponent::NumberFieldUnits { field, generators } = &entry.component else {
            return Err(Error::Unsupported(
                "the determinant oracle needs number_field_units components".into(),
            ));
        };
        let m = field.degree();
        let mut acc = ZMatrix::identity(m);
        for (u, &k) in generators.iter().zip(&e) {
            if k == 0 {
                continue;
            }
            let mq = field.mult_matrix(u);
            let base = if k < 0 { mq.inverse() } else { Some(mq) };
            let base = base
                .and_then(|b| b.to_integer())
                .ok_or_else(|| Error::domain("generator is not a unit on the power-basis lattice"))?;
            acc = acc.mul(&base.pow(k.unsigned_abs()));
        }
        let det = acc.sub_identity().det_bareiss();
        let c = if det.is_zero() {
            PeriodicCount::Infinite
        } else {
            PeriodicCount::Finite(det.abs().to_biguint().unwrap())
        };
        total = total.mul(c.pow(entry.multiplicity));
    }
    Ok(total)
}

/// Whether `a` divides `b`; `None` unless both are finite.
pub fn divides(a: &PeriodicCount, b: &PeriodicCount) -> Option<bool> {
    match (a, b) {
        (PeriodicCount::Finite(x), PeriodicCount::Finite(y)) => Some(y.is_multiple_of(x)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::fixtures;

    fn c(v: u64) -> PeriodicCount {
        v.into()
    }

    #[test]
    fn times2times3_counts() {
        let s = fixtures::load("times2times3").unwrap();
        assert_eq!(count(&s, &[3, 0], 1).unwrap(), c(7));
        assert_eq!(count(&s, &[2, 1], 1).unwrap(), c(11));
        assert_eq!(count(&s, &[0, 0], 1).unwrap(), PeriodicCount::Infinite);
        assert_eq!(count(&s, &[4, 0], 1).unwrap(), c(5));
        assert_eq!(
            count_sequence(&s, &[1, 1], 3).unwrap(),
            vec![c(5), c(35), c(215)]
        );
        assert!(count_sequence(&s, &[0, 0], 3).unwrap().iter().all(|x| x.is_infinite()));
    }

    #[test]
    fn ledrappier_counts() {
        let s = fixtures::load("ledrappier").unwrap();
        assert_eq!(count(&s, &[1, 1], 1).unwrap(), c(4));
        assert_eq!(count(&s, &[5, 0], 1).unwrap(), c(16));
        assert_eq!(count(&s, &[4, 0], 1).unwrap(), c(1));
        assert_eq!(
            count_sequence(&s, &[1, 1], 3).unwrap(),
            vec![c(4), c(16), c(64)]
        );
        assert_eq!(count(&s, &[2, 1], 2).unwrap(), c(64));
    }

    #[test]
    fn number_field_counts_match_oracle() {
        let s = fixtures::load("sqrt2sqrt3").unwrap();
        assert_eq!(count(&s, &[1, 0], 1).unwrap(), c(4));
        assert_eq!(det_oracle(&s, &[1, 0], 1).unwrap(), c(4));
        assert_eq!(count(&s, &[1, 1], 2).unwrap(), det_oracle(&s, &[1, 1], 2).unwrap());
        assert_eq!(count(&s, &[-2, 1], 1).unwrap(), det_oracle(&s, &[-2, 1], 1).unwrap());
        let x = fixtures::load("dk-sextic").unwrap();
        assert_eq!(det_oracle(&x, &[1, 0], 1).unwrap(), c(15));
        assert_eq!(count(&x, &[1, 0], 1).unwrap(), c(15));
        let t = fixtures::load("times2times3").unwrap();
        assert!(matches!(det_oracle(&t, &[1, 0], 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn multiplicity_squares_counts() {
        let s = fixtures::load("times2times3").unwrap();
        let s2 = s.with_multiplicity(0, 2).unwrap();
        assert_eq!(count(&s2, &[2, 1], 1).unwrap(), c(121));
    }

    #[test]
    fn budget_is_enforced() {
        let s = fixtures::load("times2times3").unwrap();
        assert!(matches!(
            count(&s, &[10_000_000, 0], 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn grid_symmetry() {
        let s = fixtures::load("ledrappier").unwrap();
        let g = grid(&s, &[(-3, 3), (-3, 3)]).unwrap();
        for (n, v) in &g.entries {
            let m: Vec<i64> = n.iter().map(|x| -x).collect();
            assert_eq!(g.get(&m).unwrap(), v);
        }
    }
}
