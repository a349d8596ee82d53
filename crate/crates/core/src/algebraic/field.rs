//! Number fields ℚ(a) = ℚ[x]/(f) in the power basis 1, a, …, a^{m−1}.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::poly::QPoly;
use super::roots::{isolate_roots, RootBox};
use crate::error::{Error, Result};
use crate::kernel::interval::ComplexInterval;

/// Monic integer minimal polynomial (ascending coefficients, leading 1 last).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberFieldSpec {
    pub min_poly: Vec<BigInt>,
    pub label: String,
}

/// A complex embedding a ↦ root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub index: usize,
    pub root: ComplexInterval,
    /// Imaginary part certified nonzero.
    pub conjugate_flag: bool,
    pub real: bool,
    /// Index of the complex-conjugate embedding.
    pub conj: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Rough bit size of the largest coefficient.
    pub fn height_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_poly().to_string().replace('x', "a"))
    }
}

#[derive(Debug)]
pub struct NumberField {
    spec: NumberFieldSpec,
    f: QPoly,
    embeddings: Mutex<BTreeMap<u32, Arc<Vec<Embedding>>>>,
}

impl Clone for NumberField {
    fn clone(&self) -> Self {
        NumberField {
            spec: self.spec.clone(),
            f: self.f.clone(),
            embeddings: Mutex::new(self.embeddings.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.spec == o.spec
    }
}

impl NumberField {
    pub fn new(spec: NumberFieldSpec) -> Result<Self> {
        let f = QPoly::from_ints(&spec.min_poly);
        match f.degree() {
            None | Some(0) => {
                return Err(Error::validation("min_poly", "degree must be at least 1"))
            }
            _ => {}
        }
        if !f.lead().is_one() {
            return Err(Error::validation(
                "min_poly",
                "must be monic with the leading 1 as the last entry",
            ));
        }
        if !f.is_squarefree() {
            return Err(Error::validation(
                "min_poly",
                format!("not square-free; repeated factor {}", f.repeated_part()),
            ));
        }
        Ok(NumberField {
            spec,
            f,
            embeddings: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn spec(&self) -> &NumberFieldSpec {
        &self.spec
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.deg()
    }

    pub fn element(&self, coeffs: Vec<BigRational>) -> Result<FieldElement> {
        if coeffs.len() != self.degree() {
            return Err(Error::validation(
                "generators",
                format!(
                    "coefficient vector has length {}, expected {}",
                    coeffs.len(),
                    self.degree()
                ),
            ));
        }
        Ok(FieldElement { coeffs })
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Result<FieldElement> {
        self.element(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    fn from_poly(&self, p: &QPoly) -> FieldElement {
        let r = p.rem(&self.f);
        FieldElement {
            coeffs: (0..self.degree()).map(|i| r.coeff(i)).collect(),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_poly(&QPoly::one())
    }

    pub fn generator(&self) -> FieldElement {
        self.from_poly(&QPoly::x())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.from_poly(&a.as_poly().add(&b.as_poly()))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.from_poly(&a.as_poly().sub(&b.as_poly()))
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.from_poly(&a.as_poly().neg())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.from_poly(&a.as_poly().mul(&b.as_poly()))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        let (g, s, _) = a.as_poly().ext_gcd(&self.f);
        if g.degree() != Some(0) {
            return Err(Error::domain(format!("{a} is not invertible")));
        }
        Ok(self.from_poly(&s))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut r = self.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        Ok(r)
    }

    /// Norm via the resultant Res(f, x(t)).
    pub fn norm(&self, a: &FieldElement) -> BigRational {
        self.f.resultant(&a.as_poly())
    }

    /// Matrix of multiplication by `a`: column k holds the coordinates of a·a^k.
    pub fn mult_matrix(&self, a: &FieldElement) -> QMatrix {
        let m = self.degree();
        let mut cols = Vec::with_capacity(m);
        let mut basis = self.one();
        let gen = self.generator();
        for _ in 0..m {
            cols.push(self.mul(a, &basis).coeffs);
            basis = self.mul(&basis, &gen);
        }
        QMatrix::new(
            (0..m)
                .map(|i| (0..m).map(|k| cols[k][i].clone()).collect())
                .collect(),
        )
    }

    pub fn is_unit(&self, a: &FieldElement) -> Result<bool> {
        if !a.is_integral() {
            return Err(Error::validation(
                "generators",
                format!("{a} has non-integral coefficients"),
            ));
        }
        Ok(self.norm(a).abs().is_one())
    }

    /// Characteristic polynomial of multiplication by `a`.
    pub fn charpoly(&self, a: &FieldElement) -> QPoly {
        self.mult_matrix(a).charpoly()
    }

    /// Embeddings with roots isolated to about `prec` bits (cached per precision).
    pub fn embeddings(&self, prec: u32) -> Result<Arc<Vec<Embedding>>> {
        {
            let cache = self.embeddings.lock().unwrap();
            if let Some(v) = cache.get(&prec) {
                return Ok(v.clone());
            }
        }
        let roots = isolate_roots(&self.f, prec)?;
        let v: Vec<Embedding> = roots
            .into_iter()
            .enumerate()
            .map(|(index, RootBox { z, real, nonreal, conj })| Embedding {
                index,
                root: z,
                conjugate_flag: nonreal,
                real,
                conj,
            })
            .collect();
        let v = Arc::new(v);
        self.embeddings.lock().unwrap().insert(prec, v.clone());
        Ok(v)
    }

    /// σ_e(a) as a certified interval.
    pub fn embed(&self, a: &FieldElement, e: &Embedding) -> ComplexInterval {
        a.as_poly().eval_complex(&e.root)
    }

    /// σ_index(a) with roots isolated at `prec` plus guard bits.
    pub fn embed_at(&self, a: &FieldElement, index: usize, prec: u32) -> Result<ComplexInterval> {
        let guard = 32 + a.height_bits() as u32;
        let embs = self.embeddings(prec + guard)?;
        Ok(self.embed(a, &embs[index]))
    }
}
