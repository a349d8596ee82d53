//! Place-induced characters ℤ^d → ℂ^× and their log-vectors.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::descriptor::{PrimeComponent, SystemDescriptor};
use super::exact_log::{Atom, ExactLog, LogContext};
use crate::error::{Error, Result};
use crate::kernel::arith::padic_ord;
use crate::kernel::fp_poly::FpPoly;
use crate::kernel::fp_ratfunc::{fp_ord_infinity, ord_at_unchecked};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharacterKind {
    Archimedean,
    NonArchimedean,
}

/// The place a character comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// The real place of ℚ.
    Infinity,
    /// The q-adic place of ℚ.
    Prime(BigInt),
    /// A complex embedding of a number field.
    Embedding {
        index: usize,
        real: bool,
        conj: Option<usize>,
    },
    /// A finite place π of 𝔽_p(t).
    Polynomial(FpPoly),
    /// The place at infinity of 𝔽_p(t).
    FunctionInfinity { p: u64 },
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(q) => write!(f, "{q}-adic"),
            Place::Embedding { index, .. } => write!(f, "sigma{index}"),
            Place::Polynomial(pi) => write!(f, "({pi})"),
            Place::FunctionInfinity { .. } => write!(f, "inf(t)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Character {
    pub kind: CharacterKind,
    pub place: Place,
    pub component: usize,
    /// Which copy (0-based) of a component with multiplicity > 1.
    pub copy: u32,
    pub multiplicity: u32,
    /// w_i = log|g_i|_χ, reduced modulo known relations.
    pub log_vector: Vec<ExactLog>,
}

impl Character {
    pub fn name(&self) -> String {
        let mut s = format!("c{}:{}", self.component, self.place);
        if self.multiplicity > 1 {
            s.push_str(&format!("#{}", self.copy));
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.log_vector.iter().all(|w| w.is_zero())
    }

    pub fn is_archimedean(&self) -> bool {
        self.kind == CharacterKind::Archimedean
    }
}

/// log|x| as an exact prime combination.
pub fn rational_log_abs(x: &BigRational) -> ExactLog {
    let mut e = ExactLog::zero();
    for q in crate::kernel::arith::rational_primes(x) {
        let k = padic_ord(x, &q).expect("nonzero");
        e.add_term(Atom::Prime(q), BigRational::from_integer(k.into()));
    }
    e
}

/// (𝒱, 𝒲) with one entry per place and multiplicity copy.
pub fn build_characters(
    desc: &SystemDescriptor,
    ctx: &LogContext,
) -> Result<(Vec<Character>, Vec<Character>)> {
    let mut v = Vec::new();
    let mut w = Vec::new();
    for (ci, entry) in desc.components.iter().enumerate() {
        let mut cv: Vec<(Place, Vec<ExactLog>)> = Vec::new();
        let mut cw: Vec<(Place, Vec<ExactLog>)> = Vec::new();
        match &entry.component {
            PrimeComponent::SInteger { generators, primes } => {
                cv.push((Place::Infinity, generators.iter().map(rational_log_abs).collect()));
                for q in primes {
                    let lv = generators
                        .iter()
                        .map(|g| {
                            let k = padic_ord(g, q).expect("nonzero generator");
                            ExactLog::prime(q.clone(), -k)
                        })
                        .collect();
                    cw.push((Place::Prime(q.clone()), lv));
                }
            }
            PrimeComponent::NumberFieldUnits { field, generators } => {
                let embs = field.embeddings(128)?;
                for e in embs.iter() {
                    let lv = (0..generators.len())
                        .map(|gi| ctx.embedding_atom(ci, gi, e.index))
                        .collect();
                    cv.push((
                        Place::Embedding {
                            index: e.index,
                            real: e.real,
                            conj: e.conj,
                        },
                        lv,
                    ));
                }
            }
            PrimeComponent::FunctionField {
                p,
                generators,
                places,
            } => {
                let pz = BigInt::from(*p);
                for (gi, g) in generators.iter().enumerate() {
                    let total: i64 = places
                        .iter()
                        .map(|pi| pi.deg() as i64 * ord_at_unchecked(g, pi))
                        .sum::<i64>()
                        + fp_ord_infinity(g)?;
                    if total != 0 {
                        return Err(Error::Domain(format!(
                            "product formula fails for generator {gi} ({g})"
                        )));
                    }
                }
                for pi in places {
                    let lv = generators
                        .iter()
                        .map(|g| ExactLog::prime(pz.clone(), -(pi.deg() as i64) * ord_at_unchecked(g, pi)))
                        .collect();
                    cw.push((Place::Polynomial(pi.clone()), lv));
                }
                let lv = generators
                    .iter()
                    .map(|g| Ok(ExactLog::prime(pz.clone(), -fp_ord_infinity(g)?)))
                    .collect::<Result<Vec<_>>>()?;
                cw.push((Place::FunctionInfinity { p: *p }, lv));
            }
        }
        let m = entry.multiplicity;
        for copy in 0..m {
            for (place, lv) in &cv {
                v.push(Character {
                    kind: CharacterKind::Archimedean,
                    place: place.clone(),
                    component: ci,
                    copy,
                    multiplicity: m,
                    log_vector: lv.clone(),
                });
            }
            for (place, lv) in &cw {
                w.push(Character {
                    kind: CharacterKind::NonArchimedean,
                    place: place.clone(),
                    component: ci,
                    copy,
                    multiplicity: m,
                    log_vector: lv.clone(),
                });
            }
        }
    }
    Ok((v, w))
}

/// Σ v_i w_i for rational v.
pub fn dot(lv: &[ExactLog], v: &[BigRational]) -> ExactLog {
    ExactLog::combine(lv, v)
}

/// Integer vector as rationals.
pub fn to_rational(n: &[i64]) -> Vec<BigRational> {
    n.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}
