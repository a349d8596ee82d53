//! Analyzed systems: descriptor, characters 𝒱 and 𝒲, exact-log context and
//! the ergodicity check.

pub mod characters;
pub mod descriptor;
pub mod exact_log;
pub mod fixtures;

use num_rational::BigRational;

pub use characters::{build_characters, Character, CharacterKind, Place};
pub use descriptor::{parse_descriptor, ComponentClass, ComponentEntry, PrimeComponent, SystemDescriptor};
pub use exact_log::{Atom, ExactLog, LogContext, LogSign};

use crate::algebraic::matrix::QMatrix;
use crate::error::Result;
use crate::kernel::expr::DEFAULT_MAX_PRECISION;
use crate::kernel::interval::RealInterval;

/// Three-valued answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Undecided,
}

impl Tri {
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ErgodicityReport {
    /// Every component has a generator of infinite order.
    pub ergodic: Tri,
    /// Per component: no nontrivial relation ∏ g_i^{m_i} = 1.
    pub independent: Vec<Tri>,
}

/// Working precision of the cached log-vector enclosures.
const CACHE_PREC: u32 = 192;

/// A descriptor together with its characters and exact-log context.
#[derive(Debug)]
pub struct System {
    pub descriptor: SystemDescriptor,
    pub ctx: LogContext,
    chars: Vec<Character>,
    nv: usize,
    enclosures: Vec<Vec<RealInterval>>,
    pub ergodicity: ErgodicityReport,
}

impl System {
    pub fn new(descriptor: SystemDescriptor) -> Result<System> {
        let ctx = LogContext::build(&descriptor)?;
        let (v, w) = build_characters(&descriptor, &ctx)?;
        let nv = v.len();
        let chars: Vec<Character> = v.into_iter().chain(w).collect();
        let enclosures = chars
            .iter()
            .map(|c| {
                c.log_vector
                    .iter()
                    .map(|x| ctx.eval(x, CACHE_PREC))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sys = System {
            descriptor,
            ctx,
            chars,
            nv,
            enclosures,
            ergodicity: ErgodicityReport {
                ergodic: Tri::Undecided,
                independent: vec![],
            },
        };
        sys.ergodicity = sys.check_ergodicity();
        Ok(sys)
    }

    pub fn parse(document: &str) -> Result<System> {
        System::new(parse_descriptor(document)?)
    }

    pub fn d(&self) -> usize {
        self.descriptor.d
    }

    /// 𝒱: archimedean characters.
    pub fn v(&self) -> &[Character] {
        &self.chars[..self.nv]
    }

    /// 𝒲: non-archimedean characters.
    pub fn w(&self) -> &[Character] {
        &self.chars[self.nv..]
    }

    /// 𝒱 followed by 𝒲; indices into this list identify characters.
    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    /// Enclosures of w_χ at `prec` bits or better; index into `characters()`.
    pub fn log_enclosure(&self, idx: usize, prec: u32) -> Result<Vec<RealInterval>> {
        if prec <= CACHE_PREC - 32 {
            return Ok(self.enclosures[idx].clone());
        }
        self.chars[idx]
            .log_vector
            .iter()
            .map(|x| self.ctx.eval(x, prec))
            .collect()
    }

    /// log χ*(v) = v · w_χ.
    pub fn log_star(&self, idx: usize, v: &[RealInterval], prec: u32) -> Result<RealInterval> {
        let w = self.log_enclosure(idx, prec)?;
        let mut acc = RealInterval::zero(prec);
        for (a, b) in v.iter().zip(&w) {
            acc = &acc + &(a * b);
        }
        Ok(acc)
    }

    /// χ*(v) = exp(v · w_χ), outward rounded.
    pub fn chi_star(&self, idx: usize, v: &[RealInterval], prec: u32) -> Result<RealInterval> {
        Ok(self.log_star(idx, v, prec)?.exp())
    }

    /// Exact (s_integer, function_field) or certified-interval decision of v · w_χ = 0.
    pub fn log_vector_zero_test(&self, idx: usize, v: &[BigRational]) -> LogSign {
        let e = characters::dot(&self.chars[idx].log_vector, v);
        self.ctx
            .sign(&e, DEFAULT_MAX_PRECISION)
            .unwrap_or(LogSign::Undecided)
    }

    fn check_ergodicity(&self) -> ErgodicityReport {
        let d = self.d();
        let mut ergodic = Tri::True;
        let mut independent = Vec::new();
        for (ci, entry) in self.descriptor.components.iter().enumerate() {
            let chars: Vec<&Character> = self
                .chars
                .iter()
                .filter(|c| c.component == ci && c.copy == 0)
                .collect();
            // g_i has infinite order iff some |g_i|_χ ≠ 1
            let mut any_infinite = Tri::False;
            for i in 0..d {
                let mut t = Tri::False;
                for c in &chars {
                    match self.ctx.zero_test(&c.log_vector[i]) {
                        LogSign::Zero => {}
                        LogSign::Undecided => t = Tri::Undecided,
                        _ => {
                            t = Tri::True;
                            break;
                        }
                    }
                }
                match t {
                    Tri::True => {
                        any_infinite = Tri::True;
                        break;
                    }
                    Tri::Undecided => any_infinite = Tri::Undecided,
                    Tri::False => {}
                }
            }
            ergodic = match (ergodic, any_infinite) {
                (Tri::False, _) | (_, Tri::False) => Tri::False,
                (Tri::Undecided, _) | (_, Tri::Undecided) => Tri::Undecided,
                _ => Tri::True,
            };
            let ind = match &entry.component {
                PrimeComponent::SInteger { .. } | PrimeComponent::FunctionField { .. } => {
                    // finite-place log-vectors are integer multiples of a single prime
                    // log (and the real place is their negated sum): exact rank
                    let rows: Vec<Vec<BigRational>> = chars
                        .iter()
                        .filter(|c| !c.is_archimedean())
                        .map(|c| {
                            c.log_vector
                                .iter()
                                .map(|x| x.terms().values().next().cloned().unwrap_or_default())
                                .collect()
                        })
                        .collect();
                    if !rows.is_empty() && QMatrix::new(rows).rank() == d {
                        Tri::True
                    } else {
                        Tri::False
                    }
                }
                PrimeComponent::NumberFieldUnits { .. } => self.interval_rank_full(&chars),
            };
            independent.push(ind);
        }
        ErgodicityReport {
            ergodic,
            independent,
        }
    }

    fn interval_rank_full(&self, chars: &[&Character]) -> Tri {
        let d = self.d();
        if chars.len() < d {
            return Tri::False;
        }
        let mut prec = 64;
        while prec <= DEFAULT_MAX_PRECISION {
            let rows: Option<Vec<Vec<RealInterval>>> = chars
                .iter()
                .map(|c| c.log_vector.iter().map(|x| self.ctx.eval(x, prec).ok()).collect())
                .collect();
            let Some(rows) = rows else { return Tri::Undecided };
            for sel in combinations(rows.len(), d) {
                let m: Vec<Vec<RealInterval>> = sel.iter().map(|&r| rows[r].clone()).collect();
                if !interval_det(&m).contains_zero() {
                    return Tri::True;
                }
            }
            prec *= 4;
        }
        Tri::Undecided
    }
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant by cofactor expansion (small matrices only).
pub fn interval_det(m: &[Vec<RealInterval>]) -> RealInterval {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let prec = m[0][0].prec();
    let mut acc = RealInterval::zero(prec);
    for j in 0..n {
        let minor: Vec<Vec<RealInterval>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = &m[0][j] * &interval_det(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::interval::RealInterval;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn sys(name: &str) -> System {
        System::new(fixtures::load(name).unwrap()).unwrap()
    }

    #[test]
    fn times2times3_characters() {
        let s = sys("times2times3");
        assert_eq!(s.v().len(), 1);
        assert_eq!(s.w().len(), 2);
        assert_eq!(s.v()[0].log_vector, vec![ExactLog::prime(2, 1), ExactLog::prime(3, 1)]);
        assert_eq!(s.w()[0].log_vector, vec![ExactLog::prime(2, -1), ExactLog::zero()]);
        assert_eq!(s.w()[1].log_vector, vec![ExactLog::zero(), ExactLog::prime(3, -1)]);
        let one = RealInterval::one(64);
        let six = s.chi_star(0, &[one.clone(), one.clone()], 64).unwrap();
        assert!(six.contains_f64(6.0) && six.width().to_f64() < 1e-15);
        let zero = RealInterval::zero(64);
        assert!(s.chi_star(1, &[zero.clone(), zero], 64).unwrap().contains_f64(1.0));
        assert_eq!(s.log_vector_zero_test(2, &[q(1), q(0)]), LogSign::Zero);
        assert!(s.log_vector_zero_test(0, &[q(1), q(-1)]).is_nonzero());
        assert_eq!(s.ergodicity.ergodic, Tri::True);
        assert_eq!(s.ergodicity.independent, vec![Tri::True]);
    }

    #[test]
    fn ledrappier_characters() {
        let s = sys("ledrappier");
        assert!(s.v().is_empty());
        let names: Vec<String> = s.w().iter().map(|c| c.place.to_string()).collect();
        assert_eq!(names, vec!["(t)", "(t+1)", "inf(t)"]);
        assert_eq!(s.w()[0].log_vector, vec![ExactLog::prime(2, -1), ExactLog::zero()]);
        assert_eq!(s.w()[1].log_vector, vec![ExactLog::zero(), ExactLog::prime(2, -1)]);
        assert_eq!(s.w()[2].log_vector, vec![ExactLog::prime(2, 1), ExactLog::prime(2, 1)]);
        assert_eq!(s.log_vector_zero_test(2, &[q(1), q(-1)]), LogSign::Zero);
        assert_eq!(s.ergodicity.independent, vec![Tri::True]);
    }

    #[test]
    fn number_field_characters() {
        let s = sys("sqrt2sqrt3");
        assert_eq!(s.v().len(), 4);
        assert!(s.w().is_empty());
        for c in s.v() {
            assert!(!c.is_zero());
        }
        assert_eq!(s.ergodicity.independent, vec![Tri::True]);
        let x = sys("dk-sextic");
        assert_eq!(x.v().len(), 6);
        assert_eq!(x.v().iter().filter(|c| c.is_zero()).count(), 2);
        assert_eq!(x.ergodicity.ergodic, Tri::True);
        assert_eq!(x.ergodicity.independent, vec![Tri::True]);
    }

    #[test]
    fn multiplicity_repeats_characters() {
        let d = fixtures::load("times2times3").unwrap().with_multiplicity(0, 2).unwrap();
        let s = System::new(d).unwrap();
        assert_eq!(s.v().len(), 2);
        assert_eq!(s.w().len(), 4);
        assert_eq!(s.w()[0].name(), "c0:2-adic#0");
    }

    #[test]
    fn dependent_generators_detected() {
        let s = System::parse("d = 2\n[[components]]\nclass = \"s_integer\"\ngenerators = [\"2\", \"-8\"]\n").unwrap();
        assert_eq!(s.ergodicity.independent, vec![Tri::False]);
        assert_eq!(s.ergodicity.ergodic, Tri::True);
        let t = System::parse("d = 2\n[[components]]\nclass = \"s_integer\"\ngenerators = [\"-1\", \"1\"]\n").unwrap();
        assert_eq!(t.ergodicity.ergodic, Tri::False);
    }
}
