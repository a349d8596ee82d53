//! Exact linear combinations of logarithms of algebraic numbers.
//!
//! A log-vector coordinate is a ℚ-combination of atoms: `log q` for a prime q,
//! or `log|r|` for a root r of the square-free characteristic polynomial of a
//! number-field generator. Known ℚ-linear relations among the root atoms of one
//! generator (complex conjugation, unit-circle roots, r ↦ ±1/r symmetry and the
//! product formula for units) are reduced away, so formal vanishing is an exact
//! zero certificate. Prime atoms are linearly independent, so a formally
//! nonzero prime-only combination is certainly nonzero. Anything left over is
//! decided by interval evaluation, with a Liouville-type bound certifying
//! |γ| = 1 for products γ of embedded units.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::descriptor::{PrimeComponent, SystemDescriptor};
use crate::algebraic::field::{FieldElement, NumberField};
use crate::algebraic::poly::QPoly;
use crate::algebraic::roots::{isolate_roots, RootBox};
use crate::error::{Error, Result};
use crate::kernel::dyadic::Dyadic;
use crate::kernel::expr::{DEFAULT_MAX_PRECISION, DEFAULT_START_PRECISION};
use crate::kernel::interval::{ComplexInterval, RealInterval};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// log q.
    Prime(BigInt),
    /// log|r| for root `root` of the square-free charpoly of generator `gen`
    /// of component `comp`.
    Root { comp: usize, gen: usize, root: usize },
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Prime(q) => write!(f, "log {q}"),
            Atom::Root { comp, gen, root } => write!(f, "log|r{root}(u{comp}.{gen})|"),
        }
    }
}

/// Σ c_a · a over atoms, with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactLog {
    terms: BTreeMap<Atom, BigRational>,
}

impl ExactLog {
    pub fn zero() -> Self {
        ExactLog::default()
    }

    pub fn atom(a: Atom, c: BigRational) -> Self {
        let mut e = ExactLog::zero();
        e.add_term(a, c);
        e
    }

    /// c · log q.
    pub fn prime(q: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        ExactLog::atom(Atom::Prime(q.into()), BigRational::from_integer(c.into()))
    }

    pub fn terms(&self) -> &BTreeMap<Atom, BigRational> {
        &self.terms
    }

    pub fn add_term(&mut self, a: Atom, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, o: &ExactLog) -> ExactLog {
        let mut r = self.clone();
        for (a, c) in &o.terms {
            r.add_term(a.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &ExactLog) -> ExactLog {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ExactLog {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, k: &BigRational) -> ExactLog {
        if k.is_zero() {
            return ExactLog::zero();
        }
        ExactLog {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_prime_only(&self) -> bool {
        self.terms.keys().all(|a| matches!(a, Atom::Prime(_)))
    }

    /// Σ v_i · x_i.
    pub fn combine(xs: &[ExactLog], v: &[BigRational]) -> ExactLog {
        let mut r = ExactLog::zero();
        for (x, c) in xs.iter().zip(v) {
            r = r.add(&x.scale(c));
        }
        r
    }

    fn coeff_bits(&self) -> u32 {
        self.terms
            .values()
            .map(|c| c.numer().bits().max(c.denom().bits()) as u32)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for ExactLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{a}")?;
            } else {
                write!(f, "({c})·{a}")?;
            }
        }
        Ok(())
    }
}

/// Outcome of a certified sign decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogSign {
    Negative,
    Zero,
    Positive,
    Undecided,
}

impl LogSign {
    pub fn is_zero(self) -> bool {
        self == LogSign::Zero
    }
    pub fn is_nonzero(self) -> bool {
        matches!(self, LogSign::Negative | LogSign::Positive)
    }
}

/// Root data for one number-field generator.
#[derive(Debug)]
pub struct RootGroup {
    pub sqf: QPoly,
    /// root index → representative (conjugate pairs share one atom).
    pub rep: Vec<usize>,
    /// embedding index → representative root of σ(u).
    pub emb_rep: Vec<usize>,
    /// pivot root → its value as a combination of free roots.
    relations: BTreeMap<usize, BTreeMap<usize, BigRational>>,
    boxes: Mutex<BTreeMap<u32, Arc<Vec<RootBox>>>>,
}

impl RootGroup {
    fn roots(&self, prec: u32) -> Result<Arc<Vec<RootBox>>> {
        if let Some(r) = self.boxes.lock().unwrap().get(&prec) {
            return Ok(r.clone());
        }
        let r = Arc::new(isolate_roots(&self.sqf, prec)?);
        self.boxes.lock().unwrap().insert(prec, r.clone());
        Ok(r)
    }

    /// Whether `root` is eliminated by a relation.
    pub fn is_pivot(&self, root: usize) -> bool {
        self.relations.contains_key(&root)
    }
}

#[derive(Debug)]
struct FieldComponent {
    field: Arc<NumberField>,
    generators: Vec<FieldElement>,
}

/// Relations and evaluation data for every root atom of a system.
#[derive(Debug, Default)]
pub struct LogContext {
    groups: BTreeMap<(usize, usize), RootGroup>,
    fields: BTreeMap<usize, FieldComponent>,
}

/// Unique box overlapping the value produced at each precision.
fn locate(
    group_roots: impl Fn(u32) -> Result<Arc<Vec<RootBox>>>,
    value: impl Fn(u32) -> Result<Option<ComplexInterval>>,
) -> Result<usize> {
    let mut prec = 128;
    while prec <= DEFAULT_MAX_PRECISION {
        let boxes = group_roots(prec)?;
        if let Some(z) = value(prec)? {
            let hits: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].z.overlaps(&z)).collect();
            if hits.len() == 1 {
                return Ok(hits[0]);
            }
        }
        prec *= 2;
    }
    Err(Error::Undecided("could not match a value to a root".into()))
}

/// Reduced row echelon form; pivots are chosen from the highest column down.
fn rref(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> BTreeMap<usize, BTreeMap<usize, BigRational>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in (0..ncols).rev() {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pv = rows[r][col].clone();
        for c in 0..ncols {
            rows[r][c] = &rows[r][c] / &pv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..ncols {
                    let t = &f * &rows[r][c];
                    rows[i][c] -= t;
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    pivots
        .into_iter()
        .map(|(row, col)| {
            let sub = (0..ncols)
                .filter(|c| !pivot_cols.contains(c) && !rows[row][*c].is_zero())
                .map(|c| (c, -rows[row][c].clone()))
                .collect();
            (col, sub)
        })
        .collect()
}

fn neg_arg(f: &QPoly) -> QPoly {
    QPoly::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect(),
    )
}

fn build_group(field: &NumberField, u: &FieldElement) -> Result<RootGroup> {
    let sqf = field.charpoly(u).squarefree_part();
    let n = sqf.deg();
    let mut group = RootGroup {
        sqf: sqf.clone(),
        rep: (0..n).collect(),
        emb_rep: vec![],
        relations: BTreeMap::new(),
        boxes: Mutex::new(BTreeMap::new()),
    };
    let base = group.roots(128)?;
    for (i, b) in base.iter().enumerate() {
        if let Some(c) = b.conj {
            group.rep[i] = i.min(c);
        }
    }
    let m = field.degree();
    let mut emb_raw = Vec::with_capacity(m);
    for s in 0..m {
        emb_raw.push(locate(
            |p| group.roots(p),
            |p| Ok(Some(field.embed_at(u, s, p)?)),
        )?);
    }
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let unit = |i: usize| {
        let mut r = vec![BigRational::zero(); n];
        r[i] = BigRational::one();
        r
    };
    // product formula: Σ_σ log|σ(u)| = 0
    if field.norm(u).abs().is_one() {
        let mut row = vec![BigRational::zero(); n];
        for &r in &emb_raw {
            row[group.rep[r]] += BigRational::one();
        }
        rows.push(row);
    }
    // roots ±1
    for (i, b) in base.iter().enumerate() {
        for s in [1i64, -1] {
            let q = BigRational::from_integer(s.into());
            if b.real && b.z.re.contains_rational(&q) && sqf.eval(&q).is_zero() {
                rows.push(unit(group.rep[i]));
            }
        }
    }
    // r ↦ ±1/r symmetry
    let rev = sqf.reversed().monic();
    let flip = if rev == sqf {
        Some(1)
    } else if !sqf.coeff(0).is_zero() && rev == neg_arg(&sqf).monic() {
        Some(-1)
    } else {
        None
    };
    if let Some(sign) = flip {
        for i in 0..n {
            let j = locate(
                |p| group.roots(p),
                |p| {
                    let b = group.roots(p)?;
                    Ok(b[i].z.recip().map(|z| {
                        if sign < 0 {
                            -&z
                        } else {
                            z
                        }
                    }))
                },
            )?;
            let mut row = unit(group.rep[i]);
            row[group.rep[j]] += BigRational::one();
            rows.push(row);
        }
    }
    group.relations = rref(rows, n);
    group.emb_rep = emb_raw.iter().map(|&r| group.rep[r]).collect();
    Ok(group)
}

impl LogContext {
    pub fn build(desc: &SystemDescriptor) -> Result<LogContext> {
        let mut ctx = LogContext::default();
        for (ci, entry) in desc.components.iter().enumerate() {
            if let PrimeComponent::NumberFieldUnits { field, generators } = &entry.component {
                for (gi, u) in generators.iter().enumerate() {
                    ctx.groups.insert((ci, gi), build_group(field, u)?);
                }
                ctx.fields.insert(
                    ci,
                    FieldComponent {
                        field: field.clone(),
                        generators: generators.clone(),
                    },
                );
            }
        }
        Ok(ctx)
    }

    pub fn group(&self, comp: usize, gen: usize) -> Option<&RootGroup> {
        self.groups.get(&(comp, gen))
    }

    /// log|σ(u_gen)| for embedding `emb` of component `comp`, reduced.
    pub fn embedding_atom(&self, comp: usize, gen: usize, emb: usize) -> ExactLog {
        let g = &self.groups[&(comp, gen)];
        self.reduce(&ExactLog::atom(
            Atom::Root {
                comp,
                gen,
                root: g.emb_rep[emb],
            },
            BigRational::one(),
        ))
    }

    /// Canonical form modulo the known relations.
    pub fn reduce(&self, e: &ExactLog) -> ExactLog {
        let mut out = ExactLog::zero();
        for (a, c) in &e.terms {
            match a {
                Atom::Root { comp, gen, root } => {
                    let g = &self.groups[&(*comp, *gen)];
                    let root = g.rep[*root];
                    match g.relations.get(&root) {
                        Some(sub) => {
                            for (q, k) in sub {
                                out.add_term(
                                    Atom::Root {
                                        comp: *comp,
                                        gen: *gen,
                                        root: *q,
                                    },
                                    c * k,
                                );
                            }
                        }
                        None => out.add_term(
                            Atom::Root {
                                comp: *comp,
                                gen: *gen,
                                root,
                            },
                            c.clone(),
                        ),
                    }
                }
                Atom::Prime(_) => out.add_term(a.clone(), c.clone()),
            }
        }
        out
    }

    fn atom_value(&self, a: &Atom, prec: u32) -> Result<RealInterval> {
        match a {
            Atom::Prime(q) => Ok(RealInterval::from_int(q.clone(), prec)
                .ln()
                .expect("log of a prime")),
            Atom::Root { comp, gen, root } => {
                let g = &self.groups[&(*comp, *gen)];
                let b = g.roots(prec)?;
                b[*root]
                    .z
                    .abs()
                    .ln()
                    .ok_or_else(|| Error::domain("log of zero root"))
            }
        }
    }

    /// Interval enclosure at roughly `prec` bits.
    pub fn eval(&self, e: &ExactLog, prec: u32) -> Result<RealInterval> {
        let w = prec + 16 + e.coeff_bits();
        let mut acc = RealInterval::zero(w);
        for (a, c) in &e.terms {
            acc = &acc + &self.atom_value(a, w)?.mul_rational(c);
        }
        Ok(acc)
    }

    /// Certified sign of a combination, escalating precision up to `max_prec`.
    pub fn sign(&self, e: &ExactLog, max_prec: u32) -> Result<LogSign> {
        let e = self.reduce(e);
        if e.is_zero() {
            return Ok(LogSign::Zero);
        }
        let prime_only = e.is_prime_only();
        let mut prec = DEFAULT_START_PRECISION;
        loop {
            let v = self.eval(&e, prec)?;
            if v.is_positive() {
                return Ok(LogSign::Positive);
            }
            if v.is_negative() {
                return Ok(LogSign::Negative);
            }
            if !prime_only && self.liouville_zero(&e, prec)? {
                return Ok(LogSign::Zero);
            }
            if prec >= max_prec {
                return Ok(LogSign::Undecided);
            }
            prec = (prec * 2).min(max_prec);
        }
    }

    /// Exact or interval decision of e = 0; never errors on undecidable input.
    pub fn zero_test(&self, e: &ExactLog) -> LogSign {
        self.sign(e, DEFAULT_MAX_PRECISION).unwrap_or(LogSign::Undecided)
    }

    /// For e = Σ c·log|σ(u)| over roots of one field: certify e = 0 by showing
    /// δ = |γ|² = 1 with γ = ∏ σ(u)^{Lc}, using that a unit δ ≠ 1 satisfies
    /// |δ − 1| ≥ 1 / ∏_{π ≠ id} max(1, |π(δ) − 1|) over permutations π of the
    /// embeddings (every Galois conjugate of δ is such a π(δ)).
    fn liouville_zero(&self, e: &ExactLog, prec: u32) -> Result<bool> {
        let mut comp = None;
        for a in e.terms.keys() {
            match a {
                Atom::Prime(_) => return Ok(false),
                Atom::Root { comp: c, .. } => {
                    if comp.is_some_and(|x| x != *c) {
                        return Ok(false);
                    }
                    comp = Some(*c);
                }
            }
        }
        let Some(comp) = comp else { return Ok(true) };
        let fc = &self.fields[&comp];
        let m = fc.field.degree();
        if m > 8 {
            return Ok(false);
        }
        let l = e
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let embs = fc.field.embeddings(prec + 32)?;
        let ngen = fc.generators.len();
        let mut exps = vec![vec![0i64; m]; ngen];
        for (a, c) in &e.terms {
            let Atom::Root { gen, root, .. } = a else { unreachable!() };
            let g = &self.groups[&(comp, *gen)];
            let s = g.emb_rep.iter().position(|r| r == root).expect("root hit by an embedding");
            let k = (c * BigRational::from_integer(l.clone())).to_integer();
            let Some(k) = k.to_i64().filter(|k| k.abs() < 1 << 20) else {
                return Ok(false);
            };
            let sc = embs[s].conj.unwrap_or(s);
            exps[*gen][s] += k;
            exps[*gen][sc] += k;
        }
        let w = prec + 32;
        let mut vals = Vec::with_capacity(ngen);
        for u in &fc.generators {
            let mut row = Vec::with_capacity(m);
            for s in 0..m {
                row.push(fc.field.embed_at(u, s, w)?);
            }
            vals.push(row);
        }
        let value = |perm: &[usize]| -> Option<ComplexInterval> {
            let mut acc = ComplexInterval::one(w);
            for (g, row) in exps.iter().enumerate() {
                for (s, &k) in row.iter().enumerate() {
                    if k != 0 {
                        acc = &acc * &vals[g][perm[s]].powi_signed(k)?;
                    }
                }
            }
            Some(acc)
        };
        let ident: Vec<usize> = (0..m).collect();
        let one = ComplexInterval::one(w);
        let Some(delta) = value(&ident) else { return Ok(false) };
        let dist = (&delta - &one).abs();
        let mut bound = RealInterval::one(w);
        let mut perm = ident.clone();
        while next_permutation(&mut perm) {
            let Some(v) = value(&perm) else { return Ok(false) };
            let d = (&v - &one).abs();
            bound = &bound * &d.max(&RealInterval::one(w));
        }
        let prod = &dist * &bound;
        Ok(prod.hi() < &Dyadic::one())
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::descriptor::parse_descriptor;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn prime_combinations_are_exact() {
        let ctx = LogContext::default();
        let e = ExactLog::prime(2, 3).sub(&ExactLog::prime(3, 2));
        // 3 log 2 − 2 log 3 = log(8/9) < 0
        assert_eq!(ctx.sign(&e, 256).unwrap(), LogSign::Negative);
        let z = e.sub(&e);
        assert!(z.is_zero());
        assert_eq!(ctx.zero_test(&z), LogSign::Zero);
    }

    #[test]
    fn sextic_unit_circle_atoms_vanish() {
        let d = parse_descriptor(
            "d = 2\n[[components]]\nclass = \"number_field_units\"\nmin_poly = [1, -2, -5, -3, -5, -2, 1]\ngenerators = [[0,1,0,0,0,0],[0,-6,-6,-3,-6,2]]\n",
        )
        .unwrap();
        let ctx = LogContext::build(&d).unwrap();
        let PrimeComponent::NumberFieldUnits { field, .. } = &d.components[0].component else {
            panic!()
        };
        let embs = field.embeddings(128).unwrap();
        let cx: Vec<usize> = embs.iter().filter(|e| !e.real).map(|e| e.index).collect();
        assert_eq!(cx.len(), 2);
        for &s in &cx {
            assert!(ctx.embedding_atom(0, 0, s).is_zero());
            assert!(ctx.embedding_atom(0, 1, s).is_zero());
        }
        // the four real places: atoms come in ± pairs, none vanish
        let reals: Vec<ExactLog> = embs
            .iter()
            .filter(|e| e.real)
            .map(|e| ctx.embedding_atom(0, 0, e.index))
            .collect();
        assert!(reals.iter().all(|x| !x.is_zero()));
        let total = reals.iter().fold(ExactLog::zero(), |a, b| a.add(b));
        assert!(ctx.reduce(&total).is_zero());
    }

    #[test]
    fn liouville_certifies_hidden_relation() {
        // in ℚ(√2): log|σ(u²)| − 2 log|σ(u)| is formally zero; the interesting
        // case is a relation the reductions cannot see, e.g. across generators
        let d = parse_descriptor(
            "d = 2\n[[components]]\nclass = \"number_field_units\"\nmin_poly = [-2, 0, 1]\ngenerators = [[1,1],[3,2]]\n",
        )
        .unwrap();
        let ctx = LogContext::build(&d).unwrap();
        // 3 + 2√2 = (1 + √2)², so log|σ(u1)| = 2 log|σ(u0)|
        let e = ctx
            .embedding_atom(0, 1, 0)
            .sub(&ctx.embedding_atom(0, 0, 0).scale(&q(2)));
        assert!(!e.is_zero());
        assert_eq!(ctx.zero_test(&e), LogSign::Zero);
        let f = ctx
            .embedding_atom(0, 1, 0)
            .sub(&ctx.embedding_atom(0, 0, 0).scale(&q(3)));
        assert_eq!(ctx.zero_test(&f), LogSign::Negative);
    }

    #[test]
    fn rref_picks_high_pivots() {
        let rows = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let r = rref(rows, 3);
        assert_eq!(r.len(), 2);
        assert!(r.contains_key(&2) && r.contains_key(&1));
        assert_eq!(r[&2][&0], q(1));
        assert_eq!(r[&1][&0], q(-1));
    }
}
