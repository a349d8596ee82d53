//! Directional zeta functions ζ_n(z) = exp Σ_j |F_j(α^n)| z^j / j.
//!
//! For an expansive n the inverse roots are c_L = μ · G(n) · ∏_{χ∈L} χ(n) over
//! subsets L ⊆ 𝒱, with G(n) = ∏_{χ∈𝒲} max(|χ(n)|, 1), and
//! F_j = −Σ_L λ_L c_L^j. The signs μ and λ_L are recovered by fitting against
//! exact counts; values that coincide are fitted with one integer weight.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::arith::rational_pow;
use crate::kernel::interval::{ComplexInterval, RealInterval};
use crate::periodic::{count, PeriodicCount};
use crate::system::characters::to_rational;
use crate::system::descriptor::PrimeComponent;
use crate::system::exact_log::{Atom, ExactLog, LogSign};
use crate::system::{Place, System, Tri};

/// Inverse-root value: exact rational, or a certified complex enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CValue {
    Exact(BigRational),
    Approx(ComplexInterval),
}

impl CValue {
    pub fn to_complex(&self, prec: u32) -> ComplexInterval {
        match self {
            CValue::Exact(q) => ComplexInterval::from_rational(q, prec),
            CValue::Approx(z) => z.clone(),
        }
    }

    pub fn neg(&self) -> CValue {
        match self {
            CValue::Exact(q) => CValue::Exact(-q),
            CValue::Approx(z) => CValue::Approx(ComplexInterval::new(-&z.re, -&z.im)),
        }
    }

    pub fn recip(&self) -> Option<CValue> {
        match self {
            CValue::Exact(q) if !q.is_zero() => Some(CValue::Exact(q.recip())),
            CValue::Exact(_) => None,
            CValue::Approx(z) => z.recip().map(CValue::Approx),
        }
    }

    /// (re, im) midpoint.
    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            CValue::Exact(q) => (q.to_f64().unwrap_or(f64::NAN), 0.0),
            CValue::Approx(z) => z.mid_f64(),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64();
        a.hypot(b)
    }

    fn same(&self, o: &CValue) -> bool {
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => a == b,
            _ => self.to_complex(64).overlaps(&o.to_complex(64)),
        }
    }
}

impl fmt::Display for CValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CValue::Exact(q) => write!(f, "{q}"),
            CValue::Approx(z) => write!(f, "{z}"),
        }
    }
}

/// One coefficient c_L with the subset L (indices into 𝒱) that produced it.
#[derive(Clone, Debug)]
pub struct InverseRoot {
    pub value: CValue,
    pub subset: Vec<usize>,
}

/// A factor (1 − c z)^λ.
#[derive(Clone, Debug)]
pub struct ZetaFactor {
    pub c: CValue,
    pub lambda: i32,
    pub subset: Vec<usize>,
}

/// Equal coefficients fitted with one integer weight in [−size, size].
#[derive(Clone, Debug)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub weight: i64,
}

#[derive(Clone, Debug)]
pub struct ExponentFit {
    pub mu: i32,
    /// λ per input coefficient (±1), distributed within clusters.
    pub lambda: Vec<i32>,
    pub clusters: Vec<Cluster>,
}

#[derive(Clone, Debug)]
pub struct ZetaFactorization {
    pub n: Vec<i64>,
    pub expansive: Tri,
    pub mu: i32,
    pub factors: Vec<ZetaFactor>,
    pub clusters: Vec<Cluster>,
    /// Number of count terms used by the fit.
    pub terms_used: usize,
    /// Working precision of the coefficient enclosures (0 when exact).
    pub precision: u32,
}

impl ZetaFactorization {
    /// Factors with nonzero net exponent, one per distinct value: (c, net λ).
    pub fn net_factors(&self) -> Vec<(CValue, i64)> {
        self.clusters
            .iter()
            .filter(|c| c.weight != 0)
            .map(|c| (self.factors[c.members[0]].c.clone(), c.weight))
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.factors.iter().all(|f| matches!(f.c, CValue::Exact(_)))
    }
}

/// Result of checking F_j = −Σ λ c^j.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub passed: bool,
    pub checked: usize,
    /// Largest |F_j − value| / F_j; exactly 0 on the exact path when passing.
    pub max_deviation: f64,
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ZetaOptions {
    /// Proceed outside the certified-expansive regime.
    pub force: bool,
    /// Number of terms to verify (at least the fit length is always used).
    pub j_check: usize,
    pub start_precision: u32,
    pub max_precision: u32,
    /// Cap on fit search nodes.
    pub node_cap: u64,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        ZetaOptions {
            force: false,
            j_check: 8,
            start_precision: 128,
            max_precision: crate::kernel::expr::DEFAULT_MAX_PRECISION,
            node_cap: 1 << 20,
        }
    }
}

/// True iff n · w_χ ≠ 0 for every character.
pub fn is_expansive_element(sys: &System, n: &[i64]) -> Result<Tri> {
    check_n(sys, n)?;
    let v = to_rational(n);
    let mut out = Tri::True;
    for idx in 0..sys.characters().len() {
        match sys.log_vector_zero_test(idx, &v) {
            LogSign::Zero => return Ok(Tri::False),
            LogSign::Undecided => out = Tri::Undecided,
            _ => {}
        }
    }
    Ok(out)
}

/// Characters whose zero test is undecided at n, by name.
pub fn undecided_characters(sys: &System, n: &[i64]) -> Vec<String> {
    let v = to_rational(n);
    (0..sys.characters().len())
        .filter(|&i| sys.log_vector_zero_test(i, &v) == LogSign::Undecided)
        .map(|i| sys.characters()[i].name())
        .collect()
}

fn check_n(sys: &System, n: &[i64]) -> Result<()> {
    if n.len() != sys.d() {
        return Err(Error::validation(
            "n",
            format!("expected {} coordinates, found {}", sys.d(), n.len()),
        ));
    }
    if n.iter().all(|&x| x == 0) {
        return Err(Error::domain("n must be nonzero"));
    }
    Ok(())
}

/// exp of a prime-only combination with integer coefficients.
fn exp_exact(e: &ExactLog) -> Option<BigRational> {
    let mut r = BigRational::one();
    for (a, c) in e.terms() {
        let Atom::Prime(q) = a else { return None };
        if !c.is_integer() {
            return None;
        }
        let k = c.to_integer().to_i64()?;
        r *= rational_pow(&BigRational::from_integer(q.clone()), k);
    }
    Some(r)
}

/// χ(n) for every archimedean character (signed or complex).
fn archimedean_values(sys: &System, n: &[i64], prec: u32) -> Result<Vec<CValue>> {
    let mut out = Vec::with_capacity(sys.nv());
    for ch in sys.v() {
        let comp = &sys.descriptor.components[ch.component].component;
        let val = match (comp, &ch.place) {
            (PrimeComponent::SInteger { generators, .. }, _) => {
                let mut x = BigRational::one();
                for (g, &k) in generators.iter().zip(n) {
                    x *= rational_pow(g, k);
                }
                CValue::Exact(x)
            }
            (PrimeComponent::NumberFieldUnits { field, generators }, Place::Embedding { index, .. }) => {
                let mut x = field.one();
                for (u, &k) in generators.iter().zip(n) {
                    if k != 0 {
                        x = field.mul(&x, &field.pow(u, k)?);
                    }
                }
                CValue::Approx(field.embed_at(&x, *index, prec)?)
            }
            _ => unreachable!("archimedean character of a function field"),
        };
        out.push(val);
    }
    Ok(out)
}

/// G(n) = ∏_{χ∈𝒲} max(|χ(n)|, 1), exact.
fn growth_factor(sys: &System, n: &[i64]) -> Result<BigRational> {
    let v = to_rational(n);
    let mut g = BigRational::one();
    for ch in sys.w() {
        let e = ExactLog::combine(&ch.log_vector, &v);
        let x = exp_exact(&e).ok_or_else(|| Error::Domain("non-exact finite-place character".into()))?;
        if x > BigRational::one() {
            g *= x;
        }
    }
    Ok(g)
}

/// Candidate coefficients G(n)·∏_{χ∈L} χ(n) for all L ⊆ 𝒱 (μ = +1).
pub fn candidate_roots(sys: &System, n: &[i64], prec: u32) -> Result<Vec<InverseRoot>> {
    check_n(sys, n)?;
    let nv = sys.nv();
    if nv > 16 {
        return Err(Error::Resource(format!("2^{nv} subsets of archimedean characters")));
    }
    let g = growth_factor(sys, n)?;
    let vals = archimedean_values(sys, n, prec)?;
    let exact = vals.iter().all(|v| matches!(v, CValue::Exact(_)));
    let mut out = Vec::with_capacity(1 << nv);
    for mask in 0u32..(1 << nv) {
        let subset: Vec<usize> = (0..nv).filter(|&k| mask >> k & 1 == 1).collect();
        let value = if exact {
            let mut x = g.clone();
            for &k in &subset {
                let CValue::Exact(q) = &vals[k] else { unreachable!() };
                x *= q;
            }
            CValue::Exact(x)
        } else {
            let mut z = ComplexInterval::from_rational(&g, prec);
            for &k in &subset {
                z = &z * &vals[k].to_complex(prec);
            }
            CValue::Approx(z)
        };
        out.push(InverseRoot { value, subset });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// exponent fitting

trait Scalar: Clone {
    fn from_count(f: &BigUint, prec: u32) -> Self;
    /// self + w·x
    fn axpy(&self, w: i64, x: &Self) -> Self;
    /// A lower bound for |self| (conservative).
    fn abs_lower(&self) -> f64;
    fn fits_zero(&self) -> bool;
}

const SLACK: f64 = 1e-9;

impl Scalar for BigRational {
    fn from_count(f: &BigUint, _: u32) -> Self {
        BigRational::from_integer(BigInt::from(f.clone()))
    }
    fn axpy(&self, w: i64, x: &Self) -> Self {
        if w == 0 {
            return self.clone();
        }
        self + x * BigRational::from_integer(w.into())
    }
    fn abs_lower(&self) -> f64 {
        self.abs().to_f64().unwrap_or(0.0) * (1.0 - SLACK)
    }
    fn fits_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for RealInterval {
    fn from_count(f: &BigUint, prec: u32) -> Self {
        RealInterval::from_int(BigInt::from(f.clone()), prec)
    }
    fn axpy(&self, w: i64, x: &Self) -> Self {
        if w == 0 {
            return self.clone();
        }
        self + &x.mul_int(&w.into())
    }
    fn abs_lower(&self) -> f64 {
        let m = self.mig().to_f64();
        if m.is_finite() {
            m * (1.0 - SLACK)
        } else {
            0.0
        }
    }
    fn fits_zero(&self) -> bool {
        self.contains_zero()
    }
}

struct Var<S> {
    /// Σ_{clusters in the group} c^j, j = 1..J.
    pw: Vec<S>,
    /// Upper bound of |pw[j]| (f64, may be inf).
    upper: Vec<f64>,
    size: i64,
}

struct Search<'a, S> {
    vars: &'a [Var<S>],
    /// suffix[k][j] bounds Σ_{k' ≥ k} size·|pw|.
    suffix: Vec<Vec<f64>>,
    nodes: u64,
    cap: u64,
    solutions: Vec<Vec<i64>>,
}

impl<S: Scalar> Search<'_, S> {
    fn run(&mut self, k: usize, residual: &[S], weights: &mut Vec<i64>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::Resource(format!(
                "exponent fit exceeded {} search nodes",
                self.cap
            )));
        }
        if k == self.vars.len() {
            if residual.iter().all(|r| r.fits_zero()) {
                self.solutions.push(weights.clone());
            }
            return Ok(());
        }
        let var = &self.vars[k];
        let mut w = -var.size;
        while w <= var.size {
            let next: Vec<S> = residual
                .iter()
                .zip(&var.pw)
                .map(|(r, p)| r.axpy(w, p))
                .collect();
            let bound = &self.suffix[k + 1];
            let feasible = next
                .iter()
                .zip(bound)
                .all(|(r, b)| !(r.abs_lower() > b * (1.0 + SLACK)));
            if feasible {
                weights.push(w);
                self.run(k + 1, &next, weights)?;
                weights.pop();
                if self.solutions.len() > 1 {
                    return Ok(());
                }
            }
            w += 2;
        }
        Ok(())
    }
}

fn search<S: Scalar>(vars: &[Var<S>], f: &[S], cap: u64, nodes: &mut u64) -> Result<Vec<Vec<i64>>> {
    let jn = f.len();
    let mut suffix = vec![vec![0.0f64; jn]; vars.len() + 1];
    for k in (0..vars.len()).rev() {
        for j in 0..jn {
            suffix[k][j] = suffix[k + 1][j] + vars[k].size as f64 * vars[k].upper[j];
        }
    }
    let mut s = Search {
        vars,
        suffix,
        nodes: *nodes,
        cap,
        solutions: Vec::new(),
    };
    s.run(0, f, &mut Vec::new())?;
    *nodes = s.nodes;
    Ok(s.solutions)
}

/// Partition coefficient indices into clusters of equal value.
fn cluster(coeffs: &[CValue]) -> Vec<Vec<usize>> {
    let n = coeffs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in 0..i {
            if coeffs[i].same(&coeffs[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

/// Cluster groups sharing one weight: conjugate pairs are tied.
fn conjugate_groups(coeffs: &[CValue], clusters: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut used = vec![false; clusters.len()];
    let mut out = Vec::new();
    for a in 0..clusters.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        let ca = &coeffs[clusters[a][0]];
        let mut g = vec![a];
        if let CValue::Approx(z) = ca {
            let zc = CValue::Approx(z.conj());
            if !ca.same(&zc) {
                let partners: Vec<usize> = (0..clusters.len())
                    .filter(|&b| !used[b] && coeffs[clusters[b][0]].same(&zc))
                    .collect();
                if partners.len() == 1 && clusters[partners[0]].len() == clusters[a].len() {
                    used[partners[0]] = true;
                    g.push(partners[0]);
                }
            }
        }
        out.push(g);
    }
    out
}

fn build_vars<S: Scalar>(
    coeffs: &[CValue],
    clusters: &[Vec<usize>],
    groups: &[Vec<usize>],
    jn: usize,
    prec: u32,
    sign: i32,
    make: &dyn Fn(&CValue, usize, u32) -> (S, f64),
) -> Vec<Var<S>> {
    groups
        .iter()
        .map(|g| {
            let mut pw: Vec<S> = Vec::with_capacity(jn);
            let mut upper = Vec::with_capacity(jn);
            for j in 1..=jn {
                let mut acc: Option<S> = None;
                let mut up = 0.0;
                for &ci in g {
                    let c = &coeffs[clusters[ci][0]];
                    let c = if sign < 0 { c.neg() } else { c.clone() };
                    let (p, u) = make(&c, j, prec);
                    up += u;
                    acc = Some(match acc {
                        None => p,
                        Some(a) => a.axpy(1, &p),
                    });
                }
                pw.push(acc.unwrap());
                upper.push(up);
            }
            Var {
                pw,
                upper,
                size: clusters[g[0]].len() as i64,
            }
        })
        .collect()
}

fn exact_power(c: &CValue, j: usize, _: u32) -> (BigRational, f64) {
    let CValue::Exact(q) = c else { unreachable!() };
    let p = num_traits::pow(q.clone(), j);
    let u = p.abs().to_f64().unwrap_or(f64::INFINITY) * (1.0 + SLACK);
    (p, u)
}

fn approx_power(c: &CValue, j: usize, prec: u32) -> (RealInterval, f64) {
    let z = c.to_complex(prec).powi(j as u64);
    let u = z.abs().hi().to_f64() * (1.0 + SLACK);
    (z.re.clone(), if u.is_nan() { f64::INFINITY } else { u })
}

fn equivalent(
    coeffs: &[CValue],
    groups: &[Vec<usize>],
    clusters: &[Vec<usize>],
    a: &(i32, Vec<i64>),
    b: &(i32, Vec<i64>),
) -> bool {
    let expand = |s: &(i32, Vec<i64>)| -> Vec<(CValue, i64)> {
        let mut v = Vec::new();
        for (g, &w) in groups.iter().zip(&s.1) {
            if w == 0 {
                continue;
            }
            for &ci in g {
                let c = &coeffs[clusters[ci][0]];
                v.push((if s.0 < 0 { c.neg() } else { c.clone() }, w));
            }
        }
        v
    };
    let (ea, eb) = (expand(a), expand(b));
    ea.len() == eb.len()
        && ea
            .iter()
            .all(|(c, w)| eb.iter().any(|(d, x)| x == w && c.same(d)))
}

/// Fit μ and the exponents λ so that F_j = −Σ λ (μc)^j for every given j.
pub fn fit_exponents(coeffs: &[CValue], f: &[PeriodicCount]) -> Result<ExponentFit> {
    fit_exponents_with(coeffs, f, 1 << 20, 128)
}

fn fit_exponents_with(coeffs: &[CValue], f: &[PeriodicCount], cap: u64, prec: u32) -> Result<ExponentFit> {
    if coeffs.is_empty() {
        return Err(Error::domain("no coefficients to fit"));
    }
    if f.len() < coeffs.len() + 2 {
        return Err(Error::validation(
            "F",
            format!(
                "{} count terms given; at least {} needed for {} coefficients",
                f.len(),
                coeffs.len() + 2,
                coeffs.len()
            ),
        ));
    }
    let counts: Vec<&BigUint> = f
        .iter()
        .map(|c| c.finite().ok_or_else(|| Error::domain("infinite count in the fitted sequence")))
        .collect::<Result<_>>()?;
    let exact = coeffs.iter().all(|c| matches!(c, CValue::Exact(_)));
    let clusters = cluster(coeffs);
    let groups = conjugate_groups(coeffs, &clusters);
    // largest magnitude first for strong pruning
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| {
        let ma = coeffs[clusters[groups[a][0]][0]].abs_f64();
        let mb = coeffs[clusters[groups[b][0]][0]].abs_f64();
        mb.partial_cmp(&ma).unwrap_or(std::cmp::Ordering::Equal)
    });
    let groups: Vec<Vec<usize>> = order.into_iter().map(|i| groups[i].clone()).collect();
    let jn = counts.len();
    let mut nodes = 0u64;
    let mut sols: Vec<(i32, Vec<i64>)> = Vec::new();
    for mu in [1, -1] {
        let found = if exact {
            let vars = build_vars(coeffs, &clusters, &groups, jn, prec, mu, &exact_power);
            let fs: Vec<BigRational> = counts.iter().map(|c| BigRational::from_count(c, prec)).collect();
            search(&vars, &fs, cap, &mut nodes)?
        } else {
            let vars = build_vars(coeffs, &clusters, &groups, jn, prec, mu, &approx_power);
            let fs: Vec<RealInterval> = counts.iter().map(|c| RealInterval::from_count(c, prec)).collect();
            search(&vars, &fs, cap, &mut nodes)?
        };
        sols.extend(found.into_iter().map(|w| (mu, w)));
    }
    if sols.is_empty() {
        return Err(Error::Inconsistent(
            "no sign assignment reproduces the counts".into(),
        ));
    }
    let first = sols[0].clone();
    if sols[1..]
        .iter()
        .any(|s| !equivalent(coeffs, &groups, &clusters, &first, s))
    {
        return Err(Error::Ambiguous {
            message: "several sign assignments reproduce the counts".into(),
            suggested_terms: 2 * jn,
        });
    }
    let (mu, weights) = first;
    let mut lambda = vec![0i32; coeffs.len()];
    let mut out_clusters = Vec::new();
    for (g, &w) in groups.iter().zip(&weights) {
        for &ci in g {
            let members = clusters[ci].clone();
            let m = members.len() as i64;
            let plus = (m + w) / 2;
            for (k, &idx) in members.iter().enumerate() {
                lambda[idx] = if (k as i64) < plus { 1 } else { -1 };
            }
            out_clusters.push(Cluster { members, weight: w });
        }
    }
    out_clusters.sort_by_key(|c| c.members[0]);
    Ok(ExponentFit {
        mu,
        lambda,
        clusters: out_clusters,
    })
}

/// Check F_j = −Σ λ c^j for j = 1..j_check.
pub fn verify_generating_identity(zf: &ZetaFactorization, f: &[PeriodicCount], j_check: usize) -> VerifyReport {
    let j_check = j_check.min(f.len());
    let mut report = VerifyReport {
        passed: true,
        checked: j_check,
        max_deviation: 0.0,
        first_failure: None,
    };
    let prec = zf.precision.max(128);
    for j in 1..=j_check {
        let Some(fj) = f[j - 1].finite() else {
            report.passed = false;
            report.first_failure.get_or_insert(j);
            continue;
        };
        let (ok, dev) = if zf.is_exact() {
            let mut s = BigRational::zero();
            for fac in &zf.factors {
                let CValue::Exact(c) = &fac.c else { unreachable!() };
                s -= num_traits::pow(c.clone(), j) * BigRational::from_integer(fac.lambda.into());
            }
            let target = BigRational::from_integer(BigInt::from(fj.clone()));
            let d = (&s - &target).abs();
            let rel = (d.clone() / target.max(BigRational::one())).to_f64().unwrap_or(f64::INFINITY);
            (d.is_zero(), rel)
        } else {
            let mut s = RealInterval::zero(prec);
            for fac in &zf.factors {
                let z = fac.c.to_complex(prec).powi(j as u64);
                s = &s - &z.re.mul_int(&fac.lambda.into());
            }
            let target = RealInterval::from_int(BigInt::from(fj.clone()), prec);
            let d = &s - &target;
            let scale = fj.to_f64().unwrap_or(f64::INFINITY).max(1.0);
            (d.contains_zero(), d.mid_f64().abs() / scale)
        };
        report.max_deviation = report.max_deviation.max(dev);
        if !ok {
            report.passed = false;
            report.first_failure.get_or_insert(j);
        }
    }
    report
}

/// Counts, fit and verification for direction n.
pub fn zeta_factorization(sys: &System, n: &[i64], opts: &ZetaOptions) -> Result<ZetaFactorization> {
    zeta_factorization_with(sys, n, opts, &|j_max| {
        (1..=j_max as u64).map(|j| count(&sys.descriptor, n, j)).collect()
    })
}

/// As `zeta_factorization`, with counts supplied by `counts(j_max)`.
pub fn zeta_factorization_with(
    sys: &System,
    n: &[i64],
    opts: &ZetaOptions,
    counts: &dyn Fn(usize) -> Result<Vec<PeriodicCount>>,
) -> Result<ZetaFactorization> {
    check_n(sys, n)?;
    let expansive = is_expansive_element(sys, n)?;
    if !opts.force {
        match expansive {
            Tri::False => {
                return Err(Error::Unsupported(format!(
                    "n = {n:?} is not expansive; rationality of the zeta function is not guaranteed"
                )))
            }
            Tri::Undecided => {
                return Err(Error::Undecided(format!(
                    "expansiveness of n = {n:?} undecided; characters: {}",
                    undecided_characters(sys, n).join(", ")
                )))
            }
            Tri::True => {}
        }
    }
    let k = 1usize << sys.nv();
    let jn = (k + 2).max(opts.j_check);
    let f = counts(jn)?;
    let mut prec = opts.start_precision;
    loop {
        let roots = candidate_roots(sys, n, prec)?;
        let coeffs: Vec<CValue> = roots.iter().map(|r| r.value.clone()).collect();
        let exact = coeffs.iter().all(|c| matches!(c, CValue::Exact(_)));
        let fit = fit_exponents_with(&coeffs, &f[..k + 2], opts.node_cap, prec)
            .and_then(|fit| {
                let zf = assemble(n, expansive, &roots, fit, jn, if exact { 0 } else { prec });
                let report = verify_generating_identity(&zf, &f, jn);
                if report.passed {
                    Ok(zf)
                } else {
                    Err(Error::Inconsistent(format!(
                        "fitted factorization fails the generating identity at j = {}",
                        report.first_failure.unwrap_or(0)
                    )))
                }
            });
        match fit {
            Ok(zf) => return Ok(zf),
            Err(e @ (Error::Inconsistent(_) | Error::Ambiguous { .. })) => {
                if exact || prec >= opts.max_precision {
                    return Err(e);
                }
                prec = (prec * 2).min(opts.max_precision);
            }
            Err(e) => return Err(e),
        }
    }
}

fn assemble(
    n: &[i64],
    expansive: Tri,
    roots: &[InverseRoot],
    fit: ExponentFit,
    terms_used: usize,
    precision: u32,
) -> ZetaFactorization {
    let factors = roots
        .iter()
        .zip(&fit.lambda)
        .map(|(r, &lambda)| ZetaFactor {
            c: if fit.mu < 0 { r.value.neg() } else { r.value.clone() },
            lambda,
            subset: r.subset.clone(),
        })
        .collect();
    ZetaFactorization {
        n: n.to_vec(),
        expansive,
        mu: fit.mu,
        factors,
        clusters: fit.clusters,
        terms_used,
        precision,
    }
}

/// The inverse-root multiset of ζ_n with μ fixed by the counts.
pub fn inverse_roots(sys: &System, n: &[i64], opts: &ZetaOptions) -> Result<Vec<InverseRoot>> {
    let zf = zeta_factorization(sys, n, opts)?;
    Ok(zf
        .factors
        .into_iter()
        .map(|f| InverseRoot {
            value: f.c,
            subset: f.subset,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::fixtures;

    fn sys(name: &str) -> System {
        System::new(fixtures::load(name).unwrap()).unwrap()
    }

    fn q(n: i64) -> CValue {
        CValue::Exact(BigRational::from_integer(n.into()))
    }

    fn counts(v: &[u64]) -> Vec<PeriodicCount> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn fit_examples() {
        let fit = fit_exponents(&[q(1), q(6)], &counts(&[5, 35, 215, 1295])).unwrap();
        assert_eq!((fit.mu, fit.lambda.clone()), (1, vec![1, -1]));
        let fit = fit_exponents(&[q(4)], &counts(&[4, 16, 64])).unwrap();
        assert_eq!((fit.mu, fit.lambda.clone()), (1, vec![-1]));
        let fit = fit_exponents(&[q(1)], &counts(&[1, 1, 1])).unwrap();
        assert_eq!(fit.lambda, vec![-1]);
        assert!(matches!(
            fit_exponents(&[q(5)], &counts(&[4, 16, 64])),
            Err(Error::Inconsistent(_))
        ));
        assert!(matches!(
            fit_exponents(&[q(1), q(6)], &counts(&[5, 35])),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn expansiveness() {
        let s = sys("times2times3");
        assert_eq!(is_expansive_element(&s, &[1, -1]).unwrap(), Tri::True);
        assert_eq!(is_expansive_element(&s, &[1, 0]).unwrap(), Tri::False);
        assert!(is_expansive_element(&s, &[0, 0]).is_err());
        let x = sys("dk-sextic");
        assert_eq!(is_expansive_element(&x, &[1, 0]).unwrap(), Tri::False);
        assert_eq!(is_expansive_element(&x, &[2, -3]).unwrap(), Tri::False);
    }

    #[test]
    fn times2times3_factorizations() {
        let s = sys("times2times3");
        let zf = zeta_factorization(&s, &[1, 1], &ZetaOptions::default()).unwrap();
        assert_eq!(zf.mu, 1);
        let got: Vec<(CValue, i32)> = zf.factors.iter().map(|f| (f.c.clone(), f.lambda)).collect();
        assert_eq!(got, vec![(q(1), 1), (q(6), -1)]);
        // F_j = 3^j − 2^j
        let zf = zeta_factorization(&s, &[1, -1], &ZetaOptions::default()).unwrap();
        let got: Vec<(CValue, i32)> = zf.factors.iter().map(|f| (f.c.clone(), f.lambda)).collect();
        assert_eq!(got, vec![(q(3), -1), (q(2), 1)]);
        assert!(matches!(
            zeta_factorization(&s, &[1, 0], &ZetaOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn ledrappier_factorizations() {
        let s = sys("ledrappier");
        let zf = zeta_factorization(&s, &[1, 1], &ZetaOptions::default()).unwrap();
        assert_eq!(zf.factors.len(), 1);
        assert_eq!((zf.factors[0].c.clone(), zf.factors[0].lambda), (q(4), -1));
        let zf = zeta_factorization(&s, &[2, 1], &ZetaOptions::default()).unwrap();
        assert_eq!((zf.factors[0].c.clone(), zf.factors[0].lambda), (q(8), -1));
    }

    #[test]
    fn flipped_sign_fails_verification() {
        let s = sys("times2times3");
        let mut zf = zeta_factorization(&s, &[1, 1], &ZetaOptions::default()).unwrap();
        let f = crate::periodic::count_sequence(&s.descriptor, &[1, 1], 5).unwrap();
        assert!(verify_generating_identity(&zf, &f, 5).passed);
        zf.factors[1].lambda = 1;
        let r = verify_generating_identity(&zf, &f, 5);
        assert!(!r.passed);
        assert_eq!(r.first_failure, Some(1));
    }

    #[test]
    fn number_field_factorization() {
        let s = sys("sqrt2sqrt3");
        let zf = zeta_factorization(&s, &[1, 1], &ZetaOptions::default()).unwrap();
        assert_eq!(zf.factors.len(), 16);
        let f = crate::periodic::count_sequence(&s.descriptor, &[1, 1], 20).unwrap();
        assert!(verify_generating_identity(&zf, &f, 20).passed);
    }
}

#[cfg(test)]
mod sextic_tests {
    use super::*;
    use crate::periodic::det_oracle;
    use crate::system::fixtures;

    #[test]
    fn sextic_forced_factorizations_match_determinants() {
        let s = System::new(fixtures::load("dk-sextic").unwrap()).unwrap();
        let opts = ZetaOptions {
            force: true,
            ..ZetaOptions::default()
        };
        for n in [[1i64, 0], [0, 1], [1, 1]] {
            assert_eq!(is_expansive_element(&s, &n).unwrap(), Tri::False);
            assert!(zeta_factorization(&s, &n, &ZetaOptions::default()).is_err());
            let oracle = |jm: usize| -> Result<Vec<PeriodicCount>> {
                (1..=jm as u64).map(|j| det_oracle(&s.descriptor, &n, j)).collect()
            };
            let zf = zeta_factorization_with(&s, &n, &opts, &oracle).unwrap();
            assert_eq!(zf.factors.len(), 64);
            assert_eq!(zf.terms_used, 66);
            let f = oracle(6).unwrap();
            assert!(verify_generating_identity(&zf, &f, 6).passed);
        }
    }
}
