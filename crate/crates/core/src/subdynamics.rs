//! Expansive-subdynamics portrait: non-expansive hyperplanes, the functions
//! f_L on the unit sphere, crossing and non-smooth sets, Ω samples and
//! directional entropy.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::expr::DEFAULT_MAX_PRECISION;
use crate::kernel::interval::RealInterval;
use crate::system::characters::to_rational;
use crate::system::{Atom, ExactLog, LogSign, System};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HyperplaneLabel {
    /// From an archimedean character.
    Variety,
    /// From a non-archimedean character.
    Noetherian,
    /// A crossing f_J = f_L not parallel to any archimedean hyperplane.
    CrossingOnly,
}

impl HyperplaneLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            HyperplaneLabel::Variety => "variety",
            HyperplaneLabel::Noetherian => "noetherian",
            HyperplaneLabel::CrossingOnly => "crossing-only",
        }
    }
}

impl fmt::Display for HyperplaneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The hyperplane {v : v · normal = 0}.
#[derive(Clone, Debug)]
pub struct LabeledHyperplane {
    pub normal: Vec<ExactLog>,
    pub label: HyperplaneLabel,
    /// Characters or subset pairs producing this hyperplane.
    pub sources: Vec<String>,
    /// The normal could not be certified nonzero, or parallelism with another
    /// normal could not be decided.
    pub undecided: bool,
}

impl LabeledHyperplane {
    pub fn normal_enclosure(&self, sys: &System, prec: u32) -> Result<Vec<RealInterval>> {
        self.normal.iter().map(|e| sys.ctx.eval(e, prec)).collect()
    }

    pub fn normal_f64(&self, sys: &System) -> Result<Vec<f64>> {
        Ok(self
            .normal_enclosure(sys, 64)?
            .iter()
            .map(|x| x.mid_f64())
            .collect())
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.normal.iter().map(|e| e.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// A pair J ≠ L whose graphs f_J, f_L coincide everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    pub j: Vec<usize>,
    pub l: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CrossingSet {
    pub hyperplanes: Vec<LabeledHyperplane>,
    pub coincidences: Vec<Coincidence>,
}

/// Names of characters with zero log-vector (non-expansive everywhere).
pub fn degenerate_characters(sys: &System) -> Vec<String> {
    sys.characters()
        .iter()
        .filter(|c| c.is_zero())
        .map(|c| c.name())
        .collect()
}

/// Σ a_i b_j (atom products) as a formal bilinear form.
type Bilinear = BTreeMap<(Atom, Atom), BigRational>;

fn bilinear_add(acc: &mut Bilinear, a: &ExactLog, b: &ExactLog, sign: i32) {
    for (x, cx) in a.terms() {
        for (y, cy) in b.terms() {
            let key = if x <= y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
            let c = cx * cy;
            let e = acc.entry(key).or_insert_with(BigRational::zero);
            if sign > 0 {
                *e += c;
            } else {
                *e -= c;
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
}

/// Whether two nonzero normals are parallel: Some(true/false), or None if undecided.
fn parallel(sys: &System, a: &[ExactLog], b: &[ExactLog]) -> Option<bool> {
    let d = a.len();
    let mut formal_zero = true;
    for i in 0..d {
        for j in i + 1..d {
            let mut m = Bilinear::new();
            bilinear_add(&mut m, &a[i], &b[j], 1);
            bilinear_add(&mut m, &a[j], &b[i], -1);
            if !m.is_empty() {
                formal_zero = false;
            }
        }
    }
    if formal_zero {
        return Some(true);
    }
    let mut prec = 64;
    while prec <= DEFAULT_MAX_PRECISION {
        let ea: Vec<RealInterval> = a.iter().map(|e| sys.ctx.eval(e, prec)).collect::<Result<_>>().ok()?;
        let eb: Vec<RealInterval> = b.iter().map(|e| sys.ctx.eval(e, prec)).collect::<Result<_>>().ok()?;
        for i in 0..d {
            for j in i + 1..d {
                let m = &(&ea[i] * &eb[j]) - &(&ea[j] * &eb[i]);
                if !m.contains_zero() {
                    return Some(false);
                }
            }
        }
        prec *= 4;
    }
    None
}

fn normal_sign(sys: &System, normal: &[ExactLog]) -> LogSign {
    let mut undecided = false;
    for e in normal {
        match sys.ctx.sign(e, DEFAULT_MAX_PRECISION).unwrap_or(LogSign::Undecided) {
            LogSign::Zero => {}
            LogSign::Undecided => undecided = true,
            s => return s,
        }
    }
    if undecided {
        LogSign::Undecided
    } else {
        LogSign::Zero
    }
}

/// Insert into `list`, merging with a parallel entry of the same label.
fn insert_merged(sys: &System, list: &mut Vec<LabeledHyperplane>, h: LabeledHyperplane) {
    let mut undecided = h.undecided;
    for e in list.iter_mut() {
        if e.label != h.label {
            continue;
        }
        match parallel(sys, &e.normal, &h.normal) {
            Some(true) => {
                e.sources.extend(h.sources);
                e.undecided |= h.undecided;
                return;
            }
            Some(false) => {}
            None => undecided = true,
        }
    }
    list.push(LabeledHyperplane { undecided, ..h });
}

/// One hyperplane per character with nonzero log-vector (parallel ones merged).
pub fn nonexpansive_hyperplanes(sys: &System) -> Vec<LabeledHyperplane> {
    let mut out = Vec::new();
    for (idx, ch) in sys.characters().iter().enumerate() {
        let sign = normal_sign(sys, &ch.log_vector);
        if sign == LogSign::Zero {
            continue;
        }
        let label = if idx < sys.nv() {
            HyperplaneLabel::Variety
        } else {
            HyperplaneLabel::Noetherian
        };
        insert_merged(
            sys,
            &mut out,
            LabeledHyperplane {
                normal: ch.log_vector.clone(),
                label,
                sources: vec![ch.name()],
                undecided: sign == LogSign::Undecided,
            },
        );
    }
    out
}

/// exactly {w_χ : χ ∈ 𝒲, w_χ ≠ 0}
pub fn nonsmooth_set(sys: &System) -> Vec<LabeledHyperplane> {
    nonexpansive_hyperplanes(sys)
        .into_iter()
        .filter(|h| h.label == HyperplaneLabel::Noetherian)
        .collect()
}

const MAX_CROSSING_V: usize = 10;

/// Normals Σ_{J∖L} w − Σ_{L∖J} w over unordered pairs J ≠ L ⊆ 𝒱.
pub fn crossing_set(sys: &System) -> Result<CrossingSet> {
    let nv = sys.nv();
    if nv > MAX_CROSSING_V {
        return Err(Error::Resource(format!(
            "crossing set over {nv} archimedean characters (limit {MAX_CROSSING_V})"
        )));
    }
    let variety: Vec<LabeledHyperplane> = nonexpansive_hyperplanes(sys)
        .into_iter()
        .filter(|h| h.label == HyperplaneLabel::Variety)
        .collect();
    let v = sys.v();
    let d = sys.d();
    let mut out = CrossingSet {
        hyperplanes: Vec::new(),
        coincidences: Vec::new(),
    };
    // assignments in {0: neither, 1: A = J∖L, 2: B = L∖J}; lowest used index in A
    let total = 3usize.pow(nv as u32);
    for code in 1..total {
        let mut digits = Vec::with_capacity(nv);
        let mut c = code;
        for _ in 0..nv {
            digits.push(c % 3);
            c /= 3;
        }
        let first = digits.iter().position(|&x| x != 0).unwrap();
        if digits[first] != 1 {
            continue;
        }
        let a: Vec<usize> = (0..nv).filter(|&k| digits[k] == 1).collect();
        let b: Vec<usize> = (0..nv).filter(|&k| digits[k] == 2).collect();
        let mut normal = vec![ExactLog::zero(); d];
        for &k in &a {
            for (n, w) in normal.iter_mut().zip(&v[k].log_vector) {
                *n = n.add(w);
            }
        }
        for &k in &b {
            for (n, w) in normal.iter_mut().zip(&v[k].log_vector) {
                *n = n.sub(w);
            }
        }
        let normal: Vec<ExactLog> = normal.iter().map(|e| sys.ctx.reduce(e)).collect();
        let sign = normal_sign(sys, &normal);
        if sign == LogSign::Zero {
            out.coincidences.push(Coincidence { j: a, l: b });
            continue;
        }
        let is_variety = sign != LogSign::Undecided
            && variety
                .iter()
                .any(|h| parallel(sys, &h.normal, &normal) == Some(true));
        let label = if is_variety {
            HyperplaneLabel::Variety
        } else {
            HyperplaneLabel::CrossingOnly
        };
        let name = |s: &[usize]| -> String {
            let names: Vec<String> = s.iter().map(|&k| v[k].name()).collect();
            format!("{{{}}}", names.join(","))
        };
        insert_merged(
            sys,
            &mut out.hyperplanes,
            LabeledHyperplane {
                normal,
                label,
                sources: vec![format!("{} vs {}", name(&a), name(&b))],
                undecided: sign == LogSign::Undecided,
            },
        );
    }
    Ok(out)
}

/// Presentation of Ω values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// |c|^{1/‖n‖} for inverse roots c.
    #[default]
    InverseRoot,
    /// The reciprocals: moduli of the zeros and poles themselves.
    RootLocation,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::InverseRoot => "inverse-root",
            Convention::RootLocation => "root-location",
        }
    }
}

/// All subsets of 𝒱 in mask order.
pub fn subsets(nv: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << nv))
        .map(|m| (0..nv).filter(|&k| m >> k & 1 == 1).collect())
        .collect()
}

fn unit_check(v: &[RealInterval], prec: u32) -> Result<()> {
    let mut s = RealInterval::zero(prec);
    for x in v {
        s = &s + &x.sqr();
    }
    let tol = 2f64.powi(-(prec as i32) / 2).max(f64::MIN_POSITIVE);
    let dev = (s.mid_f64() - 1.0).abs() - s.width().to_f64();
    if dev > tol {
        return Err(Error::domain(format!("direction is not a unit vector (|v|² ≈ {})", s.mid_f64())));
    }
    Ok(())
}

/// log χ*(−v) for every character, 𝒱 first.
fn neg_logs(sys: &System, v: &[RealInterval], prec: u32) -> Result<Vec<RealInterval>> {
    (0..sys.characters().len())
        .map(|i| Ok(-&sys.log_star(i, v, prec)?))
        .collect()
}

fn log_f(sys: &System, logs: &[RealInterval], l: &[usize], prec: u32) -> RealInterval {
    let mut acc = RealInterval::zero(prec);
    for x in &logs[sys.nv()..] {
        acc = &acc + &x.pos_part();
    }
    for &k in l {
        acc = &acc + &logs[k];
    }
    acc
}

/// f_L(v) = ∏_{χ∈𝒲} max(χ*(−v), 1) · ∏_{χ∈L} χ*(−v).
pub fn f_eval(sys: &System, l: &[usize], v: &[RealInterval], prec: u32) -> Result<RealInterval> {
    if v.len() != sys.d() {
        return Err(Error::validation("v", format!("expected {} coordinates", sys.d())));
    }
    if l.iter().any(|&k| k >= sys.nv()) {
        return Err(Error::validation("L", "subset index out of range"));
    }
    unit_check(v, prec)?;
    let logs = neg_logs(sys, v, prec)?;
    Ok(log_f(sys, &logs, l, prec).exp())
}

/// Unit vector from floats, normalized in interval arithmetic.
pub fn unit_vector(v: &[f64], prec: u32) -> Result<Vec<RealInterval>> {
    let xs: Vec<RealInterval> = v.iter().map(|&x| RealInterval::from_f64(x, prec)).collect();
    let mut s = RealInterval::zero(prec);
    for x in &xs {
        s = &s + &x.sqr();
    }
    let r = s
        .sqrt()
        .and_then(|r| r.recip())
        .ok_or_else(|| Error::domain("zero direction"))?;
    Ok(xs.iter().map(|x| x * &r).collect())
}

#[derive(Clone, Debug)]
pub struct OmegaSample {
    pub direction: Vec<f64>,
    /// One value per subset of 𝒱, in mask order.
    pub values: Vec<RealInterval>,
    /// Every character is certified nonzero at this direction.
    pub expansive: bool,
}

fn sample_one(sys: &System, v: &[f64], conv: Convention, prec: u32) -> Result<OmegaSample> {
    let u = unit_vector(v, prec)?;
    let logs = neg_logs(sys, &u, prec)?;
    let expansive = logs.iter().all(|x| !x.contains_zero());
    let sign = |x: &RealInterval| match conv {
        Convention::InverseRoot => x.clone(),
        Convention::RootLocation => -x,
    };
    let nv = sys.nv();
    let values = if (1usize << nv) <= logs.len() + 1 {
        subsets(nv)
            .iter()
            .map(|l| sign(&log_f(sys, &logs, l, prec)).exp())
            .collect()
    } else {
        // one exponential per character, then products over subsets
        let g = sign(&log_f(sys, &logs, &[], prec)).exp();
        let e: Vec<RealInterval> = logs[..nv].iter().map(|x| sign(x).exp()).collect();
        let mut values = vec![g];
        for mask in 1usize..(1 << nv) {
            let low = mask.trailing_zeros() as usize;
            let v = &values[mask & (mask - 1)] * &e[low];
            values.push(v);
        }
        values
    };
    Ok(OmegaSample {
        direction: v.to_vec(),
        values,
        expansive,
    })
}

/// The 2^{|𝒱|} values f_L(v) (or reciprocals) for each direction.
pub fn omega_samples(
    sys: &System,
    directions: &[Vec<f64>],
    conv: Convention,
    prec: u32,
) -> Result<Vec<OmegaSample>> {
    if sys.nv() > 16 {
        return Err(Error::Resource(format!("2^{} subsets", sys.nv())));
    }
    directions
        .par_iter()
        .map(|v| sample_one(sys, v, conv, prec))
        .collect()
}

/// (cos θ, sin θ) at θ = 2πk/n.
pub fn circle_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// (cos θ sin φ, sin θ sin φ, cos φ) on an n_theta × n_phi grid (φ at cell midpoints).
pub fn sphere_directions(n_theta: usize, n_phi: usize) -> Vec<(f64, f64, Vec<f64>)> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let t = 2.0 * PI * i as f64 / n_theta as f64;
        for k in 0..n_phi {
            let p = PI * (k as f64 + 0.5) / n_phi as f64;
            out.push((t, p, vec![t.cos() * p.sin(), t.sin() * p.sin(), p.cos()]));
        }
    }
    out
}

/// h(α^n), with the exact prime/root combination when every sign is decided.
#[derive(Clone, Debug)]
pub struct Entropy {
    pub value: RealInterval,
    pub exact: Option<ExactLog>,
}

/// h(α^n) = Σ_χ max(0, −n·w_χ) = ‖n‖ log max_L f_L(n̂).
pub fn directional_entropy(sys: &System, n: &[i64], prec: u32) -> Result<Entropy> {
    if n.len() != sys.d() {
        return Err(Error::validation("n", format!("expected {} coordinates", sys.d())));
    }
    if n.iter().all(|&x| x == 0) {
        return Err(Error::domain("n must be nonzero"));
    }
    let v = to_rational(n);
    let mut exact = Some(ExactLog::zero());
    let mut value = RealInterval::zero(prec);
    for ch in sys.characters() {
        let e = sys.ctx.reduce(&ExactLog::combine(&ch.log_vector, &v).neg());
        match sys.ctx.sign(&e, DEFAULT_MAX_PRECISION)? {
            LogSign::Positive => {
                exact = exact.map(|x| x.add(&e));
                value = &value + &sys.ctx.eval(&e, prec)?;
            }
            LogSign::Negative | LogSign::Zero => {}
            LogSign::Undecided => {
                exact = None;
                value = &value + &sys.ctx.eval(&e, prec)?.pos_part();
            }
        }
    }
    if let Some(e) = &exact {
        value = sys.ctx.eval(e, prec)?;
    }
    Ok(Entropy { value, exact })
}

#[derive(Clone, Debug)]
pub struct PortraitOptions {
    pub samples_2d: usize,
    pub grid_3d: (usize, usize),
    pub convention: Convention,
    pub precision: u32,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        PortraitOptions {
            samples_2d: 720,
            grid_3d: (180, 180),
            convention: Convention::InverseRoot,
            precision: 64,
        }
    }
}

/// Sampling coordinates: θ for d = 2, (θ, φ) for d = 3.
#[derive(Clone, Debug)]
pub struct PortraitSample {
    pub params: Vec<f64>,
    pub sample: OmegaSample,
}

#[derive(Clone, Debug)]
pub struct DirectionPortrait {
    pub d: usize,
    /// Variety and noetherian hyperplanes.
    pub hyperplanes: Vec<LabeledHyperplane>,
    pub crossing: CrossingSet,
    pub subsets: Vec<Vec<usize>>,
    /// Empty for d ≥ 4.
    pub samples: Vec<PortraitSample>,
    pub degenerate: Vec<String>,
    pub convention: Convention,
}

pub fn portrait(sys: &System, opts: &PortraitOptions) -> Result<DirectionPortrait> {
    let d = sys.d();
    let (params, dirs): (Vec<Vec<f64>>, Vec<Vec<f64>>) = match d {
        2 => circle_directions(opts.samples_2d)
            .into_iter()
            .enumerate()
            .map(|(k, v)| (vec![2.0 * PI * k as f64 / opts.samples_2d as f64], v))
            .unzip(),
        3 => sphere_directions(opts.grid_3d.0, opts.grid_3d.1)
            .into_iter()
            .map(|(t, p, v)| (vec![t, p], v))
            .unzip(),
        _ => (Vec::new(), Vec::new()),
    };
    let samples = omega_samples(sys, &dirs, opts.convention, opts.precision)?
        .into_iter()
        .zip(params)
        .map(|(sample, params)| PortraitSample { params, sample })
        .collect();
    Ok(DirectionPortrait {
        d,
        hyperplanes: nonexpansive_hyperplanes(sys),
        crossing: crossing_set(sys)?,
        subsets: subsets(sys.nv()),
        samples,
        degenerate: degenerate_characters(sys),
        convention: opts.convention,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::fixtures;

    fn sys(name: &str) -> System {
        System::new(fixtures::load(name).unwrap()).unwrap()
    }

    fn diag() -> Vec<RealInterval> {
        unit_vector(&[1.0, 1.0], 128).unwrap()
    }

    fn close(x: &RealInterval, y: f64) -> bool {
        (x.mid_f64() - y).abs() <= 1e-12 * y.abs().max(1.0) && x.width().to_f64() < 1e-20
    }

    fn labels(hs: &[LabeledHyperplane]) -> Vec<HyperplaneLabel> {
        hs.iter().map(|h| h.label).collect()
    }

    #[test]
    fn hyperplanes_times2times3() {
        let s = sys("times2times3");
        let hs = nonexpansive_hyperplanes(&s);
        assert_eq!(
            labels(&hs),
            vec![HyperplaneLabel::Variety, HyperplaneLabel::Noetherian, HyperplaneLabel::Noetherian]
        );
        let n = hs[1].normal_f64(&s).unwrap();
        assert!(n[1] == 0.0 && n[0] != 0.0);
        let c = crossing_set(&s).unwrap();
        assert_eq!(c.hyperplanes.len(), 1);
        assert_eq!(c.hyperplanes[0].label, HyperplaneLabel::Variety);
        assert!(degenerate_characters(&s).is_empty());
        assert_eq!(nonsmooth_set(&s).len(), 2);
    }

    #[test]
    fn hyperplanes_ledrappier() {
        let s = sys("ledrappier");
        let hs = nonexpansive_hyperplanes(&s);
        assert_eq!(hs.len(), 3);
        assert!(hs.iter().all(|h| h.label == HyperplaneLabel::Noetherian));
        let mut normals: Vec<Vec<i32>> = hs
            .iter()
            .map(|h| {
                let v = h.normal_f64(&s).unwrap();
                let scale = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
                v.iter().map(|x| (x / scale).round() as i32).collect()
            })
            .collect();
        for n in &mut normals {
            if n.iter().find(|&&x| x != 0).unwrap() < &0 {
                n.iter_mut().for_each(|x| *x = -*x);
            }
        }
        normals.sort();
        assert_eq!(normals, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let c = crossing_set(&s).unwrap();
        assert!(c.hyperplanes.is_empty() && c.coincidences.is_empty());
    }

    #[test]
    fn sqrt2sqrt3_crossing_witness() {
        let s = sys("sqrt2sqrt3");
        assert!(nonsmooth_set(&s).is_empty());
        let hs = nonexpansive_hyperplanes(&s);
        assert_eq!(hs.len(), 2);
        let c = crossing_set(&s).unwrap();
        // the line v1 = 0 is a crossing but not a non-expansive direction
        let witness = c
            .hyperplanes
            .iter()
            .find(|h| h.normal[1].is_zero())
            .expect("crossing normal with vanishing second coordinate");
        assert_eq!(witness.label, HyperplaneLabel::CrossingOnly);
        assert!(!witness.undecided);
        let variety = c.hyperplanes.iter().filter(|h| h.label == HyperplaneLabel::Variety).count();
        assert_eq!(variety, 2);
    }

    #[test]
    fn sextic_degenerate() {
        let s = sys("dk-sextic");
        assert_eq!(degenerate_characters(&s).len(), 2);
        let c = crossing_set(&s).unwrap();
        assert!(!c.coincidences.is_empty());
    }

    #[test]
    fn f_values() {
        let s = sys("times2times3");
        let f = f_eval(&s, &[], &diag(), 128).unwrap();
        assert!(close(&f, 6f64.powf(std::f64::consts::FRAC_1_SQRT_2)));
        assert!((f.mid_f64() - 3.550).abs() < 1e-3);
        let f = f_eval(&s, &[0], &diag(), 128).unwrap();
        assert!(f.contains_f64(1.0));
        let l = sys("ledrappier");
        let f = f_eval(&l, &[], &diag(), 128).unwrap();
        assert!(close(&f, 4f64.powf(std::f64::consts::FRAC_1_SQRT_2)));
        assert!((f.mid_f64() - 2.665).abs() < 1e-3);
        assert!((1.0 / f.mid_f64() - 0.375).abs() < 1e-3);
        let bad = vec![RealInterval::from_f64(1.0, 128), RealInterval::from_f64(1.0, 128)];
        assert!(f_eval(&s, &[], &bad, 128).is_err());
    }

    #[test]
    fn omega_conventions_are_reciprocal() {
        let s = sys("times2times3");
        let dirs = circle_directions(8);
        let a = omega_samples(&s, &dirs, Convention::InverseRoot, 96).unwrap();
        let b = omega_samples(&s, &dirs, Convention::RootLocation, 96).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for (p, q) in x.values.iter().zip(&y.values) {
                assert!((&(p * q)).contains_f64(1.0));
            }
        }
        // θ = π/4 is index 1 of 8
        assert!(a[1].values[1].contains_f64(1.0));
        assert!((a[1].values[0].mid_f64() - 6f64.powf(std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!(a[1].expansive && !a[0].expansive);
    }

    #[test]
    fn entropy_values() {
        let s = sys("times2times3");
        let h = directional_entropy(&s, &[1, 1], 128).unwrap();
        assert!(close(&h.value, 6f64.ln()));
        assert_eq!(h.exact.unwrap(), ExactLog::prime(2, 1).add(&ExactLog::prime(3, 1)));
        let h = directional_entropy(&s, &[1, -1], 128).unwrap();
        assert_eq!(h.exact.unwrap(), ExactLog::prime(3, 1));
        let l = sys("ledrappier");
        let h = directional_entropy(&l, &[1, 1], 128).unwrap();
        assert_eq!(h.exact.unwrap(), ExactLog::prime(2, 2));
        assert!(directional_entropy(&s, &[0, 0], 64).is_err());
    }

    #[test]
    fn portrait_shapes() {
        let s = sys("times2times3times5");
        let p = portrait(
            &s,
            &PortraitOptions {
                grid_3d: (12, 6),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(p.samples.len(), 72);
        assert_eq!(p.hyperplanes.len(), 4);
        assert_eq!(p.subsets.len(), 2);
    }
}
