//! Certified isolation of the complex roots of a square-free rational polynomial.
//!
//! Approximations come from Aberth–Ehrlich iteration in double precision,
//! refined by Newton steps at the working precision. Each approximation z is
//! then certified with the disk |w − z| ≤ n·|f(z)/f'(z)|, which always holds a
//! root; pairwise disjoint disks therefore hold exactly one root each.

use num_complex::Complex64;
use num_rational::BigRational;

use super::poly::QPoly;
use crate::error::{Error, Result};
use crate::kernel::dyadic::{Dyadic, Round};
use crate::kernel::interval::{ComplexInterval, RealInterval};

/// One isolated root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBox {
    /// Box containing exactly one root.
    pub z: ComplexInterval,
    /// The root is certified real (imaginary part exactly zero).
    pub real: bool,
    /// The imaginary part is certified nonzero.
    pub nonreal: bool,
    /// Index of the certified complex-conjugate root.
    pub conj: Option<usize>,
}

fn to_f64(q: &BigRational) -> f64 {
    Dyadic::from_rational(q, 64, Round::Down).to_f64()
}

fn aberth(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let a: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let r = (0..n)
        .map(|i| a[i].abs().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.7))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ai in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + ai;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

#[derive(Clone)]
struct Approx {
    re: Dyadic,
    im: Dyadic,
    real: bool,
}

impl Approx {
    fn interval(&self, w: u32) -> ComplexInterval {
        ComplexInterval::new(
            RealInterval::point(self.re.clone(), w),
            RealInterval::point(self.im.clone(), w),
        )
    }
}

fn newton(f: &QPoly, df: &QPoly, a: &mut Approx, w: u32) {
    let z = a.interval(w);
    let fz = f.eval_complex(&z);
    let dz = df.eval_complex(&z);
    if let Some(step) = fz.checked_div(&dz) {
        let nz = &z - &step;
        a.re = nz.re.mid().round(w, Round::Down);
        a.im = if a.real {
            Dyadic::zero()
        } else {
            nz.im.mid().round(w, Round::Down)
        };
    }
}

/// Upper bound for n·|f(z)|/|f'(z)|; `None` if f'(z) is not bounded away from zero.
fn inclusion_radius(f: &QPoly, df: &QPoly, z: &ComplexInterval, w: u32) -> Option<Dyadic> {
    let n = f.deg() as i64;
    let fz = f.eval_complex(z).abs();
    let dz = df.eval_complex(z).abs();
    if !dz.is_positive() {
        return None;
    }
    Some(
        fz.hi()
            .mul(&Dyadic::from_int(n))
            .div(dz.lo(), w, Round::Up),
    )
}

fn disks_disjoint(a: &Approx, ra: &Dyadic, b: &Approx, rb: &Dyadic, w: u32) -> bool {
    let d = &a.interval(w) - &b.interval(w);
    let dist2 = d.abs_sqr();
    let s = ra.add(rb);
    dist2.lo() > &s.mul(&s)
}

/// Isolate all roots of a square-free polynomial to boxes of width about 2^-prec.
pub fn isolate_roots(f: &QPoly, prec: u32) -> Result<Vec<RootBox>> {
    let n = f.degree().ok_or_else(|| Error::domain("roots of the zero polynomial"))?;
    if n == 0 {
        return Ok(vec![]);
    }
    if !f.is_squarefree() {
        return Err(Error::validation(
            "min_poly",
            format!("not square-free; repeated factor {}", f.repeated_part()),
        ));
    }
    if n == 1 {
        let r = -f.coeff(0) / f.coeff(1);
        return Ok(vec![RootBox {
            z: ComplexInterval::from_rational(&r, prec),
            real: true,
            nonreal: false,
            conj: None,
        }]);
    }
    let df = f.derivative();
    let cf: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    let z0 = aberth(&cf);

    // pair conjugates and flag real candidates
    let mut approx: Vec<Approx> = Vec::with_capacity(n);
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    let tol = |z: Complex64| 1e-7 * z.norm().max(1.0);
    for k in 0..n {
        if used[k] {
            continue;
        }
        let zk = z0[k];
        if zk.im.abs() <= tol(zk) {
            used[k] = true;
            approx.push(Approx {
                re: Dyadic::from_f64(zk.re),
                im: Dyadic::zero(),
                real: true,
            });
            continue;
        }
        let target = zk.conj();
        let j = (0..n)
            .filter(|&j| j != k && !used[j] && z0[j].im.abs() > tol(z0[j]))
            .min_by(|&a, &b| {
                (z0[a] - target)
                    .norm()
                    .partial_cmp(&(z0[b] - target).norm())
                    .unwrap()
            });
        used[k] = true;
        let up = if zk.im > 0.0 { zk } else { target };
        let idx = approx.len();
        approx.push(Approx {
            re: Dyadic::from_f64(up.re),
            im: Dyadic::from_f64(up.im),
            real: false,
        });
        if let Some(j) = j {
            used[j] = true;
            partner[idx] = Some(idx + 1);
            approx.push(Approx {
                re: Dyadic::from_f64(up.re),
                im: Dyadic::from_f64(-up.im),
                real: false,
            });
        }
    }
    let m = approx.len();
    let mut w: u32 = 64;
    let target = prec + 32;
    for _round in 0..8 {
        // refine: raise working precision geometrically, two Newton steps per level
        loop {
            for k in 0..m {
                if k > 0 && partner[k - 1] == Some(k) {
                    continue;
                }
                newton(f, &df, &mut approx[k], w);
                newton(f, &df, &mut approx[k], w);
                if let Some(j) = partner[k] {
                    approx[j].re = approx[k].re.clone();
                    approx[j].im = approx[k].im.neg();
                }
            }
            if w >= target {
                break;
            }
            w = (w * 2).min(target);
        }
        if let Some(out) = certify(f, &df, &approx, &partner, w, prec) {
            return Ok(sort_roots(out));
        }
        w *= 2;
        if w > 1 << 16 {
            break;
        }
    }
    Err(Error::Undecided(format!("root isolation failed for {f}")))
}

fn certify(
    f: &QPoly,
    df: &QPoly,
    approx: &[Approx],
    partner: &[Option<usize>],
    w: u32,
    prec: u32,
) -> Option<Vec<RootBox>> {
    let m = approx.len();
    if m != f.deg() {
        return None;
    }
    let radii: Vec<Dyadic> = approx
        .iter()
        .map(|a| inclusion_radius(f, df, &a.interval(w), w))
        .collect::<Option<_>>()?;
    for i in 0..m {
        for j in i + 1..m {
            if !disks_disjoint(&approx[i], &radii[i], &approx[j], &radii[j], w) {
                return None;
            }
        }
    }
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let a = &approx[k];
        let r = &radii[k];
        let re = RealInterval::new(a.re.sub(r), a.re.add(r), prec.max(w));
        let (im, nonreal) = if a.real {
            (RealInterval::zero(prec), false)
        } else {
            let im = RealInterval::new(a.im.sub(r), a.im.add(r), prec.max(w));
            let nz = !im.contains_zero();
            (im, nz)
        };
        let conj = if a.real {
            None
        } else if let Some(j) = partner[k] {
            Some(j)
        } else {
            (0..k).find(|&i| partner[i] == Some(k))
        };
        out.push(RootBox {
            z: ComplexInterval::new(re, im),
            real: a.real,
            nonreal,
            conj: if nonreal { conj } else { None },
        });
    }
    Some(out)
}

fn sort_roots(mut v: Vec<RootBox>) -> Vec<RootBox> {
    let key = |b: &RootBox| {
        let (re, im) = b.z.mid_f64();
        (if b.real { 0 } else { 1 }, -re, -im)
    };
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| key(&v[a]).partial_cmp(&key(&v[b])).unwrap());
    let mut pos = vec![0; v.len()];
    for (new, &old) in idx.iter().enumerate() {
        pos[old] = new;
    }
    for b in v.iter_mut() {
        b.conj = b.conj.map(|c| pos[c]);
    }
    let mut out: Vec<Option<RootBox>> = v.into_iter().map(Some).collect();
    idx.iter().map(|&i| out[i].take().unwrap()).collect()
}
