//! Hand-emitted SVG diagrams.

use std::f64::consts::PI;
use std::fmt::Write;

use expsub_core::{DirectionPortrait, HyperplaneLabel, LabeledHyperplane, System};

use crate::output::fmt_f64;
use crate::CliError;

fn color(label: HyperplaneLabel) -> &'static str {
    match label {
        HyperplaneLabel::Variety => "#b03a2e",
        HyperplaneLabel::Noetherian => "#1f3a5f",
        HyperplaneLabel::CrossingOnly => "#2e8b57",
    }
}

fn c(x: f64) -> String {
    format!("{x:.3}")
}

fn dash(h: &LabeledHyperplane) -> &'static str {
    if h.undecided || h.label == HyperplaneLabel::CrossingOnly {
        " stroke-dasharray=\"6 4\""
    } else {
        ""
    }
}

fn header(w: u32, h: u32) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

/// Hyperplanes of a portrait: non-expansive lines plus crossing-only ones.
fn drawn_hyperplanes(p: &DirectionPortrait) -> Vec<&LabeledHyperplane> {
    p.hyperplanes
        .iter()
        .chain(
            p.crossing
                .hyperplanes
                .iter()
                .filter(|h| h.label == HyperplaneLabel::CrossingOnly),
        )
        .collect()
}

pub fn portrait_svg(sys: &System, p: &DirectionPortrait) -> Result<String, CliError> {
    match p.d {
        2 => plane_svg(sys, p),
        3 => sphere_svg(sys, p),
        _ => normals_svg(sys, p),
    }
}

fn plane_svg(sys: &System, p: &DirectionPortrait) -> Result<String, CliError> {
    let mut s = header(960, 480);
    // left: non-expansive lines through the origin
    let (cx, cy, r) = (240.0, 240.0, 200.0);
    writeln!(
        s,
        "<g id=\"lines\"><circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#bbbbbb\"/>",
        c(cx),
        c(cy),
        c(r)
    )
    .unwrap();
    for h in drawn_hyperplanes(p) {
        let w = h.normal_f64(sys)?;
        let norm = w[0].hypot(w[1]);
        let (dx, dy) = (-w[1] / norm, w[0] / norm);
        writeln!(
            s,
            "<path d=\"M {} {} L {} {}\" stroke=\"{}\" stroke-width=\"2\"{} data-label=\"{}\"/>",
            c(cx - r * dx),
            c(cy + r * dy),
            c(cx + r * dx),
            c(cy - r * dy),
            color(h.label),
            dash(h),
            h.label
        )
        .unwrap();
    }
    s.push_str("</g>\n");
    // right: branch values against θ
    if !p.samples.is_empty() {
        let (x0, x1, y0, y1) = (520.0, 940.0, 440.0, 40.0);
        let ymax = p
            .samples
            .iter()
            .flat_map(|q| q.sample.values.iter().map(|v| v.mid_f64()))
            .filter(|v| v.is_finite())
            .fold(1.0f64, f64::max)
            * 1.05;
        writeln!(
            s,
            "<g id=\"branches\"><path d=\"M {x0} {y0} L {x1} {y0} M {x0} {y0} L {x0} {y1}\" stroke=\"black\"/>"
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>",
            c(x0 - 6.0),
            c(y1 - 6.0),
            fmt_f64(ymax)
        )
        .unwrap();
        for (k, label) in p.subsets.iter().enumerate() {
            let mut d = String::new();
            for (i, q) in p.samples.iter().enumerate() {
                let x = x0 + (x1 - x0) * q.params[0] / (2.0 * PI);
                let y = y0 + (y1 - y0) * q.sample.values[k].mid_f64() / ymax;
                d.push_str(&format!("{} {} {} ", if i == 0 { "M" } else { "L" }, c(x), c(y)));
            }
            writeln!(
                s,
                "<path d=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\" data-subset=\"{}\"/>",
                d.trim_end(),
                crate::output::subset_label(sys, label)
            )
            .unwrap();
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// The great circle v·w = 0 as polylines in (θ, φ), v = (cos θ sin φ, sin θ sin φ, cos φ).
pub fn locus_polylines(w: &[f64], samples: usize) -> Vec<Vec<(f64, f64)>> {
    if w[2] == 0.0 {
        // meridians θ with w1 cos θ + w2 sin θ = 0
        let t0 = (-w[0]).atan2(w[1]).rem_euclid(PI);
        return [t0, t0 + PI]
            .iter()
            .map(|&t| vec![(t, 0.0), (t, PI)])
            .collect();
    }
    let mut out: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    let mut last: Option<f64> = None;
    for i in 0..=samples {
        let t = 2.0 * PI * i as f64 / samples as f64;
        let phi = (-w[2]).atan2(w[0] * t.cos() + w[1] * t.sin()).rem_euclid(PI);
        if let Some(l) = last {
            if (phi - l).abs() > PI / 2.0 {
                out.push(Vec::new());
            }
        }
        out.last_mut().unwrap().push((t, phi));
        last = Some(phi);
    }
    out.retain(|seg| seg.len() > 1);
    out
}

fn sphere_svg(sys: &System, p: &DirectionPortrait) -> Result<String, CliError> {
    let (x0, x1, y0, y1) = (40.0, 700.0, 20.0, 380.0);
    let mut s = header(740, 400);
    writeln!(
        s,
        "<rect x=\"{x0}\" y=\"{y0}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y1 - y0
    )
    .unwrap();
    s.push_str("<g id=\"loci\">\n");
    for h in drawn_hyperplanes(p) {
        let w = h.normal_f64(sys)?;
        for seg in locus_polylines(&w, 720) {
            let mut d = String::new();
            for (i, (t, ph)) in seg.iter().enumerate() {
                let x = x0 + (x1 - x0) * t / (2.0 * PI);
                let y = y0 + (y1 - y0) * ph / PI;
                d.push_str(&format!("{} {} {} ", if i == 0 { "M" } else { "L" }, c(x), c(y)));
            }
            writeln!(
                s,
                "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} data-label=\"{}\"/>",
                d.trim_end(),
                color(h.label),
                dash(h),
                h.label
            )
            .unwrap();
        }
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn normals_svg(sys: &System, p: &DirectionPortrait) -> Result<String, CliError> {
    let hs = drawn_hyperplanes(p);
    let mut s = header(720, 40 + 20 * hs.len() as u32);
    for (i, h) in hs.iter().enumerate() {
        let w: Vec<String> = h.normal_f64(sys)?.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(
            s,
            "<text x=\"20\" y=\"{}\" font-size=\"12\" fill=\"{}\">{}: ({})</text>",
            30 + 20 * i,
            color(h.label),
            h.label,
            w.join(", ")
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}
