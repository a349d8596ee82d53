//! Subcommand implementations.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use expsub_core::subdynamics::{self, circle_directions, sphere_directions, OmegaSample};
use expsub_core::system::PrimeComponent;
use expsub_core::zeta::ZetaFactorization;
use expsub_core::{
    count, count_sequence, crossing_set, det_oracle, directional_entropy, grid_at, is_expansive_element,
    nonexpansive_hyperplanes, nonsmooth_set, portrait, verify_generating_identity, zeta_factorization, Convention,
    HyperplaneLabel, PortraitOptions, System, Tri, ZetaOptions,
};
use serde_json::{json, Map, Value};

use crate::input::{self, Input};
use crate::output::*;
use crate::svg::portrait_svg;
use crate::{
    AnalyzeArgs, CliError, Command, Layout, OmegaArgs, PeriodicArgs, PortraitArgs, PortraitFormat, RunConfig,
    TableFormat, ZetaArgs,
};

pub fn dispatch(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.command {
        Command::Analyze(a) => analyze(cfg, a, out, err),
        Command::Periodic(a) => periodic(a, out),
        Command::Zeta(a) => zeta(cfg, a, out),
        Command::Portrait(a) => portrait_cmd(cfg, a, out, err),
        Command::Omega(a) => omega(cfg, a, out),
    }
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// `-5..5,0..5` → [(−5, 5), (0, 5)]; a bare integer is a one-point range.
pub fn parse_ranges(s: &str) -> Result<Vec<(i64, i64)>, CliError> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let bad = || CliError::Usage(format!("bad range '{part}' (expected lo..hi)"));
            let (lo, hi) = match part.split_once("..") {
                Some((a, b)) => (a, b.trim_start_matches('=')),
                None => (part, part),
            };
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, hi))
        })
        .collect()
}

pub fn parse_vector(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad integer '{x}' in '{s}'")))
        })
        .collect()
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad grid '{s}' (expected THETAxPHI)"));
    let (a, b) = s.split_once('x').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn check_len(sys: &System, what: &str, len: usize) -> Result<(), CliError> {
    if len != sys.d() {
        return Err(CliError::Usage(format!(
            "{what} has {len} coordinates but the system has d = {}",
            sys.d()
        )));
    }
    Ok(())
}

fn header(inp: &Input, conv: Convention) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("descriptor_hash".into(), json!(inp.hash()));
    m.insert("convention".into(), json!(conv.as_str()));
    m.insert("label".into(), json!(inp.system.descriptor.label));
    m.insert("d".into(), json!(inp.system.d()));
    m
}

fn degenerate_warning(sys: &System) -> Option<String> {
    let deg = subdynamics::degenerate_characters(sys);
    if deg.is_empty() {
        None
    } else {
        Some(format!(
            "non-expansive everywhere: characters with zero log-vector: {}",
            deg.join(", ")
        ))
    }
}

fn periodic(a: &PeriodicArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inp = input::load(&a.common.input)?;
    let sys = &inp.system;
    let ranges = parse_ranges(&a.range)?;
    check_len(sys, "--range", ranges.len())?;
    let g = grid_at(&sys.descriptor, &ranges, a.j)?;
    let text = match a.format {
        TableFormat::Csv if a.layout == Layout::Table && sys.d() == 2 => {
            let (x, y) = (ranges[0], ranges[1]);
            let mut s = String::new();
            let mut head = vec!["n2/n1".to_string()];
            head.extend((x.0..=x.1).map(|n1| n1.to_string()));
            s.push_str(&csv_row(&head));
            for n2 in (y.0..=y.1).rev() {
                let mut row = vec![n2.to_string()];
                row.extend((x.0..=x.1).map(|n1| count_csv(g.get(&[n1, n2]).unwrap())));
                s.push_str(&csv_row(&row));
            }
            s
        }
        TableFormat::Csv => {
            let mut head: Vec<String> = (1..=sys.d()).map(|i| format!("n{i}")).collect();
            head.push("j".into());
            head.push("count".into());
            let mut s = csv_row(&head);
            for (n, c) in &g.entries {
                let mut row: Vec<String> = n.iter().map(|x| x.to_string()).collect();
                row.push(a.j.to_string());
                row.push(count_csv(c));
                s.push_str(&csv_row(&row));
            }
            s
        }
        TableFormat::Json => {
            let mut m = header(&inp, Convention::InverseRoot);
            m.insert("j".into(), json!(a.j));
            m.insert("ranges".into(), json!(ranges.iter().map(|r| [r.0, r.1]).collect::<Vec<_>>()));
            m.insert(
                "entries".into(),
                json!(g
                    .entries
                    .iter()
                    .map(|(n, c)| json!({ "n": n, "count": count_json(c), "infinite": c.is_infinite() }))
                    .collect::<Vec<_>>()),
            );
            to_json_string(&Value::Object(m))
        }
    };
    emit(&a.common.output, &text, out)
}

fn factorization_json(sys: &System, zf: &ZetaFactorization, conv: Convention) -> Value {
    let factors: Vec<Value> = zf
        .factors
        .iter()
        .map(|f| {
            let (c, exact) = cvalue_json(&f.c, conv);
            let mut m = Map::new();
            m.insert("c".into(), c);
            if let Some(e) = exact {
                m.insert("c_exact".into(), json!(e));
            }
            m.insert("lambda".into(), json!(f.lambda));
            m.insert("subset".into(), json!(subset_label(sys, &f.subset)));
            Value::Object(m)
        })
        .collect();
    let net: Vec<Value> = zf
        .net_factors()
        .iter()
        .map(|(c, w)| {
            let (c, exact) = cvalue_json(c, conv);
            json!({ "c": c, "c_exact": exact, "lambda": w })
        })
        .collect();
    json!({
        "mu": zf.mu,
        "factors": factors,
        "net_factors": net,
        "terms_used": zf.terms_used,
        "precision_bits": zf.precision,
    })
}

fn entropy_json(sys: &System, n: &[i64], prec: u32) -> Result<Value, CliError> {
    let h = directional_entropy(sys, n, prec)?;
    Ok(json!({
        "value": interval_json(&h.value),
        "exact": h.exact.map(|e| e.to_string()),
    }))
}

fn zeta(cfg: &RunConfig, a: &ZetaArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inp = input::load(&a.common.input)?;
    let sys = &inp.system;
    let n = parse_vector(&a.n)?;
    check_len(sys, "--n", n.len())?;
    let conv: Convention = a.convention.into();
    let opts = ZetaOptions {
        force: a.force,
        j_check: a.j_max,
        start_precision: cfg.precision,
        max_precision: cfg.max_precision,
        ..ZetaOptions::default()
    };
    let zf = zeta_factorization(sys, &n, &opts)?;
    let f = count_sequence(&sys.descriptor, &n, a.j_max as u64)?;
    let report = verify_generating_identity(&zf, &f, a.j_max);
    let mut m = header(&inp, conv);
    m.insert("n".into(), json!(n));
    m.insert("expansive".into(), json!(zf.expansive.as_str()));
    m.insert("forced".into(), json!(a.force && zf.expansive != Tri::True));
    if let Value::Object(z) = factorization_json(sys, &zf, conv) {
        m.extend(z);
    }
    m.insert("verified_to".into(), json!(if report.passed { report.checked } else { 0 }));
    m.insert(
        "verification".into(),
        json!({
            "passed": report.passed,
            "checked": report.checked,
            "max_deviation": jf(report.max_deviation),
            "first_failure": report.first_failure,
        }),
    );
    m.insert("counts".into(), json!(f.iter().map(count_json).collect::<Vec<_>>()));
    m.insert("entropy".into(), entropy_json(sys, &n, cfg.precision)?);
    m.insert("notes".into(), json!([ENTROPY_NOTE]));
    if !report.passed {
        emit(&a.common.output, &to_json_string(&Value::Object(m)), out)?;
        return Err(CliError::Core(expsub_core::Error::Inconsistent(format!(
            "factorization fails the generating identity at j = {}",
            report.first_failure.unwrap_or(0)
        ))));
    }
    emit(&a.common.output, &to_json_string(&Value::Object(m)), out)
}

fn sample_json(params: &[f64], s: &OmegaSample) -> Value {
    json!({
        "params": params.iter().map(|&x| jf(x)).collect::<Vec<_>>(),
        "direction": s.direction.iter().map(|&x| jf(x)).collect::<Vec<_>>(),
        "values": s.values.iter().map(|v| jf(v.mid_f64())).collect::<Vec<_>>(),
        "expansive": s.expansive,
    })
}

fn portrait_cmd(cfg: &RunConfig, a: &PortraitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let inp = input::load(&a.common.input)?;
    let sys = &inp.system;
    let conv: Convention = a.convention.into();
    let opts = PortraitOptions {
        samples_2d: a.samples,
        grid_3d: parse_grid(&a.grid)?,
        convention: conv,
        precision: cfg.precision,
    };
    let p = portrait(sys, &opts)?;
    let warning = degenerate_warning(sys);
    if let Some(w) = &warning {
        let _ = writeln!(err, "warning: {w}");
    }
    let svg = portrait_svg(sys, &p)?;
    if let Some(path) = &a.svg {
        fs::write(path, &svg).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let text = match a.format {
        PortraitFormat::Svg => svg,
        PortraitFormat::Json => {
            let mut m = header(&inp, conv);
            m.insert("hyperplanes".into(), hyperplanes_json(sys, &p.hyperplanes)?);
            m.insert("crossing".into(), crossing_json(sys, &p.crossing)?);
            m.insert("nonsmooth".into(), hyperplanes_json(sys, &nonsmooth_set(sys))?);
            m.insert("degenerate".into(), json!(p.degenerate));
            m.insert("warnings".into(), json!(warning.into_iter().collect::<Vec<_>>()));
            m.insert(
                "subsets".into(),
                json!(p.subsets.iter().map(|l| subset_label(sys, l)).collect::<Vec<_>>()),
            );
            m.insert(
                "samples".into(),
                json!(p
                    .samples
                    .iter()
                    .map(|s| sample_json(&s.params, &s.sample))
                    .collect::<Vec<_>>()),
            );
            to_json_string(&Value::Object(m))
        }
    };
    emit(&a.common.output, &text, out)
}

fn omega(cfg: &RunConfig, a: &OmegaArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inp = input::load(&a.common.input)?;
    let sys = &inp.system;
    let conv: Convention = a.convention.into();
    let (params, dirs): (Vec<Vec<f64>>, Vec<Vec<f64>>) = match sys.d() {
        2 => circle_directions(a.samples)
            .into_iter()
            .enumerate()
            .map(|(k, v)| (vec![2.0 * std::f64::consts::PI * k as f64 / a.samples as f64], v))
            .unzip(),
        3 => {
            let (nt, np) = parse_grid(&a.grid)?;
            sphere_directions(nt, np)
                .into_iter()
                .map(|(t, p, v)| (vec![t, p], v))
                .unzip()
        }
        d => {
            return Err(CliError::Core(expsub_core::Error::Unsupported(format!(
                "direction sampling needs d ≤ 3 (d = {d})"
            ))))
        }
    };
    let samples = subdynamics::omega_samples(sys, &dirs, conv, cfg.precision)?;
    let subsets = subdynamics::subsets(sys.nv());
    let text = match a.format {
        TableFormat::Csv => {
            let mut head: Vec<String> = if sys.d() == 2 {
                vec!["theta".into()]
            } else {
                vec!["theta".into(), "phi".into()]
            };
            head.extend((1..=sys.d()).map(|i| format!("v{i}")));
            head.push("expansive".into());
            head.extend(subsets.iter().map(|l| format!("f{}", subset_label(sys, l))));
            let mut s = csv_row(&head);
            for (p, smp) in params.iter().zip(&samples) {
                let mut row: Vec<String> = p.iter().map(|&x| fmt_f64(x)).collect();
                row.extend(smp.direction.iter().map(|&x| fmt_f64(x)));
                row.push(smp.expansive.to_string());
                row.extend(smp.values.iter().map(|v| fmt_f64(v.mid_f64())));
                s.push_str(&csv_row(&row));
            }
            s
        }
        TableFormat::Json => {
            let mut m = header(&inp, conv);
            m.insert(
                "subsets".into(),
                json!(subsets.iter().map(|l| subset_label(sys, l)).collect::<Vec<_>>()),
            );
            m.insert(
                "samples".into(),
                json!(params
                    .iter()
                    .zip(&samples)
                    .map(|(p, s)| sample_json(p, s))
                    .collect::<Vec<_>>()),
            );
            to_json_string(&Value::Object(m))
        }
    };
    emit(&a.common.output, &text, out)
}

/// Directions summarized by `analyze`: unit vectors, the diagonal and e1 − e2.
fn summary_directions(d: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|k| (k == i) as i64).collect())
        .collect();
    out.push(vec![1; d]);
    let mut e = vec![0; d];
    e[0] = 1;
    e[1] = -1;
    out.push(e);
    out
}

fn analyze(cfg: &RunConfig, a: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let inp = input::load(&a.common.input)?;
    let sys = &inp.system;
    let conv: Convention = a.convention.into();
    let mut m = header(&inp, conv);

    let mut components = Vec::new();
    for e in &sys.descriptor.components {
        let mut c = Map::new();
        c.insert("class".into(), json!(e.component.class().name()));
        c.insert("multiplicity".into(), json!(e.multiplicity));
        c.insert("rank".into(), json!(e.component.rank()));
        if let PrimeComponent::NumberFieldUnits { field, generators } = &e.component {
            let units = generators
                .iter()
                .map(|g| field.is_unit(g))
                .collect::<Result<Vec<bool>, _>>()?;
            c.insert("degree".into(), json!(field.degree()));
            c.insert("units_certified".into(), json!(units));
        }
        components.push(Value::Object(c));
    }
    m.insert("components".into(), json!(components));

    let chars: Vec<Value> = sys
        .characters()
        .iter()
        .enumerate()
        .map(|(i, ch)| {
            let enc = sys.log_enclosure(i, 128)?;
            Ok(json!({
                "name": ch.name(),
                "kind": if ch.is_archimedean() { "archimedean" } else { "non-archimedean" },
                "place": ch.place.to_string(),
                "log_vector": enc.iter().map(|x| jf(x.mid_f64())).collect::<Vec<_>>(),
                "log_vector_exact": exact_json(&ch.log_vector),
                "zero": ch.is_zero(),
            }))
        })
        .collect::<Result<_, CliError>>()?;
    m.insert("characters".into(), json!(chars));

    let warning = degenerate_warning(sys);
    if let Some(w) = &warning {
        let _ = writeln!(err, "warning: {w}");
    }
    m.insert("degenerate".into(), json!(subdynamics::degenerate_characters(sys)));
    m.insert("warnings".into(), json!(warning.into_iter().collect::<Vec<_>>()));
    m.insert(
        "ergodicity".into(),
        json!({
            "ergodic": sys.ergodicity.ergodic.as_str(),
            "independent": sys.ergodicity.independent.iter().map(|t| t.as_str()).collect::<Vec<_>>(),
        }),
    );

    let hyperplanes = nonexpansive_hyperplanes(sys);
    let crossing = crossing_set(sys)?;
    let nonsmooth = nonsmooth_set(sys);
    m.insert("hyperplanes".into(), hyperplanes_json(sys, &hyperplanes)?);
    m.insert("crossing".into(), crossing_json(sys, &crossing)?);
    m.insert("nonsmooth".into(), hyperplanes_json(sys, &nonsmooth)?);

    let opts = ZetaOptions {
        j_check: a.j_max,
        start_precision: cfg.precision,
        max_precision: cfg.max_precision,
        ..ZetaOptions::default()
    };
    let mut zeta_rows = Vec::new();
    let mut zeta_ok = true;
    for n in summary_directions(sys.d()) {
        let mut row = Map::new();
        row.insert("n".into(), json!(n));
        let exp = is_expansive_element(sys, &n)?;
        row.insert("expansive".into(), json!(exp.as_str()));
        if exp == Tri::True {
            match zeta_factorization(sys, &n, &opts) {
                Ok(zf) => {
                    if let Value::Object(z) = factorization_json(sys, &zf, conv) {
                        row.extend(z);
                    }
                    row.insert("verified_to".into(), json!(zf.terms_used));
                    row.insert("entropy".into(), entropy_json(sys, &n, cfg.precision)?);
                }
                Err(e) => {
                    zeta_ok = false;
                    row.insert("error".into(), json!(e.to_string()));
                }
            }
        } else {
            row.insert("skipped".into(), json!("rationality not guaranteed in this direction"));
        }
        zeta_rows.push(Value::Object(row));
    }
    m.insert("zeta".into(), json!(zeta_rows));

    // validation report
    let n_variety = hyperplanes
        .iter()
        .filter(|h| h.label == HyperplaneLabel::Variety)
        .count();
    let n_crossing_variety = crossing
        .hyperplanes
        .iter()
        .filter(|h| h.label == HyperplaneLabel::Variety)
        .count();
    let n_noetherian = hyperplanes
        .iter()
        .filter(|h| h.label == HyperplaneLabel::Noetherian)
        .count();
    let mut checks = Map::new();
    checks.insert("variety_in_crossing".into(), json!(n_variety == n_crossing_variety));
    checks.insert("nonsmooth_equals_noetherian".into(), json!(nonsmooth.len() == n_noetherian));
    checks.insert(
        "hyperplanes_proper".into(),
        json!(hyperplanes.iter().all(|h| !h.undecided)),
    );
    checks.insert("zeta_identities".into(), json!(zeta_ok));
    let nf = sys
        .descriptor
        .components
        .iter()
        .all(|e| matches!(e.component, PrimeComponent::NumberFieldUnits { .. }));
    if nf {
        let mut agree = true;
        for n in summary_directions(sys.d()) {
            for j in 1..=2 {
                agree &= count(&sys.descriptor, &n, j)? == det_oracle(&sys.descriptor, &n, j)?;
            }
        }
        checks.insert("determinant_oracle".into(), json!(agree));
    }
    m.insert("checks".into(), Value::Object(checks));
    m.insert("notes".into(), json!([ENTROPY_NOTE]));
    emit(&a.common.output, &to_json_string(&Value::Object(m)), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_ranges("-5..5,0..5").unwrap(), vec![(-5, 5), (0, 5)]);
        assert_eq!(parse_ranges("1..=2, 3").unwrap(), vec![(1, 2), (3, 3)]);
        assert!(parse_ranges("2..1").is_err());
        assert_eq!(parse_vector("1,-1").unwrap(), vec![1, -1]);
        assert!(parse_vector("1,x").is_err());
        assert_eq!(parse_grid("12x6").unwrap(), (12, 6));
        assert!(parse_grid("12").is_err());
    }
}
