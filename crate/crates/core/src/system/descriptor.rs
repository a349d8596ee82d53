//! System descriptors: a TOML document listing prime components with multiplicities.
//!
//! ```toml
//! label = "times2times3"
//! d = 2
//!
//! [[components]]
//! class = "s_integer"          # or "number_field_units", "function_field"
//! multiplicity = 1             # optional, default 1
//! generators = ["2", "3"]
//! ```
//!
//! `number_field_units` components carry `min_poly` (integer coefficients in
//! ascending order, monic: `[c_0, …, c_{m−1}, 1]`) and generators given as
//! integer coefficient vectors in the power basis `1, a, …, a^{m−1}`.
//! `function_field` components carry `characteristic` and generators written
//! as rational functions of `t`, e.g. `"t/(t+1)"`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use toml::Value;

use crate::algebraic::field::{FieldElement, NumberField, NumberFieldSpec};
use crate::error::{Error, Result};
use crate::kernel::arith::{is_prime, rational_primes};
use crate::kernel::fp_poly::FpPoly;
use crate::kernel::fp_ratfunc::{parse_rational_function, FpRationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentClass {
    SInteger,
    NumberFieldUnits,
    FunctionField,
}

impl ComponentClass {
    pub fn name(self) -> &'static str {
        match self {
            ComponentClass::SInteger => "s_integer",
            ComponentClass::NumberFieldUnits => "number_field_units",
            ComponentClass::FunctionField => "function_field",
        }
    }
}

/// One prime cyclic piece R_d/𝔭 of dimension one.
#[derive(Clone, Debug)]
pub enum PrimeComponent {
    SInteger {
        generators: Vec<BigRational>,
        /// Primes dividing some numerator or denominator, ascending.
        primes: Vec<BigInt>,
    },
    NumberFieldUnits {
        field: Arc<NumberField>,
        generators: Vec<FieldElement>,
    },
    FunctionField {
        p: u64,
        generators: Vec<FpRationalFunction>,
        /// Monic irreducibles π with ord_π(g_i) ≠ 0 for some i, sorted.
        places: Vec<FpPoly>,
    },
}

impl PrimeComponent {
    pub fn class(&self) -> ComponentClass {
        match self {
            PrimeComponent::SInteger { .. } => ComponentClass::SInteger,
            PrimeComponent::NumberFieldUnits { .. } => ComponentClass::NumberFieldUnits,
            PrimeComponent::FunctionField { .. } => ComponentClass::FunctionField,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            PrimeComponent::SInteger { generators, .. } => generators.len(),
            PrimeComponent::NumberFieldUnits { generators, .. } => generators.len(),
            PrimeComponent::FunctionField { generators, .. } => generators.len(),
        }
    }

    pub fn s_integer(generators: Vec<BigRational>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                return Err(Error::validation(
                    format!("generators[{i}]"),
                    "generator must be nonzero",
                ));
            }
        }
        let mut primes: Vec<BigInt> = generators.iter().flat_map(rational_primes).collect();
        primes.sort();
        primes.dedup();
        Ok(PrimeComponent::SInteger { generators, primes })
    }

    pub fn number_field(field: NumberField, generators: Vec<FieldElement>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if !field.is_unit(g).map_err(|e| relocate(e, &format!("generators[{i}]")))? {
                return Err(Error::validation(
                    format!("generators[{i}]"),
                    format!("{g} is not a unit (norm {})", field.norm(g)),
                ));
            }
        }
        Ok(PrimeComponent::NumberFieldUnits {
            field: Arc::new(field),
            generators,
        })
    }

    pub fn function_field(p: u64, generators: Vec<FpRationalFunction>) -> Result<Self> {
        let mut places = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                return Err(Error::validation(
                    format!("generators[{i}]"),
                    "generator must be nonzero",
                ));
            }
            places.extend(g.finite_places());
        }
        places.sort();
        places.dedup();
        Ok(PrimeComponent::FunctionField {
            p,
            generators,
            places,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ComponentEntry {
    pub component: PrimeComponent,
    pub multiplicity: u32,
}

/// A validated system: a direct sum of prime components with multiplicities.
#[derive(Clone, Debug)]
pub struct SystemDescriptor {
    pub label: String,
    pub d: usize,
    pub components: Vec<ComponentEntry>,
}

impl SystemDescriptor {
    pub fn new(label: impl Into<String>, d: usize, components: Vec<ComponentEntry>) -> Result<Self> {
        if d < 2 {
            return Err(Error::validation("d", "d must be at least 2"));
        }
        if components.is_empty() {
            return Err(Error::validation("components", "at least one component required"));
        }
        for (i, c) in components.iter().enumerate() {
            if c.component.rank() != d {
                return Err(Error::validation(
                    format!("components[{i}].generators"),
                    format!("expected {d} generators, found {}", c.component.rank()),
                ));
            }
            if c.multiplicity == 0 {
                return Err(Error::validation(
                    format!("components[{i}].multiplicity"),
                    "multiplicity must be positive",
                ));
            }
        }
        Ok(SystemDescriptor {
            label: label.into(),
            d,
            components,
        })
    }

    /// Same system with one component's multiplicity replaced.
    pub fn with_multiplicity(&self, component: usize, multiplicity: u32) -> Result<Self> {
        let mut c = self.components.clone();
        c[component].multiplicity = multiplicity;
        SystemDescriptor::new(self.label.clone(), self.d, c)
    }
}

fn relocate(e: Error, path: &str) -> Error {
    match e {
        Error::Validation { path: p, message } => Error::Validation {
            path: format!("{path}.{p}"),
            message,
        },
        other => other,
    }
}

fn prefixed(e: Error, prefix: &str) -> Error {
    match e {
        Error::Validation { path, message } => Error::Validation {
            path: format!("{prefix}{path}"),
            message,
        },
        other => other,
    }
}

fn get<'a>(t: &'a toml::Table, key: &str, path: &str) -> Result<&'a Value> {
    t.get(key)
        .ok_or_else(|| Error::validation(format!("{path}{key}"), "missing field"))
}

fn as_bigint(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Integer(i) => Ok(BigInt::from(*i)),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::validation(path, format!("not an integer: {s:?}"))),
        _ => Err(Error::validation(path, "expected an integer")),
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::validation(path, "expected an array"))
}

pub fn parse_rational(s: &str, path: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::validation(path, format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::validation(path, "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parse and validate a TOML descriptor document.
pub fn parse_descriptor(document: &str) -> Result<SystemDescriptor> {
    let table: toml::Table = document
        .parse()
        .map_err(|e: toml::de::Error| Error::validation("document", e.to_string().trim().to_string()))?;
    let label = match table.get("label") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::validation("label", "expected a string")),
        None => String::new(),
    };
    let d = match get(&table, "d", "")? {
        Value::Integer(i) if *i >= 2 => *i as usize,
        _ => return Err(Error::validation("d", "expected an integer ≥ 2")),
    };
    let comps = as_array(get(&table, "components", "")?, "components")?;
    let mut entries = Vec::new();
    for (ci, cv) in comps.iter().enumerate() {
        let path = format!("components[{ci}].");
        let t = cv
            .as_table()
            .ok_or_else(|| Error::validation(format!("components[{ci}]"), "expected a table"))?;
        let class = match get(t, "class", &path)? {
            Value::String(s) => s.as_str(),
            _ => return Err(Error::validation(format!("{path}class"), "expected a string")),
        };
        let multiplicity = match t.get("multiplicity") {
            None => 1,
            Some(Value::Integer(m)) if *m >= 1 && *m <= u32::MAX as i64 => *m as u32,
            Some(_) => {
                return Err(Error::validation(
                    format!("{path}multiplicity"),
                    "expected a positive integer",
                ))
            }
        };
        let gens = as_array(get(t, "generators", &path)?, &format!("{path}generators"))?;
        if gens.len() != d {
            return Err(Error::validation(
                format!("{path}generators"),
                format!("expected {d} generators (d = {d}), found {}", gens.len()),
            ));
        }
        let component = match class {
            "s_integer" => {
                let mut g = Vec::new();
                for (i, v) in gens.iter().enumerate() {
                    let gp = format!("{path}generators[{i}]");
                    let q = match v {
                        Value::String(s) => parse_rational(s, &gp)?,
                        Value::Integer(n) => BigRational::from_integer((*n).into()),
                        _ => return Err(Error::validation(gp, "expected a rational string")),
                    };
                    g.push(q);
                }
                PrimeComponent::s_integer(g).map_err(|e| prefixed(e, &path))?
            }
            "number_field_units" => {
                let mp = as_array(get(t, "min_poly", &path)?, &format!("{path}min_poly"))?;
                let min_poly = mp
                    .iter()
                    .enumerate()
                    .map(|(i, v)| as_bigint(v, &format!("{path}min_poly[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let field = NumberField::new(NumberFieldSpec {
                    min_poly,
                    label: format!("{label}#{ci}"),
                })
                .map_err(|e| prefixed(e, &path))?;
                let mut g = Vec::new();
                for (i, v) in gens.iter().enumerate() {
                    let gp = format!("{path}generators[{i}]");
                    let coeffs = as_array(v, &gp)?
                        .iter()
                        .enumerate()
                        .map(|(k, c)| as_bigint(c, &format!("{gp}[{k}]")).map(BigRational::from_integer))
                        .collect::<Result<Vec<_>>>()?;
                    g.push(field.element(coeffs).map_err(|e| match e {
                        Error::Validation { message, .. } => Error::validation(gp.clone(), message),
                        other => other,
                    })?);
                }
                PrimeComponent::number_field(field, g).map_err(|e| prefixed(e, &path))?
            }
            "function_field" => {
                let p = match get(t, "characteristic", &path)? {
                    Value::Integer(p) if *p >= 2 && is_prime(&(*p as u64).into()) => *p as u64,
                    _ => {
                        return Err(Error::validation(
                            format!("{path}characteristic"),
                            "expected a prime integer",
                        ))
                    }
                };
                let mut g = Vec::new();
                for (i, v) in gens.iter().enumerate() {
                    let gp = format!("{path}generators[{i}]");
                    let s = v
                        .as_str()
                        .ok_or_else(|| Error::validation(gp.clone(), "expected a string in t"))?;
                    g.push(parse_rational_function(s, p).map_err(|e| match e {
                        Error::Validation { message, .. } => Error::validation(gp.clone(), message),
                        other => other,
                    })?);
                }
                PrimeComponent::function_field(p, g).map_err(|e| prefixed(e, &path))?
            }
            other => {
                return Err(Error::validation(
                    format!("{path}class"),
                    format!(
                        "unknown class {other:?} (expected s_integer, number_field_units or function_field)"
                    ),
                ))
            }
        };
        entries.push(ComponentEntry {
            component,
            multiplicity,
        });
    }
    SystemDescriptor::new(label, d, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_three_classes() {
        let s = parse_descriptor(
            r#"
label = "mix"
d = 2
[[components]]
class = "s_integer"
generators = ["2", "5/3"]
[[components]]
class = "function_field"
characteristic = 2
multiplicity = 2
generators = ["t", "t/(t+1)"]
[[components]]
class = "number_field_units"
min_poly = [-1, -1, 1]
generators = [[0, 1], [1, 1]]
"#,
        )
        .unwrap();
        assert_eq!(s.d, 2);
        assert_eq!(s.components.len(), 3);
        match &s.components[0].component {
            PrimeComponent::SInteger { primes, .. } => {
                assert_eq!(primes, &vec![BigInt::from(2), 3.into(), 5.into()])
            }
            _ => panic!(),
        }
        match &s.components[1].component {
            PrimeComponent::FunctionField { places, .. } => assert_eq!(places.len(), 2),
            _ => panic!(),
        }
        assert_eq!(s.components[1].multiplicity, 2);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = |doc: &str| match parse_descriptor(doc).unwrap_err() {
            Error::Validation { path, .. } => path,
            e => panic!("{e}"),
        };
        assert_eq!(
            err("d = 2\n[[components]]\nclass = \"s_integer\"\ngenerators = [\"2\", \"0\"]\n"),
            "components[0].generators[1]"
        );
        assert_eq!(
            err("d = 3\n[[components]]\nclass = \"s_integer\"\ngenerators = [\"2\", \"3\"]\n"),
            "components[0].generators"
        );
        assert_eq!(
            err("d = 2\n[[components]]\nclass = \"number_field_units\"\nmin_poly = [-2, 0, 1]\ngenerators = [[2, 0], [1, 1]]\n"),
            "components[0].generators[0]"
        );
        assert_eq!(
            err("d = 2\n[[components]]\nclass = \"number_field_units\"\nmin_poly = [1, -2, 1]\ngenerators = [[2, 0], [1, 1]]\n"),
            "components[0].min_poly"
        );
        assert_eq!(
            err("d = 2\n[[components]]\nclass = \"function_field\"\ncharacteristic = 4\ngenerators = [\"t\", \"t\"]\n"),
            "components[0].characteristic"
        );
        assert_eq!(err("d = 2\ncomponents = [\n"), "document");
        assert_eq!(
            err("d = 2\n[[components]]\nclass = \"torus\"\ngenerators = [\"2\", \"3\"]\n"),
            "components[0].class"
        );
    }
}
