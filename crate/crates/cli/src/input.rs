//! Descriptor lookup, hashing and error context.

use std::fs;
use std::path::{Path, PathBuf};

use expsub_core::{fixtures, Error, System};
use sha2::{Digest, Sha256};

use crate::CliError;

/// A loaded descriptor with its source text.
pub struct Input {
    pub source: String,
    pub document: String,
    pub system: System,
}

impl Input {
    pub fn hash(&self) -> String {
        descriptor_hash(&self.document)
    }
}

/// Resolve `name` as a path, the path with `.toml` appended, or a bundled fixture.
pub fn resolve(name: &str) -> Result<(String, String), CliError> {
    let p = PathBuf::from(name);
    for candidate in [p.clone(), p.with_extension("toml")] {
        if candidate.is_file() {
            let text = fs::read_to_string(&candidate)
                .map_err(|e| CliError::Io(format!("{}: {e}", candidate.display())))?;
            return Ok((candidate.display().to_string(), text));
        }
    }
    let stem = Path::new(name)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(name);
    match fixtures::document(stem) {
        Some(doc) => Ok((format!("<bundled:{stem}>"), doc.to_string())),
        None => Err(CliError::Io(format!(
            "{name}: no such file and no bundled fixture of that name"
        ))),
    }
}

pub fn load(name: &str) -> Result<Input, CliError> {
    let (source, document) = resolve(name)?;
    let system = System::parse(&document).map_err(|e| with_context(&source, &document, e))?;
    Ok(Input {
        source,
        document,
        system,
    })
}

pub fn descriptor_hash(document: &str) -> String {
    Sha256::digest(document.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn with_context(source: &str, document: &str, e: Error) -> CliError {
    match &e {
        Error::Validation { path, message } => {
            let at = match locate_line(document, path) {
                Some(line) => format!("{source}:{line}"),
                None => source.to_string(),
            };
            CliError::Descriptor(format!("{at}: {path}: {message}"))
        }
        _ => CliError::Descriptor(format!("{source}: {e}")),
    }
}

/// Line (1-based) of the key addressed by a path such as `components[1].generators[0]`.
pub fn locate_line(document: &str, path: &str) -> Option<usize> {
    let mut parts = path.split('.');
    let head = parts.next()?;
    let (section, key) = match head.strip_prefix("components[") {
        Some(rest) => {
            let idx: usize = rest.split(']').next()?.parse().ok()?;
            let key = parts.next().map(|k| k.split('[').next().unwrap_or(k));
            (Some(idx), key)
        }
        None => (None, Some(head.split('[').next().unwrap_or(head))),
    };
    let mut seen = 0usize;
    let mut inside = section.is_none();
    let mut section_line = None;
    for (i, raw) in document.lines().enumerate() {
        let line = raw.trim();
        if line == "[[components]]" {
            if let Some(idx) = section {
                inside = seen == idx;
                if inside {
                    section_line = Some(i + 1);
                }
            } else {
                inside = false;
            }
            seen += 1;
            continue;
        }
        if !inside {
            continue;
        }
        if let Some(k) = key {
            if let Some(rest) = line.strip_prefix(k) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    section_line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_lookup() {
        let doc = "label = \"x\"\nd = 2\n\n[[components]]\nclass = \"s_integer\"\ngenerators = [\"2\", \"0\"]\n";
        assert_eq!(locate_line(doc, "components[0].generators[1]"), Some(6));
        assert_eq!(locate_line(doc, "d"), Some(2));
        assert_eq!(locate_line(doc, "components[0].primes"), Some(4));
        assert_eq!(locate_line(doc, "components[3].class"), None);
    }
}
