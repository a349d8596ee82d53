//! Bundled example systems.

use super::descriptor::{parse_descriptor, SystemDescriptor};
use crate::error::{Error, Result};

pub const TIMES2TIMES3: &str = include_str!("../../../../fixtures/times2times3.toml");
pub const LEDRAPPIER: &str = include_str!("../../../../fixtures/ledrappier.toml");
pub const SQRT2SQRT3: &str = include_str!("../../../../fixtures/sqrt2sqrt3.toml");
pub const TIMES2TIMES3TIMES5: &str = include_str!("../../../../fixtures/times2times3times5.toml");
pub const DK_SEXTIC: &str = include_str!("../../../../fixtures/dk-sextic.toml");

/// (name, document) for every bundled fixture.
pub const ALL: [(&str, &str); 5] = [
    ("times2times3", TIMES2TIMES3),
    ("ledrappier", LEDRAPPIER),
    ("sqrt2sqrt3", SQRT2SQRT3),
    ("times2times3times5", TIMES2TIMES3TIMES5),
    ("dk-sextic", DK_SEXTIC),
];

pub fn document(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

pub fn load(name: &str) -> Result<SystemDescriptor> {
    let doc = document(name)
        .ok_or_else(|| Error::validation("fixture", format!("no bundled fixture named {name:?}")))?;
    parse_descriptor(doc)
}
