//! Golden data: embedded at compile time, overridable by `DARBOUXLIE_DATA`.

use std::path::Path;

use crate::error::{Error, Result};

/// Environment variable naming a directory that replaces the embedded data.
pub const DATA_ENV: &str = "DARBOUXLIE_DATA";

macro_rules! embed {
    ($($p:literal),* $(,)?) => {
        &[$(($p, include_str!(concat!("../data/", $p)))),*]
    };
}

static FILES: &[(&str, &str)] = embed!(
    "algebras/s1.alg",
    "algebras/s2.alg",
    "algebras/s3.alg",
    "algebras/s4.alg",
    "algebras/s5.alg",
    "algebras/s6.alg",
    "algebras/s7.alg",
    "algebras/s8.alg",
    "algebras/s9.alg",
    "algebras/s10.alg",
    "algebras/s11.alg",
    "algebras/s12.alg",
    "algebras/n1.alg",
    "algebras/s6_231.alg",
    "algebras/7I.alg",
    "schouten/g_l2.txt",
    "schouten/l2_l2.txt",
    "schouten/g_l3.txt",
    "schouten/errata.txt",
    "ybe/systems.txt",
    "invariants.txt",
    "orbits/s1.txt",
    "orbits/s2.txt",
    "orbits/s3.txt",
    "orbits/s4.txt",
    "orbits/s5.txt",
    "orbits/s6.txt",
    "orbits/s7.txt",
    "orbits/s8.txt",
    "orbits/s9.txt",
    "orbits/s10.txt",
    "orbits/s11.txt",
    "orbits/s12.txt",
    "orbits/n1.txt",
    "orbits/errata.txt",
    "orbits/automorphisms.txt",
    "orbits/classes.txt",
    "trees/bricks.txt",
    "trees/s1.txt",
    "trees/s2.txt",
    "trees/s3.txt",
    "trees/s3_11.txt",
    "trees/s4.txt",
    "trees/s5.txt",
    "trees/s6.txt",
    "trees/s7.txt",
    "trees/s8.txt",
    "trees/s8_1.txt",
    "trees/s9.txt",
    "trees/s10.txt",
    "trees/s11.txt",
    "trees/s12.txt",
    "trees/n1.txt",
);

/// Reads `rel` from `$DARBOUXLIE_DATA` when set, else from the embedded copy.
pub fn read(rel: &str) -> Result<String> {
    match std::env::var_os(DATA_ENV) {
        Some(dir) => read_from(Path::new(&dir), rel),
        None => embedded(rel),
    }
}

pub fn read_from(dir: &Path, rel: &str) -> Result<String> {
    std::fs::read_to_string(dir.join(rel))
        .map_err(|e| Error::GoldenDataMissing(format!("{}: {e}", dir.join(rel).display())))
}

pub fn embedded(rel: &str) -> Result<String> {
    FILES
        .iter()
        .find(|(p, _)| *p == rel)
        .map(|(_, s)| s.to_string())
        .ok_or_else(|| Error::GoldenDataMissing(rel.to_string()))
}

/// Names of all embedded files.
pub fn embedded_files() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(p, _)| *p)
}
