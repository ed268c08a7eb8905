//! The line-based chain file format.
//!
//! ```text
//! chain v1 rank=<n> variant=<out|aut> dim=<k>
//! <num>/<den> <cell key>
//! ```
//!
//! Terms are sorted by key bytes, denominators are positive, and fractions
//! are reduced, so two runs that compute the same chain write identical
//! bytes.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use ghl_core::canon::CellKey;
use ghl_core::complex::{Chain, Variant};
use ghl_core::Rat;

use crate::{CliError, CliResult};

pub fn variant_from_str(s: &str) -> CliResult<Variant> {
    match s {
        "out" => Ok(Variant::Out),
        "aut" => Ok(Variant::Aut),
        other => Err(CliError::BadInput(format!(
            "variant must be out or aut, got {other}"
        ))),
    }
}

/// Renders a chain in the file format.
pub fn chain_to_string(chain: &Chain) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "chain v1 rank={} variant={} dim={}\n",
        chain.rank(),
        chain.variant(),
        chain.dim()
    ));
    for (key, coeff) in chain.terms() {
        debug_assert!(coeff.denom().is_positive());
        out.push_str(&format!("{}/{} {}\n", coeff.numer(), coeff.denom(), key));
    }
    out
}

pub fn write_chain(path: &Path, chain: &Chain) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(io_err)?;
        }
    }
    let mut f = std::fs::File::create(path).map_err(io_err)?;
    f.write_all(chain_to_string(chain).as_bytes()).map_err(io_err)
}

pub fn parse_chain(text: &str, path: &Path) -> CliResult<Chain> {
    let err = |line: usize, msg: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty chain file".into()))?;
    let mut rank: Option<u32> = None;
    let mut variant: Option<Variant> = None;
    let mut dim: Option<u32> = None;
    let mut words = header.split_whitespace();
    if words.next() != Some("chain") || words.next() != Some("v1") {
        return Err(err(1, "header must start with: chain v1".into()));
    }
    for w in words {
        if let Some(v) = w.strip_prefix("rank=") {
            rank = v.parse().ok();
        } else if let Some(v) = w.strip_prefix("variant=") {
            variant = variant_from_str(v).ok();
        } else if let Some(v) = w.strip_prefix("dim=") {
            dim = v.parse().ok();
        } else {
            return Err(err(1, format!("unknown header field {w}")));
        }
    }
    let (Some(rank), Some(variant), Some(dim)) = (rank, variant, dim) else {
        return Err(err(1, "header needs rank=, variant=, dim=".into()));
    };
    let mut terms: Vec<(CellKey, Rat)> = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (coeff, key) = line
            .split_once(' ')
            .ok_or_else(|| err(lineno, "expected: <num>/<den> <key>".into()))?;
        let (num, den) = coeff
            .split_once('/')
            .ok_or_else(|| err(lineno, "coefficient must be <num>/<den>".into()))?;
        let num = BigInt::from_str(num)
            .map_err(|_| err(lineno, format!("bad numerator {num}")))?;
        let den = BigInt::from_str(den)
            .map_err(|_| err(lineno, format!("bad denominator {den}")))?;
        if !den.is_positive() {
            return Err(err(lineno, "denominator must be positive".into()));
        }
        terms.push((CellKey::from_string(key.to_string()), Rat::new(num, den)));
    }
    Chain::from_terms(rank, variant, dim, terms)
        .map_err(|e| err(0, format!("invalid chain: {e}")))
}

pub fn read_chain(path: &Path) -> CliResult<Chain> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_chain(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghl_core::complex::OrientedCell;
    use ghl_core::{fixtures, rat};

    #[test]
    fn round_trip_is_identity() {
        let theta = fixtures::theta();
        let cell = OrientedCell::new(theta.clone(), vec![0], false).unwrap();
        let c = ghl_core::complex::Chain::term(&cell, rat(-3, 7)).unwrap();
        let base = OrientedCell::new(theta, vec![1], false).unwrap();
        let c = c
            .add(&ghl_core::complex::Chain::term(&base, rat(2, 1)).unwrap())
            .unwrap();
        let text = chain_to_string(&c);
        let back = parse_chain(&text, Path::new("t.chain")).unwrap();
        assert_eq!(back, c);
        assert_eq!(chain_to_string(&back), text);
    }

    #[test]
    fn header_is_validated() {
        assert!(parse_chain("chain v2 rank=2\n", Path::new("t")).is_err());
        assert!(parse_chain("chain v1 rank=2 variant=out\n", Path::new("t")).is_err());
        let c = parse_chain("chain v1 rank=2 variant=out dim=0\n", Path::new("t")).unwrap();
        assert!(c.is_zero());
    }
}
