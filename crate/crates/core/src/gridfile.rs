//! Plain-text grid files. Layout:
//!
//! ```text
//! zpow-grid 1
//! a <decimal>
//! N <integer>
//! bits <integer>
//! n m re im        ((N+1)² rows, n-major)
//! ```
//!
//! Decimals carry enough digits that reading them back at `bits` restores
//! every value bit for bit.

use std::io::{BufRead, Write};

use rug::Float;

use crate::error::{Error, Result};
use crate::lattice::PowerMapGrid;
use crate::numerics::BigComplex;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "zpow-grid";

/// Shortest trailing-zero-free rendering of a correctly rounded decimal with
/// `ceil(bits log10 2) + 2` digits.
pub fn format_decimal(x: &Float) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let s = x.to_string_radix(10, Some(digits));
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, Some(e)),
        None => (s.as_str(), None),
    };
    let mant = if mant.contains('.') {
        mant.trim_end_matches('0').trim_end_matches('.')
    } else {
        mant
    };
    match exp {
        Some(e) if e != "0" => format!("{mant}e{e}"),
        _ => mant.to_string(),
    }
}

pub fn parse_decimal(s: &str, bits: u32) -> Result<Float> {
    Float::parse(s)
        .map(|v| Float::with_val(bits, v))
        .map_err(|e| Error::Format(format!("bad number '{s}': {e}")))
}

pub fn write_grid<W: Write>(grid: &PowerMapGrid, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC} {FORMAT_VERSION}")?;
    writeln!(out, "a {}", format_decimal(&grid.a))?;
    writeln!(out, "N {}", grid.size)?;
    writeln!(out, "bits {}", grid.prec())?;
    for n in 0..=grid.size {
        for m in 0..=grid.size {
            let z = grid.get(n, m);
            writeln!(out, "{n} {m} {} {}", format_decimal(&z.re), format_decimal(&z.im))?;
        }
    }
    Ok(())
}

pub fn grid_to_string(grid: &PowerMapGrid) -> String {
    let mut buf = Vec::new();
    write_grid(grid, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn header<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Format(format!("missing '{key}' line")))?;
    match line.split_once(' ') {
        Some((k, v)) if k == key => Ok(v.trim()),
        _ => Err(Error::Format(format!("expected '{key} ...', got '{line}'"))),
    }
}

fn parse_int<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Format(format!("bad {what} '{s}'")))
}

pub fn read_grid<R: BufRead>(input: R) -> Result<PowerMapGrid> {
    let text: Vec<String> = input
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::Format(e.to_string()))?;
    let mut lines = text.iter().map(|l| l.trim()).filter(|l| !l.is_empty());
    let version: u32 = parse_int(header(lines.next(), MAGIC)?, "version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let a_text = header(lines.next(), "a")?.to_string();
    let size: usize = parse_int(header(lines.next(), "N")?, "N")?;
    let bits: u32 = parse_int(header(lines.next(), "bits")?, "bits")?;
    if !(rug::float::prec_min()..=rug::float::prec_max()).contains(&bits) {
        return Err(Error::Format(format!("bits = {bits} out of range")));
    }
    let a = parse_decimal(&a_text, bits)?;
    let w = size + 1;
    let mut values = vec![BigComplex::zero(bits); w * w];
    let mut seen = vec![false; w * w];
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(Error::Format(format!("expected 4 fields: '{line}'")));
        }
        let (n, m): (usize, usize) = (parse_int(f[0], "n")?, parse_int(f[1], "m")?);
        if n > size || m > size {
            return Err(Error::Format(format!("site ({n}, {m}) outside N = {size}")));
        }
        let k = n * w + m;
        if seen[k] {
            return Err(Error::Format(format!("duplicate row for ({n}, {m})")));
        }
        seen[k] = true;
        values[k] = BigComplex::new(parse_decimal(f[2], bits)?, parse_decimal(f[3], bits)?);
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(Error::Format(format!("missing row for ({}, {})", k / w, k % w)));
    }
    PowerMapGrid::from_values(a, size, values)
}

pub fn grid_from_str(s: &str) -> Result<PowerMapGrid> {
    read_grid(s.as_bytes())
}
