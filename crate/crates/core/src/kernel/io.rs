//! Plain-text ideal format.
//!
//! ```text
//! ring p=32003 vars=4
//! x0*x2 + 32002*x1^2
//! x1*x3 + 32002*x2^2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use super::field::Field;
use super::ideal::HomogeneousIdeal;
use super::poly::{parse_polynomial, Ring};
use crate::error::{Error, Result};

pub fn write_ideal(i: &HomogeneousIdeal) -> String {
    let r = i.ring();
    let mut out = format!("ring p={} vars={}\n", r.field.modulus(), r.nvars);
    for g in i.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

pub fn read_ideal(text: &str) -> Result<HomogeneousIdeal> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing ring header".into(),
    })?;
    let ring = parse_header(header).map_err(|msg| Error::Parse { line: hline, msg })?;
    let mut gens = Vec::new();
    for (k, l) in lines {
        let p = parse_polynomial(ring, l).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: k, msg },
            other => other,
        })?;
        if !p.is_homogeneous() {
            return Err(Error::Parse {
                line: k,
                msg: "generator is not homogeneous".into(),
            });
        }
        gens.push(p);
    }
    HomogeneousIdeal::new(ring, gens)
}

fn parse_header(h: &str) -> std::result::Result<Ring, String> {
    let mut parts = h.split_whitespace();
    if parts.next() != Some("ring") {
        return Err("header must start with 'ring'".into());
    }
    let (mut p, mut n) = (None, None);
    for kv in parts {
        match kv.split_once('=') {
            Some(("p", v)) => p = Some(v.parse::<u32>().map_err(|_| format!("bad prime '{v}'"))?),
            Some(("vars", v)) => {
                n = Some(v.parse::<usize>().map_err(|_| format!("bad variable count '{v}'"))?)
            }
            _ => return Err(format!("unexpected header field '{kv}'")),
        }
    }
    let p = p.ok_or("header lacks p=")?;
    let n = n.ok_or("header lacks vars=")?;
    if n == 0 || n > super::monomial::MAX_VARS {
        return Err(format!("unsupported variable count {n}"));
    }
    let field = Field::new(p).map_err(|e| e.to_string())?;
    Ok(Ring::new(n, field))
}
