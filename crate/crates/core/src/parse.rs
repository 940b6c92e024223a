//! Plain-text input formats.
//!
//! Complex numbers are written `re+imj` (`1.5-0.25j`, `2j`, `-3`).
//!
//! Period matrix file: the first line holds the genus g, then g lines of g
//! whitespace-separated complex entries.
//!
//! Theta Baker–Akhiezer input file and scenario files: `key = value` lines;
//! `#` starts a comment. Baker–Akhiezer keys are `B` (g·g entries, row-major),
//! `z`, `U`, `V`, `abel_P`, `abel_r` (g entries each), `exp1_P`, `exp2_P`,
//! `exp1_r`, `exp2_r` (one complex each) and `d` (real).

use std::collections::BTreeMap;

use crate::baker_akhiezer::ThetaBaInputs;
use crate::theta::PeriodMatrix;
use crate::{Error, Result, C64};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_f64(s: &str, ctx: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| perr(format!("{ctx}: cannot parse number '{s}'")))?;
    if !v.is_finite() {
        return Err(perr(format!("{ctx}: non-finite value '{s}'")));
    }
    Ok(v)
}

/// Parses `re+imj`, `re-imj`, `imj` or `re`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let ctx = "complex";
    if s.is_empty() {
        return Err(perr("empty complex literal"));
    }
    let Some(body) = s.strip_suffix(['j', 'J']) else {
        return Ok(C64::new(parse_f64(s, ctx)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let im_of = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_f64(t, ctx),
        }
    };
    match split {
        Some(i) => Ok(C64::new(parse_f64(&body[..i], ctx)?, im_of(&body[i..])?)),
        None => Ok(C64::new(0.0, im_of(body)?)),
    }
}

/// Inverse of [`parse_complex`]; uses the shortest round-tripping form.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

pub fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    s.split_whitespace().map(parse_complex).collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(n, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((n + 1, l))
    })
}

pub fn parse_period_matrix(text: &str) -> Result<PeriodMatrix<f64>> {
    let mut lines = content_lines(text);
    let (_, first) = lines
        .next()
        .ok_or_else(|| perr("empty period matrix file"))?;
    let g: usize = first
        .parse()
        .map_err(|_| perr(format!("first line must be the genus, got '{first}'")))?;
    if g == 0 {
        return Err(perr("genus must be positive"));
    }
    let mut rows = Vec::with_capacity(g);
    for (n, l) in lines {
        let row = parse_complex_list(l).map_err(|e| perr(format!("line {n}: {e}")))?;
        if row.len() != g {
            return Err(perr(format!(
                "line {n}: expected {g} entries, got {}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != g {
        return Err(perr(format!(
            "expected {g} matrix rows, got {}",
            rows.len()
        )));
    }
    PeriodMatrix::new(&rows)
}

/// `key = value` pairs; duplicate keys are rejected.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, l) in content_lines(text) {
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| perr(format!("line {n}: expected 'key = value'")))?;
        let k = k.trim().to_string();
        if k.is_empty() {
            return Err(perr(format!("line {n}: empty key")));
        }
        if out.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(perr(format!("line {n}: duplicate key '{k}'")));
        }
    }
    Ok(out)
}

pub fn parse_theta_ba_inputs(text: &str) -> Result<ThetaBaInputs<f64>> {
    let kv = parse_key_values(text)?;
    let get = |k: &str| kv.get(k).ok_or_else(|| perr(format!("missing key '{k}'")));
    let vec_of = |k: &str| -> Result<Vec<C64>> { parse_complex_list(get(k)?) };
    let one = |k: &str| -> Result<C64> { parse_complex(get(k)?) };

    let flat = vec_of("B")?;
    let g = (flat.len() as f64).sqrt().round() as usize;
    if g == 0 || g * g != flat.len() {
        return Err(perr(format!("B must hold g*g entries, got {}", flat.len())));
    }
    if let Some(gs) = kv.get("genus") {
        let declared: usize = gs.parse().map_err(|_| perr("genus must be an integer"))?;
        if declared != g {
            return Err(Error::DimensionMismatch {
                expected: declared,
                got: g,
            });
        }
    }
    let rows: Vec<Vec<C64>> = flat.chunks(g).map(<[C64]>::to_vec).collect();
    let inp = ThetaBaInputs {
        b: PeriodMatrix::new(&rows)?,
        z: vec_of("z")?,
        u: vec_of("U")?,
        v: vec_of("V")?,
        abel_p: vec_of("abel_P")?,
        abel_r: vec_of("abel_r")?,
        exp1_p: one("exp1_P")?,
        exp2_p: one("exp2_P")?,
        exp1_r: one("exp1_r")?,
        exp2_r: one("exp2_r")?,
        d: parse_f64(get("d")?, "d")?,
    };
    inp.validate()?;
    Ok(inp)
}
