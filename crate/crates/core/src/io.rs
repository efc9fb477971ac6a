//! File formats and number formatting.
//!
//! Sign matrices are stored one row per line with `+` and `-`; CSV rows of
//! ±1 integers are accepted on input. Real matrices use CSV with 17
//! significant digits. Reported reals use 10 significant digits, with a
//! hex-float companion when exact round-tripping matters.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::matrix::SignMatrix;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits into lines, tolerating CRLF and one trailing newline.
fn lines(text: &str) -> Vec<&str> {
    let body = text
        .strip_suffix("\r\n")
        .or_else(|| text.strip_suffix('\n'))
        .unwrap_or(text);
    if body.is_empty() {
        return Vec::new();
    }
    body.split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect()
}

/// Parses the +/- text format. Lines and columns in errors are 1-based.
pub fn parse_sign_matrix(text: &str) -> Result<SignMatrix> {
    let rows = lines(text);
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let mut count = 0;
        for (j, ch) in row.chars().enumerate() {
            match ch {
                '+' => entries.push(1),
                '-' => entries.push(-1),
                other => {
                    return Err(parse_error(
                        i + 1,
                        j + 1,
                        format!("unexpected character {other:?}"),
                    ))
                }
            }
            count += 1;
            if count > n {
                return Err(parse_error(i + 1, j + 1, format!("row longer than {n} entries")));
            }
        }
        if count < n {
            return Err(parse_error(
                i + 1,
                count + 1,
                format!("row has {count} entries, expected {n}"),
            ));
        }
    }
    SignMatrix::new(n, entries)
}

/// Parses rows of comma-separated ±1 integers.
pub fn parse_sign_csv(text: &str) -> Result<SignMatrix> {
    let rows = lines(text);
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != n {
            return Err(parse_error(
                i + 1,
                1,
                format!("row has {} fields, expected {n}", fields.len()),
            ));
        }
        for (j, f) in fields.iter().enumerate() {
            match f.trim() {
                "1" | "+1" => entries.push(1),
                "-1" => entries.push(-1),
                other => {
                    return Err(parse_error(i + 1, j + 1, format!("not ±1: {other:?}")))
                }
            }
        }
    }
    SignMatrix::new(n, entries)
}

/// CSV when the text contains a comma or a digit, otherwise the +/- format.
pub fn parse_sign_auto(text: &str) -> Result<SignMatrix> {
    if text.contains(|c: char| c == ',' || c.is_ascii_digit()) {
        parse_sign_csv(text)
    } else {
        parse_sign_matrix(text)
    }
}

pub fn read_sign_matrix(path: &Path) -> Result<SignMatrix> {
    parse_sign_auto(&std::fs::read_to_string(path)?)
}

/// LF line endings, trailing newline.
pub fn write_sign_matrix(a: &SignMatrix) -> String {
    let n = a.n();
    let mut out = String::with_capacity(n * (n + 1));
    for row in a.rows() {
        out.extend(row.iter().map(|&v| if v == 1 { '+' } else { '-' }));
        out.push('\n');
    }
    out
}

pub fn write_real_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{:.16e}", m[(i, j)]).expect("string write");
        }
        out.push('\n');
    }
    out
}

pub fn parse_real_csv(text: &str) -> Result<DMatrix<f64>> {
    let rows = lines(text);
    if rows.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut data = Vec::new();
    let mut ncols = None;
    for (i, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        match ncols {
            None => ncols = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(parse_error(i + 1, 1, format!("expected {c} fields")))
            }
            _ => {}
        }
        for (j, f) in fields.iter().enumerate() {
            data.push(
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| parse_error(i + 1, j + 1, e.to_string()))?,
            );
        }
    }
    Ok(DMatrix::from_row_slice(rows.len(), ncols.unwrap(), &data))
}

/// 10 significant digits, positional for magnitudes in [1e−4, 1e10),
/// scientific otherwise. Non-finite values print as `inf`, `-inf`, `nan`.
pub fn format_sig10(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.000000000".into();
    }
    let sci = format!("{x:.9e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-4..10).contains(&exp) {
        return sci;
    }
    format!("{:.*}", (9 - exp) as usize, x)
}

/// C99-style hex float (`0x1.8p+0`); `inf`, `-inf`, `nan` otherwise.
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 {
        (0, -1022)
    } else {
        (1, exp_bits - 1023)
    };
    let mut digits = format!("{mantissa:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let frac = if digits.is_empty() {
        String::new()
    } else {
        format!(".{digits}")
    };
    format!("{sign}0x{lead}{frac}p{exp:+}")
}

pub fn parse_hex(text: &str) -> Option<f64> {
    let t = text.trim();
    match t {
        "inf" | "+inf" => return Some(f64::INFINITY),
        "-inf" => return Some(f64::NEG_INFINITY),
        "nan" => return Some(f64::NAN),
        _ => {}
    }
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let rest = rest.strip_prefix("0x").or_else(|| rest.strip_prefix("0X"))?;
    let (mant, exp) = rest.split_once(['p', 'P'])?;
    let exp: i64 = exp.parse().ok()?;
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() || frac_part.len() > 13 {
        return None;
    }
    let int_val = u64::from_str_radix(int_part, 16).ok()?;
    if int_val > 1 {
        return None;
    }
    let frac_val = if frac_part.is_empty() {
        0
    } else {
        u64::from_str_radix(frac_part, 16).ok()? << (4 * (13 - frac_part.len()))
    };
    let value = if int_val == 0 {
        if frac_val == 0 {
            0.0
        } else if exp != -1022 {
            return None;
        } else {
            f64::from_bits(frac_val)
        }
    } else {
        let biased = exp + 1023;
        if !(1..=2046).contains(&biased) {
            return None;
        }
        f64::from_bits(((biased as u64) << 52) | frac_val)
    };
    Some(if neg { -value } else { value })
}

/// A real serialized as a JSON number with 10 significant digits, or as
/// the string "inf"/"nan" when not finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig10(pub f64);

impl Serialize for Sig10 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format_sig10(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(serializer)
        } else {
            serializer.serialize_str(&format_sig10(self.0))
        }
    }
}
