//! Parsing of numbers and lists given on the command line or in the config.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;

/// Complex number in the forms `1.5`, `-2i`, `i`, `0.3+0.4i`, `1e-3-2e-1i`.
pub fn complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty complex number");
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, imaginary(&body[k..])?),
        None => (0.0, imaginary(body)?),
    };
    Ok(Complex64::new(re, im))
}

fn imaginary(coef: &str) -> Result<f64> {
    match coef {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(coef),
    }
}

pub fn real(text: &str) -> Result<f64> {
    let v: f64 = text.trim().parse().with_context(|| format!("not a number: {text:?}"))?;
    if !v.is_finite() {
        bail!("non-finite number {text:?}");
    }
    Ok(v)
}

fn items(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn real_list(text: &str) -> Result<Vec<f64>> {
    items(text).map(real).collect()
}

pub fn complex_list(text: &str) -> Result<Vec<Complex64>> {
    items(text).map(complex).collect()
}

pub fn size_list(text: &str) -> Result<Vec<usize>> {
    items(text)
        .map(|s| s.parse::<usize>().map_err(|_| anyhow!("not a size: {s:?}")))
        .collect()
}
