//! Number formatting and complex literal parsing.

use num_complex::Complex64;

/// `digits` significant digits in exponent form, e.g. `1.2500000000000000e-1`.
/// Locale-independent and parseable by any float reader.
pub fn fixed_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.*e}", digits - 1, x)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Like `%g`: `digits` significant digits, positional notation for moderate
/// exponents, trailing zeros dropped.
pub fn general(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return fixed_sig(x, digits);
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = e.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mant))
    }
}

/// `a`, `a+bi` or `a-bi` with the given real formatter.
pub fn complex_with(z: Complex64, f: impl Fn(f64) -> String) -> String {
    if z.im == 0.0 {
        f(z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", f(z.re), f(-z.im))
    } else {
        format!("{}+{}i", f(z.re), f(z.im))
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => s.parse::<f64>().map_err(|_| format!("'{s}' is not a number")),
    }
}

/// Parses `1.5`, `-2e-3`, `0.5+2i`, `1-i`, `3i` (a trailing `j` is accepted too).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty number".into());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        let re: f64 = s.parse().map_err(|_| format!("'{text}' is not a real or complex number"))?;
        return Ok(Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    // the sign that separates the parts is the last one not inside an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let bad = |e: String| format!("'{text}' is not a complex number: {e}");
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().map_err(|_| bad(format!("bad real part '{}'", &body[..k])))?;
            Ok(Complex64::new(re, parse_real(&body[k..]).map_err(bad)?))
        }
        None => Ok(Complex64::new(0.0, parse_real(body).map_err(bad)?)),
    }
}
