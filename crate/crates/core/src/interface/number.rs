//! Exact numbers for the text formats: integers, decimals, fractions `a/b`
//! and decimal exponents are all read into a reduced `Ratio<i64>`.

use num_rational::Ratio;

pub type Exact = Ratio<i64>;

fn checked_pow10(exp: u32) -> Option<i64> {
    10i64.checked_pow(exp)
}

fn parse_decimal(s: &str) -> Result<Exact, String> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (
            &s[..k],
            s[k + 1..]
                .parse::<i32>()
                .map_err(|_| format!("malformed exponent in `{s}`"))?,
        ),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("malformed number `{s}`"));
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: i64 = if all.is_empty() {
        0
    } else {
        all.parse()
            .map_err(|_| format!("number `{s}` is out of range"))?
    };
    let scale = exponent - frac_part.len() as i32;
    let overflow = || format!("number `{s}` is out of range");
    let value = if scale >= 0 {
        let m = checked_pow10(scale as u32).ok_or_else(overflow)?;
        Exact::from_integer(numer.checked_mul(m).ok_or_else(overflow)?)
    } else {
        Exact::new(numer, checked_pow10((-scale) as u32).ok_or_else(overflow)?)
    };
    Ok(if neg { -value } else { value })
}

/// Parses `3`, `-0.25`, `1e-3` or `9/13`.
pub fn parse_exact(s: &str) -> Result<Exact, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_decimal(n.trim())?;
            let d = parse_decimal(d.trim())?;
            if *d.numer() == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(n / d)
        }
        None => parse_decimal(s),
    }
}

pub fn to_f64(r: &Exact) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Canonical text: integers plainly, terminating decimals in decimal
/// notation, everything else as `a/b`.
pub fn format_exact(r: &Exact) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = *r.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d == 1 {
        let places = twos.max(fives);
        if let Some(scale) = checked_pow10(places) {
            if let Some(n) = r.numer().checked_mul(scale / r.denom()) {
                let neg = n < 0;
                let digits = format!("{:0>width$}", n.unsigned_abs(), width = places as usize + 1);
                let (i, f) = digits.split_at(digits.len() - places as usize);
                return format!("{}{i}.{f}", if neg { "-" } else { "" });
            }
        }
    }
    format!("{}/{}", r.numer(), r.denom())
}
