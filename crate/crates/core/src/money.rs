//! Presentation rounding for currency.
//!
//! All arithmetic runs in `f64`. Values are rounded to cents only when they
//! are rendered, using half-up rounding on the shortest decimal form of the
//! float (so `1.005` renders as `1.01`, not `1.00`).

/// Formats `value` with exactly `decimals` fractional digits, rounding half up
/// (away from zero for negative values).
pub fn format_fixed(value: f64, decimals: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    // Display for f64 yields the shortest round-trip form without an exponent.
    let repr = format!("{}", value.abs());
    let (int_part, frac_part) = match repr.split_once('.') {
        Some((i, f)) => (i.to_string(), f.to_string()),
        None => (repr.clone(), String::new()),
    };

    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let int_len = digits.len();
    let frac_bytes = frac_part.as_bytes();
    for i in 0..decimals {
        digits.push(frac_bytes.get(i).map_or(0, |b| b - b'0'));
    }
    let round_up = frac_bytes.get(decimals).is_some_and(|b| *b >= b'5');

    let mut int_len = int_len;
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                int_len += 1;
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }

    let to_str = |ds: &[u8]| ds.iter().map(|d| char::from(b'0' + d)).collect::<String>();
    let mut out = String::new();
    let is_zero = digits.iter().all(|d| *d == 0);
    if value.is_sign_negative() && !is_zero {
        out.push('-');
    }
    out.push_str(&to_str(&digits[..int_len]));
    if decimals > 0 {
        out.push('.');
        out.push_str(&to_str(&digits[int_len..]));
    }
    out
}

/// Formats a dollar amount with two decimals, half-up.
pub fn format_usd(value: f64) -> String {
    format_fixed(value, 2)
}

/// Rounds to cents, half-up, returning the rounded value as a float.
pub fn round_cents(value: f64) -> f64 {
    format_usd(value).parse().unwrap_or(value)
}
