//! Locale-independent numeric formatting for reports and CSV files.

/// Formats `v` with `digits` significant digits, trailing zeros trimmed.
///
/// Fixed notation is used for magnitudes in `[1e-4, 1e12)`, scientific
/// notation otherwise. Output is fully determined by the bits of `v`.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // round once in scientific form so the exponent reflects the rounding
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

/// Twelve significant digits, the CSV convention.
pub fn fmt12(v: f64) -> String {
    fmt_sig(v, 12)
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt12(0.5), "0.5");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(0.623_658_123_456_789), "0.623658123457");
        assert_eq!(fmt12(1.5e-7), "1.5e-7");
        assert_eq!(fmt12(123456.0), "123456");
        assert_eq!(fmt_sig(-0.304_878_048_78, 6), "-0.304878");
        assert_eq!(fmt_sig(0.999_999_9, 6), "1");
        assert_eq!(fmt12(f64::INFINITY), "inf");
    }

    #[test]
    fn twelve_digits_round_trip_within_tolerance() {
        for v in [std::f64::consts::PI, -1.0 / 3.0, 2.5e-9, 6.02e23] {
            let back: f64 = fmt12(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-11);
        }
    }
}
