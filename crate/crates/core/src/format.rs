//! Stable text formatting for data files.

/// Formats with 12 significant digits in the style of C's `%.12g`.
///
/// Output is byte-stable for a given value; negative zero prints as `0`.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::float;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(float(0.0), "0");
        assert_eq!(float(-0.0), "0");
        assert_eq!(float(1.0), "1");
        assert_eq!(float(-2.5), "-2.5");
        assert_eq!(float(1.0 / 3.0), "0.333333333333");
        assert_eq!(float(std::f64::consts::PI * 100.0), "314.159265359");
        assert_eq!(float(9.9999999999996), "10");
        assert_eq!(float(1.5e-7), "1.5e-07");
        assert_eq!(float(6.02214076e23), "6.02214076e+23");
        assert_eq!(float(123456789012.0), "123456789012");
    }
}
