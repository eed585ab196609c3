//! Fixed-precision number formatting shared by text, JSON and CSV output.

/// Significant digits used for every printed float.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// `%.9g`-style formatting: nine significant digits, ties to even,
/// trailing zeros removed, scientific notation outside `[1e-4, 1e9)`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to nine significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(0.465), "0.465");
        assert_eq!(format_sig(2.0569934589103585), "2.05699346");
        assert_eq!(format_sig(0.75), "0.75");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-1.5e-7), "-1.5e-07");
        assert_eq!(format_sig(1.0e-4), "0.0001");
        assert_eq!(format_sig(123456789.0), "123456789");
        assert_eq!(format_sig(1234567890.0), "1.23456789e+09");
        assert_eq!(format_sig(9.9999999999), "10");
    }

    #[test]
    fn ties_go_to_even() {
        // Integers are exact, so these are true decimal ties at the tenth digit.
        assert_eq!(format_sig(1234567885.0), "1.23456788e+09");
        assert_eq!(format_sig(1234567895.0), "1.2345679e+09");
    }

    #[test]
    fn round_sig_is_idempotent() {
        let x = round_sig(std::f64::consts::PI);
        assert_eq!(x, 3.14159265);
        assert_eq!(round_sig(x), x);
    }
}
