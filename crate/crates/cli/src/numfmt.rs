/// Formats like C's `%.{digits}g`: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros dropped.
pub fn sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Twelve significant digits, the precision of every CSV in the result tree.
pub fn g12(v: f64) -> String {
    sig(v, 12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(1e18), "1e18");
        assert_eq!(g12(0.333333333333333), "0.333333333333");
        assert_eq!(g12(2.0 / 3.0), "0.666666666667");
        assert_eq!(g12(123456.7890123456), "123456.789012");
        assert_eq!(g12(9.9999999999996), "10");
        assert_eq!(g12(1.5e-7), "1.5e-7");
        assert_eq!(g12(-0.25), "-0.25");
        assert_eq!(sig(0.0001234, 3), "0.000123");
    }
}
