//! Locale-independent number formatting with 12 significant digits.

/// Formats like C's `%.12g`: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros trimmed.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn formats() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(-0.1), "-0.1");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(0.072_254_149_768_201_43), "0.0722541497682");
        assert_eq!(num(18592.0), "18592");
        assert_eq!(num(123_456_789_012.0), "123456789012");
        assert_eq!(num(1.5e12), "1.5e12");
        assert_eq!(num(1.25e-7), "1.25e-7");
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(f64::INFINITY), "inf");
    }
}
