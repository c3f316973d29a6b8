//! Number formatting shared by CSV writers.

/// Twelve significant digits, plain notation where it stays short.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::format_real;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_real(0.368_064_212_151_2345), "0.368064212151");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(-2.5e-9), "-2.5e-9");
        assert_eq!(format_real(123_456.789_012_345_6), "123456.789012");
        assert_eq!(format_real(f64::INFINITY), "inf");
        assert_eq!(format_real(0.0), "0");
    }
}
