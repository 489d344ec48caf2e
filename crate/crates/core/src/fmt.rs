//! Fixed-precision number formatting for text artifacts (12 significant digits).

/// Formats like C's `%.12g`.
pub fn g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim_fraction(&s)
    } else {
        let s = format!("{:.11e}", x);
        let (mant, e) = s.split_once('e').expect("scientific format");
        format!("{}e{}", trim_fraction(mant), e)
    }
}

/// Rounds to 12 significant digits so that serialized values are stable.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.11e}", x).parse().unwrap_or(x)
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
