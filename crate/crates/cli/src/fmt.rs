//! Locale-independent number printing.

use tpd_core::C64;

/// Significant digits for every printed real.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style rendering: fixed notation for moderate exponents, scientific
/// otherwise, trailing zeros removed.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // round first so that the exponent reflects the printed mantissa
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Real part alone when the imaginary part is negligible, `a+bi` otherwise.
pub fn complex(z: C64, scale: f64) -> String {
    if z.im.abs() <= 1e-12 * scale.max(1.0) {
        real(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", real(z.re), real(-z.im))
    } else {
        format!("{}+{}i", real(z.re), real(z.im))
    }
}
