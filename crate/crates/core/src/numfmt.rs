//! Fixed significant-digit decimal rendering shared by tables and CSV output.

/// Positional decimal with `digits` significant digits; falls back to
/// scientific notation outside [1e-5, 1e15).
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{:.*e}", digits - 1, x);
    }
    let s = format!("{:.*e}", digits - 1, x);
    // re-read the exponent after rounding, which may have bumped the magnitude
    let exp: i32 = s.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(mag);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}
