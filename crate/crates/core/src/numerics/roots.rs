//! Bracketing scans and bisection for simple real roots.

/// Scans `[start, end]` in steps of `step` and returns every interval on
/// which `f` changes sign (or hits zero exactly at the right end).
pub fn sign_change_brackets<F: FnMut(f64) -> f64>(
    mut f: F,
    start: f64,
    end: f64,
    step: f64,
) -> Vec<(f64, f64)> {
    assert!(step > 0.0 && end > start, "invalid scan range");
    let mut out = Vec::new();
    let mut lo = start;
    let mut f_lo = f(lo);
    let n = ((end - start) / step).ceil() as usize;
    for i in 1..=n {
        let hi = if i == n { end } else { start + i as f64 * step };
        let f_hi = f(hi);
        if f_hi == 0.0 || f_lo.signum() != f_hi.signum() && f_lo != 0.0 {
            out.push((lo, hi));
        }
        lo = hi;
        f_lo = f_hi;
    }
    out
}

/// Bisection on a sign-changing bracket, refined until the bracket width is
/// below `tol` or no representable midpoint remains.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return hi;
    }
    debug_assert!(f_lo.signum() != f_hi.signum(), "bracket without sign change");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
