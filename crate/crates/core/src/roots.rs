use crate::error::{Error, Result};
use crate::scalar::Real;

/// Brent's method (bisection safeguarding secant and inverse quadratic
/// steps) on a sign-changing bracket. Stops when the bracket is below
/// `xtol + 4·eps·|x|`.
pub fn brent<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, xtol: T) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::Bracketing(format!(
            "no sign change on [{lo}, {hi}]: f = {fa}, {fb}"
        )));
    }
    let two = T::lit(2.0);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + xtol / two;
        let m = (c - b) / two;
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (T::lit(3.0) * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol {
            b + d
        } else if m > T::zero() {
            b + tol
        } else {
            b - tol
        };
        fb = f(b);
    }
    Err(Error::Bracketing(format!(
        "Brent did not converge near {b}"
    )))
}

/// Roots of `p x² + q x + r` in increasing order, computed stably.
pub fn quadratic_roots<T: Real>(p: T, q: T, r: T) -> Option<(T, T)> {
    if p == T::zero() {
        return (q != T::zero()).then(|| (-r / q, -r / q));
    }
    let disc = q * q - T::lit(4.0) * p * r;
    if disc < T::zero() {
        return None;
    }
    let s = disc.sqrt();
    let w = -(q + q.signum() * s) / T::lit(2.0);
    let (x1, x2) = if w == T::zero() {
        (T::zero(), T::zero())
    } else {
        (w / p, r / w)
    };
    Some(if x1 <= x2 { (x1, x2) } else { (x2, x1) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_cubic() {
        let r = brent(|x: f64| x * x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_missing_bracket() {
        assert!(brent(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn quadratic_is_stable() {
        let (a, b) = quadratic_roots(1.0f64, -1e8, 1.0).unwrap();
        assert!((a - 1e-8).abs() < 1e-22);
        assert!((b - 1e8).abs() < 1e-6);
    }
}
