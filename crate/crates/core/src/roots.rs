//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};

/// Outcome of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    /// Width of the final bracket.
    pub bracket: f64,
    pub iterations: u32,
}

/// Finds a root of `f` in `[lo, hi]` by Brent's method: bisection safeguarded
/// inverse quadratic / secant steps. Stops when the bracket is narrower than
/// `tol` or `f` vanishes exactly.
///
/// `f(lo)` and `f(hi)` must have strictly opposite signs.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: u32) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "root tolerance must be positive, got {tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            fx: 0.0,
            bracket: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            fx: 0.0,
            bracket: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BracketFailure {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(Root {
                x: b,
                fx: fb,
                bracket: (c - b).abs(),
                iterations: iter,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::NonConvergence(format!(
        "brent: {max_iter} iterations without reaching bracket width {tol}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root_of_two() {
        let r = brent(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-14, 100).unwrap();
        assert!((r.x - 2f64.cbrt()).abs() < 1e-13);
        assert!(r.bracket < 1e-13 || r.fx == 0.0);
    }

    #[test]
    fn rejects_unbracketed_interval() {
        let r = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-10, 100);
        assert!(matches!(r, Err(Error::BracketFailure { .. })));
    }

    #[test]
    fn propagates_evaluation_errors() {
        let r = brent(
            |_| Err(Error::NonConvergence("x".into())),
            0.0,
            1.0,
            1e-10,
            10,
        );
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn handles_steep_transcendental() {
        let r = brent(|x: f64| Ok(x.exp() - 1e6), 0.0, 30.0, 1e-12, 200).unwrap();
        assert!((r.x - 1e6f64.ln()).abs() < 1e-11);
    }
}
