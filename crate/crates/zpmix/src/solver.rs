//! Bracketing root finder and composite quadrature used by the matching
//! and radiometry layers.

/// Scan `[lo, hi]` in `step`-sized brackets and bisect every sign change.
///
/// `f` may return `None` where it is undefined; such points break the
/// current bracket. Roots are refined until `|f| < tol` or the bracket
/// width underflows.
pub fn bracket_roots<F>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Vec<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    let n = ((hi - lo) / step).ceil() as usize;
    for i in 0..=n {
        let x = (lo + i as f64 * step).min(hi);
        let Some(fx) = f(x) else {
            prev = None;
            continue;
        };
        if fx == 0.0 {
            roots.push(x);
            prev = Some((x, fx));
            continue;
        }
        if let Some((xa, fa)) = prev {
            if fa * fx < 0.0 {
                if let Some(r) = bisect(&f, xa, x, fa, tol) {
                    roots.push(r);
                }
            }
        }
        prev = Some((x, fx));
    }
    roots
}

fn bisect<F>(f: &F, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Some(m); // bracket exhausted at machine precision
        }
        let fm = f(m)?;
        if fm.abs() < tol {
            return Some(m);
        }
        if fa * fm <= 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Some(0.5 * (a + b))
}

/// Composite Simpson rule on `n` uniformly spaced points (`n` odd, ≥ 3).
pub fn simpson<F>(a: f64, b: f64, n: usize, f: F) -> f64
where
    F: Fn(f64) -> f64,
{
    assert!(n >= 3 && n % 2 == 1, "simpson needs an odd point count >= 3");
    let h = (b - a) / (n - 1) as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n - 1 {
        let x = a + i as f64 * h;
        sum += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}
