//! Least-squares fitting of mean shortest reset lengths against `a·√(n − b)`.

use crate::error::{usage, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqrtFit {
    pub a: f64,
    pub b: f64,
    /// Residual sum of squares at `(a, b)`.
    pub rss: f64,
}

impl SqrtFit {
    pub fn eval(&self, n: f64) -> f64 {
        self.a * (n - self.b).sqrt()
    }
}

// For fixed b the optimal a is closed form.
fn best_a(points: &[(f64, f64)], b: f64) -> (f64, f64) {
    let (mut sy, mut ss) = (0.0, 0.0);
    for &(n, y) in points {
        let r = (n - b).sqrt();
        sy += y * r;
        ss += r * r;
    }
    let a = sy / ss;
    let rss = points
        .iter()
        .map(|&(n, y)| {
            let e = y - a * (n - b).sqrt();
            e * e
        })
        .sum();
    (a, rss)
}

/// Fits `y ≈ a·√(n − b)` to `(n, y)` points by a grid scan over `b` below the
/// smallest `n`, refined by golden-section search around the best grid cell.
pub fn fit_sqrt_points(points: &[(f64, f64)]) -> Result<SqrtFit> {
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    if ns.len() < 3 {
        return Err(usage("fitting needs at least three distinct n values"));
    }
    if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(usage("fitting needs finite data"));
    }
    let n_min = ns[0];
    let hi = n_min - 1e-9;
    let lo = n_min - (ns[ns.len() - 1] - n_min).max(1.0) * 4.0 - 10.0;
    const GRID: usize = 4000;
    let step = (hi - lo) / GRID as f64;
    let rss_at = |b: f64| best_a(points, b).1;
    let best = (0..=GRID)
        .map(|i| lo + step * i as f64)
        .min_by(|&x, &y| rss_at(x).total_cmp(&rss_at(y)))
        .expect("grid is nonempty");
    let (mut l, mut r) = ((best - step).max(lo), (best + step).min(hi));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = r - phi * (r - l);
    let mut d = l + phi * (r - l);
    let (mut fc, mut fd) = (rss_at(c), rss_at(d));
    for _ in 0..200 {
        if fc < fd {
            r = d;
            d = c;
            fd = fc;
            c = r - phi * (r - l);
            fc = rss_at(c);
        } else {
            l = c;
            c = d;
            fc = fd;
            d = l + phi * (r - l);
            fd = rss_at(d);
        }
        if r - l < 1e-13 {
            break;
        }
    }
    let b = (l + r) / 2.0;
    let (a, rss) = best_a(points, b);
    Ok(SqrtFit { a, b, rss })
}

/// Residual sum of squares of the fixed model `c·n^e`.
pub fn power_model_rss(points: &[(f64, f64)], c: f64, e: f64) -> f64 {
    points
        .iter()
        .map(|&(n, y)| {
            let r = y - c * n.powf(e);
            r * r
        })
        .sum()
}
