//! Grid differentiation, local quadratic smoothing and straight-line fits.
//!
//! Difference stencils are built from the actual node spacing (three-point
//! Lagrange weights), so they reduce to the textbook central differences on a
//! uniform grid and stay second-order on a non-uniform one.

use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("x and y lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("x grid is not strictly increasing at index {0}")]
    NonMonotoneGrid(usize),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("bad smoothing window {0}: must be odd and no longer than the curve")]
    BadWindow(usize),
    #[error("fit window {start}..{end} is out of range or shorter than 3 points")]
    BadFitWindow { start: usize, end: usize },
    #[error("degenerate fit window: zero variance in x or y")]
    DegenerateWindow,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Values on a strictly increasing voltage grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl SampledCurve {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, NumericsError> {
        if x.len() != y.len() {
            return Err(NumericsError::LengthMismatch(x.len(), y.len()));
        }
        if x.len() < 2 {
            return Err(NumericsError::TooFewPoints {
                needed: 2,
                got: x.len(),
            });
        }
        Self::check(&x, &y)?;
        Ok(Self { x, y })
    }

    /// Like [`SampledCurve::new`] but allows zero or one point; used for
    /// report curves that may end up sparse after filtering.
    pub fn sparse(x: Vec<f64>, y: Vec<f64>) -> Result<Self, NumericsError> {
        if x.len() != y.len() {
            return Err(NumericsError::LengthMismatch(x.len(), y.len()));
        }
        Self::check(&x, &y)?;
        Ok(Self { x, y })
    }

    fn check(x: &[f64], y: &[f64]) -> Result<(), NumericsError> {
        for k in 0..x.len() {
            if !x[k].is_finite() || !y[k].is_finite() {
                return Err(NumericsError::NonFinite(k));
            }
            if k > 0 && x[k] <= x[k - 1] {
                return Err(NumericsError::NonMonotoneGrid(k));
            }
        }
        Ok(())
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    /// Points at the given indices, in order.
    pub fn select(&self, indices: &[usize]) -> Result<Self, NumericsError> {
        Self::sparse(
            indices.iter().map(|&k| self.x[k]).collect(),
            indices.iter().map(|&k| self.y[k]).collect(),
        )
    }

    pub fn slice(&self, range: Range<usize>) -> Result<Self, NumericsError> {
        Self::sparse(self.x[range.clone()].to_vec(), self.y[range].to_vec())
    }

    /// `(min, max)` of y, or `None` when empty.
    pub fn y_range(&self) -> Option<(f64, f64)> {
        let mut it = self.y.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// Piecewise-linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, at: f64) -> Option<f64> {
        let n = self.x.len();
        if n == 0 || at < self.x[0] || at > self.x[n - 1] {
            return None;
        }
        let k = self.x.partition_point(|&v| v < at);
        if k < n && self.x[k] == at {
            return Some(self.y[k]);
        }
        let (x0, x1, y0, y1) = (self.x[k - 1], self.x[k], self.y[k - 1], self.y[k]);
        Some(y0 + (y1 - y0) * (at - x0) / (x1 - x0))
    }
}

/// Three-point Lagrange first-derivative weights at `x[at]` using nodes `x[i..i+3]`.
fn first_derivative_weights(x: &[f64], i: usize, at: usize) -> [f64; 3] {
    let (x0, x1, x2) = (x[i], x[i + 1], x[i + 2]);
    let t = x[at];
    [
        ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2)),
        ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2)),
        ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1)),
    ]
}

/// `dy/dx` on the input grid: central at interior nodes, one-sided
/// second-order at both ends.
pub fn first_derivative(curve: &SampledCurve) -> Result<SampledCurve, NumericsError> {
    let n = curve.len();
    if n < 3 {
        return Err(NumericsError::TooFewPoints { needed: 3, got: n });
    }
    let (x, y) = (curve.x(), curve.y());
    let d = (0..n)
        .map(|k| {
            let base = k.saturating_sub(1).min(n - 3);
            let w = first_derivative_weights(x, base, k);
            w[0] * y[base] + w[1] * y[base + 1] + w[2] * y[base + 2]
        })
        .collect();
    Ok(SampledCurve {
        x: x.to_vec(),
        y: d,
    })
}

/// `d²y/dx²` at interior nodes; the two end nodes are dropped from the output.
pub fn second_derivative(curve: &SampledCurve) -> Result<SampledCurve, NumericsError> {
    let n = curve.len();
    if n < 5 {
        return Err(NumericsError::TooFewPoints { needed: 5, got: n });
    }
    let (x, y) = (curve.x(), curve.y());
    let d = (1..n - 1)
        .map(|k| {
            let h1 = x[k] - x[k - 1];
            let h2 = x[k + 1] - x[k];
            2.0 * (y[k - 1] / (h1 * (h1 + h2)) - y[k] / (h1 * h2) + y[k + 1] / (h2 * (h1 + h2)))
        })
        .collect();
    Ok(SampledCurve {
        x: x[1..n - 1].to_vec(),
        y: d,
    })
}

/// Value at `t = 0` of the least-squares quadratic through `(t_k, y_k)`.
fn quadratic_value_at_origin(t: &[f64], y: &[f64]) -> f64 {
    // Normal equations in the monomials 1, t, t².
    let mut s = [0.0f64; 5];
    let mut b = [0.0f64; 3];
    for (&tk, &yk) in t.iter().zip(y) {
        let mut p = 1.0;
        for (j, sj) in s.iter_mut().enumerate() {
            *sj += p;
            if j < 3 {
                b[j] += p * yk;
            }
            p *= tk;
        }
    }
    let m = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut m0 = m;
    for r in 0..3 {
        m0[r][0] = b[r];
    }
    det(&m0) / det(&m)
}

/// Moving local least-squares quadratic smoothing. A window of one point is
/// the identity; near the ends the window is shifted to stay inside the grid.
pub fn smooth(curve: &SampledCurve, window_points: usize) -> Result<SampledCurve, NumericsError> {
    let n = curve.len();
    if window_points == 0 || window_points % 2 == 0 || window_points > n {
        return Err(NumericsError::BadWindow(window_points));
    }
    if window_points <= 3 {
        // three points determine the quadratic exactly
        return Ok(curve.clone());
    }
    let half = window_points / 2;
    let (x, y) = (curve.x(), curve.y());
    let out = (0..n)
        .map(|k| {
            let lo = k.saturating_sub(half).min(n - window_points);
            let hi = lo + window_points;
            let scale = (x[hi - 1] - x[lo]) / (window_points - 1) as f64;
            let t: Vec<f64> = x[lo..hi].iter().map(|&v| (v - x[k]) / scale).collect();
            quadratic_value_at_origin(&t, &y[lo..hi])
        })
        .collect();
    Ok(SampledCurve {
        x: x.to_vec(),
        y: out,
    })
}

/// Ordinary least-squares straight line with its parameter covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub x_intercept: f64,
    pub r_squared: f64,
    /// Index range of the curve the fit used.
    pub window: Range<usize>,
    pub slope_sigma: f64,
    pub intercept_sigma: f64,
    pub x_intercept_sigma: f64,
}

impl LineFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }
}

pub(crate) struct Ols {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub var_slope: f64,
    pub var_intercept: f64,
    pub cov: f64,
}

/// Plain OLS over paired samples; needs two distinct x values and non-constant y.
pub(crate) fn ols(x: &[f64], y: &[f64]) -> Result<Ols, NumericsError> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return Err(NumericsError::TooFewPoints {
            needed: 2,
            got: x.len(),
        });
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if !(sxx > 0.0) || !(syy > 0.0) {
        return Err(NumericsError::DegenerateWindow);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let r = b - (my + slope * (a - mx));
            r * r
        })
        .sum();
    let r_squared = (1.0 - ss_res / syy).clamp(0.0, 1.0);
    let s2 = if x.len() > 2 { ss_res / (n - 2.0) } else { 0.0 };
    Ok(Ols {
        slope,
        intercept,
        r_squared,
        var_slope: s2 / sxx,
        var_intercept: s2 * (1.0 / n + mx * mx / sxx),
        cov: -mx * s2 / sxx,
    })
}

/// Least-squares line over `window`, with the x-intercept uncertainty
/// propagated from the parameter covariance.
pub fn fit_line(curve: &SampledCurve, window: Range<usize>) -> Result<LineFit, NumericsError> {
    if window.start >= window.end || window.end > curve.len() || window.len() < 3 {
        return Err(NumericsError::BadFitWindow {
            start: window.start,
            end: window.end,
        });
    }
    let fit = ols(&curve.x[window.clone()], &curve.y[window.clone()])?;
    let x0 = -fit.intercept / fit.slope;
    let var_x0 = (fit.var_intercept + x0 * x0 * fit.var_slope + 2.0 * x0 * fit.cov)
        / (fit.slope * fit.slope);
    Ok(LineFit {
        slope: fit.slope,
        intercept: fit.intercept,
        x_intercept: x0,
        r_squared: fit.r_squared,
        window,
        slope_sigma: fit.var_slope.sqrt(),
        intercept_sigma: fit.var_intercept.sqrt(),
        x_intercept_sigma: var_x0.max(0.0).sqrt(),
    })
}

/// r² differences below this count as ties.
const R2_TIE: f64 = 1e-12;

/// Contiguous window of at least `min_points` maximising the fit r².
/// Ties go to the longer window, then to the one at higher x.
pub fn auto_window(curve: &SampledCurve, min_points: usize) -> Result<Range<usize>, NumericsError> {
    if min_points < 6 {
        return Err(NumericsError::InvalidArgument("min_points must be at least 6"));
    }
    let n = curve.len();
    if n < min_points {
        return Err(NumericsError::TooFewPoints {
            needed: min_points,
            got: n,
        });
    }
    let mut best: Option<(f64, Range<usize>)> = None;
    // longest first, highest start first: a later candidate must beat by more than R2_TIE
    for len in (min_points..=n).rev() {
        for start in (0..=n - len).rev() {
            let window = start..start + len;
            let r2 = match ols(&curve.x[window.clone()], &curve.y[window.clone()]) {
                Ok(fit) => fit.r_squared,
                Err(NumericsError::DegenerateWindow) => continue,
                Err(e) => return Err(e),
            };
            if best.as_ref().is_none_or(|(b, _)| r2 > b + R2_TIE) {
                best = Some((r2, window));
            }
        }
    }
    best.map(|(_, w)| w).ok_or(NumericsError::DegenerateWindow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn curve(x: Vec<f64>, f: impl Fn(f64) -> f64) -> SampledCurve {
        let y = x.iter().map(|&v| f(v)).collect();
        SampledCurve::new(x, y).unwrap()
    }

    fn uniform(n: usize, step: f64) -> Vec<f64> {
        (0..n).map(|k| k as f64 * step).collect()
    }

    #[test]
    fn curve_validation() {
        assert!(SampledCurve::new(vec![0.0], vec![1.0]).is_err());
        assert_eq!(
            SampledCurve::new(vec![0.0, 0.0], vec![1.0, 1.0]),
            Err(NumericsError::NonMonotoneGrid(1))
        );
        assert_eq!(
            SampledCurve::new(vec![0.0, 1.0], vec![1.0, f64::NAN]),
            Err(NumericsError::NonFinite(1))
        );
    }

    #[test]
    fn first_derivative_examples() {
        let c = curve(uniform(9, 0.25), |_| 3.0);
        assert!(first_derivative(&c).unwrap().y().iter().all(|&d| d == 0.0));
        let c = curve(uniform(9, 0.25), |x| 1.5 * x - 2.0);
        assert!(first_derivative(&c).unwrap().y().iter().all(|&d| d == 1.5));
        let c = curve(uniform(9, 0.25), |x| x * x);
        let d = first_derivative(&c).unwrap();
        assert_eq!(d.x()[4], 1.0);
        assert_eq!(d.y()[4], 2.0);
        // one-sided ends are exact for quadratics too
        assert!((d.y()[0] - 0.0).abs() < 1e-14 && (d.y()[8] - 4.0).abs() < 1e-13);
        assert!(first_derivative(&curve(uniform(2, 1.0), |x| x)).is_err());
    }

    #[test]
    fn non_uniform_grid_is_exact_for_quadratics() {
        let x = vec![0.0, 0.1, 0.35, 0.4, 0.8, 1.3];
        let c = curve(x.clone(), |v| 2.0 * v * v - v + 1.0);
        let d1 = first_derivative(&c).unwrap();
        for (&v, &d) in x.iter().zip(d1.y()) {
            assert!((d - (4.0 * v - 1.0)).abs() < 1e-12, "{v}: {d}");
        }
        let d2 = second_derivative(&c).unwrap();
        assert!(d2.y().iter().all(|&d| (d - 4.0).abs() < 1e-11));
    }

    #[test]
    fn second_derivative_examples() {
        let c = curve(uniform(7, 0.5), |x| 4.0 * x + 1.0);
        let d = second_derivative(&c).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(d.x()[0], 0.5);
        assert!(d.y().iter().all(|&v| v.abs() < 1e-13));
        let c = curve(uniform(7, 0.5), |x| x * x);
        assert!(second_derivative(&c).unwrap().y().iter().all(|&v| v == 2.0));
        assert!(second_derivative(&curve(uniform(4, 1.0), |x| x)).is_err());

        // y = 1/(x - c): the second difference is 2/((x-c)((x-c)^2 - h^2))
        let (c0, h) = (-0.5, 0.01);
        let c = curve(uniform(101, h), |x| 1.0 / (x - c0));
        let d = second_derivative(&c).unwrap();
        for (x, v) in d.points() {
            let u = x - c0;
            let exact = 2.0 / (u * u * u);
            assert!(((v - exact) / exact).abs() < 1.5 * h * h / (u * u));
        }
    }

    fn max_error(h: f64, f: fn(f64) -> f64, df: fn(f64) -> f64, second: bool) -> f64 {
        let n = (1.0 / h).round() as usize + 1;
        let c = curve(uniform(n, h), f);
        let d = if second {
            second_derivative(&c).unwrap()
        } else {
            first_derivative(&c).unwrap()
        };
        d.points().map(|(x, v)| (v - df(x)).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn derivative_operators_are_second_order() {
        let hs = [0.02, 0.01, 0.005];
        for second in [false, true] {
            let (f, df): (fn(f64) -> f64, fn(f64) -> f64) = if second {
                (|x: f64| (2.0 * x).sin(), |x: f64| -4.0 * (2.0 * x).sin())
            } else {
                (|x: f64| (2.0 * x).sin(), |x: f64| 2.0 * (2.0 * x).cos())
            };
            let e: Vec<f64> = hs.iter().map(|&h| max_error(h, f, df, second)).collect();
            for k in 0..2 {
                let order = (e[k] / e[k + 1]).ln() / (hs[k] / hs[k + 1]).ln();
                assert!((1.8..=2.2).contains(&order), "second={second} order={order}");
            }
        }
    }

    #[test]
    fn smoothing_examples() {
        let c = curve(uniform(10, 0.1), |x| (7.0 * x).sin());
        assert_eq!(smooth(&c, 1).unwrap(), c);
        let q = curve(vec![0.0, 0.1, 0.3, 0.4, 0.55, 0.7, 0.9], |x| 3.0 * x * x - x + 0.5);
        for w in [3, 5, 7] {
            let s = smooth(&q, w).unwrap();
            for (a, b) in s.y().iter().zip(q.y()) {
                assert!((a - b).abs() < 1e-12, "w={w}: {a} vs {b}");
            }
        }
        assert_eq!(smooth(&c, 4), Err(NumericsError::BadWindow(4)));
        assert_eq!(smooth(&c, 11), Err(NumericsError::BadWindow(11)));
        assert_eq!(smooth(&c, 0), Err(NumericsError::BadWindow(0)));
    }

    #[test]
    fn smoothing_reduces_noise_on_a_sine() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x = uniform(200, 0.01);
            let clean: Vec<f64> = x.iter().map(|&v| (3.0 * v).sin()).collect();
            let noisy: Vec<f64> = clean
                .iter()
                .map(|&v| v + 0.05 * Distribution::<f64>::sample(&StandardNormal, &mut rng))
                .collect::<Vec<f64>>();
            let c = SampledCurve::new(x, noisy.clone()).unwrap();
            let s = smooth(&c, 5).unwrap();
            let var = |ys: &[f64]| ys.iter().zip(&clean).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            assert!(var(s.y()) < var(&noisy));
        }
    }

    #[test]
    fn fit_line_examples() {
        let c = curve(uniform(8, 0.5), |x| 2.0 * x - 3.0);
        let f = fit_line(&c, 0..8).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept + 3.0).abs() < 1e-14);
        assert!((f.x_intercept - 1.5).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!((f.x_intercept * f.slope + f.intercept).abs() < 1e-14);
        assert!(matches!(fit_line(&c, 0..2), Err(NumericsError::BadFitWindow { .. })));
        assert!(matches!(fit_line(&c, 5..9), Err(NumericsError::BadFitWindow { .. })));
        let flat = curve(uniform(5, 1.0), |_| 1.0);
        assert_eq!(fit_line(&flat, 0..5), Err(NumericsError::DegenerateWindow));
    }

    #[test]
    fn fit_slope_within_ols_uncertainty() {
        // 1% noise on y = 2x - 3; the slope error should sit inside 3σ from the
        // textbook OLS formula σ_slope² = σ²/Σ(x - x̄)².
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = uniform(30, 0.1).into_iter().map(|v| v + 2.0).collect::<Vec<_>>();
        let mean = x.iter().sum::<f64>() / 30.0;
        let sxx: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
        let sigma = 0.01;
        let sigma_slope = sigma / sxx.sqrt();
        let mut inside = 0;
        for _ in 0..200 {
            let y: Vec<f64> = x
                .iter()
                .map(|&v| 2.0 * v - 3.0 + sigma * Distribution::<f64>::sample(&StandardNormal, &mut rng))
                .collect::<Vec<f64>>();
            let c = SampledCurve::new(x.clone(), y).unwrap();
            let f = fit_line(&c, 0..30).unwrap();
            if (f.slope - 2.0).abs() < 3.0 * sigma_slope {
                inside += 1;
            }
            assert!((f.slope_sigma / sigma_slope - 1.0).abs() < 0.5);
        }
        assert!(inside >= 196, "{inside}");
    }

    #[test]
    fn auto_window_examples() {
        let c = curve(uniform(20, 0.1), |x| 3.0 * x + 1.0);
        assert_eq!(auto_window(&c, 6).unwrap(), 0..20);

        // flat until x = 1, then linear
        let c = curve(uniform(30, 0.1), |x| if x <= 1.0 { 0.5 } else { 0.5 + (x - 1.0) });
        let w = auto_window(&c, 6).unwrap();
        assert!(c.x()[w.start] >= 1.0 - 1e-12, "{w:?}");
        assert_eq!(w.end, 30);

        let flat = curve(uniform(10, 0.1), |_| 2.0);
        assert_eq!(auto_window(&flat, 6), Err(NumericsError::DegenerateWindow));
        assert!(matches!(auto_window(&c, 5), Err(NumericsError::InvalidArgument(_))));
        assert!(matches!(
            auto_window(&curve(uniform(5, 0.1), |x| x), 6),
            Err(NumericsError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn interpolation() {
        let c = curve(vec![0.0, 1.0, 3.0], |x| 2.0 * x);
        assert_eq!(c.interpolate(2.0), Some(4.0));
        assert_eq!(c.interpolate(1.0), Some(2.0));
        assert_eq!(c.interpolate(3.5), None);
    }
}
