//! Floating-point helpers: compensated summation, adaptive Gauss–Kronrod
//! quadrature on finite and half-infinite intervals, and least-squares fits.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("quadrature did not converge after {intervals} intervals (estimate {estimate}, error {error})")]
    NotConverged {
        intervals: usize,
        estimate: f64,
        error: f64,
    },
    #[error("a fit needs at least two distinct abscissae, got {0} points")]
    TooFewPoints(usize),
}

/// Neumaier's compensated sum; the result depends on input order only
/// through rounding of the compensation term.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().collect::<NeumaierSum>().value()
}

/// Sample mean and unbiased sample variance (0 for fewer than two values).
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean)));
    (mean, ss / (n - 1.0))
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64), NumericsError> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return Err(NumericsError::TooFewPoints(n));
    }
    let (mx, _) = mean_variance(xs);
    let (my, _) = mean_variance(ys);
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx) * (x - mx)));
    if sxx == 0.0 {
        return Err(NumericsError::TooFewPoints(n));
    }
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)));
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment, NumericsError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite(x))
        }
    };
    let fc = eval(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let pair = eval(c - h * x)? + eval(c + h * x)?;
        k += w * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    })
}

/// Globally adaptive Gauss–Kronrod 7-15 on `[a, b]`, bisecting the interval
/// with the largest error estimate until the summed error estimate meets
/// `max(abs_tol, rel_tol·|value|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: QuadratureOptions,
) -> Result<Quadrature, NumericsError> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(NumericsError::InvalidInterval(a, b));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            intervals: 1,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&f, a, b)?);
    loop {
        let value = compensated_sum(heap.iter().map(|s| s.value));
        let error = compensated_sum(heap.iter().map(|s| s.error));
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(Quadrature {
                value,
                error,
                intervals: heap.len(),
            });
        }
        if heap.len() >= opts.max_intervals {
            return Err(NumericsError::NotConverged {
                intervals: heap.len(),
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(NumericsError::NotConverged {
                intervals: heap.len() + 1,
                estimate: value,
                error,
            });
        }
        heap.push(kronrod(&f, worst.a, mid)?);
        heap.push(kronrod(&f, mid, worst.b)?);
    }
}

/// `∫_a^∞ f`, via `x = a + t/(1−t)` on `t ∈ [0, 1)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    opts: QuadratureOptions,
) -> Result<Quadrature, NumericsError> {
    if !a.is_finite() {
        return Err(NumericsError::InvalidInterval(a, f64::INFINITY));
    }
    let g = |t: f64| {
        let s = 1.0 - t;
        let x = a + t / s;
        let y = f(x);
        // the integrand must decay; treat 0·∞ at the far end as 0
        if y == 0.0 {
            0.0
        } else {
            y / (s * s)
        }
    };
    integrate(g, 0.0, 1.0, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, QuadratureOptions::default()).unwrap();
        assert!((q.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_half_line() {
        let q = integrate_to_infinity(|x| (-x * x).exp(), 0.0, QuadratureOptions::default()).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail_from_offset() {
        let q = integrate_to_infinity(|x| (-x).exp(), 2.0, QuadratureOptions::default()).unwrap();
        assert!((q.value - (-2.0f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn kink_converges() {
        let q = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, QuadratureOptions::default()).unwrap();
        assert!((q.value - 0.29).abs() <= q.error.max(1e-10 * 0.29), "{q:?}");
    }

    #[test]
    fn non_finite_is_an_error() {
        assert!(matches!(
            integrate(|x| 1.0 / x, -1.0, 1.0, QuadratureOptions::default()),
            Err(NumericsError::NonFinite(_))
        ));
    }

    #[test]
    fn fit_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| -2.0 * x + 0.5).collect();
        let (s, c) = least_squares(&xs, &ys).unwrap();
        assert!((s + 2.0).abs() < 1e-12 && (c - 0.5).abs() < 1e-12);
        assert!(least_squares(&[1.0], &[1.0]).is_err());
        assert!(least_squares(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn sample_variance() {
        let (m, v) = mean_variance(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
    }
}
