use crate::error::{Error, Result};

/// Clamped cubic spline. End slopes come from four-point one-sided
/// differences, which keeps the derivative third-order accurate at the
/// ends instead of the first-order error a natural spline would leave.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    uniform_step: Option<f64>,
}

fn lagrange_slope(xs: &[f64], ys: &[f64], at: usize) -> f64 {
    let x0 = xs[at];
    let n = xs.len();
    let mut slope = 0.0;
    for j in 0..n {
        // derivative at x0 of the j-th Lagrange basis polynomial
        let mut d = 0.0;
        if j == at {
            for k in 0..n {
                if k != j {
                    d += 1.0 / (xs[j] - xs[k]);
                }
            }
        } else {
            let mut num = 1.0;
            let mut den = 1.0;
            for k in 0..n {
                if k != j {
                    den *= xs[j] - xs[k];
                    if k != at {
                        num *= x0 - xs[k];
                    }
                }
            }
            d = num / den;
        }
        slope += ys[j] * d;
    }
    slope
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::Validation("spline abscissae and ordinates differ in length".into()));
        }
        if n < 4 {
            return Err(Error::Validation("spline needs at least 4 samples".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation("spline abscissae must be strictly increasing".into()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::Validation("spline samples must be finite".into()));
        }
        let s0 = lagrange_slope(&x[..4], &y[..4], 0);
        let sn = lagrange_slope(&x[n - 4..], &y[n - 4..], 3);

        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut lower = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = 2.0 * h[0];
        upper[0] = h[0];
        rhs[0] = 6.0 * ((y[1] - y[0]) / h[0] - s0);
        for i in 1..n - 1 {
            lower[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            upper[i] = h[i];
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        lower[n - 1] = h[n - 2];
        diag[n - 1] = 2.0 * h[n - 2];
        rhs[n - 1] = 6.0 * (sn - (y[n - 1] - y[n - 2]) / h[n - 2]);

        // Thomas algorithm
        for i in 1..n {
            let w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        }

        let step = (x[n - 1] - x[0]) / (n - 1) as f64;
        let uniform = h.iter().all(|hi| ((hi - step) / step).abs() < 1e-9);
        Ok(Self { x, y, m, uniform_step: uniform.then_some(step) })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = self.span();
        t >= a && t <= b
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    #[inline]
    fn segment(&self, t: f64) -> usize {
        let last = self.x.len() - 2;
        match self.uniform_step {
            Some(h) => {
                let i = ((t - self.x[0]) / h).floor();
                if i <= 0.0 {
                    0
                } else {
                    (i as usize).min(last)
                }
            }
            None => self.x.partition_point(|&xi| xi <= t).saturating_sub(1).min(last),
        }
    }

    /// Value at `t`; no span check (callers check once per batch).
    #[inline]
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let a = x1 - t;
        let b = t - x0;
        self.m[i] * a * a * a / (6.0 * h)
            + self.m[i + 1] * b * b * b / (6.0 * h)
            + (self.y[i] / h - self.m[i] * h / 6.0) * a
            + (self.y[i + 1] / h - self.m[i + 1] * h / 6.0) * b
    }

    #[inline]
    pub fn derivative_unchecked(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let a = x1 - t;
        let b = t - x0;
        -self.m[i] * a * a / (2.0 * h) + self.m[i + 1] * b * b / (2.0 * h) - (self.y[i] / h - self.m[i] * h / 6.0)
            + (self.y[i + 1] / h - self.m[i + 1] * h / 6.0)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.eval_unchecked(t))
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.derivative_unchecked(t))
    }

    fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            let (a, b) = self.span();
            Err(Error::Domain(format!("{t:.9e} outside interpolation span [{a:.9e}, {b:.9e}]")))
        }
    }
}
