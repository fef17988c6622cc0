//! Monotone piecewise-cubic interpolation (Fritsch-Carlson limiter).
//! Monotone data stays monotone after interpolation, which the renewal
//! table relies on.

#[derive(Clone, Debug)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>, // node derivatives
}

impl Pchip {
    /// `xs` strictly increasing, same length as `ys`, at least 2 points.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Pchip {
        assert!(xs.len() == ys.len() && xs.len() >= 2);
        let n = xs.len();
        let mut h = vec![0.0; n - 1];
        let mut delta = vec![0.0; n - 1];
        for i in 0..n - 1 {
            h[i] = xs[i + 1] - xs[i];
            assert!(h[i] > 0.0, "x grid must be strictly increasing");
            delta[i] = (ys[i + 1] - ys[i]) / h[i];
        }
        let mut ds = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                ds[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                ds[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        ds[0] = end_slope(h[0], if n > 2 { h[1] } else { h[0] }, delta[0], if n > 2 { delta[1] } else { delta[0] });
        ds[n - 1] = end_slope(
            h[n - 2],
            if n > 2 { h[n - 3] } else { h[n - 2] },
            delta[n - 2],
            if n > 2 { delta[n - 3] } else { delta[n - 2] },
        );
        Pchip { xs, ys, ds }
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(0) => 0,
            Err(i) if i >= self.xs.len() => self.xs.len() - 2,
            Err(i) => i - 1,
        }
    }

    /// Hermite evaluation; linear continuation outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.ds[0] * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.ds[n - 1] * (x - self.xs[n - 1]);
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    /// Derivative of the interpolant.
    pub fn deriv(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ds[0];
        }
        if x >= self.xs[n - 1] {
            return self.ds[n - 1];
        }
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let h00 = (6.0 * t2 - 6.0 * t) / h;
        let h10 = 3.0 * t2 - 4.0 * t + 1.0;
        let h01 = (-6.0 * t2 + 6.0 * t) / h;
        let h11 = 3.0 * t2 - 2.0 * t;
        h00 * self.ys[i] + h10 * self.ds[i] + h01 * self.ys[i + 1] + h11 * self.ds[i + 1]
    }

    pub fn x_lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_hi(&self) -> f64 {
        *self.xs.last().unwrap()
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    // three-point end slope with the usual monotonicity clamps
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_nodes_exactly_and_preserves_monotonicity() {
        let xs: Vec<f64> = (0..40).map(|i| i as f64 * 0.25).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (1.0 + x).ln()).collect();
        let p = Pchip::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x) - y).abs() < 1e-14);
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 0..400 {
            let x = i as f64 * 0.024;
            let v = p.eval(x);
            assert!(v >= prev - 1e-12, "monotonicity broke at {x}");
            prev = v;
        }
        // smooth function: interpolation error should be tiny
        assert!((p.eval(3.1) - (4.1f64).ln()).abs() < 1e-5);
    }
}
