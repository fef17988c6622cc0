//! Quadrature kernels: fixed Gauss-Legendre panels, adaptive bisection,
//! tanh-sinh for endpoint singularities, and Wynn-epsilon acceleration for
//! alternating series of panel integrals.

/// 16-point Gauss-Legendre nodes on [0, 1) (positive half, symmetric).
const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_440_185,
    0.281_603_550_779_258_913_230,
    0.458_016_777_657_227_386_342,
    0.617_876_244_402_643_748_447,
    0.755_404_408_355_003_033_895,
    0.865_631_202_387_831_743_880,
    0.944_575_023_073_232_576_078,
    0.989_400_934_991_649_932_596,
];
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_496_285,
    0.182_603_415_044_923_588_867,
    0.169_156_519_395_002_538_189,
    0.149_595_988_816_576_732_081,
    0.124_628_971_255_533_872_052,
    0.095_158_511_682_492_784_810,
    0.062_253_523_938_647_892_863,
    0.027_152_459_411_754_094_852,
];

/// One 16-point Gauss-Legendre panel over [a, b].
pub fn gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        let dx = h * GL16_X[i];
        acc += GL16_W[i] * (f(c + dx) + f(c - dx));
    }
    acc * h
}

/// Adaptive bisection built on GL16 panels. The error estimate on a panel is
/// |GL16(whole) - GL16(left) - GL16(right)|; a panel is accepted when that
/// estimate meets the local relative tolerance or its width-proportional
/// share of the global budget, so near-zero stretches cannot trigger
/// runaway splitting.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        rel_tol: f64,
        budget_per_width: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = gl16(f, a, m);
        let right = gl16(f, m, b);
        let err = (left + right - whole).abs();
        if depth == 0
            || err <= budget_per_width * (b - a)
            || err <= rel_tol * (left + right).abs()
        {
            return left + right;
        }
        rec(f, a, m, left, rel_tol, budget_per_width, depth - 1)
            + rec(f, m, b, right, rel_tol, budget_per_width, depth - 1)
    }
    // crude global estimate on three panels, to scale the error budget
    let m1 = a + (b - a) / 3.0;
    let m2 = b - (b - a) / 3.0;
    let rough = gl16(f, a, m1).abs() + gl16(f, m1, m2).abs() + gl16(f, m2, b).abs();
    let budget = abs_tol.max(0.05 * rel_tol * rough) / (b - a).max(1e-300);
    let whole = gl16(f, a, b);
    rec(f, a, b, whole, rel_tol, budget, 40)
}

/// Tanh-sinh (double-exponential) rule on (a, b), robust to integrable
/// endpoint singularities. Nodes near `a` are formed as `a + delta` with the
/// endpoint distance `delta` computed stably, so `f` may blow up at the left
/// endpoint (the weight decays double-exponentially and wins).
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let g = |t: f64| -> (f64, f64, f64) {
        // x(t) = center + half*tanh(u), u = (pi/2) sinh t
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        // distance to the nearer endpoint, computed without cancellation
        let e = (-2.0 * u.abs()).exp();
        let dist = half * 2.0 * e / (1.0 + e);
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() * half * (2.0 / (e.sqrt() + 1.0 / e.sqrt())).powi(2);
        (u, dist, w)
    };
    let eval = |t: f64| -> f64 {
        let (u, dist, w) = g(t);
        if w < 1e-290 || dist == 0.0 {
            return 0.0;
        }
        let x = if u >= 0.0 { b - dist } else { a + dist };
        let fx = f(x);
        if fx.is_finite() {
            w * fx
        } else {
            0.0
        }
    };

    let t_max = 6.1f64;
    let mut h = 1.0f64;
    let mut sum = eval(0.0);
    let mut k = 1;
    loop {
        let t = h * k as f64;
        if t > t_max {
            break;
        }
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut total = h * sum;
    for _level in 0..10 {
        h *= 0.5;
        let mut mid_sum = 0.0;
        let mut k = 1;
        loop {
            let t = h * k as f64;
            if t > t_max {
                break;
            }
            mid_sum += eval(t) + eval(-t);
            k += 2; // only the new midpoints
        }
        let new_total = 0.5 * total + h * mid_sum;
        let err = (new_total - total).abs();
        total = new_total;
        if err <= tol * total.abs().max(1e-300) && _level >= 2 {
            break;
        }
    }
    total
}

/// Wynn epsilon acceleration applied to a sequence of partial sums.
/// Returns the deepest even-column estimate.
pub fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    if n == 0 {
        return 0.0;
    }
    let mut prev = vec![0.0f64; n]; // column epsilon_{-1}
    let mut cur = s.to_vec(); // column epsilon_0
    let mut best = *s.last().unwrap();
    let mut col = 0usize;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                // two equal entries: the sequence has converged there
                return cur[i + 1];
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        col += 1;
        if col % 2 == 0 {
            best = *next.last().unwrap();
        }
        prev = cur;
        cur = next;
    }
    best
}

/// Sums `sum_k term(k)` where the terms eventually alternate in sign with
/// slowly decaying magnitude (panel integrals of an oscillatory integrand).
/// Direct summation runs until terms are negligible or `k_direct` panels are
/// spent; the remaining alternating tail is accelerated with Wynn epsilon.
///
/// Returns (value, error_estimate).
pub fn alternating_sum<F: FnMut(usize) -> f64>(
    mut term: F,
    abs_tol: f64,
    k_direct: usize,
    k_accel: usize,
) -> (f64, f64) {
    let mut direct = 0.0f64;
    let mut k = 0usize;
    while k < k_direct {
        let t = term(k);
        direct += t;
        k += 1;
        if t.abs() <= abs_tol {
            return (direct, t.abs());
        }
    }
    // Accelerate the tail.
    let mut partials = Vec::with_capacity(k_accel);
    let mut tail_sum = 0.0f64;
    for j in 0..k_accel {
        let t = term(k + j);
        tail_sum += t;
        partials.push(tail_sum);
        if t.abs() <= abs_tol {
            return (direct + tail_sum, t.abs());
        }
    }
    let accel = wynn_epsilon(&partials);
    // error estimate: distance between accelerations on the full and the
    // truncated partial-sum sequences
    let accel_short = wynn_epsilon(&partials[..partials.len().saturating_sub(2)]);
    // for an alternating series the limit lies inside the partial-sum range;
    // an epsilon-table blowup is detected by leaving that range
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &p in &partials {
        lo = lo.min(p);
        hi = hi.max(p);
    }
    let span = (hi - lo).max(1e-300);
    if !accel.is_finite() || accel < lo - 0.5 * span || accel > hi + 0.5 * span {
        let fallback = 0.5 * (partials[partials.len() - 1] + partials[partials.len() - 2]);
        return (direct + fallback, span);
    }
    (direct + accel, (accel - accel_short).abs().min(span))
}
