//! Renewal function V of the ascending ladder-height process.
//!
//! Two backends:
//! * `exact-laplace`: invert the Laplace transform 1/(xi kappa(xi))
//!   numerically (Gaver-Stehfest, double-double accumulation), where
//!   kappa(xi) = exp{ (1/pi) int_0^inf log psi(xi z) / (1+z^2) dz };
//! * `h-proxy`: V(r) = 1 / sqrt(h(r)) with h Pruitt's function. All the
//!   estimates downstream are comparability statements, so a proxy that is
//!   correct up to a bounded factor is a legitimate default.

use crate::error::{Error, Result};
use crate::models::ProcessModel;
use crate::numerics::dd::Dd;
use crate::numerics::interp::Pchip;
use crate::numerics::quad;
use std::io::{BufRead, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    ExactLaplace,
    HProxy,
}

impl Backend {
    pub fn tag(&self) -> &'static str {
        match self {
            Backend::ExactLaplace => "exact-laplace",
            Backend::HProxy => "h-proxy",
        }
    }

    pub fn parse(s: &str) -> Result<Backend> {
        match s {
            "exact-laplace" => Ok(Backend::ExactLaplace),
            "h-proxy" => Ok(Backend::HProxy),
            other => Err(Error::Config(format!("unknown renewal backend '{other}'"))),
        }
    }
}

/// Logarithmic radius grid.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub r_lo: f64,
    pub r_hi: f64,
    pub points_per_decade: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_lo: 1e-4,
            r_hi: 1e4,
            points_per_decade: 16,
        }
    }
}

impl GridSpec {
    pub fn radii(&self) -> Vec<f64> {
        let n = ((self.r_hi / self.r_lo).log10() * self.points_per_decade as f64).ceil() as usize
            + 1;
        (0..n)
            .map(|i| {
                (self.r_lo.ln() + (self.r_hi.ln() - self.r_lo.ln()) * i as f64 / (n - 1) as f64)
                    .exp()
            })
            .collect()
    }
}

/// Laplace exponent of the ladder-height subordinator.
///
/// The integral is folded at z = 1 so both halves are evaluated away from
/// the tan blow-up: kappa(xi) = exp{(1/pi)[int_0^{pi/4} log psi(xi tan a) da
/// + int_0^{pi/4} log psi(xi / tan a) da]}.
pub fn kappa(model: &ProcessModel, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::DomainError(format!("kappa requires xi > 0, got {xi}")));
    }
    let f_low = |a: f64| model.psi_fast(xi * a.tan()).ln();
    let f_high = |a: f64| model.psi_fast(xi / a.tan()).ln();
    let quarter = std::f64::consts::FRAC_PI_4;
    let i1 = quad::tanh_sinh(&f_low, 0.0, quarter, 1e-12);
    let i2 = quad::tanh_sinh(&f_high, 0.0, quarter, 1e-12);
    let k = ((i1 + i2) / std::f64::consts::PI).exp();
    if !k.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            what: format!("kappa({xi})"),
            target: 1e-6,
            achieved: f64::INFINITY,
            partials: vec![i1, i2],
        });
    }
    Ok(k)
}

/// Stehfest coefficients of even order `n`, as exact rational sums in
/// double-double arithmetic.
fn stehfest_coefficients(n: usize) -> Vec<Dd> {
    assert!(n % 2 == 0 && n >= 2 && n <= 18);
    let m = n / 2;
    let fact = |k: usize| -> i128 { (1..=k as i128).product::<i128>().max(1) };
    let mut zeta = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = Dd::ZERO;
        let j_lo = k.div_ceil(2);
        let j_hi = k.min(m);
        for j in j_lo..=j_hi {
            let num = (j as i128).pow(m as u32) * fact(2 * j);
            let den = fact(m - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k);
            acc = acc.add(Dd::from(num as f64).div(Dd::from(den as f64)));
        }
        let sign = if (k + m) % 2 == 0 { 1.0 } else { -1.0 };
        zeta.push(acc.mul_f64(sign));
    }
    zeta
}

/// Gaver-Stehfest inversion of `f_hat` at `x > 0`.
fn gaver_stehfest(f_hat: &dyn Fn(f64) -> Result<f64>, x: f64, zeta: &[Dd]) -> Result<f64> {
    let ln2_x = std::f64::consts::LN_2 / x;
    let mut acc = Dd::ZERO;
    for (k, z) in zeta.iter().enumerate() {
        let fk = f_hat(ln2_x * (k + 1) as f64)?;
        acc = acc.add(z.mul_f64(fk));
    }
    Ok(acc.mul_f64(ln2_x).value())
}

#[derive(Clone, Debug)]
pub struct RenewalTable {
    radii: Vec<f64>,
    v: Vec<f64>,
    vprime: Vec<f64>,
    backend: Backend,
    fingerprint: u64,
    normalization: f64,
    interp_v: Pchip,
    interp_vp: Pchip,
}

fn build_interps(radii: &[f64], v: &[f64], vprime: &[f64]) -> (Pchip, Pchip) {
    let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let lv: Vec<f64> = v.iter().map(|y| y.ln()).collect();
    let lvp: Vec<f64> = vprime.iter().map(|y| y.max(1e-300).ln()).collect();
    (Pchip::new(lx.clone(), lv), Pchip::new(lx, lvp))
}

/// Builds the renewal table for `model` on `grid` with the given backend.
pub fn build_renewal_table(
    model: &ProcessModel,
    backend: Backend,
    grid: &GridSpec,
) -> Result<RenewalTable> {
    let radii = grid.radii();
    let mut v = Vec::with_capacity(radii.len());
    match backend {
        Backend::HProxy => {
            for &r in &radii {
                v.push(1.0 / model.pruitt_h(r)?.sqrt());
            }
        }
        Backend::ExactLaplace => {
            let zeta = stehfest_coefficients(12);
            let f_hat = |xi: f64| -> Result<f64> { Ok(1.0 / (xi * kappa(model, xi)?)) };
            for &r in &radii {
                v.push(gaver_stehfest(&f_hat, r, &zeta)?);
            }
            // the inverse transform of a renewal function must come out
            // positive and strictly increasing; anything else is instability
            let mut offending = Vec::new();
            for i in 0..radii.len() {
                let bad = v[i] <= 0.0
                    || !v[i].is_finite()
                    || (i > 0 && v[i] <= v[i - 1]);
                if bad {
                    offending.push(radii[i]);
                }
            }
            if !offending.is_empty() {
                return Err(Error::InversionUnstable { offending });
            }
        }
    }
    let vprime = match backend {
        Backend::ExactLaplace => {
            // centered differences on the grid; no smoothness beyond the
            // table is assumed
            let n = radii.len();
            let mut vp = vec![0.0; n];
            for i in 0..n {
                let (i0, i1) = if i == 0 {
                    (0, 1)
                } else if i == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (i - 1, i + 1)
                };
                vp[i] = ((v[i1] - v[i0]) / (radii[i1] - radii[i0])).max(0.0);
            }
            vp
        }
        Backend::HProxy => {
            let (iv, _) = build_interps(&radii, &v, &vec![1.0; radii.len()]);
            radii
                .iter()
                .zip(&v)
                .map(|(&r, &vv)| (vv / r * iv.deriv(r.ln())).max(0.0))
                .collect()
        }
    };
    let (interp_v, interp_vp) = build_interps(&radii, &v, &vprime);
    Ok(RenewalTable {
        fingerprint: model.fingerprint(),
        radii,
        v,
        vprime,
        backend,
        normalization: 1.0,
        interp_v,
        interp_vp,
    })
}

/// Query selector for `renewal_eval`.
#[derive(Clone, Copy, Debug)]
pub enum RenewalQuery {
    V(f64),
    VPrime(f64),
    VInverse(f64),
}

/// Single entry point mirroring the table's three read operations.
pub fn renewal_eval(table: &RenewalTable, query: RenewalQuery) -> Result<f64> {
    match query {
        RenewalQuery::V(r) => table.v_at(r),
        RenewalQuery::VPrime(r) => table.vprime_at(r),
        RenewalQuery::VInverse(s) => table.v_inverse(s),
    }
}

impl RenewalTable {
    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// Rescales V (and V') by a constant; the paper-normalized ladder height
    /// is only fixed up to such a constant.
    pub fn with_normalization(mut self, c: f64) -> RenewalTable {
        assert!(c > 0.0);
        let f = c / self.normalization;
        for x in self.v.iter_mut() {
            *x *= f;
        }
        for x in self.vprime.iter_mut() {
            *x *= f;
        }
        self.normalization = c;
        let (iv, ivp) = build_interps(&self.radii, &self.v, &self.vprime);
        self.interp_v = iv;
        self.interp_vp = ivp;
        self
    }

    fn extrap_range(&self) -> (f64, f64) {
        (self.radii[0] * 0.1, self.radii[self.radii.len() - 1] * 10.0)
    }

    fn check_range(&self, r: f64) -> Result<()> {
        let (lo, hi) = self.extrap_range();
        if r < lo || r > hi || !r.is_finite() {
            return Err(Error::RangeError {
                value: r,
                lo,
                hi,
            });
        }
        Ok(())
    }

    /// V(r); V(0) = 0 by convention. Log-log monotone interpolation with
    /// one decade of extrapolation past each grid end.
    pub fn v_at(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok(0.0);
        }
        self.check_range(r)?;
        Ok(self.interp_v.eval(r.ln()).exp())
    }

    pub fn v_squared(&self, r: f64) -> Result<f64> {
        let v = self.v_at(r)?;
        Ok(v * v)
    }

    pub fn vprime_at(&self, r: f64) -> Result<f64> {
        self.check_range(r)?;
        Ok(self.interp_vp.eval(r.ln()).exp())
    }

    /// Solves V(r) = s by bisection on the table, 1e-10 relative in r.
    pub fn v_inverse(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = self.extrap_range();
        let v_lo = self.v_at(lo)?;
        let v_hi = self.v_at(hi)?;
        if s < v_lo || s > v_hi {
            return Err(Error::RangeError {
                value: s,
                lo: v_lo,
                hi: v_hi,
            });
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if self.v_at(mid)? < s {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) <= 1e-10 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Table invariants: positivity, strict monotonicity, subadditivity on
    /// grid pairs (with a 1e-6 slack), V(0) = 0.
    pub fn validate(&self) -> Result<()> {
        if !(self.v[0] > 0.0) {
            return Err(Error::ModelInvalid("V must be positive on the grid".into()));
        }
        for i in 1..self.v.len() {
            if !(self.v[i] > self.v[i - 1]) {
                return Err(Error::InversionUnstable {
                    offending: vec![self.radii[i]],
                });
            }
        }
        let stride = (self.radii.len() / 48).max(1);
        for i in (0..self.radii.len()).step_by(stride) {
            for j in (i..self.radii.len()).step_by(stride) {
                let x = self.radii[i];
                let y = self.radii[j];
                if x + y > self.extrap_range().1 {
                    continue;
                }
                let lhs = self.v_at(x + y)?;
                let rhs = (self.v_at(x)? + self.v_at(y)?) * (1.0 + 1e-6);
                if lhs > rhs {
                    return Err(Error::ModelInvalid(format!(
                        "subadditivity violated at ({x}, {y}): V(x+y)={lhs} > {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// CSV export: a comment header with backend, fingerprint and
    /// normalization, then `r,V,Vprime` rows.
    pub fn to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# backend={} fingerprint={:016x} normalization={}",
            self.backend.tag(),
            self.fingerprint,
            self.normalization
        )?;
        writeln!(w, "r,V,Vprime")?;
        for i in 0..self.radii.len() {
            writeln!(w, "{},{},{}", self.radii[i], self.v[i], self.vprime[i])?;
        }
        Ok(())
    }

    pub fn from_csv<R: BufRead>(r: R) -> Result<RenewalTable> {
        let mut lines = r.lines();
        let head = lines
            .next()
            .ok_or_else(|| Error::Config("empty renewal csv".into()))??;
        let mut backend = Backend::HProxy;
        let mut fingerprint = 0u64;
        let mut normalization = 1.0f64;
        for tok in head.trim_start_matches('#').split_whitespace() {
            if let Some(v) = tok.strip_prefix("backend=") {
                backend = Backend::parse(v)?;
            } else if let Some(v) = tok.strip_prefix("fingerprint=") {
                fingerprint = u64::from_str_radix(v, 16)
                    .map_err(|e| Error::Config(format!("bad fingerprint: {e}")))?;
            } else if let Some(v) = tok.strip_prefix("normalization=") {
                normalization = v
                    .parse()
                    .map_err(|e| Error::Config(format!("bad normalization: {e}")))?;
            }
        }
        let mut radii = Vec::new();
        let mut v = Vec::new();
        let mut vprime = Vec::new();
        for line in lines {
            let line = line?;
            if line.starts_with('r') || line.trim().is_empty() {
                continue;
            }
            let mut it = line.split(',');
            let mut next = || -> Result<f64> {
                it.next()
                    .ok_or_else(|| Error::Config(format!("short row '{line}'")))?
                    .parse()
                    .map_err(|e| Error::Config(format!("bad number in '{line}': {e}")))
            };
            radii.push(next()?);
            v.push(next()?);
            vprime.push(next()?);
        }
        if radii.len() < 2 {
            return Err(Error::Config("renewal csv has fewer than 2 rows".into()));
        }
        let (interp_v, interp_vp) = build_interps(&radii, &v, &vprime);
        Ok(RenewalTable {
            radii,
            v,
            vprime,
            backend,
            fingerprint,
            normalization,
            interp_v,
            interp_vp,
        })
    }
}

/// Result of the grid-certified condition-H estimate.
#[derive(Clone, Debug)]
pub struct HEstimate {
    pub h_r: f64,
    pub argmax: (f64, f64, f64),
    pub grid_points: usize,
}

/// Grid-certified supremum of (V(z)-V(y)) / (V'(x)(z-y)) over
/// 0 < x <= y <= z <= 5x <= 5r, with the z = y diagonal read as
/// V'(y)/V'(x). Geometric grids with `n` points per coordinate.
pub fn estimate_h(table: &RenewalTable, r: f64, n: usize) -> Result<HEstimate> {
    assert!(r > 0.0 && n >= 8);
    let (lo, _) = table.extrap_range();
    let x_lo = (r * 1e-3).max(lo);
    let mut best = 1.0f64;
    let mut arg = (x_lo, x_lo, x_lo);
    let xs: Vec<f64> = (0..n)
        .map(|i| (x_lo.ln() + (r.ln() - x_lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    for &x in &xs {
        let vpx = table.vprime_at(x)?;
        if vpx <= 0.0 {
            return Err(Error::ConditionHUndecidable(x));
        }
        let y_hi = 5.0 * x;
        let ys: Vec<f64> = (0..n)
            .map(|i| (x.ln() + (y_hi.ln() - x.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect();
        let vy: Vec<f64> = ys.iter().map(|&y| table.v_at(y)).collect::<Result<_>>()?;
        let vpy: Vec<f64> = ys.iter().map(|&y| table.vprime_at(y)).collect::<Result<_>>()?;
        for i in 0..n {
            // z = y diagonal
            let diag = vpy[i] / vpx;
            if diag > best {
                best = diag;
                arg = (x, ys[i], ys[i]);
            }
            for j in i + 1..n {
                let ratio = (vy[j] - vy[i]) / (vpx * (ys[j] - ys[i]));
                if ratio > best {
                    best = ratio;
                    arg = (x, ys[i], ys[j]);
                }
            }
        }
    }
    Ok(HEstimate {
        h_r: best,
        argmax: arg,
        grid_points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ProcessModel;
    use crate::numerics::gamma;
    use std::sync::Arc;

    #[test]
    fn stehfest_inverts_known_pairs() {
        let zeta = stehfest_coefficients(12);
        // L[x](xi) = 1/xi^2
        let f = |xi: f64| -> Result<f64> { Ok(1.0 / (xi * xi)) };
        for &x in &[0.1, 1.0, 7.0] {
            let got = gaver_stehfest(&f, x, &zeta).unwrap();
            assert!((got - x).abs() / x < 5e-6, "{got} vs {x}");
        }
        // L[sqrt(x)](xi) = Gamma(3/2) xi^{-3/2}
        let f = |xi: f64| -> Result<f64> { Ok(gamma(1.5) * xi.powf(-1.5)) };
        for &x in &[0.5, 2.0] {
            let got = gaver_stehfest(&f, x, &zeta).unwrap();
            let want = x.sqrt();
            assert!((got - want).abs() / want < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn kappa_stable_is_half_power() {
        // alpha = 1: kappa(xi) = xi^{1/2}; the log integral of the zeta
        // factor vanishes
        let m = ProcessModel::stable(1, 1.0);
        let k = kappa(&m, 4.0).unwrap();
        assert!((k - 2.0).abs() < 1e-8, "{k}");
        for &(alpha, xi) in &[(0.5f64, 3.0f64), (1.5, 0.25)] {
            let m = ProcessModel::stable(1, alpha);
            let k = kappa(&m, xi).unwrap();
            let want = xi.powf(alpha / 2.0);
            assert!((k - want).abs() / want < 1e-8, "{k} vs {want}");
        }
    }

    #[test]
    fn kappa_at_one_matches_direct_quadrature() {
        let m = ProcessModel::sum_of_stables(1, 0.5, 1.5);
        let k = kappa(&m, 1.0).unwrap();
        // direct: substitute z = tan(a) piecewise far from the fold
        let f = |z: f64| m.psi_fast(z).ln() / (1.0 + z * z);
        let direct = quad::adaptive(&f, 1e-9, 1.0, 1e-12, 1e-300)
            + quad::adaptive(&f, 1.0, 1e6, 1e-12, 1e-300)
            // analytic remainder beyond z = R for psi ~ z^{a2}: a2 ln z/(1+z^2)
            + {
                // numeric tail via substitution w = 1/z
                let g = |w: f64| m.psi_fast(1.0 / w).ln() / (1.0 + w * w);
                quad::tanh_sinh(&g, 0.0, 1e-6, 1e-12)
            };
        let want = (direct / std::f64::consts::PI).exp();
        assert!((k - want).abs() / want < 1e-5, "{k} vs {want}");
    }

    #[test]
    fn kappa_monotone_for_presets() {
        for m in [
            ProcessModel::stable(1, 1.0),
            ProcessModel::sum_of_stables(1, 0.5, 1.5),
            ProcessModel::truncated_stable(1, 1.0, 0.0),
            ProcessModel::subordinate_bm(1, 1.0),
        ] {
            let k1 = kappa(&m, 1.0).unwrap();
            let k2 = kappa(&m, 2.0).unwrap();
            assert!(k2 >= k1, "{m:?}: kappa(2)={k2} < kappa(1)={k1}");
        }
    }

    #[test]
    fn exact_backend_reproduces_stable_renewal() {
        // V_hat = xi^{-1-alpha/2}, so V(x) = x^{alpha/2} / Gamma(1+alpha/2)
        for &alpha in &[0.5f64, 1.0, 1.5] {
            let m = ProcessModel::stable(1, alpha);
            let grid = GridSpec {
                r_lo: 1e-2,
                r_hi: 1e2,
                points_per_decade: 8,
            };
            let t = build_renewal_table(&m, Backend::ExactLaplace, &grid).unwrap();
            for &r in t.radii() {
                let want = r.powf(alpha / 2.0) / gamma(1.0 + alpha / 2.0);
                let got = t.v_at(r).unwrap();
                assert!(
                    (got - want).abs() / want < 1e-3,
                    "alpha={alpha} r={r}: {got} vs {want}"
                );
            }
            t.validate().unwrap();
        }
    }

    #[test]
    fn proxy_backend_value_and_inverse() {
        // d=1, nu = s^{-2}: h(1) = 4 so V(1) = 1/2
        let m = ProcessModel::custom(1, "nu=s^-2", Arc::new(|s: f64| s.powi(-2)), None, None);
        let t = build_renewal_table(&m, Backend::HProxy, &GridSpec::default()).unwrap();
        assert!((t.v_at(1.0).unwrap() - 0.5).abs() < 1e-6);
        assert_eq!(t.v_at(0.0).unwrap(), 0.0);
        t.validate().unwrap();
        // paper-normalized stable table: V(x) = sqrt(x), inverse is s^2
        let m = ProcessModel::stable(1, 1.0);
        let t = build_renewal_table(&m, Backend::ExactLaplace, &GridSpec::default())
            .unwrap()
            .with_normalization(gamma(1.5));
        let r = t.v_inverse(2.0).unwrap();
        assert!((r - 4.0).abs() < 2e-3 * 4.0, "{r}");
        // inverse identity across the table
        for &s in &[0.05, 0.3, 1.0, 3.0, 9.0] {
            let r = t.v_inverse(s).unwrap();
            let back = t.v_at(r).unwrap();
            assert!((back - s).abs() < 1e-8 * s.max(1.0), "{back} vs {s}");
        }
        // V' nonnegative everywhere on the grid
        for &r in t.radii() {
            assert!(t.vprime_at(r).unwrap() >= 0.0);
        }
    }

    #[test]
    fn renewal_eval_dispatch() {
        let m = ProcessModel::stable(1, 1.0);
        let t = build_renewal_table(&m, Backend::HProxy, &GridSpec::default()).unwrap();
        let v = renewal_eval(&t, RenewalQuery::V(1.0)).unwrap();
        let s = renewal_eval(&t, RenewalQuery::VInverse(v)).unwrap();
        assert!((s - 1.0).abs() < 1e-8);
        assert!(renewal_eval(&t, RenewalQuery::VPrime(1.0)).unwrap() > 0.0);
        assert!(matches!(
            renewal_eval(&t, RenewalQuery::V(1e9)),
            Err(Error::RangeError { .. })
        ));
    }

    #[test]
    fn condition_h_stable_is_one() {
        // concave V: the supremum is attained in the z -> y, y -> x corner
        let m = ProcessModel::stable(1, 1.0);
        let t = build_renewal_table(&m, Backend::ExactLaplace, &GridSpec::default()).unwrap();
        let h = estimate_h(&t, 2.0, 120).unwrap();
        assert!(h.h_r >= 1.0);
        assert!(h.h_r < 1.02, "H_r = {}", h.h_r);
    }

    #[test]
    fn condition_h_sum_of_stables_matches_bruteforce() {
        let m = ProcessModel::sum_of_stables(1, 0.5, 1.5);
        let t = build_renewal_table(&m, Backend::HProxy, &GridSpec::default()).unwrap();
        let r = 10.0;
        let got = estimate_h(&t, r, 200).unwrap();
        // brute-force oracle on an independent (coarser, shifted) grid
        let n = 57;
        let x_lo = r * 1.3e-3;
        let mut best = 1.0f64;
        for i in 0..n {
            let x = (x_lo.ln() + (r.ln() - x_lo.ln()) * i as f64 / (n - 1) as f64).exp();
            let vpx = t.vprime_at(x).unwrap();
            for j in 0..n {
                let y = (x.ln() + (5.0f64).ln() * j as f64 / (n - 1) as f64).exp();
                for k in j..n {
                    let z = (x.ln() + (5.0f64).ln() * k as f64 / (n - 1) as f64).exp();
                    let v = if k == j {
                        t.vprime_at(y).unwrap() / vpx
                    } else {
                        (t.v_at(z).unwrap() - t.v_at(y).unwrap()) / (vpx * (z - y))
                    };
                    best = best.max(v);
                }
            }
        }
        assert!(got.h_r >= 1.0 && got.h_r.is_finite());
        assert!(
            (got.h_r - best).abs() / best < 0.05,
            "grid sup {} vs oracle {best}",
            got.h_r
        );
    }

    #[test]
    fn csv_round_trip() {
        let m = ProcessModel::stable(1, 1.2);
        let t = build_renewal_table(
            &m,
            Backend::HProxy,
            &GridSpec {
                r_lo: 1e-2,
                r_hi: 1e2,
                points_per_decade: 8,
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        t.to_csv(&mut buf).unwrap();
        let back = RenewalTable::from_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(back.backend(), Backend::HProxy);
        assert_eq!(back.fingerprint(), t.fingerprint());
        assert_eq!(back.radii().len(), t.radii().len());
        for (&a, &b) in back.values().iter().zip(t.values()) {
            assert_eq!(a, b);
        }
    }
}
