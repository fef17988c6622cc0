//! Free transition density by radial Fourier inversion, its two-sided
//! envelope in terms of the renewal function, and condition G_R.

use crate::error::{Error, Result};
use crate::models::{ProcessModel, ScalingCharacteristics};
use crate::numerics::{bessel, quad, unit_sphere_area};
use crate::profile::ConstantProfile;
use crate::renewal::RenewalTable;

/// Regime of the envelope's min expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// t > V^2(r): the on-diagonal branch [V^{-1}(sqrt t)]^{-d} is smaller
    Near,
    /// t <= V^2(r): the off-diagonal branch t/(V^2(r) r^d) is smaller
    Far,
}

#[derive(Clone, Debug)]
pub struct KernelEnvelope {
    pub lower: f64,
    pub upper: f64,
    /// the bracketed min expression itself, before profile constants
    pub structural: f64,
    pub regime: Regime,
    pub profile_name: String,
}

/// Damping cutoff: smallest s with t psi(s) >= `target`.
fn damping_cutoff(model: &ProcessModel, t: f64, target: f64) -> f64 {
    let mut lo = 1e-12f64;
    let mut hi = 1e-12f64;
    let mut steps = 0;
    while t * model.psi_fast(hi) < target {
        hi *= 2.0;
        lo = hi * 0.5;
        steps += 1;
        if steps > 220 {
            return hi;
        }
    }
    if steps == 0 {
        return hi;
    }
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if t * model.psi_fast(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Oscillation nodes of the inversion kernel in the frequency variable:
/// zeros of cos(s r) / J0(s r) / sin(s r).
fn osc_node(d: usize, k: usize, r: f64) -> f64 {
    match d {
        1 => (k as f64 - 0.5) * std::f64::consts::PI / r,
        2 => bessel::j0_zero(k) / r,
        3 => k as f64 * std::f64::consts::PI / r,
        _ => unreachable!(),
    }
}

fn inversion_kernel(d: usize, s: f64, r: f64) -> f64 {
    match d {
        1 => (s * r).cos() / std::f64::consts::PI,
        2 => s * bessel::j0(s * r) / (2.0 * std::f64::consts::PI),
        3 => {
            let pi2 = std::f64::consts::PI * std::f64::consts::PI;
            if s * r < 1e-8 {
                s * s / (2.0 * pi2)
            } else {
                s * (s * r).sin() / (2.0 * pi2 * r)
            }
        }
        _ => unreachable!(),
    }
}

/// p_t(0) by radial quadrature of e^{-t psi}.
pub fn p0(model: &ProcessModel, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("p0 requires t > 0, got {t}")));
    }
    if !model.hartman_wintner_ok() {
        return Err(Error::UnsupportedRegime(
            "Hartman-Wintner condition fails on the check grid; p_t is not bounded".into(),
        ));
    }
    let d = model.dim();
    let s_max = damping_cutoff(model, t, 46.0);
    let f = |s: f64| (-t * model.psi_fast(s)).exp() * s.powi(d as i32 - 1);
    let integral = quad::adaptive(&f, 0.0, s_max, 1e-9, 1e-300);
    Ok((2.0 * std::f64::consts::PI).powi(-(d as i32)) * unit_sphere_area(d) * integral)
}

/// Free transition density at radius `r`, by oscillatory radial inversion.
/// Relative target 1e-6 where the value is not dominated by cancellation.
pub fn p_free(model: &ProcessModel, t: f64, r: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::DomainError(format!(
            "p_free requires t > 0, got {t}"
        )));
    }
    if !(r >= 0.0) {
        return Err(Error::DomainError(format!(
            "p_free requires r >= 0, got {r}"
        )));
    }
    if r == 0.0 {
        return p0(model, t);
    }
    if !model.hartman_wintner_ok() {
        return Err(Error::UnsupportedRegime(
            "Hartman-Wintner condition fails on the check grid; p_t is not bounded".into(),
        ));
    }
    let d = model.dim();
    let s_damp = damping_cutoff(model, t, 46.0);
    let f = |s: f64| (-t * model.psi_fast(s)).exp() * inversion_kernel(d, s, r);

    let first_node = osc_node(d, 1, r);
    if s_damp <= first_node {
        // fully damped before the first oscillation: plain quadrature
        return Ok(quad::adaptive(&f, 0.0, s_damp, 1e-9, 1e-300));
    }

    // lobe-by-lobe summation: direct until the damping has knocked the
    // amplitude down, then Wynn acceleration on the alternating remainder
    let lobe_cap = 20_000usize;
    let mut acc = quad::adaptive(&f, 0.0, first_node, 1e-10, 1e-300);
    let mut k = 1usize;
    let mut capped = false;
    loop {
        let a = osc_node(d, k, r);
        if a >= s_damp {
            return Ok(acc); // damped out: the remainder is below e^{-46}
        }
        if k >= lobe_cap {
            capped = true;
            break;
        }
        if k >= 32 && (-t * model.psi_fast(a)).exp() < 0.2 {
            break;
        }
        acc += quad::gl16(&f, a, osc_node(d, k + 1, r));
        k += 1;
    }
    let (tail, tail_err) = quad::alternating_sum(
        |j| {
            let a = osc_node(d, k + j, r);
            let b = osc_node(d, k + j + 1, r);
            quad::gl16(&f, a, b)
        },
        1e-16 * acc.abs().max(1e-300),
        8,
        24,
    );
    let value = acc + tail;
    let rel_err = tail_err.abs() / value.abs().max(1e-300);
    if capped && rel_err > 1e-5 {
        return Err(Error::AccuracyWarning {
            what: format!("p_free(t={t}, r={r}) = {value}: oscillation budget exhausted"),
            target: 1e-6,
            achieved: rel_err,
        });
    }
    Ok(value)
}

/// Two-sided envelope of p_t at radius r from the renewal table:
/// profile constants times min{ [V^{-1}(sqrt t)]^{-d}, t / (V^2(r) r^d) }.
pub fn p_free_envelope(
    model: &ProcessModel,
    table: &RenewalTable,
    scaling: &ScalingCharacteristics,
    profile: &ConstantProfile,
    t: f64,
    r: f64,
) -> Result<KernelEnvelope> {
    if !(t > 0.0 && r >= 0.0) {
        return Err(Error::DomainError(format!(
            "envelope requires t > 0, r >= 0; got ({t}, {r})"
        )));
    }
    if !scaling.global {
        let theta = scaling.theta_low.max(scaling.theta_up);
        let r0 = 1.0 / theta;
        let t_max = table.v_squared(r0)?;
        if t >= t_max || r >= r0 {
            return Err(Error::UnsupportedRegime(format!(
                "local scaling (theta={theta}): envelope valid only for t < V^2(1/theta) = {t_max:.6e} and r < {r0:.6e}"
            )));
        }
    }
    let d = model.dim() as i32;
    let near_branch = table.v_inverse(t.sqrt())?.powi(-d);
    let (structural, regime) = if r == 0.0 {
        (near_branch, Regime::Near)
    } else {
        let far_branch = t / (table.v_squared(r)? * r.powi(d));
        if t > table.v_squared(r)? {
            (near_branch.min(far_branch), Regime::Near)
        } else {
            (far_branch.min(near_branch), Regime::Far)
        }
    };
    Ok(KernelEnvelope {
        lower: profile.env_low * structural,
        upper: profile.env_up * structural,
        structural,
        regime,
        profile_name: profile.name.clone(),
    })
}

/// Outcome of the condition G_R grid check.
#[derive(Clone, Debug)]
pub enum GrOutcome {
    Holds { c8: f64 },
    Fails { t: f64, r: f64, ratio: f64 },
}

/// Grid specification for check_GR.
#[derive(Clone, Debug)]
pub struct GrGrid {
    pub n_radii: usize,
    pub n_times: usize,
    pub r_lo: f64,
    /// smallest time per radius, as a fraction of V^2(r)
    pub t_frac_lo: f64,
    /// certification ceiling: larger measured constants count as failure
    pub ceiling: f64,
}

impl Default for GrGrid {
    fn default() -> Self {
        GrGrid {
            n_radii: 12,
            n_times: 8,
            r_lo: 0.05,
            t_frac_lo: 1e-2,
            ceiling: 1e4,
        }
    }
}

/// Checks t/(V^2(|x|)|x|^d) <= C8 p_t(x) over {0 < t <= V^2(|x|), |x| <= R};
/// returns the smallest grid-certified C8, or the violating pair.
pub fn check_gr(
    model: &ProcessModel,
    table: &RenewalTable,
    big_r: f64,
    grid: &GrGrid,
) -> Result<GrOutcome> {
    assert!(big_r > grid.r_lo);
    let d = model.dim() as i32;
    let mut c8 = 0.0f64;
    for i in 0..grid.n_radii {
        let r = (grid.r_lo.ln()
            + (big_r.ln() - grid.r_lo.ln()) * i as f64 / (grid.n_radii - 1) as f64)
            .exp();
        let v2 = table.v_squared(r)?;
        for j in 0..grid.n_times {
            let t = v2
                * (grid.t_frac_lo.ln() * (1.0 - j as f64 / (grid.n_times - 1) as f64)).exp();
            let bound = t / (v2 * r.powi(d));
            let p = match p_free(model, t, r) {
                Ok(p) => p,
                // an unresolvable tiny density reads as a violation
                Err(Error::AccuracyWarning { .. }) => 0.0,
                Err(e) => return Err(e),
            };
            if p <= 0.0 {
                return Ok(GrOutcome::Fails {
                    t,
                    r,
                    ratio: f64::INFINITY,
                });
            }
            let ratio = bound / p;
            if ratio > grid.ceiling {
                return Ok(GrOutcome::Fails { t, r, ratio });
            }
            c8 = c8.max(ratio);
        }
    }
    Ok(GrOutcome::Holds { c8: c8.max(1.0) })
}

/// Measures sup over a (t, r) grid of p_t(r) |r|^d V^2(r) / t, the constant
/// of the structural upper bound.
pub fn measure_upper_bound_constant(
    model: &ProcessModel,
    table: &RenewalTable,
    ts: &[f64],
    rs: &[f64],
) -> Result<f64> {
    let d = model.dim() as i32;
    let mut sup: f64 = 0.0;
    for &t in ts {
        for &r in rs {
            let p = p_free(model, t, r)?;
            sup = sup.max(p * r.powi(d) * table.v_squared(r)? / t);
        }
    }
    Ok(sup)
}

/// Measures the free-kernel envelope band: the extreme ratios of p to the
/// structural min expression over a (t, r) grid. Returns (K_low, K_up) with
/// p/structural in [K_low, K_up] on the grid.
pub fn calibrate_envelope_band(
    model: &ProcessModel,
    table: &RenewalTable,
    scaling: &ScalingCharacteristics,
    ts: &[f64],
    rs: &[f64],
) -> Result<(f64, f64)> {
    let unit = ConstantProfile::unit();
    let mut k_low = f64::INFINITY;
    let mut k_up = 0.0f64;
    for &t in ts {
        for &r in rs {
            let env = p_free_envelope(model, table, scaling, &unit, t, r)?;
            let p = p_free(model, t, r)?;
            let ratio = p / env.structural;
            k_low = k_low.min(ratio);
            k_up = k_up.max(ratio);
        }
    }
    Ok((k_low, k_up))
}
