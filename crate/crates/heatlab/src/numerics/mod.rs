//! Shared numerical kernels.

pub mod bessel;
pub mod dd;
pub mod interp;
pub mod quad;

/// Gamma function (libm's tgamma).
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Surface measure of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2).
pub fn unit_sphere_area(d: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0)
}

/// Volume of the unit ball in R^d.
pub fn unit_ball_volume(d: usize) -> f64 {
    unit_sphere_area(d) / d as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((unit_sphere_area(2) - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
    }
}
