//! Cylindrical Bessel functions J0, J1 and the positive zeros of J0.
//!
//! Series evaluation below the crossover, Hankel asymptotics above; the
//! crossover at 16 keeps both branches near 1e-10 absolute.

const CROSSOVER: f64 = 16.0;

/// J0(x) for any real x.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < CROSSOVER {
        // sum (-1)^k (x^2/4)^k / (k!)^2
        let q = 0.25 * ax * ax;
        let mut term = 1.0f64;
        let mut acc = 1.0f64;
        for k in 1..80 {
            term *= -q / ((k * k) as f64);
            acc += term;
            if term.abs() < 1e-18 * acc.abs().max(1.0) {
                break;
            }
        }
        acc
    } else {
        let z = ax;
        let z2 = 1.0 / (z * z);
        let p = 1.0
            + z2 * (-9.0 / 128.0
                + z2 * (3675.0 / 32768.0
                    + z2 * (-2_401_245.0 / 4_194_304.0
                        + z2 * (4_108_830_350_625.0 / 676_457_349_120.0))));
        let q = (1.0 / z)
            * (-1.0 / 8.0
                + z2 * (75.0 / 1024.0
                    + z2 * (-59535.0 / 262_144.0 + z2 * (18_261_468_225.0 / 10_569_646_080.0))));
        let omega = z - std::f64::consts::FRAC_PI_4;
        (2.0 / (std::f64::consts::PI * z)).sqrt() * (p * omega.cos() - q * omega.sin())
    }
}

/// J1(x) for any real x (odd function).
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let val = if ax < CROSSOVER {
        // (x/2) sum (-1)^k (x^2/4)^k / (k!(k+1)!)
        let q = 0.25 * ax * ax;
        let mut term = 1.0f64;
        let mut acc = 1.0f64;
        for k in 1..80 {
            term *= -q / ((k * (k + 1)) as f64);
            acc += term;
            if term.abs() < 1e-18 * acc.abs().max(1.0) {
                break;
            }
        }
        0.5 * ax * acc
    } else {
        let z = ax;
        let z2 = 1.0 / (z * z);
        let p = 1.0
            + z2 * (15.0 / 128.0
                + z2 * (-4725.0 / 32768.0
                    + z2 * (2_837_835.0 / 4_194_304.0
                        + z2 * (-4_656_674_397_375.0 / 676_457_349_120.0))));
        let q = (1.0 / z)
            * (3.0 / 8.0
                + z2 * (-105.0 / 1024.0
                    + z2 * (72765.0 / 262_144.0 + z2 * (-21_070_924_875.0 / 10_569_646_080.0))));
        let omega = z - 3.0 * std::f64::consts::FRAC_PI_4;
        (2.0 / (std::f64::consts::PI * z)).sqrt() * (p * omega.cos() - q * omega.sin())
    };
    if x < 0.0 {
        -val
    } else {
        val
    }
}

/// k-th positive zero of J0 (k >= 1): McMahon expansion plus Newton polish.
pub fn j0_zero(k: usize) -> f64 {
    let beta = (k as f64 - 0.25) * std::f64::consts::PI;
    let b2 = 1.0 / (beta * beta);
    let mut x = beta + (1.0 / (8.0 * beta)) * (1.0 + b2 * (-31.0 / 48.0 + b2 * 3779.0 / 1920.0));
    for _ in 0..2 {
        let f = j0(x);
        let fp = -j1(x);
        if fp != 0.0 {
            x -= f / fp;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_reference_values() {
        // reference values from Abramowitz & Stegun tables
        let cases = [
            (0.0, 1.0),
            (1.0, 0.765_197_686_557_966_6),
            (2.0, 0.223_890_779_141_235_67),
            (5.0, -0.177_596_771_314_338_3),
            (10.0, -0.245_935_764_451_348_33),
            (15.5, -0.109_230_650_900_050_05),
            (20.0, 0.167_024_664_340_583_5),
            (100.0, 0.019_985_850_304_223_12),
        ];
        for (x, want) in cases {
            let got = j0(x);
            assert!((got - want).abs() < 1e-9, "j0({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn j1_reference_values() {
        let cases = [
            (1.0, 0.440_050_585_744_933_5),
            (2.0, 0.576_724_807_756_873_4),
            (5.0, -0.327_579_137_591_465_2),
            (20.0, 0.066_833_124_175_850_05),
        ];
        for (x, want) in cases {
            let got = j1(x);
            assert!((got - want).abs() < 1e-9, "j1({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn j0_zeros_are_zeros() {
        let known = [
            2.404_825_557_695_773,
            5.520_078_110_286_311,
            8.653_727_912_911_012,
            11.791_534_439_014_281,
            14.930_917_708_487_785,
        ];
        for (i, want) in known.iter().enumerate() {
            let got = j0_zero(i + 1);
            assert!((got - want).abs() < 2e-9, "zero {}: {got} vs {want}", i + 1);
        }
        // far zeros stay honest
        let z = j0_zero(500);
        assert!(j0(z).abs() < 1e-9);
    }
}
