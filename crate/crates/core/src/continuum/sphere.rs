//! Radial calibration proving that the distance function of the unit ball is an eigenfunction.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::quadrature::integrate;

/// `|S^{n-1}|`, the surface area of the unit sphere in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_area(n - 2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereCalibration {
    pub n: usize,
    /// `||d||_2²` over the unit ball, by radial quadrature.
    pub d_norm2_sq: f64,
    pub lambda: f64,
    /// Largest `|-(ρ^{1-n}) (ρ^{n-1} q_ρ)' - λ(1 - ρ)|` on an interior grid.
    pub residual: f64,
    /// `|∫_Ball f dx - 1|`.
    pub norm_gap: f64,
    /// Numerical maximiser of `f` on `[0, 1]`.
    pub maximizer: f64,
}

impl SphereCalibration {
    /// Magnitude `f(ρ) = λ(ρ/n - ρ²/(n+1))` of the radial calibration `q = -f(ρ) x/ρ`.
    pub fn f(&self, rho: f64) -> f64 {
        let n = self.n as f64;
        self.lambda * (rho / n - rho * rho / (n + 1.0))
    }
}

fn derivative<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub fn sphere_calibration(n: usize) -> Result<SphereCalibration> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "dimension",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let area = sphere_area(n);
    let nf = n as f64;
    let radial = |rho: f64| rho.powi(n as i32 - 1);
    let d_norm2_sq = area
        * integrate(
            |rho: f64| (1.0 - rho).powi(2) * radial(rho),
            0.0,
            1.0,
            1e-15,
            1e-14,
        )?
        .value;
    let lambda = 1.0 / d_norm2_sq;
    let f = |rho: f64| lambda * (rho / nf - rho * rho / (nf + 1.0));
    let q = |rho: f64| -f(rho);
    let mut cal = SphereCalibration {
        n,
        d_norm2_sq,
        lambda,
        residual: 0.0,
        norm_gap: 0.0,
        maximizer: 0.0,
    };

    let h = 1e-4;
    let samples = 999;
    for i in 1..=samples {
        let rho = i as f64 / (samples + 1) as f64;
        let dq = derivative(&q, rho, h);
        let div = -((nf - 1.0) * q(rho) / rho + dq);
        cal.residual = cal.residual.max((div - lambda * (1.0 - rho)).abs());
    }

    let mass = area * integrate(|rho| f(rho).abs() * radial(rho), 0.0, 1.0, 1e-15, 1e-14)?.value;
    cal.norm_gap = (mass - 1.0).abs();

    let df = |rho: f64| derivative(&f, rho, h);
    cal.maximizer = if df(1.0) >= 0.0 {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if df(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    Ok(cal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert_eq!(sphere_area(1), 2.0);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn disk_calibration() {
        let cal = sphere_calibration(2).unwrap();
        assert!((cal.d_norm2_sq - PI / 6.0).abs() < 1e-14);
        assert!(cal.residual <= 1e-8, "{cal:?}");
        assert!(cal.norm_gap <= 1e-8);
        assert!((cal.maximizer - 0.75).abs() < 1e-8);
        assert_eq!(cal.f(0.0), 0.0);
    }

    #[test]
    fn interval_calibration() {
        let cal = sphere_calibration(1).unwrap();
        assert!((cal.lambda - 1.5).abs() < 1e-13);
        assert!((cal.maximizer - 1.0).abs() < 1e-8);
    }
}
