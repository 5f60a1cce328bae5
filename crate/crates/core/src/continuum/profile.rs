//! Domain descriptors through their inner-parallel-body perimeter profiles.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};

use super::quadrature::integrate_split;

/// Relative accuracy requested from profile quadratures.
pub const QUAD_REL_TOL: f64 = 1e-13;
/// Absolute accuracy, in units of the integral's natural scale.
pub const QUAD_ABS_TOL: f64 = 1e-10;

/// Monotone cubic (Fritsch–Carlson) interpolant through `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidProfile(
                "need at least two (tau, perimeter) rows".into(),
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile(
                "tau must be strictly increasing".into(),
            ));
        }
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes = vec![delta[0]; 2];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    slopes[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { x, y, slopes })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = ((t - self.x[i]) / h).clamp(0.0, 1.0);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i]
            + h10 * h * self.slopes[i]
            + h01 * self.y[i + 1]
            + h11 * h * self.slopes[i + 1]
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape {
    /// `(a, b) ⊂ R`; the "perimeter" is the two-point count.
    Interval {
        a: f64,
        b: f64,
    },
    Disk {
        radius: f64,
    },
    Square {
        side: f64,
    },
    /// `[0, L]² \ [0, L - δ]²`.
    LShape {
        side: f64,
        thickness: f64,
    },
    Tabulated(Pchip),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainProfile {
    pub name: String,
    pub dimension: usize,
    pub in_radius: f64,
    pub shape: ProfileShape,
    /// `||d||_2²`, equal to `I_2(1)`.
    pub d_norm2_sq: f64,
    /// `(r̃, τ̃)` of a known perimeter bound.
    pub bound_params: Option<(f64, f64)>,
}

fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            what,
            value,
            lo: 0.0,
            hi: f64::INFINITY,
        })
    }
}

impl DomainProfile {
    fn finish(
        name: &str,
        dimension: usize,
        in_radius: f64,
        shape: ProfileShape,
        bound: Option<(f64, f64)>,
    ) -> Result<Self> {
        let mut profile = Self {
            name: name.to_string(),
            dimension,
            in_radius,
            shape,
            d_norm2_sq: 0.0,
            bound_params: bound,
        };
        if !(profile.perimeter(0.0) > 0.0) {
            return Err(Error::InvalidProfile("P(Ω) must be positive".into()));
        }
        profile.d_norm2_sq = profile.i_k(2, 1.0)?;
        Ok(profile)
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        let r = positive("interval length", b - a)? / 2.0;
        Self::finish(
            "interval",
            1,
            r,
            ProfileShape::Interval { a, b },
            Some((r, r)),
        )
    }

    pub fn disk(radius: f64) -> Result<Self> {
        let r = positive("disk radius", radius)?;
        Self::finish("disk", 2, r, ProfileShape::Disk { radius }, Some((r, r)))
    }

    pub fn square(side: f64) -> Result<Self> {
        let r = positive("square side", side)? / 2.0;
        Self::finish("square", 2, r, ProfileShape::Square { side }, Some((r, r)))
    }

    /// Requires `3δ ≤ 2L`, so that the corner region governs `Ω_τ` beyond `δ/2`.
    pub fn l_shape(side: f64, thickness: f64) -> Result<Self> {
        positive("L-shape side", side)?;
        positive("L-shape thickness", thickness)?;
        if 3.0 * thickness > 2.0 * side {
            return Err(Error::OutOfRange {
                what: "L-shape thickness",
                value: thickness,
                lo: 0.0,
                hi: 2.0 * side / 3.0,
            });
        }
        let r = SQRT_2 * thickness / (1.0 + SQRT_2);
        let r_tilde = 8.0 * side / (20.0 - PI);
        let tau_tilde = (side - thickness).min(thickness / 2.0);
        Self::finish(
            "lshape",
            2,
            r,
            ProfileShape::LShape { side, thickness },
            Some((r_tilde, tau_tilde)),
        )
    }

    /// Profile from `(tau, perimeter)` samples with `tau` running from 0 to the in-radius.
    pub fn tabulated(
        name: &str,
        dimension: usize,
        tau: Vec<f64>,
        perimeter: Vec<f64>,
        bound: Option<(f64, f64)>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidProfile("dimension must be at least 1".into()));
        }
        if tau.first() != Some(&0.0) {
            return Err(Error::InvalidProfile("tau must start at 0".into()));
        }
        if perimeter.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidProfile(
                "perimeters must be finite and non-negative".into(),
            ));
        }
        let r = *tau.last().expect("checked length");
        let interp = Pchip::new(tau, perimeter)?;
        Self::finish(name, dimension, r, ProfileShape::Tabulated(interp), bound)
    }

    /// `P(Ω_τ)`; zero beyond the in-radius.
    pub fn perimeter(&self, tau: f64) -> f64 {
        if tau > self.in_radius {
            return 0.0;
        }
        match &self.shape {
            ProfileShape::Interval { .. } => 2.0,
            ProfileShape::Disk { radius } => 2.0 * PI * (radius - tau),
            ProfileShape::Square { side } => 4.0 * (side - 2.0 * tau),
            ProfileShape::LShape { side, thickness } => l_shape_perimeter(*side, *thickness, tau),
            ProfileShape::Tabulated(p) => p.eval(tau).max(0.0),
        }
    }

    /// `P(Ω_τ) = a + b τ` on `[0, r]` when the profile is affine.
    fn affine(&self) -> Option<(f64, f64)> {
        match &self.shape {
            ProfileShape::Interval { .. } => Some((2.0, 0.0)),
            ProfileShape::Disk { radius } => Some((2.0 * PI * radius, -2.0 * PI)),
            ProfileShape::Square { side } => Some((4.0 * side, -8.0)),
            _ => None,
        }
    }

    /// Points where the profile may fail to be smooth.
    fn kinks(&self) -> Vec<f64> {
        match &self.shape {
            ProfileShape::LShape { thickness, .. } => vec![thickness / 2.0],
            ProfileShape::Tabulated(p) => p.knots().to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn has_closed_form(&self) -> bool {
        self.affine().is_some()
    }

    /// `I_k(g) = ∫_0^{rg} P(Ω_t) t^k dt`.
    pub fn i_k(&self, k: u32, g: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::OutOfRange {
                what: "g",
                value: g,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let x = self.in_radius * g;
        if let Some((a, b)) = self.affine() {
            let k1 = f64::from(k + 1);
            return Ok(a * x.powi(k as i32 + 1) / k1 + b * x.powi(k as i32 + 2) / (k1 + 1.0));
        }
        let scale = self.perimeter(0.0) * x.powi(k as i32 + 1) / f64::from(k + 1);
        let q = integrate_split(
            |t| self.perimeter(t) * t.powi(k as i32),
            0.0,
            x,
            &self.kinks(),
            QUAD_ABS_TOL * scale,
            QUAD_REL_TOL,
        )?;
        Ok(q.value)
    }

    /// `I_k'(g) = P(Ω_{rg}) r^{k+1} g^k`.
    pub fn i_k_derivative(&self, k: u32, g: f64) -> f64 {
        let r = self.in_radius;
        self.perimeter(r * g) * r.powi(k as i32 + 1) * g.powi(k as i32)
    }
}

/// Exact perimeter of the inner parallel body of the L-shape.
fn l_shape_perimeter(side: f64, thickness: f64, tau: f64) -> f64 {
    if tau <= thickness / 2.0 {
        // offset arms plus a quarter circle around the re-entrant corner
        return 4.0 * side - tau * (20.0 - PI) / 2.0;
    }
    // only the corner square [L-δ, L-τ]² minus the disk of radius τ at the re-entrant corner survives
    let s = thickness - tau;
    if s <= 0.0 {
        return 0.0;
    }
    let h = (tau * tau - s * s).max(0.0).sqrt();
    if h >= s {
        return 0.0;
    }
    2.0 * (s - h) + tau * (FRAC_PI_2 - 2.0 * (s / tau).acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let iv = DomainProfile::interval(-1.0, 1.0).unwrap();
        assert_eq!(iv.in_radius, 1.0);
        for g in [0.0, 0.25, 0.5, 1.0] {
            assert!((iv.i_k(2, g).unwrap() - 2.0 * g * g * g / 3.0).abs() < 1e-15);
        }
        assert!((iv.d_norm2_sq - 2.0 / 3.0).abs() < 1e-15);

        let disk = DomainProfile::disk(1.0).unwrap();
        for g in [0.0f64, 0.3, 0.8, 1.0] {
            let expected = PI / 6.0 * g.powi(3) * (4.0 - 3.0 * g);
            assert!((disk.i_k(2, g).unwrap() - expected).abs() < 1e-14);
        }
        assert!((disk.d_norm2_sq - PI / 6.0).abs() < 1e-15);
        assert!(matches!(disk.i_k(2, 1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn l_shape_area_and_seam() {
        let (l, delta) = (1.0, 0.4);
        let p = DomainProfile::l_shape(l, delta).unwrap();
        let area = integrate_split(
            |t| p.perimeter(t),
            0.0,
            p.in_radius,
            &[delta / 2.0],
            1e-13,
            1e-13,
        )
        .unwrap()
        .value;
        assert!(
            (area - (2.0 * l * delta - delta * delta)).abs() < 1e-10,
            "{area}"
        );
        // just past the seam the corner square has side δ/2 with the circle touching two corners
        let right = l_shape_perimeter(l, delta, delta / 2.0 + 1e-12);
        assert!((right - (delta + PI * delta / 4.0)).abs() < 1e-5);
        assert_eq!(p.perimeter(p.in_radius + 1e-9), 0.0);
        assert!(DomainProfile::l_shape(1.0, 0.9).is_err());
    }

    #[test]
    fn tabulated_matches_affine_profile() {
        let tau: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let per: Vec<f64> = tau.iter().map(|t| 2.0 * PI * (1.0 - t)).collect();
        let tab = DomainProfile::tabulated("disk-table", 2, tau, per, None).unwrap();
        let disk = DomainProfile::disk(1.0).unwrap();
        for g in [0.1, 0.5, 1.0] {
            assert!((tab.i_k(2, g).unwrap() - disk.i_k(2, g).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn pchip_preserves_monotonicity() {
        let p = Pchip::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let mut prev: f64 = p.eval(0.0);
        for i in 1..=300 {
            let v = p.eval(i as f64 / 100.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert!(Pchip::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }
}
