//! The integrals `I_k`, the singular IVP `g' = g²/I_2(g)`, and the explicit flow solution.

use crate::error::{Error, Result};

use super::ode::{integrate_to_level, DenseStep, Dopri5Options};
use super::profile::DomainProfile;

/// `g` at which the small-time coefficient `c₃ = I_2(g)/g³` is sampled.
pub const C3_SAMPLE: f64 = 1e-4;
/// Value of `g` at the end of the bootstrap interval.
pub const BOOTSTRAP_G: f64 = 1e-3;

fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// Lower bound for `I_2(g)` implied by the perimeter bound with parameters `(r̃, τ̃)`.
pub fn lower_bound_i2(profile: &DomainProfile, g: f64) -> Result<f64> {
    let (r_tilde, tau_tilde) = profile.bound_params.ok_or(Error::MissingBoundParams)?;
    let r = profile.in_radius;
    let g_max = (tau_tilde / r).min(1.0);
    if !(0.0..=g_max).contains(&g) {
        return Err(Error::OutOfRange {
            what: "g",
            value: g,
            lo: 0.0,
            hi: g_max,
        });
    }
    let n = profile.dimension as i32;
    let nf = f64::from(n);
    let x = r * g / r_tilde;
    let y = 1.0 - x;
    let bracket = 2.0 / ((nf + 1.0) * (nf + 2.0)) * (1.0 - y.powi(n + 2))
        - 2.0 / (nf + 1.0) * y.powi(n + 1) * x
        - x * x * y.powi(n);
    Ok(r_tilde.powi(3) * profile.perimeter(0.0) / nf * bracket)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterBoundCheck {
    pub passed: bool,
    /// `min_τ P(Ω_τ) - P(Ω)(1 - τ/r̃)^{n-1}` over the samples.
    pub worst_margin: f64,
    pub worst_tau: f64,
}

/// Samples `P(Ω_τ) ≥ P(Ω)(1 - τ/r̃)^{n-1}` at `samples` equispaced `τ ∈ [0, τ̃]`.
pub fn perimeter_bound_check(
    profile: &DomainProfile,
    r_tilde: f64,
    tau_tilde: f64,
    samples: usize,
) -> Result<PerimeterBoundCheck> {
    if !(tau_tilde > 0.0 && tau_tilde <= r_tilde) {
        return Err(Error::OutOfRange {
            what: "tau_tilde",
            value: tau_tilde,
            lo: 0.0,
            hi: r_tilde,
        });
    }
    let p0 = profile.perimeter(0.0);
    let n = profile.dimension as i32;
    let samples = samples.max(2);
    let mut worst = PerimeterBoundCheck {
        passed: true,
        worst_margin: f64::INFINITY,
        worst_tau: 0.0,
    };
    for i in 0..samples {
        let tau = tau_tilde * i as f64 / (samples - 1) as f64;
        let bound = p0 * (1.0 - tau / r_tilde).powi(n - 1);
        let margin = profile.perimeter(tau) - bound;
        if margin < worst.worst_margin {
            worst.worst_margin = margin;
            worst.worst_tau = tau;
        }
    }
    // exact-arithmetic equality cases may round to a tiny negative margin
    worst.passed = worst.worst_margin >= -1e-12 * p0;
    Ok(worst)
}

/// Solution of `g' = g²/I_2(g)`, `g(0) = 0`, up to the first time `t*` with `g = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GTrajectory {
    /// `lim I_2(g)/g³`, extrapolated from samples at `g = 1e-4` and `2e-4`.
    pub c3: f64,
    /// Slope of `I_2(g)/g³` at the origin.
    pub c4: f64,
    /// End of the bootstrap interval, where `t = c₃g²/2 + c₄g³/3`.
    pub t0: f64,
    pub t_star: f64,
    steps: Vec<DenseStep>,
}

impl GTrajectory {
    /// `g(t)` for `t ∈ [0, t*]`.
    pub fn g(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.t_star * (1.0 + 1e-12)) {
            return Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo: 0.0,
                hi: self.t_star,
            });
        }
        if t <= self.t0 {
            return Ok(self.bootstrap(t));
        }
        let i = self
            .steps
            .partition_point(|s| s.t1() < t)
            .min(self.steps.len() - 1);
        Ok(self.steps[i].eval(t).min(1.0))
    }

    /// `(t, g)` at the bootstrap end and every accepted step end, closed by `(t*, 1)`.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        let mut out = vec![(0.0, 0.0), (self.t0, self.steps[0].y0())];
        out.extend(
            self.steps
                .iter()
                .filter(|s| s.t1() < self.t_star)
                .map(|s| (s.t1(), s.y1())),
        );
        out.push((self.t_star, 1.0));
        out
    }

    /// Inverts `t = c₃g²/2 + c₄g³/3` by Newton from `sqrt(2t/c₃)`.
    fn bootstrap(&self, t: f64) -> f64 {
        let mut g = (2.0 * t / self.c3).sqrt();
        for _ in 0..8 {
            let residual = self.c3 * g * g / 2.0 + self.c4 * g * g * g / 3.0 - t;
            let slope = self.c3 * g + self.c4 * g * g;
            if !(slope > 0.0) {
                break;
            }
            g -= residual / slope;
        }
        g
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }
}

/// Integrates the IVP with a square-root bootstrap on `[0, t₀]` and
/// Dormand–Prince (relative tolerance `tol`) from `g = 1e-3` to `g = 1`.
pub fn solve_g(profile: &DomainProfile, tol: f64) -> Result<GTrajectory> {
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let h = C3_SAMPLE;
    let q1 = profile.i_k(2, h)? / h.powi(3);
    let q2 = profile.i_k(2, 2.0 * h)? / (2.0 * h).powi(3);
    let c3 = 2.0 * q1 - q2;
    if !(c3 > 0.0 && c3.is_finite()) {
        return Err(Error::DegenerateProfile(c3));
    }
    let c4 = (q2 - q1) / h;
    let g0 = BOOTSTRAP_G;
    let t0 = 0.5 * c3 * g0 * g0 + c4 * g0 * g0 * g0 / 3.0;
    let rhs = |g: f64| {
        let g = g.clamp(1e-12, 1.0);
        let i2 = profile.i_k(2, g).unwrap_or(f64::NAN);
        g * g / i2
    };
    let options = Dopri5Options {
        rtol: tol,
        atol: tol * 1e-3,
        initial_step: t0 * 1e-3,
        max_steps: 1_000_000,
    };
    let sol = integrate_to_level(rhs, t0, g0, 1.0, &options)?;
    Ok(GTrajectory {
        c3,
        c4,
        t0,
        t_star: sol.t_event,
        steps: sol.steps,
    })
}

/// Value of the explicit gradient-flow solution with datum `f ≡ r` at a point with `d(x) = dist_value`.
pub fn explicit_flow_value(
    profile: &DomainProfile,
    traj: &GTrajectory,
    t: f64,
    dist_value: f64,
) -> Result<f64> {
    let r = profile.in_radius;
    if !(0.0..=r * (1.0 + 1e-12)).contains(&dist_value) {
        return Err(Error::OutOfRange {
            what: "distance value",
            value: dist_value,
            lo: 0.0,
            hi: r,
        });
    }
    if !(t >= 0.0) {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if t < traj.t_star {
        let g = traj.g(t)?;
        if g == 0.0 {
            return Ok(r);
        }
        return Ok((dist_value / g).min(r));
    }
    let norm_sq = profile.d_norm2_sq;
    Ok((norm_sq + traj.t_star - t).max(0.0) / norm_sq * dist_value)
}

/// Extinction time `t* + ||d||_2²` of the explicit solution.
pub fn extinction_time(profile: &DomainProfile, traj: &GTrajectory) -> f64 {
    traj.t_star + profile.d_norm2_sq
}

/// `t̃(g) = r I_1(g) - I_2(g)/g`.
pub fn variational_time(profile: &DomainProfile, g: f64) -> Result<f64> {
    check_unit("g", g)?;
    if g == 0.0 {
        return Err(Error::OutOfRange {
            what: "g",
            value: g,
            lo: f64::MIN_POSITIVE,
            hi: 1.0,
        });
    }
    Ok(profile.in_radius * profile.i_k(1, g)? - profile.i_k(2, g)? / g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelSet {
    /// `Γ_c(t) = {d = radius}`.
    Contour { radius: f64 },
    /// `Γ_r(t) = {d ≥ threshold}`.
    Plateau { threshold: f64 },
}

/// Location of the level set `{u(t) = c}` of the explicit solution for `t ≤ t*`.
pub fn level_set_radius(traj: &GTrajectory, c: f64, t: f64, r: f64) -> Result<LevelSet> {
    if !(0.0..=r).contains(&c) {
        return Err(Error::OutOfRange {
            what: "level",
            value: c,
            lo: 0.0,
            hi: r,
        });
    }
    let g = traj.g(t)?;
    if c < r {
        Ok(LevelSet::Contour { radius: c * g })
    } else {
        Ok(LevelSet::Plateau { threshold: r * g })
    }
}
