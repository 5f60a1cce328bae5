//! Dormand–Prince 5(4) for scalar autonomous ODEs, with dense output and a level event.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its quartic continuous extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    rcont: [f64; 5],
}

impl DenseStep {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn y0(&self) -> f64 {
        self.rcont[0]
    }

    pub fn y1(&self) -> f64 {
        self.rcont[0] + self.rcont[1]
    }

    pub fn eval(&self, t: f64) -> f64 {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let r = &self.rcont;
        r[0] + theta * (r[1] + theta1 * (r[2] + theta * (r[3] + theta1 * r[4])))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventSolution {
    pub steps: Vec<DenseStep>,
    /// Time at which the solution first reaches the level.
    pub t_event: f64,
}

/// Integrates `y' = rhs(y)` from `(t0, y0)` until `y` reaches `level` from below.
pub fn integrate_to_level<F: Fn(f64) -> f64>(
    rhs: F,
    t0: f64,
    y0: f64,
    level: f64,
    options: &Dopri5Options,
) -> Result<EventSolution> {
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(y);
    let mut h = options.initial_step;
    let mut steps = Vec::new();
    let mut rejected_last = false;

    while steps.len() < options.max_steps {
        let k2 = rhs(y + h * A21 * k1);
        let k3 = rhs(y + h * (A31 * k1 + A32 * k2));
        let k4 = rhs(y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = rhs(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = rhs(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y1 = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
        let k7 = rhs(y1);
        let err_abs = (h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)).abs();
        let scale = options.atol + options.rtol * y.abs().max(y1.abs());
        let err = err_abs / scale;
        if !err.is_finite() || !y1.is_finite() {
            return Err(Error::Integration(format!("non-finite state at t = {t}")));
        }

        if err <= 1.0 {
            let ydiff = y1 - y;
            let bspl = h * k1 - ydiff;
            let step = DenseStep {
                t0: t,
                h,
                rcont: [
                    y,
                    ydiff,
                    bspl,
                    ydiff - h * k7 - bspl,
                    h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7),
                ],
            };
            steps.push(step);
            if y1 >= level {
                let t_event = locate_level(&step, level);
                return Ok(EventSolution { steps, t_event });
            }
            t += h;
            y = y1;
            k1 = k7;
            let mut factor = (0.9 * err.powf(-0.2)).clamp(0.2, 10.0);
            if rejected_last {
                factor = factor.min(1.0);
            }
            h *= factor;
            rejected_last = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            rejected_last = true;
        }
        if h.abs() < 1e-300 {
            return Err(Error::Integration(format!(
                "step size underflow at t = {t}"
            )));
        }
    }
    Err(Error::Integration(format!(
        "level {level} not reached within {} steps",
        options.max_steps
    )))
}

/// Solves `step.eval(t) = level` inside the step by safeguarded bisection.
fn locate_level(step: &DenseStep, level: f64) -> f64 {
    let (mut lo, mut hi) = (step.t0, step.t1());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if step.eval(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
