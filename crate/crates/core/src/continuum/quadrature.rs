//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Quadrature {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Quadrature {
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// `∫_a^b f` to `max(abs_tol, rel_tol |I|)` by global bisection of the worst segment.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut segments = vec![(a, b, kronrod(&f, a, b))];
    loop {
        let value: f64 = segments.iter().map(|s| s.2.value).sum();
        let error: f64 = segments.iter().map(|s| s.2.error).sum();
        if !value.is_finite() {
            return Err(Error::Integration(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature { value, error });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("nonempty");
        let (lo, hi, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if segments.len() >= MAX_SEGMENTS || mid <= lo || mid >= hi {
            // cannot refine further; report what we have
            let left = kronrod(&f, lo, mid);
            let right = kronrod(&f, mid, hi);
            segments.push((lo, mid, left));
            segments.push((mid, hi, right));
            let value: f64 = segments.iter().map(|s| s.2.value).sum();
            let error: f64 = segments.iter().map(|s| s.2.error).sum();
            if error <= 1e3 * abs_tol.max(rel_tol * value.abs()) {
                return Ok(Quadrature { value, error });
            }
            return Err(Error::Integration(format!(
                "no convergence on [{a}, {b}]: error estimate {error:e}"
            )));
        }
        segments.push((lo, mid, kronrod(&f, lo, mid)));
        segments.push((mid, hi, kronrod(&f, mid, hi)));
    }
}

/// [`integrate`] over `[a, b]` split at the given interior points.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    splits: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    let mut points = vec![a];
    points.extend(splits.iter().copied().filter(|&s| s > a && s < b));
    points.push(b);
    let pieces = (points.len() - 1) as f64;
    let mut total = Quadrature {
        value: 0.0,
        error: 0.0,
    };
    for w in points.windows(2) {
        let q = integrate(&f, w[0], w[1], abs_tol / pieces, rel_tol)?;
        total.value += q.value;
        total.error += q.error;
    }
    Ok(total)
}
