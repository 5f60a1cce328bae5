use std::path::Path;

use distance_eigen::io::{fmt_f64, parse_exact, parse_pl_csv, pl_to_csv};
use distance_eigen::oned::{
    basis_sequence, distance_to_set, eigen_check_1d, extreme_check_1d, rayleigh_squared, svc_set,
    BasisKind, EigenCheck1d, ExtremeVerdict1d, PiecewiseLinearFn,
};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::output::{read, Output};
use crate::CliError;

fn exact(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn float(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn load(path: &Path) -> Result<PiecewiseLinearFn<BigRational>, CliError> {
    Ok(parse_pl_csv(&read(path)?)?)
}

fn tolerance(tol: &str) -> Result<BigRational, CliError> {
    let tol = parse_exact(tol)?;
    if tol < BigRational::from_integer(0.into()) {
        return Err(CliError::Input(format!(
            "tolerance must be non-negative, got {}",
            exact(&tol)
        )));
    }
    Ok(tol)
}

pub fn basis(count: usize, out: &mut Output) -> Result<Value, CliError> {
    if count == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let zero = BigRational::from_integer(0.into());
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for (k, (kind, n, f)) in basis_sequence::<BigRational>(count)?
        .into_iter()
        .enumerate()
    {
        let label = match kind {
            BasisKind::Odd => format!("u{n}"),
            BasisKind::Even => format!("v{n}"),
        };
        out.text(&format!("basis_{:02}_{label}.csv", k + 1), &pl_to_csv(&f))?;
        let r2 = rayleigh_squared(&f)?;
        let check = eigen_check_1d(&f, &zero)?;
        let oscillations = k + 1;
        let expected = (1.5f64).sqrt() * oscillations as f64;
        rows.push(vec![
            (k + 1).to_string(),
            label.clone(),
            exact(&r2),
            fmt_f64(float(&r2).sqrt()),
            fmt_f64(expected),
            u8::from(f.is_nonnegative()).to_string(),
            u8::from(check.is_certified()).to_string(),
            exact(check.lambda()),
        ]);
        table.push(json!({
            "function": label,
            "rayleigh_squared": exact(&r2),
            "rayleigh": float(&r2).sqrt(),
            "nonnegative": f.is_nonnegative(),
            "certified": check.is_certified(),
            "lambda": exact(check.lambda()),
        }));
    }
    out.csv(
        "rayleigh.csv",
        &[
            "index",
            "function",
            "rayleigh_squared_exact",
            "rayleigh",
            "expected",
            "nonnegative",
            "certified",
            "lambda_exact",
        ],
        rows,
    )?;
    Ok(json!({ "basis": table }))
}

pub fn extreme(file: &Path, tol: &str, out: &mut Output) -> Result<Value, CliError> {
    let f = load(file)?;
    let tol = tolerance(tol)?;
    Ok(match extreme_check_1d(&f, &tol)? {
        ExtremeVerdict1d::Extreme => json!({"verdict": "extreme"}),
        ExtremeVerdict1d::NotExtreme(d) => {
            out.text("v_plus.csv", &pl_to_csv(&d.v_plus))?;
            out.text("v_minus.csv", &pl_to_csv(&d.v_minus))?;
            json!({
                "verdict": "not_extreme",
                "verified": d.verified,
                "epsilon": exact(&d.epsilon),
                "alpha": exact(&d.alpha),
                "slack_measure": exact(&d.slack_measure),
            })
        }
    })
}

pub fn eigen(file: &Path, tol: &str, out: &mut Output) -> Result<Value, CliError> {
    let f = load(file)?;
    let tol = tolerance(tol)?;
    Ok(match eigen_check_1d(&f, &tol)? {
        EigenCheck1d::Certified(cert) => {
            out.csv(
                "calibration.csv",
                &["breakpoint", "q", "breakpoint_exact", "q_exact"],
                f.breakpoints()
                    .iter()
                    .zip(&cert.q_at_breakpoints)
                    .map(|(x, q)| vec![fmt_f64(float(x)), fmt_f64(float(q)), exact(x), exact(q)]),
            )?;
            json!({
                "verdict": "eigenfunction",
                "lambda": exact(&cert.lambda),
                "c": exact(&cert.c),
                "q_l1_norm": exact(&cert.l1_norm),
            })
        }
        EigenCheck1d::Infeasible { lambda, lo, hi } => json!({
            "verdict": "not_eigenfunction",
            "lambda": exact(&lambda),
            "c_lower": lo.as_ref().map(exact),
            "c_upper": hi.as_ref().map(exact),
        }),
    })
}

pub fn svc(level: usize, out: &mut Output) -> Result<Value, CliError> {
    let set = svc_set::<BigRational>(level);
    out.csv(
        "svc_intervals.csv",
        &["lo", "hi", "lo_exact", "hi_exact"],
        set.intervals()
            .iter()
            .map(|(a, b)| vec![fmt_f64(float(a)), fmt_f64(float(b)), exact(a), exact(b)]),
    )?;
    let d = distance_to_set(&set)?;
    out.text("svc_distance.csv", &pl_to_csv(&d))?;
    let zero = BigRational::from_integer(0.into());
    let verdict = extreme_check_1d(&d, &zero)?;
    let mut summary = json!({
        "level": level,
        "intervals": set.intervals().len(),
        "measure": exact(&set.measure()),
        "extreme": verdict.is_extreme(),
    });
    if let Some(dec) = verdict.decomposition() {
        out.text("svc_v_plus.csv", &pl_to_csv(&dec.v_plus))?;
        out.text("svc_v_minus.csv", &pl_to_csv(&dec.v_minus))?;
        summary["decomposition_verified"] = json!(dec.verified);
        summary["epsilon"] = json!(exact(&dec.epsilon));
        summary["alpha"] = json!(exact(&dec.alpha));
    }
    Ok(summary)
}
