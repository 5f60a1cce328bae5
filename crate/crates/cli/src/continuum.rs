use std::f64::consts::PI;

use distance_eigen::continuum::{
    explicit_flow_value, extinction_time, level_set_radius, perimeter_bound_check, solve_g,
    sphere_calibration, variational_time, DomainProfile, LevelSet, ProfileShape,
};
use distance_eigen::io::{fmt_f64, parse_profile_csv};
use distance_eigen::Error;
use serde_json::{json, Value};

use crate::output::{read, Output};
use crate::{CliError, ContinuumArgs, Demo, ProfileKind};

fn build_profile(args: &ContinuumArgs) -> Result<DomainProfile, CliError> {
    Ok(match args.profile {
        ProfileKind::Interval => DomainProfile::interval(args.a, args.b)?,
        ProfileKind::Disk => DomainProfile::disk(args.radius)?,
        ProfileKind::Square => DomainProfile::square(args.side)?,
        ProfileKind::Lshape => DomainProfile::l_shape(args.side, args.delta)?,
        ProfileKind::Csv => {
            let path = args
                .csv
                .as_ref()
                .ok_or_else(|| CliError::Input("--profile csv requires --csv <file>".into()))?;
            let (tau, perimeter) = parse_profile_csv(&read(path)?)?;
            let bound = match (args.r_tilde, args.tau_tilde) {
                (Some(r), Some(t)) => Some((r, t)),
                (None, None) => None,
                _ => {
                    return Err(CliError::Input(
                        "--r-tilde and --tau-tilde must be given together".into(),
                    ))
                }
            };
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            DomainProfile::tabulated(&name, args.dimension, tau, perimeter, bound)?
        }
    })
}

fn grid(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let count = count.max(2);
    (0..count).map(move |i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
}

/// Closed-form comparison for the interval (`g = sqrt(3t/r³)`) and the disk
/// (`2g² - g³ = 6t/(πR⁴)`): column name, reference value, error.
fn reference(profile: &DomainProfile, t: f64, g: f64) -> Option<(&'static str, f64, f64)> {
    match profile.shape {
        ProfileShape::Interval { .. } => {
            let g_ref = (3.0 * t / profile.in_radius.powi(3)).sqrt();
            Some(("g_closed_form", g_ref, (g - g_ref).abs()))
        }
        ProfileShape::Disk { radius } => {
            let rhs = 6.0 * t / (PI * radius.powi(4));
            Some(("rhs_6t_over_pi", rhs, (2.0 * g * g - g.powi(3) - rhs).abs()))
        }
        _ => None,
    }
}

/// `t*` in closed form where known.
fn reference_t_star(profile: &DomainProfile) -> Option<f64> {
    match profile.shape {
        ProfileShape::Interval { .. } => Some(profile.in_radius.powi(3) / 3.0),
        ProfileShape::Disk { radius } => Some(PI * radius.powi(4) / 6.0),
        _ => None,
    }
}

pub fn run(args: &ContinuumArgs, out: &mut Output) -> Result<Value, CliError> {
    if !(args.tol > 0.0) {
        return Err(Error::InvalidTolerance(args.tol).into());
    }
    if args.demo == Demo::Calibration {
        return calibration(args, out);
    }
    let profile = build_profile(args)?;
    let mut summary = json!({
        "profile": profile.name,
        "dimension": profile.dimension,
        "in_radius": profile.in_radius,
        "d_norm2_sq": profile.d_norm2_sq,
    });
    match args.demo {
        Demo::G => {
            let traj = solve_g(&profile, args.tol)?;
            let mut max_error: Option<f64> = None;
            let mut ref_name = None;
            let mut rows = Vec::new();
            for t in grid(0.0, traj.t_star, args.samples) {
                let g = traj.g(t)?;
                let mut row = vec![fmt_f64(t), fmt_f64(g)];
                if let Some((name, value, err)) = reference(&profile, t, g) {
                    ref_name = Some(name);
                    max_error = Some(max_error.unwrap_or(0.0).max(err));
                    row.push(fmt_f64(value));
                    row.push(fmt_f64(err));
                }
                rows.push(row);
            }
            let header: Vec<&str> = match ref_name {
                Some(name) => vec!["t", "g", name, "error"],
                None => vec!["t", "g"],
            };
            out.csv("g.csv", &header, rows)?;
            summary["c3"] = json!(traj.c3);
            summary["t_star"] = json!(traj.t_star);
            summary["t_star_closed_form"] = json!(reference_t_star(&profile));
            summary["extinction_time"] = json!(extinction_time(&profile, &traj));
            summary["ode_steps"] = json!(traj.step_count());
            summary["max_closed_form_error"] = json!(max_error);
        }
        Demo::Flow => {
            let traj = solve_g(&profile, args.tol)?;
            let t_end = extinction_time(&profile, &traj);
            let r = profile.in_radius;
            let mut rows = Vec::new();
            for t in grid(0.0, t_end, 11) {
                match profile.shape {
                    ProfileShape::Interval { a, b } => {
                        for x in grid(a, b, args.samples) {
                            let d = (x - a).min(b - x).clamp(0.0, r);
                            let u = explicit_flow_value(&profile, &traj, t, d)?;
                            rows.push(vec![fmt_f64(t), fmt_f64(x), fmt_f64(d), fmt_f64(u)]);
                        }
                    }
                    _ => {
                        for d in grid(0.0, r, args.samples) {
                            let u = explicit_flow_value(&profile, &traj, t, d)?;
                            rows.push(vec![fmt_f64(t), fmt_f64(d), fmt_f64(u)]);
                        }
                    }
                }
            }
            let header: &[&str] = match profile.shape {
                ProfileShape::Interval { .. } => &["t", "x", "d", "u"],
                _ => &["t", "d", "u"],
            };
            out.csv("flow.csv", header, rows)?;
            summary["t_star"] = json!(traj.t_star);
            summary["extinction_time"] = json!(t_end);
        }
        Demo::Vartime => {
            let traj = solve_g(&profile, args.tol)?;
            let mut worst = 0.0f64;
            let mut rows = Vec::new();
            for i in 1..=args.samples.max(1) {
                let t = traj.t_star * i as f64 / args.samples.max(1) as f64;
                let g = traj.g(t)?;
                let tv = variational_time(&profile, g)?;
                worst = worst.max((tv - t).abs());
                rows.push(vec![
                    fmt_f64(t),
                    fmt_f64(g),
                    fmt_f64(tv),
                    fmt_f64((tv - t).abs()),
                ]);
            }
            out.csv("vartime.csv", &["t", "g", "t_variational", "error"], rows)?;
            summary["t_star"] = json!(traj.t_star);
            summary["max_error"] = json!(worst);
        }
        Demo::Levelsets => {
            let traj = solve_g(&profile, args.tol)?;
            let r = profile.in_radius;
            let mut rows = Vec::new();
            for t in grid(0.0, traj.t_star, args.samples) {
                for c in [0.25 * r, 0.5 * r, 0.75 * r, r] {
                    let (kind, value) = match level_set_radius(&traj, c, t, r)? {
                        LevelSet::Contour { radius } => ("contour", radius),
                        LevelSet::Plateau { threshold } => ("plateau", threshold),
                    };
                    rows.push(vec![
                        fmt_f64(t),
                        fmt_f64(c),
                        kind.to_string(),
                        fmt_f64(value),
                    ]);
                }
            }
            out.csv("levelsets.csv", &["t", "c", "kind", "d_value"], rows)?;
            summary["t_star"] = json!(traj.t_star);
        }
        Demo::Bound => {
            let (r_tilde, tau_tilde) = profile.bound_params.ok_or(Error::MissingBoundParams)?;
            let check = perimeter_bound_check(&profile, r_tilde, tau_tilde, args.samples)?;
            let p0 = profile.perimeter(0.0);
            let n = profile.dimension as i32;
            out.csv(
                "bound.csv",
                &["tau", "perimeter", "bound", "margin"],
                grid(0.0, tau_tilde, args.samples).map(|tau| {
                    let p = profile.perimeter(tau);
                    let b = p0 * (1.0 - tau / r_tilde).powi(n - 1);
                    vec![fmt_f64(tau), fmt_f64(p), fmt_f64(b), fmt_f64(p - b)]
                }),
            )?;
            summary["r_tilde"] = json!(r_tilde);
            summary["tau_tilde"] = json!(tau_tilde);
            summary["verdict"] = json!(if check.passed { "PASS" } else { "FAIL" });
            summary["worst_margin"] = json!(check.worst_margin);
            summary["worst_tau"] = json!(check.worst_tau);
        }
        Demo::Calibration => unreachable!("handled above"),
    }
    Ok(summary)
}

fn calibration(args: &ContinuumArgs, out: &mut Output) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for n in 1..=args.max_dim.max(1) {
        let cal = sphere_calibration(n)?;
        let expected = (n as f64 + 1.0) / (2.0 * n as f64);
        rows.push(vec![
            n.to_string(),
            fmt_f64(cal.d_norm2_sq),
            fmt_f64(cal.lambda),
            fmt_f64(cal.residual),
            fmt_f64(cal.norm_gap),
            fmt_f64(cal.maximizer),
            fmt_f64(expected),
        ]);
        entries.push(json!({
            "n": n,
            "lambda": cal.lambda,
            "residual": cal.residual,
            "norm_gap": cal.norm_gap,
            "maximizer": cal.maximizer,
        }));
    }
    out.csv(
        "calibration.csv",
        &[
            "n",
            "d_norm2_sq",
            "lambda",
            "residual",
            "norm_gap",
            "maximizer",
            "expected_maximizer",
        ],
        rows,
    )?;
    Ok(json!({ "balls": entries }))
}
