use distance_eigen::calculus::j_w;
use distance_eigen::distance::{gradient_saturation, graph_distance, Saturation};
use distance_eigen::generators::{grid_graph, path_graph, random_connected, GridBoundary};
use distance_eigen::io::{
    certificate_to_json, fmt_f64, parse_graph_json, parse_mesh_edges, parse_vertex_values,
};
use distance_eigen::spectral::{
    eigen_certificate, extreme_point_check, gradient_flow_with, Certification, ExtremeVerdict,
    FlowOptions, ProxOptions,
};
use distance_eigen::{VertexFunction, WeightedGraph};
use serde_json::{json, Value};

use crate::output::{read, Output};
use crate::{BoundaryKind, CliError, GraphArgs};

struct LoadedGraph {
    graph: WeightedGraph,
    ids: Vec<String>,
}

fn load(args: &GraphArgs, seed: u64) -> Result<LoadedGraph, CliError> {
    let s = &args.source;
    let graph = if let Some(path) = &s.graph {
        parse_graph_json(&read(path)?)?
    } else if let Some(n) = s.path {
        path_graph(n)?
    } else if let Some(wh) = &s.grid {
        let boundary = match args.boundary {
            BoundaryKind::Ring => GridBoundary::Ring,
            BoundaryKind::Corners => GridBoundary::Corners,
        };
        grid_graph(wh[0], wh[1], boundary)?
    } else if let Some(nm) = &s.random {
        random_connected(nm[0], nm[1], seed)?
    } else if let Some(path) = &s.mesh {
        let mesh = parse_mesh_edges(&read(path)?, &args.mesh_boundary)?;
        return Ok(LoadedGraph {
            graph: mesh.graph,
            ids: mesh.ids,
        });
    } else {
        return Err(CliError::Input("no graph source given".into()));
    };
    let ids = (0..graph.vertex_count()).map(|x| x.to_string()).collect();
    Ok(LoadedGraph { graph, ids })
}

fn vertex_input(spec: &str, g: &LoadedGraph) -> Result<VertexFunction, CliError> {
    let graph = &g.graph;
    let n = graph.vertex_count();
    let interior_constant = |c: f64| {
        VertexFunction::new(
            (0..n)
                .map(|x| if graph.is_boundary(x) { 0.0 } else { c })
                .collect(),
        )
    };
    Ok(match spec {
        "const" => interior_constant(1.0),
        "distance" => graph_distance(graph).d,
        s if s.starts_with("const:") => {
            let c = s["const:".len()..]
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("bad constant in {s:?}: {e}")))?;
            interior_constant(c)
        }
        path => parse_vertex_values(&read(std::path::Path::new(path))?, n)?,
    })
}

fn vertex_rows<'a>(
    g: &'a LoadedGraph,
    u: &'a VertexFunction,
) -> impl Iterator<Item = Vec<String>> + 'a {
    (0..g.graph.vertex_count()).map(move |x| {
        vec![
            x.to_string(),
            g.ids[x].clone(),
            fmt_f64(u[x]),
            u8::from(g.graph.is_boundary(x)).to_string(),
        ]
    })
}

pub fn distance(args: &GraphArgs, seed: u64, out: &mut Output) -> Result<Value, CliError> {
    let g = load(args, seed)?;
    let field = graph_distance(&g.graph);
    out.csv(
        "distance.csv",
        &["vertex", "id", "d", "boundary"],
        vertex_rows(&g, &field.d),
    )?;
    let sat = gradient_saturation(&g.graph, &field);
    out.csv(
        "saturation.csv",
        &[
            "a",
            "b",
            "weight",
            "gradient",
            "saturated",
            "on_shortest_path",
        ],
        sat.iter().map(|s| {
            let e = g.graph.edge(s.edge);
            vec![
                e.a.to_string(),
                e.b.to_string(),
                fmt_f64(e.weight),
                fmt_f64(s.gradient),
                u8::from(s.class == Saturation::Saturated).to_string(),
                u8::from(s.on_shortest_path).to_string(),
            ]
        }),
    )?;
    let norm_sq = field.d.inner(&field.d);
    Ok(json!({
        "vertices": g.graph.vertex_count(),
        "edges": g.graph.edge_count(),
        "max_distance": field.d.values().iter().cloned().fold(0.0, f64::max),
        "d_norm2_sq": norm_sq,
        "j_w": j_w(&g.graph, &field.d)?,
        "lambda": if norm_sq > 0.0 { Some(1.0 / norm_sq) } else { None },
        "saturated_edges": sat.iter().filter(|s| s.class == Saturation::Saturated).count(),
    }))
}

fn certification_summary(
    graph: &WeightedGraph,
    u: &VertexFunction,
    tol: f64,
) -> Result<(Value, Option<String>), CliError> {
    match eigen_certificate(graph, u, tol)? {
        Certification::Certified(cert) => {
            let summary = json!({
                "certified": cert.is_valid(tol),
                "lambda": cert.lambda,
                "residual_inf": cert.residual_inf,
                "support_violation": cert.support_violation,
                "parallel_violation": cert.parallel_violation,
                "norm_gap": cert.norm_gap,
            });
            Ok((summary, Some(certificate_to_json(graph, &cert))))
        }
        Certification::Infeasible { lambda, residual } => Ok((
            json!({"certified": false, "lambda": lambda, "infeasibility": residual}),
            None,
        )),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn flow(
    args: &GraphArgs,
    seed: u64,
    f_spec: &str,
    step: Option<f64>,
    tol: f64,
    prox_tol: f64,
    snapshots: &[f64],
    out: &mut Output,
) -> Result<Value, CliError> {
    let g = load(args, seed)?;
    let f = vertex_input(f_spec, &g)?;
    let options = FlowOptions {
        step,
        extinction_tol: tol,
        prox: ProxOptions {
            tol: prox_tol,
            ..ProxOptions::default()
        },
        ..FlowOptions::default()
    };
    let traj = gradient_flow_with(&g.graph, &f, &options)?;
    out.csv(
        "trajectory.csv",
        &["t", "norm2", "J_w", "error_bound"],
        (0..traj.len()).map(|k| {
            vec![
                fmt_f64(traj.times[k]),
                fmt_f64(traj.norms[k]),
                fmt_f64(traj.j_values[k]),
                fmt_f64(traj.error_bounds[k]),
            ]
        }),
    )?;
    if !snapshots.is_empty() {
        let mut rows = Vec::new();
        for &t in snapshots {
            let k = traj.times.partition_point(|&s| s <= t).max(1) - 1;
            for x in 0..g.graph.vertex_count() {
                rows.push(vec![
                    fmt_f64(traj.times[k]),
                    x.to_string(),
                    fmt_f64(traj.states[k][x]),
                ]);
            }
        }
        out.csv("snapshots.csv", &["t", "vertex", "u"], rows)?;
    }

    let field = graph_distance(&g.graph);
    let d_norm = field.d.norm2();
    let mut profile_json = json!({
        "step": traj.step,
        "steps": traj.len() - 1,
        "extinction_time_estimate": traj.extinction_time_estimate,
        "profile": Value::Null,
        "lambda_est": traj.profile_eigenvalue,
    });
    if let Some(profile) = &traj.profile {
        let normalized_d = field.d.scaled(1.0 / d_norm);
        let (cert, _) = certification_summary(&g.graph, profile, 1e-6)?;
        profile_json["profile"] = json!(profile.values());
        profile_json["distance_profile_error_inf"] = json!(profile.max_abs_diff(&normalized_d));
        profile_json["distance_lambda"] = json!(1.0 / (d_norm * d_norm));
        profile_json["certificate"] = cert;
        out.csv(
            "profile.csv",
            &["vertex", "id", "u", "boundary"],
            vertex_rows(&g, profile),
        )?;
    }
    out.json("profile.json", &profile_json)?;
    Ok(profile_json)
}

pub fn certify(
    args: &GraphArgs,
    seed: u64,
    u_spec: &str,
    tol: f64,
    out: &mut Output,
) -> Result<Value, CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let g = load(args, seed)?;
    let u = vertex_input(u_spec, &g)?;
    let (mut summary, cert) = certification_summary(&g.graph, &u, tol)?;
    if let Some(text) = cert {
        out.text("certificate.json", &text)?;
    }
    // extremality is checked for the representative with J_w = 1
    let j = j_w(&g.graph, &u)?;
    let unit = if j > 0.0 && j.is_finite() {
        u.scaled(1.0 / j)
    } else {
        u.clone()
    };
    summary["extreme"] = match extreme_point_check(&g.graph, &unit, tol) {
        Ok(ExtremeVerdict::Extreme) => json!({"extreme": true, "scale": j}),
        Ok(ExtremeVerdict::NotExtreme {
            witness,
            unreachable,
        }) => {
            json!({"extreme": false, "scale": j, "witness": witness, "unreachable": unreachable})
        }
        Err(e) => json!({"error": e.to_string()}),
    };
    Ok(summary)
}
