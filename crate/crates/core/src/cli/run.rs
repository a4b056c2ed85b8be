use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use log::info;
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::config::{RunConfig, StateSource, Task};
use super::CliError;
use crate::algebra::OperatorSum;
use crate::cobs_state::{connected_expectation, enumerate_cobs, pure_state, two_spin_state, Grade2Pair, StateSpec};
use crate::error::{Error, Result};
use crate::models::{ModelSpec, DEFAULT_SITE_CAP};
use crate::oracle::{compare_greens, exact_diagonalize, lehmann_greens};
use crate::perturbation::{exact_response, hierarchy_response, naive_response_flagged, response_report};
use crate::sdeom::{
    assemble, eigenstate_residual, max_residual, moment_series, pivotal_report, solve_frequency,
};

/// Grid points closer than this to an `L` eigenvalue are moved this far away from it.
pub const SNAP_DISTANCE: f64 = 1e-6;

pub const MANIFEST: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    /// Written file names relative to the output directory, manifest last.
    pub files: Vec<String>,
    pub checks_passed: bool,
}

struct Context {
    h: OperatorSum,
    state: StateSpec,
}

fn num(x: f64) -> String {
    // Adding 0.0 maps -0.0 to 0.0.
    format!("{:.16e}", x + 0.0)
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let err = |e: csv::Error| Error::Validation(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Validation(format!("csv: {e}")))
}

fn build_state(cfg: &RunConfig, h: &OperatorSum) -> Result<StateSpec> {
    match &cfg.state {
        StateSource::Theta(th) => Ok(two_spin_state(*th)),
        StateSource::Eigenstate(k) => {
            let spec = exact_diagonalize(h)?;
            pure_state(&spec.eigenvector(*k))
        }
        StateSource::Expectations(t) => StateSpec::from_expectations(cfg.n_sites, t.clone()),
    }
}

/// Real grid with collisions against `poles` moved [`SNAP_DISTANCE`] away.
fn snapped_grid(cfg: &RunConfig, poles: &[f64]) -> Vec<Complex64> {
    cfg.grid
        .points()
        .into_iter()
        .map(|x| {
            if cfg.grid.eta > 0.0 {
                return Complex64::new(x, cfg.grid.eta);
            }
            let mut y = x;
            for &p in poles {
                if (y - p).abs() < SNAP_DISTANCE {
                    let moved = if y >= p { p + SNAP_DISTANCE } else { p - SNAP_DISTANCE };
                    info!("grid point {y:e} collides with pole {p:e}; moved to {moved:e}");
                    y = moved;
                }
            }
            Complex64::new(y, 0.0)
        })
        .collect()
}

fn task_greens(cfg: &RunConfig, ctx: &Context) -> Result<Vec<(String, Vec<u8>)>> {
    let ops = cfg.operators.as_ref().expect("validated");
    let mut pole_rows = Vec::new();
    let mut sample_rows = Vec::new();
    for &kind in &ops.kinds {
        let sys = assemble(&ops.initial, &ops.final_, &ctx.h, &ctx.state, kind)?;
        let grid = snapped_grid(cfg, sys.l_eigenvalues());
        let sol = solve_frequency(&sys, &grid)?;
        info!(
            "{kind}: subspace dimension {}, {} poles, pole-sum vs linear-solve gap {:e}",
            sys.dim(),
            sol.greens.poles.len(),
            sol.route_gap
        );
        for p in &sol.greens.poles {
            pole_rows.push(vec![
                kind.name().to_string(),
                num(p.position),
                num(p.residue.re),
                num(p.residue.im),
                p.class.name().to_string(),
            ]);
        }
        for (w, g) in sol.samples {
            sample_rows.push(vec![kind.name().to_string(), num(w.re), num(w.im), num(g.re), num(g.im)]);
        }
    }
    Ok(vec![
        (
            "poles.csv".into(),
            csv_bytes(&["kind", "position", "residue_re", "residue_im", "class"], pole_rows)?,
        ),
        (
            "greens.csv".into(),
            csv_bytes(&["kind", "omega_re", "omega_im", "g_re", "g_im"], sample_rows)?,
        ),
    ])
}

fn task_cumulants(cfg: &RunConfig, ctx: &Context) -> Result<Vec<(String, Vec<u8>)>> {
    let mut rows = Vec::new();
    let basis = enumerate_cobs(cfg.n_sites, cfg.max_grade)?;
    for w in basis.words().filter(|w| !w.is_identity()) {
        let op = OperatorSum::from_word(*w, Complex64::new(1.0, 0.0));
        rows.push(vec![
            w.to_string(),
            num(ctx.state.expect_word(w)?),
            num(connected_expectation(&ctx.state, &op)?.re),
        ]);
    }
    if cfg.n_sites == 2 && cfg.max_grade == 2 {
        let pair = Grade2Pair::new(2, 0, 1)?;
        for (name, op) in pair.labelled() {
            rows.push(vec![
                name,
                num(ctx.state.expect(op)?.re),
                num(connected_expectation(&ctx.state, op)?.re),
            ]);
        }
    }
    Ok(vec![(
        "cumulants.csv".into(),
        csv_bytes(&["name", "expectation", "cumulant"], rows)?,
    )])
}

fn task_pivotal(cfg: &RunConfig, ctx: &Context) -> Result<Vec<(String, Vec<u8>)>> {
    let ops = cfg.operators.as_ref().expect("validated");
    let mut s = String::new();
    let _ = writeln!(s, "initial_operator = {}", ops.initial);
    let _ = writeln!(s, "final_operator = {}", ops.final_);
    for &kind in &ops.kinds {
        let sys = assemble(&ops.initial, &ops.final_, &ctx.h, &ctx.state, kind)?;
        let _ = writeln!(s);
        s.push_str(&pivotal_report(&sys));
    }
    let basis = enumerate_cobs(cfg.n_sites, cfg.max_grade)?;
    let res = eigenstate_residual(&ctx.state, &ctx.h, &basis)?;
    let _ = writeln!(s);
    let _ = writeln!(s, "[eigenstate residual <[u, H]>, grade <= {}]", cfg.max_grade);
    let _ = writeln!(s, "max_residual = {:.16e}", max_residual(&res));
    for (w, r) in res.iter().filter(|(_, r)| r.norm() > 1e-12) {
        let _ = writeln!(s, "{w} {:.16e}{:+.16e}i", r.re, r.im);
    }
    Ok(vec![("pivotal.txt".into(), s.into_bytes())])
}

fn task_perturb(cfg: &RunConfig, ctx: &Context) -> Result<Vec<(String, Vec<u8>)>> {
    let p = cfg.perturb.expect("validated");
    let (jz, hz) = match cfg.model {
        ModelSpec::QsmBond { jz, hz, .. } => (jz, hz),
        _ => unreachable!("validated"),
    };
    let rows = vec![
        naive_response_flagged(p.hx, hz, jz, &ctx.state)?,
        hierarchy_response(p.hx, jz, &ctx.state)?,
        exact_response(p.hx, hz, jz, p.probe)?,
    ];
    let report = response_report(rows)?;
    Ok(vec![
        ("perturb.csv".into(), report.to_csv()?.into_bytes()),
        ("perturb.txt".into(), report.to_text().into_bytes()),
    ])
}

fn task_compare(cfg: &RunConfig, ctx: &Context, passed: &mut bool) -> Result<Vec<(String, Vec<u8>)>> {
    let ops = cfg.operators.as_ref().expect("validated");
    let psi = ctx
        .state
        .psi()
        .ok_or_else(|| Error::Validation("oracle comparison needs a wavefunction".into()))?;
    let spec = exact_diagonalize(&ctx.h)?;
    let mut s = String::new();
    for &kind in &ops.kinds {
        let a = assemble(&ops.initial, &ops.final_, &ctx.h, &ctx.state, kind)?.greens();
        let b = lehmann_greens(&spec, psi, &ops.initial, &ops.final_, kind)?;
        let all: Vec<Complex64> = cfg
            .grid
            .points()
            .into_iter()
            .map(|x| Complex64::new(x, cfg.grid.eta))
            .collect();
        let grid: Vec<Complex64> = all
            .iter()
            .copied()
            .filter(|w| a.nearest_pole_distance(*w).min(b.nearest_pole_distance(*w)) >= cfg.compare.margin)
            .collect();
        if grid.len() < 2 {
            return Err(Error::Validation(format!(
                "only {} grid point(s) lie outside the pole margin {:e}",
                grid.len(),
                cfg.compare.margin
            )));
        }
        info!("{kind}: {} of {} grid points outside the pole margin", grid.len(), all.len());
        let rep = compare_greens(&a, &b, &grid, cfg.compare.tolerance, cfg.compare.margin)?;
        *passed &= rep.pass;
        if !s.is_empty() {
            let _ = writeln!(s);
        }
        let _ = writeln!(s, "[{kind}] sdeom (a) vs lehmann (b)");
        s.push_str(&rep.to_text());
    }
    Ok(vec![("compare.txt".into(), s.into_bytes())])
}

fn task_moments(cfg: &RunConfig, ctx: &Context) -> Result<Vec<(String, Vec<u8>)>> {
    let m = cfg.moments.as_ref().expect("validated");
    let vals = moment_series(&m.observable, &ctx.h, &ctx.state, m.order)?;
    let rows = vals
        .iter()
        .enumerate()
        .map(|(n, v)| vec![n.to_string(), num(v.re), num(v.im)])
        .collect();
    Ok(vec![("moments.csv".into(), csv_bytes(&["n", "moment_re", "moment_im"], rows)?)])
}

fn manifest(cfg: &RunConfig, files: &[(String, Vec<u8>)], passed: bool) -> Vec<u8> {
    let mut s = String::new();
    let _ = writeln!(s, "tool = adt {}", env!("CARGO_PKG_VERSION"));
    let name = cfg.path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let _ = writeln!(s, "config = {name}");
    let _ = writeln!(s, "config_sha256 = {}", hex::encode(Sha256::digest(cfg.source.as_bytes())));
    let _ = writeln!(s, "seed = {}", cfg.seed);
    let _ = writeln!(s, "model = {}", cfg.model.kind());
    let _ = writeln!(s, "n_sites = {}", cfg.n_sites);
    let tasks: Vec<&str> = cfg.tasks.iter().map(|t| t.name()).collect();
    let _ = writeln!(s, "tasks = {}", tasks.join(", "));
    let _ = writeln!(s, "checks_passed = {passed}");
    let _ = writeln!(s);
    let _ = writeln!(s, "[outputs]");
    for (f, bytes) in files {
        let _ = writeln!(s, "{}  {f}", hex::encode(Sha256::digest(bytes)));
    }
    s.into_bytes()
}

fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> std::result::Result<(), CliError> {
    let existed = dir.exists();
    let io = |p: &Path, e: std::io::Error| CliError::Io {
        path: p.to_path_buf(),
        message: e.to_string(),
    };
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let p = dir.join(name);
        if let Err(e) = fs::write(&p, bytes) {
            for w in &written {
                let _ = fs::remove_file(w);
            }
            if !existed {
                let _ = fs::remove_dir(dir);
            }
            return Err(io(&p, e));
        }
        written.push(p);
    }
    Ok(())
}

/// Runs every task, then writes all outputs at once; nothing is written if a task fails.
pub fn execute(cfg: &RunConfig) -> std::result::Result<RunSummary, CliError> {
    let ctx_err = |task: &'static str| move |source: Error| CliError::Task { task, source };
    let model = cfg.model.build(DEFAULT_SITE_CAP).map_err(ctx_err("model"))?;
    let state = build_state(cfg, &model.hamiltonian).map_err(ctx_err("state"))?;
    let ctx = Context {
        h: model.hamiltonian,
        state,
    };
    let mut passed = true;
    let mut files = Vec::new();
    for &task in &cfg.tasks {
        info!("running task {}", task.name());
        let out = match task {
            Task::Greens => task_greens(cfg, &ctx),
            Task::Cumulants => task_cumulants(cfg, &ctx),
            Task::Pivotal => task_pivotal(cfg, &ctx),
            Task::Perturb => task_perturb(cfg, &ctx),
            Task::OracleCompare => task_compare(cfg, &ctx, &mut passed),
            Task::Moments => task_moments(cfg, &ctx),
        }
        .map_err(ctx_err(task.name()))?;
        files.extend(out);
    }
    let m = manifest(cfg, &files, passed);
    files.push((MANIFEST.to_string(), m));
    write_all(&cfg.out, &files)?;
    Ok(RunSummary {
        files: files.into_iter().map(|(n, _)| n).collect(),
        checks_passed: passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config_str;

    #[test]
    fn snapping_moves_colliding_points() {
        let cfg = parse_config_str(
            "tasks = [\"cumulants\"]\n[model]\nkind = \"qsm-bond\"\njz = 1.0\n[state]\ntheta = 0.5\n[grid]\nmin = -1.0\nmax = 1.0\ncount = 5\n",
            Path::new("x.toml"),
        )
        .unwrap();
        let g = snapped_grid(&cfg, &[0.5, -0.5]);
        assert_eq!(g[3].re, 0.5 + SNAP_DISTANCE);
        assert_eq!(g[1].re, -0.5 + SNAP_DISTANCE);
        assert_eq!(g[2].re, 0.0);
    }
}
