//! The six subcommands. Each returns the full output text; the caller decides
//! where it goes.

use log::warn;
use resotunnel::resonance::{sweep_im_pot, ResonanceResult};
use resotunnel::scattering::{scatter_delta, scatter_rect_barrier, ScatteringResult};
use resotunnel::singularity::{
    branch_for_index, cubic_residual, default_rect_scan, locus_v0r, singular_point_delta,
    singular_point_rect_with, LocusValue, PotentialSign,
};
use resotunnel::units::kinematics;
use resotunnel::validation::{oracle_check, Mutation, OracleCheckConfig};
use resotunnel::{DoubleBarrier, SingularPoint, TunnelError};
use serde_json::json;

use crate::csv::{num, Table, LOST_FLAG, POLE_FLAG};
use crate::error::CliError;
use crate::scenario::{Scenario, StructureKind};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn meta(command: &str, sc: &Scenario) -> Vec<(&'static str, String)> {
    let mut echo = sc.clone();
    echo.out = None;
    vec![
        ("tool", format!("resotunnel {VERSION}")),
        ("command", command.to_string()),
        ("scenario", echo.to_json()),
    ]
}

fn pole_row(x: f64, d: Option<resotunnel::Complex64>) -> Vec<String> {
    let (re, im) = d.map_or((f64::NAN, f64::NAN), |d| (d.re, d.im));
    vec![num(x), num(f64::INFINITY), num(f64::INFINITY), num(f64::NEG_INFINITY), num(re), num(im), POLE_FLAG.into()]
}

fn pole_sweep_row(im: f64, energy: f64) -> Vec<String> {
    let inf = num(f64::INFINITY);
    vec![num(im), num(energy), inf.clone(), inf, num(f64::NEG_INFINITY), POLE_FLAG.into()]
}

/// Nudge an energy that sits exactly on a real barrier height.
fn nudge(energy: f64, s: &Scenario) -> f64 {
    let on_edge = s.structure == Some(StructureKind::Rect)
        && s.u0i.unwrap_or(0.0) == 0.0
        && s.u0r == Some(energy);
    if on_edge {
        energy * (1.0 + 1e-9)
    } else {
        energy
    }
}

fn scatter_point<S: DoubleBarrier>(
    structure: &S,
    energy: f64,
    f: impl Fn(&S, f64) -> resotunnel::Result<ScatteringResult>,
    table: &mut Table,
) -> Result<(), CliError> {
    let d = structure.d_of_k(energy)?;
    match f(structure, energy) {
        Ok(r) => table.row(&[
            num(energy),
            num(r.t2),
            num(r.r2),
            num(r.absorption),
            num(d.re),
            num(d.im),
            String::new(),
        ]),
        Err(e) if e.is_divergent() => table.row(&pole_row(energy, Some(d))),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn spectrum(sc: &Scenario) -> Result<String, CliError> {
    let kind = sc.structure()?;
    let grid = sc.grid("emin", sc.emin, "emax", sc.emax)?;
    if grid[0] <= 0.0 {
        return Err(CliError::Usage(format!("emin must be positive, got {}", grid[0])));
    }
    let mut table = Table::new(&meta("spectrum", sc), &["E_eV", "T2", "R2", "A", "ReD", "ImD", "flag"]);
    match kind {
        StructureKind::Rect => {
            let s = sc.rect()?;
            for e in grid {
                scatter_point(&s, nudge(e, sc), scatter_rect_barrier, &mut table)?;
            }
        }
        StructureKind::Delta => {
            let s = sc.delta()?;
            for e in grid {
                scatter_point(&s, e, scatter_delta, &mut table)?;
            }
        }
    }
    Ok(table.finish())
}

fn sweep_rows<S: DoubleBarrier>(
    s: &S,
    grid: &[f64],
    index: usize,
    f: impl Fn(&S, f64) -> resotunnel::Result<ScatteringResult>,
    table: &mut Table,
) -> Result<(), CliError> {
    let results = sweep_im_pot(s, grid, index)?;
    for (&im, res) in grid.iter().zip(results) {
        let row = match res {
            Ok(ResonanceResult { energy, divergent: true, .. }) => pole_sweep_row(im, energy),
            Ok(r) => match f(&s.with_im_pot(im), r.energy) {
                Ok(sr) => vec![num(im), num(r.energy), num(r.t_res_sq), num(sr.r2), num(sr.absorption), String::new()],
                Err(e) if e.is_divergent() => pole_sweep_row(im, r.energy),
                Err(e) => return Err(e.into()),
            },
            Err(e) => {
                warn!("resonance lost at imaginary part {im}: {e}");
                vec![num(im), num(f64::NAN), num(f64::NAN), num(f64::NAN), num(f64::NAN), LOST_FLAG.into()]
            }
        };
        table.row(&row);
    }
    Ok(())
}

pub fn res_sweep(sc: &Scenario) -> Result<String, CliError> {
    let kind = sc.structure()?;
    let grid = sc.grid("imin", sc.imin, "imax", sc.imax)?;
    let index = sc.index.unwrap_or(0);
    let mut table = Table::new(
        &meta("res-sweep", sc),
        &["im_pot", "E0_eV", "T2_res", "R2_res", "A_res", "flag"],
    );
    match kind {
        StructureKind::Rect => sweep_rows(&sc.rect()?, &grid, index, scatter_rect_barrier, &mut table)?,
        StructureKind::Delta => sweep_rows(&sc.delta()?, &grid, index, scatter_delta, &mut table)?,
    }
    Ok(table.finish())
}

pub fn singular_point(sc: &Scenario) -> Result<(StructureKind, SingularPoint), CliError> {
    let kind = sc.structure()?;
    let m = sc.mass_model()?;
    let p = match kind {
        StructureKind::Rect => {
            let b = sc.positive("b", sc.b)?;
            let w = sc.positive("w", sc.w)?;
            let u0r = sc.positive("u0r", sc.u0r)?;
            let mut scan = default_rect_scan(u0r);
            if let Some(n) = sc.points {
                scan.points = n.max(2);
            }
            singular_point_rect_with(b, w, u0r, m, sc.index.unwrap_or(0), &scan)?
        }
        StructureKind::Delta => {
            let w = sc.positive("w", sc.w)?;
            let v0r = sc.finite("v0r", sc.v0r)?;
            let branch = branch_for_index(sc.branch.unwrap_or(0), v0r, w, m);
            singular_point_delta(v0r, w, m, Some(branch))?
        }
    };
    Ok((kind, p))
}

pub fn singularity(sc: &Scenario) -> Result<String, CliError> {
    let (kind, p) = singular_point(sc)?;
    let value = json!({
        "kind": kind,
        "im_pot": p.im_pot,
        "E0_eV": p.energy,
        "bracket_residual": p.bracket_residual,
        "cubic_residual": p.cubic_residual,
        "branch": p.branch.map(|b| json!({"n": b.n, "kind": b.kind})),
        "constants": sc.constants.unwrap_or_default(),
    });
    Ok(serde_json::to_string_pretty(&value).expect("json") + "\n")
}

pub fn error_json(e: &CliError) -> String {
    let value = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    serde_json::to_string_pretty(&value).expect("json") + "\n"
}

pub fn locus(sc: &Scenario) -> Result<String, CliError> {
    let w = sc.positive("w", sc.w)?;
    let m = sc.mass_model()?;
    let sign: PotentialSign = match (sc.sign, sc.v0r) {
        (Some(s), _) => s.into(),
        (None, Some(v0r)) => PotentialSign::of(v0r),
        (None, None) => PotentialSign::Barrier,
    };
    let grid = sc.grid("imin", sc.imin, "imax", sc.imax)?;
    if grid[0] <= 0.0 {
        return Err(CliError::Usage(format!("imin must be positive for the locus, got {}", grid[0])));
    }
    let mut table = Table::new(
        &meta("locus", sc),
        &["V0I", "theta_rad", "branch_n", "branch_kind", "V0R", "flag"],
    );
    for v0i in grid {
        let p = locus_v0r(v0i, w, m, sign)?;
        if sc.branch.is_some_and(|n| n != p.branch.n) {
            continue;
        }
        let kind = match p.branch.kind {
            resotunnel::BranchKind::Tan => "tan",
            resotunnel::BranchKind::Cot => "cot",
        };
        let (value, flag) = match p.value {
            LocusValue::Finite(v) => (num(v), String::new()),
            LocusValue::Pole => (num(f64::INFINITY), POLE_FLAG.to_string()),
        };
        table.row(&[num(v0i), num(p.theta), p.branch.n.to_string(), kind.into(), value, flag]);
    }
    Ok(table.finish())
}

pub fn cubic(sc: &Scenario) -> Result<String, CliError> {
    let v0r = sc.finite("v0r", sc.v0r)?;
    let energy = sc.positive("energy", sc.energy)?;
    let a = kinematics(energy, sc.mass_model()?)?.a;
    let grid = sc.grid("imin", sc.imin, "imax", sc.imax)?;
    let values: Vec<f64> = grid.iter().map(|&v| cubic_residual(v, a, v0r)).collect();
    let crossings: Vec<String> = grid
        .windows(2)
        .zip(values.windows(2))
        .filter(|(_, r)| r[0] == 0.0 || (r[0] < 0.0) != (r[1] < 0.0))
        .map(|(g, r)| num(if r[0] == 0.0 { g[0] } else { g[0] - r[0] * (g[1] - g[0]) / (r[1] - r[0]) }))
        .collect();
    let mut m = meta("cubic", sc);
    m.push(("forced_root", num(0.5 / a.sqrt())));
    m.push(("zero_crossings", crossings.join(" ")));
    let mut table = Table::new(&m, &["V0I", "residual"]);
    for (v, r) in grid.iter().zip(&values) {
        table.row(&[num(*v), num(*r)]);
    }
    Ok(table.finish())
}

pub fn oracle_check_report(sc: &Scenario, mutation: Mutation) -> Result<(String, bool), CliError> {
    let defaults = OracleCheckConfig::default();
    let cfg = OracleCheckConfig {
        draws: sc.draws.unwrap_or(defaults.draws),
        seed: sc.seed.unwrap_or(defaults.seed),
        mass: if sc.mass.is_some() || sc.constants.is_some() { sc.mass_model()? } else { defaults.mass },
        mutation,
    };
    if cfg.draws == 0 {
        return Err(CliError::Usage("draws must be at least 1".into()));
    }
    let report = oracle_check(&cfg).map_err(|e| match e {
        TunnelError::Domain(msg) => CliError::Usage(msg),
        other => CliError::Solver(other),
    })?;
    Ok((serde_json::to_string_pretty(&report).expect("json") + "\n", report.pass))
}
