//! End-to-end acceptance run. Every criterion prints one PASS/FAIL line; the
//! test fails if any criterion does.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resotunnel::resonance::{find_resonances_default, sweep_im_pot};
use resotunnel::scattering::{scatter_delta, scatter_rect_barrier, ScatteringResult};
use resotunnel::units::{kinematics, BarrierKinematics};
use resotunnel::validation::{oracle_check, OracleCheckConfig};
use resotunnel::{
    cubic_residual, locus_v0r, singular_point_delta, BranchKind, Complex64, ConstantSet,
    DeltaDoubleBarrier, DoubleBarrier, EffectiveMass, LocusBranch, PotentialSign, RectDoubleBarrier,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const I: Complex64 = Complex64::new(0.0, 1.0);

fn rounded() -> EffectiveMass {
    EffectiveMass::with_constants(0.067, ConstantSet::Rounded).unwrap()
}

/// Written straight to the process stderr so the lines survive output
/// capture and land in the test log.
fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    writeln!(err, "{line}").unwrap();
}

fn timed_singularity(args: &[&str]) -> Result<(serde_json::Value, Duration), String> {
    let start = Instant::now();
    let out = run(args);
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok((json(&out), elapsed))
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<String, String> {
    let line = format!("{name} = {got:.6e} (target {want} ± {tol})");
    if (got - want).abs() <= tol { Ok(line) } else { Err(line) }
}

fn singularity_criterion(args: &[&str], im: (f64, f64), e0: Option<(f64, f64)>, limit: Duration, codata: &[&str]) -> Outcome {
    let (v, t) = timed_singularity(args)?;
    let mut parts = vec![within("im_pot", v["im_pot"].as_f64().unwrap(), im.0, im.1)];
    if let Some((e, tol)) = e0 {
        parts.push(within("E0", v["E0_eV"].as_f64().unwrap(), e, tol));
    }
    parts.push(if t < limit {
        Ok(format!("runtime {t:.2?}"))
    } else {
        Err(format!("runtime {t:.2?} exceeds {limit:?}"))
    });
    if let Ok((c, _)) = timed_singularity(codata) {
        report(&format!(
            "  info: default CODATA constants give im_pot = {:.6e}, E0 = {:.6e}",
            c["im_pot"].as_f64().unwrap(),
            c["E0_eV"].as_f64().unwrap()
        ));
    }
    let ok = parts.iter().all(Result::is_ok);
    let text = parts.into_iter().map(|p| p.unwrap_or_else(|e| e)).collect::<Vec<_>>().join("; ");
    if ok { Ok(text) } else { Err(text) }
}

fn criterion_1() -> Outcome {
    let base = ["singularity", "--structure", "rect", "--b", "5", "--w", "5", "--u0r", "0.7", "--mass", "0.067"];
    let rounded: Vec<&str> = base.iter().copied().chain(["--constants", "rounded"]).collect();
    singularity_criterion(&rounded, (71.917e-6, 0.5e-6), Some((0.1194, 5e-4)), Duration::from_secs(5), &base)
}

fn criterion_2() -> Outcome {
    let base = ["singularity", "--structure", "delta", "--w", "3", "--v0r", "2.3", "--mass", "0.067"];
    let rounded: Vec<&str> = base.iter().copied().chain(["--constants", "rounded"]).collect();
    singularity_criterion(&rounded, (0.5131, 1e-3), Some((0.4622, 1e-3)), Duration::from_secs(1), &base)
}

fn criterion_3() -> Outcome {
    let base = ["singularity", "--structure", "delta", "--w", "3", "--v0r", "-2.3", "--mass", "0.067"];
    let rounded: Vec<&str> = base.iter().copied().chain(["--constants", "rounded"]).collect();
    singularity_criterion(&rounded, (0.71, 5e-3), None, Duration::from_secs(1), &base)
}

fn unitarity_of<S: DoubleBarrier + std::fmt::Debug>(s: &S, worst: &mut f64, count: &mut usize) -> Result<(), String> {
    let found = find_resonances_default(s, 20).map_err(|e| format!("{s:?}: {e}"))?;
    for r in found {
        *worst = worst.max((r.t_res_sq - 1.0).abs());
        *count += 1;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let m = EffectiveMass::gaas();
    let (mut worst, mut count) = (0.0f64, 0usize);
    let mut structures = 0;
    for b in [1.0, 2.0, 3.0, 4.0, 5.0] {
        for w in [2.0, 3.5, 5.0, 6.5, 8.0] {
            for u0r in [0.2, 0.4, 0.7, 1.0, 1.3] {
                let s = RectDoubleBarrier::new(b, w, Complex64::new(u0r, 0.0), m).unwrap();
                unitarity_of(&s, &mut worst, &mut count)?;
                structures += 1;
            }
        }
    }
    for w in [1.0, 2.0, 3.0, 5.0, 8.0] {
        for v0r in [-2.3, -0.5, 0.5, 1.0, 2.3] {
            let s = DeltaDoubleBarrier::new(w, Complex64::new(v0r, 0.0), m).unwrap();
            unitarity_of(&s, &mut worst, &mut count)?;
            structures += 1;
        }
    }
    let line = format!("{count} resonances in {structures} structures, max ||T_res|²−1| = {worst:.2e}");
    if count > structures && worst < 1e-9 { Ok(line) } else { Err(line) }
}

/// Samples on both sides of zero; returns (checked, violations).
fn sign_structure<S: DoubleBarrier>(
    s: &S,
    negative: &[f64],
    positive: &[f64],
    scatter: impl Fn(&S, f64) -> resotunnel::Result<ScatteringResult>,
) -> (usize, Vec<String>) {
    let values: Vec<f64> = negative.iter().chain(positive).copied().collect();
    let mut bad = Vec::new();
    let results = match sweep_im_pot(s, &values, 0) {
        Ok(r) => r,
        Err(e) => return (0, vec![e.to_string()]),
    };
    for (&im, res) in values.iter().zip(results) {
        let checked = res.map_err(|e| e.to_string()).and_then(|r| {
            let sr = scatter(&s.with_im_pot(im), r.energy).map_err(|e| e.to_string())?;
            let ok = if im < 0.0 {
                r.t_res_sq < 1.0 && sr.absorption > 0.0
            } else {
                r.t_res_sq > 1.0 && sr.absorption < 0.0
            };
            if ok { Ok(()) } else { Err(format!("T2={} A={}", r.t_res_sq, sr.absorption)) }
        });
        if let Err(e) = checked {
            bad.push(format!("im={im}: {e}"));
        }
    }
    (values.len(), bad)
}

fn criterion_5() -> Outcome {
    let m = rounded();
    let log_neg = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n).map(|i| -(lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
    };
    let below = |sing: f64, n: usize| -> Vec<f64> { (1..=n).map(|i| sing * i as f64 / (n + 1) as f64).collect() };

    let mut total = 0;
    let mut bad = Vec::new();

    let rect = RectDoubleBarrier::new(5.0, 5.0, Complex64::new(0.7, 0.0), m).unwrap();
    let sing = resotunnel::singular_point_rect(5.0, 5.0, 0.7, m).map_err(|e| e.to_string())?.im_pot;
    let (n, b) = sign_structure(&rect, &log_neg(1e-7, 5e-4, 50), &below(sing, 50), scatter_rect_barrier);
    total += n;
    bad.extend(b);

    for v0r in [2.3, -2.3] {
        let delta = DeltaDoubleBarrier::new(3.0, Complex64::new(v0r, 0.0), m).unwrap();
        let sing = singular_point_delta(v0r, 3.0, m, None).map_err(|e| e.to_string())?.im_pot;
        let (n, b) = sign_structure(&delta, &log_neg(1e-4, 2.0, 50), &below(sing, 50), scatter_delta);
        total += n;
        bad.extend(b);
    }
    let line = format!("{} of {total} sampled points follow the sign structure", total - bad.len());
    if bad.is_empty() && total > 0 { Ok(line) } else { Err(format!("{line}; first: {:?}", bad.first())) }
}

fn criterion_6() -> Outcome {
    let m = EffectiveMass::gaas();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_id, mut worst_branch) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let b = rng.gen_range(1e-3..=10.0);
        let w = rng.gen_range(1e-3..=10.0);
        let u0 = Complex64::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-1.0..=1.0));
        let e = rng.gen_range(1e-3..=2.0);
        let s = RectDoubleBarrier::new(b, w, u0, m).unwrap();
        let bk = s.barrier_kinematics(e).map_err(|e| e.to_string())?;
        let uvw = s.uvw_from(&bk).map_err(|e| e.to_string())?;
        let lhs = uvw.u * uvw.u + uvw.v * uvw.v;
        let rhs = (uvw.w + 1.0) * (uvw.w + 1.0);
        let scale = uvw.u.norm_sqr() + uvw.v.norm_sqr() + (uvw.w + 1.0).norm_sqr();
        worst_id = worst_id.max((lhs - rhs).norm() / scale);

        let flipped = BarrierKinematics::with_kappa(bk.kin, -bk.kappa).map_err(|e| e.to_string())?;
        let phase = s.phase(e).unwrap();
        let d0 = uvw.d(phase);
        let d1 = s.uvw_from(&flipped).map_err(|e| e.to_string())?.d(phase);
        worst_branch = worst_branch.max((d0 - d1).norm() / d0.norm().max(1.0));
    }
    let line = format!("1000 draws: max identity error {worst_id:.2e}, max κ-flip error {worst_branch:.2e}");
    if worst_id < 1e-12 && worst_branch < 1e-12 { Ok(line) } else { Err(line) }
}

fn criterion_7() -> Outcome {
    let cfg = OracleCheckConfig::default();
    let r = oracle_check(&cfg).map_err(|e| e.to_string())?;
    let line = format!(
        "{} draws per family ({} skipped): T {:.2e}, R {:.2e}, unitarity {:.2e}, absorption {:.2e}",
        r.draws, r.skipped, r.max_rel_err_t, r.max_rel_err_r, r.max_abs_err_unitarity, r.max_abs_err_absorption
    );
    let ok = r.pass
        && r.draws == 1000
        && r.max_rel_err_t < 1e-10
        && r.max_rel_err_r < 1e-10
        && r.max_abs_err_unitarity < 1e-8
        && r.max_abs_err_absorption < 1e-8;
    if ok { Ok(line) } else { Err(line) }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_cubic = 0.0f64;
    for _ in 0..100 {
        let a: f64 = rng.gen_range(0.01..20.0);
        let v0r: f64 = rng.gen_range(-5.0..5.0);
        worst_cubic = worst_cubic.max(cubic_residual(0.5 / a.sqrt(), a, v0r).abs());
    }
    let m = EffectiveMass::gaas();
    let (mut worst_forced, mut worst_quad) = (0.0f64, 0.0f64);
    let mut points = 0;
    for _ in 0..100 {
        let w: f64 = rng.gen_range(0.5..8.0);
        let v0r: f64 = rng.gen_range(-4.0..4.0);
        let p = singular_point_delta(v0r, w, m, None).map_err(|e| format!("V0R={v0r} w={w}: {e}"))?;
        let kin = kinematics(p.energy, m).unwrap();
        worst_forced = worst_forced.max((kin.a.sqrt() * p.im_pot - 0.5).abs());
        let s = DeltaDoubleBarrier::new(w, Complex64::new(v0r, p.im_pot), m).unwrap();
        let alpha = s.alpha(p.energy).unwrap();
        let e2 = Complex64::from_polar(1.0, 2.0 * kin.k * w);
        let quad = alpha * alpha * (1.0 - e2) - 4.0 * I * alpha - 4.0;
        worst_quad = worst_quad.max(quad.norm());
        points += 1;
    }
    let line = format!(
        "cubic at forced root {worst_cubic:.2e}; {points} singular points: √a·V0I−1/2 {worst_forced:.2e}, α quadratic {worst_quad:.2e}"
    );
    if worst_cubic < 1e-12 && worst_forced < 1e-12 && worst_quad < 1e-8 { Ok(line) } else { Err(line) }
}

fn criterion_9() -> Outcome {
    let m = EffectiveMass::gaas();
    let w = 3.0;
    let scale = 2.0 * m.h2m() / w;
    let mut worst = 0.0f64;
    let mut count = 0;
    for sign in [PotentialSign::Barrier, PotentialSign::Well] {
        for n in 0..2 {
            for kind in [BranchKind::Tan, BranchKind::Cot] {
                let branch = LocusBranch::new(n, kind);
                let (lo, hi) = branch.domain(sign);
                for i in 1..=50 {
                    let v0i = scale * (lo + (hi - lo) * i as f64 / 51.0);
                    let p = locus_v0r(v0i, w, m, sign).map_err(|e| e.to_string())?;
                    let v0r = p.value.finite().ok_or(format!("pole at V0I = {v0i}"))?;
                    let back = singular_point_delta(v0r, w, m, Some(branch)).map_err(|e| format!("{branch}: {e}"))?;
                    worst = worst.max((back.im_pot - v0i).abs());
                    count += 1;
                }
            }
        }
    }
    let line = format!("{count} points on n = 0, 1 (tan and cot, barrier and well): max round-trip error {worst:.2e} nm·eV");
    if worst < 1e-9 { Ok(line) } else { Err(line) }
}

fn criterion_10() -> Outcome {
    let dir = scenario("");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    let tmp = std::env::temp_dir().join(format!("resotunnel-determinism-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).map_err(|e| e.to_string())?;
    for name in &names {
        let command = ["res_sweep", "spectrum", "singularity", "locus", "cubic"]
            .into_iter()
            .find(|c| name.contains(c))
            .ok_or(format!("no command for {name}"))?
            .replace('_', "-");
        let path = scenario(name);
        let mut outputs = Vec::new();
        for run_no in 0..2 {
            let out_path = tmp.join(format!("{run_no}-{name}.out"));
            let out = run(&[&command, "--scenario", path.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
            if !out.status.success() {
                return Err(format!("{name}: exit {:?}", out.status.code()));
            }
            outputs.push(std::fs::read(&out_path).map_err(|e| e.to_string())?);
        }
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            return Err(format!("{name}: outputs differ between runs"));
        }
    }
    std::fs::remove_dir_all(&tmp).ok();
    Ok(format!("{} scenarios byte-identical across two runs", names.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("rectangular singular point", criterion_1),
        ("delta singular point", criterion_2),
        ("delta well singular point", criterion_3),
        ("real-potential resonances are unitary", criterion_4),
        ("sign structure of gain and loss", criterion_5),
        ("identity suite", criterion_6),
        ("transfer-matrix equivalence", criterion_7),
        ("forced root", criterion_8),
        ("locus round trip", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => report(&format!("PASS criterion {}: {name}: {detail}", i + 1)),
            Err(detail) => {
                report(&format!("FAIL criterion {}: {name}: {detail}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
