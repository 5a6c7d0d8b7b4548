//! Batch verification: every module's checks run independently, failures are collected,
//! and a timing-free manifest makes runs comparable byte for byte.

use std::fs;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::designs::{build_design, expand_h, verify_design};
use crate::error::Budget;
use crate::family::{fano_plane, hom_free_equiv_fuzz, member_catalog, ToyFamily};
use crate::forge::{
    assemble_gi, construct_params, lambda_interval_check, scan_q, small, verify_divisibility, verify_observation,
    AssemblyLimits, ObservationLimits,
};
use crate::hcore::{for_each_subset, Hypergraph};
use crate::lagrange::{design_lagrangian, maximize, CliqueComplement, MaximizeConfig, Objective};
use crate::num::{binom, rat, rat_int, rational_string};
use crate::pipeline::{pipeline, sha256_hex, Manifest, ManifestEntry, ToySpec};
use crate::region::RegionPoint;
use crate::symm::{find_missing_class_pair, max_colorable_edges, run_symmetrization, symmetrization_step, SymmetrizationMode};

type CheckFn = fn(&RunConfig) -> Result<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl VerifySummary {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// The deterministic part of a run: check outcomes without timings, plus the hashes of
/// every file written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyManifest {
    pub seed: u64,
    pub checks: Vec<ManifestCheck>,
    pub files: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check_fano(cfg: &RunConfig) -> Result<String, String> {
    let f = fano_plane();
    let r = maximize(&f, &MaximizeConfig { seed: cfg.seed, ..Default::default() });
    let gap = (r.best_value - 1.0 / 27.0).abs();
    ensure(gap < cfg.optimizer_tolerance, || format!("optimizer gap {gap:e} not below {:e}", cfg.optimizer_tolerance))?;
    let u = vec![rat(1, 7); 7];
    ensure(f.value_exact(&u) == rat(1, 49), || "uniform value is not 1/49".into())?;
    Ok("lambda(Fano) = 1/27, uniform value 1/49".into())
}

fn check_design_lagrangian(cfg: &RunConfig) -> Result<String, String> {
    let a = assemble_gi(57, 3, 0, cfg.seed, &AssemblyLimits::default()).map_err(err)?;
    let obj = CliqueComplement::new(&a.removed).map_err(err)?;
    let r = maximize(&obj, &MaximizeConfig { seed: cfg.seed, ..Default::default() });
    let want = crate::num::to_f64(&design_lagrangian(57, 3, 0).value);
    let gap = (r.best_value - want).abs();
    let dist = r.best_point.linf_distance_to_uniform();
    ensure(gap <= 1e-8 && dist <= 1e-5, || format!("gap {gap:e}, distance to uniform {dist:e}"))?;
    Ok("(57,3,0) maximum matches the closed form at the uniform point".into())
}

fn check_params(_: &RunConfig) -> Result<String, String> {
    for t in 1..=3 {
        let p = construct_params(t, &BigUint::from(3u32), &BigUint::from(1u32), None, false).map_err(err)?;
        let d = verify_divisibility(&p);
        ensure(d.all_pass(), || format!("t = {t}: {:?}", d.violations))?;
        if t == 1 {
            let s: Vec<u64> = p.s.iter().map(|x| small(x).unwrap_or(u64::MAX)).collect();
            let q = small(&p.big_q).ok_or("Q too large")?;
            ensure(scan_q(&s, 1, 10_000) == Some(q), || format!("scan disagrees with Q = {q}"))?;
        }
    }
    Ok("Q solves the congruences for t = 1, 2, 3".into())
}

fn check_designs(cfg: &RunConfig) -> Result<String, String> {
    for (n, k) in [(7, 3), (9, 3), (13, 3), (15, 3), (57, 3), (13, 4)] {
        let mut b = Budget::new("design", cfg.node_budget);
        let d = build_design(n, k, &mut b).map_err(err)?;
        verify_design(&d).map_err(err)?;
        let triples = expand_h(&d).len();
        ensure(triples == (k - 2) * n * (n - 1) / 6, || format!("({n},{k}) gives {triples} triples"))?;
    }
    Ok("six designs verified".into())
}

fn check_assembly(cfg: &RunConfig) -> Result<String, String> {
    let limits = AssemblyLimits::default();
    for s in [0, 1] {
        let a = assemble_gi(57, 3, s, cfg.seed, &limits).map_err(err)?;
        let lambda = design_lagrangian(57, 3, s as u64).value;
        let o = verify_observation(&a, &lambda, None, &ObservationLimits::default()).map_err(err)?;
        ensure(o.all_pass(), || format!("s = {s}: {o:?}"))?;
        if s == 0 {
            ensure(o.codegree_range == Some((54, 54)) && o.link_clique_range == Some((28, 28)), || format!("{o:?}"))?;
        }
    }
    Ok("(57,3,0) and (57,3,1) structural checks pass".into())
}

fn check_lambda(_: &RunConfig) -> Result<String, String> {
    for t in 1..=3 {
        let p = construct_params(t, &BigUint::from(3u32), &BigUint::from(1u32), None, false).map_err(err)?;
        for (k, s) in p.k.iter().zip(&p.s) {
            let n = &p.big_q * (k + 1u32);
            let v = crate::lagrange::design_lagrangian_big(&n.into(), &k.clone().into(), &s.clone().into()).value;
            ensure(v == p.lambda_t, || "design Lagrangian differs from lambda_t".into())?;
        }
        let c = lambda_interval_check(&p.big_q).map_err(err)?;
        ensure(!c.hypothesis_holds || c.in_interval, || "lambda_t outside [5/32, 1/6)".into())?;
    }
    Ok("lambda_t = (1 - 1/Q)/6 for every solver output".into())
}

fn check_symmetrization(cfg: &RunConfig) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..cfg.symmetrization_samples {
        let n = rng.gen_range(3..=9);
        let p = rng.gen_range(0.1..0.7);
        let mut edges = Vec::new();
        for_each_subset(n, 3, |s| {
            if rng.gen_bool(p) {
                edges.push(s.to_vec());
            }
        });
        let h = Hypergraph::new(3, n, &edges).map_err(err)?;
        let mut b = Budget::new("symmetrization", cfg.node_budget);
        let tr = run_symmetrization(&h, None, SymmetrizationMode::Vertex, &mut b).map_err(err)?;
        ensure(tr.strictly_increasing(), || format!("sample {i}: trace not increasing"))?;
        let last = Hypergraph::new(3, n, &tr.final_edges).map_err(err)?;
        ensure(find_missing_class_pair(&last).map_err(err)?.is_none(), || format!("sample {i}: missing pair left"))?;
        if n <= 7 {
            if let Some((next, _, _)) = symmetrization_step(&h, SymmetrizationMode::Vertex).map_err(err)? {
                let mut b = Budget::new("hom", cfg.node_budget);
                let hom = crate::family::find_homomorphism(&next, &h, &mut b).map_err(err)?;
                ensure(hom.is_some(), || format!("sample {i}: no homomorphism back"))?;
            }
        }
    }
    Ok(format!("{} traces increase and terminate", cfg.symmetrization_samples))
}

fn check_mfrak(_: &RunConfig) -> Result<String, String> {
    let k4 = Hypergraph::complete(3, 4);
    let m8 = max_colorable_edges(std::slice::from_ref(&k4), 8, u128::MAX).map_err(err)?;
    ensure(m8.value == 32 && m8.exact, || format!("M(8) = {}", m8.value))?;
    for n in [8usize, 12, 16] {
        let m = max_colorable_edges(std::slice::from_ref(&k4), n, u128::MAX).map_err(err)?;
        ensure(m.value == (n as u128).pow(3) / 16, || format!("M({n}) = {}", m.value))?;
        // 6λC(n,3) with λ = 1/16.
        ensure(16 * m.value >= 6 * binom(n as u64, 3), || format!("M({n}) below 6λC(n,3)"))?;
    }
    Ok("M(n) = n^3/16 for K4 at n = 8, 12, 16".into())
}

fn check_hom_free(cfg: &RunConfig) -> Result<String, String> {
    let fam = ToyFamily::k4_fano();
    let cat = member_catalog(&fam, cfg.catalogue_n, cfg.node_budget).map_err(err)?;
    let mut bad = 0;
    for &rep in &cat.classes.reps {
        let h = cat.classes.graph(rep);
        let mut b = Budget::new("freeness", cfg.node_budget);
        let free = match crate::family::is_mt_free(&h, &fam, &mut b).map_err(err)? {
            crate::family::Verdict::Yes(_) => true,
            crate::family::Verdict::No(_) => false,
            crate::family::Verdict::Indeterminate { reason } => return Err(reason),
        };
        if free != cat.hom_free(&h, &mut Budget::new("oracle", cfg.node_budget)).map_err(err)? {
            bad += 1;
        }
    }
    ensure(bad == 0, || format!("{bad} discrepancies"))?;
    let fuzz = hom_free_equiv_fuzz(&fam, &cat, 50, cfg.catalogue_n + 1, cfg.seed).map_err(err)?;
    ensure(fuzz.discrepancies.is_empty(), || format!("{:?}", fuzz.discrepancies))?;
    Ok(format!("{} classes on <= {} vertices agree", cat.classes.reps.len(), cfg.catalogue_n))
}

fn peak_rows(points: &[RegionPoint]) -> Vec<&RegionPoint> {
    points.iter().filter(|p| p.n.is_none() && p.family.starts_with("blowup")).collect()
}

fn check_region(cfg: &RunConfig) -> Result<String, String> {
    let dir = cfg.out_dir.join("region-check");
    let toys = [ToySpec { n: 27, k: 2, s: 1 }, ToySpec { n: 39, k: 3, s: 8 }];
    let b = pipeline(1, 3, 1, &toys, cfg.seed, &AssemblyLimits::default(), &dir).map_err(err)?;
    let peaks = peak_rows(&b.region);
    ensure(peaks.len() == 2 && peaks[0].y == peaks[1].y && peaks[0].y == rat(8, 9), || "peaks differ".into())?;
    for (p, spec) in peaks.iter().zip(&toys) {
        ensure(p.x == rat_int(1) - rat(1, spec.n as i64), || format!("x-limit of {}", p.family))?;
    }
    for p in b.region.iter().filter(|p| p.family == "semibipartite") {
        let n = p.n.ok_or("semibipartite limit row")? as u64;
        ensure(p.y.clone() * rat_int(27 * binom(n, 3)) <= rat_int(2 * n * n * n), || format!("n = {n}"))?;
    }
    Ok(format!("peaks at y = {}", rational_string(&peaks[0].y)))
}

fn check_pipeline(cfg: &RunConfig) -> Result<String, String> {
    let dir = cfg.out_dir.join("bundle");
    let b = pipeline(1, 3, 1, &[ToySpec { n: 57, k: 3, s: 0 }], cfg.seed, &AssemblyLimits::default(), &dir).map_err(err)?;
    ensure(b.divisibility.all_pass() && b.toys[0].observation.all_pass(), || "bundle reports a failure".into())?;
    Ok(format!("{} files", b.manifest.files.len()))
}

pub fn checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("fano_lagrangian", check_fano),
        ("design_lagrangian_57_3_0", check_design_lagrangian),
        ("parameter_arithmetic", check_params),
        ("designs", check_designs),
        ("assembly_57_3", check_assembly),
        ("lambda_identity", check_lambda),
        ("symmetrization", check_symmetrization),
        ("mfrak", check_mfrak),
        ("hom_free_equivalence", check_hom_free),
        ("region", check_region),
        ("pipeline_bundle", check_pipeline),
    ]
}

fn run_one(name: &str, f: CheckFn, cfg: &RunConfig) -> CheckRecord {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(|| f(cfg)).unwrap_or_else(|_| Err("check panicked".into()));
    let millis = start.elapsed().as_millis();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = cfg.time_limit_secs {
        if millis > u128::from(limit) * 1000 {
            passed = false;
            detail = format!("exceeded {limit} s: {detail}");
        }
    }
    CheckRecord { name: name.to_string(), passed, detail, millis }
}

fn fixture_check(path: &std::path::Path) -> Result<String, String> {
    let h = crate::hg3::read(path).map_err(err)?;
    Ok(format!("{} vertices, {} edges", h.vertex_count(), h.len()))
}

/// Runs every check (up to `jobs` at a time), writes `summary.json` (with timings) and
/// `manifest.json` (without) into the output directory.
pub fn verify_all(cfg: &RunConfig) -> crate::error::Result<(VerifySummary, VerifyManifest)> {
    fs::create_dir_all(&cfg.out_dir)?;
    let list = checks();
    let slots: Mutex<Vec<Option<CheckRecord>>> = Mutex::new(vec![None; list.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.clamp(1, list.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= list.len() {
                    break;
                }
                let rec = run_one(list[i].0, list[i].1, cfg);
                slots.lock().expect("no poisoned lock")[i] = Some(rec);
            });
        }
    });
    let mut records: Vec<CheckRecord> = slots.into_inner().expect("lock").into_iter().flatten().collect();
    for (i, path) in cfg.fixtures.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match fixture_check(path) {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        records.push(CheckRecord { name: format!("fixture_{i}"), passed, detail, millis: start.elapsed().as_millis() });
    }
    let summary = VerifySummary { seed: cfg.seed, passed: records.iter().all(|r| r.passed), checks: records };

    let mut files = Manifest::default();
    for sub in ["region-check", "bundle"] {
        let m: Manifest = match fs::read_to_string(cfg.out_dir.join(sub).join("manifest.json")) {
            Ok(text) => serde_json::from_str(&text)?,
            Err(_) => continue,
        };
        for e in m.files {
            files.files.push(ManifestEntry { path: format!("{sub}/{}", e.path), sha256: e.sha256 });
        }
    }
    let manifest = VerifyManifest {
        seed: cfg.seed,
        checks: summary
            .checks
            .iter()
            .map(|c| ManifestCheck { name: c.name.clone(), passed: c.passed, detail: c.detail.clone() })
            .collect(),
        files: files.files,
    };
    fs::write(cfg.out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(cfg.out_dir.join("manifest.json"), &text)?;
    Ok((summary, manifest))
}

/// SHA-256 of the manifest file a run wrote.
pub fn manifest_digest(cfg: &RunConfig) -> crate::error::Result<String> {
    Ok(sha256_hex(&fs::read(cfg.out_dir.join("manifest.json"))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_and_negative_control() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig { out_dir: dir.path().to_path_buf(), ..Default::default() };
        assert!(check_fano(&cfg).is_ok());
        let tight = RunConfig { optimizer_tolerance: 0.0, ..cfg.clone() };
        assert!(check_fano(&tight).is_err());
        assert!(check_mfrak(&cfg).is_ok());
        assert!(check_params(&cfg).is_ok());
        let bad = dir.path().join("bad.hg3");
        fs::write(&bad, "3 4 1\n0 1\n").unwrap();
        assert!(fixture_check(&bad).is_err());
    }
}
