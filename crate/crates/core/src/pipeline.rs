//! End-to-end artifact bundle: family parameters, toy G_i, their structural reports and
//! region data, tied together by a manifest of SHA-256 hashes.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::forge::{
    assemble_gi, construct_params, verify_divisibility, verify_observation, AssemblyLimits, AssemblySummary,
    DivisibilityReport, FamilyParams, ObservationLimits, ObservationReport,
};
use crate::hcore::Hypergraph;
use crate::lagrange::design_lagrangian;
use crate::num::{rat, rat_int};
use crate::region::{blowup_points, emit_region, parse_region_csv, semibipartite_curve, RegionMarkers, RegionPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToySpec {
    pub n: usize,
    pub k: usize,
    pub s: usize,
}

impl ToySpec {
    pub fn stem(&self) -> String {
        format!("gi_n{}_k{}_s{}", self.n, self.k, self.s)
    }
}

impl std::str::FromStr for ToySpec {
    type Err = Error;

    /// `n,k,s`
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || Error::InvalidArgument(format!("expected n,k,s but got {text:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let p = |s: &str| s.parse::<usize>().map_err(|_| bad());
        Ok(ToySpec { n: p(parts[0])?, k: p(parts[1])?, s: p(parts[2])? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    /// Hashes `rel` (relative to `root`) and records it.
    pub fn add(&mut self, root: &Path, rel: &str) -> Result<()> {
        let bytes = fs::read(root.join(rel))?;
        self.files.push(ManifestEntry { path: rel.to_string(), sha256: sha256_hex(&bytes) });
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyArtifact {
    pub spec: ToySpec,
    pub summary: AssemblySummary,
    pub observation: ObservationReport,
}

#[derive(Clone, Debug)]
pub struct Bundle {
    pub dir: PathBuf,
    pub params: FamilyParams,
    pub divisibility: DivisibilityReport,
    pub toys: Vec<ToyArtifact>,
    pub region: Vec<RegionPoint>,
    pub manifest: Manifest,
}

fn write_json<T: Serialize + for<'de> Deserialize<'de> + PartialEq>(dir: &Path, rel: &str, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    fs::write(dir.join(rel), &text)?;
    let back: T = serde_json::from_str(&fs::read_to_string(dir.join(rel))?)?;
    if back != *value {
        return Err(Error::InvariantViolation(format!("{rel} does not round-trip")));
    }
    Ok(())
}

/// Region rows for the toys: balanced blow-ups for m = 1..=5 with their limits, and the
/// complete semibipartite graphs at n = 30 for α ∈ {1/10, …, 9/10}.
pub fn toy_region(graphs: &[(String, &Hypergraph)]) -> Result<Vec<RegionPoint>> {
    let mut points = Vec::new();
    for (tag, g) in graphs {
        points.extend(blowup_points(g, &[1, 2, 3, 4, 5], tag, 2_000_000)?);
    }
    let alphas: Vec<_> = (1..10).map(|i| rat(i, 10)).collect();
    points.extend(semibipartite_curve(30, &alphas)?);
    Ok(points)
}

/// Writes the bundle into `dir`. Without toys only the arithmetic files are produced.
pub fn pipeline(
    t: usize,
    q: u64,
    c: u64,
    toys: &[ToySpec],
    seed: u64,
    limits: &AssemblyLimits,
    dir: &Path,
) -> Result<Bundle> {
    if t == 0 || q == 0 || c == 0 {
        return Err(Error::InvalidArgument("t, q and C must be positive".into()));
    }
    fs::create_dir_all(dir)?;
    let params = construct_params(t, &BigUint::from(q), &BigUint::from(c), None, false)?;
    let divisibility = verify_divisibility(&params);
    let mut manifest = Manifest::default();
    write_json(dir, "params.json", &params)?;
    manifest.add(dir, "params.json")?;
    write_json(dir, "divisibility.json", &divisibility)?;
    manifest.add(dir, "divisibility.json")?;

    let mut toy_artifacts = Vec::new();
    let mut graphs = Vec::new();
    for (i, spec) in toys.iter().enumerate() {
        let a = assemble_gi(spec.n, spec.k, spec.s, seed.wrapping_add(i as u64), limits)?;
        let lambda = design_lagrangian(spec.n as u64, spec.k as u64, spec.s as u64).value;
        let observation = verify_observation(&a, &lambda, None, &ObservationLimits::default())?;
        let g = a.g.clone().ok_or_else(|| {
            Error::InvalidSize(format!("toy {} is too large to materialize", spec.stem()))
        })?;
        let stem = spec.stem();
        let hg3 = format!("{stem}.hg3");
        crate::hg3::write(&dir.join(&hg3), &g)?;
        if crate::hg3::read(&dir.join(&hg3))? != g {
            return Err(Error::InvariantViolation(format!("{hg3} does not round-trip")));
        }
        manifest.add(dir, &hg3)?;
        let artifact = ToyArtifact { spec: *spec, summary: a.summary(), observation };
        let report = format!("{stem}.json");
        write_json(dir, &report, &artifact)?;
        manifest.add(dir, &report)?;
        toy_artifacts.push(artifact);
        graphs.push((format!("blowup({})", i + 1), g));
    }

    let mut region = Vec::new();
    if !toys.is_empty() {
        let refs: Vec<(String, &Hypergraph)> = graphs.iter().map(|(t, g)| (t.clone(), g)).collect();
        region = toy_region(&refs)?;
        let peaks: Vec<_> = toys
            .iter()
            .map(|s| rat_int(6) * design_lagrangian(s.n as u64, s.k as u64, s.s as u64).value)
            .collect();
        let peak = if peaks.windows(2).all(|w| w[0] == w[1]) { peaks.first().cloned() } else { None };
        let v: Vec<usize> = toys.iter().map(|s| s.n).collect();
        let markers = RegionMarkers::for_templates(&v, peak);
        let script = emit_region(&region, &markers, &dir.join("region.csv"))?;
        if parse_region_csv(&fs::read_to_string(dir.join("region.csv"))?)?.len() != region.len() {
            return Err(Error::InvariantViolation("region.csv does not round-trip".into()));
        }
        manifest.add(dir, "region.csv")?;
        let script_name = script.file_name().and_then(|s| s.to_str()).unwrap_or("region.py").to_string();
        manifest.add(dir, &script_name)?;
    }
    write_json(dir, "manifest.json", &manifest)?;
    Ok(Bundle { dir: dir.to_path_buf(), params, divisibility, toys: toy_artifacts, region, manifest })
}
