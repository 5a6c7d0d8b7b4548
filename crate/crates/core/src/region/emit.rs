use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::RegionPoint;
use crate::error::{Error, Result};
use crate::forge::FamilyParams;
use crate::num::{rat_int, to_decimal, Rational};

pub const CSV_HEADER: &str = "x,y,family,n";

/// Reference lines for the plot: x = 1 − 1/n_i and y = 6λ_t.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegionMarkers {
    pub verticals: Vec<Rational>,
    pub horizontal: Option<Rational>,
}

impl RegionMarkers {
    pub fn from_params(p: &FamilyParams) -> Self {
        let verticals = p
            .n
            .iter()
            .map(|n| rat_int(1) - Rational::new(1.into(), BigUint::clone(n).into()))
            .collect();
        RegionMarkers { verticals, horizontal: Some(rat_int(6) * &p.lambda_t) }
    }

    /// Markers for toy templates with vertex counts `v` and common peak height `peak`.
    pub fn for_templates(v: &[usize], peak: Option<Rational>) -> Self {
        RegionMarkers {
            verticals: v.iter().map(|&v| rat_int(1) - Rational::new(1.into(), v.into())).collect(),
            horizontal: peak,
        }
    }
}

/// The CSV text: header then one row per point, densities to 12 decimals.
pub fn region_csv(points: &[RegionPoint]) -> Result<String> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        if !p.in_unit_box() {
            return Err(Error::InvariantViolation(format!("point of {} lies outside [0,1]^2", p.family)));
        }
        if p.family.contains([',', '\n', '"']) {
            return Err(Error::InvalidArgument(format!("family tag {:?} is not CSV-safe", p.family)));
        }
        let n = p.n.map_or_else(|| "inf".to_string(), |n| n.to_string());
        writeln!(out, "{},{},{},{}", to_decimal(&p.x, 12), to_decimal(&p.y, 12), p.family, n).expect("string write");
    }
    Ok(out)
}

pub fn plot_script(csv_name: &str, markers: &RegionMarkers) -> String {
    let mut s = String::new();
    s.push_str("import csv\nimport matplotlib.pyplot as plt\n\n");
    writeln!(s, "rows = list(csv.DictReader(open({csv_name:?})))").unwrap();
    s.push_str("families = sorted({r['family'] for r in rows})\n");
    s.push_str("fig, ax = plt.subplots()\n");
    s.push_str("for fam in families:\n");
    s.push_str("    pts = [(float(r['x']), float(r['y'])) for r in rows if r['family'] == fam and r['n'] != 'inf']\n");
    s.push_str("    lim = [(float(r['x']), float(r['y'])) for r in rows if r['family'] == fam and r['n'] == 'inf']\n");
    s.push_str("    ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=8, label=fam)\n");
    s.push_str("    ax.scatter([p[0] for p in lim], [p[1] for p in lim], marker='x', color='black')\n");
    for x in &markers.verticals {
        writeln!(s, "ax.axvline({}, linestyle=':', color='grey')", to_decimal(x, 12)).unwrap();
    }
    if let Some(y) = &markers.horizontal {
        writeln!(s, "ax.axhline({}, linestyle='--', color='grey')", to_decimal(y, 12)).unwrap();
    }
    s.push_str("ax.set_xlim(0, 1)\nax.set_ylim(0, 1)\nax.set_xlabel('shadow density')\nax.set_ylabel('edge density')\n");
    s.push_str("ax.legend()\nfig.savefig('region.png', dpi=150)\n");
    s
}

/// Writes the CSV to `path` and the plotting stub next to it; returns the stub's path.
pub fn emit_region(points: &[RegionPoint], markers: &RegionMarkers, path: &Path) -> Result<PathBuf> {
    fs::write(path, region_csv(points)?)?;
    let script = path.with_extension("py");
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("region.csv");
    fs::write(&script, plot_script(name, markers))?;
    Ok(script)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub x: String,
    pub y: String,
    pub family: String,
    pub n: Option<usize>,
}

pub fn parse_region_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse { line: 1, msg: "missing x,y,family,n header".into() });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |msg: &str| Error::Parse { line: i + 2, msg: msg.into() };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad("expected four fields"));
            }
            let n = match f[3] {
                "inf" => None,
                s => Some(s.parse().map_err(|_| bad("bad n"))?),
            };
            Ok(CsvRow { x: f[0].into(), y: f[1].into(), family: f[2].into(), n })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn empty_and_round_trip() {
        assert_eq!(region_csv(&[]).unwrap(), "x,y,family,n\n");
        let pts = vec![
            RegionPoint { x: rat(3, 4), y: rat(1, 3), family: "blowup(1)".into(), n: Some(8) },
            RegionPoint { x: rat(3, 4), y: rat(3, 8), family: "blowup(1)".into(), n: None },
        ];
        let text = region_csv(&pts).unwrap();
        assert!(text.contains("0.750000000000,0.333333333333,blowup(1),8\n"));
        let rows = parse_region_csv(&text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].n, None);
        let bad = RegionPoint { x: rat(5, 4), ..pts[0].clone() };
        assert!(region_csv(&[bad]).is_err());
    }

    #[test]
    fn markers_and_files() {
        let m = RegionMarkers::for_templates(&[4, 7], Some(rat(3, 8)));
        assert_eq!(m.verticals, vec![rat(3, 4), rat(6, 7)]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("region.csv");
        let script = emit_region(&[], &m, &path).unwrap();
        let py = fs::read_to_string(script).unwrap();
        assert!(py.contains("axvline(0.857142857143"));
        assert!(py.contains("axhline(0.375000000000"));
    }
}
