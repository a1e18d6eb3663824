//! File formats.
//!
//! Complex numbers are `[re, im]` pairs, matrices are row-major nested
//! arrays. All CSV files start with a one-line header. Floats are written in
//! shortest round-trip form, so identical inputs give byte-identical files.
//!
//! ```text
//! HamiltonianPath  {"dim": N, "times": [...], "matrices": [[[[re, im], ...], ...], ...]}
//! SampledPath      {"times": [...], "states": [[[re, im], ...], ...], "derivatives"?: ...}
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{SpeedReportRow, CSV_HEADER};
use crate::error::{Error, Result};
use crate::geometry::{bloch_vector, SampledPath};
use crate::linalg::{CMatrix, CVector, C64};
use crate::propagate::SampledHamiltonian;
use crate::scenarios::{g_label, BrachReport, Figure1Report, OpticalReport, PauliReport};
use crate::synthesis::{GParameter, SynthesisResult};

pub type JsonComplex = [f64; 2];
pub type JsonState = Vec<JsonComplex>;
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn state_to_json(psi: &CVector) -> JsonState {
    psi.iter().map(|z| [z.re, z.im]).collect()
}

pub fn state_from_json(v: &[JsonComplex]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&[re, im]| C64::new(re, im)))
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    m.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<JsonComplex>]) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
    }
    Ok(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianPathFile {
    pub dim: usize,
    pub times: Vec<f64>,
    pub matrices: Vec<JsonMatrix>,
}

impl HamiltonianPathFile {
    pub fn from_sampled(h: &SampledHamiltonian) -> Self {
        Self {
            dim: h.dim(),
            times: h.times().to_vec(),
            matrices: h.matrices().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn into_sampled(self) -> Result<SampledHamiltonian> {
        let matrices: Vec<CMatrix> =
            self.matrices.iter().map(|m| matrix_from_json(m)).collect::<Result<_>>()?;
        for m in &matrices {
            if m.nrows() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: m.nrows() });
            }
        }
        SampledHamiltonian::new(self.times, matrices)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledPathFile {
    pub times: Vec<f64>,
    pub states: Vec<JsonState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivatives: Option<Vec<JsonState>>,
}

impl SampledPathFile {
    pub fn from_path(p: &SampledPath) -> Self {
        Self {
            times: p.times().to_vec(),
            states: p.states().iter().map(state_to_json).collect(),
            derivatives: p.derivatives().map(|d| d.iter().map(state_to_json).collect()),
        }
    }

    pub fn into_path(self) -> Result<SampledPath> {
        let states = self.states.iter().map(|s| state_from_json(s)).collect();
        match self.derivatives {
            None => SampledPath::new(self.times, states),
            Some(d) => SampledPath::with_derivatives(
                self.times,
                states,
                d.iter().map(|s| state_from_json(s)).collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisFile {
    pub times: Vec<f64>,
    pub g: GParameter,
    pub matrices: Vec<JsonMatrix>,
    pub e_plus: Vec<JsonComplex>,
    pub e_minus: Vec<JsonComplex>,
    pub sp_norm: Vec<f64>,
    pub hs_norm: Vec<f64>,
    pub speed: Vec<f64>,
    pub gauge_factor: Vec<JsonComplex>,
    pub states: Vec<JsonState>,
}

impl From<&SynthesisResult> for SynthesisFile {
    fn from(r: &SynthesisResult) -> Self {
        let pair = |z: &C64| [z.re, z.im];
        Self {
            times: r.times().to_vec(),
            g: r.g.clone(),
            matrices: r.hamiltonians().iter().map(matrix_to_json).collect(),
            e_plus: r.e_plus.iter().map(pair).collect(),
            e_minus: r.e_minus.iter().map(pair).collect(),
            sp_norm: r.sp_norm.clone(),
            hs_norm: r.hs_norm.clone(),
            speed: r.speed.clone(),
            gauge_factor: r.gauge.gauge_factor().iter().map(pair).collect(),
            states: r.gauge.states().iter().map(state_to_json).collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

pub fn read_hamiltonian_path(path: &Path) -> Result<SampledHamiltonian> {
    parse_json::<HamiltonianPathFile>(&read_text(path)?, &path.display().to_string())?.into_sampled()
}

pub fn read_sampled_path(path: &Path) -> Result<SampledPath> {
    parse_json::<SampledPathFile>(&read_text(path)?, &path.display().to_string())?.into_path()
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Write through a temporary file in the same directory and rename it into
/// place, so readers never see a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidInput(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents).map_err(|e| io_error(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_error(path, e)
    })
}

/// Write a set of `(file name, contents)` pairs into `dir`, creating it.
pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    for (name, contents) in files {
        write_atomic(&dir.join(name), contents)?;
    }
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `t, re0, im0, re1, im1, …, norm`.
pub fn sampled_path_csv(p: &SampledPath) -> String {
    let mut out = String::from("t");
    for k in 0..p.dim() {
        let _ = write!(out, ",re{k},im{k}");
    }
    out.push_str(",norm\n");
    for (t, s) in p.times().iter().zip(p.states()) {
        let _ = write!(out, "{t}");
        for z in s.iter() {
            let _ = write!(out, ",{},{}", z.re, z.im);
        }
        let _ = writeln!(out, ",{}", s.norm());
    }
    out
}

pub fn speed_report_csv(rows: &[SpeedReportRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

pub const SERIES_HEADER: &str = "t,nx,ny,nz,norm,eta";

/// Bloch trajectory of a two-level path with per-sample efficiency.
pub fn bloch_series_csv(p: &SampledPath, eta: &[Option<f64>]) -> Result<String> {
    let mut out = format!("{SERIES_HEADER}\n");
    for (k, (t, s)) in p.times().iter().zip(p.states()).enumerate() {
        let [x, y, z] = bloch_vector(s)?.0;
        let e = opt(eta.get(k).copied().flatten());
        let _ = writeln!(out, "{t},{x},{y},{z},{},{e}", s.norm());
    }
    Ok(out)
}

fn speed_rows_series_csv(rows: &[SpeedReportRow]) -> String {
    let mut out = format!("{SERIES_HEADER}\n");
    for r in rows {
        let [x, y, z] = r.bloch.map(|b| b.map(Some)).unwrap_or([None; 3]);
        let _ = writeln!(out, "{},{},{},{},{},{}", r.t, opt(x), opt(y), opt(z), r.state_norm, opt(r.eta));
    }
    out
}

/// Everything a scenario run writes: `report.json` plus CSV series.
pub trait ScenarioOutput {
    fn files(&self) -> Result<Vec<(String, String)>>;
}

impl ScenarioOutput for Figure1Report {
    fn files(&self) -> Result<Vec<(String, String)>> {
        let mut files = vec![("report.json".to_string(), to_json(self)?)];
        for run in &self.runs {
            let name = format!("run_g{}_{}.csv", g_label(run.g), run.state_label);
            files.push((name, bloch_series_csv(&run.path, &run.eta)?));
        }
        Ok(files)
    }
}

impl ScenarioOutput for OpticalReport {
    fn files(&self) -> Result<Vec<(String, String)>> {
        let mut files = vec![("report.json".to_string(), to_json(self)?)];
        let mut csv = String::from("z,q_re,q_im,delta_e_re,delta_e_im,sp_norm,hs_norm");
        let probes = self.rows.first().map_or(0, |r| r.bloch_speeds.len());
        for k in 0..probes {
            let _ = write!(csv, ",speed{k}");
        }
        csv.push('\n');
        for r in &self.rows {
            let _ = write!(
                csv,
                "{},{},{},{},{},{},{}",
                r.z, r.q.re, r.q.im, r.delta_e.re, r.delta_e.im, r.sp_norm, r.hs_norm
            );
            for v in &r.bloch_speeds {
                let _ = write!(csv, ",{v}");
            }
            csv.push('\n');
        }
        files.push(("profile.csv".to_string(), csv));
        if let Some(rows) = &self.propagated {
            files.push(("run_propagated.csv".to_string(), speed_rows_series_csv(rows)));
            files.push(("speeds.csv".to_string(), speed_report_csv(rows)));
        }
        Ok(files)
    }
}

impl ScenarioOutput for PauliReport {
    fn files(&self) -> Result<Vec<(String, String)>> {
        Ok(vec![("report.json".to_string(), to_json(self)?)])
    }
}

impl ScenarioOutput for BrachReport {
    fn files(&self) -> Result<Vec<(String, String)>> {
        let mut files = vec![("report.json".to_string(), to_json(self)?)];
        if !self.sweep.is_empty() {
            let mut csv = String::from("alpha,s,delta_e,sp_norm,ratio\n");
            for p in &self.sweep {
                let _ = writeln!(csv, "{},{},{},{},{}", p.alpha, p.s, p.delta_e, p.sp_norm, p.ratio);
            }
            files.push(("sweep.csv".to_string(), csv));
        }
        files.push(("run_north.csv".to_string(), speed_rows_series_csv(&self.speeds)));
        Ok(files)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cvec, sigma_y};

    #[test]
    fn hamiltonian_path_round_trip() {
        let h = SampledHamiltonian::new(vec![0.0, 0.5], vec![sigma_y(), sigma_y() * c(2.0, 0.0)]).unwrap();
        let text = to_json(&HamiltonianPathFile::from_sampled(&h)).unwrap();
        let back = parse_json::<HamiltonianPathFile>(&text, "test").unwrap().into_sampled().unwrap();
        assert_eq!(back, h);
        assert!(text.contains("\"dim\": 2"));
    }

    #[test]
    fn matrix_layout_is_row_major() {
        let json = matrix_to_json(&sigma_y());
        assert_eq!(json[0][1], [0.0, -1.0]);
        assert_eq!(json[1][0], [0.0, 1.0]);
    }

    #[test]
    fn rejects_ragged_matrix() {
        let text = r#"{"dim":2,"times":[0],"matrices":[[[[1,0],[0,0]],[[0,0]]]]}"#;
        let file: HamiltonianPathFile = parse_json(text, "t").unwrap();
        assert!(matches!(file.into_sampled(), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_json::<HamiltonianPathFile>("{", "t"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn sampled_path_csv_layout() {
        let p = SampledPath::new(vec![0.0, 1.0], vec![cvec(&[c(1.0, 0.0), c(0.0, 0.0)]); 2]).unwrap();
        let csv = sampled_path_csv(&p);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,re0,im0,re1,im1,norm"));
        assert_eq!(lines.next(), Some("0,1,0,0,0,1"));
        let back = parse_json::<SampledPathFile>(&to_json(&SampledPathFile::from_path(&p)).unwrap(), "t")
            .unwrap()
            .into_path()
            .unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, "a").unwrap();
        write_atomic(&path, "b").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "b");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let missing = dir.path().join("no/such/dir/x");
        assert!(write_atomic(&missing, "c").unwrap_err().is_io());
    }
}
