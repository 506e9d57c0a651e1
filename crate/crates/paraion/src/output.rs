//! File formats: trajectory and scan CSV, trajectory JSON, atomic writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use paraion_core::dynamics::{Snapshot, Trajectory};
use paraion_core::protocol::ReadoutScan;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const TRAJECTORY_COLUMNS: [&str; 6] = ["t_s", "P_up", "n_x", "n_y", "N_para", "leakage"];
pub const SCAN_COLUMNS: [&str; 3] = ["t_s", "P_up", "shots"];

/// Seventeen significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::io(format!("creating temporary file in {}", dir.display()), e))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.flush())
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(format!("renaming into {}", path.display()), e.error))?;
    Ok(())
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn trajectory_csv(traj: &Trajectory) -> Vec<u8> {
    csv_bytes(
        &TRAJECTORY_COLUMNS,
        traj.records().iter().map(|r| {
            vec![
                fmt_f64(r.t),
                fmt_f64(r.p_up),
                fmt_f64(r.n_x),
                fmt_f64(r.n_y),
                r.n_para.map(fmt_f64).unwrap_or_default(),
                fmt_f64(r.leakage),
            ]
        }),
    )
}

pub fn scan_csv(scan: &ReadoutScan) -> Vec<u8> {
    sampled_csv(&scan.times, &scan.p_up, scan.shots)
}

/// Columns `t_s, P_up, shots`; `shots` is blank for exact values.
pub fn sampled_csv(times: &[f64], p_up: &[f64], shots: Option<u32>) -> Vec<u8> {
    let shots = shots.map(|s| s.to_string()).unwrap_or_default();
    csv_bytes(
        &SCAN_COLUMNS,
        times
            .iter()
            .zip(p_up)
            .map(|(t, p)| vec![fmt_f64(*t), fmt_f64(*p), shots.clone()]),
    )
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    d_x: usize,
    d_y: usize,
    records: &'a [paraion_core::dynamics::Record],
    #[serde(skip_serializing_if = "Option::is_none")]
    snapshots: Option<Vec<Vec<f64>>>,
    warnings: &'a [paraion_core::dynamics::TrajectoryWarning],
}

/// Snapshots are flattened (row-major for density matrices) as interleaved re/im pairs.
pub fn trajectory_json(traj: &Trajectory) -> Vec<u8> {
    let interleave = |z: &[paraion_core::Complex64]| z.iter().flat_map(|c| [c.re, c.im]).collect::<Vec<f64>>();
    let snapshots = traj.snapshots().map(|s| {
        s.iter()
            .map(|snap| match snap {
                Snapshot::Pure(v) => interleave(v),
                Snapshot::Mixed(m) => interleave(m.as_slice()),
            })
            .collect()
    });
    let doc = TrajectoryJson {
        d_x: traj.space().d_x(),
        d_y: traj.space().d_y(),
        records: traj.records(),
        snapshots,
        warnings: traj.warnings(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("trajectory serializes");
    out.push(b'\n');
    out
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("value serializes");
    out.push(b'\n');
    out
}

/// Numeric CSV with a header row. Empty cells read as NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> CliResult<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| {
                CliError::Input(format!("unknown column `{name}` (available: {})", self.headers.join(", ")))
            })
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

pub fn read_table(path: &Path) -> CliResult<Table> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_table(&text).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_table(text: &str) -> CliResult<Table> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Input(format!("malformed CSV header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(CliError::Input("empty CSV".into()));
    }
    let mut columns = vec![Vec::new(); headers.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("malformed CSV: {e}")))?;
        for (i, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            let v = if cell.is_empty() {
                f64::NAN
            } else {
                cell.parse::<f64>().map_err(|_| {
                    CliError::Input(format!("row {}: column `{}` is not a number: `{cell}`", line + 1, headers[i]))
                })?
            };
            columns[i].push(v);
        }
    }
    if columns[0].is_empty() {
        return Err(CliError::Input("CSV has no data rows".into()));
    }
    Ok(Table { headers, columns })
}

/// Resolves a configured output name against the output directory.
pub fn output_path(out_dir: &Path, name: &str) -> PathBuf {
    let p = Path::new(name);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        out_dir.join(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn table_round_trip_and_errors() {
        let t = parse_table("t_s,P_up,shots\n0,0.5,300\n1e-6,0.25,\n").unwrap();
        assert_eq!(t.rows(), 2);
        assert_eq!(t.column("P_up").unwrap(), [0.5, 0.25]);
        assert!(t.column("shots").unwrap()[1].is_nan());
        assert!(t.column("missing").is_err());
        assert!(parse_table("").is_err());
        assert!(parse_table("t_s,P_up\n").is_err());
        assert!(parse_table("t_s,P_up\n0,abc\n").is_err());
        assert!(parse_table("t_s,P_up\n0,1,2\n").is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
