use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::complex::Simplex;
use crate::error::Result;
use crate::geometry::PointCloud;

use super::reconstruct::{IntervalRecord, Reconstruction};

/// Paths of the files written by [`export`].
#[derive(Clone, Debug)]
pub struct ExportedFiles {
    pub barcode: PathBuf,
    pub cycle_off: PathBuf,
    pub cycle_obj: PathBuf,
    pub wrap_off: PathBuf,
    pub report: PathBuf,
}

/// Writes `barcode.json`, `cycle.off`, `cycle.obj`, `wrap.off` and
/// `report.json` into `out_dir`, creating it if needed.
pub fn export(rec: &Reconstruction, out_dir: &Path) -> Result<ExportedFiles> {
    fs::create_dir_all(out_dir)?;
    let files = ExportedFiles {
        barcode: out_dir.join("barcode.json"),
        cycle_off: out_dir.join("cycle.off"),
        cycle_obj: out_dir.join("cycle.obj"),
        wrap_off: out_dir.join("wrap.off"),
        report: out_dir.join("report.json"),
    };
    let bars: Vec<IntervalRecord> = rec.barcode.iter().map(IntervalRecord::from).collect();
    fs::write(&files.barcode, to_json(&bars)?)?;

    let mut cycle: Vec<(Simplex, i64)> = rec
        .report
        .cycle
        .iter()
        .map(|t| (t.simplex.clone(), t.coefficient))
        .collect();
    cycle.sort();
    let cells: Vec<Simplex> = cycle.iter().map(|(s, _)| s.clone()).collect();
    fs::write(&files.cycle_off, off(&rec.cloud, &cells))?;
    fs::write(&files.cycle_obj, obj(&rec.cloud, &cycle))?;

    let wrap: Vec<Simplex> = rec.wrap.simplices().cloned().collect();
    fs::write(&files.wrap_off, off(&rec.cloud, &surface_cells(&wrap)))?;
    fs::write(&files.report, to_json(&rec.report)?)?;
    Ok(files)
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Triangles, plus edges that are not a side of any triangle. Higher cells
/// are represented by their triangles.
fn surface_cells(simplices: &[Simplex]) -> Vec<Simplex> {
    let mut tris: BTreeSet<Simplex> = BTreeSet::new();
    for s in simplices.iter().filter(|s| s.dim() >= 2) {
        tris.extend(s.faces().into_iter().filter(|f| f.dim() == 2));
    }
    let covered: BTreeSet<Simplex> = tris.iter().flat_map(|t| t.facets()).collect();
    let mut out: Vec<Simplex> = simplices
        .iter()
        .filter(|s| s.dim() == 1 && !covered.contains(*s))
        .cloned()
        .collect();
    out.sort();
    out.extend(tris);
    out
}

fn write_vertex(s: &mut String, prefix: &str, p: &[f64]) {
    let coords: Vec<String> = (0..3).map(|k| p.get(k).copied().unwrap_or(0.0).to_string()).collect();
    let _ = writeln!(s, "{prefix}{}", coords.join(" "));
}

/// OFF with every input point as a vertex; edges become two-vertex faces.
fn off(cloud: &PointCloud, cells: &[Simplex]) -> String {
    let cells: Vec<&Simplex> = cells.iter().filter(|c| c.dim() >= 1).collect();
    let mut s = String::from("OFF\n");
    let _ = writeln!(s, "{} {} 0", cloud.len(), cells.len());
    for i in 0..cloud.len() {
        write_vertex(&mut s, "", cloud.input_point(i));
    }
    for c in cells {
        let _ = write!(s, "{}", c.vertices().len());
        for v in c.vertices() {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

/// OBJ with line and face elements grouped by coefficient.
fn obj(cloud: &PointCloud, cycle: &[(Simplex, i64)]) -> String {
    let mut s = String::new();
    for i in 0..cloud.len() {
        write_vertex(&mut s, "v ", cloud.input_point(i));
    }
    let mut groups: BTreeMap<i64, Vec<&Simplex>> = BTreeMap::new();
    for (c, k) in cycle {
        groups.entry(*k).or_default().push(c);
    }
    for (k, cells) in groups {
        let _ = writeln!(s, "g coefficient_{k}");
        for c in cells {
            s.push_str(if c.dim() == 1 { "l" } else { "f" });
            for v in c.vertices() {
                let _ = write!(s, " {}", v + 1);
            }
            s.push('\n');
        }
    }
    s
}
