//! File formats: interval matrices, result tables, plots, trajectories.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Deserialize;

use omega_imc::geometry::{Class, Partition, PropSet};
use omega_imc::imc::{Entry, Imc, IntervalMatrix};

use crate::error::CliError;

/// Writes through a temporary file in the same directory and renames it
/// over `path`.
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Other(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

/// Sparse JSON form: proposition sets per state and `[row, col, lo, hi]`
/// entries, one per line.
pub fn imc_to_json(imc: &Imc) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"n_states\": {},", imc.n_states());
    let props: Vec<Vec<&str>> = imc
        .props()
        .iter()
        .map(|p| p.iter().map(String::as_str).collect())
        .collect();
    let _ = writeln!(s, "  \"props\": {},", serde_json::to_string(&props).expect("strings"));
    let _ = writeln!(s, "  \"entries\": [");
    let mut lines = Vec::with_capacity(imc.matrix().nnz());
    for (q, row) in imc.matrix().rows().iter().enumerate() {
        for e in row {
            lines.push(format!("    [{}, {}, {}, {}]", q, e.col, num(e.lo), num(e.hi)));
        }
    }
    s.push_str(&lines.join(",\n"));
    if !lines.is_empty() {
        s.push('\n');
    }
    let _ = writeln!(s, "  ]");
    s.push_str("}\n");
    s
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ImcFile {
    n_states: usize,
    #[serde(default)]
    props: Option<Vec<Vec<String>>>,
    entries: Vec<(usize, usize, f64, f64)>,
}

/// Parses and validates (including row feasibility) an interval matrix file.
pub fn imc_from_json(text: &str) -> Result<Imc, CliError> {
    let f: ImcFile = serde_json::from_str(text).map_err(|e| CliError::config(format!("IMC file: {e}")))?;
    let mut rows: Vec<Vec<Entry>> = vec![Vec::new(); f.n_states];
    for (q, col, lo, hi) in f.entries {
        if q >= f.n_states || col >= f.n_states {
            return Err(CliError::config(format!("IMC entry ({q}, {col}) out of range")));
        }
        rows[q].push(Entry { col, lo, hi });
    }
    let matrix = IntervalMatrix::new(rows).map_err(|e| CliError::config(format!("IMC file: {e}")))?;
    let props: Vec<PropSet> = match f.props {
        Some(p) => p.into_iter().map(|v| v.into_iter().collect()).collect(),
        None => vec![PropSet::new(); f.n_states],
    };
    Imc::new(matrix, props).map_err(|e| CliError::config(format!("IMC file: {e}")))
}

/// Per-cell bounds and classes. Cell geometry is included when a partition
/// is given.
pub fn results_csv(partition: Option<&Partition>, p_min: &[f64], p_max: &[f64], classes: &[Class]) -> String {
    let mut s = String::from("cell_id");
    if let Some(p) = partition {
        for i in 0..p.domain().dim() {
            let _ = write!(s, ",lo_{i},hi_{i}");
        }
    }
    s.push_str(",p_min,p_max,class\n");
    for j in 0..classes.len() {
        let _ = write!(s, "{j}");
        if let Some(p) = partition {
            let c = p.cell(j);
            for i in 0..c.dim() {
                let _ = write!(s, ",{},{}", c.lower()[i], c.upper()[i]);
            }
        }
        let _ = writeln!(s, ",{},{},{}", p_min[j], p_max[j], classes[j].as_str());
    }
    s
}

pub fn class_color(c: Class) -> &'static str {
    match c {
        Class::Yes => "#2ca02c",
        Class::No => "#d62728",
        Class::Undecided => "#ffd700",
    }
}

/// Cells of a two-dimensional partition colored by class.
pub fn partition_svg(partition: &Partition, classes: &[Class]) -> Option<String> {
    let d = partition.domain();
    if d.dim() != 2 {
        return None;
    }
    const SIZE: f64 = 600.0;
    let (w, h) = (d.width(0), d.width(1));
    let scale = SIZE / w.max(h);
    let (px, py) = (w * scale, h * scale);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{px:.3}\" height=\"{py:.3}\" viewBox=\"0 0 {px:.3} {py:.3}\">"
    );
    for (j, cell) in partition.cells().iter().enumerate() {
        let x = (cell.lower()[0] - d.lower()[0]) * scale;
        let y = (d.upper()[1] - cell.upper()[1]) * scale;
        let _ = writeln!(
            s,
            "  <rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{}\" stroke=\"black\" stroke-width=\"0.3\"><title>{j}</title></rect>",
            cell.width(0) * scale,
            cell.width(1) * scale,
            class_color(classes[j])
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

/// Trajectories as `traj,step,x_0,...` rows.
pub fn trajectories_csv(trajs: &[Vec<Vec<f64>>]) -> String {
    let dim = trajs.first().and_then(|t| t.first()).map_or(0, Vec::len);
    let mut s = String::from("traj,step");
    for i in 0..dim {
        let _ = write!(s, ",x_{i}");
    }
    s.push('\n');
    for (k, t) in trajs.iter().enumerate() {
        for (step, x) in t.iter().enumerate() {
            let _ = write!(s, "{k},{step}");
            for v in x {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imc_json_round_trip() {
        let m = IntervalMatrix::new(vec![
            vec![Entry { col: 0, lo: 0.1, hi: 1.0 / 3.0 }, Entry { col: 1, lo: 0.6, hi: 0.9 }],
            vec![Entry { col: 1, lo: 1.0, hi: 1.0 }],
        ])
        .unwrap();
        let props = vec![PropSet::new(), ["A".to_string()].into_iter().collect()];
        let imc = Imc::new(m, props).unwrap();
        let text = imc_to_json(&imc);
        let back = imc_from_json(&text).unwrap();
        assert_eq!(back.matrix(), imc.matrix());
        assert_eq!(imc_to_json(&back), text);
    }

    #[test]
    fn infeasible_file_rejected() {
        let text = r#"{"n_states": 1, "entries": [[0, 0, 0.1, 0.5]]}"#;
        assert!(imc_from_json(text).is_err());
    }
}
