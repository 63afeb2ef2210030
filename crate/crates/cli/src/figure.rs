//! `rfsq figure`: dataset CSV, metadata sidecar and gnuplot script.

use std::io::Write;
use std::path::{Path, PathBuf};

use rfsq_core::figures::{figure_dataset, Dataset};
use serde_json::json;

use crate::args::{Format, Globals};
use crate::{table, write_output, Failure};

/// Paths written for a figure whose CSV lives at `csv`.
pub fn sidecar_paths(csv: &Path) -> (PathBuf, PathBuf) {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let dir = csv.parent().unwrap_or(Path::new(""));
    (
        dir.join(format!("{stem}.meta.json")),
        dir.join(format!("{stem}.gp")),
    )
}

pub(crate) fn emit(
    number: u8,
    g: &Globals,
    script: bool,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let data = figure_dataset(number)?;
    let serialize = |e: serde_json::Error| Failure {
        kind: "serialize".into(),
        detail: e.to_string(),
        code: crate::EXIT_INVALID,
    };

    if g.format == Some(Format::Json) {
        let doc = json!({"meta": data.meta, "columns": data.columns, "rows": data.rows});
        let text = serde_json::to_string_pretty(&doc).map_err(serialize)?;
        return write_output(g.out.as_deref(), stdout, |w| writeln!(w, "{text}"));
    }

    let csv = g
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("fig{number}.csv")));
    write_output(Some(&csv), stdout, |w| {
        table::write_table(w, &data.columns, &data.rows)
    })?;
    let (meta_path, script_path) = sidecar_paths(&csv);
    let meta = serde_json::to_string_pretty(&data.meta).map_err(serialize)?;
    write_output(Some(&meta_path), stdout, |w| writeln!(w, "{meta}"))?;
    let mut written = vec![csv.display().to_string(), meta_path.display().to_string()];
    if script {
        let file_name = csv
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = gnuplot_script(&data, &file_name);
        write_output(Some(&script_path), stdout, |w| w.write_all(text.as_bytes()))?;
        written.push(script_path.display().to_string());
    }
    let _ = writeln!(
        stdout,
        "figure {number}: {} rows -> {}",
        data.rows.len(),
        written.join(", ")
    );
    Ok(())
}

/// Plot script for the dataset; run it from the directory holding `csv_name`.
pub fn gnuplot_script(data: &Dataset, csv_name: &str) -> String {
    let meta = &data.meta;
    let mut s = format!(
        "# figure {}: {}\n# rfsq {}\nset datafile separator ','\nset grid\n",
        meta.figure, meta.description, meta.artifact_version
    );
    let source = format!("'{csv_name}' skip 2");
    match data.columns.len() {
        3 if meta.figure != 5 => {
            let c = &data.columns;
            s += &format!(
                "set xlabel '{}'\nset ylabel '{}'\nset cblabel '{}'\nset view map\n\
                 plot {source} using 1:2:3 with image notitle\n",
                c[0], c[1], c[2]
            );
        }
        3 => {
            s += &format!(
                "set xlabel 'n_sq'\nset ylabel 'variance'\n\
                 plot {source} using 1:2 with lines title '{}', \\\n     {source} using 1:3 with lines dashtype 2 title '{}'\n",
                data.columns[1], data.columns[2]
            );
        }
        _ => {
            let metric = &data.columns[3];
            s += &format!(
                "set xlabel 'omega'\nset ylabel '{metric}, sigma'\nset multiplot layout {},1\n",
                meta.fixed.len()
            );
            for (panel, p) in meta.fixed.iter().enumerate() {
                s += &format!(
                    "set title 'N = {}'\nplot {source} using 3:($1=={panel} ? $4 : 1/0) with lines title '{metric}', \\\n     {source} using 3:($1=={panel} ? $5 : 1/0) with lines dashtype 2 title 'sigma'\n",
                    p.n_sq
                );
            }
            s += "unset multiplot\n";
        }
    }
    s
}
