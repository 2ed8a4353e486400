//! CSV, manifest and plot-script writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::params::{FieldPair, PointST};
use crate::rogon::FieldGrid;

pub const FIELD_HEADER: &str = "S,t,re_sigma,im_sigma,re_psi,im_psi,I_sigma,I_psi";
pub const SERIES_HEADER: &str = "t,N_sigma,N_psi,momentum,hamiltonian,l2_rel_vs_analytic";

/// Shortest round-trip decimal form of `v`; exponent notation outside
/// `[1e-5, 1e16)` keeps very small and very large values compact.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || v.is_nan() || v.is_infinite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn push_field_row(out: &mut String, x: PointST, v: &FieldPair) {
    let cols = [
        x.s,
        x.t,
        v.sigma.re,
        v.sigma.im,
        v.psi.re,
        v.psi.im,
        v.intensity_sigma(),
        v.intensity_psi(),
    ];
    for (i, c) in cols.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*c));
    }
    out.push('\n');
}

/// Field CSV: header line, then one row per sample in the given order.
pub fn field_csv<'a>(rows: impl IntoIterator<Item = (PointST, &'a FieldPair)>) -> String {
    let mut out = String::with_capacity(1 << 16);
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for (x, v) in rows {
        push_field_row(&mut out, x, v);
    }
    out
}

/// Grid CSV in t-major, then S order.
pub fn grid_csv(g: &FieldGrid) -> String {
    field_csv(g.points())
}

pub fn series_csv(rows: &[crate::solver::SeriesRow]) -> String {
    let mut out = String::new();
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for r in rows {
        let c = &r.conserved;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(c.t),
            fmt_f64(c.n_sigma),
            fmt_f64(c.n_psi),
            fmt_f64(c.momentum),
            fmt_f64(c.hamiltonian),
            r.l2_rel_vs_analytic.map(fmt_f64).unwrap_or_default()
        );
    }
    out
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Full argument vector, suitable for re-running.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String], parameters: serde_json::Value) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            argv: argv.to_vec(),
            parameters,
            outputs: Vec::new(),
            notes: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }
}

/// Collects written files so the manifest can list them.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputSet {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(&dir)?;
        }
        Ok(OutputSet {
            dir,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.written.push(name.to_string());
        Ok(path)
    }

    pub fn finish(mut self, name: &str, mut manifest: RunManifest) -> std::io::Result<PathBuf> {
        self.written.push(name.to_string());
        manifest.outputs = self.written;
        let mut json = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
        json.push('\n');
        let path = self.dir.join(name);
        fs::write(&path, json)?;
        Ok(path)
    }
}

/// Splits an `--out` value into its directory and file stem.
pub fn split_out(out: &Path) -> (PathBuf, String) {
    let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
    let stem = out
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    (dir, stem)
}

/// File-name-safe label for a time value, e.g. `0.4` → `t0.4`, `-1` → `t-1`.
pub fn time_label(t: f64) -> String {
    format!("t{}", fmt_f64(t))
}

/// Matplotlib script drawing the intensity surfaces and densities of both
/// components from a field CSV.
pub fn surface_script(csv_name: &str, title: &str, ns: usize, nt: usize) -> String {
    format!(
        r#"#!/usr/bin/env python3
# Intensity surfaces and density maps of |sigma|^2 and |psi|^2.
# Usage: python3 this_script.py [output.png]
import sys
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

NS, NT = {ns}, {nt}
d = np.loadtxt("{csv_name}", delimiter=",", skiprows=1)
S = d[:, 0].reshape(NT, NS)
T = d[:, 1].reshape(NT, NS)
fig = plt.figure(figsize=(11, 8))
fig.suptitle("{title}")
for row, (col, name) in enumerate([(6, r"$|\sigma|^2$"), (7, r"$|\psi|^2$")]):
    I = d[:, col].reshape(NT, NS)
    ax = fig.add_subplot(2, 2, 2 * row + 1, projection="3d")
    ax.plot_surface(S, T, I, cmap="jet", linewidth=0, antialiased=False)
    ax.set_xlabel("S"); ax.set_ylabel("t"); ax.set_zlabel(name)
    ax = fig.add_subplot(2, 2, 2 * row + 2)
    m = ax.pcolormesh(S, T, I, cmap="jet", shading="auto")
    fig.colorbar(m, ax=ax)
    ax.set_xlabel("S"); ax.set_ylabel("t"); ax.set_title(name + " density")
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else "surface.png", dpi=150)
"#
    )
}

/// Matplotlib script overlaying intensity slices; successive times use
/// solid, dashed and dash-dotted lines.
pub fn slices_script(files: &[(f64, String)], title: &str) -> String {
    let entries: Vec<String> = files
        .iter()
        .map(|(t, f)| format!("    ({}, \"{}\"),", fmt_f64(*t), f))
        .collect();
    format!(
        r#"#!/usr/bin/env python3
# Intensity-vs-S slices at fixed times.
# Usage: python3 this_script.py [output.png]
import sys
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

SLICES = [
{entries}
]
STYLES = ["-", "--", "-.", ":"]
fig, axes = plt.subplots(1, 2, figsize=(11, 4))
fig.suptitle("{title}")
for i, (t, name) in enumerate(SLICES):
    d = np.loadtxt(name, delimiter=",", skiprows=1, ndmin=2)
    style = STYLES[i % len(STYLES)]
    axes[0].plot(d[:, 0], d[:, 6], style, color="k", label=f"t={{t}}")
    axes[1].plot(d[:, 0], d[:, 7], style, color="k", label=f"t={{t}}")
for ax, name in zip(axes, [r"$|\sigma|^2$", r"$|\psi|^2$"]):
    ax.set_xlabel("S"); ax.set_ylabel(name); ax.legend()
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else "slices.png", dpi=150)
"#,
        entries = entries.join("\n")
    )
}
