//! CSV and JSON serialization of result sets.
//!
//! Every file starts with a provenance header. JSON files carry it as the
//! `provenance` block of each series; CSV files carry it as `#` comment lines
//! ahead of the column header.
//!
//! CSV schemas by experiment kind:
//!
//! * resonance (discrete, continuous, crx): `swept_value,series_id,probability`
//!   (trial mean per grid point);
//! * convergence: `n_steps,series_id,distance`;
//! * localization: `R,trial,ipr_ave,pt_mean` plus companions
//!   `<stem>_eta.csv` with `R,trial,eta,ipr,pt` and `<stem>_profile.csv`
//!   with `R,trial,qubit,probability`. `ipr` columns are empty for
//!   controlled-Rx runs.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::figures::ResultSet;
use crate::sweep::ExperimentKind;
use crate::TOOL_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::config(format!("unknown output format {other:?}"))),
        }
    }
}

/// One rendered output file: name suffix (empty for the main file) and text.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub suffix: &'static str,
    pub contents: String,
}

fn header_lines(set: &ResultSet) -> Result<String> {
    let mut out = format!(
        "# trotterlab {TOOL_VERSION}\n# label: {}\n# kind: {}\n",
        set.label,
        set.kind.name()
    );
    for series in &set.series {
        let p = &series.result.provenance;
        let json = serde_json::to_string(p)
            .map_err(|e| Error::config(format!("cannot serialize provenance: {e}")))?;
        out.push_str(&format!(
            "# series {:?}: seed={} generator={} provenance={json}\n",
            series.id, p.master_seed, p.generator
        ));
    }
    Ok(out)
}

/// Shortest round-trip text; switches to exponent form for tiny or huge values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(columns: &[&str]) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(columns).map_err(csv_error)?;
        Ok(Self { writer })
    }

    fn row<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: Display,
    {
        self.writer
            .write_record(fields.into_iter().map(|f| f.to_string()))
            .map_err(csv_error)
    }

    fn finish(self, header: &str) -> Result<String> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| Error::config(format!("csv flush failed: {e}")))?;
        let body = String::from_utf8(bytes).map_err(|e| Error::config(e.to_string()))?;
        Ok(format!("{header}{body}"))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::config(format!("csv encoding failed: {e}"))
}

/// Renders `set` as the CSV files of its experiment kind.
pub fn render_csv(set: &ResultSet) -> Result<Vec<Rendered>> {
    let header = header_lines(set)?;
    match set.kind {
        ExperimentKind::ResonanceDiscrete
        | ExperimentKind::ResonanceContinuous
        | ExperimentKind::CrxResonance => {
            let mut t = Table::new(&["swept_value", "series_id", "probability"])?;
            for s in &set.series {
                for agg in &s.result.aggregates {
                    let p = agg.observables.get("probability").map(|st| st.mean);
                    t.row([num(agg.value), s.id.clone(), opt(p)])?;
                }
            }
            Ok(vec![Rendered {
                suffix: "",
                contents: t.finish(&header)?,
            }])
        }
        ExperimentKind::Convergence => {
            let mut t = Table::new(&["n_steps", "series_id", "distance"])?;
            for s in &set.series {
                for agg in &s.result.aggregates {
                    let d = agg.observables.get("distance").map(|st| st.mean);
                    t.row([agg.value.to_string(), s.id.clone(), opt(d)])?;
                }
            }
            Ok(vec![Rendered {
                suffix: "",
                contents: t.finish(&header)?,
            }])
        }
        ExperimentKind::Localization => {
            let mut main = Table::new(&["R", "trial", "ipr_ave", "pt_mean"])?;
            let mut eta = Table::new(&["R", "trial", "eta", "ipr", "pt"])?;
            let mut profile = Table::new(&["R", "trial", "qubit", "probability"])?;
            for s in &set.series {
                for row in &s.result.rows {
                    let r = num(row.value);
                    let trial = row.trial.to_string();
                    main.row([
                        r.clone(),
                        trial.clone(),
                        opt(row.observables.get("ipr_ave").copied()),
                        opt(row.observables.get("pt_mean").copied()),
                    ])?;
                    let ipr = row.traces.get("ipr");
                    let pt = row.traces.get("pt").map(Vec::as_slice).unwrap_or(&[]);
                    for (k, p) in pt.iter().enumerate() {
                        eta.row([
                            r.clone(),
                            trial.clone(),
                            (k + 1).to_string(),
                            opt(ipr.and_then(|v| v.get(k)).copied()),
                            num(*p),
                        ])?;
                    }
                    for (q, p) in row.traces.get("profile").into_iter().flatten().enumerate() {
                        profile.row([r.clone(), trial.clone(), (q + 1).to_string(), num(*p)])?;
                    }
                }
            }
            Ok(vec![
                Rendered {
                    suffix: "",
                    contents: main.finish(&header)?,
                },
                Rendered {
                    suffix: "_eta",
                    contents: eta.finish(&header)?,
                },
                Rendered {
                    suffix: "_profile",
                    contents: profile.finish(&header)?,
                },
            ])
        }
    }
}

pub fn render_json(set: &ResultSet) -> Result<String> {
    let mut s = serde_json::to_string_pretty(set)
        .map_err(|e| Error::config(format!("cannot serialize results: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// `out.csv` + `_eta` -> `out_eta.csv`.
pub fn companion_path(path: &Path, suffix: &str) -> PathBuf {
    if suffix.is_empty() {
        return path.to_path_buf();
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

/// Writes `set` to `path` (and companions for CSV localization output).
pub fn write_outputs(set: &ResultSet, path: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let files = match format {
        Format::Json => vec![Rendered {
            suffix: "",
            contents: render_json(set)?,
        }],
        Format::Csv => render_csv(set)?,
    };
    files
        .into_iter()
        .map(|f| {
            let target = companion_path(path, f.suffix);
            fs::write(&target, f.contents).map_err(|e| Error::Io {
                path: target.display().to_string(),
                message: e.to_string(),
            })?;
            Ok(target)
        })
        .collect()
}
