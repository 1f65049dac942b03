use super::SweepRow;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
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
            _ => Err(Error::validation("format", format!("expected 'csv' or 'json', got '{s}'"))),
        }
    }
}

/// CSV header, in column order.
///
/// Numbers use 17 significant digits in `d.dddddddddddddddde±x` form;
/// non-finite values are written `inf`, `-inf` or `NaN`; absent values are
/// empty fields.
pub const CSV_COLUMNS: [&str; 21] = [
    "sweep",
    "scenario",
    "quantity",
    "n_alpha",
    "gain",
    "n_gamma",
    "transmissivity",
    "eta",
    "kappa",
    "tau",
    "regime",
    "stats",
    "value",
    "method",
    "mu_min",
    "mu_max",
    "err_est",
    "argmax",
    "baseline",
    "difference",
    "status",
];

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn record(r: &SweepRow) -> [String; 21] {
    [
        r.sweep.clone(),
        r.scenario.as_str().to_owned(),
        r.quantity.as_str().to_owned(),
        num(r.n_alpha),
        num(r.gain),
        num(r.n_gamma),
        opt(r.transmissivity),
        opt(r.eta),
        opt(r.kappa),
        opt(r.tau),
        r.regime.map(|g| g.as_str().to_owned()).unwrap_or_default(),
        r.stats.as_str().to_owned(),
        num(r.value),
        r.method.map(|m| m.as_str().to_owned()).unwrap_or_default(),
        opt(r.mu_min),
        opt(r.mu_max),
        opt(r.err_est),
        r.argmax.map(|k| k.as_str().to_owned()).unwrap_or_default(),
        opt(r.baseline),
        opt(r.difference),
        r.status.clone(),
    ]
}

pub fn write_csv<W: Write>(w: W, rows: &[SweepRow]) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in rows {
        out.write_record(record(r))?;
    }
    out.flush()
}

pub fn write_json<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, rows)?;
    w.write_all(b"\n")
}

pub fn read_json(text: &str) -> Result<Vec<SweepRow>> {
    serde_json::from_str(text).map_err(|e| Error::validation("json", e.to_string()))
}

/// Writes `rows` to `path` in `format`, creating parent directories.
pub fn write_rows(path: &Path, format: Format, rows: &[SweepRow]) -> Result<()> {
    let io_err = |e: io::Error| Error::io(path, &e);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let file = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    match format {
        Format::Csv => write_csv(file, rows),
        Format::Json => write_json(file, rows),
    }
    .map_err(io_err)
}

// JSON has no literal for inf/NaN; those travel as strings so a written
// file parses back to the same rows.
pub(crate) mod float {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(super) enum Repr {
        Num(f64),
        Text(String),
    }

    pub(super) fn to_repr(x: f64) -> Repr {
        if x.is_finite() {
            Repr::Num(x)
        } else {
            Repr::Text(x.to_string())
        }
    }

    pub(super) fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(x) => Ok(x),
            Repr::Text(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "NaN" => Ok(f64::NAN),
                _ => Err(E::custom(format!("not a number: '{s}'"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

pub(crate) mod opt_float {
    use super::float::{from_repr, to_repr, Repr};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(to_repr).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
    }
}
