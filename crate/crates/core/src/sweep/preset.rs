use super::{run_sweep, write_rows, Format, PresetFile, SweepConfig, SweepRow};
use crate::error::{Error, Result};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Shipped figure presets. Their parameter files live in `presets/`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig7,
    Fig8a,
    Fig8b,
    Fig9,
}

impl Preset {
    pub const ALL: [Preset; 10] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig5a,
        Preset::Fig5b,
        Preset::Fig7,
        Preset::Fig8a,
        Preset::Fig8b,
        Preset::Fig9,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig7 => "fig7",
            Preset::Fig8a => "fig8a",
            Preset::Fig8b => "fig8b",
            Preset::Fig9 => "fig9",
        }
    }

    /// The preset's TOML source.
    pub fn source(&self) -> &'static str {
        match self {
            Preset::Fig2 => include_str!("../../presets/fig2.toml"),
            Preset::Fig3 => include_str!("../../presets/fig3.toml"),
            Preset::Fig4a => include_str!("../../presets/fig4a.toml"),
            Preset::Fig4b => include_str!("../../presets/fig4b.toml"),
            Preset::Fig5a => include_str!("../../presets/fig5a.toml"),
            Preset::Fig5b => include_str!("../../presets/fig5b.toml"),
            Preset::Fig7 => include_str!("../../presets/fig7.toml"),
            Preset::Fig8a => include_str!("../../presets/fig8a.toml"),
            Preset::Fig8b => include_str!("../../presets/fig8b.toml"),
            Preset::Fig9 => include_str!("../../presets/fig9.toml"),
        }
    }

    pub fn file(&self) -> Result<PresetFile> {
        PresetFile::from_toml(self.source())
    }

    /// Evaluates every sweep of the preset, in file order.
    pub fn rows(&self, opts: &PresetOptions) -> Result<Vec<SweepRow>> {
        let mut rows = Vec::new();
        for sweep in self.file()?.sweep {
            let spec = opts.overrides.clone().or(sweep).into_spec()?;
            rows.extend(run_sweep(&spec, opts.threads)?);
        }
        Ok(rows)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::validation("preset", format!("unknown preset '{s}'")))
    }
}

#[derive(Debug, Clone, Default)]
pub struct PresetOptions {
    /// Worker threads; 0 lets rayon choose.
    pub threads: usize,
    /// Settings that take precedence over every sweep in the preset file.
    pub overrides: SweepConfig,
}

/// Runs `preset` and writes `<out_dir>/<name>.csv`. Returns the written paths.
pub fn run_figure_preset(preset: Preset, out_dir: &Path, opts: &PresetOptions) -> Result<Vec<PathBuf>> {
    let rows = preset.rows(opts)?;
    let path = out_dir.join(format!("{}.csv", preset.name()));
    write_rows(&path, Format::Csv, &rows)?;
    Ok(vec![path])
}
