//! Results and timing tables of a sweep.

use std::fs;
use std::path::Path;

use graphot::eval::{Setting, SettingResult};
use graphot::synth::Shape;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub shape: Shape,
    pub t: f64,
    pub level: Option<u8>,
    pub alpha: f64,
    pub method: String,
    pub reps: usize,
    pub seed: u64,
    pub mean_ari: f64,
    pub std_ari: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub shape: Shape,
    pub t: f64,
    pub level: Option<u8>,
    pub alpha: f64,
    pub method: String,
    pub reps: usize,
    pub mean_seconds: f64,
}

impl ResultRow {
    pub fn new(r: &SettingResult, seed: u64) -> Self {
        Self {
            shape: r.setting.shape,
            t: r.setting.t,
            level: r.setting.level,
            alpha: r.setting.alpha,
            method: r.method.clone(),
            reps: r.aris.len(),
            seed,
            mean_ari: r.mean_ari(),
            std_ari: r.std_ari(),
        }
    }

    pub fn setting(&self) -> Setting {
        Setting {
            shape: self.shape,
            t: self.t,
            level: self.level,
            alpha: self.alpha,
        }
    }

    pub fn setting_label(&self) -> String {
        let mut s = format!("{} t={}", self.shape.label(), self.t);
        if let Some(level) = self.level {
            s += &format!(" level={level}");
        }
        s + &format!(" alpha={}", self.alpha)
    }
}

impl TimingRow {
    pub fn new(r: &SettingResult) -> Self {
        Self {
            shape: r.setting.shape,
            t: r.setting.t,
            level: r.setting.level,
            alpha: r.setting.alpha,
            method: r.method.clone(),
            reps: r.seconds.len(),
            mean_seconds: r.mean_seconds(),
        }
    }
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path)?;
    Ok(reader.deserialize().collect::<Result<_, _>>()?)
}

/// Writes through a temporary file so an interrupted sweep never leaves a
/// truncated table behind.
pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let tmp = path.with_extension("csv.partial");
    {
        let mut writer = csv::Writer::from_path(&tmp)?;
        for row in rows {
            writer.serialize(row)?;
        }
        writer.flush().map_err(CliError::io(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(CliError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let rows = vec![
            ResultRow {
                shape: Shape::Sparse,
                t: 0.1,
                level: None,
                alpha: 0.5,
                method: "srgw-mean".into(),
                reps: 3,
                seed: 9,
                mean_ari: 2.0 / 3.0,
                std_ari: 0.125,
            },
            ResultRow {
                shape: Shape::FullyConnected,
                t: 1.0,
                level: Some(4),
                alpha: 1.0,
                method: "embedded-frechet-kmeans@on-d1".into(),
                reps: 3,
                seed: 9,
                mean_ari: -0.01,
                std_ari: 0.0,
            },
        ];
        write_rows(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("shape,t,level,alpha,method,reps,seed,mean_ari,std_ari\nsparse,0.1,,0.5,"));
        assert_eq!(read_rows::<ResultRow>(&path).unwrap(), rows);
    }
}
