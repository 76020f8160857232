//! Dataset ingestion: a class-per-subdirectory tree or a `path,label` manifest.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{read_wav, window_length, AudioClip, ClassLabel};

/// A file that was skipped at load time, with the reason.
#[derive(Debug, Clone)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

/// Result of loading a dataset directory or manifest.
#[derive(Debug)]
pub struct DatasetLoad {
    pub clips: Vec<AudioClip>,
    pub skipped: Vec<SkippedFile>,
}

/// Load labeled clips from either layout.
///
/// * A directory containing `shot/`, `explosion/`, `alarm/`, `casual/`
///   subdirectories of WAV files, or
/// * a CSV manifest with header `path,label` (paths relative to the manifest).
///
/// Clips whose sample rate differs from `expected_rate` are a hard error.
/// Clips shorter than one 200 ms analysis window are skipped with a warning
/// entry, since they produce no features.
pub fn load_dataset(root: &Path, expected_rate: u32) -> Result<DatasetLoad> {
    let entries = if root.is_file() {
        manifest_entries(root)?
    } else if root.is_dir() {
        directory_entries(root)?
    } else {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
        ));
    };

    let min_len = window_length(expected_rate, 200.0);
    let mut clips = Vec::new();
    let mut skipped = Vec::new();
    for (path, label) in entries {
        let mut clip = read_wav(&path)?;
        if clip.sample_rate != expected_rate {
            return Err(Error::SampleRateMismatch {
                path,
                expected: expected_rate,
                found: clip.sample_rate,
            });
        }
        if clip.len() < min_len {
            skipped.push(SkippedFile {
                path,
                reason: format!(
                    "clip of {} samples is shorter than one {} sample analysis window",
                    clip.len(),
                    min_len
                ),
            });
            continue;
        }
        clip.label = Some(label);
        clips.push(clip);
    }
    Ok(DatasetLoad { clips, skipped })
}

fn directory_entries(root: &Path) -> Result<Vec<(PathBuf, ClassLabel)>> {
    let mut entries = Vec::new();
    for label in ClassLabel::ALL {
        let dir = root.join(label.name());
        if !dir.is_dir() {
            continue;
        }
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .map(|e| e.eq_ignore_ascii_case("wav"))
                    .unwrap_or(false)
            })
            .collect();
        files.sort();
        entries.extend(files.into_iter().map(|p| (p, label)));
    }
    if entries.is_empty() {
        return Err(Error::config(format!(
            "{}: no class subdirectories with WAV files found",
            root.display()
        )));
    }
    Ok(entries)
}

fn manifest_entries(manifest: &Path) -> Result<Vec<(PathBuf, ClassLabel)>> {
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(manifest)
        .map_err(|e| Error::config(format!("{}: {e}", manifest.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::config(format!("{}: {e}", manifest.display())))?
        .clone();
    let path_col = headers.iter().position(|h| h.trim() == "path");
    let label_col = headers.iter().position(|h| h.trim() == "label");
    let (path_col, label_col) = match (path_col, label_col) {
        (Some(p), Some(l)) => (p, l),
        _ => {
            return Err(Error::config(format!(
                "{}: manifest must have `path` and `label` columns",
                manifest.display()
            )))
        }
    };

    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::config(format!("{}: {e}", manifest.display())))?;
        let raw_path = record
            .get(path_col)
            .ok_or_else(|| Error::config("manifest row missing path"))?;
        let label = ClassLabel::from_name(
            record
                .get(label_col)
                .ok_or_else(|| Error::config("manifest row missing label"))?,
        )?;
        let path = PathBuf::from(raw_path);
        let path = if path.is_absolute() { path } else { base.join(path) };
        entries.push((path, label));
    }
    if entries.is_empty() {
        return Err(Error::config(format!(
            "{}: manifest contains no rows",
            manifest.display()
        )));
    }
    Ok(entries)
}

/// Write a `path,label` manifest next to a set of emitted WAV files.
pub fn write_manifest(path: &Path, rows: &[(String, ClassLabel)]) -> Result<()> {
    let mut writer =
        csv::Writer::from_path(path).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    writer
        .write_record(["path", "label"])
        .map_err(|e| Error::config(e.to_string()))?;
    for (file, label) in rows {
        writer
            .write_record([file.as_str(), label.name()])
            .map_err(|e| Error::config(e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
