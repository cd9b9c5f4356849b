use std::path::Path;

use reqforge_core::store::{import_set, read_requirements, RequirementSet, SetFormat, StoreError};

use crate::CliError;

/// Loads a set file by extension: `.json` and `.csv` are set files,
/// anything else is the plain requirement text format.
pub fn load(path: &Path) -> Result<RequirementSet, CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{shown}: {e}")))?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let format = match ext.as_deref() {
        Some("json") => Some(SetFormat::Json),
        Some("csv") => Some(SetFormat::Csv),
        _ => None,
    };
    let mut set = match format {
        Some(f) => import_set(&bytes, f).map_err(|e| match e {
            StoreError::Schema { .. } => CliError::Schema(format!("{shown}: {e}")),
            other => CliError::Invalid(vec![format!("{shown}: {other}")]),
        })?,
        None => {
            let text = String::from_utf8(bytes).map_err(|e| CliError::Io(format!("{shown}: {e}")))?;
            read_requirements(&text, Some(&shown)).map_err(|diags| {
                CliError::Invalid(diags.iter().map(|d| format!("{shown}:{d}")).collect())
            })?
        }
    };
    if set.project.is_empty() {
        set.project = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
    }
    Ok(set)
}

/// Loads every path into one set; ids must be unique across files. The
/// first file supplies the project name and mode model.
pub fn load_all(paths: &[impl AsRef<Path>]) -> Result<RequirementSet, CliError> {
    let mut merged: Option<RequirementSet> = None;
    for p in paths {
        let set = load(p.as_ref())?;
        merged = Some(match merged {
            None => set,
            Some(acc) => {
                if let Some(dup) = set.iter().find(|r| acc.contains(&r.id)) {
                    return Err(CliError::Invalid(vec![format!(
                        "{}: duplicate id `{}` across files",
                        p.as_ref().display(),
                        dup.id
                    )]));
                }
                let mut modes = acc.modes.clone();
                modes.modes.extend(set.modes.modes.iter().cloned());
                acc.upsert_batch(set.iter().cloned().collect())
                    .map_err(|e| CliError::Invalid(vec![e.to_string()]))?
                    .with_modes(modes)
            }
        });
    }
    merged.ok_or_else(|| CliError::Usage("no input files".into()))
}
