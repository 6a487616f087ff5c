//! Report and error emission. Reports go to stdout or — with `--out` —
//! to a file written atomically (temp file in the same directory, then
//! rename), so a crashed run never leaves a truncated report behind.

use std::path::Path;

use crate::CliError;

pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    let text = if content.ends_with('\n') {
        content.to_string()
    } else {
        format!("{content}\n")
    };
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut tmp_name = path
                .file_name()
                .ok_or_else(|| {
                    CliError::Usage(format!("output path {} has no file name", path.display()))
                })?
                .to_os_string();
            tmp_name.push(format!(".tmp{}", std::process::id()));
            let tmp = path.with_file_name(tmp_name);
            std::fs::write(&tmp, &text).map_err(|e| {
                CliError::Io(format!("cannot write {}: {e}", tmp.display()))
            })?;
            std::fs::rename(&tmp, path).map_err(|e| {
                CliError::Io(format!("cannot move report into {}: {e}", path.display()))
            })
        }
    }
}

/// Pretty-printed JSON with a stable key order (maps are sorted), so
/// identical configurations produce byte-identical output.
pub fn render_json(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("report values are always serializable")
}

/// Errors are machine-readable too: one `{error, detail}` JSON object
/// on stderr.
pub fn emit_error(kind: &str, detail: &str) {
    eprintln!("{}", serde_json::json!({ "error": kind, "detail": detail }));
}
