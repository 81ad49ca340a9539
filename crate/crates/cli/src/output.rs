//! Trace CSV and JSON report writers. Files are written to a temporary file
//! in the target directory and renamed into place.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use splitsolve::algorithms::TraceRecord;

use crate::error::CliError;

/// Header for a trace over `ℝ^{n1} × ℝ^{n2}`.
pub fn trace_header(n1: usize, n2: usize) -> String {
    let mut cols: Vec<String> = [
        "n",
        "coupling_residual",
        "fix_residual_U",
        "fix_residual_T",
        "lyapunov",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cols.extend((0..n1).map(|i| format!("x{i}")));
    cols.extend((0..n2).map(|i| format!("y{i}")));
    cols.join(",")
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_csv(trace: &[TraceRecord], n1: usize, n2: usize) -> String {
    let mut out = trace_header(n1, n2);
    out.push('\n');
    for r in trace {
        let mut fields = vec![
            r.n.to_string(),
            format_value(r.coupling_residual),
            format_value(r.fix_residual_u),
            format_value(r.fix_residual_t),
            r.lyapunov.map(format_value).unwrap_or_default(),
        ];
        fields.extend(
            r.x.coords()
                .iter()
                .chain(r.y.coords())
                .map(|&v| format_value(v)),
        );
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let fail =
        |e: std::io::Error| CliError::config(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::config(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    write_atomic(path, &text)
}
