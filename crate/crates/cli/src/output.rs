use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// Fixed 12 significant digits so that reruns are byte-identical.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV with a header row and numeric cells in [`format_value`] form.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(row.iter().map(|&x| format_value(x)))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Write to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Output {
            path: p.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output {
                path: "stdout".into(),
                source,
            }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let s = csv_string(&["x", "y"], &[vec![1.0, -0.5], vec![0.0, 1e-20]]);
        assert_eq!(
            s,
            "x,y\n1.00000000000e0,-5.00000000000e-1\n0.00000000000e0,1.00000000000e-20\n"
        );
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let err = emit("x", Some(Path::new("/nonexistent-dir/sub/out.csv"))).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
