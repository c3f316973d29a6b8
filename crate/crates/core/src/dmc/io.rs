//! CSV loading: one row per input symbol, decimal entries, `#` comments.

use std::path::Path;

use super::{DiscreteChannel, InputDistribution};
use crate::error::{Error, Result};

fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Config(format!("{}: row {}: '{f}' is not a number", path.display(), line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Accepts either a single row or a single column of probabilities.
pub fn load_input_distribution(path: impl AsRef<Path>) -> Result<InputDistribution> {
    let rows = read_rows(path.as_ref())?;
    let probs = if rows.len() == 1 {
        rows.into_iter().next().unwrap_or_default()
    } else if rows.iter().all(|r| r.len() == 1) {
        rows.into_iter().map(|r| r[0]).collect()
    } else {
        return Err(Error::Config(format!(
            "{}: expected one row or one column of probabilities",
            path.as_ref().display()
        )));
    };
    InputDistribution::new(probs)
}

pub fn load_channel(path: impl AsRef<Path>) -> Result<DiscreteChannel> {
    DiscreteChannel::new(read_rows(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = std::env::temp_dir().join(format!("mismatch-ball-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let qp = dir.join("q.csv");
        let wp = dir.join("w.csv");
        std::fs::write(&qp, "# input\n0.25\n0.75\n").unwrap();
        std::fs::write(&wp, "0.9, 0.1\n0.2, 0.8\n").unwrap();
        assert_eq!(load_input_distribution(&qp).unwrap().probs(), &[0.25, 0.75]);
        assert_eq!(load_channel(&wp).unwrap().get(1, 0), 0.2);
        std::fs::write(&wp, "0.9, x\n").unwrap();
        assert!(matches!(load_channel(&wp), Err(Error::Config(_))));
        std::fs::remove_dir_all(&dir).ok();
    }
}
