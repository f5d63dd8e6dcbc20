use std::collections::BTreeSet;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

/// Machine-readable record of one invocation, written to the `--json` sidecar.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub params: Value,
    pub result: Value,
    pub wall_seconds: f64,
    pub exit_code: i32,
}

impl RunReport {
    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n")
            .with_context(|| format!("writing report to {}", path.display()))
    }
}

/// Compact description of a length set: `[3,18]`, `even [4,32] minus {30}`.
pub fn describe(set: &BTreeSet<usize>) -> String {
    let (Some(&lo), Some(&hi)) = (set.first(), set.last()) else {
        return "{}".into();
    };
    let step = if set.iter().all(|l| l % 2 == 0) && set.len() > 1 {
        2
    } else {
        1
    };
    let missing: Vec<String> = (lo..=hi)
        .step_by(step)
        .filter(|l| !set.contains(l))
        .map(|l| l.to_string())
        .collect();
    let mut out = if step == 2 {
        format!("even [{lo},{hi}]")
    } else {
        format!("[{lo},{hi}]")
    };
    if !missing.is_empty() {
        out += &format!(" minus {{{}}}", missing.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn describes_sets() {
        assert_eq!(describe(&(3..=18).collect()), "[3,18]");
        let evens: BTreeSet<usize> = (4..=32).step_by(2).filter(|&l| l != 30).collect();
        assert_eq!(describe(&evens), "even [4,32] minus {30}");
        assert_eq!(describe(&BTreeSet::new()), "{}");
        assert_eq!(describe(&[3, 5].into()), "[3,5] minus {4}");
    }
}
