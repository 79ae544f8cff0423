//! Sweep tables. The main CSV is byte-for-byte reproducible; wall times go
//! to a `.timing.csv` sidecar next to it.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::HarnessError;
use crate::sweep::SweepRow;

pub const COLUMNS: [&str; 13] = [
    "world",
    "triple",
    "method",
    "n",
    "delta",
    "agent",
    "seed",
    "p_true",
    "p_hat",
    "abs_error",
    "bound_at_true",
    "bound_holds",
    "queries",
];

fn csv_error(e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::Io(io),
        other => HarnessError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Rows followed by `# key,value` summary lines.
pub fn write_rows<W: Write>(out: W, rows: &[SweepRow], summary: &[(String, String)]) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(COLUMNS).map_err(csv_error)?;
    for r in rows {
        writer
            .write_record([
                r.world.clone(),
                r.triple.clone(),
                r.method.to_string(),
                r.n.to_string(),
                r.delta.to_string(),
                r.agent.to_string(),
                r.seed.to_string(),
                r.p_true.to_string(),
                r.p_hat.to_string(),
                r.abs_error.to_string(),
                r.bound_at_true.to_string(),
                r.bound_holds.to_string(),
                r.queries.to_string(),
            ])
            .map_err(csv_error)?;
    }
    let mut out = writer.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    for (key, value) in summary {
        writeln!(out, "# {key},{value}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_timing<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["triple", "n", "delta", "agent", "seed", "wall_seconds"]).map_err(csv_error)?;
    for r in rows {
        writer
            .write_record([
                r.triple.clone(),
                r.n.to_string(),
                r.delta.to_string(),
                r.agent.to_string(),
                r.seed.to_string(),
                r.wall_time.as_secs_f64().to_string(),
            ])
            .map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn timing_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".timing.csv");
    out.with_file_name(name)
}

/// Writes the table and its sidecar; returns the sidecar path.
pub fn write_files(out: &Path, rows: &[SweepRow], summary: &[(String, String)]) -> Result<PathBuf, HarnessError> {
    write_rows(std::fs::File::create(out)?, rows, summary)?;
    let timing = timing_path(out);
    write_timing(std::fs::File::create(&timing)?, rows)?;
    Ok(timing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AgentMode;
    use std::time::Duration;
    use worldlens_core::extraction::Method;

    fn row(wall: u64) -> SweepRow {
        SweepRow {
            world: "chain(0.35)".into(),
            triple: "s0,R,s1".into(),
            method: Method::Stochastic,
            n: 100,
            delta: 0.1,
            agent: AgentMode::Random,
            seed: 7,
            p_true: 0.35,
            p_hat: 0.36,
            abs_error: 0.010000000000000009,
            bound_at_true: 0.2,
            bound_holds: true,
            queries: 101,
            wall_time: Duration::from_millis(wall),
        }
    }

    #[test]
    fn rows_do_not_depend_on_wall_time() {
        let render = |wall| {
            let mut buf = Vec::new();
            write_rows(&mut buf, &[row(wall)], &[("violations".into(), "0".into())]).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let text = render(1);
        assert_eq!(text, render(900));
        assert!(text.starts_with("world,triple,method,"));
        assert!(text.contains("\"s0,R,s1\""));
        assert!(text.ends_with("# violations,0\n"));
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(timing_path(Path::new("out/rows.csv")), PathBuf::from("out/rows.timing.csv"));
    }
}
