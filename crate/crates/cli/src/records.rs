//! CSV form of convergence records.
//!
//! Floats are written with `{:e}`, which is the shortest representation that
//! parses back to the same bits.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context, Result};
use medqmc_core::testbed::{ConvergenceRecord, RuleKind};

pub const HEADER: [&str; 11] = ["rule", "function", "c", "s", "b", "m", "N", "r", "w", "seed", "abs_error"];
pub const REPLICATE_HEADER: [&str; 8] = ["rule", "function", "c", "s", "b", "m", "replicate", "abs_error"];

fn c_field(c: Option<f64>) -> String {
    c.map(|c| format!("{c}")).unwrap_or_default()
}

fn comment_lines(out: &mut impl Write, comment: &str) -> Result<()> {
    for line in comment.lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

pub fn write_records(mut out: impl Write, comment: &str, records: &[ConvergenceRecord]) -> Result<()> {
    comment_lines(&mut out, comment)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.rule.id().to_string(),
            r.function.to_string(),
            c_field(r.c),
            r.s.to_string(),
            r.b.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.r.to_string(),
            r.w.to_string(),
            r.seed.to_string(),
            format!("{:e}", r.abs_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per (record, draw).
pub fn write_replicates(mut out: impl Write, comment: &str, records: &[ConvergenceRecord]) -> Result<()> {
    comment_lines(&mut out, comment)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPLICATE_HEADER)?;
    for r in records {
        for (i, e) in r.replicate_errors.iter().enumerate() {
            w.write_record([
                r.rule.id().to_string(),
                r.function.to_string(),
                c_field(r.c),
                r.s.to_string(),
                r.b.to_string(),
                r.m.to_string(),
                i.to_string(),
                format!("{e:e}"),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn function_id(s: &str) -> Result<&'static str> {
    Ok(match s {
        "f1" => "f1",
        "f2" => "f2",
        "f3" => "f3",
        "f4" => "f4",
        "f5" => "f5",
        _ => bail!("unknown function {s:?}"),
    })
}

/// Reads records written by [`write_records`]. Replicate errors are not
/// part of this file and come back empty.
pub fn read_records(input: impl Read) -> Result<Vec<ConvergenceRecord>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        bail!("unexpected header {header:?}");
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let field = |j: usize| row.get(j).ok_or_else(|| anyhow!("row {line}: missing {}", HEADER[j]));
        let parse = |j: usize| -> Result<u64> {
            field(j)?.parse().with_context(|| format!("row {line}: bad {}", HEADER[j]))
        };
        let c = match field(2)? {
            "" => None,
            v => Some(v.parse().with_context(|| format!("row {line}: bad c"))?),
        };
        out.push(ConvergenceRecord {
            rule: field(0)?.parse::<RuleKind>()?,
            function: function_id(field(1)?)?,
            c,
            s: parse(3)? as usize,
            b: parse(4)? as u32,
            m: parse(5)? as usize,
            n: parse(6)?,
            r: parse(7)? as u32,
            w: parse(8)? as usize,
            seed: parse(9)?,
            abs_error: field(10)?.parse().with_context(|| format!("row {line}: bad abs_error"))?,
            replicate_errors: Vec::new(),
        });
    }
    Ok(out)
}
