//! Line-delimited sample dumps: an optional header line followed by one
//! diagram record (`{"rows": [..]}`) per line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::young::YoungDiagram;

/// How per-sample generator streams are derived from the seed.
pub const STREAM_POLICY: &str = "stream_id = sample index";

/// Everything needed to regenerate a dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleHeader {
    pub seed: u64,
    pub stream_policy: String,
    pub parameters: Value,
}

impl SampleHeader {
    pub fn new(seed: u64, parameters: Value) -> Self {
        Self {
            seed,
            stream_policy: STREAM_POLICY.to_string(),
            parameters,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    header: SampleHeader,
}

pub fn write_header(out: &mut impl Write, header: &SampleHeader) -> Result<()> {
    let line = serde_json::to_string(&HeaderLine { header: header.clone() }).map_err(record_err)?;
    writeln!(out, "{line}").map_err(io_err)
}

pub fn write_diagram(out: &mut impl Write, d: &YoungDiagram) -> Result<()> {
    let line = serde_json::to_string(d).map_err(record_err)?;
    writeln!(out, "{line}").map_err(io_err)
}

/// One parsed line of a dump.
#[derive(Debug, Clone, PartialEq)]
pub enum DumpLine {
    Header(SampleHeader),
    Diagram(YoungDiagram),
}

pub fn parse_line(line: &str) -> Result<DumpLine> {
    let value: Value = serde_json::from_str(line).map_err(record_err)?;
    if value.get("header").is_some() {
        let h: HeaderLine = serde_json::from_value(value).map_err(record_err)?;
        return Ok(DumpLine::Header(h.header));
    }
    if value.get("rows").is_none() {
        return Err(Error::Record("expected a \"rows\" or \"header\" field".into()));
    }
    let rows: Vec<i64> = serde_json::from_value(value["rows"].clone()).map_err(record_err)?;
    Ok(DumpLine::Diagram(YoungDiagram::try_from(rows)?))
}

/// Reads a whole dump. Blank lines are skipped; a header may appear at most once.
pub fn read_dump(input: impl BufRead) -> Result<(Option<SampleHeader>, Vec<YoungDiagram>)> {
    let mut header = None;
    let mut diagrams = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line).map_err(|e| Error::Record(format!("line {}: {e}", i + 1)))? {
            DumpLine::Header(h) => {
                if header.replace(h).is_some() {
                    return Err(Error::Record(format!("line {}: second header", i + 1)));
                }
            }
            DumpLine::Diagram(d) => diagrams.push(d),
        }
    }
    Ok((header, diagrams))
}

fn record_err(e: serde_json::Error) -> Error {
    Error::Record(e.to_string())
}

fn io_err(e: std::io::Error) -> Error {
    Error::Record(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dump_round_trip() {
        let ds = vec![
            YoungDiagram::from_rows(vec![3, 1]).unwrap(),
            YoungDiagram::from_rows(vec![1, 1, 1, 1]).unwrap(),
        ];
        let header = SampleHeader::new(7, json!({"n": 4, "count": 2}));
        let mut buf = Vec::new();
        write_header(&mut buf, &header).unwrap();
        for d in &ds {
            write_diagram(&mut buf, d).unwrap();
        }
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap() == r#"{"rows":[3,1]}"#);
        let (h, back) = read_dump(&buf[..]).unwrap();
        assert_eq!(h, Some(header));
        assert_eq!(back, ds);
    }

    #[test]
    fn bad_lines_are_reported() {
        assert!(read_dump(&b"{\"rows\":[1,2]}\n"[..]).is_err());
        assert!(read_dump(&b"{\"rows\":[2,0]}\n"[..]).is_err());
        assert!(read_dump(&b"{\"cols\":[2]}\n"[..]).is_err());
        assert!(read_dump(&b"not json\n"[..]).is_err());
        let (h, d) = read_dump(&b"\n{\"rows\":[]}\n"[..]).unwrap();
        assert!(h.is_none() && d[0].is_empty());
    }
}
