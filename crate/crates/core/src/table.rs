//! Ball table files and growth-function exports.
//!
//! A table file is line oriented:
//!
//! ```text
//! grigorchuk-ball-table v1
//! scheme omega
//! weight a -1 + 1*x + 1*x^2
//! weight b 2 + -1*x + -1*x^2
//! weight c 1 + 0*x + -1*x^2
//! weight d 1 + -1*x + 0*x^2
//! radius 1 + 0*x + 0*x^2
//! entries 14
//! <hex key>\t<word>\t<length>
//! ...
//! end
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{Generator, Word};
use crate::metrics::{growth_series, BallEntry, BallTable, WeightScheme};
use crate::portrait::Portrait;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "grigorchuk-ball-table v";

pub fn save_table(t: &BallTable, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_table(t, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_table<W: Write + ?Sized>(t: &BallTable, out: &mut W) -> Result<()> {
    writeln!(out, "{MAGIC}{FORMAT_VERSION}")?;
    writeln!(out, "scheme {}", t.scheme().name())?;
    for g in Generator::ALL {
        writeln!(out, "weight {g} {}", t.scheme().weight(g))?;
    }
    writeln!(out, "radius {}", t.radius())?;
    writeln!(out, "entries {}", t.len())?;
    for (key, e) in t.entries() {
        writeln!(out, "{}\t{}\t{}", hex::encode(key), e.word, e.length)?;
    }
    writeln!(out, "end")?;
    Ok(())
}

pub fn load_table(path: &Path) -> Result<BallTable> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    read_table(BufReader::new(file))
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CorruptFile(msg.into())
}

pub fn read_table<R: BufRead>(input: R) -> Result<BallTable> {
    let mut lines = input.lines();
    let mut next_line = |what: &str| -> Result<String> {
        lines.next().ok_or_else(|| corrupt(format!("unexpected end of file, expected {what}")))?.map_err(Error::from)
    };
    let header = next_line("header")?;
    let version = header.strip_prefix(MAGIC).ok_or_else(|| corrupt("missing table header"))?;
    if version != FORMAT_VERSION.to_string() {
        return Err(Error::VersionMismatch { found: version.to_string(), expected: FORMAT_VERSION });
    }
    let field_of = |line: String, tag: &str| -> Result<String> {
        line.strip_prefix(tag)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| corrupt(format!("expected `{tag}` line, found {line:?}")))
    };
    let name = field_of(next_line("scheme")?, "scheme")?;
    let mut weights: Vec<FieldElement> = Vec::with_capacity(4);
    for g in Generator::ALL {
        let v = field_of(next_line("weight")?, &format!("weight {g}"))?;
        weights.push(v.parse().map_err(|e| corrupt(format!("weight {g}: {e}")))?);
    }
    let weights: [FieldElement; 4] = weights.try_into().expect("four weights");
    let scheme = WeightScheme::new(name, weights).map_err(|e| corrupt(e.to_string()))?;
    let radius: FieldElement =
        field_of(next_line("radius")?, "radius")?.parse().map_err(|e| corrupt(format!("radius: {e}")))?;
    let count: usize =
        field_of(next_line("entries")?, "entries")?.parse().map_err(|_| corrupt("entry count is not an integer"))?;

    let mut entries = BTreeMap::new();
    for i in 0..count {
        let line = next_line("entry")?;
        let mut parts = line.split('\t');
        let (Some(k), Some(w), Some(l), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(corrupt(format!("entry {i}: expected three tab-separated fields")));
        };
        let key = hex::decode(k).map_err(|_| corrupt(format!("entry {i}: bad hex key")))?;
        let word: Word = w.parse().map_err(|e| corrupt(format!("entry {i}: {e}")))?;
        let length: FieldElement = l.parse().map_err(|e| corrupt(format!("entry {i}: {e}")))?;
        if Portrait::of_word(&word).canonical_key() != key {
            return Err(corrupt(format!("entry {i}: key does not match word {word}")));
        }
        if length > radius {
            return Err(corrupt(format!("entry {i}: length exceeds radius")));
        }
        if entries.insert(key, BallEntry { word, length }).is_some() {
            return Err(corrupt(format!("entry {i}: duplicate key")));
        }
    }
    if next_line("end")? != "end" {
        return Err(corrupt("missing end marker"));
    }
    Ok(BallTable::from_parts(scheme, radius, entries))
}

/// Exact rendering of a sample point: "p/q" when rational, otherwise the
/// coefficient triple.
pub fn render_exact(n: &FieldElement) -> String {
    match n.as_rational() {
        Some(q) => q.to_string(),
        None => n.to_string(),
    }
}

pub fn render_decimal(n: &FieldElement) -> String {
    format!("{:.10}", n.to_approx(64).to_f64())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub n: String,
    pub gamma: u64,
}

/// (n, γ(n)) rows; n is rendered exactly unless `decimal` is set.
pub fn growth_rows(t: &BallTable, points: &[FieldElement], decimal: bool) -> Result<Vec<GrowthRow>> {
    let gammas = growth_series(t, points)?;
    Ok(points
        .iter()
        .zip(gammas)
        .map(|(n, gamma)| GrowthRow { n: if decimal { render_decimal(n) } else { render_exact(n) }, gamma })
        .collect())
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut s = String::from("n,gamma\n");
    for r in rows {
        let _ = writeln!(s, "{},{}", r.n, r.gamma);
    }
    s
}

pub fn growth_json(rows: &[GrowthRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::enumerate_ball;

    fn unit_two() -> BallTable {
        enumerate_ball(&WeightScheme::unit(), &FieldElement::from_integers(2, 0, 0)).unwrap()
    }

    #[test]
    fn save_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("unit2.tbl");
        let t = unit_two();
        save_table(&t, &path).unwrap();
        assert_eq!(load_table(&path).unwrap(), t);

        let omega = enumerate_ball(&WeightScheme::omega(), &FieldElement::from_integers(2, 0, 0)).unwrap();
        save_table(&omega, &path).unwrap();
        assert_eq!(load_table(&path).unwrap(), omega);
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let mut buf = Vec::new();
        write_table(&unit_two(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let cut = &text[..text.len() / 2];
        assert!(matches!(read_table(cut.as_bytes()), Err(Error::CorruptFile(_))));
        let no_end = text.trim_end().strip_suffix("end").unwrap();
        assert!(matches!(read_table(no_end.as_bytes()), Err(Error::CorruptFile(_))));
    }

    #[test]
    fn tampered_entries_are_rejected() {
        let mut buf = Vec::new();
        write_table(&unit_two(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let swapped = text.replacen("\tb\t", "\tc\t", 1);
        assert!(matches!(read_table(swapped.as_bytes()), Err(Error::CorruptFile(_))));
    }

    #[test]
    fn version_and_missing_file() {
        let bad = "grigorchuk-ball-table v9\n";
        assert!(matches!(read_table(bad.as_bytes()), Err(Error::VersionMismatch { .. })));
        assert!(matches!(read_table("hello\n".as_bytes()), Err(Error::CorruptFile(_))));
        assert!(matches!(load_table(Path::new("")), Err(Error::NotFound(_))));
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_table(&dir.path().join("absent.tbl")), Err(Error::NotFound(_))));
    }

    #[test]
    fn growth_exports() {
        let t = unit_two();
        let pts: Vec<FieldElement> = (0..=2).map(|n| FieldElement::from_integers(n, 0, 0)).collect();
        let rows = growth_rows(&t, &pts, false).unwrap();
        assert_eq!(growth_csv(&rows), "n,gamma\n0,1\n1,5\n2,11\n");
        let json: serde_json::Value = serde_json::from_str(&growth_json(&rows)).unwrap();
        assert_eq!(json[2]["gamma"], 11);
        assert_eq!(json[1]["n"], "1");
        let dec = growth_rows(&t, &pts[1..2], true).unwrap();
        assert_eq!(dec[0].n, "1.0000000000");
        assert_eq!(render_exact(&FieldElement::eta()), "0 + 1*x + 0*x^2");
    }
}
