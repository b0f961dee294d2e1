//! Rectangular numeric tables and their CSV form.
//!
//! Layout: a block of `# key: value` comment lines (provenance first, then
//! one `# flagged: <axis value> | <label>` line per failed sample), a header
//! row, then data rows. Numbers are written as `{:.16e}`, 17 significant
//! digits, which round-trips every binary64 value exactly.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedRow {
    pub axis_value: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub flagged: Vec<FlaggedRow>,
    /// Ordered `key: value` provenance entries.
    pub provenance: Vec<(String, String)>,
}

const FLAGGED_KEY: &str = "flagged";

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn single_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        ResultTable {
            columns,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(Error::invalid(
                    "table",
                    format!("row {i} has {} cells, expected {}", row.len(), self.columns.len()),
                ));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("table", format!("row {i} has a non-finite entry")));
            }
        }
        for (k, v) in &self.provenance {
            if k == FLAGGED_KEY || k.contains(':') || k.contains('\n') || v.contains('\n') {
                return Err(Error::invalid("table", format!("bad provenance entry `{k}`")));
            }
        }
        Ok(())
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of a named column.
    pub fn column_values(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Writes `table` as CSV.
pub fn emit_csv<W: Write>(table: &ResultTable, mut out: W) -> Result<()> {
    table.validate()?;
    let mut head = String::new();
    for (k, v) in &table.provenance {
        head.push_str(&format!("# {k}: {v}\n"));
    }
    for f in &table.flagged {
        head.push_str(&format!(
            "# {FLAGGED_KEY}: {} | {}\n",
            format_number(f.axis_value),
            single_line(&f.label)
        ));
    }
    out.write_all(head.as_bytes())?;

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(&mut out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format_number(*v)))
            .map_err(io)?;
    }
    w.flush()?;
    drop(w);
    out.flush()?;
    Ok(())
}

pub fn to_csv_string(table: &ResultTable) -> Result<String> {
    let mut buf = Vec::new();
    emit_csv(table, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Reads a table written by [`emit_csv`].
pub fn parse_csv<R: Read>(input: R) -> Result<ResultTable> {
    let mut reader = BufReader::new(input);
    let mut table = ResultTable::default();
    let mut body = String::new();
    let mut line = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        if let Some(comment) = line.strip_prefix("# ") {
            let comment = comment.trim_end_matches('\n');
            let (k, v) = comment
                .split_once(": ")
                .ok_or_else(|| Error::Io(format!("malformed comment line `{comment}`")))?;
            if k == FLAGGED_KEY {
                let (x, label) = v
                    .split_once(" | ")
                    .ok_or_else(|| Error::Io(format!("malformed flagged line `{v}`")))?;
                let axis_value = x.parse().map_err(|_| Error::Io(format!("bad number `{x}`")))?;
                table.flagged.push(FlaggedRow {
                    axis_value,
                    label: label.to_string(),
                });
            } else {
                table.provenance.push((k.to_string(), v.to_string()));
            }
        } else {
            body.push_str(&line);
            reader.read_to_string(&mut body)?;
            break;
        }
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body.as_bytes());
    let io = |e: csv::Error| Error::Io(e.to_string());
    table.columns = rdr.headers().map_err(io)?.iter().map(str::to_string).collect();
    for rec in rdr.records() {
        let rec = rec.map_err(io)?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Io(format!("bad number `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        table.rows.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_table() -> ResultTable {
        ResultTable {
            columns: vec!["x".into(), "eta".into()],
            rows: vec![vec![1.0, 2.5e-300], vec![-0.0, 1.0 / 3.0]],
            flagged: vec![FlaggedRow {
                axis_value: 0.5,
                label: "resonance_test: no sign change".into(),
            }],
            provenance: vec![
                ("tool".into(), "fastlight-core 0.1.0".into()),
                ("config_hash".into(), "ab12".into()),
            ],
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = ResultTable {
            provenance: vec![("tool".into(), "t".into())],
            ..ResultTable::new(vec!["a".into(), "b".into()])
        };
        assert_eq!(to_csv_string(&t).unwrap(), "# tool: t\na,b\n");
    }

    #[test]
    fn one_by_one_layout() {
        let t = ResultTable {
            columns: vec!["v".into()],
            rows: vec![vec![2.43e15]],
            provenance: vec![("tool".into(), "t".into())],
            ..Default::default()
        };
        assert_eq!(
            to_csv_string(&t).unwrap(),
            "# tool: t\nv\n2.4300000000000000e15\n"
        );
    }

    #[test]
    fn round_trip_with_flags() {
        let t = sample_table();
        let back = parse_csv(to_csv_string(&t).unwrap().as_bytes()).unwrap();
        assert_eq!(back, t);
        assert!(back.rows[1][0].is_sign_negative());
    }

    #[test]
    fn non_finite_rejected() {
        let mut t = sample_table();
        t.rows[0][1] = f64::NAN;
        assert!(to_csv_string(&t).is_err());
    }

    proptest! {
        #[test]
        fn bit_exact_round_trip(rows in prop::collection::vec(prop::collection::vec(
            any::<f64>().prop_filter("finite", |v| v.is_finite()), 3), 0..20)) {
            let t = ResultTable { columns: vec!["a".into(), "b,c".into(), "d".into()], rows, ..Default::default() };
            let back = parse_csv(to_csv_string(&t).unwrap().as_bytes()).unwrap();
            prop_assert_eq!(back.rows.len(), t.rows.len());
            for (x, y) in back.rows.iter().flatten().zip(t.rows.iter().flatten()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
            prop_assert_eq!(back.columns, t.columns);
        }
    }
}
