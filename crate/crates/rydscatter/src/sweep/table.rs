//! Labelled numeric tables with CSV/JSON emission.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output encoding for a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config(
                "format",
                format!("unknown format `{other}` (expected csv or json)"),
            )),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// One axis of a sweep, as recorded in provenance blocks.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AxisInfo {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

/// Everything needed to rerun the computation that produced a table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub model: String,
    pub outputs: Vec<String>,
    pub axes: Vec<AxisInfo>,
    pub params: serde_json::Value,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn new(model: &str) -> Self {
        Self {
            tool: "rydscatter".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            model: model.to_string(),
            outputs: Vec::new(),
            axes: Vec::new(),
            params: serde_json::Value::Null,
            notes: Vec::new(),
        }
    }
}

/// Rectangular labelled table of reals plus its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

impl SweepTable {
    /// CSV with a header row, `%.12g` numbers, LF line endings and no
    /// trailing delimiter.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&format_g12(*v));
                first = false;
            }
            out.push('\n');
        }
        out
    }

    /// JSON document `{"columns": [...], "rows": [[...]], "provenance": {...}}`.
    pub fn to_json(&self) -> String {
        // serde_json prints f64 via the shortest round-trip representation,
        // so parsing the document back reproduces the values bit-exactly.
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::config("<json table>", e.to_string()))
    }

    pub fn emit(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros
/// trimmed, scientific notation outside the fixed-point exponent window,
/// two-digit exponent field.
pub fn format_g12(x: f64) -> String {
    format_g(x, 12)
}

fn format_g(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let epos = sci.find('e').expect("exponent marker");
    let exponent: i32 = sci[epos + 1..].parse().expect("exponent digits");
    if exponent < -4 || exponent >= sig as i32 {
        let mantissa = trim_trailing(&sci[..epos]);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
        trim_trailing(&format!("{x:.decimals$}"))
    }
}

fn trim_trailing(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_printf_reference_cases() {
        // Reference strings from C printf("%.12g", x).
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.15, "0.15"),
            (0.25, "0.25"),
            (1e-4, "0.0001"),
            (1e-5, "1e-05"),
            (-1e-5, "-1e-05"),
            (1e11, "100000000000"),
            (1e12, "1e+12"),
            (-30.066666666666666, "-30.0666666667"),
            (123456789012345.0, "1.23456789012e+14"),
            (0.999999999999999, "1"),
            (2.5e-3, "0.0025"),
            (9.99999999999e-5, "9.99999999999e-05"),
            (9.999999999999e-5, "0.0001"),
            (0.5433138884711359, "0.543313888471"),
        ];
        for (x, expected) in cases {
            assert_eq!(format_g12(x), expected, "formatting {x}");
        }
    }

    fn sample_table() -> SweepTable {
        SweepTable {
            columns: vec!["x".into(), "y".into()],
            rows: vec![vec![1.0, 0.5], vec![2.0, 0.25]],
            provenance: Provenance::new("A"),
        }
    }

    #[test]
    fn csv_shape_for_a_two_by_two_table() {
        let csv = sample_table().to_csv();
        assert_eq!(csv, "x,y\n1,0.5\n2,0.25\n");
        assert_eq!(csv.trim_end().lines().count(), 3);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut table = sample_table();
        // Values with no short decimal representation.
        table.rows[0][0] = 0.1 + 0.2;
        table.rows[1][1] = f64::from_bits(0x3FEFFFFFFFFFFFFF);
        let parsed = SweepTable::from_json(&table.to_json()).unwrap();
        assert_eq!(parsed.columns, table.columns);
        for (a, b) in parsed.rows.iter().flatten().zip(table.rows.iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
