//! Tabular output: CSV with a `# key=value` header block, and the same data
//! as a whitespace-separated gnuplot file.

use std::fmt::Write as _;

use biharm::ExtendedValue;

/// Cells of an extended value: value (or `INF`), error bound, certificate
/// exponent. The unused one of the last two is left empty.
pub fn extended_cells(v: &ExtendedValue) -> [String; 3] {
    match v {
        ExtendedValue::Finite { value, error_bound } => {
            [num(*value), format!("{error_bound:.3e}"), String::new()]
        }
        ExtendedValue::Infinite(c) => [
            "INF".to_string(),
            String::new(),
            exponent(c.estimated_exponent),
        ],
    }
}

/// Shortest round-trip decimal, in scientific notation outside
/// `[1e-4, 1e15)`; `INF` for `+∞`.
pub fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "INF".to_string()
    } else if v == f64::NEG_INFINITY {
        "-INF".to_string()
    } else if v == 0.0 || v.is_nan() || (1e-4..1e15).contains(&v.abs()) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Six significant digits.
pub fn exponent(p: f64) -> String {
    format!("{p:.5e}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Column whose value changes start a new gnuplot data block.
    pub block_column: Option<usize>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn new(header: Vec<(String, String)>, columns: Vec<&'static str>) -> Self {
        Table {
            header,
            columns,
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn header_block(&self, out: &mut String) {
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}={v}");
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        self.header_block(&mut out);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_dat(&self) -> String {
        let mut out = String::new();
        self.header_block(&mut out);
        let _ = writeln!(out, "# {}", self.columns.join(" "));
        let mut previous: Option<&str> = None;
        for row in &self.rows {
            if let Some(c) = self.block_column {
                if previous.is_some_and(|p| p != row[c]) {
                    out.push('\n');
                }
                previous = Some(&row[c]);
            }
            let cells: Vec<String> = row
                .iter()
                .map(|c| if c.is_empty() { "-".into() } else { c.replace(' ', "_") })
                .collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use biharm::quadrature::DivergenceCertificate;

    #[test]
    fn extended_values_render() {
        let inf = ExtendedValue::infinite(DivergenceCertificate::pole(0.0, -1.0));
        assert_eq!(extended_cells(&inf), ["INF".to_string(), String::new(), "-1.00000e0".into()]);
        let fin = ExtendedValue::finite(0.25, 1e-12);
        assert_eq!(extended_cells(&fin)[0], "0.25");
        assert_eq!(extended_cells(&fin)[1], "1.000e-12");
        assert_eq!(num(2.9e-10), "2.9e-10");
        assert_eq!(num(0.020833), "0.020833");
        assert_eq!(num(-0.0), "-0");
    }

    #[test]
    fn csv_and_dat_layouts() {
        let mut t = Table::new(vec![("seed".into(), "1".into())], vec!["x", "y", "note"]);
        t.block_column = Some(0);
        t.push(vec!["1".into(), "2".into(), "a, b".into()]);
        t.push(vec!["1".into(), "3".into(), String::new()]);
        t.push(vec!["2".into(), "2".into(), "c".into()]);
        assert_eq!(t.to_csv(), "# seed=1\nx,y,note\n1,2,\"a, b\"\n1,3,\n2,2,c\n");
        assert_eq!(t.to_dat(), "# seed=1\n# x y note\n1 2 a,_b\n1 3 -\n\n2 2 c\n");
    }
}
