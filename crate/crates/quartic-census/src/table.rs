//! Partial-sum tables against comparison curves.

use std::io::Write;

use crate::csv_io::fmt_real;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct CensusRow {
    pub x: f64,
    pub partial_sum: f64,
    pub target: f64,
    pub ratio: f64,
    /// Second comparison curve, when the census has one.
    pub alt_target: Option<f64>,
    pub alt_ratio: Option<f64>,
    /// The enumeration cannot certify completeness at this `x`.
    pub lower_bound: bool,
    /// Orders with `R <= x` left out of the sum because `h` is unknown.
    pub inconclusive: usize,
}

impl CensusRow {
    pub fn new(x: f64, partial_sum: f64, target: f64) -> CensusRow {
        CensusRow {
            x,
            partial_sum,
            target,
            ratio: partial_sum / target,
            alt_target: None,
            alt_ratio: None,
            lower_bound: false,
            inconclusive: 0,
        }
    }

    pub fn with_alt(mut self, alt: f64) -> CensusRow {
        self.alt_target = Some(alt);
        self.alt_ratio = Some(self.partial_sum / alt);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CensusTable {
    pub name: String,
    pub rows: Vec<CensusRow>,
    pub metadata: Vec<(String, String)>,
}

impl CensusTable {
    pub fn new(name: &str) -> CensusTable {
        CensusTable { name: name.into(), ..CensusTable::default() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> CensusTable {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    /// Row at the largest checkpoint not exceeding `x`.
    pub fn at(&self, x: f64) -> Option<&CensusRow> {
        self.rows.iter().rfind(|r| r.x <= x + 1e-12)
    }

    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].partial_sum <= w[1].partial_sum)
    }

    /// Metadata as `# key=value` lines, then a CSV body.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# census={}", self.name)?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["x", "partial_sum", "target", "ratio", "alt_target", "alt_ratio", "lower_bound", "inconclusive"])?;
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
            w.write_record([
                fmt_real(r.x),
                fmt_real(r.partial_sum),
                fmt_real(r.target),
                fmt_real(r.ratio),
                opt(r.alt_target),
                opt(r.alt_ratio),
                r.lower_bound.to_string(),
                r.inconclusive.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// `start, start·q, start·q², ...` up to `end`, always ending at `end`.
pub fn geometric_checkpoints(start: f64, end: f64, q: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x = start;
    while x < end * (1.0 - 1e-12) {
        out.push(x);
        x *= q;
    }
    out.push(end);
    out
}

/// `start, start+step, ...` up to `end`, always ending at `end`.
pub fn linear_checkpoints(start: f64, end: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let x = start + k as f64 * step;
        if x >= end - 1e-9 {
            break;
        }
        out.push(x);
        k += 1;
    }
    out.push(end);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints() {
        assert_eq!(geometric_checkpoints(10.0, 1000.0, 10.0), vec![10.0, 100.0, 1000.0]);
        assert_eq!(linear_checkpoints(1.0, 2.0, 0.5), vec![1.0, 1.5, 2.0]);
        assert_eq!(linear_checkpoints(1.0, 1.2, 0.5), vec![1.0, 1.2]);
    }

    #[test]
    fn csv_layout() {
        let t = CensusTable {
            name: "demo".into(),
            rows: vec![CensusRow::new(1.0, 2.0, 4.0).with_alt(8.0)],
            metadata: vec![("limit".into(), "1".into())],
        };
        let s = t.to_csv_string().unwrap();
        assert!(s.starts_with("# census=demo\n# limit=1\nx,partial_sum"));
        assert!(s.contains("\n1.00000000000,2.00000000000,4.00000000000,0.500000000000,8.00000000000,0.250000000000,false,0\n"));
        assert_eq!(t.at(5.0).unwrap().ratio, 0.5);
        assert!(t.at(0.5).is_none());
    }
}
