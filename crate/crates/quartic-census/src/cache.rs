//! Append-only cache of computed invariants, one CSV per `(S, ceiling)`.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};

use quartic_core::invariants::{OrderInvariants, Provenance};
use quartic_core::splitting::PrimeSet;

use crate::csv_io::{ingest_csv, record, HEADER};
use crate::error::Result;

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    rows: BTreeMap<String, OrderInvariants>,
}

impl Cache {
    /// Opens or creates the cache file for `s` and `ceiling` under `dir`.
    pub fn open(dir: &Path, s: &PrimeSet, ceiling: f64) -> Result<Cache> {
        std::fs::create_dir_all(dir)?;
        let tag = s.primes().iter().map(u64::to_string).collect::<Vec<_>>().join("-");
        let path = dir.join(format!("invariants_S{tag}_ceiling{ceiling}.csv"));
        let mut rows = BTreeMap::new();
        if path.exists() {
            for mut row in ingest_csv(File::open(&path)?)? {
                row.provenance = Provenance::Computed;
                rows.insert(row.field_key.clone(), row);
            }
        } else {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path)?;
            w.write_record(HEADER)?;
            w.flush()?;
        }
        Ok(Cache { path, rows })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, field_key: &str) -> Option<OrderInvariants> {
        self.rows.get(field_key).cloned()
    }

    /// Appends a row unless its key is already cached.
    pub fn append(&mut self, row: &OrderInvariants) -> Result<()> {
        if self.rows.contains_key(&row.field_key) {
            return Ok(());
        }
        let file = OpenOptions::new().append(true).open(&self.path)?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file);
        w.write_record(record(row))?;
        w.flush()?;
        let mut stored = row.clone();
        stored.detail = None;
        self.rows.insert(row.field_key.clone(), stored);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn row(key: &str, disc: i64) -> OrderInvariants {
        OrderInvariants {
            field_key: key.into(),
            disc: BigInt::from(disc),
            r: 0,
            s: 2,
            h: Some(1),
            regulator: None,
            mu: None,
            kappa: None,
            lambda_s: None,
            nu: None,
            class: None,
            provenance: Provenance::Computed,
            detail: None,
        }
    }

    #[test]
    fn rows_survive_reopening() {
        let dir = tempfile::tempdir().unwrap();
        let s = PrimeSet::new(&[2, 3]).unwrap();
        let mut cache = Cache::open(dir.path(), &s, 60.0).unwrap();
        assert!(cache.path().ends_with("invariants_S2-3_ceiling60.csv"));
        cache.append(&row("1:1:1:1:1", 125)).unwrap();
        cache.append(&row("1:1:1:1:1", 125)).unwrap();
        let reopened = Cache::open(dir.path(), &s, 60.0).unwrap();
        assert_eq!(reopened.len(), 1);
        assert_eq!(reopened.get("1:1:1:1:1").unwrap().disc, BigInt::from(125));
    }
}
