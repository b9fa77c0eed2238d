//! The invariants CSV: emission, ingestion with validation, and
//! cross-checking against computed rows.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use quartic_core::arith::IntPoly;
use std::sync::Arc;

use quartic_core::class_group::class_number;
use quartic_core::error::Error as CoreError;
use quartic_core::field::make_field;
use quartic_core::invariants::{OrderInvariants, Provenance};
use quartic_core::order::maximal_order;
use quartic_core::units::fundamental_unit;
use quartic_core::splitting::FieldClass;

use crate::error::{CensusError, Result};

pub const HEADER: [&str; 11] = ["field_key", "disc", "r", "s", "h", "regulator", "mu", "kappa", "lambda_S", "nu", "class"];

/// Fixed-point decimal with 12 significant digits.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0.00000000000".into() } else { x.to_string() };
    }
    let sci = format!("{x:.11e}");
    let (_, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let rounded: f64 = sci.parse().expect("valid float");
    let decimals = (11 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn sort_key(row: &OrderInvariants) -> (BigInt, String) {
    (row.disc.abs(), row.field_key.clone())
}

/// Writes rows sorted by `(|disc|, field_key)` with LF line endings.
pub fn emit_csv<W: Write>(rows: &[OrderInvariants], out: W) -> Result<()> {
    let mut sorted: Vec<&OrderInvariants> = rows.iter().collect();
    sorted.sort_by_key(|r| sort_key(r));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER)?;
    for r in sorted {
        w.write_record(record(r))?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn record(r: &OrderInvariants) -> Vec<String> {
    vec![
        r.field_key.clone(),
        r.disc.to_string(),
        r.r.to_string(),
        r.s.to_string(),
        opt(&r.h),
        r.regulator.map(fmt_real).unwrap_or_default(),
        opt(&r.mu),
        opt(&r.kappa),
        opt(&r.lambda_s),
        r.nu.map(fmt_real).unwrap_or_default(),
        opt(&r.class),
    ]
}

pub fn emit_to_string(rows: &[OrderInvariants]) -> Result<String> {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn parse_field<T: FromStr>(value: &str, column: &str, line: usize) -> Result<Option<T>> {
    if value.is_empty() {
        return Ok(None);
    }
    value
        .parse()
        .map(Some)
        .map_err(|_| CensusError::Parse { line, message: format!("bad {column} value '{value}'") })
}

fn required<T>(v: Option<T>, column: &str, line: usize) -> Result<T> {
    v.ok_or_else(|| CensusError::Parse { line, message: format!("missing {column}") })
}

/// Parses and validates an invariants CSV. Irreducibility, signature and
/// the discriminant's compatibility with the polynomial are recomputed.
pub fn ingest_csv<R: Read>(input: R) -> Result<Vec<OrderInvariants>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).from_reader(input);
    let mut rows = Vec::new();
    let mut header_seen = false;
    for rec in reader.records() {
        let rec = rec.map_err(|e| CensusError::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if !header_seen {
            if rec.iter().ne(HEADER.iter().copied()) {
                return Err(CensusError::Parse { line, message: format!("expected header {}", HEADER.join(",")) });
            }
            header_seen = true;
            continue;
        }
        if rec.len() != HEADER.len() {
            return Err(CensusError::Parse { line, message: format!("expected {} columns, found {}", HEADER.len(), rec.len()) });
        }
        let row = OrderInvariants {
            field_key: rec[0].to_string(),
            disc: required(parse_field::<BigInt>(&rec[1], "disc", line)?, "disc", line)?,
            r: required(parse_field(&rec[2], "r", line)?, "r", line)?,
            s: required(parse_field(&rec[3], "s", line)?, "s", line)?,
            h: parse_field(&rec[4], "h", line)?,
            regulator: parse_field(&rec[5], "regulator", line)?,
            mu: parse_field(&rec[6], "mu", line)?,
            kappa: parse_field(&rec[7], "kappa", line)?,
            lambda_s: parse_field(&rec[8], "lambda_S", line)?,
            nu: parse_field(&rec[9], "nu", line)?,
            class: parse_field::<FieldClass>(&rec[10], "class", line)?,
            provenance: Provenance::Ingested,
            detail: None,
        };
        validate(&row, line)?;
        rows.push(row);
    }
    if !header_seen {
        return Err(CensusError::Parse { line: 1, message: "empty file".into() });
    }
    Ok(rows)
}

fn conflict(row: &OrderInvariants, column: &str, detail: String) -> CensusError {
    CensusError::DataConflict { field_key: row.field_key.clone(), column: column.into(), detail }
}

fn validate(row: &OrderInvariants, line: usize) -> Result<()> {
    let poly = IntPoly::parse_key(&row.field_key)
        .map_err(|e| CensusError::Parse { line, message: e.to_string() })?;
    if !poly.is_monic() || poly.key() != row.field_key {
        return Err(CensusError::Parse { line, message: format!("'{}' is not a canonical monic key", row.field_key) });
    }
    let field = make_field(poly.coeffs()).map_err(|e| conflict(row, "field_key", e.to_string()))?;
    if field.signature() != (row.r, row.s) {
        return Err(conflict(row, "r", format!("signature is {:?}, row says ({}, {})", field.signature(), row.r, row.s)));
    }
    // disc(f) = [O_F : ℤ[x]]² · disc(F)
    let pd = poly.discriminant()?;
    let ok = !row.disc.is_zero()
        && (&pd % &row.disc).is_zero()
        && {
            let q = &pd / &row.disc;
            q.is_positive() && { let s = q.sqrt(); &s * &s == q }
        };
    if !ok {
        return Err(conflict(row, "disc", format!("{} is incompatible with polynomial discriminant {pd}", row.disc)));
    }
    Ok(())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Compares every column present on both sides.
fn compare(computed: &OrderInvariants, ingested: &OrderInvariants) -> Result<()> {
    let int = |col: &str, a: Option<String>, b: Option<String>| match (a, b) {
        (Some(a), Some(b)) if a != b => Err(conflict(computed, col, format!("computed {a}, ingested {b}"))),
        _ => Ok(()),
    };
    let real = |col: &str, a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) if !close(a, b) => Err(conflict(computed, col, format!("computed {a}, ingested {b}"))),
        _ => Ok(()),
    };
    let s = |v: &dyn ToString| Some(v.to_string());
    int("disc", s(&computed.disc), s(&ingested.disc))?;
    int("r", s(&computed.r), s(&ingested.r))?;
    int("s", s(&computed.s), s(&ingested.s))?;
    int("h", computed.h.map(|v| v.to_string()), ingested.h.map(|v| v.to_string()))?;
    real("regulator", computed.regulator, ingested.regulator)?;
    int("mu", computed.mu.map(|v| v.to_string()), ingested.mu.map(|v| v.to_string()))?;
    int("kappa", computed.kappa.map(|v| v.to_string()), ingested.kappa.map(|v| v.to_string()))?;
    int("lambda_S", computed.lambda_s.map(|v| v.to_string()), ingested.lambda_s.map(|v| v.to_string()))?;
    real("nu", computed.nu, ingested.nu)?;
    int("class", computed.class.map(|v| v.to_string()), ingested.class.map(|v| v.to_string()))?;
    Ok(())
}

/// Merges ingested rows into computed ones by `field_key`. Overlapping rows
/// must agree and are marked cross-checked; blank computed columns are
/// filled from the ingested row.
pub fn cross_check(computed: &[OrderInvariants], ingested: &[OrderInvariants]) -> Result<Vec<OrderInvariants>> {
    let mut by_key: BTreeMap<&str, &OrderInvariants> = BTreeMap::new();
    for r in ingested {
        by_key.insert(&r.field_key, r);
    }
    let mut out = Vec::new();
    for c in computed {
        let mut row = c.clone();
        if let Some(i) = by_key.remove(c.field_key.as_str()) {
            compare(c, i)?;
            row.provenance = Provenance::CrossChecked;
            row.h = row.h.or(i.h);
            row.regulator = row.regulator.or(i.regulator);
            row.mu = row.mu.or(i.mu);
            row.kappa = row.kappa.or(i.kappa);
            row.lambda_s = row.lambda_s.or(i.lambda_s);
            row.nu = row.nu.or(i.nu);
            row.class = row.class.or(i.class);
        }
        out.push(row);
    }
    out.extend(by_key.into_values().cloned());
    out.sort_by_key(sort_key);
    Ok(out)
}

/// Recomputes the S-independent columns (`disc`, signature, `h`,
/// regulator, `mu`) of an ingested row's maximal order.
pub fn recompute(row: &OrderInvariants, ceiling: f64) -> Result<OrderInvariants> {
    let poly = IntPoly::parse_key(&row.field_key)?;
    let field = Arc::new(make_field(poly.coeffs())?);
    let order = maximal_order(field.clone())?;
    let (r, s) = field.signature();
    let h = match class_number(&order, ceiling) {
        Ok(h) => Some(h),
        Err(CoreError::Inconclusive(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let units = fundamental_unit(&order)?;
    Ok(OrderInvariants {
        field_key: row.field_key.clone(),
        disc: order.disc().clone(),
        r,
        s,
        h,
        regulator: Some(units.regulator),
        mu: Some(units.mu),
        kappa: None,
        lambda_s: None,
        nu: None,
        class: None,
        provenance: Provenance::Computed,
        detail: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.481211825059603), "0.481211825060");
        assert_eq!(fmt_real(12.5), "12.5000000000");
        assert_eq!(fmt_real(9.9999999999996), "10.0000000000");
        assert_eq!(fmt_real(-3.0), "-3.00000000000");
        assert_eq!(fmt_real(0.0), "0.00000000000");
        assert_eq!(fmt_real(1.5e-5), "0.0000150000000000");
        assert_eq!(fmt_real(123456789012345.0), "123456789012000");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "field_key,disc,r,s,h,regulator,mu,kappa,lambda_S,nu,class\n1:1:1:1:1,125,0,2,1,,,,,,\n1:0:0:0:1,x,0,2,1,,,,,,\n";
        match ingest_csv(text.as_bytes()) {
            Err(CensusError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad_header = "key,disc\n";
        assert!(matches!(ingest_csv(bad_header.as_bytes()), Err(CensusError::Parse { line: 1, .. })));
    }

    #[test]
    fn validation_rejects_wrong_data() {
        let head = "field_key,disc,r,s,h,regulator,mu,kappa,lambda_S,nu,class\n";
        let wrong_disc = format!("{head}1:1:1:1:1,124,0,2,1,,,,,,\n");
        assert!(matches!(ingest_csv(wrong_disc.as_bytes()), Err(CensusError::DataConflict { .. })));
        let wrong_sig = format!("{head}1:1:1:1:1,125,2,1,1,,,,,,\n");
        assert!(matches!(ingest_csv(wrong_sig.as_bytes()), Err(CensusError::DataConflict { .. })));
        let reducible = format!("{head}1:0:2:0:1,256,0,2,1,,,,,,\n");
        assert!(matches!(ingest_csv(reducible.as_bytes()), Err(CensusError::DataConflict { .. })));
    }
}
