//! Per-order census data: class number, regulator, torsion, κ, λ_S, ν and
//! the C^c / C^r classification.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::IntPoly;
use crate::class_group::class_number;
use crate::error::{Error, Result};
use crate::field::NumberField;
use crate::order::{maximal_order, Order};
use crate::splitting::{classify_order, lambda_s, FieldClass, PrimeSet};
use crate::units::{fundamental_unit, has_real_unit_power, kappa, nu, torsion_min_poly, UnitData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Computed,
    Ingested,
    CrossChecked,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Computed => "computed",
            Provenance::Ingested => "ingested",
            Provenance::CrossChecked => "cross-checked",
        })
    }
}

impl FromStr for FieldClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldClass> {
        match s {
            "Cc" => Ok(FieldClass::Cc),
            "Cr" => Ok(FieldClass::Cr),
            "NotInC" => Ok(FieldClass::NotInC),
            other => Err(Error::InvalidArgument(format!("unknown class '{other}'"))),
        }
    }
}

/// Census row for one order. Unit-derived columns are `None` for fields
/// outside `C(S)`; `h` is `None` when the class group was inconclusive.
#[derive(Clone, Debug)]
pub struct OrderInvariants {
    pub field_key: String,
    pub disc: BigInt,
    pub r: usize,
    pub s: usize,
    pub h: Option<u64>,
    pub regulator: Option<f64>,
    pub mu: Option<u32>,
    pub kappa: Option<u32>,
    pub lambda_s: Option<u64>,
    pub nu: Option<f64>,
    /// Blank for S-independent reference rows.
    pub class: Option<FieldClass>,
    pub provenance: Provenance,
    /// Present on computed rows only.
    pub detail: Option<UnitDetail>,
}

/// Unit data kept alongside computed rows for the structural checks.
#[derive(Clone, Debug)]
pub struct UnitDetail {
    pub order: Arc<Order>,
    pub units: UnitData,
    pub torsion_poly: IntPoly,
    pub weakly_neat: bool,
    /// Why `h` is missing, if it is.
    pub h_note: Option<String>,
}

impl OrderInvariants {
    pub fn is_complete(&self) -> bool {
        self.h.is_some()
            && self.regulator.is_some()
            && self.mu.is_some()
            && self.kappa.is_some()
            && self.lambda_s.is_some()
            && self.nu.is_some()
    }
}

/// Invariants of the maximal order of a quartic field for the prime set `s`.
/// Class groups whose Minkowski bound exceeds `ceiling` are left blank.
pub fn compute_invariants(field: Arc<NumberField>, s: &PrimeSet, ceiling: f64) -> Result<OrderInvariants> {
    if field.degree() != 4 {
        return Err(Error::UnsupportedDegree(field.degree()));
    }
    let order = Arc::new(maximal_order(field.clone())?);
    let class = classify_order(&order, s)?;
    let (r, cs) = field.signature();
    let mut row = OrderInvariants {
        field_key: field.key(),
        disc: order.disc().clone(),
        r,
        s: cs,
        h: None,
        regulator: None,
        mu: None,
        kappa: None,
        lambda_s: None,
        nu: None,
        class: Some(class),
        provenance: Provenance::Computed,
        detail: None,
    };
    if class == FieldClass::NotInC {
        return Ok(row);
    }
    let units = fundamental_unit(&order)?;
    let (h, h_note) = match class_number(&order, ceiling) {
        Ok(h) => (Some(h), None),
        Err(Error::Inconclusive(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    row.h = h;
    row.regulator = Some(units.regulator);
    row.mu = Some(units.mu);
    row.kappa = Some(kappa(&order, &units)?);
    row.lambda_s = Some(lambda_s(&order, s)?);
    row.nu = Some(nu(&order, &units)?);
    let weakly_neat = !has_real_unit_power(&order, &units)?;
    let torsion_poly = torsion_min_poly(&order, &units.torsion_gen);
    row.detail = Some(UnitDetail { order, units, torsion_poly, weakly_neat, h_note });
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field_i64;

    #[test]
    fn cyclotomic_fields() {
        let s = PrimeSet::new(&[2, 3]).unwrap();
        // 3 ≡ 3 mod 8 splits into two primes of degree 2
        let z8 = compute_invariants(Arc::new(make_field_i64(&[1, 0, 0, 0, 1]).unwrap()), &s, 60.0).unwrap();
        assert_eq!(z8.class, Some(FieldClass::NotInC));
        assert_eq!(z8.disc, BigInt::from(256));
        assert!(z8.regulator.is_none());
        // 2 and 3 are inert in ℚ(ζ5)
        let z5 = compute_invariants(Arc::new(make_field_i64(&[1, 1, 1, 1, 1]).unwrap()), &s, 60.0).unwrap();
        assert_eq!(z5.class, Some(FieldClass::Cr));
        assert_eq!((z5.h, z5.mu, z5.kappa, z5.lambda_s), (Some(1), Some(10), Some(4), Some(16)));
        assert!(z5.is_complete());
        assert!(!z5.detail.unwrap().weakly_neat);
    }

    #[test]
    fn class_parses() {
        assert_eq!("Cc".parse::<FieldClass>().unwrap(), FieldClass::Cc);
        assert!("cc".parse::<FieldClass>().is_err());
    }
}
