//! Optional externally supplied data: minimal degrees, element-order bounds,
//! amended fixed-point ratio bounds and ι values, keyed `"family:n:q"`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use super::{BoundError, GroupId};

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
pub struct TableEntry {
    pub min_degree: Option<u64>,
    pub max_order: Option<u64>,
    pub amended_fpr_num: Option<u64>,
    pub amended_fpr_den: Option<u64>,
    pub iota_num: Option<i64>,
    pub iota_den: Option<i64>,
}

impl TableEntry {
    pub fn amended_fpr(&self) -> Option<BigRational> {
        match (self.amended_fpr_num, self.amended_fpr_den) {
            (Some(a), Some(b)) if b > 0 => Some(BigRational::new(BigInt::from(a), BigInt::from(b))),
            _ => None,
        }
    }

    pub fn iota(&self) -> Option<f64> {
        match (self.iota_num, self.iota_den) {
            (Some(a), Some(b)) if b != 0 => Some(a as f64 / b as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(transparent)]
pub struct ExternalTables {
    pub entries: HashMap<String, TableEntry>,
}

impl ExternalTables {
    pub fn from_json(text: &str) -> Result<ExternalTables, BoundError> {
        let t: ExternalTables =
            serde_json::from_str(text).map_err(|e| BoundError::InvalidId(format!("tables: {e}")))?;
        for key in t.entries.keys() {
            let parts: Vec<&str> = key.split(':').collect();
            if parts.len() != 3 || parts[1].parse::<u32>().is_err() || parts[2].parse::<u64>().is_err() {
                return Err(BoundError::InvalidId(format!("tables: bad key {key:?}")));
            }
        }
        Ok(t)
    }

    pub fn key(id: &GroupId) -> String {
        format!("{}:{}:{}", id.family.name(), id.n, id.q())
    }

    pub fn get(&self, id: &GroupId) -> Option<&TableEntry> {
        self.entries.get(&Self::key(id))
    }
}
