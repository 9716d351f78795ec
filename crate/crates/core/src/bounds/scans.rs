//! Finite scans for the exceptional lists: small-dimensional groups with the
//! generic 4/(3q) bound, non-subspace actions with t(n,q), and case (iii)
//! with the default maximal element order.

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::certify::{needs_amended, small_dim_domain};
use super::tables::ExternalTables;
use super::{a_nq, mstar_msharp, q0_pow, Family, GroupId};
use crate::numtheory::{prime_power, GUARD};

/// Largest q examined by the a(n,q) scans.
pub const SCAN_Q_MAX: u64 = 1 << 16;
/// Window in which ids needing an amended fpr bound, and lacking one, are
/// flagged.
pub const AMENDED_WINDOW: u64 = 128;

#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub id: GroupId,
    pub a: Option<f64>,
    pub omega: Option<usize>,
    /// the fixed-point ratio bound t used
    pub t: f64,
    pub reason: String,
}

impl ScanEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.id.to_string(),
            "family": self.id.family.name(),
            "n": self.id.n,
            "q": self.id.q(),
            "a": self.a,
            "omega_aut": self.omega,
            "t": self.t,
            "reason": self.reason,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Scan {
    pub flagged: Vec<ScanEntry>,
    /// (family, n, q): the largest q at which the a(n,q) test still fails
    pub cutoffs: Vec<(Family, u32, u64)>,
    pub checked: usize,
}

impl Scan {
    pub fn ids(&self) -> Vec<GroupId> {
        self.flagged.iter().map(|e| e.id).collect()
    }

    pub fn contains(&self, family: Family, n: u32, q: u64) -> bool {
        self.flagged.iter().any(|e| e.id.family == family && e.id.n == n && e.id.q() == q)
    }
}

pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

/// Run the two-step test a·t < 1, then ω(|Aut|)·t < 1; returns the entry when
/// both fail.
fn test_id(id: &GroupId, t: f64) -> Option<ScanEntry> {
    let a = a_nq(id);
    if let Ok(a) = a {
        if a * t + GUARD < 1.0 {
            return None;
        }
    }
    let omega = id.omega_aut();
    if let Some(w) = omega {
        if (w as f64) * t + GUARD < 1.0 {
            return None;
        }
    }
    let reason = match &a {
        Err(e) => format!("{e}; omega test fails"),
        Ok(_) if omega.is_none() => "a test fails; |Aut| too large to factor".into(),
        Ok(_) => "a and omega tests fail".into(),
    };
    Some(ScanEntry { id: *id, a: a.ok(), omega, t, reason })
}

fn scan_family(
    family: Family,
    n: u32,
    qs: &[u64],
    tables: Option<&ExternalTables>,
    t_of: &dyn Fn(&GroupId, Option<&super::TableEntry>) -> f64,
    out: &mut Scan,
) {
    let mut cutoff = 0;
    for &q in qs {
        let Ok(id) = GroupId::new(family, n, q) else { continue };
        out.checked += 1;
        let entry = tables.and_then(|t| t.get(&id));
        let t = t_of(&id, entry);
        let a_fails = a_nq(&id).map(|a| a * t + GUARD >= 1.0).unwrap_or(true);
        if a_fails {
            cutoff = q;
        }
        if let Some(e) = test_id(&id, t) {
            out.flagged.push(e);
        }
    }
    out.cutoffs.push((family, n, cutoff));
}

fn generic_t(id: &GroupId) -> f64 {
    4.0 / (3.0 * id.q() as f64)
}

fn amended_t(entry: Option<&super::TableEntry>) -> Option<f64> {
    entry.and_then(|e| e.amended_fpr()).and_then(|r| Some(r.numer().to_f64()? / r.denom().to_f64()?))
}

/// Groups of dimension at most 4 that fail both tests under the generic
/// bound (or an amended bound from the tables).
pub fn small_dim_scan(tables: Option<&ExternalTables>) -> Scan {
    let qs = prime_powers(2, SCAN_Q_MAX);
    let mut out = Scan::default();
    let t_of = |id: &GroupId, e: Option<&super::TableEntry>| amended_t(e).unwrap_or_else(|| generic_t(id));
    for (family, n) in [(Family::Psl, 2), (Family::Psl, 3), (Family::Psl, 4), (Family::Psu, 3), (Family::Psu, 4), (Family::Psp, 4)]
    {
        let dom: Vec<u64> =
            qs.iter().copied().filter(|&q| GroupId::new(family, n, q).map(|id| small_dim_domain(&id)).unwrap_or(false)).collect();
        scan_family(family, n, &dom, tables, &t_of, &mut out);
    }
    // without an amended bound the generic one does not apply to these
    for &q in qs.iter().take_while(|&&q| q <= AMENDED_WINDOW) {
        for (family, n) in [(Family::Psl, 2), (Family::Psl, 4), (Family::Psu, 4)] {
            let Ok(id) = GroupId::new(family, n, q) else { continue };
            if !small_dim_domain(&id) || !needs_amended(&id) || out.contains(family, n, q) {
                continue;
            }
            if amended_t(tables.and_then(|t| t.get(&id))).is_some() {
                continue;
            }
            out.flagged.push(ScanEntry {
                id,
                a: a_nq(&id).ok(),
                omega: id.omega_aut(),
                t: f64::NAN,
                reason: "needs an amended fpr bound (none supplied)".into(),
            });
        }
    }
    out.flagged.sort_by_key(|e| (e.id.family, e.id.n, e.id.q()));
    out
}

/// Grid of the non-subspace scan: dimensions up to this bound.
pub const NONSUBSPACE_N_MAX: u32 = 12;

/// t(n,q) = min{t(G₀), m(G₀)^{−1/2+1/n+ι}}, with m(G₀) = 1 when missing.
pub fn t_nq(id: &GroupId, entry: Option<&super::TableEntry>) -> f64 {
    let t0 = amended_t(entry).unwrap_or_else(|| generic_t(id));
    let m = entry.and_then(|e| e.min_degree).unwrap_or(1) as f64;
    let iota = entry.and_then(|e| e.iota()).unwrap_or(0.0);
    t0.min(m.powf(-0.5 + 1.0 / id.n as f64 + iota))
}

pub fn nonsubspace_scan(tables: Option<&ExternalTables>) -> Scan {
    let qs = prime_powers(2, SCAN_Q_MAX);
    let mut out = Scan::default();
    let t_of = |id: &GroupId, e: Option<&super::TableEntry>| t_nq(id, e);
    for family in Family::ALL {
        let n0 = match family {
            Family::Psl | Family::Psu => 5,
            Family::Psp => 6,
            Family::OmegaCirc => 7,
            Family::OmegaPlus | Family::OmegaMinus => 8,
        };
        for n in n0..=NONSUBSPACE_N_MAX {
            if GroupId::new(family, n, 3).is_err() {
                continue;
            }
            scan_family(family, n, &qs, tables, &t_of, &mut out);
        }
    }
    out.flagged.sort_by_key(|e| (e.id.family, e.id.n, e.id.q()));
    out
}

pub const DAGGER_N_MAX: u32 = 24;
pub const DAGGER_Q_MAX: u64 = 256;

/// Case (iii) with m ≥ 3: log₂(o)·(2/q₀^{m*} + 1/q₀^{m♯}) ≥ 1 where o is the
/// maximal element order (default q₀^n).
pub fn dagger_scan(tables: Option<&ExternalTables>) -> Scan {
    let mut out = Scan::default();
    for family in [Family::Psu, Family::Psp, Family::OmegaCirc, Family::OmegaPlus, Family::OmegaMinus] {
        for n in 6..=DAGGER_N_MAX {
            let mut cutoff = 0;
            for q in prime_powers(2, DAGGER_Q_MAX) {
                let Ok(id) = GroupId::new(family, n, q) else { continue };
                if id.witt().unwrap_or(0) < 3 {
                    continue;
                }
                out.checked += 1;
                let (ms, mh) = mstar_msharp(&id).expect("not linear");
                let f = 2.0 * inv_f(&q0_pow(&id, ms)) + inv_f(&q0_pow(&id, mh));
                let log_o = match tables.and_then(|t| t.get(&id)).and_then(|e| e.max_order) {
                    Some(o) => (o as f64).log2(),
                    None => n as f64 * (id.q0() as f64).log2(),
                };
                if log_o * f + GUARD >= 1.0 {
                    cutoff = q;
                    out.flagged.push(ScanEntry {
                        id,
                        a: None,
                        omega: id.omega_aut(),
                        t: f,
                        reason: format!("log2(o) x fpr bound = {:.4}", log_o * f),
                    });
                }
            }
            if GroupId::new(family, n, 3).is_ok() {
                out.cutoffs.push((family, n, cutoff));
            }
        }
    }
    out.flagged.sort_by_key(|e| (e.id.family, e.id.n, e.id.q()));
    out
}

fn inv_f(x: &num_rational::BigRational) -> f64 {
    x.denom().to_f64().unwrap() / x.numer().to_f64().unwrap()
}
