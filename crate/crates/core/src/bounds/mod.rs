//! Classical-group orders, a(n,q), m*/m♯, domain sizes and the fixed-point
//! ratio bounds used to certify regular cycles.

pub mod certify;
pub mod scans;
pub mod tables;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numtheory::{factorize, prime_power, robin_bound_from_ln, Factorization, NumError};

pub use certify::{
    casevi_fpr_bound, certify_case, certify_small_dim, fprell_bound, line22_contradiction, s1_bound, s2_bound,
    triality_bound, BoundReport, Case, Options, Term, Verdict,
};
pub use scans::{dagger_scan, nonsubspace_scan, small_dim_scan, ScanEntry};
pub use tables::{ExternalTables, TableEntry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("invalid group: {0}")]
    InvalidId(String),
    #[error("excluded group: {0}")]
    Excluded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    #[serde(rename = "PSL")]
    Psl,
    #[serde(rename = "PSU")]
    Psu,
    #[serde(rename = "PSp")]
    Psp,
    #[serde(rename = "POmega")]
    OmegaCirc,
    #[serde(rename = "POmega+")]
    OmegaPlus,
    #[serde(rename = "POmega-")]
    OmegaMinus,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Psl, Family::Psu, Family::Psp, Family::OmegaCirc, Family::OmegaPlus, Family::OmegaMinus];

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "PSL" | "L" => Some(Family::Psl),
            "PSU" | "U" => Some(Family::Psu),
            "PSp" | "PSP" | "S" => Some(Family::Psp),
            "POmega" | "POmegao" | "POmega0" | "O" => Some(Family::OmegaCirc),
            "POmega+" | "O+" => Some(Family::OmegaPlus),
            "POmega-" | "O-" => Some(Family::OmegaMinus),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Psl => "PSL",
            Family::Psu => "PSU",
            Family::Psp => "PSp",
            Family::OmegaCirc => "POmega",
            Family::OmegaPlus => "POmega+",
            Family::OmegaMinus => "POmega-",
        }
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::OmegaCirc | Family::OmegaPlus | Family::OmegaMinus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId {
    pub family: Family,
    pub n: u32,
    pub p: u64,
    pub e: u32,
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}({})", self.family.name(), self.n, self.q())
    }
}

/// A product of integers, each kept as a u64 when possible so that prime sets
/// can be computed piece by piece.
#[derive(Debug, Clone)]
struct Pieces {
    /// p and the exponent of the p-part
    ppart: (u64, u32),
    /// the remaining factors of the numerator
    num: Vec<BigUint>,
    /// the divisor
    den: u64,
}

impl Pieces {
    fn value(&self) -> BigUint {
        let prod: BigUint = self.num.iter().product();
        prod * bpow(self.ppart.0, self.ppart.1) / BigUint::from(self.den)
    }

    fn factorization(&self) -> Option<Factorization> {
        let (p, k) = self.ppart;
        let mut f = Factorization { pairs: if k > 0 { vec![(p, k)] } else { vec![] } };
        for x in &self.num {
            let v = x.to_u64()?;
            f = f.mul(&factorize(v).ok()?);
        }
        f.div(&factorize(self.den).ok()?).ok()
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn bpow(q: u64, i: u32) -> BigUint {
    BigUint::from(q).pow(i)
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// q^i mod k as u64 arithmetic.
fn pow_mod(q: u64, i: u32, k: u64) -> u64 {
    let mut r = 1 % k;
    for _ in 0..i {
        r = (r as u128 * q as u128 % k as u128) as u64;
    }
    r
}

impl GroupId {
    pub fn new(family: Family, n: u32, q: u64) -> Result<GroupId, BoundError> {
        let (p, e) =
            prime_power(q).ok_or_else(|| BoundError::InvalidId(format!("q = {q} is not a prime power")))?;
        let id = GroupId { family, n, p, e };
        let bad = |msg: &str| Err(BoundError::InvalidId(format!("{}: {msg}", id)));
        match family {
            Family::Psl if n < 2 => bad("needs n >= 2"),
            Family::Psu if n < 3 => bad("needs n >= 3"),
            Family::Psp if n < 4 || n % 2 != 0 => bad("needs even n >= 4"),
            Family::OmegaCirc if n < 7 || n % 2 == 0 => bad("needs odd n >= 7"),
            Family::OmegaCirc if p == 2 => bad("odd-dimensional orthogonal groups need odd q"),
            Family::OmegaPlus | Family::OmegaMinus if n < 8 || n % 2 != 0 => bad("needs even n >= 8"),
            _ => Ok(id),
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// q² for unitary groups, q otherwise.
    pub fn q0(&self) -> u64 {
        if self.family == Family::Psu {
            self.q() * self.q()
        } else {
            self.q()
        }
    }

    /// Witt index; None for linear groups.
    pub fn witt(&self) -> Option<u32> {
        let n = self.n;
        match self.family {
            Family::Psl => None,
            Family::Psu | Family::Psp | Family::OmegaPlus => Some(n / 2),
            Family::OmegaCirc => Some((n - 1) / 2),
            Family::OmegaMinus => Some(n / 2 - 1),
        }
    }

    fn order_pieces(&self) -> Pieces {
        let q = self.q();
        let n = self.n;
        let (p, e) = (self.p, self.e);
        let mut num = Vec::new();
        match self.family {
            Family::Psl => {
                for i in 2..=n {
                    num.push(bpow(q, i) - 1u32);
                }
                Pieces { ppart: (p, e * n * (n - 1) / 2), num, den: gcd(n as u64, q - 1) }
            }
            Family::Psu => {
                for i in 2..=n {
                    num.push(if i % 2 == 0 { bpow(q, i) - 1u32 } else { bpow(q, i) + 1u32 });
                }
                Pieces { ppart: (p, e * n * (n - 1) / 2), num, den: gcd(n as u64, q + 1) }
            }
            Family::Psp | Family::OmegaCirc => {
                let m = if self.family == Family::Psp { n / 2 } else { (n - 1) / 2 };
                for i in 1..=m {
                    num.push(bpow(q, 2 * i) - 1u32);
                }
                Pieces { ppart: (p, e * m * m), num, den: gcd(2, q - 1) }
            }
            Family::OmegaPlus | Family::OmegaMinus => {
                let m = n / 2;
                let plus = self.family == Family::OmegaPlus;
                num.push(if plus { bpow(q, m) - 1u32 } else { bpow(q, m) + 1u32 });
                for i in 1..m {
                    num.push(bpow(q, 2 * i) - 1u32);
                }
                let qm4 = pow_mod(q, m, 4);
                let d = if plus { gcd(4, (qm4 + 3) % 4) } else { gcd(4, (qm4 + 1) % 4) };
                Pieces { ppart: (p, e * m * (m - 1)), num, den: d }
            }
        }
    }

    /// |Out(G₀)|.
    pub fn out_order(&self) -> u64 {
        let q = self.q();
        let e = self.e as u64;
        let n = self.n;
        match self.family {
            Family::Psl if n == 2 => gcd(2, q - 1) * e,
            Family::Psl => 2 * gcd(n as u64, q - 1) * e,
            Family::Psu => 2 * gcd(n as u64, q + 1) * e,
            Family::Psp if n == 4 && self.p == 2 => 2 * e,
            Family::Psp => gcd(2, q - 1) * e,
            Family::OmegaCirc => 2 * e,
            Family::OmegaPlus | Family::OmegaMinus => {
                let d = self.order_pieces().den;
                if self.family == Family::OmegaPlus && n == 8 {
                    6 * d * e
                } else {
                    2 * d * e
                }
            }
        }
    }

    pub fn group_order(&self) -> BigUint {
        self.order_pieces().value()
    }

    pub fn aut_order(&self) -> BigUint {
        self.group_order() * big(self.out_order())
    }

    /// Factorization of |G₀|, when every order piece fits in a u64.
    pub fn group_order_factored(&self) -> Option<Factorization> {
        self.order_pieces().factorization()
    }

    pub fn aut_order_factored(&self) -> Option<Factorization> {
        Some(self.group_order_factored()?.mul(&factorize(self.out_order()).ok()?))
    }

    /// ω(|Aut(G₀)|), exact.
    pub fn omega_aut(&self) -> Option<usize> {
        Some(self.aut_order_factored()?.omega())
    }

    /// |Aut(G₀)|_{p′}.
    pub fn aut_pprime(&self) -> BigUint {
        // apart from the p-part, the pieces and d are prime to p
        let pieces = self.order_pieces();
        let rest: BigUint = pieces.num.iter().product();
        rest / big(pieces.den) * p_prime_part(&big(self.out_order()), self.p)
    }
}

/// Largest divisor of x coprime to p.
pub fn p_prime_part(x: &BigUint, p: u64) -> BigUint {
    let mut x = x.clone();
    let pb = big(p);
    if x.is_zero() {
        return x;
    }
    while (&x % &pb).is_zero() {
        x /= &pb;
    }
    x
}

/// Natural log of a big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// a(n,q) = 1 + log N / (log log N − 1.1714) with N = |Aut(G₀)|_{p′}.
pub fn a_nq(id: &GroupId) -> Result<f64, BoundError> {
    if id.family == Family::Psl && id.n == 2 && (id.q() == 4 || id.q() == 7) {
        return Err(BoundError::Excluded(format!("{id} is excluded (isomorphic to a smaller group)")));
    }
    let n = id.aut_pprime();
    if n < big(26) {
        return Err(BoundError::Excluded(format!("{id}: |Aut|_p' < 26")));
    }
    Ok(1.0 + robin_bound_from_ln(ln_big(&n))?)
}

/// (m*, m♯) from the table of maximal-totally-singular parameters.
pub fn mstar_msharp(id: &GroupId) -> Result<(Rational64, Rational64), BoundError> {
    let n = id.n as i64;
    let r = |a: i64| Rational64::from_integer(a);
    let half = Rational64::new(1, 2);
    match id.family {
        Family::Psl => Err(BoundError::Unsupported("m* and m♯ are not defined for linear groups".into())),
        Family::Psp => Ok((r(n / 2), r(n / 2 - 1))),
        Family::OmegaPlus => Ok((r(n / 2 - 1), r(n / 2 - 2))),
        Family::OmegaCirc => Ok((r((n - 1) / 2), r((n - 1) / 2 - 1))),
        Family::OmegaMinus => Ok((r(n / 2), r(n / 2 - 1))),
        Family::Psu if n % 2 == 0 => Ok((r(n / 2) - half, r(n / 2 - 1))),
        Family::Psu => Ok((r(n / 2) + half, r(n / 2))),
    }
}

/// q₀^x for x a half-integer (only unitary groups use halves, where q₀ = q²).
pub fn q0_pow(id: &GroupId, x: Rational64) -> BigRational {
    let exp = if id.family == Family::Psu { x * 2 } else { x };
    assert!(exp.is_integer(), "half-integer exponent outside the unitary family");
    let k = *exp.numer();
    let v = BigInt::from(q_pow_u(id.q(), k.unsigned_abs() as u32));
    if k >= 0 {
        BigRational::from_integer(v)
    } else {
        BigRational::new(BigInt::one(), v)
    }
}

fn q_pow_u(q: u64, k: u32) -> BigUint {
    BigUint::from(q).pow(k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSize {
    pub parts: Vec<BigUint>,
}

impl OmegaSize {
    pub fn total(&self) -> BigUint {
        self.parts.iter().sum()
    }
}

fn to_u(x: BigInt) -> BigUint {
    x.to_biguint().expect("domain sizes are positive")
}

/// |Ω| in cases (i), (ii), (iv), (vi). Case (ii) orthogonal with q odd returns
/// [|NS₁⁺|, |NS₁⁻|]; case (vi) returns [|Ω⁺|, |Ω⁻|].
pub fn omega_size(case: Case, id: &GroupId) -> Result<OmegaSize, BoundError> {
    let q = id.q();
    let n = id.n;
    let qb = BigInt::from(q);
    let qp = |i: u32| qb.pow(i);
    let one = || BigInt::one();
    let single = |x: BigInt| Ok(OmegaSize { parts: vec![to_u(x)] });
    match case {
        Case::I => match id.family {
            Family::Psl | Family::Psp => single((qp(n) - 1) / (&qb - 1)),
            Family::Psu => single((qp(n) - sign_neg(n)) * (qp(n - 1) - sign_neg(n - 1)) / (qp(2) - 1)),
            Family::OmegaCirc => single((qp(n - 1) - 1) / (&qb - 1)),
            Family::OmegaPlus => single((qp(n / 2) - 1) * (qp(n / 2 - 1) + 1) / (&qb - 1)),
            Family::OmegaMinus => single((qp(n / 2 - 1) - 1) * (qp(n / 2) + 1) / (&qb - 1)),
        },
        Case::Ii => match id.family {
            Family::Psu => single(qp(n - 1) * (qp(n) - sign_neg(n)) / (&qb + 1)),
            Family::OmegaCirc => {
                let h = (n - 1) / 2;
                let plus = qp(h) * (qp(h) + 1) / 2;
                let minus = qp(h) * (qp(h) - 1) / 2;
                Ok(OmegaSize { parts: vec![to_u(plus), to_u(minus)] })
            }
            Family::OmegaPlus | Family::OmegaMinus => {
                let h = n / 2;
                let eps = if id.family == Family::OmegaPlus { one() } else { -one() };
                if id.p == 2 {
                    single(qp(h - 1) * (qp(h) - eps))
                } else {
                    let each: BigInt = qp(h - 1) * (qp(h) - eps) / 2;
                    Ok(OmegaSize { parts: vec![to_u(each.clone()), to_u(each)] })
                }
            }
            _ => Err(BoundError::Unsupported(format!("case ii is not defined for {id}"))),
        },
        Case::Iv => {
            let m = id.witt().unwrap_or(0);
            match id.family {
                Family::OmegaPlus => {
                    single(qp(2 * (m - 1)) * (qp(m) - 1) * (qp(m - 1) - 1) / (2 * (&qb + 1)))
                }
                Family::OmegaMinus => single(qp(2 * m) * (qp(m + 1) + 1) * (qp(m) + 1) / (2 * (&qb + 1))),
                Family::OmegaCirc => single(qp(2 * m - 1) * (qp(2 * m) - 1) / (2 * (&qb + 1))),
                _ => Err(BoundError::Unsupported(format!("case iv needs an orthogonal group, not {id}"))),
            }
        }
        Case::Vi => {
            if id.family != Family::Psp || id.p != 2 {
                return Err(BoundError::Unsupported("case vi needs Sp_n(2^e)".into()));
            }
            let m = n / 2;
            let plus = qp(m) * (qp(m) + 1) / 2;
            let minus = qp(m) * (qp(m) - 1) / 2;
            Ok(OmegaSize { parts: vec![to_u(plus), to_u(minus)] })
        }
        _ => Err(BoundError::Unsupported(format!("no closed-form size for case {}", case.label()))),
    }
}

/// (−1)^i
fn sign_neg(i: u32) -> BigInt {
    if i % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}
