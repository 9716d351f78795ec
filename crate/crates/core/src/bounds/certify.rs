//! Per-case certification: S(g,Ω) is bounded by S₁ + S₂, the sums over
//! primes r with r | ep(q₀−1) and the remaining primes, and the case is
//! certified when the bound is below 1.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::tables::ExternalTables;
use super::{a_nq, mstar_msharp, q0_pow, BoundError, Family, GroupId};
use crate::geometry::Eps;
use crate::numtheory::{factorize, mult_order, primitive_prime_divisor_count, Factorization, GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Triality,
    SmallDim,
}

impl Case {
    pub fn parse(s: &str) -> Option<Case> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Some(Case::I),
            "ii" | "2" => Some(Case::Ii),
            "iii" | "3" => Some(Case::Iii),
            "iv" | "4" => Some(Case::Iv),
            "v" | "5" => Some(Case::V),
            "vi" | "6" => Some(Case::Vi),
            "vii" | "7" => Some(Case::Vii),
            "triality" => Some(Case::Triality),
            "small-dim" | "smalldim" => Some(Case::SmallDim),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
            Case::Iv => "iv",
            Case::V => "v",
            Case::Vi => "vi",
            Case::Vii => "vii",
            Case::Triality => "triality",
            Case::SmallDim => "small-dim",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Inconclusive,
    DelegatedExternal,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Inconclusive => "inconclusive",
            Verdict::DelegatedExternal => "delegated-external",
        }
    }
}

/// Either an exact rational or a float upper bound (only where log₂ of a
/// non-power of two, or a half-integer power of a non-square, appears).
#[derive(Debug, Clone, PartialEq)]
pub enum Val {
    Exact(BigRational),
    Approx(f64),
}

impl Val {
    pub fn f64(&self) -> f64 {
        match self {
            Val::Exact(r) => rat_f64(r),
            Val::Approx(x) => *x,
        }
    }

    fn scale(&self, r: &BigRational) -> Val {
        match self {
            Val::Exact(a) => Val::Exact(a * r),
            Val::Approx(x) => Val::Approx(x * rat_f64(r)),
        }
    }

    fn add(&self, o: &Val) -> Val {
        match (self, o) {
            (Val::Exact(a), Val::Exact(b)) => Val::Exact(a + b),
            _ => Val::Approx(self.f64() + o.f64()),
        }
    }

    fn le(&self, o: &Val) -> bool {
        match (self, o) {
            (Val::Exact(a), Val::Exact(b)) => a <= b,
            _ => self.f64() <= o.f64(),
        }
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::MAX) / r.denom().to_f64().unwrap_or(f64::MAX)
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn inv_pow(q: u64, k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(BigUint::from(q).pow(k)))
}

/// Sum of values, comparable against 1 with the guard band.
fn sum(vals: impl IntoIterator<Item = Val>) -> Val {
    vals.into_iter().fold(Val::Exact(BigRational::zero()), |a, b| a.add(&b))
}

fn below_one(v: &Val) -> bool {
    match v {
        Val::Exact(r) => *r < BigRational::one(),
        Val::Approx(x) => x + GUARD < 1.0,
    }
}

#[derive(Debug, Clone)]
pub struct Term {
    pub tag: String,
    pub value: Val,
}

impl Term {
    fn new(tag: impl Into<String>, value: Val) -> Term {
        Term { tag: tag.into(), value }
    }

    fn to_json(&self) -> Value {
        let exact = match &self.value {
            Val::Exact(r) => Some(r.to_string()),
            Val::Approx(_) => None,
        };
        json!({"tag": self.tag, "value": self.value.f64(), "exact": exact})
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub id: GroupId,
    pub case: Case,
    pub s1: Vec<Term>,
    pub s2: Vec<Term>,
    pub refinements: Vec<String>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn s1_value(&self) -> Val {
        sum(self.s1.iter().map(|t| t.value.clone()))
    }

    pub fn s2_value(&self) -> Val {
        sum(self.s2.iter().map(|t| t.value.clone()))
    }

    pub fn total(&self) -> Val {
        self.s1_value().add(&self.s2_value())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "group": self.id.to_string(),
            "family": self.id.family.name(),
            "n": self.id.n,
            "q": self.id.q(),
            "case": self.case.label(),
            "s1": self.s1_value().f64(),
            "s2": self.s2_value().f64(),
            "total": self.total().f64(),
            "verdict": self.verdict.label(),
            "terms": {
                "s1": self.s1.iter().map(Term::to_json).collect::<Vec<_>>(),
                "s2": self.s2.iter().map(Term::to_json).collect::<Vec<_>>(),
            },
            "refinements": self.refinements,
            "notes": self.notes,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options<'a> {
    /// Apply the prime-set and element-order refinements on top of the plain
    /// bound.
    pub refinements: bool,
    pub tables: Option<&'a ExternalTables>,
}

impl Default for Options<'_> {
    fn default() -> Self {
        Options { refinements: true, tables: None }
    }
}

/// log₂ t, exact when t is a power of two.
fn log2(t: u64) -> Val {
    if t.is_power_of_two() {
        Val::Exact(BigRational::from_integer(BigInt::from(t.trailing_zeros())))
    } else {
        // nudged up so the float stays an upper bound
        Val::Approx((t as f64).log2() * (1.0 + 1e-15))
    }
}

fn primes_of(x: u64) -> Result<Factorization, BoundError> {
    Ok(factorize(x)?)
}

/// Primes dividing e·p·(q₀−1).
fn s1_primes(id: &GroupId, q0: u64) -> Result<Factorization, BoundError> {
    let e = id.e as u64;
    Ok(primes_of(e)?.mul(&primes_of(id.p)?).mul(&primes_of(q0 - 1)?))
}

/// How many leading terms of the S₂ series get their exact primitive prime
/// divisor count, per case and q (the small-q corrections of the argument).
fn ppd_depth(case: Case, family: Family, q: u64) -> u32 {
    match (case, family, q) {
        (Case::I, Family::Psu, 2) | (Case::Ii, Family::Psu, 2) => 3,
        (Case::I, f, _) if f != Family::Psl && f != Family::Psu => match q {
            3 => 4,
            4 => 3,
            5 => 2,
            _ => 0,
        },
        (Case::Ii, f, _) if f.is_orthogonal() => match q {
            3 => 6,
            4 => 4,
            5 => 2,
            _ => 0,
        },
        (Case::Vi, _, 4) => 4,
        _ => 0,
    }
}

/// Σ_{ℓ≥ℓ₀} c·ω_t(t^ℓ−1)/w^ℓ with w = t^k: the first terms up to `depth` use
/// the exact count, the rest ω_t(t^ℓ−1) ≤ ℓ·log₂ t summed in closed form.
fn series(
    c: &BigRational,
    t: u64,
    k: u32,
    l0: u32,
    depth: u32,
    terms: &mut Vec<Term>,
    refinements: &mut Vec<String>,
) -> Result<(), BoundError> {
    let w = t.checked_pow(k).ok_or_else(|| BoundError::Unsupported(format!("{t}^{k} overflows")))?;
    let mut last = l0 - 1;
    for l in l0..=depth {
        let Ok(cnt) = primitive_prime_divisor_count(t, l) else { break };
        terms.push(Term::new(
            format!("ell={l}: omega_{t}({t}^{l}-1)={cnt}"),
            Val::Exact(c * BigRational::from_integer(cnt.into()) * inv_pow(w, l)),
        ));
        refinements.push(format!("exact ppd count omega_{t}({t}^{l}-1) = {cnt}"));
        last = l;
    }
    // Σ_{ℓ>last} ℓ/w^ℓ = w/(w−1)² − Σ_{ℓ≤last} ℓ/w^ℓ
    let wb = BigInt::from(w);
    let mut tail = BigRational::new(wb.clone(), (&wb - 1) * (&wb - 1));
    for l in 1..=last {
        tail -= BigRational::from_integer(l.into()) * inv_pow(w, l);
    }
    terms.push(Term::new(format!("tail ell>{last}: c*log2({t})*sum ell/{w}^ell"), log2(t).scale(&(c * tail))));
    Ok(())
}

fn exact(r: BigRational) -> Val {
    Val::Exact(r)
}

fn unsupported(case: Case, id: &GroupId) -> BoundError {
    BoundError::Unsupported(format!("case {} is not defined for {id}", case.label()))
}

struct Parts {
    s1: Vec<Term>,
    s2: Vec<Term>,
    refinements: Vec<String>,
    notes: Vec<String>,
    delegated: bool,
}

impl Parts {
    fn new() -> Parts {
        Parts { s1: vec![], s2: vec![], refinements: vec![], notes: vec![], delegated: false }
    }
}

/// Upper bound for fpr(x) when x has prime order r with ℓ′ = |V : C_V(x)|
/// ≥ 2 (in cases i and ii).
pub fn fprell_bound(case: Case, id: &GroupId, ell: u32) -> Result<BigRational, BoundError> {
    if ell < 2 {
        return Err(BoundError::Unsupported("the bound needs l' >= 2".into()));
    }
    let q0 = id.q0();
    let base = inv_pow(q0, ell);
    match (case, id.family) {
        (Case::I, Family::Psl) => Ok(base),
        (Case::I, _) => Ok(base * rat(2, 1)),
        (Case::Ii, Family::Psu) => Ok(base * rat(2, 1)),
        (Case::Ii, f) if f.is_orthogonal() => Ok(base * rat(36, 13)),
        _ => Err(unsupported(case, id)),
    }
}

/// Bound for fpr on non-degenerate forms (case vi) of an element with
/// |V : C_V(x)| = 2m − c.
pub fn casevi_fpr_bound(m: u32, q: u64, c: u32, eps: Eps) -> Result<BigRational, BoundError> {
    if m < 3 || c > 2 * m || q < 2 || !q.is_power_of_two() {
        return Err(BoundError::Unsupported(format!("bad parameters m={m}, c={c}, q={q}")));
    }
    match (c, eps) {
        (0, Eps::Minus) => {
            let qm = BigInt::from(BigUint::from(q).pow(m));
            Ok(BigRational::new(BigInt::from(4), &qm * (&qm - 1)))
        }
        (_, Eps::Circ) => Err(BoundError::Unsupported("case vi forms are of type + or -".into())),
        _ => Ok(rat(4, 1) * inv_pow(q, 2 * m - c)),
    }
}

/// q^{m+1}/(q−1) < q^{m(m−1)/2}: the count of complements is too small.
pub fn line22_contradiction(m: u32, q: u64) -> bool {
    let qb = BigUint::from(q);
    qb.pow(m + 1) < (&qb - 1u32) * qb.pow(m * (m - 1) / 2)
}

fn front_lemma(id: &GroupId) -> Result<BigRational, BoundError> {
    // 2/q₀^{m*} + 1/q^{m♯} + 1/q₀
    let (ms, mh) = mstar_msharp(id)?;
    let q = id.q();
    let sharp = inv_pow(q, mh.to_integer() as u32);
    Ok(rat(2, 1) / q0_pow(id, ms) + sharp + inv_pow(id.q0(), 1))
}

fn ls(q: u64) -> BigRational {
    rat(4, 3 * q as i64)
}

fn omega_term(label: &str, k: usize, f: BigRational) -> Term {
    Term::new(format!("{label}={k} x fpr bound"), exact(BigRational::from_integer(k.into()) * f))
}

fn case_i(id: &GroupId, p: &mut Parts) -> Result<(), BoundError> {
    let q = id.q();
    let q0 = id.q0();
    let n = id.n;
    let w1 = s1_primes(id, q0)?.omega();
    let depth = ppd_depth(Case::I, id.family, q);
    match id.family {
        Family::Psl => {
            if n < 5 {
                return Err(BoundError::Unsupported(format!("{id}: n < 5 is the small-dimensional case")));
            }
            let lemma = inv_pow(q, 1) + inv_pow(q, n - 1);
            let f = [ls(q), lemma, rat(1, 2)].into_iter().min().unwrap();
            p.s1.push(omega_term("omega(ep(q-1))", w1, f));
            series(&rat(1, 1), q, 1, 2, depth, &mut p.s2, &mut p.refinements)?;
        }
        Family::Psu => {
            let f = if n == 5 { ls(q) } else { front_lemma(id)? };
            p.s1.push(omega_term("omega(ep(q^2-1))", w1, f));
            series(&rat(2, 1), q0, 1, 2, depth, &mut p.s2, &mut p.refinements)?;
        }
        _ => {
            if id.witt().unwrap() < 3 {
                return Err(unsupported(Case::I, id));
            }
            if q == 2 {
                p.delegated = true;
                p.notes.push("q = 2: all elements have regular cycles on points by the even-characteristic classification".into());
            }
            p.s1.push(omega_term("omega(ep(q-1))", w1, front_lemma(id)?));
            series(&rat(2, 1), q, 1, 2, depth, &mut p.s2, &mut p.refinements)?;
        }
    }
    Ok(())
}

/// f(n,q) for non-degenerate 1-spaces of unitary groups.
fn unitary_ns1(n: u32, q: u64) -> BigRational {
    let m = n / 2;
    if n % 2 == 0 {
        rat(2, 1) * inv_pow(q, 2 * (m - 2)) + inv_pow(q, 2 * m - 1) + inv_pow(q, 2 * (m - 1)) + inv_pow(q, 2)
    } else {
        rat(2, 1) * inv_pow(q, 2 * m + 1) + inv_pow(q, 2 * m) + inv_pow(q, 2)
    }
}

fn case_ii(id: &GroupId, o: &Options, p: &mut Parts) -> Result<(), BoundError> {
    let q = id.q();
    let q0 = id.q0();
    let n = id.n;
    match id.family {
        Family::Psu if n == 5 => {
            let w = id.omega_aut().ok_or_else(|| BoundError::Unsupported("|Aut| too large to factor".into()))?;
            p.s1.push(omega_term("omega(|Aut|)", w, ls(q)));
            if q <= 8 {
                p.notes.push("q <= 8 needs element-order data for the automorphism group".into());
            }
        }
        Family::Psu => {
            let w1 = s1_primes(id, q0)?.omega();
            p.s1.push(omega_term("omega(ep(q^2-1))", w1, unitary_ns1(n, q)));
            series(&rat(2, 1), q0, 1, 2, ppd_depth(Case::Ii, id.family, q), &mut p.s2, &mut p.refinements)?;
        }
        f if f.is_orthogonal() => {
            if q == 2 {
                p.delegated = true;
                p.notes.push("q = 2: all elements have regular cycles by the even-characteristic classification".into());
            }
            let (ms, mh) = mstar_msharp(id)?;
            let fq = rat(2, 1) / q0_pow(id, ms) + rat(2, 1) / q0_pow(id, mh) + inv_pow(q, 1);
            let front = if q >= 4 { fq.min(ls(q)) } else { fq };
            let p1 = s1_primes(id, q)?;
            p.s1.push(omega_term("omega(ep(q-1))", p1.omega(), front));
            let c = rat(36, 13);
            let mut plain = Vec::new();
            series(&c, q, 1, 2, ppd_depth(Case::Ii, id.family, q), &mut plain, &mut p.refinements)?;
            let plain_val = sum(plain.iter().map(|t| t.value.clone()));
            let restricted = if o.refinements { prime_set_s2(id, &p1, &c) } else { None };
            match restricted {
                Some((terms, primes)) if sum(terms.iter().map(|t| t.value.clone())).le(&plain_val) => {
                    p.refinements.push(format!(
                        "S2 restricted to the primes of |Aut| outside ep(q-1): {primes:?}"
                    ));
                    p.s2 = terms;
                }
                _ => p.s2 = plain,
            }
        }
        _ => return Err(unsupported(Case::Ii, id)),
    }
    Ok(())
}

/// Σ over primes r of |Aut| not dividing ep(q−1) of c/q^{ord_r(q)}.
fn prime_set_s2(id: &GroupId, p1: &Factorization, c: &BigRational) -> Option<(Vec<Term>, Vec<u64>)> {
    let aut = id.aut_order_factored()?;
    let q = id.q();
    let rest: Vec<u64> = aut.primes().filter(|&r| !p1.contains(r)).collect();
    let terms = rest
        .iter()
        .map(|&r| {
            let l = mult_order(q % r, r) as u32;
            Term::new(format!("r={r}: ell={l}"), exact(c * inv_pow(q, l)))
        })
        .collect();
    Some((terms, rest))
}

fn case_iii(id: &GroupId, o: &Options, p: &mut Parts) -> Result<(), BoundError> {
    let q = id.q();
    let q0 = id.q0();
    let entry = o.tables.and_then(|t| t.get(id));
    let log_o = match entry.and_then(|e| e.max_order) {
        Some(mo) => {
            p.notes.push(format!("maximal element order {mo} from tables"));
            log2(mo)
        }
        None => log2(q0).scale(&BigRational::from_integer(id.n.into())),
    };
    let aut_omega = id.omega_aut();
    if id.family == Family::Psu && id.n == 5 {
        let mut w = log_o.f64().floor() as usize;
        if o.refinements {
            if let Some(a) = aut_omega {
                if a < w {
                    p.refinements.push(format!("omega(|Aut|) = {a}"));
                    w = a;
                }
            }
            // primes of |G_α| for the stabilizer of a totally singular 2-space
            let e = id.e as u64;
            let ga = primes_of(2 * e)
                .and_then(|f| Ok(f.mul(&primes_of(id.p)?).mul(&primes_of(q * q - 1)?).mul(&primes_of(q0 * q0 - 1)?)));
            if let (Ok(ga), Some(aut)) = (ga, id.aut_order_factored()) {
                let both = aut.primes().filter(|&r| ga.contains(r)).count();
                if both < w {
                    p.refinements.push(format!("only {both} primes of |Aut| divide |G_alpha|"));
                    w = both;
                }
            }
        }
        p.s1.push(omega_term("primes", w, ls(q)));
        return Ok(());
    }
    let m = id.witt().ok_or_else(|| unsupported(Case::Iii, id))?;
    if m < 3 {
        return Err(unsupported(Case::Iii, id));
    }
    let (ms, mh) = mstar_msharp(id)?;
    let f = rat(2, 1) / q0_pow(id, ms) + BigRational::one() / q0_pow(id, mh);
    let mut v = log_o.scale(&f);
    let mut tag = "log2(o) x fpr bound".to_string();
    if o.refinements {
        if let Some(a) = aut_omega {
            let alt = exact(BigRational::from_integer(a.into()) * &f);
            if !v.le(&alt) {
                p.refinements.push(format!("omega(|Aut|) = {a} replaces log2(o)"));
                v = alt;
                tag = format!("omega(|Aut|)={a} x fpr bound");
            }
        }
    }
    p.s1.push(Term::new(tag, v));
    Ok(())
}

/// f(n,q) for anisotropic 2-spaces.
fn aniso_front(n: u32, q: u64) -> Val {
    let i2 = inv_pow(q, 2);
    if n % 2 == 0 {
        let h = n / 2;
        exact(rat(3, 1) * inv_pow(q, h - 2) + inv_pow(q, h - 1) + i2)
    } else {
        let h = n as f64 / 2.0;
        let qf = q as f64;
        let x = 3.0 / qf.powf(h - 2.0) + 1.0 / qf.powf(h - 1.0);
        Val::Approx(x * (1.0 + 1e-14) + rat_f64(&i2))
    }
}

fn case_iv(id: &GroupId, _o: &Options, p: &mut Parts) -> Result<(), BoundError> {
    if !id.family.is_orthogonal() {
        return Err(unsupported(Case::Iv, id));
    }
    let q = id.q();
    if q == 2 {
        p.delegated = true;
        p.notes.push("q = 2: all elements have regular cycles by the even-characteristic classification".into());
    }
    let w1 = s1_primes(id, q * q)?.omega();
    p.s1.push(Term::new(
        format!("omega(ep(q^2-1))={w1} x f(n,q)"),
        aniso_front(id.n, q).scale(&BigRational::from_integer(w1.into())),
    ));
    series(&rat(4, 1), q, 2, 3, 0, &mut p.s2, &mut p.refinements)?;
    Ok(())
}

fn case_vi(id: &GroupId, o: &Options, p: &mut Parts) -> Result<(), BoundError> {
    if id.family != Family::Psp || id.p != 2 || id.n < 6 {
        return Err(BoundError::Unsupported("case vi needs Sp_{2m}(2^e) with m >= 3".into()));
    }
    let q = id.q();
    let m = id.n / 2;
    let e = id.e as u64;
    if q == 2 {
        p.delegated = true;
        p.notes.push("q = 2: handled by the even-characteristic classification".into());
    }
    if e == 2 && o.refinements {
        // r = 2 at fpr ≤ 4/(3q); r = 3 fixes a subspace of codimension ≤ 2
        p.s1.push(Term::new("r=2", exact(ls(q))));
        p.s1.push(Term::new("r=3: 4/q^2", exact(rat(4, 1) * inv_pow(q, 2))));
        p.refinements.push("r = 3 treated separately".into());
    } else {
        let w1 = primes_of(2 * e)?.mul(&primes_of(q - 1)?).omega();
        p.s1.push(omega_term("omega(2e(q-1))", w1, ls(q)));
    }
    series(&rat(4, 1), q, 1, 2, ppd_depth(Case::Vi, id.family, q), &mut p.s2, &mut p.refinements)?;
    let top = match primitive_prime_divisor_count(q, 2 * m) {
        Ok(c) => c as u64,
        Err(_) => 2 * m as u64 * e,
    };
    let qm = BigInt::from(BigUint::from(q).pow(m));
    let extra = BigRational::new(BigInt::from(4 * top), &qm * &qm * (&qm - 1));
    p.s2.push(Term::new(format!("c=0 minus-type term, omega_q(q^2m-1)<={top}"), exact(extra)));
    Ok(())
}

fn case_triality(id: &GroupId, p: &mut Parts) -> Result<(), BoundError> {
    if id.family != Family::OmegaPlus || id.n != 8 {
        return Err(BoundError::Unsupported("triality needs POmega+_8(q)".into()));
    }
    let q = id.q();
    let w = primes_of(6)?.mul(&s1_primes(id, q * q)?).omega();
    p.s1.push(omega_term("omega(6ep(q^2-1))", w, ls(q)));
    Ok(())
}

/// Groups in the small-dimensional list whose fixed-point ratios need the
/// amended bounds instead of 4/(3q).
pub(crate) fn needs_amended(id: &GroupId) -> bool {
    (id.family == Family::Psl && id.n == 2)
        || (id.n == 4 && id.q() == 2 && matches!(id.family, Family::Psl | Family::Psu))
}

pub fn small_dim_domain(id: &GroupId) -> bool {
    let q = id.q();
    match (id.family, id.n) {
        (Family::Psl, 2) => q >= 5,
        (Family::Psl, 3) => q >= 3,
        (Family::Psl, 4) => q >= 2,
        (Family::Psu, 3) => q >= 3,
        (Family::Psu, 4) => q >= 2,
        (Family::Psp, 4) => q >= 4,
        _ => false,
    }
}

fn case_small(id: &GroupId, o: &Options, p: &mut Parts) -> Result<(), BoundError> {
    if !small_dim_domain(id) {
        return Err(BoundError::Unsupported(format!("{id} is not in the small-dimensional list")));
    }
    let amended = o.tables.and_then(|t| t.get(id)).and_then(|e| e.amended_fpr());
    let t = match amended {
        Some(a) => {
            p.notes.push(format!("amended fpr bound {a} from tables"));
            a.min(ls(id.q()))
        }
        None if needs_amended(id) => {
            p.notes.push("needs an amended fixed-point ratio bound; 4/(3q) is not available".into());
            p.s1.push(Term::new("no bound", exact(BigRational::one())));
            return Ok(());
        }
        None => ls(id.q()),
    };
    match a_nq(id) {
        Ok(a) => p.notes.push(format!("a(n,q) = {a:.4}")),
        Err(e) => p.notes.push(e.to_string()),
    }
    let w = id.omega_aut().ok_or_else(|| BoundError::Unsupported("|Aut| too large to factor".into()))?;
    p.s1.push(omega_term("omega(|Aut|)", w, t));
    Ok(())
}

/// Certify that every element of a group with socle `id` acting in the given
/// case has a regular cycle.
pub fn certify_case(case: Case, id: &GroupId, o: &Options) -> Result<BoundReport, BoundError> {
    let mut p = Parts::new();
    match case {
        Case::I => case_i(id, &mut p)?,
        Case::Ii => case_ii(id, o, &mut p)?,
        Case::Iii => case_iii(id, o, &mut p)?,
        Case::Iv => case_iv(id, o, &mut p)?,
        Case::Vi => case_vi(id, o, &mut p)?,
        Case::Triality => case_triality(id, &mut p)?,
        Case::SmallDim => case_small(id, o, &mut p)?,
        Case::V | Case::Vii => {
            return Err(BoundError::Unsupported(format!(
                "case {} is settled by a separate argument and has no bound here",
                case.label()
            )))
        }
    }
    let total = sum(p.s1.iter().chain(&p.s2).map(|t| t.value.clone()));
    let verdict = if p.delegated {
        Verdict::DelegatedExternal
    } else if below_one(&total) {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    };
    Ok(BoundReport {
        id: *id,
        case,
        s1: p.s1,
        s2: p.s2,
        refinements: p.refinements,
        notes: p.notes,
        verdict,
    })
}

pub fn certify_small_dim(id: &GroupId, o: &Options) -> Result<BoundReport, BoundError> {
    certify_case(Case::SmallDim, id, o)
}

pub fn triality_bound(q: u64) -> Result<BoundReport, BoundError> {
    certify_case(Case::Triality, &GroupId::new(Family::OmegaPlus, 8, q)?, &Options::default())
}

pub fn s1_bound(case: Case, id: &GroupId) -> Result<f64, BoundError> {
    Ok(certify_case(case, id, &Options::default())?.s1_value().f64())
}

pub fn s2_bound(case: Case, id: &GroupId) -> Result<f64, BoundError> {
    Ok(certify_case(case, id, &Options::default())?.s2_value().f64())
}
