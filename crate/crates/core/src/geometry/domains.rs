//! Enumerated domains Ω: projective points, subspaces, polarizing quadratic
//! forms and subspace pairs, each with a canonical label.

use std::collections::{HashMap, HashSet};

use super::forms::{Eps, FormKind, FormSpace};
use super::linalg::{all_subspaces, rank, Subspace};
use super::field::Fq;
use super::GeomError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// Projective point, first nonzero coordinate 1.
    Point(Vec<u32>),
    Sub(Subspace),
    /// Quadratic form Σ aᵢvᵢ² + (cross terms of the symplectic form).
    Form(Vec<u32>),
    /// Unordered pair stored as (smaller dimension, larger dimension).
    Pair(Subspace, Subspace),
}

fn vec_label(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn sub_label(s: &Subspace) -> String {
    if s.rows.is_empty() {
        return "0".into();
    }
    s.rows.iter().map(|r| vec_label(r)).collect::<Vec<_>>().join(" | ")
}

impl Elem {
    pub fn label(&self) -> String {
        match self {
            Elem::Point(v) => format!("<{}>", vec_label(v)),
            Elem::Sub(s) => format!("[{}]", sub_label(s)),
            Elem::Form(a) => format!("Q({})", vec_label(a)),
            Elem::Pair(w, u) => format!("{{[{}], [{}]}}", sub_label(w), sub_label(u)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Domain {
    pub name: String,
    elems: Vec<Elem>,
    index: HashMap<Elem, u32>,
}

impl Domain {
    /// Sorts and deduplicates.
    pub fn new(name: impl Into<String>, mut elems: Vec<Elem>) -> Domain {
        elems.sort();
        elems.dedup();
        let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        Domain { name: name.into(), elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).map(|&i| i as usize)
    }

    /// One `index label` line per element.
    pub fn export_labels(&self) -> String {
        let mut out = format!("# domain {} size {}\n", self.name, self.len());
        for (i, e) in self.elems.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, e.label()));
        }
        out
    }
}

/// All projective points of GF(q)^n.
pub fn projective_points(n: usize, f: &Fq) -> Vec<Vec<u32>> {
    let q = f.q() as u64;
    let mut out = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        for code in 0..q.pow(tail as u32) {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            let mut c = code;
            for x in v[lead + 1..].iter_mut() {
                *x = (c % q) as u32;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

pub fn all_points(n: usize, f: &Fq) -> Domain {
    Domain::new("points", projective_points(n, f).into_iter().map(Elem::Point).collect())
}

/// Singular points of the form; every point for the trivial form.
pub fn singular_points(fs: &FormSpace) -> Domain {
    let pts = projective_points(fs.n, &fs.field)
        .into_iter()
        .filter(|v| fs.is_singular(v))
        .map(Elem::Point)
        .collect();
    Domain::new("singular-points", pts)
}

/// Non-degenerate points. For odd-characteristic quadratic forms the result is
/// [square class, non-square class] of Q(v); otherwise a single orbit.
pub fn nondegenerate_points(fs: &FormSpace) -> Result<Vec<Domain>, GeomError> {
    let f = &fs.field;
    match fs.kind {
        FormKind::Hermitian => {
            let pts = projective_points(fs.n, f)
                .into_iter()
                .filter(|v| fs.form(v, v) != 0)
                .map(Elem::Point)
                .collect();
            Ok(vec![Domain::new("ns1", pts)])
        }
        FormKind::Quadratic(_) => {
            let (mut plus, mut minus) = (Vec::new(), Vec::new());
            for v in projective_points(fs.n, f) {
                let c = fs.quadratic(&v).unwrap();
                if c == 0 {
                    continue;
                }
                if f.p() == 2 || f.is_square(c) {
                    plus.push(Elem::Point(v));
                } else {
                    minus.push(Elem::Point(v));
                }
            }
            if f.p() == 2 {
                Ok(vec![Domain::new("ns1", plus)])
            } else {
                Ok(vec![Domain::new("ns1+", plus), Domain::new("ns1-", minus)])
            }
        }
        _ => Err(GeomError::Unsupported(format!(
            "non-degenerate points need a hermitian or quadratic form, not {}",
            fs.kind.label()
        ))),
    }
}

/// 2-subspaces containing no singular point.
pub fn anisotropic_2_subspaces(fs: &FormSpace) -> Result<Domain, GeomError> {
    if !matches!(fs.kind, FormKind::Quadratic(_)) {
        return Err(GeomError::Unsupported("anisotropic 2-subspaces need a quadratic form".into()));
    }
    let f = &fs.field;
    let subs = all_subspaces(fs.n, 2, f)
        .into_iter()
        .filter(|s| is_anisotropic_line(fs, s))
        .map(Elem::Sub)
        .collect();
    Ok(Domain::new("aniso2", subs))
}

fn is_anisotropic_line(fs: &FormSpace, s: &Subspace) -> bool {
    let f = &fs.field;
    let (a, b) = (&s.rows[0], &s.rows[1]);
    let qa = fs.quadratic(a).unwrap();
    let qb = fs.quadratic(b).unwrap();
    let bab = fs.form(a, b);
    if qb == 0 {
        return false;
    }
    // Q(a + λb) = Q(a) + λB(a,b) + λ²Q(b)
    f.elements().all(|l| f.add(f.add(qa, f.mul(l, bab)), f.mul(f.mul(l, l), qb)) != 0)
}

/// Totally singular (k+1)-subspaces containing a member of `level`.
pub fn extend_totally_singular(fs: &FormSpace, level: &[Subspace]) -> Vec<Subspace> {
    if fs.kind == FormKind::Trivial {
        return vec![];
    }
    let f = &fs.field;
    let mut seen = HashSet::new();
    for w in level {
        let perp = fs.perp(w);
        for p in perp.points(f) {
            if !fs.is_singular(&p) || w.contains(&p, f) {
                continue;
            }
            let mut rows = w.rows.clone();
            rows.push(p);
            seen.insert(Subspace::span(fs.n, rows, f));
        }
    }
    let mut out: Vec<Subspace> = seen.into_iter().collect();
    out.sort();
    out
}

/// Totally singular k-subspaces, built by extension from the zero space.
pub fn totally_singular_subspaces(fs: &FormSpace, k: usize, cap: usize) -> Result<Vec<Subspace>, GeomError> {
    let mut level = vec![Subspace::zero(fs.n)];
    for _ in 0..k {
        level = extend_totally_singular(fs, &level);
        if level.len() > cap {
            return Err(GeomError::CapExceeded(format!("more than {cap} totally singular subspaces")));
        }
    }
    Ok(level)
}

pub fn maximal_totally_singular(fs: &FormSpace, cap: usize) -> Result<Domain, GeomError> {
    if fs.kind == FormKind::Trivial {
        return Err(GeomError::Unsupported("trivial form has no singular subspaces".into()));
    }
    let subs = totally_singular_subspaces(fs, fs.witt, cap)?;
    Ok(Domain::new("maxts", subs.into_iter().map(Elem::Sub).collect()))
}

/// k-subspaces satisfying a predicate.
pub fn subspaces_where<P: Fn(&Subspace) -> bool>(
    fs: &FormSpace,
    k: usize,
    name: &str,
    pred: P,
) -> Domain {
    let subs = all_subspaces(fs.n, k, &fs.field).into_iter().filter(|s| pred(s)).map(Elem::Sub).collect();
    Domain::new(name, subs)
}

/// Number of singular points in a subspace.
pub fn singular_point_count(fs: &FormSpace, s: &Subspace) -> usize {
    s.points(&fs.field).iter().filter(|p| fs.is_singular(p)).count()
}

/// Non-degenerate k-subspaces; for quadratic forms in even dimension k an
/// optional type filter (±) compares the singular-point count with O^±_k.
pub fn nondegenerate_subspaces(fs: &FormSpace, k: usize, eps: Option<Eps>) -> Domain {
    let q = fs.q as u64;
    let name = match eps {
        Some(e) => format!("nondeg{k}{}", e.symbol()),
        None => format!("nondeg{k}"),
    };
    subspaces_where(fs, k, &name, |s| {
        if !fs.is_nondegenerate_on(s) {
            return false;
        }
        match (eps, fs.kind) {
            (Some(e), FormKind::Quadratic(_)) if k % 2 == 0 => {
                let h = k as u32 / 2;
                let plus = (q.pow(h) - 1) * (q.pow(h - 1) + 1) / (q - 1);
                let is_plus = singular_point_count(fs, s) as u64 == plus;
                is_plus == (e == Eps::Plus)
            }
            _ => true,
        }
    })
}

/// Type of the quadratic form with diagonal `a` polarizing to the standard
/// symplectic form in characteristic 2, by counting zeros.
pub fn polarizing_form_type(fs: &FormSpace, a: &[u32]) -> Eps {
    let f = &fs.field;
    let n = fs.n;
    let q = f.q() as u64;
    let total = q.pow(n as u32);
    let mut zeros = 0u64;
    for code in 0..total {
        let v = super::linalg::decode(code, n, f.q());
        if eval_polarizing(f, a, &v) == 0 {
            zeros += 1;
        }
    }
    if zeros > q.pow(n as u32 - 1) {
        Eps::Plus
    } else {
        Eps::Minus
    }
}

/// Q(v) = Σ aᵢvᵢ² + Σ x_j y_j over the hyperbolic pairs.
pub fn eval_polarizing(f: &Fq, a: &[u32], v: &[u32]) -> u32 {
    let mut s = 0;
    for i in 0..v.len() {
        if a[i] != 0 && v[i] != 0 {
            s = f.add(s, f.mul(a[i], f.mul(v[i], v[i])));
        }
    }
    for j in 0..v.len() / 2 {
        s = f.add(s, f.mul(v[2 * j], v[2 * j + 1]));
    }
    s
}

/// All quadratic forms of type ε polarizing to the standard symplectic form.
pub fn quadratic_forms_polarizing(fs: &FormSpace, eps: Eps) -> Result<Domain, GeomError> {
    if fs.kind != FormKind::Symplectic || fs.field.p() != 2 {
        return Err(GeomError::Unsupported("polarizing forms need a symplectic form in characteristic 2".into()));
    }
    if eps == Eps::Circ {
        return Err(GeomError::Param("type must be + or -".into()));
    }
    let n = fs.n;
    let q = fs.field.q();
    let forms = (0..(q as u64).pow(n as u32))
        .map(|c| super::linalg::decode(c, n, q))
        .filter(|a| polarizing_form_type(fs, a) == eps)
        .map(Elem::Form)
        .collect();
    Ok(Domain::new(format!("forms{}", eps.symbol()), forms))
}

/// Ω_{k,≤} (W ≤ U) and Ω_{k,⊥} (V = W ⊕ U) with dim W = k, dim U = n − k.
pub fn pair_domains(n: usize, k: usize, f: &Fq) -> Result<(Domain, Domain), GeomError> {
    if k == 0 || 2 * k >= n {
        return Err(GeomError::Param(format!("pair domains need 1 <= k < n/2, got k = {k}, n = {n}")));
    }
    let small = all_subspaces(n, k, f);
    let large = all_subspaces(n, n - k, f);
    let (mut le, mut perp) = (Vec::new(), Vec::new());
    for w in &small {
        for u in &large {
            let mut rows = w.rows.clone();
            rows.extend(u.rows.iter().cloned());
            let r = rank(rows, f);
            if r == n - k {
                le.push(Elem::Pair(w.clone(), u.clone()));
            } else if r == n {
                perp.push(Elem::Pair(w.clone(), u.clone()));
            }
        }
    }
    Ok((Domain::new("pairs-le", le), Domain::new("pairs-perp", perp)))
}

/// Totally singular subspaces of dimension dim U meeting U trivially.
pub fn totally_singular_complements(fs: &FormSpace, u: &Subspace) -> Result<usize, GeomError> {
    let f = &fs.field;
    let all = totally_singular_subspaces(fs, u.dim(), 1 << 22)?;
    Ok(all
        .iter()
        .filter(|w| {
            let mut rows = w.rows.clone();
            rows.extend(u.rows.iter().cloned());
            rank(rows, f) == fs.n
        })
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(kind: FormKind, n: usize, q: u32) -> FormSpace {
        FormSpace::standard(kind, n, q).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(singular_points(&std(FormKind::Hermitian, 5, 2)).len(), 165);
        assert_eq!(singular_points(&std(FormKind::Quadratic(Eps::Plus), 8, 2)).len(), 135);
        assert_eq!(singular_points(&std(FormKind::Trivial, 5, 2)).len(), 31);
        assert_eq!(singular_points(&std(FormKind::Symplectic, 6, 2)).len(), 63);
    }

    #[test]
    fn ns1_counts() {
        let o7 = nondegenerate_points(&std(FormKind::Quadratic(Eps::Circ), 7, 3)).unwrap();
        assert_eq!((o7[0].len(), o7[1].len()), (378, 351));
        let o8 = nondegenerate_points(&std(FormKind::Quadratic(Eps::Plus), 8, 2)).unwrap();
        assert_eq!(o8[0].len(), 120);
        let u5 = nondegenerate_points(&std(FormKind::Hermitian, 5, 2)).unwrap();
        assert_eq!(u5[0].len(), 176);
    }

    #[test]
    fn maxts_counts() {
        let cap = 1 << 20;
        assert_eq!(maximal_totally_singular(&std(FormKind::Quadratic(Eps::Plus), 6, 2), cap).unwrap().len(), 30);
        assert_eq!(maximal_totally_singular(&std(FormKind::Symplectic, 4, 2), cap).unwrap().len(), 15);
        let om = std(FormKind::Quadratic(Eps::Minus), 6, 2);
        let d = maximal_totally_singular(&om, cap).unwrap();
        for e in d.elems() {
            let Elem::Sub(s) = e else { unreachable!() };
            assert!(om.is_totally_singular(s) && s.dim() == 2);
        }
        assert_eq!(d.len(), 45);
    }

    #[test]
    fn forms_sp4() {
        let sp = std(FormKind::Symplectic, 4, 2);
        let p = quadratic_forms_polarizing(&sp, Eps::Plus).unwrap();
        let m = quadratic_forms_polarizing(&sp, Eps::Minus).unwrap();
        assert_eq!((p.len(), m.len()), (10, 6));
        assert!(p.index_of(&Elem::Form(vec![0; 4])).is_some());
    }

    #[test]
    fn pairs_small() {
        let f = Fq::new(2, 1).unwrap();
        let (le, perp) = pair_domains(5, 1, &f).unwrap();
        assert_eq!((le.len(), perp.len()), (465, 496));
        assert!(pair_domains(4, 2, &f).is_err());
    }
}
