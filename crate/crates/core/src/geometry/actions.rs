//! Semilinear maps acting on domains, built-in generators, k-set and product
//! actions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domains::{eval_polarizing, Domain, Elem};
use super::field::Fq;
use super::forms::{FormKind, FormSpace};
use super::linalg::{left_kernel, vec_mul, Mat, Subspace};
use super::GeomError;
use crate::perm::{PermGroup, Permutation};

/// v ↦ v^{σ^t} M, followed by W ↦ W^⊥ (standard dot product) when `duality`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    pub mat: Mat,
    pub twist: u32,
    pub duality: bool,
}

impl SemilinearMap {
    pub fn linear(mat: Mat) -> SemilinearMap {
        SemilinearMap { mat, twist: 0, duality: false }
    }

    /// The duality τ: W ↦ W^⊥.
    pub fn duality(n: usize) -> SemilinearMap {
        SemilinearMap { mat: Mat::identity(n), twist: 0, duality: true }
    }

    pub fn apply_vec(&self, v: &[u32], f: &Fq) -> Vec<u32> {
        if self.twist == 0 {
            vec_mul(v, &self.mat, f)
        } else {
            let w: Vec<u32> = v.iter().map(|&a| f.frobenius(a, self.twist)).collect();
            vec_mul(&w, &self.mat, f)
        }
    }

    pub fn apply_subspace(&self, s: &Subspace, f: &Fq) -> Subspace {
        let img = Subspace::span(s.n, s.rows.iter().map(|r| self.apply_vec(r, f)).collect(), f);
        if self.duality {
            img.perp(&Mat::identity(s.n), f)
        } else {
            img
        }
    }
}

/// Precomputed data for applying one generator to domain elements.
struct Applier<'a> {
    map: &'a SemilinearMap,
    inv: Mat,
    fs: &'a FormSpace,
}

impl Applier<'_> {
    fn apply(&self, e: &Elem) -> Option<Elem> {
        let f = &self.fs.field;
        match e {
            Elem::Point(v) => {
                if self.map.duality {
                    return None;
                }
                let mut w = self.map.apply_vec(v, f);
                super::linalg::normalize(&mut w, f);
                Some(Elem::Point(w))
            }
            Elem::Sub(s) => Some(Elem::Sub(self.map.apply_subspace(s, f))),
            Elem::Pair(w, u) => {
                let (a, b) = (self.map.apply_subspace(w, f), self.map.apply_subspace(u, f));
                Some(if a.dim() <= b.dim() { Elem::Pair(a, b) } else { Elem::Pair(b, a) })
            }
            Elem::Form(a) => {
                // (Q∘g⁻¹)(eᵢ) = Q(row i of g⁻¹)
                let img = (0..self.fs.n).map(|i| eval_polarizing(f, a, self.inv.row(i))).collect();
                Some(Elem::Form(img))
            }
        }
    }
}

/// Permutation images of the generators on `domain`; generator i maps to
/// permutation i.
pub fn perm_image(gens: &[SemilinearMap], domain: &Domain, fs: &FormSpace) -> Result<PermGroup, GeomError> {
    let f = &fs.field;
    let mut perms = Vec::with_capacity(gens.len());
    for (gi, g) in gens.iter().enumerate() {
        if g.mat.n != fs.n {
            return Err(GeomError::Param(format!("generator {gi} has dimension {} not {}", g.mat.n, fs.n)));
        }
        let inv = g
            .mat
            .inverse(f)
            .ok_or_else(|| GeomError::Param(format!("generator {gi} is singular")))?;
        let forms = domain.elems().first().is_some_and(|e| matches!(e, Elem::Form(_)));
        if forms && (g.twist != 0 || g.duality || !fs.preserves(&g.mat)) {
            return Err(GeomError::DomainNotPreserved { generator: gi, element: 0 });
        }
        let ap = Applier { map: g, inv, fs };
        let mut images = Vec::with_capacity(domain.len());
        for (i, e) in domain.elems().iter().enumerate() {
            let img = ap.apply(e).and_then(|x| domain.index_of(&x));
            match img {
                Some(j) => images.push(j as u32),
                None => return Err(GeomError::DomainNotPreserved { generator: gi, element: i }),
            }
        }
        perms.push(Permutation::from_images(images)?);
    }
    Ok(PermGroup::new(domain.len(), perms)?)
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// C_V(x) = ker(x − 1)
    pub fixed: Subspace,
    /// [V, x] = im(x − 1)
    pub commutator: Subspace,
    /// ℓ′ = dim [V, x]
    pub ell: usize,
}

/// V = [V,x] ⊕ C_V(x) for x of order prime to p.
pub fn semisimple_decomposition(x: &Mat, f: &Fq) -> Result<Decomposition, GeomError> {
    let n = x.n;
    let limit = (f.q() as u64).saturating_pow(n as u32);
    let ord = x.order(f, limit).ok_or_else(|| GeomError::Param("matrix is not invertible".into()))?;
    if ord % f.p() as u64 == 0 {
        return Err(GeomError::Param(format!("order {ord} is divisible by p = {}", f.p())));
    }
    let d = x.sub_identity(f);
    let rows: Vec<Vec<u32>> = (0..n).map(|i| d.row(i).to_vec()).collect();
    let fixed = Subspace::span(n, left_kernel(&rows, f), f);
    let commutator = Subspace::span(n, rows, f);
    let ell = commutator.dim();
    Ok(Decomposition { fixed, commutator, ell })
}

/// Generators of SL_n(q): the transvections I + E₁₂ and I + ωE₁₂, the
/// diagonal diag(ω, ω⁻¹, 1, …) and the signed n-cycle.
pub fn sl_generators(n: usize, f: &Fq) -> Vec<Mat> {
    assert!(n >= 2);
    let w = f.primitive();
    let mut t1 = Mat::identity(n);
    t1.set(0, 1, 1);
    let mut gens = vec![t1];
    if f.q() > 2 {
        let mut t2 = Mat::identity(n);
        t2.set(0, 1, w);
        gens.push(t2);
        let mut d = Mat::identity(n);
        d.set(0, 0, w);
        d.set(1, 1, f.inv(w));
        gens.push(d);
    }
    let mut c = Mat::zero(n);
    for i in 0..n - 1 {
        c.set(i, i + 1, 1);
    }
    c.set(n - 1, 0, if n % 2 == 0 { f.neg(1) } else { 1 });
    gens.push(c);
    gens
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, q: u32) -> Vec<u32> {
    loop {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// Random isometries of the form: symplectic and unitary transvections,
/// orthogonal reflections. Each candidate is checked to preserve the form and
/// the defining vectors are taken to span V, so at least `count` and at least
/// n maps are returned. Generation of the full isometry group is not
/// guaranteed; callers compare the group order. For the trivial form, SL_n
/// generators are returned.
pub fn isometry_generators(fs: &FormSpace, count: usize, seed: u64) -> Vec<Mat> {
    let f = &fs.field;
    let n = fs.n;
    if fs.kind == FormKind::Trivial {
        return sl_generators(n, f);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::new();
    let mut span: Vec<Vec<u32>> = Vec::new();
    let mut guard = 0;
    while (gens.len() < count || span.len() < n) && guard < 100_000 {
        guard += 1;
        let v = random_vec(&mut rng, n, f.q());
        // column G v^σ so that x ↦ form(x, v) is x · col
        let vc: Vec<u32> = v.iter().map(|&a| fs.conj(a)).collect();
        let col: Vec<u32> = (0..n)
            .map(|i| (0..n).fold(0, |acc, j| f.add(acc, f.mul(fs.gram.get(i, j), vc[j]))))
            .collect();
        let coef = match fs.kind {
            FormKind::Quadratic(_) => {
                let qv = fs.quadratic(&v).unwrap();
                if qv == 0 {
                    continue;
                }
                f.neg(f.inv(qv))
            }
            FormKind::Hermitian => {
                if fs.form(&v, &v) != 0 {
                    continue;
                }
                let a = rng.gen_range(1..f.q());
                // a + a^q = 0 keeps the transvection unitary
                if f.add(a, fs.conj(a)) != 0 {
                    continue;
                }
                a
            }
            _ => rng.gen_range(1..f.q()),
        };
        let mut m = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                let d = f.mul(coef, f.mul(col[i], v[j]));
                m.set(i, j, f.add(m.get(i, j), d));
            }
        }
        if !m.is_identity() && fs.preserves(&m) {
            let mut rows = span.clone();
            rows.push(v);
            let grows = super::linalg::rank(rows.clone(), f) > span.len();
            if grows {
                span = super::linalg::rref(rows, f).0;
            } else if gens.len() >= count {
                continue;
            }
            gens.push(m);
        }
    }
    gens
}

/// Action of Sym(m) on k-subsets of {0..m−1}.
pub fn k_set_action(m: usize, k: usize) -> Result<PermGroup, GeomError> {
    if k == 0 || k > m {
        return Err(GeomError::Param(format!("need 1 <= k <= m, got k = {k}, m = {m}")));
    }
    Ok(induced_on_ksets(&PermGroup::symmetric(m), k, 1_000_000)?.0)
}

fn binom(n: usize, k: usize) -> Option<u64> {
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.checked_mul((n - i) as u64)? / (i as u64 + 1);
    }
    Some(r)
}

/// Induced action on k-subsets (lexicographic order), with the subsets.
pub fn induced_on_ksets(g: &PermGroup, k: usize, cap: usize) -> Result<(PermGroup, Vec<Vec<u32>>), GeomError> {
    let m = g.degree();
    let size = binom(m, k).filter(|&s| s <= cap as u64).ok_or_else(|| {
        GeomError::CapExceeded(format!("C({m},{k}) exceeds the domain cap {cap}"))
    })? as usize;
    let mut sets = Vec::with_capacity(size);
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        sets.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if (cur[i] as usize) < m - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                i = usize::MAX;
                break;
            }
        }
        if i != usize::MAX {
            break;
        }
    }
    let index: std::collections::HashMap<Vec<u32>, u32> =
        sets.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
    let gens = g
        .generators()
        .iter()
        .map(|p| {
            let images = sets
                .iter()
                .map(|s| {
                    let mut t: Vec<u32> = s.iter().map(|&x| p.apply(x as usize) as u32).collect();
                    t.sort_unstable();
                    index[&t]
                })
                .collect();
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((PermGroup::new(sets.len(), gens)?, sets))
}

/// Base ≀ Sym(r) acting on Δ^r: each base generator on coordinate 0, plus a
/// transposition and an r-cycle of coordinates.
pub fn product_action(base: &PermGroup, r: usize, cap: usize) -> Result<PermGroup, GeomError> {
    if r == 0 {
        return Err(GeomError::Param("r must be at least 1".into()));
    }
    if r == 1 {
        return Ok(base.clone());
    }
    let d = base.degree();
    let size = (d as u64)
        .checked_pow(r as u32)
        .filter(|&s| s <= cap as u64)
        .ok_or_else(|| GeomError::CapExceeded(format!("{d}^{r} exceeds the domain cap {cap}")))?
        as usize;
    let digits = |x: usize| {
        let mut c = vec![0usize; r];
        let mut y = x;
        for slot in c.iter_mut() {
            *slot = y % d;
            y /= d;
        }
        c
    };
    let encode = |c: &[usize]| c.iter().rev().fold(0usize, |acc, &x| acc * d + x);
    let mut gens = Vec::new();
    for g in base.generators() {
        let images = (0..size)
            .map(|x| {
                let mut c = digits(x);
                c[0] = g.apply(c[0]);
                encode(&c) as u32
            })
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    let swap = (0..size)
        .map(|x| {
            let mut c = digits(x);
            c.swap(0, 1);
            encode(&c) as u32
        })
        .collect();
    gens.push(Permutation::from_images(swap)?);
    if r > 2 {
        let cycle = (0..size)
            .map(|x| {
                let mut c = digits(x);
                c.rotate_right(1);
                encode(&c) as u32
            })
            .collect();
        gens.push(Permutation::from_images(cycle)?);
    }
    Ok(PermGroup::new(size, gens)?)
}
