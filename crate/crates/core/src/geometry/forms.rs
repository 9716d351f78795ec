//! Standard classical forms on GF(q)^n (or GF(q²)^n for hermitian forms).
//!
//! Conventions: coordinates come in hyperbolic pairs (x₁, y₁, x₂, y₂, …);
//! the symplectic Gram has B(eᵢ, fᵢ) = 1 = −B(fᵢ, eᵢ); Q⁺ = Σ xᵢyᵢ; Q⁻ adds
//! the tail a² + ab + νb² with ν least making x² + x + ν irreducible; Q∘
//! (q odd) adds z²; the hermitian Gram is the identity over GF(q²) with
//! h(u, v) = Σ uᵢ vᵢ^q.

use serde::{Deserialize, Serialize};

use super::field::Fq;
use super::linalg::{vec_mul, Mat, Subspace};
use super::GeomError;
use crate::numtheory::prime_power;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eps {
    Plus,
    Minus,
    Circ,
}

impl Eps {
    pub fn parse(s: &str) -> Option<Eps> {
        match s {
            "+" | "plus" => Some(Eps::Plus),
            "-" | "minus" => Some(Eps::Minus),
            "o" | "circ" | "0" => Some(Eps::Circ),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Eps::Plus => "+",
            Eps::Minus => "-",
            Eps::Circ => "o",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    Trivial,
    Symplectic,
    Hermitian,
    Quadratic(Eps),
}

impl FormKind {
    pub fn parse(kind: &str, eps: Option<&str>) -> Option<FormKind> {
        match kind {
            "trivial" | "linear" => Some(FormKind::Trivial),
            "symplectic" => Some(FormKind::Symplectic),
            "hermitian" | "unitary" => Some(FormKind::Hermitian),
            "quadratic" | "orthogonal" => Some(FormKind::Quadratic(Eps::parse(eps?)?)),
            _ => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            FormKind::Trivial => "trivial".into(),
            FormKind::Symplectic => "symplectic".into(),
            FormKind::Hermitian => "hermitian".into(),
            FormKind::Quadratic(e) => format!("quadratic {}", e.symbol()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FormSpace {
    /// GF(q), or GF(q²) for hermitian forms.
    pub field: Fq,
    /// Order of the base field.
    pub q: u32,
    pub n: usize,
    pub kind: FormKind,
    /// Gram matrix of the bilinear (polar) or hermitian form; zero for trivial.
    pub gram: Mat,
    /// Upper-triangular coefficients of Q, for quadratic forms.
    pub quad: Option<Mat>,
    pub witt: usize,
}

/// Least ν with x² + x + ν irreducible over `f`.
pub fn minus_type_nu(f: &Fq) -> u32 {
    f.elements()
        .find(|&nu| f.elements().all(|x| f.add(f.add(f.mul(x, x), x), nu) != 0))
        .expect("an irreducible quadratic exists")
}

impl FormSpace {
    pub fn standard(kind: FormKind, n: usize, q: u32) -> Result<FormSpace, GeomError> {
        let (p, e) = prime_power(q as u64)
            .ok_or_else(|| GeomError::Param(format!("q = {q} is not a prime power")))?;
        let field = if kind == FormKind::Hermitian { Fq::new(p as u32, 2 * e)? } else { Fq::new(p as u32, e)? };
        Self::standard_over(kind, n, field)
    }

    /// Standard form over a given field (GF(q²) for hermitian forms).
    pub fn standard_over(kind: FormKind, n: usize, field: Fq) -> Result<FormSpace, GeomError> {
        let p = field.p();
        let q = if kind == FormKind::Hermitian {
            if field.e() % 2 != 0 {
                return Err(GeomError::Param("hermitian forms need a field of square order".into()));
            }
            p.pow(field.e() / 2)
        } else {
            field.q()
        };
        if n == 0 {
            return Err(GeomError::Param("dimension must be positive".into()));
        }
        let mut gram = Mat::zero(n);
        let mut quad = None;
        let pairs = |gram: &mut Mat, count: usize, alt: bool| {
            for i in 0..count {
                gram.set(2 * i, 2 * i + 1, 1);
                gram.set(2 * i + 1, 2 * i, if alt { field.neg(1) } else { 1 });
            }
        };
        let witt = match kind {
            FormKind::Trivial => 0,
            FormKind::Symplectic => {
                if n % 2 != 0 {
                    return Err(GeomError::Param("symplectic forms need even dimension".into()));
                }
                pairs(&mut gram, n / 2, true);
                n / 2
            }
            FormKind::Hermitian => {
                gram = Mat::identity(n);
                n / 2
            }
            FormKind::Quadratic(eps) => {
                let mut a = Mat::zero(n);
                let m = match eps {
                    Eps::Plus | Eps::Minus if n % 2 != 0 => {
                        return Err(GeomError::Param("quadratic ± needs even dimension".into()))
                    }
                    Eps::Circ if n % 2 == 0 || p == 2 => {
                        return Err(GeomError::Param(
                            "quadratic o needs odd dimension and odd characteristic".into(),
                        ))
                    }
                    Eps::Plus => n / 2,
                    Eps::Minus => {
                        if n < 2 {
                            return Err(GeomError::Param("quadratic - needs n >= 2".into()));
                        }
                        n / 2 - 1
                    }
                    Eps::Circ => (n - 1) / 2,
                };
                for i in 0..m {
                    a.set(2 * i, 2 * i + 1, 1);
                }
                match eps {
                    Eps::Minus => {
                        a.set(n - 2, n - 2, 1);
                        a.set(n - 2, n - 1, 1);
                        a.set(n - 1, n - 1, minus_type_nu(&field));
                    }
                    Eps::Circ => a.set(n - 1, n - 1, 1),
                    Eps::Plus => {}
                }
                for i in 0..n {
                    for j in 0..n {
                        let v = if i == j {
                            field.add(a.get(i, i), a.get(i, i))
                        } else {
                            field.add(a.get(i, j), a.get(j, i))
                        };
                        gram.set(i, j, v);
                    }
                }
                quad = Some(a);
                m
            }
        };
        Ok(FormSpace { q, n, kind, gram, quad, witt, field })
    }

    /// Field automorphism a ↦ a^q for hermitian forms, identity otherwise.
    pub fn conj(&self, a: u32) -> u32 {
        if self.kind == FormKind::Hermitian {
            self.field.frobenius(a, self.field.e() / 2)
        } else {
            a
        }
    }

    /// B(u, v) or h(u, v).
    pub fn form(&self, u: &[u32], v: &[u32]) -> u32 {
        let f = &self.field;
        let ug = vec_mul(u, &self.gram, f);
        ug.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, self.conj(b))))
    }

    /// Q(v) for quadratic forms.
    pub fn quadratic(&self, v: &[u32]) -> Option<u32> {
        let a = self.quad.as_ref()?;
        let f = &self.field;
        let mut s = 0;
        for i in 0..self.n {
            if v[i] == 0 {
                continue;
            }
            for j in i..self.n {
                let c = a.get(i, j);
                if c != 0 && v[j] != 0 {
                    s = f.add(s, f.mul(c, f.mul(v[i], v[j])));
                }
            }
        }
        Some(s)
    }

    pub fn is_singular(&self, v: &[u32]) -> bool {
        match self.kind {
            FormKind::Trivial | FormKind::Symplectic => true,
            FormKind::Hermitian => self.form(v, v) == 0,
            FormKind::Quadratic(_) => self.quadratic(v) == Some(0),
        }
    }

    pub fn is_totally_singular(&self, w: &Subspace) -> bool {
        if self.kind == FormKind::Trivial {
            return false;
        }
        let rows = &w.rows;
        rows.iter().all(|r| self.is_singular(r))
            && rows.iter().enumerate().all(|(i, a)| rows[i + 1..].iter().all(|b| self.form(a, b) == 0))
    }

    /// Orthogonal complement with respect to the form.
    pub fn perp(&self, w: &Subspace) -> Subspace {
        let f = &self.field;
        let n = self.n;
        if w.rows.is_empty() {
            return Subspace::whole(n);
        }
        // form(r, v) = Σ (rG)_j conj(v_j); conjugating gives a linear condition in v
        let conds: Vec<Vec<u32>> = w
            .rows
            .iter()
            .map(|r| vec_mul(r, &self.gram, f).into_iter().map(|a| self.conj(a)).collect())
            .collect();
        Subspace::span(n, super::linalg::null_space(conds, n, f), f)
    }

    /// Whether the form restricted to `w` is non-degenerate.
    pub fn is_nondegenerate_on(&self, w: &Subspace) -> bool {
        let rows = &w.rows;
        let k = rows.len();
        let g: Vec<Vec<u32>> =
            (0..k).map(|i| (0..k).map(|j| self.form(&rows[i], &rows[j])).collect()).collect();
        super::linalg::rank(g, &self.field) == k
    }

    /// M preserves the form (and Q, if present): x ↦ xM.
    pub fn preserves(&self, m: &Mat) -> bool {
        let n = self.n;
        let rows: Vec<Vec<u32>> = (0..n).map(|i| m.row(i).to_vec()).collect();
        let unit = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        for i in 0..n {
            for j in 0..n {
                if self.form(&rows[i], &rows[j]) != self.gram.get(i, j) {
                    return false;
                }
            }
            if self.quad.is_some() && self.quadratic(&rows[i]) != self.quadratic(&unit(i)) {
                return false;
            }
        }
        true
    }

    /// Witt index by exhaustive search over totally singular subspaces.
    pub fn witt_index_exhaustive(&self) -> usize {
        let mut level: Vec<Subspace> = vec![Subspace::zero(self.n)];
        let mut dim = 0;
        loop {
            let next = super::domains::extend_totally_singular(self, &level);
            if next.is_empty() {
                return dim;
            }
            level = next;
            dim += 1;
        }
    }
}
