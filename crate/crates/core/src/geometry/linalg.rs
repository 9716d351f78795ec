//! Row vectors, square matrices and echelonized subspaces over an [`Fq`].

use super::field::Fq;

/// Square matrix, row-major. Vectors are rows and act by v ↦ vM.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<u32>,
}

impl Mat {
    pub fn identity(n: usize) -> Mat {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Mat { n, data }
    }

    pub fn zero(n: usize) -> Mat {
        Mat { n, data: vec![0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Mat {
        let n = rows.len();
        Mat { n, data: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &Mat, f: &Fq) -> Mat {
        let n = self.n;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise a ↦ a^{p^t}.
    pub fn frobenius(&self, t: u32, f: &Fq) -> Mat {
        Mat { n: self.n, data: self.data.iter().map(|&a| f.frobenius(a, t)).collect() }
    }

    pub fn inverse(&self, f: &Fq) -> Option<Mat> {
        let n = self.n;
        let mut a: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, piv);
            let inv = f.inv(a[col][col]);
            for v in a[col].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let c = a[r][col];
                    let (src, dst) = if r < col {
                        let (lo, hi) = a.split_at_mut(col);
                        (&hi[0], &mut lo[r])
                    } else {
                        let (lo, hi) = a.split_at_mut(r);
                        (&lo[col], &mut hi[0])
                    };
                    for (d, &s) in dst.iter_mut().zip(src.iter()) {
                        *d = f.sub(*d, f.mul(c, s));
                    }
                }
            }
        }
        Some(Mat { n, data: a.into_iter().flat_map(|r| r[n..].to_vec()).collect() })
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.n)
    }

    /// Multiplicative order, searching up to `limit`.
    pub fn order(&self, f: &Fq, limit: u64) -> Option<u64> {
        let mut x = self.clone();
        for k in 1..=limit {
            if x.is_identity() {
                return Some(k);
            }
            x = x.mul(self, f);
        }
        None
    }

    pub fn pow(&self, mut k: u64, f: &Fq) -> Mat {
        let mut acc = Mat::identity(self.n);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b, f);
            }
            b = b.mul(&b, f);
            k >>= 1;
        }
        acc
    }

    pub fn sub_identity(&self, f: &Fq) -> Mat {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, f.sub(m.get(i, i), 1));
        }
        m
    }
}

/// vM.
pub fn vec_mul(v: &[u32], m: &Mat, f: &Fq) -> Vec<u32> {
    let n = m.n;
    let mut out = vec![0u32; n];
    for (i, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let row = m.row(i);
        for j in 0..n {
            out[j] = f.add(out[j], f.mul(a, row[j]));
        }
    }
    out
}

/// Scale so the first nonzero entry is 1.
pub fn normalize(v: &mut [u32], f: &Fq) -> bool {
    let Some(&lead) = v.iter().find(|&&x| x != 0) else { return false };
    if lead != 1 {
        let inv = f.inv(lead);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

/// Reduced row-echelon form; returns (rows, pivot columns).
pub fn rref(mut rows: Vec<Vec<u32>>, f: &Fq) -> (Vec<Vec<u32>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<u32>>, f: &Fq) -> usize {
    rref(rows, f).0.len()
}

/// Left null space {v : vM = 0} of an n×m matrix given by rows.
pub fn left_kernel(rows: &[Vec<u32>], f: &Fq) -> Vec<Vec<u32>> {
    // vM = 0  ⇔  Mᵀ vᵀ = 0
    let n = rows.len();
    if n == 0 {
        return vec![];
    }
    let m = rows[0].len();
    let t: Vec<Vec<u32>> = (0..m).map(|j| (0..n).map(|i| rows[i][j]).collect()).collect();
    null_space(t, n, f)
}

/// Right null space {x : Ax = 0}, A given by rows of length `ncols`.
pub fn null_space(a: Vec<Vec<u32>>, ncols: usize, f: &Fq) -> Vec<Vec<u32>> {
    let (r, piv) = if a.is_empty() { (vec![], vec![]) } else { rref(a, f) };
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u32; ncols];
            x[fc] = 1;
            for (row, &pc) in r.iter().zip(&piv) {
                x[pc] = f.neg(row[fc]);
            }
            x
        })
        .collect()
}

/// Subspace stored by its unique reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn span(n: usize, rows: Vec<Vec<u32>>, f: &Fq) -> Subspace {
        let rows: Vec<Vec<u32>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
        if rows.is_empty() {
            return Subspace { n, rows };
        }
        Subspace { n, rows: rref(rows, f).0 }
    }

    pub fn zero(n: usize) -> Subspace {
        Subspace { n, rows: vec![] }
    }

    pub fn whole(n: usize) -> Subspace {
        Subspace { n, rows: Mat::identity(n).data.chunks(n).map(|c| c.to_vec()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[u32], f: &Fq) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        rank(rows, f) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace, f: &Fq) -> bool {
        other.rows.iter().all(|r| self.contains(r, f))
    }

    pub fn sum(&self, other: &Subspace, f: &Fq) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::span(self.n, rows, f)
    }

    pub fn image(&self, m: &Mat, f: &Fq) -> Subspace {
        Subspace::span(self.n, self.rows.iter().map(|r| vec_mul(r, m, f)).collect(), f)
    }

    /// Orthogonal complement for the bilinear form with Gram matrix `gram`:
    /// {v : B(w, v) = 0 for all basis rows w}.
    pub fn perp(&self, gram: &Mat, f: &Fq) -> Subspace {
        if self.rows.is_empty() {
            return Subspace::whole(self.n);
        }
        // B(w,v) = w G vᵀ, so v ranges over the null space of the rows wG.
        let a: Vec<Vec<u32>> = self.rows.iter().map(|w| vec_mul(w, gram, f)).collect();
        Subspace::span(self.n, null_space(a, self.n, f), f)
    }

    /// All nonzero vectors (use only for small subspaces).
    pub fn vectors(&self, f: &Fq) -> Vec<Vec<u32>> {
        let k = self.dim();
        let q = f.q() as u64;
        let total = q.pow(k as u32);
        (1..total)
            .map(|mut c| {
                let mut v = vec![0u32; self.n];
                for row in &self.rows {
                    let a = (c % q) as u32;
                    c /= q;
                    if a != 0 {
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = f.add(*x, f.mul(a, y));
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// Projective points of the subspace, normalized.
    pub fn points(&self, f: &Fq) -> Vec<Vec<u32>> {
        let mut pts: Vec<Vec<u32>> = self
            .vectors(f)
            .into_iter()
            .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
            .collect();
        pts.sort();
        pts
    }
}

/// Every k-subspace of GF(q)^n, enumerated through pivot patterns.
pub fn all_subspaces(n: usize, k: usize, f: &Fq) -> Vec<Subspace> {
    let mut out = Vec::new();
    let q = f.q() as u64;
    let mut pivots: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    if k == 0 {
        return vec![Subspace::zero(n)];
    }
    loop {
        // free positions: row i, columns c > pivots[i] not among pivots
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let total = q.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u32; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for &(i, c) in &free {
                rows[i][c] = (code % q) as u32;
                code /= q;
            }
            out.push(Subspace { n, rows });
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Encode a vector as an integer in base q.
pub fn encode(v: &[u32], q: u32) -> u64 {
    v.iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
}

pub fn decode(mut c: u64, n: usize, q: u32) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for x in v.iter_mut() {
        *x = (c % q as u64) as u32;
        c /= q as u64;
    }
    v
}
