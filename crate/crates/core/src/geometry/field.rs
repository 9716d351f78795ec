//! GF(p^e) with elements encoded as integers in base p (constant term least
//! significant).

use crate::numtheory::{factorize, is_prime};

use super::GeomError;

/// Largest field order supported.
pub const MAX_Q: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fq {
    p: u32,
    e: u32,
    q: u32,
    /// c0 … c_e, monic
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let e = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
    for k in (e..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = k - e + i;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
        }
    }
    r.truncate(e);
    r.resize(e, 0);
    r
}

fn poly_powmod(base: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
    let e = m.len() - 1;
    let mut acc = vec![0u32; e];
    acc[0] = 1;
    let mut b = base.to_vec();
    b.resize(e, 0);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        k >>= 1;
    }
    acc
}

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut k = p as u64 - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

fn poly_gcd(a: Vec<u32>, b: Vec<u32>, p: u32) -> Vec<u32> {
    let (mut a, mut b) = (poly_trim(a), poly_trim(b));
    while !(b.len() == 1 && b[0] == 0) {
        let lead_inv = inv_mod_p(*b.last().unwrap(), p);
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let shift = a.len() - b.len();
            let c = (*a.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &bi) in b.iter().enumerate() {
                let idx = shift + i;
                a[idx] = ((a[idx] as u64 + (p - c) as u64 * bi as u64) % p as u64) as u32;
            }
            a = poly_trim(a);
            if a.len() < b.len() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Rabin's irreducibility test for a monic polynomial over GF(p).
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    if e == 1 {
        return true;
    }
    let mut x = vec![0u32; e];
    x[1] = 1;
    let pe = (p as u64).pow(e as u32);
    if poly_powmod(&x, pe, m, p) != x {
        return false;
    }
    for (r, _) in factorize(e as u64).unwrap().pairs {
        let k = (p as u64).pow(e as u32 / r as u32);
        let mut h = poly_powmod(&x, k, m, p);
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(m.to_vec(), h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Least monic irreducible of degree e, comparing c0, c1, … in turn.
pub fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for k in 0..count {
        // digit for c0 is the most significant
        let mut coeffs = vec![0u32; e as usize + 1];
        let mut t = k;
        for i in (0..e as usize).rev() {
            coeffs[i] = (t % p as u64) as u32;
            t /= p as u64;
        }
        coeffs[e as usize] = 1;
        if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Fq {
    /// GF(p^e) with the least irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Fq, GeomError> {
        if !is_prime(p as u64) || e == 0 {
            return Err(GeomError::Param(format!("GF({p}^{e}): p must be prime and e >= 1")));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_Q);
        let Some(_) = q else {
            return Err(GeomError::Param(format!("GF({p}^{e}) exceeds field cap {MAX_Q}")));
        };
        let m = if e == 1 { vec![0, 1] } else { least_irreducible(p, e) };
        Self::with_modulus(p, m)
    }

    /// GF(p^e) for an explicit monic modulus c0 … ce.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Fq, GeomError> {
        let e = modulus.len() as u32 - 1;
        if e == 0 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(GeomError::Param("modulus must be monic with coefficients < p".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(GeomError::Param(format!("modulus {modulus:?} is reducible over GF({p})")));
        }
        let q = p.pow(e);
        let to_code = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let from_code = |mut c: u32| {
            let mut v = vec![0u32; e as usize];
            for x in v.iter_mut() {
                *x = c % p;
                c /= p;
            }
            v
        };
        // find a primitive element
        let order = q as u64 - 1;
        let primes: Vec<u64> = factorize(order.max(1)).unwrap().primes().collect();
        let mut gen = None;
        for c in 1..q {
            let g = from_code(c);
            if primes.iter().all(|&r| {
                let v = poly_powmod(&g, order / r, &modulus, p);
                to_code(&v) != 1
            }) {
                gen = Some(g);
                break;
            }
        }
        let g = gen.ok_or_else(|| GeomError::Param("no primitive element".into()))?;
        let mut exp = vec![0u32; q as usize - 1];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u32; e as usize];
        cur[0] = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            let c = to_code(&cur);
            *slot = c;
            log[c as usize] = i as u32;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        let mut f = Fq { p, e, q, modulus, exp, log, add: None };
        if q <= 256 && p != 2 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = f.add_slow(a, b) as u16;
                }
            }
            f.add = Some(t);
        }
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn add_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let (p, mut r, mut place) = (self.p, 0u32, 1u32);
        for _ in 0..self.e {
            r += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize] as u32,
            None => self.add_slow(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let (p, mut a, mut r, mut place) = (self.p, a, 0u32, 1u32);
        for _ in 0..self.e {
            r += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        let n = self.q - 1;
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// a ↦ a^{p^t}.
    pub fn frobenius(&self, a: u32, t: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(t % self.e))
    }

    /// Primitive element used for the log tables.
    pub fn primitive(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize] % 2 == 0
    }

    /// The integer embedding n·1.
    pub fn from_int(&self, n: i64) -> u32 {
        (n.rem_euclid(self.p as i64)) as u32
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }
}
