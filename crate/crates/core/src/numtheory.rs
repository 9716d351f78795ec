//! Integer factorization, ω(n), Robin's bound, primitive prime divisors and
//! the weighted geometric series.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Guard band used whenever a float bound is compared against an integer or 1.
pub const GUARD: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("value out of range: {0}")]
    Domain(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

/// Sorted list of (prime, exponent) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    /// Product of p^e, if it fits in a u64.
    pub fn value(&self) -> Option<u64> {
        self.pairs.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    /// Product of two factorizations (exponents add).
    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut out = Vec::with_capacity(self.pairs.len() + other.pairs.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.pairs, &other.pairs);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Factorization { pairs: out }
    }

    /// Remove exactly `other` (must divide self).
    pub fn div(&self, other: &Factorization) -> Result<Factorization, NumError> {
        let mut out = self.pairs.clone();
        for &(p, e) in &other.pairs {
            let slot = out
                .iter_mut()
                .find(|(q, _)| *q == p)
                .filter(|(_, f)| *f >= e)
                .ok_or_else(|| NumError::Domain(format!("{p}^{e} does not divide")))?;
            slot.1 -= e;
        }
        out.retain(|&(_, e)| e > 0);
        Ok(Factorization { pairs: out })
    }

    pub fn to_bigint(&self) -> BigInt {
        self.pairs
            .iter()
            .fold(BigInt::from(1), |acc, &(p, e)| acc * BigInt::from(p).pow(e))
    }

    pub fn contains(&self, p: u64) -> bool {
        self.pairs.binary_search_by_key(&p, |&(q, _)| q).is_ok()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic strong-pseudoprime test; the base set is exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho; `n` odd composite.
fn pollard(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut r, mut q) = (2u64, 2u64, 1u64, 1u64, 1u64);
        let mut ys = 0;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Factor `n ≥ 1`. Trial division up to min(10^6, √n), then Miller–Rabin and
/// Pollard rho on the cofactor.
pub fn factorize(n: u64) -> Result<Factorization, NumError> {
    if n == 0 {
        return Err(NumError::Domain("factorize(0)".into()));
    }
    let mut pairs = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5u64;
    let mut step = 2;
    while p <= 1_000_000 && p * p <= m {
        push(p, &mut m);
        p += step;
        step = 6 - step;
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_into(m, &mut rest);
        rest.sort_unstable();
        for r in rest {
            match pairs.last_mut() {
                Some((q, e)) if *q == r => *e += 1,
                _ => pairs.push((r, 1)),
            }
        }
    }
    Ok(Factorization { pairs })
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> Result<usize, NumError> {
    Ok(factorize(n)?.omega())
}

/// Robin's bound log n / (log log n − 1.1714), natural logs, n ≥ 26.
pub fn robin_bound(n: u64) -> Result<f64, NumError> {
    if n < 26 {
        return Err(NumError::Domain(format!("robin_bound needs n >= 26, got {n}")));
    }
    let l = (n as f64).ln();
    Ok(l / (l.ln() - 1.1714))
}

/// Same bound evaluated from a natural logarithm, for integers beyond u64.
pub fn robin_bound_from_ln(ln_n: f64) -> Result<f64, NumError> {
    if ln_n < 26f64.ln() {
        return Err(NumError::Domain("robin bound needs n >= 26".into()));
    }
    Ok(ln_n / (ln_n.ln() - 1.1714))
}

/// `Some(t^l)` when it fits in u64.
pub fn checked_pow(t: u64, l: u32) -> Option<u64> {
    t.checked_pow(l)
}

/// Primes dividing t^l − 1 but no t^i − 1 with 1 ≤ i < l.
pub fn primitive_prime_divisors(t: u64, l: u32) -> Result<Vec<u64>, NumError> {
    if t < 2 || l == 0 {
        return Err(NumError::Domain(format!("ppd({t},{l})")));
    }
    let tl = checked_pow(t, l).ok_or_else(|| NumError::Overflow(format!("{t}^{l}")))?;
    let f = factorize(tl - 1)?;
    Ok(f.primes()
        .filter(|&r| (1..l).all(|i| pow_mod(t, i as u64, r) != 1))
        .collect())
}

/// ω_t(t^l − 1).
pub fn primitive_prime_divisor_count(t: u64, l: u32) -> Result<usize, NumError> {
    Ok(primitive_prime_divisors(t, l)?.len())
}

/// Σ_{ℓ≥0} ℓ q^{−ℓ} = q/(q−1)², exactly.
pub fn weighted_geometric_sum(q: u64) -> Result<BigRational, NumError> {
    if q < 2 {
        return Err(NumError::Domain(format!("series needs q >= 2, got {q}")));
    }
    let q = BigInt::from(q);
    let d = (&q - 1) * (&q - 1);
    Ok(BigRational::new(q, d))
}

/// Decompose a prime power q = p^e.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q).ok()?;
    match f.pairs.as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// Multiplicative order of t modulo a prime r not dividing t.
pub fn mult_order(t: u64, r: u64) -> u64 {
    let phi = r - 1;
    let mut ord = phi;
    for (p, _) in factorize(phi).expect("r >= 2").pairs {
        while ord % p == 0 && pow_mod(t, ord / p, r) == 1 {
            ord /= p;
        }
    }
    ord
}
