//! Regular-cycle tests: the fixed-point-union criterion, exact S(g,Ω), bulk
//! verification with the square-free reduction, and cross-action
//! monotonicity checks of regular-cycle counts.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::numtheory::factorize;
use crate::perm::{cycle_lengths, lcm_saturating, PermError, PermGroup, Permutation};

/// Seed used by [`compare_actions_monotonic`] when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_c1c1e5;
/// Maximum length of sampled words.
pub const MAX_WORD_LEN: usize = 40;

/// Packed bitset over an action domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    len: usize,
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset { len, words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_absent(&self) -> Option<usize> {
        (0..self.len).find(|&i| !self.contains(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

pub fn fix_set(x: &Permutation) -> Bitset {
    let mut b = Bitset::new(x.degree());
    for i in 0..x.degree() {
        if x.apply(i) == i {
            b.insert(i);
        }
    }
    b
}

/// |Fix(x)| / |Ω|.
pub fn fpr_exact(x: &Permutation) -> Ratio<u64> {
    Ratio::new(fix_set(x).count() as u64, x.degree().max(1) as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegCycleReport {
    pub has_regular_cycle: bool,
    pub order: u64,
    /// (start point, cycle length) of a regular cycle.
    pub witness: Option<(usize, u64)>,
    pub s_value: Ratio<u64>,
    pub fix_union_size: usize,
    pub degree: usize,
    /// Set when g = 1 and the verdict comes from the fixed-point convention.
    pub identity_convention: bool,
}

/// Distinct primes dividing `n`.
fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).map(|f| f.primes().collect()).unwrap_or_default()
}

/// Union of Fix(g^{|g|/r}) over primes r | |g|, and S(g,Ω).
pub fn fix_union_test(g: &Permutation) -> RegCycleReport {
    let d = g.degree();
    let order = g.order();
    if order == 1 {
        return RegCycleReport {
            has_regular_cycle: d >= 1,
            order,
            witness: (d >= 1).then_some((0, 1)),
            s_value: Ratio::from_integer(0),
            fix_union_size: 0,
            degree: d,
            identity_convention: true,
        };
    }
    let mut union = Bitset::new(d);
    let mut fixed_total = 0u64;
    for r in prime_divisors(order) {
        let f = fix_set(&g.power((order / r) as i64));
        fixed_total += f.count() as u64;
        union.union_with(&f);
    }
    let size = union.count();
    let witness = union.first_absent().map(|start| {
        let mut len = 1u64;
        let mut x = g.apply(start);
        while x != start {
            x = g.apply(x);
            len += 1;
        }
        (start, len)
    });
    RegCycleReport {
        has_regular_cycle: witness.is_some(),
        order,
        witness,
        s_value: Ratio::new(fixed_total, d as u64),
        fix_union_size: size,
        degree: d,
        identity_convention: false,
    }
}

/// S(g,Ω) from the cycle lengths alone: x = g^k fixes exactly the points on
/// cycles whose length divides k.
pub fn s_value_from_lengths(lengths: &[usize]) -> Ratio<u64> {
    let d: usize = lengths.iter().sum();
    let order = lengths.iter().fold(1u64, |a, &l| lcm_saturating(a, l as u64));
    if order == 1 || d == 0 {
        return Ratio::from_integer(0);
    }
    let mut fixed = 0u64;
    for r in prime_divisors(order) {
        let k = order / r;
        fixed += lengths.iter().filter(|&&l| k % l as u64 == 0).map(|&l| l as u64).sum::<u64>();
    }
    Ratio::new(fixed, d as u64)
}

/// Number of cycles of length exactly |g|.
pub fn count_regular_cycles(g: &Permutation) -> usize {
    count_regular_cycles_images(g.images())
}

fn count_regular_cycles_images(images: &[u32]) -> usize {
    let lens = cycle_lengths(images);
    let ord = lens.iter().fold(1u64, |a, &l| lcm_saturating(a, l as u64));
    lens.iter().filter(|&&l| l as u64 == ord).count()
}

fn is_square_free(n: u64) -> bool {
    factorize(n).map(|f| f.pairs.iter().all(|&(_, e)| e == 1)).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AllRegular,
    Fails,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub group_order: u64,
    pub checked: u64,
    pub failing: u64,
    /// Lexicographically least failing elements (at most [`MAX_WITNESSES`]).
    pub witnesses: Vec<Permutation>,
    /// Largest S(g,Ω) over the checked elements.
    pub max_s_value: Ratio<u64>,
}

pub const MAX_WITNESSES: usize = 8;

/// Accumulates per-element results from any enumeration order.
pub struct Verifier {
    square_free_only: bool,
    order_cache: std::collections::HashMap<u64, bool>,
    report: VerifyReport,
}

impl Verifier {
    pub fn new(square_free_only: bool) -> Self {
        Verifier {
            square_free_only,
            order_cache: Default::default(),
            report: VerifyReport {
                verdict: Verdict::AllRegular,
                group_order: 0,
                checked: 0,
                failing: 0,
                witnesses: Vec::new(),
                max_s_value: Ratio::from_integer(0),
            },
        }
    }

    pub fn visit(&mut self, images: &[u32]) {
        self.report.group_order += 1;
        let lens = cycle_lengths(images);
        let ord = lens.iter().fold(1u64, |a, &l| lcm_saturating(a, l as u64));
        if self.square_free_only {
            let sf = *self.order_cache.entry(ord).or_insert_with(|| is_square_free(ord));
            if !sf {
                return;
            }
        }
        self.report.checked += 1;
        let s = s_value_from_lengths(&lens);
        if s > self.report.max_s_value {
            self.report.max_s_value = s;
        }
        if !lens.iter().any(|&l| l as u64 == ord) {
            self.report.failing += 1;
            self.report.verdict = Verdict::Fails;
            let w = &mut self.report.witnesses;
            let pos = w.partition_point(|x| x.images() < images);
            if pos < MAX_WITNESSES {
                w.insert(pos, Permutation::from_images(images.to_vec()).expect("group element"));
                w.truncate(MAX_WITNESSES);
            }
        }
    }

    pub fn finish(self) -> VerifyReport {
        self.report
    }
}

/// Check every element (or every element of square-free order) of an
/// enumerable group.
pub fn verify_all_elements(g: &PermGroup, cap: usize, square_free_only: bool) -> Result<VerifyReport, PermError> {
    let elems = g.enumerate_elements(cap)?;
    let mut v = Verifier::new(square_free_only);
    for x in elems.iter() {
        v.visit(x);
    }
    Ok(v.finish())
}

/// Same check driven by a stabilizer chain of known order, for groups whose
/// element list would not fit in memory.
pub fn verify_with_chain(g: &PermGroup, order: &BigUint, square_free_only: bool, seed: u64) -> Result<VerifyReport, String> {
    let chain = g.stab_chain(Some(order), seed);
    if &chain.order() != order {
        return Err(format!("generators give order {}, expected {order}", chain.order()));
    }
    let mut v = Verifier::new(square_free_only);
    chain.for_each_element(|x| {
        v.visit(x);
        true
    });
    Ok(v.finish())
}

/// fpr via |g^G ∩ H| / |g^G| with H the stabilizer of `alpha`.
pub fn fpr_via_class(g: &PermGroup, x: &Permutation, alpha: usize) -> Ratio<u64> {
    let mut class = std::collections::HashSet::new();
    class.insert(x.clone());
    let mut queue = vec![x.clone()];
    while let Some(y) = queue.pop() {
        for h in g.generators() {
            let z = y.conjugate_by(h);
            if class.insert(z.clone()) {
                queue.push(z);
            }
        }
    }
    let in_h = class.iter().filter(|y| y.apply(alpha) == alpha).count();
    Ratio::new(in_h as u64, class.len() as u64)
}

#[derive(Debug, Clone)]
pub struct MonotonicReport {
    pub samples: usize,
    /// (word as generator indices, count on action 1, count on action 2)
    pub violations: Vec<(Vec<usize>, usize, usize)>,
}

/// Sample words in the shared generator indexing and check that the number
/// of regular cycles on the first action never exceeds that on the second.
pub fn compare_actions_monotonic(a1: &PermGroup, a2: &PermGroup, samples: usize, seed: u64) -> Result<MonotonicReport, String> {
    let k = a1.generators().len();
    if k != a2.generators().len() || k == 0 {
        return Err("actions must share a non-empty generator indexing".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut w1 = vec![0u32; a1.degree()];
    let mut w2 = vec![0u32; a2.degree()];
    let mut t1 = w1.clone();
    let mut t2 = w2.clone();
    for _ in 0..samples {
        let len = rng.gen_range(1..=MAX_WORD_LEN);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..k)).collect();
        word_image(a1, &word, &mut w1, &mut t1);
        word_image(a2, &word, &mut w2, &mut t2);
        let (c1, c2) = (count_regular_cycles_images(&w1), count_regular_cycles_images(&w2));
        if c1 > c2 {
            violations.push((word, c1, c2));
        }
    }
    Ok(MonotonicReport { samples, violations })
}

fn word_image(g: &PermGroup, word: &[usize], out: &mut Vec<u32>, tmp: &mut Vec<u32>) {
    for (i, v) in out.iter_mut().enumerate() {
        *v = i as u32;
    }
    for &w in word {
        let s = g.generators()[w].images();
        for (t, &o) in tmp.iter_mut().zip(out.iter()) {
            *t = s[o as usize];
        }
        std::mem::swap(out, tmp);
    }
}

/// JSON verdict record.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictRecord {
    pub schema: u32,
    pub group: String,
    pub degree: usize,
    pub verdict: Verdict,
    pub witness_cycles: Vec<String>,
    pub s_value_num: u64,
    pub s_value_den: u64,
}

impl VerdictRecord {
    pub fn from_verify(group: &str, degree: usize, r: &VerifyReport) -> Self {
        VerdictRecord {
            schema: 1,
            group: group.to_string(),
            degree,
            verdict: r.verdict,
            witness_cycles: r.witnesses.iter().map(|w| w.to_string()).collect(),
            s_value_num: *r.max_s_value.numer(),
            s_value_den: *r.max_s_value.denom(),
        }
    }

    pub fn from_check(group: &str, g: &Permutation, r: &RegCycleReport) -> Self {
        VerdictRecord {
            schema: 1,
            group: group.to_string(),
            degree: r.degree,
            verdict: if r.has_regular_cycle { Verdict::AllRegular } else { Verdict::Fails },
            witness_cycles: if r.has_regular_cycle { vec![] } else { vec![g.to_string()] },
            s_value_num: *r.s_value.numer(),
            s_value_den: *r.s_value.denom(),
        }
    }
}
