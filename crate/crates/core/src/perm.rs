//! Permutations in array form, finitely generated permutation groups, bounded
//! enumeration, orbit/block computations and the plain-text group file format.
//!
//! Points are 0-based internally. The file format and `Display` use 1-based
//! cycle notation. Composition is left to right: `a.compose(&b)` applies `a`
//! first, matching the exponential notation ω^{ab}.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("line {line}: point {point} out of range 1..={degree}")]
    PointOutOfRange { line: usize, point: i64, degree: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("enumeration cap of {0} elements exceeded")]
    CapExceeded(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(PermError::NotBijection(format!("image {i} repeated or out of range")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Trusted constructor for internally generated image arrays.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Build from disjoint 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let a = a as usize;
                if a >= degree {
                    return Err(PermError::NotBijection(format!("point {a} outside degree {degree}")));
                }
                if used[a] {
                    return Err(PermError::NotBijection(format!("point {} repeated", a + 1)));
                }
                used[a] = true;
                images[a] = c[(k + 1) % c.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    /// Unchecked composition for equal degrees.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// g^k for any integer k.
    pub fn power(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&b);
            }
            b = b.then(&b);
            e >>= 1;
        }
        acc
    }

    /// Conjugate h⁻¹ g h.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        let mut out = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            out[h.images[i] as usize] = h.images[j as usize];
        }
        Permutation { images: out }
    }

    /// Disjoint cycles (including fixed points), each starting at its least
    /// point, ordered by that point.
    pub fn cycle_decomposition(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                c.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut lengths = cycle_lengths(&self.images);
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { lengths }
    }

    /// lcm of the cycle lengths; saturates at `u64::MAX`.
    pub fn order(&self) -> u64 {
        order_of_images(&self.images)
    }

    /// True iff some cycle has length equal to the element order. The
    /// identity counts as having a regular cycle when the degree is ≥ 1.
    pub fn has_regular_cycle_direct(&self) -> bool {
        has_regular_cycle_images(&self.images)
    }
}

pub(crate) fn cycle_lengths(images: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = images[x] as usize;
        }
        out.push(len);
    }
    out
}

pub(crate) fn lcm_saturating(a: u64, b: u64) -> u64 {
    let g = a.gcd(&b);
    (a / g).checked_mul(b).unwrap_or(u64::MAX)
}

pub(crate) fn order_of_images(images: &[u32]) -> u64 {
    cycle_lengths(images)
        .into_iter()
        .fold(1u64, |acc, l| lcm_saturating(acc, l as u64))
}

pub(crate) fn has_regular_cycle_images(images: &[u32]) -> bool {
    let lens = cycle_lengths(images);
    let ord = lens.iter().fold(1u64, |acc, &l| lcm_saturating(acc, l as u64));
    lens.iter().any(|&l| l as u64 == ord)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycle_decomposition().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [deg {}]", self.degree())
    }
}

/// Multiset of cycle lengths, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    pub lengths: Vec<usize>,
}

impl CycleType {
    pub fn order(&self) -> u64 {
        self.lengths.iter().fold(1u64, |acc, &l| lcm_saturating(acc, l as u64))
    }

    pub fn degree(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Lengths with the 1-cycles removed.
    pub fn nontrivial(&self) -> Vec<usize> {
        self.lengths.iter().copied().filter(|&l| l > 1).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()));
            }
        }
        Ok(PermGroup { degree, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn symmetric(m: usize) -> Self {
        let mut gens = Vec::new();
        if m >= 2 {
            gens.push(Permutation::from_cycles(m, &[vec![0, 1]]).unwrap());
        }
        if m >= 3 {
            gens.push(Permutation::from_cycles(m, &[(0..m as u32).collect()]).unwrap());
        }
        PermGroup { degree: m, generators: gens }
    }

    pub fn alternating(m: usize) -> Self {
        let mut gens = Vec::new();
        if m >= 3 {
            gens.push(Permutation::from_cycles(m, &[vec![0, 1, 2]]).unwrap());
        }
        if m >= 4 {
            let long: Vec<u32> = if m % 2 == 1 { (0..m as u32).collect() } else { (1..m as u32).collect() };
            gens.push(Permutation::from_cycles(m, &[long]).unwrap());
        }
        PermGroup { degree: m, generators: gens }
    }

    pub fn cyclic(n: usize) -> Self {
        let gens = if n >= 2 { vec![Permutation::from_cycles(n, &[(0..n as u32).collect()]).unwrap()] } else { vec![] };
        PermGroup { degree: n, generators: gens }
    }

    pub fn dihedral(n: usize) -> Self {
        let rot = Permutation::from_cycles(n, &[(0..n as u32).collect()]).unwrap();
        let refl = Permutation::from_images_unchecked((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
        PermGroup { degree: n, generators: vec![rot, refl] }
    }

    /// Orbits as sorted point lists, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut label = vec![usize::MAX; self.degree];
        let mut out = Vec::new();
        for s in 0..self.degree {
            if label[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut orb = vec![s as u32];
            label[s] = id;
            let mut k = 0;
            while k < orb.len() {
                let x = orb[k] as usize;
                for g in &self.generators {
                    let y = g.apply(x);
                    if label[y] == usize::MAX {
                        label[y] = id;
                        orb.push(y as u32);
                    }
                }
                k += 1;
            }
            orb.sort_unstable();
            out.push(orb);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree >= 1 && self.orbits().len() == 1
    }

    /// Smallest block containing `a` and `b`, as a class label per point
    /// (label = least point of the block).
    pub fn minimal_block_system(&self, a: usize, b: usize) -> Vec<u32> {
        let n = self.degree;
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        let mut queue = VecDeque::new();
        let (ra, rb) = (find(&mut parent, a as u32), find(&mut parent, b as u32));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi as usize] = lo;
            queue.push_back((a as u32, b as u32));
        }
        while let Some((x, y)) = queue.pop_front() {
            for g in &self.generators {
                let (gx, gy) = (g.images[x as usize], g.images[y as usize]);
                let (rx, ry) = (find(&mut parent, gx), find(&mut parent, gy));
                if rx != ry {
                    let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
                    parent[hi as usize] = lo;
                    queue.push_back((gx, gy));
                }
            }
        }
        (0..n as u32).map(|x| find(&mut parent, x)).collect()
    }

    /// A nontrivial block containing point 0, if one exists.
    pub fn nontrivial_block(&self) -> Option<Vec<u32>> {
        for b in 1..self.degree {
            let lab = self.minimal_block_system(0, b);
            let block: Vec<u32> = (0..self.degree as u32).filter(|&x| lab[x as usize] == lab[0]).collect();
            if block.len() < self.degree {
                return Some(block);
            }
        }
        None
    }

    /// Transitive with no nontrivial block (degree 1 counts as primitive).
    pub fn is_primitive(&self) -> bool {
        self.is_transitive() && self.nontrivial_block().is_none()
    }

    /// All elements, sorted lexicographically by image array.
    pub fn enumerate_elements(&self, cap: usize) -> Result<ElementList, PermError> {
        let d = self.degree;
        let mut store = ElementStore::new(d);
        store.insert(&(0..d as u32).collect::<Vec<_>>());
        let mut head = 0;
        let mut buf = vec![0u32; d];
        let mut gens: Vec<Permutation> = self.generators.clone();
        gens.extend(self.generators.iter().map(|g| g.inverse()));
        while head < store.len() {
            for g in &gens {
                let x = store.get(head);
                for (k, &v) in x.iter().enumerate() {
                    buf[k] = g.images[v as usize];
                }
                if store.insert(&buf) && store.len() > cap {
                    return Err(PermError::CapExceeded(cap));
                }
            }
            head += 1;
        }
        Ok(store.into_sorted_list())
    }

    /// Exact order using a stabilizer chain. With `known` set, random
    /// sifting stops once the chain reaches that order (exact whenever the
    /// generators lie in a group of that order).
    pub fn stab_chain(&self, known: Option<&BigUint>, seed: u64) -> StabChain {
        StabChain::build(self, known, seed)
    }

    /// One representative (lexicographically least) and size per class,
    /// sorted by representative.
    pub fn conjugacy_classes(&self, cap: usize) -> Result<Vec<ConjugacyClass>, PermError> {
        let elems = self.enumerate_elements(cap)?;
        let n = elems.len();
        let mut class_of = vec![u32::MAX; n];
        let mut out = Vec::new();
        let mut buf = vec![0u32; self.degree];
        let mut invs: Vec<Permutation> = self.generators.iter().map(|g| g.inverse()).collect();
        invs.dedup();
        for i in 0..n {
            if class_of[i] != u32::MAX {
                continue;
            }
            let id = out.len() as u32;
            class_of[i] = id;
            let mut members = vec![i];
            let mut k = 0;
            while k < members.len() {
                let x = elems.get(members[k]);
                for h in &self.generators {
                    for (a, &b) in x.iter().enumerate() {
                        buf[h.images[a] as usize] = h.images[b as usize];
                    }
                    let j = elems.index_of(&buf).expect("closed under conjugation");
                    if class_of[j] == u32::MAX {
                        class_of[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            out.push(ConjugacyClass { representative: elems.perm(i), size: members.len() });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub size: usize,
}

/// Flat, sorted storage of group elements.
pub struct ElementList {
    degree: usize,
    data: Vec<u32>,
}

impl ElementList {
    pub fn len(&self) -> usize {
        if self.degree == 0 {
            1
        } else {
            self.data.len() / self.degree
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.degree..(i + 1) * self.degree]
    }

    pub fn perm(&self, i: usize) -> Permutation {
        Permutation { images: self.get(i).to_vec() }
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Binary search (the list is sorted).
    pub fn index_of(&self, x: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(x) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// Open-addressing hash set of fixed-length image arrays in one arena.
struct ElementStore {
    degree: usize,
    data: Vec<u32>,
    table: Vec<u32>,
    count: usize,
}

fn hash_slice(x: &[u32]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &v in x {
        h = (h ^ v as u64).wrapping_mul(0x1000_0000_01b3);
        h ^= h >> 29;
    }
    h.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

impl ElementStore {
    fn new(degree: usize) -> Self {
        ElementStore { degree, data: Vec::new(), table: vec![0; 1024], count: 0 }
    }

    fn len(&self) -> usize {
        self.count
    }

    fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.degree..(i + 1) * self.degree]
    }

    fn grow(&mut self) {
        let cap = self.table.len() * 2;
        let mut table = vec![0u32; cap];
        for i in 0..self.count {
            let mut s = (hash_slice(self.get(i)) as usize) & (cap - 1);
            while table[s] != 0 {
                s = (s + 1) & (cap - 1);
            }
            table[s] = i as u32 + 1;
        }
        self.table = table;
    }

    /// Returns true if newly inserted.
    fn insert(&mut self, x: &[u32]) -> bool {
        if (self.count + 1) * 2 > self.table.len() {
            self.grow();
        }
        let mask = self.table.len() - 1;
        let mut s = (hash_slice(x) as usize) & mask;
        loop {
            let t = self.table[s];
            if t == 0 {
                self.table[s] = self.count as u32 + 1;
                self.data.extend_from_slice(x);
                self.count += 1;
                return true;
            }
            if self.get(t as usize - 1) == x {
                return false;
            }
            s = (s + 1) & mask;
        }
    }

    fn into_sorted_list(self) -> ElementList {
        let d = self.degree;
        let mut idx: Vec<u32> = (0..self.count as u32).collect();
        idx.sort_unstable_by(|&a, &b| self.get(a as usize).cmp(self.get(b as usize)));
        let mut data = Vec::with_capacity(self.data.len());
        for i in idx {
            data.extend_from_slice(self.get(i as usize));
        }
        ElementList { degree: d, data }
    }
}

/// Stabilizer chain with explicit transversals.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

struct Level {
    base: u32,
    gens: Vec<Permutation>,
    /// orbit point -> index into `reps`, or u32::MAX
    slot: Vec<u32>,
    orbit: Vec<u32>,
    /// reps[k] maps `base` to `orbit[k]`
    reps: Vec<Permutation>,
}

impl Level {
    fn new(degree: usize, base: u32) -> Level {
        let mut slot = vec![u32::MAX; degree];
        slot[base as usize] = 0;
        Level { base, gens: Vec::new(), slot, orbit: vec![base], reps: vec![Permutation::identity(degree)] }
    }

    fn extend_orbit(&mut self) {
        let mut k = 0;
        while k < self.orbit.len() {
            for gi in 0..self.gens.len() {
                let y = self.gens[gi].images[self.orbit[k] as usize];
                if self.slot[y as usize] == u32::MAX {
                    let r = self.reps[k].then(&self.gens[gi]);
                    self.slot[y as usize] = self.orbit.len() as u32;
                    self.orbit.push(y);
                    self.reps.push(r);
                }
            }
            k += 1;
        }
    }
}

impl StabChain {
    fn build(g: &PermGroup, known: Option<&BigUint>, seed: u64) -> StabChain {
        let d = g.degree;
        let mut chain = StabChain { degree: d, levels: Vec::new() };
        if g.generators.iter().all(|x| x.is_identity()) {
            return chain;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<Permutation> = g.generators.iter().filter(|x| !x.is_identity()).cloned().collect();
        let base_len = pool.len();
        while pool.len() < 10 {
            pool.push(pool[pool.len() % base_len].clone());
        }
        let mut acc = Permutation::identity(d);
        for x in g.generators.iter().filter(|x| !x.is_identity()) {
            chain.add_strong(x.clone());
        }
        let mut quiet = 0;
        loop {
            if let Some(k) = known {
                if &chain.order() >= k {
                    break;
                }
            } else if quiet >= 64 {
                break;
            }
            // product replacement
            let n = pool.len();
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            pool[i] = if rng.gen_bool(0.5) { pool[i].then(&pool[j]) } else { pool[j].then(&pool[i]) };
            acc = acc.then(&pool[i]);
            if chain.add_strong(acc.clone()) {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
        chain
    }

    /// Sift `x`; if it does not reduce to the identity, insert the residue.
    fn add_strong(&mut self, x: Permutation) -> bool {
        let (res, depth) = self.sift(x);
        if res.is_identity() {
            return false;
        }
        if depth == self.levels.len() {
            let moved = (0..self.degree).find(|&p| res.apply(p) != p).unwrap() as u32;
            self.levels.push(Level::new(self.degree, moved));
        }
        for lv in &mut self.levels[..=depth] {
            lv.gens.push(res.clone());
            lv.extend_orbit();
        }
        true
    }

    fn sift(&self, mut x: Permutation) -> (Permutation, usize) {
        for (i, lv) in self.levels.iter().enumerate() {
            let y = x.images[lv.base as usize];
            let s = lv.slot[y as usize];
            if s == u32::MAX {
                return (x, i);
            }
            x = x.then(&lv.reps[s as usize].inverse());
        }
        (x, self.levels.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, lv| acc * BigUint::from(lv.orbit.len()))
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        self.sift(x.clone()).0.is_identity()
    }

    /// Visit every element exactly once (order unspecified). The callback
    /// returns false to stop early.
    pub fn for_each_element<F: FnMut(&[u32]) -> bool>(&self, mut f: F) {
        let d = self.degree;
        let id: Vec<u32> = (0..d as u32).collect();
        if self.levels.is_empty() {
            f(&id);
            return;
        }
        let mut bufs: Vec<Vec<u32>> = vec![vec![0u32; d]; self.levels.len() + 1];
        bufs[0] = id;
        self.walk(0, &mut bufs, &mut f);
    }

    fn walk<F: FnMut(&[u32]) -> bool>(&self, level: usize, bufs: &mut [Vec<u32>], f: &mut F) -> bool {
        if level == self.levels.len() {
            return f(&bufs[level]);
        }
        for r in &self.levels[level].reps {
            let (lo, hi) = bufs.split_at_mut(level + 1);
            let cur = &lo[level];
            let next = &mut hi[0];
            // next = r then cur, built from the deepest level outwards
            for (k, v) in next.iter_mut().enumerate() {
                *v = cur[r.images[k] as usize];
            }
            if !self.walk(level + 1, bufs, f) {
                return false;
            }
        }
        true
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut x = Permutation::identity(self.degree);
        for lv in self.levels.iter().rev() {
            let r = &lv.reps[rng.gen_range(0..lv.reps.len())];
            x = x.then(r);
        }
        x
    }
}

/// Parse the group file format (1-based cycles, `#` comments).
pub fn parse_group_file(text: &str) -> Result<PermGroup, PermError> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some(d) = degree else {
            let mut it = line.split_whitespace();
            match (it.next(), it.next().map(str::parse::<usize>), it.next()) {
                (Some("degree"), Some(Ok(d)), None) => degree = Some(d),
                _ => return Err(PermError::Syntax { line: line_no, msg: "expected `degree <d>`".into() }),
            }
            continue;
        };
        gens.push(parse_cycles_line(line, d, line_no)?);
    }
    let d = degree.ok_or(PermError::Syntax { line: 1, msg: "missing `degree` line".into() })?;
    PermGroup::new(d, gens)
}

/// Parse `id` or a product of disjoint 1-based cycles.
pub fn parse_cycles_line(line: &str, degree: usize, line_no: usize) -> Result<Permutation, PermError> {
    let line = line.trim();
    if line == "id" || line == "()" {
        return Ok(Permutation::identity(degree));
    }
    let mut cycles = Vec::new();
    let mut rest = line;
    while !rest.is_empty() {
        let r = rest.trim_start();
        if r.is_empty() {
            break;
        }
        let Some(body) = r.strip_prefix('(') else {
            return Err(PermError::Syntax { line: line_no, msg: format!("unexpected `{r}`") });
        };
        let close = body
            .find(')')
            .ok_or_else(|| PermError::Syntax { line: line_no, msg: "unclosed cycle".into() })?;
        let mut c = Vec::new();
        for tok in body[..close].split(|ch: char| ch.is_whitespace() || ch == ',').filter(|t| !t.is_empty()) {
            let v: i64 = tok
                .parse()
                .map_err(|_| PermError::Syntax { line: line_no, msg: format!("bad point `{tok}`") })?;
            if v < 1 || v as usize > degree {
                return Err(PermError::PointOutOfRange { line: line_no, point: v, degree });
            }
            c.push(v as u32 - 1);
        }
        cycles.push(c);
        rest = &body[close + 1..];
    }
    Permutation::from_cycles(degree, &cycles).map_err(|e| match e {
        PermError::NotBijection(m) => PermError::NotBijection(format!("line {line_no}: {m}")),
        other => other,
    })
}

/// Emit the group file format; `parse_group_file` inverts it exactly.
pub fn emit_group_file(g: &PermGroup) -> String {
    let mut s = format!("degree {}\n", g.degree);
    for x in &g.generators {
        s.push_str(&x.to_string());
        s.push('\n');
    }
    s
}
