//! `S_d`-orbits in `(Z/nZ)^d`: canonical representatives, sizes, enumeration
//! and the translation/negation actions on orbits.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modring::Modulus;

/// Canonical representative of an `S_d`-orbit: the weakly increasing
/// arrangement of its entries, each in `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitRep {
    n: Modulus,
    entries: Vec<u64>,
}

impl OrbitRep {
    /// Reduces every entry mod `n` and sorts.
    pub fn canonicalize(vec: &[i64], n: Modulus) -> Result<Self> {
        if vec.is_empty() {
            return Err(Error::InvalidDimension);
        }
        let mut entries: Vec<u64> = vec.iter().map(|&v| n.reduce(v)).collect();
        entries.sort_unstable();
        Ok(OrbitRep { n, entries })
    }

    pub(crate) fn from_residues(mut entries: Vec<u64>, n: Modulus) -> Self {
        debug_assert!(entries.iter().all(|&e| e < n.get()));
        entries.sort_unstable();
        OrbitRep { n, entries }
    }

    pub fn zero(n: Modulus, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension);
        }
        Ok(OrbitRep { n, entries: vec![0; d] })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.n
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n.get()
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Run lengths of equal entries, i.e. the nonzero multiplicities `k_m`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let mut j = i;
            while j < self.entries.len() && self.entries[j] == self.entries[i] {
                j += 1;
            }
            out.push(j - i);
            i = j;
        }
        out
    }

    /// `|X| = d! / prod k_m!`, computed as a product of binomials so that it
    /// only overflows when the answer itself does not fit.
    pub fn orbit_size(&self) -> Result<u64> {
        let mut size: u64 = 1;
        let mut placed = 0u64;
        for k in self.multiplicities() {
            placed += k as u64;
            let c = binomial(placed, k as u64).ok_or(Error::Overflow("orbit size"))?;
            size = size.checked_mul(c).ok_or(Error::Overflow("orbit size"))?;
        }
        Ok(size)
    }

    /// `|stab(x)| = prod k_m!`.
    pub fn stabilizer_order(&self) -> Result<u64> {
        self.multiplicities().into_iter().try_fold(1u64, |acc, k| {
            factorial(k as u64).and_then(|f| acc.checked_mul(f)).ok_or(Error::Overflow("stabilizer order"))
        })
    }

    /// `[X]`, the entry sum mod `n`.
    pub fn orbit_sum(&self) -> u64 {
        let s: u128 = self.entries.iter().map(|&e| e as u128).sum();
        (s % self.n.get() as u128) as u64
    }

    /// `X + j*1`.
    pub fn shift(&self, j: i64) -> OrbitRep {
        let j = self.n.reduce(j);
        let entries = self.entries.iter().map(|&e| self.n.add(e, j)).collect();
        OrbitRep::from_residues(entries, self.n)
    }

    /// `-X`.
    pub fn negate(&self) -> OrbitRep {
        let entries = self.entries.iter().map(|&e| self.n.neg(e)).collect();
        OrbitRep::from_residues(entries, self.n)
    }

    /// Every distinct arrangement of the entries, in lexicographic order.
    pub fn permutations(&self) -> DistinctPermutations {
        DistinctPermutations { current: Some(self.entries.clone()) }
    }

    /// Calls `f` on each distinct arrangement without allocating per step.
    pub fn for_each_permutation(&self, mut f: impl FnMut(&[u64])) {
        let mut buf = self.entries.clone();
        loop {
            f(&buf);
            if !next_permutation(&mut buf) {
                break;
            }
        }
    }

    /// Lexicographic index of this representative among all orbits of `(Z/nZ)^d`.
    pub fn rank(&self) -> Result<u64> {
        let n = self.n.get();
        let d = self.d() as u64;
        let mut idx = 0u64;
        let mut lo = 0u64;
        for (i, &e) in self.entries.iter().enumerate() {
            let remaining = d - i as u64;
            for c in lo..e {
                idx = idx.checked_add(tail_count(n, c, remaining - 1)?).ok_or(Error::Overflow("orbit rank"))?;
            }
            lo = e;
        }
        Ok(idx)
    }
}

impl fmt::Display for OrbitRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}(", self.d())?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Steps a slice to its next lexicographic arrangement; `false` once the
/// last (weakly decreasing) arrangement has been passed.
pub fn next_permutation(v: &mut [u64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone)]
pub struct DistinctPermutations {
    current: Option<Vec<u64>>,
}

impl Iterator for DistinctPermutations {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn binomial(a: u64, b: u64) -> Option<u64> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc.checked_mul((a - i) as u128)? / (i as u128 + 1);
    }
    u64::try_from(acc).ok()
}

fn factorial(k: u64) -> Option<u64> {
    (1..=k).try_fold(1u64, |acc, i| acc.checked_mul(i))
}

// Number of weakly increasing tuples of the given length with entries in [lo, n).
fn tail_count(n: u64, lo: u64, len: u64) -> Result<u64> {
    if len == 0 {
        return Ok(1);
    }
    binomial(n - lo + len - 1, len).ok_or(Error::Overflow("orbit count"))
}

/// `N = C(n + d - 1, d)`, the number of superclasses of `(Z/nZ)^d`.
pub fn orbit_count(n: Modulus, d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidDimension);
    }
    tail_count(n.get(), 0, d as u64)
}

/// The orbit with lexicographic index `idx`.
pub fn unrank(n: Modulus, d: usize, mut idx: u64) -> Result<OrbitRep> {
    let total = orbit_count(n, d)?;
    if idx >= total {
        return Err(Error::Invalid(format!("orbit index {idx} out of range 0..{total}")));
    }
    let mut entries = Vec::with_capacity(d);
    let mut lo = 0u64;
    for i in 0..d {
        let remaining = (d - i) as u64;
        let mut c = lo;
        loop {
            let cnt = tail_count(n.get(), c, remaining - 1)?;
            if idx < cnt {
                break;
            }
            idx -= cnt;
            c += 1;
        }
        entries.push(c);
        lo = c;
    }
    Ok(OrbitRep { n, entries })
}

/// Lexicographic stream of orbit representatives, optionally restricted to a
/// contiguous index range so disjoint ranges can be handed to workers.
#[derive(Debug, Clone)]
pub struct Orbits {
    n: Modulus,
    current: Option<Vec<u64>>,
    remaining: u64,
}

impl Orbits {
    pub fn range(n: Modulus, d: usize, start: u64, len: u64) -> Result<Self> {
        let total = orbit_count(n, d)?;
        let len = len.min(total.saturating_sub(start));
        let current = if len == 0 { None } else { Some(unrank(n, d, start)?.entries) };
        Ok(Orbits { n, current, remaining: len })
    }
}

impl Iterator for Orbits {
    type Item = OrbitRep;

    fn next(&mut self) -> Option<OrbitRep> {
        if self.remaining == 0 {
            return None;
        }
        let cur = self.current.take()?;
        self.remaining -= 1;
        let mut next = cur.clone();
        let top = self.n.get() - 1;
        if let Some(i) = next.iter().rposition(|&e| e < top) {
            let v = next[i] + 1;
            next[i..].iter_mut().for_each(|e| *e = v);
            self.current = Some(next);
        }
        Some(OrbitRep { n: self.n, entries: cur })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

/// All orbits of `(Z/nZ)^d` in lexicographic order.
pub fn enumerate_orbits(n: Modulus, d: usize) -> Result<Orbits> {
    Orbits::range(n, d, 0, u64::MAX)
}

/// Maps `f` over every orbit of `(Z/nZ)^d` in parallel. The output is in
/// lexicographic orbit order regardless of how the work was scheduled.
pub fn par_map_orbits<R, F>(n: Modulus, d: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&OrbitRep) -> R + Sync,
{
    let total = orbit_count(n, d)?;
    let chunks = chunk_ranges(total, 2048);
    let parts: Vec<Vec<R>> = chunks
        .into_par_iter()
        .map(|(start, len)| Ok(Orbits::range(n, d, start, len)?.map(|r| f(&r)).collect()))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Splits `0..total` into contiguous `(start, len)` chunks.
pub fn chunk_ranges(total: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    (0..total.div_ceil(chunk)).map(|i| (i * chunk, chunk.min(total - i * chunk))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn m(n: i64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn rep(v: &[i64], n: i64) -> OrbitRep {
        OrbitRep::canonicalize(v, m(n)).unwrap()
    }

    // Oracle: all n^d tuples, sorted and deduplicated.
    fn brute_orbits(n: u64, d: usize) -> Vec<Vec<u64>> {
        let mut set = BTreeSet::new();
        let total = n.pow(d as u32);
        for mut code in 0..total {
            let mut t = vec![0u64; d];
            for e in t.iter_mut() {
                *e = code % n;
                code /= n;
            }
            t.sort_unstable();
            set.insert(t);
        }
        set.into_iter().collect()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(rep(&[2, 0, 1], 3).entries(), &[0, 1, 2]);
        assert_eq!(rep(&[-1, 1], 5).entries(), &[1, 4]);
        assert_eq!(rep(&[1, 1, 1], 7).entries(), &[1, 1, 1]);
        assert!(OrbitRep::canonicalize(&[], m(3)).is_err());
    }

    #[test]
    fn orbit_size_examples() {
        // 12 distinct arrangements of (0,1,1,2)
        let r = rep(&[0, 1, 1, 2], 3);
        assert_eq!(r.permutations().count(), 12);
        assert_eq!(r.orbit_size().unwrap(), 12);
        assert_eq!(rep(&[4, 4, 4, 4], 7).orbit_size().unwrap(), 1);
        assert_eq!(rep(&[0, 1, 2], 5).orbit_size().unwrap(), 6);
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(rep(&[0, 1, 1, 2], 3).stabilizer_order().unwrap(), 2);
        assert_eq!(rep(&[5, 5, 5], 7).stabilizer_order().unwrap(), 6);
        assert_eq!(rep(&[0, 1, 2], 3).stabilizer_order().unwrap(), 1);
    }

    #[test]
    fn orbit_size_overflow_is_an_error() {
        let v: Vec<i64> = (0..25).collect();
        let r = rep(&v, 100);
        assert!(matches!(r.orbit_size(), Err(Error::Overflow(_))));
        assert!(matches!(r.stabilizer_order(), Ok(1)));
        let big = OrbitRep::zero(m(2), 30).unwrap();
        assert!(matches!(big.stabilizer_order(), Err(Error::Overflow(_))));
        assert_eq!(big.orbit_size().unwrap(), 1);
    }

    #[test]
    fn enumeration_examples() {
        let got: Vec<Vec<u64>> = enumerate_orbits(m(3), 2).unwrap().map(|r| r.entries).collect();
        assert_eq!(got, brute_orbits(3, 2));
        assert_eq!(got.len(), 6);
        assert_eq!(got[0], vec![0, 0]);
        assert_eq!(got[5], vec![2, 2]);

        let one: Vec<_> = enumerate_orbits(m(1), 4).unwrap().collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].entries(), &[0, 0, 0, 0]);

        assert_eq!(enumerate_orbits(m(2), 3).unwrap().count(), 4);
        assert_eq!(brute_orbits(2, 3).len(), 4);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=6u64 {
            for d in 1..=4 {
                let got: Vec<Vec<u64>> = enumerate_orbits(m(n as i64), d).unwrap().map(|r| r.entries).collect();
                assert_eq!(got, brute_orbits(n, d));
                assert_eq!(got.len() as u64, orbit_count(m(n as i64), d).unwrap());
            }
        }
    }

    #[test]
    fn orbit_sizes_partition_the_group() {
        for n in 1..=6u64 {
            for d in 1..=4 {
                let total: u64 = enumerate_orbits(m(n as i64), d).unwrap().map(|r| r.orbit_size().unwrap()).sum();
                assert_eq!(total, n.pow(d as u32));
            }
        }
    }

    #[test]
    fn ranges_split_the_enumeration() {
        let n = m(7);
        let all: Vec<OrbitRep> = enumerate_orbits(n, 3).unwrap().collect();
        let mut joined = Vec::new();
        for (start, len) in chunk_ranges(all.len() as u64, 10) {
            joined.extend(Orbits::range(n, 3, start, len).unwrap());
        }
        assert_eq!(joined, all);
        for (i, r) in all.iter().enumerate() {
            assert_eq!(r.rank().unwrap(), i as u64);
            assert_eq!(&unrank(n, 3, i as u64).unwrap(), r);
        }
        assert!(unrank(n, 3, all.len() as u64).is_err());
    }

    #[test]
    fn permutation_examples() {
        let p: Vec<_> = rep(&[0, 1], 3).permutations().collect();
        assert_eq!(p, vec![vec![0, 1], vec![1, 0]]);
        let p: Vec<_> = rep(&[1, 1], 3).permutations().collect();
        assert_eq!(p, vec![vec![1, 1]]);
        // dedupe of all 6 index permutations of (0,1,1)
        let base = [0u64, 1, 1];
        let idx = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let brute: BTreeSet<Vec<u64>> = idx.iter().map(|p| p.iter().map(|&i| base[i]).collect()).collect();
        let got: BTreeSet<Vec<u64>> = rep(&[0, 1, 1], 3).permutations().collect();
        assert_eq!(got, brute);
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn orbit_sum_examples() {
        assert_eq!(rep(&[0, 0, 0, 1, 5], 12).orbit_sum(), 6);
        assert_eq!(OrbitRep::zero(m(9), 4).unwrap().orbit_sum(), 0);
        for n in 4..20 {
            assert_eq!(rep(&[1, 2, n - 3], n).orbit_sum(), 0);
        }
    }

    #[test]
    fn shift_and_negate_examples() {
        let x = rep(&[0, 1, 1, 28], 30);
        assert_eq!(x.shift(15).entries(), &[13, 15, 16, 16]);
        assert_eq!(rep(&[1, 2, 3], 7).negate().entries(), &[4, 5, 6]);
        let z = OrbitRep::zero(m(7), 3).unwrap();
        assert_eq!(z.negate(), z);
    }

    #[test]
    fn display_format() {
        assert_eq!(rep(&[2, 6, 6, 6], 15).to_string(), "S_4(2,6,6,6)");
    }

    fn arb_rep() -> impl Strategy<Value = OrbitRep> {
        (1i64..=9, 1usize..=5).prop_flat_map(|(n, d)| proptest::collection::vec(0..n, d).prop_map(move |v| rep(&v, n)))
    }

    proptest! {
        #[test]
        fn size_times_stabilizer_is_factorial(r in arb_rep()) {
            let d = r.d() as u64;
            let fact: u64 = (1..=d).product();
            prop_assert_eq!(r.orbit_size().unwrap() * r.stabilizer_order().unwrap(), fact);
        }

        #[test]
        fn permutations_are_distinct_members(r in arb_rep()) {
            let perms: Vec<Vec<u64>> = r.permutations().collect();
            let set: BTreeSet<Vec<u64>> = perms.iter().cloned().collect();
            prop_assert_eq!(perms.len(), set.len());
            prop_assert_eq!(perms.len() as u64, r.orbit_size().unwrap());
            for p in perms {
                let back = OrbitRep::from_residues(p, r.modulus());
                prop_assert_eq!(&back, &r);
            }
        }

        #[test]
        fn negate_and_shift_are_involutive(r in arb_rep(), j in 0i64..20) {
            prop_assert_eq!(r.negate().negate(), r.clone());
            prop_assert_eq!(r.shift(0), r.clone());
            let n = r.n() as i64;
            prop_assert_eq!(r.shift(j).shift(n - j.rem_euclid(n)), r.clone());
            let expected = r.modulus().add(r.orbit_sum(), r.modulus().mul(r.d() as u64 % r.n(), r.modulus().reduce(j)));
            prop_assert_eq!(r.shift(j).orbit_sum(), expected);
        }
    }
}
