//! Evaluation of `sigma_X(y)`.
//!
//! Values are kept exact as [`CountsVector`]s: `c_t` is the number of orbit
//! elements `x` with `x . y == t (mod n)`, so the value is `sum_t c_t e(t/n)`.
//! Identity checks compare these integer vectors; floating point only enters
//! through [`RootTable`].

use std::collections::HashMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modring::Modulus;
use crate::orbits::{chunk_ranges, orbit_count, par_map_orbits, OrbitRep};
use crate::{Complex64, Real, DEFAULT_BUDGET};

/// Largest dimension accepted by the factorial-cost oracles.
pub const MAX_ORACLE_DIM: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CountsVector {
    n: Modulus,
    counts: Vec<u64>,
}

impl CountsVector {
    pub fn new(n: Modulus, counts: Vec<u64>) -> Result<Self> {
        if counts.len() as u64 != n.get() {
            return Err(Error::DimensionMismatch { expected: n.get() as usize, got: counts.len() });
        }
        Ok(CountsVector { n, counts })
    }

    pub fn zeros(n: Modulus) -> Self {
        CountsVector { n, counts: vec![0; n.get() as usize] }
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Index reversal `t -> -t`, i.e. complex conjugation of the value.
    pub fn reversed(&self) -> Self {
        let n = self.n.get() as usize;
        let mut out = vec![0; n];
        for (t, &c) in self.counts.iter().enumerate() {
            out[(n - t) % n] = c;
        }
        CountsVector { n: self.n, counts: out }
    }

    /// Index shift `t -> t + t0`, i.e. multiplication of the value by `e(t0/n)`.
    pub fn shifted(&self, t0: u64) -> Self {
        let n = self.n.get() as usize;
        let t0 = (t0 % self.n.get()) as usize;
        let mut out = vec![0; n];
        for (t, &c) in self.counts.iter().enumerate() {
            out[(t + t0) % n] = c;
        }
        CountsVector { n: self.n, counts: out }
    }

    /// `c_t == c_{-t}` for all `t`; implies the value is real.
    pub fn is_palindromic(&self) -> bool {
        *self == self.reversed()
    }

    pub fn to_complex<T: Real>(&self, table: &RootTable<T>) -> Complex<T> {
        debug_assert_eq!(table.n(), self.n.get());
        self.counts
            .iter()
            .zip(table.roots())
            .filter(|(&c, _)| c != 0)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&c, &w)| {
                acc + w * T::from_u64(c).expect("count fits the scalar type")
            })
    }
}

/// The `n` roots of unity `e(t/n)`, `t = 0..n`.
#[derive(Debug, Clone)]
pub struct RootTable<T> {
    roots: Vec<Complex<T>>,
}

impl<T: Real> RootTable<T> {
    pub fn new(n: Modulus) -> Self {
        let n = n.get() as usize;
        let mut roots = vec![Complex::new(T::one(), T::zero()); n];
        let nf = T::from_usize(n).unwrap();
        // fill the upper half by conjugation so e(-t/n) == conj(e(t/n)) bit for bit
        for t in 1..=n / 2 {
            let theta = T::TAU() * T::from_usize(t).unwrap() / nf;
            roots[t] = Complex::new(theta.cos(), theta.sin());
            roots[n - t] = roots[t].conj();
        }
        RootTable { roots }
    }

    pub fn n(&self) -> u64 {
        self.roots.len() as u64
    }

    pub fn roots(&self) -> &[Complex<T>] {
        &self.roots
    }

    /// `e(t/n)`.
    #[inline]
    pub fn e(&self, t: u64) -> Complex<T> {
        self.roots[(t % self.roots.len() as u64) as usize]
    }
}

fn check_dim(x: &OrbitRep, y: &[u64]) -> Result<()> {
    if x.d() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.d(), got: y.len() });
    }
    Ok(())
}

#[inline]
fn dot_mod(a: &[u64], y: &[u64], n: u64) -> u64 {
    let s: u128 = a.iter().zip(y).map(|(&p, &q)| p as u128 * q as u128).sum();
    (s % n as u128) as u64
}

/// `c_t = #{x in X : x . y == t (mod n)}`.
pub fn dot_counts(x: &OrbitRep, y: &[u64]) -> Result<CountsVector> {
    check_dim(x, y)?;
    let n = x.n();
    let mut counts = vec![0u64; n as usize];
    x.for_each_permutation(|p| counts[dot_mod(p, y, n) as usize] += 1);
    Ok(CountsVector { n: x.modulus(), counts })
}

/// `sum_t c_t e(t/n)` with a freshly built table.
pub fn counts_to_complex<T: Real>(cv: &CountsVector) -> Complex<T> {
    cv.to_complex(&RootTable::new(cv.modulus()))
}

pub fn supercharacter_with<T: Real>(x: &OrbitRep, y: &[u64], table: &RootTable<T>) -> Result<Complex<T>> {
    Ok(dot_counts(x, y)?.to_complex(table))
}

/// `sigma_X(y)`.
pub fn supercharacter<T: Real>(x: &OrbitRep, y: &[u64]) -> Result<Complex<T>> {
    supercharacter_with(x, y, &RootTable::new(x.modulus()))
}

/// Permanent of a square row-major matrix by Ryser's formula with Gray-code
/// ordering of column subsets, `O(2^d d)`.
pub fn permanent<T: Real>(m: &[Complex<T>], d: usize) -> Complex<T> {
    assert_eq!(m.len(), d * d, "matrix must be d x d");
    let zero = Complex::new(T::zero(), T::zero());
    if d == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let mut row_sums = vec![zero; d];
    let mut total = zero;
    let mut gray: u64 = 0;
    for step in 1u64..(1u64 << d) {
        let next = step ^ (step >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << col) != 0;
        for (i, rs) in row_sums.iter_mut().enumerate() {
            if adding {
                *rs = *rs + m[i * d + col];
            } else {
                *rs = *rs - m[i * d + col];
            }
        }
        gray = next;
        let prod = row_sums.iter().fold(Complex::new(T::one(), T::zero()), |a, &b| a * b);
        if (d - next.count_ones() as usize).is_multiple_of(2) {
            total = total + prod;
        } else {
            total = total - prod;
        }
    }
    total
}

/// `per(e(x_j y_k / n)) / |stab(x)|`, an independent route to `sigma_X(y)`.
pub fn permanent_oracle<T: Real>(x: &OrbitRep, y: &[u64]) -> Result<Complex<T>> {
    check_dim(x, y)?;
    let d = x.d();
    if d > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_ORACLE_DIM });
    }
    let table = RootTable::<T>::new(x.modulus());
    let n = x.modulus();
    let m: Vec<Complex<T>> =
        x.entries().iter().flat_map(|&xj| y.iter().map(move |&yk| n.mul(xj, yk))).map(|t| table.e(t)).collect();
    let stab = T::from_u64(x.stabilizer_order()?).unwrap();
    Ok(permanent(&m, d) / stab)
}

/// Counts over all `d!` index permutations of the representative, divided by
/// `|stab(x)|`. Must equal [`dot_counts`] exactly.
pub fn stabilizer_sum_counts(x: &OrbitRep, y: &[u64]) -> Result<CountsVector> {
    check_dim(x, y)?;
    let d = x.d();
    if d > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge { d, max: MAX_ORACLE_DIM });
    }
    let n = x.n();
    let mut counts = vec![0u64; n as usize];
    let mut perm: Vec<u64> = x.entries().to_vec();
    // Heap's algorithm visits every index permutation once, duplicates included.
    let mut c = vec![0usize; d];
    counts[dot_mod(&perm, y, n) as usize] += 1;
    let mut i = 1;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            counts[dot_mod(&perm, y, n) as usize] += 1;
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let stab = x.stabilizer_order()?;
    debug_assert!(counts.iter().all(|c| c % stab == 0));
    CountsVector::new(x.modulus(), counts.into_iter().map(|c| c / stab).collect())
}

/// Whether `dot_counts(X, y)` is the same integer vector for every `y` in `Y`.
pub fn constancy_check(x: &OrbitRep, y_orbit: &OrbitRep) -> Result<bool> {
    if x.n() != y_orbit.n() {
        return Err(Error::Invalid("orbits live in different groups".into()));
    }
    let first = dot_counts(x, y_orbit.entries())?;
    let mut same = true;
    y_orbit.for_each_permutation(|y| {
        if same {
            same = dot_counts(x, y).map(|c| c == first).unwrap_or(false);
        }
    });
    Ok(same)
}

/// Key used to deduplicate plotted values: both coordinates rounded to nine
/// decimal places.
#[inline]
pub fn dedupe_key(z: Complex64) -> (i64, i64) {
    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
}

/// Deduplicated values of a supercharacter image (or a union of images).
#[derive(Debug, Clone, Serialize)]
pub struct PointCloud {
    pub n: u64,
    pub d: usize,
    /// `None` for unions over several orbits.
    pub orbit: Option<OrbitRep>,
    points: Vec<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sources: Option<Vec<CountsVector>>,
}

impl PointCloud {
    /// Deduplicates under [`dedupe_key`]. The surviving value for each key is
    /// the first one in input order; points come out sorted by key, so the
    /// result only depends on the input multiset order, not on scheduling.
    pub fn from_values(
        n: u64,
        d: usize,
        orbit: Option<OrbitRep>,
        values: Vec<Complex64>,
        sources: Option<Vec<CountsVector>>,
    ) -> Self {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by_key(|&i| dedupe_key(values[i]));
        idx.dedup_by_key(|i| dedupe_key(values[*i]));
        let points = idx.iter().map(|&i| values[i]).collect();
        let sources = sources.map(|s| idx.iter().map(|&i| s[i].clone()).collect());
        PointCloud { n, d, orbit, points, sources }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn sources(&self) -> Option<&[CountsVector]> {
        self.sources.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Multiset union followed by the usual dedupe.
    pub fn union<'a>(n: u64, d: usize, clouds: impl IntoIterator<Item = &'a PointCloud>) -> Self {
        let values = clouds.into_iter().flat_map(|c| c.points.iter().copied()).collect();
        PointCloud::from_values(n, d, None, values, None)
    }

    pub fn index(&self, tol: f64) -> PointIndex {
        PointIndex::new(&self.points, tol)
    }

    /// Every point of `self` lies within `tol` of a point of `other` and vice versa.
    pub fn same_set_within(&self, other: &PointCloud, tol: f64) -> bool {
        let a = self.index(tol);
        let b = other.index(tol);
        self.points.iter().all(|&z| b.contains(z)) && other.points.iter().all(|&z| a.contains(z))
    }

    /// Points whose rotation by `angle` has no partner within `tol`.
    pub fn rotation_misses(&self, angle: f64, tol: f64) -> Vec<Complex64> {
        let index = self.index(tol);
        let w = Complex64::from_polar(1.0, angle);
        self.points.iter().copied().filter(|&z| !index.contains(z * w)).collect()
    }

    pub fn closed_under_rotation(&self, angle: f64, tol: f64) -> bool {
        self.rotation_misses(angle, tol).is_empty()
    }
}

/// Grid hash over a point set for tolerance lookups.
#[derive(Debug)]
pub struct PointIndex {
    tol: f64,
    cells: HashMap<(i64, i64), Vec<Complex64>>,
}

impl PointIndex {
    pub fn new(points: &[Complex64], tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        let mut cells: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
        for &z in points {
            cells.entry(Self::cell(z, tol)).or_default().push(z);
        }
        PointIndex { tol, cells }
    }

    fn cell(z: Complex64, tol: f64) -> (i64, i64) {
        ((z.re / tol).floor() as i64, (z.im / tol).floor() as i64)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let (cx, cy) = Self::cell(z, self.tol);
        (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                self.cells.get(&(cx + dx, cy + dy)).is_some_and(|v| v.iter().any(|&w| (w - z).norm() <= self.tol))
            })
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ImageOptions {
    pub budget: u64,
    /// Evaluate at every element of `(Z/nZ)^d` instead of one per superclass.
    pub full_group: bool,
    /// Keep the exact counts vector behind each point.
    pub keep_counts: bool,
}

impl Default for ImageOptions {
    fn default() -> Self {
        ImageOptions { budget: DEFAULT_BUDGET, full_group: false, keep_counts: false }
    }
}

/// Number of evaluations [`image`] would perform.
pub fn image_cost(n: Modulus, d: usize, full_group: bool) -> Result<u64> {
    if full_group {
        n.get().checked_pow(d as u32).ok_or(Error::Overflow("group order"))
    } else {
        orbit_count(n, d)
    }
}

/// All values `sigma_X(y)`, one `y` per superclass (or every `y` with
/// `full_group`), deduplicated.
pub fn image(x: &OrbitRep, opts: &ImageOptions) -> Result<PointCloud> {
    let n = x.modulus();
    let d = x.d();
    let cost = image_cost(n, d, opts.full_group)?;
    if cost > opts.budget {
        return Err(Error::BudgetExceeded { count: cost, budget: opts.budget });
    }
    let table = RootTable::<f64>::new(n);
    let counts: Vec<CountsVector> = if opts.full_group {
        let chunks = chunk_ranges(cost, 4096);
        let parts: Vec<Vec<CountsVector>> = chunks
            .into_par_iter()
            .map(|(start, len)| {
                let mut y = vec![0u64; d];
                (start..start + len)
                    .map(|code| {
                        let mut c = code;
                        for e in y.iter_mut() {
                            *e = c % n.get();
                            c /= n.get();
                        }
                        dot_counts(x, &y).expect("dimensions agree")
                    })
                    .collect()
            })
            .collect();
        parts.into_iter().flatten().collect()
    } else {
        par_map_orbits(n, d, |y| dot_counts(x, y.entries()).expect("dimensions agree"))?
    };
    let values = counts.iter().map(|c| c.to_complex(&table)).collect();
    let sources = opts.keep_counts.then_some(counts);
    Ok(PointCloud::from_values(n.get(), d, Some(x.clone()), values, sources))
}
