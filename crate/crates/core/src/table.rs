//! The full supercharacter table and its normalized unitary form.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{dot_counts, RootTable};
use crate::modring::Modulus;
use crate::orbits::{enumerate_orbits, orbit_count, OrbitRep};
use crate::Complex64;

/// `S_ij = sigma_{X_i}(X_j)` over the lexicographically ordered superclasses.
#[derive(Debug, Clone)]
pub struct SuperTable {
    n: Modulus,
    d: usize,
    orbits: Vec<OrbitRep>,
    sizes: Vec<u64>,
    entries: Vec<Complex64>,
}

/// Table export: `entries[i][j] = [re, im]`.
#[derive(Serialize)]
struct TableJson<'a> {
    n: u64,
    d: usize,
    orbits: Vec<&'a [u64]>,
    sizes: &'a [u64],
    entries: Vec<Vec<[f64; 2]>>,
}

impl SuperTable {
    pub fn n(&self) -> u64 {
        self.n.get()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of superclasses.
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbits(&self) -> &[OrbitRep] {
        &self.orbits
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let m = self.len();
        &self.entries[i * m..(i + 1) * m]
    }

    /// Index of `-X_i` for each `i`.
    pub fn negation_permutation(&self) -> Vec<usize> {
        self.orbits.iter().map(|x| x.negate().rank().expect("rank fits") as usize).collect()
    }

    /// `n^d` as a float.
    pub fn group_order(&self) -> f64 {
        (self.n.get() as f64).powi(self.d as i32)
    }

    /// Largest `|sum_j |X_j| S_ij conj(S_i'j) - delta n^d |X_i||`, divided by `n^d`.
    pub fn second_orthogonality_residual(&self) -> f64 {
        let m = self.len();
        let scale = self.group_order();
        (0..m)
            .into_par_iter()
            .map(|i| {
                let mut worst = 0.0f64;
                for i2 in 0..m {
                    let s: Complex64 =
                        (0..m).map(|j| self.entry(i, j) * self.entry(i2, j).conj() * self.sizes[j] as f64).sum();
                    let target = if i == i2 { scale * self.sizes[i] as f64 } else { 0.0 };
                    worst = worst.max((s - target).norm() / scale);
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        let m = self.len();
        let json = TableJson {
            n: self.n.get(),
            d: self.d,
            orbits: self.orbits.iter().map(OrbitRep::entries).collect(),
            sizes: &self.sizes,
            entries: (0..m).map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect()).collect(),
        };
        Ok(serde_json::to_string(&json)?)
    }
}

/// Builds all `N^2` entries, exactly as counts and then numerically.
/// `budget` caps `N^2`.
pub fn build_table(n: Modulus, d: usize, budget: u64) -> Result<SuperTable> {
    let m = orbit_count(n, d)?;
    let cells = m.checked_mul(m).ok_or(Error::Overflow("table size"))?;
    if cells > budget {
        return Err(Error::BudgetExceeded { count: cells, budget });
    }
    let orbits: Vec<OrbitRep> = enumerate_orbits(n, d)?.collect();
    let sizes = orbits.iter().map(OrbitRep::orbit_size).collect::<Result<Vec<_>>>()?;
    let roots = RootTable::<f64>::new(n);
    let rows = orbits
        .par_iter()
        .map(|x| orbits.iter().map(|y| Ok(dot_counts(x, y.entries())?.to_complex(&roots))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(SuperTable { n, d, orbits, sizes, entries: rows.into_iter().flatten().collect() })
}

/// `U_ij = S_ij sqrt(|X_j|) / (sqrt(|X_i|) sqrt(n^d))`, with its residuals.
#[derive(Debug, Clone, Serialize)]
pub struct UnitaryTable {
    pub size: usize,
    #[serde(skip)]
    entries: Vec<Complex64>,
    /// `max |U - U^T|`
    pub symmetry_residual: f64,
    /// `max |U conj(U)^T - I|`
    pub unitarity_residual: f64,
}

impl UnitaryTable {
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.size + j]
    }

    /// `U f`.
    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.size {
            return Err(Error::DimensionMismatch { expected: self.size, got: f.len() });
        }
        Ok((0..self.size).into_par_iter().map(|i| (0..self.size).map(|j| self.entry(i, j) * f[j]).sum()).collect())
    }
}

pub fn build_unitary(table: &SuperTable) -> UnitaryTable {
    let m = table.len();
    let root_order = table.group_order().sqrt();
    let roots: Vec<f64> = table.sizes.iter().map(|&s| (s as f64).sqrt()).collect();
    let entries: Vec<Complex64> = (0..m * m)
        .map(|idx| {
            let (i, j) = (idx / m, idx % m);
            table.entries[idx] * roots[j] / (roots[i] * root_order)
        })
        .collect();
    let at = |i: usize, j: usize| entries[i * m + j];
    let symmetry_residual =
        (0..m * m).map(|idx| (at(idx / m, idx % m) - at(idx % m, idx / m)).norm()).fold(0.0, f64::max);
    let unitarity_residual = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|k| {
                    let s: Complex64 = (0..m).map(|j| at(i, j) * at(k, j).conj()).sum();
                    let target = if i == k { 1.0 } else { 0.0 };
                    (s - target).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    UnitaryTable { size: m, entries, symmetry_residual, unitarity_residual }
}

/// The superclass Fourier transform `f -> U f`, with `f` indexed in table order.
pub fn superclass_transform(unitary: &UnitaryTable, f: &[Complex64]) -> Result<Vec<Complex64>> {
    unitary.apply(f)
}
