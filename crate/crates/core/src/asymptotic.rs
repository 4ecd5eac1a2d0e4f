//! Orbit matrices, their row reduction over `Z/nZ`, the torus maps read off
//! the reduced matrix, and the hypocycloid that bounds `S_d(1,...,1,1-d)`.

use num_complex::Complex;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::error::{Error, Result};
use crate::eval::{image, ImageOptions, PointCloud, RootTable};
use crate::identities::{IdentityReport, Witness};
use crate::modring::{gcd, mod_inverse, Modulus};
use crate::orbits::{chunk_ranges, OrbitRep};
use crate::{Complex64, Real, POINT_TOL};

/// Dense row-major matrix of residues mod `n`, stored as symmetric lifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    n: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl ResidueMatrix {
    pub fn from_rows(n: Modulus, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        let data = rows.iter().flatten().map(|&v| n.lift(n.reduce(v))).collect();
        Ok(ResidueMatrix { n, rows: rows.len(), cols, data })
    }

    pub fn identity(n: Modulus, size: usize) -> Self {
        let mut data = vec![0; size * size];
        for i in 0..size {
            data[i * size + i] = n.lift(1 % n.get());
        }
        ResidueMatrix { n, rows: size, cols: size, data }
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|&v| v == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// `row_i <- s * row_i - t * row_p`, reduced mod `n`.
    fn combine(&mut self, i: usize, s: i64, p: usize, t: i64) {
        let n = self.n;
        for j in 0..self.cols {
            let v = s as i128 * self.get(i, j) as i128 - t as i128 * self.get(p, j) as i128;
            self.data[i * self.cols + j] = n.lift(n.reduce_wide(v));
        }
    }

    fn scale_row(&mut self, i: usize, s: i64) {
        let n = self.n;
        for j in 0..self.cols {
            let v = s as i128 * self.get(i, j) as i128;
            self.data[i * self.cols + j] = n.lift(n.reduce_wide(v));
        }
    }

    pub fn mul(&self, other: &ResidueMatrix) -> Result<ResidueMatrix> {
        if self.cols != other.rows || self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let n = self.n;
        let mut data = vec![0; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: i128 = (0..self.cols).map(|k| self.get(i, k) as i128 * other.get(k, j) as i128).sum();
                data[i * other.cols + j] = n.lift(n.reduce_wide(s));
            }
        }
        Ok(ResidueMatrix { n, rows: self.rows, cols: other.cols, data })
    }

    /// Determinant mod `n`, via fraction-free (Bareiss) elimination on the
    /// integer lift.
    pub fn det(&self) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let size = self.rows;
        let mut a: Vec<i128> = self.data.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..size {
            if a[k * size + k] == 0 {
                let Some(swap) = (k + 1..size).find(|&i| a[i * size + k] != 0) else {
                    return Ok(0);
                };
                for j in 0..size {
                    a.swap(k * size + j, swap * size + j);
                }
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = a[i * size + j]
                        .checked_mul(a[k * size + k])
                        .and_then(|x| x.checked_sub(a[i * size + k].checked_mul(a[k * size + j])?))
                        .ok_or(Error::Overflow("determinant"))?;
                    a[i * size + j] = v / prev;
                }
            }
            prev = a[k * size + k];
        }
        let det = if size == 0 { 1 } else { sign * a[size * size - 1] };
        Ok(self.n.reduce_wide(det))
    }
}

fn serialize_matrix<S: Serializer>(m: &ResidueMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_rows().serialize(s)
}

/// `d x |X|` matrix whose columns are the elements of `X`, in
/// lexicographic (distinct-permutation) order.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitMatrix {
    pub orbit: OrbitRep,
    #[serde(serialize_with = "serialize_matrix")]
    pub a: ResidueMatrix,
}

impl OrbitMatrix {
    pub fn n(&self) -> u64 {
        self.orbit.n()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.a.cols).map(|j| (0..self.a.rows).map(|i| self.a.get(i, j)).collect()).collect()
    }
}

pub fn orbit_matrix(x: &OrbitRep, budget: u64) -> Result<OrbitMatrix> {
    let size = x.orbit_size()?;
    if size > budget {
        return Err(Error::BudgetExceeded { count: size, budget });
    }
    let n = x.modulus();
    let d = x.d();
    let cols: Vec<Vec<u64>> = x.permutations().collect();
    let mut rows = vec![Vec::with_capacity(cols.len()); d];
    for c in &cols {
        for (i, &v) in c.iter().enumerate() {
            rows[i].push(v as i64);
        }
    }
    Ok(OrbitMatrix { orbit: x.clone(), a: ResidueMatrix::from_rows(n, &rows)? })
}

/// `B = R A (mod n)` with `det R` a unit; the last `zero_rows` rows of `B`
/// vanish. `complete` is false for the partial certificate carried by
/// [`Error::NoUnitPivot`].
#[derive(Debug, Clone, Serialize)]
pub struct ReductionCertificate {
    pub n: u64,
    #[serde(rename = "R", serialize_with = "serialize_matrix")]
    pub r: ResidueMatrix,
    #[serde(rename = "B", serialize_with = "serialize_matrix")]
    pub b: ResidueMatrix,
    pub det_r: u64,
    pub zero_rows: usize,
    pub complete: bool,
}

impl ReductionCertificate {
    /// Re-derives `R A` and `det R` and checks them against the stored values.
    pub fn verify(&self, a: &ResidueMatrix) -> Result<bool> {
        let ra = self.r.mul(a)?;
        let det = self.r.det()?;
        let trailing_zero = (self.b.rows - self.zero_rows..self.b.rows).all(|i| self.b.row_is_zero(i));
        Ok(ra == self.b && det == self.det_r && gcd(det as i64, self.n as i64) == 1 && trailing_zero)
    }

    /// Strict mode: entrywise equality of `B` with an expected matrix, mod `n`.
    pub fn matches_expected_b(&self, expected: &[Vec<i64>]) -> bool {
        ResidueMatrix::from_rows(self.b.n, expected).is_ok_and(|e| e == self.b)
    }
}

/// Result of [`row_reduce_mod_n`]: the certificate plus the pivot columns.
#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub certificate: ReductionCertificate,
    pub pivot_columns: Vec<usize>,
}

/// Row-reduces `A` over `Z/nZ` using only unit pivots.
pub fn row_reduce_mod_n(a: &OrbitMatrix) -> Result<ReductionCertificate> {
    row_reduce(&a.a).map(|o| o.certificate)
}

/// Gauss-Jordan elimination on the symmetric lift of `A`.
///
/// Each column's pivot is the unit entry of smallest absolute value among the
/// unpivoted rows. Other rows are cleared fraction-free,
/// `row_i <- (p/g) row_i - (a_i/g) row_p` with `g = gcd(p, a_i)`, so only
/// units ever scale a row and entries stay small integers. Afterwards each
/// pivot row is divided by the unit content of its entries and signed so the
/// pivot is positive; zero rows of `B` get their `R` row signed so its first
/// nonzero entry is positive. Only row operations are used, `R` acts on the
/// left.
pub fn row_reduce(a: &ResidueMatrix) -> Result<ReductionOutcome> {
    let n = a.n;
    let d = a.rows;
    let mut b = a.clone();
    let mut r = ResidueMatrix::identity(n, d);
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..a.cols {
        if rank == d {
            break;
        }
        let pivot = (rank..d)
            .filter(|&i| b.get(i, col) != 0 && n.is_unit(b.get(i, col)))
            .min_by_key(|&i| (b.get(i, col).unsigned_abs(), i));
        let Some(p_row) = pivot else { continue };
        b.swap_rows(rank, p_row);
        r.swap_rows(rank, p_row);
        let p = b.get(rank, col);
        for i in 0..d {
            let ai = b.get(i, col);
            if i == rank || ai == 0 {
                continue;
            }
            let g = p.gcd(&ai);
            b.combine(i, p / g, rank, ai / g);
            r.combine(i, p / g, rank, ai / g);
        }
        pivots.push(col);
        rank += 1;
    }
    for (i, &col) in pivots.iter().enumerate() {
        let content = b.row(i).iter().fold(0i64, |acc, &v| acc.gcd(&v));
        if content > 1 && n.is_unit(content) {
            let inv = n.lift(mod_inverse(content, n)?);
            for j in 0..b.cols {
                b.data[i * b.cols + j] /= content;
            }
            r.scale_row(i, inv);
        }
        if b.get(i, col) < 0 {
            b.scale_row(i, -1);
            r.scale_row(i, -1);
        }
    }
    for i in rank..d {
        if b.row_is_zero(i) && r.row(i).iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
            r.scale_row(i, -1);
        }
    }
    let zero_rows = (0..d).rev().take_while(|&i| b.row_is_zero(i)).count();
    let complete = zero_rows == d - rank;
    let det_r = r.det()?;
    let certificate = ReductionCertificate { n: n.get(), r, b, det_r, zero_rows, complete };
    if !certificate.verify(a)? {
        return Err(Error::Invalid("row reduction produced an invalid certificate".into()));
    }
    if !complete {
        return Err(Error::NoUnitPivot { remaining_rows: d - rank, partial: Box::new(certificate) });
    }
    Ok(ReductionOutcome { certificate, pivot_columns: pivots })
}

/// Exponents `b_{jl}` of the torus map `g(z) = sum_l prod_j z_j^{b_{jl}}`,
/// lifted to `(-n/2, n/2]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentMatrix {
    pub n: u64,
    pub rows: Vec<Vec<i64>>,
}

impl ExponentMatrix {
    /// `g(z) = z_1 + ... + z_{d-1} + 1/(z_1 ... z_{d-1})`.
    pub fn hypocycloid(d: usize, n: u64) -> Self {
        let rows = (0..d.saturating_sub(1))
            .map(|i| {
                let mut row = vec![0i64; d];
                row[i] = 1;
                row[d - 1] = -1;
                row
            })
            .collect();
        ExponentMatrix { n, rows }
    }

    pub fn num_vars(&self) -> usize {
        self.rows.len()
    }

    pub fn num_terms(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Exponent vectors of the monomials, one per column.
    pub fn monomials(&self) -> Vec<Vec<i64>> {
        (0..self.num_terms()).map(|l| self.rows.iter().map(|row| row[l]).collect()).collect()
    }

    /// `g` at an arbitrary point of the torus.
    pub fn eval<T: Real>(&self, z: &[Complex<T>]) -> Result<Complex<T>> {
        if z.len() != self.num_vars() {
            return Err(Error::DimensionMismatch { expected: self.num_vars(), got: z.len() });
        }
        Ok((0..self.num_terms())
            .map(|l| {
                self.rows
                    .iter()
                    .zip(z)
                    .fold(Complex::new(T::one(), T::zero()), |acc, (row, zj)| acc * zj.powi(row[l] as i32))
            })
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b))
    }
}

/// Drops the zero rows of `B` and lifts the rest to `(-n/2, n/2]`.
pub fn torus_map(cert: &ReductionCertificate) -> ExponentMatrix {
    let n = cert.b.n;
    let rows = (0..cert.b.rows - cert.zero_rows)
        .map(|i| cert.b.row(i).iter().map(|&v| n.lift(n.reduce(v))).collect())
        .collect();
    ExponentMatrix { n: n.get(), rows }
}

/// `g` at all `grid^rows` points `z_j = e(m_j / grid)`, deduplicated.
pub fn sample_torus_map(e: &ExponentMatrix, grid: u64, budget: u64) -> Result<PointCloud> {
    let grid_mod = Modulus::new(grid as i64)?;
    let vars = e.num_vars();
    let total = grid.checked_pow(vars as u32).ok_or(Error::Overflow("torus grid size"))?;
    if total > budget {
        return Err(Error::BudgetExceeded { count: total, budget });
    }
    let table = RootTable::<f64>::new(grid_mod);
    let monomials = e.monomials();
    let parts: Vec<Vec<Complex64>> = chunk_ranges(total, 4096)
        .into_par_iter()
        .map(|(start, len)| {
            let mut m = vec![0u64; vars];
            (start..start + len)
                .map(|code| {
                    let mut c = code;
                    for v in m.iter_mut() {
                        *v = c % grid;
                        c /= grid;
                    }
                    monomials
                        .iter()
                        .map(|mono| {
                            let t: i128 = mono.iter().zip(&m).map(|(&b, &mj)| b as i128 * mj as i128).sum();
                            table.e(grid_mod.reduce_wide(t))
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    let values = parts.into_iter().flatten().collect();
    Ok(PointCloud::from_values(grid, vars, None, values, None))
}

/// `x(t) = (d-1) cos t + cos((d-1) t)`, `y(t) = (d-1) sin t - sin((d-1) t)`.
pub fn hypocycloid_point<T: Real>(d: usize, theta: T) -> Complex<T> {
    let k = T::from_usize(d - 1).unwrap();
    Complex::new(k * theta.cos() + (k * theta).cos(), k * theta.sin() - (k * theta).sin())
}

/// Closed polyline through `samples` equally spaced parameter values.
pub fn hypocycloid_boundary<T: Real>(d: usize, samples: usize) -> Result<Vec<Complex<T>>> {
    if d < 2 {
        return Err(Error::Invalid("a hypocycloid needs at least 2 cusps".into()));
    }
    if samples < 3 * d {
        return Err(Error::Invalid(format!("need at least {} samples, got {samples}", 3 * d)));
    }
    let s = T::from_usize(samples).unwrap();
    Ok((0..samples).map(|i| hypocycloid_point(d, T::TAU() * T::from_usize(i).unwrap() / s)).collect())
}

/// Base sample count for containment polygons.
pub const HYPOCYCLOID_SAMPLES: usize = 4096;

/// Filled `d`-cusped hypocycloid as a polygon, for containment tests.
#[derive(Debug, Clone)]
pub struct Hypocycloid<T> {
    d: usize,
    polygon: Vec<Complex<T>>,
}

impl<T: Real> Hypocycloid<T> {
    /// Uses the smallest multiple of `d` that is at least
    /// [`HYPOCYCLOID_SAMPLES`], so every cusp is a polygon vertex.
    pub fn new(d: usize) -> Result<Self> {
        let samples = HYPOCYCLOID_SAMPLES.div_ceil(d.max(1)) * d.max(1);
        Ok(Hypocycloid { d, polygon: hypocycloid_boundary(d, samples)? })
    }

    pub fn cusps(&self) -> usize {
        self.d
    }

    pub fn polygon(&self) -> &[Complex<T>] {
        &self.polygon
    }

    /// Inside the polygon (nonzero winding), or within `tol` of its boundary.
    pub fn contains(&self, z: Complex<T>, tol: T) -> bool {
        let r = z.norm();
        let d = T::from_usize(self.d).unwrap();
        let two = T::from_u8(2).unwrap();
        if r > d + tol {
            return false;
        }
        // the inscribed circle has radius d - 2
        if r < d - two - tol {
            return true;
        }
        winding_number(&self.polygon, z) != 0 || distance_to_polyline(&self.polygon, z) <= tol
    }
}

fn winding_number<T: Real>(poly: &[Complex<T>], z: Complex<T>) -> i32 {
    let mut wn = 0;
    for (i, &a) in poly.iter().enumerate() {
        let b = poly[(i + 1) % poly.len()];
        let cross = (b.re - a.re) * (z.im - a.im) - (z.re - a.re) * (b.im - a.im);
        if a.im <= z.im {
            if b.im > z.im && cross > T::zero() {
                wn += 1;
            }
        } else if b.im <= z.im && cross < T::zero() {
            wn -= 1;
        }
    }
    wn
}

fn distance_to_polyline<T: Real>(poly: &[Complex<T>], z: Complex<T>) -> T {
    poly.iter()
        .enumerate()
        .map(|(i, &a)| {
            let b = poly[(i + 1) % poly.len()];
            let ab = b - a;
            let len2 = ab.norm_sqr();
            let t = if len2 > T::zero() {
                (((z - a).re * ab.re + (z - a).im * ab.im) / len2).max(T::zero()).min(T::one())
            } else {
                T::zero()
            };
            (a + ab * t - z).norm()
        })
        .fold(T::infinity(), T::min)
}

pub fn hypocycloid_contains<T: Real>(z: Complex<T>, d: usize, tol: T) -> Result<bool> {
    Ok(Hypocycloid::new(d)?.contains(z, tol))
}

/// `S_d(1, ..., 1, 1 - d)` mod `n`.
pub fn hypocycloid_orbit(n: Modulus, d: usize) -> Result<OrbitRep> {
    let mut v = vec![1i64; d];
    v[d - 1] = 1 - d as i64;
    OrbitRep::canonicalize(&v, n)
}

/// Checks that every value of `sigma_X` for `X = S_d(1,...,1,1-d)` lies in
/// the filled `d`-cusped hypocycloid (tolerance `1e-9`), and reports how much
/// of the hypocycloid the image covers on a 200 x 200 grid.
pub fn hypocycloid_orbit_check(n: Modulus, d: usize, budget: u64) -> Result<IdentityReport> {
    if d < 2 {
        return Err(Error::Invalid("the hypocycloid check needs d >= 2".into()));
    }
    let x = hypocycloid_orbit(n, d)?;
    let cloud = image(&x, &ImageOptions { budget, ..Default::default() })?;
    let hypo = Hypocycloid::<f64>::new(d)?;
    let outside: Vec<Complex64> =
        cloud.points().par_iter().copied().filter(|&z| !hypo.contains(z, POINT_TOL)).collect();
    let mut rep = IdentityReport::new("hypocycloid", n.get(), d, false).with_x(&x).with_detail(json!({
        "points": cloud.len(),
        "fill_ratio": fill_ratio(&cloud, &hypo, 200),
        "n_over_gcd": n.get() / gcd(n.get() as i64, d as i64),
    }));
    if !outside.is_empty() {
        rep.fail(Witness::Points { points: outside.iter().take(16).map(|z| [z.re, z.im]).collect() });
    }
    Ok(rep)
}

fn fill_ratio(cloud: &PointCloud, hypo: &Hypocycloid<f64>, cells: usize) -> f64 {
    if hypo.cusps() == 2 {
        return 0.0;
    }
    let d = hypo.cusps() as f64;
    let step = 2.0 * d / cells as f64;
    let cell_of = |v: f64| (((v + d) / step).floor() as usize).min(cells - 1);
    let mut occupied = vec![false; cells * cells];
    for z in cloud.points() {
        occupied[cell_of(z.im) * cells + cell_of(z.re)] = true;
    }
    let (mut inside, mut hit) = (0usize, 0usize);
    for i in 0..cells {
        for j in 0..cells {
            let c = Complex64::new(-d + (j as f64 + 0.5) * step, -d + (i as f64 + 0.5) * step);
            if hypo.contains(c, 0.0) {
                inside += 1;
                hit += occupied[i * cells + j] as usize;
            }
        }
    }
    if inside == 0 {
        0.0
    } else {
        hit as f64 / inside as f64
    }
}
