//! Verifiers for the symmetry identities of symmetric supercharacters.
//!
//! Two-sided identities are checked on [`CountsVector`]s, where multiplying by
//! `e(t/n)` is an index shift and conjugation is an index reversal, so these
//! checks are exact. Only ray and rotation geometry is numeric.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::eval::{dot_counts, image, CountsVector, ImageOptions, PointCloud, RootTable};
use crate::modring::{gcd, solve_bilinear_congruence, Modulus};
use crate::orbits::{enumerate_orbits, orbit_count, OrbitRep};
use crate::{Complex64, POINT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Counts { lhs: Vec<u64>, rhs: Vec<u64> },
    Values { lhs: [f64; 2], rhs: [f64; 2] },
    Points { points: Vec<[f64; 2]> },
    Message { text: String },
}

impl Witness {
    fn counts(lhs: &CountsVector, rhs: &CountsVector) -> Self {
        Witness::Counts { lhs: lhs.counts().to_vec(), rhs: rhs.counts().to_vec() }
    }

    fn points(pts: &[Complex64]) -> Self {
        Witness::Points { points: pts.iter().take(16).map(|z| [z.re, z.im]).collect() }
    }
}

/// Outcome of one identity check on concrete parameters. A failed report
/// always carries a witness.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub n: u64,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    pub exact: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl IdentityReport {
    pub fn new(identity: &str, n: u64, d: usize, exact: bool) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            n,
            d,
            x: None,
            y: None,
            j: None,
            k: None,
            r: None,
            exact,
            passed: true,
            witness: None,
            detail: None,
        }
    }

    pub fn with_x(mut self, x: &OrbitRep) -> Self {
        self.x = Some(x.entries().to_vec());
        self
    }

    pub fn with_y(mut self, y: &[u64]) -> Self {
        self.y = Some(y.to_vec());
        self
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }

    /// Records the first failure; later ones are ignored.
    pub fn fail(&mut self, witness: Witness) {
        if self.passed {
            self.passed = false;
            self.witness = Some(witness);
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn neg_vec(y: &[u64], n: Modulus) -> Vec<u64> {
    y.iter().map(|&v| n.neg(v)).collect()
}

fn tuple_sum(y: &[u64], n: Modulus) -> u64 {
    y.iter().fold(0, |acc, &v| n.add(acc, v % n.get()))
}

fn same_group(x: &OrbitRep, y: &OrbitRep) -> Result<()> {
    if x.n() != y.n() || x.d() != y.d() {
        return Err(Error::Invalid(format!("{x} and {y} live in different groups")));
    }
    Ok(())
}

fn check_budget(count: u64, budget: u64) -> Result<()> {
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(())
}

/// `sigma_X(-Y) = conj(sigma_X(Y)) = sigma_{-X}(Y)`, exactly.
pub fn conjugate_identity(x: &OrbitRep, y_orbit: &OrbitRep) -> Result<IdentityReport> {
    same_group(x, y_orbit)?;
    let n = x.modulus();
    let y = y_orbit.entries();
    let at_neg = dot_counts(x, &neg_vec(y, n))?;
    let conj = dot_counts(x, y)?.reversed();
    let neg_x = dot_counts(&x.negate(), y)?;
    let mut rep = IdentityReport::new("conjugate", x.n(), x.d(), true).with_x(x).with_y(y);
    if at_neg != conj {
        rep.fail(Witness::counts(&at_neg, &conj));
    } else if conj != neg_x {
        rep.fail(Witness::counts(&conj, &neg_x));
    }
    Ok(rep)
}

/// `X = -X`, the condition under which `sigma_X` is real-valued.
pub fn real_valued_check(x: &OrbitRep) -> bool {
    x.negate() == *x
}

/// For self-conjugate `X`, confirms every value is real by checking that the
/// counts vector at every superclass is palindromic.
pub fn real_valued_report(x: &OrbitRep, budget: u64) -> Result<IdentityReport> {
    let symmetric = real_valued_check(x);
    let mut rep = IdentityReport::new("real_valued", x.n(), x.d(), true)
        .with_x(x)
        .with_detail(json!({ "self_conjugate": symmetric }));
    if !symmetric {
        return Ok(rep);
    }
    check_budget(orbit_count(x.modulus(), x.d())?, budget)?;
    for y in enumerate_orbits(x.modulus(), x.d())? {
        let c = dot_counts(x, y.entries())?;
        if !c.is_palindromic() {
            rep.y = Some(y.entries().to_vec());
            rep.fail(Witness::counts(&c, &c.reversed()));
            break;
        }
    }
    Ok(rep)
}

/// `sigma_{X+j1}(Y+k1) = e(([Y]j + [X]k + djk)/n) sigma_X(Y)`, exactly.
pub fn translation_identity(x: &OrbitRep, y_orbit: &OrbitRep, j: u64, k: u64) -> Result<IdentityReport> {
    same_group(x, y_orbit)?;
    let n = x.modulus();
    let d = x.d() as u64;
    let (j, k) = (j % n.get(), k % n.get());
    let y = y_orbit.entries();
    let y_shift: Vec<u64> = y.iter().map(|&v| n.add(v, k)).collect();
    let lhs = dot_counts(&x.shift(j as i64), &y_shift)?;
    let t0 = n.add(n.add(n.mul(y_orbit.orbit_sum(), j), n.mul(x.orbit_sum(), k)), n.mul(n.mul(d % n.get(), j), k));
    let rhs = dot_counts(x, y)?.shifted(t0);
    let mut rep = IdentityReport::new("translation", x.n(), x.d(), true).with_x(x).with_y(y);
    rep.j = Some(j);
    rep.k = Some(k);
    if lhs != rhs {
        rep.fail(Witness::counts(&lhs, &rhs));
    }
    Ok(rep)
}

/// Rotational order `n / gcd(n, [X])` of the image of `sigma_X`.
pub fn dihedral_order(x: &OrbitRep) -> u64 {
    x.n() / gcd(x.n() as i64, x.orbit_sum() as i64)
}

/// `sigma_X(y + l1) = e([X]l/n) sigma_X(y)` at the counts level.
pub fn dihedral_shift_check(x: &OrbitRep, y: &[u64], l: u64) -> Result<IdentityReport> {
    let n = x.modulus();
    let shifted: Vec<u64> = y.iter().map(|&v| n.add(v % n.get(), l % n.get())).collect();
    let lhs = dot_counts(x, &shifted)?;
    let rhs = dot_counts(x, y)?.shifted(n.mul(x.orbit_sum(), l % n.get()));
    let mut rep = IdentityReport::new("dihedral_shift", x.n(), x.d(), true).with_x(x).with_y(y);
    rep.j = Some(l % n.get());
    if lhs != rhs {
        rep.fail(Witness::counts(&lhs, &rhs));
    }
    Ok(rep)
}

/// Computes the dihedral order of `X`, checks the shift identity with `l = 1`
/// at every superclass, and checks that the image is closed under rotation by
/// `2 pi / order` within [`POINT_TOL`].
pub fn dihedral_closure(x: &OrbitRep, budget: u64) -> Result<IdentityReport> {
    let order = dihedral_order(x);
    let cloud = image(x, &ImageOptions { budget, ..Default::default() })?;
    let mut rep = IdentityReport::new("dihedral", x.n(), x.d(), false)
        .with_x(x)
        .with_detail(json!({ "order": order, "orbit_sum": x.orbit_sum(), "points": cloud.len() }));
    for y in enumerate_orbits(x.modulus(), x.d())? {
        let shift = dihedral_shift_check(x, y.entries(), 1)?;
        if !shift.passed {
            rep.y = shift.y;
            rep.fail(shift.witness.expect("failed report has a witness"));
            return Ok(rep);
        }
    }
    let misses = cloud.rotation_misses(2.0 * PI / order as f64, POINT_TOL);
    if !misses.is_empty() {
        rep.fail(Witness::points(&misses));
    }
    Ok(rep)
}

/// `(x, y, witness)` of a failed pair.
type Failure = (Vec<u64>, Vec<u64>, Witness);

/// The union over all `X` of the images of `sigma_X` has
/// `n / gcd(n, d)`-fold dihedral symmetry.
///
/// For every pair `(X, Y)` the congruence solver produces `(j, k)` with
/// `sigma_{X+j1}(Y+k1) = e(gcd(n,d)/n) sigma_X(Y)`; that witness is checked
/// exactly. The union point set is then checked for closure under the
/// rotation numerically.
pub fn full_union_symmetry(n: Modulus, d: usize, budget: u64) -> Result<(u64, IdentityReport)> {
    let count = orbit_count(n, d)?;
    check_budget(count.saturating_mul(count), budget)?;
    let step = gcd(n.get() as i64, d as i64);
    let order = n.get() / step;
    let orbits: Vec<OrbitRep> = enumerate_orbits(n, d)?.collect();
    let table = RootTable::<f64>::new(n);

    // per X: all values, plus the first failing witness if any
    let per_x: Vec<(Vec<Complex64>, Option<Failure>)> = orbits
        .par_iter()
        .map(|x| {
            let mut values = Vec::with_capacity(orbits.len());
            let mut failure = None;
            for y in &orbits {
                let base = dot_counts(x, y.entries()).expect("dimensions agree");
                values.push(base.to_complex(&table));
                if failure.is_some() {
                    continue;
                }
                let sol = solve_bilinear_congruence(y.orbit_sum() as i64, x.orbit_sum() as i64, d as i64, n);
                let y_shift: Vec<u64> = y.entries().iter().map(|&v| n.add(v, sol.k)).collect();
                let lhs = dot_counts(&x.shift(sol.j as i64), &y_shift).expect("dimensions agree");
                let rhs = base.shifted(step);
                if lhs != rhs {
                    failure = Some((x.entries().to_vec(), y.entries().to_vec(), Witness::counts(&lhs, &rhs)));
                }
            }
            (values, failure)
        })
        .collect();

    let mut rep = IdentityReport::new("full_union", n.get(), d, false);
    let mut values = Vec::new();
    for (v, failure) in per_x {
        values.extend(v);
        if let Some((x, y, w)) = failure {
            if rep.passed {
                rep.x = Some(x);
                rep.y = Some(y);
            }
            rep.fail(w);
        }
    }
    let union = PointCloud::from_values(n.get(), d, None, values, None);
    let misses = union.rotation_misses(2.0 * PI / order as f64, POINT_TOL);
    if !misses.is_empty() {
        rep.fail(Witness::points(&misses));
    }
    rep.detail = Some(json!({ "order": order, "points": union.len(), "orbits": count }));
    Ok((order, rep))
}

/// Every `r` with `r1 - X = X`, ascending.
pub fn spike_candidates(x: &OrbitRep) -> Vec<u64> {
    let neg = x.negate();
    (0..x.n()).filter(|&r| neg.shift(r as i64) == *x).collect()
}

/// Smallest `r` with `r1 - X = X`.
pub fn spike_detect(x: &OrbitRep) -> Option<u64> {
    spike_candidates(x).into_iter().next()
}

/// Number of rays `2n / gcd(r, n)` containing the image when `X = r1 - X`.
pub fn ray_count(n: u64, r: u64) -> u64 {
    2 * n / gcd(r as i64, n as i64)
}

/// Whether `z` lies within `tol` (in angle) of a ray `arg z = pi m g / n`;
/// values with `|z| < tol` count as being on every ray.
pub fn on_spike_ray(z: Complex64, n: u64, g: u64, tol: f64) -> bool {
    if z.norm() < tol {
        return true;
    }
    let spacing = PI * g as f64 / n as f64;
    let m = z.arg() / spacing;
    (m - m.round()).abs() * spacing <= tol
}

fn ray_index(z: Complex64, n: u64, g: u64) -> u64 {
    let rays = 2 * n / g;
    let spacing = PI * g as f64 / n as f64;
    ((z.arg() / spacing).round() as i64).rem_euclid(rays as i64) as u64
}

/// Checks `sigma_X(y) = e(r[y]/n) conj(sigma_X(y))` exactly and that the
/// value sits on one of the `2n / gcd(r, n)` rays.
pub fn spike_identity(x: &OrbitRep, r: u64, y_orbit: &OrbitRep) -> Result<IdentityReport> {
    same_group(x, y_orbit)?;
    let n = x.modulus();
    if x.negate().shift(r as i64) != *x {
        return Err(Error::HypothesisFailed(format!("{x} != {r}*1 - X mod {}", n.get())));
    }
    let y = y_orbit.entries();
    let c = dot_counts(x, y)?;
    let rhs = c.reversed().shifted(n.mul(r % n.get(), y_orbit.orbit_sum()));
    let mut rep = IdentityReport::new("spike", n.get(), x.d(), false).with_x(x).with_y(y);
    rep.r = Some(r % n.get());
    if c != rhs {
        rep.fail(Witness::counts(&c, &rhs));
        return Ok(rep);
    }
    let z = c.to_complex(&RootTable::<f64>::new(n));
    let g = gcd(r as i64, n.get() as i64);
    if !on_spike_ray(z, n.get(), g, POINT_TOL) {
        rep.fail(Witness::Values { lhs: [z.re, z.im], rhs: [z.arg(), PI * g as f64 / n.get() as f64] });
    }
    Ok(rep)
}

/// Runs [`spike_identity`] at every superclass and reports the ray count and
/// the largest modulus seen on each ray.
pub fn spike_sweep(x: &OrbitRep, budget: u64) -> Result<IdentityReport> {
    let candidates = spike_candidates(x);
    let Some(&r) = candidates.first() else {
        return Err(Error::HypothesisFailed(format!("no r with r*1 - X = X for {x}")));
    };
    check_budget(orbit_count(x.modulus(), x.d())?, budget)?;
    let n = x.n();
    let g = gcd(r as i64, n as i64);
    let rays = ray_count(n, r);
    let table = RootTable::<f64>::new(x.modulus());
    let mut ray_max = vec![0.0f64; rays as usize];
    let mut rep = IdentityReport::new("spike", n, x.d(), false).with_x(x);
    rep.r = Some(r);
    for y in enumerate_orbits(x.modulus(), x.d())? {
        let one = spike_identity(x, r, &y)?;
        if !one.passed {
            rep.y = one.y;
            rep.fail(one.witness.expect("failed report has a witness"));
            break;
        }
        let z = dot_counts(x, y.entries())?.to_complex(&table);
        if z.norm() >= POINT_TOL {
            let i = ray_index(z, n, g) as usize;
            ray_max[i] = ray_max[i].max(z.norm());
        }
    }
    rep.detail = Some(json!({ "r_all": candidates, "ray_count": rays, "ray_max_modulus": ray_max }));
    Ok(rep)
}

/// For `X = S_d(0, 1, ..., 1, 2)`: checks
/// `sigma_X(y) = e([y]/n) (|sum_j e(y_j/n)|^2 - d)` exactly (as the pair sum
/// over `j != k` of `[y] + y_j - y_k`) and numerically, and that the real
/// factor lies in `[-d, d^2 - d]`.
pub fn pair_difference_factorization(n: Modulus, d: usize, budget: u64) -> Result<IdentityReport> {
    if d < 2 {
        return Err(Error::Invalid("the pair-difference orbit needs d >= 2".into()));
    }
    let mut v = vec![1i64; d];
    v[0] = 0;
    v[d - 1] = 2;
    let x = OrbitRep::canonicalize(&v, n)?;
    check_budget(orbit_count(n, d)?, budget)?;
    let table = RootTable::<f64>::new(n);
    let df = d as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut rep = IdentityReport::new("pair_difference", n.get(), d, false).with_x(&x);
    for y_orbit in enumerate_orbits(n, d)? {
        let y = y_orbit.entries();
        let s = tuple_sum(y, n);
        let c = dot_counts(&x, y)?;
        let mut pair = CountsVector::zeros(n).counts().to_vec();
        for (a, &ya) in y.iter().enumerate() {
            for (b, &yb) in y.iter().enumerate() {
                if a != b {
                    pair[n.add(s, n.add(ya, n.neg(yb))) as usize] += 1;
                }
            }
        }
        let pair = CountsVector::new(n, pair)?;
        if c != pair {
            rep.y = Some(y.to_vec());
            rep.fail(Witness::counts(&c, &pair));
            break;
        }
        let walk: Complex64 = y.iter().map(|&t| table.e(t)).sum();
        let factor = walk.norm_sqr() - df;
        lo = lo.min(factor);
        hi = hi.max(factor);
        let predicted = table.e(s) * factor;
        let z = c.to_complex(&table);
        if (z - predicted).norm() > POINT_TOL || factor < -df - POINT_TOL || factor > df * df - df + POINT_TOL {
            rep.y = Some(y.to_vec());
            rep.fail(Witness::Values { lhs: [z.re, z.im], rhs: [predicted.re, predicted.im] });
            break;
        }
    }
    rep.detail = Some(json!({ "factor_min": lo, "factor_max": hi, "bound": [-df, df * df - df] }));
    Ok(rep)
}

/// Image of `S_d(0,...,0,a)` mod `n` equals the image of `S_d(0,...,0,1)`
/// mod `n / gcd(n, a)`, as point sets.
pub fn walk_reduction_check(n: Modulus, d: usize, a: i64, budget: u64) -> Result<IdentityReport> {
    let a_res = n.reduce(a);
    if a_res == 0 {
        return Err(Error::Invalid("walk step a must be nonzero mod n".into()));
    }
    let r = n.get() / gcd(n.get() as i64, a_res as i64);
    let mut v = vec![0i64; d];
    v[d - 1] = a_res as i64;
    let x = OrbitRep::canonicalize(&v, n)?;
    let small_n = Modulus::new(r as i64)?;
    v[d - 1] = 1;
    let x_small = OrbitRep::canonicalize(&v, small_n)?;
    let opts = ImageOptions { budget, ..Default::default() };
    let big = image(&x, &opts)?;
    let small = image(&x_small, &opts)?;
    let mut rep = IdentityReport::new("walk_reduction", n.get(), d, false)
        .with_x(&x)
        .with_detail(json!({ "reduced_modulus": r, "points": big.len(), "reduced_points": small.len() }));
    if !big.same_set_within(&small, POINT_TOL) {
        let idx = small.index(POINT_TOL);
        let missing: Vec<Complex64> = big.points().iter().copied().filter(|&z| !idx.contains(z)).collect();
        rep.fail(Witness::points(&missing));
    }
    Ok(rep)
}

fn all_pairs(n: Modulus, d: usize, per_pair: u64, budget: u64) -> Result<Vec<OrbitRep>> {
    let count = orbit_count(n, d)?;
    check_budget(count.saturating_mul(count).saturating_mul(per_pair), budget)?;
    Ok(enumerate_orbits(n, d)?.collect())
}

/// [`conjugate_identity`] over every pair of orbits.
pub fn conjugate_sweep(n: Modulus, d: usize, budget: u64) -> Result<Vec<IdentityReport>> {
    let orbits = all_pairs(n, d, 1, budget)?;
    orbits
        .par_iter()
        .map(|x| orbits.iter().map(|y| conjugate_identity(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// [`translation_identity`] over every pair of orbits and every `(j, k)`.
pub fn translation_sweep(n: Modulus, d: usize, budget: u64) -> Result<Vec<IdentityReport>> {
    let nn = n.get();
    let orbits = all_pairs(n, d, nn * nn, budget)?;
    orbits
        .par_iter()
        .map(|x| {
            let mut out = Vec::new();
            for y in &orbits {
                for j in 0..nn {
                    for k in 0..nn {
                        out.push(translation_identity(x, y, j, k)?);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// Superclass constancy of every `sigma_X` on every `Y`, one report per pair.
pub fn constancy_sweep(n: Modulus, d: usize, budget: u64) -> Result<Vec<IdentityReport>> {
    let orbits = all_pairs(n, d, 1, budget)?;
    orbits
        .par_iter()
        .map(|x| {
            orbits
                .iter()
                .map(|y| {
                    let mut rep = IdentityReport::new("constancy", n.get(), d, true).with_x(x).with_y(y.entries());
                    if !crate::eval::constancy_check(x, y)? {
                        rep.fail(Witness::Message { text: format!("sigma_{x} is not constant on {y}") });
                    }
                    Ok(rep)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// Exact counts vs. the permanent route at every pair of orbits, within `1e-9`.
pub fn permanent_sweep(n: Modulus, d: usize, budget: u64) -> Result<Vec<IdentityReport>> {
    let orbits = all_pairs(n, d, 1, budget)?;
    let table = RootTable::<f64>::new(n);
    orbits
        .par_iter()
        .map(|x| {
            orbits
                .iter()
                .map(|y| {
                    let a = dot_counts(x, y.entries())?.to_complex(&table);
                    let b: Complex64 = crate::eval::permanent_oracle(x, y.entries())?;
                    let mut rep = IdentityReport::new("permanent", n.get(), d, false).with_x(x).with_y(y.entries());
                    if (a - b).norm() > POINT_TOL {
                        rep.fail(Witness::Values { lhs: [a.re, a.im], rhs: [b.re, b.im] });
                    }
                    Ok(rep)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: i64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn rep(v: &[i64], n: i64) -> OrbitRep {
        OrbitRep::canonicalize(v, m(n)).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        let x = rep(&[0, 0, 1, 6], 14);
        for y in enumerate_orbits(m(14), 4).unwrap() {
            assert!(conjugate_identity(&x, &y).unwrap().passed);
        }
        let zero = OrbitRep::zero(m(14), 4).unwrap();
        let r = conjugate_identity(&x, &zero).unwrap();
        assert!(r.passed);
        assert_eq!(dot_counts(&x, zero.entries()).unwrap().counts()[0], 12);

        let x = rep(&[6, 6, 7, 7], 13);
        assert!(real_valued_check(&x));
        assert!(real_valued_report(&x, 1_000_000).unwrap().passed);
    }

    #[test]
    fn real_valued_examples() {
        assert!(real_valued_check(&rep(&[0, 1, 1, 6, 6], 7)));
        assert!(real_valued_report(&rep(&[0, 1, 1, 6, 6], 7), 1_000_000).unwrap().passed);
        assert!(real_valued_check(&OrbitRep::zero(m(5), 3).unwrap()));
        assert!(!real_valued_check(&rep(&[0, 0, 0, 1], 5)));
        // the walk image has a non-real endpoint
        let cloud = image(&rep(&[0, 0, 0, 1], 5), &ImageOptions::default()).unwrap();
        assert!(cloud.points().iter().any(|z| z.im.abs() > 1e-6));
    }

    #[test]
    fn translation_examples() {
        let x = rep(&[1, 1, 1, 12], 15);
        let y = rep(&[0, 3, 5, 9], 15);
        assert!(translation_identity(&x, &y, 0, 0).unwrap().passed);

        // fireball: j = 5, k = 4(l - [Y]) gives an index shift of 5l mod 15
        assert_eq!(x.orbit_sum(), 0);
        assert_eq!(x.shift(5).entries(), &[2, 6, 6, 6]);
        let n = m(15);
        for y in enumerate_orbits(n, 4).unwrap() {
            for l in 0..3u64 {
                let k = n.reduce(4 * (l as i64 - y.orbit_sum() as i64));
                assert!(translation_identity(&x, &y, 5, k).unwrap().passed);
                let y_shift: Vec<u64> = y.entries().iter().map(|&v| n.add(v, k)).collect();
                let lhs = dot_counts(&x.shift(5), &y_shift).unwrap();
                let rhs = dot_counts(&x, y.entries()).unwrap().shifted(5 * l);
                assert_eq!(lhs, rhs);
            }
        }

        // X = (0,1,1,n-2), n = 30: j = n/2, k = 0 multiplies by e([Y]/2)
        let x = rep(&[0, 1, 1, 28], 30);
        let n = m(30);
        for y in enumerate_orbits(n, 4).unwrap().step_by(7) {
            let lhs = dot_counts(&x.shift(15), y.entries()).unwrap();
            let rhs = dot_counts(&x, y.entries()).unwrap().shifted(15 * y.orbit_sum());
            assert_eq!(lhs, rhs);
            assert!(translation_identity(&x, &y, 15, 0).unwrap().passed);
        }
    }

    #[test]
    fn translation_failure_carries_witness() {
        // feed a wrong shift by hand: compare against the unshifted counts
        let x = rep(&[0, 1, 2], 5);
        let y = rep(&[1, 1, 2], 5);
        let lhs = dot_counts(&x.shift(1), y.entries()).unwrap();
        let rhs = dot_counts(&x, y.entries()).unwrap();
        assert_ne!(lhs, rhs);
        let mut r = IdentityReport::new("translation", 5, 3, true);
        r.fail(Witness::counts(&lhs, &rhs));
        assert!(!r.passed);
        assert!(r.to_json_line().contains("\"witness\""));
    }

    #[test]
    fn dihedral_examples() {
        assert_eq!(dihedral_order(&rep(&[0, 0, 0, 1, 5], 12)), 2);
        assert_eq!(dihedral_order(&rep(&[0, 0, 0, 0, 0], 12)), 1);
        let x = rep(&[0, 0, 0, 1, 1], 12);
        assert_eq!(x.orbit_sum(), 2);
        assert_eq!(dihedral_order(&x), 6);
        let r = dihedral_closure(&x, 1_000_000).unwrap();
        assert!(r.passed, "{}", r.to_json_line());
    }

    #[test]
    fn dihedral_order_depends_on_shifted_sum() {
        let n = m(12);
        for x in enumerate_orbits(n, 3).unwrap().step_by(5) {
            for j in 0..12 {
                let s = x.shift(j);
                let expected_sum = n.add(x.orbit_sum(), n.mul(3, j as u64));
                assert_eq!(s.orbit_sum(), expected_sum);
                assert_eq!(dihedral_order(&s), 12 / gcd(12, expected_sum as i64));
            }
        }
    }

    #[test]
    fn full_union_examples() {
        for (n, d, expected) in [(9, 3, 3), (3, 6, 1), (4, 6, 2), (6, 4, 3)] {
            let (order, r) = full_union_symmetry(m(n), d, 10_000_000).unwrap();
            assert_eq!(order, expected);
            assert!(r.passed, "{}", r.to_json_line());
        }
    }

    #[test]
    fn spike_examples() {
        assert_eq!(spike_detect(&rep(&[1, 2, 3], 17)), Some(4));
        assert_eq!(spike_detect(&rep(&[1, 1, 10, 10], 16)), Some(11));
        assert_eq!(spike_detect(&rep(&[0, 0, 0, 1], 5)), None);
        assert_eq!(ray_count(16, 11), 32);
        assert_eq!(ray_count(17, 4), 34);
        assert_eq!(ray_count(11, 2), 22);

        let x = rep(&[1, 1, 10, 10], 16);
        let zero = OrbitRep::zero(m(16), 4).unwrap();
        let r = spike_identity(&x, 11, &zero).unwrap();
        assert!(r.passed);
        assert!(matches!(spike_identity(&x, 3, &zero), Err(Error::HypothesisFailed(_))));

        let sweep = spike_sweep(&x, 1_000_000).unwrap();
        assert!(sweep.passed, "{}", sweep.to_json_line());
    }

    #[test]
    fn spike_sweep_reports_all_candidates() {
        // X = (0, n/2) is fixed by r = 0 and r = n/2
        let x = rep(&[0, 5], 10);
        assert_eq!(spike_candidates(&x), vec![0, 5]);
        let x = rep(&[0, 2, 4, 6], 8);
        assert_eq!(spike_candidates(&x), vec![0, 2, 4, 6]);
        let r = spike_sweep(&x, 1_000_000).unwrap();
        assert!(r.passed);
        assert_eq!(r.r, Some(0));
    }

    #[test]
    fn spike_rays_hold_for_random_symmetric_orbits() {
        for n in 3..=12i64 {
            for x in enumerate_orbits(m(n), 3).unwrap() {
                if spike_detect(&x).is_some() {
                    let r = spike_sweep(&x, 1_000_000).unwrap();
                    assert!(r.passed, "{}", r.to_json_line());
                }
            }
        }
    }

    #[test]
    fn pair_difference_examples() {
        let r = pair_difference_factorization(m(11), 4, 1_000_000).unwrap();
        assert!(r.passed, "{}", r.to_json_line());
        let x = rep(&[0, 1, 1, 2], 11);
        assert_eq!(spike_detect(&x), Some(2));
        assert!(spike_sweep(&x, 1_000_000).unwrap().passed);
        assert!(pair_difference_factorization(m(14), 4, 1_000_000).unwrap().passed);
        assert!(pair_difference_factorization(m(7), 1, 1_000_000).is_err());
    }

    #[test]
    fn walk_examples() {
        let r = walk_reduction_check(m(24), 3, 8, 1_000_000).unwrap();
        assert!(r.passed, "{}", r.to_json_line());
        assert_eq!(r.detail.as_ref().unwrap()["reduced_modulus"], 3);
        let r = walk_reduction_check(m(24), 3, 6, 1_000_000).unwrap();
        assert!(r.passed);
        assert_eq!(r.detail.as_ref().unwrap()["reduced_modulus"], 4);

        // unit step: same image as a = 1
        let a5 = image(&rep(&[0, 0, 5], 24), &ImageOptions::default()).unwrap();
        let a1 = image(&rep(&[0, 0, 1], 24), &ImageOptions::default()).unwrap();
        assert!(a5.same_set_within(&a1, POINT_TOL));
        assert!(walk_reduction_check(m(24), 3, 24, 1_000_000).is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        for (n, d) in [(3, 2), (4, 3), (5, 2)] {
            for r in conjugate_sweep(m(n), d, 10_000_000).unwrap() {
                assert!(r.passed);
            }
            for r in translation_sweep(m(n), d, 10_000_000).unwrap() {
                assert!(r.passed);
            }
            for r in permanent_sweep(m(n), d, 10_000_000).unwrap() {
                assert!(r.passed);
            }
        }
        assert!(matches!(translation_sweep(m(6), 4, 1000), Err(Error::BudgetExceeded { .. })));
    }
}
