//! Arithmetic in `Z/nZ` and the bilinear congruence solver behind the
//! full-union symmetry order.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A modulus `n >= 1`. Residues are `u64` values normalized to `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n as u64))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn reduce_wide(self, a: i128) -> u64 {
        a.rem_euclid(self.0 as i128) as u64
    }

    /// Symmetric lift of a residue into `(-n/2, n/2]`.
    #[inline]
    pub fn lift(self, r: u64) -> i64 {
        let r = r % self.0;
        if 2 * r > self.0 {
            r as i64 - self.0 as i64
        } else {
            r as i64
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        let a = a % self.0;
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn is_unit(self, a: i64) -> bool {
        gcd(a, self.0 as i64) == 1
    }
}

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> u64 {
    (a as i128).gcd(&(b as i128)) as u64
}

pub fn mod_inverse(a: i64, n: Modulus) -> Result<u64> {
    let m = n.get() as i128;
    let a = (a as i128).rem_euclid(m);
    let eg = a.extended_gcd(&m);
    if eg.gcd != 1 {
        return Err(Error::NotAUnit { a: a as u64, n: n.get() });
    }
    Ok(eg.x.rem_euclid(m) as u64)
}

/// Prime factorization by trial division, as `(p, exponent)` pairs in
/// increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Which route produced a [`CongruenceSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvePath {
    /// Prime-power case analysis glued together by the Chinese remainder theorem.
    Crt,
    /// Exhaustive search; returns the lexicographically smallest pair.
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruenceSolution {
    pub j: u64,
    pub k: u64,
    pub path: SolvePath,
}

/// Whether `a*j + b*k + d*j*k == target (mod n)`.
pub fn bilinear_holds(a: i64, b: i64, d: i64, target: i64, j: u64, k: u64, n: Modulus) -> bool {
    let lhs = a as i128 * j as i128 + b as i128 * k as i128 + d as i128 * j as i128 * k as i128;
    n.reduce_wide(lhs) == n.reduce(target)
}

/// Solves `a*j + b*k + d*j*k == gcd(n, d) (mod n)`.
///
/// Works one prime power `p^l` of `n` at a time: if one of `a`, `b`, `d` is a
/// unit mod `p^l` the solution is explicit; otherwise all three share a factor
/// `p^mu` which is divided out (the target is divisible by it too) and the
/// smaller congruence modulo `p^(l - mu)` is solved instead. The per-prime
/// solutions are combined by CRT. The right-hand side `gcd(n, d)` is always
/// reachable, so this never fails.
pub fn solve_bilinear_congruence(a: i64, b: i64, d: i64, n: Modulus) -> CongruenceSolution {
    let target = gcd(n.get() as i64, d) as i64;
    let (j, k) =
        solve_bilinear_crt(a, b, d, target, n).expect("the congruence is solvable for right-hand side gcd(n, d)");
    CongruenceSolution { j, k, path: SolvePath::Crt }
}

/// CRT route for an arbitrary right-hand side; `None` when some prime-power
/// component has no solution reachable by the case analysis.
pub fn solve_bilinear_crt(a: i64, b: i64, d: i64, target: i64, n: Modulus) -> Option<(u64, u64)> {
    let mut j_acc = (0u64, 1u64);
    let mut k_acc = (0u64, 1u64);
    for (p, ell) in factorize(n.get()) {
        let q = p.pow(ell);
        let m = Modulus(q);
        let (j, k) = solve_prime_power(m.reduce(a), m.reduce(b), m.reduce(d), m.reduce(target), p, ell)?;
        j_acc = crt_combine(j_acc, (j, q));
        k_acc = crt_combine(k_acc, (k, q));
    }
    Some((j_acc.0, k_acc.0))
}

fn valuation(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut x = x;
    while x.is_multiple_of(p) && v < cap {
        x /= p;
        v += 1;
    }
    v
}

fn solve_prime_power(a: u64, b: u64, d: u64, t: u64, p: u64, ell: u32) -> Option<(u64, u64)> {
    if ell == 0 {
        return Some((0, 0));
    }
    let q = Modulus(p.pow(ell));
    let inv = |x: u64| mod_inverse(x as i64, q).expect("p does not divide x");
    if t == 0 {
        return Some((0, 0));
    }
    if !a.is_multiple_of(p) {
        return Some((q.mul(inv(a), t), 0));
    }
    if !b.is_multiple_of(p) {
        return Some((0, q.mul(inv(b), t)));
    }
    if !d.is_multiple_of(p) {
        // b + d*j == 1, so the congruence collapses to a*j + k == t.
        let j = q.mul(inv(d), q.add(1, q.neg(b)));
        let k = q.add(t, q.neg(q.mul(a, j)));
        return Some((j, k));
    }
    let mu = valuation(a, p, ell).min(valuation(b, p, ell)).min(valuation(d, p, ell));
    if mu >= ell || valuation(t, p, ell) < mu {
        return None;
    }
    let s = p.pow(mu);
    solve_prime_power(a / s, b / s, d / s, t / s, p, ell - mu)
}

fn crt_combine((r1, m1): (u64, u64), (r2, m2): (u64, u64)) -> (u64, u64) {
    let m = m1 * m2;
    let mm2 = Modulus(m2);
    let diff = mm2.add(r2 % m2, mm2.neg(r1 % m2));
    let step = mm2.mul(diff, mod_inverse(m1 as i64, mm2).expect("coprime moduli"));
    ((r1 as u128 + m1 as u128 * step as u128) as u64 % m, m)
}

/// Exhaustive oracle: the lexicographically smallest `(j, k)` with
/// `a*j + b*k + d*j*k == gcd(n, d) (mod n)`.
pub fn solve_bilinear_brute(a: i64, b: i64, d: i64, n: Modulus) -> Option<CongruenceSolution> {
    let target = gcd(n.get() as i64, d) as i64;
    (0..n.get())
        .flat_map(|j| (0..n.get()).map(move |k| (j, k)))
        .find(|&(j, k)| bilinear_holds(a, b, d, target, j, k, n))
        .map(|(j, k)| CongruenceSolution { j, k, path: SolvePath::BruteForce })
}
