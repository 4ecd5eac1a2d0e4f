//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symchar::asymptotic::{
    hypocycloid_orbit, hypocycloid_orbit_check, orbit_matrix, row_reduce_mod_n, sample_torus_map, torus_map,
    ExponentMatrix,
};
use symchar::eval::{constancy_check, image, permanent_oracle, supercharacter, ImageOptions};
use symchar::identities::{
    conjugate_sweep, dihedral_closure, dihedral_order, full_union_symmetry, on_spike_ray,
    pair_difference_factorization, ray_count, spike_detect, spike_sweep, translation_sweep, walk_reduction_check,
};
use symchar::modring::{bilinear_holds, gcd, solve_bilinear_brute, solve_bilinear_crt};
use symchar::orbits::enumerate_orbits;
use symchar::render::{render_bitmap, BitmapSpec, KERNEL};
use symchar::table::{build_table, build_unitary};
use symchar::{Complex64, Modulus, OrbitRep, POINT_TOL};

const BUDGET: u64 = 100_000_000;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn m(n: i64) -> Modulus {
    Modulus::new(n).unwrap()
}

fn rep(v: &[i64], n: i64) -> OrbitRep {
    OrbitRep::canonicalize(v, m(n)).unwrap()
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn ac1() -> Outcome {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for (n, d) in [(2, 2), (3, 2), (3, 3), (4, 3), (5, 2), (6, 2), (4, 4)] {
        let reports = e(conjugate_sweep(m(n), d, BUDGET))?.into_iter().chain(e(translation_sweep(m(n), d, BUDGET))?);
        for r in reports {
            checked += 1;
            if !r.passed {
                failures.push(r.to_json_line());
            }
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    Ok((failures.is_empty(), format!("{checked} exact checks, {} failures {first}", failures.len())))
}

fn ac2() -> Outcome {
    let mut pairs = 0usize;
    let mut bad = 0usize;
    for n in 1..=5 {
        for d in 1..=4 {
            let orbits: Vec<OrbitRep> = e(enumerate_orbits(m(n), d))?.collect();
            for x in &orbits {
                for y in &orbits {
                    pairs += 1;
                    bad += usize::from(!e(constancy_check(x, y))?);
                }
            }
        }
    }
    Ok((bad == 0, format!("{pairs} (X, Y) pairs, {bad} non-constant")))
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    let mut evals = 0usize;
    for n in 1..=7u64 {
        for d in 1..=4 {
            for x in e(enumerate_orbits(m(n as i64), d))? {
                for _ in 0..50 {
                    let y: Vec<u64> = (0..d).map(|_| rng.gen_range(0..n)).collect();
                    let a: Complex64 = e(supercharacter(&x, &y))?;
                    let b: Complex64 = e(permanent_oracle(&x, &y))?;
                    worst = worst.max((a - b).norm());
                    evals += 1;
                }
            }
        }
    }
    Ok((worst <= 1e-9, format!("{evals} random evaluations, max |difference| = {worst:.3e} (tol 1e-9)")))
}

fn ac4() -> Outcome {
    let mut ok = true;
    let mut orders = Vec::new();
    for a in [5, 7, 2, 1, 6, 10] {
        let x = rep(&[0, 0, 0, 1, a], 12);
        let order = dihedral_order(&x);
        let formula = 12 / gcd(12, 1 + a);
        let closure = e(dihedral_closure(&x, BUDGET))?;
        ok &= order == formula && closure.passed;
        orders.push(format!("a={a}:{order}"));
    }
    Ok((ok, format!("orders {} with rotational closure within 1e-9", orders.join(" "))))
}

fn ac5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, d, expected) in [(9, 3, 3u64), (3, 6, 1), (4, 6, 2)] {
        let (order, r) = e(full_union_symmetry(m(n), d, BUDGET))?;
        ok &= order == expected && r.passed;
        parts.push(format!("({n},{d})->{order}{}", if r.passed { "" } else { " not closed" }));
    }
    Ok((ok, parts.join(" ")))
}

fn ac6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (x, expected_r, expected_rays) in [(rep(&[1, 2, 3], 17), 4u64, 34u64), (rep(&[1, 1, 10, 10], 16), 11, 32)] {
        let n = x.n();
        let r = spike_detect(&x);
        let rays = r.map(|r| ray_count(n, r));
        let sweep = e(spike_sweep(&x, BUDGET))?;
        let cloud = e(image(&x, &ImageOptions { budget: BUDGET, ..Default::default() }))?;
        let g = gcd(expected_r as i64, n as i64);
        let off_ray = cloud.points().iter().filter(|&&z| !on_spike_ray(z, n, g, POINT_TOL)).count();
        ok &= r == Some(expected_r) && rays == Some(expected_rays) && sweep.passed && off_ray == 0;
        parts.push(format!("n={n}: r={r:?} rays={rays:?} off-ray={off_ray}"));
    }
    let pd = e(pair_difference_factorization(m(11), 4, BUDGET))?;
    let detail = pd.detail.clone().unwrap_or_default();
    let (lo, hi) =
        (detail["factor_min"].as_f64().unwrap_or(f64::NAN), detail["factor_max"].as_f64().unwrap_or(f64::NAN));
    ok &= pd.passed && lo >= -4.0 - POINT_TOL && hi <= 12.0 + POINT_TOL;
    parts.push(format!("factor range [{lo:.6}, {hi:.6}] in [-4, 12]"));
    Ok((ok, parts.join("; ")))
}

fn ac7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [19, 20, 23, 24] {
        let r = e(hypocycloid_orbit_check(m(n), 6, BUDGET))?;
        let detail = r.detail.clone().unwrap_or_default();
        ok &= r.passed;
        parts.push(format!(
            "n={n}: {} points, fill {:.3}{}",
            detail["points"],
            detail["fill_ratio"].as_f64().unwrap_or(0.0),
            if r.passed { "" } else { " OUTSIDE" }
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn ac8() -> Outcome {
    let a = e(orbit_matrix(&rep(&[1, 2, 44], 47), BUDGET))?;
    let cert = e(row_reduce_mod_n(&a))?;
    let valid = e(cert.verify(&a.a))?;
    let mut got: Vec<Vec<i64>> = torus_map(&cert).monomials();
    let mut expected = vec![vec![5, 0], vec![0, 5], vec![7, 3], vec![3, 7], vec![-8, -7], vec![-7, -8]];
    got.sort();
    expected.sort();
    let five_term = valid && cert.zero_rows == 1 && gcd(cert.det_r as i64, 47) == 1 && got == expected;

    let a = e(orbit_matrix(&rep(&[0, 1, 1, 15], 17), BUDGET))?;
    let four_term = e(row_reduce_mod_n(&a))?;
    let four_term_ok = e(four_term.verify(&a.a))? && four_term.zero_rows == 1;
    Ok((
        five_term && four_term_ok,
        format!(
            "S_3(1,2,44) mod 47: k={} det R={} exponents match={}; S_4(0,1,1,15) mod 17: k={} det R={} valid={}",
            cert.zero_rows,
            Modulus::new(47).unwrap().lift(cert.det_r),
            got == expected,
            four_term.zero_rows,
            Modulus::new(17).unwrap().lift(four_term.det_r),
            four_term_ok
        ),
    ))
}

fn ac9() -> Outcome {
    let sigma = e(image(&rep(&[1, 1, 5], 7), &ImageOptions::default()))?;
    let torus = e(sample_torus_map(&ExponentMatrix::hypocycloid(3, 7), 7, BUDGET))?;
    let same = sigma.same_set_within(&torus, POINT_TOL);
    Ok((same, format!("{} sigma points vs {} torus-map points, equal within 1e-9: {same}", sigma.len(), torus.len())))
}

fn ac10() -> Outcome {
    let r = e(walk_reduction_check(m(24), 3, 8, BUDGET))?;
    let detail = r.detail.clone().unwrap_or_default();
    Ok((
        r.passed,
        format!(
            "S_3(0,0,8) mod 24: {} points, S_3(0,0,1) mod {}: {} points",
            detail["points"], detail["reduced_modulus"], detail["reduced_points"]
        ),
    ))
}

fn ac11() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, d) in [(3, 2), (4, 3), (5, 3), (6, 2)] {
        let u = build_unitary(&e(build_table(m(n), d, BUDGET))?);
        ok &= u.symmetry_residual <= 1e-9 && u.unitarity_residual <= 1e-8;
        parts.push(format!("({n},{d}) N={} sym {:.1e} unit {:.1e}", u.size, u.symmetry_residual, u.unitarity_residual));
    }
    Ok((ok, parts.join("; ")))
}

fn ac12() -> Outcome {
    let mut cases = 0usize;
    let mut bad = Vec::new();
    for n in 1..=24i64 {
        let modulus = m(n);
        for d in 1..=8i64 {
            let target = gcd(n, d) as i64;
            for a in 0..n {
                for b in 0..n {
                    cases += 1;
                    let crt = solve_bilinear_crt(a, b, d, target, modulus);
                    let brute = solve_bilinear_brute(a, b, d, modulus);
                    let ok = match crt {
                        Some((j, k)) => bilinear_holds(a, b, d, target, j, k, modulus) && brute.is_some(),
                        None => false,
                    };
                    if !ok {
                        bad.push((n, d, a, b));
                    }
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} cases, {} failures {:?}", bad.len(), bad.first())))
}

fn ac13() -> Outcome {
    let cloud = e(image(&e(hypocycloid_orbit(m(19), 6))?, &ImageOptions { budget: BUDGET, ..Default::default() }))?;
    let spec = e(BitmapSpec::new(7.0, 30))?;
    let render_with = |threads: usize| -> Result<Vec<u8>, String> {
        let pool = e(rayon::ThreadPoolBuilder::new().num_threads(threads).build())?;
        e(pool.install(|| render_bitmap(cloud.points(), &spec).encode_png()))
    };
    let one = render_with(1)?;
    let one_again = render_with(1)?;
    let eight = render_with(8)?;
    let img = render_bitmap(cloud.points(), &spec);
    let mut levels: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in img.values() {
        *levels.entry((v * 100.0).round() as u64).or_default() += 1;
    }
    let levels_ok = levels.keys().all(|k| [0, 25, 70, 100].contains(k));
    let kernel_ok = KERNEL == [[0.3, 0.75, 0.3], [0.75, 1.0, 0.75], [0.3, 0.75, 0.3]];
    // 1-based guard 1 < r < 2 res: r = 1 and r = 2 res dropped, r = 2 and r = 2 res - 1 kept
    let res = spec.res() as f64;
    let guard_ok = spec.pixel_of(Complex64::new(0.0, (res - 1.0) / 30.0)).is_none()
        && spec.pixel_of(Complex64::new(0.0, (res - 2.0) / 30.0)).is_some()
        && spec.pixel_of(Complex64::new(0.0, -res / 30.0)).is_none()
        && spec.pixel_of(Complex64::new(0.0, -(res - 1.0) / 30.0)).is_some();
    let same = one == one_again && one == eight;
    Ok((
        same && levels_ok && kernel_ok && guard_ok && img.size() == 420,
        format!(
            "{} points, {}x{} PNG of {} bytes, identical at 1 and 8 threads: {same}, levels {:?}, guard ok: {guard_ok}",
            cloud.len(),
            img.size(),
            img.size(),
            one.len(),
            levels.keys().map(|k| *k as f64 / 100.0).collect::<Vec<_>>()
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("exact conjugate and translation identities", ac1),
        ("superclass constancy", ac2),
        ("permanent oracle", ac3),
        ("dihedral orders for S_5(0,0,0,1,a) mod 12", ac4),
        ("full-union rotational symmetry", ac5),
        ("spikes and pair-difference factorization", ac6),
        ("hypocycloid containment", ac7),
        ("orbit matrix row reduction", ac8),
        ("hypocycloid image equals torus map", ac9),
        ("walk reduction", ac10),
        ("unitary supercharacter table", ac11),
        ("bilinear congruence solver", ac12),
        ("renderer determinism", ac13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, msg) = run().unwrap_or_else(|err| (false, format!("error: {err}")));
        let secs = start.elapsed().as_secs_f64();
        println!("[{}] AC-{} {name}: {msg} ({secs:.2}s)", if pass { "PASS" } else { "FAIL" }, i + 1);
        failed += usize::from(!pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
