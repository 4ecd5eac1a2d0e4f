use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use symchar::asymptotic::{hypocycloid_orbit_check, orbit_matrix, row_reduce, torus_map};
use symchar::eval::{dot_counts, image, ImageOptions, RootTable};
use symchar::identities::{self as ids, IdentityReport};
use symchar::modring::{gcd, solve_bilinear_congruence};
use symchar::orbits::{enumerate_orbits, orbit_count};
use symchar::render::{export_points, format_sig12, render_bitmap, BitmapSpec, PointFormat};
use symchar::table::{build_table, build_unitary};
use symchar::{Complex64, Error, Modulus, OrbitRep, Result};

use crate::args::{Cli, Command, Identity, Listing, Points};

/// Environment variable naming the directory for relative output paths.
pub const OUT_DIR_VAR: &str = "SYMCHAR_OUT_DIR";

const SYMMETRY_TOL: f64 = 1e-9;
const UNITARITY_TOL: f64 = 1e-8;
const ORTHOGONALITY_TOL: f64 = 1e-6;

/// Runs one subcommand; `Ok(false)` means a check ran and failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let budget = cli.budget;
    match &cli.command {
        Command::Orbits { n, d, format } => orbits(*n, *d, *format, budget),
        Command::Eval { n, x, y } => eval(*n, x, y),
        Command::Image { n, x, full_group, output, format } => {
            let cloud = cloud(*n, x, *full_group, budget)?;
            let fmt = match format {
                Points::Csv => PointFormat::Csv,
                Points::Json => PointFormat::Json,
            };
            match output {
                Some(path) => {
                    let path = resolve_output(path);
                    let mut w = BufWriter::new(File::create(&path)?);
                    export_points(cloud.points(), fmt, &mut w)?;
                    w.flush()?;
                }
                None => export_points(cloud.points(), fmt, io::stdout().lock())?,
            }
            Ok(true)
        }
        Command::Render { n, x, range, unit_res, full_group, output } => {
            let spec = BitmapSpec::new(*range, *unit_res)?;
            let cloud = cloud(*n, x, *full_group, budget)?;
            let path = resolve_output(output);
            render_bitmap(cloud.points(), &spec).write_png(&path)?;
            println!("{}", json!({ "output": path, "points": cloud.len(), "size": spec.size() }));
            Ok(true)
        }
        Command::Verify { identity, n, d, x, a, failures_only } => {
            verify(*identity, *n, *d, x.as_deref(), *a, *failures_only, budget)
        }
        Command::Reduce { n, x, expect_b } => reduce(*n, x, expect_b.as_deref(), budget),
        Command::Table { n, d, check_unitary, output } => table(*n, *d, *check_unitary, output.as_deref(), budget),
        Command::Walk { n, d, a } => {
            let rep = ids::walk_reduction_check(Modulus::new(*n)?, *d, *a, budget)?;
            println!("{}", rep.to_json_line());
            Ok(rep.passed)
        }
        Command::Solve { a, b, d, n } => {
            let modulus = Modulus::new(*n)?;
            let sol = solve_bilinear_congruence(*a, *b, *d, modulus);
            let target = gcd(*n, *d);
            println!(
                "{}",
                json!({ "a": a, "b": b, "d": d, "n": n, "target": target, "j": sol.j, "k": sol.k, "path": sol.path })
            );
            Ok(true)
        }
    }
}

/// Relative paths land in `$SYMCHAR_OUT_DIR` when it is set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Canonicalizes, with a notice on stderr when the entries were reordered or reduced.
fn orbit(n: Modulus, entries: &[i64]) -> Result<OrbitRep> {
    let x = OrbitRep::canonicalize(entries, n)?;
    let given: Vec<i64> = entries.to_vec();
    let canon: Vec<i64> = x.entries().iter().map(|&v| v as i64).collect();
    if given != canon {
        eprintln!("{}", json!({ "notice": "canonicalized", "input": given, "orbit": canon }));
    }
    Ok(x)
}

fn complex_string(z: Complex64) -> String {
    let re = format_sig12(z.re);
    let im = format_sig12(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{re}{sign}{im}i")
}

fn orbits(n: i64, d: usize, format: Listing, budget: u64) -> Result<bool> {
    let n = Modulus::new(n)?;
    let count = orbit_count(n, d)?;
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let mut out = BufWriter::new(io::stdout().lock());
    for (rank, x) in enumerate_orbits(n, d)?.enumerate() {
        let size = x.orbit_size()?;
        match format {
            Listing::Text => writeln!(out, "{rank}\t{x}\t{size}")?,
            Listing::Json => writeln!(out, "{}", json!({ "rank": rank, "orbit": x.entries(), "size": size }))?,
        }
    }
    out.flush()?;
    Ok(true)
}

fn eval(n: i64, x: &[i64], y: &[i64]) -> Result<bool> {
    let n = Modulus::new(n)?;
    let x = orbit(n, x)?;
    let y: Vec<u64> = y.iter().map(|&v| n.reduce(v)).collect();
    let counts = dot_counts(&x, &y)?;
    let value = counts.to_complex(&RootTable::<f64>::new(n));
    println!("counts {}", serde_json::to_string(counts.counts())?);
    println!("value {}", complex_string(value));
    Ok(true)
}

fn cloud(n: i64, x: &[i64], full_group: bool, budget: u64) -> Result<symchar::PointCloud> {
    let n = Modulus::new(n)?;
    let x = orbit(n, x)?;
    image(&x, &ImageOptions { budget, full_group, ..Default::default() })
}

fn all_orbits(n: Modulus, d: usize, budget: u64) -> Result<Vec<OrbitRep>> {
    let count = orbit_count(n, d)?;
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(enumerate_orbits(n, d)?.collect())
}

fn verify(
    identity: Identity,
    n: i64,
    d: Option<usize>,
    x: Option<&[i64]>,
    a: Option<i64>,
    failures_only: bool,
    budget: u64,
) -> Result<bool> {
    let n = Modulus::new(n)?;
    let x = x.map(|v| orbit(n, v)).transpose()?;
    let d = match (d, &x) {
        (Some(d), Some(x)) if d != x.d() => return Err(Error::DimensionMismatch { expected: d, got: x.d() }),
        (Some(d), _) => d,
        (None, Some(x)) => x.d(),
        (None, None) => return Err(Error::Invalid("--d or --x is required".into())),
    };
    // single orbit if given, else every orbit
    let targets = || -> Result<Vec<OrbitRep>> {
        match &x {
            Some(x) => Ok(vec![x.clone()]),
            None => all_orbits(n, d, budget),
        }
    };
    let reports: Vec<IdentityReport> = match identity {
        Identity::Conjugate => ids::conjugate_sweep(n, d, budget)?,
        Identity::Translation => ids::translation_sweep(n, d, budget)?,
        Identity::Constancy => ids::constancy_sweep(n, d, budget)?,
        Identity::Permanent => ids::permanent_sweep(n, d, budget)?,
        Identity::Real => targets()?.par_iter().map(|x| ids::real_valued_report(x, budget)).collect::<Result<_>>()?,
        Identity::Dihedral => targets()?.par_iter().map(|x| ids::dihedral_closure(x, budget)).collect::<Result<_>>()?,
        Identity::Spike => match &x {
            Some(x) => vec![ids::spike_sweep(x, budget)?],
            None => targets()?
                .par_iter()
                .filter(|x| !ids::spike_candidates(x).is_empty())
                .map(|x| ids::spike_sweep(x, budget))
                .collect::<Result<_>>()?,
        },
        Identity::FullUnion => vec![ids::full_union_symmetry(n, d, budget)?.1],
        Identity::PairDifference => vec![ids::pair_difference_factorization(n, d, budget)?],
        Identity::Hypocycloid => vec![hypocycloid_orbit_check(n, d, budget)?],
        Identity::Walk => {
            let a = a.ok_or_else(|| Error::Invalid("walk needs --a".into()))?;
            vec![ids::walk_reduction_check(n, d, a, budget)?]
        }
    };
    let failed = reports.iter().filter(|r| !r.passed).count();
    let mut out = BufWriter::new(io::stdout().lock());
    for r in reports.iter().filter(|r| !failures_only || !r.passed) {
        writeln!(out, "{}", r.to_json_line())?;
    }
    writeln!(
        out,
        "{}",
        json!({ "summary": format!("{identity:?}").to_lowercase(), "n": n, "d": d, "checks": reports.len(), "failed": failed })
    )?;
    out.flush()?;
    Ok(failed == 0)
}

fn reduce(n: i64, x: &[i64], expect_b: Option<&Path>, budget: u64) -> Result<bool> {
    let n = Modulus::new(n)?;
    let x = orbit(n, x)?;
    let a = orbit_matrix(&x, budget)?;
    let expected: Option<Vec<Vec<i64>>> = match expect_b {
        Some(path) => Some(serde_json::from_reader(File::open(path)?)?),
        None => None,
    };
    let outcome = match row_reduce(&a.a) {
        Ok(outcome) => outcome,
        Err(Error::NoUnitPivot { remaining_rows, partial }) => {
            println!("{}", json!({ "orbit": x.entries(), "n": n, "complete": false, "certificate": partial }));
            return Err(Error::NoUnitPivot { remaining_rows, partial });
        }
        Err(err) => return Err(err),
    };
    let cert = outcome.certificate;
    let strict = expected.as_ref().map(|b| cert.matches_expected_b(b));
    println!(
        "{}",
        json!({
            "orbit": x.entries(),
            "n": n,
            "columns": a.columns(),
            "certificate": cert,
            "pivot_columns": outcome.pivot_columns,
            "exponents": torus_map(&cert),
            "matches_expected_b": strict,
        })
    );
    Ok(strict.unwrap_or(true))
}

fn table(n: i64, d: usize, check_unitary: bool, output: Option<&Path>, budget: u64) -> Result<bool> {
    let n = Modulus::new(n)?;
    let t = build_table(n, d, budget)?;
    if let Some(path) = output {
        let mut f = BufWriter::new(File::create(resolve_output(path))?);
        writeln!(f, "{}", t.to_json()?)?;
        f.flush()?;
    } else if !check_unitary {
        println!("{}", t.to_json()?);
    }
    if !check_unitary {
        return Ok(true);
    }
    let u = build_unitary(&t);
    let orth = t.second_orthogonality_residual();
    let passed =
        u.symmetry_residual <= SYMMETRY_TOL && u.unitarity_residual <= UNITARITY_TOL && orth <= ORTHOGONALITY_TOL;
    println!(
        "{}",
        json!({
            "n": n,
            "d": d,
            "size": u.size,
            "symmetry_residual": u.symmetry_residual,
            "unitarity_residual": u.unitarity_residual,
            "orthogonality_residual": orth,
            "passed": passed,
        })
    );
    Ok(passed)
}
