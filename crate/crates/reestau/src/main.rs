use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};

use reestau::algfile::load_alg;
use reestau::diffsat::{diff_saturate, rel_diff_saturate};
use reestau::elim::{
    elimination_algebra, tau_drop_check, verify_local_presentation, DropMode, ElimBounds,
    ElimRoute,
};
use reestau::poly::Order;
use reestau::suites::{builtin_suite, load_suite, run_criterion, tau_report, SuiteMember};
use reestau::tangent::tau;
use reestau::{Error, FieldSpec, ReesAlgebra, Result, Scalar};

#[derive(Parser)]
#[command(
    name = "reestau",
    about = "Rees algebras, differential saturation, tau-invariants, and elimination",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Absolute,
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Universal,
    #[value(name = "z-free")]
    ZFree,
}

impl From<RouteArg> for ElimRoute {
    fn from(r: RouteArg) -> ElimRoute {
        match r {
            RouteArg::Universal => ElimRoute::Universal,
            RouteArg::ZFree => ElimRoute::ZFree,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Test or enumerate the singular locus of the algebra.
    Sing {
        input: PathBuf,
        /// Test a single rational point c1,c2,... instead of enumerating.
        #[arg(long)]
        point: Option<String>,
    },
    /// Print the differentially saturated algebra in file format.
    Saturate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Absolute)]
        mode: ModeArg,
    },
    /// Compute the tau-invariant at the origin (or a given point).
    Tau {
        input: PathBuf,
        /// Translate this point to the origin first.
        #[arg(long)]
        point: Option<String>,
        /// Print only the tau value.
        #[arg(long)]
        quiet: bool,
    },
    /// Saturate, eliminate the distinguished variable, and check the
    /// tau drop.
    Eliminate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Universal)]
        route: RouteArg,
        /// Saturation applied before eliminating.
        #[arg(long, value_enum, default_value_t = ModeArg::Absolute)]
        mode: ModeArg,
        /// Weight bound for the z-free route.
        #[arg(long)]
        weight_bound: Option<u32>,
        /// Total-degree bound on candidates for the z-free route.
        #[arg(long)]
        degree_bound: Option<u32>,
        /// Also run the desk-scale local-presentation check with this
        /// radical-membership bound.
        #[arg(long)]
        kmax: Option<u32>,
        /// Print only the eliminated tau value.
        #[arg(long)]
        quiet: bool,
    },
    /// Run the acceptance suites and print a pass/fail table.
    Verify {
        /// Directory of .alg suite members (defaults to the built-in
        /// suite).
        suite_dir: Option<PathBuf>,
        /// Run a single criterion by index instead of all of them.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

fn parse_point(spec: &str, field: FieldSpec, expected: usize) -> Result<Vec<Scalar>> {
    let coords: Vec<Scalar> = spec
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map(|v| field.from_i64(v))
                .map_err(|_| Error::Precondition(format!("invalid coordinate `{c}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: coords.len() });
    }
    Ok(coords)
}

fn point_label(point: &[Scalar]) -> String {
    let coords: Vec<String> = point.iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(","))
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Sing { input, point } => {
            let file = load_alg(input)?;
            let g = &file.algebra;
            match point {
                Some(spec) => {
                    let pt = parse_point(&spec, g.ring().field(), g.ring().num_vars())?;
                    let inside = g.in_sing_locus(&pt)?;
                    println!("point {} in Sing: {inside}", point_label(&pt));
                }
                None => {
                    let points = g.enumerate_sing()?;
                    println!("Sing over {}: {} point(s)", g.ring().describe(), points.len());
                    for pt in points {
                        println!("  {}", point_label(&pt));
                    }
                }
            }
            Ok(0)
        }
        Cmd::Saturate { input, mode } => {
            let file = load_alg(input)?;
            let sat = match mode {
                ModeArg::Absolute => diff_saturate(&file.algebra),
                ModeArg::Relative => rel_diff_saturate(&file.algebra)?,
            };
            print!("{}", algebra_as_file(&sat));
            Ok(0)
        }
        Cmd::Tau { input, point, quiet } => {
            let file = load_alg(input)?;
            let g = match point {
                Some(spec) => {
                    let pt = parse_point(&spec, file.ring.field(), file.ring.num_vars())?;
                    translate_algebra(&file.algebra, &pt)?
                }
                None => file.algebra,
            };
            if quiet {
                println!("{}", tau(&g)?);
            } else {
                print!("{}", tau_report(&g)?);
            }
            Ok(0)
        }
        Cmd::Eliminate { input, route, mode, weight_bound, degree_bound, kmax, quiet } => {
            let file = load_alg(input)?;
            let (g, drop_mode) = match mode {
                ModeArg::Absolute => (diff_saturate(&file.algebra), DropMode::Absolute),
                ModeArg::Relative => {
                    (rel_diff_saturate(&file.algebra)?, DropMode::RelativeOnly)
                }
            };
            let route: ElimRoute = route.into();
            let bounds = ElimBounds { weight_bound, degree_bound };
            let elim = elimination_algebra(&g, route, bounds)?;
            let drop = tau_drop_check(&g, drop_mode, Some(route))?;
            if quiet {
                println!("{}", drop.tau_r);
            } else {
                println!("route: {}", route.label());
                println!("saturation: {}", g.saturation().label());
                println!("R generators:");
                if elim.algebra.gens().is_empty() {
                    println!("  (none)");
                }
                for w in elim.algebra.gens() {
                    println!("  {} W^{}", w.poly, w.weight);
                }
                println!("tau_G = {}", drop.tau_g);
                println!("tau_R = {}", drop.tau_r);
                let relation = match drop_mode {
                    DropMode::Absolute => "tau_R = tau_G - 1",
                    DropMode::RelativeOnly => "tau_R <= tau_G - 1",
                };
                if drop.holds {
                    println!("verdict: tau-drop holds ({}: {relation})", drop_mode.label());
                } else {
                    println!("verdict: tau-drop VIOLATED (expected {relation})");
                }
                if let Some(k_max) = kmax {
                    match monic_presentation_elem(&g) {
                        Some(f) => {
                            let rep = verify_local_presentation(&g, &f, k_max)?;
                            println!(
                                "local presentation: {} (tau {} vs {})",
                                rep.verdict.label(),
                                rep.tau_source,
                                rep.tau_presented
                            );
                        }
                        None => println!(
                            "local presentation: skipped (no generator of order equal to its weight, monic in z)"
                        ),
                    }
                }
            }
            Ok(if drop.holds { 0 } else { 1 })
        }
        Cmd::Verify { suite_dir, criterion } => {
            let suite = match suite_dir {
                Some(dir) => load_suite(dir)?,
                None => builtin_suite(),
            };
            if let Some(index) = criterion {
                let res = run_criterion(index, &suite)?;
                println!("{}", res.line());
                return Ok(if res.passed { 0 } else { 1 });
            }
            let results = run_all_criteria(&suite);
            let mut all_pass = true;
            for r in &results {
                match r {
                    Ok(res) => {
                        println!("{}", res.line());
                        all_pass &= res.passed;
                    }
                    Err(e) => {
                        println!("FAIL (error) {e}");
                        all_pass = false;
                    }
                }
            }
            let passed = results
                .iter()
                .filter(|r| r.as_ref().map(|res| res.passed).unwrap_or(false))
                .count();
            println!("{} of {} criteria passed", passed, results.len());
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

/// Runs all criteria, in parallel when REES_TAU_THREADS allows, and
/// returns the results in criterion order.
fn run_all_criteria(suite: &[SuiteMember]) -> Vec<Result<reestau::suites::CriterionResult>> {
    let indices: Vec<usize> = reestau::suites::criteria().iter().map(|(i, _)| *i).collect();
    let threads = std::env::var("REES_TAU_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        })
        .min(indices.len());
    let jobs = Mutex::new(indices.clone().into_iter());
    let results: Mutex<Vec<(usize, Result<reestau::suites::CriterionResult>)>> =
        Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let next = jobs.lock().unwrap().next();
                let Some(index) = next else { break };
                let res = run_criterion(index, suite);
                results.lock().unwrap().push((index, res));
            });
        }
    });
    let mut collected = results.into_inner().unwrap();
    collected.sort_by_key(|(i, _)| *i);
    collected.into_iter().map(|(_, r)| r).collect()
}

/// Serializes an algebra back into the .alg file format.
fn algebra_as_file(g: &ReesAlgebra) -> String {
    let ring = g.ring();
    let mut out = String::new();
    let field = match ring.field() {
        FieldSpec::Rational => "Q".to_string(),
        FieldSpec::Prime(p) => format!("F{p}"),
    };
    out.push_str(&format!("field {field}\n"));
    out.push_str(&format!("vars {}\n", ring.vars().join(",")));
    if let Some(z) = ring.z_index() {
        out.push_str(&format!("z-var {}\n", ring.vars()[z]));
    }
    out.push_str(&format!("# saturation: {}\n", g.saturation().label()));
    for w in g.gens() {
        out.push_str(&format!("gen {} {}\n", w.weight, w.poly));
    }
    out
}

fn translate_algebra(g: &ReesAlgebra, point: &[Scalar]) -> Result<ReesAlgebra> {
    let gens = g
        .gens()
        .iter()
        .map(|w| w.poly.translate(point).map(|p| (p, w.weight)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReesAlgebra::new(g.ring(), gens)?.with_saturation(g.saturation()))
}

/// Picks a generator suitable for the local-presentation check: monic
/// in the distinguished variable with order equal to its weight.
fn monic_presentation_elem(g: &ReesAlgebra) -> Option<reestau::WeightedElem> {
    let z = g.ring().z_index()?;
    g.gens()
        .iter()
        .find(|w| {
            w.poly.degree_in(z) == Some(w.weight)
                && w.poly.order_at_origin() == Order::Finite(w.weight)
                && w.poly.coeffs_in(z)[w.weight as usize].total_degree() == Order::Finite(0)
        })
        .cloned()
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
