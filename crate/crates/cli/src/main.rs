//! Command-line frontend: JSON/CSV I/O over the attractor solvers, the
//! numerical oracles, and the verification suites, with deterministic seeds
//! and machine-readable run reports.
//!
//! Exit codes: 0 success, 2 malformed input, 3 no attractor for the given
//! charge, 4 verification-suite failure.

use attractor_core::amodel::{
    elliptic_a_potential, elliptic_charge_vector, quintic_a_potential, quintic_charge_vector,
    GWTable,
};
use attractor_core::constellation::{covering_radius, tau_set};
use attractor_core::even::{torus_a_potential, torus_pairing_volume};
use attractor_core::exs::{kahler_rigidity, solve_complex_exs, solve_kahler_exs, KappaSquare};
use attractor_core::json;
use attractor_core::mass::{
    central_charge, charge_norm, fd_gradient5, minimize_mass, SiegelChart,
};
use attractor_core::mat3::{Exact, Float, Mat3};
use attractor_core::period::{charge_from_period, clear_denominators};
use attractor_core::scalar::{QuadNumber, Rat};
use attractor_core::torus::{
    invariants, mirror_cover, residual, solve_complex_general, solve_complex_symmetric,
    solve_kahler, KahlerTorusCharge,
};
use attractor_core::verify::{run_suite, SUITES};
use attractor_core::Error as CoreError;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "attractor", version, about = "Attractor solvers and oracles")]
struct Cli {
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (falls back to ATTRACTOR_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Complex,
    Kahler,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    General,
    Symmetric,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the torus attractor equations for a charge file.
    SolveTorus {
        #[arg(long)]
        charge: PathBuf,
        #[arg(long, value_enum, default_value = "complex")]
        mode: Mode,
        /// Exact arithmetic in Q(sqrt(-D)) (default).
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Floating-point arithmetic with residual reporting.
        #[arg(long)]
        float: bool,
        #[arg(long, value_enum, default_value = "symmetric")]
        branch: BranchArg,
    },
    /// Reconstruct a charge from Picard-rank-9 period data and re-solve.
    InvertPicard9 {
        #[arg(long)]
        period: PathBuf,
    },
    /// Solve the E x S attractor for a sublattice or Mukai-vector pair.
    SolveExs {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, value_enum, default_value = "complex")]
        mode: Mode,
        #[arg(long)]
        vectors: PathBuf,
    },
    /// Test whether e^{B + i kappa} spans a rank-2 integral lattice.
    Rigidity {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        kappa: PathBuf,
    },
    /// Numerically minimize the mass over the Siegel upper half space.
    Minimize {
        #[arg(long)]
        charge: PathBuf,
        #[arg(long, default_value_t = 20)]
        starts: usize,
        #[arg(long, default_value_t = 600)]
        max_iter: usize,
    },
    /// Weil-Petersson / A-model potentials.
    #[command(subcommand)]
    Wp(WpFamily),
    /// Enumerate CM points tau_{u1,u2} up to a height bound.
    Constellation {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        height: i64,
        /// Bounding box a,b,c,d for the covering radius over [a,b] x [c,d].
        #[arg(long = "box")]
        bbox: Option<String>,
        #[arg(long, default_value_t = 16)]
        grid: usize,
        /// Keep only primitive pairs.
        #[arg(long)]
        primitive: bool,
        /// Write the point cloud here and print the run report instead.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a named invariant suite; exits 4 on any failure.
    Verify {
        #[arg(long)]
        suite: String,
    },
}

#[derive(Subcommand)]
enum WpFamily {
    /// Elliptic curve: K^A(tau) = -log(2 Im tau).
    Elliptic {
        /// Complex modulus, e.g. "0.5+2i".
        #[arg(long)]
        tau: String,
    },
    /// Quintic threefold, optionally with a Gromov-Witten table (CSV d,N_d).
    Quintic {
        #[arg(long)]
        tau: String,
        #[arg(long)]
        gw: Option<PathBuf>,
    },
    /// 6-torus: complexified Kahler form as {"re": M, "im": M} (rational).
    Torus {
        #[arg(long)]
        omega: PathBuf,
    },
}

/// Everything the report needs besides the outputs themselves.
struct RunContext {
    argv: Vec<String>,
    seed: u64,
    digest: Sha256,
    started: Instant,
}

impl RunContext {
    fn new(seed: u64) -> Self {
        RunContext {
            argv: std::env::args().collect(),
            seed,
            digest: Sha256::new(),
            started: Instant::now(),
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        self.digest.update(&bytes);
        Ok(bytes)
    }

    fn read_json(&mut self, path: &Path) -> Result<Value, CliError> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes)
            .map_err(|e| CliError::input(format!("invalid JSON in {}: {e}", path.display())))
    }

    fn report(self, outputs: Value, residuals: Value, suspect: bool) -> Value {
        json!({
            "command": self.argv,
            "inputs_digest": format!("{:x}", self.digest.finalize()),
            "seed": self.seed,
            "outputs": outputs,
            "residuals": residuals,
            "suspect": suspect,
            "timing_ms": self.started.elapsed().as_secs_f64() * 1e3,
        })
    }
}

struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn input(message: String) -> Self {
        CliError { message, code: 2 }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::NoAttractor(_) => 3,
            _ => 2,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn print_report(report: &Value) {
    let sorted = json::sort_keys(report);
    let text = if std::io::stdout().is_terminal() {
        serde_json::to_string_pretty(&sorted).unwrap()
    } else {
        serde_json::to_string(&sorted).unwrap()
    };
    println!("{text}");
}

fn kahler_to_float(k: &KahlerTorusCharge<Rat>) -> KahlerTorusCharge<f64> {
    let f = |x: &Rat| x.to_f64().unwrap_or(f64::NAN);
    KahlerTorusCharge {
        v0: f(&k.v0),
        v: k.v.map(f),
        u: k.u.map(f),
        u0: f(&k.u0),
    }
}

fn float_residual_value(r: &[f64; 4]) -> (Value, bool) {
    let suspect = r.iter().any(|x| x.abs() > 1e-9);
    (json!(r.to_vec()), suspect)
}

fn exact_residual_value(r: &[Rat; 4]) -> Value {
    Value::Array(r.iter().map(json::rat_to_value).collect())
}

fn solve_torus(
    mut ctx: RunContext,
    charge: &Path,
    mode: Mode,
    float: bool,
    branch: BranchArg,
) -> Result<(), CliError> {
    let value = ctx.read_json(charge)?;
    let (complex_charge, kahler_charge) = match mode {
        Mode::Complex => (json::charge_from_value(&value)?, None),
        Mode::Kahler => {
            if branch == BranchArg::General {
                return Err(CliError::input(
                    "the Kahler solve only has the symmetric branch".into(),
                ));
            }
            let k = json::kahler_charge_from_value(&value)?;
            (k.as_complex_charge(), Some(k))
        }
    };

    let mut outputs = serde_json::Map::new();
    let mut residuals = Vec::new();
    let mut suspect = false;
    if float {
        let chf = complex_charge.to_float();
        let solutions = match (mode, branch) {
            (Mode::Kahler, _) => {
                let k = kahler_to_float(kahler_charge.as_ref().unwrap());
                vec![solve_kahler::<Float>(&k)?.0]
            }
            (_, BranchArg::Symmetric) => vec![solve_complex_symmetric::<Float>(&chf)?.0],
            (_, BranchArg::General) => solve_complex_general::<Float>(&chf)?.to_vec(),
        };
        for sol in &solutions {
            let r = residual::<Float>(&chf, &sol.c, &sol.a);
            let (rv, s) = float_residual_value(&r);
            residuals.push(rv);
            suspect |= s;
        }
        outputs.insert(
            "solutions".into(),
            Value::Array(solutions.iter().map(json::float_solution_to_value).collect()),
        );
    } else {
        let solutions = match (mode, branch) {
            (Mode::Kahler, _) => {
                vec![solve_kahler::<Exact>(kahler_charge.as_ref().unwrap())?.0]
            }
            (_, BranchArg::Symmetric) => vec![solve_complex_symmetric::<Exact>(&complex_charge)?.0],
            (_, BranchArg::General) => solve_complex_general::<Exact>(&complex_charge)?.to_vec(),
        };
        for sol in &solutions {
            let r = residual::<Exact>(&complex_charge, &sol.c, &sol.a);
            residuals.push(exact_residual_value(&r));
        }
        outputs.insert(
            "solutions".into(),
            Value::Array(solutions.iter().map(json::exact_solution_to_value).collect()),
        );
        if let Some(k) = &kahler_charge {
            if let Ok(cover) = mirror_cover(k) {
                outputs.insert("mirror_cover".into(), json::mirror_cover_to_value(&cover));
            }
        }
    }
    outputs.insert(
        "invariants".into(),
        json::invariants_to_value(&invariants::<Exact>(&complex_charge)),
    );
    print_report(&ctx.report(Value::Object(outputs), Value::Array(residuals), suspect));
    Ok(())
}

fn invert_picard9(mut ctx: RunContext, period: &Path) -> Result<(), CliError> {
    let p = json::period_from_value(&ctx.read_json(period)?)?;
    let rational = charge_from_period(&p);
    let (multiplier, integral) = clear_denominators(&rational);
    let (sol, inv) = solve_complex_symmetric::<Exact>(&rational)?;
    let r = residual::<Exact>(&rational, &sol.c, &sol.a);
    let reproduced = sol.a == p.period_matrix();
    let outputs = json!({
        "charge": json::charge_to_value(&rational),
        "integral_charge": json::charge_to_value(&integral),
        "multiplier": multiplier.to_string(),
        "solution": json::exact_solution_to_value(&sol),
        "invariants": json::invariants_to_value(&inv),
        "period_reproduced": reproduced,
    });
    print_report(&ctx.report(outputs, json!([exact_residual_value(&r)]), !reproduced));
    Ok(())
}

fn solve_exs(
    mut ctx: RunContext,
    lattice: &Path,
    mode: Mode,
    vectors: &Path,
) -> Result<(), CliError> {
    let l = json::lattice_from_value(&ctx.read_json(lattice)?)?;
    let v = ctx.read_json(vectors)?;
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| CliError::input(format!("vectors file is missing \"{k}\"")))
    };
    match mode {
        Mode::Complex => {
            let u1 = json::int_vector_from_value(field("u1")?)?;
            let u2 = json::int_vector_from_value(field("u2")?)?;
            let sol = solve_complex_exs(&l, &u1, &u2)?;
            let isotropy = sol.self_pairing();
            let outputs = json!({
                "attractor": json::complex_exs_to_value(&sol),
                "hermitian_pairing": json::quad_to_value(&sol.hermitian_pairing()),
            });
            print_report(&ctx.report(outputs, json!([json::quad_to_value(&isotropy)]), false));
        }
        Mode::Kahler => {
            let v1 = json::mukai_from_value(field("v1")?)?;
            let v2 = json::mukai_from_value(field("v2")?)?;
            let sol = solve_kahler_exs(&l, &v1, &v2)?;
            let outputs = json!({
                "attractor": json::kahler_exs_to_value(&sol),
                "omega_s_square": json::quad_to_value(&sol.omega_s_square(&l)?),
                "im_omega_s_square": json::rat_to_value(&sol.im_omega_s_square(&l)?),
            });
            print_report(&ctx.report(outputs, json!([]), false));
        }
    }
    Ok(())
}

fn rigidity(mut ctx: RunContext, lattice: &Path, b: &Path, kappa: &Path) -> Result<(), CliError> {
    let ns = json::lattice_from_value(&ctx.read_json(lattice)?)?;
    let bv = ctx.read_json(b)?;
    let b_field = bv
        .get("B")
        .ok_or_else(|| CliError::input("B file is missing \"B\"".into()))?;
    let b_arr = b_field
        .as_array()
        .ok_or_else(|| CliError::input("\"B\" must be an array of rationals".into()))?;
    let b_vec = b_arr
        .iter()
        .map(json::rat_from_value)
        .collect::<Result<Vec<_>, _>>()?;
    let kv = ctx.read_json(kappa)?;
    let k2 = match kv.get("k2") {
        Some(Value::String(s)) if s == "irrational" => KappaSquare::Irrational,
        Some(other) => KappaSquare::Rational(json::rat_from_value(other)?),
        None => return Err(CliError::input("kappa file is missing \"k2\"".into())),
    };
    let h = json::int_vector_from_value(
        kv.get("H")
            .ok_or_else(|| CliError::input("kappa file is missing \"H\"".into()))?,
    )?;
    let outcome = kahler_rigidity(&ns, &b_vec, &k2, &h)?;
    let outputs = json!({ "rigidity": json::rigidity_to_value(&outcome) });
    print_report(&ctx.report(outputs, json!([]), false));
    Ok(())
}

fn minimize(
    mut ctx: RunContext,
    charge: &Path,
    starts: usize,
    max_iter: usize,
) -> Result<(), CliError> {
    let ch = json::charge_from_value(&ctx.read_json(charge)?)?;
    let seed = ctx.seed;
    let res = minimize_mass(&ch, starts, max_iter, seed)?;
    // first-order optimality of the scale-invariant objective at the result
    let raw = ch.to_float();
    let chf = raw.scale(&(1.0 / charge_norm(&raw)));
    let objective = |x: &[f64]| -> f64 {
        let t = SiegelChart(x.try_into().unwrap()).decode();
        let log_vol = 8.0f64.ln() + 2.0 * (x[6] + x[8] + x[11]);
        central_charge::<Float>(&chf, &t).norm_sqr().ln() - log_vol
    };
    let grad = fd_gradient5(&objective, &res.chart.0, 1e-4);
    let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    let outputs = json!({ "minimum": json::minimize_result_to_value(&res) });
    print_report(&ctx.report(outputs, json!([gnorm]), gnorm > 1e-9));
    Ok(())
}

fn wp(mut ctx: RunContext, family: &WpFamily) -> Result<(), CliError> {
    match family {
        WpFamily::Elliptic { tau } => {
            let tau = json::parse_complex(tau)?;
            let k = elliptic_a_potential(tau)?;
            let z = elliptic_charge_vector(tau);
            let outputs = json!({
                "potential": k,
                "charge_vector": z.iter().map(json::c64_to_value).collect::<Vec<_>>(),
            });
            print_report(&ctx.report(outputs, json!([]), false));
        }
        WpFamily::Quintic { tau, gw } => {
            let tau = json::parse_complex(tau)?;
            let table = match gw {
                Some(path) => {
                    let bytes = ctx.read(path)?;
                    let text = String::from_utf8(bytes)
                        .map_err(|_| CliError::input("GW table is not UTF-8".into()))?;
                    GWTable::from_csv(&text)?
                }
                None => GWTable::empty(),
            };
            let k = quintic_a_potential(tau, &table)?;
            let z = quintic_charge_vector(tau, &table);
            let outputs = json!({
                "potential": k,
                "charge_vector": z.iter().map(json::c64_to_value).collect::<Vec<_>>(),
                "gw_degrees": table.entries().len(),
            });
            print_report(&ctx.report(outputs, json!([]), false));
        }
        WpFamily::Torus { omega } => {
            let v = ctx.read_json(omega)?;
            let field = |k: &str| {
                v.get(k)
                    .ok_or_else(|| CliError::input(format!("omega file is missing \"{k}\"")))
            };
            let re = json::rat_mat_from_value(field("re")?)?;
            let im = json::rat_mat_from_value(field("im")?)?;
            let w: Mat3<QuadNumber> =
                Mat3::from_fn(|i, j| QuadNumber::new(re.e[i][j].clone(), im.e[i][j].clone(), 1));
            let k = torus_a_potential(&w)?;
            let vol = torus_pairing_volume(&w)?;
            let outputs = json!({
                "potential": k,
                "pairing_volume": json::rat_to_value(&vol),
            });
            print_report(&ctx.report(outputs, json!([]), false));
        }
    }
    Ok(())
}

fn parse_bbox(text: &str) -> Result<[f64; 4], CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::input(format!("cannot parse box {text:?}")))?;
    let arr: [f64; 4] = parts
        .try_into()
        .map_err(|_| CliError::input("box needs exactly four numbers a,b,c,d".into()))?;
    Ok(arr)
}

fn constellation(
    mut ctx: RunContext,
    lattice: &Path,
    height: i64,
    bbox: Option<&str>,
    grid: usize,
    primitive: bool,
    csv: Option<&Path>,
) -> Result<(), CliError> {
    let l = json::lattice_from_value(&ctx.read_json(lattice)?)?;
    let points = tau_set(&l, height, primitive)?;
    let radius = match bbox {
        Some(text) => Some(covering_radius(&points, parse_bbox(text)?, grid)?),
        None => None,
    };
    let mut cloud = String::from("re_tau,im_tau,u1,u2,D\n");
    for p in &points {
        let t = p.tau.to_c64();
        let join = |v: &[i64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        cloud.push_str(&format!(
            "{},{},{},{},{}\n",
            t.re,
            t.im,
            join(&p.u1),
            join(&p.u2),
            p.d
        ));
    }
    match csv {
        Some(path) => {
            std::fs::write(path, &cloud)
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            let outputs = json!({
                "csv": path.display().to_string(),
                "points": points.len(),
                "covering_radius": radius,
            });
            print_report(&ctx.report(outputs, json!([]), false));
        }
        None => {
            // point clouds go to stdout as bare CSV for piping
            std::io::stdout()
                .write_all(cloud.as_bytes())
                .map_err(|e| CliError::input(format!("cannot write point cloud: {e}")))?;
            if let Some(r) = radius {
                eprintln!("covering_radius: {r}");
            }
        }
    }
    Ok(())
}

fn verify(ctx: RunContext, suite: &str) -> Result<(), CliError> {
    let outcome = run_suite(suite, ctx.seed).map_err(|_| {
        CliError::input(format!("unknown suite {suite:?}; expected one of {SUITES:?}"))
    })?;
    let passed = outcome.passed();
    let outputs = json!({ "suite": json::suite_outcome_to_value(&outcome) });
    print_report(&ctx.report(outputs, json!([]), !passed));
    if passed {
        Ok(())
    } else {
        Err(CliError {
            message: format!("suite {suite} failed {} cases", outcome.failures.len()),
            code: 4,
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = cli.threads.or_else(|| {
        std::env::var("ATTRACTOR_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::input(format!("cannot configure {n} threads: {e}")))?;
    }
    let ctx = RunContext::new(cli.seed);
    match &cli.command {
        Command::SolveTorus {
            charge,
            mode,
            exact: _,
            float,
            branch,
        } => solve_torus(ctx, charge, *mode, *float, *branch),
        Command::InvertPicard9 { period } => invert_picard9(ctx, period),
        Command::SolveExs {
            lattice,
            mode,
            vectors,
        } => solve_exs(ctx, lattice, *mode, vectors),
        Command::Rigidity { lattice, b, kappa } => rigidity(ctx, lattice, b, kappa),
        Command::Minimize {
            charge,
            starts,
            max_iter,
        } => minimize(ctx, charge, *starts, *max_iter),
        Command::Wp(family) => wp(ctx, family),
        Command::Constellation {
            lattice,
            height,
            bbox,
            grid,
            primitive,
            csv,
        } => constellation(
            ctx,
            lattice,
            *height,
            bbox.as_deref(),
            *grid,
            *primitive,
            csv.as_deref(),
        ),
        Command::Verify { suite } => verify(ctx, suite),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
