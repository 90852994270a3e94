//! Batch front end: run verification suites, explain single checks, replay
//! mutation scripts, search the twisted Mukai lattice, and enumerate
//! Pfaffian geometry over small finite fields.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use fourfold::mukai::{self, BData};
use fourfold::pflab::{self, gen, FieldSpec, PflabError, SkewForm};
use fourfold::piclattice;
use fourfold::report::{self, Config};
use fourfold::scalar::FiniteField;
use fourfold::sodengine::{self, builtin, replay_script, Script};
use fourfold::with_finite_field;

#[derive(Parser)]
#[command(
    name = "fourfold",
    version,
    about = "Exact verification toolkit for derived-category computations on cubic fourfolds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite and report pass/fail per check.
    Verify {
        /// cohomology | mutations-plane | mutations-singular | mukai | pfaffian | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Search box radius for lattice searches.
        #[arg(long = "box", default_value_t = 25)]
        box_radius: i64,
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        ext: u32,
        #[arg(long, default_value_t = 20_608)]
        seed: u64,
        /// Enumeration ceiling.
        #[arg(long, default_value_t = pflab::DEFAULT_ENUM_BOUND)]
        bound: u64,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Treat undetermined results as passing.
        #[arg(long)]
        allow_undetermined: bool,
    },
    /// Run one check by id and print its claim and evidence.
    Explain {
        id: String,
        #[arg(long = "box", default_value_t = 25)]
        box_radius: i64,
        #[arg(long, default_value_t = 20_608)]
        seed: u64,
    },
    /// Replay a mutation script; exit 0 iff the final decomposition matches
    /// the declared target.
    Replay {
        /// Built-in case: plane | singular.
        #[arg(long, conflicts_with = "script")]
        case: Option<String>,
        /// Path to a script JSON {case?, start, target, steps}.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Write the trace as JSON lines here (defaults to stdout).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// List the built-in mutation scripts as JSON.
    Scripts,
    /// Print the built-in Picard models as JSON.
    Models,
    /// Twisted Mukai lattice operations.
    Mukai {
        #[command(subcommand)]
        cmd: MukaiCmd,
    },
    /// Pfaffian laboratory over exact fields.
    Pflab {
        #[command(subcommand)]
        cmd: PflabCmd,
    },
}

#[derive(Subcommand)]
enum MukaiCmd {
    /// Search a box for (v1, v2) with chi(v1,v2) = 1 and chi(v2,v2) = 0.
    Search {
        /// Fractional invariant Bh, e.g. 1/2.
        #[arg(long, default_value = "1/2")]
        bh: String,
        /// Fractional invariant B^2.
        #[arg(long, default_value = "1/2")]
        bsq: String,
        #[arg(long = "box", default_value_t = 25)]
        box_radius: i64,
        /// Use the untwisted comparison lattice instead.
        #[arg(long)]
        untwisted: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PflabCmd {
    /// Generate a seeded random basis of six skew forms and its Pfaffian
    /// cubic.
    Gen {
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count the points of the Grassmannian zero locus of a seeded basis
    /// over F_{q^ext}.
    XvCount {
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        ext: u32,
        #[arg(long, default_value_t = 20_608)]
        seed: u64,
        /// Enumeration ceiling (the incidence route visits |P^5| points).
        #[arg(long, default_value_t = 300_000_000)]
        bound: u64,
    },
    /// Enumerate the singular points of a cubic given as JSON.
    Sing {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = pflab::DEFAULT_ENUM_BOUND)]
        bound: u64,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify { suite, box_radius, q, ext, seed, bound, json, allow_undetermined } => {
            FieldSpec::finite(q, ext).map_err(|e| anyhow!(e))?;
            let config = Config { box_radius, q, ext, seed, bound };
            let started = Instant::now();
            let report = report::run_suite(&suite, &config)
                .ok_or_else(|| anyhow!("unknown suite `{suite}`; try one of {:?}", report::SUITES))?;
            let elapsed = started.elapsed().as_millis();
            for check in &report.checks {
                println!("{:12?} {}  — {}", check.status, check.id, check.claim);
            }
            let ok = report.all_passed(allow_undetermined);
            eprintln!(
                "suite {suite}: {}/{} checks passed in {elapsed} ms",
                report
                    .checks
                    .iter()
                    .filter(|c| matches!(c.status, report::CheckStatus::Pass))
                    .count(),
                report.checks.len()
            );
            if let Some(path) = json {
                fs::write(&path, serde_json::to_string_pretty(&report)?)
                    .with_context(|| format!("writing {}", path.display()))?;
                eprintln!("report written to {}", path.display());
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Explain { id, box_radius, seed } => {
            let config = Config { box_radius, seed, ..Config::default() };
            let text = report::explain(&id, &config).ok_or_else(|| {
                anyhow!("unknown check id `{id}`; known ids:\n  {}", report::check_ids().join("\n  "))
            })?;
            println!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Replay { case, script, trace } => {
            let (script, data): (Script, Option<builtin::CaseData>) = match (case, script) {
                (Some(name), None) => {
                    let data = builtin::case(&name)
                        .ok_or_else(|| anyhow!("unknown case `{name}`; try plane or singular"))?;
                    (data.script.clone(), Some(data))
                }
                (None, Some(path)) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    (serde_json::from_str(&text).context("parsing script JSON")?, None)
                }
                _ => bail!("pass exactly one of --case or --script"),
            };
            let geometry = sodengine::Geometry::by_name(&script.start.ambient)?;
            let facts = match &data {
                Some(d) => d.facts.clone(),
                None => match script.case.as_deref() {
                    Some(name) => builtin::case(name)
                        .map(|d| d.facts)
                        .unwrap_or_else(sodengine::FactBase::empty),
                    None => sodengine::FactBase::empty(),
                },
            };
            let replay = replay_script(&script, &geometry, &facts)?;
            let mut out: Box<dyn std::io::Write> = match trace {
                Some(path) => Box::new(
                    fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?,
                ),
                None => Box::new(std::io::stdout()),
            };
            for record in &replay.trace {
                writeln!(out, "{}", serde_json::to_string(record)?)?;
            }
            writeln!(out, "{}", serde_json::to_string(&replay.verdict)?)?;
            eprintln!(
                "replay: {} steps, verdict {}",
                replay.trace.len(),
                if replay.verdict.is_match() { "match" } else { "MISMATCH" }
            );
            Ok(if replay.verdict.is_match() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Scripts => {
            for name in [builtin::PLANE_CASE_NAME, builtin::SINGULAR_CASE_NAME] {
                let data = builtin::case(name).expect("builtin");
                println!("{}", serde_json::to_string_pretty(&data.script)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Models => {
            println!("{}", serde_json::to_string_pretty(&piclattice::builtin_models())?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Mukai { cmd } => match cmd {
            MukaiCmd::Search { bh, bsq, box_radius, untwisted, json } => {
                let lattice = if untwisted {
                    mukai::gram_untwisted()
                } else {
                    let bh = bh.parse().map_err(|e| anyhow!("parsing --bh: {e}"))?;
                    let bsq = bsq.parse().map_err(|e| anyhow!("parsing --bsq: {e}"))?;
                    mukai::gram_twisted(BData::new(bh, bsq).map_err(|e| anyhow!(e))?)
                };
                let started = Instant::now();
                let report = mukai::search_report(&lattice, box_radius).map_err(|e| anyhow!(e))?;
                eprintln!("search finished in {} ms", started.elapsed().as_millis());
                let text = serde_json::to_string_pretty(&report)?;
                match json {
                    Some(path) => fs::write(&path, text)
                        .with_context(|| format!("writing {}", path.display()))?,
                    None => println!("{text}"),
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Pflab { cmd } => match cmd {
            PflabCmd::Gen { q, seed, out } => {
                let field = FieldSpec::finite(q, 1).map_err(|e| anyhow!(e))?;
                let payload = pflab_gen(q, seed, field)?;
                let text = serde_json::to_string_pretty(&payload)?;
                match out {
                    Some(path) => fs::write(&path, text)
                        .with_context(|| format!("writing {}", path.display()))?,
                    None => println!("{text}"),
                }
                Ok(ExitCode::SUCCESS)
            }
            PflabCmd::XvCount { q, ext, seed, bound } => {
                let field = FieldSpec::finite(q, ext).map_err(|e| anyhow!(e))?;
                let payload = xv_count(q, ext, seed, bound, field)?;
                println!("{}", serde_json::to_string_pretty(&payload)?);
                Ok(ExitCode::SUCCESS)
            }
            PflabCmd::Sing { input, bound } => {
                let text = fs::read_to_string(&input)
                    .with_context(|| format!("reading {}", input.display()))?;
                let payload: serde_json::Value = serde_json::from_str(&text)?;
                let result = pflab_sing(&payload, bound)?;
                println!("{}", serde_json::to_string_pretty(&result)?);
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn pflab_gen(q: u64, seed: u64, field: FieldSpec) -> Result<serde_json::Value> {
    fn inner<F: FiniteField + pflab::poly::CoeffCodec>(
        seed: u64,
        field: FieldSpec,
    ) -> Result<serde_json::Value> {
        let basis = gen::random_skew_basis::<F>(seed);
        let cubic = pflab::pfaffian_cubic(&basis).map_err(|e| anyhow!(e))?;
        let upper: Vec<Vec<String>> = basis
            .iter()
            .map(|m| {
                pflab::upper_triangle_coords(m).iter().map(|c| c.encode()).collect()
            })
            .collect();
        Ok(serde_json::json!({
            "field": field,
            "seed": seed,
            "skew_basis_upper_triangles": upper,
            "cubic": cubic.poly().to_json(),
        }))
    }
    with_finite_field!(q, 1, inner::<F>(seed, field))
}

fn xv_count(q: u64, ext: u32, seed: u64, bound: u64, field: FieldSpec) -> Result<serde_json::Value> {
    // the basis is always drawn over the prime field from the seed, then
    // lifted, so counts over extensions describe the same variety
    fn count_over<F: FiniteField>(basis: &[SkewForm<F>; 6], bound: u64) -> Result<u64, PflabError> {
        let ambient = pflab::gaussian_binomial(F::ORDER, 6, 2);
        if ambient <= bound {
            Ok(pflab::xv_points_direct(basis, bound)?.len() as u64)
        } else {
            Ok(pflab::xv_points_incidence(basis, bound)?.len() as u64)
        }
    }
    macro_rules! run_prime {
        ($Q:literal) => {{
            let base = gen::random_skew_basis::<fourfold::scalar::Fp<$Q>>(seed);
            let count = match ext {
                1 => count_over(&base, bound).map_err(|e| anyhow!(e))?,
                2 => {
                    let lifted = gen::lift_skew_basis(&base);
                    count_over(&lifted, bound).map_err(|e| anyhow!(e))?
                }
                _ => bail!("extension degree {ext} unsupported"),
            };
            let order = field.order().expect("finite");
            Ok(serde_json::json!({
                "field": field,
                "seed": seed,
                "count": count,
                "ambient_grassmannian": pflab::gaussian_binomial(order, 6, 2),
                "surface_scale": (order * order) as f64,
                "note": "for a smooth surface zero locus the count grows like q^2 with bounded error terms",
            }))
        }};
    }
    match q {
        2 => run_prime!(2),
        3 => run_prime!(3),
        5 => run_prime!(5),
        7 => run_prime!(7),
        11 => run_prime!(11),
        13 => run_prime!(13),
        other => bail!("unsupported characteristic {other}"),
    }
}

fn pflab_sing(payload: &serde_json::Value, bound: u64) -> Result<serde_json::Value> {
    let field: FieldSpec = serde_json::from_value(
        payload.get("field").cloned().ok_or_else(|| anyhow!("missing `field`"))?,
    )?;
    let poly_json: pflab::PolyJson = serde_json::from_value(
        payload.get("cubic").cloned().ok_or_else(|| anyhow!("missing `cubic`"))?,
    )?;
    let (q, ext) = match field {
        FieldSpec::Finite { q, ext } => (q, ext),
        FieldSpec::Rational => bail!("singular-point enumeration needs a finite field"),
    };
    if ext != 1 {
        bail!("singular-point enumeration over extensions is not wired up; use ext = 1");
    }
    fn inner<F: FiniteField + pflab::poly::CoeffCodec>(
        poly_json: &pflab::PolyJson,
        bound: u64,
        field: FieldSpec,
    ) -> Result<serde_json::Value> {
        let poly = pflab::HomogPoly::<F>::from_json(poly_json).map_err(|e| anyhow!(e))?;
        let cubic = pflab::CubicForm::new(poly).map_err(|e| anyhow!(e))?;
        let sing = pflab::singular_points(&cubic, bound).map_err(|e| anyhow!(e))?;
        let rendered: Vec<Vec<String>> = sing
            .iter()
            .map(|p| p.iter().map(|c| c.encode()).collect())
            .collect();
        Ok(serde_json::json!({
            "field": field,
            "singular_point_count": sing.len(),
            "singular_points": rendered,
            "note": "lists rational singular points over this field only",
        }))
    }
    with_finite_field!(q, 1, inner::<F>(&poly_json, bound, field))
}
