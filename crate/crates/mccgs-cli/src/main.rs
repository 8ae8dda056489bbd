//! Command-line front end: problem-file parsing, pipeline execution, output
//! rendering, and a per-point validation oracle.
//!
//! Exit codes: 0 success, 1 usage or problem-file error, 2 oracle failure
//! (a basis disagreed with a directly computed one), 3 internal invariant
//! violation (non-termination guard, malformed tree, or a membership count
//! other than one).

mod problem;
mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mccgs::{minimal_system, oracle_check, sample_segment, CanonicalSystem, Factorizer};

use problem::Problem;

const USAGE_ERROR: u8 = 1;
const ORACLE_FAILURE: u8 = 2;
const INVARIANT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mccgs",
    version,
    about = "Minimal canonical comprehensive Groebner systems for parametric ideals",
    after_help = "Problem files are JSON: {\"vars\":[..],\"params\":[..],\"order_x\":\"lex|grevlex\",\
\n\"order_a\":\"lex|grevlex\",\"polys\":[..],\"null\":[..],\"notnull\":[..],\"options\":{..}}.\
\nOptions in the file (\"max-factor-degree\", \"oracle-samples\", \"seed\") are overridden by\
\nthe environment (MCCGS_MAX_FACTOR_DEGREE, MCCGS_SAMPLES, MCCGS_SEED), which is in turn\
\noverridden by the flags. Exit codes: 0 success, 1 usage or problem-file error, 2 oracle\
\nfailure, 3 internal invariant violation."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the minimal canonical system and render it
    Solve {
        /// Problem file; "-" or omitted reads standard input
        input: Option<PathBuf>,
        /// Output form
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Factorization effort ceiling (1..=64); larger searches harder
        #[arg(long)]
        max_factor_degree: Option<u32>,
        /// Recorded for reproducibility; solving itself is deterministic
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the system against direct per-point computations
    Oracle {
        /// Problem file; "-" or omitted reads standard input
        input: Option<PathBuf>,
        /// Number of random parameter points to test
        #[arg(long)]
        samples: Option<u64>,
        /// Random seed for the sample points
        #[arg(long)]
        seed: Option<u64>,
        /// Factorization effort ceiling (1..=64); larger searches harder
        #[arg(long)]
        max_factor_degree: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE_ERROR,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.cmd {
        Cmd::Solve { input, format, max_factor_degree, seed } => {
            run_solve(input, format, max_factor_degree, seed)
        }
        Cmd::Oracle { input, samples, seed, max_factor_degree } => {
            run_oracle(input, samples, seed, max_factor_degree)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type Failure = (u8, String);

fn read_input(input: &Option<PathBuf>) -> Result<String, Failure> {
    match input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| (USAGE_ERROR, format!("{}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| (USAGE_ERROR, format!("stdin: {e}")))?;
            Ok(text)
        }
    }
}

/// Flag, then environment, then problem-file option, then default.
fn resolve(
    flag: Option<u64>,
    env_name: &str,
    file: Option<u64>,
    default: u64,
) -> Result<u64, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Ok(s) = std::env::var(env_name) {
        return s
            .parse()
            .map_err(|_| (USAGE_ERROR, format!("{env_name}: \"{s}\" is not a nonnegative integer")));
    }
    Ok(file.unwrap_or(default))
}

fn factorizer_for(degree: u64) -> Result<Factorizer, Failure> {
    if !(1..=64).contains(&degree) {
        return Err((USAGE_ERROR, format!("max factor degree {degree} is out of range 1..=64")));
    }
    let candidates = 25_000usize.saturating_mul(degree as usize);
    let cap = 1u64 << degree.min(20).saturating_mul(2).min(40);
    Ok(Factorizer::with_budget(candidates, cap))
}

fn build_system(
    p: &Problem,
    max_factor_degree: Option<u32>,
) -> Result<(CanonicalSystem, Factorizer), Failure> {
    let degree = resolve(
        max_factor_degree.map(u64::from),
        "MCCGS_MAX_FACTOR_DEGREE",
        p.options.max_factor_degree.map(u64::from),
        8,
    )?;
    let mut fz = factorizer_for(degree)?;
    let system = minimal_system(
        &p.space, &p.order, &p.order_a, &p.polys, &p.null, &p.notnull, &mut fz,
    )
    .map_err(|e| (INVARIANT_VIOLATION, e))?;
    for g in &system.groups {
        g.tree
            .validate()
            .map_err(|e| (INVARIANT_VIOLATION, format!("malformed segment tree: {e}")))?;
    }
    Ok((system, fz))
}

fn run_solve(
    input: Option<PathBuf>,
    format: Format,
    max_factor_degree: Option<u32>,
    _seed: Option<u64>,
) -> Result<(), Failure> {
    let text = read_input(&input)?;
    let p = problem::parse_problem(&text).map_err(|e| (USAGE_ERROR, e))?;
    let (system, _) = build_system(&p, max_factor_degree)?;
    let rendered = match format {
        Format::Text => render::text(&system, &p),
        Format::Json => render::json(&system, &p),
        Format::Dot => render::dot(&system, &p),
    };
    print!("{rendered}");
    Ok(())
}

fn run_oracle(
    input: Option<PathBuf>,
    samples: Option<u64>,
    seed: Option<u64>,
    max_factor_degree: Option<u32>,
) -> Result<(), Failure> {
    let text = read_input(&input)?;
    let p = problem::parse_problem(&text).map_err(|e| (USAGE_ERROR, e))?;
    let samples = resolve(samples, "MCCGS_SAMPLES", p.options.oracle_samples, 200)?;
    let seed = resolve(seed, "MCCGS_SEED", p.options.seed, 0)?;
    if samples == 0 {
        println!("warning: 0 samples requested; the check passes vacuously");
        return Ok(());
    }
    let (system, mut fz) = build_system(&p, max_factor_degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut passed = 0u64;
    let mut basis_failures = 0u64;
    let mut membership_failures = 0u64;
    for _ in 0..samples {
        let pt = draw_point(&p, &system, &mut rng, &mut fz)
            .ok_or((INVARIANT_VIOLATION, "could not sample the allowed region".to_string()))?;
        let in_tree: Vec<usize> = (0..system.groups.len())
            .filter(|&gi| system.groups[gi].tree.member(&pt))
            .collect();
        let in_segments: Vec<usize> = (0..system.groups.len())
            .filter(|&gi| system.groups[gi].contains_point(&pt))
            .collect();
        if in_tree != in_segments {
            membership_failures += 1;
            println!(
                "point {}: segment membership {:?} disagrees with tree membership {:?}",
                point_text(&pt),
                in_segments,
                in_tree
            );
            continue;
        }
        if in_tree.len() != 1 {
            membership_failures += 1;
            println!(
                "point {}: lies in {} segments (expected exactly 1)",
                point_text(&pt),
                in_tree.len()
            );
            continue;
        }
        let g = &system.groups[in_tree[0]];
        if oracle_check(&p.polys, &g.basis, &pt) {
            passed += 1;
        } else {
            basis_failures += 1;
            println!(
                "point {}: segment {} basis does not match the directly computed one",
                point_text(&pt),
                in_tree[0] + 1
            );
        }
    }
    println!("oracle: {passed}/{samples} points passed (seed {seed})");
    if membership_failures > 0 {
        Err((
            INVARIANT_VIOLATION,
            format!("{membership_failures} membership violations"),
        ))
    } else if basis_failures > 0 {
        Err((ORACLE_FAILURE, format!("{basis_failures} basis mismatches")))
    } else {
        Ok(())
    }
}

/// A rational parameter point in the allowed region. Unconstrained problems
/// use bounded-height rejection sampling; problems with null conditions draw
/// from the computed segments instead, since a random point misses a proper
/// variety with probability one.
fn draw_point(
    p: &Problem,
    system: &CanonicalSystem,
    rng: &mut ChaCha8Rng,
    fz: &mut Factorizer,
) -> Option<Vec<BigRational>> {
    if p.null.is_empty() {
        'rejection: for _ in 0..1000 {
            let pt: Vec<BigRational> = (0..p.params.len())
                .map(|_| {
                    let num: i64 = rng.gen_range(-12..=12);
                    let den: i64 = rng.gen_range(1..=8);
                    BigRational::new(num.into(), den.into())
                })
                .collect();
            for w in &p.notnull {
                if w.evaluate_params(&pt).is_zero() {
                    continue 'rejection;
                }
            }
            return Some(pt);
        }
        return None;
    }
    let members: Vec<_> = system.groups.iter().flat_map(|g| &g.members).collect();
    if members.is_empty() {
        return None;
    }
    for _ in 0..60 {
        let m = members[rng.gen_range(0..members.len())];
        if let Some(pt) = sample_segment(&m.segment, rng, fz, 40) {
            return Some(pt);
        }
    }
    None
}

fn point_text(pt: &[BigRational]) -> String {
    let parts: Vec<String> = pt.iter().map(|q| q.to_string()).collect();
    format!("({})", parts.join(", "))
}
