//! `bruhat`: Barannikov pairs, Bruhat numbers and torsion of filtered complexes.
//!
//! JSON goes to standard output, human-readable tables to standard error.
//! Exit status is 0 on success, 1 for bad input and 2 when an internal
//! consistency check fails.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bruhat_core::catalog::Named;
use bruhat_core::enhanced_complex::{
    bdata, homology_enhancement, induced_map_rook, poincare_dual, rel_dims, rel_dims_pair_criterion, slice,
    slice_bdata, FilteredComplex,
};
use bruhat_core::error::Error;
use bruhat_core::integral::{
    boundaries_in_cells, check_pair_torsion_formula, check_pm1_equivalence, short_pair_check, ZComplex,
};
use bruhat_core::io::{self, ComplexFile, Ring};
use bruhat_core::paths::{random_closed_script, realize, simulate, verify_akh, Move};
use bruhat_core::scalars::FieldSpec;
use bruhat_core::torsion::{milnor_torsion, perm_sigma, tau, tau_prime};
use clap::{Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bruhat", version, about = "Bruhat numbers and Barannikov pairs of filtered complexes")]
struct Cli {
    /// Suppress the tables written to standard error.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct FieldArg {
    /// Coefficient field, `Q` or `Fp:<prime>`. Defaults to the file's field (ℚ for integer files).
    #[arg(long)]
    field: Option<FieldSpec>,
}

#[derive(Subcommand)]
enum Command {
    /// Barannikov pairs and Bruhat numbers.
    Bdata {
        #[command(flatten)]
        field: FieldArg,
        input: PathBuf,
    },
    /// τ, τ′, the sign of σ, and the Milnor torsion cross-check.
    Torsion {
        #[command(flatten)]
        field: FieldArg,
        input: PathBuf,
    },
    /// The dual complex and a check that its data is the original turned upside down.
    Duality {
        #[command(flatten)]
        field: FieldArg,
        /// Degree complemented against; defaults to the maximal degree.
        #[arg(long)]
        top: Option<usize>,
        input: PathBuf,
    },
    /// The slice keeping generators l+1..m, with predicted and computed data.
    Slice {
        #[command(flatten)]
        field: FieldArg,
        input: PathBuf,
        l: usize,
        m: usize,
    },
    /// Homology dimensions of the four slices around (s, t) and the pair criterion.
    RelDims {
        #[command(flatten)]
        field: FieldArg,
        input: PathBuf,
        s: usize,
        t: usize,
    },
    /// Rook matrices of the map induced on homology by a chain map.
    InducedMap {
        #[command(flatten)]
        field: FieldArg,
        source: PathBuf,
        target: PathBuf,
        /// JSON: {"maps": [degree-0 rows, degree-1 rows, ...]} with entries as strings.
        map: PathBuf,
    },
    /// Integral checks: torsion ratios, short pairs, ±1 equivalence, cell containment.
    IntCheck {
        input: PathBuf,
        /// Random unitriangular changes of basis for the short-pair check.
        #[arg(long, default_value_t = 20)]
        changes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs a move script (or random closed scripts) and checks the parity law.
    Simulate {
        #[command(flatten)]
        field: FieldArg,
        /// Number of random closed scripts to run instead of a script file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Forward moves per random script.
        #[arg(long, default_value_t = 12)]
        steps: usize,
        /// Births in random scripts have lower degree below this.
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Start complex for random mode; the empty complex by default.
        #[arg(long)]
        start: Option<PathBuf>,
        /// Script file followed by start complex file (script mode).
        files: Vec<PathBuf>,
    },
    /// A move script creating pairs with Bruhat numbers λ and −1/λ.
    Realize {
        lambda: String,
        #[command(flatten)]
        field: FieldArg,
        /// Degree of the upper points.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Complex to insert into; the empty complex by default.
        #[arg(long)]
        base: Option<PathBuf>,
        /// 1-based insertion position.
        #[arg(long, default_value_t = 1)]
        position: usize,
    },
    /// Writes a named example complex: fig1, rp N, cp2, sphere N, lens P, random SEED SIZE, empty.
    Gen {
        #[arg(required = true, num_args = 1..)]
        name: Vec<String>,
    },
}

/// Failure of an internal consistency check, with a dump for reproduction.
struct Internal {
    message: String,
    dump: Value,
}

enum Failure {
    Input(Error),
    Internal(Internal),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<Value, Failure>;

fn internal(message: impl Into<String>, dump: Value) -> Failure {
    Failure::Internal(Internal { message: message.into(), dump })
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ComplexFile, Error> {
    ComplexFile::parse(&read(path)?).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// The complex over the requested field; a field flag may only override integer files.
fn field_complex(path: &Path, field: &FieldArg) -> Result<FilteredComplex, Error> {
    let file = load(path)?;
    if let (Ring::Field(own), Some(flag)) = (file.ring, field.field) {
        if own != flag {
            return Err(Error::BadParameter(format!("{} is over {own}; --field {flag} can only override Z files", path.display())));
        }
    }
    file.to_field_complex(field.field)
}

fn default_field(file: Option<&ComplexFile>, field: &FieldArg) -> FieldSpec {
    field.field.unwrap_or(match file.map(|f| f.ring) {
        Some(Ring::Field(k)) => k,
        _ => FieldSpec::Rationals,
    })
}

fn cmd_bdata(input: &Path, field: &FieldArg, quiet: bool) -> Outcome {
    let c = field_complex(input, field)?;
    let d = bdata(&c)?;
    if !quiet {
        eprint!("{}", report::bdata_table(&c, &d));
    }
    Ok(io::bdata_to_json(&d))
}

fn cmd_torsion(input: &Path, field: &FieldArg, quiet: bool) -> Outcome {
    let c = field_complex(input, field)?;
    let d = bdata(&c)?;
    let t = tau(&d);
    let (tp, overlaps) = tau_prime(&d);
    let milnor = milnor_torsion(&c, &homology_enhancement(&c)?)?;
    let agrees = milnor == t;
    let out = json!({
        "field": c.field().to_string(),
        "tau": t.to_string(),
        "tau_abs": t.abs().to_string(),
        "sigma_sign": perm_sigma(&d).sign,
        "tau_prime": tp.to_string(),
        "overlaps": overlaps,
        "milnor": milnor.to_string(),
        "oracle_agrees": agrees,
    });
    if !agrees {
        return Err(internal("τ disagrees with the Milnor torsion", json!({"complex": io::complex_to_json(&c), "report": out})));
    }
    if !quiet {
        eprintln!("tau = {t}  tau' = {tp}  overlaps = {overlaps}  milnor = {milnor}");
    }
    Ok(out)
}

fn cmd_duality(input: &Path, field: &FieldArg, top: Option<usize>, quiet: bool) -> Outcome {
    let c = field_complex(input, field)?;
    let top = top.unwrap_or(c.max_degree().unwrap_or(0));
    let dual = poincare_dual(&c, top)?;
    let d = bdata(&c)?;
    let dual_data = bdata(&dual)?;
    let matches = dual_data == d.upside_down(top);
    let out = json!({
        "top_degree": top,
        "dual": io::complex_to_json(&dual),
        "bdata": io::bdata_to_json(&dual_data),
        "upside_down_matches": matches,
    });
    if !matches {
        return Err(internal("dual data is not the original turned upside down", json!({"complex": io::complex_to_json(&c)})));
    }
    if !quiet {
        eprint!("{}", report::bdata_table(&dual, &dual_data));
    }
    Ok(out)
}

fn cmd_slice(input: &Path, field: &FieldArg, l: usize, m: usize, quiet: bool) -> Outcome {
    let c = field_complex(input, field)?;
    let sliced = slice(&c, l, m)?;
    let computed = bdata(&sliced)?;
    let predicted = slice_bdata(&bdata(&c)?, l, m)?;
    if computed != predicted {
        return Err(internal(
            "sliced data differs from the prediction",
            json!({"complex": io::complex_to_json(&c), "l": l, "m": m}),
        ));
    }
    if !quiet {
        eprint!("{}", report::bdata_table(&sliced, &computed));
    }
    Ok(json!({"complex": io::complex_to_json(&sliced), "bdata": io::bdata_to_json(&computed), "coherent": true}))
}

fn cmd_rel_dims(input: &Path, field: &FieldArg, s: usize, t: usize, quiet: bool) -> Outcome {
    let c = field_complex(input, field)?;
    let dims = rel_dims(&c, s, t)?;
    let criterion = rel_dims_pair_criterion(&dims);
    let paired = bdata(&c)?.pair_with_upper(s).is_some_and(|p| p.lower == t);
    if criterion != paired {
        return Err(internal("four-term criterion disagrees with the pairing", json!({"complex": io::complex_to_json(&c), "s": s, "t": t})));
    }
    if !quiet {
        eprintln!("dims {dims:?}: ({s}, {t}) is {}a pair", if paired { "" } else { "not " });
    }
    Ok(json!({"s": s, "t": t, "dims": dims, "criterion": criterion, "paired": paired}))
}

fn cmd_induced_map(source: &Path, target: &Path, map: &Path, field: &FieldArg, quiet: bool) -> Outcome {
    let a = field_complex(source, field)?;
    let b = field_complex(target, &FieldArg { field: Some(field.field.unwrap_or(a.field())) })?;
    let raw: Value = serde_json::from_str(&read(map)?).map_err(|e| Error::Parse(format!("{}: {e}", map.display())))?;
    let maps = raw
        .get("maps")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("{}: expected an object with a \"maps\" array", map.display())))?;
    let components = maps
        .iter()
        .enumerate()
        .map(|(k, m)| io::matrix_from_json(m, a.field(), a.positions(k).len()))
        .collect::<Result<Vec<_>, _>>()?;
    let rooks = induced_map_rook(&a, &b, &components)?;
    if !quiet {
        for (k, r) in rooks.iter().enumerate() {
            eprintln!("degree {k}: {}x{} rank {}", r.rows(), r.cols(), r.rank());
        }
    }
    Ok(json!({"rooks": rooks.iter().map(io::rook_to_json).collect::<Vec<_>>()}))
}

fn cmd_int_check(input: &Path, changes: usize, seed: u64, quiet: bool) -> Outcome {
    let c = load(input)?.to_zcomplex()?;
    let pairs = check_pair_torsion_formula(&c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shorts = short_pair_check(&c, changes, &mut rng)?;
    let (torsion_free, units) = check_pm1_equivalence(&c)?;
    let in_cells = boundaries_in_cells(&c)?;
    let out = json!({
        "pairs": pairs.iter().map(|p| json!({
            "upper": p.upper, "lower": p.lower, "bruhat": p.bruhat.to_string(),
            "numerator": p.numerator.to_string(), "denominator": p.denominator.to_string(), "pass": p.pass,
        })).collect::<Vec<_>>(),
        "short_pairs": shorts.iter().map(|p| json!({
            "upper": p.upper, "lower": p.lower, "bruhat": p.bruhat.to_string(), "raw_coeff": p.raw_coeff.to_string(),
            "integral": p.integral, "matches": p.matches, "stable": p.stable,
        })).collect::<Vec<_>>(),
        "pm1": {"torsion_free": torsion_free, "all_units": units},
        "boundaries_in_cells": in_cells,
    });
    let ok = pairs.iter().all(|p| p.pass) && shorts.iter().all(|p| p.pass()) && torsion_free == units && in_cells;
    if !ok {
        return Err(internal("an integral check failed", json!({"complex": io::zcomplex_to_json(&c), "report": out})));
    }
    if !quiet {
        eprint!("{}", report::torsion_table(&pairs));
        eprintln!("{} short pairs; torsion-free slices: {torsion_free}; all numbers ±1: {units}", shorts.len());
    }
    Ok(out)
}

fn load_zcomplex(path: &Path) -> Result<(ComplexFile, ZComplex), Error> {
    let file = load(path)?;
    let c = file.to_zcomplex()?;
    Ok((file, c))
}

fn cmd_simulate(
    field: &FieldArg,
    random: Option<usize>,
    seed: u64,
    steps: usize,
    max_degree: usize,
    start: Option<&Path>,
    files: &[PathBuf],
    quiet: bool,
) -> Outcome {
    if let Some(trials) = random {
        if !files.is_empty() {
            return Err(Error::BadParameter("--random takes no script files; use --start for the start complex".into()).into());
        }
        let (file, start) = match start {
            Some(p) => {
                let (f, c) = load_zcomplex(p)?;
                (Some(f), c)
            }
            None => (None, ZComplex::empty()),
        };
        let field = default_field(file.as_ref(), field);
        return simulate_random(trials, seed, steps, max_degree, &start, field, quiet);
    }
    let [script_path, start_path] = files else {
        return Err(Error::BadParameter("simulate needs a script file and a start complex file".into()).into());
    };
    let script = io::script_from_json(&read(script_path)?)?;
    let (file, start) = load_zcomplex(start_path)?;
    let field = default_field(Some(&file), field);
    let trace = simulate(&script, &start, field)?;
    let verdict = verify_akh(&trace);
    if !quiet {
        eprint!("{}", report::trace_table(&trace));
    }
    if let Ok(r) = &verdict {
        if !r.holds() {
            return Err(internal("parity law fails", json!({"script": io::script_to_json(&script), "start": io::zcomplex_to_json(&start)})));
        }
    }
    Ok(report::trace_json(&trace, &verdict))
}

fn simulate_random(trials: usize, seed: u64, steps: usize, max_degree: usize, start: &ZComplex, field: FieldSpec, quiet: bool) -> Outcome {
    let results: Vec<Result<(bool, Vec<Move>), Error>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let script = random_closed_script(start, steps, max_degree, &mut rng);
            let trace = simulate(&script, start, field)?;
            let report = verify_akh(&trace)?;
            Ok((report.holds(), script))
        })
        .collect();
    let mut passes = 0;
    let mut first_failure = None;
    for (i, r) in results.into_iter().enumerate() {
        match r? {
            (true, _) => passes += 1,
            (false, script) => {
                first_failure.get_or_insert((i, script));
            }
        }
    }
    if let Some((i, script)) = first_failure {
        return Err(internal(
            format!("parity law fails in trial {i}"),
            json!({"seed": seed, "trial": i, "script": io::script_to_json(&script), "start": io::zcomplex_to_json(start)}),
        ));
    }
    if !quiet {
        eprintln!("{passes}/{trials} random closed scripts satisfy the parity law");
    }
    Ok(json!({"field": field.to_string(), "seed": seed, "trials": trials, "passes": passes}))
}

fn cmd_realize(lambda: &str, field: &FieldArg, degree: usize, base: Option<&Path>, position: usize, quiet: bool) -> Outcome {
    let field = field.field.unwrap_or(FieldSpec::Rationals);
    let lambda = field.parse_scalar(lambda)?;
    let base = match base {
        Some(p) => load_zcomplex(p)?.1,
        None => ZComplex::empty(),
    };
    let script = realize(&lambda, &base, degree, position)?;
    if !quiet {
        eprintln!("{} moves realize {lambda} and {}", script.len(), -lambda.inv().ok_or(Error::ZeroElement)?);
    }
    Ok(io::script_to_json(&script))
}

fn cmd_gen(name: &[String]) -> Outcome {
    let c = Named::parse(name)?.build();
    Ok(io::zcomplex_to_json(&c))
}

fn run(cli: &Cli) -> Outcome {
    let q = cli.quiet;
    match &cli.command {
        Command::Bdata { field, input } => cmd_bdata(input, field, q),
        Command::Torsion { field, input } => cmd_torsion(input, field, q),
        Command::Duality { field, top, input } => cmd_duality(input, field, *top, q),
        Command::Slice { field, input, l, m } => cmd_slice(input, field, *l, *m, q),
        Command::RelDims { field, input, s, t } => cmd_rel_dims(input, field, *s, *t, q),
        Command::InducedMap { field, source, target, map } => cmd_induced_map(source, target, map, field, q),
        Command::IntCheck { input, changes, seed } => cmd_int_check(input, *changes, *seed, q),
        Command::Simulate { field, random, seed, steps, max_degree, start, files } => {
            cmd_simulate(field, *random, *seed, *steps, *max_degree, start.as_deref(), files, q)
        }
        Command::Realize { lambda, field, degree, base, position } => {
            cmd_realize(lambda, field, *degree, base.as_deref(), *position, q)
        }
        Command::Gen { name } => cmd_gen(name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(i)) => {
            eprintln!("internal error: {}", i.message);
            eprintln!("{}", serde_json::to_string_pretty(&i.dump).expect("JSON values serialize"));
            ExitCode::from(2)
        }
    }
}
