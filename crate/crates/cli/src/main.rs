//! `pencils`: JSON front end to pencil-core.
//!
//! Every command prints one JSON object with sorted keys:
//! `{"command", "result", "statement"}` on success and `{"command", "error"}`
//! otherwise. Exit status is 0 on success, 2 for schema or precondition
//! errors and 3 when certification or a campaign fails.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pencil_core::moduli::{cross_ratio_lambda, legendre_j, legendre_ramification, quartic_roots};
use pencil_core::normal_forms::{
    nodal_canonicalize_with, nodal_normalize_with, simultaneous_diagonalize_with, verify_node,
};
use pencil_core::report::{class_table, table_test_values};
use pencil_core::roots::DEFAULT_PRECISION;
use pencil_core::schubert::{degree, pieri_sigma1, Partition2};
use pencil_core::slice::{check_slices, slice_campaign, PlaneSlice, DEFAULT_HEIGHT};
use pencil_core::{classify_with, fiber_structure, BinaryQuartic, Error, Pencil, ProjValue, Rat};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "pencils", version, about = "Pencils of quadrics in P^3: classification, normal forms and enumerative checks")]
struct Cli {
    /// JSON input file (a pencil, a quartic, or a list of slices).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Starting precision for certified numerics.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision_bits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit class of a pencil.
    Classify,
    /// Simultaneous diagonalization of a smooth pencil.
    Diagonalize,
    /// Normal form W_{a,b} of a nodal pencil.
    NodalForm,
    /// Reduction of a nodal pencil to W_node.
    NodalCanon,
    /// Singular points of the base curve of a nodal pencil.
    VerifyNode,
    /// Dimension of the infinitesimal stabilizer.
    Stabilizer,
    /// Invariants, j and cross-ratio of a binary quartic.
    Jmap {
        /// Coefficients c0..c4 of c0 s^4 + ... + c4 t^4, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<String>>,
    },
    /// j of a Legendre parameter.
    Legendre {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Critical points of the j-map with ramification indices.
    Ramification,
    /// Multiplicity of the j-fiber over a value.
    FiberStructure {
        /// A rational or "infinity".
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Pieri product and degree on Gr(2, n), e.g. --pairing sigma1:8,7.
    Schubert {
        #[arg(long)]
        pairing: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Seeded slice campaign, or a check of the slices in --input.
    SliceVerify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "5")]
        values: Vec<String>,
    },
    /// The divisor-class table, from a seeded campaign or the slices in --input.
    Report {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: i64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Diagonalize => "diagonalize",
            Command::NodalForm => "nodal-form",
            Command::NodalCanon => "nodal-canon",
            Command::VerifyNode => "verify-node",
            Command::Stabilizer => "stabilizer",
            Command::Jmap { .. } => "jmap",
            Command::Legendre { .. } => "legendre",
            Command::Ramification => "ramification",
            Command::FiberStructure { .. } => "fiber-structure",
            Command::Schubert { .. } => "schubert",
            Command::SliceVerify { .. } => "slice-verify",
            Command::Report { .. } => "report",
        }
    }
}

enum Failure {
    Schema { path: String, message: String },
    Precondition(String),
    Certification(String),
    /// A computation that ran but whose result contradicts its contract.
    Check { message: String, result: Value },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_certification_failure() {
            Failure::Certification(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

type Outcome = Result<(Value, &'static str), Failure>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Rebuilds every object with its keys in sorted order.
fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, sorted(v));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}

fn read_input<T: DeserializeOwned>(input: &Option<PathBuf>, what: &str) -> Result<T, Failure> {
    let path = input
        .as_ref()
        .ok_or_else(|| Failure::Precondition(format!("--input is required: expected {what}")))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| Failure::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn parse_rat(flag: &str, s: &str) -> Result<Rat, Failure> {
    s.parse()
        .map_err(|_| Failure::Precondition(format!("--{flag}: not a rational number: {s:?}")))
}

fn parse_class(s: &str, n: usize) -> Result<Partition2, Failure> {
    let bad = || Failure::Precondition(format!("--pairing: bad class {s:?}; use sigma1 or a,b"));
    let (a, b) = match s.trim() {
        "sigma1" | "σ1" => (1, 0),
        other => {
            let other = other.trim_start_matches("sigma").trim_start_matches('σ');
            let (a, b) = other.split_once(',').ok_or_else(bad)?;
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
    };
    Ok(Partition2::new(a, b, n)?)
}

fn schubert(pairing: &str, n: usize) -> Outcome {
    let (x, y) = pairing
        .split_once(':')
        .ok_or_else(|| Failure::Precondition("--pairing expects CLASS:CLASS".into()))?;
    let (x, y) = (parse_class(x, n)?, parse_class(y, n)?);
    let other = if (x.a(), x.b()) == (1, 0) {
        y
    } else if (y.a(), y.b()) == (1, 0) {
        x
    } else {
        return Err(Failure::Precondition("only products with sigma1 are supported".into()));
    };
    let product = pieri_sigma1(&other);
    let deg = degree(&product).ok();
    Ok((
        json!({
            "n": n,
            "factors": [x.to_string(), y.to_string()],
            "product": to_value(&product),
            "product_display": product.to_string(),
            "degree": deg,
        }),
        "Pieri rule and the degree pairing on Gr(2,n); on Gr(2,10), sigma1 times sigma_{8,7} is the point class",
    ))
}

fn jmap(input: &Option<PathBuf>, coeffs: &Option<Vec<String>>, bits: u32) -> Outcome {
    let f = match coeffs {
        Some(c) => {
            if c.len() != 5 {
                return Err(Failure::Precondition(format!("--coeffs expects 5 values, got {}", c.len())));
            }
            let c: Vec<Rat> = c.iter().map(|s| parse_rat("coeffs", s)).collect::<Result<_, _>>()?;
            BinaryQuartic::new(c.try_into().expect("five"))
        }
        None => read_input::<BinaryQuartic>(input, "a binary quartic [c0, c1, c2, c3, c4]")?,
    };
    let j = f.j_invariant()?;
    let lambda = if f.root_type().is_squarefree() {
        Some(to_value(&cross_ratio_lambda(&quartic_roots(&f, bits)?)?))
    } else {
        None
    };
    Ok((
        json!({
            "quartic": to_value(&f),
            "invariants": to_value(&f.invariants()),
            "j": to_value(&j),
            "root_type": to_value(&f.root_type()),
            "lambda": lambda,
        }),
        "j = 1728 I^3 / (I^3 - 27 J^2) of a binary quartic, which equals the Legendre j of the cross-ratio of its roots",
    ))
}

fn test_values(values: &[String]) -> Result<Vec<Rat>, Failure> {
    values.iter().map(|s| parse_rat("values", s)).collect()
}

fn run(cli: &Cli) -> Outcome {
    let bits = cli.precision_bits;
    if bits < 64 {
        return Err(Error::PrecisionTooLow(bits).into());
    }
    let pencil = || read_input::<Pencil>(&cli.input, "a pencil {\"Q0\": [[..]], \"Q1\": [[..]]}");
    match &cli.command {
        Command::Classify => Ok((
            to_value(&classify_with(&pencil()?, bits)?),
            "pencils are classified by the root type of the discriminant quartic and, when it is squarefree, by its j-invariant",
        )),
        Command::Diagonalize => Ok((
            to_value(&simultaneous_diagonalize_with(&pencil()?, bits)?),
            "a pencil with squarefree discriminant is simultaneously diagonalizable",
        )),
        Command::NodalForm => Ok((
            to_value(&nodal_normalize_with(&pencil()?, bits)?),
            "a pencil with discriminant of type 2+1+1 and a rank-3 member at the double root is equivalent to <x0^2+x1^2+x2^2, x0x3+a x1^2+b x2^2>",
        )),
        Command::NodalCanon => Ok((
            to_value(&nodal_canonicalize_with(&pencil()?, bits)?),
            "every nodal pencil is equivalent to W_node = <x0^2+x1^2+x2^2, x0x3+x1^2+2x2^2>",
        )),
        Command::VerifyNode => Ok((
            to_value(&verify_node(&pencil()?)?),
            "the base curve of a nodal pencil has a single singular point, an ordinary node",
        )),
        Command::Stabilizer => Ok((
            to_value(&pencil()?.infinitesimal_stabilizer_dim()),
            "smooth pencils have finite stabilizers, so their orbits have dimension 15",
        )),
        Command::Jmap { coeffs } => jmap(&cli.input, coeffs, bits),
        Command::Legendre { lambda } => {
            let l = parse_rat("lambda", lambda)?;
            Ok((
                json!({"lambda": to_value(&l), "j": to_value(&legendre_j(&l))}),
                "j(lambda) = 256 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda - 1)^2)",
            ))
        }
        Command::Ramification => Ok((
            to_value(&legendre_ramification()),
            "the j-map from the lambda-line has ramification index 3 over 0 and 2 over 1728",
        )),
        Command::FiberStructure { a } => {
            let a: ProjValue = a
                .parse()
                .map_err(|_| Failure::Precondition(format!("--a: not a rational or infinity: {a:?}")))?;
            Ok((
                to_value(&fiber_structure(&a)),
                "the j-fiber over 0 is three times its orbit closure, over 1728 twice, and reduced elsewhere",
            ))
        }
        Command::Schubert { pairing, n } => schubert(pairing, *n),
        Command::SliceVerify {
            trials,
            seed,
            height,
            values,
        } => {
            let values = test_values(values)?;
            let report = match &cli.input {
                Some(_) => check_slices(&read_input::<Vec<PlaneSlice>>(&cli.input, "a list of slices")?, &values)?,
                None => slice_campaign(*trials, *seed, *height, &values)?,
            };
            let value = to_value(&report);
            if !report.all_passed {
                return Err(Failure::Check {
                    message: format!("trials deviated from 12: seeds {:?}", report.failed_seeds),
                    result: value,
                });
            }
            Ok((
                value,
                "a general pencil-of-lines slice has 12 simple tangent lines and meets every j-fiber in 12 points",
            ))
        }
        Command::Report { trials, seed, height } => {
            let values = table_test_values();
            let campaign = match &cli.input {
                Some(_) => check_slices(&read_input::<Vec<PlaneSlice>>(&cli.input, "a list of slices")?, &values)?,
                None => slice_campaign(*trials, *seed, *height, &values)?,
            };
            Ok((
                to_value(&class_table(&campaign)?),
                "[F_a] = 12 sigma1, [O_1728] = 6 sigma1, [O_0] = 4 sigma1 and [T] = 12 sigma1: slice count times the pairing 1, divided by the multiplicities 1, 2, 3, 1",
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let (out, code) = match run(&cli) {
        Ok((result, statement)) => (
            json!({"command": command, "result": result, "statement": statement}),
            0,
        ),
        Err(Failure::Schema { path, message }) => (
            json!({"command": command, "error": {"kind": "schema", "path": path, "message": message}}),
            2,
        ),
        Err(Failure::Precondition(message)) => (
            json!({"command": command, "error": {"kind": "precondition", "message": message}}),
            2,
        ),
        Err(Failure::Certification(message)) => (
            json!({"command": command, "error": {"kind": "certification", "message": message}}),
            3,
        ),
        Err(Failure::Check { message, result }) => (
            json!({"command": command, "error": {"kind": "check", "message": message}, "result": result}),
            3,
        ),
    };
    let text = serde_json::to_string_pretty(&sorted(out)).expect("serializable");
    // a closed pipe is not an error of the computation
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(code)
}
