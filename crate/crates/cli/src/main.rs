use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use supergrass::constructors::{
    self, ConstructorSpec, HomogeneousModel, Method1Params, Method2Params, TauParams, TriangularText, TruncationParams,
};
use supergrass::grading::Parity;
use supergrass::identities::{self, CheckOptions};
use supergrass::isomorphism::{self, GradedMap};
use supergrass::{linalg, Element, QElement, QEndomorphism, QGrading, QSuperPolynomial, Truncation};

mod render;

#[derive(Parser)]
#[command(name = "supergrass", version, about = "Z2-gradings of truncated Grassmann algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Truncation used when an input does not fix it.
    #[arg(long = "N", alias = "n", global = true)]
    n: Option<usize>,

    /// Longest basis monomial substituted by identity checks (default N-2).
    #[arg(long, global = true)]
    max_len: Option<usize>,

    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive, global = true)]
    mode: ModeArg,

    /// Seed for randomized checks.
    #[arg(long, env = "SUPERGRASS_SEED", default_value_t = 0, global = true)]
    seed: u64,

    /// Trials for randomized checks.
    #[arg(long, default_value_t = 200, global = true)]
    trials: usize,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build a map from a constructor spec and print it.
    Construct { input: PathBuf },
    /// Check the Grassmann relations and the involution property.
    Verify { input: PathBuf },
    /// Classify the induced grading in the standard basis.
    Classify { input: PathBuf },
    /// Degree and homogeneous parts of an element.
    Grade {
        input: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// Check a graded polynomial identity.
    CheckIdentity {
        #[arg(long)]
        poly: String,
        /// Grading input; without it only `x` variables can be checked.
        #[arg(long)]
        grading: Option<PathBuf>,
    },
    /// Certify equivalence with a homogeneous model, or check a given pair
    /// of maps `f: source -> target`, `g: target -> source`.
    CheckIso {
        input: PathBuf,
        #[arg(long, requires_all = ["f", "g"])]
        target: Option<PathBuf>,
        /// JSON object from generator index to image text.
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Run one of the worked examples.
    Demo { name: DemoName },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    #[value(name = "example-3-1")]
    Example31,
    #[value(name = "example-3-1-psi")]
    Example31Psi,
    PropMinus,
    Swap,
    Method2,
    Tau,
}

const DEFAULT_N: usize = 8;

/// Failure to read or interpret the input; exits with status 2.
struct InputError(String);

impl From<supergrass::Error> for InputError {
    fn from(e: supergrass::Error) -> Self {
        InputError(e.to_string())
    }
}

fn input_error(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

/// The report and whether the checked property held.
struct Outcome {
    report: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.report).expect("json values print")
                ),
                Format::Text => print!("{}", render::text(&out.report)),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    match &cli.command {
        Command::Construct { input } => {
            let (spec, grading) = load_spec(input, cli)?;
            let spec = spec.ok_or_else(|| input_error(format!("{}: expected a constructor spec", input.display())))?;
            Ok(Outcome {
                report: json!({ "spec": spec, "endomorphism": grading.phi() }),
                ok: true,
            })
        }
        Command::Verify { input } => verify(input, cli),
        Command::Classify { input } => {
            let (_, g) = load_spec(input, cli)?;
            let gens = g.find_homogeneous_generators();
            Ok(Outcome {
                report: json!({
                    "classification": g.classify_in_basis(),
                    "homogeneous_generators": { "plus": texts(&gens.plus), "minus": texts(&gens.minus) },
                }),
                ok: true,
            })
        }
        Command::Grade { input, element } => {
            let (_, g) = load_spec(input, cli)?;
            let a = QElement::parse(g.truncation(), element)?;
            let degree = g.degree_of(&a)?;
            Ok(Outcome {
                report: json!({
                    "element": a.to_string(),
                    "degree": match degree.parity() { Some(p) => json!(p.bit()), None => json!("MIXED") },
                    "even_part": g.project(&a, Parity::Even)?.to_string(),
                    "odd_part": g.project(&a, Parity::Odd)?.to_string(),
                }),
                ok: true,
            })
        }
        Command::CheckIdentity { poly, grading } => {
            let p: QSuperPolynomial = poly.parse()?;
            let g = match grading {
                Some(path) => load_spec(path, cli)?.1,
                None => {
                    if p.variables().iter().any(|v| v.sort != identities::Sort::X) {
                        return Err(input_error("y and z variables need --grading"));
                    }
                    let n = Truncation::new(cli.n.unwrap_or(DEFAULT_N))?;
                    constructors::homogeneous(HomogeneousModel::EkStar(0), n)?
                }
            };
            let verdict = identities::is_identity(&p, &g, &check_options(cli, g.truncation()))?;
            Ok(Outcome {
                ok: verdict.holds,
                report: json!({ "polynomial": p, "verdict": verdict }),
            })
        }
        Command::CheckIso { input, target, f, g } => check_iso(cli, input, target.as_ref(), f.as_ref(), g.as_ref()),
        Command::Demo { name } => demo(*name, cli),
    }
}

fn check_options(cli: &Cli, n: Truncation) -> CheckOptions {
    let max_len = cli.max_len.unwrap_or(n.get().saturating_sub(2));
    match cli.mode {
        ModeArg::Exhaustive => CheckOptions::exhaustive(max_len),
        ModeArg::Random => CheckOptions::randomized(max_len, cli.seed, cli.trials),
    }
}

fn read_json(path: &PathBuf) -> Result<Value, InputError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: invalid JSON: {e}", path.display())))
}

/// Deserializes with the failing field path in the error.
fn decode<T: DeserializeOwned>(value: Value, path: &Path, prefix: &str) -> Result<T, InputError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let at = e.path().to_string();
        let at = match (prefix.is_empty(), at.as_str()) {
            (true, _) => at,
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{at}"),
        };
        input_error(format!("{}: at `{at}`: {}", path.display(), e.inner()))
    })
}

/// Decodes a constructor spec through its family's parameter type, so
/// errors keep the path of the offending field.
fn decode_spec(value: Value, path: &Path, prefix: &str) -> Result<ConstructorSpec, InputError> {
    let at = |field: &str| {
        if prefix.is_empty() {
            field.to_string()
        } else {
            format!("{prefix}.{field}")
        }
    };
    let mut body = value;
    let obj = body
        .as_object_mut()
        .ok_or_else(|| input_error(format!("{}: at `{prefix}`: expected an object", path.display())))?;
    let family = match obj.remove("family") {
        Some(Value::String(f)) => f,
        _ => {
            return Err(input_error(format!(
                "{}: at `{}`: expected a string",
                path.display(),
                at("family")
            )))
        }
    };
    Ok(match family.as_str() {
        "homogeneous" => ConstructorSpec::Homogeneous(decode(body, path, prefix)?),
        "method1" => ConstructorSpec::Method1(decode::<Method1Params>(body, path, prefix)?),
        "method2" => ConstructorSpec::Method2(decode::<Method2Params>(body, path, prefix)?),
        "triangular" => ConstructorSpec::Triangular(decode(body, path, prefix)?),
        "tau" => ConstructorSpec::Tau(decode::<TauParams>(body, path, prefix)?),
        "prop_minus" => ConstructorSpec::PropMinus(decode::<TruncationParams>(body, path, prefix)?),
        "swap" => ConstructorSpec::Swap(decode::<TruncationParams>(body, path, prefix)?),
        other => {
            return Err(input_error(format!(
                "{}: at `{}`: unknown family {other:?}, expected one of {}",
                path.display(),
                at("family"),
                ConstructorSpec::FAMILIES.join(", ")
            )))
        }
    })
}

/// Accepts a constructor spec, the output of `construct`, or a bare map.
fn load_spec(path: &PathBuf, cli: &Cli) -> Result<(Option<ConstructorSpec>, QGrading), InputError> {
    let value = read_json(path)?;
    let build = |spec: ConstructorSpec| -> Result<_, InputError> {
        let spec = spec.with_default_truncation(cli.n.unwrap_or(DEFAULT_N));
        let g = spec.build()?;
        Ok((Some(spec), g))
    };
    if value.get("family").is_some() {
        return build(decode_spec(value, path, "")?);
    }
    if let Some(obj) = value.as_object().filter(|o| o.contains_key("endomorphism")) {
        let phi: QEndomorphism = decode(obj["endomorphism"].clone(), path, "endomorphism")?;
        if let Some(spec) = obj.get("spec") {
            let (spec, g) = build(decode_spec(spec.clone(), path, "spec")?)?;
            if g.phi() != &phi {
                return Err(input_error(format!(
                    "{}: `endomorphism` does not match `spec`",
                    path.display()
                )));
            }
            return Ok((spec, g));
        }
        return Ok((None, QGrading::from_involution(phi)?));
    }
    let phi: QEndomorphism = decode(value, path, "")?;
    Ok((None, QGrading::from_involution(phi)?))
}

fn verify(path: &PathBuf, cli: &Cli) -> Result<Outcome, InputError> {
    let value = read_json(path)?;
    let phi: QEndomorphism = if value.get("family").is_some() {
        let spec = decode_spec(value, path, "")?;
        spec.with_default_truncation(cli.n.unwrap_or(DEFAULT_N))
            .build()?
            .phi()
            .clone()
    } else if let Some(inner) = value.get("endomorphism") {
        decode(inner.clone(), path, "endomorphism")?
    } else {
        decode(value, path, "")?
    };
    let phi = match phi.verify_relations() {
        Ok(phi) => phi,
        Err(e) => {
            return Ok(Outcome {
                report: json!({ "relations": false, "error": e.to_string(), "involution": false }),
                ok: false,
            })
        }
    };
    let failure = phi.involution_failure()?;
    Ok(Outcome {
        report: json!({ "relations": true, "involution": failure.is_none(), "first_failure": failure }),
        ok: failure.is_none(),
    })
}

fn load_images(path: &PathBuf, n: Truncation) -> Result<BTreeMap<usize, QElement>, InputError> {
    let raw: BTreeMap<String, String> = decode(read_json(path)?, path, "")?;
    raw.into_iter()
        .map(|(k, v)| {
            let i = k
                .parse()
                .map_err(|_| input_error(format!("{}: at `{k}`: not a generator index", path.display())))?;
            let e = Element::parse(n, &v).map_err(|e| input_error(format!("{}: at `{k}`: {e}", path.display())))?;
            Ok((i, e))
        })
        .collect()
}

fn check_iso(
    cli: &Cli,
    input: &PathBuf,
    target: Option<&PathBuf>,
    f: Option<&PathBuf>,
    g: Option<&PathBuf>,
) -> Result<Outcome, InputError> {
    let (_, source) = load_spec(input, cli)?;
    if let (Some(target), Some(f), Some(g)) = (target, f, g) {
        let (_, target) = load_spec(target, cli)?;
        let n = source.truncation();
        let fm = GradedMap::new(source.clone(), target.clone(), load_images(f, n)?)?;
        let gm = GradedMap::new(target, source, load_images(g, n)?)?;
        let iso = isomorphism::is_graded_iso(&fm, &gm);
        return Ok(Outcome {
            report: json!({
                "f_preserves_degree": fm.preserves_degree(),
                "g_preserves_degree": gm.preserves_degree(),
                "graded_iso": iso,
            }),
            ok: iso,
        });
    }
    match isomorphism::standard_equivalence(&source)? {
        Some(cert) => Ok(Outcome {
            ok: cert.verified,
            report: json!({ "certificate": cert }),
        }),
        None => Ok(Outcome {
            report: json!({ "certificate": null, "reason": "no construction metadata; equivalence is not decided" }),
            ok: false,
        }),
    }
}

fn texts(v: &[QElement]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn demo(name: DemoName, cli: &Cli) -> Result<Outcome, InputError> {
    let spec_for = |n: usize, d: &str| {
        ConstructorSpec::Method1(Method1Params {
            n: Some(n),
            plus: (2..=n).collect(),
            minus: Default::default(),
            shifts: [("1".to_string(), d.to_string())].into(),
            tail: supergrass::TailRule::Identity,
        })
    };
    match name {
        DemoName::Example31 => {
            let n = cli.n.unwrap_or(DEFAULT_N);
            if n < 4 {
                return Err(input_error("example-3-1 needs N >= 4"));
            }
            graded_demo("example-3-1", spec_for(n, "e2e3e4"), cli, true)
        }
        DemoName::Example31Psi => {
            let n = cli.n.unwrap_or(9);
            if n < 9 {
                return Err(input_error("example-3-1-psi needs N >= 9"));
            }
            graded_demo(
                "example-3-1-psi",
                spec_for(n, "e2 + e3 + e4e5e6 + e3e4e7e8e9"),
                cli,
                true,
            )
        }
        DemoName::PropMinus => graded_demo(
            "prop-minus",
            ConstructorSpec::PropMinus(TruncationParams {
                n: Some(cli.n.unwrap_or(DEFAULT_N)),
            }),
            cli,
            false,
        ),
        DemoName::Method2 => {
            let n = cli.n.unwrap_or(DEFAULT_N);
            graded_demo(
                "method2",
                ConstructorSpec::Method2(Method2Params { n: Some(n), k: 1, t: 1 }),
                cli,
                false,
            )
        }
        DemoName::Swap => {
            let n = cli.n.unwrap_or(4);
            let g = ConstructorSpec::Swap(TruncationParams { n: Some(n) }).build::<supergrass::Rational>()?;
            let gens = g.find_homogeneous_generators();
            let mut expected = Vec::new();
            for i in (1..n).step_by(2) {
                let a = Element::generator(g.truncation(), i)?;
                let b = Element::generator(g.truncation(), i + 1)?;
                expected.push(&a + &b);
                expected.push(&a - &b);
            }
            let found: Vec<_> = gens.plus.iter().chain(&gens.minus).cloned().collect();
            let spans_agree = linalg::same_span(&found, &expected);
            Ok(Outcome {
                ok: spans_agree,
                report: json!({
                    "demo": "swap",
                    "endomorphism": g.phi(),
                    "classification": g.classify_in_basis(),
                    "homogeneous_generators": { "plus": texts(&gens.plus), "minus": texts(&gens.minus) },
                    "span_matches_pairs": spans_agree,
                }),
            })
        }
        DemoName::Tau => {
            let n = cli.n.unwrap_or(7);
            if n < 6 {
                return Err(input_error("tau needs N >= 6"));
            }
            let generators = vec![
                TriangularText {
                    index: 1,
                    p: "e4".into(),
                },
                TriangularText {
                    index: 2,
                    p: "e5".into(),
                },
                TriangularText {
                    index: 3,
                    p: "e4e5e6".into(),
                },
            ];
            let mut rows = Vec::new();
            let mut ok = true;
            for mask in 0..8 {
                let spec = ConstructorSpec::Tau(TauParams {
                    n: Some(n),
                    generators: generators.clone(),
                    mask,
                });
                let g = spec.build::<supergrass::Rational>()?;
                let cert = isomorphism::standard_equivalence(&g)?.expect("tau elements carry metadata");
                ok &= cert.verified && g.phi().is_involution()?;
                rows.push(json!({
                    "mask": mask,
                    "moved": g.classify_in_basis().moved.explicit_part,
                    "model": cert.model,
                    "verified": cert.verified,
                }));
            }
            Ok(Outcome {
                ok,
                report: json!({ "demo": "tau", "N": n, "elements": rows }),
            })
        }
    }
}

fn graded_demo(name: &str, spec: ConstructorSpec, cli: &Cli, with_identity: bool) -> Result<Outcome, InputError> {
    let g = spec.build::<supergrass::Rational>()?;
    let involution = g.phi().is_involution()?;
    let cert = isomorphism::standard_equivalence(&g)?.expect("constructed gradings carry metadata");
    let mut report = json!({
        "demo": name,
        "spec": spec,
        "endomorphism": g.phi(),
        "involution": involution,
        "classification": g.classify_in_basis(),
        "certificate": cert,
    });
    let mut ok = involution && cert.verified;
    if with_identity {
        let p: QSuperPolynomial = "z1 z2".parse()?;
        let verdict = identities::is_identity(&p, &g, &check_options(cli, g.truncation()))?;
        ok &= verdict.holds;
        report["identities"] = json!([{ "polynomial": p, "verdict": verdict }]);
    }
    Ok(Outcome { report, ok })
}
