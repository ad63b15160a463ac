use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use linkslope::alexander::{conway_potential, order_polynomial};
use linkslope::burau::{beta_all, beta_r, BetaOutcome};
use linkslope::charspec::Character;
use linkslope::corpus::{run_manifest, Manifest, Resolver};
use linkslope::diagram::{BraidWord, PdCode, TangleDiagram};
use linkslope::error::Error;
use linkslope::slope::{link_slope, patched_slope, symbolic_slope, ColoredLink, Parametrization, SlopeOptions};
use linkslope::splice::{splice_assemble, SpliceInput};
use linkslope::tangle::{skein_signature_jump, skein_triple_check, tangle_slope};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "linkslope", version, about = "Slopes of colored links and tangles")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Relative tolerance for numeric rank decisions.
    #[arg(long, env = "LINKSLOPE_TOL", default_value_t = 1e-9, global = true)]
    tol: f64,
    /// Seed for randomized steps (generic evaluation points).
    #[arg(long, env = "LINKSLOPE_SEED", default_value_t = 1, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Slope of a colored link at a character, or as a rational function.
    Slope(SlopeArgs),
    /// Alexander order polynomials and the Conway potential.
    Alexander(AlexanderArgs),
    /// Burau slope invariants β_r of a braid.
    BurauBeta(BurauArgs),
    /// Splice signature and nullity assembly from a JSON document.
    Splice(SpliceArgs),
    /// Slope of a 2-string tangle.
    TangleSlope(TangleArgs),
    /// Skein checks at a link crossing or across a triple of tangles.
    SkeinCheck(SkeinArgs),
    /// Run a manifest of golden cases.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
struct SlopeArgs {
    /// PD code file, or inline PD text.
    #[arg(long)]
    pd: String,
    #[arg(long, default_value_t = 0)]
    distinguished: usize,
    /// Character, one coordinate per color of L (`root:n/d`, `c:re,im`, or a number).
    #[arg(long, required_unless_present = "symbolic")]
    character: Option<String>,
    /// Colors of all components, comma separated; the distinguished one is ignored.
    #[arg(long, value_delimiter = ',')]
    colors: Option<Vec<usize>>,
    /// Print the slope as a rational function of the colors.
    #[arg(long)]
    symbolic: bool,
    /// Monomial family `e1,e2;…` per color, used with `--symbolic`.
    #[arg(long, requires = "symbolic")]
    parametrization: Option<String>,
    /// Patch components with coordinate 1 before evaluating.
    #[arg(long)]
    patch: bool,
}

#[derive(Args, Debug)]
struct AlexanderArgs {
    #[arg(long)]
    pd: String,
    #[arg(long, value_delimiter = ',')]
    colors: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    order: usize,
    /// Print the Conway potential instead.
    #[arg(long)]
    conway: bool,
}

#[derive(Args, Debug)]
struct BurauArgs {
    /// Braid word as signed generator indices, e.g. "1 2 -3".
    #[arg(long, allow_hyphen_values = true)]
    braid: String,
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    r: Option<usize>,
    #[arg(long)]
    all: bool,
}

#[derive(Args, Debug)]
struct SpliceArgs {
    /// JSON file with `first` and `second` sides; `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct TangleArgs {
    #[arg(long)]
    tangle: String,
    /// Coordinates `ω₊,ω₋` followed by one per closed strand.
    #[arg(long)]
    character: String,
}

#[derive(Args, Debug)]
struct SkeinArgs {
    /// Link for the crossing check.
    #[arg(long, requires_all = ["crossing", "character"], conflicts_with = "tangles")]
    pd: Option<String>,
    #[arg(long)]
    crossing: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    colors: Option<Vec<usize>>,
    /// One coordinate per color.
    #[arg(long)]
    character: Option<String>,
    /// Three tangles for the triple check.
    #[arg(long, num_args = 3, requires = "characters", required_unless_present = "pd")]
    tangles: Option<Vec<String>>,
    /// Three characters, separated by `;`.
    #[arg(long)]
    characters: Option<String>,
    /// Optional signatures of the three pairwise closures, separated by `,`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    signatures: Option<Vec<i64>>,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    /// Manifest to run instead of the bundled one.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Directory searched for diagram files before the bundled corpus.
    #[arg(long)]
    dir: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Usage(String),
    CorpusFailed(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<(Value, String), Failure>;

/// Reads `arg` as a file when it names one, otherwise treats it as inline text.
fn source(arg: &str) -> Result<String, Failure> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
    } else if arg.contains('[') || arg.contains("ends:") {
        Ok(arg.to_string())
    } else {
        Err(Failure::Usage(format!("{arg}: no such file")))
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn slope_cmd(a: &SlopeArgs, opts: &SlopeOptions, seed: u64) -> Out {
    let link = ColoredLink::new(PdCode::parse(&source(&a.pd)?)?, a.distinguished, a.colors.clone())?;
    let problem = link.problem()?;
    if a.symbolic {
        let param = a.parametrization.as_deref().map(Parametrization::parse).transpose()?;
        let s = symbolic_slope(&problem, param.as_ref(), seed)?;
        let text = s.to_text();
        return Ok((json!({"symbolic": text, "linking_vector": link.linking_vector()}), text));
    }
    let w = Character::parse(a.character.as_deref().unwrap_or_default())?;
    let out = if a.patch { patched_slope(&link, &w, opts)? } else { link_slope(&problem, &w, opts)? };
    let text = match &out.exact {
        Some(e) => format!("{} (exact {e})", out.slope),
        None => out.slope.to_string(),
    };
    Ok((to_json(&out), text))
}

fn alexander_cmd(a: &AlexanderArgs) -> Out {
    let pd = PdCode::parse(&source(&a.pd)?)?;
    let colors = a.colors.clone().unwrap_or_else(|| (0..pd.num_components()).collect());
    let ncolors = colors.iter().max().map_or(0, |m| m + 1);
    if a.conway {
        let c = conway_potential(&pd, &colors, ncolors)?;
        let text = c.to_text();
        let v = json!({
            "conway": text,
            "numerator": c.numer.to_string(),
            "over_t_minus_inverse": c.over_t_minus_inverse,
            "sign_resolved": c.sign_resolved,
        });
        return Ok((v, text));
    }
    let o = order_polynomial(&pd.wirtinger(&colors, ncolors)?, a.order)?;
    let text = o.polynomial().to_string();
    Ok((json!({"order": a.order, "polynomial": text, "nvars": o.nvars}), text))
}

fn beta_text(o: &BetaOutcome) -> String {
    format!("β_{} = {}", o.r, o.exact.clone().unwrap_or_else(|| o.value.to_string()))
}

fn burau_cmd(a: &BurauArgs) -> Out {
    let b = BraidWord::parse(&a.braid, a.n)?;
    let outs = match a.r {
        Some(r) => vec![beta_r(&b, r)?],
        None => beta_all(&b)?,
    };
    let text = outs.iter().map(beta_text).collect::<Vec<_>>().join("\n");
    let v = if a.r.is_some() { to_json(&outs[0]) } else { json!({ "values": outs }) };
    Ok((v, text))
}

fn splice_cmd(a: &SpliceArgs) -> Out {
    let text = if a.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        std::fs::read_to_string(&a.input).map_err(|e| Failure::Usage(format!("{}: {e}", a.input.display())))?
    };
    let input: SpliceInput = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("splice input: {e}")))?;
    let out = splice_assemble(&input)?;
    let mut text = format!("branch {:?}: σ = {}, η = {}", out.branch, out.sigma, out.eta);
    if let (Some(ds), Some(de)) = (out.delta_sigma, out.delta_eta) {
        text.push_str(&format!(", Δσ = {ds}, Δη = {de}"));
    }
    Ok((to_json(&out), text))
}

fn tangle_cmd(a: &TangleArgs) -> Out {
    let t = TangleDiagram::parse(&source(&a.tangle)?)?;
    let out = tangle_slope(&t, &Character::parse(&a.character)?)?;
    let text = out.slope.to_string();
    Ok((to_json(&out), text))
}

fn skein_cmd(a: &SkeinArgs) -> Out {
    if let Some(pd) = &a.pd {
        let pd = PdCode::parse(&source(pd)?)?;
        let colors = a.colors.clone().unwrap_or_else(|| vec![0; pd.num_components()]);
        let ncolors = colors.iter().max().map_or(0, |m| m + 1);
        let w = Character::parse(a.character.as_deref().unwrap_or_default())?;
        let j = skein_signature_jump(&pd, &colors, ncolors, a.crossing.unwrap_or_default(), &w)?;
        let text = format!("κ = {}, ratio {:?}, consistent: {}", j.kappa, j.ratio_status, j.consistent);
        return Ok((to_json(&j), text));
    }
    let names = a.tangles.as_deref().unwrap_or_default();
    let tangles = names.iter().map(|n| Ok(TangleDiagram::parse(&source(n)?)?)).collect::<Result<Vec<_>, Failure>>()?;
    let chars = a
        .characters
        .as_deref()
        .unwrap_or_default()
        .split(';')
        .map(|c| Character::parse(c.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if chars.len() != 3 {
        return Err(Failure::Usage("--characters needs three entries separated by `;`".into()));
    }
    let sigs = match a.signatures.as_deref() {
        None => None,
        Some([x, y, z]) => Some([*x, *y, *z]),
        Some(_) => return Err(Failure::Usage("--signatures needs three values".into())),
    };
    let r = skein_triple_check([&tangles[0], &tangles[1], &tangles[2]], [&chars[0], &chars[1], &chars[2]], sigs)?;
    let slopes = r.slopes.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let text = format!("slopes {slopes}; predicted Σσ = {}; matches: {:?}", r.predicted, r.matches);
    Ok((to_json(&r), text))
}

fn corpus_cmd(a: &CorpusArgs) -> Out {
    let manifest = match &a.manifest {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Manifest::from_json(&text)?
        }
        None => Manifest::bundled(),
    };
    let report = run_manifest(&manifest, &Resolver::new(a.dir.as_deref()));
    let v = to_json(&report);
    if !report.ok() {
        return Err(Failure::CorpusFailed(v));
    }
    let mut text = format!("{} passed, {} failed", report.passed, report.failed);
    for w in &report.warnings {
        text.push_str(&format!("\nwarning: {w}"));
    }
    Ok((v, text))
}

fn emit(format: Format, mut v: Value, text: &str) {
    match format {
        Format::Json => {
            if let Value::Object(m) = &mut v {
                m.insert("schema_version".into(), json!(SCHEMA_VERSION));
            }
            println!("{}", serde_json::to_string(&v).expect("json"));
        }
        Format::Text => println!("{text}"),
    }
}

fn run(cli: &Cli) -> ExitCode {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(1);
    }
    let mut opts = SlopeOptions::default();
    opts.policy.tol = cli.tol;
    let result = match &cli.command {
        Command::Slope(a) => slope_cmd(a, &opts, cli.seed),
        Command::Alexander(a) => alexander_cmd(a),
        Command::BurauBeta(a) => burau_cmd(a),
        Command::Splice(a) => splice_cmd(a),
        Command::TangleSlope(a) => tangle_cmd(a),
        Command::SkeinCheck(a) => skein_cmd(a),
        Command::Corpus(a) => corpus_cmd(a),
    };
    match result {
        Ok((v, text)) => {
            emit(cli.format, v, &text);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::CorpusFailed(v)) => {
            if let Some(rs) = v["results"].as_array() {
                for r in rs.iter().filter(|r| r["passed"] == false) {
                    eprintln!("FAIL {}: {}", r["name"].as_str().unwrap_or("?"), r["detail"].as_str().unwrap_or(""));
                }
            }
            emit(cli.format, v, "corpus failed");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Domain(_) | Error::Calibration(_) => 2,
                Error::IndeterminateRank { .. } => 3,
                Error::Parse(_) | Error::Structural(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
