mod plot;

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use slopecalc::bc::{check_exact, height_functor_rank, BCObject, ExactSequence, Node, QBCObject};
use slopecalc::cst::{battery, dichotomy, mv_check, Branch, SyntheticCohomology};
use slopecalc::ext::{ext_tables, Label};
use slopecalc::hn::{fn4_reduce, hn_filtration, is_acyclic, is_weakly_admissible, vst_dimension};
use slopecalc::polygon::{newton_polygon, newton_polygon_oracle, Polygon};
use slopecalc::{Error, FFSheaf, FilteredPhiModule, HodgeData, PhiModule, Rational, SearchOptions, Status};

#[derive(Parser)]
#[command(name = "slopecalc", version, about = "Slope calculus for filtered (phi,N)-modules and Fargues-Fontaine sheaves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file, or `-` for stdin
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Seed for randomized subobject searches
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Use brute-force verification paths
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, Subcommand)]
enum Command {
    /// Newton slopes of a polynomial or a (phi,N)-module
    Newton,
    /// Weights, t_H and dual of Hodge data
    Hodge,
    /// Harder-Narasimhan filtration
    Hn,
    /// Weak admissibility
    Wa,
    /// Acyclicity
    Acyclic,
    /// Lower the filtration to a weakly admissible one
    #[command(name = "fn4-reduce")]
    Fn4Reduce,
    /// Dimension of V_st
    Vst,
    /// Tensor product of two modules or two sheaves
    Tensor,
    /// Cohomology of a sheaf, or Hom between two sheaves
    Cohdim,
    /// Dimension of a BC or qBC object, or exactness of a sequence
    #[command(name = "bc-dim")]
    BcDim,
    /// Canonical filtration of a BC object
    Canfil,
    /// Ext dimensions between almost-C representations
    Ext,
    /// Equivalence battery on synthetic cohomology
    Battery,
    /// Surjective or positive-height image
    Dichotomy,
    /// Height comparison of two aligned exact rows
    #[command(name = "mv-check")]
    MvCheck,
    /// SVG of Newton and Hodge polygons
    Plot,
}

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_UNCERTIFIED: u8 = 2;
const EXIT_INPUT: u8 = 3;

struct Failure {
    code: u8,
    body: serde_json::Value,
}

impl Failure {
    fn input(kind: &str, message: String) -> Self {
        Failure {
            code: EXIT_INPUT,
            body: json!({ "error": { "kind": kind, "message": message } }),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Uncertified => EXIT_UNCERTIFIED,
            Error::NotAcyclic => EXIT_FALSE,
            _ => EXIT_INPUT,
        };
        let mut body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
        if let Error::Hypotheses(v) = &e {
            body["error"]["violations"] = serde_json::to_value(v).expect("serializable");
        }
        Failure { code, body }
    }
}

fn from_json(e: serde_json::Error) -> Failure {
    let kind = match e.classify() {
        serde_json::error::Category::Io => "io",
        serde_json::error::Category::Syntax => "syntax",
        serde_json::error::Category::Data => "schema",
        serde_json::error::Category::Eof => "eof",
    };
    Failure {
        code: EXIT_INPUT,
        body: json!({ "error": {
            "kind": kind,
            "message": e.to_string(),
            "line": e.line(),
            "column": e.column(),
        }}),
    }
}

struct Output {
    code: u8,
    text: String,
}

fn report<T: Serialize>(value: &T, code: u8) -> Result<Output, Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    Ok(Output { code, text })
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::CertifiedTrue => EXIT_TRUE,
        Status::CertifiedFalse => EXIT_FALSE,
        Status::Uncertified => EXIT_UNCERTIFIED,
    }
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(from_json)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyInput {
    p: u64,
    coeffs: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NewtonInput {
    Poly(PolyInput),
    Module(PhiModule),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Pair<T> {
    a: T,
    b: T,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TensorInput {
    Modules(Pair<PhiModule>),
    Sheaves(Pair<FFSheaf>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CohInput {
    Hom(Pair<FFSheaf>),
    Sheaf(FFSheaf),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BcInput {
    Sequence(ExactSequence),
    Qbc(QBCObject),
    Bc(BCObject),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtInput {
    x: Label,
    y: Label,
    #[serde(default = "one")]
    k_degree: u32,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DichotomyInput {
    hk: PhiModule,
    lattice: HodgeData,
    r: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MvInput {
    r: usize,
    a: ExactSequence,
    b: ExactSequence,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PlotInput {
    Filtered(FilteredPhiModule),
    Module(PhiModule),
    Hodge(HodgeData),
}

fn hodge_polygon(h: &HodgeData) -> Polygon {
    let slopes: Vec<(Rational, u64)> = h.weights().into_iter().map(|w| (Rational::from(w), 1)).collect();
    Polygon::from_slopes(&slopes)
}

fn run(cli: &Cli, text: &str) -> Result<Output, Failure> {
    let opts = SearchOptions {
        seed: cli.seed,
        oracle: cli.oracle,
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::Plot => Format::Svg,
        _ => Format::Json,
    });
    if format == Format::Svg && !matches!(cli.command, Command::Plot) {
        return Err(Failure::input("format", "only `plot` produces SVG".into()));
    }
    match cli.command {
        Command::Newton => {
            let slopes = match parse::<NewtonInput>(text)? {
                NewtonInput::Poly(PolyInput { p, coeffs }) if cli.oracle => newton_polygon_oracle(&coeffs, p)?,
                NewtonInput::Poly(PolyInput { p, coeffs }) => newton_polygon(&coeffs, p)?,
                NewtonInput::Module(m) if cli.oracle => m.newton_slopes_oracle(),
                NewtonInput::Module(m) => m.newton_slopes(),
            };
            report(&slopes, EXIT_TRUE)
        }
        Command::Hodge => {
            let h: HodgeData = parse(text)?;
            report(
                &json!({
                    "rank": h.rank(),
                    "weights": h.weights(),
                    "t_h": h.t_h(),
                    "dual": h.dual(),
                }),
                EXIT_TRUE,
            )
        }
        Command::Hn => {
            let m: FilteredPhiModule = parse(text)?;
            let hn = hn_filtration(&m, opts)?;
            let code = if hn.certified { EXIT_TRUE } else { EXIT_UNCERTIFIED };
            report(&hn, code)
        }
        Command::Wa | Command::Acyclic => {
            let m: FilteredPhiModule = parse(text)?;
            let v = if matches!(cli.command, Command::Wa) {
                is_weakly_admissible(&m, opts)?
            } else {
                is_acyclic(&m, opts)?
            };
            report(&v, status_code(v.status))
        }
        Command::Fn4Reduce => {
            let m: FilteredPhiModule = parse(text)?;
            report(&fn4_reduce(&m, opts)?, EXIT_TRUE)
        }
        Command::Vst => {
            let m: FilteredPhiModule = parse(text)?;
            report(&vst_dimension(&m, opts)?, EXIT_TRUE)
        }
        Command::Tensor => match parse::<TensorInput>(text)? {
            TensorInput::Modules(Pair { a, b }) => report(&a.tensor(&b)?, EXIT_TRUE),
            TensorInput::Sheaves(Pair { a, b }) => report(&a.tensor(&b)?, EXIT_TRUE),
        },
        Command::Cohdim => match parse::<CohInput>(text)? {
            CohInput::Sheaf(s) => report(&s.cohomology_dim(), EXIT_TRUE),
            CohInput::Hom(Pair { a, b }) => report(&a.hom_dim(&b), EXIT_TRUE),
        },
        Command::BcDim => match parse::<BcInput>(text)? {
            BcInput::Sequence(seq) => {
                let r = check_exact(&seq)?;
                let code = if r.exact { EXIT_TRUE } else { EXIT_FALSE };
                report(&r, code)
            }
            BcInput::Qbc(q) => {
                let node = Node::Qbc(q.clone());
                report(
                    &json!({
                        "dimension": q.dimension(),
                        "curvature_le0": q.quotient.curvature_le0(),
                        "height_rank": height_functor_rank(&node, None),
                    }),
                    EXIT_TRUE,
                )
            }
            BcInput::Bc(b) => {
                let node = Node::Bc(b.clone());
                report(
                    &json!({
                        "dimension": b.dimension(),
                        "hn_slopes": b.hn_slopes(),
                        "curvature_le0": b.curvature_le0(),
                        "height_rank": height_functor_rank(&node, None),
                    }),
                    EXIT_TRUE,
                )
            }
        },
        Command::Canfil => {
            let b: BCObject = parse(text)?;
            let (gt0, eq0, lt0) = b.canonical_filtration();
            report(&json!({ "gt0": gt0, "eq0": eq0, "lt0": lt0 }), EXIT_TRUE)
        }
        Command::Ext => {
            let e: ExtInput = parse(text)?;
            let r = ext_tables(&e.x, &e.y, e.k_degree)?;
            let code = if r.is_tabulated() { EXIT_TRUE } else { EXIT_UNCERTIFIED };
            report(&r, code)
        }
        Command::Battery => {
            let s: SyntheticCohomology = parse(text)?;
            let r = battery(&s, opts)?;
            report(&r, status_code(r.status()))
        }
        Command::Dichotomy => {
            let d: DichotomyInput = parse(text)?;
            let r = dichotomy(&d.hk, &d.lattice, d.r, opts)?;
            let code = match r.branch {
                Branch::Surjective => EXIT_TRUE,
                Branch::PositiveHeightImage => EXIT_FALSE,
            };
            report(&r, code)
        }
        Command::MvCheck => {
            let m: MvInput = parse(text)?;
            let r = mv_check(&m.a, &m.b, m.r)?;
            let code = match (r.certified, r.equal) {
                (false, _) => EXIT_UNCERTIFIED,
                (true, true) => EXIT_TRUE,
                (true, false) => EXIT_FALSE,
            };
            report(&r, code)
        }
        Command::Plot => {
            let (newton, hodge) = match parse::<PlotInput>(text)? {
                PlotInput::Filtered(m) => (Some(m.module().newton_slopes()), Some(hodge_polygon(m.hodge()))),
                PlotInput::Module(m) => (Some(m.newton_slopes()), None),
                PlotInput::Hodge(h) => (None, Some(hodge_polygon(&h))),
            };
            let newton = newton.map(|s| Polygon::from_slopes(&s));
            if format == Format::Json {
                return report(&json!({ "newton": newton, "hodge": hodge }), EXIT_TRUE);
            }
            let mut curves = Vec::new();
            if let Some(p) = &newton {
                curves.push(plot::Curve {
                    name: "newton",
                    color: "#1f77b4",
                    dashed: false,
                    vertices: p.vertices(),
                });
            }
            if let Some(p) = &hodge {
                curves.push(plot::Curve {
                    name: "hodge",
                    color: "#d62728",
                    dashed: true,
                    vertices: p.vertices(),
                });
            }
            Ok(Output {
                code: EXIT_TRUE,
                text: plot::svg(&curves),
            })
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(PathBuf::from(path)).map(|t| text = t)
    };
    res.map_err(|e| Failure::input("io", format!("{path}: {e}")))?;
    Ok(text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = json!({ "error": { "kind": "usage", "message": e.to_string() } });
            eprintln!("{body}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match read_input(&cli.input).and_then(|t| run(&cli, &t)) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}
