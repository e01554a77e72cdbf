//! Command-line front end for `holeforge`.
//!
//! Exit codes: 0 when the answer is yes (member, good, accepted, written),
//! 1 when it is no, 2 on usage, input or resource errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use holeforge::certificate::{emit, verify, Verdict};
use holeforge::good_triples::{
    certify, family, is_good_triple, search_good_triples, witness_hole, GoodTriple,
};
use holeforge::lifting::{deep_hole_construction, lift_lambda};
use holeforge::oracle::{
    enumerate_holes_parallel, in_saturation, SemigroupOracle, DEFAULT_MAX_DEGREE,
};
use holeforge::simplex::{fmt_lambdas, DEFAULT_GENERATOR_LIMIT};
use holeforge::{Error, FacetId, LatticePoint, RectSimplex};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "holeforge",
    version,
    about = "Holes of rectangular-simplex affine semigroups"
)]
pub struct CliConfig {
    /// Refuse to build more degree-one generators than this.
    #[arg(long, global = true, env = "HOLEFORGE_MAX_GENERATORS", default_value_t = DEFAULT_GENERATOR_LIMIT)]
    pub max_generators: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertices, lcm, facet forms and generator count of Δ(λ).
    Simplex {
        #[arg(num_args = 3, required = true, value_parser = parse_big)]
        lambdas: Vec<BigInt>,
    },
    /// Membership of a point in Q(λ): `member a b c -- z1 z2 z3 z4`.
    Member {
        #[arg(num_args = 3, required = true, value_parser = parse_big)]
        lambdas: Vec<BigInt>,
        #[arg(last = true, num_args = 4, required = true, allow_hyphen_values = true, value_parser = parse_big)]
        point: Vec<BigInt>,
        /// Largest degree the oracle will search.
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: u64,
    },
    /// Reduced holes with skew height up to a bound.
    Holes {
        #[arg(num_args = 3, required = true, value_parser = parse_big)]
        lambdas: Vec<BigInt>,
        /// Defaults to L = lcm(λ).
        #[arg(long)]
        max_skew_height: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Good-triple construction, check or search.
    GoodTriple(GoodTripleArgs),
    /// Writes a certificate for a good triple.
    Certify {
        #[arg(num_args = 3, required = true, value_parser = parse_big)]
        lambdas: Vec<BigInt>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Applies the lift along one coordinate facet.
    Lift {
        #[arg(num_args = 3, required = true, value_parser = parse_big)]
        lambdas: Vec<BigInt>,
        #[arg(long)]
        facet: usize,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Builds and certifies a simplex with all holes at height >= K.
    Construct {
        #[arg(long = "k")]
        k: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Checks a certificate file.
    Verify { file: PathBuf },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false)))]
pub struct GoodTripleArgs {
    /// Member of the explicit family with this odd λ_1 >= 5.
    #[arg(long, group = "mode", value_parser = parse_big)]
    pub from_lambda1: Option<BigInt>,
    #[arg(long, group = "mode", num_args = 3, value_parser = parse_big)]
    pub check: Option<Vec<BigInt>>,
    /// All good triples with λ_3 <= N.
    #[arg(long, group = "mode")]
    pub search: Option<u64>,
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    s.parse::<BigInt>()
        .map_err(|_| format!("`{s}` is not an integer"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match CliConfig::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Core(Error::Certification { clause, detail })) => {
            let _ = writeln!(err, "error: certification failed in `{clause}`: {detail}");
            EXIT_NO
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(io::Error),
    Usage(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("csv output: {e}"))
    }
}

type Exit = Result<i32, Failure>;

fn execute(cli: &CliConfig, out: &mut dyn Write) -> Exit {
    match &cli.command {
        Command::Simplex { lambdas } => simplex(cli, lambdas, out),
        Command::Member {
            lambdas,
            point,
            max_degree,
        } => member(cli, lambdas, point, *max_degree, out),
        Command::Holes {
            lambdas,
            max_skew_height,
            workers,
            output,
        } => holes(
            cli,
            lambdas,
            *max_skew_height,
            *workers,
            output.as_deref(),
            out,
        ),
        Command::GoodTriple(args) => good_triple(cli, args, out),
        Command::Certify { lambdas, output } => certify_cmd(lambdas, output.as_deref(), out),
        Command::Lift {
            lambdas,
            facet,
            times,
        } => lift(cli, lambdas, *facet, *times, out),
        Command::Construct { k, output } => construct(*k, output.as_deref(), out),
        Command::Verify { file } => verify_cmd(file, out),
    }
}

fn open_simplex(cli: &CliConfig, lambdas: &[BigInt]) -> Result<RectSimplex, Failure> {
    Ok(RectSimplex::with_generator_limit(
        lambdas,
        cli.max_generators,
    )?)
}

fn strs(values: &[BigInt]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|v| Value::String(v.to_string()))
            .collect(),
    )
}

fn point_json(p: &LatticePoint) -> Value {
    strs(p.coords())
}

fn text_only(cli: &CliConfig, what: &str) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(Failure::Usage(format!("`{what}` has no csv output")));
    }
    Ok(())
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn simplex(cli: &CliConfig, lambdas: &[BigInt], out: &mut dyn Write) -> Exit {
    text_only(cli, "simplex")?;
    let s = open_simplex(cli, lambdas)?;
    let count = s.degree_one_generators()?.len();
    let forms = s.facet_forms();
    if cli.format == Format::Json {
        let facets: serde_json::Map<String, Value> = forms
            .iter()
            .map(|(id, f)| (id.to_string(), strs(f.coeffs())))
            .collect();
        print_json(
            out,
            &json!({
                "lambdas": strs(s.lambdas()),
                "lcm": s.lcm().to_string(),
                "vertices": s.vertices().iter().map(point_json).collect::<Vec<_>>(),
                "facets": facets,
                "degree_one_generators": count,
            }),
        )?;
        return Ok(EXIT_YES);
    }
    writeln!(out, "λ = {}", fmt_lambdas(s.lambdas()))?;
    writeln!(out, "L = {}", s.lcm())?;
    writeln!(out, "vertices:")?;
    for (i, v) in s.vertices().iter().enumerate() {
        writeln!(out, "  v{i} = {v}")?;
    }
    writeln!(out, "facet forms:")?;
    for (id, f) in &forms {
        writeln!(out, "  {id} = {f}")?;
    }
    writeln!(out, "degree-one generators: {count}")?;
    Ok(EXIT_YES)
}

fn member(
    cli: &CliConfig,
    lambdas: &[BigInt],
    point: &[BigInt],
    max_degree: u64,
    out: &mut dyn Write,
) -> Exit {
    text_only(cli, "member")?;
    let s = open_simplex(cli, lambdas)?;
    let z = LatticePoint::new(point.to_vec())?;
    let mut oracle = SemigroupOracle::with_max_degree(&s, max_degree)?;
    let witness = oracle.member(&z)?;
    let saturated = in_saturation(&s, &z)?;
    let code = if witness.is_some() { EXIT_YES } else { EXIT_NO };

    if cli.format == Format::Json {
        print_json(
            out,
            &json!({
                "lambdas": strs(s.lambdas()),
                "point": point_json(&z),
                "member": witness.is_some(),
                "in_saturation": saturated,
                "hole": witness.is_none() && saturated,
                "witness": witness.as_ref().map(|w| w.summands().iter().map(point_json).collect::<Vec<_>>()),
            }),
        )?;
        return Ok(code);
    }
    match (&witness, saturated) {
        (Some(w), _) => {
            writeln!(out, "in Q(λ)")?;
            let parts: Vec<String> = w.summands().iter().map(|g| g.to_string()).collect();
            if parts.is_empty() {
                writeln!(out, "witness: empty sum")?;
            } else {
                writeln!(out, "witness: {}", parts.join(" + "))?;
            }
        }
        (None, true) => writeln!(out, "not in Q(λ); in saturation; hole")?,
        (None, false) => writeln!(out, "not in Q(λ); not in saturation")?,
    }
    Ok(code)
}

const COORD_FACETS: [FacetId; 3] = [
    FacetId::Coordinate(1),
    FacetId::Coordinate(2),
    FacetId::Coordinate(3),
];

fn holes(
    cli: &CliConfig,
    lambdas: &[BigInt],
    max_skew_height: Option<u64>,
    workers: usize,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Exit {
    let s = open_simplex(cli, lambdas)?;
    let bound = match max_skew_height {
        Some(h) => h,
        None => s
            .lcm()
            .to_u64()
            .ok_or_else(|| Failure::Usage("L does not fit; pass --max-skew-height".into()))?,
    };
    let found = enumerate_holes_parallel(&s, bound, workers)?;

    let mut buf: Vec<u8> = Vec::new();
    match cli.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record([
                "z1",
                "z2",
                "z3",
                "z4",
                "degree",
                "skew_height",
                "height_F1",
                "height_F2",
                "height_F3",
            ])?;
            for h in &found.holes {
                let mut row: Vec<String> = h.point.coords().iter().map(|c| c.to_string()).collect();
                row.push(h.point.degree().to_string());
                row.push(h.skew_height().to_string());
                row.extend(COORD_FACETS.iter().map(|f| h.heights[f].to_string()));
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = found
                .holes
                .iter()
                .map(|h| {
                    let heights: serde_json::Map<String, Value> = h
                        .heights
                        .iter()
                        .map(|(id, v)| (id.to_string(), Value::String(v.to_string())))
                        .collect();
                    json!({
                        "point": point_json(&h.point),
                        "degree": h.point.degree().to_string(),
                        "heights": heights,
                    })
                })
                .collect();
            print_json(
                &mut buf,
                &json!({
                    "lambdas": strs(s.lambdas()),
                    "max_skew_height": bound,
                    "holes": rows,
                }),
            )?;
        }
        Format::Text => {
            writeln!(
                buf,
                "λ = {}: {} holes with skew height in 1..={bound}",
                fmt_lambdas(s.lambdas()),
                found.holes.len()
            )?;
            for h in &found.holes {
                let heights: Vec<String> = h
                    .heights
                    .iter()
                    .map(|(id, v)| format!("{id}={v}"))
                    .collect();
                writeln!(
                    buf,
                    "{}  degree {}  {}",
                    h.point,
                    h.point.degree(),
                    heights.join(" ")
                )?;
            }
        }
    }
    emit_to(output, &buf, out, || format!("{} holes", found.holes.len()))?;
    Ok(EXIT_YES)
}

/// Writes `bytes` to `path` (with a one-line note on `out`) or to `out`.
fn emit_to(
    path: Option<&Path>,
    bytes: &[u8],
    out: &mut dyn Write,
    note: impl FnOnce() -> String,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, bytes)?;
            writeln!(out, "{}; wrote {}", note(), p.display())?;
        }
        None => out.write_all(bytes)?,
    }
    Ok(())
}

fn good_triple(cli: &CliConfig, args: &GoodTripleArgs, out: &mut dyn Write) -> Exit {
    text_only(cli, "good-triple")?;
    let json = cli.format == Format::Json;
    if let Some(m) = &args.from_lambda1 {
        let t = family(m)?;
        return describe_triple(&t, json, out).map(|_| EXIT_YES);
    }
    if let Some(l) = &args.check {
        let check = is_good_triple(l)?;
        let failing: Vec<String> = check.failing.iter().map(|c| c.to_string()).collect();
        if json {
            print_json(
                out,
                &json!({
                    "lambdas": strs(l),
                    "good": check.is_good(),
                    "pairwise_coprime": check.pairwise_coprime,
                    "skew_delta": check.skew_delta.to_string(),
                    "gap_condition": check.gap,
                    "failing": failing,
                }),
            )?;
        } else if check.is_good() {
            writeln!(
                out,
                "{} is a good triple (skew delta = {})",
                fmt_lambdas(l),
                check.skew_delta
            )?;
        } else {
            writeln!(
                out,
                "{} is not a good triple: fails {} (skew delta = {})",
                fmt_lambdas(l),
                failing.join(", "),
                check.skew_delta
            )?;
        }
        return Ok(if check.is_good() { EXIT_YES } else { EXIT_NO });
    }
    let bound = args.search.expect("clap enforces one mode");
    let found = search_good_triples(bound);
    if json {
        let rows: Vec<Value> = found.iter().map(|t| strs(t.lambdas())).collect();
        print_json(out, &json!({ "max_lambda3": bound, "triples": rows }))?;
    } else {
        for t in &found {
            writeln!(out, "{t}")?;
        }
    }
    Ok(EXIT_YES)
}

fn describe_triple(t: &GoodTriple, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let q = witness_hole(t);
    if json {
        return print_json(
            out,
            &json!({
                "lambdas": strs(t.lambdas()),
                "p": point_json(&t.p()),
                "delta": point_json(&t.delta()),
                "witness_hole": point_json(&q),
                "min_skew_height": t.min_skew_height().to_string(),
            }),
        );
    }
    writeln!(out, "λ = {t}")?;
    writeln!(out, "p = {}", t.p())?;
    writeln!(out, "δ = {}", t.delta())?;
    writeln!(out, "witness hole q = {q}")?;
    writeln!(out, "holes have skew height >= {}", t.min_skew_height())?;
    Ok(())
}

fn certify_cmd(lambdas: &[BigInt], output: Option<&Path>, out: &mut dyn Write) -> Exit {
    let check = is_good_triple(lambdas)?;
    if !check.is_good() {
        let failing: Vec<String> = check.failing.iter().map(|c| c.to_string()).collect();
        writeln!(
            out,
            "{} is not a good triple: fails {}",
            fmt_lambdas(lambdas),
            failing.join(", ")
        )?;
        return Ok(EXIT_NO);
    }
    let t = match GoodTriple::new(lambdas) {
        Ok(t) => t,
        Err(e) => {
            writeln!(out, "cannot certify {}: {e}", fmt_lambdas(lambdas))?;
            return Ok(EXIT_NO);
        }
    };
    let cert = certify(&t)?;
    emit_to(output, &emit(&cert), out, || {
        format!(
            "certified {}: holes at skew height >= {}",
            fmt_lambdas(lambdas),
            cert.claims.min_skew_height
        )
    })?;
    Ok(EXIT_YES)
}

fn lift(
    cli: &CliConfig,
    lambdas: &[BigInt],
    facet: usize,
    times: usize,
    out: &mut dyn Write,
) -> Exit {
    text_only(cli, "lift")?;
    let mut cur = lambdas.to_vec();
    let mut rows = Vec::new();
    for n in 1..=times {
        let step = lift_lambda(&cur, facet)?;
        if cli.format == Format::Json {
            rows.push(json!({
                "facet": facet,
                "ell": step.ell.to_string(),
                "lambdas_before": strs(&step.lambdas_before),
                "lambdas_after": strs(&step.lambdas_after),
                "cofactor": step.cofactor().to_string(),
                "beta": strs(step.beta.coeffs()),
            }));
        } else {
            writeln!(
                out,
                "step {n}: facet {facet}, ℓ = {}, {} -> {}, L/λ_{facet} = {}, β = {}",
                step.ell,
                fmt_lambdas(&step.lambdas_before),
                fmt_lambdas(&step.lambdas_after),
                step.cofactor(),
                step.beta
            )?;
        }
        cur = step.lambdas_after;
    }
    if cli.format == Format::Json {
        print_json(out, &json!({ "steps": rows, "lambdas": strs(&cur) }))?;
    }
    Ok(EXIT_YES)
}

fn construct(k: u64, output: Option<&Path>, out: &mut dyn Write) -> Exit {
    let (trace, s, cert) = deep_hole_construction(k)?;
    emit_to(output, &emit(&cert), out, || {
        format!(
            "k = {k}: λ = {} after {} lifts, every hole at height >= {} above every facet",
            fmt_lambdas(s.lambdas()),
            trace.len(),
            cert.claims.min_height_all_facets
        )
    })?;
    Ok(EXIT_YES)
}

fn verify_cmd(file: &Path, out: &mut dyn Write) -> Exit {
    let bytes = fs::read(file)?;
    match verify(&bytes)? {
        Verdict::Accepted => {
            writeln!(out, "accepted")?;
            Ok(EXIT_YES)
        }
        Verdict::Rejected { clause, detail } => {
            writeln!(out, "rejected: {clause}: {detail}")?;
            Ok(EXIT_NO)
        }
    }
}
