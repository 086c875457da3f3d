//! Command-line driver: enumerate resonant triads, cross-check against the
//! brute-force reference, and analyze cluster topology, multiplicity and
//! amplitude ODE systems.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O or malformed input, 3 capacity
//! refusal, 4 verification mismatch.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use triads_core::odegen::{self, OdeFormat};
use triads_core::topology::{self, Shape};
use triads_core::{brute_enumerate, enumerate, solfile, DispersionSpec, Error, SolutionSet, Triad};

#[derive(Parser)]
#[command(
    name = "triads",
    version,
    about = "Exact enumeration and cluster analysis of resonant wave triads"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find every resonant triad in the domain and write the solution set
    Enumerate(EnumerateArgs),
    /// Compare the solver against the brute-force reference enumerator
    Check(CheckArgs),
    /// Component census, multiplicity histogram and optional DOT graphs
    Topology(TopologyArgs),
    /// Coupled amplitude ODE system of every component
    Ode(OdeArgs),
    /// Triad counts inside nested partial domains
    Stats(StatsArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Dispersion law: sphere, channel, or spec:<file>
    #[arg(long)]
    dispersion: String,
    /// Upper bound D of the wavenumber domain
    #[arg(long, value_parser = value_parser!(u32).range(1..))]
    domain: u32,
    /// Worker threads
    #[arg(long, default_value_t = 1, value_parser = value_parser!(u64).range(1..))]
    jobs: u64,
    /// Output file; solution set goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Serialization format
    #[arg(long, value_enum, default_value_t = SolFormat::Json)]
    format: SolFormat,
}

#[derive(Args)]
struct CheckArgs {
    /// Dispersion law: sphere, channel, or spec:<file>
    #[arg(long)]
    dispersion: String,
    /// Upper bound D of the wavenumber domain
    #[arg(long, value_parser = value_parser!(u32).range(1..))]
    domain: u32,
    /// Worker threads for the fast enumerator
    #[arg(long, default_value_t = 1, value_parser = value_parser!(u64).range(1..))]
    jobs: u64,
}

/// Input selector shared by the analysis commands: an existing solution
/// file, or inline enumeration parameters.
#[derive(Args)]
struct SourceArgs {
    /// Solution file to analyze (JSON)
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["dispersion", "domain", "jobs"])]
    input: Option<PathBuf>,
    /// Dispersion law: sphere, channel, or spec:<file>
    #[arg(long, requires = "domain")]
    dispersion: Option<String>,
    /// Upper bound D of the wavenumber domain
    #[arg(long, requires = "dispersion", value_parser = value_parser!(u32).range(1..))]
    domain: Option<u32>,
    /// Worker threads for inline enumeration
    #[arg(long, default_value_t = 1, value_parser = value_parser!(u64).range(1..))]
    jobs: u64,
}

#[derive(Args)]
struct TopologyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Output directory for census.json and multiplicity.csv; a text
    /// summary goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write vectors.dot and triads.dot
    #[arg(long, requires = "out")]
    dot: bool,
}

#[derive(Args)]
struct OdeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Output directory, one file per component; text goes to stdout when
    /// omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; json requires --out
    #[arg(long, value_enum, default_value_t = OdeFmt::Text)]
    format: OdeFmt,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated list of radii, strictly ascending
    #[arg(long, required = true, value_delimiter = ',')]
    radii: Vec<u32>,
    /// Restrict the CSV to one shape's column; both when omitted
    #[arg(long, value_enum)]
    shape: Option<ShapeArg>,
    /// Output file; CSV goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OdeFmt {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Square,
    Circle,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn failure_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => 1,
        Failure::Core(e) => match e {
            Error::InvalidSpec(_) => 1,
            Error::Parse(_) | Error::InvalidSolutionFile(_) | Error::Io(_) => 2,
            Error::Capacity { .. } | Error::OracleCap { .. } => 3,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Check(args) => cmd_check(args),
        Command::Topology(args) => cmd_topology(args),
        Command::Ode(args) => cmd_ode(args),
        Command::Stats(args) => cmd_stats(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(failure_code(&f))
        }
    }
}

fn parse_dispersion(s: &str) -> Result<DispersionSpec, Failure> {
    match s {
        "sphere" => Ok(DispersionSpec::sphere()),
        "channel" => Ok(DispersionSpec::channel()),
        _ => match s.strip_prefix("spec:") {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                Ok(DispersionSpec::from_json(&text)?)
            }
            None => Err(Failure::Usage(format!(
                "unknown dispersion '{s}': expected sphere, channel, or spec:<file>"
            ))),
        },
    }
}

fn load_set(source: &SourceArgs) -> Result<SolutionSet, Failure> {
    if let Some(path) = &source.input {
        let text = fs::read_to_string(path)?;
        return Ok(solfile::from_json(&text)?);
    }
    match (&source.dispersion, source.domain) {
        (Some(d), Some(domain)) => {
            let spec = parse_dispersion(d)?;
            Ok(enumerate(&spec, domain, source.jobs as usize)?)
        }
        _ => Err(Failure::Usage(
            "provide --in FILE or --dispersion and --domain".into(),
        )),
    }
}

fn summary_line(set: &SolutionSet) -> String {
    format!(
        "solutions={} domain={} dispersion={}",
        set.len(),
        set.domain,
        set.spec.name
    )
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<ExitCode, Failure> {
    let spec = parse_dispersion(&args.dispersion)?;
    let set = enumerate(&spec, args.domain, args.jobs as usize)?;
    let body = match args.format {
        SolFormat::Json => solfile::to_json(&set),
        SolFormat::Csv => solfile::to_csv(&set),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, body)?;
            println!("{}", summary_line(&set));
        }
        None => {
            print!("{body}");
            eprintln!("{}", summary_line(&set));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, Failure> {
    let spec = parse_dispersion(&args.dispersion)?;
    let reference = brute_enumerate(&spec, args.domain)?;
    let solver = enumerate(&spec, args.domain, args.jobs as usize)?;
    if solver.triads == reference.triads {
        println!("check ok: {}", summary_line(&solver));
        return Ok(ExitCode::SUCCESS);
    }
    let solver_set: BTreeSet<&Triad> = solver.triads.iter().collect();
    let reference_set: BTreeSet<&Triad> = reference.triads.iter().collect();
    let missing: Vec<&Triad> = reference_set.difference(&solver_set).copied().collect();
    let extra: Vec<&Triad> = solver_set.difference(&reference_set).copied().collect();
    eprintln!(
        "check failed: {} reference-only, {} solver-only",
        missing.len(),
        extra.len()
    );
    let mut shown = 0;
    for t in &missing {
        if shown == 10 {
            break;
        }
        eprintln!("  reference only: {t}");
        shown += 1;
    }
    for t in &extra {
        if shown == 10 {
            break;
        }
        eprintln!("  solver only: {t}");
        shown += 1;
    }
    Ok(ExitCode::from(4))
}

fn triad_row(t: &Triad) -> [u32; 6] {
    let [k1, k2, k3] = t.vectors();
    [k1.n, k1.m, k2.n, k2.m, k3.n, k3.m]
}

fn label_totals(classes: &[topology::ComponentClass]) -> BTreeMap<String, u64> {
    let mut totals = BTreeMap::new();
    for c in classes {
        *totals.entry(c.label.to_string()).or_insert(0) += 1;
    }
    totals
}

fn census_json(set: &SolutionSet, classes: &[topology::ComponentClass]) -> String {
    #[derive(Serialize)]
    struct Component {
        triads: Vec<[u32; 6]>,
        class_label: String,
        certificate_hash: String,
    }
    #[derive(Serialize)]
    struct Doc {
        triad_count: usize,
        component_count: usize,
        distinct_certificates: usize,
        totals: BTreeMap<String, u64>,
        components: Vec<Component>,
    }
    let distinct: BTreeSet<&[u8]> = classes.iter().map(|c| c.certificate.as_slice()).collect();
    let doc = Doc {
        triad_count: set.len(),
        component_count: classes.len(),
        distinct_certificates: distinct.len(),
        totals: label_totals(classes),
        components: classes
            .iter()
            .map(|c| Component {
                triads: c
                    .triad_indices
                    .iter()
                    .map(|&i| triad_row(&set.triads[i]))
                    .collect(),
                class_label: c.label.to_string(),
                certificate_hash: c.certificate_hash(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("census serialization is infallible");
    text.push('\n');
    text
}

fn multiplicity_csv(hist: &BTreeMap<u32, u64>) -> String {
    let mut out = String::from("multiplicity,vectors\n");
    for (mult, vectors) in hist {
        out.push_str(&format!("{mult},{vectors}\n"));
    }
    out
}

fn cmd_topology(args: TopologyArgs) -> Result<ExitCode, Failure> {
    let set = load_set(&args.source)?;
    let (vg, tg) = topology::build_graphs(&set);
    let classes = topology::classify_components(&tg);
    let hist = topology::multiplicity_histogram(&set);
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("census.json"), census_json(&set, &classes))?;
            fs::write(dir.join("multiplicity.csv"), multiplicity_csv(&hist))?;
            if args.dot {
                fs::write(dir.join("vectors.dot"), topology::vector_graph_dot(&vg))?;
                fs::write(dir.join("triads.dot"), topology::triad_graph_dot(&tg))?;
            }
            println!(
                "triads={} components={} written to {}",
                set.len(),
                classes.len(),
                dir.display()
            );
        }
        None => {
            let distinct: BTreeSet<&[u8]> =
                classes.iter().map(|c| c.certificate.as_slice()).collect();
            println!(
                "triads={} components={} domain={} dispersion={}",
                set.len(),
                classes.len(),
                set.domain,
                set.spec.name
            );
            println!("census:");
            for (label, count) in label_totals(&classes) {
                println!("  {label}: {count}");
            }
            println!("distinct certificates: {}", distinct.len());
            println!("multiplicity histogram:");
            for (mult, vectors) in &hist {
                println!("  {mult}: {vectors}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ode(args: OdeArgs) -> Result<ExitCode, Failure> {
    if args.format == OdeFmt::Json && args.out.is_none() {
        return Err(Failure::Usage("--format json requires --out".into()));
    }
    let set = load_set(&args.source)?;
    let (_, tg) = topology::build_graphs(&set);
    let (format, ext) = match args.format {
        OdeFmt::Text => (OdeFormat::Text, "txt"),
        OdeFmt::Json => (OdeFormat::Structured, "json"),
    };
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
    }
    for (i, comp) in tg.components().iter().enumerate() {
        let triads: Vec<Triad> = comp.iter().map(|&idx| set.triads[idx]).collect();
        let system = odegen::generate(&triads);
        let text = odegen::emit(&system, format);
        match &args.out {
            Some(dir) => fs::write(dir.join(format!("component_{i:04}.{ext}")), text)?,
            None => {
                println!("# component {i}");
                print!("{text}");
                println!();
            }
        }
    }
    match &args.out {
        Some(dir) => println!(
            "components={} written to {}",
            tg.components().len(),
            dir.display()
        ),
        None => eprintln!("components={}", tg.components().len()),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode, Failure> {
    if !args.radii.windows(2).all(|w| w[0] < w[1]) {
        return Err(Failure::Usage("radii must be strictly ascending".into()));
    }
    let set = load_set(&args.source)?;
    let square = match args.shape {
        Some(ShapeArg::Circle) => None,
        _ => Some(topology::partial_domain_counts(&set, &args.radii, Shape::Square)),
    };
    let circle = match args.shape {
        Some(ShapeArg::Square) => None,
        _ => Some(topology::partial_domain_counts(&set, &args.radii, Shape::Circle)),
    };
    let mut csv = String::from("radius");
    if square.is_some() {
        csv.push_str(",square_count");
    }
    if circle.is_some() {
        csv.push_str(",circle_count");
    }
    csv.push('\n');
    for (i, radius) in args.radii.iter().enumerate() {
        csv.push_str(&radius.to_string());
        if let Some(sq) = &square {
            csv.push_str(&format!(",{}", sq[i]));
        }
        if let Some(ci) = &circle {
            csv.push_str(&format!(",{}", ci[i]));
        }
        csv.push('\n');
    }
    match &args.out {
        Some(path) => {
            fs::write(path, csv)?;
            println!("radii={} written to {}", args.radii.len(), path.display());
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
