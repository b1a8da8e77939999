use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mtrdl::constructions::{matroidal_space, maximal_rank_poly, msp_build};
use mtrdl::error::{Error, Result};
use mtrdl::feynman::{diagram_poly, symanzik_f, symanzik_u};
use mtrdl::flags::{flag_dc_split, flag_poly};
use mtrdl::json::{
    from_str, singleton_data_build, CoeffsJson, FlagJson, GraphJson, MatroidJson, PolyJson, SingletonDataJson,
};
use mtrdl::matroid::bits;
use mtrdl::{fsing, jets, Field, SingletonData};

use crate::checks::{self, Fixture, Outcome};

#[derive(Parser, Debug)]
#[command(name = "mtrdl", version, about = "Matroid polynomials: constructions, identities, jet probes, Frobenius certificates")]
pub struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Point-count budget (plain integer or 1e9 style).
    #[arg(long, global = true, env = "MTRDL_BUDGET", value_parser = parse_budget)]
    budget: Option<u128>,
    #[command(subcommand)]
    verb: Verb,
}

fn parse_budget(s: &str) -> std::result::Result<u128, String> {
    jets::parse_budget(s).ok_or_else(|| format!("not a budget: {s}"))
}

/// Comma-separated list such as `0,2,3`.
#[derive(Clone, Debug)]
struct List<T>(Vec<T>);

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<List<T>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| format!("not a number: {t}")))
        .collect::<std::result::Result<_, _>>()
        .map(List)
}

#[derive(Subcommand, Debug)]
enum Verb {
    #[command(subcommand)]
    Matroid(MatroidCmd),
    #[command(subcommand)]
    Poly(PolyCmd),
    #[command(subcommand)]
    Flag(FlagCmd),
    #[command(subcommand)]
    Feynman(FeynmanCmd),
    #[command(subcommand)]
    Jets(JetsCmd),
    #[command(subcommand)]
    Fsing(FsingCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum MatroidCmd {
    /// Rank, connectivity and circuits.
    Info { file: PathBuf },
    Dual { file: PathBuf },
    /// Handle decomposition as a nested chain of index sets.
    Handles { file: PathBuf },
    /// Multivariate Tutte polynomial.
    Tutte { file: PathBuf },
}

#[derive(Args, Debug)]
struct MatroidInput {
    #[arg(long)]
    matroid: PathBuf,
    /// "ones" or a JSON file of basis coefficients.
    #[arg(long, default_value = "ones")]
    coeffs: String,
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    /// Σ c_B x^B.
    Msp {
        #[command(flatten)]
        input: MatroidInput,
        #[arg(short)]
        p: Option<u32>,
    },
    Maxrank {
        #[arg(long)]
        matroid: PathBuf,
    },
    /// Deletion-Contraction axiom check.
    Matroidal {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        sigma: Option<PathBuf>,
    },
    /// Linear span of matroidal polynomials (|E| ≤ 4).
    Search {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(long)]
        sigma: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum FlagCmd {
    Poly {
        #[arg(long)]
        flag: PathBuf,
    },
    Dc {
        #[arg(long)]
        flag: PathBuf,
        #[arg(long)]
        edge: usize,
    },
    Handle {
        #[arg(long)]
        flag: PathBuf,
        #[arg(long, value_parser = parse_list::<usize>)]
        handle: List<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum FeynmanCmd {
    /// U, F and U(1 + Σ m² x) + F.
    Symanzik {
        #[arg(long)]
        graph: PathBuf,
    },
    Kinematics {
        #[arg(long)]
        graph: PathBuf,
    },
    Support {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Integrand with the Euler identity check.
    Integrand {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum JetsCmd {
    /// Arc generators of order ≤ m.
    Prolong {
        #[arg(long)]
        poly: PathBuf,
        #[arg(short)]
        m: u32,
        #[arg(short)]
        p: Option<u32>,
    },
    Count {
        #[arg(long)]
        poly: PathBuf,
        #[arg(short)]
        m: u32,
        #[arg(short)]
        p: u32,
    },
    Probe {
        #[arg(long)]
        poly: PathBuf,
        #[arg(short)]
        m: u32,
        #[arg(long, value_parser = parse_list::<u32>, default_value = "3,5,7")]
        primes: List<u32>,
        #[arg(long, default_value_t = 8)]
        bound: u32,
    },
    /// Boolean arrangement reference count against brute force.
    Boolean {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        m: u32,
        #[arg(short)]
        p: u32,
    },
}

#[derive(Subcommand, Debug)]
enum FsingCmd {
    Membership {
        #[arg(long)]
        poly: PathBuf,
        #[arg(short, default_value_t = 1)]
        e: u32,
    },
    Pure {
        #[arg(long)]
        poly: PathBuf,
    },
    Split {
        #[arg(long)]
        poly: PathBuf,
        /// Multiplier x_e; the constant 1 when omitted.
        #[arg(long)]
        edge: Option<String>,
    },
    Certify {
        #[command(flatten)]
        input: MatroidInput,
        #[arg(short)]
        p: u32,
    },
}

#[derive(Args, Debug)]
struct ZetaInput {
    #[arg(long)]
    poly: Option<PathBuf>,
    #[arg(long)]
    matroid: PathBuf,
    #[arg(long)]
    sigma: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Handle {
        #[command(flatten)]
        zeta: ZetaInput,
        #[arg(long, value_parser = parse_list::<usize>)]
        handle: List<usize>,
    },
    Singular {
        #[command(flatten)]
        zeta: ZetaInput,
        #[arg(long, value_parser = parse_list::<usize>)]
        handle: List<usize>,
    },
    Dc {
        #[command(flatten)]
        zeta: ZetaInput,
        #[arg(long)]
        edge: usize,
    },
    Gamma {
        #[command(flatten)]
        zeta: ZetaInput,
        #[arg(long)]
        edge: Option<usize>,
        #[arg(short)]
        m: u32,
    },
    Tutte {
        #[arg(long)]
        matroid: PathBuf,
    },
    /// Runs one fixture file.
    Fixture { file: PathBuf },
    /// Runs every *.json fixture in a directory and prints a pass/fail table.
    All {
        #[arg(long)]
        fixtures: PathBuf,
        /// Emit the table as JSON.
        #[arg(long)]
        json: bool,
    },
}

/// Process exit codes.
pub const PASS: i32 = 0;
pub const FINDING: i32 = 1;
pub const INPUT: i32 = 2;
pub const RESOURCE: i32 = 3;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => RESOURCE,
        _ => INPUT,
    }
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_sigma(path: &Option<PathBuf>) -> Result<Option<SingletonDataJson>> {
    path.as_deref().map(read).transpose()
}

fn read_coeffs(spec: &str) -> Result<Option<mtrdl::BasisCoeffs>> {
    let c = if spec == "ones" { CoeffsJson::Named("ones".into()) } else { read::<CoeffsJson>(Path::new(spec))? };
    c.build()
}

fn field_of(p: Option<u32>) -> Result<Field> {
    p.map_or(Ok(Field::Q), Field::fp)
}

fn zeta(z: &ZetaInput) -> Result<(MatroidJson, Option<PolyJson>, Option<SingletonDataJson>)> {
    Ok((read(&z.matroid)?, z.poly.as_deref().map(read).transpose()?, read_sigma(&z.sigma)?))
}

fn done(report: Value) -> Result<Outcome> {
    Ok(Outcome { report, pass: true })
}

/// Executes a command; `Ok` carries the report and whether the finding was positive.
fn execute(cli: &Cli) -> Result<Outcome> {
    let budget = cli.budget.unwrap_or_else(jets::default_budget);
    match &cli.verb {
        Verb::Matroid(cmd) => match cmd {
            MatroidCmd::Info { file } => {
                let m = read::<MatroidJson>(file)?.build()?;
                let circuits: Vec<Vec<usize>> = m.circuits().iter().map(|&c| bits(c).collect()).collect();
                done(json!({"rank": m.rank(), "connected": m.is_connected()?, "circuits": circuits}))
            }
            MatroidCmd::Dual { file } => {
                let m = read::<MatroidJson>(file)?.build()?;
                done(serde_json::to_value(MatroidJson::of(&m.dual())).expect("json"))
            }
            MatroidCmd::Handles { file } => {
                let m = read::<MatroidJson>(file)?.build()?;
                let f: Vec<Vec<usize>> = m.handle_decomposition()?.iter().map(|&s| bits(s).collect()).collect();
                done(json!({"filtration": f}))
            }
            MatroidCmd::Tutte { file } => {
                let m = read::<MatroidJson>(file)?.build()?;
                done(serde_json::to_value(PolyJson::of(&mtrdl::tutte_poly(&m))).expect("json"))
            }
        },
        Verb::Poly(cmd) => match cmd {
            PolyCmd::Msp { input, p } => {
                let m = read::<MatroidJson>(&input.matroid)?.build()?;
                let c = read_coeffs(&input.coeffs)?;
                let f = msp_build(&m, field_of(*p)?, c.as_ref())?;
                done(serde_json::to_value(PolyJson::of(&f)).expect("json"))
            }
            PolyCmd::Maxrank { matroid } => {
                let m = read::<MatroidJson>(matroid)?.build()?;
                done(serde_json::to_value(PolyJson::of(&maximal_rank_poly(&m))).expect("json"))
            }
            PolyCmd::Matroidal { poly, matroid, sigma } => checks::run(
                &Fixture::Matroidal { matroid: read(matroid)?, poly: Some(read(poly)?), sigma: read_sigma(sigma)?, expect: true },
                budget,
            ),
            PolyCmd::Search { matroid, sigma } => {
                let m = read::<MatroidJson>(matroid)?.build()?;
                let s = match read_sigma(sigma)? {
                    Some(s) => singleton_data_build(&s)?,
                    None => SingletonData::standard(m.labels()),
                };
                let r = matroidal_space(&m, &s)?;
                done(serde_json::to_value(&r).expect("json"))
            }
        },
        Verb::Flag(cmd) => match cmd {
            FlagCmd::Poly { flag } => {
                let fl = read::<FlagJson>(flag)?.build()?;
                let fp = flag_poly(&fl, Field::Q, &[])?;
                let levels: Vec<String> = fp.levels.iter().map(|p| p.to_string()).collect();
                done(json!({"levels": levels, "total": PolyJson::of(&fp.total)}))
            }
            FlagCmd::Dc { flag, edge } => {
                let fl = read::<FlagJson>(flag)?.build()?;
                let fp = flag_poly(&fl, Field::Q, &[])?;
                let r = flag_dc_split(&fp, &fl, *edge)?;
                Ok(Outcome { pass: r.reassembles, report: serde_json::to_value(&r).expect("json") })
            }
            FlagCmd::Handle { flag, handle } => {
                checks::run(&Fixture::FlagHandle { flag: read(flag)?, handle: handle.0.clone() }, budget)
            }
        },
        Verb::Feynman(cmd) => match cmd {
            FeynmanCmd::Symanzik { graph } => {
                let d = read::<GraphJson>(graph)?.diagram()?;
                done(json!({
                    "U": symanzik_u(d.graph())?.to_string(),
                    "F": symanzik_f(&d)?.to_string(),
                    "G": diagram_poly(&d)?.to_string(),
                }))
            }
            FeynmanCmd::Kinematics { graph } => checks::run(&Fixture::Kinematics { graph: read(graph)?, expect: true }, budget),
            FeynmanCmd::Support { graph } => checks::run(&Fixture::SupportQuotient { graph: read(graph)? }, budget),
            FeynmanCmd::Integrand { graph } => checks::run(&Fixture::Euler { graph: read(graph)? }, budget),
        },
        Verb::Jets(cmd) => match cmd {
            JetsCmd::Prolong { poly, m, p } => {
                let f = read::<PolyJson>(poly)?.build()?;
                let gens = jets::jet_system(&f, *m, field_of(*p)?)?;
                done(json!({"generators": gens.iter().map(PolyJson::of).collect::<Vec<_>>()}))
            }
            JetsCmd::Count { poly, m, p } => {
                let f = read::<PolyJson>(poly)?.build()?;
                done(json!({"count": checks::jets_count(&f, *m, *p, budget)?}))
            }
            JetsCmd::Probe { poly, m, primes, bound } => {
                checks::run(&Fixture::Probe { poly: read(poly)?, m: *m, primes: primes.0.clone(), bound: *bound }, budget)
            }
            JetsCmd::Boolean { k, n, m, p } => checks::run(&Fixture::Boolean { k: *k, n: *n, m: *m, p: *p }, budget),
        },
        Verb::Fsing(cmd) => match cmd {
            FsingCmd::Membership { poly, e } => {
                let f = read::<PolyJson>(poly)?.build()?;
                done(json!({"member": fsing::frobenius_membership(&f, *e)?}))
            }
            FsingCmd::Pure { poly } => checks::run(&Fixture::Split { poly: read(poly)?, edge: None, expect: true }, budget),
            FsingCmd::Split { poly, edge } => {
                checks::run(&Fixture::Split { poly: read(poly)?, edge: edge.clone(), expect: true }, budget)
            }
            FsingCmd::Certify { input, p } => {
                let coeffs = if input.coeffs == "ones" { None } else { Some(read(Path::new(&input.coeffs))?) };
                checks::run(&Fixture::Certify { matroid: read(&input.matroid)?, p: *p, coeffs }, budget)
            }
        },
        Verb::Verify(cmd) => match cmd {
            VerifyCmd::Handle { zeta: z, handle } => {
                let (matroid, poly, sigma) = zeta(z)?;
                checks::run(&Fixture::Handle { matroid, poly, sigma, handle: handle.0.clone() }, budget)
            }
            VerifyCmd::Singular { zeta: z, handle } => {
                let (matroid, poly, sigma) = zeta(z)?;
                checks::run(&Fixture::Singular { matroid, poly, sigma, handle: handle.0.clone() }, budget)
            }
            VerifyCmd::Dc { zeta: z, edge } => {
                let (matroid, poly, sigma) = zeta(z)?;
                checks::run(&Fixture::Dc { matroid, poly, sigma, edge: *edge }, budget)
            }
            VerifyCmd::Gamma { zeta: z, edge, m } => {
                let (matroid, poly, sigma) = zeta(z)?;
                checks::run(&Fixture::Gamma { matroid, poly, sigma, edge: *edge, m: *m }, budget)
            }
            VerifyCmd::Tutte { matroid } => checks::run(&Fixture::Tutte { matroid: read(matroid)? }, budget),
            VerifyCmd::Fixture { file } => checks::run(&read::<Fixture>(file)?, budget),
            VerifyCmd::All { .. } => unreachable!("handled by run_all"),
        },
    }
}

/// One row of the `verify all` table.
pub struct Row {
    pub file: String,
    pub check: String,
    pub status: &'static str,
    pub detail: String,
}

pub fn run_all(dir: &Path, budget: u128) -> Result<Vec<Row>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Input(format!("no fixtures in {}", dir.display())));
    }
    let mut rows = Vec::new();
    for f in files {
        let file = f.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let row = match read::<Fixture>(&f) {
            Err(e) => Row { file, check: "?".into(), status: "ERROR", detail: e.to_string() },
            Ok(fx) => {
                let check = fx.name().to_string();
                match checks::run(&fx, budget) {
                    Ok(o) if o.pass => Row { file, check, status: "PASS", detail: String::new() },
                    Ok(o) => Row { file, check, status: "FAIL", detail: o.report.to_string() },
                    Err(e) => Row { file, check, status: "ERROR", detail: e.to_string() },
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { INPUT } else { PASS };
        }
    };
    if let Verb::Verify(VerifyCmd::All { fixtures, json }) = &cli.verb {
        let budget = cli.budget.unwrap_or_else(jets::default_budget);
        let rows = match run_all(fixtures, budget) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("{e}");
                return exit_code(&e);
            }
        };
        let text = if *json {
            let v: Vec<Value> =
                rows.iter().map(|r| json!({"file": r.file, "check": r.check, "status": r.status, "detail": r.detail})).collect();
            serde_json::to_string(&v).expect("json")
        } else {
            let w = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
            let mut t = format!("{:<w$}  {:<16}  STATUS\n", "FILE", "CHECK");
            for r in &rows {
                t.push_str(&format!("{:<w$}  {:<16}  {}", r.file, r.check, r.status));
                if !r.detail.is_empty() && r.status == "ERROR" {
                    t.push_str(&format!("  ({})", r.detail));
                }
                t.push('\n');
            }
            let passed = rows.iter().filter(|r| r.status == "PASS").count();
            t.push_str(&format!("{passed}/{} passed", rows.len()));
            t
        };
        if let Err(e) = emit(&cli, &text) {
            eprintln!("{e}");
            return INPUT;
        }
        return if rows.iter().all(|r| r.status == "PASS") {
            PASS
        } else if rows.iter().any(|r| r.status == "ERROR") {
            INPUT
        } else {
            FINDING
        };
    }
    match execute(&cli) {
        Ok(o) => {
            let text = serde_json::to_string(&o.report).expect("json");
            if let Err(e) = emit(&cli, &text) {
                eprintln!("{e}");
                return INPUT;
            }
            if o.pass {
                PASS
            } else {
                FINDING
            }
        }
        Err(e) => {
            eprintln!("{e}");
            exit_code(&e)
        }
    }
}
