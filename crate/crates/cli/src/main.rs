//! `hoct`: command-line access to the forms, algebras and verifications.
//!
//! Bit strings put x1 leftmost everywhere: vectors, matrix rows, table keys.

mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hoct::algebra::{
    check_graded_alternative, check_graded_associative, check_graded_commutative, generator_square,
    has_generating_function, is_associative, twist_standard, FieldTag, GradedAlgebra, StandardKind,
};
use hoct::equivalence::{
    backtrack_search, brute_force_search, heuristic_search, tilde_chain, verify_equivalence, BacktrackOptions,
};
use hoct::forms::{graph_to_dot, make_alpha_cl_pq, make_alpha_n, make_alpha_pq, make_tilde, CubicForm};
use hoct::io::{form_from_json, form_to_json, matrix_from_json, table_to_json, table_tsv, FormJson};
use hoct::periodicity::{
    classify_signature, glue_algebras, is_simple, verify_complex_periodicity, verify_real_periodicity, Convention,
    GlueSpec, SubalgebraTag,
};
use hoct::{Error, Z2Vec};

#[derive(Parser)]
#[command(
    name = "hoct",
    version,
    about = "Higher octonions O_{p,q}: cubic forms over GF(2), twisted group algebras, equivalence and periodicity checks",
    after_help = "Bit strings list coordinates with x1 leftmost: the vector 101 has x1 = 1, x2 = 0, x3 = 1.\n\
                  Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 internal assertion."
)]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, evaluate and draw cubic forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Multiplication tables and graded identity checks.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Equivalence of cubic forms under GL_n(F_2).
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// Periodicity statements.
    #[command(subcommand)]
    Periodicity(PeriodicityCmd),
    /// Isomorphism class and simplicity of O_{p,q}.
    Classify {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Run the built-in verification battery.
    Selftest {
        #[arg(value_enum, default_value_t = selftest::Level::Quick)]
        level: selftest::Level,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// alpha_{p,q}
    Alpha,
    /// alpha_n = alpha_{0,n}
    AlphaN,
    /// The Clifford form alpha^Cl_{p,q}
    Clifford,
    /// The triangulated-graph representative tilde-alpha_{p,q}
    Tilde,
}

#[derive(Args)]
struct FormSource {
    /// Read the form from a JSON file instead of a family.
    #[arg(long, conflicts_with = "family")]
    form: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

impl FormSource {
    fn load(&self) -> anyhow::Result<CubicForm> {
        if let Some(path) = &self.form {
            return Ok(form_from_json(&read(path)?)?);
        }
        let family = self.family.ok_or_else(|| usage("give --form or --family"))?;
        let pq = || -> anyhow::Result<(usize, usize)> {
            match (self.p, self.q) {
                (Some(p), Some(q)) => Ok((p, q)),
                _ => Err(usage("this family needs --p and --q")),
            }
        };
        Ok(match family {
            Family::Alpha => {
                let (p, q) = pq()?;
                make_alpha_pq(p, q)?
            }
            Family::AlphaN => make_alpha_n(self.n.ok_or_else(|| usage("alpha-n needs --n"))?)?,
            Family::Clifford => {
                let (p, q) = pq()?;
                make_alpha_cl_pq(p, q)?
            }
            Family::Tilde => {
                let (p, q) = pq()?;
                make_tilde(p, q)?
            }
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum FormCmd {
    /// Print a form as JSON.
    Make {
        #[command(flatten)]
        src: FormSource,
        /// Also print the polynomial on a second line.
        #[arg(long)]
        pretty: bool,
    },
    /// Evaluate a form at one point.
    Eval {
        #[command(flatten)]
        src: FormSource,
        #[arg(long)]
        x: String,
    },
    /// The triangulated graph of a form.
    Graph {
        #[command(flatten)]
        src: FormSource,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    H,
    O,
    On,
    Opq,
    Cl,
}

#[derive(Args)]
struct AlgebraSource {
    /// A named algebra; without it, --p/--q select O_{p,q}.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

impl AlgebraSource {
    fn load(&self) -> anyhow::Result<GradedAlgebra> {
        let pq = || -> anyhow::Result<(usize, usize)> {
            match (self.p, self.q) {
                (Some(p), Some(q)) => Ok((p, q)),
                _ => Err(usage("give --p and --q")),
            }
        };
        let (kind, sig) = match self.kind {
            Some(Kind::H) => (StandardKind::Quaternions, None),
            Some(Kind::O) => (StandardKind::Octonions, Some((0, 3))),
            Some(Kind::On) => {
                let n = self.n.ok_or_else(|| usage("on needs --n"))?;
                (StandardKind::On(n), Some((0, n)))
            }
            Some(Kind::Cl) => {
                let (p, q) = pq()?;
                (StandardKind::CliffordPq(p, q), Some((p, q)))
            }
            Some(Kind::Opq) | None => {
                let (p, q) = pq()?;
                return Ok(GradedAlgebra::octonion_pq(p, q)?);
            }
        };
        Ok(GradedAlgebra::new(twist_standard(kind)?, FieldTag::Real, sig))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Signed multiplication table.
    Table {
        #[command(flatten)]
        src: AlgebraSource,
        #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
        format: TableFormat,
    },
    /// Graded identities: comm, assoc, alt, genfun, and assoc-strict.
    Check {
        #[command(flatten)]
        src: AlgebraSource,
        #[arg(long, value_delimiter = ',', default_value = "comm,assoc,alt,genfun")]
        properties: Vec<String>,
    },
    /// The square of generator u_i (+1 or -1).
    Square {
        #[command(flatten)]
        src: AlgebraSource,
        #[arg(long)]
        i: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Hillclimb,
    Backtrack,
}

#[derive(Subcommand)]
enum EquivCmd {
    /// Check lhs(x) = rhs(Gx) at every point.
    Verify {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Look for a witness.
    Search {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// The verified chain alpha_{p,q} ~ tilde-alpha_{p,q}.
    Tilde {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraGlue {
    Plain,
    Braided,
}

#[derive(Subcommand)]
enum PeriodicityCmd {
    /// Verify the real statement for (p, q), or the complex one with --complex.
    Verify {
        #[arg(long, required_unless_present = "complex")]
        p: Option<usize>,
        #[arg(long, required_unless_present = "complex")]
        q: Option<usize>,
        /// Verify the complex statement in this dimension instead.
        #[arg(long)]
        complex: Option<usize>,
        /// Also run the algebra-level glue diagnostics for the factors.
        #[arg(long, value_enum)]
        algebra_glue: Option<AlgebraGlue>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

/// Marks an error as a usage problem (exit code 2).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: &str) -> anyhow::Error {
    anyhow!(Usage(msg.to_string()))
}

/// A check ran and failed (exit code 1).
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for Failed {}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_form(cmd: FormCmd) -> anyhow::Result<()> {
    match cmd {
        FormCmd::Make { src, pretty } => {
            let f = src.load()?;
            println!("{}", form_to_json(&f));
            if pretty {
                println!("{f}");
            }
        }
        FormCmd::Eval { src, x } => {
            let f = src.load()?;
            let v = Z2Vec::parse(&x).map_err(|e| usage(&e.to_string()))?;
            println!("{}", f.eval(&v)?);
        }
        FormCmd::Graph { src, format } => {
            let g = src.load()?.to_graph();
            match format {
                GraphFormat::Dot => print!("{}", graph_to_dot(&g)),
                GraphFormat::Json => emit(
                    &json!({"n": g.n, "filled": g.filled, "edges": g.edges, "triangles": g.triangles}),
                    None,
                )?,
            }
        }
    }
    Ok(())
}

fn cmd_algebra(cmd: AlgebraCmd) -> anyhow::Result<()> {
    match cmd {
        AlgebraCmd::Table { src, format } => {
            let alg = src.load()?;
            match format {
                TableFormat::Tsv => print!("{}", table_tsv(&alg)?),
                TableFormat::Json => println!("{}", table_to_json(&alg.twisting)),
            }
        }
        AlgebraCmd::Check { src, properties } => {
            let alg = src.load()?;
            let f = &alg.twisting;
            let mut all = true;
            for prop in &properties {
                let ok = match prop.as_str() {
                    "comm" => check_graded_commutative(f),
                    "assoc" => check_graded_associative(f),
                    "alt" => check_graded_alternative(f),
                    "genfun" => has_generating_function(f),
                    "assoc-strict" => is_associative(f),
                    other => return Err(usage(&format!("unknown property {other}"))),
                };
                println!("{prop}\t{}", if ok { "pass" } else { "fail" });
                all &= ok;
            }
            if !all {
                return Err(anyhow!(Failed));
            }
        }
        AlgebraCmd::Square { src, i } => {
            let alg = src.load()?;
            let s = generator_square(&alg, i)?;
            println!("{}", if s > 0 { "+1" } else { "-1" });
        }
    }
    Ok(())
}

fn cmd_equiv(cmd: EquivCmd) -> anyhow::Result<()> {
    match cmd {
        EquivCmd::Verify { lhs, rhs, matrix } => {
            let (a, b) = (form_from_json(&read(&lhs)?)?, form_from_json(&read(&rhs)?)?);
            let g = matrix_from_json(&read(&matrix)?)?;
            let ok = verify_equivalence(&a, &b, &g)?;
            emit(&json!({"equivalent": ok, "points": 1u64 << a.dim()}), None)?;
            if !ok {
                return Err(anyhow!(Failed));
            }
        }
        EquivCmd::Search {
            lhs,
            rhs,
            mode,
            seed,
            budget,
        } => {
            let (a, b) = (form_from_json(&read(&lhs)?)?, form_from_json(&read(&rhs)?)?);
            let verdict = match mode {
                Mode::Exhaustive => brute_force_search(&a, &b)?,
                Mode::Hillclimb => heuristic_search(&a, &b, seed, budget)?,
                Mode::Backtrack => backtrack_search(
                    &a,
                    &b,
                    BacktrackOptions {
                        node_limit: budget,
                        ..Default::default()
                    },
                )?,
            };
            emit(&serde_json::to_value(&verdict)?, None)?;
        }
        EquivCmd::Tilde { p, q } => {
            let chain = tilde_chain(p, q)?;
            let mut v = serde_json::to_value(&chain)?;
            v["lhs_form"] = serde_json::to_value(FormJson::from(chain.lhs()))?;
            v["rhs_form"] = serde_json::to_value(FormJson::from(chain.rhs()))?;
            emit(&v, None)?;
        }
    }
    Ok(())
}

fn cmd_periodicity(cmd: PeriodicityCmd) -> anyhow::Result<()> {
    let PeriodicityCmd::Verify {
        p,
        q,
        complex,
        algebra_glue,
        out,
        seed: _,
        budget: _,
    } = cmd;
    let report = match complex {
        Some(n) => verify_complex_periodicity(n)?,
        None => verify_real_periodicity(p.unwrap_or(0), q.unwrap_or(0))?,
    };
    let mut value = serde_json::to_value(&report)?;
    if let Some(conv) = algebra_glue {
        let [(a, b), (c, d)] = [report.factors[0].signature, report.factors[1].signature];
        let (left, right) = (GradedAlgebra::octonion_pq(a, b)?, GradedAlgebra::octonion_pq(c, d)?);
        let convention = match conv {
            AlgebraGlue::Plain => Convention::Plain,
            AlgebraGlue::Braided => Convention::koszul(a + b, c + d),
        };
        let tag = report.subalgebra;
        let mut spec = GlueSpec::new(&left, &right, tag);
        let want = if tag == SubalgebraTag::C { -1 } else { 1 };
        spec.shared_left = (1..=a + b)
            .find(|&i| generator_square(&left, i).ok() == Some(want))
            .unwrap_or(1);
        spec.shared_right = (1..=c + d)
            .find(|&i| generator_square(&right, i).ok() == Some(want))
            .unwrap_or(1);
        let glued = glue_algebras(&spec, convention)?;
        let expected = hoct::forms::zero_count(&make_alpha_pq(report.result.0, report.result.1)?);
        value["algebra_glue"] = serde_json::to_value(&glued)?;
        value["algebra_glue"]["expected_zero_count"] = json!(expected);
        value["algebra_glue"]["accepted"] = json!(glued.well_defined && glued.zero_count == Some(expected));
    }
    emit(&value, out.as_deref())?;
    if !report.final_composed_check {
        return Err(anyhow!(Failed));
    }
    Ok(())
}

fn cmd_classify(p: usize, q: usize) -> anyhow::Result<()> {
    let class = classify_signature(p, q)?;
    emit(
        &json!({"signature": [p, q], "class": class, "simple": is_simple(p, q)}),
        None,
    )
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        rayon_threads(t)?;
    }
    match cli.command {
        Command::Form(c) => cmd_form(c),
        Command::Algebra(c) => cmd_algebra(c),
        Command::Equiv(c) => cmd_equiv(c),
        Command::Periodicity(c) => cmd_periodicity(c),
        Command::Classify { p, q } => cmd_classify(p, q),
        Command::Selftest { level } => {
            if selftest::run(level) {
                Ok(())
            } else {
                bail!(Failed)
            }
        }
    }
}

fn rayon_threads(n: usize) -> anyhow::Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| anyhow!("thread pool: {e}"))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Failed>().is_some() {
        return 1;
    }
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Verification(_)) => 3,
        Some(_) => 2,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            if code != 1 {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
