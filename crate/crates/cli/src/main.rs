//! `torsyz`: syzygy orders of torus-equivariant cohomology from the command line.
//!
//! Exit codes: 0 success, 1 unreadable or invalid input, 2 disagreement
//! between pipelines.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use torsyz_core::corpus;
use torsyz_core::generate;
use torsyz_core::io::{self, Format};
use torsyz_core::report::{self, CrosscheckEntry, Options};

#[derive(Parser)]
#[command(
    name = "torsyz",
    about = "Syzygy orders of equivariant cohomology for torus actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    Fan,
    Complex,
    Facestruct,
    Gkm,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum GenKind {
    Cube,
    PuncturedCube,
    PuncturedProduct,
    Simplex,
    Corpus,
    Named,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Form {
    Fan,
    Facestruct,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one input file.
    Analyze {
        kind: Kind,
        path: PathBuf,
        /// Add the depth oracle and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
        /// Top topological degree for kernel windows.
        #[arg(long, default_value_t = 20)]
        max_degree: i32,
    },
    /// Run every pipeline on each fan file of a directory.
    Crosscheck {
        dir: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated fixture.
    Generate {
        kind: GenKind,
        /// Rank for cube and punctured_cube, dimension for simplex.
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Factor dimensions for punctured_product, e.g. 1,1,1.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        /// Number of factors in which the two punctures differ.
        #[arg(long, default_value_t = 1)]
        distance: usize,
        #[arg(long, value_enum, default_value_t = Form::Fan)]
        form: Form,
        #[arg(long)]
        json: bool,
        /// Structure for named: interval, no_vertex, mutant, annulus.
        #[arg(long)]
        name: Option<String>,
        /// Output file (directory for corpus); stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Version,
}

/// Input or usage failure, reported with exit code 1.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn analyze(kind: Kind, path: &Path, opts: Options, json: bool) -> Result<bool, InputError> {
    let text = read(path)?;
    let ctx = |e: io::IoError| anyhow::anyhow!("{}: {e}", path.display());
    let report = match kind {
        Kind::Fan => report::analyze_fan(&io::parse_fan(&text).map_err(ctx)?, opts)?,
        Kind::Complex => report::analyze_complex(&io::parse_complex(&text).map_err(ctx)?, opts)?,
        Kind::Facestruct => {
            report::analyze_facestruct(&io::parse_facestruct(&text).map_err(ctx)?, opts)?
        }
        Kind::Gkm => report::analyze_gkm(&io::parse_gkm(&text).map_err(ctx)?, opts)?,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report::render_text(&report));
    }
    Ok(report.agreement)
}

fn crosscheck_line(e: &CrosscheckEntry) -> String {
    let flag = |b: bool| if b { "ok" } else { "FAIL" };
    format!(
        "{}: rank {} faces {} links {} oracle {} printed {} | links-bc {} ext {} bredon {} depth {} dichotomy {} => {}",
        e.name,
        e.rank,
        e.faces,
        e.links,
        e.oracle,
        e.links_printed,
        flag(e.link_correspondence),
        flag(e.ext_decomposition),
        e.bredon.map_or("n/a", flag),
        flag(e.auslander_buchsbaum),
        e.dichotomy.map_or("n/a", flag),
        if e.passed() { "agree" } else { "MISMATCH" }
    )
}

fn crosscheck(dir: &Path, jobs: Option<usize>, json: bool) -> Result<bool, InputError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fan"))
        .collect();
    files.sort();
    if files.is_empty() {
        eprintln!("warning: no .fan files in {}", dir.display());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()?;
    let results: Vec<Result<CrosscheckEntry>> = pool.install(|| {
        files
            .par_iter()
            .map(|p| {
                let fan = io::parse_fan(&read(p)?)
                    .map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?;
                let name = p
                    .file_stem()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned();
                report::crosscheck_fan(&name, &fan)
                    .map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))
            })
            .collect()
    });
    let mut entries = Vec::new();
    let mut bad = Vec::new();
    for r in results {
        match r {
            Ok(e) => entries.push(e),
            Err(e) => bad.push(e),
        }
    }
    for e in &bad {
        eprintln!("error: {e:#}");
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&entries)?);
    } else {
        for e in &entries {
            println!("{}", crosscheck_line(e));
        }
        let mismatches = entries.iter().filter(|e| !e.passed()).count();
        let printed = entries
            .iter()
            .filter(|e| e.links_printed != e.links)
            .count();
        println!(
            "fans: {} checked, {} mismatches, {} unreadable; printed link bound differs on {}",
            entries.len(),
            mismatches,
            bad.len(),
            printed
        );
    }
    if !bad.is_empty() {
        return Err(InputError(anyhow::anyhow!(
            "{} unreadable fan files",
            bad.len()
        )));
    }
    Ok(entries.iter().all(|e| e.passed()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(
    kind: GenKind,
    rank: usize,
    dims: &[usize],
    distance: usize,
    form: Form,
    json: bool,
    out: Option<&Path>,
) -> Result<()> {
    let format = if json { Format::Json } else { Format::Text };
    if kind == GenKind::Corpus {
        let Some(dir) = out else {
            bail!("corpus needs --out DIR")
        };
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let ext = if json { "json" } else { "fan" };
        for (name, fan) in corpus::fan_corpus() {
            emit(
                Some(&dir.join(format!("{name}.{ext}"))),
                &io::write_fan(&fan, format),
            )?;
        }
        return Ok(());
    }
    if rank == 0 {
        bail!("rank must be positive");
    }
    let (dims, removed) = match kind {
        GenKind::Cube => (vec![1; rank], Vec::new()),
        GenKind::PuncturedCube => (
            vec![1; rank],
            generate::puncture_pair(&vec![1; rank], rank)?.to_vec(),
        ),
        GenKind::PuncturedProduct => {
            if dims.is_empty() {
                bail!("punctured_product needs --dims");
            }
            (
                dims.to_vec(),
                generate::puncture_pair(dims, distance)?.to_vec(),
            )
        }
        GenKind::Simplex => (vec![rank], Vec::new()),
        GenKind::Corpus | GenKind::Named => unreachable!(),
    };
    let text = match form {
        Form::Fan => io::write_fan(&generate::product_fan(&dims, &removed)?, format),
        Form::Facestruct => {
            io::write_facestruct(&generate::product_lattice(&dims, &removed)?, format)
        }
    };
    emit(out, &text)
}

fn named(name: Option<&str>, json: bool, out: Option<&Path>) -> Result<()> {
    let s = match name {
        Some("interval") => generate::named::interval(),
        Some("no_vertex") => generate::named::no_vertex(),
        Some("mutant") => generate::named::mutant(),
        Some("annulus") => generate::named::annulus(),
        Some(other) => bail!("unknown named structure {other:?}"),
        None => bail!("named needs --name"),
    };
    emit(
        out,
        &io::write_facestruct(&s, if json { Format::Json } else { Format::Text }),
    )
}

fn run(cli: Cli) -> Result<bool, InputError> {
    match cli.command {
        Command::Analyze {
            kind,
            path,
            oracle,
            json,
            max_degree,
        } => analyze(kind, &path, Options { oracle, max_degree }, json),
        Command::Crosscheck { dir, jobs, json } => crosscheck(&dir, jobs, json),
        Command::Generate {
            kind,
            rank,
            dims,
            distance,
            form,
            json,
            name,
            out,
        } => {
            if kind == GenKind::Named {
                named(name.as_deref(), json, out.as_deref())?;
                return Ok(true);
            }
            generate(kind, rank, &dims, distance, form, json, out.as_deref())?;
            Ok(true)
        }
        Command::Version => {
            println!("torsyz {}", env!("CARGO_PKG_VERSION"));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // usage errors share exit code 1 with invalid input
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = run(cli);
    eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
