use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sdcodes::catalog::{Catalog, CatalogFile, SCHEMA};
use sdcodes::enumerate::{short_vectors_par, RunLimits};
use sdcodes::report::{exit_code, write_norms_csv, write_weights_csv, LatticeCertificate};
use sdcodes::search::{run_search, survivor_entry, TrialResult};
use sdcodes::tables::table_consistency;
use sdcodes::verify::{verify_all, LatticeMode, VerifyOptions};
use sdcodes::weights::weight_distribution_par;
use sdcodes::{Error, Result};
use sdcodes_core::binary::{
    count_codewords_up_to_weight, invariant_signature, LowWeightConfig, SignatureConfig,
    DEFAULT_MAX_EXHAUSTIVE_DIMENSION,
};
use sdcodes_core::construct::{Filters, SearchKind, SearchSpace};
use sdcodes_core::lattice::{construction_a, EnumerationOptions, Ratio};
use sdcodes_core::zring::{binary_part, Modulus};

#[derive(Parser)]
#[command(name = "sdcodes", version, about = "Self-dual and Type II codes over Z_m")]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "SDCODES_THREADS")]
    threads: Option<usize>,
    /// Catalog directory, index file or table file; defaults to the
    /// compiled-in tables.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check catalog entries and print one JSON report per entry.
    Verify(VerifyArgs),
    /// Seeded random search, printing survivors as catalog records.
    Search(SearchArgs),
    /// Binary-part signature classes of the column claims at one length.
    Columns(ColumnArgs),
    /// Short vectors of an entry's Construction A lattice.
    Lattice(LatticeArgs),
    /// Weight enumerator or signature of an entry's binary part.
    Binary(BinaryArgs),
    /// Catalog file maintenance.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args)]
struct VerifyArgs {
    /// Entry ids; `*` and `?` glob.
    #[arg(required = true)]
    selectors: Vec<String>,
    /// Decide extremality; `deep` adds the Z4 lengths 48 to 64.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "standard")]
    lattice: Option<LatticeArg>,
    /// Binary-part enumerators and Gleason fits.
    #[arg(long)]
    binary: bool,
    /// Truncate binary enumerators at this weight.
    #[arg(long)]
    binary_wmax: Option<usize>,
    /// Wall-clock budget such as `90s` or `2h`; no new work starts after it.
    #[arg(long, value_parser = humantime::parse_duration)]
    budget: Option<Duration>,
    /// Enumeration node budget per entry, e.g. `5e10`.
    #[arg(long, value_parser = parse_count)]
    node_budget: Option<u64>,
    /// Directory for per-entry enumeration checkpoints.
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    Standard,
    Deep,
}

#[derive(Args)]
struct SearchArgs {
    /// Modulus of the ring Z_m.
    #[arg(long)]
    m: u32,
    /// Code length.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "fournega")]
    kind: KindArg,
    /// Base entry id for transform searches.
    #[arg(long)]
    base: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of trials; trial `i` always draws the same candidate.
    #[arg(long, value_parser = parse_count)]
    trials: u64,
    #[arg(long, value_enum, default_value = "none")]
    filters: FilterArg,
    /// Draws of `y` per transform trial.
    #[arg(long, default_value_t = 64)]
    y_draws: u32,
    /// Wall-clock budget; completed trials are still printed.
    #[arg(long, value_parser = humantime::parse_duration)]
    budget: Option<Duration>,
    /// Enumeration node budget per extremality check.
    #[arg(long, value_parser = parse_count)]
    node_budget: Option<u64>,
    /// Also write survivors as a catalog table file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Fournega,
    Transform,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    None,
    Typeii,
    Extremal,
}

#[derive(Args)]
struct ColumnArgs {
    /// Code length whose column claims are checked.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..=128))]
    length: u16,
    /// Weight counts recorded up to this weight.
    #[arg(long, default_value_t = SignatureConfig::default().wmax)]
    wmax: usize,
}

#[derive(Args)]
struct LatticeArgs {
    id: String,
    /// True-norm bound.
    #[arg(long, default_value_t = 4)]
    bound: i64,
    #[arg(long, value_parser = parse_count)]
    node_budget: Option<u64>,
    /// Resume from and save progress to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Print `norm,count` rows instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct BinaryArgs {
    id: String,
    /// Count weights up to this bound only.
    #[arg(long)]
    wmax: Option<usize>,
    /// Print the invariant signature instead of weights.
    #[arg(long)]
    signature: bool,
    /// Print `weight,count` rows instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Rewrite table files in canonical form.
    Fmt {
        paths: Vec<PathBuf>,
        /// Report files that are not canonical instead of rewriting them.
        #[arg(long)]
        check: bool,
    },
    /// Load, validate and materialize every entry.
    Check,
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("not a nonnegative integer: {s}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match sdcodes::thread_pool(cli.threads).and_then(|pool| pool.install(|| run(&cli))) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    ExitCode::from(code as u8)
}

fn load_catalog(cli: &Cli) -> Result<Catalog> {
    match &cli.catalog {
        Some(p) => Ok(Catalog::load(p)?),
        None => Ok(Catalog::shipped()),
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Verify(a) => verify(cli, a, &mut out)?,
        Command::Search(a) => search(cli, a, &mut out)?,
        Command::Columns(a) => columns(cli, a, &mut out)?,
        Command::Lattice(a) => lattice(cli, a, &mut out)?,
        Command::Binary(a) => binary(cli, a, &mut out)?,
        Command::Catalog(c) => catalog(cli, c, &mut out)?,
    };
    out.flush().map_err(|e| Error::io("<stdout>", e))?;
    Ok(code)
}

fn line(out: &mut impl Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e))
}

fn verify(cli: &Cli, a: &VerifyArgs, out: &mut impl Write) -> Result<i32> {
    let catalog = load_catalog(cli)?;
    let mut entries = Vec::new();
    for s in &a.selectors {
        let hit = catalog.select(s);
        if hit.is_empty() {
            return Err(Error::Usage(format!("no entry matches {s:?}")));
        }
        for e in hit {
            if !entries.iter().any(|x: &&sdcodes::CatalogEntry| x.id == e.id) {
                entries.push(e);
            }
        }
    }
    if let Some(dir) = &a.checkpoint_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let opts = VerifyOptions {
        lattice: match a.lattice {
            None => LatticeMode::Off,
            Some(LatticeArg::Standard) => LatticeMode::Standard,
            Some(LatticeArg::Deep) => LatticeMode::Deep,
        },
        binary: a.binary,
        node_budget: a.node_budget,
        deadline: a.budget.map(|d| Instant::now() + d),
        checkpoint_dir: a.checkpoint_dir.clone(),
        binary_wmax: a.binary_wmax,
    };
    let reports = verify_all(&catalog, &entries, &opts, |r| {
        line(out, &r.to_json_line())?;
        out.flush().map_err(|e| Error::io("<stdout>", e))
    })?;
    Ok(exit_code(&reports))
}

fn search(cli: &Cli, a: &SearchArgs, out: &mut impl Write) -> Result<i32> {
    let modulus = Modulus::new(a.m).map_err(Error::from)?;
    let kind = match a.kind {
        KindArg::Fournega => {
            if a.n == 0 || a.n % 4 != 0 {
                return Err(Error::Usage(format!(
                    "four-negacirculant length must be a positive multiple of 4, got {}",
                    a.n
                )));
            }
            SearchKind::FourNegacirculant { block_size: a.n / 4 }
        }
        KindArg::Transform => {
            let base_id = a.base.clone().ok_or_else(|| Error::Usage("--kind transform needs --base".into()))?;
            let catalog = load_catalog(cli)?;
            let base = catalog.materialize(&base_id)?;
            if base.length() != a.n {
                return Err(Error::Usage(format!("base {base_id} has length {}, not {}", base.length(), a.n)));
            }
            SearchKind::Transform { base_id, base: (*base).clone() }
        }
    };
    let filters = match a.filters {
        FilterArg::None => Filters::default(),
        FilterArg::Typeii => Filters { type_ii: true, extremal: false },
        FilterArg::Extremal => Filters { type_ii: true, extremal: true },
    };
    let mut enumeration = EnumerationOptions::for_dimension(a.n);
    if let Some(b) = a.node_budget {
        enumeration.node_budget = b;
    }
    let space = SearchSpace::new(modulus, kind, a.seed, filters)?.with_y_draws(a.y_draws).with_enumeration(enumeration);
    let deadline = a.budget.map(|d| Instant::now() + d);
    let mut found = Vec::new();
    let summary = run_search(&space, 0..a.trials, deadline, |r| {
        match r {
            TrialResult::Outcome(o) => {
                if let Some(e) = survivor_entry(o)? {
                    line(out, &serde_json::to_string(&e).expect("entry serializes"))?;
                    found.push(e);
                }
            }
            TrialResult::Undecided { trial, reason } => {
                line(out, &json!({ "undecided": { "trial": trial, "reason": reason } }).to_string())?;
            }
        }
        Ok(())
    })?;
    line(out, &json!({ "summary": summary }).to_string())?;
    if let Some(path) = &a.out {
        let file = CatalogFile {
            schema: SCHEMA.into(),
            table: format!("search_m{}_n{}_seed{}", a.m, a.n, a.seed),
            description: format!("search survivors, {} of {} trials", summary.completed, summary.requested),
            entries: found,
        };
        std::fs::write(path, file.to_canonical_string()).map_err(|e| Error::io(path, e))?;
    }
    Ok(if summary.partial { 2 } else { 0 })
}

fn columns(cli: &Cli, a: &ColumnArgs, out: &mut impl Write) -> Result<i32> {
    let catalog = load_catalog(cli)?;
    let config = SignatureConfig { wmax: a.wmax, ..SignatureConfig::default() };
    let report = table_consistency(&catalog, a.length.into(), &config)?;
    if report.classes.is_empty() {
        return Err(Error::Usage(format!("no column claims at length {}", a.length)));
    }
    line(out, &serde_json::to_string(&report).expect("report serializes"))?;
    for c in &report.collisions {
        eprintln!("columns {} and {}: {}", c.columns.0, c.columns.1, c.verdict);
    }
    Ok(if report.within_column_equal { 0 } else { 1 })
}

fn lattice(cli: &Cli, a: &LatticeArgs, out: &mut impl Write) -> Result<i32> {
    let catalog = load_catalog(cli)?;
    let code = catalog.materialize(&a.id)?;
    let lat = construction_a(&code)?;
    let mut opts = EnumerationOptions::for_dimension(lat.dim);
    if let Some(b) = a.node_budget {
        opts.node_budget = b;
    }
    let limits = RunLimits { checkpoint: a.checkpoint.clone(), ..RunLimits::default() };
    let report = short_vectors_par(&lat, Ratio::integer(a.bound), &opts, &limits)?;
    if a.csv {
        write_norms_csv(out, &report).map_err(|e| Error::Usage(e.to_string()))?;
    } else {
        let cert = LatticeCertificate::from(&report);
        line(out, &json!({ "entry": a.id, "dimension": lat.dim, "lattice": cert }).to_string())?;
    }
    Ok(0)
}

fn binary(cli: &Cli, a: &BinaryArgs, out: &mut impl Write) -> Result<i32> {
    let catalog = load_catalog(cli)?;
    let bp = binary_part(&*catalog.materialize(&a.id)?)?;
    if a.signature {
        let sig = invariant_signature(&bp, &SignatureConfig::default())?;
        let levels: Vec<_> = sig
            .levels
            .iter()
            .map(|l| json!({ "weight": l.weight, "count": l.count, "intersections": l.intersections, "components": l.components, "span_rank": l.span_rank, "subset_coverage": l.subset_coverage, "word_coverage_profiles": l.word_coverage_profiles }))
            .collect();
        line(out, &json!({ "entry": a.id, "weight_counts": sig.weight_counts, "levels": levels }).to_string())?;
        return Ok(0);
    }
    let e = match a.wmax {
        None => weight_distribution_par(&bp, DEFAULT_MAX_EXHAUSTIVE_DIMENSION)?,
        Some(w) => count_codewords_up_to_weight(&bp, w, &LowWeightConfig::default())?,
    };
    if a.csv {
        write_weights_csv(out, &e).map_err(|e| Error::Usage(e.to_string()))?;
    } else {
        line(
            out,
            &json!({ "entry": a.id, "dimension": bp.dimension(), "counts": e.counts, "truncated_at": a.wmax })
                .to_string(),
        )?;
    }
    Ok(0)
}

fn catalog(cli: &Cli, c: &CatalogCommand, out: &mut impl Write) -> Result<i32> {
    match c {
        CatalogCommand::Fmt { paths, check } => {
            let mut dirty = 0;
            for p in paths {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                let canon = CatalogFile::parse(&p.display().to_string(), &text)?.to_canonical_string();
                if canon != text {
                    dirty += 1;
                    if *check {
                        line(out, &format!("{}: not canonical", p.display()))?;
                    } else {
                        std::fs::write(p, canon).map_err(|e| Error::io(p, e))?;
                    }
                }
            }
            Ok(i32::from(*check && dirty > 0))
        }
        CatalogCommand::Check => {
            let catalog = load_catalog(cli)?;
            for e in catalog.entries() {
                catalog.materialize(&e.id)?;
            }
            line(out, &json!({ "tables": catalog.files().len(), "entries": catalog.entries().len() }).to_string())?;
            Ok(0)
        }
    }
}
