//! Command-line driver: identity checks, instance verification, Fock-space
//! cross-checks, filtration scans and the acceptance suite.
//!
//! Exit codes: 0 when everything is certified/passes, 1 when any check is
//! inconclusive or fails, 2 on input errors.

use clap::{Parser, Subcommand};
use k3chow::acceptance;
use k3chow::config::RunConfig;
use k3chow::filtration::{filtration_index, FiltrationIndex};
use k3chow::heisenberg::{
    commutator_check, generate_lowering_closure, injectivity_check, partitions,
    symmetric_coefficient_classes, FockState,
};
use k3chow::hilb::{verify_instance, VerifyOptions};
use k3chow::instance::{FiltrationFile, InstanceFile};
use k3chow::report::{FiltrationReportRecord, ReportRecord, VerdictRecord};
use k3chow::surface::SurfaceModel;
use k3chow::taut;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "k3chow",
    version,
    about = "Exact verification of tautological product identities on K3 powers and Hilbert schemes"
)]
struct Cli {
    /// Run configuration file (TOML); defaults to ./k3chow.toml when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker count for batch runs; 0 means all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Term-count ceiling before the verifier reports inconclusive.
    #[arg(long, global = true)]
    term_ceiling: Option<usize>,

    /// Where to write JSON reports (a file for single inputs, a directory
    /// for batches).
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a built-in identity: bv, bv0, second, third,
    /// modified-diagonal-x, k-ideal-x, or `all`.
    VerifyIdentity { name: String },
    /// Verify vanishing instances from JSON files.
    VerifyInstance { files: Vec<PathBuf> },
    /// Cross-check the Fock-space calculus at weight n: injectivity of the
    /// annihilation strings, the commutation relations, and the closure
    /// derivations.
    HeisenbergCheck {
        #[arg(long)]
        n: u32,
    },
    /// Filtration-index scans for the zero-cycles in a JSON file.
    Filtration { file: PathBuf },
    /// Run the acceptance suite (one line per criterion).
    Suite {
        /// Also run the long weight-3 target.
        #[arg(long)]
        stretch: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let path = match &cli.config {
        Some(p) => Some(p.clone()),
        None => {
            let default = PathBuf::from("k3chow.toml");
            default.exists().then_some(default)
        }
    };
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", p.display()))?;
            RunConfig::from_toml_str(&text)
                .map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(tc) = cli.term_ceiling {
        cfg.run.term_ceiling = tc;
    }
    if let Some(jobs) = cli.jobs {
        cfg.run.parallelism = jobs;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let cfg = load_config(&cli)?;
    let model = cfg.surface_model()?;
    if cfg.run.parallelism > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.run.parallelism)
            .build_global()
            .ok();
    }
    let opts = VerifyOptions {
        term_ceiling: cfg.run.term_ceiling,
    };
    match cli.command {
        Command::VerifyIdentity { name } => verify_identity(&model, &name),
        Command::VerifyInstance { files } => {
            verify_instances(&model, &opts, &files, cli.json_out.as_deref(), &cfg)
        }
        Command::HeisenbergCheck { n } => heisenberg_check(&model, n),
        Command::Filtration { file } => filtration_scan(&model, &file, cli.json_out.as_deref()),
        Command::Suite { stretch } => suite(&model, stretch),
    }
}

fn verify_identity(model: &Arc<SurfaceModel>, name: &str) -> anyhow::Result<u8> {
    let names: Vec<&str> = if name == "all" {
        vec![
            "bv",
            "bv0",
            "second",
            "third",
            "modified-diagonal-x",
            "k-ideal-x",
        ]
    } else {
        vec![name]
    };
    let mut worst = 0u8;
    for n in names {
        let started = Instant::now();
        let classes: Vec<k3chow::TautClass> = match n {
            "bv" => vec![taut::bv_product(model.clone())],
            "bv0" => vec![taut::bv0_sum(model.clone())],
            "second" => (0..model.ns_rank())
                .map(|j| taut::second_product(model.clone(), j).expect("basis divisor"))
                .collect(),
            "third" => vec![taut::third_product(model.clone())],
            "modified-diagonal-x" => {
                vec![taut::modified_diagonal(model.clone(), 3).expect("three factors")]
            }
            "k-ideal-x" => vec![taut::k_ideal_ch_product(model.clone())],
            other => anyhow::bail!("unknown identity `{other}`"),
        };
        let ok = classes.iter().all(|c| c.is_zero());
        let ms = started.elapsed().as_millis();
        if ok {
            println!("identity {n}: vanishes ({ms} ms)");
        } else {
            println!("identity {n}: NOT reduced to zero ({ms} ms)");
            worst = worst.max(1);
        }
    }
    Ok(worst)
}

fn verify_instances(
    model: &Arc<SurfaceModel>,
    opts: &VerifyOptions,
    files: &[PathBuf],
    json_out: Option<&Path>,
    cfg: &RunConfig,
) -> anyhow::Result<u8> {
    if files.is_empty() {
        anyhow::bail!("no instance files given");
    }
    // Parse everything first so malformed input fails fast with exit 2.
    let mut parsed = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
        let file = InstanceFile::from_json_str(&text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let spec = file
            .to_spec()
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        parsed.push((path.clone(), file, spec));
    }
    let ceiling = opts.term_ceiling;
    let reports: Vec<(PathBuf, ReportRecord)> = parsed
        .par_iter()
        .map(|(path, file, spec)| {
            let opts = VerifyOptions {
                term_ceiling: ceiling,
            };
            let (verdict, stats) = verify_instance(spec, model, &opts);
            (path.clone(), ReportRecord::new(file.clone(), &verdict, &stats))
        })
        .collect();

    let mut worst = 0u8;
    for (path, report) in &reports {
        let status = match &report.verdict {
            VerdictRecord::CertifiedZero => "certified zero",
            VerdictRecord::Inconclusive { .. } => "inconclusive",
            VerdictRecord::InputError { .. } => "input error",
        };
        println!(
            "{}: {status} ({} ms, peak {} terms)",
            path.display(),
            report.wall_ms,
            report.peak_terms
        );
        worst = worst.max(report.verdict.exit_code() as u8);
    }

    let out_target = json_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&cfg.run.output));
    if reports.len() == 1 {
        std::fs::write(&out_target, reports[0].1.to_json_pretty())?;
        println!("report written to {}", out_target.display());
    } else {
        std::fs::create_dir_all(&out_target)?;
        for (path, report) in &reports {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "instance".into());
            let dest = out_target.join(format!("{stem}.report.json"));
            std::fs::write(&dest, report.to_json_pretty())?;
        }
        println!("reports written to {}", out_target.display());
    }
    Ok(worst)
}

fn heisenberg_check(model: &Arc<SurfaceModel>, n: u32) -> anyhow::Result<u8> {
    if n == 0 || n > 4 {
        anyhow::bail!("weight must be between 1 and 4 (desk scale)");
    }
    let mut worst = 0u8;
    for k in 0..=1usize {
        let report = injectivity_check(model, n, k)?;
        println!(
            "injectivity n={n} k={k}: rank {}/{} -> {}",
            report.rank,
            report.columns,
            if report.full_rank { "full" } else { "DEFICIENT" }
        );
        if !report.full_rank {
            worst = 1;
        }
    }
    let range: Vec<i64> = (1..=n as i64).flat_map(|a| [a, -a]).collect();
    let mut checked = 0u64;
    let mut failed = 0u64;
    for parts in partitions(n) {
        for k in 0..=1usize {
            for gamma in symmetric_coefficient_classes(model, &parts, k) {
                let state = FockState::basis(model.clone(), parts.clone(), gamma, k)?;
                for &a in &range {
                    for &b in &range {
                        checked += 1;
                        if !commutator_check(a, b, &state)? {
                            failed += 1;
                        }
                    }
                }
            }
        }
    }
    println!("commutators: {checked} checked, {failed} failed");
    if failed > 0 {
        worst = 1;
    }
    for step in generate_lowering_closure(n.max(2)) {
        println!("closure: {step}");
    }
    Ok(worst)
}

fn filtration_scan(
    model: &Arc<SurfaceModel>,
    file: &Path,
    json_out: Option<&Path>,
) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", file.display()))?;
    let parsed = FiltrationFile::from_json_str(&text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", file.display()))?;
    let mut worst = 0u8;
    let mut records = Vec::new();
    for entry in &parsed.cycles {
        let xi = entry
            .to_cycle()
            .map_err(|e| anyhow::anyhow!("cycle `{}`: {e}", entry.name))?;
        let result = filtration_index(model, &xi, entry.max_index)
            .map_err(|e| anyhow::anyhow!("cycle `{}`: {e}", entry.name))?;
        let record = match result {
            FiltrationIndex::Index(i) => {
                println!("cycle {}: filtration index {i}", entry.name);
                FiltrationReportRecord {
                    schema_version: 1,
                    name: entry.name.clone(),
                    index: Some(i as u64),
                    max_checked: entry.max_index as u64,
                    status: "vanishing certified".into(),
                }
            }
            FiltrationIndex::Unknown { max_checked } => {
                println!(
                    "cycle {}: not reduced to zero up to power {}",
                    entry.name,
                    max_checked + 1
                );
                worst = worst.max(1);
                FiltrationReportRecord {
                    schema_version: 1,
                    name: entry.name.clone(),
                    index: None,
                    max_checked: max_checked as u64,
                    status: "not reduced".into(),
                }
            }
        };
        records.push(record);
    }
    if let Some(path) = json_out {
        std::fs::write(path, serde_json::to_string_pretty(&records)?)?;
        println!("report written to {}", path.display());
    }
    Ok(worst)
}

fn suite(model: &Arc<SurfaceModel>, stretch: bool) -> anyhow::Result<u8> {
    let mut reports = acceptance::run_all(model);
    if stretch {
        reports.push(acceptance::run_stretch(model));
    }
    let mut worst = 0u8;
    for report in &reports {
        println!("{}", report.line());
        if !report.passed {
            worst = 1;
        }
    }
    Ok(worst)
}
