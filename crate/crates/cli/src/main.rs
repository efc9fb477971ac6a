//! `approxhad`: construct, flatten, round, search and certify ±1 matrices.
//!
//! Output is JSON on stdout (CSV with `--csv`). Exit status 0 on success,
//! 1 on a domain error, 2 on a usage error.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use approxhad::certify::certify;
use approxhad::constructions::{paley_conference, HadamardOrderCatalog, MAX_ORDER};
use approxhad::families::{conference_plus_identity, sds_block_matrix, sds_search, switch_to_barba, verify_barba, FamilyMatrix};
use approxhad::field::FiniteFieldSpec;
use approxhad::flat::flat_orthogonal_with;
use approxhad::io::{format_hex, read_sign_matrix, write_real_csv, write_sign_matrix};
use approxhad::plot::plot_registry;
use approxhad::poly::parse_coefficients;
use approxhad::rounding::{round_best, RoundingPlan};
use approxhad::search::exhaustive::ExhaustiveOptions;
use approxhad::search::registry::bundled_registry_dir;
use approxhad::search::{
    anneal_panel, best_record, exhaustive_min, reproduce_table, table_csv, AnnealConfig, Registry,
    SearchRecord, StructureClass, TableOptions, UpdateOutcome, DEFAULT_BUDGET,
};
use approxhad::{Error, Result, SignMatrix};
use clap::{Parser, Subcommand, ValueEnum};

use output::Report;

#[derive(Parser, Debug)]
#[command(name = "approxhad", version, about = "Approximate Hadamard matrices")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a Hadamard, conference or family matrix.
    Construct {
        #[arg(value_enum)]
        what: ConstructKind,
        #[arg(long)]
        order: Option<usize>,
        /// Prime power for Paley conference matrices.
        #[arg(long)]
        q: Option<u64>,
        /// Family for `construct family`.
        #[arg(long, value_enum)]
        kind: Option<FamilyKind>,
        /// Candidate matrix for `--kind barba`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the matrix in +/- format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flat orthogonal matrix of order n.
    Flatten {
        #[arg(long)]
        n: usize,
        /// Random row/column permutation before splitting.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the matrix as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized rounding of the flat matrix of order n.
    Round {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Annealing in a structure class, or `--structure exhaustive`.
    Search {
        #[arg(long)]
        n: usize,
        /// general, symmetric, circulant, circulant_core,
        /// two_block_circulant, block_circulant[_bB], or exhaustive.
        #[arg(long, default_value = "general")]
        structure: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Moves per seed.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Number of consecutive seeds starting at --seed.
        #[arg(long, default_value_t = 1)]
        panel: u64,
        /// Store the result in the registry if it improves on it.
        #[arg(long)]
        save: bool,
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Allow exhaustive search at n = 6.
        #[arg(long)]
        long_running: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificate report for a matrix file (+/- or CSV).
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// Integer polynomial "c0,c1,..." expected to vanish at κ.
        #[arg(long, allow_hyphen_values = true)]
        minpoly: Option<String>,
        /// Flatness u for the rounding bound at this order.
        #[arg(long)]
        flatness: Option<f64>,
    },
    /// Reproduce the reference table over [min, max].
    Table {
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: PathBuf,
        /// Registry to read (default: $APPROXHAD_REGISTRY, else the bundled one).
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Annealing moves per seed for fresh searches; 0 reads the registry only.
        #[arg(long, default_value_t = 0)]
        budget: u64,
        #[arg(long, default_value_t = 4)]
        panel: u64,
    },
    /// SVG of best κ per n in a registry.
    Plot {
        #[arg(long)]
        registry: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructKind {
    Hadamard,
    Conference,
    Family,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyKind {
    #[value(name = "conference_plus_i")]
    ConferencePlusI,
    Sds,
    Barba,
}

fn rows_of(a: &SignMatrix) -> Vec<String> {
    write_sign_matrix(a).lines().map(str::to_string).collect()
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Precondition(format!("{flag} is required")))
}

fn write_matrix(out: &Option<PathBuf>, a: &SignMatrix) -> Result<()> {
    if let Some(path) = out {
        std::fs::write(path, write_sign_matrix(a))?;
    }
    Ok(())
}

fn family_report(f: &FamilyMatrix) -> Report {
    let mut r = Report::new();
    r.raw("family", serde_json::to_string(&f.family).expect("enum"))
        .int("n", f.n as u64)
        .real("kappa", f.kappa_computed)
        .real("kappa_closed_form", f.kappa_closed_form)
        .raw("gram_identity", serde_json::to_string(&f.gram_identity).expect("enum"))
        .strings("rows", &rows_of(&f.matrix));
    r
}

fn construct(
    what: ConstructKind,
    order: Option<usize>,
    q: Option<u64>,
    kind: Option<FamilyKind>,
    input: Option<PathBuf>,
    out: &Option<PathBuf>,
) -> Result<Report> {
    match what {
        ConstructKind::Hadamard => {
            let m = require(order, "--order")?;
            let catalog = HadamardOrderCatalog::build(MAX_ORDER);
            let recipe = catalog
                .recipe(m)
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "no constructible Hadamard matrix of order {m}; nearest orders {:?}",
                        catalog.nearest_orders(m)
                    ))
                })?
                .to_string();
            let h = catalog.hadamard(m)?;
            write_matrix(out, &h)?;
            let mut r = Report::new();
            r.text("kind", "hadamard")
                .int("order", m as u64)
                .text("recipe", &recipe)
                .flag("gram_is_scalar", h.gram().is_scalar_pattern(m as i64, 0))
                .strings("rows", &rows_of(&h));
            Ok(r)
        }
        ConstructKind::Conference => {
            let q = match (q, order) {
                (Some(q), _) => q,
                (None, Some(n)) if n >= 2 => (n - 1) as u64,
                _ => return Err(Error::Precondition("--q or --order is required".into())),
            };
            let c = paley_conference(&FiniteFieldSpec::new(q)?)?;
            let mut r = Report::new();
            r.text("kind", "conference")
                .int("order", c.n() as u64)
                .int("q", q)
                .flag("symmetric", c.is_symmetric())
                .strings("rows", &c.rows_text());
            Ok(r)
        }
        ConstructKind::Family => {
            let f = match require(kind, "--kind")? {
                FamilyKind::ConferencePlusI => conference_plus_identity(require(order, "--order")?)?,
                FamilyKind::Sds => {
                    let n = require(order, "--order")?;
                    if n % 2 != 0 || n < 4 {
                        return Err(Error::Precondition(format!("SDS needs even n ≥ 4, got {n}")));
                    }
                    let pairs = sds_search(n / 2)?;
                    let pair = pairs.first().ok_or_else(|| {
                        Error::Rejected(format!("no supplementary difference set pair at n = {n}"))
                    })?;
                    sds_block_matrix(pair)?
                }
                FamilyKind::Barba => {
                    // Column sign flips are tried first; the written matrix is the switched one.
                    let a = read_sign_matrix(&require(input, "--input")?)?;
                    let a = switch_to_barba(&a).unwrap_or(a);
                    verify_barba(&a).map_err(|e| Error::Rejected(e.to_string()))?
                }
            };
            write_matrix(out, &f.matrix)?;
            Ok(family_report(&f))
        }
    }
}

fn record_report(rec: &SearchRecord) -> Report {
    let mut effort = Report::new();
    effort
        .int("moves", rec.effort.moves)
        .int("restarts", rec.effort.restarts)
        .int("evaluations", rec.effort.evaluations);
    let mut r = Report::new();
    r.int("n", rec.n as u64)
        .text("class", &rec.class.to_string())
        .real("kappa", rec.kappa)
        .text("kappa_hex", &format_hex(rec.kappa))
        .int("seed", rec.seed)
        .nested("effort", &effort)
        .strings("rows", &rows_of(&rec.matrix));
    r
}

fn run(cli: Cli) -> Result<String> {
    let csv = cli.csv;
    let report = match cli.command {
        Command::Construct {
            what,
            order,
            q,
            kind,
            input,
            out,
        } => construct(what, order, q, kind, input, &out)?,
        Command::Flatten { n, seed, out } => {
            let catalog = HadamardOrderCatalog::build(MAX_ORDER);
            let (m, cert) = flat_orthogonal_with(n, &catalog, seed)?;
            if let Some(path) = &out {
                std::fs::write(path, write_real_csv(m.matrix()))?;
            }
            let mut r = Report::new();
            r.int("n", n as u64)
                .int("m", cert.m as u64)
                .int("k", cert.k as u64)
                .text("recipe", &cert.recipe)
                .real("max_entry", cert.max_entry)
                .real("bound", cert.bound)
                .flag("holds", cert.holds())
                .real("orthogonality_defect", m.orthogonality_defect());
            r
        }
        Command::Round { n, trials, seed, out } => {
            let catalog = HadamardOrderCatalog::build(MAX_ORDER);
            let (m, cert) = flat_orthogonal_with(n, &catalog, None)?;
            let plan = RoundingPlan::new(m, trials, seed)?;
            let result = round_best(&plan);
            write_matrix(&out, &result.best.matrix)?;
            let c = &result.certificate;
            let best = result.best.spectral.kappa;
            let mut r = Report::new();
            r.int("n", n as u64)
                .int("m", cert.m as u64)
                .int("k", cert.k as u64)
                .real("u", c.u)
                .int("trials", trials as u64)
                .int("seed", seed)
                .int("best_trial", result.best.trial_index)
                .real("best_kappa", best)
                .text("best_kappa_hex", &format_hex(best))
                .real("e_n", c.e_n)
                .real("empirical_e_norm", result.empirical_e_norm)
                .real("kappa_bound", c.kappa_bound)
                .real("kappa_bound_doubled", c.kappa_bound_doubled)
                .flag("within_doubled_bound", best <= c.kappa_bound_doubled)
                .strings("rows", &rows_of(&result.best.matrix));
            r
        }
        Command::Search {
            n,
            structure,
            seed,
            budget,
            panel,
            save,
            registry,
            long_running,
            out,
        } => {
            let rec = if structure == "exhaustive" {
                let progress = |done: u64, total: u64| {
                    if long_running {
                        eprintln!("progress {done}/{total}");
                    }
                };
                exhaustive_min(
                    n,
                    &ExhaustiveOptions {
                        long_running,
                        progress: Some(&progress),
                    },
                )?
            } else {
                let class: StructureClass = structure.parse()?;
                if panel == 0 {
                    return Err(Error::Precondition("--panel must be at least 1".into()));
                }
                let seeds: Vec<u64> = (0..panel).map(|i| seed.wrapping_add(i)).collect();
                let recs = anneal_panel(n, class, &seeds, &AnnealConfig::with_budget(budget))?;
                best_record(&recs).expect("panel ≥ 1").clone()
            };
            write_matrix(&out, &rec.matrix)?;
            let mut r = record_report(&rec);
            if save {
                let reg = Registry::open(registry.unwrap_or_else(Registry::default_root))?;
                let outcome = match reg.update(&rec)? {
                    UpdateOutcome::Stored(_) => "stored",
                    UpdateOutcome::NotBetter { .. } => "not_better",
                };
                r.text("registry", outcome);
            }
            r.int("timestamp", rec.timestamp);
            r
        }
        Command::Certify {
            input,
            minpoly,
            flatness,
        } => {
            let a = read_sign_matrix(&input)?;
            let poly = match minpoly {
                Some(text) => Some(parse_coefficients(&text).ok_or_else(|| {
                    Error::Precondition(format!("cannot parse polynomial {text:?}"))
                })?),
                None => None,
            };
            let report = certify(&a, poly, flatness)?;
            if !csv {
                let mut s = serde_json::to_string(&report.json())?;
                s.push('\n');
                return Ok(s);
            }
            let gram_class = serde_json::to_value(report.gram_class)?;
            let mut r = Report::new();
            r.int("n", report.n as u64)
                .real("kappa", report.kappa())
                .real("sigma_min", report.spectral.sigma_min)
                .real("sigma_max", report.spectral.sigma_max)
                .text("gram_class", gram_class.as_str().unwrap_or("none"))
                .real("clique_bound", report.clique_certificate.bound)
                .int("clique_size", report.clique_certificate.k as u64);
            if let Some(m) = &report.minpoly {
                r.real("minpoly_residual", m.residual);
            }
            r
        }
        Command::Table {
            min,
            max,
            out,
            registry,
            budget,
            panel,
        } => {
            let root = registry
                .or_else(|| std::env::var_os(approxhad::search::registry::REGISTRY_ENV).map(PathBuf::from))
                .unwrap_or_else(bundled_registry_dir);
            let reg = Registry::open(root)?;
            let options = TableOptions {
                anneal: AnnealConfig::with_budget(budget),
                seeds: (0..panel).collect(),
            };
            let rows = reproduce_table(min, max, Some(&reg), &options)?;
            let text = table_csv(&rows);
            std::fs::write(&out, &text)?;
            if csv {
                return Ok(text);
            }
            let matched: Vec<String> = rows.iter().filter(|r| r.matched).map(|r| r.n.to_string()).collect();
            let mut r = Report::new();
            r.int("rows", rows.len() as u64)
                .int("matched", matched.len() as u64)
                .raw("matched_n", format!("[{}]", matched.join(",")))
                .text("out", &out.display().to_string());
            r
        }
        Command::Plot { registry, out } => {
            let reg = Registry::open(registry)?;
            let svg = plot_registry(&reg)?;
            std::fs::write(&out, &svg)?;
            let mut r = Report::new();
            r.int("points", reg.best_per_n().len() as u64)
                .text("out", &out.display().to_string());
            r
        }
    };
    Ok(report.render(csv))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
