use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use biserial_core::bisected::search_bisected;
use biserial_core::criteria::{find_obstruction, DEFAULT_OBSTRUCTION_BUDGET, SPAN_READING};
use biserial_core::report::{instance_hash, replay_report, run_check, Report};
use biserial_core::{
    certify_obstruction, generate_corollary_instance, generate_random_presentation, lem2_check, neighbor_sets,
    parse_instance, print_instance, subalgebra_criterion, FiniteDimAlgebra, GenerateParams, Instance, Lem2Direction,
    NeighborVariant,
};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

const EXIT_PARSE: u8 = 1;
const EXIT_DISAGREEMENT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "biserial", version, about = "Decide biseriality of quotient path algebras over GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every method and print a JSON report per instance.
    Check {
        files: Vec<PathBuf>,
        /// Leave timings out so reports are reproducible byte for byte.
        #[arg(long)]
        no_timings: bool,
        /// Exit with status 3 when a method stops on its budget.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Emit the decision witness, or re-verify the witnesses of a report.
    Witness {
        file: PathBuf,
        /// Report to re-verify against the instance.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Where to write the emitted witness (stdout otherwise).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List neighbour sets and the verdict for every corner algebra eAe.
    Subalgebra {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Both)]
        variant: Variant,
    },
    /// Look for D4 configurations of each kind.
    D4free {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_OBSTRUCTION_BUDGET)]
        budget: usize,
    },
    /// Write random instances to a directory.
    Generate {
        dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Kind::Mixed)]
        kind: Kind,
    },
    /// Cross-validate every instance in a directory, in parallel.
    Corpus {
        dir: PathBuf,
        /// With --count, first fill the directory with generated instances.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum, default_value_t = Kind::Mixed)]
        kind: Kind,
        /// Write all reports, ordered by instance hash, to this file.
        #[arg(long)]
        reports: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
    /// Write the quiver in Graphviz DOT format.
    ExportDot {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Full,
    D4,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Random,
    Corollary,
    Mixed,
}

/// Writes a line to stdout; a closed pipe is not an error.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

/// An error that maps to a specific exit status.
#[derive(Debug)]
struct Exit {
    code: u8,
    message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit_error(code: u8, message: String) -> anyhow::Error {
    anyhow::Error::new(Exit { code, message })
}

fn load(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).map_err(|e| exit_error(EXIT_PARSE, format!("{}: {}", path.display(), e)))
}

fn build(inst: &Instance) -> Result<FiniteDimAlgebra> {
    FiniteDimAlgebra::build(&inst.presentation, inst.options.max_nilpotency)
        .map_err(|e| exit_error(EXIT_PARSE, e.to_string()))
}

fn check(inst: &Instance, timings: bool) -> Result<Report> {
    run_check(inst, timings).map_err(|e| exit_error(EXIT_PARSE, e.to_string()))
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            say!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T, pretty: bool) -> Result<String> {
    Ok(if pretty {
        serde_json::to_string_pretty(v)?
    } else {
        serde_json::to_string(v)?
    })
}

fn status_of(reports: &[&Report], strict: bool) -> u8 {
    if reports.iter().any(|r| !r.disagreements.is_empty()) {
        EXIT_DISAGREEMENT
    } else if strict && reports.iter().any(|r| r.budget_exhausted()) {
        EXIT_BUDGET
    } else {
        0
    }
}

fn cmd_check(files: &[PathBuf], no_timings: bool, strict: bool, pretty: bool) -> Result<u8> {
    if files.is_empty() {
        bail!("no instance files given");
    }
    let mut reports = Vec::new();
    for f in files {
        let r = check(&load(f)?, !no_timings)?;
        say!("{}", to_json(&r, pretty)?);
        reports.push(r);
    }
    Ok(status_of(&reports.iter().collect::<Vec<_>>(), strict))
}

fn cmd_witness(file: &Path, replay: Option<&Path>, output: Option<&Path>) -> Result<u8> {
    let inst = load(file)?;
    match replay {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let report: Report = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let out = replay_report(&report, &inst);
            say!("{}", serde_json::to_string_pretty(&out)?);
            Ok(if out.ok() { 0 } else { EXIT_DISAGREEMENT })
        }
        None => {
            let r = check(&inst, false)?;
            write_out(output, &to_json(&r, true)?)?;
            let status = status_of(&[&r], false);
            if r.witnesses.decide.is_none() {
                eprintln!(
                    "no witness: {}",
                    r.witnesses.decide_unavailable.as_deref().unwrap_or("unknown reason")
                );
            }
            Ok(status)
        }
    }
}

fn cmd_subalgebra(file: &Path, variant: Variant) -> Result<u8> {
    let inst = load(file)?;
    let alg = build(&inst)?;
    let q = alg.quiver();
    let names = |vs: &[usize]| vs.iter().map(|&v| q.vertex_name(v)).collect::<Vec<_>>().join(",");
    for l in 0..q.num_vertices() {
        let ns = neighbor_sets(q, l);
        let js: Vec<String> = ns.j_sets.iter().map(|j| format!("{{{}}}", names(j))).collect();
        say!("vertex {}: N = {{{}}}, J = {}", q.vertex_name(l), names(&ns.neighbors), js.join(" "));
    }
    let variants: &[NeighborVariant] = match variant {
        Variant::Full => &[NeighborVariant::Full],
        Variant::D4 => &[NeighborVariant::D4],
        Variant::Both => &[NeighborVariant::Full, NeighborVariant::D4],
    };
    let mut budget = false;
    for &v in variants {
        match subalgebra_criterion(&alg, v, inst.options.fuller_bound) {
            Ok(r) => {
                for c in &r.checks {
                    say!(
                        "{:?} vertex {} e = {{{}}}: dim {} {}",
                        v,
                        q.vertex_name(c.vertex),
                        names(&c.subset),
                        c.dim,
                        if c.biserial { "biserial" } else { "not biserial" }
                    );
                }
                say!("{:?}: {}", v, if r.biserial { "biserial" } else { "not biserial" });
            }
            Err(e) => {
                say!("{:?}: {}", v, e);
                budget = true;
            }
        }
    }
    Ok(if budget { EXIT_BUDGET } else { 0 })
}

fn cmd_d4free(file: &Path, budget: usize) -> Result<u8> {
    let inst = load(file)?;
    let alg = build(&inst)?;
    let op = alg.opposite();
    let q = alg.quiver();
    let by_quiver = lem2_check(&alg, &op, 3, Lem2Direction::ByQuiver);
    let by_module = lem2_check(&alg, &op, 3, Lem2Direction::ByModuleSearch);
    say!(
        "kind 1 (three arrows start at a vertex): {} (module search: {})",
        by_quiver.starts, by_module.starts
    );
    say!(
        "kind 2 (three arrows end at a vertex): {} (module search: {})",
        by_quiver.ends, by_module.ends
    );
    let failing = match search_bisected(&alg, inst.options.search_budget) {
        Ok(out) if out.witness.is_some() => {
            say!("bisected presentation found: kinds 3 and 4 cannot occur");
            return Ok(0);
        }
        Ok(out) => out.failing,
        Err(e) => {
            say!("bisected search: {}", e);
            Vec::new()
        }
    };
    let names: Vec<&str> = failing.iter().map(|&v| q.vertex_name(v)).collect();
    say!("vertices without local bisected data: {:?}", names);
    match find_obstruction(&alg, &op, &failing, budget) {
        Some(w) => {
            let rep = certify_obstruction(&alg, &op, &w);
            say!("certified obstruction of kind {} (span reading: {})", w.kind, SPAN_READING);
            if let Some(t) = &w.triple {
                say!(
                    "  i = {}, j = {}, module dimension {}",
                    q.vertex_name(t.i),
                    q.vertex_name(t.j),
                    w.module.dim()
                );
                for r in &rep.transcript {
                    say!(
                        "  pair {:?} {:?}: {}",
                        r.hat_a2,
                        r.hat_a3,
                        if r.feasible { "solvable" } else { "no solution" }
                    );
                }
            }
            Ok(0)
        }
        None => {
            say!("no obstruction found within the searched family");
            Ok(0)
        }
    }
}

fn generate_into(dir: &Path, seed: u64, count: usize, kind: Kind) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let params = GenerateParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in 0..count {
        let corollary = match kind {
            Kind::Random => false,
            Kind::Corollary => true,
            Kind::Mixed => k % 2 == 1,
        };
        let (inst, tag) = if corollary {
            (generate_corollary_instance(&mut rng, &params)?.instance, "corollary")
        } else {
            (generate_random_presentation(&mut rng, &params)?, "random")
        };
        let path = dir.join(format!("{}-{:04}.alg", tag, k));
        let header = format!("# generated: seed {}, index {}\n", seed, k);
        fs::write(&path, header + &print_instance(&inst)).with_context(|| format!("writing {}", path.display()))?;
        out.push(path);
    }
    Ok(out)
}

#[derive(Serialize)]
struct CorpusSummary {
    instances: usize,
    biserial: usize,
    not_biserial: usize,
    budget_exhausted: usize,
    without_witness: usize,
    disagreements: Vec<CorpusDisagreement>,
}

#[derive(Serialize)]
struct CorpusDisagreement {
    file: String,
    instance_hash: String,
    disagreements: Vec<String>,
    instance: String,
}

fn cmd_corpus(
    dir: &Path,
    seed: u64,
    count: Option<usize>,
    kind: Kind,
    reports_out: Option<&Path>,
    strict: bool,
) -> Result<u8> {
    if let Some(n) = count {
        generate_into(dir, seed, n, kind)?;
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "alg"))
        .collect();
    files.sort();
    let instances: Vec<(PathBuf, Instance)> = files
        .into_iter()
        .map(|f| load(&f).map(|i| (f, i)))
        .collect::<Result<_>>()?;
    let mut results: Vec<(String, String, Report)> = instances
        .par_iter()
        .map(|(f, inst)| check(inst, false).map(|r| (instance_hash(inst), f.display().to_string(), r)))
        .collect::<Result<_>>()?;
    results.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));

    let summary = CorpusSummary {
        instances: results.len(),
        biserial: results.iter().filter(|r| r.2.verdicts.fuller == Some(true)).count(),
        not_biserial: results.iter().filter(|r| r.2.verdicts.fuller == Some(false)).count(),
        budget_exhausted: results.iter().filter(|r| r.2.budget_exhausted()).count(),
        without_witness: results.iter().filter(|r| r.2.witnesses.decide.is_none()).count(),
        disagreements: results
            .iter()
            .filter(|r| !r.2.disagreements.is_empty())
            .map(|(h, f, r)| CorpusDisagreement {
                file: f.clone(),
                instance_hash: h.clone(),
                disagreements: r.disagreements.clone(),
                instance: r.instance.clone(),
            })
            .collect(),
    };
    if let Some(path) = reports_out {
        let all: Vec<&Report> = results.iter().map(|r| &r.2).collect();
        fs::write(path, serde_json::to_string(&all)?).with_context(|| format!("writing {}", path.display()))?;
    }
    say!("{}", serde_json::to_string_pretty(&summary)?);
    let reports: Vec<&Report> = results.iter().map(|r| &r.2).collect();
    Ok(status_of(&reports, strict))
}

fn cmd_export_dot(file: &Path, output: Option<&Path>) -> Result<u8> {
    let inst = load(file)?;
    write_out(output, &inst.presentation.quiver().to_dot())?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check {
            files,
            no_timings,
            strict,
            pretty,
        } => cmd_check(&files, no_timings, strict, pretty),
        Command::Witness { file, replay, output } => cmd_witness(&file, replay.as_deref(), output.as_deref()),
        Command::Subalgebra { file, variant } => cmd_subalgebra(&file, variant),
        Command::D4free { file, budget } => cmd_d4free(&file, budget),
        Command::Generate { dir, seed, count, kind } => {
            for p in generate_into(&dir, seed, count, kind)? {
                say!("{}", p.display());
            }
            Ok(0)
        }
        Command::Corpus {
            dir,
            seed,
            count,
            kind,
            reports,
            strict,
        } => cmd_corpus(&dir, seed, count, kind, reports.as_deref(), strict),
        Command::ExportDot { file, output } => cmd_export_dot(&file, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            let code = e.chain().find_map(|c| c.downcast_ref::<Exit>()).map_or(EXIT_PARSE, |x| x.code);
            ExitCode::from(code)
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
