use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use commwidth::describe::{self, Entry, Group};
use commwidth::harness::{self, CheckConfig, LemmaReport, StagedPlan, LEMMAS};
use commwidth::models::{FiniteModel, GroupModel, Linearized};

#[derive(Parser)]
#[command(name = "commwidth", version, about = "Commutator subgroups and widths on exact group models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate group description files.
    Validate {
        paths: Vec<PathBuf>,
        /// Also validate every file of the corpus directory.
        #[arg(long)]
        corpus: bool,
    },
    /// Lower central and derived series of a group.
    Series(Target),
    /// The commutator subgroup [A,B] and its decomposition over components.
    Commutator(Pair),
    /// [A,B] plus width certificates for sampled elements.
    Width {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run check batteries over the corpus.
    Check(CheckArgs),
    /// List the battery ids.
    Lemmas,
}

#[derive(Args)]
struct Target {
    /// Entry name.
    group: String,
    /// Read entries from these files instead of the corpus.
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
}

#[derive(Args)]
struct Pair {
    #[command(flatten)]
    target: Target,
    /// whole, trivial, center, component, derived or catalog:<index>
    #[arg(long, default_value = "whole")]
    a: String,
    #[arg(long, default_value = "whole")]
    b: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Battery id; repeatable.
    #[arg(long = "lemma")]
    lemmas: Vec<String>,
    /// Run every battery.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Write report lines here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print totals per battery.
    #[arg(long)]
    summary: bool,
    /// Read entries from these files instead of the corpus.
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
}

fn load(inputs: &[PathBuf]) -> anyhow::Result<Vec<Entry>> {
    if inputs.is_empty() {
        let dir = describe::corpus_dir();
        return describe::load_corpus(&dir).with_context(|| format!("loading corpus {}", dir.display()));
    }
    let mut out = Vec::new();
    for p in inputs {
        out.extend(describe::load_file(p)?);
    }
    Ok(out)
}

fn find(target: &Target) -> anyhow::Result<Entry> {
    load(&target.inputs)?
        .into_iter()
        .find(|e| e.name == target.group)
        .ok_or_else(|| anyhow!("no entry named `{}`", target.group))
}

fn pick<M: GroupModel>(m: &M, spec: &str) -> anyhow::Result<M::Subgroup> {
    let whole = m.whole();
    Ok(match spec {
        "whole" => whole,
        "trivial" => m.trivial(),
        "center" => m.center(),
        "component" => m.connected_component(&whole),
        "derived" => m.commutator_subgroup(&whole, &whole)?,
        _ => {
            let i: usize = spec
                .strip_prefix("catalog:")
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| anyhow!("unknown subgroup `{spec}`"))?;
            m.catalog_subgroups().get(i).cloned().ok_or_else(|| anyhow!("catalog has no subgroup {i}"))?
        }
    })
}

fn validate(paths: &[PathBuf], corpus: bool, out: &mut impl Write) -> anyhow::Result<bool> {
    let mut files = paths.to_vec();
    if corpus {
        files.extend(describe::corpus_files(&describe::corpus_dir())?);
    }
    let mut ok = true;
    let mut count = 0;
    for f in &files {
        match describe::load_file(f) {
            Ok(entries) => {
                for e in entries {
                    count += 1;
                    writeln!(out, "ok\t{}\t{}\t{}", f.display(), e.group.kind(), e.name)?;
                }
            }
            Err(e) => {
                ok = false;
                writeln!(out, "invalid\t{}\t{e}", f.display())?;
            }
        }
    }
    writeln!(out, "{count} entries in {} files", files.len())?;
    Ok(ok)
}

fn series<M: GroupModel>(m: &M, out: &mut impl Write) -> anyhow::Result<()> {
    let whole = m.whole();
    for g in [whole.clone(), m.connected_component(&whole)] {
        writeln!(out, "group {}", m.subgroup_json(&g))?;
        for (name, terms) in [("lower central", harness::lower_central(m, &g)?), ("derived", harness::derived(m, &g)?)] {
            writeln!(out, "  {name}:")?;
            for (i, t) in terms.iter().enumerate() {
                writeln!(out, "    {i}\tdim {}\tindex {}\t{}", m.dim(t), m.component_index(t), m.subgroup_json(t))?;
            }
        }
        if m.is_connected(&g) {
            break;
        }
    }
    Ok(())
}

fn commutator<M: GroupModel>(m: &M, pair: &Pair, out: &mut impl Write) -> anyhow::Result<()> {
    let (a, b) = (pick(m, &pair.a)?, pick(m, &pair.b)?);
    let d = harness::decomposition(m, &a, &b)?;
    let c = &d.commutator;
    let with_a0 = m.commutator_subgroup(&m.connected_component(&a), &b)?;
    let with_b0 = m.commutator_subgroup(&a, &m.connected_component(&b))?;
    let fields = [
        ("commutator", m.subgroup_json(c)),
        ("dim", json!(m.dim(c))),
        ("component_index", json!(m.component_index(c))),
        ("connected_commutator", m.subgroup_json(&m.connected_component(c))),
        ("with_a_connected", m.subgroup_json(&with_a0)),
        ("with_b_connected", m.subgroup_json(&with_b0)),
        ("decomposition_holds", json!(d.holds)),
    ];
    for (k, v) in fields {
        writeln!(out, "{k}\t{v}")?;
    }
    Ok(())
}

fn width_linear<M: Linearized>(m: &M, pair: &Pair, samples: usize, seed: u64, out: &mut impl Write) -> anyhow::Result<()> {
    commutator(m, pair, out)?;
    let (a, b) = (pick(m, &pair.a)?, pick(m, &pair.b)?);
    let c = m.commutator_subgroup(&a, &b)?;
    let plan = StagedPlan::new(m, &a, &b)?;
    writeln!(out, "stage dims {:?}", plan.stage_dims())?;
    writeln!(out, "length\tcorrection\ttarget")?;
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let target = m.random_element(rng, &c);
        let cert = plan.certify_any(m, &a, &b, &target)?;
        if !cert.is_valid(m, &a, &b) {
            bail!("certificate failed to replay for {}", m.element_json(&target));
        }
        writeln!(out, "{}\t{}\t{}", cert.connected_len(), cert.correction_len(), m.element_json(&target))?;
    }
    Ok(())
}

fn width_finite(m: &FiniteModel, pair: &Pair, out: &mut impl Write) -> anyhow::Result<()> {
    commutator(m, pair, out)?;
    let (a, b) = (pick(m, &pair.a)?, pick(m, &pair.b)?);
    let p = m.group().commutator_profile(&a, &b);
    let sizes: Vec<usize> = p.sets.iter().map(Vec::len).collect();
    writeln!(out, "width {}\tproducts of at most n commutators: {sizes:?}", p.width)?;
    Ok(())
}

fn summary(reports: &[LemmaReport], out: &mut impl Write) -> io::Result<()> {
    for l in LEMMAS {
        let rs: Vec<_> = reports.iter().filter(|r| r.lemma == l.id).collect();
        if rs.is_empty() {
            continue;
        }
        let instances: usize = rs.iter().map(|r| r.instances).sum();
        let failed = rs.iter().filter(|r| !r.passed).count();
        let verdict = if failed == 0 { "pass" } else { "FAIL" };
        writeln!(out, "{verdict}\t{:<24}\t{} models\t{instances} instances\t{failed} failing", l.id, rs.len())?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(out, "total\t{} reports\t{failed} failing", reports.len())
}

fn check(args: &CheckArgs) -> anyhow::Result<bool> {
    let ids: Vec<&str> = if args.all {
        LEMMAS.iter().map(|l| l.id).collect()
    } else if args.lemmas.is_empty() {
        bail!("give --lemma <id> or --all");
    } else {
        args.lemmas.iter().map(String::as_str).collect()
    };
    let entries = load(&args.inputs)?;
    let cfg = CheckConfig { seed: args.seed, samples: args.samples as usize };
    let reports = harness::run_checks(&entries, &ids, &cfg)?;
    let mut sink: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    };
    for r in &reports {
        writeln!(sink, "{}", r.to_line())?;
    }
    sink.flush()?;
    if args.summary {
        summary(&reports, &mut io::stderr().lock())?;
    }
    Ok(reports.iter().all(|r| r.passed))
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let out = &mut io::stdout().lock();
    match cli.command {
        Command::Validate { paths, corpus } => validate(&paths, corpus, out),
        Command::Series(t) => {
            match find(&t)?.group {
                Group::Finite(m) => series(&m, out)?,
                Group::Malcev(m) => series(&m, out)?,
                Group::Lbf(m) => series(&m, out)?,
                Group::Tbu(m) => series(&m, out)?,
                Group::Abelian(_) => bail!("series are trivial for abelian groups"),
            }
            Ok(true)
        }
        Command::Commutator(p) => {
            match find(&p.target)?.group {
                Group::Finite(m) => commutator(&m, &p, out)?,
                Group::Malcev(m) => commutator(&m, &p, out)?,
                Group::Lbf(m) => commutator(&m, &p, out)?,
                Group::Tbu(m) => commutator(&m, &p, out)?,
                Group::Abelian(_) => bail!("commutators vanish in abelian groups"),
            }
            Ok(true)
        }
        Command::Width { pair, samples, seed } => {
            match find(&pair.target)?.group {
                Group::Finite(m) => width_finite(&m, &pair, out)?,
                Group::Malcev(m) => width_linear(&m, &pair, samples, seed, out)?,
                Group::Lbf(m) => width_linear(&m, &pair, samples, seed, out)?,
                Group::Tbu(m) => width_linear(&m, &pair, samples, seed, out)?,
                Group::Abelian(_) => bail!("commutators vanish in abelian groups"),
            }
            Ok(true)
        }
        Command::Check(args) => check(&args),
        Command::Lemmas => {
            for l in LEMMAS {
                writeln!(out, "{:<24}\t{:<28}\t{}", l.id, l.kinds.join(","), l.summary)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
