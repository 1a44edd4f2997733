//! `ashg`: check, repair and generate hedonic-game instances from JSON files.
//!
//! Exit status: 0 on success, 1 when `check` finds the partition unstable,
//! 2 on bad input, 3 when a search hits its size limit.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ashg::io::{read_json, to_json_string};
use ashg::nearby::{enumerate_all_stable, nearest_stable_capped, nearest_stable_up_to_symmetry, DEFAULT_VISITED_CAP};
use ashg::{
    build_fig3_tight, build_fig4_cycle, build_fig5_updown, cis_repair, close_cns, compile, enumerate_deviations,
    gen_random_game, gen_update_sequence, is_stable, partition_distance, run_sequence, AlteredInstance, ClassTag,
    CoverInstance, Error, Game, Partition, Policy, Reduction, ReductionParams, RepairPolicy, StabilityNotion,
    UpdateEvent, UpdateSequence, ValueFn, VerifyMode,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ashg", version, about = "Stability and repair for additively separable hedonic games")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Is the partition stable? Lists the deviations when it is not.
    Check {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        notion: StabilityNotion,
    },
    /// Single-agent move distance between two partitions of the same agents.
    Distance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Nearest stable partition of the updated game within the budget.
    Nearest {
        /// `{game, partition, update, notion, k}`.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VISITED_CAP)]
        cap: usize,
        /// Search one partition per class of interchangeable agents.
        #[arg(long)]
        symmetry: bool,
    },
    /// Repair a stable partition after a single-pair update.
    Repair {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t = Order::First)]
        order: Order,
        /// Needed with `--order random`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate games and gadgets.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Build a reduction gadget and check it against its covering instance.
    Reduce {
        #[command(flatten)]
        gadget: GadgetArgs,
        #[arg(long, value_enum, default_value_t = Mode::Witness)]
        mode: Mode,
        /// Comma-separated set indices to use as the witness cover.
        #[arg(long, value_delimiter = ',')]
        chosen: Option<Vec<usize>>,
    },
    /// Apply a sequence of updates, repairing after each.
    Simulate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// A JSON list of single-pair updates.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        updates: Option<PathBuf>,
        /// Number of random updates; needs `--seed`.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, requires = "random")]
        seed: Option<u64>,
        /// `close-cns`, `cis`, `nearest:k` or `greedy`.
        #[arg(long)]
        policy: RepairPolicy,
        #[arg(long)]
        notion: StabilityNotion,
        /// Also write `step,distance,phi,sw` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Every stable partition of a small game.
    EnumerateStable {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        notion: StabilityNotion,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// A random game with values from the class palette.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        class: ClassTag,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        asymmetric: bool,
    },
    /// Eight agents where a single update forces four moves.
    Fig3,
    /// A directed cycle whose repair moves all but three agents.
    Fig4 {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value = "cns")]
        notion: StabilityNotion,
    },
    /// Two hubs whose alternating updates each move half the agents.
    Fig5 {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// A reduction gadget for a covering instance.
    Reduce {
        #[command(flatten)]
        gadget: GadgetArgs,
    },
}

#[derive(Args)]
struct GadgetArgs {
    /// Construction name (`hub`, `star`, ...) or its `thm` code.
    #[arg(long, alias = "construction")]
    theorem: String,
    /// `{"variant", "E", "sets", "k"}`.
    #[arg(long)]
    cover: PathBuf,
    /// Defaults to the first notion the construction supports.
    #[arg(long)]
    notion: Option<StabilityNotion>,
    #[arg(long, default_value = "1")]
    alpha: ValueFn,
    #[arg(long, default_value = "1")]
    beta: ValueFn,
    /// Build the non-symmetric variant.
    #[arg(long)]
    asymmetric: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    CloseCns,
    CisDynamics,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    First,
    Largest,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    Witness,
}

/// Result of a subcommand: JSON to print and the exit status.
struct Output {
    value: Value,
    status: u8,
    extra: Option<(PathBuf, String)>,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output { value, status: 0, extra: None }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command);
    match result {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => to_json_string(&out.value) + "\n",
                Format::Table => table(&out.value),
            };
            let written = match &cli.out {
                Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            let extra = out.extra.map_or(Ok(()), |(path, body)| {
                fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
            });
            if let Err(e) = written.and(extra) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => 3,
                _ => 2,
            })
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(command: Command) -> ashg::Result<Output> {
    match command {
        Command::Check { game, partition, notion } => {
            let g: Game = read_json(game)?;
            let p = read_partition(&partition, &g)?;
            let stable = is_stable(&g, &p, notion);
            let mut value = json!({ "stable": stable });
            if !stable {
                value["deviations"] = to_value(&enumerate_deviations(&g, &p, notion));
            }
            Ok(Output { value, status: if stable { 0 } else { 1 }, extra: None })
        }
        Command::Distance { a, b } => {
            let (p, q) = labelled_pair(&a, &b)?;
            Ok(Output::ok(json!({ "distance": partition_distance(&p, &q)? })))
        }
        Command::Nearest { instance, cap, symmetry } => {
            let inst: AlteredInstance = read_json(instance)?;
            let found = if symmetry {
                let h = inst.altered_game()?;
                nearest_stable_up_to_symmetry(&h, &inst.stable_start, inst.notion, inst.k, cap)?
            } else {
                nearest_stable_capped(&inst, cap)?
            };
            Ok(Output::ok(to_value(&found)))
        }
        Command::Repair { instance, algorithm, order, seed } => {
            let inst: AlteredInstance = read_json(instance)?;
            let (a, b, v) = inst
                .update
                .as_single_pair()
                .ok_or_else(|| Error::Contract("repair needs an update of exactly one pair".into()))?;
            let report = match algorithm {
                Algorithm::CloseCns => close_cns(&inst.game, &inst.stable_start, (a, b), v)?,
                Algorithm::CisDynamics => {
                    let policy = match order {
                        Order::First => Policy::FirstInOrder,
                        Order::Largest => Policy::LargestTargetCoalition,
                        Order::Random => Policy::Random(
                            seed.ok_or_else(|| Error::Input("--order random needs --seed".into()))?,
                        ),
                    };
                    cis_repair(&inst.game, &inst.stable_start, (a, b), v, policy)?
                }
            };
            Ok(Output::ok(to_value(&report)))
        }
        Command::Gen { what } => gen(what),
        Command::Reduce { gadget, mode, chosen } => {
            let bundle = build_gadget(&gadget)?;
            let mode = match mode {
                Mode::Full => VerifyMode::FullIff,
                Mode::Witness => VerifyMode::Witness(chosen),
            };
            let report = ashg::verify_correspondence(&bundle, mode)?;
            let mut value = to_value(&report);
            value["provenance"] = json!(bundle.provenance);
            value["budget"] = json!(bundle.budget);
            value["n"] = json!(bundle.game.n());
            Ok(Output::ok(value))
        }
        Command::Simulate { game, partition, updates, random, seed, policy, notion, csv } => {
            let g: Game = read_json(game)?;
            let p = read_partition(&partition, &g)?;
            let seq = match (updates, random) {
                (Some(path), _) => {
                    let updates: Vec<UpdateEvent> = read_json(path)?;
                    UpdateSequence { initial_game: g, initial_partition: p, updates, notion }
                }
                (None, Some(m)) => {
                    let seed = seed.ok_or_else(|| Error::Input("--random needs --seed".into()))?;
                    gen_update_sequence(&g, &p, notion, m, seed, None)?
                }
                (None, None) => return Err(Error::Input("give --updates or --random".into())),
            };
            let report = run_sequence(&seq, policy)?;
            let extra = csv.map(|path| (path, report.to_csv()));
            Ok(Output { value: to_value(&report), status: 0, extra })
        }
        Command::EnumerateStable { game, notion, max_n } => {
            let g: Game = read_json(game)?;
            let all = enumerate_all_stable(&g, notion, max_n)?;
            Ok(Output::ok(json!({ "count": all.len(), "partitions": all })))
        }
    }
}

fn gen(what: GenCommand) -> ashg::Result<Output> {
    let value = match what {
        GenCommand::Random { n, class, seed, asymmetric } => {
            let seed = seed.ok_or_else(|| Error::Input("gen random needs an explicit --seed".into()))?;
            to_value(&gen_random_game(n, class, !asymmetric, seed, None)?)
        }
        GenCommand::Fig3 => to_value(&build_fig3_tight()),
        GenCommand::Fig4 { n, notion } => to_value(&build_fig4_cycle(n, notion)?),
        GenCommand::Fig5 { n } => to_value(&build_fig5_updown(n)?),
        GenCommand::Reduce { gadget } => to_value(&build_gadget(&gadget)?),
    };
    Ok(Output::ok(value))
}

fn build_gadget(args: &GadgetArgs) -> ashg::Result<ashg::GadgetBundle> {
    let cover: CoverInstance = read_json(&args.cover)?;
    let probe = Reduction::select(&args.theorem, args.notion.unwrap_or(StabilityNotion::Cns))?;
    let notion = args.notion.unwrap_or(probe.notions()[0]);
    let reduction = Reduction::select(&args.theorem, notion)?;
    let params = ReductionParams { alpha: args.alpha.clone(), beta: args.beta.clone() };
    compile(&cover, &params, notion, reduction, !args.asymmetric)
}

fn read_partition(path: &Path, g: &Game) -> ashg::Result<Partition> {
    let p: Partition = read_json(path)?;
    if p.n() != g.n() {
        return Err(Error::Input(format!(
            "{} covers {} agents but the game has {}",
            path.display(),
            p.n(),
            g.n()
        )));
    }
    Ok(p)
}

/// Two partitions given as lists of arbitrary integer labels, relabelled
/// onto `0..n` in sorted label order.
fn labelled_pair(a: &Path, b: &Path) -> ashg::Result<(Partition, Partition)> {
    let ca: Vec<Vec<i64>> = read_json(a)?;
    let cb: Vec<Vec<i64>> = read_json(b)?;
    let labels = |cs: &[Vec<i64>]| cs.iter().flatten().copied().collect::<BTreeSet<i64>>();
    let (la, lb) = (labels(&ca), labels(&cb));
    if la != lb {
        return Err(Error::Input("the two partitions cover different agents".into()));
    }
    let index: Vec<i64> = la.into_iter().collect();
    let n = index.len();
    let relabel = |cs: Vec<Vec<i64>>| {
        let cs: Vec<Vec<usize>> =
            cs.into_iter().map(|c| c.into_iter().map(|x| index.binary_search(&x).expect("collected")).collect()).collect();
        Partition::from_coalitions(n, cs)
    };
    Ok((relabel(ca)?, relabel(cb)?))
}

/// Top-level fields one per line; nested values stay compact JSON.
fn table(value: &Value) -> String {
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match value {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter().map(|(k, v)| format!("{k:<width$}  {}\n", cell(v))).collect()
        }
        Value::Array(items) => items.iter().map(|v| cell(v) + "\n").collect(),
        other => cell(other) + "\n",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn table_lists_fields() {
        let t = table(&json!({ "stable": true, "distance": 3 }));
        assert!(t.contains("stable"));
        assert!(t.contains("distance  3"));
    }
}
