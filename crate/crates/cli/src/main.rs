use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use bnpg::io::{
    generate_instance, parse_instance, serialize_instance, DocumentError, GameParams, GenSpec,
    Instance, InstanceDocument, Topology,
};
use bnpg::oracle::{brute_anm, brute_max_knapsack, brute_min_knapsack, enumerate_psne};
use bnpg::reductions::{
    dpgg_to_bnpg, homogenize, homogenize_bounded_degree, knapsack_to_anm, sat_to_anm, SatVariant,
    Symmetry,
};
use bnpg::{
    verify_eps_ne, verify_psne, AnmRegistry, BnpgError, EpsQuery, EpsVerdict, MinKnapsack,
    PsneRegistry, PsneVerdict, Rational, DEFAULT_MAX_RANK,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_INPUT: u8 = 1;
const EXIT_GUARD: u8 = 2;
const EXIT_NONE: u8 = 3;

/// Exact solvers for binary networked public goods games with altruism.
#[derive(Parser)]
#[command(name = "bnpg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a pure profile (or, with --eps, a mixed profile) against a game.
    Verify {
        game: String,
        profile: String,
        /// Tolerance for mixed profiles.
        #[arg(long, default_value = "0")]
        eps: Rational,
    },
    /// Find a pure Nash equilibrium.
    Solve {
        game: String,
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value_t = DEFAULT_MAX_RANK)]
        max_rank: usize,
    },
    /// Minimum-cost altruism edits making the target an equilibrium.
    Anm {
        instance: String,
        #[arg(long, default_value = "asymmetric")]
        method: String,
    },
    /// Build a reduction instance from a source document.
    Reduce {
        kind: ReduceKind,
        input: String,
        /// knapsack-to-anm: use symmetric altruism.
        #[arg(long)]
        symmetric: bool,
        /// sat-to-anm: which target construction to use.
        #[arg(long, value_enum, default_value = "all-invest")]
        variant: SatVariantArg,
        /// dpgg-to-bnpg: the ε of the cost 1 + 2ε.
        #[arg(long, default_value = "1/10")]
        eps: Rational,
    },
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Run a brute-force reference computation.
    Oracle {
        subproblem: OracleKind,
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    Homogenize,
    #[value(name = "homogenize-deg13")]
    HomogenizeDeg13,
    KnapsackToAnm,
    SatToAnm,
    DpggToBnpg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SatVariantArg {
    AllInvest,
    ArbitraryTarget,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    /// Every pure equilibrium of a game, one per line.
    Psne,
    /// Least total weight reaching the threshold.
    MinKnapsack,
    /// Best profit within the capacity.
    MaxKnapsack,
    /// Minimum-cost edit set of an ANM instance.
    Anm,
    /// First satisfying assignment of a (3,B2) formula.
    Sat,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Tree,
    Clique,
    CircuitRank,
    Sat,
    Knapsack,
    Anm,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseKind {
    Tree,
    Clique,
    CircuitRank,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Player count (games) or variable count (sat).
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Symmetric (undirected) altruism.
    #[arg(long)]
    symmetric: bool,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// knapsack: item count.
    #[arg(long, default_value_t = 8)]
    items: usize,
    #[arg(long, default_value_t = 50)]
    max_weight: u64,
    /// anm: graph family of the underlying game.
    #[arg(long, value_enum, default_value = "tree")]
    base: BaseKind,
    #[arg(long, default_value_t = 16)]
    candidates: usize,
    #[arg(long, default_value_t = 20)]
    max_cost: u64,
}

enum Failure {
    Input(String),
    Guard(String),
    NoSolution(String),
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<BnpgError> for Failure {
    fn from(e: BnpgError) -> Self {
        match e {
            BnpgError::SizeGuard { .. }
            | BnpgError::RankExceeded { .. }
            | BnpgError::NotAForest
            | BnpgError::NotComplete => Failure::Guard(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
    }
}

fn read_doc(path: &str) -> Result<InstanceDocument, Failure> {
    Ok(parse_instance(&read_text(path)?)?)
}

fn wrong_kind(path: &str, doc: &InstanceDocument, expected: &str) -> Failure {
    Failure::Input(format!(
        "{path}: expected a {expected} document, found {}",
        doc.kind()
    ))
}

macro_rules! expect_kind {
    ($path:expr, $variant:ident, $name:expr) => {{
        let doc = read_doc($path)?;
        match doc.instance {
            Instance::$variant(x) => x,
            _ => return Err(wrong_kind($path, &doc, $name)),
        }
    }};
}

fn emit(instance: Instance, description: String) -> String {
    serialize_instance(&InstanceDocument::new(instance).with_description(description))
}

fn verify(game: &str, profile: &str, eps: Rational) -> Outcome {
    let g = expect_kind!(game, Game, "game");
    let doc = read_doc(profile)?;
    match doc.instance {
        Instance::Profile(p) => match verify_psne(&g, &p)? {
            PsneVerdict::Equilibrium => Ok(format!("equilibrium {p}\n")),
            PsneVerdict::Deviator(v) => Err(Failure::NoSolution(format!(
                "not an equilibrium: player {v} gains by flipping"
            ))),
        },
        Instance::Mixed(m) => {
            let q = EpsQuery::new(eps)?;
            match verify_eps_ne(&g, &m, &q)? {
                EpsVerdict::Equilibrium => Ok(format!("{}-equilibrium\n", q.eps())),
                EpsVerdict::Violation {
                    player,
                    played,
                    alternative,
                    regret,
                } => Err(Failure::NoSolution(format!(
                    "not a {}-equilibrium: player {player} gains {regret} by switching from {played} to {alternative}",
                    q.eps()
                ))),
            }
        }
        _ => Err(wrong_kind(profile, &doc, "profile or mixed")),
    }
}

fn solve(game: &str, method: &str, max_rank: usize) -> Outcome {
    let g = expect_kind!(game, Game, "game");
    let registry = PsneRegistry::standard(max_rank);
    let solver = registry.get(method)?;
    match solver.solve(&g)? {
        Some(p) => Ok(emit(
            Instance::Profile(p),
            format!("pure equilibrium ({method})"),
        )),
        None => Err(Failure::NoSolution(
            "no pure Nash equilibrium exists".into(),
        )),
    }
}

fn anm(instance: &str, method: &str) -> Outcome {
    let a = expect_kind!(instance, Anm, "anm");
    let registry = AnmRegistry::standard();
    match registry.get(method)?.solve(&a)? {
        Some(e) => Ok(emit(
            Instance::Edits(e),
            format!("minimum-cost edits ({method})"),
        )),
        None => Err(Failure::NoSolution(format!(
            "no edit set within budget {} makes the target an equilibrium",
            a.budget()
        ))),
    }
}

fn reduce(
    kind: ReduceKind,
    input: &str,
    symmetric: bool,
    variant: SatVariantArg,
    eps: Rational,
) -> Outcome {
    let (instance, description) = match kind {
        ReduceKind::Homogenize => {
            let a = expect_kind!(input, Anm, "anm");
            let symmetry = if a.is_directed() {
                Symmetry::Asymmetric
            } else {
                Symmetry::Symmetric
            };
            let h = homogenize(&a, symmetry)?;
            (
                Instance::Anm(h.instance),
                "fully homogeneous ANM".to_string(),
            )
        }
        ReduceKind::HomogenizeDeg13 => {
            let a = expect_kind!(input, Anm, "anm");
            let h = homogenize_bounded_degree(&a)?;
            (
                Instance::Anm(h.instance),
                "fully homogeneous ANM, degree at most 13".to_string(),
            )
        }
        ReduceKind::KnapsackToAnm => {
            let ks = expect_kind!(input, Knapsack, "knapsack");
            let symmetry = if symmetric {
                Symmetry::Symmetric
            } else {
                Symmetry::Asymmetric
            };
            (
                Instance::Anm(knapsack_to_anm(&ks, symmetry)?),
                format!("ANM from decision knapsack ({symmetry:?})"),
            )
        }
        ReduceKind::SatToAnm => {
            let sat = expect_kind!(input, Sat, "sat");
            let v = match variant {
                SatVariantArg::AllInvest => SatVariant::AllInvest,
                SatVariantArg::ArbitraryTarget => SatVariant::ArbitraryTarget,
            };
            (
                Instance::Anm(sat_to_anm(&sat, v)?),
                format!("ANM from (3,B2)-SAT ({v:?})"),
            )
        }
        ReduceKind::DpggToBnpg => {
            let dg = expect_kind!(input, Dpgg, "dpgg");
            (
                Instance::Game(dpgg_to_bnpg(&dg, &eps)?),
                format!("BNPG game from directed public goods game, eps {eps}"),
            )
        }
    };
    Ok(emit(instance, description))
}

fn gen(args: &GenArgs) -> Outcome {
    let topology = |kind: BaseKind| match kind {
        BaseKind::Tree => Topology::Tree {
            n: args.n,
            max_degree: args.max_degree,
        },
        BaseKind::Clique => Topology::Clique { n: args.n },
        BaseKind::CircuitRank => Topology::CircuitRank {
            n: args.n,
            rank: args.rank,
        },
    };
    if !(0.0..=1.0).contains(&args.density) {
        return Err(Failure::Input(format!(
            "density {} is not a probability",
            args.density
        )));
    }
    let params = |kind| GameParams {
        topology: topology(kind),
        directed: !args.symmetric,
        altruism_density: args.density,
    };
    let spec = match args.kind {
        GenKind::Tree => GenSpec::Game(params(BaseKind::Tree)),
        GenKind::Clique => GenSpec::Game(params(BaseKind::Clique)),
        GenKind::CircuitRank => GenSpec::Game(params(BaseKind::CircuitRank)),
        GenKind::Sat => GenSpec::Sat { variables: args.n },
        GenKind::Knapsack => GenSpec::Knapsack {
            items: args.items,
            max_weight: args.max_weight,
        },
        GenKind::Anm => GenSpec::Anm {
            game: params(args.base),
            candidates: args.candidates,
            max_cost: args.max_cost,
        },
    };
    Ok(serialize_instance(&generate_instance(&spec, args.seed)?))
}

fn oracle(kind: OracleKind, input: &str) -> Outcome {
    match kind {
        OracleKind::Psne => {
            let g = expect_kind!(input, Game, "game");
            let all = enumerate_psne(&g)?;
            if all.is_empty() {
                return Err(Failure::NoSolution(
                    "no pure Nash equilibrium exists".into(),
                ));
            }
            Ok(all.iter().map(|p| format!("{p}\n")).collect())
        }
        OracleKind::MinKnapsack => {
            let ks = expect_kind!(input, Knapsack, "knapsack");
            let p = ks
                .threshold
                .clone()
                .ok_or_else(|| Failure::Input("knapsack document has no threshold".into()))?;
            match brute_min_knapsack(&ks.items, &p)? {
                MinKnapsack::Optimal { weight, selection } => {
                    Ok(format!("weight {weight} items {selection:?}\n"))
                }
                MinKnapsack::Infeasible => {
                    Err(Failure::NoSolution(format!("total profit is below {p}")))
                }
            }
        }
        OracleKind::MaxKnapsack => {
            let ks = expect_kind!(input, Knapsack, "knapsack");
            let w = ks
                .capacity
                .ok_or_else(|| Failure::Input("knapsack document has no capacity".into()))?;
            Ok(format!("profit {}\n", brute_max_knapsack(&ks.items, w)?))
        }
        OracleKind::Anm => {
            let a = expect_kind!(input, Anm, "anm");
            match brute_anm(&a)? {
                Some(e) => Ok(emit(
                    Instance::Edits(e),
                    "minimum-cost edits (brute force)".into(),
                )),
                None => Err(Failure::NoSolution("no edit set within budget".into())),
            }
        }
        OracleKind::Sat => {
            let sat = expect_kind!(input, Sat, "sat");
            match sat.solve_brute()? {
                Some(a) => Ok(a
                    .iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .chain(['\n'])
                    .collect()),
                None => Err(Failure::NoSolution("unsatisfiable".into())),
            }
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("BNPG_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            Failure::Input(format!(
                "BNPG_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Verify { game, profile, eps } => verify(&game, &profile, eps),
        Command::Solve {
            game,
            method,
            max_rank,
        } => solve(&game, &method, max_rank),
        Command::Anm { instance, method } => anm(&instance, &method),
        Command::Reduce {
            kind,
            input,
            symmetric,
            variant,
            eps,
        } => reduce(kind, &input, symmetric, variant, eps),
        Command::Gen(args) => gen(&args),
        Command::Oracle { subproblem, input } => oracle(subproblem, &input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(EXIT_GUARD)
        }
        Err(Failure::NoSolution(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_NONE)
        }
    }
}
