//! `slkit`: command-line access to the parser, the evaluators, the automata
//! and the SL[1G] solver.

mod render;
mod suites;

use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use slkit_core::automata::{assemble_full_automaton, ltl_to_ucw, ToDot};
use slkit_core::formula::{
    classify, free, library, normalize, parse, subformulas, Decl, DominoSystem, Formula, LibraryParams, NormalForm,
    QuantPrefix,
};
use slkit_core::game::{builtin, load_cgs, Cgs, TrackTree};
use slkit_core::satsolver::{decide, model_check, SolverConfig, SolverError};
use slkit_core::semantics::{count_sdf, eval_sentence, EvalError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Fragment(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Fragment(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Answer of a command and its exit code.
pub struct Answer {
    pub text: String,
    pub json: serde_json::Value,
    pub code: u8,
}

#[derive(Parser, Debug)]
#[command(
    name = "slkit",
    version,
    about = "Strategy Logic toolkit: fragments, evaluation, automata, SL[1G] satisfiability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the fragment (SL1G, SLBG or SLFull) of a sentence.
    Classify(Common),
    /// Print the free agents and variables.
    Free(Common),
    /// Print the subformulas, one per line.
    Sub(Common),
    /// Print a normal form.
    Normalize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "pnf")]
        form: Form,
    },
    /// Decide satisfiability of an SL[1G] sentence.
    Sat(Common),
    /// Model-check an SL[1G] sentence through automata.
    Mc {
        #[command(flatten)]
        common: Common,
        /// Memory per state of the labeling searched.
        #[arg(long)]
        memory: Option<usize>,
    },
    /// Evaluate a next-only sentence by exhaustive strategy enumeration.
    Eval(Common),
    /// Translate an LTL formula into a universal co-Büchi automaton.
    Ltl2ucw(Common),
    /// Count the Skolem dependence functions of the quantifier prefix of a formula.
    CountSdf {
        #[command(flatten)]
        common: Common,
        /// Domain size; ignored when `--model` and `--horizon` are given.
        #[arg(long, default_value_t = 2)]
        domain: usize,
    },
    /// Run a suite of worked examples.
    Examples {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        json: bool,
    },
    /// Print the automaton of a formula in DOT syntax.
    Dot(Common),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Form {
    Pnf,
    Enf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "paper-all")]
    All,
    Counting,
    Oracle,
    Sat,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Formula text.
    #[arg(short = 'f', long, conflicts_with_all = ["formula_file", "formula_lib"])]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long, conflicts_with = "formula_lib")]
    formula_file: Option<PathBuf>,
    /// Name of a library sentence (ord, unb, trn, grd, til, rec, dom, nash, nash-bg, eg, ag, rs).
    #[arg(long)]
    formula_lib: Option<String>,
    /// Model: a CGS document, or a built-in (ppd, ps, gstar:N, domino:N).
    #[arg(short = 'm', long)]
    model: Option<String>,
    /// Agents, comma separated.
    #[arg(long, value_delimiter = ',')]
    agents: Option<Vec<String>>,
    /// Variables, comma separated.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Action bounds tried in order.
    #[arg(long, value_delimiter = ',')]
    bound_schedule: Option<Vec<usize>>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Track horizon for strategy counting.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Also write the relevant automaton or witness as DOT to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Seconds.
    #[arg(long)]
    time_budget: Option<f64>,
}

struct Input {
    formula: Formula,
    agents: Vec<String>,
    model: Option<Cgs>,
}

impl Common {
    fn model(&self) -> Result<Option<Cgs>, CliError> {
        let Some(m) = &self.model else { return Ok(None) };
        let path = Path::new(m);
        if path.exists() {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{m}: {e}")))?;
            return load_cgs(&text).map(Some).map_err(|e| usage(format!("{m}: {e}")));
        }
        builtin(m)
            .map(Some)
            .map_err(|e| usage(format!("{m}: no such file, and {e}")))
    }

    fn input(&self) -> Result<Input, CliError> {
        let model = self.model()?;
        if let Some(name) = &self.formula_lib {
            let params = LibraryParams {
                domino: Some(DominoSystem::sample()),
                ..Default::default()
            };
            let s = library(name, &params).map_err(usage)?;
            return Ok(Input {
                formula: s.formula,
                agents: s.agents,
                model,
            });
        }
        let text = match (&self.formula, &self.formula_file) {
            (Some(t), _) => t.clone(),
            (None, Some(p)) => fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
            (None, None) => return Err(usage("one of --formula, --formula-file, --formula-lib is required")),
        };
        let agents = match (&self.agents, &model) {
            (Some(a), _) => a.clone(),
            (None, Some(g)) => g.agents().to_vec(),
            (None, None) => vec![],
        };
        let decl = Decl {
            agents: agents.clone(),
            vars: self.vars.as_ref().map(|v| v.iter().cloned().collect()),
            atoms: model.as_ref().map(|g| g.atoms().iter().cloned().collect()),
        };
        let formula = parse(text.trim(), &decl).map_err(usage)?;
        Ok(Input { formula, agents, model })
    }

    fn solver(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(s) = &self.bound_schedule {
            cfg.schedule = s.clone();
        }
        if let Some(k) = self.k_max {
            cfg.k_max = k;
        }
        cfg.time_budget = self.time_budget.map(Duration::from_secs_f64);
        cfg
    }

    fn write_dot(&self, dot: impl FnOnce() -> Result<String, CliError>) -> Result<(), CliError> {
        if let Some(path) = &self.dot {
            fs::write(path, dot()?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn need_model(model: Option<Cgs>) -> Result<Cgs, CliError> {
    model.ok_or_else(|| usage("--model is required"))
}

fn solver_error(e: SolverError) -> CliError {
    match e {
        SolverError::Fragment(f) => CliError::Fragment(format!("sentence is in {f}, not SL1G")),
        SolverError::Resource(d) => CliError::Resource(d),
        other => usage(other),
    }
}

fn run(cli: Cli) -> Result<(Answer, bool), CliError> {
    let answer = match &cli.command {
        Command::Classify(c) => {
            let i = c.input()?;
            let class = classify(&i.formula, &i.agents).map_err(usage)?;
            (render::classify(&class), c.json)
        }
        Command::Free(c) => {
            let i = c.input()?;
            (render::free(&free(&i.formula, &i.agents)), c.json)
        }
        Command::Sub(c) => {
            let i = c.input()?;
            (render::formulas("subformulas", subformulas(&i.formula).iter()), c.json)
        }
        Command::Normalize { common, form } => {
            let i = common.input()?;
            let nf = match form {
                Form::Pnf => NormalForm::Pnf,
                Form::Enf => NormalForm::Enf,
            };
            (
                render::formulas("normalized", [normalize(&i.formula, nf)].iter()),
                common.json,
            )
        }
        Command::Sat(c) => {
            let i = c.input()?;
            let v = decide(&i.formula, &i.agents, &c.solver()).map_err(solver_error)?;
            if let slkit_core::satsolver::Verdict::Sat { witness, .. } = &v {
                c.write_dot(|| Ok(witness.to_dot()))?;
            }
            (render::verdict(&v), c.json)
        }
        Command::Mc { common, memory } => {
            let i = common.input()?;
            let g = need_model(i.model)?;
            let cfg = SolverConfig {
                mc_memory: *memory,
                ..common.solver()
            };
            let out = model_check(&g, &i.formula, &cfg).map_err(solver_error)?;
            (render::model_check(&out), common.json)
        }
        Command::Eval(c) => {
            let i = c.input()?;
            let g = need_model(i.model)?;
            let holds = eval_sentence(&g, &i.formula).map_err(|e| match e {
                EvalError::Unbounded => CliError::Fragment(e.to_string()),
                EvalError::TooLarge(_) => CliError::Resource(e.to_string()),
                other => usage(other),
            })?;
            (render::truth(holds), c.json)
        }
        Command::Ltl2ucw(c) => {
            let i = c.input()?;
            let atoms: Vec<String> = i.formula.atoms().into_iter().collect();
            let u = ltl_to_ucw(&i.formula, &atoms).map_err(usage)?;
            c.write_dot(|| Ok(u.to_dot()))?;
            (render::ucw(&u, &atoms), c.json)
        }
        Command::CountSdf { common, domain } => {
            let i = common.input()?;
            let (prefix, _) = QuantPrefix::split(&i.formula).map_err(usage)?;
            let d = match (&i.model, common.horizon) {
                (Some(g), Some(h)) => TrackTree::build(g, g.initial(), h)
                    .strategy_count(g.num_actions())
                    .ok_or_else(|| CliError::Resource("too many strategies at this horizon".into()))?,
                _ => *domain,
            };
            (render::count(&prefix, d, &count_sdf(&prefix, d)), common.json)
        }
        Command::Examples { suite, json } => (suites::run(*suite), *json),
        Command::Dot(c) => {
            let i = c.input()?;
            let atoms: Vec<String> = i.formula.atoms().into_iter().collect();
            let dot = if i.agents.is_empty() {
                ltl_to_ucw(&i.formula, &atoms).map_err(usage)?.to_dot()
            } else {
                let class = classify(&i.formula, &i.agents).map_err(usage)?;
                if class.fragment != slkit_core::formula::Fragment::Sl1g {
                    return Err(CliError::Fragment(format!(
                        "sentence is in {}, not SL1G",
                        class.fragment
                    )));
                }
                let b = c.solver().schedule[0];
                assemble_full_automaton(&i.formula, &i.agents, b, &atoms)
                    .map_err(|e| solver_error(e.into()))?
                    .to_dot()
            };
            if c.dot.is_some() {
                c.write_dot(|| Ok(dot))?;
                return Ok((
                    Answer {
                        text: "written".into(),
                        json: json!({ "written": true }),
                        code: 0,
                    },
                    c.json,
                ));
            }
            (
                Answer {
                    json: json!({ "dot": dot }),
                    text: dot.trim_end().to_string(),
                    code: 0,
                },
                c.json,
            )
        }
    };
    Ok(answer)
}

fn main() -> ExitCode {
    let styled = std::env::var_os("SLKIT_NO_COLOR").is_none() && std::io::stdout().is_terminal();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((answer, as_json)) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&answer.json).expect("serializable"));
            } else {
                println!("{}", render::style(&answer.text, answer.code, styled));
            }
            ExitCode::from(answer.code)
        }
        Err(e) => {
            eprintln!("slkit: {e}");
            ExitCode::from(e.code())
        }
    }
}
