//! The SL[1G] decision pipeline and model checking through automata.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::automata::{
    assemble_full_automaton, search, uct_emptiness_bounded, AutomataError, Emptiness, Frame, MooreWitness,
    SearchLimits, Uct,
};
use crate::formula::{classify, Formula, Fragment, NotSentence};
use crate::game::{Cgs, CgsError};
use crate::semantics::eval_sentence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Action bounds tried in order.
    pub schedule: Vec<usize>,
    /// Largest witness size tried for each bound.
    pub k_max: usize,
    pub time_budget: Option<Duration>,
    /// Re-check SAT witnesses by model checking (and by direct evaluation
    /// for next-only sentences).
    pub verify: bool,
    /// Run the bounds of the schedule on separate threads.
    pub parallel: bool,
    /// Search steps allowed per bound (in total for model checking).
    pub max_steps: u64,
    /// Memory per state for model checking; `None` means the number of
    /// automaton states.
    pub mc_memory: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            schedule: vec![1, 2, 3],
            k_max: 6,
            time_budget: None,
            verify: true,
            parallel: false,
            max_steps: 20_000_000,
            mc_memory: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.schedule.is_empty() {
            return Err(SolverError::Config("bound schedule is empty".into()));
        }
        if self.schedule[0] == 0 || self.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SolverError::Config(
                "bound schedule must be positive and increasing".into(),
            ));
        }
        if self.k_max == 0 {
            return Err(SolverError::Config("k_max must be positive".into()));
        }
        Ok(())
    }

    fn limits(&self, start: Instant) -> SearchLimits {
        SearchLimits {
            max_steps: self.max_steps,
            deadline: self.time_budget.map(|d| start + d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat {
        model: Cgs,
        witness: MooreWitness,
        b: usize,
        k: usize,
    },
    UnsatUpTo {
        b_max: usize,
        k_max: usize,
    },
    FragmentError(Fragment),
    ResourceExhausted(String),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Sat { .. } => "SAT",
            Verdict::UnsatUpTo { .. } => "UNSAT_UP_TO",
            Verdict::FragmentError(_) => "FRAGMENT_ERROR",
            Verdict::ResourceExhausted(_) => "RESOURCE_EXHAUSTED",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error(transparent)]
    NotSentence(#[from] NotSentence),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("sentence is in {0}, not SL1G")]
    Fragment(Fragment),
    #[error("resource exhausted: {0}")]
    Resource(String),
    #[error("witness failed verification: {0}")]
    Verification(String),
    #[error(transparent)]
    Model(#[from] CgsError),
}

enum Attempt {
    Sat(Box<Verdict>),
    Unsat,
    Stop(Verdict),
}

/// Decides satisfiability of an SL[1G] sentence over the configured bounds.
pub fn decide(phi: &Formula, agents: &[String], cfg: &SolverConfig) -> Result<Verdict, SolverError> {
    cfg.validate()?;
    let class = classify(phi, agents)?;
    if class.fragment != Fragment::Sl1g {
        return Ok(Verdict::FragmentError(class.fragment));
    }
    let start = Instant::now();
    let ap: Vec<String> = phi.atoms().into_iter().collect();
    let attempt = |b: usize| try_bound(phi, agents, &ap, b, cfg, start);
    let attempts: Vec<Result<Attempt, SolverError>> = if cfg.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = cfg.schedule.iter().map(|&b| s.spawn(move || attempt(b))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("solver thread panicked"))
                .collect()
        })
    } else {
        let mut out = vec![];
        for &b in &cfg.schedule {
            let a = attempt(b);
            let stop = !matches!(a, Ok(Attempt::Unsat));
            out.push(a);
            if stop {
                break;
            }
        }
        out
    };
    for a in attempts {
        match a? {
            Attempt::Sat(v) => return Ok(*v),
            Attempt::Stop(v) => return Ok(v),
            Attempt::Unsat => {}
        }
    }
    Ok(Verdict::UnsatUpTo {
        b_max: *cfg.schedule.last().expect("validated"),
        k_max: cfg.k_max,
    })
}

fn try_bound(
    phi: &Formula,
    agents: &[String],
    ap: &[String],
    b: usize,
    cfg: &SolverConfig,
    start: Instant,
) -> Result<Attempt, SolverError> {
    let u = match assemble_full_automaton(phi, agents, b, ap) {
        Ok(u) => u,
        Err(AutomataError::TooLarge(d)) => return Ok(Attempt::Stop(Verdict::ResourceExhausted(d))),
        Err(e) => return Err(e.into()),
    };
    match uct_emptiness_bounded(&u, cfg.k_max, cfg.limits(start)) {
        Emptiness::Sat { witness, k } => {
            let model = extract_model(&u, &witness, b)?;
            if cfg.verify {
                verify(&model, phi, cfg)?;
            }
            Ok(Attempt::Sat(Box::new(Verdict::Sat { model, witness, b, k })))
        }
        Emptiness::UnsatUpTo(_) => Ok(Attempt::Unsat),
        Emptiness::Exhausted(d) => Ok(Attempt::Stop(Verdict::ResourceExhausted(d))),
    }
}

fn verify(model: &Cgs, phi: &Formula, cfg: &SolverConfig) -> Result<(), SolverError> {
    let mc = model_check(
        model,
        phi,
        &SolverConfig {
            mc_memory: Some(1),
            ..cfg.clone()
        },
    )?;
    if !mc.holds {
        return Err(SolverError::Verification(
            "model checking rejects the extracted model".into(),
        ));
    }
    if phi.is_next_only() {
        match eval_sentence(model, phi) {
            Ok(true) => {}
            Ok(false) => {
                return Err(SolverError::Verification(
                    "direct evaluation rejects the extracted model".into(),
                ))
            }
            Err(e) => return Err(SolverError::Verification(e.to_string())),
        }
    }
    Ok(())
}

/// The structure generated by a witness of `u`: one state per node,
/// actions `0..b`, labels from the atoms of the structure.
pub fn extract_model(u: &Uct, w: &MooreWitness, b: usize) -> Result<Cgs, SolverError> {
    let num_ap = u.num_ap();
    let labels = w
        .labels()
        .iter()
        .map(|l| (0..num_ap).fold(0u64, |acc, i| acc | ((l[i] as u64 & 1) << i)))
        .collect();
    Ok(Cgs::from_fn(
        u.atoms()[..num_ap].to_vec(),
        u.agents().to_vec(),
        (0..b).map(|a| a.to_string()).collect(),
        (0..w.num_nodes()).map(|n| format!("n{n}")).collect(),
        0,
        labels,
        |s, d| {
            let idx = d.iter().fold(0, |acc, &a| acc * b + a);
            w.successor(s, idx)
        },
    )?)
}

/// Answer of [`model_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McOutcome {
    pub holds: bool,
    /// Memory per state of the labeling found, or the bound searched.
    pub memory: usize,
    /// A labeling was found for the sentence or for its negation; when
    /// false, the answer is only relative to the memory bound.
    pub certified: bool,
}

/// Model checking of an SL[1G] sentence: looks for a finite-memory
/// labeling of the unwinding of `g` accepted by the automaton of `phi`,
/// or of its negation, with increasing memory.
pub fn model_check(g: &Cgs, phi: &Formula, cfg: &SolverConfig) -> Result<McOutcome, SolverError> {
    let agents = g.agents().to_vec();
    let class = classify(phi, &agents)?;
    if class.fragment != Fragment::Sl1g {
        return Err(SolverError::Fragment(class.fragment));
    }
    let neg = Formula::not(phi.clone());
    let pos_u = assemble_full_automaton(phi, &agents, g.num_actions(), g.atoms())?;
    let neg_u = assemble_full_automaton(&neg, &agents, g.num_actions(), g.atoms())?;
    let bound = cfg
        .mc_memory
        .unwrap_or_else(|| pos_u.num_states().max(neg_u.num_states()))
        .max(1);
    let start = Instant::now();
    let deadline = cfg.limits(start).deadline;
    // Every (memory, polarity) search runs with a step budget that doubles
    // each round, so a small labeling is not hidden behind a long refutation.
    let mut open: Vec<(usize, bool)> = (1..=bound).flat_map(|m| [(m, true), (m, false)]).collect();
    let mut spent = 0u64;
    let mut budget = 4096u64;
    while !open.is_empty() {
        let mut still_open = vec![];
        for (memory, holds) in open {
            let u = if holds { &pos_u } else { &neg_u };
            let limits = SearchLimits {
                max_steps: budget,
                deadline,
            };
            let mut steps = 0;
            let r = search(u, &Frame::Model { g, memory }, &limits, &mut steps);
            spent += steps;
            match r {
                Ok(Some(_)) => {
                    return Ok(McOutcome {
                        holds,
                        memory,
                        certified: true,
                    })
                }
                Ok(None) => {}
                Err(e) => {
                    if deadline.is_some_and(|d| Instant::now() >= d) || spent > cfg.max_steps {
                        return Err(SolverError::Resource(e));
                    }
                    still_open.push((memory, holds));
                }
            }
        }
        open = still_open;
        budget = budget.saturating_mul(2);
    }
    Ok(McOutcome {
        holds: false,
        memory: bound,
        certified: false,
    })
}
