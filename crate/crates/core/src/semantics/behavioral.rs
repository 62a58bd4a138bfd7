use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;

use super::eval::{temporal_depth, Depth, EvalError, Evaluator, Limits, Mode};
use super::sdf::{count_sdf, enumerate_sdf, SkolemDepFn};
use crate::formula::{free, Formula, Quant, QuantPrefix};
use crate::game::{Assignment, Cgs, HorizonStrategy, Place, TrackTree};

/// A principal sentence split into prefix and matrix, with the strategies
/// of its horizon.
struct Principal<'f> {
    prefix: QuantPrefix,
    matrix: &'f Formula,
    tree: Arc<TrackTree>,
    strategies: usize,
}

fn principal<'f>(ev: &Evaluator<'_>, f: &'f Formula, s: usize) -> Result<Principal<'f>, EvalError> {
    if !free(f, ev.g.agents()).is_empty() {
        return Err(EvalError::NotPrincipal(format!("`{f}` has free names")));
    }
    let (prefix, matrix) = QuantPrefix::split(f).map_err(|e| EvalError::NotPrincipal(e.to_string()))?;
    if temporal_depth(matrix) == Depth::Omega {
        return Err(EvalError::Unbounded);
    }
    let tree = ev.tree_for(matrix, s)?;
    let strategies = ev.strategy_count(&tree)?;
    Ok(Principal {
        prefix,
        matrix,
        tree,
        strategies,
    })
}

fn check_budget(what: &str, count: &BigUint, limits: &Limits) -> Result<(), EvalError> {
    if *count > BigUint::from(limits.functions) {
        Err(EvalError::TooLarge(format!("{count} {what}")))
    } else {
        Ok(())
    }
}

/// Memoized truth of the matrix under full valuations of strategy indices.
struct MatrixCache<'a, 'f> {
    ev: &'a Evaluator<'a>,
    p: &'a Principal<'f>,
    s: usize,
    memo: HashMap<Vec<usize>, bool>,
}

impl<'a, 'f> MatrixCache<'a, 'f> {
    fn new(ev: &'a Evaluator<'a>, p: &'a Principal<'f>, s: usize) -> Self {
        MatrixCache {
            ev,
            p,
            s,
            memo: HashMap::new(),
        }
    }

    fn holds(&mut self, full: Vec<usize>) -> Result<bool, EvalError> {
        if let Some(&v) = self.memo.get(&full) {
            return Ok(v);
        }
        let na = self.ev.g.num_actions();
        let asg = self
            .p
            .prefix
            .variables()
            .zip(&full)
            .fold(Assignment::new(), |acc, (x, &i)| {
                let table = self.p.tree.strategy_table(na, i);
                acc.redefine(
                    Place::Var(x.to_string()),
                    HorizonStrategy::new(self.p.tree.clone(), table),
                )
            });
        let v = self.ev.eval(self.p.matrix, &asg, self.s)?;
        self.memo.insert(full, v);
        Ok(v)
    }
}

fn universal_valuations(d: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = d.pow(n as u32);
    (0..total).map(move |mut i| {
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = i % d;
            i /= d;
        }
        out
    })
}

/// Truth of a principal sentence `℘♭ψ` at the initial state via the
/// existence of a Skolem dependence function over horizon strategies.
pub fn skolemization_check(g: &Cgs, f: &Formula) -> Result<bool, EvalError> {
    skolemization_check_with(g, f, Limits::default())
}

pub fn skolemization_check_with(g: &Cgs, f: &Formula, limits: Limits) -> Result<bool, EvalError> {
    let ev = Evaluator {
        g,
        limits,
        mode: Mode::Classical,
    };
    let s = g.initial();
    let p = principal(&ev, f, s)?;
    check_budget("dependence functions", &count_sdf(&p.prefix, p.strategies), &limits)?;
    let n = p.prefix.universal().len();
    let mut cache = MatrixCache::new(&ev, &p, s);
    for theta in enumerate_sdf(&p.prefix, p.strategies) {
        if witnesses(&theta, n, p.strategies, &mut cache)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn witnesses(theta: &SkolemDepFn, n: usize, d: usize, cache: &mut MatrixCache<'_, '_>) -> Result<bool, EvalError> {
    for v in universal_valuations(d, n) {
        if !cache.holds(theta.apply(&v))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Behavioral truth at `s`: principal sentences hold iff some choice of
/// one action-level dependence function per track witnesses the matrix
/// against every universal assignment. Boolean structure is evaluated
/// as usual and nested sentences behaviorally.
pub fn eval_behavioral(g: &Cgs, s: usize, f: &Formula) -> Result<bool, EvalError> {
    eval_behavioral_with(g, s, f, Limits::default())
}

pub fn eval_behavioral_with(g: &Cgs, s: usize, f: &Formula, limits: Limits) -> Result<bool, EvalError> {
    if s >= g.num_states() {
        return Err(EvalError::State(s));
    }
    Evaluator {
        g,
        limits,
        mode: Mode::Behavioral,
    }
    .eval(f, &Assignment::new(), s)
}

pub(crate) fn principal_behavioral(ev: &Evaluator<'_>, f: &Formula, s: usize) -> Result<bool, EvalError> {
    let p = principal(ev, f, s)?;
    let na = ev.g.num_actions();
    let local: Vec<SkolemDepFn> = {
        check_budget("action-level functions", &count_sdf(&p.prefix, na), &ev.limits)?;
        enumerate_sdf(&p.prefix, na).collect()
    };
    let m = p.tree.len();
    check_budget("adjoints", &BigUint::from(local.len()).pow(m as u32), &ev.limits)?;
    let strategy_tables: Vec<Vec<usize>> = (0..p.strategies).map(|i| p.tree.strategy_table(na, i)).collect();
    let positions: Vec<Quant> = p.prefix.entries().iter().map(|(_, q)| *q).collect();
    let n = p.prefix.universal().len();
    let mut cache = MatrixCache::new(ev, &p, s);
    let mut choice = vec![0usize; m];
    loop {
        // θ(v) computed track by track from the chosen action-level functions
        let mut ok = true;
        for v in universal_valuations(p.strategies, n) {
            let mut per_var: Vec<Vec<usize>> = vec![vec![0; m]; positions.len()];
            for (node, &c) in choice.iter().enumerate() {
                let acts: Vec<usize> = v.iter().map(|&st| strategy_tables[st][node]).collect();
                for (slot, a) in per_var.iter_mut().zip(local[c].apply(&acts)) {
                    slot[node] = a;
                }
            }
            let full: Vec<usize> = per_var.iter().map(|t| p.tree.strategy_index(na, t)).collect();
            if !cache.holds(full)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(true);
        }
        // next choice, last track least significant
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < local.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{library, parse, Decl, LibraryParams};
    use crate::game::gstar;
    use crate::semantics::eval_sentence;

    #[test]
    fn trivial_sentence() {
        let g = gstar(2).unwrap();
        let f = parse(
            "<<x>>[[y]](alpha,x)(beta,y) true",
            &Decl::with_agents(&["alpha", "beta"]),
        )
        .unwrap();
        assert!(skolemization_check(&g, &f).unwrap());
        assert!(eval_behavioral(&g, 0, &f).unwrap());
    }

    #[test]
    fn unbounded_inner_sentence() {
        let g = gstar(2).unwrap();
        let unb = library("unb", &LibraryParams::default()).unwrap().formula;
        let closed = parse(
            "<<x2>><<y>>[[x1]] ((alpha,x1)(beta,y) X p & (alpha,y)(beta,x2) X !p)",
            &Decl::with_agents(&["alpha", "beta"]),
        )
        .unwrap();
        for f in [&unb, &closed] {
            assert_eq!(skolemization_check(&g, f).unwrap(), eval_sentence(&g, f).unwrap());
        }
    }

    #[test]
    fn behavioral_on_order_witness() {
        let unb = library("unb", &LibraryParams::default()).unwrap().formula;
        for n in 1..=3 {
            let g = gstar(n).unwrap();
            assert_eq!(eval_behavioral(&g, 0, &unb), eval_sentence(&g, &unb));
        }
    }

    #[test]
    fn nested_open_formula_rejected() {
        let g = gstar(2).unwrap();
        let trn = library("trn", &LibraryParams::default()).unwrap().formula;
        assert!(matches!(eval_behavioral(&g, 0, &trn), Err(EvalError::NotPrincipal(_))));
    }
}
