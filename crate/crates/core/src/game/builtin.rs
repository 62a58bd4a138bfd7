//! The concrete structures used throughout the examples.

use thiserror::Error;

use super::cgs::{Cgs, CgsError};
use super::strategy::MooreStrategy;
use crate::formula::DominoSystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("unknown builtin model `{0}`")]
    Unknown(String),
    #[error("parameter must be at least 1")]
    Size,
    #[error("bad parameter `{0}`")]
    Param(String),
    #[error(transparent)]
    Cgs(#[from] CgsError),
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Looks a builtin up by name: `ppd`, `ps`, `gstar:N`, `domino:N`.
pub fn builtin(spec: &str) -> Result<Cgs, BuiltinError> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    let size = || -> Result<usize, BuiltinError> {
        let p = param.ok_or_else(|| BuiltinError::Param(spec.to_string()))?;
        p.parse().map_err(|_| BuiltinError::Param(p.to_string()))
    };
    match name {
        "ppd" => Ok(ppd()),
        "ps" => Ok(ps()),
        "gstar" => gstar(size()?),
        "domino" => {
            let d = DominoSystem::sample();
            let k = d.tiles.len();
            domino_witness(&d, &|a, b| (a + b) % k, size()?)
        }
        _ => Err(BuiltinError::Unknown(spec.to_string())),
    }
}

pub const PPD_STATES: [&str; 7] = ["si", "sA1", "sA2", "sj", "sA1j", "sA2j", "sA1A2"];

/// Prisoners and police. Agents `A1`, `A2`, `P`; action 1 of a prisoner
/// is defection. The police action is wait/interrogate in `si` and
/// maintain/release in the states where a prisoner awaits release.
pub fn ppd() -> Cgs {
    let labels = vec![0b00, 0b01, 0b10, 0b00, 0b01, 0b10, 0b11];
    let idx = |n: &str| PPD_STATES.iter().position(|s| *s == n).unwrap();
    Cgs::from_fn(
        names(&["fA1", "fA2"]),
        names(&["A1", "A2", "P"]),
        numbered(2),
        names(&PPD_STATES),
        0,
        labels,
        |s, d| {
            let (a1, a2, p) = (d[0], d[1], d[2]);
            match PPD_STATES[s] {
                "si" => match (a1, a2, p) {
                    (0, 0, _) => idx("si"),
                    (1, 1, _) => idx("sj"),
                    (1, 0, 1) => idx("sA1"),
                    (0, 1, 1) => idx("sA2"),
                    (1, 0, _) => idx("sA1j"),
                    _ => idx("sA2j"),
                },
                "sA1j" | "sA2j" if p == 1 => idx("sA1A2"),
                _ => s,
            }
        },
    )
    .expect("valid")
    .with_notes(vec![
        "reconstructed: every transition; the prose fixes the states, labels and agents only".into(),
        "reconstructed: police action 1 releases from sA1j/sA2j, 0 maintains (so constant 0 avoids sA1A2)".into(),
        "reconstructed: sj (both defect) is reached when both prisoners defect".into(),
    ])
}

pub const PS_STATES: [&str; 6] = ["si", "s1", "s2", "s12", "s1p", "s2p"];

/// Preemptive scheduling. Agents `P1`, `P2`, `S`; a process action 1 is a
/// request, the scheduler action picks the process served (0 for `P1`).
pub fn ps() -> Cgs {
    // atoms r1 r2 g1 g2
    let labels = vec![0b0000, 0b0001, 0b0010, 0b0011, 0b0100, 0b1000];
    let idx = |n: &str| PS_STATES.iter().position(|s| *s == n).unwrap();
    Cgs::from_fn(
        names(&["r1", "r2", "g1", "g2"]),
        names(&["P1", "P2", "S"]),
        numbered(2),
        names(&PS_STATES),
        0,
        labels,
        |s, d| {
            let (p1, p2, sch) = (d[0], d[1], d[2]);
            match PS_STATES[s] {
                "si" => match (p1, p2) {
                    (0, 0) => idx("si"),
                    (1, 0) => idx("s1"),
                    (0, 1) => idx("s2"),
                    _ => idx("s12"),
                },
                "s1" => idx("s1p"),
                "s2" => idx("s2p"),
                "s12" => {
                    if sch == 0 {
                        idx("s1p")
                    } else {
                        idx("s2p")
                    }
                }
                // preemption: the scheduler's action names the new owner
                "s1p" if sch == 1 => idx("s2p"),
                "s2p" if sch == 0 => idx("s1p"),
                _ => idx("si"),
            }
        },
    )
    .expect("valid")
    .with_notes(vec![
        "pinned: si,(1,1,0)->s12; s12,(1,1,0)->s1p; s1p,(1,1,0)->si; si,(1,1,1)->s12; s12,(1,1,1)->s2p; s2p,(1,1,1)->si".into(),
        "reconstructed: all other transitions".into(),
    ])
}

/// Scheduler strategy: action 0 iff `si` has occurred an odd number of
/// times in the track.
pub fn ps_parity_scheduler() -> MooreStrategy {
    let n = PS_STATES.len();
    let mut update = vec![0; 2 * n];
    for m in 0..2 {
        for s in 0..n {
            update[m * n + s] = if s == 0 { 1 - m } else { m };
        }
    }
    MooreStrategy::new(n, 2, 0, update, vec![1, 0]).expect("valid")
}

/// Truncation of the unbounded ordering witness to actions `0..n`.
pub fn gstar(n: usize) -> Result<Cgs, BuiltinError> {
    if n < 1 {
        return Err(BuiltinError::Size);
    }
    Ok(Cgs::from_fn(
        names(&["p"]),
        names(&["alpha", "beta"]),
        numbered(n),
        names(&["s0", "s1", "s2"]),
        0,
        vec![0, 1, 0],
        |s, d| match s {
            0 if d[0] <= d[1] => 1,
            0 => 2,
            _ => s,
        },
    )?)
}

/// The finite witness structure for a domino system and a tiling of the
/// `n × n` grid, with actions `0..n`.
pub fn domino_witness(d: &DominoSystem, tiling: &dyn Fn(usize, usize) -> usize, n: usize) -> Result<Cgs, BuiltinError> {
    if n < 1 {
        return Err(BuiltinError::Size);
    }
    d.validate().map_err(|e| BuiltinError::Param(e.to_string()))?;
    let k = d.tiles.len();
    let mut atoms = vec!["p".to_string()];
    atoms.extend(d.tiles.iter().cloned());
    let mut states = vec!["s0".to_string()];
    let mut labels = vec![0u64];
    for (z, name) in [(true, "p"), (false, "np")] {
        for (t, tile) in d.tiles.iter().enumerate() {
            states.push(format!("{name}_{tile}"));
            labels.push((1 << (t + 1)) | u64::from(z));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if tiling(a, b) >= k {
                return Err(BuiltinError::Param(format!("tiling({a},{b}) out of range")));
            }
        }
    }
    Ok(Cgs::from_fn(
        atoms,
        names(&["alpha", "beta"]),
        numbered(n),
        states,
        0,
        labels,
        |s, dec| {
            if s != 0 {
                return s;
            }
            let t = tiling(dec[0], dec[1]);
            if dec[0] <= dec[1] {
                1 + t
            } else {
                1 + k + t
            }
        },
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gstar_rule() {
        for n in 1..=4 {
            let g = gstar(n).unwrap();
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(g.step(0, &[a, b]) == 1, a <= b);
                }
            }
            assert!(g.holds(1, "p") && !g.holds(0, "p") && !g.holds(2, "p"));
        }
        assert!(gstar(0).is_err());
    }

    #[test]
    fn ps_pinned_transitions() {
        let g = ps();
        let s = |n: &str| g.state_index(n).unwrap();
        assert_eq!(g.step(s("si"), &[1, 1, 0]), s("s12"));
        assert_eq!(g.step(s("s12"), &[1, 1, 0]), s("s1p"));
        assert_eq!(g.step(s("s1p"), &[1, 1, 0]), s("si"));
        assert_eq!(g.step(s("si"), &[1, 1, 1]), s("s12"));
        assert_eq!(g.step(s("s12"), &[1, 1, 1]), s("s2p"));
        assert_eq!(g.step(s("s2p"), &[1, 1, 1]), s("si"));
        assert_eq!(g.label_names(s("s12")), vec!["r1", "r2"]);
    }

    #[test]
    fn domino_labels() {
        let d = DominoSystem::sample();
        let g = domino_witness(&d, &|a, b| (a + b) % 2, 3).unwrap();
        assert_eq!(g.num_states(), 2 * d.tiles.len() + 1);
        let pt = g.state_index("p_t1").unwrap();
        let npt = g.state_index("np_t1").unwrap();
        assert_eq!(g.label_names(pt), vec!["p", "t1"]);
        assert_eq!(g.label_names(npt), vec!["t1"]);
        assert_eq!(g.step(0, &[0, 1]), pt);
        assert_eq!(g.step(0, &[2, 1]), npt);
    }

    #[test]
    fn ppd_signature() {
        let g = ppd();
        assert_eq!(g.agents(), ["A1", "A2", "P"]);
        assert_eq!(g.actions(), ["0", "1"]);
    }
}
