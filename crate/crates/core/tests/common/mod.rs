//! Seeded corpus of small random domains and goals shared by the
//! integration and acceptance tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiersynth::domain::{load_domain, Domain, DomainDocument, TransitionDocument};
use tiersynth::ltlf::{self, parse_formula, Formula, Letter};
use tiersynth::oracle::OracleCaps;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

pub fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

pub fn load_example(name: &str) -> Arc<Domain> {
    Arc::new(load_domain(&std::fs::read_to_string(example(name)).unwrap()).unwrap())
}

pub fn goals(texts: &[&str]) -> Vec<Formula> {
    texts.iter().map(|t| parse_formula(t).unwrap()).collect()
}

/// Oracle caps for corpus instances: the product of a corpus domain with a
/// goal automaton stays well below these bounds.
pub fn corpus_caps() -> OracleCaps {
    OracleCaps {
        max_states: 48,
        max_actions: 6,
        max_strategies: 5_000_000,
    }
}

#[derive(Clone)]
pub struct Instance {
    pub name: String,
    pub domain: Arc<Domain>,
    pub goals: Vec<Formula>,
}

fn state_names(mask: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..ATOMS.len()).filter(|i| mask >> i & 1 == 1).map(|i| ATOMS[i].to_string()).collect();
    v.sort();
    v
}

/// A random domain over fluents p, q, r with up to six states, two or
/// three actions and two reactions. Every state has an applicable action
/// and reactions of one action lead to distinct states.
pub fn random_domain(rng: &mut ChaCha8Rng) -> Domain {
    let mut masks: Vec<usize> = (0..8).collect();
    masks.shuffle(rng);
    let k = rng.random_range(3..=6);
    let states = &masks[..k];
    let actions: Vec<String> = ["a", "b", "c"][..rng.random_range(2..=3)].iter().map(|s| s.to_string()).collect();
    let reactions = vec!["x".to_string(), "y".to_string()];
    let mut transitions = Vec::new();
    for &s in states {
        let mut applicable: Vec<&String> = actions.iter().filter(|_| rng.random_bool(0.6)).collect();
        if applicable.is_empty() {
            applicable.push(actions.choose(rng).unwrap());
        }
        for a in applicable {
            let mut targets: Vec<usize> = states.to_vec();
            targets.shuffle(rng);
            let nondet = rng.random_bool(0.6);
            let chosen: Vec<(&String, usize)> = if nondet {
                reactions.iter().zip(targets.iter().copied()).collect()
            } else {
                vec![(reactions.choose(rng).unwrap(), targets[0])]
            };
            for (r, t) in chosen {
                transitions.push(TransitionDocument {
                    from: state_names(s),
                    action: a.clone(),
                    reaction: r.clone(),
                    to: state_names(t),
                });
            }
        }
    }
    let doc = DomainDocument {
        fluents: ATOMS.iter().map(|s| s.to_string()).collect(),
        initial: state_names(states[0]),
        actions,
        reactions,
        transitions,
    };
    Domain::from_document(&doc).expect("generated domains are valid")
}

/// A random formula of depth at most `depth` over `atoms`.
pub fn random_formula(rng: &mut ChaCha8Rng, depth: usize, atoms: &[&str]) -> Formula {
    use tiersynth::ltlf::formula as f;
    if depth <= 1 || rng.random_bool(0.2) {
        return match rng.random_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => f::atom(atoms.choose(rng).unwrap()),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1, atoms);
    match rng.random_range(0..12) {
        0 => f::not(sub(rng)),
        1 => f::and(sub(rng), sub(rng)),
        2 => f::or(sub(rng), sub(rng)),
        3 => f::implies(sub(rng), sub(rng)),
        4 => f::next(sub(rng)),
        5 => f::weak_next(sub(rng)),
        6 => f::until(sub(rng), sub(rng)),
        7 => f::release(sub(rng), sub(rng)),
        8 | 9 => f::eventually(sub(rng)),
        _ => f::always(sub(rng)),
    }
}

pub fn random_trace(rng: &mut ChaCha8Rng, len: usize, atoms: &[&str]) -> Vec<Letter> {
    (0..len)
        .map(|_| ltlf::letter(atoms.iter().filter(|_| rng.random_bool(0.5)).copied()))
        .collect()
}

const GOAL_PARTS: [&str; 12] = [
    "F p",
    "F q",
    "F r",
    "F (p & q)",
    "F (q & X r)",
    "G !r | F p",
    "p U q",
    "F (p & X F q)",
    "X X true",
    "F !p",
    "G (p -> X q)",
    "F r & F !r",
];

const EASY_PARTS: [&str; 3] = ["true", "X true", "F (p | q | r)"];

/// A chain of two or three tiers built by conjunction, so containment holds.
/// Half of the chains open with an easy tier that is usually enforceable.
pub fn random_goals(rng: &mut ChaCha8Rng) -> Vec<Formula> {
    let n = rng.random_range(2..=3);
    let mut parts: Vec<&str> = GOAL_PARTS.choose_multiple(rng, n).copied().collect();
    if rng.random_bool(0.5) {
        parts[0] = EASY_PARTS.choose(rng).unwrap();
    }
    let mut texts = Vec::new();
    for i in 0..n {
        texts.push(parts[..=i].iter().map(|p| format!("({p})")).collect::<Vec<_>>().join(" & "));
    }
    goals(&texts.iter().map(String::as_str).collect::<Vec<_>>())
}

/// The seeded corpus.
pub fn corpus() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7135);
    (0..40)
        .map(|i| Instance {
            name: format!("corpus-{i:02}"),
            domain: Arc::new(random_domain(&mut rng)),
            goals: random_goals(&mut rng),
        })
        .collect()
}

/// Every legal history of length at most `depth`, including the empty one.
pub fn legal_histories(d: &Domain, depth: usize) -> Vec<tiersynth::domain::DomainTrace> {
    let mut out = vec![tiersynth::domain::DomainTrace::new(d.initial())];
    let mut frontier = 0;
    for _ in 0..depth {
        let end = out.len();
        for i in frontier..end {
            let h = out[i].clone();
            for &(a, r, t) in d.moves(h.last()) {
                let mut h2 = h.clone();
                h2.push(a, r, t);
                out.push(h2);
            }
        }
        frontier = end;
    }
    out
}

/// Arena state reached by a legal history.
pub fn arena_state(ts: &tiersynth::automata::TransitionSystem, h: &tiersynth::domain::DomainTrace) -> usize {
    let word: Vec<usize> = h.moves.iter().map(|&(a, r)| ts.alphabet().move_letter(a.0, r.0)).collect();
    ts.run(ts.initial(), &word).unwrap()
}

/// The example domains with their goal files.
pub fn fixtures() -> Vec<Instance> {
    ["two-road", "two-road-transient", "robot"]
        .iter()
        .map(|name| Instance {
            name: name.to_string(),
            domain: load_example(&format!("{name}.json")),
            goals: tiersynth::cli::load_goals_file(&example(&format!("{name}.goals.json"))).unwrap(),
        })
        .collect()
}
