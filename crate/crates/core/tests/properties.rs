mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tiersynth::automata::{minimize, to_dfa};
use tiersynth::ltlf::formula as f;
use tiersynth::ltlf::{evaluate, parse_formula, Formula, Letter};

fn sample(seed: u64, depth: usize, len: usize) -> (Formula, Vec<Letter>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = random_formula(&mut rng, depth, &ATOMS);
    let t = random_trace(&mut rng, len, &ATOMS);
    (phi, t)
}

fn eval(t: &[Letter], phi: &Formula) -> bool {
    evaluate(t, phi).unwrap()
}

fn atoms() -> Vec<String> {
    ATOMS.iter().map(|s| s.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn nnf_preserves_semantics(seed in any::<u64>(), len in 1usize..=6) {
        let (phi, t) = sample(seed, 5, len);
        prop_assert_eq!(eval(&t, &phi), eval(&t, &phi.to_nnf()));
    }

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>()) {
        let (phi, _) = sample(seed, 5, 0);
        prop_assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn abbreviations_match_their_expansions(seed in any::<u64>(), len in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_formula(&mut rng, 3, &ATOMS);
        let b = random_formula(&mut rng, 3, &ATOMS);
        let t = random_trace(&mut rng, len, &ATOMS);
        let pairs = [
            (f::eventually(a.clone()), f::until(Formula::True, a.clone())),
            (f::always(a.clone()), f::not(f::eventually(f::not(a.clone())))),
            (f::weak_next(a.clone()), f::not(f::next(f::not(a.clone())))),
            (f::release(a.clone(), b.clone()), f::not(f::until(f::not(a.clone()), f::not(b.clone())))),
            (f::implies(a.clone(), b.clone()), f::or(f::not(a.clone()), b.clone())),
        ];
        for (short, long) in pairs {
            prop_assert_eq!(eval(&t, &short), eval(&t, &long), "{} vs {}", short, long);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dfa_accepts_exactly_the_models(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, 4, &ATOMS);
        let dfa = to_dfa(&phi, &atoms()).unwrap();
        let min = minimize(&dfa).unwrap();
        prop_assert!(min.num_states() <= dfa.num_states());
        for len in 1..=5 {
            let t = random_trace(&mut rng, len, &ATOMS);
            let expected = eval(&t, &phi);
            prop_assert_eq!(dfa.accepts(&t).unwrap(), expected, "{} on {:?}", phi, t);
            prop_assert_eq!(min.accepts(&t).unwrap(), expected, "minimized {} on {:?}", phi, t);
        }
        prop_assert!(!dfa.accepts(&[]).unwrap());
    }
}

#[test]
fn exhaustive_short_traces_for_small_formulas() {
    let letters: Vec<Letter> = (0..8usize)
        .map(|m| tiersynth::ltlf::letter(ATOMS.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, a)| *a)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let phi = random_formula(&mut rng, 3, &ATOMS);
        let dfa = to_dfa(&phi, &atoms()).unwrap();
        let mut traces: Vec<Vec<Letter>> = letters.iter().map(|l| vec![l.clone()]).collect();
        for _ in 0..2 {
            let longer: Vec<Vec<Letter>> = traces
                .iter()
                .filter(|t| t.len() == traces.last().unwrap().len())
                .flat_map(|t| letters.iter().map(move |l| [t.clone(), vec![l.clone()]].concat()))
                .collect();
            traces.extend(longer);
        }
        for t in &traces {
            assert_eq!(dfa.accepts(t).unwrap(), eval(t, &phi), "{phi} on {t:?}");
        }
    }
}
