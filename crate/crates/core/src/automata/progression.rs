//! Formula progression over residual obligations, and the LTLf to DFA
//! compiler built on it.
//!
//! A residual is a Boolean function over obligation variables. Each variable
//! stands for an NNF subformula that is an atom or has a temporal operator at
//! its head. Residuals live in one decision diagram per compiled formula, so
//! equal functions get equal references and DFA states dedup exactly.

use std::collections::HashMap;

use super::bdd::{Bdd, BddRef};
use super::ts::{Alphabet, Dfa, StateSet, TransitionSystem};
use crate::error::{Error, Result};
use crate::ltlf::formula::{self, *};
use crate::ltlf::Letter;

/// Canonical residual of a [`Progression`]. Only meaningful together with the
/// progression that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residual(BddRef);

impl Residual {
    pub const TRUE: Residual = Residual(BddRef::TRUE);
    pub const FALSE: Residual = Residual(BddRef::FALSE);
}

#[derive(Debug, Clone, Copy)]
enum Obligation {
    Atom(usize),
    Next(BddRef),
    WeakNext(BddRef),
    Until(BddRef, BddRef),
    Release(BddRef, BddRef),
}

#[derive(Debug)]
pub struct Progression {
    atoms: Vec<String>,
    bdd: Bdd,
    order: HashMap<Formula, u32>,
    vars: Vec<Option<Obligation>>,
    var_formula: Vec<Option<Formula>>,
    root: BddRef,
    prog_cache: HashMap<(BddRef, usize), BddRef>,
    var_cache: HashMap<(u32, usize), BddRef>,
}

impl Progression {
    /// Prepares progression of `f` over letters drawn from `atoms`.
    pub fn new(f: &Formula, atoms: &[String]) -> Result<Self> {
        for a in f.atoms() {
            if !atoms.contains(&a) {
                return Err(Error::OutOfAlphabet(a));
            }
        }
        let nnf = f.to_nnf();
        let mut p = Progression {
            atoms: atoms.to_vec(),
            bdd: Bdd::new(),
            order: HashMap::new(),
            vars: Vec::new(),
            var_formula: Vec::new(),
            root: BddRef::FALSE,
            prog_cache: HashMap::new(),
            var_cache: HashMap::new(),
        };
        p.assign_order(&nnf);
        p.root = p.compile(&nnf)?;
        Ok(p)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn initial(&self) -> Residual {
        Residual(self.root)
    }

    /// Number of obligation variables (the closure size of the formula).
    pub fn num_obligations(&self) -> usize {
        self.vars.len()
    }

    // Variable order is the first-occurrence pre-order of obligation nodes.
    fn assign_order(&mut self, f: &Formula) {
        let is_var = matches!(
            f,
            Atom(_) | Next(_) | WeakNext(_) | Until(..) | Release(..) | Eventually(_) | Always(_)
        );
        if is_var {
            self.slot(f);
        }
        for c in f.children() {
            self.assign_order(c);
        }
    }

    fn slot(&mut self, f: &Formula) -> u32 {
        if let Some(&v) = self.order.get(f) {
            return v;
        }
        let v = self.vars.len() as u32;
        self.order.insert(f.clone(), v);
        self.vars.push(None);
        self.var_formula.push(Some(f.clone()));
        v
    }

    /// Translates an arbitrary formula into a residual of this progression,
    /// allocating obligation variables for subformulas not yet seen.
    pub fn residual_of(&mut self, f: &Formula) -> Result<Residual> {
        for a in f.atoms() {
            if !self.atoms.contains(&a) {
                return Err(Error::OutOfAlphabet(a));
            }
        }
        let nnf = f.to_nnf();
        self.assign_order(&nnf);
        Ok(Residual(self.compile(&nnf)?))
    }

    fn compile(&mut self, f: &Formula) -> Result<BddRef> {
        let obligation = match f {
            True => return Ok(BddRef::TRUE),
            False => return Ok(BddRef::FALSE),
            Not(g) => {
                let g = self.compile(g)?;
                return Ok(self.bdd.not(g));
            }
            And(g, h) => {
                let (g, h) = (self.compile(g)?, self.compile(h)?);
                return Ok(self.bdd.and(g, h));
            }
            Or(g, h) => {
                let (g, h) = (self.compile(g)?, self.compile(h)?);
                return Ok(self.bdd.or(g, h));
            }
            Implies(g, h) => {
                let (g, h) = (self.compile(g)?, self.compile(h)?);
                let ng = self.bdd.not(g);
                return Ok(self.bdd.or(ng, h));
            }
            Atom(name) => {
                let k = self
                    .atoms
                    .iter()
                    .position(|a| a.as_str() == &**name)
                    .ok_or_else(|| Error::OutOfAlphabet(name.to_string()))?;
                Obligation::Atom(k)
            }
            Next(g) => Obligation::Next(self.compile(g)?),
            WeakNext(g) => Obligation::WeakNext(self.compile(g)?),
            Until(g, h) => Obligation::Until(self.compile(g)?, self.compile(h)?),
            Release(g, h) => Obligation::Release(self.compile(g)?, self.compile(h)?),
            Eventually(g) => Obligation::Until(BddRef::TRUE, self.compile(g)?),
            Always(g) => Obligation::Release(BddRef::FALSE, self.compile(g)?),
        };
        let v = self.slot(f);
        self.vars[v as usize] = Some(obligation);
        Ok(self.bdd.var(v))
    }

    fn obligation(&self, v: u32) -> Obligation {
        self.vars[v as usize].expect("obligation variables are compiled before use")
    }

    /// Residual after reading `letter` (a bitmask over the atoms): for every
    /// non-empty continuation `u`, `letter . u |= r` iff `u |= progress(r)`.
    pub fn progress(&mut self, r: Residual, letter: usize) -> Residual {
        Residual(self.prog(r.0, letter))
    }

    fn prog(&mut self, f: BddRef, letter: usize) -> BddRef {
        let Some((v, low, high)) = self.bdd.decompose(f) else {
            return f;
        };
        if let Some(&r) = self.prog_cache.get(&(f, letter)) {
            return r;
        }
        let pv = self.prog_var(v, letter);
        let plow = self.prog(low, letter);
        let phigh = self.prog(high, letter);
        let r = self.bdd.ite(pv, phigh, plow);
        self.prog_cache.insert((f, letter), r);
        r
    }

    fn prog_var(&mut self, v: u32, letter: usize) -> BddRef {
        if let Some(&r) = self.var_cache.get(&(v, letter)) {
            return r;
        }
        let r = match self.obligation(v) {
            Obligation::Atom(k) => {
                if letter >> k & 1 == 1 {
                    BddRef::TRUE
                } else {
                    BddRef::FALSE
                }
            }
            Obligation::Next(g) | Obligation::WeakNext(g) => g,
            Obligation::Until(g, h) => {
                let ph = self.prog(h, letter);
                let pg = self.prog(g, letter);
                let me = self.bdd.var(v);
                let keep = self.bdd.and(pg, me);
                self.bdd.or(ph, keep)
            }
            Obligation::Release(g, h) => {
                let ph = self.prog(h, letter);
                let pg = self.prog(g, letter);
                let me = self.bdd.var(v);
                let keep = self.bdd.or(pg, me);
                self.bdd.and(ph, keep)
            }
        };
        self.var_cache.insert((v, letter), r);
        r
    }

    /// Whether the one-letter word `letter` satisfies `r`.
    pub fn empty_continuation(&self, r: Residual, letter: usize) -> bool {
        self.emp(r.0, letter)
    }

    fn emp(&self, f: BddRef, letter: usize) -> bool {
        self.bdd.eval(f, &mut |v| match self.obligation(v) {
            Obligation::Atom(k) => letter >> k & 1 == 1,
            Obligation::Next(_) => false,
            Obligation::WeakNext(_) => true,
            Obligation::Until(_, h) | Obligation::Release(_, h) => self.emp(h, letter),
        })
    }

    pub fn letter_of(&self, letter: &Letter) -> Result<usize> {
        Alphabet::PropSymbols(self.atoms.clone()).letter_of(letter)
    }

    /// Readable formula for a residual (Shannon expansion over obligations).
    pub fn to_formula(&self, r: Residual) -> Formula {
        self.bdd_formula(r.0)
    }

    fn bdd_formula(&self, f: BddRef) -> Formula {
        let Some((v, low, high)) = self.bdd.decompose(f) else {
            return if f == BddRef::TRUE { True } else { False };
        };
        let var = self.var_formula[v as usize].clone().expect("named variable");
        let nvar = || match &var {
            Not(inner) => (**inner).clone(),
            other => formula::not(other.clone()),
        };
        match (low, high) {
            (BddRef::FALSE, BddRef::TRUE) => var,
            (BddRef::TRUE, BddRef::FALSE) => nvar(),
            (_, BddRef::TRUE) => formula::or(var, self.bdd_formula(low)),
            (_, BddRef::FALSE) => formula::and(nvar(), self.bdd_formula(low)),
            (BddRef::TRUE, _) => formula::or(nvar(), self.bdd_formula(high)),
            (BddRef::FALSE, _) => formula::and(var, self.bdd_formula(high)),
            _ => formula::or(
                formula::and(var.clone(), self.bdd_formula(high)),
                formula::and(nvar(), self.bdd_formula(low)),
            ),
        }
    }
}

/// Resource caps for automaton construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_letters: u64,
    pub max_states: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_letters: 1 << 20,
            max_states: 1_000_000,
        }
    }
}

impl Caps {
    /// Defaults, with the state cap taken from `TIERSYNTH_CAP_STATES` when set.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(n) = std::env::var("TIERSYNTH_CAP_STATES").ok().and_then(|v| v.parse().ok()) {
            caps.max_states = n;
        }
        caps
    }

    pub fn check_states(&self, n: usize, what: &'static str) -> Result<()> {
        if n > self.max_states {
            return Err(Error::Resource {
                what,
                limit: self.max_states as u64,
            });
        }
        Ok(())
    }
}

/// Compiles `f` into a DFA over `2^atoms` accepting exactly the non-empty
/// traces that satisfy `f`.
///
/// States are pairs of a canonical residual and a flag recording whether the
/// prefix read so far satisfies `f`; the flag is the acceptance condition.
pub fn to_dfa(f: &Formula, atoms: &[String]) -> Result<Dfa> {
    to_dfa_with(f, atoms, &Caps::default())
}

pub fn to_dfa_with(f: &Formula, atoms: &[String], caps: &Caps) -> Result<Dfa> {
    if atoms.len() >= 63 || (1u64 << atoms.len()) > caps.max_letters {
        return Err(Error::Resource {
            what: "alphabet letters",
            limit: caps.max_letters,
        });
    }
    let mut p = Progression::new(f, atoms)?;
    let width = 1usize << atoms.len();
    let mut index: HashMap<(Residual, bool), usize> = HashMap::new();
    let mut states = vec![(p.initial(), false)];
    index.insert(states[0], 0);
    let mut delta = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (r, _) = states[next];
        for letter in 0..width {
            let succ = (p.progress(r, letter), p.empty_continuation(r, letter));
            let id = match index.get(&succ) {
                Some(&id) => id,
                None => {
                    states.push(succ);
                    caps.check_states(states.len(), "DFA states")?;
                    index.insert(succ, states.len() - 1);
                    states.len() - 1
                }
            };
            delta.push(id);
        }
        next += 1;
    }
    let labels = states.iter().map(|(r, _)| p.to_formula(*r).to_string()).collect();
    let finals = StateSet::from_fn(states.len(), |q| states[q].1);
    let ts = TransitionSystem::new(Alphabet::PropSymbols(atoms.to_vec()), 0, delta, labels)?;
    Dfa::new(ts, finals)
}
