//! A small hash-consed reduced ordered decision diagram package. Variables
//! are ordered by index, lower indices closer to the root. Two references are
//! equal iff they denote the same Boolean function.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BddRef(u32);

impl BddRef {
    pub const FALSE: BddRef = BddRef(0);
    pub const TRUE: BddRef = BddRef(1);

    pub fn is_const(self) -> bool {
        self.0 < 2
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: BddRef,
    high: BddRef,
}

#[derive(Debug, Default)]
pub struct Bdd {
    nodes: Vec<Node>,
    unique: HashMap<Node, BddRef>,
    ite_cache: HashMap<(BddRef, BddRef, BddRef), BddRef>,
}

impl Bdd {
    pub fn new() -> Self {
        let terminal = Node {
            var: u32::MAX,
            low: BddRef::FALSE,
            high: BddRef::FALSE,
        };
        Bdd {
            nodes: vec![terminal, terminal],
            ..Default::default()
        }
    }

    pub fn var(&mut self, v: u32) -> BddRef {
        self.mk(v, BddRef::FALSE, BddRef::TRUE)
    }

    /// `(variable, low, high)` of an inner node.
    pub fn decompose(&self, f: BddRef) -> Option<(u32, BddRef, BddRef)> {
        if f.is_const() {
            None
        } else {
            let n = self.nodes[f.index()];
            Some((n.var, n.low, n.high))
        }
    }

    fn mk(&mut self, var: u32, low: BddRef, high: BddRef) -> BddRef {
        if low == high {
            return low;
        }
        let node = Node { var, low, high };
        if let Some(&r) = self.unique.get(&node) {
            return r;
        }
        let r = BddRef(self.nodes.len() as u32);
        self.nodes.push(node);
        self.unique.insert(node, r);
        r
    }

    fn top_var(&self, f: BddRef) -> u32 {
        self.nodes[f.index()].var
    }

    fn cofactors(&self, f: BddRef, v: u32) -> (BddRef, BddRef) {
        if f.is_const() || self.top_var(f) != v {
            (f, f)
        } else {
            let n = self.nodes[f.index()];
            (n.low, n.high)
        }
    }

    pub fn ite(&mut self, f: BddRef, g: BddRef, h: BddRef) -> BddRef {
        if f == BddRef::TRUE {
            return g;
        }
        if f == BddRef::FALSE {
            return h;
        }
        if g == h {
            return g;
        }
        if g == BddRef::TRUE && h == BddRef::FALSE {
            return f;
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return r;
        }
        let v = [f, g, h]
            .iter()
            .filter(|r| !r.is_const())
            .map(|&r| self.top_var(r))
            .min()
            .expect("f is not constant");
        let (f0, f1) = self.cofactors(f, v);
        let (g0, g1) = self.cofactors(g, v);
        let (h0, h1) = self.cofactors(h, v);
        let low = self.ite(f0, g0, h0);
        let high = self.ite(f1, g1, h1);
        let r = self.mk(v, low, high);
        self.ite_cache.insert((f, g, h), r);
        r
    }

    pub fn not(&mut self, f: BddRef) -> BddRef {
        self.ite(f, BddRef::FALSE, BddRef::TRUE)
    }

    pub fn and(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.ite(f, g, BddRef::FALSE)
    }

    pub fn or(&mut self, f: BddRef, g: BddRef) -> BddRef {
        self.ite(f, BddRef::TRUE, g)
    }

    /// Evaluates `f` under a variable assignment.
    pub fn eval(&self, mut f: BddRef, assignment: &mut impl FnMut(u32) -> bool) -> bool {
        while !f.is_const() {
            let n = self.nodes[f.index()];
            f = if assignment(n.var) { n.high } else { n.low };
        }
        f == BddRef::TRUE
    }
}
