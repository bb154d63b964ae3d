//! 2SAT by strongly connected components of the implication graph.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// A literal: a variable with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, positive: false }
    }

    pub fn negate(self) -> Lit {
        Lit { var: self.var, positive: !self.positive }
    }

    // Negative literals take the even node so that unconstrained variables
    // come out false.
    fn node(self) -> usize {
        2 * self.var + self.positive as usize
    }

    pub fn holds(self, values: &[bool]) -> bool {
        values[self.var] == self.positive
    }
}

/// A conjunction of two-literal clauses. A unit clause is written `(l, l)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoSat {
    vars: usize,
    clauses: Vec<(Lit, Lit)>,
}

impl TwoSat {
    pub fn new(vars: usize) -> TwoSat {
        TwoSat { vars, clauses: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[(Lit, Lit)] {
        &self.clauses
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) -> Result<(), Error> {
        for l in [a, b] {
            if l.var >= self.vars {
                return Err(Error::LiteralOutOfRange { var: l.var, vars: self.vars });
            }
        }
        self.clauses.push((a, b));
        Ok(())
    }

    pub fn add_unit(&mut self, a: Lit) -> Result<(), Error> {
        self.add_clause(a, a)
    }

    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        values.len() == self.vars && self.clauses.iter().all(|&(a, b)| a.holds(values) || b.holds(values))
    }

    /// A satisfying assignment, or `None` when unsatisfiable.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let nodes = 2 * self.vars;
        // Implication graph in compressed rows: (a or b) gives !a -> b and !b -> a.
        let mut degree = vec![0usize; nodes + 1];
        for &(a, b) in &self.clauses {
            degree[a.negate().node()] += 1;
            degree[b.negate().node()] += 1;
        }
        let mut start = vec![0usize; nodes + 1];
        for v in 0..nodes {
            start[v + 1] = start[v] + degree[v];
        }
        let mut fill = start.clone();
        let mut targets = vec![0usize; start[nodes]];
        for &(a, b) in &self.clauses {
            let u = a.negate().node();
            targets[fill[u]] = b.node();
            fill[u] += 1;
            let u = b.negate().node();
            targets[fill[u]] = a.node();
            fill[u] += 1;
        }
        let comp = tarjan(nodes, &start, &targets);
        let mut values = vec![false; self.vars];
        for v in 0..self.vars {
            let (f, t) = (comp[2 * v], comp[2 * v + 1]);
            if f == t {
                return None;
            }
            // Components are numbered in reverse topological order.
            values[v] = t < f;
        }
        Some(values)
    }
}

/// Component ids, numbered in the order Tarjan closes them.
fn tarjan(nodes: usize, start: &[usize], targets: &[usize]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; nodes];
    let mut low = vec![0usize; nodes];
    let mut on_stack = vec![false; nodes];
    let mut comp = vec![UNSEEN; nodes];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let (mut next, mut comps) = (0usize, 0usize);
    for root in 0..nodes {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, start[root]));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.len().checked_sub(1) {
            let (v, edge) = call[top];
            if edge < start[v + 1] {
                let w = targets[edge];
                call[top].1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("component root is on the stack");
                    on_stack[w] = false;
                    comp[w] = comps;
                    if w == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(inst: &TwoSat) -> bool {
        (0u32..1 << inst.vars()).any(|mask| {
            let values: Vec<bool> = (0..inst.vars()).map(|v| mask & (1 << v) != 0).collect();
            inst.satisfied_by(&values)
        })
    }

    #[test]
    fn exclusive_or() {
        let mut s = TwoSat::new(2);
        s.add_clause(Lit::pos(0), Lit::pos(1)).unwrap();
        s.add_clause(Lit::neg(0), Lit::neg(1)).unwrap();
        let a = s.solve().unwrap();
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn contradiction() {
        let mut s = TwoSat::new(1);
        s.add_unit(Lit::pos(0)).unwrap();
        s.add_unit(Lit::neg(0)).unwrap();
        assert_eq!(s.solve(), None);
    }

    #[test]
    fn free_variables_default_false() {
        assert_eq!(TwoSat::new(3).solve(), Some(vec![false; 3]));
    }

    #[test]
    fn out_of_range_literal() {
        let mut s = TwoSat::new(1);
        assert_eq!(
            s.add_clause(Lit::pos(0), Lit::neg(1)),
            Err(Error::LiteralOutOfRange { var: 1, vars: 1 })
        );
    }

    #[test]
    fn long_implication_chain() {
        // x0 -> x1 -> ... -> x_{n-1} -> !x0 forces x0 false, the rest free.
        let n = 200_000;
        let mut s = TwoSat::new(n);
        for v in 0..n - 1 {
            s.add_clause(Lit::neg(v), Lit::pos(v + 1)).unwrap();
        }
        s.add_clause(Lit::neg(n - 1), Lit::neg(0)).unwrap();
        let a = s.solve().unwrap();
        assert!(s.satisfied_by(&a));
        assert!(!a[0]);
    }

    fn instance() -> impl Strategy<Value = TwoSat> {
        (1usize..9).prop_flat_map(|vars| {
            let lit = (0..vars, any::<bool>()).prop_map(|(var, positive)| Lit { var, positive });
            proptest::collection::vec((lit.clone(), lit), 0..24).prop_map(move |cs| {
                let mut s = TwoSat::new(vars);
                for (a, b) in cs {
                    s.add_clause(a, b).unwrap();
                }
                s
            })
        })
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(s in instance()) {
            match s.solve() {
                Some(a) => prop_assert!(s.satisfied_by(&a)),
                None => prop_assert!(!brute(&s)),
            }
        }
    }
}
