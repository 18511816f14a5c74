//! Universality of a path formula over a pruned graph, via the elementary-set
//! tableau for the negated formula and a search for an accepting cycle in
//! the product.

use std::collections::{BTreeMap, HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::strategy::PrunedGraph;
use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::model::StateId;

/// Maximal number of `X`/`U` nodes; elementary sets are enumerated per
/// state, so the tableau is exponential in this.
const MAX_TEMPORAL: usize = 16;
const MAX_NODES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize),
}

/// The closure of a path formula whose atoms are given as state sets.
#[derive(Clone, Debug)]
pub(crate) struct Tableau {
    nodes: Vec<Node>,
    root: usize,
    /// Truth of each atom slot per state.
    atoms: Vec<Vec<bool>>,
    temporal: Vec<usize>,
}

impl Tableau {
    pub(crate) fn new(psi: &Formula, valuation: &BTreeMap<String, Vec<bool>>) -> Result<Tableau> {
        let mut t = Tableau { nodes: vec![], root: 0, atoms: vec![], temporal: vec![] };
        let mut index = HashMap::new();
        let mut slots: HashMap<String, usize> = HashMap::new();
        t.root = t.add(psi, valuation, &mut index, &mut slots)?;
        if t.nodes.len() > MAX_NODES || t.temporal.len() > MAX_TEMPORAL {
            return Err(Error::Resource(format!(
                "path formula `{psi}` has {} temporal operators (limit {MAX_TEMPORAL})",
                t.temporal.len()
            )));
        }
        Ok(t)
    }

    fn intern(&mut self, n: Node, index: &mut HashMap<Node, usize>) -> usize {
        if let Some(&i) = index.get(&n) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(n);
        if matches!(n, Node::Next(_) | Node::Until(..)) {
            self.temporal.push(i);
        }
        index.insert(n, i);
        i
    }

    fn add(
        &mut self,
        f: &Formula,
        val: &BTreeMap<String, Vec<bool>>,
        index: &mut HashMap<Node, usize>,
        slots: &mut HashMap<String, usize>,
    ) -> Result<usize> {
        let node = match f {
            Formula::True => Node::True,
            Formula::False => {
                let t = self.intern(Node::True, index);
                Node::Not(t)
            }
            Formula::Atom(p) => {
                let slot = match slots.get(p) {
                    Some(&s) => s,
                    None => {
                        let v = val.get(p).ok_or_else(|| Error::Unknown {
                            kind: "atom",
                            name: p.clone(),
                        })?;
                        self.atoms.push(v.clone());
                        slots.insert(p.clone(), self.atoms.len() - 1);
                        self.atoms.len() - 1
                    }
                };
                Node::Atom(slot)
            }
            Formula::Not(x) => Node::Not(self.add(x, val, index, slots)?),
            Formula::And(l, r) => {
                let l = self.add(l, val, index, slots)?;
                Node::And(l, self.add(r, val, index, slots)?)
            }
            Formula::Or(l, r) => {
                let l = self.add(l, val, index, slots)?;
                Node::Or(l, self.add(r, val, index, slots)?)
            }
            Formula::Next(x) => Node::Next(self.add(x, val, index, slots)?),
            Formula::Until(l, r) => {
                let l = self.add(l, val, index, slots)?;
                Node::Until(l, self.add(r, val, index, slots)?)
            }
            Formula::Eventually(x) => {
                let t = self.intern(Node::True, index);
                Node::Until(t, self.add(x, val, index, slots)?)
            }
            Formula::Always(x) => {
                let t = self.intern(Node::True, index);
                let x = self.add(x, val, index, slots)?;
                let nx = self.intern(Node::Not(x), index);
                let u = self.intern(Node::Until(t, nx), index);
                Node::Not(u)
            }
            Formula::Coalition(..) => {
                return Err(Error::Contract(format!(
                    "state subformula `{f}` must be substituted before path checking"
                )))
            }
        };
        Ok(self.intern(node, index))
    }

    /// Elementary sets compatible with the atoms at `s`, as node bitmasks.
    fn elementary(&self, s: StateId) -> Vec<u64> {
        let free = &self.temporal;
        let mut out = Vec::new();
        'masks: for mask in 0u64..(1u64 << free.len()) {
            let mut bits = 0u64;
            let mut k = 0;
            for (i, n) in self.nodes.iter().enumerate() {
                let get = |j: usize| bits >> j & 1 == 1;
                let v = match *n {
                    Node::True => true,
                    Node::Atom(slot) => self.atoms[slot][s.index()],
                    Node::Not(x) => !get(x),
                    Node::And(l, r) => get(l) && get(r),
                    Node::Or(l, r) => get(l) || get(r),
                    Node::Next(_) | Node::Until(..) => {
                        let v = mask >> k & 1 == 1;
                        k += 1;
                        if let Node::Until(l, r) = *n {
                            if (get(r) && !v) || (v && !get(r) && !get(l)) {
                                continue 'masks;
                            }
                        }
                        v
                    }
                };
                if v {
                    bits |= 1 << i;
                }
            }
            out.push(bits);
        }
        out
    }

    fn step_ok(&self, b: u64, b2: u64) -> bool {
        let get = |m: u64, j: usize| m >> j & 1 == 1;
        self.temporal.iter().all(|&i| match self.nodes[i] {
            Node::Next(x) => get(b, i) == get(b2, x),
            Node::Until(l, r) => get(b, i) == (get(b, r) || (get(b, l) && get(b2, i))),
            _ => unreachable!(),
        })
    }

    /// Whether every infinite path of `g` from `s` satisfies the formula.
    pub(crate) fn universal(&self, g: &PrunedGraph, s: StateId) -> bool {
        let mut letters: HashMap<StateId, Vec<u64>> = HashMap::new();
        let mut sets = |u: StateId| -> Vec<u64> {
            letters.entry(u).or_insert_with(|| self.elementary(u)).clone()
        };
        let mut graph: DiGraph<(StateId, u64), ()> = DiGraph::new();
        let mut ids = HashMap::new();
        let mut queue = VecDeque::new();
        for b in sets(s) {
            if b >> self.root & 1 == 0 {
                let id = graph.add_node((s, b));
                ids.insert((s, b), id);
                queue.push_back(id);
            }
        }
        while let Some(id) = queue.pop_front() {
            let (u, b) = graph[id];
            for &t in g.successors(u) {
                for b2 in sets(t) {
                    if !self.step_ok(b, b2) {
                        continue;
                    }
                    let to = *ids.entry((t, b2)).or_insert_with(|| {
                        let n = graph.add_node((t, b2));
                        queue.push_back(n);
                        n
                    });
                    graph.add_edge(id, to, ());
                }
            }
        }
        let untils: Vec<(usize, usize)> = self
            .temporal
            .iter()
            .filter_map(|&i| match self.nodes[i] {
                Node::Until(_, r) => Some((i, r)),
                _ => None,
            })
            .collect();
        for scc in tarjan_scc(&graph) {
            let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
            if !cyclic {
                continue;
            }
            let fair = untils.iter().all(|&(i, r)| {
                scc.iter().any(|&n| {
                    let b = graph[n].1;
                    b >> i & 1 == 0 || b >> r & 1 == 1
                })
            });
            if fair {
                return false;
            }
        }
        true
    }
}

/// Whether every infinite path of `g` from `s` satisfies `psi`.
///
/// `psi` may not contain coalition modalities; `valuation` gives, for each
/// atom of `psi`, its truth per state (this is how evaluated state
/// subformulas are passed in).
pub fn check_path_universal(
    g: &PrunedGraph,
    s: StateId,
    psi: &Formula,
    valuation: &BTreeMap<String, Vec<bool>>,
) -> Result<bool> {
    Ok(Tableau::new(psi, valuation)?.universal(g, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_path_formula, Dialect};

    fn cycle(p: &[bool]) -> (PrunedGraph, BTreeMap<String, Vec<bool>>) {
        let n = p.len();
        let succ = (0..n).map(|i| vec![StateId((i + 1) % n)]).collect();
        (PrunedGraph { succ }, BTreeMap::from([("p".to_owned(), p.to_vec())]))
    }

    fn holds(g: &PrunedGraph, val: &BTreeMap<String, Vec<bool>>, f: &str) -> bool {
        let f = parse_path_formula(f, Dialect::AtlStar).unwrap();
        check_path_universal(g, StateId(0), &f, val).unwrap()
    }

    #[test]
    fn always_on_two_cycle() {
        let (g, v) = cycle(&[true, true]);
        assert!(holds(&g, &v, "G p"));
        assert!(holds(&g, &v, "true"));
        let (g, v) = cycle(&[true, false]);
        assert!(!holds(&g, &v, "G p"));
        assert!(holds(&g, &v, "G F p"));
        assert!(holds(&g, &v, "X !p & X X p"));
        assert!(!holds(&g, &v, "F G p"));
    }

    #[test]
    fn branching_needs_all_paths() {
        // 0 -> {1, 2}, 1 and 2 self-loops, p only at 1
        let g = PrunedGraph { succ: vec![vec![StateId(1), StateId(2)], vec![StateId(1)], vec![StateId(2)]] };
        let v = BTreeMap::from([("p".to_owned(), vec![false, true, false])]);
        assert!(!holds(&g, &v, "F p"));
        assert!(holds(&g, &v, "F p | G !p"));
        assert!(holds(&g, &v, "X (p | !p) U true"));
        assert!(!holds(&g, &v, "!p U p"));
    }

    #[test]
    fn unknown_atom_and_unsubstituted_coalition() {
        let (g, v) = cycle(&[true]);
        let f = parse_path_formula("q", Dialect::AtlStar).unwrap();
        assert!(check_path_universal(&g, StateId(0), &f, &v).is_err());
        let f = crate::logic::parse_formula("<<a>> X p", Dialect::AtlStar).unwrap();
        assert!(matches!(check_path_universal(&g, StateId(0), &f, &v), Err(Error::Contract(_))));
    }
}
