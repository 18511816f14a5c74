//! Brute-force reference checker for small instances.
//!
//! Deliberately shares no evaluation code with [`crate::checker`]: profiles
//! are enumerated exhaustively, outcome graphs are rebuilt from the
//! transition table, and path formulas are evaluated directly on every
//! lasso (ultimately periodic path) up to a length bound.
//!
//! Lasso bounds, for a coalition body `ψ` over an outcome graph with `n`
//! states, with `t` temporal operators of which `k` are `U`/`F`/`G` and
//! `X`-nesting depth `d`:
//! * `k = 0`: `d + n + 1`. The first `d + 1` positions decide `ψ` and any
//!   prefix extends to a lasso within `n` further states.
//! * `k = 1`: the number `w` of paths of `d + 1` states in the graph. `X`
//!   distributes over the other operators, so over the graph of such
//!   windows `ψ` is a boolean combination of one `U`/`F`/`G` with state
//!   operands and window labels; a violation is then witnessed on a lasso
//!   of distinct windows.
//! * otherwise `(k + 2) · n · 2^t`: a violating path yields an accepting
//!   lasso of the elementary-set product, whose cycle need visit at most
//!   `k` acceptance sets.
//!
//! A separate fixpoint evaluator covers perfect information.

use crate::checker::Semantics;
use crate::error::{Error, Result};
use crate::logic::{Dialect, Formula};
use crate::model::{ActionId, AgentId, Icgs, StateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_states: usize,
    /// Classes per coalition member.
    pub max_classes: usize,
    /// Lassos evaluated per profile and start state.
    pub max_lassos: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_states: 6, max_classes: 2, max_lassos: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleConfig {
    pub semantics: Semantics,
    pub limits: OracleLimits,
}

/// Truth of `f` at `s`, by exhaustive enumeration.
pub fn oracle_check(m: &Icgs, s: StateId, f: &Formula, dialect: Dialect, cfg: OracleConfig) -> Result<bool> {
    f.check_dialect(dialect)?;
    Ok(oracle_sat(m, f, cfg)?[s.index()])
}

/// Satisfaction set of a state formula, by exhaustive enumeration.
pub fn oracle_sat(m: &Icgs, f: &Formula, cfg: OracleConfig) -> Result<Vec<bool>> {
    if m.num_states() > cfg.limits.max_states {
        return Err(Error::Resource(format!(
            "oracle handles at most {} states, model has {}",
            cfg.limits.max_states,
            m.num_states()
        )));
    }
    Oracle { m, cfg }.state(f)
}

struct Oracle<'m> {
    m: &'m Icgs,
    cfg: OracleConfig,
}

impl Oracle<'_> {
    fn atom(&self, p: &str) -> Result<Vec<bool>> {
        let names = self.m.props();
        let idx = names
            .iter()
            .position(|n| n == p)
            .ok_or_else(|| Error::Input(format!("atom `{p}` is not declared in the model")))?;
        Ok(self.m.states().map(|s| self.m.labels(s).iter().any(|l| l.index() == idx)).collect())
    }

    fn state(&self, f: &Formula) -> Result<Vec<bool>> {
        Ok(match f {
            Formula::True => vec![true; self.m.num_states()],
            Formula::False => vec![false; self.m.num_states()],
            Formula::Atom(p) => self.atom(p)?,
            Formula::Not(x) => self.state(x)?.iter().map(|b| !b).collect(),
            Formula::And(l, r) => zip(&self.state(l)?, &self.state(r)?, |a, b| a && b),
            Formula::Or(l, r) => zip(&self.state(l)?, &self.state(r)?, |a, b| a || b),
            Formula::Coalition(c, body) => {
                let members: Vec<AgentId> = c
                    .agents()
                    .map(|a| {
                        (0..self.m.num_agents())
                            .map(AgentId)
                            .find(|&x| self.m.agent_name(x) == a)
                            .ok_or_else(|| Error::Unknown { kind: "agent", name: a.to_owned() })
                    })
                    .collect::<Result<_>>()?;
                let body = self.path_atoms(body)?;
                self.coalition(&members, &body)?
            }
            t => return Err(Error::Dialect(format!("`{t}` is not a state formula"))),
        })
    }

    /// Evaluates maximal state subformulas of a path formula.
    fn path_atoms(&self, f: &Formula) -> Result<Path> {
        Ok(match f {
            Formula::Next(x) => Path::Next(Box::new(self.path_atoms(x)?)),
            Formula::Always(x) => Path::Always(Box::new(self.path_atoms(x)?)),
            Formula::Eventually(x) => Path::Eventually(Box::new(self.path_atoms(x)?)),
            Formula::Until(l, r) => Path::Until(Box::new(self.path_atoms(l)?), Box::new(self.path_atoms(r)?)),
            Formula::Not(x) if !x.is_state_formula() => Path::Not(Box::new(self.path_atoms(x)?)),
            Formula::And(l, r) if !f.is_state_formula() => {
                Path::And(Box::new(self.path_atoms(l)?), Box::new(self.path_atoms(r)?))
            }
            Formula::Or(l, r) if !f.is_state_formula() => {
                Path::Or(Box::new(self.path_atoms(l)?), Box::new(self.path_atoms(r)?))
            }
            state => Path::State(self.state(state)?),
        })
    }

    fn coalition(&self, members: &[AgentId], body: &Path) -> Result<Vec<bool>> {
        let m = self.m;
        let mut slots: Vec<(usize, usize, Vec<ActionId>)> = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            let blocks = m.indist(a);
            if blocks.len() > self.cfg.limits.max_classes {
                return Err(Error::Resource(format!(
                    "oracle handles at most {} classes per coalition member, `{}` has {}",
                    self.cfg.limits.max_classes,
                    m.agent_name(a),
                    blocks.len()
                )));
            }
            for (c, block) in blocks.iter().enumerate() {
                let acts: Vec<ActionId> = (0..m.actions(a).len())
                    .map(ActionId)
                    .filter(|act| block.iter().all(|&s| m.protocol(s, a).contains(act)))
                    .collect();
                slots.push((i, c, acts));
            }
        }
        let mut out = vec![false; m.num_states()];
        let mut profile: Vec<Vec<ActionId>> =
            members.iter().map(|&a| vec![ActionId(0); m.indist(a).len()]).collect();
        self.each_profile(&slots, 0, &mut profile, &mut |profile| {
            let succ = self.outcome(members, profile);
            let bound = lasso_bound(body, &succ);
            for s in m.states() {
                if out[s.index()] {
                    continue;
                }
                let mut starts = vec![s];
                if self.cfg.semantics == Semantics::Subjective {
                    for &a in members {
                        for block in m.indist(a) {
                            if block.contains(&s) {
                                starts.extend(block.iter().copied());
                            }
                        }
                    }
                }
                let mut all = true;
                for &t in &starts {
                    if !self.all_lassos(&succ, t, body, bound)? {
                        all = false;
                        break;
                    }
                }
                out[s.index()] = all;
            }
            Ok(())
        })?;
        Ok(out)
    }

    fn each_profile(
        &self,
        slots: &[(usize, usize, Vec<ActionId>)],
        at: usize,
        profile: &mut Vec<Vec<ActionId>>,
        visit: &mut dyn FnMut(&[Vec<ActionId>]) -> Result<()>,
    ) -> Result<()> {
        if at == slots.len() {
            return visit(profile);
        }
        let (i, c, acts) = &slots[at];
        for &act in acts {
            profile[*i][*c] = act;
            self.each_profile(slots, at + 1, profile, visit)?;
        }
        Ok(())
    }

    fn outcome(&self, members: &[AgentId], profile: &[Vec<ActionId>]) -> Vec<Vec<usize>> {
        let m = self.m;
        m.states()
            .map(|s| {
                let mut out: Vec<usize> = m
                    .transitions(s)
                    .filter(|(joint, _)| {
                        members.iter().enumerate().all(|(i, &a)| {
                            let c = m.indist(a).iter().position(|b| b.contains(&s)).unwrap();
                            joint[a.index()] == profile[i][c]
                        })
                    })
                    .map(|(_, t)| t.index())
                    .collect();
                out.sort();
                out.dedup();
                out
            })
            .collect()
    }

    /// Whether `body` holds on every lasso from `start` of at most `bound`
    /// states.
    fn all_lassos(&self, succ: &[Vec<usize>], start: StateId, body: &Path, bound: usize) -> Result<bool> {
        let mut path = vec![start.index()];
        let mut budget = self.cfg.limits.max_lassos;
        self.extend(succ, &mut path, body, bound, &mut budget)
    }

    fn extend(
        &self,
        succ: &[Vec<usize>],
        path: &mut Vec<usize>,
        body: &Path,
        bound: usize,
        budget: &mut u64,
    ) -> Result<bool> {
        let last = *path.last().unwrap();
        for (j, u) in path.iter().enumerate() {
            if succ[last].contains(u) {
                if *budget == 0 {
                    return Err(Error::Resource(format!(
                        "more than {} lassos of length {bound}",
                        self.cfg.limits.max_lassos
                    )));
                }
                *budget -= 1;
                if !body.eval(path, j)[0] {
                    return Ok(false);
                }
            }
        }
        if path.len() < bound {
            for &t in &succ[last] {
                path.push(t);
                let ok = self.extend(succ, path, body, bound, budget)?;
                path.pop();
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A path formula with its state subformulas already evaluated.
#[derive(Clone, Debug)]
enum Path {
    State(Vec<bool>),
    Not(Box<Path>),
    And(Box<Path>, Box<Path>),
    Or(Box<Path>, Box<Path>),
    Next(Box<Path>),
    Always(Box<Path>),
    Eventually(Box<Path>),
    Until(Box<Path>, Box<Path>),
}

impl Path {
    fn temporal(&self) -> (usize, usize, usize) {
        // (temporal operators, non-X operators, X nesting depth)
        match self {
            Path::State(_) => (0, 0, 0),
            Path::Not(x) => x.temporal(),
            Path::And(l, r) | Path::Or(l, r) => {
                let (a, b, c) = l.temporal();
                let (x, y, z) = r.temporal();
                (a + x, b + y, c.max(z))
            }
            Path::Next(x) => {
                let (a, b, c) = x.temporal();
                (a + 1, b, c + 1)
            }
            Path::Always(x) | Path::Eventually(x) => {
                let (a, b, c) = x.temporal();
                (a + 1, b + 1, c)
            }
            Path::Until(l, r) => {
                let (a, b, c) = l.temporal();
                let (x, y, z) = r.temporal();
                (a + x + 1, b + y + 1, c.max(z))
            }
        }
    }

    /// Truth at every position of the lasso `path` whose last state loops
    /// back to position `back`.
    fn eval(&self, path: &[usize], back: usize) -> Vec<bool> {
        let n = path.len();
        let next = |i: usize| if i + 1 < n { i + 1 } else { back };
        match self {
            Path::State(v) => path.iter().map(|&s| v[s]).collect(),
            Path::Not(x) => x.eval(path, back).into_iter().map(|b| !b).collect(),
            Path::And(l, r) => zip(&l.eval(path, back), &r.eval(path, back), |a, b| a && b),
            Path::Or(l, r) => zip(&l.eval(path, back), &r.eval(path, back), |a, b| a || b),
            Path::Next(x) => {
                let v = x.eval(path, back);
                (0..n).map(|i| v[next(i)]).collect()
            }
            Path::Eventually(x) => until(&vec![true; n], &x.eval(path, back), next),
            Path::Always(x) => {
                let neg: Vec<bool> = x.eval(path, back).into_iter().map(|b| !b).collect();
                until(&vec![true; n], &neg, next).into_iter().map(|b| !b).collect()
            }
            Path::Until(l, r) => until(&l.eval(path, back), &r.eval(path, back), next),
        }
    }
}

/// Least fixpoint of `u = r ∨ (l ∧ X u)` on a lasso.
fn until(l: &[bool], r: &[bool], next: impl Fn(usize) -> usize) -> Vec<bool> {
    let n = l.len();
    let mut u = r.to_vec();
    for _ in 0..n {
        let mut changed = false;
        for i in 0..n {
            if !u[i] && l[i] && u[next(i)] {
                u[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    u
}

fn lasso_bound(body: &Path, succ: &[Vec<usize>]) -> usize {
    let n = succ.len();
    let (t, k, depth) = body.temporal();
    match k {
        0 => depth + n + 1,
        1 => {
            // paths of depth + 1 states, counted backwards from their end
            let mut count = vec![1usize; n];
            for _ in 0..depth {
                count = succ.iter().map(|ts| ts.iter().map(|&t| count[t]).fold(0, usize::saturating_add)).collect();
            }
            count.into_iter().fold(0, usize::saturating_add).max(1)
        }
        _ => (k + 2).saturating_mul(n).saturating_mul(1usize << t.min(40)),
    }
}

fn zip(a: &[bool], b: &[bool], f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// Classical perfect-information ATL: coalition modalities by the
/// controllable-predecessor fixpoints, ignoring indistinguishability.
pub fn perfect_information_sat(m: &Icgs, f: &Formula) -> Result<Vec<bool>> {
    f.check_dialect(Dialect::Atl)?;
    Fixpoint { m, oracle: Oracle { m, cfg: OracleConfig::default() } }.eval(f)
}

struct Fixpoint<'m> {
    m: &'m Icgs,
    oracle: Oracle<'m>,
}

impl Fixpoint<'_> {
    fn eval(&self, f: &Formula) -> Result<Vec<bool>> {
        Ok(match f {
            Formula::True | Formula::False | Formula::Atom(_) => self.oracle.state(f)?,
            Formula::Not(x) => self.eval(x)?.iter().map(|b| !b).collect(),
            Formula::And(l, r) => zip(&self.eval(l)?, &self.eval(r)?, |a, b| a && b),
            Formula::Or(l, r) => zip(&self.eval(l)?, &self.eval(r)?, |a, b| a || b),
            Formula::Coalition(c, body) => {
                let members: Vec<bool> = (0..self.m.num_agents())
                    .map(|a| c.contains(self.m.agent_name(AgentId(a))))
                    .collect();
                if c.agents().any(|a| self.m.agent_id(a).is_none()) {
                    let a = c.agents().find(|a| self.m.agent_id(a).is_none()).unwrap();
                    return Err(Error::Unknown { kind: "agent", name: a.to_owned() });
                }
                match &**body {
                    Formula::Next(x) => self.pre(&members, &self.eval(x)?),
                    Formula::Always(x) => {
                        let phi = self.eval(x)?;
                        let mut z = phi.clone();
                        loop {
                            let next = zip(&phi, &self.pre(&members, &z), |a, b| a && b);
                            if next == z {
                                break z;
                            }
                            z = next;
                        }
                    }
                    Formula::Until(l, r) => {
                        let (phi, psi) = (self.eval(l)?, self.eval(r)?);
                        let mut z = psi.clone();
                        loop {
                            let step = zip(&phi, &self.pre(&members, &z), |a, b| a && b);
                            let next = zip(&psi, &step, |a, b| a || b);
                            if next == z {
                                break z;
                            }
                            z = next;
                        }
                    }
                    other => return Err(Error::Dialect(format!("`{other}` is not an ATL coalition body"))),
                }
            }
            t => return Err(Error::Dialect(format!("`{t}` is not a state formula"))),
        })
    }

    /// States where the coalition has a one-step move forcing `target`.
    fn pre(&self, members: &[bool], target: &[bool]) -> Vec<bool> {
        let m = self.m;
        m.states()
            .map(|s| {
                let moves: Vec<(&Vec<ActionId>, StateId)> = m.transitions(s).collect();
                moves.iter().any(|(ours, _)| {
                    moves
                        .iter()
                        .filter(|(j, _)| (0..members.len()).all(|a| !members[a] || j[a] == ours[a]))
                        .all(|(_, t)| target[t.index()])
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn gadget(identity: bool) -> Icgs {
        let mut b = Icgs::builder();
        b.agent("a", ["L", "R"])
            .agent("e", ["l", "r"])
            .states(["q0", "q1", "q2", "sink"])
            .initial("q0")
            .label("sink", "win")
            .protocol("q0", "a", ["L"])
            .protocol("sink", "a", ["L"]);
        if !identity {
            b.indist_block("a", ["q1", "q2", "q0", "sink"]);
            b.protocol("q1", "a", ["L"]).protocol("q2", "a", ["L"]);
        }
        for e in ["l", "r"] {
            b.transition("q0", ["L", e], if e == "l" { "q1" } else { "q2" });
            b.transition("sink", ["L", e], "sink");
            for a in ["L", "R"] {
                if identity || a == "L" {
                    b.transition("q1", [a, e], if a == "L" { "sink" } else { "q1" });
                    b.transition("q2", [a, e], if a == "R" { "sink" } else { "q2" });
                }
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn lasso_evaluation() {
        // 0 1 (2 3)^ω
        let p = Path::State(vec![true, false, true, false]);
        let path = [0, 1, 2, 3];
        assert_eq!(Path::Next(Box::new(p.clone())).eval(&path, 2), vec![false, true, false, true]);
        let gf = Path::Always(Box::new(Path::Eventually(Box::new(p.clone()))));
        assert_eq!(gf.eval(&path, 2), vec![true; 4]);
        let g = Path::Always(Box::new(p.clone()));
        assert_eq!(g.eval(&path, 2), vec![false; 4]);
        let until = Path::Until(Box::new(Path::State(vec![true; 4])), Box::new(Path::State(vec![false, false, false, true])));
        assert_eq!(until.eval(&path, 2), vec![true; 4]);
    }

    #[test]
    fn fixpoint_and_enumeration_agree_on_identity_gadget() {
        let m = gadget(true);
        for f in ["<<a>> X <<a>> X win", "<<a>> (true U win)", "<<>> G !win", "<<a,e>> G !win", "<<e>> G !win"] {
            let f = parse_formula(f, Dialect::Atl).unwrap();
            let fp = perfect_information_sat(&m, &f).unwrap();
            let en = oracle_sat(&m, &f, OracleConfig { limits: OracleLimits { max_classes: 4, ..Default::default() }, ..Default::default() }).unwrap();
            assert_eq!(fp, en, "{f}");
        }
    }

    #[test]
    fn resource_caps() {
        let m = gadget(true);
        let f = parse_formula("<<a>> X win", Dialect::Atl).unwrap();
        assert!(matches!(oracle_sat(&m, &f, OracleConfig::default()), Err(Error::Resource(_))));
        let tiny = OracleConfig { limits: OracleLimits { max_states: 2, ..Default::default() }, ..Default::default() };
        assert!(matches!(oracle_sat(&m, &f, tiny), Err(Error::Resource(_))));
    }

    #[test]
    fn bounds() {
        let p = || Box::new(Path::State(vec![true; 3]));
        // 0 -> {1, 2}, 1 -> 1, 2 -> 0
        let succ = vec![vec![1, 2], vec![1], vec![0]];
        assert_eq!(lasso_bound(&Path::Until(p(), p()), &succ), 3);
        assert_eq!(lasso_bound(&Path::Next(Box::new(Path::Next(p()))), &succ), 6);
        assert_eq!(lasso_bound(&Path::Next(Box::new(Path::Always(p()))), &succ), 4);
        assert_eq!(lasso_bound(&Path::Always(Box::new(Path::Eventually(p()))), &succ), 4 * 3 * 4);
    }
}
