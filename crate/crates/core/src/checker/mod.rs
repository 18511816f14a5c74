//! ATL and ATL* model checking under uniform memoryless strategies.
//!
//! `<<A>> ψ` holds at `s` when some profile assigning one action per
//! indistinguishability class of each member of `A` makes `ψ` true on every
//! path from each start state. Under the subjective semantics (default) the
//! start states are every `s'` with `s ~_a s'` for some member `a`; under
//! the objective semantics only `s` itself. Opponents are unrestricted.

mod atl;
mod ltl;
mod strategy;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{Coalition, Dialect, Formula};
use crate::model::{AgentId, Icgs, StateId};
use crate::par::{self, Exec};

pub use ltl::check_path_universal;
pub use strategy::{
    class_actions, coalition_members, prune, uniform_strategies, PrunedGraph, StrategyProfile,
    StrategySpace,
};

use atl::{Arena, Goal};

/// Profile sweeps larger than this are refused.
pub const MAX_PROFILES: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Paths from every state some coalition member cannot distinguish
    /// from the evaluation state.
    #[default]
    Subjective,
    /// Paths from the evaluation state only.
    Objective,
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subjective" => Ok(Semantics::Subjective),
            "objective" => Ok(Semantics::Objective),
            _ => Err(Error::Input(format!("unknown semantics `{s}` (expected subjective or objective)"))),
        }
    }
}

impl std::fmt::Display for Semantics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Semantics::Subjective => "subjective",
            Semantics::Objective => "objective",
        })
    }
}

/// The states from which `<<members>>` must win when evaluated at `s`.
pub fn start_states(m: &Icgs, members: &[AgentId], s: StateId, semantics: Semantics) -> Vec<StateId> {
    let mut out = vec![s];
    if semantics == Semantics::Subjective {
        for &a in members {
            if let Some(c) = m.class_index(a, s) {
                out.extend_from_slice(&m.indist(a)[c]);
            }
        }
        out.sort();
        out.dedup();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CheckConfig {
    pub semantics: Semantics,
    pub dialect: Dialect,
    pub exec: Exec,
}

impl CheckConfig {
    pub fn new(dialect: Dialect) -> Self {
        CheckConfig { semantics: Semantics::default(), dialect, exec: Exec::default() }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        CheckConfig { exec, ..self }
    }

    pub fn with_semantics(self, semantics: Semantics) -> Self {
        CheckConfig { semantics, ..self }
    }
}

/// Bottom-up evaluator with a per-subformula cache of satisfaction sets.
pub struct Checker<'m> {
    m: &'m Icgs,
    cfg: CheckConfig,
    cache: HashMap<Formula, Vec<bool>>,
    witnesses: HashMap<Formula, Vec<Option<StrategyProfile>>>,
}

impl<'m> Checker<'m> {
    pub fn new(m: &'m Icgs, cfg: CheckConfig) -> Result<Self> {
        Ok(Checker { m, cfg, cache: HashMap::new(), witnesses: HashMap::new() })
    }

    pub fn model(&self) -> &Icgs {
        self.m
    }

    /// Checks dialect membership, atom declarations and coalition members.
    pub fn admit(&self, f: &Formula) -> Result<()> {
        f.check_dialect(self.cfg.dialect)?;
        for p in f.atoms() {
            if self.m.prop_id(p).is_none() {
                return Err(Error::Input(format!("atom `{p}` is not declared in the model")));
            }
        }
        for c in f.coalitions() {
            coalition_members(self.m, c)?;
        }
        Ok(())
    }

    /// The states satisfying `f`.
    pub fn sat(&mut self, f: &Formula) -> Result<Vec<bool>> {
        self.admit(f)?;
        self.eval(f)
    }

    pub fn holds(&mut self, s: StateId, f: &Formula) -> Result<bool> {
        if s.index() >= self.m.num_states() {
            return Err(Error::Unknown { kind: "state", name: format!("#{}", s.index()) });
        }
        Ok(self.sat(f)?[s.index()])
    }

    /// The first witnessing profile for a top-level coalition formula at
    /// `s`, in search order.
    pub fn witness(&mut self, s: StateId, f: &Formula) -> Result<Option<StrategyProfile>> {
        if !matches!(f, Formula::Coalition(..)) {
            return Err(Error::Input(format!("`{f}` is not a coalition formula")));
        }
        self.sat(f)?;
        Ok(self.witnesses.get(f).and_then(|w| w[s.index()].clone()))
    }

    fn eval(&mut self, f: &Formula) -> Result<Vec<bool>> {
        if let Some(v) = self.cache.get(f) {
            return Ok(v.clone());
        }
        let n = self.m.num_states();
        let v = match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Atom(p) => {
                let p = self
                    .m
                    .prop_id(p)
                    .ok_or_else(|| Error::Input(format!("atom `{p}` is not declared in the model")))?;
                self.m.states().map(|s| self.m.has_label(s, p)).collect()
            }
            Formula::Not(x) => self.eval(x)?.into_iter().map(|b| !b).collect(),
            Formula::And(l, r) => {
                let l = self.eval(l)?;
                l.into_iter().zip(self.eval(r)?).map(|(a, b)| a && b).collect()
            }
            Formula::Or(l, r) => {
                let l = self.eval(l)?;
                l.into_iter().zip(self.eval(r)?).map(|(a, b)| a || b).collect()
            }
            Formula::Coalition(a, body) => {
                let members = coalition_members(self.m, a)?;
                let found = match self.cfg.dialect {
                    Dialect::Atl => self.coalition_atl(members, body)?,
                    Dialect::AtlStar => self.coalition_star(members, body)?,
                };
                let v = found.iter().map(Option::is_some).collect();
                self.witnesses.insert(f.clone(), found);
                v
            }
            t => return Err(Error::Dialect(format!("`{t}` is not a state formula"))),
        };
        self.cache.insert(f.clone(), v.clone());
        Ok(v)
    }

    fn coalition_atl(&mut self, members: Vec<AgentId>, body: &Formula) -> Result<Vec<Option<StrategyProfile>>> {
        let (phi, psi) = match body {
            Formula::Next(x) | Formula::Always(x) => (self.eval(x)?, vec![]),
            Formula::Until(l, r) => (self.eval(l)?, self.eval(r)?),
            other => {
                return Err(Error::Dialect(format!(
                    "coalition body `{other}` is not one of X, G, U in ATL"
                )))
            }
        };
        let goal = match body {
            Formula::Next(_) => Goal::Next(&phi),
            Formula::Always(_) => Goal::Always(&phi),
            _ => Goal::Until(&phi, &psi),
        };
        let (m, semantics) = (self.m, self.cfg.semantics);
        let arena = Arena::new(m, members.clone());
        Ok(par::map_range(self.cfg.exec, m.num_states(), |s| {
            arena.solve(&start_states(m, &members, StateId(s), semantics), goal)
        }))
    }

    /// Replaces the coalition subformulas of a path formula by fresh atoms
    /// `#0`, `#1`, ... and returns their satisfaction sets.
    fn substitute(&mut self, f: &Formula, table: &mut BTreeMap<String, Vec<bool>>) -> Result<Formula> {
        use Formula::*;
        Ok(match f {
            True | False => f.clone(),
            Atom(p) => {
                if !table.contains_key(p) {
                    let v = self.eval(f)?;
                    table.insert(p.clone(), v);
                }
                f.clone()
            }
            Coalition(..) => {
                let v = self.eval(f)?;
                let name = format!("#{}", table.keys().filter(|k| k.starts_with('#')).count());
                table.insert(name.clone(), v);
                Atom(name)
            }
            Not(x) => Not(Box::new(self.substitute(x, table)?)),
            And(l, r) => And(Box::new(self.substitute(l, table)?), Box::new(self.substitute(r, table)?)),
            Or(l, r) => Or(Box::new(self.substitute(l, table)?), Box::new(self.substitute(r, table)?)),
            Until(l, r) => Until(Box::new(self.substitute(l, table)?), Box::new(self.substitute(r, table)?)),
            Next(x) => Next(Box::new(self.substitute(x, table)?)),
            Always(x) => Always(Box::new(self.substitute(x, table)?)),
            Eventually(x) => Eventually(Box::new(self.substitute(x, table)?)),
        })
    }

    fn coalition_star(&mut self, members: Vec<AgentId>, body: &Formula) -> Result<Vec<Option<StrategyProfile>>> {
        let mut table = BTreeMap::new();
        let psi = self.substitute(body, &mut table)?;
        let tableau = ltl::Tableau::new(&psi, &table)?;
        let (m, exec, semantics) = (self.m, self.cfg.exec, self.cfg.semantics);
        let starts: Vec<Vec<StateId>> =
            m.states().map(|s| start_states(m, &members, s, semantics)).collect();
        let spaces: Vec<StrategySpace> = starts
            .iter()
            .map(|from| {
                let reach = reachable_from(m, from);
                StrategySpace::restricted(m, &members, |a, c| {
                    m.indist(a)[c].iter().any(|t| reach[t.index()])
                })
            })
            .collect();
        for space in &spaces {
            match space.count() {
                Some(n) if n <= MAX_PROFILES => {}
                _ => {
                    return Err(Error::Resource(format!(
                        "more than {MAX_PROFILES} uniform profiles to sweep"
                    )))
                }
            }
        }
        Ok(par::map_range(exec, m.num_states(), |s| {
            let space = &spaces[s];
            par::find_first(exec, space.count().unwrap(), |i| {
                let sigma = space.profile(i);
                let g = prune(m, &sigma);
                starts[s].iter().all(|&t| tableau.universal(&g, t)).then_some(sigma)
            })
        }))
    }
}

fn reachable_from(m: &Icgs, from: &[StateId]) -> Vec<bool> {
    let mut seen = vec![false; m.num_states()];
    for s in from {
        seen[s.index()] = true;
    }
    let mut stack = from.to_vec();
    while let Some(u) = stack.pop() {
        for (_, t) in m.transitions(u) {
            if !seen[t.index()] {
                seen[t.index()] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Evaluates `f` at `s` in the dialect of `cfg`.
pub fn check(m: &Icgs, s: StateId, f: &Formula, cfg: CheckConfig) -> Result<bool> {
    Checker::new(m, cfg)?.holds(s, f)
}

/// Evaluates `f` at every initial state and returns the conjunction.
pub fn check_initial(m: &Icgs, f: &Formula, cfg: CheckConfig) -> Result<bool> {
    let sat = Checker::new(m, cfg)?.sat(f)?;
    Ok(m.initial().iter().all(|s| sat[s.index()]))
}

pub fn check_atl(m: &Icgs, s: StateId, f: &Formula, cfg: CheckConfig) -> Result<bool> {
    check(m, s, f, CheckConfig { dialect: Dialect::Atl, ..cfg })
}

pub fn check_atlstar(m: &Icgs, s: StateId, f: &Formula, cfg: CheckConfig) -> Result<bool> {
    check(m, s, f, CheckConfig { dialect: Dialect::AtlStar, ..cfg })
}

/// Convenience for the common case of a named coalition at a named state.
pub fn coalition_formula(agents: &[&str], body: Formula) -> Formula {
    Formula::coalition(Coalition::new(agents.iter().copied()), body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    /// e moves q0 to q1 or q2; a cannot tell q1 from q2 and must pick the
    /// action leading to `win`, which differs between them.
    pub(crate) fn gadget(identity: bool) -> Icgs {
        let mut b = Icgs::builder();
        b.agent("a", ["L", "R"])
            .agent("e", ["l", "r"])
            .states(["q0", "q1", "q2", "win", "lose"])
            .initial("q0")
            .label("win", "win")
            .label("lose", "lose")
            .protocol("q0", "a", ["L"])
            .protocol("win", "a", ["L"])
            .protocol("lose", "a", ["L"]);
        if !identity {
            b.indist_block("a", ["q1", "q2"]);
        }
        for e in ["l", "r"] {
            b.transition("q0", ["L", e], if e == "l" { "q1" } else { "q2" });
            for a in ["L", "R"] {
                b.transition("q1", [a, e], if a == "L" { "win" } else { "lose" });
                b.transition("q2", [a, e], if a == "L" { "lose" } else { "win" });
            }
            b.transition("win", ["L", e], "win");
            b.transition("lose", ["L", e], "lose");
        }
        b.build().unwrap()
    }

    fn at(m: &Icgs, s: &str, f: &str, d: Dialect) -> bool {
        let f = parse_formula(f, d).unwrap();
        check(m, m.state_id(s).unwrap(), &f, CheckConfig::new(d)).unwrap()
    }

    fn at_objective(m: &Icgs, s: &str, f: &str, d: Dialect) -> bool {
        let f = parse_formula(f, d).unwrap();
        let cfg = CheckConfig::new(d).with_semantics(Semantics::Objective);
        check(m, m.state_id(s).unwrap(), &f, cfg).unwrap()
    }

    #[test]
    fn gadget_needs_information() {
        for d in [Dialect::Atl, Dialect::AtlStar] {
            assert!(!at(&gadget(false), "q0", "<<a>> X <<a>> X win", d));
            assert!(at(&gadget(true), "q0", "<<a>> X <<a>> X win", d));
            assert!(!at(&gadget(false), "q1", "<<a>> X win", d));
            assert!(at(&gadget(true), "q1", "<<a>> X win", d));
        }
        assert!(!at(&gadget(false), "q0", "<<a>> X X win", Dialect::AtlStar));
        assert!(at(&gadget(true), "q0", "<<a>> X X win", Dialect::AtlStar));
    }

    #[test]
    fn objective_semantics_rechooses_inner_strategies() {
        for d in [Dialect::Atl, Dialect::AtlStar] {
            assert!(at_objective(&gadget(false), "q1", "<<a>> X win", d));
            assert!(at_objective(&gadget(false), "q0", "<<a>> X <<a>> X win", d));
        }
        assert!(!at_objective(&gadget(false), "q0", "<<a>> X X win", Dialect::AtlStar));
    }

    #[test]
    fn gadget_profile_space() {
        let m = gadget(false);
        let space = uniform_strategies(&m, &Coalition::new(["a"])).unwrap();
        // classes: {q0}, {q1,q2}, {win}, {lose}; only {q1,q2} has a choice
        assert_eq!(space.count(), Some(2));
        let sigma = space.profile(0);
        let g = prune(&m, &sigma);
        let win = m.state_id("win").unwrap();
        assert_eq!(g.successors(m.state_id("q1").unwrap()), [win]);
        assert_eq!(g.successors(m.state_id("q2").unwrap()), [m.state_id("lose").unwrap()]);
    }

    #[test]
    fn trivial_coalitions() {
        let m = gadget(false);
        for d in [Dialect::Atl, Dialect::AtlStar] {
            for s in m.state_names() {
                assert!(at(&m, s, "<<>> G true", d));
            }
            assert!(at(&m, "win", "<<>> G win", d));
            assert!(!at(&m, "q0", "<<>> G !lose", d));
            assert!(at(&m, "win", "<<a>> (!lose U win)", d));
            assert!(at_objective(&m, "q1", "<<a>> (!lose U win)", d));
            assert!(!at(&m, "q0", "<<a>> (true U win)", d));
            assert!(at(&m, "q0", "<<a,e>> (true U win)", d));
        }
    }

    #[test]
    fn witness_is_reported() {
        let m = gadget(true);
        let f = parse_formula("<<a>> X <<a>> X win", Dialect::Atl).unwrap();
        let mut c = Checker::new(&m, CheckConfig::new(Dialect::Atl)).unwrap();
        let w = c.witness(m.state_id("q0").unwrap(), &f).unwrap().unwrap();
        assert_eq!(w.members, vec![m.agent_id("a").unwrap()]);
        assert!(c.witness(m.state_id("q0").unwrap(), &Formula::True).is_err());
        let inner = parse_formula("<<a>> X win", Dialect::Atl).unwrap();
        let w = c.witness(m.state_id("q2").unwrap(), &inner).unwrap().unwrap();
        assert_eq!(w.action(&m, AgentId(0), m.state_id("q2").unwrap()), m.action_id(AgentId(0), "R"));
    }

    #[test]
    fn input_errors() {
        let m = gadget(false);
        let cfg = CheckConfig::new(Dialect::Atl);
        let f = parse_formula("<<zz>> X win", Dialect::Atl).unwrap();
        assert!(matches!(check(&m, StateId(0), &f, cfg), Err(Error::Unknown { .. })));
        let f = parse_formula("<<a>> X nope", Dialect::Atl).unwrap();
        assert!(matches!(check(&m, StateId(0), &f, cfg), Err(Error::Input(_))));
        let f = parse_formula("<<a>> X X win", Dialect::AtlStar).unwrap();
        assert!(matches!(check(&m, StateId(0), &f, cfg), Err(Error::Dialect(_))));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let m = gadget(false);
        let f = parse_formula("<<a>> G !lose | <<a>> X <<a>> X win", Dialect::Atl).unwrap();
        for d in [Dialect::Atl, Dialect::AtlStar] {
            let seq = Checker::new(&m, CheckConfig::new(d).with_exec(Exec::Sequential)).unwrap().sat(&f).unwrap();
            let par = Checker::new(&m, CheckConfig::new(d).with_exec(Exec::Parallel)).unwrap().sat(&f).unwrap();
            assert_eq!(seq, par);
        }
    }
}
