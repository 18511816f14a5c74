use std::fmt;

use crate::error::{Error, Result};
use crate::logic::Coalition;
use crate::model::{ActionId, AgentId, Icgs, StateId};

/// Resolves coalition names against the model, in agent-id order.
pub fn coalition_members(m: &Icgs, a: &Coalition) -> Result<Vec<AgentId>> {
    let mut out = a
        .agents()
        .map(|name| {
            m.agent_id(name).ok_or_else(|| Error::Unknown { kind: "agent", name: name.to_owned() })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Actions available to `a` on class `c`: the protocol on the class.
pub fn class_actions(m: &Icgs, a: AgentId, c: usize) -> Vec<ActionId> {
    let block = &m.indist(a)[c];
    let mut acts = m.protocol(block[0], a).to_vec();
    for &s in &block[1..] {
        let p = m.protocol(s, a);
        acts.retain(|x| p.contains(x));
    }
    acts
}

/// A uniform memoryless strategy for each coalition member: one action per
/// indistinguishability class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    pub members: Vec<AgentId>,
    /// `actions[i][c]` is the action of `members[i]` on its class `c`.
    pub actions: Vec<Vec<ActionId>>,
}

impl StrategyProfile {
    pub fn empty() -> Self {
        StrategyProfile { members: vec![], actions: vec![] }
    }

    /// The action prescribed to member `a` at state `s`, if `a` is a member.
    pub fn action(&self, m: &Icgs, a: AgentId, s: StateId) -> Option<ActionId> {
        let i = self.members.iter().position(|&x| x == a)?;
        Some(self.actions[i][m.class_index(a, s)?])
    }

    pub fn display<'a>(&'a self, m: &'a Icgs) -> ProfileDisplay<'a> {
        ProfileDisplay { p: self, m }
    }
}

pub struct ProfileDisplay<'a> {
    p: &'a StrategyProfile,
    m: &'a Icgs,
}

impl fmt::Display for ProfileDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m;
        for (i, &a) in self.p.members.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}:", m.agent_name(a))?;
            for (c, act) in self.p.actions[i].iter().enumerate() {
                let states: Vec<&str> = m.indist(a)[c].iter().map(|&s| m.state_name(s)).collect();
                write!(f, " {{{}}}->{}", states.join(" "), m.action_name(a, *act))?;
            }
        }
        Ok(())
    }
}

/// The profiles of a coalition, as a mixed-radix index space over the
/// `(member, class)` slots. Slots outside `relevant` are pinned to their
/// first action.
#[derive(Clone, Debug)]
pub struct StrategySpace {
    members: Vec<AgentId>,
    choices: Vec<Vec<Vec<ActionId>>>,
    /// `(member index, class)` slots that vary, least significant first.
    slots: Vec<(usize, usize)>,
    count: Option<u64>,
}

impl StrategySpace {
    pub fn new(m: &Icgs, members: &[AgentId]) -> Self {
        Self::restricted(m, members, |_, _| true)
    }

    /// Only classes for which `relevant(agent, class)` holds vary.
    pub fn restricted(m: &Icgs, members: &[AgentId], relevant: impl Fn(AgentId, usize) -> bool) -> Self {
        let choices: Vec<Vec<Vec<ActionId>>> = members
            .iter()
            .map(|&a| (0..m.num_classes(a)).map(|c| class_actions(m, a, c)).collect())
            .collect();
        let mut slots = Vec::new();
        let mut count: Option<u64> = Some(1);
        for (i, &a) in members.iter().enumerate() {
            for (c, acts) in choices[i].iter().enumerate() {
                if relevant(a, c) {
                    slots.push((i, c));
                    count = count.and_then(|n| n.checked_mul(acts.len() as u64));
                }
            }
        }
        StrategySpace { members: members.to_vec(), choices, slots, count }
    }

    /// Number of profiles; `None` on overflow.
    pub fn count(&self) -> Option<u64> {
        self.count
    }

    pub fn profile(&self, mut index: u64) -> StrategyProfile {
        let mut actions: Vec<Vec<ActionId>> = self
            .choices
            .iter()
            .map(|per_class| per_class.iter().map(|acts| acts[0]).collect())
            .collect();
        for &(i, c) in &self.slots {
            let acts = &self.choices[i][c];
            let radix = acts.len() as u64;
            actions[i][c] = acts[(index % radix) as usize];
            index /= radix;
        }
        StrategyProfile { members: self.members.clone(), actions }
    }

    pub fn iter(&self) -> impl Iterator<Item = StrategyProfile> + '_ {
        (0..self.count.unwrap_or(u64::MAX)).map(|i| self.profile(i))
    }
}

/// Enumerates every uniform memoryless profile of `coalition`, each once,
/// in mixed-radix order (first member's first class varies fastest).
pub fn uniform_strategies(m: &Icgs, coalition: &Coalition) -> Result<StrategySpace> {
    Ok(StrategySpace::new(m, &coalition_members(m, coalition)?))
}

/// Successor lists of the structure restricted to a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedGraph {
    pub succ: Vec<Vec<StateId>>,
}

impl PrunedGraph {
    pub fn num_states(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s.index()]
    }

    /// Every state has at least one successor.
    pub fn is_total(&self) -> bool {
        self.succ.iter().all(|s| !s.is_empty())
    }
}

/// Keeps the joint actions that agree with `sigma` on its members.
pub fn prune(m: &Icgs, sigma: &StrategyProfile) -> PrunedGraph {
    let succ = m
        .states()
        .map(|s| {
            let fixed: Vec<(AgentId, ActionId)> = sigma
                .members
                .iter()
                .map(|&a| (a, sigma.action(m, a, s).expect("every state is in a class")))
                .collect();
            let mut out: Vec<StateId> = m
                .transitions(s)
                .filter(|(joint, _)| fixed.iter().all(|&(a, act)| joint[a.index()] == act))
                .map(|(_, t)| t)
                .collect();
            out.sort();
            out.dedup();
            out
        })
        .collect();
    PrunedGraph { succ }
}
