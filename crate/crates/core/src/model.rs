//! Explicit imperfect-information concurrent game structures.
//!
//! Names are sorted lexicographically when a model is built, so identifiers
//! are dense indices whose order matches name order. All iteration over
//! agents, actions, states and classes follows that order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

id_type!(AgentId);
id_type!(
    /// Index into the owning agent's action list.
    ActionId
);
id_type!(StateId);
id_type!(PropId);

/// One action per agent, indexed by agent order.
pub type JointAction = Vec<ActionId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Icgs {
    agents: Vec<String>,
    actions: Vec<Vec<String>>,
    states: Vec<String>,
    props: Vec<String>,
    initial: Vec<StateId>,
    /// `[state][agent]`, sorted.
    protocol: Vec<Vec<Vec<ActionId>>>,
    transitions: Vec<BTreeMap<JointAction, StateId>>,
    /// Per agent, the blocks of its indistinguishability partition.
    indist: Vec<Vec<Vec<StateId>>>,
    labels: Vec<Vec<PropId>>,
    undeclared_labels: Vec<(StateId, String)>,
    class_of: Vec<Vec<Option<usize>>>,
}

impl Icgs {
    pub fn builder() -> IcgsBuilder {
        IcgsBuilder::default()
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn agents(&self) -> impl ExactSizeIterator<Item = AgentId> + '_ {
        (0..self.agents.len()).map(AgentId)
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn agent_name(&self, a: AgentId) -> &str {
        &self.agents[a.0]
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_id(&self, name: &str) -> Option<AgentId> {
        self.agents.binary_search_by(|n| n.as_str().cmp(name)).ok().map(AgentId)
    }

    pub fn actions(&self, a: AgentId) -> &[String] {
        &self.actions[a.0]
    }

    pub fn action_name(&self, a: AgentId, act: ActionId) -> &str {
        &self.actions[a.0][act.0]
    }

    pub fn action_id(&self, a: AgentId, name: &str) -> Option<ActionId> {
        self.actions[a.0]
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(ActionId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.binary_search_by(|n| n.as_str().cmp(name)).ok().map(StateId)
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn prop_id(&self, name: &str) -> Option<PropId> {
        self.props.binary_search_by(|n| n.as_str().cmp(name)).ok().map(PropId)
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn protocol(&self, s: StateId, a: AgentId) -> &[ActionId] {
        &self.protocol[s.0][a.0]
    }

    /// Whether every protocol entry allows every action of its agent.
    pub fn has_full_protocol(&self) -> bool {
        self.states().all(|s| {
            self.agents()
                .all(|a| self.protocol(s, a).len() == self.actions(a).len())
        })
    }

    /// Stored transitions out of `s`, in joint-action order.
    pub fn transitions(&self, s: StateId) -> impl Iterator<Item = (&JointAction, StateId)> {
        self.transitions[s.0].iter().map(|(j, t)| (j, *t))
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(BTreeMap::len).sum()
    }

    pub fn labels(&self, s: StateId) -> &[PropId] {
        &self.labels[s.0]
    }

    pub fn has_label(&self, s: StateId, p: PropId) -> bool {
        self.labels[s.0].binary_search(&p).is_ok()
    }

    /// Blocks of the indistinguishability partition of `a`, each sorted,
    /// ordered by their least member.
    pub fn indist(&self, a: AgentId) -> &[Vec<StateId>] {
        &self.indist[a.0]
    }

    pub fn num_classes(&self, a: AgentId) -> usize {
        self.indist[a.0].len()
    }

    /// Index of the first block of `a` containing `s`.
    pub fn class_index(&self, a: AgentId, s: StateId) -> Option<usize> {
        self.class_of[a.0][s.0]
    }

    /// The class `[s]_a`.
    pub fn equivalence_class(&self, a: AgentId, s: StateId) -> Result<&[StateId]> {
        self.check_agent(a)?;
        self.check_state(s)?;
        let c = self.class_of[a.0][s.0].ok_or_else(|| {
            Error::Input(format!(
                "state `{}` is in no class of agent `{}`",
                self.state_name(s),
                self.agent_name(a)
            ))
        })?;
        Ok(&self.indist[a.0][c])
    }

    /// Joint actions allowed by the protocol at `s`, in lexicographic order.
    pub fn joint_actions(&self, s: StateId) -> Vec<JointAction> {
        let mut out = vec![Vec::with_capacity(self.agents.len())];
        for a in self.agents() {
            let allowed = self.protocol(s, a);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    allowed.iter().map(move |&act| {
                        let mut j = prefix.clone();
                        j.push(act);
                        j
                    })
                })
                .collect();
        }
        out
    }

    /// `τ(s, joint)`.
    pub fn successor(&self, s: StateId, joint: &[ActionId]) -> Result<StateId> {
        self.check_state(s)?;
        if joint.len() != self.agents.len() {
            return Err(Error::Input(format!(
                "joint action has {} components, model has {} agents",
                joint.len(),
                self.agents.len()
            )));
        }
        for (a, &act) in self.agents().zip(joint) {
            if !self.protocol(s, a).contains(&act) {
                let action = self
                    .actions[a.0]
                    .get(act.0)
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", act.0));
                return Err(Error::Protocol {
                    state: self.state_name(s).to_owned(),
                    agent: self.agent_name(a).to_owned(),
                    action,
                });
            }
        }
        self.transitions[s.0].get(joint).copied().ok_or_else(|| {
            Error::Input(format!(
                "no transition from `{}` under ({})",
                self.state_name(s),
                self.joint_name(joint)
            ))
        })
    }

    pub fn joint_name(&self, joint: &[ActionId]) -> String {
        joint
            .iter()
            .enumerate()
            .map(|(a, act)| self.actions[a][act.0].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Copy of the model with every partition replaced by the identity.
    pub fn with_identity_indist(&self) -> Icgs {
        let mut m = self.clone();
        for a in 0..m.agents.len() {
            m.indist[a] = m.states().map(|s| vec![s]).collect();
        }
        m.reindex_classes();
        m
    }

    /// Copy of the model with the partition of `a` replaced by `blocks`.
    pub fn with_indist(&self, a: AgentId, blocks: Vec<Vec<StateId>>) -> Icgs {
        let mut m = self.clone();
        m.indist[a.0] = normalize_blocks(blocks);
        m.reindex_classes();
        m
    }

    /// States reachable from the initial states.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for s in &stack {
            seen[s.0] = true;
        }
        while let Some(s) = stack.pop() {
            for (_, t) in self.transitions(s) {
                if !seen[t.0] {
                    seen[t.0] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    pub fn validate(&self) -> ValidationReport {
        validate_icgs(self)
    }

    fn check_agent(&self, a: AgentId) -> Result<()> {
        if a.0 < self.agents.len() {
            Ok(())
        } else {
            Err(Error::Unknown { kind: "agent", name: format!("#{}", a.0) })
        }
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if s.0 < self.states.len() {
            Ok(())
        } else {
            Err(Error::Unknown { kind: "state", name: format!("#{}", s.0) })
        }
    }

    fn reindex_classes(&mut self) {
        self.class_of = self
            .indist
            .iter()
            .map(|blocks| {
                let mut of = vec![None; self.states.len()];
                for (c, block) in blocks.iter().enumerate() {
                    for s in block {
                        if of[s.0].is_none() {
                            of[s.0] = Some(c);
                        }
                    }
                }
                of
            })
            .collect();
    }
}

fn normalize_blocks(blocks: Vec<Vec<StateId>>) -> Vec<Vec<StateId>> {
    let mut blocks: Vec<Vec<StateId>> = blocks
        .into_iter()
        .map(|mut b| {
            b.sort();
            b.dedup();
            b
        })
        .filter(|b| !b.is_empty())
        .collect();
    blocks.sort();
    blocks
}

/// Name-based construction of an [`Icgs`].
///
/// Joint actions passed to [`IcgsBuilder::transition`] list one action per
/// agent in agent-name order.
#[derive(Clone, Debug, Default)]
pub struct IcgsBuilder {
    agents: Vec<(String, Vec<String>)>,
    states: Vec<String>,
    props: Option<Vec<String>>,
    initial: Vec<String>,
    labels: Vec<(String, String)>,
    protocol: Vec<(String, String, Vec<String>)>,
    transitions: Vec<(String, Vec<String>, String)>,
    blocks: Vec<(String, Vec<String>)>,
    pairs: Vec<(String, String, String)>,
}

impl IcgsBuilder {
    pub fn agent<I, S>(&mut self, name: &str, actions: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.agents
            .push((name.to_owned(), actions.into_iter().map(Into::into).collect()));
        self
    }

    pub fn state(&mut self, name: &str) -> &mut Self {
        self.states.push(name.to_owned());
        self
    }

    pub fn states<I, S>(&mut self, names: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn declare_props<I, S>(&mut self, names: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.props
            .get_or_insert_with(Vec::new)
            .extend(names.into_iter().map(Into::into));
        self
    }

    pub fn initial(&mut self, state: &str) -> &mut Self {
        self.initial.push(state.to_owned());
        self
    }

    pub fn label(&mut self, state: &str, prop: &str) -> &mut Self {
        self.labels.push((state.to_owned(), prop.to_owned()));
        self
    }

    pub fn protocol<I, S>(&mut self, state: &str, agent: &str, actions: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.protocol.push((
            state.to_owned(),
            agent.to_owned(),
            actions.into_iter().map(Into::into).collect(),
        ));
        self
    }

    pub fn transition<I, S>(&mut self, from: &str, joint: I, to: &str) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.transitions.push((
            from.to_owned(),
            joint.into_iter().map(Into::into).collect(),
            to.to_owned(),
        ));
        self
    }

    /// Adds one block of the partition of `agent`; states left out of every
    /// block form singleton classes.
    pub fn indist_block<I, S>(&mut self, agent: &str, states: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.blocks
            .push((agent.to_owned(), states.into_iter().map(Into::into).collect()));
        self
    }

    /// Adds a pair `s ~ t`; partitions given by pairs are closed to an
    /// equivalence relation at build time.
    pub fn indist_pair(&mut self, agent: &str, s: &str, t: &str) -> &mut Self {
        self.pairs.push((agent.to_owned(), s.to_owned(), t.to_owned()));
        self
    }

    pub fn build(&self) -> Result<Icgs> {
        self.build_with_warnings().map(|(m, _)| m)
    }

    pub fn build_with_warnings(&self) -> Result<(Icgs, Vec<String>)> {
        let mut warnings = Vec::new();

        let mut agent_entries = self.agents.clone();
        agent_entries.sort_by(|a, b| a.0.cmp(&b.0));
        check_unique("agent", agent_entries.iter().map(|(n, _)| n))?;
        let agents: Vec<String> = agent_entries.iter().map(|(n, _)| n.clone()).collect();
        let mut actions = Vec::with_capacity(agents.len());
        for (name, acts) in &agent_entries {
            let mut acts = acts.clone();
            acts.sort();
            check_unique("action", acts.iter())?;
            if acts.is_empty() {
                return Err(Error::Input(format!("agent `{name}` has no actions")));
            }
            actions.push(acts);
        }
        let agent_index: HashMap<&str, usize> =
            agents.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

        let mut states = self.states.clone();
        states.sort();
        check_unique("state", states.iter())?;
        let state_index: HashMap<&str, usize> =
            states.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let sid = |name: &str| -> Result<StateId> {
            state_index
                .get(name)
                .map(|&i| StateId(i))
                .ok_or_else(|| Error::Unknown { kind: "state", name: name.to_owned() })
        };
        let aid = |name: &str| -> Result<usize> {
            agent_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Unknown { kind: "agent", name: name.to_owned() })
        };
        let act_id = |a: usize, name: &str| -> Result<ActionId> {
            actions[a]
                .binary_search_by(|n: &String| n.as_str().cmp(name))
                .map(ActionId)
                .map_err(|_| Error::Unknown {
                    kind: "action",
                    name: format!("{}.{}", agents[a], name),
                })
        };

        let (props, explicit_props) = match &self.props {
            Some(p) => {
                let mut p = p.clone();
                p.sort();
                p.dedup();
                (p, true)
            }
            None => {
                let set: BTreeSet<&String> = self.labels.iter().map(|(_, p)| p).collect();
                (set.into_iter().cloned().collect::<Vec<_>>(), false)
            }
        };
        let mut labels: Vec<BTreeSet<PropId>> = vec![BTreeSet::new(); states.len()];
        let mut undeclared_labels = Vec::new();
        for (s, p) in &self.labels {
            let s = sid(s)?;
            match props.binary_search(p) {
                Ok(i) => {
                    labels[s.0].insert(PropId(i));
                }
                Err(_) => {
                    debug_assert!(explicit_props);
                    undeclared_labels.push((s, p.clone()));
                }
            }
        }

        let mut initial = self
            .initial
            .iter()
            .map(|s| sid(s))
            .collect::<Result<Vec<_>>>()?;
        initial.sort();
        initial.dedup();

        let mut protocol: Vec<Vec<Vec<ActionId>>> = (0..states.len())
            .map(|_| {
                actions
                    .iter()
                    .map(|acts| (0..acts.len()).map(ActionId).collect())
                    .collect()
            })
            .collect();
        for (s, a, acts) in &self.protocol {
            let s = sid(s)?;
            let a = aid(a)?;
            let mut ids = acts
                .iter()
                .map(|n| act_id(a, n))
                .collect::<Result<Vec<_>>>()?;
            ids.sort();
            ids.dedup();
            protocol[s.0][a] = ids;
        }

        let mut transitions: Vec<BTreeMap<JointAction, StateId>> =
            vec![BTreeMap::new(); states.len()];
        for (from, joint, to) in &self.transitions {
            let s = sid(from)?;
            let t = sid(to)?;
            if joint.len() != agents.len() {
                return Err(Error::Input(format!(
                    "transition from `{from}` lists {} actions, model has {} agents",
                    joint.len(),
                    agents.len()
                )));
            }
            let j = joint
                .iter()
                .enumerate()
                .map(|(a, n)| act_id(a, n))
                .collect::<Result<JointAction>>()?;
            if let Some(prev) = transitions[s.0].insert(j, t) {
                if prev != t {
                    return Err(Error::Input(format!(
                        "conflicting transitions from `{from}` under ({})",
                        joint.join(",")
                    )));
                }
            }
        }

        for (ag, _) in &self.blocks {
            aid(ag)?;
        }
        for (ag, _, _) in &self.pairs {
            aid(ag)?;
        }
        let mut indist = Vec::with_capacity(agents.len());
        for name in &agents {
            let blocks: Vec<Vec<StateId>> = self
                .blocks
                .iter()
                .filter(|(ag, _)| ag == name)
                .map(|(_, ss)| ss.iter().map(|s| sid(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            let pairs: Vec<(StateId, StateId)> = self
                .pairs
                .iter()
                .filter(|(ag, _, _)| ag == name)
                .map(|(_, s, t)| Ok((sid(s)?, sid(t)?)))
                .collect::<Result<_>>()?;
            let partition = if !pairs.is_empty() {
                warnings.push(format!(
                    "indistinguishability of agent `{name}` given as pairs; closed to an equivalence relation"
                ));
                close_pairs(states.len(), &blocks, &pairs)
            } else if !blocks.is_empty() {
                let mut covered = vec![false; states.len()];
                for s in blocks.iter().flatten() {
                    covered[s.0] = true;
                }
                let mut blocks = blocks;
                blocks.extend((0..states.len()).filter(|&s| !covered[s]).map(|s| vec![StateId(s)]));
                normalize_blocks(blocks)
            } else {
                (0..states.len()).map(|s| vec![StateId(s)]).collect()
            };
            indist.push(partition);
        }

        let mut m = Icgs {
            agents,
            actions,
            states,
            props,
            initial,
            protocol,
            transitions,
            indist,
            labels: labels.into_iter().map(|l| l.into_iter().collect()).collect(),
            undeclared_labels,
            class_of: Vec::new(),
        };
        m.reindex_classes();
        Ok((m, warnings))
    }
}

fn check_unique<'a>(kind: &'static str, sorted: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut prev: Option<&String> = None;
    for n in sorted {
        if prev == Some(n) {
            return Err(Error::Duplicate { kind, name: n.clone() });
        }
        prev = Some(n);
    }
    Ok(())
}

fn close_pairs(n: usize, blocks: &[Vec<StateId>], pairs: &[(StateId, StateId)]) -> Vec<Vec<StateId>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut union = |x: usize, y: usize| {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    };
    for b in blocks {
        for w in b.windows(2) {
            union(w[0].0, w[1].0);
        }
    }
    for (s, t) in pairs {
        union(s.0, t.0);
    }
    let mut groups: BTreeMap<usize, Vec<StateId>> = BTreeMap::new();
    for s in 0..n {
        let r = find(&mut parent, s);
        groups.entry(r).or_default().push(StateId(s));
    }
    normalize_blocks(groups.into_values().collect())
}

/// A violated well-formedness condition, with names for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoInitialState,
    EmptyProtocol { state: String, agent: String },
    MissingTransition { state: String, joint: String },
    UnexpectedTransition { state: String, joint: String },
    StateNotInClass { agent: String, state: String },
    StateInSeveralClasses { agent: String, state: String, count: usize },
    ProtocolNotUniform { agent: String, state: String, other: String },
    UndeclaredLabel { state: String, atom: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoInitialState => write!(f, "no initial state"),
            Violation::EmptyProtocol { state, agent } => {
                write!(f, "protocol of `{agent}` at `{state}` is empty")
            }
            Violation::MissingTransition { state, joint } => {
                write!(f, "transition missing at `{state}` for allowed joint action ({joint})")
            }
            Violation::UnexpectedTransition { state, joint } => {
                write!(f, "transition at `{state}` defined for disallowed joint action ({joint})")
            }
            Violation::StateNotInClass { agent, state } => {
                write!(f, "state `{state}` is in no indistinguishability class of `{agent}`")
            }
            Violation::StateInSeveralClasses { agent, state, count } => {
                write!(f, "state `{state}` is in {count} classes of `{agent}`")
            }
            Violation::ProtocolNotUniform { agent, state, other } => write!(
                f,
                "protocol of `{agent}` differs between indistinguishable states `{other}` and `{state}`"
            ),
            Violation::UndeclaredLabel { state, atom } => {
                write!(f, "state `{state}` is labelled with undeclared atom `{atom}`")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_clean() {
            Ok(())
        } else {
            Err(Error::Input(format!("invalid model:\n{self}")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Lists every violated structural invariant of `m`.
pub fn validate_icgs(m: &Icgs) -> ValidationReport {
    let mut violations = Vec::new();
    if m.initial.is_empty() {
        violations.push(Violation::NoInitialState);
    }
    for s in m.states() {
        let mut empty = false;
        for a in m.agents() {
            if m.protocol(s, a).is_empty() {
                empty = true;
                violations.push(Violation::EmptyProtocol {
                    state: m.state_name(s).to_owned(),
                    agent: m.agent_name(a).to_owned(),
                });
            }
        }
        let allowed: BTreeSet<JointAction> = if empty {
            BTreeSet::new()
        } else {
            m.joint_actions(s).into_iter().collect()
        };
        for j in &allowed {
            if !m.transitions[s.0].contains_key(j) {
                violations.push(Violation::MissingTransition {
                    state: m.state_name(s).to_owned(),
                    joint: m.joint_name(j),
                });
            }
        }
        for j in m.transitions[s.0].keys() {
            if !allowed.contains(j) {
                violations.push(Violation::UnexpectedTransition {
                    state: m.state_name(s).to_owned(),
                    joint: m.joint_name(j),
                });
            }
        }
    }
    for a in m.agents() {
        let mut count = vec![0usize; m.num_states()];
        for block in m.indist(a) {
            for s in block {
                count[s.0] += 1;
            }
        }
        for s in m.states() {
            match count[s.0] {
                1 => {}
                0 => violations.push(Violation::StateNotInClass {
                    agent: m.agent_name(a).to_owned(),
                    state: m.state_name(s).to_owned(),
                }),
                n => violations.push(Violation::StateInSeveralClasses {
                    agent: m.agent_name(a).to_owned(),
                    state: m.state_name(s).to_owned(),
                    count: n,
                }),
            }
        }
        for block in m.indist(a) {
            let first = block[0];
            for &s in &block[1..] {
                if m.protocol(s, a) != m.protocol(first, a) {
                    violations.push(Violation::ProtocolNotUniform {
                        agent: m.agent_name(a).to_owned(),
                        state: m.state_name(s).to_owned(),
                        other: m.state_name(first).to_owned(),
                    });
                }
            }
        }
    }
    for (s, atom) in &m.undeclared_labels {
        violations.push(Violation::UndeclaredLabel {
            state: m.state_name(*s).to_owned(),
            atom: atom.clone(),
        });
    }
    ValidationReport { violations }
}
