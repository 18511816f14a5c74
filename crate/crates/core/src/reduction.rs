//! Compiler from an [`Icgs`] to the guarded-command structure Δ_M.
//!
//! Atom names: `act.<agent>.<action>` and `turn.<agent>` for each model
//! agent; `st.<state>`, `cls.<agent>.<rep>` (one per class, `rep` its least
//! state) and `turn.env` for the environment; proposition atoms keep their
//! names. The environment agent is called `env`.
//!
//! Command names: agents have `init.<rep>`, `do.<action>.<rep>` and `fwd`;
//! the environment has `vis`, `start.<state>`, `fwd` and
//! `tr.<state>.<action>...` (one action per agent, agents in name order).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActionId, AgentId, Icgs, JointAction, StateId};
use crate::vcgs::{AgentSpec, Assignment, CommandKind, Guard, GuardedCommand, Vcgs};

pub const ENV: &str = "env";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelMode {
    /// Transition commands assert π(s) of the source state.
    #[default]
    LabelSource,
    /// Transition commands assert π(t) of the target state.
    LabelTarget,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialLabelMode {
    /// Proposition atoms start false.
    #[default]
    None,
    /// State-choice init commands also assert π(s0).
    LabelInitial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolMode {
    /// One action command per action and class.
    #[default]
    Full,
    /// Only actions allowed by the protocol on the class.
    Restrict,
}

macro_rules! kebab_enum {
    ($t:ty { $($v:ident = $s:literal),* }) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$v => $s),* })
            }
        }
        impl std::str::FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => Err(Error::Input(format!(
                        "unknown {} `{s}` (expected one of: {})",
                        stringify!($t),
                        [$($s),*].join(", ")
                    ))),
                }
            }
        }
    };
}

kebab_enum!(LabelMode { LabelSource = "label-source", LabelTarget = "label-target" });
kebab_enum!(InitialLabelMode { None = "none", LabelInitial = "label-initial" });
kebab_enum!(ProtocolMode { Full = "full", Restrict = "restrict" });

/// The three reading choices left open by the construction. The default is
/// the literal reading: source labels, no initial labels, full protocol.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionConfig {
    pub label_mode: LabelMode,
    pub initial_label_mode: InitialLabelMode,
    pub protocol_mode: ProtocolMode,
}

impl ReductionConfig {
    /// The 2×2 label configurations explored by calibration, full protocol.
    pub fn calibration_grid() -> Vec<ReductionConfig> {
        let mut out = Vec::new();
        for label_mode in [LabelMode::LabelSource, LabelMode::LabelTarget] {
            for initial_label_mode in [InitialLabelMode::None, InitialLabelMode::LabelInitial] {
                out.push(ReductionConfig { label_mode, initial_label_mode, protocol_mode: ProtocolMode::Full });
            }
        }
        out
    }
}

impl fmt::Display for ReductionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.label_mode, self.initial_label_mode, self.protocol_mode)
    }
}

/// Atom names of Δ_M, indexed by the ids of the source model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomUniverse {
    /// `action[a][k]`
    pub action: Vec<Vec<String>>,
    pub turn: Vec<String>,
    pub state: Vec<String>,
    /// `class[a][c]`, `c` indexing `m.indist(a)`
    pub class: Vec<Vec<String>>,
    pub turn_env: String,
}

impl AtomUniverse {
    /// V_a, in emission order.
    pub fn agent_atoms(&self, a: AgentId) -> Vec<String> {
        let mut v = self.action[a.index()].clone();
        v.push(self.turn[a.index()].clone());
        v
    }

    /// V_e without the proposition atoms, in emission order.
    pub fn env_atoms(&self) -> Vec<String> {
        let mut v = self.state.clone();
        v.extend(self.class.iter().flatten().cloned());
        v.push(self.turn_env.clone());
        v
    }
}

pub fn build_atom_universe(m: &Icgs) -> Result<AtomUniverse> {
    if m.agent_id(ENV).is_some() {
        return Err(Error::Compile(format!("agent name `{ENV}` is reserved for the environment")));
    }
    let action = m
        .agents()
        .map(|a| m.actions(a).iter().map(|k| format!("act.{}.{k}", m.agent_name(a))).collect())
        .collect();
    let turn = m.agents().map(|a| format!("turn.{}", m.agent_name(a))).collect();
    let state = m.states().map(|s| format!("st.{}", m.state_name(s))).collect();
    let class = m
        .agents()
        .map(|a| {
            m.indist(a)
                .iter()
                .map(|block| format!("cls.{}.{}", m.agent_name(a), m.state_name(block[0])))
                .collect()
        })
        .collect();
    let u = AtomUniverse { action, turn, state, class, turn_env: format!("turn.{ENV}") };

    let mut seen: HashSet<&str> = HashSet::new();
    let generated = u.action.iter().flatten().chain(&u.turn).chain(&u.state).chain(u.class.iter().flatten());
    for atom in generated.chain(std::iter::once(&u.turn_env)).chain(m.props()) {
        if !seen.insert(atom) {
            return Err(Error::Compile(format!("atom name `{atom}` is generated twice")));
        }
    }
    Ok(u)
}

fn class_of(m: &Icgs, a: AgentId, s: StateId) -> usize {
    m.class_index(a, s).expect("validated model")
}

fn rep(m: &Icgs, a: AgentId, c: usize) -> &str {
    m.state_name(m.indist(a)[c][0])
}

/// Init commands. Agents start with their turn off and their atoms hidden
/// from everyone else; the environment grants each agent its class atoms
/// and picks an initial state.
///
/// Returns the init commands per model agent (agent-id order) and those of
/// the environment.
pub fn build_init_commands(
    m: &Icgs,
    u: &AtomUniverse,
    cfg: &ReductionConfig,
) -> Result<(Vec<Vec<GuardedCommand>>, Vec<GuardedCommand>)> {
    if m.initial().is_empty() {
        return Err(Error::Compile("the model has no initial state".into()));
    }
    let mut agents = Vec::new();
    for a in m.agents() {
        let classes: BTreeSet<usize> = m.initial().iter().map(|&s| class_of(m, a, s)).collect();
        let mut cmds = Vec::new();
        for c in classes {
            let mut assignments = vec![Assignment::value(&u.turn[a.index()], false)];
            for v in u.agent_atoms(a) {
                for b in m.agents().filter(|&b| b != a) {
                    assignments.push(Assignment::vis(&v, m.agent_name(b), false));
                }
            }
            cmds.push(GuardedCommand {
                name: format!("init.{}", rep(m, a, c)),
                kind: CommandKind::Init,
                guard: Guard::atom(&u.class[a.index()][c]),
                assignments,
            });
        }
        agents.push(cmds);
    }

    let mut env = Vec::new();
    let mut vis = Vec::new();
    for &s0 in m.initial() {
        for b in m.agents() {
            vis.push(Assignment::vis(&u.state[s0.index()], m.agent_name(b), false));
        }
    }
    for b in m.agents() {
        for class_atom in &u.class[b.index()] {
            vis.push(Assignment::vis(class_atom, m.agent_name(b), true));
        }
    }
    env.push(GuardedCommand {
        name: "vis".into(),
        kind: CommandKind::Init,
        guard: Guard::Const(true),
        assignments: vis,
    });
    for &s0 in m.initial() {
        let mut assignments = locate(m, u, s0);
        if cfg.initial_label_mode == InitialLabelMode::LabelInitial {
            assignments.extend(label_block(m, s0));
        }
        env.push(GuardedCommand {
            name: format!("start.{}", m.state_name(s0)),
            kind: CommandKind::Init,
            guard: Guard::Const(true),
            assignments,
        });
    }
    Ok((agents, env))
}

/// `st.t := T`, class atoms of `t` true, every other state and class atom
/// false.
fn locate(m: &Icgs, u: &AtomUniverse, t: StateId) -> Vec<Assignment> {
    let mut out = vec![Assignment::value(&u.state[t.index()], true)];
    for b in m.agents() {
        out.push(Assignment::value(&u.class[b.index()][class_of(m, b, t)], true));
    }
    for s in m.states().filter(|&s| s != t) {
        out.push(Assignment::value(&u.state[s.index()], false));
    }
    for b in m.agents() {
        let ct = class_of(m, b, t);
        for c in (0..m.num_classes(b)).filter(|&c| c != ct) {
            out.push(Assignment::value(&u.class[b.index()][c], false));
        }
    }
    out
}

fn label_block(m: &Icgs, s: StateId) -> Vec<Assignment> {
    m.props()
        .iter()
        .enumerate()
        .map(|(p, name)| Assignment::value(name, m.has_label(s, crate::model::PropId(p))))
        .collect()
}

/// Decision commands `do.<act>.<class>` and the turn-forwarding command for agent `a`.
pub fn build_agent_update_commands(
    m: &Icgs,
    u: &AtomUniverse,
    a: AgentId,
    cfg: &ReductionConfig,
) -> Vec<GuardedCommand> {
    let turn = &u.turn[a.index()];
    let mut cmds = Vec::new();
    for (c, block) in m.indist(a).iter().enumerate() {
        let allowed: Vec<ActionId> = match cfg.protocol_mode {
            ProtocolMode::Full => (0..m.actions(a).len()).map(ActionId).collect(),
            ProtocolMode::Restrict => m.protocol(block[0], a).to_vec(),
        };
        for i in allowed {
            let mut assignments = vec![Assignment::value(&u.action[a.index()][i.index()], true)];
            for (j, atom) in u.action[a.index()].iter().enumerate() {
                if j != i.index() {
                    assignments.push(Assignment::value(atom, false));
                }
            }
            assignments.push(Assignment::value(turn, false));
            cmds.push(GuardedCommand {
                name: format!("do.{}.{}", m.action_name(a, i), rep(m, a, c)),
                kind: CommandKind::Update,
                guard: Guard::all([Guard::atom(turn), Guard::atom(&u.class[a.index()][c])]),
                assignments,
            });
        }
    }
    cmds.push(GuardedCommand {
        name: "fwd".into(),
        kind: CommandKind::Update,
        guard: Guard::atom(turn).not(),
        assignments: vec![Assignment::value(turn, true)],
    });
    cmds
}

/// One environment transition command `tr.<state>.<joint>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvTransition {
    pub command: String,
    pub source: StateId,
    pub joint: JointAction,
    pub target: StateId,
}

/// The environment's forwarding command and one transition command per
/// defined τ(s, joint).
pub fn build_env_update_commands(
    m: &Icgs,
    u: &AtomUniverse,
    cfg: &ReductionConfig,
) -> (Vec<GuardedCommand>, Vec<EnvTransition>) {
    let mut cmds = vec![GuardedCommand {
        name: "fwd".into(),
        kind: CommandKind::Update,
        guard: Guard::atom(&u.turn_env).not(),
        assignments: vec![Assignment::value(&u.turn_env, true)],
    }];
    let mut table = Vec::new();
    for s in m.states() {
        for (joint, t) in m.transitions(s) {
            let mut name = format!("tr.{}", m.state_name(s));
            let mut guard = vec![Guard::atom(&u.turn_env), Guard::atom(&u.state[s.index()])];
            for (a, act) in joint.iter().enumerate() {
                name.push('.');
                name.push_str(m.action_name(AgentId(a), *act));
                guard.push(Guard::atom(&u.action[a][act.index()]));
            }
            let mut assignments = vec![Assignment::value(&u.turn_env, false)];
            let mut located = locate(m, u, t);
            let rest = located.split_off(1 + m.num_agents());
            assignments.extend(located);
            let labelled = match cfg.label_mode {
                LabelMode::LabelSource => s,
                LabelMode::LabelTarget => t,
            };
            assignments.extend(label_block(m, labelled));
            assignments.extend(rest);
            table.push(EnvTransition { command: name.clone(), source: s, joint: joint.clone(), target: t });
            cmds.push(GuardedCommand {
                name,
                kind: CommandKind::Update,
                guard: Guard::all(guard),
                assignments,
            });
        }
    }
    (cmds, table)
}

/// Δ_M together with the maps back to the source model.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub vcgs: Vcgs,
    pub atoms: AtomUniverse,
    pub transitions: Vec<EnvTransition>,
    pub config: ReductionConfig,
}

impl Reduction {
    /// The transition simulated by environment command `name`, if any.
    pub fn transition(&self, name: &str) -> Option<&EnvTransition> {
        self.transitions.iter().find(|t| t.command == name)
    }
}

pub fn reduce(m: &Icgs, cfg: &ReductionConfig) -> Result<Reduction> {
    let report = m.validate();
    if !report.is_clean() {
        return Err(Error::Compile(format!("model is not well formed:\n{report}")));
    }
    let u = build_atom_universe(m)?;
    let (agent_init, env_init) = build_init_commands(m, &u, cfg)?;
    let mut specs = Vec::new();
    for (a, init) in m.agents().zip(agent_init) {
        let mut commands = init;
        commands.extend(build_agent_update_commands(m, &u, a, cfg));
        specs.push(AgentSpec {
            name: m.agent_name(a).to_owned(),
            environment: false,
            atoms: u.agent_atoms(a),
            commands,
        });
    }
    let (env_update, transitions) = build_env_update_commands(m, &u, cfg);
    let mut commands = env_init;
    commands.extend(env_update);
    specs.push(AgentSpec { name: ENV.into(), environment: true, atoms: u.env_atoms(), commands });

    for spec in &specs {
        let mut names = HashSet::new();
        for c in &spec.commands {
            if !names.insert(&c.name) {
                return Err(Error::Compile(format!(
                    "command name `{}` of `{}` is generated twice",
                    c.name, spec.name
                )));
            }
        }
    }
    let vcgs = Vcgs { props: m.props().to_vec(), agents: specs };
    Ok(Reduction { vcgs, atoms: u, transitions, config: *cfg })
}

pub fn compile(m: &Icgs, cfg: &ReductionConfig) -> Result<Vcgs> {
    reduce(m, cfg).map(|r| r.vcgs)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OwnerSize {
    pub atoms: usize,
    pub init: usize,
    pub update: usize,
}

/// Atom and command counts per owner. Proposition atoms are counted
/// separately from the environment's own atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub owners: BTreeMap<String, OwnerSize>,
    pub props: usize,
}

impl SizeReport {
    /// Total atoms, proposition atoms excluded.
    pub fn atoms(&self) -> usize {
        self.owners.values().map(|o| o.atoms).sum()
    }

    pub fn commands(&self) -> usize {
        self.owners.values().map(|o| o.init + o.update).sum()
    }
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>6} {:>6} {:>6}", "owner", "atoms", "init", "update")?;
        for (name, o) in &self.owners {
            writeln!(f, "{name:<12} {:>6} {:>6} {:>6}", o.atoms, o.init, o.update)?;
        }
        writeln!(f, "{} atoms, {} proposition atoms, {} commands", self.atoms(), self.props, self.commands())
    }
}

pub fn size_report(v: &Vcgs) -> SizeReport {
    let owners = v
        .agents
        .iter()
        .map(|spec| {
            let size = OwnerSize {
                atoms: spec.atoms.len(),
                init: spec.init_commands().count(),
                update: spec.update_commands().count(),
            };
            (spec.name.clone(), size)
        })
        .collect();
    SizeReport { owners, props: v.props.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vcgs::{well_formedness, Machine};

    /// One agent, actions L/R, two states the agent cannot tell apart.
    fn toggle() -> Icgs {
        let mut b = Icgs::builder();
        b.agent("1", ["L", "R"])
            .states(["s0", "s1"])
            .initial("s0")
            .label("s1", "p")
            .transition("s0", ["L"], "s1")
            .transition("s0", ["R"], "s0")
            .transition("s1", ["L"], "s0")
            .transition("s1", ["R"], "s1")
            .indist_block("1", ["s0", "s1"]);
        b.build().unwrap()
    }

    #[test]
    fn atom_universe_of_toggle() {
        let u = build_atom_universe(&toggle()).unwrap();
        assert_eq!(u.agent_atoms(AgentId(0)), ["act.1.L", "act.1.R", "turn.1"]);
        assert_eq!(u.env_atoms(), ["st.s0", "st.s1", "cls.1.s0", "turn.env"]);
    }

    #[test]
    fn reserved_agent_name() {
        let mut b = Icgs::builder();
        b.agent("env", ["a"]).state("s").initial("s").transition("s", ["a"], "s");
        assert!(matches!(compile(&b.build().unwrap(), &Default::default()), Err(Error::Compile(_))));
    }

    #[test]
    fn agent_init_body() {
        let m = toggle();
        let u = build_atom_universe(&m).unwrap();
        let (agents, env) = build_init_commands(&m, &u, &Default::default()).unwrap();
        assert_eq!(agents[0].len(), 1);
        let c = &agents[0][0];
        assert_eq!(c.guard, Guard::atom("cls.1.s0"));
        // a single agent has nobody to hide from
        assert_eq!(c.assignments, vec![Assignment::value("turn.1", false)]);
        assert_eq!(env.len(), 2);
    }

    #[test]
    fn invis_expands_over_other_agents() {
        let mut b = Icgs::builder();
        b.agent("a", ["L"])
            .agent("b", ["x"])
            .state("s")
            .initial("s")
            .transition("s", ["L", "x"], "s");
        let m = b.build().unwrap();
        let u = build_atom_universe(&m).unwrap();
        let (agents, _) = build_init_commands(&m, &u, &Default::default()).unwrap();
        assert_eq!(
            agents[0][0].assignments,
            vec![
                Assignment::value("turn.a", false),
                Assignment::vis("act.a.L", "b", false),
                Assignment::vis("turn.a", "b", false),
            ]
        );
    }

    #[test]
    fn decision_and_transition_bodies() {
        let m = toggle();
        let u = build_atom_universe(&m).unwrap();
        let cmds = build_agent_update_commands(&m, &u, AgentId(0), &Default::default());
        assert_eq!(cmds.len(), 3);
        assert_eq!(cmds[0].name, "do.L.s0");
        assert_eq!(cmds[0].guard.to_string(), "turn.1 & cls.1.s0");
        assert_eq!(
            cmds[0].assignments,
            vec![
                Assignment::value("act.1.L", true),
                Assignment::value("act.1.R", false),
                Assignment::value("turn.1", false),
            ]
        );

        let (env, table) = build_env_update_commands(&m, &u, &Default::default());
        assert_eq!(env.len(), 5);
        let c = env.iter().find(|c| c.name == "tr.s1.L").unwrap();
        assert_eq!(c.guard.to_string(), "turn.env & st.s1 & act.1.L");
        assert_eq!(
            c.assignments,
            vec![
                Assignment::value("turn.env", false),
                Assignment::value("st.s0", true),
                Assignment::value("cls.1.s0", true),
                Assignment::value("p", true),
                Assignment::value("st.s1", false),
            ]
        );
        assert_eq!(table.len(), 4);
    }

    #[test]
    fn label_target_changes_only_label_block() {
        let m = toggle();
        let src = compile(&m, &Default::default()).unwrap();
        let cfg = ReductionConfig { label_mode: LabelMode::LabelTarget, ..Default::default() };
        let tgt = compile(&m, &cfg).unwrap();
        let env = |v: &Vcgs| v.environment().unwrap().commands.clone();
        for (a, b) in env(&src).iter().zip(env(&tgt)) {
            assert_eq!(a.guard, b.guard);
            let non_label = |c: &GuardedCommand| -> Vec<Assignment> {
                c.assignments.iter().filter(|x| x.atom() != "p").cloned().collect()
            };
            assert_eq!(non_label(a), non_label(&b));
        }
        assert_ne!(src, tgt);
    }

    #[test]
    fn compiled_output_is_well_formed_and_deterministic() {
        let m = toggle();
        let v = compile(&m, &Default::default()).unwrap();
        let r = well_formedness(&v);
        assert!(r.is_clean() && r.warnings.is_empty(), "{r}");
        assert_eq!(v, compile(&m, &Default::default()).unwrap());
        let s = size_report(&v);
        assert_eq!(s.atoms(), 7);
        assert_eq!(s.owners["1"], OwnerSize { atoms: 3, init: 1, update: 3 });
        assert_eq!(s.owners[ENV], OwnerSize { atoms: 4, init: 2, update: 5 });
    }

    #[test]
    fn initial_state_of_toggle() {
        let v = compile(&toggle(), &Default::default()).unwrap();
        let m = Machine::new(&v).unwrap();
        let init = m.initial_states().unwrap();
        assert_eq!(init.len(), 1);
        assert_eq!(m.true_atoms(&init[0]), ["st.s0", "cls.1.s0"]);
        let a = 0;
        let cls = m.atom_id("cls.1.s0").unwrap();
        let st = m.atom_id("st.s0").unwrap();
        assert!(m.visible(&init[0], cls, a));
        assert!(!m.visible(&init[0], st, a));
        assert_eq!(m.enabled_names(&init[0], a), ["fwd"]);
    }

    #[test]
    fn restricted_protocol_mode() {
        let mut b = Icgs::builder();
        b.agent("a", ["L", "R"])
            .states(["s", "t"])
            .initial("s")
            .protocol("s", "a", ["L"])
            .transition("s", ["L"], "t")
            .transition("t", ["L"], "s")
            .transition("t", ["R"], "t");
        let m = b.build().unwrap();
        let cfg = ReductionConfig { protocol_mode: ProtocolMode::Restrict, ..Default::default() };
        let s = size_report(&compile(&m, &cfg).unwrap());
        assert_eq!(s.owners["a"].update, 1 + 2 + 1);
        assert_eq!(s.owners[ENV].update, 3 + 1);
        let s = size_report(&compile(&m, &Default::default()).unwrap());
        assert_eq!(s.owners["a"].update, 2 + 2 + 1);
    }
}
