use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::{well_formedness, Assignment, CommandKind, Guard, GuardedCommand, Vcgs};
use crate::error::{Error, Result};

/// Cap on the number of simultaneously enabled init commands of one agent;
/// choosing among them is exponential.
const MAX_INIT_CHOICES: usize = 20;

#[derive(Clone, Debug)]
enum Expr {
    Const(bool),
    Atom(usize),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    fn eval(&self, valuation: &FixedBitSet) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Atom(i) => valuation.contains(*i),
            Expr::Not(e) => !e.eval(valuation),
            Expr::And(es) => es.iter().all(|e| e.eval(valuation)),
            Expr::Or(es) => es.iter().any(|e| e.eval(valuation)),
        }
    }
}

#[derive(Clone, Debug)]
struct Cmd {
    name: String,
    guard: Expr,
    guard_atoms: Vec<usize>,
    values: Vec<(usize, bool)>,
    /// `(atom, observer, value)`
    vis: Vec<(usize, usize, bool)>,
}

impl Cmd {
    fn conflicts(&self, other: &Cmd) -> bool {
        self.values.iter().any(|(a, _)| other.values.iter().any(|(b, _)| a == b))
            || self
                .vis
                .iter()
                .any(|(a, o, _)| other.vis.iter().any(|(b, p, _)| a == b && o == p))
    }
}

/// A total valuation plus the `atom × observer` visibility matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalState {
    valuation: FixedBitSet,
    visibility: FixedBitSet,
}

impl GlobalState {
    pub fn valuation(&self) -> &FixedBitSet {
        &self.valuation
    }

    pub fn visibility(&self) -> &FixedBitSet {
        &self.visibility
    }
}

/// What one agent sees: which atoms are visible and the values of those.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObservationKey {
    pub visible: FixedBitSet,
    pub values: FixedBitSet,
}

/// Indexed, executable form of a well-formed [`Vcgs`].
#[derive(Clone, Debug)]
pub struct Machine {
    agents: Vec<String>,
    env: Option<usize>,
    atoms: Vec<String>,
    atom_index: HashMap<String, usize>,
    owner: Vec<usize>,
    props: Vec<usize>,
    init: Vec<Vec<Cmd>>,
    update: Vec<Vec<Cmd>>,
}

impl Machine {
    pub fn new(v: &Vcgs) -> Result<Machine> {
        let report = well_formedness(v);
        if !report.is_clean() {
            return Err(Error::IllFormed(report.errors.join("; ")));
        }
        Machine::new_unchecked(v)
    }

    /// Resolves names without the full well-formedness pass.
    pub(crate) fn new_unchecked(v: &Vcgs) -> Result<Machine> {
        let agents: Vec<String> = v.agents.iter().map(|a| a.name.clone()).collect();
        let agent_index: HashMap<&str, usize> =
            agents.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let env = v.agents.iter().position(|a| a.environment);

        let mut atoms = Vec::new();
        let mut owner = Vec::new();
        for (i, spec) in v.agents.iter().enumerate() {
            for a in &spec.atoms {
                atoms.push(a.clone());
                owner.push(i);
            }
        }
        let mut props = Vec::new();
        for p in &v.props {
            props.push(atoms.len());
            atoms.push(p.clone());
            owner.push(env.unwrap_or(usize::MAX));
        }
        let atom_index: HashMap<String, usize> =
            atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();

        let resolve_atom = |name: &str| {
            atom_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Unknown { kind: "atom", name: name.to_owned() })
        };
        let resolve_guard = |g: &Guard| -> Result<Expr> {
            fn go(g: &Guard, r: &dyn Fn(&str) -> Result<usize>) -> Result<Expr> {
                Ok(match g {
                    Guard::Const(b) => Expr::Const(*b),
                    Guard::Atom(a) => Expr::Atom(r(a)?),
                    Guard::Not(x) => Expr::Not(Box::new(go(x, r)?)),
                    Guard::And(xs) => Expr::And(xs.iter().map(|x| go(x, r)).collect::<Result<_>>()?),
                    Guard::Or(xs) => Expr::Or(xs.iter().map(|x| go(x, r)).collect::<Result<_>>()?),
                })
            }
            go(g, &resolve_atom)
        };
        let resolve_cmd = |c: &GuardedCommand| -> Result<Cmd> {
            let mut values = Vec::new();
            let mut vis = Vec::new();
            for asg in &c.assignments {
                match asg {
                    Assignment::Value { atom, value } => values.push((resolve_atom(atom)?, *value)),
                    Assignment::Visibility { atom, observer, value } => {
                        let o = *agent_index.get(observer.as_str()).ok_or_else(|| Error::Unknown {
                            kind: "agent",
                            name: observer.clone(),
                        })?;
                        vis.push((resolve_atom(atom)?, o, *value));
                    }
                }
            }
            let guard_atoms =
                c.guard.atoms().into_iter().map(resolve_atom).collect::<Result<Vec<_>>>()?;
            Ok(Cmd { name: c.name.clone(), guard: resolve_guard(&c.guard)?, guard_atoms, values, vis })
        };

        let mut init = Vec::new();
        let mut update = Vec::new();
        for spec in &v.agents {
            let of = |k: CommandKind| -> Result<Vec<Cmd>> {
                spec.commands.iter().filter(|c| c.kind == k).map(resolve_cmd).collect()
            };
            init.push(of(CommandKind::Init)?);
            update.push(of(CommandKind::Update)?);
        }
        Ok(Machine { agents, env, atoms, atom_index, owner, props, init, update })
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn environment(&self) -> Option<usize> {
        self.env
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_id(&self, name: &str) -> Option<usize> {
        self.atom_index.get(name).copied()
    }

    pub fn owner(&self, atom: usize) -> usize {
        self.owner[atom]
    }

    pub fn props(&self) -> impl Iterator<Item = &str> + '_ {
        self.props.iter().map(|&i| self.atoms[i].as_str())
    }

    pub fn update_names(&self, agent: usize) -> impl Iterator<Item = &str> + '_ {
        self.update[agent].iter().map(|c| c.name.as_str())
    }

    pub fn command_name(&self, agent: usize, command: usize) -> &str {
        &self.update[agent][command].name
    }

    fn vis_bit(&self, atom: usize, observer: usize) -> usize {
        atom * self.agents.len() + observer
    }

    pub fn value(&self, g: &GlobalState, atom: usize) -> bool {
        g.valuation.contains(atom)
    }

    pub fn visible(&self, g: &GlobalState, atom: usize, observer: usize) -> bool {
        g.visibility.contains(self.vis_bit(atom, observer))
    }

    /// All-false valuation; each atom visible to its owner only.
    pub fn blank_state(&self) -> GlobalState {
        let mut visibility = FixedBitSet::with_capacity(self.atoms.len() * self.agents.len());
        for (atom, &o) in self.owner.iter().enumerate() {
            if o < self.agents.len() {
                visibility.insert(self.vis_bit(atom, o));
            }
        }
        GlobalState { valuation: FixedBitSet::with_capacity(self.atoms.len()), visibility }
    }

    fn apply<'a>(&self, g: &mut GlobalState, cmds: impl IntoIterator<Item = &'a Cmd>) {
        for c in cmds {
            for &(atom, value) in &c.values {
                g.valuation.set(atom, value);
            }
            for &(atom, observer, value) in &c.vis {
                g.visibility.set(self.vis_bit(atom, observer), value);
            }
        }
    }

    /// Maximal conflict-free sets of the given init commands of one agent.
    fn init_choices<'a>(&self, cmds: Vec<&'a Cmd>) -> Result<Vec<Vec<&'a Cmd>>> {
        if cmds.is_empty() {
            return Ok(vec![vec![]]);
        }
        if cmds.len() > MAX_INIT_CHOICES {
            return Err(Error::Resource(format!(
                "{} simultaneously enabled init commands (limit {MAX_INIT_CHOICES})",
                cmds.len()
            )));
        }
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        maximal_sets(&cmds, 0, &mut chosen, &mut out);
        Ok(out
            .into_iter()
            .map(|set| set.into_iter().map(|i| cmds[i]).collect())
            .collect())
    }

    /// Initial global states, sorted and deduplicated.
    ///
    /// From the blank state, the environment fires a maximal conflict-free
    /// set of its enabled init commands; then every other agent does the
    /// same with guards read after the environment's effects. Agents with
    /// no enabled init command skip.
    pub fn initial_states(&self) -> Result<Vec<GlobalState>> {
        let blank = self.blank_state();
        let env_choices = match self.env {
            Some(e) => self.init_choices(
                self.init[e].iter().filter(|c| c.guard.eval(&blank.valuation)).collect(),
            )?,
            None => vec![vec![]],
        };
        let mut out = BTreeSet::new();
        for env_cmds in env_choices {
            let mut g1 = blank.clone();
            self.apply(&mut g1, env_cmds);
            let mut partial: Vec<Vec<&Cmd>> = vec![vec![]];
            for a in 0..self.agents.len() {
                if Some(a) == self.env {
                    continue;
                }
                let options = self.init_choices(
                    self.init[a].iter().filter(|c| c.guard.eval(&g1.valuation)).collect(),
                )?;
                partial = partial
                    .iter()
                    .flat_map(|p| {
                        options.iter().map(move |o| p.iter().chain(o.iter()).copied().collect())
                    })
                    .collect();
            }
            for cmds in partial {
                let mut g = g1.clone();
                self.apply(&mut g, cmds);
                out.insert(g);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Indices of the update commands of `agent` enabled at `g`.
    pub fn enabled(&self, g: &GlobalState, agent: usize) -> Vec<usize> {
        self.update[agent]
            .iter()
            .enumerate()
            .filter(|(_, c)| c.guard.eval(&g.valuation))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn enabled_names(&self, g: &GlobalState, agent: usize) -> Vec<&str> {
        self.enabled(g, agent).into_iter().map(|i| self.command_name(agent, i)).collect()
    }

    /// Fires one command (or skip, `None`) per agent simultaneously.
    ///
    /// Skip is legal only for agents with no enabled command.
    pub fn step(&self, g: &GlobalState, choice: &[Option<usize>]) -> Result<GlobalState> {
        if choice.len() != self.agents.len() {
            return Err(Error::Contract(format!(
                "choice has {} entries for {} agents",
                choice.len(),
                self.agents.len()
            )));
        }
        let mut fired = Vec::new();
        for (a, c) in choice.iter().enumerate() {
            let enabled = self.enabled(g, a);
            match c {
                Some(c) if enabled.contains(c) => fired.push(&self.update[a][*c]),
                Some(c) => {
                    let name = self.update[a].get(*c).map_or("?", |x| x.name.as_str());
                    return Err(Error::Contract(format!(
                        "command `{name}` of `{}` is not enabled",
                        self.agents[a]
                    )));
                }
                None if enabled.is_empty() => {}
                None => {
                    return Err(Error::Contract(format!(
                        "`{}` skips although a command is enabled",
                        self.agents[a]
                    )))
                }
            }
        }
        let mut next = g.clone();
        self.apply(&mut next, fired);
        Ok(next)
    }

    /// Every legal joint choice at `g` with its successor, in
    /// lexicographic order of the choice vector.
    pub fn successors(&self, g: &GlobalState) -> Vec<(Vec<Option<usize>>, GlobalState)> {
        let options: Vec<Vec<Option<usize>>> = (0..self.agents.len())
            .map(|a| {
                let e = self.enabled(g, a);
                if e.is_empty() {
                    vec![None]
                } else {
                    e.into_iter().map(Some).collect()
                }
            })
            .collect();
        let mut choices: Vec<Vec<Option<usize>>> = vec![vec![]];
        for opts in &options {
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |o| {
                        let mut c = c.clone();
                        c.push(*o);
                        c
                    })
                })
                .collect();
        }
        choices
            .into_iter()
            .map(|c| {
                let next = self.step(g, &c).expect("choices are built from enabled commands");
                (c, next)
            })
            .collect()
    }

    /// Atoms (value or visibility) assigned by the commands in `choice`.
    pub fn assigned_atoms(&self, choice: &[Option<usize>]) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (a, c) in choice.iter().enumerate() {
            if let Some(c) = c {
                let cmd = &self.update[a][*c];
                out.extend(cmd.values.iter().map(|(v, _)| *v));
                out.extend(cmd.vis.iter().map(|(v, _, _)| *v));
            }
        }
        out
    }

    pub fn observation(&self, g: &GlobalState, agent: usize) -> ObservationKey {
        let mut visible = FixedBitSet::with_capacity(self.atoms.len());
        for atom in 0..self.atoms.len() {
            if self.owner[atom] == agent || self.visible(g, atom, agent) {
                visible.insert(atom);
            }
        }
        let mut values = g.valuation.clone();
        values.intersect_with(&visible);
        ObservationKey { visible, values }
    }

    /// Proposition atoms true at `g`.
    pub fn labels(&self, g: &GlobalState) -> Vec<&str> {
        self.props
            .iter()
            .filter(|&&p| g.valuation.contains(p))
            .map(|&p| self.atoms[p].as_str())
            .collect()
    }

    /// Names of the atoms true at `g`, in declaration order.
    pub fn true_atoms(&self, g: &GlobalState) -> Vec<&str> {
        g.valuation.ones().map(|i| self.atoms[i].as_str()).collect()
    }

    /// Non-environment guards reading atoms the agent cannot observe in
    /// some initial state.
    pub(crate) fn observability_lint(&self) -> Vec<String> {
        let initial = self.initial_states().unwrap_or_default();
        let mut out = Vec::new();
        for a in 0..self.agents.len() {
            if Some(a) == self.env {
                continue;
            }
            let observable = |atom: usize| {
                self.owner[atom] == a
                    || (!initial.is_empty() && initial.iter().all(|g| self.visible(g, atom, a)))
            };
            for cmd in self.init[a].iter().chain(&self.update[a]) {
                for &atom in &cmd.guard_atoms {
                    if !observable(atom) {
                        out.push(format!(
                            "command `{}` of `{}` reads `{}`, which it cannot observe after init",
                            cmd.name, self.agents[a], self.atoms[atom]
                        ));
                    }
                }
            }
        }
        out
    }
}

fn maximal_sets(cmds: &[&Cmd], at: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if at == cmds.len() {
        let maximal = (0..cmds.len())
            .filter(|i| !chosen.contains(i))
            .all(|i| chosen.iter().any(|&j| cmds[i].conflicts(cmds[j])));
        if maximal {
            out.push(chosen.clone());
        }
        return;
    }
    if chosen.iter().all(|&j| !cmds[at].conflicts(cmds[j])) {
        chosen.push(at);
        maximal_sets(cmds, at + 1, chosen, out);
        chosen.pop();
    }
    maximal_sets(cmds, at + 1, chosen, out);
}
