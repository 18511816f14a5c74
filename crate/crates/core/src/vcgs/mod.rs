//! Guarded-command game structures with visibility control.
//!
//! [`Vcgs`] is the name-level description (what the text format and the
//! reduction produce). [`Machine`] is its indexed, executable form; it is
//! only constructed from descriptions that pass [`well_formedness`].

mod machine;
mod unfold;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

pub use machine::{GlobalState, Machine, ObservationKey};
pub use unfold::{Unfolded, UnfoldStats};

/// Name of the implicit action of an agent with no enabled command.
pub const SKIP: &str = "skip";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CommandKind {
    Init,
    Update,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guard {
    Const(bool),
    Atom(String),
    Not(Box<Guard>),
    And(Vec<Guard>),
    Or(Vec<Guard>),
}

impl Guard {
    pub fn atom(name: impl Into<String>) -> Guard {
        Guard::Atom(name.into())
    }

    /// Conjunction, flattened; the empty conjunction is `T`.
    pub fn all(parts: impl IntoIterator<Item = Guard>) -> Guard {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Guard::Const(true) => {}
                Guard::And(inner) => flat.extend(inner),
                g => flat.push(g),
            }
        }
        match flat.len() {
            0 => Guard::Const(true),
            1 => flat.pop().unwrap(),
            _ => Guard::And(flat),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Guard {
        Guard::Not(Box::new(self))
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Guard::Const(_) => {}
            Guard::Atom(a) => {
                out.insert(a);
            }
            Guard::Not(g) => g.collect(out),
            Guard::And(gs) | Guard::Or(gs) => gs.iter().for_each(|g| g.collect(out)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Guard::Or(gs) if gs.len() > 1 => 1,
            Guard::And(gs) if gs.len() > 1 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, gs: &[Guard], op: &str, me: u8| -> fmt::Result {
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                if g.prec() <= me {
                    write!(f, "({g})")?;
                } else {
                    write!(f, "{g}")?;
                }
            }
            Ok(())
        };
        match self {
            Guard::Const(true) => write!(f, "T"),
            Guard::Const(false) => write!(f, "F"),
            Guard::Atom(a) => write!(f, "{a}"),
            Guard::Not(g) if g.prec() < 3 => write!(f, "!({g})"),
            Guard::Not(g) => write!(f, "!{g}"),
            Guard::And(gs) if gs.is_empty() => write!(f, "T"),
            Guard::Or(gs) if gs.is_empty() => write!(f, "F"),
            Guard::And(gs) => join(f, gs, "&", 2),
            Guard::Or(gs) => join(f, gs, "|", 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assignment {
    Value { atom: String, value: bool },
    Visibility { atom: String, observer: String, value: bool },
}

impl Assignment {
    pub fn value(atom: impl Into<String>, value: bool) -> Self {
        Assignment::Value { atom: atom.into(), value }
    }

    pub fn vis(atom: impl Into<String>, observer: impl Into<String>, value: bool) -> Self {
        Assignment::Visibility { atom: atom.into(), observer: observer.into(), value }
    }

    pub fn atom(&self) -> &str {
        match self {
            Assignment::Value { atom, .. } | Assignment::Visibility { atom, .. } => atom,
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |b: &bool| if *b { "T" } else { "F" };
        match self {
            Assignment::Value { atom, value } => write!(f, "{atom} := {}", c(value)),
            Assignment::Visibility { atom, observer, value } => {
                write!(f, "vis({atom}, {observer}) := {}", c(value))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardedCommand {
    pub name: String,
    pub kind: CommandKind,
    pub guard: Guard,
    pub assignments: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentSpec {
    pub name: String,
    /// The environment owns the proposition atoms and fires its init
    /// commands before everyone else.
    pub environment: bool,
    pub atoms: Vec<String>,
    pub commands: Vec<GuardedCommand>,
}

impl AgentSpec {
    pub fn init_commands(&self) -> impl Iterator<Item = &GuardedCommand> {
        self.commands.iter().filter(|c| c.kind == CommandKind::Init)
    }

    pub fn update_commands(&self) -> impl Iterator<Item = &GuardedCommand> {
        self.commands.iter().filter(|c| c.kind == CommandKind::Update)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vcgs {
    /// Proposition atoms, owned by the environment; these label the states
    /// of the unfolded structure.
    pub props: Vec<String>,
    pub agents: Vec<AgentSpec>,
}

impl Vcgs {
    pub fn agent(&self, name: &str) -> Option<&AgentSpec> {
        self.agents.iter().find(|a| a.name == name)
    }

    pub fn environment(&self) -> Option<&AgentSpec> {
        self.agents.iter().find(|a| a.environment)
    }

    /// Owner of each declared atom; proposition atoms map to the environment.
    pub fn owners(&self) -> HashMap<&str, &str> {
        let mut out = HashMap::new();
        for spec in &self.agents {
            for a in &spec.atoms {
                out.entry(a.as_str()).or_insert(spec.name.as_str());
            }
        }
        if let Some(env) = self.environment() {
            for p in &self.props {
                out.entry(p.as_str()).or_insert(env.name.as_str());
            }
        }
        out
    }

    pub fn num_atoms(&self) -> usize {
        self.agents.iter().map(|a| a.atoms.len()).sum::<usize>() + self.props.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WellFormedness {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl WellFormedness {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for WellFormedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Structural checks (errors) plus the guard-observability lint (warnings).
pub fn well_formedness(v: &Vcgs) -> WellFormedness {
    let mut report = WellFormedness::default();
    let errors = &mut report.errors;

    let mut names = HashSet::new();
    for spec in &v.agents {
        if !names.insert(spec.name.as_str()) {
            errors.push(format!("agent `{}` declared twice", spec.name));
        }
    }
    let envs = v.agents.iter().filter(|a| a.environment).count();
    if envs > 1 {
        errors.push(format!("{envs} environment agents declared"));
    }
    if envs == 0 && !v.props.is_empty() {
        errors.push("proposition atoms declared without an environment to own them".into());
    }

    let mut declared: HashMap<&str, usize> = HashMap::new();
    for spec in &v.agents {
        for a in &spec.atoms {
            *declared.entry(a.as_str()).or_default() += 1;
        }
    }
    for p in &v.props {
        *declared.entry(p.as_str()).or_default() += 1;
    }
    let mut multiply: Vec<&str> = declared.iter().filter(|(_, &n)| n > 1).map(|(a, _)| *a).collect();
    multiply.sort();
    for a in multiply {
        errors.push(format!("atom `{a}` is declared by more than one owner"));
    }
    let owners = v.owners();

    for spec in &v.agents {
        let mut cmd_names = HashSet::new();
        for cmd in &spec.commands {
            let at = format!("command `{}` of `{}`", cmd.name, spec.name);
            if !cmd_names.insert(cmd.name.as_str()) {
                errors.push(format!("{at} is declared twice"));
            }
            if cmd.name == SKIP {
                errors.push(format!("{at}: `{SKIP}` is reserved"));
            }
            for atom in cmd.guard.atoms() {
                if !owners.contains_key(atom) {
                    errors.push(format!("{at}: guard reads undeclared atom `{atom}`"));
                }
            }
            let mut values = HashSet::new();
            let mut vis = HashSet::new();
            for asg in &cmd.assignments {
                let atom = asg.atom();
                match owners.get(atom) {
                    None => errors.push(format!("{at}: assigns undeclared atom `{atom}`")),
                    Some(&owner) if owner != spec.name => errors.push(format!(
                        "{at}: assigns `{atom}` owned by `{owner}`"
                    )),
                    _ => {}
                }
                match asg {
                    Assignment::Value { .. } => {
                        if !values.insert(atom) {
                            errors.push(format!("{at}: assigns `{atom}` twice"));
                        }
                    }
                    Assignment::Visibility { observer, value, .. } => {
                        if !names.contains(observer.as_str()) {
                            errors.push(format!("{at}: unknown observer `{observer}`"));
                        }
                        if observer == &spec.name && !value {
                            errors.push(format!("{at}: hides `{atom}` from its own owner"));
                        }
                        if !vis.insert((atom, observer.as_str())) {
                            errors.push(format!("{at}: assigns vis({atom}, {observer}) twice"));
                        }
                    }
                }
            }
        }
    }

    if report.errors.is_empty() {
        if let Ok(machine) = Machine::new_unchecked(v) {
            report.warnings = machine.observability_lint();
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Vcgs {
        Vcgs {
            props: vec!["p".into()],
            agents: vec![
                AgentSpec {
                    name: "a".into(),
                    environment: false,
                    atoms: vec!["x".into()],
                    commands: vec![GuardedCommand {
                        name: "flip".into(),
                        kind: CommandKind::Update,
                        guard: Guard::atom("x").not(),
                        assignments: vec![Assignment::value("x", true)],
                    }],
                },
                AgentSpec {
                    name: "env".into(),
                    environment: true,
                    atoms: vec!["y".into()],
                    commands: vec![],
                },
            ],
        }
    }

    #[test]
    fn clean_description() {
        let r = well_formedness(&tiny());
        assert!(r.is_clean(), "{r}");
        assert!(r.warnings.is_empty(), "{r}");
    }

    #[test]
    fn foreign_assignment_is_an_ownership_error() {
        let mut v = tiny();
        v.agents[0].commands[0].assignments.push(Assignment::value("y", true));
        let r = well_formedness(&v);
        assert_eq!(r.errors, vec!["command `flip` of `a`: assigns `y` owned by `env`"]);
    }

    #[test]
    fn double_assignment_and_undeclared_atoms() {
        let mut v = tiny();
        let cmd = &mut v.agents[0].commands[0];
        cmd.assignments.push(Assignment::value("x", false));
        cmd.guard = Guard::atom("zz");
        let r = well_formedness(&v);
        assert!(r.errors.iter().any(|e| e.contains("assigns `x` twice")));
        assert!(r.errors.iter().any(|e| e.contains("undeclared atom `zz`")));
    }

    #[test]
    fn guard_over_private_atom_warns() {
        let mut v = tiny();
        v.agents[0].commands[0].guard = Guard::atom("y");
        let r = well_formedness(&v);
        assert!(r.is_clean());
        assert_eq!(r.warnings.len(), 1, "{r}");
        assert!(r.warnings[0].contains("`y`"));
    }

    #[test]
    fn guard_display() {
        let g = Guard::all([
            Guard::atom("a"),
            Guard::Or(vec![Guard::atom("b"), Guard::atom("c").not()]),
        ]);
        assert_eq!(g.to_string(), "a & (b | !c)");
        assert_eq!(Guard::all([]).to_string(), "T");
        assert_eq!(Guard::And(vec![Guard::atom("a"), Guard::atom("b")]).not().to_string(), "!(a & b)");
    }
}
