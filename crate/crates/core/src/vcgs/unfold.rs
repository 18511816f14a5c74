use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use super::{GlobalState, Machine, ObservationKey, SKIP};
use crate::error::{Error, Result};
use crate::model::Icgs;

/// The explicit structure reachable from the initial states, with the
/// bookkeeping needed to map it back to the machine.
#[derive(Clone, Debug)]
pub struct Unfolded {
    /// State `i` of `model` is `states[i]` (names `g0`, `g1`, ... sort in
    /// breadth-first order).
    pub model: Icgs,
    pub states: Vec<GlobalState>,
    /// Per state: every joint command choice (machine agent order) and the
    /// index of its successor.
    pub edges: Vec<Vec<(Vec<Option<usize>>, usize)>>,
    pub stats: UnfoldStats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UnfoldStats {
    pub states: usize,
    pub edges: usize,
    pub initial: usize,
    /// Reachable states per valuation of the `turn.*` atoms, e.g.
    /// `"turn.a=0 turn.env=1"`.
    pub phases: BTreeMap<String, usize>,
    /// Agents whose observation partition had to be split so that their
    /// enabled commands are uniform on each class.
    pub refined: Vec<String>,
}

impl Machine {
    /// Breadth-first exploration into an explicit structure.
    ///
    /// Fails with [`Error::BoundExceeded`] once more than `bound` states
    /// are reachable.
    pub fn unfold(&self, bound: usize) -> Result<Unfolded> {
        let initial = self.initial_states()?;
        if initial.len() > bound {
            return Err(Error::BoundExceeded { bound });
        }
        let mut states: Vec<GlobalState> = initial.clone();
        let mut index: HashMap<GlobalState, usize> =
            states.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let mut edges: Vec<Vec<(Vec<Option<usize>>, usize)>> = Vec::new();
        let mut queue: VecDeque<usize> = (0..states.len()).collect();
        while let Some(i) = queue.pop_front() {
            let mut out = Vec::new();
            for (choice, next) in self.successors(&states[i]) {
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= bound {
                            return Err(Error::BoundExceeded { bound });
                        }
                        let j = states.len();
                        index.insert(next.clone(), j);
                        states.push(next);
                        queue.push_back(j);
                        j
                    }
                };
                out.push((choice, j));
            }
            if edges.len() <= i {
                edges.resize(i + 1, Vec::new());
            }
            edges[i] = out;
        }
        edges.resize(states.len(), Vec::new());

        let width = states.len().saturating_sub(1).to_string().len();
        let name = |i: usize| format!("g{i:0width$}");
        let mut order: Vec<usize> = (0..self.num_agents()).collect();
        order.sort_by(|&a, &b| self.agents()[a].cmp(&self.agents()[b]));

        let mut b = Icgs::builder();
        for (a, agent) in self.agents().iter().enumerate() {
            let mut acts: Vec<&str> = self.update_names(a).collect();
            acts.push(SKIP);
            b.agent(agent, acts);
        }
        b.states((0..states.len()).map(name));
        for i in 0..initial.len() {
            b.initial(&name(i));
        }
        b.declare_props(self.props());
        let label = |c: &Option<usize>, a: usize| c.map_or(SKIP, |c| self.command_name(a, c));
        let mut enabled: Vec<Vec<Vec<&str>>> = Vec::with_capacity(states.len());
        for (i, g) in states.iter().enumerate() {
            for p in self.labels(g) {
                b.label(&name(i), p);
            }
            let per_agent: Vec<Vec<&str>> = (0..self.num_agents())
                .map(|a| {
                    let e = self.enabled_names(g, a);
                    if e.is_empty() {
                        vec![SKIP]
                    } else {
                        e
                    }
                })
                .collect();
            for (a, acts) in per_agent.iter().enumerate() {
                b.protocol(&name(i), &self.agents()[a], acts.iter().copied());
            }
            enabled.push(per_agent);
            for (choice, j) in &edges[i] {
                let joint: Vec<&str> = order.iter().map(|&a| label(&choice[a], a)).collect();
                b.transition(&name(i), joint, &name(*j));
            }
        }

        let mut refined = Vec::new();
        for (a, agent) in self.agents().iter().enumerate() {
            let mut blocks: BTreeMap<&ObservationKey, Vec<usize>> = BTreeMap::new();
            let keys: Vec<ObservationKey> = states.iter().map(|g| self.observation(g, a)).collect();
            for (i, k) in keys.iter().enumerate() {
                blocks.entry(k).or_default().push(i);
            }
            let mut split = false;
            for block in blocks.values() {
                let mut by_protocol: BTreeMap<&Vec<&str>, Vec<usize>> = BTreeMap::new();
                for &i in block {
                    by_protocol.entry(&enabled[i][a]).or_default().push(i);
                }
                split |= by_protocol.len() > 1;
                for sub in by_protocol.values() {
                    b.indist_block(agent, sub.iter().map(|&i| name(i)));
                }
            }
            if split {
                refined.push(agent.clone());
            }
        }

        let model = b.build()?;
        let mut phases = BTreeMap::new();
        let turns: Vec<usize> = (0..self.atoms().len())
            .filter(|&i| self.atoms()[i].starts_with("turn."))
            .collect();
        for g in &states {
            let key = turns
                .iter()
                .map(|&t| format!("{}={}", self.atoms()[t], u8::from(self.value(g, t))))
                .collect::<Vec<_>>()
                .join(" ");
            *phases.entry(key).or_insert(0) += 1;
        }
        let stats = UnfoldStats {
            states: states.len(),
            edges: edges.iter().map(Vec::len).sum(),
            initial: initial.len(),
            phases,
            refined,
        };
        Ok(Unfolded { model, states, edges, stats })
    }
}
