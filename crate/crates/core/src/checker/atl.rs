//! Strategy search for the three ATL modalities.
//!
//! A profile is built lazily while exploring the outcome from the
//! evaluation state: a member's class is fixed the first time the
//! exploration reaches it, branching over the class's actions. Classes the
//! outcome never reaches stay unassigned, which keeps the search far
//! smaller than the full product of class choices.

use super::strategy::{class_actions, StrategyProfile};
use crate::model::{ActionId, AgentId, Icgs, JointAction, StateId};

#[derive(Clone, Copy, Debug)]
pub(crate) enum Goal<'a> {
    Next(&'a [bool]),
    Always(&'a [bool]),
    Until(&'a [bool], &'a [bool]),
}

type Assignment = Vec<Vec<Option<ActionId>>>;

#[derive(Clone)]
struct Frontier {
    assign: Assignment,
    visited: Vec<bool>,
    stack: Vec<StateId>,
}

pub(crate) struct Arena<'m> {
    m: &'m Icgs,
    members: Vec<AgentId>,
    allowed: Vec<Vec<Vec<ActionId>>>,
    moves: Vec<Vec<(JointAction, StateId)>>,
}

impl<'m> Arena<'m> {
    pub(crate) fn new(m: &'m Icgs, members: Vec<AgentId>) -> Self {
        let allowed = members
            .iter()
            .map(|&a| (0..m.num_classes(a)).map(|c| class_actions(m, a, c)).collect())
            .collect();
        let moves = m
            .states()
            .map(|s| m.transitions(s).map(|(j, t)| (j.clone(), t)).collect())
            .collect();
        Arena { m, members, allowed, moves }
    }

    fn class(&self, i: usize, s: StateId) -> usize {
        self.m.class_index(self.members[i], s).expect("every state is in a class")
    }

    fn unassigned(&self, assign: &Assignment, s: StateId) -> Option<(usize, usize)> {
        (0..self.members.len()).find_map(|i| {
            let c = self.class(i, s);
            assign[i][c].is_none().then_some((i, c))
        })
    }

    fn successors<'s>(&'s self, assign: &'s Assignment, s: StateId) -> impl Iterator<Item = StateId> + 's {
        self.moves[s.index()].iter().filter_map(move |(joint, t)| {
            let agrees = self.members.iter().enumerate().all(|(i, a)| {
                Some(joint[a.index()]) == assign[i][self.class(i, s)]
            });
            agrees.then_some(*t)
        })
    }

    /// A profile enforcing `goal` on every path from each of `starts`, if
    /// any. Classes the outcome never visits get their first action.
    pub(crate) fn solve(&self, starts: &[StateId], goal: Goal<'_>) -> Option<StrategyProfile> {
        let n = self.m.num_states();
        let mut visited = vec![false; n];
        for s in starts {
            visited[s.index()] = true;
        }
        let start = Frontier {
            assign: self.allowed.iter().map(|per| vec![None; per.len()]).collect(),
            visited,
            stack: starts.iter().rev().copied().collect(),
        };
        let assign = self.run(goal, start)?;
        let actions = assign
            .into_iter()
            .enumerate()
            .map(|(i, per)| {
                per.into_iter()
                    .enumerate()
                    .map(|(c, a)| a.unwrap_or(self.allowed[i][c][0]))
                    .collect()
            })
            .collect();
        Some(StrategyProfile { members: self.members.clone(), actions })
    }

    fn run(&self, goal: Goal<'_>, mut f: Frontier) -> Option<Assignment> {
        while let Some(&u) = f.stack.last() {
            match goal {
                Goal::Always(phi) if !phi[u.index()] => return None,
                Goal::Until(_, psi) if psi[u.index()] => {
                    f.stack.pop();
                    continue;
                }
                Goal::Until(phi, _) if !phi[u.index()] => return None,
                _ => {}
            }
            if let Some((i, c)) = self.unassigned(&f.assign, u) {
                for &act in &self.allowed[i][c] {
                    let mut g = f.clone();
                    g.assign[i][c] = Some(act);
                    if let Some(found) = self.run(goal, g) {
                        return Some(found);
                    }
                }
                return None;
            }
            f.stack.pop();
            if let Goal::Next(phi) = goal {
                if !self.successors(&f.assign, u).all(|t| phi[t.index()]) {
                    return None;
                }
                continue;
            }
            let next: Vec<StateId> = self.successors(&f.assign, u).collect();
            for t in next {
                if !f.visited[t.index()] {
                    f.visited[t.index()] = true;
                    f.stack.push(t);
                }
            }
        }
        if let Goal::Until(_, psi) = goal {
            if self.has_cycle(&f, psi) {
                return None;
            }
        }
        Some(f.assign)
    }

    /// A cycle through visited states outside `psi`, i.e. an infinite path
    /// that never reaches `psi`.
    fn has_cycle(&self, f: &Frontier, psi: &[bool]) -> bool {
        let inside = |s: StateId| f.visited[s.index()] && !psi[s.index()];
        // 0 unseen, 1 on the DFS path, 2 done
        let mut color = vec![0u8; self.m.num_states()];
        for root in self.m.states().filter(|&s| inside(s)) {
            if color[root.index()] != 0 {
                continue;
            }
            let mut stack: Vec<(StateId, Vec<StateId>)> = vec![(root, self.successors(&f.assign, root).collect())];
            color[root.index()] = 1;
            while let Some((u, rest)) = stack.last_mut() {
                match rest.pop() {
                    Some(t) if inside(t) => match color[t.index()] {
                        0 => {
                            color[t.index()] = 1;
                            let succ = self.successors(&f.assign, t).collect();
                            stack.push((t, succ));
                        }
                        1 => return true,
                        _ => {}
                    },
                    Some(_) => {}
                    None => {
                        color[u.index()] = 2;
                        stack.pop();
                    }
                }
            }
        }
        false
    }
}
