//! Seeded random models and formulas.
//!
//! Every instance is drawn from its own ChaCha8 stream selected by
//! `(seed, index)`, so any record of a batch can be regenerated alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{Coalition, Dialect, Formula};
use crate::model::Icgs;

pub const MAX_STATES: usize = 64;
pub const MAX_AGENTS: usize = 4;
pub const MAX_ACTIONS: usize = 4;

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub states: usize,
    pub agents: usize,
    /// Actions per agent.
    pub actions: usize,
    /// Indistinguishability classes per agent, capped by `states`.
    pub classes: usize,
    pub initial: usize,
    pub props: Vec<String>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { states: 3, agents: 2, actions: 2, classes: 2, initial: 1, props: vec!["p".into(), "q".into()] }
    }
}

impl GenParams {
    pub fn check(&self) -> Result<()> {
        let bad = |what: &str, v: usize, lo: usize, hi: usize| {
            Err(Error::Input(format!("{what} must be in {lo}..={hi}, got {v}")))
        };
        if !(1..=MAX_STATES).contains(&self.states) {
            return bad("states", self.states, 1, MAX_STATES);
        }
        if !(1..=MAX_AGENTS).contains(&self.agents) {
            return bad("agents", self.agents, 1, MAX_AGENTS);
        }
        if !(1..=MAX_ACTIONS).contains(&self.actions) {
            return bad("actions", self.actions, 1, MAX_ACTIONS);
        }
        if self.classes == 0 {
            return bad("classes", 0, 1, MAX_STATES);
        }
        if !(1..=self.states).contains(&self.initial) {
            return bad("initial", self.initial, 1, self.states);
        }
        Ok(())
    }

    pub fn agent_names(&self) -> Vec<String> {
        (0..self.agents).map(|i| format!("a{i}")).collect()
    }
}

/// A random model: total transition table, full protocol, random
/// partitions with `min(classes, states)` blocks per agent and random labels.
/// States `s0..` with the first `initial` initial; actions `x0..`.
pub fn random_icgs(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Icgs> {
    p.check()?;
    let states: Vec<String> = (0..p.states).map(|i| format!("s{i}")).collect();
    let agents = p.agent_names();
    let actions: Vec<String> = (0..p.actions).map(|i| format!("x{i}")).collect();
    let mut b = Icgs::builder();
    for a in &agents {
        b.agent(a, actions.iter().cloned());
    }
    b.states(states.iter().cloned()).declare_props(p.props.iter().cloned());
    for s in &states[..p.initial] {
        b.initial(s);
    }
    for s in &states {
        for prop in &p.props {
            if rng.random_bool(0.5) {
                b.label(s, prop);
            }
        }
    }
    for a in &agents {
        for block in random_partition(p.states, p.classes, rng) {
            b.indist_block(a, block.into_iter().map(|i| states[i].clone()));
        }
    }
    let joints = p.actions.pow(p.agents as u32);
    for s in &states {
        for j in 0..joints {
            let joint: Vec<&str> = (0..p.agents)
                .map(|a| actions[j / p.actions.pow(a as u32) % p.actions].as_str())
                .collect();
            b.transition(s, joint, &states[rng.random_range(0..p.states)]);
        }
    }
    b.build()
}

pub fn gen_icgs(p: &GenParams, seed: u64) -> Result<Icgs> {
    random_icgs(p, &mut instance_rng(seed, 0))
}

/// A partition of `0..n` into exactly `min(blocks, n)` nonempty blocks.
pub fn random_partition(n: usize, blocks: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let k = blocks.min(n).max(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut out = vec![Vec::new(); k];
    for (i, &s) in order.iter().enumerate() {
        let b = if i < k { i } else { rng.random_range(0..k) };
        out[b].push(s);
    }
    for b in &mut out {
        b.sort();
    }
    out.sort();
    out
}

fn random_coalition(agents: &[String], rng: &mut ChaCha8Rng) -> Coalition {
    Coalition::new(agents.iter().filter(|_| rng.random_bool(0.5)).cloned())
}

fn literal(props: &[String], rng: &mut ChaCha8Rng) -> Formula {
    match rng.random_range(0..8) {
        0 => Formula::True,
        1 => Formula::False,
        2 | 3 => Formula::atom(&props[rng.random_range(0..props.len())]).not(),
        _ => Formula::atom(&props[rng.random_range(0..props.len())]),
    }
}

/// A random ATL state formula of temporal depth at most `depth`.
pub fn random_atl(agents: &[String], props: &[String], depth: usize, rng: &mut ChaCha8Rng) -> Formula {
    if depth == 0 || rng.random_range(0..6) == 0 {
        return literal(props, rng);
    }
    match rng.random_range(0..6) {
        0 => random_atl(agents, props, depth, rng).not(),
        1 => random_atl(agents, props, depth - 1, rng).and(random_atl(agents, props, depth, rng)),
        2 => random_atl(agents, props, depth - 1, rng).or(random_atl(agents, props, depth, rng)),
        k => {
            let c = random_coalition(agents, rng);
            let body = match k {
                3 => random_atl(agents, props, depth - 1, rng).next(),
                4 => random_atl(agents, props, depth - 1, rng).always(),
                _ => random_atl(agents, props, depth - 1, rng).until(random_atl(agents, props, depth - 1, rng)),
            };
            Formula::coalition(c, body)
        }
    }
}

/// A random ATL* state formula; coalition bodies are path formulas with at
/// most `temporal` temporal operators each, and coalitions nest at most
/// `depth` deep.
pub fn random_atl_star(
    agents: &[String],
    props: &[String],
    depth: usize,
    temporal: usize,
    rng: &mut ChaCha8Rng,
) -> Formula {
    if depth == 0 || rng.random_range(0..5) == 0 {
        return literal(props, rng);
    }
    match rng.random_range(0..5) {
        0 => random_atl_star(agents, props, depth, temporal, rng).not(),
        1 => random_atl_star(agents, props, depth - 1, temporal, rng)
            .and(random_atl_star(agents, props, depth, temporal, rng)),
        _ => {
            let c = random_coalition(agents, rng);
            let mut budget = temporal.max(1);
            let body = random_path(agents, props, depth - 1, temporal, &mut budget, rng);
            Formula::coalition(c, body)
        }
    }
}

fn random_path(
    agents: &[String],
    props: &[String],
    depth: usize,
    temporal: usize,
    budget: &mut usize,
    rng: &mut ChaCha8Rng,
) -> Formula {
    if *budget == 0 {
        return random_atl_star(agents, props, depth, temporal, rng);
    }
    match rng.random_range(0..8) {
        0 => random_atl_star(agents, props, depth, temporal, rng),
        1 => {
            let l = random_path(agents, props, depth, temporal, budget, rng);
            l.and(random_path(agents, props, depth, temporal, budget, rng))
        }
        2 => {
            let l = random_path(agents, props, depth, temporal, budget, rng);
            l.or(random_path(agents, props, depth, temporal, budget, rng))
        }
        3 => random_path(agents, props, depth, temporal, budget, rng).not(),
        k => {
            *budget -= 1;
            match k {
                4 => random_path(agents, props, depth, temporal, budget, rng).next(),
                5 => random_path(agents, props, depth, temporal, budget, rng).always(),
                6 => random_path(agents, props, depth, temporal, budget, rng).eventually(),
                _ => {
                    let l = random_path(agents, props, depth, temporal, budget, rng);
                    l.until(random_path(agents, props, depth, temporal, budget, rng))
                }
            }
        }
    }
}

/// Formula families cycled through by the cross-validation harness so every
/// batch covers each modality and nested coalition-next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Next,
    Always,
    Until,
    NestedNext,
    NestedTemporal,
    Random,
}

impl Shape {
    pub const ALL: [Shape; 6] =
        [Shape::Next, Shape::Always, Shape::Until, Shape::NestedNext, Shape::NestedTemporal, Shape::Random];

    pub fn for_index(i: u64) -> Shape {
        Shape::ALL[(i % Shape::ALL.len() as u64) as usize]
    }
}

/// An ATL formula of temporal depth at most 2 of the given shape.
pub fn shaped_atl(shape: Shape, agents: &[String], props: &[String], rng: &mut ChaCha8Rng) -> Formula {
    let c = |rng: &mut ChaCha8Rng| random_coalition(agents, rng);
    let r = rng;
    let lit = |r: &mut ChaCha8Rng| literal(props, r);
    match shape {
        Shape::Next => {
            let a = c(r);
            Formula::coalition(a, lit(r).next())
        }
        Shape::Always => {
            let a = c(r);
            Formula::coalition(a, lit(r).always())
        }
        Shape::Until => {
            let a = c(r);
            let l = lit(r);
            Formula::coalition(a, l.until(lit(r)))
        }
        Shape::NestedNext => {
            let a = c(r);
            let inner = Formula::coalition(a.clone(), lit(r).next());
            Formula::coalition(a, inner.next())
        }
        Shape::NestedTemporal => {
            let (a, b) = (c(r), c(r));
            let inner = Formula::coalition(b, lit(r).next());
            if r.random_bool(0.5) {
                Formula::coalition(a, inner.always())
            } else {
                let l = lit(r);
                Formula::coalition(a, l.until(inner))
            }
        }
        Shape::Random => random_atl(agents, props, 2, r),
    }
}

/// A random formula of `dialect`; ATL* bodies carry at most two temporal
/// operators.
pub fn random_formula(dialect: Dialect, agents: &[String], props: &[String], depth: usize, rng: &mut ChaCha8Rng) -> Formula {
    match dialect {
        Dialect::Atl => random_atl(agents, props, depth, rng),
        Dialect::AtlStar => random_atl_star(agents, props, depth, 2, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::print_icgs;

    #[test]
    fn deterministic_per_seed_and_index() {
        let p = GenParams::default();
        let a = random_icgs(&p, &mut instance_rng(7, 3)).unwrap();
        let b = random_icgs(&p, &mut instance_rng(7, 3)).unwrap();
        let c = random_icgs(&p, &mut instance_rng(7, 4)).unwrap();
        assert_eq!(print_icgs(&a), print_icgs(&b));
        assert_ne!(print_icgs(&a), print_icgs(&c));
    }

    #[test]
    fn single_state_is_self_loop() {
        let p = GenParams { states: 1, ..GenParams::default() };
        let m = gen_icgs(&p, 1).unwrap();
        assert!(m.validate().is_clean());
        let s = m.states().next().unwrap();
        assert!(m.transitions(s).all(|(_, t)| t == s));
    }

    #[test]
    fn generated_models_validate() {
        for i in 0..50 {
            let mut rng = instance_rng(11, i);
            let p = GenParams {
                states: rng.random_range(1..=5),
                agents: rng.random_range(1..=2),
                actions: rng.random_range(1..=3),
                classes: rng.random_range(1..=3),
                ..GenParams::default()
            };
            let m = random_icgs(&p, &mut rng).unwrap();
            assert!(m.validate().is_clean(), "{}", print_icgs(&m));
            for a in m.agents() {
                assert_eq!(m.num_classes(a), p.classes.min(p.states));
            }
        }
    }

    #[test]
    fn caps_rejected() {
        let p = GenParams { states: 0, ..GenParams::default() };
        assert!(matches!(gen_icgs(&p, 0), Err(Error::Input(_))));
        let p = GenParams { agents: MAX_AGENTS + 1, ..GenParams::default() };
        assert!(gen_icgs(&p, 0).is_err());
    }

    #[test]
    fn formulas_stay_in_dialect() {
        let agents = vec!["a0".to_owned(), "a1".to_owned()];
        let props = vec!["p".to_owned(), "q".to_owned()];
        for i in 0..300 {
            let mut rng = instance_rng(5, i);
            let f = random_atl(&agents, &props, 2, &mut rng);
            assert!(f.check_dialect(Dialect::Atl).is_ok(), "{f}");
            assert!(f.temporal_depth() <= 2, "{f}");
            let g = random_atl_star(&agents, &props, 2, 2, &mut rng);
            assert!(g.check_dialect(Dialect::AtlStar).is_ok(), "{g}");
            let s = shaped_atl(Shape::for_index(i), &agents, &props, &mut rng);
            assert!(s.check_dialect(Dialect::Atl).is_ok(), "{s}");
            assert!(s.temporal_depth() <= 2, "{s}");
        }
    }
}
