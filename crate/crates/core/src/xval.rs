//! Cross-validation of the reduction against the checker.
//!
//! For a generated model `M` and ATL formula `φ`, the harness checks `M ⊨ φ`
//! and `Δ_M ⊨ duplicate_next(φ)`, where `Δ_M` is the unfolded compilation.
//! Disagreements can be written out as self-contained repro bundles and
//! replayed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::checker::{check_initial, CheckConfig, Semantics};
use crate::error::{Error, Result};
use crate::format::{parse_icgs, print_icgs, print_vcgs};
use crate::gen::{instance_rng, random_icgs, shaped_atl, GenParams, Shape};
use crate::logic::{duplicate_next, parse_formula, Dialect, Formula};
use crate::model::{ActionId, Icgs, JointAction, StateId};
use crate::par::{self, Exec};
use crate::reduction::{reduce, Reduction, ReductionConfig, ENV};
use crate::vcgs::{Machine, Unfolded};

pub const DEFAULT_BOUND: usize = 50_000;

/// Hex SHA-256 of the model's text form.
pub fn model_digest(m: &Icgs) -> String {
    Sha256::digest(print_icgs(m).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XValParams {
    pub seed: u64,
    pub count: usize,
    pub max_states: usize,
    pub max_agents: usize,
    pub max_actions: usize,
    pub config: ReductionConfig,
    pub semantics: Semantics,
    pub bound: usize,
}

impl Default for XValParams {
    fn default() -> Self {
        XValParams {
            seed: 0,
            count: 200,
            max_states: 4,
            max_agents: 2,
            max_actions: 2,
            config: ReductionConfig::default(),
            semantics: Semantics::default(),
            bound: DEFAULT_BOUND,
        }
    }
}

impl XValParams {
    fn check(&self) -> Result<()> {
        if self.max_states == 0 || self.max_states > 4 || self.max_agents == 0 || self.max_agents > 2 {
            return Err(Error::Input("cross-validation caps: 1..=4 states, 1..=2 agents".into()));
        }
        if self.max_actions == 0 || self.max_actions > 2 {
            return Err(Error::Input("cross-validation caps: 1..=2 actions".into()));
        }
        Ok(())
    }
}

/// The model and formula of instance `index` of a batch.
pub fn instance(p: &XValParams, index: u64) -> Result<(Icgs, Formula, Shape)> {
    let mut rng = instance_rng(p.seed, index);
    let states = rng.random_range(1..=p.max_states);
    let gp = GenParams {
        states,
        agents: rng.random_range(1..=p.max_agents),
        actions: rng.random_range(1..=p.max_actions),
        classes: rng.random_range(1..=states),
        ..GenParams::default()
    };
    let m = random_icgs(&gp, &mut rng)?;
    let shape = Shape::for_index(index);
    let f = shaped_atl(shape, &gp.agent_names(), &gp.props, &mut rng);
    Ok((m, f, shape))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XValRecord {
    pub index: u64,
    pub model_digest: String,
    pub shape: Shape,
    pub formula: String,
    pub transformed: String,
    pub verdict_model: Option<bool>,
    pub verdict_reduced: Option<bool>,
    pub agree: Option<bool>,
    pub reduced_states: Option<usize>,
    /// Set when the instance was skipped (resource bounds).
    pub skipped: Option<String>,
}

/// Verdicts on `M` and on `Δ_M` for one formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub verdict_model: bool,
    pub verdict_reduced: bool,
    pub transformed: Formula,
    pub reduced_states: usize,
}

impl Outcome {
    pub fn agree(&self) -> bool {
        self.verdict_model == self.verdict_reduced
    }
}

/// Compiles and unfolds `m`, with the bookkeeping the harness needs.
pub struct Pipeline {
    pub reduction: Reduction,
    pub machine: Machine,
    pub unfolded: Unfolded,
}

pub fn pipeline(m: &Icgs, cfg: &ReductionConfig, bound: usize) -> Result<Pipeline> {
    let reduction = reduce(m, cfg)?;
    let machine = Machine::new(&reduction.vcgs)?;
    let unfolded = machine.unfold(bound)?;
    Ok(Pipeline { reduction, machine, unfolded })
}

pub fn run_instance(
    m: &Icgs,
    f: &Formula,
    cfg: &ReductionConfig,
    semantics: Semantics,
    bound: usize,
) -> Result<Outcome> {
    let check_cfg = CheckConfig::new(Dialect::Atl).with_semantics(semantics).with_exec(Exec::Sequential);
    let verdict_model = check_initial(m, f, check_cfg)?;
    let p = pipeline(m, cfg, bound)?;
    let transformed = duplicate_next(f, Dialect::Atl);
    let verdict_reduced = check_initial(&p.unfolded.model, &transformed, check_cfg)?;
    Ok(Outcome { verdict_model, verdict_reduced, transformed, reduced_states: p.unfolded.model.num_states() })
}

fn record(p: &XValParams, index: u64) -> Result<XValRecord> {
    let (m, f, shape) = instance(p, index)?;
    let mut rec = XValRecord {
        index,
        model_digest: model_digest(&m),
        shape,
        formula: f.to_string(),
        transformed: duplicate_next(&f, Dialect::Atl).to_string(),
        verdict_model: None,
        verdict_reduced: None,
        agree: None,
        reduced_states: None,
        skipped: None,
    };
    match run_instance(&m, &f, &p.config, p.semantics, p.bound) {
        Ok(o) => {
            rec.verdict_model = Some(o.verdict_model);
            rec.verdict_reduced = Some(o.verdict_reduced);
            rec.agree = Some(o.agree());
            rec.reduced_states = Some(o.reduced_states);
        }
        Err(e) if e.is_resource() => rec.skipped = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(rec)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XValReport {
    pub seed: u64,
    pub count: usize,
    pub config: ReductionConfig,
    pub semantics: Semantics,
    pub agreed: usize,
    pub disagreed: usize,
    pub skipped: usize,
    /// Agreement over the checked instances; `None` when nothing was checked.
    pub rate: Option<f64>,
    pub records: Vec<XValRecord>,
}

impl XValReport {
    pub fn rate_display(&self) -> String {
        rate_display(self.rate)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &XValRecord> {
        self.records.iter().filter(|r| r.agree == Some(false))
    }

    /// Agreement over the checked records satisfying `pred`.
    pub fn rate_where(&self, pred: impl Fn(&XValRecord) -> bool) -> Option<f64> {
        let checked: Vec<&XValRecord> = self.records.iter().filter(|r| r.agree.is_some() && pred(r)).collect();
        if checked.is_empty() {
            return None;
        }
        Some(checked.iter().filter(|r| r.agree == Some(true)).count() as f64 / checked.len() as f64)
    }
}

pub fn rate_display(rate: Option<f64>) -> String {
    rate.map_or_else(|| "n/a".to_owned(), |r| format!("{r:.3}"))
}

impl fmt::Display for XValReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "config {} semantics {} seed {} count {}", self.config, self.semantics, self.seed, self.count)?;
        writeln!(
            f,
            "agreed {} disagreed {} skipped {} rate {}",
            self.agreed,
            self.disagreed,
            self.skipped,
            self.rate_display()
        )?;
        for r in self.disagreements() {
            writeln!(
                f,
                "  #{} {}: M={} Δ={}  {}",
                r.index,
                &r.model_digest[..12],
                r.verdict_model.unwrap(),
                r.verdict_reduced.unwrap(),
                r.formula
            )?;
        }
        Ok(())
    }
}

/// Instances are evaluated in parallel under `exec`; records stay in index
/// order.
pub fn xvalidate(p: &XValParams, exec: Exec) -> Result<XValReport> {
    p.check()?;
    let records = par::map_range(exec, p.count, |i| record(p, i as u64)).into_iter().collect::<Result<Vec<_>>>()?;
    let agreed = records.iter().filter(|r| r.agree == Some(true)).count();
    let disagreed = records.iter().filter(|r| r.agree == Some(false)).count();
    let skipped = records.iter().filter(|r| r.skipped.is_some()).count();
    let checked = agreed + disagreed;
    Ok(XValReport {
        seed: p.seed,
        count: p.count,
        config: p.config,
        semantics: p.semantics,
        agreed,
        disagreed,
        skipped,
        rate: (checked > 0).then(|| agreed as f64 / checked as f64),
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub seed: u64,
    pub count: usize,
    pub semantics: Semantics,
    pub reports: Vec<XValReport>,
    /// Configs with agreement rate 1.0.
    pub perfect: Vec<ReductionConfig>,
}

impl CalibrationReport {
    /// The first perfect config in grid order, else the best by rate.
    pub fn best(&self) -> Option<ReductionConfig> {
        if let Some(c) = self.perfect.first() {
            return Some(*c);
        }
        self.reports
            .iter()
            .filter(|r| r.rate.is_some())
            .max_by(|a, b| a.rate.partial_cmp(&b.rate).unwrap())
            .map(|r| r.config)
    }
}

impl fmt::Display for CalibrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semantics {} seed {} count {}", self.semantics, self.seed, self.count)?;
        for r in &self.reports {
            writeln!(
                f,
                "{:<32} rate {} ({} agreed, {} disagreed, {} skipped)",
                r.config.to_string(),
                r.rate_display(),
                r.agreed,
                r.disagreed,
                r.skipped
            )?;
        }
        if self.perfect.is_empty() {
            writeln!(f, "no config reaches 1.0")
        } else {
            let names: Vec<String> = self.perfect.iter().map(ToString::to_string).collect();
            writeln!(f, "perfect: {}", names.join(", "))
        }
    }
}

/// Runs [`xvalidate`] over the calibration grid on the same batch.
pub fn calibrate(p: &XValParams, exec: Exec) -> Result<CalibrationReport> {
    let mut reports = Vec::new();
    for config in ReductionConfig::calibration_grid() {
        reports.push(xvalidate(&XValParams { config, ..p.clone() }, exec)?);
    }
    let perfect = reports.iter().filter(|r| r.rate == Some(1.0)).map(|r| r.config).collect();
    Ok(CalibrationReport { seed: p.seed, count: p.count, semantics: p.semantics, reports, perfect })
}

/// Smallest coalition subformula of `f` (by printed length) on which `M`
/// and `Δ_M` still disagree; `f` itself if none smaller does.
pub fn shrink(m: &Icgs, f: &Formula, cfg: &ReductionConfig, semantics: Semantics, bound: usize) -> Result<Formula> {
    let mut candidates: Vec<&Formula> = Vec::new();
    collect_coalitions(f, &mut candidates);
    candidates.sort_by_key(|g| g.to_string().len());
    for g in candidates {
        if !run_instance(m, g, cfg, semantics, bound)?.agree() {
            return Ok(g.clone());
        }
    }
    Ok(f.clone())
}

fn collect_coalitions<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    if matches!(f, Formula::Coalition(..)) {
        out.push(f);
    }
    for c in f.children() {
        collect_coalitions(c, out);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproCase {
    pub seed: Option<u64>,
    pub index: Option<u64>,
    pub formula: String,
    pub shrunk: String,
    pub transformed: String,
    pub config: ReductionConfig,
    pub semantics: Semantics,
    pub bound: usize,
    pub verdict_model: bool,
    pub verdict_reduced: bool,
}

/// Writes `model.icgs`, `delta.vcgs` and `case.json` into `dir`.
pub fn write_bundle(
    dir: &Path,
    m: &Icgs,
    f: &Formula,
    cfg: &ReductionConfig,
    semantics: Semantics,
    bound: usize,
    origin: Option<(u64, u64)>,
) -> Result<ReproCase> {
    let io = |e: std::io::Error| Error::Input(format!("{}: {e}", dir.display()));
    let outcome = run_instance(m, f, cfg, semantics, bound)?;
    let shrunk = shrink(m, f, cfg, semantics, bound)?;
    let case = ReproCase {
        seed: origin.map(|o| o.0),
        index: origin.map(|o| o.1),
        formula: f.to_string(),
        shrunk: shrunk.to_string(),
        transformed: outcome.transformed.to_string(),
        config: *cfg,
        semantics,
        bound,
        verdict_model: outcome.verdict_model,
        verdict_reduced: outcome.verdict_reduced,
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("model.icgs"), print_icgs(m)).map_err(io)?;
    std::fs::write(dir.join("delta.vcgs"), print_vcgs(&reduce(m, cfg)?.vcgs)).map_err(io)?;
    let json = serde_json::to_string_pretty(&case).map_err(|e| Error::Input(e.to_string()))?;
    std::fs::write(dir.join("case.json"), json + "\n").map_err(io)?;
    Ok(case)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub case: ReproCase,
    pub full: Outcome,
    pub shrunk: Outcome,
    /// The committed `delta.vcgs` matches a fresh compilation.
    pub delta_matches: bool,
}

impl Replay {
    /// Both formulas reproduce the recorded verdicts.
    pub fn reproduces(&self) -> bool {
        self.full.verdict_model == self.case.verdict_model
            && self.full.verdict_reduced == self.case.verdict_reduced
            && !self.shrunk.agree()
    }
}

pub fn replay(dir: &Path) -> Result<Replay> {
    let read = |name: &str| {
        std::fs::read_to_string(dir.join(name)).map_err(|e| Error::Input(format!("{}: {e}", dir.join(name).display())))
    };
    let m = parse_icgs(&read("model.icgs")?)?;
    let case: ReproCase =
        serde_json::from_str(&read("case.json")?).map_err(|e| Error::Input(format!("case.json: {e}")))?;
    let f = parse_formula(&case.formula, Dialect::Atl)?;
    let g = parse_formula(&case.shrunk, Dialect::Atl)?;
    let full = run_instance(&m, &f, &case.config, case.semantics, case.bound)?;
    let shrunk = run_instance(&m, &g, &case.config, case.semantics, case.bound)?;
    let delta_matches = read("delta.vcgs")? == print_vcgs(&reduce(&m, &case.config)?.vcgs);
    Ok(Replay { case, full, shrunk, delta_matches })
}

/// Per-agent comparison of the observation partition on macro-states with
/// the source indistinguishability relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionCheck {
    pub agent: String,
    /// Every observation block maps into a single source class.
    pub sound: bool,
    /// Every pair of reachable indistinguishable source states is linked
    /// through shared observation blocks.
    pub complete: bool,
    /// Source states whose macro-states fall into more than one
    /// observation block.
    pub split_states: Vec<String>,
    /// `complete` recomputed with the agent's own action atoms masked out
    /// of its observation.
    pub complete_without_own_actions: bool,
}

impl PartitionCheck {
    pub fn exact(&self) -> bool {
        self.sound && self.complete
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fidelity {
    pub macro_states: usize,
    pub reachable_states: usize,
    pub expected_edges: usize,
    pub quotient_edges: usize,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    /// Macro-states whose labels differ from the labels of the state they
    /// encode (depends on the label mode).
    pub label_mismatches: usize,
    pub partitions: Vec<PartitionCheck>,
}

impl Fidelity {
    /// The quotient graph equals the reachable part of `M`, node for node
    /// and edge for edge.
    pub fn isomorphic(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.macro_states > 0
    }

    pub fn partitions_exact(&self) -> bool {
        self.partitions.iter().all(PartitionCheck::exact)
    }
}

/// Contracts `unfold(compile(M))` to its macro-states: the successors of the
/// initial states (the first decision point) and every target of an
/// environment transition tick. Source states, joint actions and targets are
/// decoded from the state and action atoms, not from the command table.
pub fn structural_fidelity(m: &Icgs, cfg: &ReductionConfig, bound: usize) -> Result<Fidelity> {
    let p = pipeline(m, cfg, bound)?;
    let (mach, un, u) = (&p.machine, &p.unfolded, &p.reduction.atoms);
    let atom = |name: &str| mach.atom_id(name).expect("reduction atom");
    let state_atoms: Vec<usize> = u.state.iter().map(|n| atom(n)).collect();
    let decode_state = |i: usize| -> Result<StateId> {
        let on: Vec<usize> = (0..state_atoms.len()).filter(|&s| mach.value(&un.states[i], state_atoms[s])).collect();
        match on.as_slice() {
            [s] => Ok(StateId(*s)),
            _ => Err(Error::Contract(format!("unfolded state {i} encodes {} source states", on.len()))),
        }
    };
    let decode_joint = |i: usize| -> Result<JointAction> {
        m.agents()
            .map(|a| {
                let on: Vec<usize> = u.action[a.index()]
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| mach.value(&un.states[i], atom(n)))
                    .map(|(k, _)| k)
                    .collect();
                match on.as_slice() {
                    [k] => Ok(ActionId(*k)),
                    _ => Err(Error::Contract(format!("unfolded state {i} sets {} actions of one agent", on.len()))),
                }
            })
            .collect()
    };
    let env = mach.agents().iter().position(|a| a == ENV).expect("environment");

    let mut macros: BTreeSet<usize> = BTreeSet::new();
    for i in 0..un.stats.initial {
        macros.extend(un.edges[i].iter().map(|(_, j)| *j));
    }
    let mut quotient: BTreeSet<(StateId, JointAction, StateId)> = BTreeSet::new();
    for (i, out) in un.edges.iter().enumerate() {
        for (choice, j) in out {
            let fired = choice[env].map(|c| mach.command_name(env, c));
            if fired.is_some_and(|n| n.starts_with("tr.")) {
                quotient.insert((decode_state(i)?, decode_joint(i)?, decode_state(*j)?));
                macros.insert(*j);
            }
        }
    }

    let reachable = m.reachable();
    let mut expected = BTreeSet::new();
    for s in m.states().filter(|s| reachable[s.index()]) {
        for (joint, t) in m.transitions(s) {
            expected.insert((s, joint.clone(), t));
        }
    }
    let show = |(s, j, t): &(StateId, JointAction, StateId)| {
        format!("{} ({}) -> {}", m.state_name(*s), m.joint_name(j), m.state_name(*t))
    };
    let mut missing: Vec<String> = expected.difference(&quotient).map(show).collect();
    let extra: Vec<String> = quotient.difference(&expected).map(show).collect();
    let codes: BTreeMap<usize, StateId> = macros.iter().map(|&g| Ok((g, decode_state(g)?))).collect::<Result<_>>()?;
    let coded: BTreeSet<StateId> = codes.values().copied().collect();
    for s in m.states().filter(|s| reachable[s.index()] && !coded.contains(s)) {
        missing.push(format!("state {}", m.state_name(s)));
    }

    let label_mismatches = codes
        .iter()
        .filter(|(&g, &s)| {
            let want: Vec<&str> = m.labels(s).iter().map(|p| m.props()[p.index()].as_str()).collect();
            mach.labels(&un.states[g]) != want
        })
        .count();

    let mut partitions = Vec::new();
    for a in m.agents() {
        let name = m.agent_name(a);
        let ma = mach.agents().iter().position(|x| x == name).expect("model agent");
        let own: Vec<usize> = u.action[a.index()].iter().map(|n| atom(n)).collect();
        let key = |g: usize, mask: bool| {
            let mut k = mach.observation(&un.states[g], ma);
            if mask {
                for &v in &own {
                    k.visible.set(v, false);
                    k.values.set(v, false);
                }
            }
            k
        };
        let blocks_for = |mask: bool| {
            let mut blocks: BTreeMap<_, BTreeSet<StateId>> = BTreeMap::new();
            for (&g, &s) in &codes {
                blocks.entry(key(g, mask)).or_default().insert(s);
            }
            blocks.into_values().collect::<Vec<_>>()
        };
        let complete_for = |blocks: &[BTreeSet<StateId>]| {
            // connected components of the "shares a block" relation
            let mut comp: Vec<usize> = (0..m.num_states()).collect();
            fn find(c: &mut [usize], x: usize) -> usize {
                if c[x] != x {
                    let r = find(c, c[x]);
                    c[x] = r;
                }
                c[x]
            }
            for ss in blocks {
                let first = ss.iter().next().unwrap().index();
                for s in ss {
                    let (x, y) = (find(&mut comp, first), find(&mut comp, s.index()));
                    comp[x] = y;
                }
            }
            m.indist(a).iter().all(|block| {
                let live: Vec<StateId> = block.iter().copied().filter(|s| coded.contains(s)).collect();
                live.windows(2).all(|w| find(&mut comp, w[0].index()) == find(&mut comp, w[1].index()))
            })
        };
        let blocks = blocks_for(false);
        let sound = blocks.iter().all(|ss| {
            let first = ss.iter().next().unwrap();
            ss.iter().all(|s| m.class_index(a, *s) == m.class_index(a, *first))
        });
        let mut blocks_of: BTreeMap<StateId, usize> = BTreeMap::new();
        for ss in &blocks {
            for &s in ss {
                *blocks_of.entry(s).or_default() += 1;
            }
        }
        let split_states = blocks_of
            .iter()
            .filter(|(_, &k)| k > 1)
            .map(|(s, _)| m.state_name(*s).to_owned())
            .collect();
        let complete = complete_for(&blocks);
        let complete_without_own_actions = complete_for(&blocks_for(true));
        partitions.push(PartitionCheck {
            agent: name.to_owned(),
            sound,
            complete,
            split_states,
            complete_without_own_actions,
        });
    }

    Ok(Fidelity {
        macro_states: macros.len(),
        reachable_states: reachable.iter().filter(|&&r| r).count(),
        expected_edges: expected.len(),
        quotient_edges: quotient.len(),
        missing,
        extra,
        label_mismatches,
        partitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn toggle() -> Icgs {
        parse_icgs(
            "agents: a\nactions a: stay go\nstates: s0 s1\ninitial: s0\nprops: p\nlabels s1: p\n\
             trans s0 (stay) -> s0\ntrans s0 (go) -> s1\ntrans s1 (stay) -> s1\ntrans s1 (go) -> s0\n",
        )
        .unwrap()
    }

    #[test]
    fn toggle_quotient_is_the_model() {
        let fid = structural_fidelity(&toggle(), &ReductionConfig::default(), 1000).unwrap();
        assert!(fid.isomorphic(), "{fid:?}");
        assert_eq!(fid.expected_edges, 4);
        assert!(fid.partitions_exact(), "{fid:?}");
    }

    #[test]
    fn toggle_reachability_agrees() {
        let m = toggle();
        let f = parse_formula("<<a>> (true U p)", Dialect::Atl).unwrap();
        for cfg in ReductionConfig::calibration_grid() {
            let o = run_instance(&m, &f, &cfg, Semantics::Objective, 1000).unwrap();
            assert!(o.verdict_model);
            assert!(o.agree(), "{cfg}");
        }
    }

    #[test]
    fn empty_batch_reports_na() {
        let p = XValParams { count: 0, ..XValParams::default() };
        let r = xvalidate(&p, Exec::Sequential).unwrap();
        assert_eq!(r.rate, None);
        assert_eq!(r.rate_display(), "n/a");
    }

    #[test]
    fn batches_are_deterministic_and_parallel_invariant() {
        let p = XValParams { seed: 3, count: 6, ..XValParams::default() };
        let a = xvalidate(&p, Exec::Sequential).unwrap();
        let b = xvalidate(&p, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.records.iter().map(|r| r.shape).collect::<BTreeSet<_>>().len() == 6);
    }

    #[test]
    fn caps_enforced() {
        let p = XValParams { max_states: 5, ..XValParams::default() };
        assert!(matches!(xvalidate(&p, Exec::Sequential), Err(Error::Input(_))));
    }
}
