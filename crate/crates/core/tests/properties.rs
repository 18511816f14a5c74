use atlvis::checker::{CheckConfig, Checker, Semantics};
use atlvis::format::{parse_icgs, parse_vcgs, print_icgs, print_vcgs};
use atlvis::gen::{instance_rng, random_atl, random_atl_star, random_icgs, GenParams};
use atlvis::logic::{duplicate_next, parse_formula};
use atlvis::oracle::{oracle_sat, OracleConfig};
use atlvis::{compile, Dialect, Exec, Icgs, ReductionConfig};
use proptest::prelude::*;
use rand::Rng;

fn model(seed: u64, max_states: usize, classes: usize) -> Icgs {
    let mut rng = instance_rng(seed, 0);
    let states = rng.random_range(1..=max_states);
    let gp = GenParams {
        states,
        agents: rng.random_range(1..=2),
        actions: rng.random_range(1..=2),
        classes: rng.random_range(1..=classes.min(states)),
        ..GenParams::default()
    };
    random_icgs(&gp, &mut rng).unwrap()
}

fn config(i: usize) -> ReductionConfig {
    ReductionConfig::calibration_grid()[i]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn icgs_text_round_trips(seed in any::<u64>()) {
        let m = model(seed, 6, 6);
        prop_assert_eq!(parse_icgs(&print_icgs(&m)).unwrap(), m);
    }

    #[test]
    fn compiled_vcgs_round_trips(seed in any::<u64>(), cfg in 0usize..4) {
        let v = compile(&model(seed, 4, 4), &config(cfg)).unwrap();
        prop_assert_eq!(parse_vcgs(&print_vcgs(&v)).unwrap(), v);
    }

    #[test]
    fn formulas_round_trip(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 1);
        let agents = ["a".to_owned(), "b".to_owned()];
        let props = ["p".to_owned(), "q".to_owned()];
        let f = random_atl_star(&agents, &props, 3, 3, &mut rng);
        prop_assert_eq!(parse_formula(&f.to_string(), Dialect::AtlStar).unwrap(), f.clone());
        prop_assert_eq!(duplicate_next(&f, Dialect::AtlStar).count_next(), 2 * f.count_next());
    }

    #[test]
    fn checker_matches_oracle(seed in any::<u64>(), objective in any::<bool>()) {
        let m = model(seed, 4, 2);
        let mut rng = instance_rng(seed, 2);
        let f = random_atl(m.agent_names(), m.props(), 2, &mut rng);
        let semantics = if objective { Semantics::Objective } else { Semantics::Subjective };
        let oracle = oracle_sat(&m, &f, OracleConfig { semantics, ..OracleConfig::default() });
        prop_assume!(oracle.is_ok());
        let got = Checker::new(&m, CheckConfig::new(Dialect::Atl).with_semantics(semantics)).unwrap().sat(&f).unwrap();
        prop_assert_eq!(got, oracle.unwrap(), "{}", f);
    }

    #[test]
    fn sequential_and_parallel_agree(seed in any::<u64>()) {
        let m = model(seed, 5, 3);
        let mut rng = instance_rng(seed, 3);
        let f = random_atl_star(m.agent_names(), m.props(), 2, 2, &mut rng);
        let sat = |exec| Checker::new(&m, CheckConfig::new(Dialect::AtlStar).with_exec(exec)).unwrap().sat(&f).unwrap();
        prop_assert_eq!(sat(Exec::Sequential), sat(Exec::Parallel));
    }

    #[test]
    fn objective_truth_implies_subjective_neighbourhood_truth(seed in any::<u64>()) {
        // Subjective truth at s means objective truth at every state of the
        // neighbourhood, in particular at s itself.
        let m = model(seed, 4, 3);
        let mut rng = instance_rng(seed, 4);
        let f = random_atl(m.agent_names(), m.props(), 1, &mut rng);
        prop_assume!(matches!(f, atlvis::Formula::Coalition(..)));
        let sat = |semantics| Checker::new(&m, CheckConfig::new(Dialect::Atl).with_semantics(semantics)).unwrap().sat(&f).unwrap();
        let (subjective, objective) = (sat(Semantics::Subjective), sat(Semantics::Objective));
        for s in m.states() {
            prop_assert!(!subjective[s.index()] || objective[s.index()]);
        }
    }
}
