use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dominance::{dominates, search, tree_dt, SearchConfig, Strategy};
use crate::model::classify_structure;
use crate::oracle::{oracle_dominates, oracle_min_distance};

#[test]
fn theorem13_lengths() {
    for k in 1..=3 {
        let inst = gen_theorem13(k).unwrap();
        assert_eq!(inst.net.len(), 2 * k + 1);
        assert!(classify_structure(&inst.net).unwrap().is_tree);
        let exact = inst.expected.as_ref().unwrap().min_length_exact.as_ref().unwrap().0;
        let d = oracle_min_distance(&inst.net, &inst.better, &inst.worse).unwrap();
        assert_eq!(d, Some(exact as usize));
        let t = tree_dt(&inst.net, &inst.better, &inst.worse).unwrap();
        assert_eq!(t.witness().unwrap().len() as u64, exact);
        let cfg = SearchConfig {
            strategy: Strategy::Bfs,
            use_tree_dt: false,
            ..SearchConfig::default()
        };
        let s = dominates(&inst.net, &inst.better, &inst.worse, &cfg).unwrap();
        assert_eq!(s.witness().unwrap().len() as u64, exact);
    }
    assert!(gen_theorem13(0).is_err());
}

#[test]
fn theorem20_lengths() {
    assert_eq!(theorem20_terms(3), vec![2, 6, 14]);
    for k in 1..=2 {
        let inst = gen_theorem20(k).unwrap();
        let n = inst.net.len();
        for v in 0..n {
            let partial = inst.net.cpt(v).rows.len() < inst.net.context_count(v)
                || inst.net.cpt(v).rows.values().any(|r| r.linear_order().is_none());
            assert_eq!(partial, v > k, "variable {v}");
        }
        let exp = inst.expected.clone().unwrap();
        let d = oracle_min_distance(&inst.net, &inst.better, &inst.worse).unwrap().unwrap() as u64;
        assert_eq!(Some(d), exp.min_length_exact.map(|e| e.0));
        assert!(d > exp.min_length_lower_bound);
        assert!((d as f64) > 2f64.powf(n as f64 / 2.0));
        let cfg = SearchConfig {
            strategy: Strategy::Bfs,
            ..SearchConfig::default()
        };
        let r = search(&inst.net, &inst.better, &inst.worse, &cfg).unwrap();
        let w = r.witness().unwrap();
        w.validate(&inst.net, false).unwrap();
        assert_eq!(w.len() as u64, d);
    }
}

#[test]
fn sat_examples() {
    let sat = gen_sat3(&Cnf::new(vec![vec![1, 2, 3]]).unwrap()).unwrap();
    let class = classify_structure(&sat.net).unwrap();
    assert!(class.is_dpsc);
    assert!((0..sat.net.len()).all(|v| sat.net.parents(v).len() <= 6));
    assert!(dominates(&sat.net, &sat.better, &sat.worse, &SearchConfig::default()).unwrap().is_yes());

    let unsat = gen_sat3(&Cnf::new(vec![vec![1], vec![-1]]).unwrap()).unwrap();
    assert!(!unsat.expected.as_ref().unwrap().answer);
    assert!(!dominates(&unsat.net, &unsat.better, &unsat.worse, &SearchConfig::default()).unwrap().is_yes());
    assert!(!oracle_dominates(&unsat.net, &unsat.better, &unsat.worse).unwrap());

    assert!(gen_sat3(&Cnf::new(vec![vec![1, 2, 3, 4]]).unwrap()).is_err());
    assert!(gen_sat3(&Cnf::new(vec![]).unwrap()).is_err());
    let dup = gen_sat3(&Cnf::new(vec![vec![1, -1, 2]]).unwrap()).unwrap();
    assert_eq!(dup.net.parents(4).len(), 4);
}

#[test]
fn sat_matches_truth_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let m = rand::Rng::gen_range(&mut rng, 1..=4);
        let c = rand::Rng::gen_range(&mut rng, 1..=5);
        let cnf = random_cnf(&mut rng, m, c);
        let inst = gen_sat3(&cnf).unwrap();
        let r = dominates(&inst.net, &inst.better, &inst.worse, &SearchConfig::default()).unwrap();
        assert_eq!(r.is_yes(), cnf.is_satisfiable(), "{cnf:?}");
    }
}

#[test]
fn dimacs() {
    let cnf = parse_dimacs("c hi\np cnf 4 2\n1 -2\n 3 0 -4 0\n").unwrap();
    assert_eq!(cnf.num_vars, 4);
    assert_eq!(cnf.clauses, vec![vec![1, -2, 3], vec![-4]]);
    assert_eq!(parse_dimacs("1 -2 3 0").unwrap().num_vars, 3);
    assert!(parse_dimacs("1 x 0").is_err());
    assert!(parse_dimacs("p cnf 1 1\n2 0").is_err());
}

#[test]
fn random_nets() {
    let base = RandomNetParams {
        n: 5,
        class: ClassConstraint::Tree,
        seed: 1,
        ..RandomNetParams::default()
    };
    let net = gen_random(&base).unwrap();
    let report = net.validate();
    assert!(report.acyclic && report.binary && report.strict && report.complete_tables);
    assert!(classify_structure(&net).unwrap().is_tree);
    assert_eq!(crate::io::serialize_net(&net), crate::io::serialize_net(&gen_random(&base).unwrap()));

    for seed in 0..30 {
        for class in [ClassConstraint::Polytree, ClassConstraint::Dpsc] {
            let p = RandomNetParams {
                n: 6,
                max_parents: 3,
                max_domain: 3,
                class,
                seed,
                ..RandomNetParams::default()
            };
            let c = classify_structure(&gen_random(&p).unwrap()).unwrap();
            assert!(if class == ClassConstraint::Dpsc { c.is_dpsc } else { c.is_polytree });
        }
        for strictness in [Strictness::WithIndifference, Strictness::Partial] {
            let p = RandomNetParams {
                n: 6,
                strictness,
                seed,
                ..RandomNetParams::default()
            };
            let report = gen_random(&p).unwrap().validate();
            assert!(report.violations.is_empty() && report.acyclic);
        }
    }
    let bad = RandomNetParams {
        min_domain: 1,
        ..RandomNetParams::default()
    };
    assert!(gen_random(&bad).is_err());
}
