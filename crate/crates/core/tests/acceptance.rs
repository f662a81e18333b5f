//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p cpnet --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fixture, fixture_note, o};
use cpnet::dominance::{
    dominates, search, tree_dt, Answer, LvfMode, SearchConfig, Strategy,
};
use cpnet::generators::{
    gen_random, gen_sat3, gen_theorem13, gen_theorem20, random_cnf, random_outcome, theorem20_terms,
    ClassConstraint, RandomNetParams,
};
use cpnet::io::format_outcome;
use cpnet::model::indifference_safety_lint;
use cpnet::optimize::{enumerate_nondominated, forward_sweep};
use cpnet::oracle::{
    build_induced_graph, construct_satisfying_ranking, count_satisfying_rankings, oracle_satisfiable,
    Oracle,
};
use cpnet::ordering::{consistent_sort_indices, paired_ordering_query, PairVerdict};
use cpnet::model::Variable;
use cpnet::{CpNet, Exec, Outcome, PartialAssignment};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn show(net: &CpNet, outcomes: &[Outcome]) -> Vec<String> {
    outcomes.iter().map(|x| format_outcome(net, x)).collect()
}

fn random_pair(net: &CpNet, rng: &mut ChaCha8Rng) -> (Outcome, Outcome) {
    loop {
        let (a, b) = (random_outcome(net, rng), random_outcome(net, rng));
        if a != b {
            return (a, b);
        }
    }
}

fn dinner_ranking() -> Check {
    let net = fixture("dinner1.cpnet");
    let count = count_satisfying_rankings(&net).map_err(err)?;
    ensure!(count == 1u32.into(), "ranking count {count}");
    let ranking = show(&net, &construct_satisfying_ranking(&net).map_err(err)?);
    ensure!(
        ranking == ["S=S_f,W=W_w", "S=S_f,W=W_r", "S=S_v,W=W_r", "S=S_v,W=W_w"],
        "ranking {ranking:?}"
    );
    let best = forward_sweep(&net, &PartialAssignment::empty(2)).map_err(err)?;
    ensure!(format_outcome(&net, &best) == "S=S_f,W=W_w", "sweep gave {best:?}");
    Ok(())
}

fn chain_incomparable_pair() -> Check {
    let net = fixture("fig4-chain.cpnet");
    let count = count_satisfying_rankings(&net).map_err(err)?;
    ensure!(count == 2u32.into(), "ranking count {count}");
    let oracle = Oracle::new(&net).map_err(err)?;
    let all = net.all_outcomes();
    let mut incomparable = Vec::new();
    let mut pairs = 0;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            pairs += 1;
            let (a, b) = (&all[i], &all[j]);
            if !oracle.dominates(a, b).map_err(err)? && !oracle.dominates(b, a).map_err(err)? {
                incomparable.push(show(&net, &[a.clone(), b.clone()]));
            }
        }
    }
    ensure!(pairs == 28, "{pairs} pairs");
    ensure!(
        incomparable == [["A=a,B=b_bar,C=c", "A=a_bar,B=b_bar,C=c_bar"]],
        "incomparable pairs {incomparable:?}"
    );
    Ok(())
}

fn evening_dress() -> Check {
    let net = fixture("evening-dress.cpnet");
    let (best, start) = (o(&net, "A=a,B=b,C=c"), o(&net, "A=a_bar,B=b_bar,C=c"));
    let r = dominates(&net, &best, &start, &SearchConfig::default()).map_err(err)?;
    let seq = r.witness().ok_or("no witness")?;
    seq.validate(&net, false).map_err(err)?;
    let oracle = Oracle::new(&net).map_err(err)?;
    let g = oracle.graph();
    let paths = g.count_paths(g.index(&start), g.index(&best)).map_err(err)?;
    ensure!(paths == 4u32.into(), "{paths} paths");
    let d = oracle.min_distance(&best, &start).map_err(err)?;
    ensure!(d == Some(2), "distance {d:?}");
    let (x, y) = (o(&net, "A=a,B=b_bar,C=c"), o(&net, "A=a_bar,B=b,C=c_bar"));
    for (b, w) in [(&x, &y), (&y, &x)] {
        let r = dominates(&net, b, w, &SearchConfig::default()).map_err(err)?;
        ensure!(r.answer == Answer::No, "expected incomparable pair");
        ensure!(!oracle.dominates(b, w).map_err(err)?, "oracle orders the pair");
    }
    Ok(())
}

fn theorem13_family() -> Check {
    for k in 1..=3usize {
        let inst = gen_theorem13(k).map_err(err)?;
        let want = k * k + 2 * k + 1;
        let d = Oracle::new(&inst.net)
            .map_err(err)?
            .min_distance(&inst.better, &inst.worse)
            .map_err(err)?;
        ensure!(d == Some(want), "k={k}: oracle distance {d:?}");
        let r = tree_dt(&inst.net, &inst.better, &inst.worse).map_err(err)?;
        let seq = r.witness().ok_or(format!("k={k}: tree_dt said no"))?;
        seq.validate(&inst.net, false).map_err(err)?;
        ensure!(seq.len() == want && seq.end() == inst.better, "k={k}: length {}", seq.len());
    }
    let inst = gen_theorem13(20).map_err(err)?;
    let n = inst.net.len();
    let t = Instant::now();
    let r = tree_dt(&inst.net, &inst.better, &inst.worse).map_err(err)?;
    let took = t.elapsed();
    ensure!(took < Duration::from_secs(1), "k=20 took {took:?}");
    let seq = r.witness().ok_or("k=20: tree_dt said no")?;
    seq.validate(&inst.net, false).map_err(err)?;
    ensure!(seq.len() <= n * n && seq.end() == inst.better, "k=20: length {}", seq.len());
    Ok(())
}

fn sat_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut agree = 0;
    for _ in 0..100 {
        let m = rng.gen_range(1..=4);
        let c = rng.gen_range(1..=5);
        let cnf = random_cnf(&mut rng, m, c);
        let inst = gen_sat3(&cnf).map_err(err)?;
        let r = dominates(&inst.net, &inst.better, &inst.worse, &SearchConfig::default()).map_err(err)?;
        if r.is_yes() == cnf.is_satisfiable() {
            agree += 1;
        }
    }
    ensure!(agree == 100, "{agree}/100 agree");
    Ok(())
}

fn theorem20_family() -> Check {
    for k in 1..=2usize {
        let inst = gen_theorem20(k).map_err(err)?;
        let n = inst.net.len();
        let cfg = SearchConfig {
            strategy: Strategy::Bfs,
            ..SearchConfig::default()
        };
        let r = search(&inst.net, &inst.better, &inst.worse, &cfg).map_err(err)?;
        let seq = r.witness().ok_or(format!("k={k}: search said no"))?;
        seq.validate(&inst.net, false).map_err(err)?;
        let d = Oracle::new(&inst.net)
            .map_err(err)?
            .min_distance(&inst.better, &inst.worse)
            .map_err(err)?
            .ok_or(format!("k={k}: oracle found no path"))?;
        let sum: u64 = theorem20_terms(k).iter().sum();
        ensure!(d as u64 > sum, "k={k}: distance {d} <= {sum}");
        ensure!((d as f64) > 2f64.powf(n as f64 / 2.0), "k={k}: distance {d} too small");
        ensure!(seq.len() == d, "k={k}: breadth-first witness {} vs {d}", seq.len());
        let recorded = fixture_note(&format!("theorem20-k{k}.cpnet"), "min length exact")
            .ok_or("fixture lacks a recorded length")?;
        ensure!(recorded.starts_with(&format!("{d} ")), "k={k}: fixture records {recorded}");
    }
    Ok(())
}

fn pruning_configs() -> Vec<(&'static str, SearchConfig)> {
    let base = SearchConfig {
        use_tree_dt: false,
        lvf_mode: LvfMode::Off,
        ..SearchConfig::default()
    };
    let mut out = Vec::new();
    for strategy in [Strategy::Dfs, Strategy::Bfs] {
        for (name, suffix, forward, lvf) in [
            ("none", false, false, LvfMode::Off),
            ("suffix", true, false, LvfMode::Off),
            ("forward", false, true, LvfMode::Off),
            ("suffix+forward", true, true, LvfMode::Off),
            ("suffix+forward+lvf", true, true, LvfMode::Heuristic),
        ] {
            out.push((
                name,
                SearchConfig {
                    strategy,
                    suffix_fixing: suffix,
                    forward_pruning: forward,
                    lvf_mode: lvf,
                    ..base.clone()
                },
            ));
        }
    }
    out
}

fn nodes(net: &CpNet, b: &Outcome, w: &Outcome, cfg: &SearchConfig) -> Result<u64, String> {
    Ok(search(net, b, w, cfg).map_err(err)?.stats.nodes_expanded)
}

fn pruning_invariance() -> Check {
    let configs = pruning_configs();
    let unpruned = &configs[0].1;
    let suffix_only = &configs[1].1;
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for seed in 0..200 {
        let params = RandomNetParams {
            n: rng.gen_range(2..=8),
            min_domain: 2,
            max_domain: 3,
            max_parents: 3,
            seed,
            ..RandomNetParams::default()
        };
        let net = gen_random(&params).map_err(err)?;
        let oracle = Oracle::new(&net).map_err(err)?;
        for _ in 0..5 {
            let (b, w) = random_pair(&net, &mut rng);
            let truth = oracle.dominates(&b, &w).map_err(err)?;
            for (name, cfg) in &configs {
                let r = search(&net, &b, &w, cfg).map_err(err)?;
                ensure!(r.is_yes() == truth, "seed {seed}: {name} {:?} disagrees", cfg.strategy);
            }
            let (with, without) = (nodes(&net, &b, &w, suffix_only)?, nodes(&net, &b, &w, unpruned)?);
            ensure!(with <= without, "seed {seed}: suffix expanded {with} > {without}");
        }
    }
    let net = fixture("evening-dress.cpnet");
    let all = net.all_outcomes();
    let (mut with, mut without) = (0, 0);
    for b in &all {
        for w in &all {
            if b != w {
                with += nodes(&net, b, w, suffix_only)?;
                without += nodes(&net, b, w, unpruned)?;
            }
        }
    }
    ensure!(with < without, "evening dress: {with} nodes with suffix fixing, {without} without");
    Ok(())
}

fn lvf_class() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let prune = SearchConfig {
        lvf_mode: LvfMode::Prune,
        use_tree_dt: false,
        ..SearchConfig::default()
    };
    for seed in 0..100 {
        let params = RandomNetParams {
            n: rng.gen_range(2..=8),
            max_parents: 3,
            class: ClassConstraint::Dpsc,
            seed: 1000 + seed,
            ..RandomNetParams::default()
        };
        let net = gen_random(&params).map_err(err)?;
        let oracle = Oracle::new(&net).map_err(err)?;
        for _ in 0..5 {
            let (b, w) = random_pair(&net, &mut rng);
            let r = search(&net, &b, &w, &prune).map_err(err)?;
            ensure!(
                r.is_yes() == oracle.dominates(&b, &w).map_err(err)?,
                "seed {seed}: prune disagrees with the oracle"
            );
        }
    }
    let net = fixture("example8.cpnet");
    let (b, w) = (o(&net, "A=a,B=b3,C=c_bar"), o(&net, "A=a_bar,B=b1,C=c"));
    let forced = SearchConfig {
        force_lvf: true,
        ..prune
    };
    let r = search(&net, &b, &w, &forced).map_err(err)?;
    ensure!(r.answer == Answer::No, "forced prune found a sequence");
    ensure!(Oracle::new(&net).map_err(err)?.dominates(&b, &w).map_err(err)?, "oracle says no");
    Ok(())
}

fn forward_pruning_example() -> Check {
    let net = fixture("example9.cpnet");
    let (b, w) = (o(&net, "A=a,B=b_bar,C=c"), o(&net, "A=a_bar,B=b,C=c"));
    let r = search(&net, &b, &w, &SearchConfig::default()).map_err(err)?;
    ensure!(r.answer == Answer::No, "answered yes");
    ensure!(r.stats.forward_infeasible, "not flagged infeasible");
    ensure!(r.stats.nodes_expanded == 0, "{} nodes expanded", r.stats.nodes_expanded);
    Ok(())
}

fn ordering() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..100 {
        let params = RandomNetParams {
            n: rng.gen_range(2..=7),
            max_parents: 3,
            seed: 2000 + seed,
            ..RandomNetParams::default()
        };
        let net = gen_random(&params).map_err(err)?;
        let oracle = Oracle::new(&net).map_err(err)?;
        let matrix = oracle.dominance_matrix(Exec::default()).map_err(err)?;
        let all = net.all_outcomes();
        let order = consistent_sort_indices(&net, &all, Exec::default()).map_err(err)?;
        let mut pos = vec![0; all.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        for i in 0..all.len() {
            for j in 0..all.len() {
                if matrix[i][j] {
                    ensure!(pos[i] < pos[j], "seed {seed}: sort puts a dominated outcome first");
                }
                if i < j {
                    let v = paired_ordering_query(&net, &all[i], &all[j]).map_err(err)?;
                    let bad = match v {
                        PairVerdict::FirstOverSecond => matrix[j][i],
                        PairVerdict::SecondOverFirst => matrix[i][j],
                        PairVerdict::BothOrderable => matrix[i][j] || matrix[j][i],
                    };
                    ensure!(!bad, "seed {seed}: verdict {v:?} contradicts the oracle");
                }
            }
        }
    }
    let net = fixture("dinner2.cpnet");
    let (a, b) = (o(&net, "M=M_mc,S=S_v,W=W_w"), o(&net, "M=M_fc,S=S_v,W=W_r"));
    let v = paired_ordering_query(&net, &a, &b).map_err(err)?;
    ensure!(v == PairVerdict::FirstOverSecond, "dinner2 verdict {v:?}");
    let oracle = Oracle::new(&net).map_err(err)?;
    ensure!(
        !oracle.dominates(&a, &b).map_err(err)? && !oracle.dominates(&b, &a).map_err(err)?,
        "dinner2 pair is comparable"
    );
    Ok(())
}

fn sweep_is_optimal() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..100 {
        let n = rng.gen_range(1..=6);
        let params = RandomNetParams {
            n,
            min_domain: 2,
            max_domain: if n <= 4 { 4 } else { 2 },
            max_parents: 3,
            seed: 3000 + seed,
            ..RandomNetParams::default()
        };
        let net = gen_random(&params).map_err(err)?;
        ensure!(net.outcome_count() <= 256, "seed {seed}: {} outcomes", net.outcome_count());
        let mut z = PartialAssignment::empty(n);
        for v in 0..n {
            if rng.gen_bool(0.3) {
                z.set(v, rng.gen_range(0..net.domain_size(v)) as u16);
            }
        }
        let best = forward_sweep(&net, &z).map_err(err)?;
        let oracle = Oracle::new(&net).map_err(err)?;
        for other in net.completions(&z) {
            if other != best {
                ensure!(
                    oracle.dominates(&best, &other).map_err(err)?,
                    "seed {seed}: sweep result does not dominate {other:?}"
                );
            }
        }
    }
    Ok(())
}

fn multimedia_session() -> Check {
    let net = fixture("multimedia.cpnet");
    let cases = [
        ("", "CT=ct_hide,Xray=xray_segm,Graph=graph_plain,Notes=notes_hide,XrayOld=xrayold_plain,NotesOld=notesold_hide"),
        ("CT=ct_rt", "CT=ct_rt,Xray=xray_plain,Graph=graph_plain,Notes=notes_summ,XrayOld=xrayold_plain,NotesOld=notesold_hide"),
        ("CT=ct_rt,Xray=xray_hide", "CT=ct_rt,Xray=xray_hide,Graph=graph_plain,Notes=notes_summ,XrayOld=xrayold_hide,NotesOld=notesold_plain"),
        ("CT=ct_plain,Xray=xray_hide", "CT=ct_plain,Xray=xray_hide,Graph=graph_hide,Notes=notes_hide,XrayOld=xrayold_hide,NotesOld=notesold_plain"),
    ];
    for (evidence, want) in cases {
        let z = cpnet::io::parse_assignment(evidence, &net, false).map_err(err)?;
        let got = format_outcome(&net, &forward_sweep(&net, &z).map_err(err)?);
        ensure!(got == want, "evidence `{evidence}` gave {got}");
    }
    Ok(())
}

fn indifference_example() -> Check {
    let net = fixture("example4.cpnet");
    ensure!(!oracle_satisfiable(&net).map_err(err)?, "example4 satisfiable");
    ensure!(!indifference_safety_lint(&net).map_err(err)?.is_empty(), "no lint warning");
    let fixed = fixture("example4-repaired.cpnet");
    ensure!(oracle_satisfiable(&fixed).map_err(err)?, "repaired net unsatisfiable");
    let warnings = indifference_safety_lint(&fixed).map_err(err)?;
    ensure!(warnings.is_empty(), "{} warnings on the repaired net", warnings.len());
    Ok(())
}

fn anytime_enumeration() -> Check {
    let mut net = CpNet::new();
    for name in ["A", "B", "C", "D"] {
        net.add_variable(Variable::new(name, ["t", "f"])).map_err(err)?;
    }
    let mut it = enumerate_nondominated(&net, &PartialAssignment::empty(4), None).map_err(err)?;
    let first = it.next().ok_or("nothing emitted")?;
    let work_at_first = it.work();
    let mut seen = vec![first];
    seen.extend(it.by_ref());
    let total = it.work();
    ensure!(seen.len() == 16, "{} outcomes", seen.len());
    let distinct: std::collections::BTreeSet<_> = seen.iter().collect();
    ensure!(distinct.len() == 16, "duplicates emitted");
    ensure!(work_at_first < total, "first emission after {work_at_first} of {total} steps");
    let graph = build_induced_graph(&net).map_err(err)?;
    ensure!(graph.strict_edge_count() == 0, "empty tables induced edges");
    Ok(())
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 14] = [
        ("dinner ranking and sweep", dinner_ranking),
        ("chain net has one incomparable pair", chain_incomparable_pair),
        ("evening dress paths and distances", evening_dress),
        ("quadratic chain family", theorem13_family),
        ("3-SAT reduction matches truth tables", sat_reduction),
        ("exponential chain family", theorem20_family),
        ("pruning rules keep answers", pruning_invariance),
        ("least-variable flipping on its class", lvf_class),
        ("forward pruning answers before search", forward_pruning_example),
        ("ordering queries respect the oracle", ordering),
        ("forward sweep is optimal", sweep_is_optimal),
        ("multimedia session", multimedia_session),
        ("indifference lint", indifference_example),
        ("anytime enumeration of empty tables", anytime_enumeration),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
