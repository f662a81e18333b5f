mod common;

use common::{fixture, fixture_note, fixture_path, fixture_text, o};
use cpnet::generators::{gen_sat3, gen_theorem13, gen_theorem20, parse_dimacs};
use cpnet::io::{parse_net, serialize_net};
use cpnet::oracle::Oracle;

const NAMED: [&str; 8] = [
    "dinner1", "dinner2", "evening-dress", "fig4-chain", "example4", "example8", "example9", "multimedia",
];

#[test]
fn every_fixture_parses_validates_and_round_trips() {
    let dir = fixture_path("");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cpnet") {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            let net = fixture(&name);
            let report = net.validate();
            assert!(report.is_well_formed() && report.acyclic, "{name}: {:?}", report.violations);
            let text = serialize_net(&net);
            assert_eq!(parse_net(&text).unwrap(), net, "{name}");
            seen += 1;
        }
    }
    for name in NAMED {
        assert!(fixture_path(&format!("{name}.cpnet")).exists(), "{name} missing");
    }
    assert!(seen >= NAMED.len());
}

#[test]
fn generated_fixtures_match_their_generators() {
    let cases = [
        ("theorem13-k2.cpnet", gen_theorem13(2).unwrap()),
        ("theorem20-k1.cpnet", gen_theorem20(1).unwrap()),
        ("theorem20-k2.cpnet", gen_theorem20(2).unwrap()),
        ("sat-small.cpnet", gen_sat3(&parse_dimacs(&fixture_text("sat-small.cnf")).unwrap()).unwrap()),
    ];
    for (name, inst) in cases {
        let net = fixture(name);
        assert_eq!(net, inst.net, "{name}");
        let better = o(&net, &fixture_note(name, "better").unwrap());
        let worse = o(&net, &fixture_note(name, "worse").unwrap());
        assert_eq!((&better, &worse), (&inst.better, &inst.worse), "{name}");
        let oracle = Oracle::new(&net).unwrap();
        let answer = fixture_note(name, "expected answer").unwrap() == "yes";
        assert_eq!(oracle.dominates(&better, &worse).unwrap(), answer, "{name}");
        if let Some(exact) = fixture_note(name, "min length exact") {
            let d: usize = exact.split_whitespace().next().unwrap().parse().unwrap();
            assert_eq!(oracle.min_distance(&better, &worse).unwrap(), Some(d), "{name}");
        }
    }
}

#[test]
fn ternary_example9_prunes_a_value() {
    let net = fixture("example9-ternary.cpnet");
    let (worse, better) = (o(&net, "A=a_bar,B=b,C=c"), o(&net, "A=a,B=b,C=c"));
    match cpnet::dominance::forward_prune(&net, &worse, &better) {
        cpnet::dominance::ForwardPrune::Domains(d) => assert_eq!(d[0], [true, true, false]),
        other => panic!("{other:?}"),
    }
}
