#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use mcforge::ontology::SuperClass;
use mcforge::rdf::Iri;
use mcforge::reasoner::{build_closure, meronymy_of, subclasses_of, ReasonerConfig, ReasonerError};

use common::{arb_ontology, fixture_model, indices, iri, mcro, RandomOntology, HAS_PART};

#[test]
fn fixture_subclasses() {
    let model = fixture_model();
    let idx = build_closure(&model).unwrap();
    let sections: BTreeSet<Iri> = ["IntendedUseSection", "LimitationSection", "ModelDetailSection", "PerformanceSection"]
        .into_iter()
        .map(mcro)
        .collect();
    assert_eq!(subclasses_of(&idx, &mcro("ModelCardSection"), false).unwrap(), sections);
    assert!(subclasses_of(&idx, &mcro("License"), false).unwrap().is_empty());
    for c in model.classes() {
        let direct = subclasses_of(&idx, c, true).unwrap();
        let all = subclasses_of(&idx, c, false).unwrap();
        assert!(direct.is_subset(&all));
    }
    assert!(matches!(
        subclasses_of(&idx, &iri("http://x/Nope"), false),
        Err(ReasonerError::UnknownClass(_))
    ));
}

#[test]
fn fixture_meronymy() {
    let model = fixture_model();
    let idx = build_closure(&model).unwrap();
    let cfg = ReasonerConfig::default();
    let sections: BTreeSet<Iri> = ["IntendedUseSection", "LimitationSection", "ModelDetailSection", "PerformanceSection"]
        .into_iter()
        .map(mcro)
        .collect();
    let root = meronymy_of(&model, &idx, &mcro("ModelCardReport"), &cfg).unwrap();
    assert_eq!(root.children, sections);
    let detail = meronymy_of(&model, &idx, &mcro("ModelDetailSection"), &cfg).unwrap();
    assert_eq!(detail.children, [mcro("Algorithm"), mcro("License")].into_iter().collect());
    assert!(meronymy_of(&model, &idx, &mcro("DocumentPart"), &cfg).unwrap().children.is_empty());
    assert!(meronymy_of(&model, &idx, &iri("http://x/Nope"), &cfg).is_err());
}

fn configs() -> [ReasonerConfig; 3] {
    let has_part = Some(iri(HAS_PART));
    [
        ReasonerConfig::default(),
        ReasonerConfig {
            has_part: has_part.clone(),
            ..ReasonerConfig::default()
        },
        ReasonerConfig {
            has_part,
            inherit_inverse: true,
            ..ReasonerConfig::default()
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_matches_reachability_oracle(o in arb_ontology()) {
        let model = o.model();
        let idx = build_closure(&model).unwrap();
        let reach = o.reach();
        for a in 0..o.classes {
            let c = RandomOntology::class(a);
            let want: BTreeSet<usize> = (0..o.classes).filter(|&b| b != a && reach[b][a]).collect();
            prop_assert_eq!(indices(&subclasses_of(&idx, &c, false).unwrap()), want);
            let direct: BTreeSet<usize> = o.named.iter().filter(|(_, sup)| *sup == a).map(|(sub, _)| *sub).collect();
            prop_assert_eq!(indices(&subclasses_of(&idx, &c, true).unwrap()), direct);
        }
    }

    #[test]
    fn meronymy_matches_brute_force_oracle(o in arb_ontology()) {
        let model = o.model();
        let idx = build_closure(&model).unwrap();
        for cfg in configs() {
            for p in 0..o.classes {
                let got = meronymy_of(&model, &idx, &RandomOntology::class(p), &cfg).unwrap();
                let want = o.meronymy_oracle(p, cfg.has_part.is_some(), cfg.inherit_inverse);
                prop_assert_eq!(indices(&got.children), want, "parent C{} with {:?}", p, cfg);
            }
        }
    }

    #[test]
    fn closure_invariants(o in arb_ontology()) {
        let model = o.model();
        let idx = build_closure(&model).unwrap();
        for a in idx.classes() {
            let sup = idx.strict_superclasses(a).unwrap();
            prop_assert!(!sup.contains(a));
            for b in sup {
                prop_assert!(idx.strict_subclasses(b).unwrap().contains(a));
                for c in idx.strict_superclasses(b).unwrap() {
                    prop_assert!(sup.contains(c));
                }
            }
            for b in idx.strict_subclasses(a).unwrap() {
                prop_assert!(idx.strict_superclasses(b).unwrap().contains(a));
            }
        }
    }

    #[test]
    fn meronymy_invariants(o in arb_ontology()) {
        let model = o.model();
        let idx = build_closure(&model).unwrap();
        let cfg = ReasonerConfig::default();
        for parent in model.classes() {
            let result = meronymy_of(&model, &idx, parent, &cfg).unwrap();
            prop_assert_eq!(result.children.len(), result.justification.len());
            for child in &result.children {
                let axiom = &result.justification[child];
                prop_assert!(model.axioms().contains(axiom));
                prop_assert!(matches!(axiom.sup, SuperClass::Restriction(_)));
                for d in subclasses_of(&idx, child, false).unwrap() {
                    prop_assert!(result.children.contains(&d));
                }
                for q in idx.strict_superclasses(parent).unwrap() {
                    prop_assert!(meronymy_of(&model, &idx, q, &cfg).unwrap().children.contains(child));
                }
            }
        }
    }
}

#[test]
fn cycles_are_errors() {
    let o = RandomOntology {
        classes: 3,
        named: [(0, 1), (1, 2), (2, 0)].into_iter().collect(),
        restrictions: BTreeSet::new(),
    };
    match build_closure(&o.model()) {
        Err(ReasonerError::Cycle(members)) => assert_eq!(members.len(), 3),
        other => panic!("expected a cycle, got {other:?}"),
    }
}
