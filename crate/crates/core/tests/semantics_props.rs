use lfgmc_core::model::Model;
use lfgmc_core::{eval_patheq, satisfies, valid, Formula, Node};
use lfgmc_oracle::{denote, gen};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn case(seed: u64) -> (Model, Formula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = gen::signature();
    let m = gen::model(&mut rng, &sig, 8, 8);
    let f = gen::formula(&mut rng, &sig, 5);
    (m, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn satisfies_agrees_with_denotation(seed in any::<u64>()) {
        let (m, f) = case(seed);
        prop_assert!(m.validate().is_valid());
        let d = denote::denotation(&m, &f);
        for n in m.nodes() {
            prop_assert_eq!(satisfies(&m, n, &f).unwrap(), d.contains(&n), "{} at {}", lfgmc_core::render_formula(&f), n);
        }
        prop_assert_eq!(valid(&m, &f).unwrap(), denote::counterexample(&m, &f));
    }

    #[test]
    fn sorts_stay_apart(seed in any::<u64>()) {
        let (m, _) = case(seed);
        let sig = m.sig().clone();
        for n in m.nodes() {
            match n {
                Node::Tree(_) => {
                    for a in sig.feats() {
                        prop_assert!(!satisfies(&m, n, &Formula::feat(a.clone(), Formula::True)).unwrap());
                    }
                    for a in sig.atoms() {
                        prop_assert!(!satisfies(&m, n, &Formula::atom(a.clone())).unwrap());
                    }
                }
                Node::F(w) => {
                    for phi in [Formula::up(Formula::True), Formula::down(Formula::True), Formula::zoomin(Formula::True)] {
                        prop_assert!(!satisfies(&m, n, &phi).unwrap());
                    }
                    for c in sig.cats() {
                        prop_assert!(!satisfies(&m, n, &Formula::cat(c.clone())).unwrap());
                    }
                    if !m.fstruct().is_final(w) {
                        for a in sig.atoms() {
                            prop_assert!(!satisfies(&m, n, &Formula::atom(a.clone())).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn path_equality_is_symmetric(seed in any::<u64>()) {
        let (m, f) = case(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let eq = match f {
            Formula::PathEq(eq) => eq,
            _ => loop {
                if let Formula::PathEq(eq) = gen::formula(&mut rng, m.sig(), 0) {
                    break eq;
                }
            },
        };
        for t in m.cstruct().ids() {
            prop_assert_eq!(eval_patheq(&m, t, &eq).unwrap(), eval_patheq(&m, t, &eq.swapped()).unwrap());
        }
    }

    #[test]
    fn bullet_of_trues_implies_down(seed in any::<u64>(), k in 1usize..4) {
        let (m, _) = case(seed);
        let b = Formula::bullet(vec![Formula::True; k]).unwrap();
        for n in m.nodes() {
            if satisfies(&m, n, &b).unwrap() {
                prop_assert!(satisfies(&m, n, &Formula::down(Formula::True)).unwrap());
            }
        }
    }

    #[test]
    fn feature_image_composes(seed in any::<u64>(), p in prop::collection::vec(0usize..3, 0..4), q in prop::collection::vec(0usize..3, 0..4)) {
        let (m, _) = case(seed);
        let feats: Vec<String> = m.sig().feats().iter().cloned().collect();
        let p: Vec<&str> = p.iter().map(|i| feats[*i].as_str()).collect();
        let q: Vec<&str> = q.iter().map(|i| feats[*i].as_str()).collect();
        let pq: Vec<&str> = p.iter().chain(&q).copied().collect();
        for w in m.fstruct().ids() {
            let whole = m.feature_image(w, &pq).unwrap();
            let split = m.feature_image(w, &p).unwrap().and_then(|v| m.feature_image(v, &q).unwrap());
            prop_assert_eq!(whole, split);
        }
        prop_assert_eq!(m.feature_image(m.fstruct().initial(), &[] as &[&str]).unwrap(), Some(m.fstruct().initial()));
    }
}

#[test]
fn large_models_report_the_least_counterexample() {
    let sig = gen::signature();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 20 {
        let m = gen::model(&mut rng, &sig, 300, 120);
        if m.node_count() < 256 {
            continue;
        }
        let f = gen::formula(&mut rng, &sig, 3);
        assert_eq!(valid(&m, &f).unwrap(), denote::counterexample(&m, &f));
        checked += 1;
    }
}
