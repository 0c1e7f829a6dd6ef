use lfgmc_core::fixtures;
use lfgmc_core::model::{FNode, FStructure, Label, Model, Signature, TreeBuilder};
use lfgmc_core::{FNodeId, ViolationKind};
use lfgmc_oracle::corrupt::{corrupt, ALL_KINDS};
use lfgmc_oracle::gen;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn random_model(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen::model(&mut rng, &gen::signature(), 8, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn every_corruption_is_caught(seed in any::<u64>(), k in 0..ALL_KINDS.len()) {
        let kind = ALL_KINDS[k];
        let bad = corrupt(&random_model(seed), kind);
        let report = bad.validate();
        prop_assert!(report.has(kind), "{kind:?} not reported: {:?}", report.kinds());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let m = random_model(seed);
        prop_assert_eq!(Model::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn canonical_form_ignores_ids(seed in any::<u64>()) {
        let m = random_model(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let other = gen::relabel(&mut rng, &m);
        prop_assert!(other.validate().is_valid());
        let c = m.canonical();
        prop_assert_eq!(&other.canonical(), &c);
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert!(c.validate().is_valid());
    }
}

#[test]
fn fixtures_round_trip_through_json() {
    for m in [fixtures::a_girl_walks(), fixtures::a_girl_devours()] {
        assert_eq!(Model::from_json(&m.to_json()).unwrap(), m);
    }
}

#[test]
fn one_node_model_is_legal() {
    let sig = Signature::new(["S"], ["sg"], ["num"]);
    let mut tb = TreeBuilder::new();
    let root = tb.leaf(Label::Cat("S".into()));
    let fs = FStructure::from_nodes(
        FNodeId(0),
        BTreeMap::from([(FNodeId(0), FNode { trans: BTreeMap::new(), atom: Some("sg".into()) })]),
    );
    let m = Model::new(sig, tb.finish(root), fs, BTreeMap::new());
    assert!(m.validate().is_valid(), "{:?}", m.validate());
}

#[test]
fn atom_beside_a_transition_is_reported() {
    let m = fixtures::a_girl_walks();
    let (sig, cs, fs, z) = m.into_parts();
    let (initial, mut nodes, finals) = fs.into_parts();
    nodes.get_mut(&initial).unwrap().atom = Some("sing".into());
    let bad = Model::new(sig, cs, FStructure::from_parts(initial, nodes, finals), z);
    assert!(bad.validate().has(ViolationKind::ValuationOnNonFinal));
}

#[test]
fn figure1_feature_images() {
    let m = fixtures::a_girl_walks();
    let init = m.fstruct().initial();
    let sing = m.feature_image(init, &["subj", "num"]).unwrap().unwrap();
    assert_eq!(m.fstruct().atom(sing), Some("sing"));
    assert!(m.feature_image(init, &["obj"]).is_err(), "obj is not declared in this signature");
    // with obj declared, the initial node simply has no obj
    let (_, cs, fs, z) = m.into_parts();
    let wider = Model::new(fixtures::devour_grammar().sig().clone(), cs, fs, z);
    assert_eq!(wider.feature_image(init, &["obj"]).unwrap(), None);
}
