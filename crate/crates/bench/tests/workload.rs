use lfgmc_bench::{adjective_grammar, sentence};
use lfgmc_core::{parse_sentence, SearchBounds};

#[test]
fn every_adjective_count_has_one_parse() {
    let g = adjective_grammar();
    let t = g.compile().unwrap();
    for n in 0..5 {
        let out = parse_sentence(&t, &g, &sentence(n), SearchBounds::new(64, 64, 100).unwrap()).unwrap();
        assert_eq!(out.models.len(), 1, "{n} adjectives");
        assert!(!out.bound_hit());
    }
}
