use lfgmc_core::{parse_formula, render_formula, Formula};
use lfgmc_oracle::gen;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let sig = gen::signature();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = gen::formula(&mut rng, &sig, 6);
        let text = render_formula(&f);
        prop_assert_eq!(parse_formula(&text, &sig), Ok(f), "{}", text);
    }

    #[test]
    fn parser_never_panics_on_token_soup(
        toks in prop::collection::vec(
            prop::sample::select(vec![
                "true", "false", "cstruct", "fstruct", "!", "&", "|", "->", "<->", "(", ")", ",", "~", "<", ">",
                "up", "down", "zoomin", "bullet", "S", "NP", "p", "f", "g", "\"u\"", "zz", "-", "\"",
            ]),
            0..40,
        )
    ) {
        let sig = gen::signature();
        let text = toks.join(" ");
        match parse_formula(&text, &sig) {
            Ok(f) => prop_assert_eq!(parse_formula(&render_formula(&f), &sig), Ok(f)),
            Err(e) => prop_assert!(e.offset <= text.len()),
        }
    }

    #[test]
    fn parser_never_panics_on_arbitrary_text(text in "\\PC{0,60}") {
        let sig = gen::signature();
        if let Err(e) = parse_formula(&text, &sig) {
            prop_assert!(e.offset <= text.len());
        }
    }
}

#[test]
fn deep_formulas_round_trip() {
    let sig = gen::signature();
    let mut f = Formula::atom("p");
    for i in 0..60 {
        f = match i % 4 {
            0 => Formula::not(f),
            1 => Formula::feat("f", f),
            2 => Formula::and(f, Formula::True),
            _ => Formula::up(f),
        };
    }
    assert_eq!(parse_formula(&render_formula(&f), &sig), Ok(f));
}
