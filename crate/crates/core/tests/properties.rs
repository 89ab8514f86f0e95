use proptest::prelude::*;
use quasirandom::group::matrix::MatrixKind;
use quasirandom::product::{cover_exponent, is_product_free, product_set};
use quasirandom::spectral::{build_operator, spectrum_on_ideal, SpectralConfig};
use quasirandom::words::{parse_word, Word};
use quasirandom::{seed, Family, FiniteGroup, Limits, SubsetMask};
use std::sync::OnceLock;

fn s4() -> &'static FiniteGroup {
    static G: OnceLock<FiniteGroup> = OnceLock::new();
    G.get_or_init(|| Family::Symmetric(4).construct(&Limits::default()).unwrap())
}

fn psl27() -> &'static FiniteGroup {
    static G: OnceLock<FiniteGroup> = OnceLock::new();
    G.get_or_init(|| Family::linear(MatrixKind::PSL, 2, 7).construct(&Limits::default()).unwrap())
}

fn subset(n: usize) -> impl Strategy<Value = SubsetMask> {
    proptest::collection::btree_set(0..n, 0..n).prop_map(move |s| SubsetMask::from_indices(n, s).unwrap())
}

fn word() -> impl Strategy<Value = Word> {
    proptest::collection::vec((1usize..4, -3i64..4), 1..8).prop_map(|v| Word::from_syllables(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_set_matches_definition(a in subset(24), b in subset(24)) {
        let g = s4();
        let p = product_set(g, &a, &b).unwrap();
        for z in 0..24 {
            let direct = a.iter().any(|x| b.contains(g.multiply(g.inverse(x), z)));
            prop_assert_eq!(p.contains(z), direct);
        }
        // (AB)^-1 = B^-1 A^-1
        let inv = product_set(g, &b.inverse_image(g), &a.inverse_image(g)).unwrap();
        prop_assert_eq!(p.inverse_image(g), inv);
    }

    #[test]
    fn product_free_certificate_is_exact(s in subset(24)) {
        let g = s4();
        let cert = is_product_free(g, &s).unwrap();
        let naive = s.iter().all(|x| s.iter().all(|y| !s.contains(g.multiply(x, y))));
        prop_assert_eq!(cert.is_product_free(), naive);
    }

    #[test]
    fn growth_sizes_never_shrink(seed_value in any::<u64>(), size in 1usize..8) {
        let g = s4();
        let x = SubsetMask::random(24, size, &mut seed::rng(seed_value)).unwrap();
        if g.closure(&x.to_vec()).len() == 24 {
            let r = cover_exponent(g, &x).unwrap();
            prop_assert!(r.sizes.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(r.exponent.is_some(), !r.stalled);
        }
    }

    #[test]
    fn words_commute_with_conjugation(w in word(), x in 0usize..168, y in 0usize..168, h in 0usize..168) {
        let g = psl27();
        let tuple = [x, y, g.conjugate(x, y)];
        let conj: Vec<usize> = tuple.iter().map(|&t| g.conjugate(t, h)).collect();
        let a = w.evaluate(g, &tuple).unwrap();
        prop_assert_eq!(g.conjugate(a, h), w.evaluate(g, &conj).unwrap());
        let inv = w.inverse().evaluate(g, &tuple).unwrap();
        prop_assert_eq!(g.multiply(a, inv), 0);
    }

    #[test]
    fn parse_is_stable_under_display(w in word()) {
        if !w.is_trivial() {
            prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        }
    }

    #[test]
    fn spectral_identities_on_symmetric_sets(seed_value in any::<u64>(), size in 1usize..24) {
        let g = s4();
        let b = SubsetMask::random_symmetric(g, size, &mut seed::rng(seed_value)).unwrap();
        let op = build_operator(g, &b, &Limits::default()).unwrap();
        let report = spectrum_on_ideal(&op, 1, &SpectralConfig::default(), &Limits::default()).unwrap();
        prop_assert!(report.xe_exact && report.row_sums_ok);
        prop_assert!(report.trace_identity_holds());
        prop_assert!(report.max_abs_on_ideal <= b.len() as f64 + 1e-9);
    }
}
