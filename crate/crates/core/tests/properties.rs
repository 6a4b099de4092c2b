//! Invariants on random inputs.

mod common;

use common::{arb_shift, points_in, words_in, Brute};
use proptest::prelude::*;
use subshift::circuits::{exit_of, is_circuit};
use subshift::paction::{act, domain_contains};
use subshift::spectrum::{stem_of, xi_ball};
use subshift::words::SignedLetter;
use subshift::{Alphabet, EvPeriodicWord, FreeGroupElement, Word};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 256, ..ProptestConfig::default() }
}

fn arb_word(k: u16, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k, 0..=max).prop_map(|v| Word::from_indices(&v))
}

fn arb_point(k: u16) -> impl Strategy<Value = EvPeriodicWord> {
    (arb_word(k, 4), prop::collection::vec(0..k, 1..=4))
        .prop_map(|(u, v)| EvPeriodicWord::new(u, Word::from_indices(&v)).unwrap())
}

fn arb_element(k: u16) -> impl Strategy<Value = FreeGroupElement> {
    prop::collection::vec((0..k, any::<bool>()), 0..=8).prop_map(|fs| {
        FreeGroupElement::from_signed(
            fs.into_iter().map(|(a, inv)| SignedLetter { letter: subshift::Letter(a), inverse: inv }).collect(),
        )
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn group_laws(g in arb_element(3), h in arb_element(3), f in arb_element(3)) {
        prop_assert!(g.mul(&g.inverse()).is_unit());
        prop_assert_eq!(g.mul(&h).mul(&f), g.mul(&h.mul(&f)));
        prop_assert_eq!(g.mul(&h).inverse(), h.inverse().mul(&g.inverse()));
        // reduced: no adjacent cancelling pair
        prop_assert!(g.factors().windows(2).all(|p| p[1] != p[0].inv()));
    }

    #[test]
    fn positive_pairs_round_trip(a in arb_word(2, 5), b in arb_word(2, 5)) {
        let g = FreeGroupElement::from_pair(&a, &b);
        let pp = g.positive_pair().unwrap();
        prop_assert_eq!(pp.element(), g.clone());
        prop_assert!(pp.alpha.len() + pp.beta.len() == g.len());
    }

    #[test]
    fn canonical_points(x in arb_point(2), extra in arb_word(2, 3), reps in 1usize..3) {
        // writing the same point differently gives the same canonical form
        let unrolled = EvPeriodicWord::new(x.preperiod().concat(&x.period().repeat(reps)), x.period().repeat(reps)).unwrap();
        prop_assert_eq!(&unrolled, &x);
        for i in 0..20 {
            prop_assert_eq!(unrolled.letter(i), x.letter(i));
        }
        let y = x.prepend(&extra);
        prop_assert_eq!(y.shift(extra.len()), x.clone());
        prop_assert_eq!(y.prefix(extra.len()), extra);
    }

    #[test]
    fn text_round_trip(x in arb_point(3), g in arb_element(3)) {
        let al = Alphabet::new(&["a", "b", "c"]).unwrap();
        prop_assert_eq!(al.parse_point(&al.fmt_point(&x)).unwrap(), x);
        prop_assert_eq!(al.parse_element(&al.fmt_element(&g)).unwrap(), g);
    }

    #[test]
    fn language_matches_brute_force(s in arb_shift()) {
        let b = Brute::of(&s);
        for n in 0..=5 {
            for w in common::all_words(s.alphabet().len(), n) {
                prop_assert_eq!(s.in_language(&w).unwrap(), b.word_in(&w), "{}", s.show_word(&w));
            }
        }
        for x in common::points(s.alphabet().len(), 4) {
            prop_assert_eq!(s.contains_point(&x), b.contains(&x), "{}", s.show_point(&x));
        }
    }

    #[test]
    fn followers_match_brute_force(s in arb_shift(), i in any::<usize>(), j in any::<usize>()) {
        let b = Brute::of(&s);
        let ws = words_in(&b, 3);
        let bs = [ws[i % ws.len()].clone(), ws[j % ws.len()].clone()];
        let cfg = s.follower_config(&bs);
        let brute = b.follower(&bs, 5);
        prop_assert_eq!(s.follower_nonempty(&cfg), !brute.is_empty());
        if brute.is_empty() {
            prop_assert!(s.follower_unique_point(&cfg).is_err());
        } else if let Some(p) = s.follower_unique_point(&cfg).unwrap() {
            prop_assert_eq!(brute, vec![p]);
        } else {
            prop_assert!(brute.len() >= 2);
        }
    }

    #[test]
    fn action_laws(s in arb_shift(), i in any::<usize>(), g in arb_element(2)) {
        prop_assume!(s.alphabet().len() == 2);
        let pts = points_in(&Brute::of(&s), 4);
        prop_assume!(!pts.is_empty());
        let x = &pts[i % pts.len()];
        let defined = domain_contains(&s, &g.inverse(), x);
        // x ∈ X_{g⁻¹} iff g⁻¹ ∈ ξ_x
        prop_assert_eq!(defined, xi_ball(&s, x, g.len()).contains(&g.inverse()));
        if defined {
            let y = act(&s, &g, x).unwrap();
            prop_assert!(s.contains_point(&y));
            prop_assert_eq!(&act(&s, &g.inverse(), &y).unwrap(), x);
        }
    }

    #[test]
    fn stems_are_points(s in arb_shift(), i in any::<usize>(), r in 1usize..4) {
        let pts = points_in(&Brute::of(&s), 4);
        prop_assume!(!pts.is_empty());
        let x = &pts[i % pts.len()];
        let ball = xi_ball(&s, x, r);
        prop_assert_eq!(stem_of(&ball, s.alphabet()).unwrap(), x.prefix(r));
    }

    #[test]
    fn exits_leave_the_circuit(s in arb_shift(), g in arb_word(3, 3)) {
        let k = s.alphabet().len() as u16;
        let gamma = Word(g.letters().iter().map(|a| subshift::Letter(a.0 % k)).collect());
        prop_assume!(!gamma.is_empty() && is_circuit(&s, &gamma).unwrap());
        if let Some(y) = exit_of(&s, &gamma).unwrap() {
            prop_assert!(s.contains_point(&y.prepend(&gamma)));
            prop_assert_ne!(y, EvPeriodicWord::periodic(gamma.clone()).unwrap());
        }
    }
}
