use proptest::prelude::*;
use shortreset::oracle::{shortest_reset_length, shortest_word_from};
use shortreset::{random_dfa, shortest_reset_word, Dfa, Error, RngSpec, SearchConfig, StateSet};

fn all_automata(n: usize, k: usize) -> impl Iterator<Item = Dfa> {
    let cells = n * k;
    let total = n.pow(cells as u32);
    (0..total).map(move |mut code| {
        Dfa::from_fn(n, k, |_, _| {
            let t = code % n;
            code /= n;
            t
        })
        .unwrap()
    })
}

fn agrees_with_oracle(d: &Dfa) {
    let expected = shortest_reset_length(d).unwrap();
    match shortest_reset_word(d, &SearchConfig::default()) {
        Ok(r) => {
            assert_eq!(Some(r.length), expected, "{d:?}");
            let w = r.word.unwrap();
            assert_eq!(w.len(), r.length);
            assert!(
                d.apply_word(&d.full_set(), &w).unwrap().is_singleton(),
                "{d:?}"
            );
        }
        Err(Error::NotSynchronizing) => assert_eq!(expected, None, "{d:?}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn exhaustive_up_to_three_states() {
    let mut count = 0;
    for n in 1..=3 {
        for d in all_automata(n, 2) {
            agrees_with_oracle(&d);
            count += 1;
        }
    }
    assert_eq!(count, 1 + 16 + 729);
}

#[test]
fn random_small_automata() {
    for n in 4..=8 {
        for i in 0..1500 {
            agrees_with_oracle(&random_dfa(
                n,
                2,
                RngSpec::new(n as u64 * 1_000_003).for_index(i),
            ));
        }
    }
}

#[test]
fn three_letters() {
    for i in 0..500 {
        agrees_with_oracle(&random_dfa(6, 3, RngSpec::new(77).for_index(i)));
    }
}

#[test]
fn synchronization_check_matches_oracle() {
    for n in 1..=3 {
        for d in all_automata(n, 2) {
            assert_eq!(
                d.is_synchronizing(),
                shortest_reset_length(&d).unwrap().is_some()
            );
        }
    }
    for n in [4, 5] {
        for i in 0..20_000 {
            let d = random_dfa(n, 2, RngSpec::new(5).for_index(i));
            assert_eq!(
                d.is_synchronizing(),
                shortest_reset_length(&d).unwrap().is_some()
            );
        }
    }
}

fn arb_dfa(max_n: usize, max_k: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        proptest::collection::vec(0..n, n * k)
            .prop_map(move |cells| Dfa::from_fn(n, k, |q, a| cells[q * k + a]).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn search_matches_oracle(d in arb_dfa(8, 3)) {
        agrees_with_oracle(&d);
    }

    #[test]
    fn preimage_galois(d in arb_dfa(12, 3), bits in any::<u16>(), a in 0usize..3) {
        let n = d.states();
        let a = a % d.letters();
        let t = StateSet::from_states(n, (0..n).filter(|q| bits >> q & 1 == 1)).unwrap();
        let pre = d.inverse().apply_letter_inverse(&t, a).unwrap();
        for q in 0..n {
            prop_assert_eq!(pre.contains(q), t.contains(d.transition(q, a)));
        }
    }

    #[test]
    fn images_never_grow(d in arb_dfa(12, 3), bits in any::<u16>(), a in 0usize..3) {
        let n = d.states();
        let s = StateSet::from_states(n, (0..n).filter(|q| bits >> q & 1 == 1)).unwrap();
        prop_assert!(d.apply_letter(&s, a % d.letters()).unwrap().len() <= s.len());
    }

    #[test]
    fn subsets_synchronize_no_later(d in arb_dfa(8, 2), small in any::<u8>(), extra in any::<u8>()) {
        let n = d.states();
        let pick = |bits: u8| (0..n).filter(move |q| bits >> q & 1 == 1);
        let s = StateSet::from_states(n, pick(small)).unwrap();
        let t = StateSet::from_states(n, pick(small | extra)).unwrap();
        prop_assume!(!s.is_empty());
        let ws = shortest_word_from(&d, &s).unwrap();
        let wt = shortest_word_from(&d, &t).unwrap();
        if let Some(wt) = wt {
            prop_assert!(ws.unwrap().len() <= wt.len());
        }
    }
}
