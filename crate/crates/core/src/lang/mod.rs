//! Regular-language engine: regexes, automata, Boolean and quotient
//! operations. Everything downstream consumes these.

mod automaton;
mod regex;

pub use automaton::{compile, Automaton, NfaJson, DEFAULT_DETERMINIZE_CAP};
pub use regex::{parse_regex, Alphabet, Regex};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_regex, random_word};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn ab() -> Alphabet {
        Alphabet::from_str("ab").unwrap()
    }

    fn aut(src: &str) -> Automaton {
        let a = ab();
        compile(&parse_regex(src, &a).unwrap(), &a)
    }

    /// Independent oracle: direct recursive regex matching, memoized on
    /// (node pointer region, word range) implicitly through small inputs.
    pub(crate) fn naive_match(re: &Regex, w: &[u8]) -> bool {
        match re {
            Regex::Empty => false,
            Regex::Epsilon => w.is_empty(),
            Regex::Letter(a) => w == [*a],
            Regex::Union(l, r) => naive_match(l, w) || naive_match(r, w),
            Regex::Concat(l, r) => {
                (0..=w.len()).any(|i| naive_match(l, &w[..i]) && naive_match(r, &w[i..]))
            }
            Regex::Star(c) => {
                if w.is_empty() {
                    return true;
                }
                (1..=w.len()).any(|i| naive_match(c, &w[..i]) && naive_match(re, &w[i..]))
            }
        }
    }

    #[test]
    fn compile_empty_and_epsilon() {
        assert!(aut("%0").is_empty());
        let eps = aut("%e");
        assert!(eps.accepts(b""));
        assert!(!eps.accepts(b"a"));
    }

    #[test]
    fn compile_ab_star() {
        let a = aut("(ab)*");
        assert!(a.accepts(b""));
        assert!(a.accepts(b"ab"));
        assert!(a.accepts(b"abab"));
        assert!(!a.accepts(b"a"));
        assert!(!a.accepts(b"ba"));
        assert!(!a.accepts(b"abba"));
    }

    #[test]
    fn complement_is_involutive() {
        let a = aut("(a|b)*a(a|b)*");
        let cc = a.complement().unwrap().complement().unwrap();
        assert!(a.language_eq(&cc).unwrap());
    }

    #[test]
    fn left_quotient_examples() {
        let q = aut("(ab)*").left_quotient(b"a");
        assert!(q.accepts(b"b"));
        assert!(q.accepts(b"bab"));
        assert!(!q.accepts(b""));
    }

    #[test]
    fn intersect_ab_star_with_aa_factor_is_empty() {
        let l = aut("(ab)*");
        let r = aut("(a|b)*aa(a|b)*");
        let prod = l.product_intersect(&r).unwrap();
        assert!(prod.is_empty());
        assert!(prod.words_up_to(8).is_empty());
    }

    #[test]
    fn upward_closure_of_single_word() {
        let up = Automaton::word(ab(), b"ab").upward_subword_closure();
        let expected = aut("(a|b)*a(a|b)*b(a|b)*");
        assert!(up.language_eq(&expected).unwrap());
        for w in expected.words_up_to(6) {
            assert!(up.accepts(&w));
        }
    }

    #[test]
    fn upward_closure_with_epsilon_is_universal() {
        for src in ["%e", "(ab)*"] {
            let up = aut(src).upward_subword_closure();
            assert!(up.language_eq(&Automaton::universal(ab())).unwrap(), "source {src}");
        }
    }

    fn is_subword(u: &[u8], v: &[u8]) -> bool {
        let mut i = 0;
        for &b in v {
            if i < u.len() && u[i] == b {
                i += 1;
            }
        }
        i == u.len()
    }

    #[test]
    fn upward_closure_is_upward_closed() {
        let up = aut("ab|ba*").upward_subword_closure();
        let words: Vec<Vec<u8>> = Automaton::universal(ab()).words_up_to(8);
        for u in &words {
            if u.len() > 4 || !up.accepts(u) {
                continue;
            }
            for v in &words {
                if is_subword(u, v) {
                    assert!(up.accepts(v), "{u:?} accepted but superword {v:?} rejected");
                }
            }
        }
    }

    #[test]
    fn compiled_matches_naive_oracle_on_random_inputs() {
        let mut rng = StdRng::seed_from_u64(11);
        let alphabet = ab();
        for _ in 0..120 {
            let re = random_regex(&alphabet, 5, &mut rng);
            let a = compile(&re, &alphabet);
            for _ in 0..24 {
                let w = random_word(&alphabet, 8, &mut rng);
                assert_eq!(
                    a.accepts(&w),
                    naive_match(&re, &w),
                    "mismatch on regex {re} word {:?}",
                    String::from_utf8_lossy(&w)
                );
            }
        }
    }

    #[test]
    fn minimize_preserves_language_and_reaches_known_sizes() {
        let mut rng = StdRng::seed_from_u64(13);
        let alphabet = ab();
        for _ in 0..40 {
            let re = random_regex(&alphabet, 4, &mut rng);
            let a = compile(&re, &alphabet);
            let m = a.minimize(1 << 16).unwrap();
            assert!(m.deterministic && m.is_complete());
            assert!(a.language_eq(&m).unwrap(), "regex {re}");
        }
        // the complete minimal DFAs: 3 states for (ab)*, 2 for a-somewhere
        assert_eq!(aut("(ab)*").minimize(1 << 16).unwrap().state_count, 3);
        assert_eq!(aut("(a|b)*a(a|b)*").minimize(1 << 16).unwrap().state_count, 2);
    }

    #[test]
    fn determinize_preserves_language_and_complement_flips() {
        let mut rng = StdRng::seed_from_u64(12);
        let alphabet = ab();
        for _ in 0..40 {
            let re = random_regex(&alphabet, 4, &mut rng);
            let a = compile(&re, &alphabet);
            let d = a.determinize().unwrap();
            let c = a.complement().unwrap();
            for _ in 0..20 {
                let w = random_word(&alphabet, 7, &mut rng);
                assert_eq!(a.accepts(&w), d.accepts(&w));
                assert_eq!(a.accepts(&w), !c.accepts(&w));
            }
        }
    }

    #[test]
    fn quotients_agree_with_definition_exhaustively() {
        let a = aut("(ab)*|a*b");
        let words = Automaton::universal(ab()).words_up_to(4);
        for w in &words {
            let lq = a.left_quotient(w);
            let rq = a.right_quotient(w);
            for u in &words {
                let wu: Vec<u8> = w.iter().chain(u.iter()).copied().collect();
                let uw: Vec<u8> = u.iter().chain(w.iter()).copied().collect();
                assert_eq!(lq.accepts(u), a.accepts(&wu));
                assert_eq!(rq.accepts(u), a.accepts(&uw));
            }
        }
    }

    #[test]
    fn nfa_json_round_trip() {
        let a = aut("(ab)*a");
        let json = serde_json::to_string(&NfaJson::from_automaton(&a)).unwrap();
        let back: NfaJson = serde_json::from_str(&json).unwrap();
        assert!(back.to_automaton().unwrap().language_eq(&a).unwrap());
    }

    #[test]
    fn determinization_fails_fast_past_the_state_cap() {
        let a = aut("(a|b)*a(a|b)(a|b)(a|b)");
        match a.determinize_with_cap(4) {
            Err(crate::error::Error::DeterminizationTooLarge { cap: 4 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn regex_strategy() -> impl Strategy<Value = Regex> {
            let leaf = prop_oneof![
                4 => prop_oneof![Just(Regex::Letter(b'a')), Just(Regex::Letter(b'b'))],
                1 => Just(Regex::Epsilon),
                1 => Just(Regex::Empty),
            ];
            leaf.prop_recursive(5, 32, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone())
                        .prop_map(|(l, r)| Regex::union(l, r)),
                    (inner.clone(), inner.clone())
                        .prop_map(|(l, r)| Regex::concat(l, r)),
                    inner.prop_map(Regex::star),
                ]
            })
        }

        proptest! {
            #[test]
            fn automaton_agrees_with_recursive_matching(
                re in regex_strategy(),
                words in proptest::collection::vec("[ab]{0,8}", 8),
            ) {
                let alphabet = ab();
                let a = compile(&re, &alphabet);
                for w in &words {
                    prop_assert_eq!(a.accepts(w.as_bytes()), naive_match(&re, w.as_bytes()));
                }
            }

            #[test]
            fn printing_round_trips_through_the_parser(re in regex_strategy()) {
                // printing flattens associativity, so the reparse is only
                // structurally identical for parser-shaped trees; language
                // equality holds for all of them
                let alphabet = ab();
                let printed = re.to_string();
                let reparsed = parse_regex(&printed, &alphabet).unwrap();
                let a = compile(&re, &alphabet);
                let b = compile(&reparsed, &alphabet);
                prop_assert!(a.language_eq(&b).unwrap());
                let again = parse_regex(&reparsed.to_string(), &alphabet).unwrap();
                prop_assert_eq!(reparsed, again);
            }
        }
    }
}
