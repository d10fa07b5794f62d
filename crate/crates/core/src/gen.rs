//! Random instance generation for the differential test harness.

use crate::lang::{Alphabet, Automaton, Regex};
use rand::Rng;

pub fn random_word<R: Rng>(alphabet: &Alphabet, max_len: usize, rng: &mut R) -> Vec<u8> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| alphabet.letters()[rng.gen_range(0..alphabet.len())])
        .collect()
}

pub fn random_regex<R: Rng>(alphabet: &Alphabet, max_depth: usize, rng: &mut R) -> Regex {
    if max_depth == 0 {
        // Leaves are biased towards letters; %0 and %e stay rare.
        return match rng.gen_range(0..10) {
            0 => Regex::Epsilon,
            1 => Regex::Empty,
            _ => Regex::Letter(alphabet.letters()[rng.gen_range(0..alphabet.len())]),
        };
    }
    match rng.gen_range(0..8) {
        0 | 1 => Regex::union(
            random_regex(alphabet, max_depth - 1, rng),
            random_regex(alphabet, max_depth - 1, rng),
        ),
        2..=4 => Regex::concat(
            random_regex(alphabet, max_depth - 1, rng),
            random_regex(alphabet, max_depth - 1, rng),
        ),
        5 | 6 => Regex::star(random_regex(alphabet, max_depth - 1, rng)),
        _ => random_regex(alphabet, 0, rng),
    }
}

pub fn random_nfa<R: Rng>(alphabet: &Alphabet, max_states: usize, rng: &mut R) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let mut transitions = Vec::new();
    for p in 0..n {
        for &a in alphabet.letters() {
            // roughly 1.2 outgoing edges per (state, letter)
            for q in 0..n {
                if rng.gen_bool((1.2 / n as f64).min(1.0)) {
                    transitions.push((p, a, q));
                }
            }
        }
    }
    let initial = vec![rng.gen_range(0..n)];
    let mut accepting = Vec::new();
    for q in 0..n {
        if rng.gen_bool(0.4) {
            accepting.push(q);
        }
    }
    if accepting.is_empty() {
        accepting.push(rng.gen_range(0..n));
    }
    Automaton::new(alphabet.clone(), n, initial, accepting, transitions)
        .expect("generated automaton is valid")
}
