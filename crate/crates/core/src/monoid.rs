//! Finite monoids, recognizing morphisms, the transition-monoid construction
//! and the compatibility product against a basis class monoid.

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::lang::{Alphabet, Automaton};
use serde::Serialize;
use std::collections::HashMap;

pub type MElem = u16;

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Monoid {
    pub size: usize,
    pub unit: MElem,
    /// Row-major table: `table[x * size + y] = x · y`.
    pub table: Vec<MElem>,
}

impl Monoid {
    pub fn trivial() -> Monoid {
        Monoid { size: 1, unit: 0, table: vec![0] }
    }

    pub fn mul(&self, x: MElem, y: MElem) -> MElem {
        self.table[x as usize * self.size + y as usize]
    }

    pub fn is_idempotent(&self, x: MElem) -> bool {
        self.mul(x, x) == x
    }

    /// x^k for the least k making the power idempotent. Always exists in a
    /// finite monoid; the search is bounded by 2·size + 2 steps.
    pub fn idempotent_power(&self, x: MElem) -> MElem {
        let mut p = x;
        for _ in 0..(2 * self.size + 2) {
            if self.is_idempotent(p) {
                return p;
            }
            p = self.mul(p, x);
        }
        unreachable!("finite monoid has an idempotent power");
    }

    pub fn pow(&self, x: MElem, k: usize) -> MElem {
        let mut acc = self.unit;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Least p ≥ 1 such that x^p is idempotent for every element.
    pub fn omega_exponent(&self) -> usize {
        // x^p idempotent iff p is a multiple of the cycle length of x's power
        // sequence and at least its preperiod.
        let mut lcm: usize = 1;
        let mut max_index: usize = 1;
        for x in 0..self.size as MElem {
            let mut seen: HashMap<MElem, usize> = HashMap::new();
            let mut p = x;
            let mut k = 1usize;
            let (index, cycle) = loop {
                if let Some(&first) = seen.get(&p) {
                    break (first, k - first);
                }
                seen.insert(p, k);
                p = self.mul(p, x);
                k += 1;
            };
            lcm = lcm / gcd(lcm, cycle) * cycle;
            max_index = max_index.max(index);
        }
        let mut p = lcm;
        while p < max_index {
            p += lcm;
        }
        p
    }

    /// Check associativity and unit laws. Exhaustive; meant for small monoids
    /// such as basis class monoids and hand-built test fixtures.
    pub fn validate(&self) -> Result<()> {
        if self.table.len() != self.size * self.size {
            return Err(Error::InvalidBasis("multiplication table has wrong shape".into()));
        }
        if self.unit as usize >= self.size {
            return Err(Error::InvalidBasis("unit out of range".into()));
        }
        for &v in &self.table {
            if v as usize >= self.size {
                return Err(Error::InvalidBasis("table entry out of range".into()));
            }
        }
        for x in 0..self.size as MElem {
            if self.mul(self.unit, x) != x || self.mul(x, self.unit) != x {
                return Err(Error::InvalidBasis(format!("unit is not neutral on {x}")));
            }
        }
        for x in 0..self.size as MElem {
            for y in 0..self.size as MElem {
                for z in 0..self.size as MElem {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::InvalidBasis(format!(
                            "multiplication not associative at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A morphism from words into a finite monoid, with an accepting set, and
/// optionally one basis class per element (the compatibility tag: every word
/// mapping to the element lies in that class).
#[derive(Debug, Clone)]
pub struct Morphism {
    pub alphabet: Alphabet,
    pub monoid: Monoid,
    /// Image of each alphabet letter, indexed by letter position.
    pub letter_image: Vec<MElem>,
    pub accepting: Vec<bool>,
    pub class_of: Option<Vec<MElem>>,
}

impl Morphism {
    pub fn image_of_word(&self, w: &[u8]) -> MElem {
        let mut acc = self.monoid.unit;
        for &b in w {
            let i = self.alphabet.index_of(b).expect("letter in alphabet");
            acc = self.monoid.mul(acc, self.letter_image[i]);
        }
        acc
    }

    pub fn accepts_elem(&self, s: MElem) -> bool {
        self.accepting[s as usize]
    }

    /// Compatibility tag of an element. Panics when tags are absent; callers
    /// requiring tags take a compatible morphism by contract.
    pub fn class_of(&self, s: MElem) -> MElem {
        self.class_of.as_ref().expect("compatible morphism")[s as usize]
    }
}

/// Build the transition monoid of the minimal complete DFA of a language,
/// together with the recognizing morphism.
pub fn transition_monoid(a: &Automaton, cap: usize) -> Result<Morphism> {
    let dfa = a.minimize(crate::lang::DEFAULT_DETERMINIZE_CAP)?;
    let n = dfa.state_count;
    let initial = *dfa.initial.iter().next().expect("dfa has an initial state");

    // per-letter state maps
    let letters = dfa.alphabet.letters().to_vec();
    let mut letter_map: Vec<Vec<u16>> = vec![vec![0; n]; letters.len()];
    for &(p, b, q) in &dfa.transitions {
        let i = dfa.alphabet.index_of(b).unwrap();
        letter_map[i][p] = q as u16;
    }

    let identity: Vec<u16> = (0..n as u16).collect();
    let mut index: HashMap<Vec<u16>, MElem> = HashMap::new();
    let mut elems: Vec<Vec<u16>> = Vec::new();
    index.insert(identity.clone(), 0);
    elems.push(identity);

    let mut letter_image = vec![0 as MElem; letters.len()];
    let mut frontier = 0usize;
    while frontier < elems.len() {
        let cur = elems[frontier].clone();
        for (i, lm) in letter_map.iter().enumerate() {
            let next: Vec<u16> = cur.iter().map(|&q| lm[q as usize]).collect();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if elems.len() >= cap {
                        return Err(Error::MonoidTooLarge { size: elems.len() + 1, cap });
                    }
                    let id = elems.len() as MElem;
                    index.insert(next.clone(), id);
                    elems.push(next);
                    id
                }
            };
            if frontier == 0 {
                letter_image[i] = id;
            }
        }
        frontier += 1;
    }

    let size = elems.len();
    let mut table = vec![0 as MElem; size * size];
    for x in 0..size {
        for y in 0..size {
            let composed: Vec<u16> = elems[x].iter().map(|&q| elems[y][q as usize]).collect();
            table[x * size + y] = *index.get(&composed).expect("composition stays generated");
        }
    }

    let accepting: Vec<bool> = elems
        .iter()
        .map(|t| dfa.accepting.contains(&(t[initial] as usize)))
        .collect();

    Ok(Morphism {
        alphabet: dfa.alphabet.clone(),
        monoid: Monoid { size, unit: 0, table },
        letter_image,
        accepting,
        class_of: None,
    })
}

/// Product of a morphism with the basis class monoid, pruned to the generated
/// part. The result recognizes the same language and carries class tags.
pub fn make_c_compatible(m: &Morphism, basis: &Basis, cap: usize) -> Result<Morphism> {
    if m.alphabet != *basis.alphabet() {
        return Err(Error::AlphabetMismatch("morphism and basis alphabets differ".into()));
    }
    let nc = basis.class_monoid();
    let letters = m.alphabet.len();
    let gen: Vec<(MElem, MElem)> =
        (0..letters).map(|i| (m.letter_image[i], basis.letter_class(i))).collect();

    let unit_pair = (m.monoid.unit, nc.unit);
    let mut index: HashMap<(MElem, MElem), MElem> = HashMap::new();
    let mut elems: Vec<(MElem, MElem)> = Vec::new();
    index.insert(unit_pair, 0);
    elems.push(unit_pair);
    let mut letter_image = vec![0 as MElem; letters];

    let mut frontier = 0usize;
    while frontier < elems.len() {
        let (s, c) = elems[frontier];
        for (i, &(gs, gc)) in gen.iter().enumerate() {
            let next = (m.monoid.mul(s, gs), nc.mul(c, gc));
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if elems.len() >= cap {
                        return Err(Error::MonoidTooLarge { size: elems.len() + 1, cap });
                    }
                    let id = elems.len() as MElem;
                    index.insert(next, id);
                    elems.push(next);
                    id
                }
            };
            if frontier == 0 {
                letter_image[i] = id;
            }
        }
        frontier += 1;
    }

    let size = elems.len();
    let mut table = vec![0 as MElem; size * size];
    for x in 0..size {
        for y in 0..size {
            let (sx, cx) = elems[x];
            let (sy, cy) = elems[y];
            let prod = (m.monoid.mul(sx, sy), nc.mul(cx, cy));
            table[x * size + y] = *index.get(&prod).expect("generated part is closed");
        }
    }

    let accepting: Vec<bool> = elems.iter().map(|&(s, _)| m.accepting[s as usize]).collect();
    let class_of: Vec<MElem> = elems.iter().map(|&(_, c)| c).collect();

    Ok(Morphism {
        alphabet: m.alphabet.clone(),
        monoid: Monoid { size, unit: 0, table },
        letter_image,
        accepting,
        class_of: Some(class_of),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{builtin_basis, BasisName};
    use crate::gen::random_word;
    use crate::lang::{compile, parse_regex};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn ab() -> Alphabet {
        Alphabet::from_str("ab").unwrap()
    }

    fn aut(src: &str) -> Automaton {
        let a = ab();
        compile(&parse_regex(src, &a).unwrap(), &a)
    }

    #[test]
    fn transition_monoid_of_universal_is_trivial() {
        let m = transition_monoid(&Automaton::universal(ab()), 64).unwrap();
        assert_eq!(m.monoid.size, 1);
        assert!(m.accepting[0]);
    }

    #[test]
    fn transition_monoid_sizes_match_known_examples() {
        let m = transition_monoid(&aut("(ab)*"), 64).unwrap();
        assert_eq!(m.monoid.size, 6);
        let m2 = transition_monoid(&aut("(a|b)*a(a|b)*"), 64).unwrap();
        assert_eq!(m2.monoid.size, 2);
    }

    #[test]
    fn recognition_matches_automaton() {
        for src in ["(ab)*", "(a|b)*a(a|b)*", "a*b|%e"] {
            let a = aut(src);
            let m = transition_monoid(&a, 256).unwrap();
            for w in Automaton::universal(ab()).words_up_to(6) {
                assert_eq!(
                    a.accepts(&w),
                    m.accepts_elem(m.image_of_word(&w)),
                    "word {:?} of {src}",
                    String::from_utf8_lossy(&w)
                );
            }
        }
    }

    #[test]
    fn morphism_law_exhaustive() {
        let m = transition_monoid(&aut("(ab)*"), 64).unwrap();
        let words = Automaton::universal(ab()).words_up_to(4);
        for u in &words {
            for v in &words {
                let uv: Vec<u8> = u.iter().chain(v.iter()).copied().collect();
                assert_eq!(
                    m.image_of_word(&uv),
                    m.monoid.mul(m.image_of_word(u), m.image_of_word(v))
                );
            }
        }
    }

    #[test]
    fn idempotent_power_properties() {
        let m = transition_monoid(&aut("(ab)*"), 64).unwrap();
        let unit = m.monoid.unit;
        assert_eq!(m.monoid.idempotent_power(unit), unit);
        for x in 0..m.monoid.size as MElem {
            let e = m.monoid.idempotent_power(x);
            assert_eq!(m.monoid.mul(e, e), e);
            if m.monoid.is_idempotent(x) {
                assert_eq!(e, x);
            }
        }
    }

    #[test]
    fn omega_power_in_cyclic_group_of_order_three() {
        // Z/3 as a monoid: elements 0,1,2 with addition mod 3, unit 0.
        let mut table = vec![0 as MElem; 9];
        for x in 0..3u16 {
            for y in 0..3u16 {
                table[(x * 3 + y) as usize] = (x + y) % 3;
            }
        }
        let z3 = Monoid { size: 3, unit: 0, table };
        z3.validate().unwrap();
        assert_eq!(z3.idempotent_power(1), 0);
        assert_eq!(z3.omega_exponent(), 3);
    }

    #[test]
    fn monoid_construction_respects_the_cap() {
        match transition_monoid(&aut("(ab)*"), 3) {
            Err(crate::error::Error::MonoidTooLarge { cap: 3, .. }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn compatibility_product_with_trivial_basis_keeps_size() {
        let basis = builtin_basis(BasisName::St0, &ab()).unwrap();
        let m = transition_monoid(&aut("(ab)*"), 64).unwrap();
        let mc = make_c_compatible(&m, &basis, 4096).unwrap();
        assert_eq!(mc.monoid.size, m.monoid.size);
        assert!(mc.class_of.is_some());
    }

    #[test]
    fn compatibility_product_with_alphabet_basis() {
        let basis = builtin_basis(BasisName::At, &ab()).unwrap();
        let m = transition_monoid(&aut("(a|b)*a(a|b)*"), 64).unwrap();
        assert_eq!(m.monoid.size, 2);
        let mc = make_c_compatible(&m, &basis, 4096).unwrap();
        assert!(mc.monoid.size <= 8);
        // contract: the tag of each reachable element is the class of any
        // word mapping to it
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let w = random_word(&ab(), 10, &mut rng);
            let s = mc.image_of_word(&w);
            assert_eq!(mc.class_of(s), basis.class_of_word(&w));
        }
    }

    #[test]
    fn compatibility_product_preserves_language() {
        let basis = builtin_basis(BasisName::At, &ab()).unwrap();
        let a = aut("(ab)*|a*");
        let m = transition_monoid(&a, 256).unwrap();
        let mc = make_c_compatible(&m, &basis, 4096).unwrap();
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..200 {
            let w = random_word(&ab(), 8, &mut rng);
            assert_eq!(a.accepts(&w), mc.accepts_elem(mc.image_of_word(&w)));
        }
    }
}
