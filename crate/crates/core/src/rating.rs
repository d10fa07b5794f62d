//! Finite idempotent hemirings (products of powersets of monoids) and the
//! rating maps built from a basis plus a finite set of regular languages.
//!
//! An element is a tuple of subsets, one per component monoid, packed into a
//! fixed-width bitset. Addition is bitwise or, the order is bitwise subset,
//! multiplication lifts the component monoids setwise.

use crate::basis::Basis;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::lang::Automaton;
use crate::monoid::{transition_monoid, MElem, Monoid};
use std::collections::HashMap;

/// Interned hemiring element id.
pub type ElemId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RElem(Box<[u64]>);

#[derive(Debug, Clone)]
pub struct Hemiring {
    pub components: Vec<Monoid>,
    offsets: Vec<usize>,
    total_bits: usize,
    words: usize,
}

impl Hemiring {
    pub fn new(components: Vec<Monoid>) -> Hemiring {
        let mut offsets = Vec::with_capacity(components.len());
        let mut total = 0usize;
        for c in &components {
            offsets.push(total);
            total += c.size;
        }
        Hemiring { components, offsets, total_bits: total, words: total.div_ceil(64) }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn total_bits(&self) -> usize {
        self.total_bits
    }

    pub fn zero(&self) -> RElem {
        RElem(vec![0u64; self.words].into_boxed_slice())
    }

    pub fn unit(&self) -> RElem {
        let mut r = self.zero();
        for (i, c) in self.components.iter().enumerate() {
            self.set_bit(&mut r, i, c.unit);
        }
        r
    }

    pub fn set_bit(&self, r: &mut RElem, component: usize, e: MElem) {
        let bit = self.offsets[component] + e as usize;
        r.0[bit / 64] |= 1u64 << (bit % 64);
    }

    pub fn has_bit(&self, r: &RElem, component: usize, e: MElem) -> bool {
        let bit = self.offsets[component] + e as usize;
        r.0[bit / 64] & (1u64 << (bit % 64)) != 0
    }

    /// Elements of one component present in `r`.
    pub fn component_elems(&self, r: &RElem, component: usize) -> Vec<MElem> {
        let size = self.components[component].size;
        (0..size as MElem).filter(|&e| self.has_bit(r, component, e)).collect()
    }

    pub fn add(&self, a: &RElem, b: &RElem) -> RElem {
        let mut out = a.clone();
        for (o, w) in out.0.iter_mut().zip(b.0.iter()) {
            *o |= w;
        }
        out
    }

    pub fn leq(&self, a: &RElem, b: &RElem) -> bool {
        a.0.iter().zip(b.0.iter()).all(|(x, y)| x & !y == 0)
    }

    pub fn mul(&self, a: &RElem, b: &RElem) -> RElem {
        let mut out = self.zero();
        for (i, c) in self.components.iter().enumerate() {
            for &s in &self.component_elems(a, i) {
                for &t in &self.component_elems(b, i) {
                    self.set_bit(&mut out, i, c.mul(s, t));
                }
            }
        }
        out
    }

    pub fn is_idempotent(&self, a: &RElem) -> bool {
        self.mul(a, a) == *a
    }

    /// First idempotent among the powers a, a², a³, …
    pub fn idempotent_power(&self, a: &RElem) -> RElem {
        let mut p = a.clone();
        let mut seen: HashMap<RElem, ()> = HashMap::new();
        loop {
            if self.is_idempotent(&p) {
                return p;
            }
            if seen.insert(p.clone(), ()).is_some() {
                unreachable!("power cycle of a finite hemiring contains an idempotent");
            }
            p = self.mul(&p, a);
        }
    }

    pub fn popcount(&self, a: &RElem) -> u32 {
        a.0.iter().map(|w| w.count_ones()).sum()
    }

    /// Number of elements below `a`; saturates at usize::MAX.
    pub fn downset_size(&self, a: &RElem) -> usize {
        let bits = self.popcount(a);
        if bits >= usize::BITS {
            usize::MAX
        } else {
            1usize << bits
        }
    }

    /// Materialize every element below `a`, failing past `cap` descendants.
    pub fn downset(&self, a: &RElem, cap: usize) -> Result<Vec<RElem>> {
        if self.downset_size(a) > cap {
            return Err(Error::InstanceTooLarge(format!(
                "downward closure of an element with {} bits exceeds cap {}",
                self.popcount(a),
                cap
            )));
        }
        let positions: Vec<usize> = (0..self.total_bits)
            .filter(|&b| a.0[b / 64] & (1u64 << (b % 64)) != 0)
            .collect();
        let mut out = Vec::with_capacity(1 << positions.len());
        for mask in 0u64..(1u64 << positions.len()) {
            let mut r = self.zero();
            for (j, &bit) in positions.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    r.0[bit / 64] |= 1u64 << (bit % 64);
                }
            }
            out.push(r);
        }
        Ok(out)
    }

    /// Maximal idempotent elements below `a`. An element is idempotent iff
    /// each component subset is setwise idempotent, so the search decomposes
    /// per component.
    pub fn maximal_idempotents_below(&self, a: &RElem, cap: usize) -> Result<Vec<RElem>> {
        let mut per_component: Vec<Vec<Vec<MElem>>> = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let elems = self.component_elems(a, i);
            if elems.len() >= usize::BITS as usize || (1usize << elems.len()) > cap {
                return Err(Error::InstanceTooLarge(format!(
                    "idempotent search below a component with {} elements exceeds cap {}",
                    elems.len(),
                    cap
                )));
            }
            let mut idem: Vec<Vec<MElem>> = Vec::new();
            for mask in 0u64..(1u64 << elems.len()) {
                let subset: Vec<MElem> = elems
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask & (1 << j) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                if set_idempotent(c, &subset) {
                    idem.push(subset);
                }
            }
            let maximal: Vec<Vec<MElem>> = idem
                .iter()
                .filter(|s| {
                    !idem.iter().any(|t| t.len() > s.len() && s.iter().all(|e| t.contains(e)))
                })
                .cloned()
                .collect();
            per_component.push(maximal);
        }
        let mut combos: Vec<RElem> = vec![self.zero()];
        for (i, options) in per_component.iter().enumerate() {
            if combos.len().saturating_mul(options.len()) > cap {
                return Err(Error::InstanceTooLarge(
                    "idempotent combination count exceeds cap".into(),
                ));
            }
            let mut next = Vec::with_capacity(combos.len() * options.len());
            for base in &combos {
                for opt in options {
                    let mut r = base.clone();
                    for &e in opt {
                        self.set_bit(&mut r, i, e);
                    }
                    next.push(r);
                }
            }
            combos = next;
        }
        Ok(combos)
    }

    /// All elements of the hemiring; only for small universes (tests).
    pub fn enumerate_all(&self, cap: usize) -> Result<Vec<RElem>> {
        let mut top = self.zero();
        for (i, c) in self.components.iter().enumerate() {
            for e in 0..c.size as MElem {
                self.set_bit(&mut top, i, e);
            }
        }
        self.downset(&top, cap)
    }

    pub fn render(&self, a: &RElem) -> String {
        let mut parts = Vec::new();
        for i in 0..self.components.len() {
            let elems: Vec<String> =
                self.component_elems(a, i).iter().map(|e| e.to_string()).collect();
            parts.push(format!("{{{}}}", elems.join(",")));
        }
        format!("({})", parts.join(","))
    }
}

fn set_idempotent(m: &Monoid, subset: &[MElem]) -> bool {
    let mut prod = vec![false; m.size];
    for &s in subset {
        for &t in subset {
            prod[m.mul(s, t) as usize] = true;
        }
    }
    let mut sub = vec![false; m.size];
    for &s in subset {
        sub[s as usize] = true;
    }
    prod == sub
}

/// Interning table for hemiring elements.
#[derive(Debug, Default)]
pub struct ElemTable {
    elems: Vec<RElem>,
    index: HashMap<RElem, ElemId>,
}

impl ElemTable {
    pub fn new() -> ElemTable {
        ElemTable::default()
    }

    pub fn intern(&mut self, e: RElem) -> ElemId {
        if let Some(&id) = self.index.get(&e) {
            return id;
        }
        let id = self.elems.len() as ElemId;
        self.index.insert(e.clone(), id);
        self.elems.push(e);
        id
    }

    pub fn get(&self, id: ElemId) -> &RElem {
        &self.elems[id as usize]
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// A nice compatible multiplicative rating map built from a basis and a
/// finite list of regular languages. Component 0 is always the basis class
/// monoid, so the class of a canonical image is its component-0 projection.
#[derive(Debug, Clone)]
pub struct RatingMap {
    pub hemiring: Hemiring,
    pub basis: Basis,
    pub letter_image: Vec<RElem>,
    pub eps_image: RElem,
    /// Accepting sets of the language components (indexed by language id).
    accepting: Vec<Vec<MElem>>,
}

impl RatingMap {
    pub fn language_count(&self) -> usize {
        self.accepting.len()
    }

    /// Extending morphism: ids of input languages whose component meets its
    /// accepting set. Component 0 never contributes.
    pub fn delta(&self, r: &RElem) -> Vec<usize> {
        let mut out = Vec::new();
        for (lang, acc) in self.accepting.iter().enumerate() {
            if acc.iter().any(|&e| self.hemiring.has_bit(r, lang + 1, e)) {
                out.push(lang);
            }
        }
        out
    }

    pub fn delta_is_full(&self, r: &RElem) -> bool {
        self.delta(r).len() == self.accepting.len()
    }

    /// Basis class of an element, defined when component 0 is a singleton
    /// (true of every image of a word).
    pub fn class_of(&self, r: &RElem) -> Option<MElem> {
        let elems = self.hemiring.component_elems(r, 0);
        if elems.len() == 1 {
            Some(elems[0])
        } else {
            None
        }
    }

    /// Image of a single word: the product of letter images.
    pub fn canonical_image(&self, w: &[u8]) -> RElem {
        let mut acc = self.eps_image.clone();
        for &b in w {
            let i = self.basis.alphabet().index_of(b).expect("letter in alphabet");
            acc = self.hemiring.mul(&acc, &self.letter_image[i]);
        }
        acc
    }

    /// Image of a regular language: the sum of the images of its words,
    /// computed by reachability over (state, image) pairs.
    pub fn rho_of_regular(&self, k: &Automaton) -> RElem {
        assert_eq!(
            k.alphabet,
            *self.basis.alphabet(),
            "rating map and language alphabets must agree"
        );
        let mut table = ElemTable::new();
        let eps = table.intern(self.eps_image.clone());
        let mut frontier: Vec<(usize, ElemId)> = Vec::new();
        let mut seen: std::collections::HashSet<(usize, ElemId)> = Default::default();
        for &q in &k.initial {
            if seen.insert((q, eps)) {
                frontier.push((q, eps));
            }
        }
        let mut acc = self.hemiring.zero();
        while let Some((q, rid)) = frontier.pop() {
            if k.accepting.contains(&q) {
                acc = self.hemiring.add(&acc, table.get(rid));
            }
            for &(p, b, dst) in &k.transitions {
                if p != q {
                    continue;
                }
                let i = self.basis.alphabet().index_of(b).unwrap();
                let next = self.hemiring.mul(table.get(rid), &self.letter_image[i]);
                let nid = table.intern(next);
                if seen.insert((dst, nid)) {
                    frontier.push((dst, nid));
                }
            }
        }
        acc
    }

    /// Image of a basis class language.
    pub fn rho_of_class(&self, class: MElem) -> RElem {
        self.rho_of_regular(&self.basis.class_language(class))
    }
}

/// Build the rating map extending a finite list of languages: one powerset
/// component per language's transition monoid, after the class monoid.
pub fn build_rating_map(
    basis: &Basis,
    languages: &[Automaton],
    caps: &Caps,
) -> Result<RatingMap> {
    let alphabet = basis.alphabet().clone();
    let mut components = vec![basis.class_monoid().clone()];
    let mut letter_elems: Vec<Vec<MElem>> = (0..alphabet.len())
        .map(|i| vec![basis.letter_class(i)])
        .collect();
    let mut accepting = Vec::new();
    for lang in languages {
        if lang.alphabet != alphabet {
            return Err(Error::AlphabetMismatch("input language over a different alphabet".into()));
        }
        let m = transition_monoid(lang, caps.monoid_cap)?;
        for (i, per_letter) in letter_elems.iter_mut().enumerate() {
            per_letter.push(m.letter_image[i]);
        }
        accepting.push(
            (0..m.monoid.size as MElem).filter(|&e| m.accepting[e as usize]).collect::<Vec<_>>(),
        );
        components.push(m.monoid);
    }
    let hemiring = Hemiring::new(components);
    let eps_image = hemiring.unit();
    let letter_image: Vec<RElem> = letter_elems
        .iter()
        .map(|per_comp| {
            let mut r = hemiring.zero();
            for (c, &e) in per_comp.iter().enumerate() {
                hemiring.set_bit(&mut r, c, e);
            }
            r
        })
        .collect();
    Ok(RatingMap { hemiring, basis: basis.clone(), letter_image, eps_image, accepting })
}
