//! Least-fixpoint saturation for the polynomial closure of the Boolean
//! closure of a polynomial closure. The state is a pair: a downward-closed
//! subset of M × R, and a family of stored pairs (hemiring element, ideal
//! over M × R) closed under a second layer of operations.
//!
//! Idempotent premises are fired through idempotent powers of stored maximal
//! elements: an idempotent pair set E below a stored T satisfies E = E^k ⊆
//! T^k for the idempotent power T^k, so outputs from dominated premises are
//! dominated by the fired ones. Idempotents strictly below a maximal element
//! inside a stored T-component do not reduce this way (T-components are not
//! closed under multiplication), so those are enumerated per component.

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::imprint::PairIdeal;
use crate::monoid::{MElem, Morphism};
use crate::rating::{ElemId, ElemTable, RElem, RatingMap};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::HashMap;

/// A stored pair: hemiring element plus a downward-closed pair set.
#[derive(Debug, Clone)]
pub struct TPair {
    pub f: ElemId,
    pub t: PairIdeal,
}

#[derive(Debug)]
pub struct PbpolResult {
    /// The computed optimal pointed imprint (maximal antichain).
    pub s: PairIdeal,
    /// Stored maximal pairs of the auxiliary layer.
    pub tpairs: Vec<TPair>,
    pub elems: ElemTable,
    pub iterations: usize,
}

impl PbpolResult {
    pub fn canonical_pairs(&self) -> Vec<(MElem, RElem)> {
        self.s.canonical_pairs(&self.elems)
    }

    pub fn canonical_tpairs(&self) -> Vec<(RElem, Vec<(MElem, RElem)>)> {
        let mut out: Vec<(RElem, Vec<(MElem, RElem)>)> = self
            .tpairs
            .iter()
            .map(|tp| (self.elems.get(tp.f).clone(), tp.t.canonical_pairs(&self.elems)))
            .collect();
        out.sort();
        out
    }
}

struct Slot {
    f: ElemId,
    t: PairIdeal,
    alive: bool,
}

struct PbpolEngine<'a> {
    alpha: &'a Morphism,
    rm: &'a RatingMap,
    caps: &'a Caps,
    s: PairIdeal,
    table: ElemTable,
    slots: Vec<Slot>,
    s_work: Vec<(MElem, ElemId)>,
    tt_work: Vec<usize>,
    additions: usize,
    idem_below: HashMap<ElemId, Vec<RElem>>,
    idem_pow: HashMap<PairIdeal, PairIdeal>,
    rng: Option<StdRng>,
}

impl<'a> PbpolEngine<'a> {
    fn bump(&mut self) -> Result<()> {
        self.additions += 1;
        if self.additions > self.caps.iteration_cap {
            return Err(Error::IterationCapExceeded { cap: self.caps.iteration_cap });
        }
        Ok(())
    }

    fn add_s(&mut self, se: MElem, r: &RElem) -> Result<()> {
        if self.s.insert(se, r, &self.rm.hemiring, &mut self.table) {
            self.bump()?;
            if self.s.len() > self.caps.stored_cap {
                return Err(Error::InstanceTooLarge(format!(
                    "pair antichain exceeds {}",
                    self.caps.stored_cap
                )));
            }
            let id = self.table.intern(r.clone());
            self.s_work.push((se, id));
        }
        Ok(())
    }

    fn add_tt(&mut self, f: &RElem, t: PairIdeal) -> Result<()> {
        let h = &self.rm.hemiring;
        let fid = self.table.intern(f.clone());
        for slot in self.slots.iter().filter(|s| s.alive && s.f == fid) {
            if t.subset_of(&slot.t, h, &self.table) {
                return Ok(());
            }
        }
        for slot in self.slots.iter_mut() {
            if slot.alive && slot.f == fid && slot.t.subset_of(&t, &self.rm.hemiring, &self.table)
            {
                slot.alive = false;
            }
        }
        self.bump()?;
        let alive = self.slots.iter().filter(|s| s.alive).count();
        if alive + 1 > self.caps.stored_cap {
            return Err(Error::InstanceTooLarge(format!(
                "stored pair family exceeds {}",
                self.caps.stored_cap
            )));
        }
        self.slots.push(Slot { f: fid, t, alive: true });
        self.tt_work.push(self.slots.len() - 1);
        Ok(())
    }

    fn pop<T>(work: &mut Vec<T>, rng: &mut Option<StdRng>) -> Option<T> {
        if work.is_empty() {
            return None;
        }
        match rng {
            Some(rng) => {
                let i = rng.gen_range(0..work.len());
                Some(work.swap_remove(i))
            }
            None => work.pop(),
        }
    }

    /// Close the pair set under multiplication.
    fn saturate_s(&mut self) -> Result<()> {
        let h = self.rm.hemiring.clone();
        let m = self.alpha.monoid.clone();
        loop {
            let mut rng = self.rng.take();
            let popped = Self::pop(&mut self.s_work, &mut rng);
            self.rng = rng;
            let Some((se, rid)) = popped else { break };
            if !self.s.row(se).contains(&rid) {
                continue;
            }
            let r = self.table.get(rid).clone();
            for (qe, qid) in self.s.max_pairs() {
                let q = self.table.get(qid).clone();
                self.add_s(m.mul(se, qe), &h.mul(&r, &q))?;
                self.add_s(m.mul(qe, se), &h.mul(&q, &r))?;
            }
        }
        Ok(())
    }

    /// Close the stored pair family under multiplication.
    fn saturate_tt(&mut self) -> Result<()> {
        let h = self.rm.hemiring.clone();
        let m = self.alpha.monoid.clone();
        loop {
            let mut rng = self.rng.take();
            let popped = Self::pop(&mut self.tt_work, &mut rng);
            self.rng = rng;
            let Some(idx) = popped else { break };
            if !self.slots[idx].alive {
                continue;
            }
            let (f1, t1) = (self.slots[idx].f, self.slots[idx].t.clone());
            let others: Vec<(ElemId, PairIdeal)> = self
                .slots
                .iter()
                .filter(|s| s.alive)
                .map(|s| (s.f, s.t.clone()))
                .collect();
            let f1_elem = self.table.get(f1).clone();
            for (f2, t2) in others {
                let f2_elem = self.table.get(f2).clone();
                let t12 = t1.special_mult(&t2, &m, &h, &mut self.table);
                self.add_tt(&h.mul(&f1_elem, &f2_elem), t12)?;
                let t21 = t2.special_mult(&t1, &m, &h, &mut self.table);
                self.add_tt(&h.mul(&f2_elem, &f1_elem), t21)?;
            }
        }
        Ok(())
    }

    fn maximal_idempotents(&mut self, id: ElemId) -> Result<Vec<RElem>> {
        if let Some(hit) = self.idem_below.get(&id) {
            return Ok(hit.clone());
        }
        let v = self
            .rm
            .hemiring
            .maximal_idempotents_below(self.table.get(id), self.caps.downset_cap)?;
        self.idem_below.insert(id, v.clone());
        Ok(v)
    }

    /// Generate pair-set elements from stored pairs: for a stored (r, T) and
    /// an idempotent (e, f) in T, the element (e, f·(r + ρ(ε))·f).
    fn fire_lower_closure(&mut self) -> Result<()> {
        let h = self.rm.hemiring.clone();
        let m = self.alpha.monoid.clone();
        let live: Vec<(ElemId, PairIdeal)> = self
            .slots
            .iter()
            .filter(|s| s.alive)
            .map(|s| (s.f, s.t.clone()))
            .collect();
        for (fid, t) in live {
            let base = h.add(self.table.get(fid), &self.rm.eps_image);
            for e in 0..m.size as MElem {
                if !m.is_idempotent(e) || t.row(e).is_empty() {
                    continue;
                }
                let row: Vec<ElemId> = t.row(e).to_vec();
                for rid in row {
                    for fi in self.maximal_idempotents(rid)? {
                        let out = h.mul(&h.mul(&fi, &base), &fi);
                        self.add_s(e, &out)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Generate stored pairs from the pair set: for a stored idempotent
    /// (f, T), combine the idempotent power of T around the pairs of the set
    /// sharing f's class.
    fn fire_nested_closure(&mut self) -> Result<()> {
        let h = self.rm.hemiring.clone();
        let m = self.alpha.monoid.clone();
        let live: Vec<(ElemId, PairIdeal)> = self
            .slots
            .iter()
            .filter(|s| s.alive)
            .map(|s| (s.f, s.t.clone()))
            .collect();
        for (fid, t) in live {
            let f = self.table.get(fid).clone();
            if !h.is_idempotent(&f) {
                continue;
            }
            let fclass = self
                .rm
                .class_of(&f)
                .expect("stored first coordinates are canonical images");
            let tpow = match self.idem_pow.get(&t) {
                Some(p) => p.clone(),
                None => {
                    let p = t.idempotent_power(&m, &h, &mut self.table);
                    self.idem_pow.insert(t.clone(), p.clone());
                    p
                }
            };
            let mut t_f = PairIdeal::new(m.size);
            for (se, rid) in self.s.max_pairs() {
                if self.alpha.class_of(se) == fclass {
                    let r = self.table.get(rid).clone();
                    t_f.insert(se, &r, &h, &mut self.table);
                }
            }
            let inner = tpow.special_mult(&t_f, &m, &h, &mut self.table);
            let out = inner.special_mult(&tpow, &m, &h, &mut self.table);
            self.add_tt(&f, out)?;
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let eps = self.rm.eps_image.clone();
        self.add_s(self.alpha.monoid.unit, &eps)?;
        let mut seed_t = PairIdeal::new(self.alpha.monoid.size);
        seed_t.insert(self.alpha.monoid.unit, &eps, &self.rm.hemiring, &mut self.table);
        self.add_tt(&eps, seed_t)?;
        for i in 0..self.alpha.alphabet.len() {
            let img = self.rm.letter_image[i].clone();
            self.add_s(self.alpha.letter_image[i], &img)?;
            let mut t = PairIdeal::new(self.alpha.monoid.size);
            t.insert(self.alpha.letter_image[i], &img, &self.rm.hemiring, &mut self.table);
            self.add_tt(&img, t)?;
        }
        loop {
            let before = self.additions;
            self.saturate_s()?;
            self.fire_lower_closure()?;
            self.saturate_tt()?;
            self.fire_nested_closure()?;
            if self.additions == before {
                return Ok(());
            }
        }
    }
}

pub fn pbpol_fixpoint(
    alpha: &Morphism,
    rm: &RatingMap,
    caps: &Caps,
    shuffle: Option<u64>,
) -> Result<PbpolResult> {
    if alpha.class_of.is_none() {
        return Err(Error::InvalidBasis("morphism lacks class tags".into()));
    }
    if alpha.alphabet != *rm.basis.alphabet() {
        return Err(Error::AlphabetMismatch("morphism and rating map alphabets differ".into()));
    }
    let mut engine = PbpolEngine {
        alpha,
        rm,
        caps,
        s: PairIdeal::new(alpha.monoid.size),
        table: ElemTable::new(),
        slots: Vec::new(),
        s_work: Vec::new(),
        tt_work: Vec::new(),
        additions: 0,
        idem_below: HashMap::new(),
        idem_pow: HashMap::new(),
        rng: shuffle.map(StdRng::seed_from_u64),
    };
    engine.run()?;
    let tpairs: Vec<TPair> = engine
        .slots
        .into_iter()
        .filter(|s| s.alive)
        .map(|s| TPair { f: s.f, t: s.t })
        .collect();
    Ok(PbpolResult { s: engine.s, tpairs, elems: engine.table, iterations: engine.additions })
}

/// One extra pass over all six operations; returns violations (empty = the
/// computed pair really is saturated).
pub fn audit_pbpol(
    alpha: &Morphism,
    rm: &RatingMap,
    result: &PbpolResult,
    caps: &Caps,
) -> Result<Vec<String>> {
    let h = &rm.hemiring;
    let m = &alpha.monoid;
    // Auditing multiplies ideals, which interns fresh elements. Extend a copy
    // of the result table; existing ids stay valid in it.
    let mut ext = ElemTable::new();
    for id in 0..result.elems.len() as ElemId {
        ext.intern(result.elems.get(id).clone());
    }
    let mut violations = Vec::new();

    if !result.s.check_reduced(h, &ext) {
        violations.push("pair rows are not reduced antichains".into());
    }
    if !result.s.contains(m.unit, &rm.eps_image, h, &ext) {
        violations.push("empty-word seed missing from pair set".into());
    }
    for i in 0..alpha.alphabet.len() {
        if !result.s.contains(alpha.letter_image[i], &rm.letter_image[i], h, &ext) {
            violations.push(format!("letter seed {i} missing from pair set"));
        }
    }

    // multiplication on the pair set
    let maxima = result.s.max_pairs();
    for &(s1, id1) in &maxima {
        for &(s2, id2) in &maxima {
            let prod = h.mul(ext.get(id1), ext.get(id2));
            if !result.s.contains(m.mul(s1, s2), &prod, h, &ext) {
                violations.push(format!("pair product at ({s1},{s2}) escapes"));
            }
        }
    }

    // multiplication on the stored family
    for tp1 in &result.tpairs {
        for tp2 in &result.tpairs {
            let f1 = ext.get(tp1.f).clone();
            let f2 = ext.get(tp2.f).clone();
            let f = h.mul(&f1, &f2);
            let t = tp1.t.special_mult(&tp2.t, m, h, &mut ext);
            let dominated = result
                .tpairs
                .iter()
                .any(|tp| *ext.get(tp.f) == f && t.subset_of(&tp.t, h, &ext));
            if !dominated {
                violations.push("stored-family product escapes".into());
            }
        }
    }

    // lower closure: stored pairs generate pair-set elements
    for tp in &result.tpairs {
        let fe = ext.get(tp.f).clone();
        let base = h.add(&fe, &rm.eps_image);
        for e in 0..m.size as MElem {
            if !m.is_idempotent(e) {
                continue;
            }
            for &rid in tp.t.row(e) {
                let rv = ext.get(rid).clone();
                for fi in h.maximal_idempotents_below(&rv, caps.downset_cap)? {
                    let out = h.mul(&h.mul(&fi, &base), &fi);
                    if !result.s.contains(e, &out, h, &ext) {
                        violations.push(format!("lower-closure output at {e} escapes"));
                    }
                }
            }
        }
    }

    // nested closure on stored idempotent pairs
    for tp in &result.tpairs {
        let f = ext.get(tp.f).clone();
        if !h.is_idempotent(&f) {
            continue;
        }
        let fclass = rm.class_of(&f).expect("canonical first coordinate");
        let tpow = tp.t.idempotent_power(m, h, &mut ext);
        let mut t_f = PairIdeal::new(m.size);
        for (se, rid) in result.s.max_pairs() {
            if alpha.class_of(se) == fclass {
                let r = ext.get(rid).clone();
                t_f.insert(se, &r, h, &mut ext);
            }
        }
        let out = tpow.special_mult(&t_f, m, h, &mut ext).special_mult(&tpow, m, h, &mut ext);
        let dominated = result
            .tpairs
            .iter()
            .any(|tp2| tp2.f == tp.f && out.subset_of(&tp2.t, h, &ext));
        if !dominated {
            violations.push("nested-closure output escapes".into());
        }
    }

    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{builtin_basis, BasisName};
    use crate::config::Caps;
    use crate::gen::random_word;
    use crate::lang::{compile, parse_regex, Alphabet, Automaton};
    use crate::monoid::{make_c_compatible, transition_monoid};
    use crate::naive::naive_pbpol_fixpoint;
    use crate::pol::pol_fixpoint;
    use crate::rating::build_rating_map;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn ab() -> Alphabet {
        Alphabet::from_str("ab").unwrap()
    }

    fn aut_over(alphabet: &Alphabet, src: &str) -> Automaton {
        compile(&parse_regex(src, alphabet).unwrap(), alphabet)
    }

    fn setup(
        alphabet: &Alphabet,
        target: &str,
        against: &[&str],
        basis: BasisName,
    ) -> (Morphism, RatingMap) {
        let b = builtin_basis(basis, alphabet).unwrap();
        let caps = Caps::default();
        let langs: Vec<Automaton> = against.iter().map(|s| aut_over(alphabet, s)).collect();
        let rm = build_rating_map(&b, &langs, &caps).unwrap();
        let alpha = make_c_compatible(
            &transition_monoid(&aut_over(alphabet, target), caps.monoid_cap).unwrap(),
            &b,
            caps.monoid_cap,
        )
        .unwrap();
        (alpha, rm)
    }

    #[test]
    fn special_mult_of_word_seeds_composes() {
        let (alpha, rm) = setup(&ab(), "(ab)*", &["(a|b)*a(a|b)*"], BasisName::St0);
        let h = &rm.hemiring;
        let m = &alpha.monoid;
        let mut table = ElemTable::new();
        let mut rng = StdRng::seed_from_u64(17);
        let seed_of = |w: &[u8], table: &mut ElemTable| {
            let mut t = PairIdeal::new(m.size);
            t.insert(alpha.image_of_word(w), &rm.canonical_image(w), h, table);
            t
        };
        for _ in 0..30 {
            let w1 = random_word(&ab(), 4, &mut rng);
            let w2 = random_word(&ab(), 4, &mut rng);
            let t1 = seed_of(&w1, &mut table);
            let t2 = seed_of(&w2, &mut table);
            let prod = t1.special_mult(&t2, m, h, &mut table);
            let w12: Vec<u8> = w1.iter().chain(w2.iter()).copied().collect();
            let expect = seed_of(&w12, &mut table);
            assert_eq!(prod, expect, "words {w1:?} {w2:?}");
        }
        // empty set annihilates
        let empty = PairIdeal::new(m.size);
        let t = seed_of(b"ab", &mut table);
        assert!(empty.special_mult(&t, m, h, &mut table).is_empty());
    }

    #[test]
    fn degenerate_unary_instance_stabilizes_and_audits_clean() {
        let alphabet = Alphabet::from_str("a").unwrap();
        let (alpha, rm) = setup(&alphabet, "a*", &[], BasisName::St0);
        let caps = Caps::default();
        let result = pbpol_fixpoint(&alpha, &rm, &caps, None).unwrap();
        let violations = audit_pbpol(&alpha, &rm, &result, &caps).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn matches_naive_six_operation_closure_on_tiny_instances() {
        // instances small enough for the naive engine's raw subset
        // enumeration of idempotent premises
        let a_only = Alphabet::from_str("a").unwrap();
        let both = Alphabet::from_str("ab").unwrap();
        let cases: Vec<(Alphabet, &str, Vec<&str>, BasisName)> = vec![
            (a_only.clone(), "a*", vec!["(aa)*"], BasisName::St0),
            (a_only.clone(), "a*", vec![], BasisName::Dd0),
            (a_only, "(aa)*", vec!["a"], BasisName::St0),
            (both, "b*", vec![], BasisName::St0),
        ];
        for (alphabet, target, against, basis) in cases {
            let (alpha, rm) = setup(&alphabet, target, &against, basis);
            let caps = Caps::default();
            let result = pbpol_fixpoint(&alpha, &rm, &caps, None).unwrap();
            let naive = naive_pbpol_fixpoint(&alpha, &rm, 1 << 16).unwrap();
            let tag = format!("{target} vs {against:?} over {alphabet} ({basis:?})");

            for (s, r) in &naive.s {
                assert!(
                    result.s.contains(*s, r, &rm.hemiring, &result.elems),
                    "{tag}: missing naive pair ({s}, {})",
                    rm.hemiring.render(r)
                );
            }
            for (s, id) in result.s.max_pairs() {
                assert!(naive.s.contains(&(s, result.elems.get(id).clone())), "{tag}");
            }
            // stored families describe the same ideals
            for (f, t) in &naive.tt {
                let covered = result.tpairs.iter().any(|tp| {
                    *result.elems.get(tp.f) == *f
                        && t.iter()
                            .all(|(s, r)| tp.t.contains(*s, r, &rm.hemiring, &result.elems))
                });
                assert!(covered, "{tag}: naive stored pair at {} not covered", rm.hemiring.render(f));
            }
            for tp in &result.tpairs {
                let f = result.elems.get(tp.f);
                let covered = naive.tt.iter().any(|(g, u)| {
                    g == f
                        && tp.t.max_pairs().iter().all(|&(s, id)| {
                            u.contains(&(s, result.elems.get(id).clone()))
                        })
                });
                assert!(covered, "{tag}: engine stored pair at {} not in naive", rm.hemiring.render(f));
            }
        }
    }

    #[test]
    fn matches_naive_closure_over_a_period_two_basis() {
        // length-parity basis: the class monoid is the two-element group, so
        // idempotent powers are non-trivial (period 2)
        let alphabet = Alphabet::from_str("a").unwrap();
        let json = r#"{"classes":2,"unit":0,"table":[[0,1],[1,0]],"letter_class":{"a":1}}"#;
        let parsed: crate::basis::BasisJson = serde_json::from_str(json).unwrap();
        let basis = parsed.to_basis(&alphabet).unwrap();
        assert_eq!(basis.period(), 2);
        let caps = Caps::default();
        let rm = build_rating_map(&basis, &[], &caps).unwrap();
        let alpha = make_c_compatible(
            &transition_monoid(&aut_over(&alphabet, "(aa)*"), 64).unwrap(),
            &basis,
            64,
        )
        .unwrap();
        let result = pbpol_fixpoint(&alpha, &rm, &caps, None).unwrap();
        let naive = naive_pbpol_fixpoint(&alpha, &rm, 1 << 16).unwrap();
        for (s, r) in &naive.s {
            assert!(result.s.contains(*s, r, &rm.hemiring, &result.elems));
        }
        for (s, id) in result.s.max_pairs() {
            assert!(naive.s.contains(&(s, result.elems.get(id).clone())));
        }
        assert!(audit_pbpol(&alpha, &rm, &result, &caps).unwrap().is_empty());

        let pol = crate::pol::pol_fixpoint(&alpha, &rm, &caps, None).unwrap();
        let naive_pol = crate::naive::naive_pol_fixpoint(&alpha, &rm, 1 << 16).unwrap();
        for (s, r) in &naive_pol {
            assert!(pol.s.contains(*s, r, &rm.hemiring, &pol.elems));
        }
        for (s, id) in pol.s.max_pairs() {
            assert!(naive_pol.contains(&(s, pol.elems.get(id).clone())));
        }
    }

    #[test]
    fn imprint_shrinks_relative_to_pol() {
        for (basis, target, against) in [
            (BasisName::At, "(ab)*", "(a|b)*a(a|b)*"),
            (BasisName::Dd0, "a*b", "b*"),
            (BasisName::St0, "(ab)*", "(ab)*"),
        ] {
            let (alpha, rm) = setup(&ab(), target, &[against], basis);
            let caps = Caps::default();
            let pb = pbpol_fixpoint(&alpha, &rm, &caps, None).unwrap();
            let pol = pol_fixpoint(&alpha, &rm, &caps, None).unwrap();
            for (s, id) in pb.s.max_pairs() {
                let r = pb.elems.get(id);
                assert!(
                    pol.s.contains(s, r, &rm.hemiring, &pol.elems),
                    "{basis:?}: pair ({s},{}) missing from coarser imprint",
                    rm.hemiring.render(r)
                );
            }
        }
    }

    #[test]
    fn word_seeds_are_dominated_by_stored_pairs() {
        let (alpha, rm) = setup(&ab(), "(ab)*", &["b*"], BasisName::At);
        let caps = Caps::default();
        let result = pbpol_fixpoint(&alpha, &rm, &caps, None).unwrap();
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let w = random_word(&ab(), 6, &mut rng);
            let f = rm.canonical_image(&w);
            let se = alpha.image_of_word(&w);
            let dominated = result.tpairs.iter().any(|tp| {
                *result.elems.get(tp.f) == f
                    && tp.t.contains(se, &f, &rm.hemiring, &result.elems)
            });
            assert!(dominated, "word {:?}", String::from_utf8_lossy(&w));
        }
    }

    #[test]
    fn audit_is_clean_on_small_instances() {
        for (basis, target, against) in
            [(BasisName::At, "(ab)*", "b*"), (BasisName::Dd0, "a*", "(ab)*")]
        {
            let (alpha, rm) = setup(&ab(), target, &[against], basis);
            let caps = Caps::default();
            let result = pbpol_fixpoint(&alpha, &rm, &caps, None).unwrap();
            let violations = audit_pbpol(&alpha, &rm, &result, &caps).unwrap();
            assert!(violations.is_empty(), "{basis:?}: {violations:?}");
        }
    }

    #[test]
    fn worklist_order_does_not_change_result() {
        let (alpha, rm) = setup(&ab(), "(ab)*", &["(a|b)*a(a|b)*"], BasisName::Dd0);
        let caps = Caps::default();
        let base = pbpol_fixpoint(&alpha, &rm, &caps, None).unwrap();
        for seed in [3u64, 99] {
            let other = pbpol_fixpoint(&alpha, &rm, &caps, Some(seed)).unwrap();
            assert_eq!(base.canonical_pairs(), other.canonical_pairs(), "seed {seed}");
            assert_eq!(base.canonical_tpairs(), other.canonical_tpairs(), "seed {seed}");
        }
    }
}
