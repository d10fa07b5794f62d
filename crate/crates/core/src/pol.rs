//! Least-fixpoint saturation computing the polynomial-closure optimal
//! pointed imprint over (morphism, rating map) pairs.
//!
//! State is a downward-closed subset of M × R kept as a maximal antichain.
//! Closure on idempotent pairs fires on the idempotent power of each stored
//! maximal element: any idempotent f below a stored r satisfies f = f^k ≤ r^k
//! for the idempotent power r^k, so the fired output dominates every output
//! reachable from a dominated premise.

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::imprint::PairIdeal;
use crate::monoid::{MElem, Morphism};
use crate::rating::{ElemId, ElemTable, RElem, RatingMap};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::HashMap;

#[derive(Debug)]
pub struct PolResult {
    /// Maximal antichain of the saturated downward-closed pair set.
    pub s: PairIdeal,
    pub elems: ElemTable,
    pub iterations: usize,
}

impl PolResult {
    pub fn canonical_pairs(&self) -> Vec<(MElem, RElem)> {
        self.s.canonical_pairs(&self.elems)
    }
}

struct PolEngine<'a> {
    alpha: &'a Morphism,
    rm: &'a RatingMap,
    caps: &'a Caps,
    s: PairIdeal,
    table: ElemTable,
    work: Vec<(MElem, ElemId)>,
    additions: usize,
    class_values: HashMap<MElem, RElem>,
}

impl<'a> PolEngine<'a> {
    fn add(&mut self, se: MElem, r: &RElem) -> Result<()> {
        if self.s.insert(se, r, &self.rm.hemiring, &mut self.table) {
            self.additions += 1;
            if self.additions > self.caps.iteration_cap {
                return Err(Error::IterationCapExceeded { cap: self.caps.iteration_cap });
            }
            if self.s.len() > self.caps.stored_cap {
                return Err(Error::InstanceTooLarge(format!(
                    "stored pair antichain exceeds {}",
                    self.caps.stored_cap
                )));
            }
            let id = self.table.intern(r.clone());
            self.work.push((se, id));
        }
        Ok(())
    }

    fn class_value(&mut self, class: MElem) -> RElem {
        if let Some(v) = self.class_values.get(&class) {
            return v.clone();
        }
        let v = self.rm.rho_of_class(class);
        self.class_values.insert(class, v.clone());
        v
    }

    fn run(&mut self, shuffle: Option<u64>) -> Result<()> {
        let mut rng = shuffle.map(StdRng::seed_from_u64);
        let h = self.rm.hemiring.clone();
        let m = self.alpha.monoid.clone();

        self.add(m.unit, &self.rm.eps_image.clone())?;
        for i in 0..self.alpha.alphabet.len() {
            let img = self.rm.letter_image[i].clone();
            self.add(self.alpha.letter_image[i], &img)?;
        }

        while !self.work.is_empty() {
            let (se, rid) = match &mut rng {
                Some(rng) => {
                    let i = rng.gen_range(0..self.work.len());
                    self.work.swap_remove(i)
                }
                None => self.work.pop().unwrap(),
            };
            // skip pairs absorbed since queued; the absorber covers them
            if !self.s.row(se).contains(&rid) {
                continue;
            }
            let r = self.table.get(rid).clone();
            for (qe, qid) in self.s.max_pairs() {
                let q = self.table.get(qid).clone();
                self.add(m.mul(se, qe), &h.mul(&r, &q))?;
                self.add(m.mul(qe, se), &h.mul(&q, &r))?;
            }
            if m.is_idempotent(se) {
                let rpow = h.idempotent_power(&r);
                let rc = self.class_value(self.alpha.class_of(se));
                let out = h.mul(&h.mul(&rpow, &rc), &rpow);
                self.add(se, &out)?;
            }
        }
        Ok(())
    }
}

/// Compute the least saturated pair set for the polynomial closure of the
/// rating map's basis. The morphism must carry class tags.
pub fn pol_fixpoint(
    alpha: &Morphism,
    rm: &RatingMap,
    caps: &Caps,
    shuffle: Option<u64>,
) -> Result<PolResult> {
    check_inputs(alpha, rm)?;
    let mut engine = PolEngine {
        alpha,
        rm,
        caps,
        s: PairIdeal::new(alpha.monoid.size),
        table: ElemTable::new(),
        work: Vec::new(),
        additions: 0,
        class_values: HashMap::new(),
    };
    engine.run(shuffle)?;
    Ok(PolResult { s: engine.s, elems: engine.table, iterations: engine.additions })
}

fn check_inputs(alpha: &Morphism, rm: &RatingMap) -> Result<()> {
    if alpha.class_of.is_none() {
        return Err(Error::InvalidBasis("morphism lacks class tags".into()));
    }
    if alpha.alphabet != *rm.basis.alphabet() {
        return Err(Error::AlphabetMismatch("morphism and rating map alphabets differ".into()));
    }
    Ok(())
}

/// Elements paired with some accepting monoid element, as a maximal
/// antichain. Negative covering evidence comes from this set.
pub fn imprint_of_language(result: &PolResult, accepting: &[bool], rm: &RatingMap) -> Vec<RElem> {
    antichain_over_rows(&result.s, &result.elems, accepting, rm)
}

pub(crate) fn antichain_over_rows(
    ideal: &PairIdeal,
    table: &ElemTable,
    accepting: &[bool],
    rm: &RatingMap,
) -> Vec<RElem> {
    let h = &rm.hemiring;
    let mut out: Vec<RElem> = Vec::new();
    for (s, _) in accepting.iter().enumerate().filter(|(_, &acc)| acc) {
        for &id in ideal.row(s as MElem) {
            let cand = table.get(id);
            if out.iter().any(|r| h.leq(cand, r)) {
                continue;
            }
            out.retain(|r| !h.leq(r, cand));
            out.push(cand.clone());
        }
    }
    out.sort();
    out
}

/// One extra pass of the three closure operations; returns the violations
/// found (empty means the result is genuinely saturated).
pub fn audit_pol(alpha: &Morphism, rm: &RatingMap, result: &PolResult, caps: &Caps) -> Result<Vec<String>> {
    let h = &rm.hemiring;
    let m = &alpha.monoid;
    let table = &result.elems;
    let mut violations = Vec::new();

    if !result.s.check_reduced(h, table) {
        violations.push("stored rows are not reduced antichains".into());
    }

    // seeds
    if !result.s.contains(m.unit, &rm.eps_image, h, table) {
        violations.push("empty-word seed missing".into());
    }
    for i in 0..alpha.alphabet.len() {
        if !result.s.contains(alpha.letter_image[i], &rm.letter_image[i], h, table) {
            violations.push(format!("letter seed {i} missing"));
        }
    }

    let maxima = result.s.max_pairs();
    for &(s1, id1) in &maxima {
        let r1 = table.get(id1);
        for &(s2, id2) in &maxima {
            let r2 = table.get(id2);
            let prod = h.mul(r1, r2);
            if !result.s.contains(m.mul(s1, s2), &prod, h, table) {
                violations.push(format!("product of ({s1},{s2}) escapes the set"));
            }
        }
    }

    for &(e, id) in &maxima {
        if !m.is_idempotent(e) {
            continue;
        }
        let rmax = table.get(id);
        let rc = rm.rho_of_class(alpha.class_of(e));
        for f in h.maximal_idempotents_below(rmax, caps.downset_cap)? {
            let out = h.mul(&h.mul(&f, &rc), &f);
            if !result.s.contains(e, &out, h, table) {
                violations.push(format!("closure output at idempotent {e} escapes the set"));
            }
        }
    }
    Ok(violations)
}
