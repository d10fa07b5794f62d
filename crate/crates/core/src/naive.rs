//! Literal, fully materialized re-implementations of the two saturation
//! closures. They enumerate every dominated premise directly and iterate by
//! whole-set rescan, making them independent cross-checks for the antichain
//! engines. Only usable on tiny instances.

use crate::error::{Error, Result};
use crate::monoid::{MElem, Morphism};
use crate::rating::{RElem, RatingMap};
use std::collections::BTreeSet;

type PairSet = BTreeSet<(MElem, RElem)>;

/// Three-operation closure (downset, multiplication, idempotent closure),
/// materialized pair by pair.
pub fn naive_pol_fixpoint(alpha: &Morphism, rm: &RatingMap, cap: usize) -> Result<PairSet> {
    let h = &rm.hemiring;
    let m = &alpha.monoid;
    let mut set: PairSet = BTreeSet::new();
    set.insert((m.unit, rm.eps_image.clone()));
    for i in 0..alpha.alphabet.len() {
        set.insert((alpha.letter_image[i], rm.letter_image[i].clone()));
    }
    let mut class_values: std::collections::HashMap<MElem, RElem> = Default::default();
    loop {
        let mut next = set.clone();
        for (s, r) in &set {
            for r2 in h.downset(r, cap)? {
                next.insert((*s, r2));
            }
        }
        for (s1, r1) in &set {
            for (s2, r2) in &set {
                next.insert((m.mul(*s1, *s2), h.mul(r1, r2)));
            }
        }
        for (e, f) in &set {
            if m.is_idempotent(*e) && h.is_idempotent(f) {
                let rc = class_values
                    .entry(alpha.class_of(*e))
                    .or_insert_with(|| rm.rho_of_class(alpha.class_of(*e)))
                    .clone();
                next.insert((*e, h.mul(&h.mul(f, &rc), f)));
            }
        }
        if next.len() > cap {
            return Err(Error::InstanceTooLarge("naive closure exceeded cap".into()));
        }
        if next == set {
            return Ok(set);
        }
        set = next;
    }
}

/// Materialized T-component of a stored pair.
pub type NaiveT = BTreeSet<(MElem, RElem)>;

pub struct NaivePbpol {
    pub s: PairSet,
    pub tt: Vec<(RElem, NaiveT)>,
}

fn special_mult_naive(
    t1: &NaiveT,
    t2: &NaiveT,
    alpha: &Morphism,
    rm: &RatingMap,
    cap: usize,
) -> Result<NaiveT> {
    let h = &rm.hemiring;
    let mut out = NaiveT::new();
    for (s1, r1) in t1 {
        for (s2, r2) in t2 {
            let prod = h.mul(r1, r2);
            for r in h.downset(&prod, cap)? {
                out.insert((alpha.monoid.mul(*s1, *s2), r));
            }
        }
    }
    Ok(out)
}

fn insert_tpair(tt: &mut Vec<(RElem, NaiveT)>, f: RElem, t: NaiveT) -> bool {
    if tt.iter().any(|(g, u)| *g == f && t.is_subset(u)) {
        return false;
    }
    tt.retain(|(g, u)| !(*g == f && u.is_subset(&t)));
    tt.push((f, t));
    true
}

/// Six-operation closure. Idempotent premises inside stored T-components are
/// enumerated as raw subsets, so this cross-checks the engine's
/// idempotent-power firing rule.
pub fn naive_pbpol_fixpoint(alpha: &Morphism, rm: &RatingMap, cap: usize) -> Result<NaivePbpol> {
    let h = &rm.hemiring;
    let m = &alpha.monoid;
    let mut s: PairSet = BTreeSet::new();
    s.insert((m.unit, rm.eps_image.clone()));
    let mut tt: Vec<(RElem, NaiveT)> = Vec::new();
    {
        let mut t = NaiveT::new();
        for r in h.downset(&rm.eps_image, cap)? {
            t.insert((m.unit, r));
        }
        insert_tpair(&mut tt, rm.eps_image.clone(), t);
    }
    for i in 0..alpha.alphabet.len() {
        s.insert((alpha.letter_image[i], rm.letter_image[i].clone()));
        let mut t = NaiveT::new();
        for r in h.downset(&rm.letter_image[i], cap)? {
            t.insert((alpha.letter_image[i], r));
        }
        insert_tpair(&mut tt, rm.letter_image[i].clone(), t);
    }

    loop {
        let mut s_next = s.clone();
        let mut tt_next = tt.clone();
        let mut changed = false;

        for (se, r) in &s {
            for r2 in h.downset(r, cap)? {
                s_next.insert((*se, r2));
            }
        }
        for (s1, r1) in &s {
            for (s2, r2) in &s {
                s_next.insert((m.mul(*s1, *s2), h.mul(r1, r2)));
            }
        }
        // closure from stored pairs into the pair set
        for (r, t) in &tt {
            let base = h.add(r, &rm.eps_image);
            for (e, f) in t {
                if m.is_idempotent(*e) && h.is_idempotent(f) {
                    s_next.insert((*e, h.mul(&h.mul(f, &base), f)));
                }
            }
        }

        for (r1, t1) in tt.iter() {
            for (r2, t2) in tt.iter() {
                let prod_t = special_mult_naive(t1, t2, alpha, rm, cap)?;
                changed |= insert_tpair(&mut tt_next, h.mul(r1, r2), prod_t);
            }
        }
        // nested closure over every idempotent subset of every stored pair
        for (f, t) in tt.iter() {
            if !h.is_idempotent(f) {
                continue;
            }
            let members: Vec<(MElem, RElem)> = t.iter().cloned().collect();
            if members.len() > 16 {
                return Err(Error::InstanceTooLarge(
                    "naive nested-closure subset enumeration".into(),
                ));
            }
            let fclass = rm.class_of(f).expect("stored first coordinate is canonical");
            let t_f: NaiveT =
                s.iter().filter(|(se, _)| alpha.class_of(*se) == fclass).cloned().collect();
            for mask in 0u32..(1u32 << members.len()) {
                let e_set: NaiveT = members
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask & (1 << j) != 0)
                    .map(|(_, p)| p.clone())
                    .collect();
                if special_mult_naive(&e_set, &e_set, alpha, rm, cap)? != e_set {
                    continue;
                }
                let inner = special_mult_naive(&e_set, &t_f, alpha, rm, cap)?;
                let out = special_mult_naive(&inner, &e_set, alpha, rm, cap)?;
                changed |= insert_tpair(&mut tt_next, f.clone(), out);
            }
        }

        if s_next.len() > cap || tt_next.len() > cap {
            return Err(Error::InstanceTooLarge("naive closure exceeded cap".into()));
        }
        changed |= s_next != s;
        s = s_next;
        tt = tt_next;
        if !changed {
            return Ok(NaivePbpol { s, tt });
        }
    }
}
