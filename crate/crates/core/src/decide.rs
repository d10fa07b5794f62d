//! User-facing deciders for separation and covering, the hierarchy-level
//! registry, and the independent subword-closure oracle for the lowest
//! level.

use crate::basis::{builtin_basis, Basis, BasisName};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::lang::{Automaton, Alphabet};
use crate::monoid::{make_c_compatible, transition_monoid, MElem, Morphism};
use crate::pbpol::{audit_pbpol, pbpol_fixpoint};
use crate::pol::{audit_pol, pol_fixpoint};
use crate::rating::{build_rating_map, RatingMap, RElem};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelKind {
    Pol,
    Pbpol,
}

/// A decidable class: the polynomial closure (or the polynomial closure of
/// the Boolean closure of the polynomial closure) of a finite basis.
#[derive(Debug, Clone)]
pub struct Level {
    pub kind: LevelKind,
    pub basis: Basis,
    pub name: String,
}

/// Registry of built-in levels:
/// sigma1 ↦ (pol, ST0), sigma2 ↦ (pol, AT), sigma3 ↦ (pbpol, AT),
/// dd12 ↦ (pol, DD0), dd32 ↦ (pbpol, DD0).
pub fn builtin_level(name: &str, alphabet: &Alphabet) -> Result<Level> {
    let (kind, basis_name) = match name {
        "sigma1" => (LevelKind::Pol, BasisName::St0),
        "sigma2" => (LevelKind::Pol, BasisName::At),
        "sigma3" => (LevelKind::Pbpol, BasisName::At),
        "dd12" => (LevelKind::Pol, BasisName::Dd0),
        "dd32" => (LevelKind::Pbpol, BasisName::Dd0),
        other => {
            return Err(Error::InvalidBasis(format!("unknown level '{other}'")));
        }
    };
    Ok(Level { kind, basis: builtin_basis(basis_name, alphabet)?, name: name.to_string() })
}

pub fn custom_level(kind: LevelKind, basis: Basis) -> Level {
    let name = match kind {
        LevelKind::Pol => format!("pol:{}", basis.name().as_str()),
        LevelKind::Pbpol => format!("pbpol:{}", basis.name().as_str()),
    };
    Level { kind, basis, name }
}

#[derive(Debug, Clone)]
pub enum Evidence {
    /// Positive answer from the fixpoint: no imprint row meets every input.
    NoBlockingRow,
    /// Positive short-circuit: the covered language is empty.
    EmptyTarget,
    /// Negative answer: a row of the computed imprint meets every input
    /// language, so every candidate cover has a member doing the same.
    BlockingRow { s: MElem, s_class: MElem, r: String, delta: Vec<usize> },
    /// Negative short-circuit: a word shared by both sides.
    IntersectionWitness { word: String },
}

#[derive(Debug, Clone, Default)]
pub struct Stats {
    pub s_size: usize,
    pub tt_size: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub description: String,
    pub automaton: Automaton,
}

#[derive(Debug)]
pub struct Decision {
    pub positive: bool,
    pub evidence: Evidence,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl Decision {
    pub fn to_json(&self) -> serde_json::Value {
        let evidence = match &self.evidence {
            Evidence::NoBlockingRow => json!({"kind": "no_blocking_row"}),
            Evidence::EmptyTarget => json!({"kind": "empty_target"}),
            Evidence::BlockingRow { s, s_class, r, delta } => json!({
                "kind": "blocking_row", "s": s, "s_class": s_class, "r": r, "delta": delta,
            }),
            Evidence::IntersectionWitness { word } => {
                json!({"kind": "intersection_witness", "word": word})
            }
        };
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "description": w.description,
                "nfa": serde_json::to_value(crate::lang::NfaJson::from_automaton(&w.automaton))
                    .unwrap(),
            })
        });
        json!({
            "decision": self.positive,
            "evidence": evidence,
            "witness": witness,
            "stats": {
                "S_size": self.stats.s_size,
                "TT_size": self.stats.tt_size,
                "iterations": self.stats.iterations,
            },
        })
    }
}

/// Everything a covering run computes; kept so callers can audit or dump.
pub struct CoveringRun {
    pub alpha: Morphism,
    pub rm: RatingMap,
    pub imprint: Vec<RElem>,
    pub stats: Stats,
    pub pol: Option<crate::pol::PolResult>,
    pub pbpol: Option<crate::pbpol::PbpolResult>,
}

pub fn run_covering(
    level: &Level,
    target: &Automaton,
    against: &[Automaton],
    caps: &Caps,
    shuffle: Option<u64>,
) -> Result<CoveringRun> {
    if against.is_empty() {
        return Err(Error::InvalidAutomaton("covering needs at least one language".into()));
    }
    for l in against {
        if l.alphabet != target.alphabet {
            return Err(Error::AlphabetMismatch("covering inputs over distinct alphabets".into()));
        }
    }
    if *level.basis.alphabet() != target.alphabet {
        return Err(Error::AlphabetMismatch("level basis over a different alphabet".into()));
    }
    let rm = build_rating_map(&level.basis, against, caps)?;
    let alpha = make_c_compatible(
        &transition_monoid(target, caps.monoid_cap)?,
        &level.basis,
        caps.monoid_cap,
    )?;
    match level.kind {
        LevelKind::Pol => {
            let result = pol_fixpoint(&alpha, &rm, caps, shuffle)?;
            let imprint = crate::pol::imprint_of_language(&result, &alpha.accepting, &rm);
            let stats = Stats { s_size: result.s.len(), tt_size: 0, iterations: result.iterations };
            Ok(CoveringRun { alpha, rm, imprint, stats, pol: Some(result), pbpol: None })
        }
        LevelKind::Pbpol => {
            let result = pbpol_fixpoint(&alpha, &rm, caps, shuffle)?;
            let imprint = crate::pol::antichain_over_rows(
                &result.s,
                &result.elems,
                &alpha.accepting,
                &rm,
            );
            let stats = Stats {
                s_size: result.s.len(),
                tt_size: result.tpairs.len(),
                iterations: result.iterations,
            };
            Ok(CoveringRun { alpha, rm, imprint, stats, pol: None, pbpol: Some(result) })
        }
    }
}

impl CoveringRun {
    /// Re-apply every closure operation once; empty result means saturated.
    pub fn audit(&self, caps: &Caps) -> Result<Vec<String>> {
        if let Some(r) = &self.pol {
            return audit_pol(&self.alpha, &self.rm, r, caps);
        }
        if let Some(r) = &self.pbpol {
            return audit_pbpol(&self.alpha, &self.rm, r, caps);
        }
        Ok(Vec::new())
    }
}

/// Is there a finite cover of the target by languages of the level, none of
/// which meets every language of `against`? Negative answers carry the
/// blocking imprint row.
pub fn decide_covering(
    level: &Level,
    target: &Automaton,
    against: &[Automaton],
    caps: &Caps,
) -> Result<Decision> {
    let run = run_covering(level, target, against, caps, None)?;
    Ok(decision_from_run(&run))
}

pub fn decision_from_run(run: &CoveringRun) -> Decision {
    let blocking = run.imprint.iter().find(|r| run.rm.delta_is_full(r));
    match blocking {
        None => Decision {
            positive: true,
            evidence: Evidence::NoBlockingRow,
            witness: None,
            stats: run.stats.clone(),
        },
        Some(r) => {
            // locate a monoid element pairing with the blocking value
            let ideal = run
                .pol
                .as_ref()
                .map(|p| (&p.s, &p.elems))
                .or(run.pbpol.as_ref().map(|p| (&p.s, &p.elems)))
                .expect("a fixpoint ran");
            let (s_ideal, elems) = ideal;
            let mut row = 0 as MElem;
            'search: for s in 0..run.alpha.monoid.size as MElem {
                if !run.alpha.accepting[s as usize] {
                    continue;
                }
                if s_ideal.contains(s, r, &run.rm.hemiring, elems) {
                    row = s;
                    break 'search;
                }
            }
            Decision {
                positive: false,
                evidence: Evidence::BlockingRow {
                    s: row,
                    s_class: run.alpha.class_of(row),
                    r: run.rm.hemiring.render(r),
                    delta: run.rm.delta(r),
                },
                witness: None,
                stats: run.stats.clone(),
            }
        }
    }
}

/// Is some language of the level a superset of `l1` disjoint from `l2`?
/// Not symmetric. Disjointness short-circuits run before any fixpoint.
pub fn decide_separation(
    level: &Level,
    l1: &Automaton,
    l2: &Automaton,
    caps: &Caps,
    want_witness: bool,
) -> Result<Decision> {
    if l1.alphabet != l2.alphabet {
        return Err(Error::AlphabetMismatch("separation inputs over distinct alphabets".into()));
    }
    if l1.is_empty() {
        let witness = want_witness.then(|| Witness {
            description: "empty language separates an empty left side".into(),
            automaton: Automaton::empty(l1.alphabet.clone()),
        });
        return Ok(Decision {
            positive: true,
            evidence: Evidence::EmptyTarget,
            witness,
            stats: Stats::default(),
        });
    }
    if let Some(w) = l1.product_intersect(l2)?.shortest_word() {
        return Ok(Decision {
            positive: false,
            evidence: Evidence::IntersectionWitness {
                word: String::from_utf8_lossy(&w).into_owned(),
            },
            witness: None,
            stats: Stats::default(),
        });
    }
    let mut decision = decide_covering(level, l1, std::slice::from_ref(l2), caps)?;
    if decision.positive && want_witness && is_subword_level(level) {
        decision.witness = Some(Witness {
            description: "subword-upward closure of the left language".into(),
            automaton: l1.upward_subword_closure(),
        });
    }
    Ok(decision)
}

fn is_subword_level(level: &Level) -> bool {
    level.kind == LevelKind::Pol && level.basis.class_count() == 1
}

/// Independent decision procedure for the lowest level: the languages of the
/// polynomial closure of the trivial basis are exactly the subword-upward
/// closed ones, so separability reduces to one emptiness test.
pub fn sigma1_oracle(l1: &Automaton, l2: &Automaton) -> Result<bool> {
    Ok(l1.upward_subword_closure().product_intersect(l2)?.is_empty())
}
