//! Downward-closed subsets of (monoid element, hemiring element) pairs.
//!
//! A set closed under lowering the hemiring coordinate is fully described by
//! the antichain of its maximal elements, grouped per monoid element. All
//! fixpoint state uses this representation; membership is a domination test.

use crate::monoid::{MElem, Monoid};
use crate::rating::{ElemId, ElemTable, Hemiring, RElem};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairIdeal {
    /// `rows[s]` = sorted ids of the maximal hemiring elements paired with s.
    rows: Vec<Vec<ElemId>>,
}

impl PairIdeal {
    pub fn new(monoid_size: usize) -> PairIdeal {
        PairIdeal { rows: vec![Vec::new(); monoid_size] }
    }

    pub fn monoid_size(&self) -> usize {
        self.rows.len()
    }

    /// Insert a pair, keeping the antichain reduced. Returns true when the
    /// pair was not already dominated.
    pub fn insert(&mut self, s: MElem, elem: &RElem, h: &Hemiring, table: &mut ElemTable) -> bool {
        let row = &mut self.rows[s as usize];
        for &id in row.iter() {
            if h.leq(elem, table.get(id)) {
                return false;
            }
        }
        row.retain(|&id| !h.leq(table.get(id), elem));
        let id = table.intern(elem.clone());
        let pos = row.binary_search(&id).unwrap_or_else(|p| p);
        row.insert(pos, id);
        true
    }

    /// Domination test: is (s, elem) below some stored maximal pair?
    pub fn contains(&self, s: MElem, elem: &RElem, h: &Hemiring, table: &ElemTable) -> bool {
        self.rows[s as usize].iter().any(|&id| h.leq(elem, table.get(id)))
    }

    pub fn row(&self, s: MElem) -> &[ElemId] {
        &self.rows[s as usize]
    }

    pub fn max_pairs(&self) -> Vec<(MElem, ElemId)> {
        let mut out = Vec::new();
        for (s, row) in self.rows.iter().enumerate() {
            for &id in row {
                out.push((s as MElem, id));
            }
        }
        out
    }

    /// Number of stored maximal pairs.
    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Ideal inclusion: every maximal pair of `self` is dominated in `other`.
    pub fn subset_of(&self, other: &PairIdeal, h: &Hemiring, table: &ElemTable) -> bool {
        self.rows.iter().enumerate().all(|(s, row)| {
            row.iter().all(|&id| other.contains(s as MElem, table.get(id), h, table))
        })
    }

    /// The downset-closed setwise product: maximal elements of
    /// {(s1·s2, r) | r ≤ r1·r2, (s1,r1) ∈ self, (s2,r2) ∈ other}.
    pub fn special_mult(
        &self,
        other: &PairIdeal,
        m: &Monoid,
        h: &Hemiring,
        table: &mut ElemTable,
    ) -> PairIdeal {
        let mut out = PairIdeal::new(self.rows.len());
        for (s1, row1) in self.rows.iter().enumerate() {
            for &id1 in row1 {
                for (s2, row2) in other.rows.iter().enumerate() {
                    let s = m.mul(s1 as MElem, s2 as MElem);
                    for &id2 in row2 {
                        let prod = h.mul(table.get(id1), table.get(id2));
                        out.insert(s, &prod, h, table);
                    }
                }
            }
        }
        out
    }

    /// First idempotent among the special-multiplication powers.
    pub fn idempotent_power(&self, m: &Monoid, h: &Hemiring, table: &mut ElemTable) -> PairIdeal {
        let mut p = self.clone();
        let mut seen: Vec<PairIdeal> = Vec::new();
        loop {
            let sq = p.special_mult(&p, m, h, table);
            if sq == p {
                return p;
            }
            if seen.contains(&p) {
                unreachable!("power sequence of a finite ideal contains an idempotent");
            }
            seen.push(p.clone());
            p = p.special_mult(self, m, h, table);
        }
    }

    /// Resolve ids to values and sort, for order-independent comparison.
    pub fn canonical_pairs(&self, table: &ElemTable) -> Vec<(MElem, RElem)> {
        let mut out: Vec<(MElem, RElem)> = self
            .max_pairs()
            .into_iter()
            .map(|(s, id)| (s, table.get(id).clone()))
            .collect();
        out.sort();
        out
    }

    /// Representation sanity: rows sorted, deduplicated, and antichains.
    pub fn check_reduced(&self, h: &Hemiring, table: &ElemTable) -> bool {
        self.rows.iter().all(|row| {
            row.windows(2).all(|w| w[0] < w[1])
                && row.iter().all(|&a| {
                    row.iter()
                        .all(|&b| a == b || !h.leq(table.get(a), table.get(b)))
                })
        })
    }
}
