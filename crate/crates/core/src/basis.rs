//! Finite quotienting Boolean algebra bases, represented by their class
//! monoid and letter map, plus the stratified preorders used as a
//! recursion-based test oracle.

use crate::error::{Error, Result};
use crate::lang::{Alphabet, Automaton};
use crate::monoid::{MElem, Monoid};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisName {
    /// Trivial basis {∅, A*}.
    St0,
    /// Alphabet-testable basis: classes are sets of occurring letters.
    At,
    /// {∅, {ε}, A+, A*}: classes are "empty" and "nonempty".
    Dd0,
    Custom,
}

impl BasisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasisName::St0 => "ST0",
            BasisName::At => "AT",
            BasisName::Dd0 => "DD0",
            BasisName::Custom => "custom",
        }
    }
}

/// A finite quotienting Boolean algebra over an alphabet, given as the
/// morphism from words to its class monoid. The canonical relation is the
/// discrete order on classes (class equality), as required for a Boolean
/// algebra.
#[derive(Debug, Clone)]
pub struct Basis {
    name: BasisName,
    alphabet: Alphabet,
    class_monoid: Monoid,
    letter_class: Vec<MElem>,
}

impl Basis {
    pub fn name(&self) -> BasisName {
        self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn class_monoid(&self) -> &Monoid {
        &self.class_monoid
    }

    pub fn class_count(&self) -> usize {
        self.class_monoid.size
    }

    /// Class of a letter, by letter index in the alphabet.
    pub fn letter_class(&self, letter_index: usize) -> MElem {
        self.letter_class[letter_index]
    }

    pub fn class_of_word(&self, w: &[u8]) -> MElem {
        let mut acc = self.class_monoid.unit;
        for &b in w {
            let i = self.alphabet.index_of(b).expect("letter in alphabet");
            acc = self.class_monoid.mul(acc, self.letter_class[i]);
        }
        acc
    }

    /// The canonical preorder on classes; discrete for a Boolean algebra.
    pub fn class_leq(&self, c1: MElem, c2: MElem) -> bool {
        c1 == c2
    }

    /// DFA accepting exactly the words of the given class.
    pub fn class_language(&self, class: MElem) -> Automaton {
        let n = self.class_monoid.size;
        let mut trans = Vec::new();
        for q in 0..n {
            for (i, &b) in self.alphabet.letters().iter().enumerate() {
                trans.push((q, b, self.class_monoid.mul(q as MElem, self.letter_class[i]) as usize));
            }
        }
        Automaton::new(
            self.alphabet.clone(),
            n,
            [self.class_monoid.unit as usize],
            [class as usize],
            trans,
        )
        .expect("class automaton is well-formed")
    }

    /// The period of the basis: the idempotent-power exponent of the class
    /// monoid.
    pub fn period(&self) -> usize {
        self.class_monoid.omega_exponent()
    }
}

pub fn builtin_basis(name: BasisName, alphabet: &Alphabet) -> Result<Basis> {
    match name {
        BasisName::St0 => Ok(Basis {
            name,
            alphabet: alphabet.clone(),
            class_monoid: Monoid::trivial(),
            letter_class: vec![0; alphabet.len()],
        }),
        BasisName::At => {
            let k = alphabet.len();
            if k > 12 {
                return Err(Error::InstanceTooLarge(format!(
                    "alphabet-testable basis over {k} letters has 2^{k} classes"
                )));
            }
            let size = 1usize << k;
            let mut table = vec![0 as MElem; size * size];
            for x in 0..size {
                for y in 0..size {
                    table[x * size + y] = (x | y) as MElem;
                }
            }
            Ok(Basis {
                name,
                alphabet: alphabet.clone(),
                class_monoid: Monoid { size, unit: 0, table },
                letter_class: (0..k).map(|i| (1u16) << i).collect(),
            })
        }
        BasisName::Dd0 => {
            // 0 = class of ε, 1 = class of nonempty words
            let table = vec![0, 1, 1, 1];
            Ok(Basis {
                name,
                alphabet: alphabet.clone(),
                class_monoid: Monoid { size: 2, unit: 0, table },
                letter_class: vec![1; alphabet.len()],
            })
        }
        BasisName::Custom => Err(Error::InvalidBasis("custom bases require a table".into())),
    }
}

/// On-disk custom basis format:
/// `{"classes":N,"unit":u,"table":[[...]],"letter_class":{"a":i,...}}`
#[derive(Debug, Serialize, Deserialize)]
pub struct BasisJson {
    pub classes: usize,
    pub unit: usize,
    pub table: Vec<Vec<usize>>,
    pub letter_class: HashMap<String, usize>,
}

impl BasisJson {
    /// Validate and build a basis over the given alphabet. The class map is a
    /// morphism by construction; the monoid laws are what needs checking.
    pub fn to_basis(&self, alphabet: &Alphabet) -> Result<Basis> {
        if self.classes == 0 || self.classes > u16::MAX as usize {
            return Err(Error::InvalidBasis(format!("{} classes out of range", self.classes)));
        }
        if self.table.len() != self.classes {
            return Err(Error::InvalidBasis("table row count differs from class count".into()));
        }
        let mut table = Vec::with_capacity(self.classes * self.classes);
        for row in &self.table {
            if row.len() != self.classes {
                return Err(Error::InvalidBasis("table row length differs from class count".into()));
            }
            for &v in row {
                if v >= self.classes {
                    return Err(Error::InvalidBasis(format!("table entry {v} out of range")));
                }
                table.push(v as MElem);
            }
        }
        let monoid = Monoid { size: self.classes, unit: self.unit as MElem, table };
        monoid.validate()?;
        let mut letter_class = Vec::with_capacity(alphabet.len());
        for &b in alphabet.letters() {
            let key = (b as char).to_string();
            match self.letter_class.get(&key) {
                Some(&c) if c < self.classes => letter_class.push(c as MElem),
                Some(&c) => {
                    return Err(Error::InvalidBasis(format!("letter class {c} out of range")))
                }
                None => {
                    return Err(Error::InvalidBasis(format!("letter '{key}' has no class")));
                }
            }
        }
        Ok(Basis { name: BasisName::Custom, alphabet: alphabet.clone(), class_monoid: monoid, letter_class })
    }
}

/// Recursive comparator for the stratified preorders of the polynomial
/// closure. Exponential; quarantined behind a call budget and meant as a
/// cross-checking oracle, not a production path.
pub struct StratumComparator<'a> {
    basis: &'a Basis,
    k: usize,
    memo: HashMap<(usize, Vec<u8>, Vec<u8>), bool>,
    calls: usize,
    budget: usize,
}

impl<'a> StratumComparator<'a> {
    pub fn new(basis: &'a Basis, k: usize, budget: usize) -> Self {
        StratumComparator { basis, k, memo: HashMap::new(), calls: 0, budget }
    }

    /// Does u precede v in stratum k? Characterization: u and v compare in
    /// the basis, and when k ≥ 1 every split u = xay is matched by a split
    /// v = x'ay' with both sides preceding at stratum k-1.
    pub fn leq(&mut self, u: &[u8], v: &[u8]) -> Result<bool> {
        self.leq_at(self.k, u, v)
    }

    fn leq_at(&mut self, k: usize, u: &[u8], v: &[u8]) -> Result<bool> {
        self.calls += 1;
        if self.calls > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        if !self.basis.class_leq(self.basis.class_of_word(u), self.basis.class_of_word(v)) {
            return Ok(false);
        }
        if k == 0 {
            return Ok(true);
        }
        let key = (k, u.to_vec(), v.to_vec());
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let mut all = true;
        'splits: for i in 0..u.len() {
            let a = u[i];
            for j in 0..v.len() {
                if v[j] != a {
                    continue;
                }
                if self.leq_at(k - 1, &u[..i], &v[..j])?
                    && self.leq_at(k - 1, &u[i + 1..], &v[j + 1..])?
                {
                    continue 'splits;
                }
            }
            all = false;
            break;
        }
        self.memo.insert(key, all);
        Ok(all)
    }
}
