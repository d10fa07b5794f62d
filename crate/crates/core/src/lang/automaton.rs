use super::regex::{Alphabet, Regex};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A finite automaton over an [`Alphabet`]. Transitions carry plain letters
/// (no epsilon edges); compilation eliminates them before returning.
///
/// Automata are immutable values: every operation returns a fresh one.
#[derive(Debug, Clone)]
pub struct Automaton {
    pub alphabet: Alphabet,
    pub state_count: usize,
    pub initial: BTreeSet<usize>,
    pub accepting: BTreeSet<usize>,
    pub transitions: BTreeSet<(usize, u8, usize)>,
    pub deterministic: bool,
}

pub const DEFAULT_DETERMINIZE_CAP: usize = 1 << 16;

impl Automaton {
    pub fn new(
        alphabet: Alphabet,
        state_count: usize,
        initial: impl IntoIterator<Item = usize>,
        accepting: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, u8, usize)>,
    ) -> Result<Automaton> {
        let initial: BTreeSet<usize> = initial.into_iter().collect();
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        let transitions: BTreeSet<(usize, u8, usize)> = transitions.into_iter().collect();
        for &q in initial.iter().chain(accepting.iter()) {
            if q >= state_count {
                return Err(Error::InvalidAutomaton(format!("state {q} out of range")));
            }
        }
        for &(p, a, q) in &transitions {
            if p >= state_count || q >= state_count {
                return Err(Error::InvalidAutomaton(format!(
                    "transition ({p},{},{q}) out of range",
                    a as char
                )));
            }
            if !alphabet.contains(a) {
                return Err(Error::UnknownSymbol { symbol: a as char });
            }
        }
        let deterministic = Self::check_deterministic(&initial, &transitions);
        Ok(Automaton { alphabet, state_count, initial, accepting, transitions, deterministic })
    }

    fn check_deterministic(
        initial: &BTreeSet<usize>,
        transitions: &BTreeSet<(usize, u8, usize)>,
    ) -> bool {
        if initial.len() != 1 {
            return false;
        }
        let mut seen = BTreeSet::new();
        for &(p, a, _) in transitions {
            if !seen.insert((p, a)) {
                return false;
            }
        }
        true
    }

    /// The automaton accepting the empty language.
    pub fn empty(alphabet: Alphabet) -> Automaton {
        Automaton::new(alphabet, 1, [0], [], []).unwrap()
    }

    /// The automaton accepting exactly the empty word.
    pub fn epsilon(alphabet: Alphabet) -> Automaton {
        Automaton::new(alphabet, 1, [0], [0], []).unwrap()
    }

    /// The automaton accepting every word.
    pub fn universal(alphabet: Alphabet) -> Automaton {
        let trans: Vec<(usize, u8, usize)> =
            alphabet.letters().iter().map(|&a| (0, a, 0)).collect();
        Automaton::new(alphabet, 1, [0], [0], trans).unwrap()
    }

    /// Single-word automaton.
    pub fn word(alphabet: Alphabet, w: &[u8]) -> Automaton {
        let n = w.len();
        let trans: Vec<(usize, u8, usize)> =
            w.iter().enumerate().map(|(i, &a)| (i, a, i + 1)).collect();
        Automaton::new(alphabet, n + 1, [0], [n], trans).unwrap()
    }

    fn successors(&self, from: &BTreeSet<usize>, a: u8) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &(p, b, q) in &self.transitions {
            if b == a && from.contains(&p) {
                out.insert(q);
            }
        }
        out
    }

    pub fn accepts(&self, word: &[u8]) -> bool {
        let mut current = self.initial.clone();
        for &a in word {
            if current.is_empty() {
                return false;
            }
            current = self.successors(&current, a);
        }
        current.iter().any(|q| self.accepting.contains(q))
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    /// Shortest accepted word, if any (BFS).
    pub fn shortest_word(&self) -> Option<Vec<u8>> {
        let mut queue: VecDeque<usize> = self.initial.iter().copied().collect();
        let mut parent: BTreeMap<usize, (usize, u8)> = BTreeMap::new();
        let mut visited: BTreeSet<usize> = self.initial.clone();
        let mut hit = self.initial.iter().copied().find(|q| self.accepting.contains(q));
        while hit.is_none() {
            let Some(p) = queue.pop_front() else { break };
            for &(src, a, dst) in &self.transitions {
                if src == p && visited.insert(dst) {
                    parent.insert(dst, (p, a));
                    if self.accepting.contains(&dst) {
                        hit = Some(dst);
                        break;
                    }
                    queue.push_back(dst);
                }
            }
        }
        let mut q = hit?;
        let mut word = Vec::new();
        while let Some(&(p, a)) = parent.get(&q) {
            word.push(a);
            q = p;
        }
        word.reverse();
        Some(word)
    }

    /// Subset construction. The result is deterministic and complete (the
    /// empty subset acts as the sink). Fails fast past `cap` states.
    pub fn determinize_with_cap(&self, cap: usize) -> Result<Automaton> {
        let letters: Vec<u8> = self.alphabet.letters().to_vec();
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut trans: Vec<(usize, u8, usize)> = Vec::new();
        let start = self.initial.clone();
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut i = 0;
        while i < subsets.len() {
            for &a in &letters {
                let next = self.successors(&subsets[i], a);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(Error::DeterminizationTooLarge { cap });
                        }
                        let id = subsets.len();
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                trans.push((i, a, id));
            }
            i += 1;
        }
        let accepting: Vec<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().any(|q| self.accepting.contains(q)))
            .map(|(i, _)| i)
            .collect();
        Automaton::new(self.alphabet.clone(), subsets.len(), [0], accepting, trans)
    }

    pub fn determinize(&self) -> Result<Automaton> {
        self.determinize_with_cap(DEFAULT_DETERMINIZE_CAP)
    }

    /// Deterministic and complete version of `self` (identity when already so).
    pub fn determinize_complete(&self, cap: usize) -> Result<Automaton> {
        if self.deterministic && self.is_complete() {
            return Ok(self.clone());
        }
        self.determinize_with_cap(cap)
    }

    /// Minimal complete DFA for the language (subset construction followed
    /// by Moore partition refinement on the reachable part).
    pub fn minimize(&self, cap: usize) -> Result<Automaton> {
        let det = self.determinize_complete(cap)?;
        // reachable part
        let init = *det.initial.iter().next().expect("dfa initial state");
        let mut reach = vec![false; det.state_count];
        let mut stack = vec![init];
        reach[init] = true;
        let mut delta: Vec<Vec<usize>> =
            vec![vec![0; det.alphabet.len()]; det.state_count];
        for &(p, a, q) in &det.transitions {
            delta[p][det.alphabet.index_of(a).unwrap()] = q;
        }
        while let Some(p) = stack.pop() {
            for &q in &delta[p] {
                if !reach[q] {
                    reach[q] = true;
                    stack.push(q);
                }
            }
        }
        // Moore refinement
        let mut class: Vec<usize> =
            (0..det.state_count).map(|q| usize::from(det.accepting.contains(&q))).collect();
        loop {
            let mut sig_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut next = vec![0usize; det.state_count];
            for q in 0..det.state_count {
                if !reach[q] {
                    continue;
                }
                let mut sig = vec![class[q]];
                sig.extend(delta[q].iter().map(|&d| class[d]));
                let n = sig_index.len();
                next[q] = *sig_index.entry(sig).or_insert(n);
            }
            let stable = (0..det.state_count)
                .filter(|&q| reach[q])
                .all(|q| {
                    (0..det.state_count)
                        .filter(|&p| reach[p])
                        .all(|p| (class[p] == class[q]) == (next[p] == next[q]))
                });
            class = next;
            if stable {
                break;
            }
        }
        let count = class
            .iter()
            .zip(reach.iter())
            .filter(|(_, &r)| r)
            .map(|(&c, _)| c + 1)
            .max()
            .unwrap_or(1);
        let mut trans = BTreeSet::new();
        let mut accepting = BTreeSet::new();
        for q in 0..det.state_count {
            if !reach[q] {
                continue;
            }
            if det.accepting.contains(&q) {
                accepting.insert(class[q]);
            }
            for (i, &d) in delta[q].iter().enumerate() {
                trans.insert((class[q], det.alphabet.letters()[i], class[d]));
            }
        }
        Automaton::new(
            det.alphabet.clone(),
            count,
            [class[init]],
            accepting,
            trans,
        )
    }

    pub fn is_complete(&self) -> bool {
        let mut seen = BTreeSet::new();
        for &(p, a, _) in &self.transitions {
            seen.insert((p, a));
        }
        (0..self.state_count)
            .all(|q| self.alphabet.letters().iter().all(|&a| seen.contains(&(q, a))))
    }

    pub fn complement(&self) -> Result<Automaton> {
        let det = self.determinize_complete(DEFAULT_DETERMINIZE_CAP)?;
        let accepting: Vec<usize> =
            (0..det.state_count).filter(|q| !det.accepting.contains(q)).collect();
        Automaton::new(
            det.alphabet.clone(),
            det.state_count,
            det.initial.iter().copied(),
            accepting,
            det.transitions.iter().copied(),
        )
    }

    /// Product automaton for intersection, restricted to reachable pairs.
    pub fn product_intersect(&self, other: &Automaton) -> Result<Automaton> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch("intersection over distinct alphabets".into()));
        }
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut initial = Vec::new();
        for &p in &self.initial {
            for &q in &other.initial {
                if let std::collections::btree_map::Entry::Vacant(e) = index.entry((p, q)) {
                    e.insert(pairs.len());
                    initial.push(pairs.len());
                    pairs.push((p, q));
                }
            }
        }
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for &(ps, a, pd) in &self.transitions {
                if ps != p {
                    continue;
                }
                for &(qs, b, qd) in &other.transitions {
                    if qs != q || b != a {
                        continue;
                    }
                    let id = *index.entry((pd, qd)).or_insert_with(|| {
                        pairs.push((pd, qd));
                        pairs.len() - 1
                    });
                    trans.push((i, a, id));
                }
            }
            i += 1;
        }
        let accepting: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (p, q))| self.accepting.contains(p) && other.accepting.contains(q))
            .map(|(i, _)| i)
            .collect();
        Automaton::new(self.alphabet.clone(), pairs.len().max(1), initial, accepting, trans)
    }

    /// Epsilon-free concatenation.
    pub fn concatenate(&self, other: &Automaton) -> Result<Automaton> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch("concatenation over distinct alphabets".into()));
        }
        let off = self.state_count;
        let left_has_eps = self.initial.iter().any(|q| self.accepting.contains(q));
        let right_has_eps = other.initial.iter().any(|q| other.accepting.contains(q));
        let mut initial: Vec<usize> = self.initial.iter().copied().collect();
        if left_has_eps {
            initial.extend(other.initial.iter().map(|&q| q + off));
        }
        let mut accepting: Vec<usize> = other.accepting.iter().map(|&q| q + off).collect();
        if right_has_eps {
            accepting.extend(self.accepting.iter().copied());
        }
        let mut trans: Vec<(usize, u8, usize)> = self
            .transitions
            .iter()
            .copied()
            .chain(other.transitions.iter().map(|&(p, a, q)| (p + off, a, q + off)))
            .collect();
        for &(p, a, q) in &self.transitions {
            if self.accepting.contains(&q) {
                for &i in &other.initial {
                    trans.push((p, a, i + off));
                }
            }
        }
        Automaton::new(
            self.alphabet.clone(),
            self.state_count + other.state_count,
            initial,
            accepting,
            trans,
        )
    }

    /// Disjoint-sum union.
    pub fn union(&self, other: &Automaton) -> Result<Automaton> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch("union over distinct alphabets".into()));
        }
        let off = self.state_count;
        let initial: Vec<usize> = self
            .initial
            .iter()
            .copied()
            .chain(other.initial.iter().map(|&q| q + off))
            .collect();
        let accepting: Vec<usize> = self
            .accepting
            .iter()
            .copied()
            .chain(other.accepting.iter().map(|&q| q + off))
            .collect();
        let trans: Vec<(usize, u8, usize)> = self
            .transitions
            .iter()
            .copied()
            .chain(other.transitions.iter().map(|&(p, a, q)| (p + off, a, q + off)))
            .collect();
        Automaton::new(
            self.alphabet.clone(),
            self.state_count + other.state_count,
            initial,
            accepting,
            trans,
        )
    }

    /// Accepts u iff `self` accepts wu.
    pub fn left_quotient(&self, w: &[u8]) -> Automaton {
        let mut current = self.initial.clone();
        for &a in w {
            current = self.successors(&current, a);
        }
        Automaton {
            alphabet: self.alphabet.clone(),
            state_count: self.state_count,
            initial: current.clone(),
            accepting: self.accepting.clone(),
            transitions: self.transitions.clone(),
            deterministic: Self::check_deterministic(&current, &self.transitions),
        }
    }

    /// Accepts u iff `self` accepts uw.
    pub fn right_quotient(&self, w: &[u8]) -> Automaton {
        let accepting: BTreeSet<usize> = (0..self.state_count)
            .filter(|&q| {
                let mut cur: BTreeSet<usize> = [q].into();
                for &a in w {
                    cur = self.successors(&cur, a);
                }
                cur.iter().any(|p| self.accepting.contains(p))
            })
            .collect();
        Automaton {
            alphabet: self.alphabet.clone(),
            state_count: self.state_count,
            initial: self.initial.clone(),
            accepting,
            transitions: self.transitions.clone(),
            deterministic: self.deterministic,
        }
    }

    /// Accepts exactly the words having some word of the input language as a
    /// scattered subword. A self-loop on every state and letter lets the
    /// automaton skip arbitrary extra letters.
    pub fn upward_subword_closure(&self) -> Automaton {
        let mut trans = self.transitions.clone();
        for q in 0..self.state_count {
            for &a in self.alphabet.letters() {
                trans.insert((q, a, q));
            }
        }
        Automaton {
            alphabet: self.alphabet.clone(),
            state_count: self.state_count,
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
            deterministic: Self::check_deterministic(&self.initial, &trans),
            transitions: trans,
        }
    }

    pub fn subset_of(&self, other: &Automaton) -> Result<bool> {
        Ok(self.product_intersect(&other.complement()?)?.is_empty())
    }

    /// Language equality via product with the complement, both directions.
    pub fn language_eq(&self, other: &Automaton) -> Result<bool> {
        Ok(self.subset_of(other)? && other.subset_of(self)?)
    }

    /// All accepted words of length at most `max_len`, in length-lex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut layer: Vec<(Vec<u8>, BTreeSet<usize>)> = vec![(Vec::new(), self.initial.clone())];
        for len in 0..=max_len {
            for (w, states) in &layer {
                if states.iter().any(|q| self.accepting.contains(q)) {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, states) in &layer {
                for &a in self.alphabet.letters() {
                    let succ = self.successors(states, a);
                    if !succ.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, succ));
                    }
                }
            }
            layer = next;
        }
        out
    }
}

/// Compile a regex into an epsilon-free NFA (Thompson construction followed
/// by epsilon elimination).
pub fn compile(regex: &Regex, alphabet: &Alphabet) -> Automaton {
    let mut b = Thompson { trans: Vec::new(), eps: Vec::new(), count: 0 };
    let (start, end) = b.build(regex);
    // epsilon closure per state; BFS per state is fine at these sizes
    let n = b.count;
    let mut closure: Vec<BTreeSet<usize>> = (0..n).map(|q| [q].into()).collect();
    for (q, cl) in closure.iter_mut().enumerate() {
        let mut stack: Vec<usize> = vec![q];
        while let Some(p) = stack.pop() {
            for &(src, dst) in &b.eps {
                if src == p && cl.insert(dst) {
                    stack.push(dst);
                }
            }
        }
    }
    let mut trans: BTreeSet<(usize, u8, usize)> = BTreeSet::new();
    for (q, cl) in closure.iter().enumerate() {
        for &r in cl {
            for &(src, a, dst) in &b.trans {
                if src == r {
                    trans.insert((q, a, dst));
                }
            }
        }
    }
    let accepting: BTreeSet<usize> = (0..n).filter(|&q| closure[q].contains(&end)).collect();
    let initial: BTreeSet<usize> = [start].into();
    Automaton {
        alphabet: alphabet.clone(),
        state_count: n,
        deterministic: Automaton::check_deterministic(&initial, &trans),
        initial,
        accepting,
        transitions: trans,
    }
}

struct Thompson {
    trans: Vec<(usize, u8, usize)>,
    eps: Vec<(usize, usize)>,
    count: usize,
}

impl Thompson {
    fn fresh(&mut self) -> usize {
        self.count += 1;
        self.count - 1
    }

    fn build(&mut self, regex: &Regex) -> (usize, usize) {
        match regex {
            Regex::Empty => (self.fresh(), self.fresh()),
            Regex::Epsilon => {
                let q = self.fresh();
                (q, q)
            }
            Regex::Letter(a) => {
                let s = self.fresh();
                let e = self.fresh();
                self.trans.push((s, *a, e));
                (s, e)
            }
            Regex::Union(l, r) => {
                let (ls, le) = self.build(l);
                let (rs, re) = self.build(r);
                let s = self.fresh();
                let e = self.fresh();
                self.eps.push((s, ls));
                self.eps.push((s, rs));
                self.eps.push((le, e));
                self.eps.push((re, e));
                (s, e)
            }
            Regex::Concat(l, r) => {
                let (ls, le) = self.build(l);
                let (rs, re) = self.build(r);
                self.eps.push((le, rs));
                (ls, re)
            }
            Regex::Star(c) => {
                let (cs, ce) = self.build(c);
                let s = self.fresh();
                self.eps.push((s, cs));
                self.eps.push((ce, s));
                (s, s)
            }
        }
    }
}

/// On-disk NFA format:
/// `{"alphabet":["a","b"],"states":3,"initial":[0],"accepting":[2],
///   "transitions":[[0,"a",1],[1,"b",2]]}`
#[derive(Debug, Serialize, Deserialize)]
pub struct NfaJson {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub initial: Vec<usize>,
    pub accepting: Vec<usize>,
    pub transitions: Vec<(usize, String, usize)>,
}

impl NfaJson {
    pub fn to_automaton(&self) -> Result<Automaton> {
        let mut letters = Vec::new();
        for s in &self.alphabet {
            let b = s.as_bytes();
            if b.len() != 1 {
                return Err(Error::InvalidAutomaton(format!("bad alphabet symbol {s:?}")));
            }
            letters.push(b[0]);
        }
        let alphabet = Alphabet::new(&letters)?;
        let mut trans = Vec::new();
        for (p, s, q) in &self.transitions {
            let b = s.as_bytes();
            if b.len() != 1 {
                return Err(Error::InvalidAutomaton(format!("bad transition symbol {s:?}")));
            }
            trans.push((*p, b[0], *q));
        }
        Automaton::new(
            alphabet,
            self.states,
            self.initial.iter().copied(),
            self.accepting.iter().copied(),
            trans,
        )
    }

    pub fn from_automaton(a: &Automaton) -> NfaJson {
        NfaJson {
            alphabet: a.alphabet.letters().iter().map(|&b| (b as char).to_string()).collect(),
            states: a.state_count,
            initial: a.initial.iter().copied().collect(),
            accepting: a.accepting.iter().copied().collect(),
            transitions: a
                .transitions
                .iter()
                .map(|&(p, b, q)| (p, (b as char).to_string(), q))
                .collect(),
        }
    }
}
