//! Quadratic rewriting systems: the correspondence with normalisers, the
//! neutral-letter erasure variant, strategy-driven rewriting with cycle
//! detection, exhaustive exploration, and derivation-length bounds.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::normalise::{Normaliser, QuadraticMap};
use crate::words::{Alphabet, Letter, Word};
use std::sync::Arc;

/// Right-hand side of a rule: two letters in the plain correspondence, one
/// letter in the erasure variant when the neutral letter drops out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rhs {
    Pair(Letter, Letter),
    Single(Letter),
}

impl Rhs {
    fn len(&self) -> usize {
        match self {
            Rhs::Pair(..) => 2,
            Rhs::Single(..) => 1,
        }
    }
}

/// A set of oriented length-two rules.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    alphabet: Arc<Alphabet>,
    rules: BTreeMap<(Letter, Letter), Rhs>,
}

impl RewriteSystem {
    pub fn new(alphabet: Arc<Alphabet>, rules: BTreeMap<(Letter, Letter), Rhs>) -> Result<Self> {
        for (&(s, t), &rhs) in &rules {
            if rhs == Rhs::Pair(s, t) {
                return Err(Error::InvalidRewriteSystem(format!(
                    "identity rule on ({}, {})",
                    alphabet.name(s),
                    alphabet.name(t)
                )));
            }
        }
        Ok(RewriteSystem { alphabet, rules })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn rules(&self) -> &BTreeMap<(Letter, Letter), Rhs> {
        &self.rules
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Positions (1-based) of `entries` where some rule applies.
    fn applicable(&self, entries: &[Letter]) -> Vec<usize> {
        (1..entries.len())
            .filter(|&p| self.rules.contains_key(&(entries[p - 1], entries[p])))
            .collect()
    }

    fn apply(&self, entries: &[Letter], pos: usize) -> Vec<Letter> {
        let rhs = self.rules[&(entries[pos - 1], entries[pos])];
        let mut out = Vec::with_capacity(entries.len() + rhs.len() - 2);
        out.extend_from_slice(&entries[..pos - 1]);
        match rhs {
            Rhs::Pair(u, v) => {
                out.push(u);
                out.push(v);
            }
            Rhs::Single(u) => out.push(u),
        }
        out.extend_from_slice(&entries[pos + 1..]);
        out
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.applicable(w.entries()).is_empty()
    }

    /// Every rule's right side must itself be irreducible ("reduced").
    pub fn is_reduced(&self) -> bool {
        self.rules.values().all(|rhs| match rhs {
            Rhs::Pair(u, v) => !self.rules.contains_key(&(*u, *v)),
            Rhs::Single(_) => true,
        })
    }
}

/// The rewriting system of a normaliser: one rule per non-fixed pair.
pub fn system_of(nz: &Normaliser) -> RewriteSystem {
    let mut rules = BTreeMap::new();
    for s in nz.alphabet().letters() {
        for t in nz.alphabet().letters() {
            let (u, v) = nz.pair(s, t);
            if (u, v) != (s, t) {
                rules.insert((s, t), Rhs::Pair(u, v));
            }
        }
    }
    RewriteSystem { alphabet: nz.alphabet().clone(), rules }
}

/// The converse direction: a quadratic, reduced, normalising, confluent
/// system yields a normaliser whose table is the rule map completed by the
/// identity. Normalisation and confluence are verified exhaustively on all
/// words up to `check_len`; a violation witness is reported.
pub fn normaliser_of(rs: &RewriteSystem, check_len: usize) -> Result<Normaliser> {
    if rs.rules.values().any(|r| matches!(r, Rhs::Single(_))) {
        return Err(Error::InvalidRewriteSystem(
            "length-decreasing rules do not induce a pair table".into(),
        ));
    }
    if !rs.is_reduced() {
        return Err(Error::InvalidRewriteSystem(
            "not reduced: some right side is itself rewritable".into(),
        ));
    }
    let table: HashMap<(Letter, Letter), (Letter, Letter)> = rs
        .rules
        .iter()
        .map(|(&(s, t), &rhs)| match rhs {
            Rhs::Pair(u, v) => ((s, t), (u, v)),
            Rhs::Single(_) => unreachable!(),
        })
        .collect();
    let map = QuadraticMap::dense(rs.alphabet.clone(), |s, t| {
        table.get(&(s, t)).copied().unwrap_or((s, t))
    })?;
    let nz = Normaliser::new(map)?;
    // Bounded normalising-and-confluence check through the exhaustive
    // reference normaliser: every word must reach exactly one normal form.
    let k = rs.alphabet.len() as Letter;
    let mut stack = vec![Vec::<Letter>::new()];
    while let Some(entries) = stack.pop() {
        if entries.len() < check_len {
            for l in 0..k {
                let mut next = entries.clone();
                next.push(l);
                stack.push(next);
            }
        }
        let w = Word::new(rs.alphabet.clone(), entries)?;
        nz.normalize_oracle(&w).map_err(|e| {
            Error::InvalidRewriteSystem(format!("not normalising and confluent: {e}"))
        })?;
    }
    Ok(nz)
}

/// The erasure variant: right sides lose the neutral letter (becoming
/// length-decreasing where it occurred) and the neutral letter leaves the
/// alphabet together with every rule mentioning it on the left.
pub fn erase_variant(nz: &Normaliser) -> Result<RewriteSystem> {
    let e = nz.neutral().ok_or(Error::NoNeutralLetter)?;
    let old = nz.alphabet();
    let keep: Vec<Letter> = old.letters().filter(|&l| l != e).collect();
    let names: Vec<String> = keep.iter().map(|&l| old.name(l).to_string()).collect();
    let alphabet = Alphabet::new(names, None)?;
    let renumber: HashMap<Letter, Letter> =
        keep.iter().enumerate().map(|(i, &l)| (l, i as Letter)).collect();
    let mut rules = BTreeMap::new();
    for &s in &keep {
        for &t in &keep {
            let (u, v) = nz.pair(s, t);
            if (u, v) == (s, t) {
                continue;
            }
            let lhs = (renumber[&s], renumber[&t]);
            let rhs = match (u == e, v == e) {
                (false, false) => Rhs::Pair(renumber[&u], renumber[&v]),
                (false, true) => Rhs::Single(renumber[&u]),
                (true, false) => Rhs::Single(renumber[&v]),
                (true, true) => {
                    return Err(Error::InvalidRewriteSystem(format!(
                        "pair ({}, {}) collapses to the unit",
                        old.name(s),
                        old.name(t)
                    )))
                }
            };
            if Rhs::Pair(lhs.0, lhs.1) != rhs {
                rules.insert(lhs, rhs);
            }
        }
    }
    Ok(RewriteSystem { alphabet, rules })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationStatus {
    /// Reached a normal word.
    Normal,
    /// Revisited a word seen earlier in this derivation.
    Cycle { first_seen_step: usize },
    /// Stopped at the step cap.
    MaxSteps,
}

/// One rewriting run: the visited words and the positions rewritten.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub words: Vec<Word>,
    pub positions: Vec<usize>,
    pub status: DerivationStatus,
    pub seed: Option<u64>,
}

impl Derivation {
    pub fn start(&self) -> &Word {
        self.words.first().expect("derivation has a start")
    }

    pub fn end(&self) -> &Word {
        self.words.last().expect("derivation has an end")
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, " ->({}) ", self.positions[i - 1])?;
            }
            write!(f, "{w}")?;
        }
        match &self.status {
            DerivationStatus::Normal => write!(f, "  [normal]"),
            DerivationStatus::Cycle { first_seen_step } => {
                write!(f, "  [cycle back to step {first_seen_step}]")
            }
            DerivationStatus::MaxSteps => write!(f, "  [step cap]"),
        }
    }
}

/// Rewrite under a strategy until normal, a cycle, or the step cap.
pub fn rewrite(rs: &RewriteSystem, w: &Word, strategy: Strategy, max_steps: usize) -> Derivation {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut words = vec![w.clone()];
    let mut positions = Vec::new();
    let mut seen: HashMap<Vec<Letter>, usize> = HashMap::new();
    seen.insert(w.entries().to_vec(), 0);
    let mut current = w.entries().to_vec();
    let status = loop {
        let applicable = rs.applicable(&current);
        if applicable.is_empty() {
            break DerivationStatus::Normal;
        }
        if positions.len() >= max_steps {
            break DerivationStatus::MaxSteps;
        }
        let pos = match strategy {
            Strategy::Leftmost => applicable[0],
            Strategy::Rightmost => *applicable.last().expect("nonempty"),
            Strategy::Random(_) => {
                let rng = rng.as_mut().expect("random strategy has an rng");
                applicable[rng.gen_range(0..applicable.len())]
            }
        };
        current = rs.apply(&current, pos);
        positions.push(pos);
        words.push(Word::new(rs.alphabet.clone(), current.clone()).expect("valid letters"));
        if let Some(&step) = seen.get(&current) {
            break DerivationStatus::Cycle { first_seen_step: step };
        }
        seen.insert(current.clone(), words.len() - 1);
    };
    Derivation {
        words,
        positions,
        status,
        seed: match strategy {
            Strategy::Random(s) => Some(s),
            _ => None,
        },
    }
}

/// Full reachability exploration from one word: all reachable normal forms
/// and, if one exists, a cycle (found depth-first, positions in increasing
/// order, so the witness is deterministic).
#[derive(Debug, Clone)]
pub struct Exploration {
    pub normal_forms: Vec<Word>,
    pub cycle: Option<Vec<Word>>,
    pub words_visited: usize,
    pub truncated: bool,
}

pub fn explore(rs: &RewriteSystem, w: &Word, max_words: usize) -> Exploration {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        OnPath,
        Done,
    }
    let mut colours: HashMap<Vec<Letter>, Colour> = HashMap::new();
    let mut normals: Vec<Vec<Letter>> = Vec::new();
    let mut cycle: Option<Vec<Vec<Letter>>> = None;
    let mut truncated = false;
    // Iterative DFS; `path` mirrors the recursion stack for cycle extraction.
    enum Frame {
        Enter(Vec<Letter>),
        Exit(Vec<Letter>),
    }
    let mut stack = vec![Frame::Enter(w.entries().to_vec())];
    let mut path: Vec<Vec<Letter>> = Vec::new();
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(entries) => {
                match colours.get(&entries) {
                    Some(Colour::OnPath) => {
                        if cycle.is_none() {
                            let start =
                                path.iter().position(|p| *p == entries).expect("on path");
                            let mut loop_words = path[start..].to_vec();
                            loop_words.push(entries.clone());
                            cycle = Some(loop_words);
                        }
                        continue;
                    }
                    Some(Colour::Done) => continue,
                    None => {}
                }
                if colours.len() >= max_words {
                    truncated = true;
                    continue;
                }
                colours.insert(entries.clone(), Colour::OnPath);
                path.push(entries.clone());
                stack.push(Frame::Exit(entries.clone()));
                let applicable = rs.applicable(&entries);
                if applicable.is_empty() {
                    normals.push(entries.clone());
                }
                // push in reverse so the smallest position is explored first
                for &pos in applicable.iter().rev() {
                    stack.push(Frame::Enter(rs.apply(&entries, pos)));
                }
            }
            Frame::Exit(entries) => {
                path.pop();
                colours.insert(entries, Colour::Done);
            }
        }
    }
    normals.sort();
    normals.dedup();
    let to_word = |entries: Vec<Letter>| {
        Word::new(rs.alphabet.clone(), entries).expect("valid letters")
    };
    Exploration {
        normal_forms: normals.into_iter().map(to_word).collect(),
        cycle: cycle.map(|c| c.into_iter().map(to_word).collect()),
        words_visited: colours.len(),
        truncated,
    }
}

/// Exact longest-derivation search over all words of length `p`, by
/// memoised depth-first search on the rewriting graph.
#[derive(Debug, Clone)]
pub enum LongestReport {
    Finite { length: u64, witness: Word },
    /// Some word of length `p` admits arbitrarily long derivations.
    Unbounded { cycle_witness: Word },
}

pub fn longest_derivation(rs: &RewriteSystem, p: usize) -> Result<LongestReport> {
    let k = rs.alphabet.len() as u64;
    if k.checked_pow(p as u32).is_none_or(|t| t > 10 * crate::normalise::EXHAUSTIVE_LIMIT) {
        return Err(Error::InvalidParameter(format!(
            "longest-derivation search over {k}^{p} words exceeds the budget"
        )));
    }
    #[derive(Clone, Copy)]
    enum State {
        OnPath,
        Done(u64),
    }
    let mut memo: HashMap<Vec<Letter>, State> = HashMap::new();
    let mut best: Option<(u64, Vec<Letter>)> = None;
    let mut words = vec![Vec::new()];
    for _ in 0..p {
        words = words
            .iter()
            .flat_map(|w: &Vec<Letter>| {
                (0..k as Letter).map(move |l| {
                    let mut next = w.clone();
                    next.push(l);
                    next
                })
            })
            .collect();
    }
    for start in words {
        // depth(x) = 0 if normal, else 1 + max over successors
        enum Frame {
            Enter(Vec<Letter>),
            Exit(Vec<Letter>),
        }
        let mut stack = vec![Frame::Enter(start.clone())];
        let mut cycle_hit: Option<Vec<Letter>> = None;
        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Enter(entries) => match memo.get(&entries) {
                    Some(State::OnPath) => {
                        cycle_hit = Some(entries);
                        break;
                    }
                    Some(State::Done(_)) => {}
                    None => {
                        memo.insert(entries.clone(), State::OnPath);
                        stack.push(Frame::Exit(entries.clone()));
                        for pos in rs.applicable(&entries) {
                            stack.push(Frame::Enter(rs.apply(&entries, pos)));
                        }
                    }
                },
                Frame::Exit(entries) => {
                    let mut depth = 0;
                    for pos in rs.applicable(&entries) {
                        let next = rs.apply(&entries, pos);
                        match memo.get(&next) {
                            Some(State::Done(d)) => depth = depth.max(d + 1),
                            _ => unreachable!("successors resolve before their parent"),
                        }
                    }
                    memo.insert(entries, State::Done(depth));
                }
            }
        }
        if let Some(entries) = cycle_hit {
            return Ok(LongestReport::Unbounded {
                cycle_witness: Word::new(rs.alphabet.clone(), entries)?,
            });
        }
        let Some(State::Done(depth)) = memo.get(&start).copied() else {
            unreachable!("start resolved");
        };
        if best.as_ref().is_none_or(|(b, _)| depth > *b) {
            best = Some((depth, start));
        }
    }
    let (length, witness) = best.expect("at least the empty enumeration");
    Ok(LongestReport::Finite { length, witness: Word::new(rs.alphabet.clone(), witness)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GarsideLattice;
    use crate::words::Alphabet;

    fn lex(n: usize) -> Normaliser {
        let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        let alphabet = Alphabet::new(names, None).unwrap();
        let map =
            QuadraticMap::dense(alphabet, |s, t| if s > t { (t, s) } else { (s, t) }).unwrap();
        Normaliser::new(map).unwrap()
    }

    #[test]
    fn lex_rule_count() {
        for n in 2..=4usize {
            let rs = system_of(&lex(n));
            assert_eq!(rs.rule_count(), n * (n - 1) / 2);
            assert!(rs.is_reduced());
        }
    }

    #[test]
    fn identity_normaliser_has_empty_system() {
        let alphabet = Alphabet::new(vec!["x", "y"], None).unwrap();
        let map = QuadraticMap::dense(alphabet, |s, t| (s, t)).unwrap();
        let nz = Normaliser::new(map).unwrap();
        assert_eq!(system_of(&nz).rule_count(), 0);
    }

    #[test]
    fn round_trip_table_equality() {
        for nz in [lex(3), GarsideLattice::abelian(2).unwrap().to_normaliser()] {
            let rs = system_of(&nz);
            let back = normaliser_of(&rs, 3).unwrap();
            for s in nz.alphabet().letters() {
                for t in nz.alphabet().letters() {
                    assert_eq!(nz.pair(s, t), back.pair(s, t));
                }
            }
        }
    }

    #[test]
    fn empty_system_round_trips_to_identity() {
        let alphabet = Alphabet::new(vec!["x"], None).unwrap();
        let rs = RewriteSystem::new(alphabet, BTreeMap::new()).unwrap();
        let nz = normaliser_of(&rs, 3).unwrap();
        assert_eq!(nz.pair(0, 0), (0, 0));
    }

    #[test]
    fn rewrite_strategies_terminate_on_lex() {
        let rs = system_of(&lex(3));
        let a = rs.alphabet().clone();
        let w = Word::parse(&a, "a3|a2|a1").unwrap();
        for strategy in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(7)] {
            let d = rewrite(&rs, &w, strategy, 100);
            assert_eq!(d.status, DerivationStatus::Normal);
            assert_eq!(d.end().to_string(), "a1|a2|a3");
            assert_eq!(d.len(), 3, "{strategy:?}");
        }
        let normal = Word::parse(&a, "a1|a2").unwrap();
        let d = rewrite(&rs, &normal, Strategy::Leftmost, 100);
        assert!(d.is_empty());
        assert_eq!(d.status, DerivationStatus::Normal);
    }

    #[test]
    fn longest_derivation_on_lex() {
        // On two letters a length-3 word has at most two inversions, and
        // every sort step removes exactly one.
        let rs = system_of(&lex(2));
        match longest_derivation(&rs, 3).unwrap() {
            LongestReport::Finite { length, witness } => {
                assert_eq!(length, 2);
                assert_eq!(witness.to_string(), "a2|a1|a1");
            }
            LongestReport::Unbounded { .. } => panic!("sorting terminates"),
        }
        // the triangular bound is attained at the reversed word on three
        // distinct letters
        let rs = system_of(&lex(3));
        match longest_derivation(&rs, 3).unwrap() {
            LongestReport::Finite { length, witness } => {
                assert_eq!(length, 3); // p(p-1)/2
                assert_eq!(witness.to_string(), "a3|a2|a1");
            }
            LongestReport::Unbounded { .. } => panic!("sorting terminates"),
        }
        // any quadratic system needs at most one step on length-2 words
        match longest_derivation(&rs, 2).unwrap() {
            LongestReport::Finite { length, .. } => assert!(length <= 1),
            LongestReport::Unbounded { .. } => panic!(),
        }
    }

    #[test]
    fn erase_variant_on_abelian() {
        let lattice = GarsideLattice::abelian(2).unwrap();
        let nz = lattice.to_normaliser();
        let rs = erase_variant(&nz).unwrap();
        // the unit letter is gone
        assert_eq!(rs.alphabet().len(), 3);
        assert!(rs.alphabet().resolve("1").is_err());
        // a|b contracts to the top element
        let a = rs.alphabet().resolve("a").unwrap();
        let b = rs.alphabet().resolve("b").unwrap();
        let delta = rs.alphabet().resolve("Δ").unwrap();
        assert_eq!(rs.rules().get(&(a, b)), Some(&Rhs::Single(delta)));
        assert!(matches!(erase_variant(&lex(2)), Err(Error::NoNeutralLetter)));
    }

    #[test]
    fn erase_variant_braid_contraction() {
        let nz = GarsideLattice::braid(3).unwrap().to_normaliser();
        let rs = erase_variant(&nz).unwrap();
        let s1 = rs.alphabet().resolve("σ1").unwrap();
        let s21 = rs.alphabet().resolve("σ2σ1").unwrap();
        let delta = rs.alphabet().resolve("Δ").unwrap();
        assert_eq!(rs.rules().get(&(s1, s21)), Some(&Rhs::Single(delta)));
    }

    #[test]
    fn exploration_confluence_on_braid() {
        let nz = GarsideLattice::braid(3).unwrap().to_normaliser();
        let rs = system_of(&nz);
        let a = rs.alphabet().clone();
        let w = Word::parse(&a, "σ1|σ2|σ1").unwrap();
        let exp = explore(&rs, &w, 100_000);
        assert_eq!(exp.normal_forms.len(), 1);
        assert!(exp.cycle.is_none());
        assert_eq!(exp.normal_forms[0], nz.normalize(&w).unwrap());
    }
}
