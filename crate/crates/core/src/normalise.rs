//! The generic quadratic-normalisation engine: pair tables, the two
//! triangular-schedule normalisers, an exhaustive reference normaliser,
//! axiom verification, presentations, and the normal-word automaton.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::words::{
    apply_at_entries, delta_schedule, delta_tilde_schedule, Alphabet, Letter, PairMap, Word,
};

/// Exhaustive enumeration limit: `|S|^len` beyond this switches the
/// verification sweeps to uniform seeded sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
/// Number of sampled words per length once enumeration is no longer exhaustive.
pub const SAMPLE_SIZE: u64 = 100_000;
/// Default seed for every sampled sweep, so reports are reproducible.
pub const DEFAULT_SEED: u64 = 42;

const ORACLE_BUDGET: usize = 2_000_000;

/// An idempotent map on ordered letter pairs, the single datum from which an
/// entire normalisation is rebuilt. Small instances store the table densely;
/// large ones (braids on six strands have 518 400 pairs) compute entries on
/// first touch and memoise them, which keeps pair normalisation O(1) after
/// the first access.
pub struct QuadraticMap {
    alphabet: Arc<Alphabet>,
    backend: Backend,
}

enum Backend {
    Dense(Vec<(Letter, Letter)>),
    Lazy {
        f: Arc<dyn Fn(Letter, Letter) -> (Letter, Letter) + Send + Sync>,
        memo: DashMap<(Letter, Letter), (Letter, Letter)>,
    },
}

impl fmt::Debug for QuadraticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.backend {
            Backend::Dense(_) => "dense",
            Backend::Lazy { .. } => "lazy",
        };
        write!(f, "QuadraticMap({} letters, {kind})", self.alphabet.len())
    }
}

impl QuadraticMap {
    /// Materialise the full table. Fails if the table is not idempotent.
    pub fn dense<F>(alphabet: Arc<Alphabet>, f: F) -> Result<Self>
    where
        F: Fn(Letter, Letter) -> (Letter, Letter),
    {
        let map = Self::dense_unchecked(alphabet, f);
        map.check_idempotent()?;
        Ok(map)
    }

    /// Materialise the full table without the idempotence check. Intended
    /// for diagnostics: `verify_axioms` reports what breaks.
    pub fn dense_unchecked<F>(alphabet: Arc<Alphabet>, f: F) -> Self
    where
        F: Fn(Letter, Letter) -> (Letter, Letter),
    {
        let n = alphabet.len() as Letter;
        let mut table = Vec::with_capacity((n * n) as usize);
        for s in 0..n {
            for t in 0..n {
                table.push(f(s, t));
            }
        }
        QuadraticMap { alphabet, backend: Backend::Dense(table) }
    }

    /// Entries are computed on demand and memoised; the closure must be pure.
    pub fn lazy(
        alphabet: Arc<Alphabet>,
        f: Arc<dyn Fn(Letter, Letter) -> (Letter, Letter) + Send + Sync>,
    ) -> Self {
        QuadraticMap { alphabet, backend: Backend::Lazy { f, memo: DashMap::new() } }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn image(&self, s: Letter, t: Letter) -> (Letter, Letter) {
        match &self.backend {
            Backend::Dense(table) => table[s as usize * self.alphabet.len() + t as usize],
            Backend::Lazy { f, memo } => {
                if let Some(hit) = memo.get(&(s, t)) {
                    return *hit;
                }
                let value = f(s, t);
                memo.insert((s, t), value);
                value
            }
        }
    }

    pub fn is_fixed(&self, s: Letter, t: Letter) -> bool {
        self.image(s, t) == (s, t)
    }

    /// Exhaustive idempotence check over all pairs.
    pub fn check_idempotent(&self) -> Result<()> {
        for s in self.alphabet.letters() {
            for t in self.alphabet.letters() {
                let (u, v) = self.image(s, t);
                if self.image(u, v) != (u, v) {
                    return Err(Error::NotIdempotent {
                        s: self.alphabet.name(s).into(),
                        t: self.alphabet.name(t).into(),
                    });
                }
            }
        }
        Ok(())
    }
}

impl PairMap for QuadraticMap {
    fn image(&self, s: Letter, t: Letter) -> (Letter, Letter) {
        QuadraticMap::image(self, s, t)
    }
}

/// Exact letter-divisibility oracle attached to instances that know their
/// monoid (divisor lattices, verified Garside families).
pub trait LetterOrder: Send + Sync {
    /// Whether `s` left-divides `t` in the instance's monoid.
    fn leq(&self, s: Letter, t: Letter) -> bool;
}

/// A quadratic normalisation: a pair table together with an optional neutral
/// letter and whatever class information is known. Immutable after
/// construction (the memo table behind a lazy map is internally
/// synchronised), so it can be shared across threads.
pub struct Normaliser {
    map: QuadraticMap,
    neutral: Option<Letter>,
    declared_class: Option<(u32, u32)>,
    divisibility: Option<Arc<dyn LetterOrder>>,
}

impl fmt::Debug for Normaliser {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Normaliser({} letters, neutral: {:?}, declared class: {:?})",
            self.alphabet().len(),
            self.neutral.map(|e| self.alphabet().name(e)),
            self.declared_class
        )
    }
}

impl Normaliser {
    /// Wrap a pair table. When the alphabet designates a neutral letter `e`,
    /// the table must fix `(s, e)` and send `(e, s)` to `(s, e)` for every
    /// letter `s`; this is the length-two shadow of neutrality.
    pub fn new(map: QuadraticMap) -> Result<Self> {
        let neutral = map.alphabet().neutral();
        if let Some(e) = neutral {
            let alphabet = map.alphabet().clone();
            for s in alphabet.letters() {
                for (a, b) in [(s, e), (e, s)] {
                    let (u, v) = map.image(a, b);
                    if (u, v) != (s, e) {
                        return Err(Error::NotNeutral {
                            letter: alphabet.name(e).into(),
                            s: alphabet.name(a).into(),
                            t: alphabet.name(b).into(),
                            u: alphabet.name(u).into(),
                            v: alphabet.name(v).into(),
                        });
                    }
                }
            }
        }
        Ok(Normaliser { map, neutral, declared_class: None, divisibility: None })
    }

    pub fn with_declared_class(mut self, left: u32, right: u32) -> Self {
        self.declared_class = Some((left, right));
        self
    }

    pub fn with_divisibility(mut self, oracle: Arc<dyn LetterOrder>) -> Self {
        self.divisibility = Some(oracle);
        self
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.map.alphabet()
    }

    pub fn map(&self) -> &QuadraticMap {
        &self.map
    }

    pub fn neutral(&self) -> Option<Letter> {
        self.neutral
    }

    pub fn declared_class(&self) -> Option<(u32, u32)> {
        self.declared_class
    }

    pub fn divisibility(&self) -> Option<&Arc<dyn LetterOrder>> {
        self.divisibility.as_ref()
    }

    /// The pair table.
    pub fn pair(&self, s: Letter, t: Letter) -> (Letter, Letter) {
        self.map.image(s, t)
    }

    pub fn pair_fixed(&self, s: Letter, t: Letter) -> bool {
        self.map.is_fixed(s, t)
    }

    fn entries_normal(&self, entries: &[Letter]) -> bool {
        entries.windows(2).all(|w| self.pair_fixed(w[0], w[1]))
    }

    /// True iff every length-two factor is fixed by the pair table.
    pub fn is_normal(&self, w: &Word) -> bool {
        self.entries_normal(w.entries())
    }

    fn check_alphabet(&self, w: &Word) -> Result<()> {
        if w.alphabet() != self.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    fn normalize_with_schedule(&self, w: &Word, right_handed: bool) -> Result<Word> {
        self.check_alphabet(w)?;
        if w.len() <= 1 {
            return Ok(w.clone());
        }
        let schedule = if right_handed {
            delta_tilde_schedule(w.len())?
        } else {
            delta_schedule(w.len())?
        };
        let mut entries = w.entries().to_vec();
        for &pos in schedule.positions() {
            apply_at_entries(&self.map, &mut entries, pos);
        }
        if !self.entries_normal(&entries) {
            return Err(Error::ClassViolation {
                word: w.to_string(),
                output: w.from_entries(entries).to_string(),
            });
        }
        Ok(w.from_entries(entries))
    }

    /// Normalise through the left-handed triangular schedule. Correct for
    /// instances of class (4,3) or better; anything else surfaces as a
    /// `ClassViolation` carrying the offending word.
    pub fn normalize(&self, w: &Word) -> Result<Word> {
        self.normalize_with_schedule(w, false)
    }

    /// Normalise through the right-handed schedule; correct for class (3,4)
    /// or better.
    pub fn normalize_right(&self, w: &Word) -> Result<Word> {
        self.normalize_with_schedule(w, true)
    }

    /// Reference normaliser: applies the pair table at arbitrary non-fixed
    /// positions, exploring every order, until the full reachable set is
    /// known. Returns the unique normal word reachable, or an error if none
    /// or several exist. Trustworthy (and affordable) on short words; the
    /// schedule-driven engines are checked against it.
    pub fn normalize_oracle(&self, w: &Word) -> Result<Word> {
        self.check_alphabet(w)?;
        let entries = self.oracle_entries(w.entries())?;
        Ok(w.from_entries(entries))
    }

    fn oracle_entries(&self, start: &[Letter]) -> Result<Vec<Letter>> {
        if start.len() <= 1 {
            return Ok(start.to_vec());
        }
        let render = |entries: &[Letter]| {
            Word::new(self.alphabet().clone(), entries.to_vec())
                .map(|w| w.to_string())
                .unwrap_or_default()
        };
        let mut seen: HashSet<Vec<Letter>> = HashSet::new();
        let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
        let mut normals: BTreeSet<Vec<Letter>> = BTreeSet::new();
        seen.insert(start.to_vec());
        queue.push_back(start.to_vec());
        while let Some(current) = queue.pop_front() {
            let mut any_move = false;
            for pos in 1..current.len() {
                let (s, t) = (current[pos - 1], current[pos]);
                let (u, v) = self.pair(s, t);
                if (u, v) == (s, t) {
                    continue;
                }
                any_move = true;
                let mut next = current.clone();
                next[pos - 1] = u;
                next[pos] = v;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
            if !any_move {
                normals.insert(current);
            }
            if seen.len() > ORACLE_BUDGET {
                return Err(Error::BudgetExceeded { word: render(start) });
            }
        }
        let mut it = normals.into_iter();
        match (it.next(), it.next()) {
            (Some(only), None) => Ok(only),
            (None, _) => Err(Error::Divergence { word: render(start) }),
            (Some(a), Some(b)) => Err(Error::NotANormalisation {
                word: render(start),
                a: render(&a),
                b: render(&b),
            }),
        }
    }

    /// Erase every occurrence of the neutral letter from the normal form.
    pub fn geodesic_normal_form(&self, w: &Word) -> Result<Word> {
        let e = self.neutral.ok_or(Error::NoNeutralLetter)?;
        let normal = self.normalize(w)?;
        let entries = normal.entries().iter().copied().filter(|&l| l != e).collect();
        Ok(w.from_entries(entries))
    }

    /// Decide whether two words represent the same monoid element. With a
    /// neutral letter the comparison erases it first; without one, equality
    /// in the presented monoid is graded, so words of different lengths are
    /// never equal.
    pub fn word_problem(&self, a: &Word, b: &Word) -> Result<bool> {
        self.check_alphabet(a)?;
        self.check_alphabet(b)?;
        match self.neutral {
            Some(_) => Ok(self.geodesic_normal_form(a)? == self.geodesic_normal_form(b)?),
            None => {
                if a.len() != b.len() {
                    return Ok(false);
                }
                Ok(self.normalize(a)? == self.normalize(b)?)
            }
        }
    }

    /// The defining relations: one `s|t = table(s|t)` per non-fixed pair.
    /// With `mod_e`, the neutral letter is erased from right-hand sides and
    /// pairs touching it are dropped.
    pub fn presentation(&self, mod_e: bool) -> Result<Vec<Relation>> {
        let alphabet = self.alphabet().clone();
        let e = if mod_e { Some(self.neutral.ok_or(Error::NoNeutralLetter)?) } else { None };
        let mut relations = Vec::new();
        for s in alphabet.letters() {
            for t in alphabet.letters() {
                if e.is_some_and(|e| s == e || t == e) {
                    continue;
                }
                let (u, v) = self.pair(s, t);
                if (u, v) == (s, t) {
                    continue;
                }
                let rhs: Vec<Letter> = [u, v]
                    .into_iter()
                    .filter(|&l| Some(l) != e)
                    .collect();
                let lhs = Word::new(alphabet.clone(), vec![s, t])?;
                let rhs = Word::new(alphabet.clone(), rhs)?;
                if lhs != rhs {
                    relations.push(Relation { lhs, rhs });
                }
            }
        }
        Ok(relations)
    }

    /// The finite-state acceptor of normal words: one state per letter plus
    /// a start state, every state accepting, a transition `s -> t` exactly
    /// when the pair `s|t` is fixed.
    pub fn normal_word_automaton(&self) -> NormalAutomaton {
        let n = self.alphabet().len();
        let mut fixed = vec![false; n * n];
        for s in self.alphabet().letters() {
            for t in self.alphabet().letters() {
                fixed[s as usize * n + t as usize] = self.pair_fixed(s, t);
            }
        }
        NormalAutomaton { alphabet: self.alphabet().clone(), fixed }
    }

    /// Bounded verification of the normalisation axioms: length
    /// preservation, fixing of single letters, stability under normalising
    /// factors, and (when a neutral letter is set) neutrality. The check
    /// runs against the exhaustive reference normaliser, so it stays
    /// meaningful even for tables whose class rules out the triangular
    /// schedules. Exhaustive per length while `|S|^len` stays within
    /// [`EXHAUSTIVE_LIMIT`], sampled with a fixed seed beyond.
    pub fn verify_axioms(&self, max_len: usize, seed: u64) -> AxiomReport {
        let mut cache: HashMap<Vec<Letter>, Vec<Letter>> = HashMap::new();
        let mut report = AxiomReport {
            passed: true,
            violation: None,
            words_checked: 0,
            sampled_lengths: Vec::new(),
        };
        for len in 0..=max_len {
            let mut sampled = false;
            let words = self.enumerate_or_sample(len, seed, &mut sampled);
            if sampled {
                report.sampled_lengths.push(len);
            }
            for w in words {
                report.words_checked += 1;
                if let Some(v) = self.check_axioms_on(&w, &mut cache) {
                    report.passed = false;
                    report.violation = Some(v);
                    return report;
                }
            }
        }
        report
    }

    fn enumerate_or_sample(&self, len: usize, seed: u64, sampled: &mut bool) -> Vec<Vec<Letter>> {
        let k = self.alphabet().len() as u64;
        let total = k.checked_pow(len as u32).filter(|&t| t <= EXHAUSTIVE_LIMIT);
        match total {
            Some(total) => {
                *sampled = false;
                let mut out = Vec::with_capacity(total as usize);
                let mut current = vec![0 as Letter; len];
                loop {
                    out.push(current.clone());
                    // odometer increment
                    let mut i = len;
                    loop {
                        if i == 0 {
                            return out;
                        }
                        i -= 1;
                        current[i] += 1;
                        if (current[i] as u64) < k {
                            break;
                        }
                        current[i] = 0;
                    }
                }
            }
            None => {
                *sampled = true;
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (len as u64).wrapping_mul(0x9E37));
                (0..SAMPLE_SIZE)
                    .map(|_| (0..len).map(|_| rng.gen_range(0..k) as Letter).collect())
                    .collect()
            }
        }
    }

    fn reference<'c>(
        &self,
        entries: &[Letter],
        cache: &'c mut HashMap<Vec<Letter>, Vec<Letter>>,
    ) -> std::result::Result<Vec<Letter>, Error> {
        if let Some(hit) = cache.get(entries) {
            return Ok(hit.clone());
        }
        let normal = self.oracle_entries(entries)?;
        cache.insert(entries.to_vec(), normal.clone());
        Ok(normal)
    }

    fn check_axioms_on(
        &self,
        entries: &[Letter],
        cache: &mut HashMap<Vec<Letter>, Vec<Letter>>,
    ) -> Option<AxiomViolation> {
        let word_str = |e: &[Letter]| {
            Word::new(self.alphabet().clone(), e.to_vec())
                .map(|w| w.to_string())
                .unwrap_or_default()
        };
        let n = match self.reference(entries, cache) {
            Ok(n) => n,
            Err(err) => {
                return Some(AxiomViolation {
                    axiom: Axiom::UniqueNormalForm,
                    word: word_str(entries),
                    detail: err.to_string(),
                })
            }
        };
        if n.len() != entries.len() {
            return Some(AxiomViolation {
                axiom: Axiom::LengthPreservation,
                word: word_str(entries),
                detail: format!("normal form has length {}", n.len()),
            });
        }
        if entries.len() == 1 && n != entries {
            return Some(AxiomViolation {
                axiom: Axiom::FixesLetters,
                word: word_str(entries),
                detail: format!("single letter maps to `{}`", word_str(&n)),
            });
        }
        // Stability: normalising an inner factor must not change the result.
        for i in 0..entries.len() {
            for j in i + 2..=entries.len() {
                let inner = &entries[i..j];
                let inner_normal = match self.reference(inner, cache) {
                    Ok(x) => x,
                    Err(err) => {
                        return Some(AxiomViolation {
                            axiom: Axiom::UniqueNormalForm,
                            word: word_str(inner),
                            detail: err.to_string(),
                        })
                    }
                };
                if inner_normal == inner {
                    continue;
                }
                let mut substituted = Vec::with_capacity(entries.len());
                substituted.extend_from_slice(&entries[..i]);
                substituted.extend_from_slice(&inner_normal);
                substituted.extend_from_slice(&entries[j..]);
                match self.reference(&substituted, cache) {
                    Ok(m) if m == n => {}
                    Ok(m) => {
                        return Some(AxiomViolation {
                            axiom: Axiom::FactorStability,
                            word: word_str(entries),
                            detail: format!(
                                "normalising the factor at {}..{} gives `{}`, expected `{}`",
                                i + 1,
                                j,
                                word_str(&m),
                                word_str(&n)
                            ),
                        })
                    }
                    Err(err) => {
                        return Some(AxiomViolation {
                            axiom: Axiom::UniqueNormalForm,
                            word: word_str(&substituted),
                            detail: err.to_string(),
                        })
                    }
                }
            }
        }
        if let Some(e) = self.neutral {
            let mut right = entries.to_vec();
            right.push(e);
            let mut left = vec![e];
            left.extend_from_slice(entries);
            let mut expected = n.clone();
            expected.push(e);
            for padded in [right, left] {
                match self.reference(&padded, cache) {
                    Ok(m) if m == expected => {}
                    Ok(m) => {
                        return Some(AxiomViolation {
                            axiom: Axiom::Neutrality,
                            word: word_str(&padded),
                            detail: format!(
                                "normal form `{}`, expected `{}`",
                                word_str(&m),
                                word_str(&expected)
                            ),
                        })
                    }
                    Err(err) => {
                        return Some(AxiomViolation {
                            axiom: Axiom::Neutrality,
                            word: word_str(&padded),
                            detail: err.to_string(),
                        })
                    }
                }
            }
        }
        None
    }
}

/// Build a normaliser from a bare pair table: checks idempotence, checks the
/// alternation law on every triple (the finite condition that makes the
/// left-handed triangular schedule universally correct), then verifies the
/// axioms on short words. On success the instance is of class (4,3).
pub fn from_quadratic_map(map: QuadraticMap) -> Result<Normaliser> {
    map.check_idempotent()?;
    let alphabet = map.alphabet().clone();
    // Alternation law on triples: applying at positions 2,1,2 must agree
    // with 2,1,2,1 and 1,2,1,2.
    let apply = |word: [Letter; 3], positions: &[usize]| {
        let mut w = word;
        for &p in positions {
            let (u, v) = map.image(w[p - 1], w[p]);
            w[p - 1] = u;
            w[p] = v;
        }
        w
    };
    for a in alphabet.letters() {
        for b in alphabet.letters() {
            for c in alphabet.letters() {
                let w = [a, b, c];
                let base = apply(w, &[2, 1, 2]);
                if apply(w, &[2, 1, 2, 1]) != base || apply(w, &[1, 2, 1, 2]) != base {
                    return Err(Error::AlternationLaw {
                        a: alphabet.name(a).into(),
                        b: alphabet.name(b).into(),
                        c: alphabet.name(c).into(),
                    });
                }
            }
        }
    }
    let nz = Normaliser::new(map)?.with_declared_class(4, 3);
    let report = nz.verify_axioms(3, DEFAULT_SEED);
    if let Some(v) = report.violation {
        return Err(Error::InvalidInstance(format!(
            "axiom verification failed: {} on `{}`: {}",
            v.axiom, v.word, v.detail
        )));
    }
    Ok(nz)
}

/// One defining relation `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    LengthPreservation,
    FixesLetters,
    FactorStability,
    Neutrality,
    UniqueNormalForm,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::LengthPreservation => "length preservation",
            Axiom::FixesLetters => "single letters are fixed",
            Axiom::FactorStability => "stability under normalising factors",
            Axiom::Neutrality => "neutral letter law",
            Axiom::UniqueNormalForm => "unique reachable normal form",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub word: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub passed: bool,
    pub violation: Option<AxiomViolation>,
    pub words_checked: u64,
    /// Lengths at which enumeration fell back to seeded sampling.
    pub sampled_lengths: Vec<usize>,
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "pass ({} words checked", self.words_checked)?;
            if !self.sampled_lengths.is_empty() {
                write!(f, "; sampled at lengths {:?}", self.sampled_lengths)?;
            }
            write!(f, ")")
        } else {
            let v = self.violation.as_ref().expect("failed report carries a violation");
            write!(f, "FAIL: {} violated on `{}`: {}", v.axiom, v.word, v.detail)
        }
    }
}

/// Acceptor of the regular language of normal words.
pub struct NormalAutomaton {
    alphabet: Arc<Alphabet>,
    fixed: Vec<bool>,
}

impl NormalAutomaton {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Start state plus one state per letter.
    pub fn state_count(&self) -> usize {
        self.alphabet.len() + 1
    }

    pub fn transition_allowed(&self, from: Letter, to: Letter) -> bool {
        self.fixed[from as usize * self.alphabet.len() + to as usize]
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut state: Option<Letter> = None;
        for &l in w.entries() {
            match state {
                None => {}
                Some(prev) => {
                    if !self.transition_allowed(prev, l) {
                        return false;
                    }
                }
            }
            state = Some(l);
        }
        true
    }

    /// DOT digraph: state names are letter names plus `START`, the edge
    /// label is the consumed letter.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph normal_words {\n");
        out.push_str("  rankdir=LR;\n  node [shape=doublecircle];\n");
        out.push_str("  \"START\";\n");
        for l in self.alphabet.letters() {
            out.push_str(&format!("  \"{}\";\n", self.alphabet.name(l)));
        }
        for l in self.alphabet.letters() {
            let name = self.alphabet.name(l);
            out.push_str(&format!("  \"START\" -> \"{name}\" [label=\"{name}\"];\n"));
        }
        for s in self.alphabet.letters() {
            for t in self.alphabet.letters() {
                if self.transition_allowed(s, t) {
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                        self.alphabet.name(s),
                        self.alphabet.name(t),
                        self.alphabet.name(t)
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::PositionSeq;

    /// Lexicographic sorting normalisation on n letters, table-backed.
    pub(crate) fn lex_map(n: usize) -> QuadraticMap {
        let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        let alphabet = Alphabet::new(names, None).unwrap();
        QuadraticMap::dense(alphabet, |s, t| if s > t { (t, s) } else { (s, t) }).unwrap()
    }

    fn lex(n: usize) -> Normaliser {
        Normaliser::new(lex_map(n)).unwrap().with_declared_class(3, 3)
    }

    #[test]
    fn lex_normalize_sorts() {
        let nz = lex(3);
        let a = nz.alphabet().clone();
        let w = Word::parse(&a, "a2|a1|a3").unwrap();
        assert_eq!(nz.normalize(&w).unwrap().to_string(), "a1|a2|a3");
        let w = Word::parse(&a, "a3|a2|a1").unwrap();
        assert_eq!(nz.normalize_right(&w).unwrap().to_string(), "a1|a2|a3");
        let single = Word::parse(&a, "a2").unwrap();
        assert_eq!(nz.normalize(&single).unwrap(), single);
        let empty = Word::parse(&a, "").unwrap();
        assert_eq!(nz.normalize(&empty).unwrap(), empty);
    }

    #[test]
    fn oracle_sorts_and_agrees() {
        let nz = lex(2);
        let a = nz.alphabet().clone();
        let w = Word::parse(&a, "a2|a1|a2|a1").unwrap();
        assert_eq!(nz.normalize_oracle(&w).unwrap().to_string(), "a1|a1|a2|a2");
        let already = Word::parse(&a, "a1|a2|a2").unwrap();
        assert_eq!(nz.normalize_oracle(&already).unwrap(), already);
    }

    #[test]
    fn is_normal_checks_pairs() {
        let nz = lex(2);
        let a = nz.alphabet().clone();
        assert!(nz.is_normal(&Word::parse(&a, "a1|a2").unwrap()));
        assert!(!nz.is_normal(&Word::parse(&a, "a2|a1").unwrap()));
        assert!(nz.is_normal(&Word::parse(&a, "").unwrap()));
    }

    #[test]
    fn word_problem_without_neutral_is_graded() {
        let nz = lex(2);
        let a = nz.alphabet().clone();
        let w1 = Word::parse(&a, "a1|a2").unwrap();
        let w2 = Word::parse(&a, "a2|a1").unwrap();
        let w3 = Word::parse(&a, "a1").unwrap();
        assert!(nz.word_problem(&w1, &w2).unwrap());
        assert!(!nz.word_problem(&w1, &w3).unwrap());
    }

    #[test]
    fn lex_presentation_has_single_relation_on_two_letters() {
        let nz = lex(2);
        let relations = nz.presentation(false).unwrap();
        assert_eq!(relations.len(), 1);
        assert_eq!(relations[0].to_string(), "a2|a1 = a1|a2");
    }

    #[test]
    fn identity_table_has_empty_presentation_and_full_automaton() {
        let alphabet = Alphabet::new(vec!["x", "y"], None).unwrap();
        let map = QuadraticMap::dense(alphabet, |s, t| (s, t)).unwrap();
        let nz = Normaliser::new(map).unwrap();
        assert!(nz.presentation(false).unwrap().is_empty());
        let auto = nz.normal_word_automaton();
        assert_eq!(auto.state_count(), 3);
        for s in 0..2 {
            for t in 0..2 {
                assert!(auto.transition_allowed(s, t));
            }
        }
    }

    #[test]
    fn lex_automaton_forbids_descents() {
        let nz = lex(2);
        let auto = nz.normal_word_automaton();
        assert_eq!(auto.state_count(), 3);
        assert!(auto.transition_allowed(0, 1));
        assert!(auto.transition_allowed(0, 0));
        assert!(auto.transition_allowed(1, 1));
        assert!(!auto.transition_allowed(1, 0));
        let a = nz.alphabet().clone();
        assert!(auto.accepts(&Word::parse(&a, "a1|a1|a2").unwrap()));
        assert!(!auto.accepts(&Word::parse(&a, "a2|a1").unwrap()));
        let dot = auto.to_dot();
        assert!(dot.contains("START"));
        assert!(dot.contains("\"a1\" -> \"a2\""));
    }

    #[test]
    fn verify_axioms_passes_on_lex() {
        let nz = lex(3);
        let report = nz.verify_axioms(4, DEFAULT_SEED);
        assert!(report.passed, "{report}");
        assert!(report.sampled_lengths.is_empty());
    }

    #[test]
    fn verify_axioms_flags_swap_table() {
        // The full swap table is not idempotent; its composite has no
        // unique normal form on a|b, which the axiom sweep must flag.
        let alphabet = Alphabet::new(vec!["a", "b"], None).unwrap();
        let map = QuadraticMap::dense_unchecked(alphabet, |s, t| (t, s));
        let nz = Normaliser::new(map).unwrap();
        let report = nz.verify_axioms(2, DEFAULT_SEED);
        assert!(!report.passed);
        assert_eq!(report.violation.unwrap().axiom, Axiom::UniqueNormalForm);
    }

    #[test]
    fn verify_axioms_single_letter_identity() {
        let alphabet = Alphabet::new(vec!["x"], None).unwrap();
        let map = QuadraticMap::dense(alphabet, |s, t| (s, t)).unwrap();
        let nz = Normaliser::new(map).unwrap();
        assert!(nz.verify_axioms(4, DEFAULT_SEED).passed);
    }

    #[test]
    fn from_quadratic_map_accepts_identity_rejects_swap() {
        let alphabet = Alphabet::new(vec!["a", "b"], None).unwrap();
        let id = QuadraticMap::dense(alphabet.clone(), |s, t| (s, t)).unwrap();
        let nz = from_quadratic_map(id).unwrap();
        assert_eq!(nz.declared_class(), Some((4, 3)));

        let swap = QuadraticMap::dense_unchecked(alphabet, |s, t| (t, s));
        assert!(matches!(from_quadratic_map(swap), Err(Error::NotIdempotent { .. })));
    }

    #[test]
    fn neutral_letter_rows_are_validated() {
        let alphabet = Alphabet::new(vec!["1", "a"], Some("1")).unwrap();
        // A table that fails to commute the neutral letter across `a`.
        let bad = QuadraticMap::dense_unchecked(alphabet.clone(), |s, t| (s, t));
        assert!(matches!(Normaliser::new(bad), Err(Error::NotNeutral { .. })));
        let good = QuadraticMap::dense(alphabet, |s, t| {
            if t == 0 || s == 0 {
                let other = s.max(t);
                (other, 0.min(other)) // (s,1) and (1,s) both go to (s,1); (1,1) stays
            } else {
                (s, t)
            }
        })
        .unwrap();
        let nz = Normaliser::new(good).unwrap();
        let a = nz.alphabet().clone();
        let w = Word::parse(&a, "1|a|1|a").unwrap();
        assert_eq!(nz.geodesic_normal_form(&w).unwrap().to_string(), "a|a");
        let e3 = Word::parse(&a, "1|1|1").unwrap();
        assert_eq!(nz.geodesic_normal_form(&e3).unwrap().to_string(), "");
    }

    #[test]
    fn geodesic_requires_neutral() {
        let nz = lex(2);
        let a = nz.alphabet().clone();
        let w = Word::parse(&a, "a1").unwrap();
        assert!(matches!(nz.geodesic_normal_form(&w), Err(Error::NoNeutralLetter)));
        assert!(matches!(nz.presentation(true), Err(Error::NoNeutralLetter)));
    }

    fn all_words(k: Letter, len: usize) -> Vec<Vec<Letter>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * k as usize);
            for w in &out {
                for l in 0..k {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn schedule_engines_agree_with_oracle_on_lex() {
        let nz = lex(3);
        let a = nz.alphabet().clone();
        for len in 0..=4usize {
            for entries in all_words(3, len) {
                let w = Word::new(a.clone(), entries).unwrap();
                let n = nz.normalize(&w).unwrap();
                assert_eq!(n, nz.normalize_oracle(&w).unwrap());
                assert_eq!(n, nz.normalize_right(&w).unwrap());
                assert_eq!(nz.normalize(&n).unwrap(), n, "idempotence");
            }
        }
    }

    #[test]
    fn concurrent_first_touch_on_lazy_map() {
        let names: Vec<String> = (1..=4).map(|i| format!("a{i}")).collect();
        let alphabet = Alphabet::new(names, None).unwrap();
        let map = QuadraticMap::lazy(
            alphabet,
            Arc::new(|s, t| if s > t { (t, s) } else { (s, t) }),
        );
        let nz = Arc::new(Normaliser::new(map).unwrap());
        let a = nz.alphabet().clone();
        std::thread::scope(|scope| {
            for start in 0..4u32 {
                let nz = nz.clone();
                let a = a.clone();
                scope.spawn(move || {
                    let w = Word::new(a, vec![3 - start % 4, 2, Letter::from(start), 1]).unwrap();
                    let n = nz.normalize(&w).unwrap();
                    assert!(nz.is_normal(&n));
                });
            }
        });
    }

    #[test]
    fn sequence_splitting_property() {
        // apply_sequence over u|v equals applying u then v.
        use crate::words::apply_sequence;
        let map = lex_map(3);
        let a = map.alphabet().clone();
        let w = Word::parse(&a, "a3|a1|a2|a1").unwrap();
        let u = PositionSeq::new(vec![1, 3]);
        let v = PositionSeq::new(vec![2, 1]);
        let combined = apply_sequence(&map, &w, &u.concat(&v)).unwrap();
        let split = apply_sequence(&map, &apply_sequence(&map, &w, &u).unwrap(), &v).unwrap();
        assert_eq!(combined, split);
    }
}
