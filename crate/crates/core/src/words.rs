//! Alphabets, words, and position-indexed application of length-two maps,
//! including the two triangular schedules that drive normalisation.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter within its alphabet.
pub type Letter = u32;

/// A finite ordered alphabet, optionally with a designated neutral letter.
///
/// Letter names are unique, non-empty, and may not contain `|` or
/// whitespace (they must survive the `a|b|c` word format). Extra input
/// aliases (ASCII spellings of unicode names and the like) resolve to a
/// canonical letter but are never used for display.
#[derive(Debug, Clone)]
pub struct Alphabet {
    letters: Vec<String>,
    neutral: Option<Letter>,
    index: HashMap<String, Letter>,
    aliases: HashMap<String, Letter>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && self.neutral == other.neutral
    }
}
impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: Vec<S>, neutral: Option<&str>) -> Result<Arc<Self>> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be non-empty".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in letters.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidAlphabet("letter names must be non-empty".into()));
            }
            if name.contains('|') || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlphabet(format!(
                    "letter name `{name}` contains `|` or whitespace"
                )));
            }
            if index.insert(name.clone(), i as Letter).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{name}`")));
            }
        }
        let neutral = match neutral {
            None => None,
            Some(e) => Some(
                *index
                    .get(e)
                    .ok_or_else(|| Error::InvalidAlphabet(format!("neutral `{e}` is not a letter")))?,
            ),
        };
        Ok(Arc::new(Alphabet { letters, neutral, index, aliases: HashMap::new() }))
    }

    /// Same as [`Alphabet::new`] but with extra input aliases.
    pub fn with_aliases<S: Into<String>>(
        letters: Vec<S>,
        neutral: Option<&str>,
        aliases: Vec<(String, String)>,
    ) -> Result<Arc<Self>> {
        let base = Self::new(letters, neutral)?;
        let mut a = Arc::try_unwrap(base).expect("freshly created");
        for (alias, target) in aliases {
            let id = *a
                .index
                .get(&target)
                .ok_or_else(|| Error::InvalidAlphabet(format!("alias target `{target}` missing")))?;
            a.aliases.insert(alias, id);
        }
        Ok(Arc::new(a))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty alphabets
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.letters[l as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn neutral(&self) -> Option<Letter> {
        self.neutral
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        0..self.letters.len() as Letter
    }

    /// Resolve a letter name, accepting registered aliases.
    pub fn resolve(&self, name: &str) -> Result<Letter> {
        self.index
            .get(name)
            .or_else(|| self.aliases.get(name))
            .copied()
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }
}

/// An immutable word over a fixed alphabet. All operations return fresh
/// words, so values can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    entries: Vec<Letter>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.alphabet == other.alphabet
    }
}
impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, entries: Vec<Letter>) -> Result<Self> {
        let size = alphabet.len();
        if let Some(&bad) = entries.iter().find(|&&l| l as usize >= size) {
            return Err(Error::LetterOutOfRange { index: bad, size });
        }
        Ok(Word { alphabet, entries })
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Word { alphabet, entries: Vec::new() }
    }

    /// Parse the `a|b|c` text format; the empty string is the empty word.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self> {
        if text.is_empty() {
            return Ok(Word::empty(alphabet.clone()));
        }
        let entries = text
            .split('|')
            .map(|name| alphabet.resolve(name))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet: alphabet.clone(), entries })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Letter] {
        &self.entries
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Word { alphabet: self.alphabet.clone(), entries })
    }

    pub fn from_entries(&self, entries: Vec<Letter>) -> Word {
        debug_assert!(entries.iter().all(|&l| (l as usize) < self.alphabet.len()));
        Word { alphabet: self.alphabet.clone(), entries }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &l) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str(self.alphabet.name(l))?;
        }
        Ok(())
    }
}

/// A map on ordered letter pairs, applied in place at a position of a word.
pub trait PairMap {
    fn image(&self, s: Letter, t: Letter) -> (Letter, Letter);
}

impl<F: Fn(Letter, Letter) -> (Letter, Letter)> PairMap for F {
    fn image(&self, s: Letter, t: Letter) -> (Letter, Letter) {
        self(s, t)
    }
}

/// A finite sequence of 1-based positions at which a pair map is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionSeq(Vec<usize>);

impl PositionSeq {
    pub fn new(positions: Vec<usize>) -> Self {
        PositionSeq(positions)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &PositionSeq) -> PositionSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        PositionSeq(v)
    }
}

impl fmt::Display for PositionSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub(crate) fn apply_at_entries<F: PairMap + ?Sized>(f: &F, entries: &mut [Letter], pos: usize) {
    let (s, t) = f.image(entries[pos - 1], entries[pos]);
    entries[pos - 1] = s;
    entries[pos] = t;
}

/// Apply `f` to the entries at positions `pos` and `pos + 1` (1-based).
pub fn apply_at<F: PairMap + ?Sized>(f: &F, w: &Word, pos: usize) -> Result<Word> {
    if pos == 0 || pos + 1 > w.len() {
        return Err(Error::PositionOutOfRange { pos, len: w.len() });
    }
    let mut entries = w.entries.clone();
    apply_at_entries(f, &mut entries, pos);
    Ok(w.from_entries(entries))
}

/// Apply `f` along a position sequence, first listed position first.
pub fn apply_sequence<F: PairMap + ?Sized>(f: &F, w: &Word, seq: &PositionSeq) -> Result<Word> {
    if let Some(&bad) = seq.positions().iter().find(|&&p| p == 0 || p + 1 > w.len()) {
        return Err(Error::PositionOutOfRange { pos: bad, len: w.len() });
    }
    let mut entries = w.entries.clone();
    for &pos in seq.positions() {
        apply_at_entries(f, &mut entries, pos);
    }
    Ok(w.from_entries(entries))
}

/// The left-handed triangular schedule: positions that normalise any
/// length-`p` word for instances where left-multiplication recursion is
/// valid. Defined by `d(2) = 1`, `d(p) = shift(d(p-1)) | 1 | 2 | ... | p-1`.
pub fn delta_schedule(p: usize) -> Result<PositionSeq> {
    if p < 2 {
        return Err(Error::ScheduleParameter { p });
    }
    let mut seq: Vec<usize> = vec![1];
    for q in 3..=p {
        for pos in &mut seq {
            *pos += 1;
        }
        seq.extend(1..q);
    }
    Ok(PositionSeq(seq))
}

/// The right-handed triangular schedule: `d~(2) = 1`,
/// `d~(p) = d~(p-1) | p-1 | ... | 2 | 1`.
pub fn delta_tilde_schedule(p: usize) -> Result<PositionSeq> {
    if p < 2 {
        return Err(Error::ScheduleParameter { p });
    }
    let mut seq: Vec<usize> = vec![1];
    for q in 3..=p {
        seq.extend((1..q).rev());
    }
    Ok(PositionSeq(seq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Arc<Alphabet> {
        Alphabet::new(vec!["a", "b", "c"], None).unwrap()
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(Alphabet::new(vec!["a", "a"], None).is_err());
        assert!(Alphabet::new(vec!["a|b"], None).is_err());
        assert!(Alphabet::new(vec!["a b"], None).is_err());
        assert!(Alphabet::new(vec![""], None).is_err());
        assert!(Alphabet::new(vec!["a"], Some("e")).is_err());
        assert!(Alphabet::new(Vec::<String>::new(), None).is_err());
    }

    #[test]
    fn word_parse_display_round_trip() {
        let a = abc();
        let w = Word::parse(&a, "a|c|b").unwrap();
        assert_eq!(w.to_string(), "a|c|b");
        assert_eq!(w.len(), 3);
        let empty = Word::parse(&a, "").unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.to_string(), "");
        assert!(Word::parse(&a, "a|d").is_err());
    }

    #[test]
    fn apply_at_swap_and_identity() {
        let a = abc();
        let swap = |s: Letter, t: Letter| (t, s);
        let id = |s: Letter, t: Letter| (s, t);
        let w = Word::parse(&a, "a|b|c").unwrap();
        assert_eq!(apply_at(&swap, &w, 2).unwrap().to_string(), "a|c|b");
        assert_eq!(apply_at(&id, &w, 1).unwrap(), w);
        assert_eq!(apply_at(&id, &w, 2).unwrap(), w);
        assert!(matches!(
            apply_at(&swap, &w, 3),
            Err(Error::PositionOutOfRange { pos: 3, len: 3 })
        ));
        assert!(apply_at(&swap, &w, 0).is_err());
    }

    #[test]
    fn apply_sequence_empty_is_identity() {
        let a = abc();
        let swap = |s: Letter, t: Letter| (t, s);
        let w = Word::parse(&a, "b|a").unwrap();
        assert_eq!(apply_sequence(&swap, &w, &PositionSeq::new(vec![])).unwrap(), w);
    }

    #[test]
    fn apply_sequence_sorting_is_idempotent() {
        // A two-letter sort map applied twice at the same position.
        let a = Alphabet::new(vec!["a1", "a2"], None).unwrap();
        let sort = |s: Letter, t: Letter| if s > t { (t, s) } else { (s, t) };
        let w = Word::parse(&a, "a2|a1").unwrap();
        let out = apply_sequence(&sort, &w, &PositionSeq::new(vec![1, 1])).unwrap();
        assert_eq!(out.to_string(), "a1|a2");
    }

    #[test]
    fn schedules_match_known_values() {
        assert_eq!(delta_schedule(2).unwrap().positions(), &[1]);
        assert_eq!(delta_schedule(3).unwrap().positions(), &[2, 1, 2]);
        assert_eq!(delta_schedule(4).unwrap().positions(), &[3, 2, 3, 1, 2, 3]);
        assert_eq!(delta_tilde_schedule(2).unwrap().positions(), &[1]);
        assert_eq!(delta_tilde_schedule(3).unwrap().positions(), &[1, 2, 1]);
        assert_eq!(delta_tilde_schedule(4).unwrap().positions(), &[1, 2, 1, 3, 2, 1]);
        assert!(delta_schedule(1).is_err());
        assert!(delta_tilde_schedule(0).is_err());
    }

    #[test]
    fn schedule_lengths_are_triangular() {
        for p in 2..=12 {
            let n = p * (p - 1) / 2;
            assert_eq!(delta_schedule(p).unwrap().len(), n);
            assert_eq!(delta_tilde_schedule(p).unwrap().len(), n);
        }
    }
}
