//! The plactic instance: strictly decreasing columns over a linearly
//! ordered finite set, two-column insertion as the pair table, tableaux as
//! normal words.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::normalise::{Normaliser, QuadraticMap};
use crate::words::{Alphabet, Letter, Word};

/// A column: a strictly decreasing sequence over `{1, ..., k}`, possibly
/// empty. Entries are listed top-down in decreasing order, matching the
/// serialisation `[3,1]`; the empty column `[]` is the padding letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Column(Vec<u8>);

impl Column {
    pub fn new(mut entries: Vec<u8>) -> Result<Self> {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        if entries.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("column entries must be distinct".into()));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidParameter("column entries start at 1".into()));
        }
        Ok(Column(entries))
    }

    pub fn empty() -> Self {
        Column(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Entries in decreasing order.
    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// The column as a word over the base set, read in decreasing order
    /// (that is how a column multiplies out in the monoid).
    pub fn reading(&self) -> &[u8] {
        &self.0
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> = self.0.iter().map(u8::to_string).collect();
        format!("[{}]", inner.join(","))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidParameter(format!("not a column literal: `{text}`")))?;
        if inner.is_empty() {
            return Ok(Column::empty());
        }
        let entries = inner
            .split(',')
            .map(|p| {
                p.parse::<u8>()
                    .map_err(|_| Error::InvalidParameter(format!("bad column entry `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Column::new(entries)
    }

    fn mask(&self) -> u32 {
        self.0.iter().fold(0u32, |m, &e| m | 1 << (e - 1))
    }

    fn from_mask(mask: u32) -> Self {
        let mut entries: Vec<u8> = (1..=32u8).filter(|&e| mask >> (e - 1) & 1 == 1).collect();
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Column(entries)
    }
}

/// Whether the two-column state is a tableau: the left column is at least
/// as long, and the k-th smallest entry of the left column is at most the
/// k-th smallest of the right one. (Reading by size aligns the rows; the
/// alternative alignment would reject genuine tableaux.)
pub fn pair_is_tableau(left: &Column, right: &Column) -> bool {
    if left.len() < right.len() {
        return false;
    }
    let left_asc: Vec<u8> = left.0.iter().rev().copied().collect();
    let right_asc: Vec<u8> = right.0.iter().rev().copied().collect();
    right_asc.iter().enumerate().all(|(k, &r)| left_asc[k] <= r)
}

/// Row-insert a single value into tableau rows (weakly increasing rows).
fn row_insert(rows: &mut Vec<Vec<u8>>, value: u8) {
    let mut carry = value;
    for row in rows.iter_mut() {
        match row.iter().position(|&x| x > carry) {
            None => {
                row.push(carry);
                return;
            }
            Some(i) => {
                std::mem::swap(&mut row[i], &mut carry);
            }
        }
    }
    rows.push(vec![carry]);
}

/// The tableau of an arbitrary word over the base set, as rows.
fn tableau_rows(word: &[u8]) -> Vec<Vec<u8>> {
    let mut rows = Vec::new();
    for &v in word {
        row_insert(&mut rows, v);
    }
    rows
}

fn rows_to_columns(rows: &[Vec<u8>]) -> Vec<Column> {
    let width = rows.first().map_or(0, Vec::len);
    (0..width)
        .map(|j| {
            let mut col: Vec<u8> =
                rows.iter().filter_map(|row| row.get(j).copied()).collect();
            col.sort_unstable_by(|a, b| b.cmp(a));
            Column(col)
        })
        .collect()
}

/// Multiply two columns and re-express the product as a two-column tableau,
/// padding with the empty column when the product is a single column. The
/// congruence-class tests pin this to the monoid's multiplication.
pub fn insert_pair(left: &Column, right: &Column) -> (Column, Column) {
    let mut word = left.reading().to_vec();
    word.extend_from_slice(right.reading());
    let rows = tableau_rows(&word);
    let mut columns = rows_to_columns(&rows);
    debug_assert!(columns.len() <= 2, "a product of two columns has at most two columns");
    while columns.len() < 2 {
        columns.push(Column::empty());
    }
    let right_out = columns.pop().expect("padded");
    let left_out = columns.pop().expect("padded");
    (left_out, right_out)
}

/// The column alphabet over `{1, .., k}`: all 2^k columns, the empty one
/// neutral. Letter ids are the subset bitmasks.
pub fn plactic_alphabet(k: u8) -> Result<Arc<Alphabet>> {
    if k == 0 || k > 6 {
        return Err(Error::InvalidParameter(format!(
            "plactic base set size must be between 1 and 6, got {k}"
        )));
    }
    let names: Vec<String> =
        (0u32..1 << k).map(|mask| Column::from_mask(mask).render()).collect();
    Alphabet::new(names, Some("[]"))
}

/// The plactic normaliser: pair table by two-column insertion.
pub fn plactic_normaliser(k: u8) -> Result<Normaliser> {
    let alphabet = plactic_alphabet(k)?;
    let map = QuadraticMap::dense(alphabet, |s, t| {
        let (left, right) = insert_pair(&Column::from_mask(s), &Column::from_mask(t));
        (left.mask(), right.mask())
    })?;
    Ok(Normaliser::new(map)?.with_declared_class(3, 3))
}

/// Letter id of a column within the plactic alphabet.
pub fn column_letter(c: &Column) -> Letter {
    c.mask()
}

pub fn letter_column(l: Letter) -> Column {
    Column::from_mask(l)
}

/// The tableau of a column word: its geodesic normal form, returned as the
/// list of columns.
pub fn tableau_of(nz: &Normaliser, w: &Word) -> Result<Vec<Column>> {
    let normal = nz.geodesic_normal_form(w)?;
    Ok(normal.entries().iter().map(|&l| letter_column(l)).collect())
}
