//! Garside families inside finitely presented homogeneous monoids: a
//! breadth-first word-problem oracle, divisibility and conditional
//! right-lcms, closure of the atoms into the smallest Garside family,
//! family verification, and the induced pair-table normaliser.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::normalise::{LetterOrder, Normaliser, QuadraticMap};
use crate::words::{Alphabet, Letter};

/// Default grade bound for the closure computation.
pub const DEFAULT_CLOSURE_BOUND: usize = 8;

pub type AtomWord = Vec<u32>;

/// A monoid element, keyed by the lexicographically least atom word in its
/// congruence class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub AtomWord);

impl Elem {
    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }
}

struct ClassData {
    /// All words of the congruence class, sorted; the first is canonical.
    members: Vec<AtomWord>,
}

/// A homogeneous finite presentation with an exact bounded word-problem
/// oracle. All relations preserve length, so atom-length grades the monoid
/// and every congruence class is finite and fully enumerable.
pub struct PresentedMonoid {
    atoms: Vec<String>,
    relations: Vec<(AtomWord, AtomWord)>,
    classes: DashMap<AtomWord, Arc<ClassData>>,
    grades: Mutex<HashMap<usize, Arc<Vec<Elem>>>>,
}

impl fmt::Debug for PresentedMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PresentedMonoid({:?}, {} relations)", self.atoms, self.relations.len())
    }
}

impl PresentedMonoid {
    pub fn new(atoms: Vec<String>, relations: Vec<(Vec<String>, Vec<String>)>) -> Result<Arc<Self>> {
        if atoms.is_empty() {
            return Err(Error::InvalidInstance("a presentation needs at least one atom".into()));
        }
        let index: HashMap<&str, u32> =
            atoms.iter().enumerate().map(|(i, a)| (a.as_str(), i as u32)).collect();
        if index.len() != atoms.len() {
            return Err(Error::InvalidInstance("duplicate atom names".into()));
        }
        let mut encoded = Vec::new();
        for (lhs, rhs) in relations {
            let enc = |side: Vec<String>| -> Result<AtomWord> {
                side.iter()
                    .map(|a| index.get(a.as_str()).copied().ok_or_else(|| Error::UnknownLetter(a.clone())))
                    .collect()
            };
            let (l, r) = (enc(lhs)?, enc(rhs)?);
            if l.len() != r.len() {
                return Err(Error::InvalidInstance(
                    "relations must be homogeneous (equal atom lengths on both sides)".into(),
                ));
            }
            if l != r {
                encoded.push((l, r));
            }
        }
        Ok(Arc::new(PresentedMonoid {
            atoms,
            relations: encoded,
            classes: DashMap::new(),
            grades: Mutex::new(HashMap::new()),
        }))
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Tokenise a concatenated atom string (`σ1σ2σ1`) by longest match.
    pub fn parse_atom_word(&self, text: &str) -> Result<AtomWord> {
        let mut out = Vec::new();
        let mut rest = text;
        'outer: while !rest.is_empty() {
            let mut best: Option<(usize, u32)> = None;
            for (i, atom) in self.atoms.iter().enumerate() {
                if rest.starts_with(atom.as_str())
                    && best.is_none_or(|(len, _)| atom.len() > len)
                {
                    best = Some((atom.len(), i as u32));
                }
            }
            if let Some((len, id)) = best {
                out.push(id);
                rest = &rest[len..];
                continue 'outer;
            }
            return Err(Error::UnknownLetter(rest.to_string()));
        }
        Ok(out)
    }

    pub fn render_atom_word(&self, word: &AtomWord) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter().map(|&a| self.atoms[a as usize].as_str()).collect()
    }

    /// The full congruence class of a word, computed by breadth-first
    /// relation application inside the fixed length class and memoised for
    /// every member.
    fn class(&self, word: &AtomWord) -> Arc<ClassData> {
        if let Some(hit) = self.classes.get(word) {
            return hit.clone();
        }
        let mut seen: BTreeSet<AtomWord> = BTreeSet::new();
        let mut queue: VecDeque<AtomWord> = VecDeque::new();
        seen.insert(word.clone());
        queue.push_back(word.clone());
        while let Some(current) = queue.pop_front() {
            for (lhs, rhs) in &self.relations {
                for (pattern, image) in [(lhs, rhs), (rhs, lhs)] {
                    if pattern.len() > current.len() {
                        continue;
                    }
                    for start in 0..=current.len() - pattern.len() {
                        if &current[start..start + pattern.len()] == pattern.as_slice() {
                            let mut next = current.clone();
                            next[start..start + pattern.len()].copy_from_slice(image);
                            if seen.insert(next.clone()) {
                                queue.push_back(next);
                            }
                        }
                    }
                }
            }
        }
        let members: Vec<AtomWord> = seen.into_iter().collect();
        let data = Arc::new(ClassData { members });
        for member in &data.members {
            self.classes.insert(member.clone(), data.clone());
        }
        data
    }

    pub fn canon(&self, word: &AtomWord) -> Elem {
        Elem(self.class(word).members[0].clone())
    }

    pub fn equal(&self, a: &AtomWord, b: &AtomWord) -> bool {
        a.len() == b.len() && (a == b || self.canon(a) == self.canon(b))
    }

    pub fn unit(&self) -> Elem {
        Elem(Vec::new())
    }

    pub fn atom_elem(&self, atom: u32) -> Elem {
        self.canon(&vec![atom])
    }

    pub fn product(&self, a: &Elem, b: &Elem) -> Elem {
        let mut word = a.0.clone();
        word.extend_from_slice(&b.0);
        self.canon(&word)
    }

    /// All distinct elements of a given grade.
    pub fn elements_of_grade(&self, grade: usize) -> Arc<Vec<Elem>> {
        if let Some(hit) = self.grades.lock().unwrap().get(&grade) {
            return hit.clone();
        }
        let mut seen: HashSet<AtomWord> = HashSet::new();
        let mut out: BTreeSet<Elem> = BTreeSet::new();
        let k = self.atoms.len() as u32;
        let mut current = vec![0u32; grade];
        loop {
            if !seen.contains(&current) {
                let class = self.class(&current);
                for member in &class.members {
                    seen.insert(member.clone());
                }
                out.insert(Elem(class.members[0].clone()));
            }
            let mut i = grade;
            loop {
                if i == 0 {
                    let result = Arc::new(out.into_iter().collect::<Vec<_>>());
                    self.grades.lock().unwrap().insert(grade, result.clone());
                    return result;
                }
                i -= 1;
                current[i] += 1;
                if current[i] < k {
                    break;
                }
                current[i] = 0;
            }
        }
    }

    /// Whether `f` left-divides `g`: some member of the class of `g` starts
    /// with the canonical word of `f`.
    pub fn left_divides(&self, f: &Elem, g: &Elem) -> bool {
        if f.grade() > g.grade() {
            return false;
        }
        self.class(&g.0).members.iter().any(|m| m.starts_with(&f.0))
    }

    pub fn right_divides(&self, f: &Elem, g: &Elem) -> bool {
        if f.grade() > g.grade() {
            return false;
        }
        self.class(&g.0).members.iter().any(|m| m.ends_with(&f.0))
    }

    /// The element `x` with `f · x = g`, when `f` left-divides `g`.
    /// Distinct quotients would contradict left-cancellativity and are
    /// reported as an invalid instance.
    pub fn left_quotient(&self, f: &Elem, g: &Elem) -> Result<Option<Elem>> {
        let class = self.class(&g.0);
        let mut quotient: Option<Elem> = None;
        for member in &class.members {
            if member.starts_with(&f.0) {
                let x = self.canon(&member[f.grade()..].to_vec());
                match &quotient {
                    None => quotient = Some(x),
                    Some(prev) if *prev == x => {}
                    Some(prev) => {
                        return Err(Error::InvalidInstance(format!(
                            "monoid is not left-cancellative: {} has quotients {} and {} by {}",
                            self.render_atom_word(&g.0),
                            self.render_atom_word(&prev.0),
                            self.render_atom_word(&x.0),
                            self.render_atom_word(&f.0),
                        )))
                    }
                }
            }
        }
        Ok(quotient)
    }

    /// All right-divisors of `g`: canonicalised suffixes of class members.
    pub fn right_divisors(&self, g: &Elem) -> BTreeSet<Elem> {
        let class = self.class(&g.0);
        let mut out = BTreeSet::new();
        for member in &class.members {
            for start in 0..=member.len() {
                out.insert(self.canon(&member[start..].to_vec()));
            }
        }
        out
    }
}

/// Outcome of a bounded conditional right-lcm search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcmResult {
    /// No common right-multiple within the grade bound.
    None,
    /// The least common right-multiple (it divides every common multiple
    /// found within the bound).
    Lcm(Elem),
    /// Minimal common multiples exist but none divides all others within
    /// the bound: the lcm fails to exist there.
    NotUnique(Vec<Elem>),
}

/// Search for the right-lcm of `f` and `g` among elements of grade at most
/// `bound`.
pub fn right_lcm(mp: &PresentedMonoid, f: &Elem, g: &Elem, bound: usize) -> LcmResult {
    let mut common: Vec<Elem> = Vec::new();
    for grade in f.grade().max(g.grade())..=bound {
        for h in mp.elements_of_grade(grade).iter() {
            if mp.left_divides(f, h) && mp.left_divides(g, h) {
                common.push(h.clone());
            }
        }
    }
    let Some(first) = common.first().cloned() else {
        return LcmResult::None;
    };
    let minimal_grade = first.grade();
    let minimal: Vec<Elem> =
        common.iter().filter(|h| h.grade() == minimal_grade).cloned().collect();
    if minimal.len() == 1 && common.iter().all(|h| mp.left_divides(&minimal[0], h)) {
        LcmResult::Lcm(minimal.into_iter().next().expect("nonempty"))
    } else {
        LcmResult::NotUnique(minimal)
    }
}

/// A candidate Garside family: a finite set of elements containing the unit.
#[derive(Debug, Clone)]
pub struct FamilyCandidate {
    pub members: BTreeSet<Elem>,
}

impl FamilyCandidate {
    pub fn new(members: BTreeSet<Elem>) -> Self {
        FamilyCandidate { members }
    }

    pub fn size_with_unit(&self) -> usize {
        self.members.len() + usize::from(!self.members.contains(&Elem(Vec::new())))
    }

    pub fn size_without_unit(&self) -> usize {
        self.members.len() - usize::from(self.members.contains(&Elem(Vec::new())))
    }
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub family: FamilyCandidate,
    pub reached_fixpoint: bool,
    pub iterations: usize,
}

/// Close the atoms (plus the unit) under right-divisor and existing
/// right-lcms, bounding every search by `bound` atom-lengths. For a
/// noetherian monoid with conditional right-lcms the fixpoint is the
/// smallest Garside family containing the atoms.
pub fn closure_smallest_garside(mp: &PresentedMonoid, bound: usize) -> ClosureReport {
    let mut members: BTreeSet<Elem> = BTreeSet::new();
    members.insert(mp.unit());
    for a in 0..mp.atom_count() as u32 {
        members.insert(mp.atom_elem(a));
    }
    let mut iterations = 0;
    let mut truncated = false;
    loop {
        iterations += 1;
        let mut next = members.clone();
        for m in &members {
            next.extend(mp.right_divisors(m));
        }
        let snapshot: Vec<Elem> = next.iter().cloned().collect();
        for (i, f) in snapshot.iter().enumerate() {
            for g in &snapshot[i..] {
                match right_lcm(mp, f, g, bound) {
                    LcmResult::Lcm(h) => {
                        next.insert(h);
                    }
                    LcmResult::None => {}
                    LcmResult::NotUnique(_) => {
                        truncated = true;
                    }
                }
            }
        }
        if next == members {
            break;
        }
        if next.iter().any(|e| e.grade() > bound) {
            truncated = true;
        }
        members = next;
        if iterations > bound + 2 {
            truncated = true;
            break;
        }
    }
    ClosureReport {
        family: FamilyCandidate::new(members),
        reached_fixpoint: !truncated,
        iterations,
    }
}

/// The local normality condition for a pair of family members: no family
/// element can be pulled across the boundary, uniformly over left
/// multipliers up to `f_bound`. This is the bounded form of the defining
/// condition; reports always state the bound.
pub fn is_s_normal_pair(
    mp: &PresentedMonoid,
    family: &FamilyCandidate,
    s1: &Elem,
    s2: &Elem,
    f_bound: usize,
) -> bool {
    let product = mp.product(s1, s2);
    for grade in 0..=f_bound {
        for f in mp.elements_of_grade(grade).iter() {
            let f_s1 = mp.product(f, s1);
            let f_s1_s2 = mp.product(f, &product);
            for s in &family.members {
                if mp.left_divides(s, &f_s1_s2) && !mp.left_divides(s, &f_s1) {
                    return false;
                }
            }
        }
    }
    true
}

/// The greedy form of pair normality: no strict enlargement of `s1` inside
/// the family divides `s1·s2`. Equivalent to the multiplier-quantified
/// condition when the family is closed under right-comultiple and
/// right-divisor.
pub fn is_s_normal_pair_greedy(
    mp: &PresentedMonoid,
    family: &FamilyCandidate,
    s1: &Elem,
    s2: &Elem,
) -> bool {
    let product = mp.product(s1, s2);
    for s in &family.members {
        if mp.left_divides(s1, s) && *s != *s1 && mp.left_divides(s, &product) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub passed: bool,
    pub failures: Vec<String>,
    pub elements_checked: usize,
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "pass ({} elements checked)", self.elements_checked)
        } else {
            write!(f, "FAIL: {}", self.failures.join("; "))
        }
    }
}

/// Verify a candidate family: exact right-divisor closure, right-lcm
/// closure within the bound, and existence of normal decompositions for
/// every element up to the grade bound (validated pairwise).
pub fn verify_garside_family(
    mp: &PresentedMonoid,
    family: &FamilyCandidate,
    bound: usize,
) -> FamilyReport {
    let mut failures = Vec::new();
    let render = |e: &Elem| mp.render_atom_word(&e.0);
    if !family.members.contains(&mp.unit()) {
        failures.push("family does not contain the unit".to_string());
    }
    for m in &family.members {
        for d in mp.right_divisors(m) {
            if !family.members.contains(&d) {
                failures.push(format!(
                    "not closed under right-divisor: {} right-divides {} but is missing",
                    render(&d),
                    render(m)
                ));
            }
        }
    }
    let members: Vec<Elem> = family.members.iter().cloned().collect();
    for (i, f) in members.iter().enumerate() {
        for g in &members[i..] {
            match right_lcm(mp, f, g, bound) {
                LcmResult::Lcm(h) => {
                    if !family.members.contains(&h) {
                        failures.push(format!(
                            "not closed under right-lcm: lcm({}, {}) = {} is missing",
                            render(f),
                            render(g),
                            render(&h)
                        ));
                    }
                }
                LcmResult::None => {}
                LcmResult::NotUnique(ms) => failures.push(format!(
                    "no least common multiple of {} and {} within grade {bound}: minimal ones {:?}",
                    render(f),
                    render(g),
                    ms.iter().map(render).collect::<Vec<_>>()
                )),
            }
        }
    }
    let mut elements_checked = 0;
    if failures.is_empty() {
        'outer: for grade in 0..=bound {
            for g in mp.elements_of_grade(grade).iter() {
                elements_checked += 1;
                match s_normal_decomposition(mp, family, g) {
                    Ok(decomposition) => {
                        for pair in decomposition.windows(2) {
                            if !is_s_normal_pair_greedy(mp, family, &pair[0], &pair[1]) {
                                failures.push(format!(
                                    "decomposition of {} has a non-normal pair ({}, {})",
                                    render(g),
                                    render(&pair[0]),
                                    render(&pair[1])
                                ));
                                break 'outer;
                            }
                        }
                    }
                    Err(e) => {
                        failures.push(format!("no normal decomposition for {}: {e}", render(g)));
                        break 'outer;
                    }
                }
            }
        }
    }
    FamilyReport { passed: failures.is_empty(), failures, elements_checked }
}

/// The unique maximal family member left-dividing `g`.
pub fn s_head(mp: &PresentedMonoid, family: &FamilyCandidate, g: &Elem) -> Result<Elem> {
    let divisors: Vec<&Elem> =
        family.members.iter().filter(|s| mp.left_divides(s, g)).collect();
    let mut maximal: Vec<&Elem> = Vec::new();
    for d in &divisors {
        if divisors.iter().all(|other| mp.left_divides(other, d)) {
            maximal.push(d);
        }
    }
    match maximal.as_slice() {
        [unique] => Ok((*unique).clone()),
        _ => Err(Error::NotAGarsideFamily(format!(
            "element {} has no unique maximal family divisor ({} maximal among {})",
            mp.render_atom_word(&g.0),
            maximal.len(),
            divisors.len()
        ))),
    }
}

/// Greedy decomposition of `g` into family members, head first.
pub fn s_normal_decomposition(
    mp: &PresentedMonoid,
    family: &FamilyCandidate,
    g: &Elem,
) -> Result<Vec<Elem>> {
    let mut rest = g.clone();
    let mut out = Vec::new();
    while !rest.is_unit() {
        let head = s_head(mp, family, &rest)?;
        if head.is_unit() {
            return Err(Error::NotAGarsideFamily(format!(
                "no family member divides {}",
                mp.render_atom_word(&rest.0)
            )));
        }
        rest = mp.left_quotient(&head, &rest)?.expect("head divides");
        out.push(head);
    }
    Ok(out)
}

struct FamilyOrder {
    monoid: Arc<PresentedMonoid>,
    elems: Vec<Elem>,
}

impl LetterOrder for FamilyOrder {
    fn leq(&self, s: Letter, t: Letter) -> bool {
        self.monoid.left_divides(&self.elems[s as usize], &self.elems[t as usize])
    }
}

/// Build the pair-table normaliser of a verified family: each pair maps to
/// its head and the complement, the unit is the neutral letter, and
/// divisibility is answered exactly by the presented monoid.
pub fn family_to_normaliser(
    mp: &Arc<PresentedMonoid>,
    family: &FamilyCandidate,
) -> Result<Normaliser> {
    let mut elems: Vec<Elem> = family.members.iter().cloned().collect();
    elems.sort_by_key(|e| (e.grade(), e.0.clone()));
    if elems.first().is_none_or(|e| !e.is_unit()) {
        return Err(Error::NotAGarsideFamily("family must contain the unit".into()));
    }
    let names: Vec<String> = elems.iter().map(|e| mp.render_atom_word(&e.0)).collect();
    let alphabet = Alphabet::new(names, Some("1"))?;
    let index: BTreeMap<&Elem, Letter> =
        elems.iter().enumerate().map(|(i, e)| (e, i as Letter)).collect();
    let n = elems.len();
    let mut table = vec![(0 as Letter, 0 as Letter); n * n];
    for (i, s1) in elems.iter().enumerate() {
        for (j, s2) in elems.iter().enumerate() {
            let product = mp.product(s1, s2);
            let head = s_head(mp, family, &product)?;
            let rest = mp.left_quotient(&head, &product)?.expect("head divides");
            let (Some(&h), Some(&r)) = (index.get(&head), index.get(&rest)) else {
                return Err(Error::NotAGarsideFamily(format!(
                    "pair ({}, {}) normalises through {} | {}, which leaves the family",
                    mp.render_atom_word(&s1.0),
                    mp.render_atom_word(&s2.0),
                    mp.render_atom_word(&head.0),
                    mp.render_atom_word(&rest.0),
                )));
            };
            table[i * n + j] = (h, r);
        }
    }
    let map = QuadraticMap::dense(alphabet, move |s, t| table[s as usize * n + t as usize])?;
    Ok(Normaliser::new(map)?
        .with_declared_class(4, 3)
        .with_divisibility(Arc::new(FamilyOrder { monoid: mp.clone(), elems })))
}

/// Parse `{"members": [...]}`-style member lists against a presentation.
pub fn family_from_names(mp: &PresentedMonoid, names: &[String]) -> Result<FamilyCandidate> {
    let mut members = BTreeSet::new();
    members.insert(mp.unit());
    for name in names {
        if name == "1" {
            continue;
        }
        members.insert(mp.canon(&mp.parse_atom_word(name)?));
    }
    Ok(FamilyCandidate::new(members))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atilde2() -> Arc<PresentedMonoid> {
        let rel = |a: &str, b: &str| {
            (
                a.chars().map(|c| format!("σ{c}")).collect::<Vec<_>>(),
                b.chars().map(|c| format!("σ{c}")).collect::<Vec<_>>(),
            )
        };
        PresentedMonoid::new(
            vec!["σ1".into(), "σ2".into(), "σ3".into()],
            vec![rel("121", "212"), rel("232", "323"), rel("313", "131")],
        )
        .unwrap()
    }

    fn power_shift(n: usize) -> Arc<PresentedMonoid> {
        // two atoms a, b with a·b^n = b^{n+1}
        let lhs: Vec<String> =
            std::iter::once("a".to_string()).chain((0..n).map(|_| "b".to_string())).collect();
        let rhs: Vec<String> = (0..=n).map(|_| "b".to_string()).collect();
        PresentedMonoid::new(vec!["a".into(), "b".into()], vec![(lhs, rhs)]).unwrap()
    }

    #[test]
    fn equality_oracle() {
        let mp = atilde2();
        let w1 = mp.parse_atom_word("σ1σ2σ1").unwrap();
        let w2 = mp.parse_atom_word("σ2σ1σ2").unwrap();
        let w3 = mp.parse_atom_word("σ1σ2").unwrap();
        let w4 = mp.parse_atom_word("σ2σ1").unwrap();
        assert!(mp.equal(&w1, &w2));
        assert!(!mp.equal(&w3, &w4));
        assert!(mp.equal(&w3, &w3));
    }

    #[test]
    fn homogeneity_required() {
        assert!(PresentedMonoid::new(
            vec!["a".into(), "b".into()],
            vec![(vec!["a".into()], vec!["b".into(), "b".into()])],
        )
        .is_err());
    }

    #[test]
    fn divisibility_examples() {
        let mp = atilde2();
        let s1 = mp.atom_elem(0);
        let s3 = mp.atom_elem(2);
        let braid12 = mp.canon(&mp.parse_atom_word("σ1σ2σ1").unwrap());
        assert!(mp.left_divides(&s1, &braid12));
        assert!(!mp.left_divides(&s3, &braid12));

        // with a·b^2 = b^3, the atom a divides b^3
        let mp = power_shift(2);
        let a = mp.atom_elem(0);
        let b3 = mp.canon(&mp.parse_atom_word("bbb").unwrap());
        assert!(mp.left_divides(&a, &b3));
        assert!(!mp.right_divides(&a, &b3));
    }

    #[test]
    fn lcm_examples() {
        let mp = atilde2();
        let s1 = mp.atom_elem(0);
        let s2 = mp.atom_elem(1);
        let braid12 = mp.canon(&mp.parse_atom_word("σ1σ2σ1").unwrap());
        assert_eq!(right_lcm(&mp, &s1, &s2, 6), LcmResult::Lcm(braid12));
        assert_eq!(right_lcm(&mp, &s1, &s1, 6), LcmResult::Lcm(s1.clone()));

        let ab = PresentedMonoid::new(
            vec!["a".into(), "b".into()],
            vec![(vec!["a".into(), "b".into()], vec!["b".into(), "a".into()])],
        )
        .unwrap();
        let lcm = right_lcm(&ab, &ab.atom_elem(0), &ab.atom_elem(1), 4);
        assert_eq!(lcm, LcmResult::Lcm(ab.canon(&vec![0, 1])));
    }

    #[test]
    fn closure_sizes() {
        let mp = atilde2();
        let report = closure_smallest_garside(&mp, DEFAULT_CLOSURE_BOUND);
        assert!(report.reached_fixpoint);
        assert_eq!(report.family.size_with_unit(), 16);
        assert_eq!(report.family.size_without_unit(), 15);

        let ab = PresentedMonoid::new(
            vec!["a".into(), "b".into()],
            vec![(vec!["a".into(), "b".into()], vec!["b".into(), "a".into()])],
        )
        .unwrap();
        assert_eq!(closure_smallest_garside(&ab, 4).family.size_with_unit(), 4);

        let braid3 = PresentedMonoid::new(
            vec!["σ1".into(), "σ2".into()],
            vec![(
                vec!["σ1".into(), "σ2".into(), "σ1".into()],
                vec!["σ2".into(), "σ1".into(), "σ2".into()],
            )],
        )
        .unwrap();
        assert_eq!(closure_smallest_garside(&braid3, 4).family.size_with_unit(), 6);

        let mp = power_shift(2);
        let report = closure_smallest_garside(&mp, DEFAULT_CLOSURE_BOUND);
        assert_eq!(report.family.size_with_unit(), 5);
    }

    #[test]
    fn normal_pair_checks() {
        let mp = atilde2();
        let family = closure_smallest_garside(&mp, DEFAULT_CLOSURE_BOUND).family;
        let braid12 = mp.canon(&mp.parse_atom_word("σ1σ2σ1").unwrap());
        let s1 = mp.atom_elem(0);
        let s2 = mp.atom_elem(1);
        assert!(is_s_normal_pair(&mp, &family, &braid12, &s1, 4));
        assert!(is_s_normal_pair(&mp, &family, &s1, &mp.unit(), 4));
        assert!(!is_s_normal_pair(&mp, &family, &s1, &s2, 4));
        // greedy form agrees on these pairs
        assert!(is_s_normal_pair_greedy(&mp, &family, &braid12, &s1));
        assert!(is_s_normal_pair_greedy(&mp, &family, &s1, &mp.unit()));
        assert!(!is_s_normal_pair_greedy(&mp, &family, &s1, &s2));
    }

    #[test]
    fn verify_families() {
        let mp = atilde2();
        let family = closure_smallest_garside(&mp, DEFAULT_CLOSURE_BOUND).family;
        let report = verify_garside_family(&mp, &family, 6);
        assert!(report.passed, "{report}");

        // atoms alone are not lcm-closed
        let atoms_only = FamilyCandidate::new(
            [mp.unit(), mp.atom_elem(0), mp.atom_elem(1), mp.atom_elem(2)].into_iter().collect(),
        );
        let report = verify_garside_family(&mp, &atoms_only, 6);
        assert!(!report.passed);
        assert!(report.failures.iter().any(|f| f.contains("right-lcm")));

        let mp = power_shift(2);
        let family = closure_smallest_garside(&mp, DEFAULT_CLOSURE_BOUND).family;
        let report = verify_garside_family(&mp, &family, 6);
        assert!(report.passed, "{report}");
    }

    #[test]
    fn family_normaliser_smoke() {
        let mp = power_shift(2);
        let family = closure_smallest_garside(&mp, DEFAULT_CLOSURE_BOUND).family;
        let nz = family_to_normaliser(&mp, &family).unwrap();
        assert_eq!(nz.alphabet().len(), 5);
        let report = nz.verify_axioms(4, crate::normalise::DEFAULT_SEED);
        assert!(report.passed, "{report}");
    }

    #[test]
    fn family_from_names_parses() {
        let mp = power_shift(2);
        let family = family_from_names(
            &mp,
            &["1".into(), "a".into(), "b".into(), "bb".into(), "bbb".into()],
        )
        .unwrap();
        assert_eq!(family.size_with_unit(), 5);
        // abb = bbb collapses onto the same element
        let same = family_from_names(&mp, &["abb".into(), "bbb".into()]).unwrap();
        assert_eq!(same.size_without_unit(), 1);
    }
}
