//! Finite divisor lattices of Garside monoids: free abelian cubes, braid
//! permutation lattices, and torus-type chains, together with head/pair
//! normalisation, complements, and the group normal form.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::normalise::{LetterOrder, Normaliser, QuadraticMap};
use crate::words::{Alphabet, Letter, Word};

/// Index of a simple element within its lattice.
pub type Simple = u32;

#[derive(Debug)]
enum Kind {
    /// Simples are bitmasks of the `n` unit vectors; the id is the mask.
    Abelian { n: u32 },
    /// Simples are the `n!` permutations, stored in one-line notation with
    /// 0-based images. `perms` is lexicographically sorted, so id 0 is the
    /// identity and the last id is the half-turn.
    Braid { n: usize, perms: Vec<Vec<u8>>, index: HashMap<Vec<u8>, Simple> },
    /// `n` disjoint chains from 1 to the top element; id 0 is the unit,
    /// chain points follow chain by chain, the last id is the top.
    Torus { exps: Vec<u32> },
}

/// A finite lattice of simple elements with bottom 1 and a top element whose
/// divisors the simples are. Immutable after construction; every operation
/// is pure.
#[derive(Debug)]
pub struct GarsideLattice {
    kind: Kind,
    names: Vec<String>,
    aliases: Vec<(String, String)>,
    alphabet: OnceLock<Arc<Alphabet>>,
    phi_inverse: OnceLock<Vec<Simple>>,
}

fn inversions(p: &[u8]) -> u32 {
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                count += 1;
            }
        }
    }
    count
}

fn invert(p: &[u8]) -> Vec<u8> {
    let mut q = vec![0u8; p.len()];
    for (i, &v) in p.iter().enumerate() {
        q[v as usize] = i as u8;
    }
    q
}

/// Braid-order composition: `u` first, then `v`.
fn compose(u: &[u8], v: &[u8]) -> Vec<u8> {
    u.iter().map(|&i| v[i as usize]).collect()
}

/// Lexicographically least reduced word of a permutation: repeatedly pick
/// the smallest descent.
fn least_reduced_word(p: &[u8]) -> Vec<usize> {
    let mut p = p.to_vec();
    let mut word = Vec::new();
    loop {
        match (0..p.len() - 1).find(|&i| p[i] > p[i + 1]) {
            None => return word,
            Some(i) => {
                word.push(i + 1);
                p.swap(i, i + 1);
            }
        }
    }
}

fn all_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = (0..n as u8).collect();
    let mut chosen = vec![false; n];
    fn rec(n: usize, current: &mut Vec<u8>, chosen: &mut Vec<bool>, pos: usize, out: &mut Vec<Vec<u8>>) {
        if pos == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !chosen[v] {
                chosen[v] = true;
                current[pos] = v as u8;
                rec(n, current, chosen, pos + 1, out);
                chosen[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut chosen, 0, &mut out);
    out.sort();
    out
}

impl GarsideLattice {
    /// The rank-`n` free abelian cube: simples are the 2^n subsets of the
    /// unit vectors.
    pub fn abelian(n: u32) -> Result<Arc<Self>> {
        if n < 1 || n > 10 {
            return Err(Error::InvalidParameter(format!(
                "abelian rank must be between 1 and 10, got {n}"
            )));
        }
        let unit_names: Vec<char> = ('a'..).take(n as usize).collect();
        let full = (1u32 << n) - 1;
        let mut names = Vec::with_capacity(1 << n);
        let mut aliases = Vec::new();
        for mask in 0..=full {
            let name = if mask == 0 {
                "1".to_string()
            } else if mask == full {
                let subset: String = unit_names.iter().collect();
                aliases.push((subset, "Δ".to_string()));
                aliases.push(("delta".to_string(), "Δ".to_string()));
                "Δ".to_string()
            } else {
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| unit_names[i as usize]).collect()
            };
            names.push(name);
        }
        Ok(Arc::new(GarsideLattice {
            kind: Kind::Abelian { n },
            names,
            aliases,
            alphabet: OnceLock::new(),
            phi_inverse: OnceLock::new(),
        }))
    }

    /// The braid lattice on `n` strands: simples are the n! permutations.
    pub fn braid(n: usize) -> Result<Arc<Self>> {
        if !(2..=6).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "braid strand count must be between 2 and 6, got {n}"
            )));
        }
        let perms = all_permutations(n);
        let index: HashMap<Vec<u8>, Simple> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i as Simple)).collect();
        let mut names = Vec::with_capacity(perms.len());
        let mut aliases = Vec::new();
        let half_turn: Vec<u8> = (0..n as u8).rev().collect();
        for p in &perms {
            let rw = least_reduced_word(p);
            let canonical: String = rw.iter().map(|i| format!("σ{i}")).collect();
            let ascii: String = rw.iter().map(|i| format!("s{i}")).collect();
            let name = if p.windows(2).all(|w| w[0] < w[1]) {
                "1".to_string()
            } else if *p == half_turn {
                aliases.push((canonical, "Δ".to_string()));
                aliases.push((ascii, "Δ".to_string()));
                aliases.push(("delta".to_string(), "Δ".to_string()));
                "Δ".to_string()
            } else {
                aliases.push((ascii, canonical.clone()));
                canonical
            };
            names.push(name);
        }
        Ok(Arc::new(GarsideLattice {
            kind: Kind::Braid { n, perms, index },
            names,
            aliases,
            alphabet: OnceLock::new(),
            phi_inverse: OnceLock::new(),
        }))
    }

    /// The torus-type lattice: disjoint chains of lengths `exps` joining the
    /// unit to the top element.
    pub fn torus(exps: &[u32]) -> Result<Arc<Self>> {
        if exps.is_empty() {
            return Err(Error::InvalidParameter("torus needs at least one chain".into()));
        }
        if let Some(&e) = exps.iter().find(|&&e| e < 2) {
            return Err(Error::InvalidParameter(format!(
                "torus exponents must be at least 2, got {e}"
            )));
        }
        let mut names = vec!["1".to_string()];
        for (i, &e) in exps.iter().enumerate() {
            for j in 1..e {
                let name =
                    if j == 1 { format!("a{}", i + 1) } else { format!("a{}^{}", i + 1, j) };
                names.push(name);
            }
        }
        names.push("Δ".to_string());
        let aliases = vec![("delta".to_string(), "Δ".to_string())];
        Ok(Arc::new(GarsideLattice {
            kind: Kind::Torus { exps: exps.to_vec() },
            names,
            aliases,
            alphabet: OnceLock::new(),
            phi_inverse: OnceLock::new(),
        }))
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, s: Simple) -> &str {
        &self.names[s as usize]
    }

    pub fn unit(&self) -> Simple {
        0
    }

    pub fn delta(&self) -> Simple {
        (self.names.len() - 1) as Simple
    }

    pub fn simples(&self) -> impl Iterator<Item = Simple> + Clone {
        0..self.names.len() as Simple
    }

    /// Chain coordinates of a torus simple: `None` for unit and top.
    fn torus_point(&self, s: Simple) -> Option<(usize, u32)> {
        let Kind::Torus { exps } = &self.kind else { unreachable!() };
        if s == self.unit() || s == self.delta() {
            return None;
        }
        let mut id = s - 1;
        for (chain, &e) in exps.iter().enumerate() {
            if id < e - 1 {
                return Some((chain, id + 1));
            }
            id -= e - 1;
        }
        unreachable!()
    }

    fn torus_id(&self, chain: usize, exp: u32) -> Simple {
        let Kind::Torus { exps } = &self.kind else { unreachable!() };
        if exp == 0 {
            return self.unit();
        }
        if exp == exps[chain] {
            return self.delta();
        }
        let offset: u32 = exps[..chain].iter().map(|&e| e - 1).sum();
        1 + offset + (exp - 1)
    }

    /// Left-divisibility among simples.
    pub fn leq(&self, s: Simple, t: Simple) -> bool {
        match &self.kind {
            Kind::Abelian { .. } => s & t == s,
            Kind::Braid { perms, .. } => {
                let u = &perms[s as usize];
                let g = &perms[t as usize];
                let quotient = compose(&invert(u), g);
                inversions(u) + inversions(&quotient) == inversions(g)
            }
            Kind::Torus { .. } => {
                if s == self.unit() || t == self.delta() || s == t {
                    return true;
                }
                if s == self.delta() || t == self.unit() {
                    return false;
                }
                let (cs, es) = self.torus_point(s).expect("non-extremal");
                let (ct, et) = self.torus_point(t).expect("non-extremal");
                cs == ct && es <= et
            }
        }
    }

    /// Right-divisibility among simples: whether some `y` has `y · r = g`.
    pub fn right_divides(&self, r: Simple, g: Simple) -> bool {
        match &self.kind {
            Kind::Abelian { .. } => r & g == r,
            Kind::Braid { perms, .. } => {
                let r = &perms[r as usize];
                let g = &perms[g as usize];
                let y = compose(g, &invert(r));
                inversions(&y) + inversions(r) == inversions(g)
            }
            // torus chains are two-sided, so the two divisibilities agree
            Kind::Torus { .. } => self.leq(r, g),
        }
    }

    /// Left-gcd of two simples.
    pub fn meet(&self, s: Simple, t: Simple) -> Simple {
        match &self.kind {
            Kind::Abelian { .. } => s & t,
            Kind::Braid { perms, .. } => {
                let mut best: Option<Simple> = None;
                let mut best_inv = 0;
                for c in self.simples() {
                    if self.leq(c, s) && self.leq(c, t) {
                        let iv = inversions(&perms[c as usize]);
                        if best.is_none() || iv > best_inv {
                            best = Some(c);
                            best_inv = iv;
                        }
                    }
                }
                best.expect("unit is always a common divisor")
            }
            Kind::Torus { .. } => {
                if self.leq(s, t) {
                    return s;
                }
                if self.leq(t, s) {
                    return t;
                }
                // distinct chains meet at the unit
                self.unit()
            }
        }
    }

    /// Right-lcm of two simples (always a simple: divisors of the top
    /// element are closed under lcm).
    pub fn join(&self, s: Simple, t: Simple) -> Simple {
        match &self.kind {
            Kind::Abelian { .. } => s | t,
            Kind::Braid { perms, .. } => {
                let mut best: Option<Simple> = None;
                let mut best_inv = u32::MAX;
                for c in self.simples() {
                    if self.leq(s, c) && self.leq(t, c) {
                        let iv = inversions(&perms[c as usize]);
                        if best.is_none() || iv < best_inv {
                            best = Some(c);
                            best_inv = iv;
                        }
                    }
                }
                best.expect("the top element is always a common multiple")
            }
            Kind::Torus { .. } => {
                if self.leq(s, t) {
                    return t;
                }
                if self.leq(t, s) {
                    return s;
                }
                self.delta()
            }
        }
    }

    /// Product of two simples when the product is itself simple.
    pub fn product(&self, s: Simple, t: Simple) -> Option<Simple> {
        match &self.kind {
            Kind::Abelian { .. } => (s & t == 0).then(|| s | t),
            Kind::Braid { perms, index, .. } => {
                let u = &perms[s as usize];
                let v = &perms[t as usize];
                let w = compose(u, v);
                (inversions(&w) == inversions(u) + inversions(v)).then(|| index[&w])
            }
            Kind::Torus { exps } => {
                if s == self.unit() {
                    return Some(t);
                }
                if t == self.unit() {
                    return Some(s);
                }
                if s == self.delta() || t == self.delta() {
                    return None;
                }
                let (cs, es) = self.torus_point(s).expect("non-extremal");
                let (ct, et) = self.torus_point(t).expect("non-extremal");
                if cs != ct {
                    return None;
                }
                (es + et <= exps[cs]).then(|| self.torus_id(cs, es + et))
            }
        }
    }

    /// The unique `x` with `u · x = g`, defined when `u` left-divides `g`.
    pub fn left_quotient(&self, u: Simple, g: Simple) -> Option<Simple> {
        if !self.leq(u, g) {
            return None;
        }
        match &self.kind {
            Kind::Abelian { .. } => Some(g & !u),
            Kind::Braid { perms, index, .. } => {
                let x = compose(&invert(&perms[u as usize]), &perms[g as usize]);
                Some(index[&x])
            }
            Kind::Torus { .. } => {
                if u == self.unit() {
                    return Some(g);
                }
                if u == g {
                    return Some(self.unit());
                }
                let (cu, eu) = self.torus_point(u).expect("non-extremal");
                if g == self.delta() {
                    let Kind::Torus { exps } = &self.kind else { unreachable!() };
                    return Some(self.torus_id(cu, exps[cu] - eu));
                }
                let (cg, eg) = self.torus_point(g).expect("non-extremal");
                debug_assert_eq!(cu, cg);
                Some(self.torus_id(cg, eg - eu))
            }
        }
    }

    /// The complement: the unique simple with `s · complement(s) = Δ`.
    pub fn complement(&self, s: Simple) -> Simple {
        self.left_quotient(s, self.delta()).expect("every simple divides the top")
    }

    /// The square of the complement, an automorphism of the lattice.
    pub fn phi(&self, s: Simple) -> Simple {
        self.complement(self.complement(s))
    }

    pub fn phi_inv(&self, s: Simple) -> Simple {
        let table = self.phi_inverse.get_or_init(|| {
            let mut inv = vec![0 as Simple; self.size()];
            for x in self.simples() {
                inv[self.phi(x) as usize] = x;
            }
            inv
        });
        table[s as usize]
    }

    /// Normalise a pair: the head absorbs as much of the second entry as
    /// fits under the top element, via `s1 · (complement(s1) ∧ s2)`.
    pub fn head_pair(&self, s1: Simple, s2: Simple) -> (Simple, Simple) {
        let transfer = self.meet(self.complement(s1), s2);
        let head = self.product(s1, transfer).expect("transfer divides the complement");
        let rest = self.left_quotient(transfer, s2).expect("transfer divides s2");
        (head, rest)
    }

    /// The head of the element represented by a non-empty sequence of
    /// simples: folds pair heads right to left, so the first value returned
    /// is the maximal simple divisor of the whole product.
    pub fn head(&self, entries: &[Simple]) -> Result<Simple> {
        let Some((&last, rest)) = entries.split_last() else {
            return Err(Error::InvalidParameter("head of an empty word".into()));
        };
        let mut h = last;
        for &s in rest.iter().rev() {
            h = self.head_pair(s, h).0;
        }
        Ok(h)
    }

    /// The right complement `f \ g`: the unique simple with
    /// `f · (f \ g) = right-lcm(f, g)`.
    pub fn right_complement(&self, f: Simple, g: Simple) -> Simple {
        self.left_quotient(f, self.join(f, g)).expect("f divides the lcm")
    }

    /// The alphabet of simple names (unit letter is neutral).
    pub fn alphabet(self: &Arc<Self>) -> Arc<Alphabet> {
        self.alphabet
            .get_or_init(|| {
                Alphabet::with_aliases(
                    self.names.clone(),
                    Some("1"),
                    self.aliases.clone(),
                )
                .expect("lattice names are valid letter names")
            })
            .clone()
    }

    /// The quadratic normalisation driven by pair heads, with the unit as
    /// neutral letter and the lattice order as exact divisibility oracle.
    pub fn to_normaliser(self: &Arc<Self>) -> Normaliser {
        let alphabet = self.alphabet();
        let lattice = self.clone();
        let map = QuadraticMap::lazy(
            alphabet,
            Arc::new(move |s, t| lattice.head_pair(s, t)),
        );
        Normaliser::new(map)
            .expect("pair heads fix the unit letter")
            .with_declared_class(4, 3)
            .with_divisibility(Arc::new(LatticeOrder { lattice: self.clone() }))
    }

    /// The unique group normal form `Δ^m · s_1 | ... | s_p` of a signed word
    /// over simples, with `s_1 ≠ Δ` and `s_p ≠ 1`. Inverse letters are
    /// rewritten through `s⁻¹ = Δ⁻¹ · φ⁻¹(complement(s))` and the Δ⁻¹
    /// factors commute to the front through `t · Δ⁻¹ = Δ⁻¹ · φ(t)`.
    pub fn group_delta_normal_form(
        self: &Arc<Self>,
        signed: &[(Simple, bool)],
    ) -> Result<(i64, Word)> {
        let mut m: i64 = 0;
        let mut positive: Vec<Simple> = Vec::new();
        for &(s, is_positive) in signed {
            if s as usize >= self.size() {
                return Err(Error::LetterOutOfRange { index: s, size: self.size() });
            }
            if is_positive {
                positive.push(s);
            } else {
                m -= 1;
                for x in &mut positive {
                    *x = self.phi(*x);
                }
                positive.push(self.phi_inv(self.complement(s)));
            }
        }
        // Normalise the positive residue through pair heads.
        if positive.len() >= 2 {
            let schedule = crate::words::delta_schedule(positive.len())?;
            for &pos in schedule.positions() {
                let (u, v) = self.head_pair(positive[pos - 1], positive[pos]);
                positive[pos - 1] = u;
                positive[pos] = v;
            }
        }
        let delta = self.delta();
        let unit = self.unit();
        let start = positive.iter().take_while(|&&s| s == delta).count();
        m += start as i64;
        let tail: Vec<Simple> =
            positive[start..].iter().copied().filter(|&s| s != unit).collect();
        debug_assert!(tail.windows(2).all(|w| {
            let (u, v) = self.head_pair(w[0], w[1]);
            (u, v) == (w[0], w[1])
        }));
        Ok((m, Word::new(self.alphabet(), tail)?))
    }
}

struct LatticeOrder {
    lattice: Arc<GarsideLattice>,
}

impl LetterOrder for LatticeOrder {
    fn leq(&self, s: Letter, t: Letter) -> bool {
        self.lattice.leq(s, t)
    }
}
