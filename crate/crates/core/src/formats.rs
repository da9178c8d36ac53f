//! File formats: instance JSON (letters, neutral, non-identity pairs),
//! presentation JSON, rewriting-rule JSON, and family member lists.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilyCandidate, PresentedMonoid};
use crate::normalise::{from_quadratic_map, Normaliser, QuadraticMap};
use crate::rewrite::{RewriteSystem, Rhs};
use crate::words::{Alphabet, Letter, Word};

/// `{ "letters": [...], "neutral": "1" | null, "pairs": { "s|t": "u|v" } }`
/// listing only the non-identity table entries; absent pairs are fixed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceJson {
    pub letters: Vec<String>,
    pub neutral: Option<String>,
    pub pairs: BTreeMap<String, String>,
}

impl InstanceJson {
    pub fn from_normaliser(nz: &Normaliser) -> Self {
        let alphabet = nz.alphabet();
        let mut pairs = BTreeMap::new();
        for s in alphabet.letters() {
            for t in alphabet.letters() {
                let (u, v) = nz.pair(s, t);
                if (u, v) != (s, t) {
                    pairs.insert(
                        format!("{}|{}", alphabet.name(s), alphabet.name(t)),
                        format!("{}|{}", alphabet.name(u), alphabet.name(v)),
                    );
                }
            }
        }
        InstanceJson {
            letters: alphabet.names().to_vec(),
            neutral: alphabet.neutral().map(|e| alphabet.name(e).to_string()),
            pairs,
        }
    }

    /// Rebuild the normaliser; the table is validated (idempotence, the
    /// alternation law, short-word axioms).
    pub fn into_normaliser(self) -> Result<Normaliser> {
        let alphabet = Alphabet::new(self.letters, self.neutral.as_deref())?;
        let parse_pair = |text: &str| -> Result<(Letter, Letter)> {
            let w = Word::parse(&alphabet, text)?;
            match w.entries() {
                &[a, b] => Ok((a, b)),
                _ => Err(Error::InvalidInstance(format!("`{text}` is not a length-2 word"))),
            }
        };
        let mut table: BTreeMap<(Letter, Letter), (Letter, Letter)> = BTreeMap::new();
        for (lhs, rhs) in &self.pairs {
            table.insert(parse_pair(lhs)?, parse_pair(rhs)?);
        }
        let map = QuadraticMap::dense_unchecked(alphabet, move |s, t| {
            table.get(&(s, t)).copied().unwrap_or((s, t))
        });
        from_quadratic_map(map)
    }
}

/// `{ "atoms": [...], "relations": [["σ1σ2σ1", "σ2σ1σ2"], ...] }` with
/// relation sides written as concatenated atom names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationJson {
    pub atoms: Vec<String>,
    pub relations: Vec<[String; 2]>,
}

impl PresentationJson {
    pub fn into_monoid(self) -> Result<Arc<PresentedMonoid>> {
        // Tokenise against a throwaway relation-free monoid first.
        let tokeniser = PresentedMonoid::new(self.atoms.clone(), Vec::new())?;
        let mut relations = Vec::new();
        for [lhs, rhs] in &self.relations {
            let decode = |text: &str| -> Result<Vec<String>> {
                Ok(tokeniser
                    .parse_atom_word(text)?
                    .into_iter()
                    .map(|a| self.atoms[a as usize].clone())
                    .collect())
            };
            relations.push((decode(lhs)?, decode(rhs)?));
        }
        PresentedMonoid::new(self.atoms, relations)
    }

    pub fn from_monoid(mp: &PresentedMonoid) -> Self {
        // Only used for builtin export; relations render canonically.
        PresentationJson { atoms: mp.atoms().to_vec(), relations: Vec::new() }
    }
}

/// `{ "letters": [...], "rules": { "s|t": "u|v" | "u" } }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RulesJson {
    #[serde(default)]
    pub letters: Vec<String>,
    pub rules: BTreeMap<String, String>,
}

impl RulesJson {
    pub fn from_system(rs: &RewriteSystem) -> Self {
        let alphabet = rs.alphabet();
        let mut rules = BTreeMap::new();
        for (&(s, t), &rhs) in rs.rules() {
            let value = match rhs {
                Rhs::Pair(u, v) => format!("{}|{}", alphabet.name(u), alphabet.name(v)),
                Rhs::Single(u) => alphabet.name(u).to_string(),
            };
            rules.insert(format!("{}|{}", alphabet.name(s), alphabet.name(t)), value);
        }
        RulesJson { letters: alphabet.names().to_vec(), rules }
    }

    pub fn into_system(self) -> Result<RewriteSystem> {
        let letters = if self.letters.is_empty() {
            // infer the alphabet from the rules, in first-appearance order
            let mut seen = Vec::new();
            for (lhs, rhs) in &self.rules {
                for name in lhs.split('|').chain(rhs.split('|')) {
                    if !name.is_empty() && !seen.iter().any(|s| s == name) {
                        seen.push(name.to_string());
                    }
                }
            }
            seen
        } else {
            self.letters
        };
        let alphabet = Alphabet::new(letters, None)?;
        let mut rules = BTreeMap::new();
        for (lhs, rhs) in &self.rules {
            let l = Word::parse(&alphabet, lhs)?;
            let &[s, t] = l.entries() else {
                return Err(Error::InvalidRewriteSystem(format!(
                    "left side `{lhs}` must have length 2"
                )));
            };
            let r = Word::parse(&alphabet, rhs)?;
            let image = match r.entries() {
                &[u, v] => Rhs::Pair(u, v),
                &[u] => Rhs::Single(u),
                _ => {
                    return Err(Error::InvalidRewriteSystem(format!(
                        "right side `{rhs}` must have length 1 or 2"
                    )))
                }
            };
            rules.insert((s, t), image);
        }
        RewriteSystem::new(alphabet, rules)
    }
}

/// `{ "members": ["σ1σ2σ1", ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyJson {
    pub members: Vec<String>,
}

impl FamilyJson {
    pub fn from_family(mp: &PresentedMonoid, family: &FamilyCandidate) -> Self {
        FamilyJson {
            members: family.members.iter().map(|e| mp.render_atom_word(&e.0)).collect(),
        }
    }

    pub fn into_family(self, mp: &PresentedMonoid) -> Result<FamilyCandidate> {
        crate::family::family_from_names(mp, &self.members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::builtin;
    use crate::rewrite::system_of;

    #[test]
    fn instance_json_round_trip() {
        let nz = builtin("braid:3").unwrap().normaliser;
        let json = InstanceJson::from_normaliser(&nz);
        assert_eq!(json.letters.len(), 6);
        assert_eq!(json.neutral.as_deref(), Some("1"));
        let text = serde_json::to_string(&json).unwrap();
        let back: InstanceJson = serde_json::from_str(&text).unwrap();
        let rebuilt = back.into_normaliser().unwrap();
        for s in nz.alphabet().letters() {
            for t in nz.alphabet().letters() {
                assert_eq!(nz.pair(s, t), rebuilt.pair(s, t));
            }
        }
    }

    #[test]
    fn bad_instance_json_is_rejected() {
        let json = InstanceJson {
            letters: vec!["a".into(), "b".into()],
            neutral: None,
            // swap table: not idempotent
            pairs: [("a|b".to_string(), "b|a".to_string()), ("b|a".to_string(), "a|b".to_string())]
                .into_iter()
                .collect(),
        };
        assert!(json.into_normaliser().is_err());
    }

    #[test]
    fn presentation_json_parses() {
        let json: PresentationJson = serde_json::from_str(
            r#"{ "atoms": ["σ1","σ2"], "relations": [["σ1σ2σ1","σ2σ1σ2"]] }"#,
        )
        .unwrap();
        let mp = json.into_monoid().unwrap();
        let a = mp.parse_atom_word("σ1σ2σ1").unwrap();
        let b = mp.parse_atom_word("σ2σ1σ2").unwrap();
        assert!(mp.equal(&a, &b));
    }

    #[test]
    fn rules_json_round_trip() {
        let rs = system_of(&builtin("lex:3").unwrap().normaliser);
        let json = RulesJson::from_system(&rs);
        assert_eq!(json.rules.len(), 3);
        let back = json.into_system().unwrap();
        assert_eq!(back.rule_count(), 3);
        assert_eq!(back.alphabet().names(), rs.alphabet().names());
    }
}
