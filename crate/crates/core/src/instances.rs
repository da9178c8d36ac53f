//! Built-in instances, loadable by name: `abelian:n`, `braid:n`,
//! `torus:e1,e2,...`, `lex:n`, `plactic:k`, `atilde2`, `ex317:n`, and
//! `prop436`. Expensive builds are cached per process.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::family::{
    closure_smallest_garside, family_to_normaliser, FamilyCandidate, PresentedMonoid,
    DEFAULT_CLOSURE_BOUND,
};
use crate::lattice::GarsideLattice;
use crate::normalise::{LetterOrder, Normaliser, QuadraticMap};
use crate::plactic::plactic_normaliser;
use crate::words::Alphabet;

/// A named instance: the normaliser plus whatever richer structure backs it.
#[derive(Clone)]
pub struct Instance {
    pub name: String,
    pub normaliser: Arc<Normaliser>,
    pub lattice: Option<Arc<GarsideLattice>>,
    pub monoid: Option<Arc<PresentedMonoid>>,
    pub family: Option<Arc<FamilyCandidate>>,
}

/// The instance names exercised by the verification suites.
pub fn shipped_names() -> Vec<&'static str> {
    vec![
        "abelian:3",
        "braid:3",
        "braid:4",
        "torus:2,3",
        "lex:3",
        "plactic:3",
        "atilde2",
        "ex317:2",
        "prop436",
    ]
}

/// Letters being single atoms keeps divisibility between two letters a
/// matter of equality: the defining relations preserve length, so a
/// non-trivial quotient would need length zero.
struct GradedEquality;

impl LetterOrder for GradedEquality {
    fn leq(&self, s: u32, t: u32) -> bool {
        s == t
    }
}

/// The lexicographic sorting normalisation on `n` letters.
pub fn lex(n: usize) -> Result<Normaliser> {
    if n == 0 || n > 26 {
        return Err(Error::InvalidParameter(format!(
            "lex alphabet size must be between 1 and 26, got {n}"
        )));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let alphabet = Alphabet::new(names, None)?;
    let map = QuadraticMap::dense(alphabet, |s, t| if s > t { (t, s) } else { (s, t) })?;
    Ok(Normaliser::new(map)?
        .with_declared_class(3, 3)
        .with_divisibility(Arc::new(GradedEquality)))
}

/// The eight-letter system whose five rewriting rules are normalising and
/// confluent but admit a cycle. Letters: a, b, b', b'', c, c', c'', d.
pub fn cycle_system() -> Result<Normaliser> {
    let names = vec!["a", "b", "b'", "b''", "c", "c'", "c''", "d"];
    let aliases = vec![
        ("b′".to_string(), "b'".to_string()),
        ("b″".to_string(), "b''".to_string()),
        ("c′".to_string(), "c'".to_string()),
        ("c″".to_string(), "c''".to_string()),
    ];
    let alphabet = Alphabet::with_aliases(names, None, aliases)?;
    let r = |n: &str| alphabet.resolve(n).expect("builtin letter");
    let rules: HashMap<(u32, u32), (u32, u32)> = [
        ((r("a"), r("b")), (r("a"), r("b'"))),
        ((r("b'"), r("c'")), (r("b"), r("c"))),
        ((r("b"), r("c'")), (r("b''"), r("c''"))),
        ((r("b'"), r("c")), (r("b''"), r("c''"))),
        ((r("c"), r("d")), (r("c'"), r("d"))),
    ]
    .into_iter()
    .collect();
    let map = QuadraticMap::dense(alphabet, move |s, t| {
        rules.get(&(s, t)).copied().unwrap_or((s, t))
    })?;
    Ok(Normaliser::new(map)?.with_divisibility(Arc::new(GradedEquality)))
}

/// The rank-3 affine braid presentation: three atoms, each pair braided.
pub fn atilde2_presentation() -> Result<Arc<PresentedMonoid>> {
    let s = |i: usize| format!("σ{i}");
    let braid = |i: usize, j: usize| {
        (vec![s(i), s(j), s(i)], vec![s(j), s(i), s(j)])
    };
    PresentedMonoid::new(
        vec![s(1), s(2), s(3)],
        vec![braid(1, 2), braid(2, 3), braid(3, 1)],
    )
}

/// The two-atom presentation `a·b^n = b^{n+1}`.
pub fn power_shift_presentation(n: usize) -> Result<Arc<PresentedMonoid>> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidParameter(format!(
            "power-shift exponent must be between 1 and 4, got {n}"
        )));
    }
    let lhs: Vec<String> =
        std::iter::once("a".to_string()).chain((0..n).map(|_| "b".to_string())).collect();
    let rhs: Vec<String> = (0..=n).map(|_| "b".to_string()).collect();
    PresentedMonoid::new(vec!["a".into(), "b".into()], vec![(lhs, rhs)])
}

/// The classical braid presentation on `n` strands, as a presented monoid.
pub fn braid_presentation(n: usize) -> Result<Arc<PresentedMonoid>> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "braid presentations are built for 2 to 4 strands, got {n}"
        )));
    }
    let s = |i: usize| format!("σ{i}");
    let mut relations = Vec::new();
    for i in 1..n {
        for j in i + 1..n {
            if j == i + 1 {
                relations.push((vec![s(i), s(j), s(i)], vec![s(j), s(i), s(j)]));
            } else {
                relations.push((vec![s(i), s(j)], vec![s(j), s(i)]));
            }
        }
    }
    PresentedMonoid::new((1..n).map(s).collect(), relations)
}

/// The free abelian presentation on `n` atoms.
pub fn abelian_presentation(n: usize) -> Result<Arc<PresentedMonoid>> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidParameter(format!(
            "abelian presentations are built for 1 to 4 atoms, got {n}"
        )));
    }
    let names: Vec<String> = ('a'..).take(n).map(|c| c.to_string()).collect();
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            relations.push((
                vec![names[i].clone(), names[j].clone()],
                vec![names[j].clone(), names[i].clone()],
            ));
        }
    }
    PresentedMonoid::new(names, relations)
}

fn family_instance(name: &str, mp: Arc<PresentedMonoid>) -> Result<Instance> {
    let closure = closure_smallest_garside(&mp, DEFAULT_CLOSURE_BOUND);
    if !closure.reached_fixpoint {
        return Err(Error::NotAGarsideFamily(format!(
            "closure for `{name}` did not reach a fixpoint within grade {DEFAULT_CLOSURE_BOUND}"
        )));
    }
    let normaliser = family_to_normaliser(&mp, &closure.family)?;
    Ok(Instance {
        name: name.to_string(),
        normaliser: Arc::new(normaliser),
        lattice: None,
        monoid: Some(mp),
        family: Some(Arc::new(closure.family)),
    })
}

fn build(name: &str) -> Result<Instance> {
    let (kind, params) = match name.split_once(':') {
        Some((k, p)) => (k, Some(p)),
        None => (name, None),
    };
    let usize_param = |what: &str| -> Result<usize> {
        params
            .ok_or_else(|| Error::InvalidParameter(format!("`{kind}` needs `:{what}`")))?
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad `{what}` in `{name}`")))
    };
    match kind {
        "abelian" => {
            let lattice = GarsideLattice::abelian(usize_param("n")? as u32)?;
            Ok(Instance {
                name: name.into(),
                normaliser: Arc::new(lattice.to_normaliser()),
                lattice: Some(lattice),
                monoid: None,
                family: None,
            })
        }
        "braid" => {
            let lattice = GarsideLattice::braid(usize_param("n")?)?;
            Ok(Instance {
                name: name.into(),
                normaliser: Arc::new(lattice.to_normaliser()),
                lattice: Some(lattice),
                monoid: None,
                family: None,
            })
        }
        "torus" => {
            let exps = params
                .ok_or_else(|| Error::InvalidParameter("`torus` needs `:e1,e2,...`".into()))?
                .split(',')
                .map(|p| {
                    p.parse::<u32>()
                        .map_err(|_| Error::InvalidParameter(format!("bad exponent `{p}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let lattice = GarsideLattice::torus(&exps)?;
            Ok(Instance {
                name: name.into(),
                normaliser: Arc::new(lattice.to_normaliser()),
                lattice: Some(lattice),
                monoid: None,
                family: None,
            })
        }
        "lex" => Ok(Instance {
            name: name.into(),
            normaliser: Arc::new(lex(usize_param("n")?)?),
            lattice: None,
            monoid: None,
            family: None,
        }),
        "plactic" => Ok(Instance {
            name: name.into(),
            normaliser: Arc::new(plactic_normaliser(usize_param("k")? as u8)?),
            lattice: None,
            monoid: None,
            family: None,
        }),
        "atilde2" => family_instance(name, atilde2_presentation()?),
        "ex317" => family_instance(name, power_shift_presentation(usize_param("n")?)?),
        "prop436" => Ok(Instance {
            name: name.into(),
            normaliser: Arc::new(cycle_system()?),
            lattice: None,
            monoid: None,
            family: None,
        }),
        other => Err(Error::InvalidParameter(format!("unknown instance `{other}`"))),
    }
}

/// Load a built-in instance by name, with per-process caching.
pub fn builtin(name: &str) -> Result<Instance> {
    static CACHE: OnceLock<Mutex<HashMap<String, Instance>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(name) {
        return Ok(hit.clone());
    }
    let instance = build(name)?;
    cache.lock().unwrap().insert(name.to_string(), instance.clone());
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    #[test]
    fn all_shipped_names_load() {
        for name in shipped_names() {
            let instance = builtin(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(instance.name, name);
            assert!(instance.normaliser.alphabet().len() >= 1);
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(builtin("nope").is_err());
        assert!(builtin("braid:99").is_err());
        assert!(builtin("torus:1").is_err());
        assert!(builtin("lex").is_err());
    }

    #[test]
    fn atilde2_has_sixteen_letters() {
        let instance = builtin("atilde2").unwrap();
        assert_eq!(instance.normaliser.alphabet().len(), 16);
        assert_eq!(instance.family.as_ref().unwrap().size_with_unit(), 16);
    }

    #[test]
    fn ex317_letters() {
        let instance = builtin("ex317:2").unwrap();
        let names = instance.normaliser.alphabet().names().to_vec();
        // canonical representatives are lexicographically least, so the
        // top element b^3 = a·b^2 renders as "abb"
        assert_eq!(names, vec!["1", "a", "b", "bb", "abb"]);
        let mp = instance.monoid.as_ref().unwrap();
        assert!(mp.equal(
            &mp.parse_atom_word("abb").unwrap(),
            &mp.parse_atom_word("bbb").unwrap()
        ));
    }

    #[test]
    fn cycle_system_leftmost_normal_form() {
        let instance = builtin("prop436").unwrap();
        let nz = &instance.normaliser;
        let a = nz.alphabet().clone();
        let w = Word::parse(&a, "a|b|c|d").unwrap();
        let normal = nz.normalize_oracle(&w).unwrap();
        assert_eq!(normal.to_string(), "a|b''|c''|d");
        // unicode primes resolve as aliases
        let via_alias = Word::parse(&a, "a|b″|c″|d").unwrap();
        assert_eq!(normal, via_alias);
    }

    #[test]
    fn cycle_system_fails_the_alternation_law() {
        let instance = builtin("prop436").unwrap();
        let map = QuadraticMap::dense(instance.normaliser.alphabet().clone(), {
            let nz = instance.normaliser.clone();
            move |s, t| nz.pair(s, t)
        })
        .unwrap();
        assert!(matches!(
            crate::normalise::from_quadratic_map(map),
            Err(Error::AlternationLaw { .. })
        ));
    }
}
