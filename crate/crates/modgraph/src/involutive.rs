//! Finite involutive sets and colored finite sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Identifiers are plain strings; every collection keyed by them is sorted.
pub type Name = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("element `{0}` appears in more than one class")]
    DuplicateElement(Name),
    #[error("element `{0}` is missing from the pairing")]
    MissingElement(Name),
    #[error("element `{0}` is not in the element list")]
    UnknownElement(Name),
    #[error("class {0:?} has size other than 1 or 2")]
    BadClassSize(Vec<Name>),
}

/// A finite set with a self-inverse map. Fixed points are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct InvolutiveSet {
    dagger: BTreeMap<Name, Name>,
}

impl InvolutiveSet {
    /// Builds the set from `elements` and a pairing into 1- and 2-classes.
    pub fn new<S: AsRef<str>>(elements: &[S], pairing: &[Vec<S>]) -> Result<Self, InvolutionError> {
        let elems: BTreeSet<Name> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let mut dagger = BTreeMap::new();
        for class in pairing {
            let class: Vec<Name> = class.iter().map(|e| e.as_ref().to_string()).collect();
            for e in &class {
                if !elems.contains(e) {
                    return Err(InvolutionError::UnknownElement(e.clone()));
                }
                if dagger.contains_key(e) {
                    return Err(InvolutionError::DuplicateElement(e.clone()));
                }
            }
            match class.as_slice() {
                [a] => {
                    dagger.insert(a.clone(), a.clone());
                }
                [a, b] if a != b => {
                    dagger.insert(a.clone(), b.clone());
                    dagger.insert(b.clone(), a.clone());
                }
                [a, _] => return Err(InvolutionError::DuplicateElement(a.clone())),
                _ => return Err(InvolutionError::BadClassSize(class)),
            }
        }
        if let Some(missing) = elems.iter().find(|e| !dagger.contains_key(*e)) {
            return Err(InvolutionError::MissingElement(missing.clone()));
        }
        Ok(InvolutiveSet { dagger })
    }

    /// Builds the set from its classes alone.
    pub fn from_classes<S: AsRef<str>>(classes: &[Vec<S>]) -> Result<Self, InvolutionError> {
        let elements: Vec<&str> = classes.iter().flatten().map(|s| s.as_ref()).collect();
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(*e) {
                return Err(InvolutionError::DuplicateElement(e.to_string()));
            }
        }
        let pairing: Vec<Vec<&str>> =
            classes.iter().map(|c| c.iter().map(|s| s.as_ref()).collect()).collect();
        Self::new(&elements, &pairing)
    }

    /// Wraps an explicit map; the caller guarantees it is an involution.
    pub(crate) fn from_map_unchecked(dagger: BTreeMap<Name, Name>) -> Self {
        debug_assert!(dagger.iter().all(|(a, b)| dagger.get(b) == Some(a)));
        InvolutiveSet { dagger }
    }

    pub fn dagger(&self, x: &str) -> Option<&Name> {
        self.dagger.get(x)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.dagger.contains_key(x)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Name> {
        self.dagger.keys()
    }

    pub fn len(&self) -> usize {
        self.dagger.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dagger.is_empty()
    }

    pub fn map(&self) -> &BTreeMap<Name, Name> {
        &self.dagger
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.dagger.iter().all(|(a, b)| a != b)
    }

    /// Classes in sorted order; each class lists its least member first.
    pub fn classes(&self) -> Vec<Vec<Name>> {
        self.dagger
            .iter()
            .filter(|(a, b)| a <= b)
            .map(|(a, b)| if a == b { vec![a.clone()] } else { vec![a.clone(), b.clone()] })
            .collect()
    }

    /// Parses `colors: c c* ; d`.
    pub fn parse(line: &str) -> Result<Self, String> {
        let body = line
            .trim()
            .strip_prefix("colors:")
            .ok_or_else(|| "expected `colors:` header".to_string())?;
        let classes: Vec<Vec<&str>> = body
            .split(';')
            .map(|c| c.split_whitespace().collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        Self::from_classes(&classes).map_err(|e| e.to_string())
    }
}

impl fmt::Display for InvolutiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes().iter().map(|c| c.join(" ")).collect();
        write!(f, "colors: {}", parts.join(" ; "))
    }
}

/// An object of the groupoid of finite sets over a color set: a carrier with a total coloring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ColoredObject {
    pub coloring: BTreeMap<Name, Name>,
}

impl ColoredObject {
    pub fn new(coloring: BTreeMap<Name, Name>) -> Self {
        ColoredObject { coloring }
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Self {
        ColoredObject {
            coloring: pairs
                .iter()
                .map(|(s, c)| (s.as_ref().to_string(), c.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn carrier(&self) -> impl Iterator<Item = &Name> {
        self.coloring.keys()
    }

    pub fn color(&self, s: &str) -> Option<&Name> {
        self.coloring.get(s)
    }

    pub fn len(&self) -> usize {
        self.coloring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coloring.is_empty()
    }

    /// Sorted multiset of colors; two objects are isomorphic iff these agree.
    pub fn color_multiset(&self) -> Vec<Name> {
        let mut v: Vec<Name> = self.coloring.values().cloned().collect();
        v.sort();
        v
    }
}

impl fmt::Display for ColoredObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coloring.iter().map(|(s, c)| format!("{s}:{c}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// True iff `f` is a bijection `src -> dst` with `xi = xi' o f`.
pub fn is_bij_morphism(f: &BTreeMap<Name, Name>, src: &ColoredObject, dst: &ColoredObject) -> bool {
    if f.len() != src.len() || src.len() != dst.len() {
        return false;
    }
    let mut hit = BTreeSet::new();
    for (s, c) in &src.coloring {
        let Some(t) = f.get(s) else { return false };
        match dst.coloring.get(t) {
            Some(c2) if c2 == c => {}
            _ => return false,
        }
        if !hit.insert(t) {
            return false;
        }
    }
    true
}

/// Names for the formal daggers of `s`: a suffix of stars long enough to avoid `s` itself.
pub fn dagger_names<'a, I: IntoIterator<Item = &'a Name>>(s: I) -> BTreeMap<Name, Name> {
    let set: BTreeSet<&Name> = s.into_iter().collect();
    let mut suffix = String::from("*");
    while set.iter().any(|x| set.contains(&format!("{x}{suffix}"))) {
        suffix.push('*');
    }
    set.iter().map(|x| ((*x).clone(), format!("{x}{suffix}"))).collect()
}

/// The unique involutive extension of `xi` to `2S`, using the names of [`dagger_names`].
pub fn involutive_extension(
    xi: &ColoredObject,
    colors: &InvolutiveSet,
) -> Result<BTreeMap<Name, Name>, InvolutionError> {
    let daggers = dagger_names(xi.carrier());
    let mut out = BTreeMap::new();
    for (s, c) in &xi.coloring {
        let cd = colors
            .dagger(c)
            .ok_or_else(|| InvolutionError::UnknownElement(c.clone()))?;
        out.insert(s.clone(), c.clone());
        out.insert(daggers[s].clone(), cd.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn set(classes: &[&[&str]]) -> InvolutiveSet {
        let v: Vec<Vec<&str>> = classes.iter().map(|c| c.to_vec()).collect();
        InvolutiveSet::from_classes(&v).unwrap()
    }

    #[test]
    fn pairs_and_fixed_points() {
        let s = set(&[&["a", "a*"], &["b"]]);
        assert_eq!(s.dagger("a").unwrap(), "a*");
        assert_eq!(s.dagger("a*").unwrap(), "a");
        assert_eq!(s.dagger("b").unwrap(), "b");
        assert!(!s.is_fixed_point_free());
        for x in s.elements() {
            assert_eq!(s.dagger(s.dagger(x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn pairing_errors() {
        let e = InvolutiveSet::new(&["a", "b"], &[vec!["a"]]).unwrap_err();
        assert_eq!(e, InvolutionError::MissingElement("b".into()));
        let e = InvolutiveSet::new(&["a", "b"], &[vec!["a", "b"], vec!["a"]]).unwrap_err();
        assert_eq!(e, InvolutionError::DuplicateElement("a".into()));
    }

    #[test]
    fn parse_round_trip() {
        let s = InvolutiveSet::parse("colors: c c* ; d").unwrap();
        assert_eq!(s.to_string(), "colors: c c* ; d");
        assert_eq!(s.dagger("d").unwrap(), "d");
    }

    #[test]
    fn bij_morphisms_match_brute_force() {
        let src = ColoredObject::from_pairs(&[("x", "c"), ("y", "c"), ("z", "d")]);
        let dst = ColoredObject::from_pairs(&[("p", "c"), ("q", "d"), ("r", "c")]);
        let targets: Vec<&Name> = dst.carrier().collect();
        let sources: Vec<&Name> = src.carrier().collect();
        let mut count = 0;
        for perm in targets.iter().permutations(3) {
            let f: BTreeMap<Name, Name> =
                sources.iter().zip(perm.iter()).map(|(a, b)| ((*a).clone(), (**b).clone())).collect();
            let ok = sources.iter().all(|s| src.color(s) == dst.color(&f[*s]));
            assert_eq!(ok, is_bij_morphism(&f, &src, &dst));
            count += ok as usize;
        }
        assert_eq!(count, 2);
        let swap: BTreeMap<Name, Name> =
            [("x", "q"), ("y", "p"), ("z", "r")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert!(!is_bij_morphism(&swap, &src, &dst));
    }

    #[test]
    fn extension_is_the_unique_involutive_one() {
        let colors = set(&[&["c", "c*"], &["d"]]);
        for xi in [
            ColoredObject::from_pairs(&[("1", "c")]),
            ColoredObject::from_pairs(&[("1", "c"), ("2", "d")]),
            ColoredObject::from_pairs(&[("1", "c*"), ("2", "c"), ("3", "d")]),
        ] {
            let ext = involutive_extension(&xi, &colors).unwrap();
            let daggers = dagger_names(xi.carrier());
            let arcs: Vec<Name> = xi.carrier().cloned().chain(daggers.values().cloned()).collect();
            let cols: Vec<&Name> = colors.elements().collect();
            let mut solutions = 0;
            for choice in (0..arcs.len()).map(|_| cols.iter()).multi_cartesian_product() {
                let g: BTreeMap<&Name, &Name> = arcs.iter().zip(choice.iter().map(|c| **c)).collect();
                let restricts = xi.coloring.iter().all(|(s, c)| g[s] == c);
                let involutive = daggers
                    .iter()
                    .all(|(s, sd)| colors.dagger(g[s]).unwrap() == g[sd]);
                if restricts && involutive {
                    solutions += 1;
                    assert!(arcs.iter().all(|a| &ext[a] == g[a]));
                }
            }
            assert_eq!(solutions, 1);
        }
    }
}
