//! Étale maps, embeddings, and embedding classes recorded by their image data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, EDGE_MAJOR, EDGE_MINOR};
use crate::involutive::{dagger_names, Name};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaleError {
    #[error("map is not total or lands outside the target at `{0}`")]
    NotTotal(Name),
    #[error("arc map does not commute with the involution at `{0}`")]
    NotInvolutive(Name),
    #[error("incidence square is not a pullback at {0}")]
    PullbackFails(String),
    #[error("arc `{0}` outside boundary and darts maps onto a boundary arc or dart")]
    InteriorLeak(Name),
    #[error("not an embedding: {0}")]
    NotEmbedding(String),
}

/// A validated étale map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleMap {
    pub source: Graph,
    pub target: Graph,
    pub arcs: BTreeMap<Name, Name>,
    pub vertices: BTreeMap<Name, Name>,
}

/// Validates the étale conditions for the given arc and vertex maps.
pub fn check_etale(
    source: &Graph,
    target: &Graph,
    arcs: &BTreeMap<Name, Name>,
    vertices: &BTreeMap<Name, Name>,
) -> Result<EtaleMap, EtaleError> {
    for a in source.arcs() {
        match arcs.get(a) {
            Some(b) if target.has_arc(b) => {}
            _ => return Err(EtaleError::NotTotal(a.clone())),
        }
    }
    for v in source.vertices() {
        match vertices.get(v) {
            Some(u) if target.vertices().contains(u) => {}
            _ => return Err(EtaleError::NotTotal(v.clone())),
        }
    }
    for a in source.arcs() {
        if arcs[source.inv(a)] != *target.inv(&arcs[a]) {
            return Err(EtaleError::NotInvolutive(a.clone()));
        }
    }
    for v in source.vertices() {
        let u = &vertices[v];
        let image: Vec<&Name> = source.nbhd(v).iter().map(|d| &arcs[d]).collect();
        let distinct: BTreeSet<&Name> = image.iter().copied().collect();
        let expected = target.nbhd(u);
        if distinct.len() != image.len() || distinct.into_iter().cloned().collect::<BTreeSet<_>>() != expected {
            return Err(EtaleError::PullbackFails(format!("vertex `{v}`")));
        }
    }
    for a in source.arcs() {
        if !source.is_dart(a) && !source.is_boundary(a) {
            let b = &arcs[a];
            if target.is_dart(b) || target.is_boundary(b) {
                return Err(EtaleError::InteriorLeak(a.clone()));
            }
        }
    }
    Ok(EtaleMap { source: source.clone(), target: target.clone(), arcs: arcs.clone(), vertices: vertices.clone() })
}

impl EtaleMap {
    /// Connected source and injective vertex map.
    pub fn is_embedding(&self) -> bool {
        let imgs: BTreeSet<&Name> = self.vertices.values().collect();
        self.source.is_connected() && imgs.len() == self.vertices.len()
    }

    /// `self` after `first`; étale maps compose.
    pub fn after(&self, first: &EtaleMap) -> EtaleMap {
        EtaleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            arcs: first.arcs.iter().map(|(a, b)| (a.clone(), self.arcs[b].clone())).collect(),
            vertices: first.vertices.iter().map(|(a, b)| (a.clone(), self.vertices[b].clone())).collect(),
        }
    }
}

/// An isomorphism class of embeddings into a fixed codomain, stored by its image:
/// vertex set `W`, arc set `B`, and boundary image `bd`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmbeddingClass {
    pub w: BTreeSet<Name>,
    pub b: BTreeSet<Name>,
    pub bd: BTreeSet<Name>,
}

impl EmbeddingClass {
    /// Class of the identity.
    pub fn identity(g: &Graph) -> EmbeddingClass {
        EmbeddingClass { w: g.vertices().clone(), b: g.arc_set(), bd: g.boundary().clone() }
    }

    /// Class of the canonical embedding of the star of `v`.
    pub fn of_vertex(g: &Graph, v: &str) -> EmbeddingClass {
        let nb = g.nbhd(v);
        let out: BTreeSet<Name> = nb.iter().map(|d| g.inv(d).clone()).collect();
        EmbeddingClass { w: [v.to_string()].into(), b: nb.union(&out).cloned().collect(), bd: out }
    }

    /// Class of the edge spanned by `a`.
    pub fn of_edge(g: &Graph, a: &str) -> EmbeddingClass {
        let s: BTreeSet<Name> = [a.to_string(), g.inv(a).clone()].into();
        EmbeddingClass { w: BTreeSet::new(), b: s.clone(), bd: s }
    }

    /// The vertex sum, as a subset of the target vertices.
    pub fn vertex_sum(&self) -> &BTreeSet<Name> {
        &self.w
    }

    pub fn boundary_of(&self) -> &BTreeSet<Name> {
        &self.bd
    }

    /// Represented by an embedding of the exceptional edge.
    pub fn is_edge(&self) -> bool {
        self.w.is_empty() && !self.bd.is_empty()
    }

    /// Represented by an embedding of a nodeless loop.
    pub fn is_loop(&self) -> bool {
        self.w.is_empty() && self.bd.is_empty()
    }

    /// Parses `W={...} B={...} bd={...}`.
    pub fn parse(s: &str) -> Result<EmbeddingClass, String> {
        let mut parts: BTreeMap<&str, BTreeSet<Name>> = BTreeMap::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let eq = rest.find("={").ok_or_else(|| format!("expected `key={{...}}` in `{rest}`"))?;
            let key = rest[..eq].trim();
            let close = rest.find('}').ok_or_else(|| "unterminated set".to_string())?;
            let body = &rest[eq + 2..close];
            let items: BTreeSet<Name> =
                body.split(',').map(|x| x.trim()).filter(|x| !x.is_empty()).map(|x| x.to_string()).collect();
            parts.insert(key, items);
            rest = rest[close + 1..].trim_start();
        }
        let get = |k: &str| parts.get(k).cloned().ok_or_else(|| format!("missing `{k}=`"));
        Ok(EmbeddingClass { w: get("W")?, b: get("B")?, bd: get("bd")? })
    }
}

fn fmt_set(s: &BTreeSet<Name>) -> String {
    s.iter().cloned().collect::<Vec<_>>().join(",")
}

impl fmt::Display for EmbeddingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W={{{}}} B={{{}}} bd={{{}}}", fmt_set(&self.w), fmt_set(&self.b), fmt_set(&self.bd))
    }
}

/// The image record of an embedding.
pub fn embedding_class(f: &EtaleMap) -> Result<EmbeddingClass, EtaleError> {
    if !f.source.is_connected() {
        return Err(EtaleError::NotEmbedding("source is not connected".into()));
    }
    if !f.is_embedding() {
        return Err(EtaleError::NotEmbedding("vertex map is not injective".into()));
    }
    Ok(EmbeddingClass {
        w: f.vertices.values().cloned().collect(),
        b: f.arcs.values().cloned().collect(),
        bd: f.source.boundary().iter().map(|a| f.arcs[a].clone()).collect(),
    })
}

/// All embedding classes into `g`, sorted.
///
/// Vertex classes are indexed by a vertex set `W` and the internal edges among `W` kept uncut;
/// the kept edges must connect `W`.
pub fn enumerate_embeddings(g: &Graph) -> Vec<EmbeddingClass> {
    let mut out: BTreeSet<EmbeddingClass> = BTreeSet::new();
    for (a, b) in g.arc_classes() {
        if g.is_dart(&a) || g.is_dart(&b) || g.is_boundary(&a) {
            out.insert(EmbeddingClass::of_edge(g, &a));
        } else {
            // A nodeless-loop component admits both an edge and the loop itself.
            out.insert(EmbeddingClass::of_edge(g, &a));
            let s: BTreeSet<Name> = [a.clone(), b.clone()].into();
            out.insert(EmbeddingClass { w: BTreeSet::new(), b: s, bd: BTreeSet::new() });
        }
    }
    let verts: Vec<Name> = g.vertices().iter().cloned().collect();
    let n = verts.len();
    for mask in 1u64..(1u64 << n) {
        let w: BTreeSet<Name> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| verts[i].clone()).collect();
        let edges: Vec<(Name, Name)> = g
            .internal_edges()
            .into_iter()
            .filter(|(x, y)| w.contains(g.target(x).unwrap()) && w.contains(g.target(y).unwrap()))
            .collect();
        for emask in 0u64..(1u64 << edges.len()) {
            let kept: Vec<&(Name, Name)> =
                (0..edges.len()).filter(|i| emask >> i & 1 == 1).map(|i| &edges[i]).collect();
            if !connects(g, &w, &kept) {
                continue;
            }
            let darts: BTreeSet<Name> =
                g.incidence().iter().filter(|(_, v)| w.contains(*v)).map(|(d, _)| d.clone()).collect();
            let kept_arcs: BTreeSet<&Name> = kept.iter().flat_map(|(x, y)| [x, y]).collect();
            let bd: BTreeSet<Name> =
                darts.iter().filter(|d| !kept_arcs.contains(d)).map(|d| g.inv(d).clone()).collect();
            let b: BTreeSet<Name> = darts.iter().flat_map(|d| [d.clone(), g.inv(d).clone()]).collect();
            out.insert(EmbeddingClass { w: w.clone(), b, bd });
        }
    }
    out.into_iter().collect()
}

fn connects(g: &Graph, w: &BTreeSet<Name>, kept: &[&(Name, Name)]) -> bool {
    let Some(start) = w.iter().next() else { return false };
    let mut seen: BTreeSet<&Name> = [start].into();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for (x, y) in kept {
            let (tx, ty) = (g.target(x).unwrap(), g.target(y).unwrap());
            for (p, q) in [(tx, ty), (ty, tx)] {
                if p == v && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
    }
    seen.len() == w.len()
}

/// Rebuilds a representative embedding `K -> g` from an image record.
/// Vertex and dart names of `K` agree with `g`; cut darts get fresh boundary partners.
pub fn representative(g: &Graph, c: &EmbeddingClass) -> Result<EtaleMap, EtaleError> {
    if c.w.is_empty() {
        let a = c.b.iter().next().ok_or_else(|| EtaleError::NotEmbedding("empty image".into()))?.clone();
        let ia = g.inv(&a).clone();
        let k = if c.bd.is_empty() { crate::graph::nodeless_loop() } else { crate::graph::edge() };
        let arcs = [(EDGE_MAJOR.to_string(), a), (EDGE_MINOR.to_string(), ia)].into();
        return check_etale(&k, g, &arcs, &BTreeMap::new());
    }
    let darts: BTreeSet<Name> =
        g.incidence().iter().filter(|(_, v)| c.w.contains(*v)).map(|(d, _)| d.clone()).collect();
    let mut names: BTreeSet<Name> = g.arc_set();
    names.extend(darts.iter().cloned());
    let fresh = dagger_names(names.iter());
    let mut inv = BTreeMap::new();
    let mut arcs = BTreeMap::new();
    let mut boundary = BTreeSet::new();
    for d in &darts {
        arcs.insert(d.clone(), d.clone());
        let p = g.inv(d);
        if c.bd.contains(p) {
            let nd = fresh[d].clone();
            inv.insert(d.clone(), nd.clone());
            inv.insert(nd.clone(), d.clone());
            arcs.insert(nd.clone(), p.clone());
            boundary.insert(nd);
        } else {
            inv.insert(d.clone(), p.clone());
        }
    }
    let tgt = darts.iter().map(|d| (d.clone(), g.target(d).unwrap().clone())).collect();
    let k = Graph::from_parts(inv, tgt, c.w.clone(), Some(boundary))
        .map_err(|e| EtaleError::NotEmbedding(e.to_string()))?;
    let verts = c.w.iter().map(|v| (v.clone(), v.clone())).collect();
    let f = check_etale(&k, g, &arcs, &verts)?;
    if !f.is_embedding() {
        return Err(EtaleError::NotEmbedding("rebuilt source is disconnected".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    #[test]
    fn star_counts() {
        assert_eq!(enumerate_embeddings(&edge()).len(), 1);
        for n in 0..=4 {
            assert_eq!(enumerate_embeddings(&star(n)).len(), n + 1);
        }
    }

    #[test]
    fn double_edge_graph_has_seven_classes() {
        let g = double_edge();
        let all = enumerate_embeddings(&g);
        assert_eq!(all.len(), 7);
        for c in &all {
            let f = representative(&g, c).unwrap();
            assert_eq!(embedding_class(&f).unwrap(), *c);
            assert!(f.source.is_connected());
        }
    }

    #[test]
    fn covering_is_etale_not_embedding() {
        let (a, v) = square_covering();
        let f = check_etale(&square_cover(), &double_edge(), &a, &v).unwrap();
        assert!(!f.is_embedding());
        assert!(embedding_class(&f).is_err());
    }

    #[test]
    fn dart_onto_boundary_fails_pullback() {
        let s = star(1);
        let arcs = [("1".to_string(), "1*".to_string()), ("1*".to_string(), "1".to_string())].into();
        let verts = [("v".to_string(), "v".to_string())].into();
        assert!(matches!(check_etale(&s, &s, &arcs, &verts), Err(EtaleError::PullbackFails(_))));
    }

    #[test]
    fn loop_into_edge_leaks() {
        let arcs = [(EDGE_MAJOR.to_string(), EDGE_MAJOR.to_string()), (EDGE_MINOR.to_string(), EDGE_MINOR.to_string())].into();
        let r = check_etale(&nodeless_loop(), &edge(), &arcs, &BTreeMap::new());
        assert!(matches!(r, Err(EtaleError::InteriorLeak(_))));
        assert!(check_etale(&edge(), &nodeless_loop(), &arcs, &BTreeMap::new()).is_ok());
    }

    #[test]
    fn class_parse_round_trip() {
        let c = EmbeddingClass::of_vertex(&linear(2), "v0");
        assert_eq!(EmbeddingClass::parse(&c.to_string()).unwrap(), c);
    }
}
