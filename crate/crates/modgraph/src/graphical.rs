//! Graphical maps: validation, composition by substitution, active maps, the active/embedding
//! factorization, Segal-core data, and hom-set enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::etale::{check_etale, embedding_class, enumerate_embeddings, representative, EmbeddingClass, EtaleMap};
use crate::graph::{edge, star_of_vertex, Graph, EDGE_MAJOR, EDGE_MINOR};
use crate::involutive::Name;
use crate::substitution::{substitute, Plug};

/// Which category a map lives in: `Strict` forbids nodeless loops and total collapse of closed
/// graphs; `Extended` admits nodeless loops and only lets closed graphs collapse onto one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Strict,
    Extended,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("object not allowed in this mode: {0}")]
    BadObject(String),
    #[error("arc map is not total at `{0}`")]
    NotTotal(Name),
    #[error("arc map does not commute with the involution at `{0}`")]
    NotInvolutive(Name),
    #[error("class assigned to `{0}` is not an embedding class of the target")]
    BadClass(Name),
    #[error("vertex `{0}` is covered by two image classes")]
    VertexDoubleCover(Name),
    #[error("neighborhood of `{0}` does not match the boundary of its image class")]
    BoundaryMismatch(Name),
    #[error("closed source collapses onto edges")]
    CollapseViolation,
    #[error("composite is not an embedding: {0}")]
    Assembly(String),
    #[error("segal core needs a vertex")]
    NoVertices,
}

/// A graphical map `source -> target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphicalMap {
    pub source: Graph,
    pub target: Graph,
    pub phi0: BTreeMap<Name, Name>,
    pub phi1: BTreeMap<Name, EmbeddingClass>,
    pub mode: Mode,
}

impl fmt::Display for GraphicalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self.phi0.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
        writeln!(f, "phi0: {}", arcs.join(", "))?;
        for (v, c) in &self.phi1 {
            writeln!(f, "phi1 {v}: {c}")?;
        }
        Ok(())
    }
}

fn check_object(g: &Graph, mode: Mode) -> Result<(), MapError> {
    if !g.is_connected() {
        return Err(MapError::BadObject("graph is not connected".into()));
    }
    if mode == Mode::Strict && !g.is_safe() {
        return Err(MapError::BadObject("graph is not safe".into()));
    }
    Ok(())
}

/// A class is valid over `g` iff its rebuilt representative reproduces it.
pub fn is_valid_class(g: &Graph, c: &EmbeddingClass) -> bool {
    if c.is_loop() {
        return c.b.len() == 2
            && c.b.iter().all(|a| g.has_arc(a) && c.b.contains(g.inv(a)) && !g.is_dart(a) && !g.is_boundary(a));
    }
    if c.is_edge() && !(c.b.len() == 2 && c.b == c.bd && c.b.iter().all(|a| g.has_arc(a) && c.b.contains(g.inv(a)))) {
        return false;
    }
    if !c.w.iter().all(|v| g.vertices().contains(v)) {
        return false;
    }
    representative(g, c).ok().and_then(|f| embedding_class(&f).ok()).as_ref() == Some(c)
}

/// Validates the data of a graphical map.
pub fn make_graphical_map(
    source: &Graph,
    target: &Graph,
    phi0: BTreeMap<Name, Name>,
    phi1: BTreeMap<Name, EmbeddingClass>,
    mode: Mode,
) -> Result<GraphicalMap, MapError> {
    check_object(source, mode)?;
    check_object(target, mode)?;
    for a in source.arcs() {
        match phi0.get(a) {
            Some(b) if target.has_arc(b) => {}
            _ => return Err(MapError::NotTotal(a.clone())),
        }
    }
    if phi0.len() != source.num_arcs() {
        return Err(MapError::NotTotal("extra arcs".into()));
    }
    for a in source.arcs() {
        if phi0[source.inv(a)] != *target.inv(&phi0[a]) {
            return Err(MapError::NotInvolutive(a.clone()));
        }
    }
    if phi1.keys().collect::<BTreeSet<_>>() != source.vertices().iter().collect() {
        return Err(MapError::BadClass("vertex set".into()));
    }
    for (v, c) in &phi1 {
        if !is_valid_class(target, c) {
            return Err(MapError::BadClass(v.clone()));
        }
    }
    let mut covered: BTreeSet<&Name> = BTreeSet::new();
    for c in phi1.values() {
        for w in &c.w {
            if !covered.insert(w) {
                return Err(MapError::VertexDoubleCover(w.clone()));
            }
        }
    }
    for (v, c) in &phi1 {
        let image: Vec<&Name> = source.nbhd(v).iter().map(|d| &phi0[source.inv(d)]).collect();
        let set: BTreeSet<&Name> = image.iter().copied().collect();
        if set.len() != image.len() || set.into_iter().cloned().collect::<BTreeSet<_>>() != c.bd {
            return Err(MapError::BoundaryMismatch(v.clone()));
        }
    }
    if source.boundary().is_empty() {
        let all_edges = phi1.values().all(|c| c.w.is_empty());
        let ok = match mode {
            Mode::Strict => !source.vertices().is_empty() && !all_edges,
            Mode::Extended => !all_edges || target.is_nodeless_loop(),
        };
        if !ok {
            return Err(MapError::CollapseViolation);
        }
    }
    Ok(GraphicalMap { source: source.clone(), target: target.clone(), phi0, phi1, mode })
}

/// The identity map.
pub fn identity(g: &Graph, mode: Mode) -> GraphicalMap {
    GraphicalMap {
        source: g.clone(),
        target: g.clone(),
        phi0: g.arcs().map(|a| (a.clone(), a.clone())).collect(),
        phi1: g.vertices().iter().map(|v| (v.clone(), EmbeddingClass::of_vertex(g, v))).collect(),
        mode,
    }
}

/// The graphical map induced by an embedding.
pub fn from_embedding(f: &EtaleMap, mode: Mode) -> Result<GraphicalMap, MapError> {
    let phi1 = f
        .vertices
        .iter()
        .map(|(v, u)| (v.clone(), EmbeddingClass::of_vertex(&f.target, u)))
        .collect();
    make_graphical_map(&f.source, &f.target, f.arcs.clone(), phi1, mode)
}

fn combined(a: Mode, b: Mode) -> Mode {
    if a == Mode::Extended || b == Mode::Extended { Mode::Extended } else { Mode::Strict }
}

/// The arcs of a representative's boundary, keyed by their image.
fn boundary_by_image(f: &EtaleMap) -> BTreeMap<Name, Name> {
    f.source.boundary().iter().map(|b| (f.arcs[b].clone(), b.clone())).collect()
}

/// Assembles `K{H_w} -> target` from a representative `k: K -> middle` of a class and the
/// classes `psi1(w)`, following the arc map `psi0`.
fn assemble(
    k: &EtaleMap,
    psi0: &BTreeMap<Name, Name>,
    psi1: &BTreeMap<Name, EmbeddingClass>,
    target: &Graph,
) -> Result<EtaleMap, MapError> {
    let mut plugs = BTreeMap::new();
    let mut reps = BTreeMap::new();
    for w in k.source.vertices() {
        let c = &psi1[&k.vertices[w]];
        let h = representative(target, c).map_err(|e| MapError::Assembly(e.to_string()))?;
        let by_img = boundary_by_image(&h);
        let mut m = BTreeMap::new();
        for d in k.source.nbhd(w) {
            let x = k.source.inv(&d);
            let img = &psi0[&k.arcs[x]];
            let b = by_img.get(img).ok_or_else(|| MapError::Assembly(format!("no boundary arc over `{img}`")))?;
            m.insert(x.clone(), b.clone());
        }
        plugs.insert(w.clone(), Plug { graph: h.source.clone(), m });
        reps.insert(w.clone(), h);
    }
    let s = substitute(&k.source, &plugs).map_err(|e| MapError::Assembly(e.to_string()))?;
    let arcs = s.arc_of.iter().map(|((w, a), x)| (x.clone(), reps[w].arcs[a].clone())).collect();
    let verts = s.vertex_of.iter().map(|((w, u), x)| (x.clone(), reps[w].vertices[u].clone())).collect();
    check_etale(&s.graph, target, &arcs, &verts).map_err(|e| MapError::Assembly(e.to_string()))
}

/// `psi` after `phi`.
pub fn compose(psi: &GraphicalMap, phi: &GraphicalMap) -> Result<GraphicalMap, MapError> {
    let mode = combined(psi.mode, phi.mode);
    let phi0: BTreeMap<Name, Name> = phi.phi0.iter().map(|(a, b)| (a.clone(), psi.phi0[b].clone())).collect();
    let mut phi1 = BTreeMap::new();
    for (v, c) in &phi.phi1 {
        let class = if c.w.is_empty() {
            let b: BTreeSet<Name> = c.b.iter().map(|a| psi.phi0[a].clone()).collect();
            let bd = c.bd.iter().map(|a| psi.phi0[a].clone()).collect();
            EmbeddingClass { w: BTreeSet::new(), b, bd }
        } else {
            let k = representative(&phi.target, c).map_err(|e| MapError::Assembly(e.to_string()))?;
            let f = assemble(&k, &psi.phi0, &psi.phi1, &psi.target)?;
            embedding_class(&f).map_err(|e| MapError::Assembly(e.to_string()))?
        };
        phi1.insert(v.clone(), class);
    }
    make_graphical_map(&phi.source, &psi.target, phi0, phi1, mode)
}

/// `phi0` induces a bijection of boundaries.
pub fn is_active(phi: &GraphicalMap) -> bool {
    let img: BTreeSet<&Name> = phi.source.boundary().iter().map(|a| &phi.phi0[a]).collect();
    img.len() == phi.source.boundary().len() && img.into_iter().cloned().collect::<BTreeSet<_>>() == *phi.target.boundary()
}

/// A map into `g` whose image is a single embedding class.
pub fn is_embedding_map(phi: &GraphicalMap) -> bool {
    if phi.source.vertices().is_empty() {
        return true;
    }
    let verts: BTreeMap<Name, Name> = phi
        .phi1
        .iter()
        .filter_map(|(v, c)| (c.w.len() == 1 && c == &EmbeddingClass::of_vertex(&phi.target, c.w.iter().next().unwrap())).then(|| (v.clone(), c.w.iter().next().unwrap().clone())))
        .collect();
    verts.len() == phi.phi1.len()
        && check_etale(&phi.source, &phi.target, &phi.phi0, &verts).is_ok_and(|f| f.is_embedding())
}

/// The active map `star_S -> g` restricting to `xi: S -> boundary(g)` on arcs.
pub fn star_active(g: &Graph, xi: &BTreeMap<Name, Name>, mode: Mode) -> Result<GraphicalMap, MapError> {
    let s: BTreeSet<Name> = xi.keys().cloned().collect();
    let star = crate::graph::star_of(&s);
    let mut phi0 = BTreeMap::new();
    for (a, b) in xi {
        phi0.insert(a.clone(), b.clone());
        if !g.has_arc(b) {
            return Err(MapError::NotTotal(a.clone()));
        }
        phi0.insert(star.inv(a).clone(), g.inv(b).clone());
    }
    let phi1 = star.vertices().iter().map(|v| (v.clone(), EmbeddingClass::identity(g))).collect();
    make_graphical_map(&star, g, phi0, phi1, mode)
}

/// The canonical active map `star_G -> G`.
pub fn canonical_active(g: &Graph, mode: Mode) -> Result<GraphicalMap, MapError> {
    let xi = g.boundary().iter().map(|b| (b.clone(), b.clone())).collect();
    star_active(g, &xi, mode)
}

/// Factors `phi = embedding o active` through `G{K_v}` with `K_v` representatives of `phi1(v)`.
pub fn factorize(phi: &GraphicalMap) -> Result<(GraphicalMap, GraphicalMap), MapError> {
    let g = &phi.source;
    if g.vertices().is_empty() {
        return Ok((identity(g, phi.mode), phi.clone()));
    }
    let mut plugs = BTreeMap::new();
    let mut reps = BTreeMap::new();
    for (v, c) in &phi.phi1 {
        let k = representative(&phi.target, c).map_err(|e| MapError::Assembly(e.to_string()))?;
        let by_img = boundary_by_image(&k);
        let m = g
            .nbhd(v)
            .iter()
            .map(|d| {
                let x = g.inv(d);
                (x.clone(), by_img[&phi.phi0[x]].clone())
            })
            .collect();
        plugs.insert(v.clone(), Plug { graph: k.source.clone(), m });
        reps.insert(v.clone(), k);
    }
    let s = substitute(g, &plugs).map_err(|e| MapError::Assembly(e.to_string()))?;
    let mid = s.graph.clone();
    let arcs: BTreeMap<Name, Name> = s.arc_of.iter().map(|((v, a), x)| (x.clone(), reps[v].arcs[a].clone())).collect();
    let verts: BTreeMap<Name, Name> =
        s.vertex_of.iter().map(|((v, u), x)| (x.clone(), reps[v].vertices[u].clone())).collect();
    let emb = check_etale(&mid, &phi.target, &arcs, &verts).map_err(|e| MapError::Assembly(e.to_string()))?;
    if !emb.is_embedding() {
        return Err(MapError::Assembly("assembled map is not an embedding".into()));
    }
    let right = from_embedding(&emb, phi.mode)?;

    let mut a0 = BTreeMap::new();
    for v in g.vertices() {
        for d in g.nbhd(v) {
            let x = g.inv(&d).clone();
            let y = s.arc_of[&(v.clone(), plugs[v].m[&x].clone())].clone();
            a0.insert(d.clone(), mid.inv(&y).clone());
            a0.insert(x, y);
        }
    }
    let mut a1 = BTreeMap::new();
    for (v, k) in &reps {
        let img = |a: &Name| s.arc_of[&(v.clone(), a.clone())].clone();
        let c = EmbeddingClass {
            w: k.source.vertices().iter().map(|u| s.vertex_of[&(v.clone(), u.clone())].clone()).collect(),
            b: k.source.arcs().map(img).collect(),
            bd: k.source.boundary().iter().map(img).collect(),
        };
        a1.insert(v.clone(), c);
    }
    let left = make_graphical_map(g, &mid, a0, a1, phi.mode)?;
    Ok((left, right))
}

/// The edge maps of one internal edge `[x1, x2]`: `outer: edge -> star_{t x1}` and
/// `inner: edge -> star_{t x2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePair {
    pub edge: (Name, Name),
    pub outer_vertex: Name,
    pub outer: GraphicalMap,
    pub inner_vertex: Name,
    pub inner: GraphicalMap,
}

/// The stars of a graph with their canonical embeddings, and the edge pairs gluing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegalCore {
    pub stars: BTreeMap<Name, GraphicalMap>,
    pub edges: Vec<EdgePair>,
}

/// Generating data of the Segal core of `g`.
pub fn segal_core_data(g: &Graph, mode: Mode) -> Result<SegalCore, MapError> {
    if g.vertices().is_empty() {
        return Err(MapError::NoVertices);
    }
    let mut stars = BTreeMap::new();
    let mut dagger: BTreeMap<Name, Name> = BTreeMap::new();
    for v in g.vertices() {
        let (s, iota) = star_of_vertex(g, v).map_err(|e| MapError::BadObject(e.to_string()))?;
        for b in s.boundary() {
            dagger.insert(s.inv(b).clone(), b.clone());
        }
        let f = check_etale(&s, g, &iota, &[(v.clone(), v.clone())].into())
            .map_err(|e| MapError::BadObject(e.to_string()))?;
        stars.insert(v.clone(), from_embedding(&f, mode)?);
    }
    let mut edges = Vec::new();
    for (x1, x2) in g.internal_edges() {
        let v1 = g.target(&x1).unwrap().clone();
        let v2 = g.target(&x2).unwrap().clone();
        let major = EDGE_MAJOR.to_string();
        let minor = EDGE_MINOR.to_string();
        let outer0 = [(major.clone(), dagger[&x1].clone()), (minor.clone(), x1.clone())].into();
        let inner0 = [(major, x2.clone()), (minor, dagger[&x2].clone())].into();
        let outer = make_graphical_map(&edge(), &stars[&v1].source, outer0, BTreeMap::new(), mode)?;
        let inner = make_graphical_map(&edge(), &stars[&v2].source, inner0, BTreeMap::new(), mode)?;
        edges.push(EdgePair { edge: (x1, x2), outer_vertex: v1, outer, inner_vertex: v2, inner });
    }
    Ok(SegalCore { stars, edges })
}

/// Every graphical map `h -> g`, sorted.
pub fn homset(h: &Graph, g: &Graph, mode: Mode) -> Vec<GraphicalMap> {
    if check_object(h, mode).is_err() || check_object(g, mode).is_err() {
        return Vec::new();
    }
    let mut out = Vec::new();
    if h.vertices().is_empty() {
        let (a0, b0) = h.arc_classes()[0].clone();
        for a in g.arcs() {
            let phi0 = [(a0.clone(), a.clone()), (b0.clone(), g.inv(a).clone())].into();
            if let Ok(m) = make_graphical_map(h, g, phi0, BTreeMap::new(), mode) {
                out.push(m);
            }
        }
        out.sort();
        return out;
    }
    let classes = enumerate_embeddings(g);
    let verts: Vec<Name> = h.vertices().iter().cloned().collect();
    let mut s = HomSearch {
        h,
        g,
        mode,
        classes: &classes,
        verts: &verts,
        phi0: BTreeMap::new(),
        phi1: BTreeMap::new(),
        covered: BTreeSet::new(),
        out: &mut out,
    };
    s.vertex(0);
    out.sort();
    out.dedup();
    out
}

struct HomSearch<'a> {
    h: &'a Graph,
    g: &'a Graph,
    mode: Mode,
    classes: &'a [EmbeddingClass],
    verts: &'a [Name],
    phi0: BTreeMap<Name, Name>,
    phi1: BTreeMap<Name, EmbeddingClass>,
    covered: BTreeSet<Name>,
    out: &'a mut Vec<GraphicalMap>,
}

impl HomSearch<'_> {
    fn vertex(&mut self, k: usize) {
        if k == self.verts.len() {
            if let Ok(m) = make_graphical_map(self.h, self.g, self.phi0.clone(), self.phi1.clone(), self.mode) {
                self.out.push(m);
            }
            return;
        }
        let v = self.verts[k].clone();
        let nb: Vec<Name> = self.h.nbhd(&v).into_iter().collect();
        for c in self.classes {
            if c.bd.len() != nb.len() || c.w.iter().any(|w| self.covered.contains(w)) {
                continue;
            }
            if c.is_loop() && self.mode == Mode::Strict {
                continue;
            }
            self.covered.extend(c.w.iter().cloned());
            self.phi1.insert(v.clone(), c.clone());
            let targets: Vec<Name> = c.bd.iter().cloned().collect();
            let mut used = vec![false; targets.len()];
            self.assign(k, &nb, 0, &targets, &mut used);
            self.phi1.remove(&v);
            for w in &c.w {
                self.covered.remove(w);
            }
        }
    }

    /// Chooses `phi0(i d)` among the class boundary for each dart `d` of the current vertex.
    fn assign(&mut self, k: usize, nb: &[Name], j: usize, targets: &[Name], used: &mut [bool]) {
        if j == nb.len() {
            self.vertex(k + 1);
            return;
        }
        let d = &nb[j];
        let x = self.h.inv(d).clone();
        for t in 0..targets.len() {
            if used[t] {
                continue;
            }
            let y = targets[t].clone();
            let yd = self.g.inv(&y).clone();
            let mut added = Vec::new();
            let mut ok = true;
            for (a, b) in [(x.clone(), y.clone()), (d.clone(), yd.clone())] {
                match self.phi0.get(&a) {
                    Some(prev) if *prev != b => ok = false,
                    Some(_) => {}
                    None => {
                        self.phi0.insert(a.clone(), b);
                        added.push(a);
                    }
                }
            }
            if ok {
                used[t] = true;
                self.assign(k, nb, j + 1, targets, used);
                used[t] = false;
            }
            for a in added {
                self.phi0.remove(&a);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    fn union_oracle(psi: &GraphicalMap, phi: &GraphicalMap) -> BTreeMap<Name, EmbeddingClass> {
        phi.phi1
            .iter()
            .map(|(v, c)| {
                let mut out = EmbeddingClass {
                    w: BTreeSet::new(),
                    b: BTreeSet::new(),
                    bd: c.bd.iter().map(|a| psi.phi0[a].clone()).collect(),
                };
                if c.w.is_empty() {
                    out.b = c.b.iter().map(|a| psi.phi0[a].clone()).collect();
                }
                for w in &c.w {
                    out.w.extend(psi.phi1[w].w.iter().cloned());
                    out.b.extend(psi.phi1[w].b.iter().cloned());
                }
                (v.clone(), out)
            })
            .collect()
    }

    #[test]
    fn identity_is_valid_and_neutral() {
        for g in [star(3), linear(2), cycle(2), edge()] {
            let id = identity(&g, Mode::Strict);
            make_graphical_map(&g, &g, id.phi0.clone(), id.phi1.clone(), Mode::Strict).unwrap();
            for f in homset(&star(2), &g, Mode::Strict) {
                assert_eq!(compose(&id, &f).unwrap(), f);
            }
        }
    }

    #[test]
    fn double_cover_is_not_graphical() {
        let (arcs, verts) = square_covering();
        let base = double_edge();
        let phi1 = verts.iter().map(|(v, u)| (v.clone(), EmbeddingClass::of_vertex(&base, u))).collect();
        let r = make_graphical_map(&square_cover(), &base, arcs, phi1, Mode::Strict);
        assert!(matches!(r, Err(MapError::VertexDoubleCover(_))));
    }

    #[test]
    fn loop_cannot_collapse_onto_edge() {
        let g = cycle(1);
        let e = edge();
        let phi0 = [("x0".to_string(), "e".to_string()), ("y0".to_string(), "e*".to_string())].into();
        let phi1 = [("v0".to_string(), EmbeddingClass::of_edge(&e, "e"))].into();
        let r = make_graphical_map(&g, &e, phi0, phi1, Mode::Strict);
        assert_eq!(r.unwrap_err(), MapError::CollapseViolation);
        assert!(homset(&g, &e, Mode::Strict).is_empty());
        assert!(homset(&star(0), &e, Mode::Strict).is_empty());
    }

    #[test]
    fn arcs_are_maps_from_the_edge() {
        for g in [star(3), cycle(2), linear(3)] {
            assert_eq!(homset(&edge(), &g, Mode::Strict).len(), g.num_arcs());
        }
    }

    #[test]
    fn composition_matches_union_formula() {
        let gs = [star(2), linear(2), linear(3), cycle(2)];
        for a in &gs {
            for b in &gs {
                for c in &gs {
                    let fs = homset(a, b, Mode::Strict);
                    let hs = homset(b, c, Mode::Strict);
                    for f in fs.iter().take(6) {
                        for h in hs.iter().take(6) {
                            let hf = compose(h, f).unwrap();
                            assert_eq!(hf.phi1, union_oracle(h, f));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factorization_recomposes() {
        for (a, b) in [(star(2), linear(2)), (linear(2), linear(3)), (star(3), linear(3)), (edge(), star(2))] {
            for f in homset(&a, &b, Mode::Strict) {
                let (act, emb) = factorize(&f).unwrap();
                assert!(is_active(&act));
                assert!(is_embedding_map(&emb));
                assert_eq!(compose(&emb, &act).unwrap(), f);
            }
        }
    }

    #[test]
    fn star_active_is_canonical() {
        let g = linear(2);
        let c = canonical_active(&g, Mode::Strict).unwrap();
        assert!(is_active(&c));
        let s = segal_core_data(&g, Mode::Strict).unwrap();
        assert!(s.stars.values().all(|i| !is_active(i)));
        assert_eq!(s.edges.len(), 1);
    }

    #[test]
    fn loop_core_lands_in_one_star() {
        let s = segal_core_data(&cycle(1), Mode::Strict).unwrap();
        assert_eq!(s.stars.len(), 1);
        assert_eq!(s.edges.len(), 1);
        assert_eq!(s.edges[0].outer_vertex, s.edges[0].inner_vertex);
        assert_eq!(segal_core_data(&edge(), Mode::Strict).unwrap_err(), MapError::NoVertices);
    }
}
