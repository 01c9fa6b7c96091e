//! Graph substitution `G{H_v}` as a coequalizer of arc sets, uncolored and colored.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{star_of_vertex, ColoredGraph, Graph};
use crate::involutive::{InvolutiveSet, Name};
use crate::iso::comma_isomorphisms;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("base graph has no vertices")]
    BaseHasNoVertices,
    #[error("no plug given for vertex `{0}`")]
    MissingPlug(Name),
    #[error("plug for `{0}` is not connected")]
    PlugNotConnected(Name),
    #[error("boundary identification at `{0}` is not a bijection onto the plug boundary")]
    NotBijection(Name),
    #[error("boundary arc `{0}` of the base is not attached to any vertex")]
    LooseBoundary(Name),
    #[error("colors disagree at `{0}`")]
    ColorMismatch(Name),
    #[error("quotient is not a graph: {0}")]
    Malformed(String),
}

/// A graph to put in place of a vertex `v`, with `m: i(nbhd(v)) -> boundary(graph)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plug {
    pub graph: Graph,
    pub m: BTreeMap<Name, Name>,
}

/// Result of a substitution with the quotient maps from each plug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substituted {
    pub graph: Graph,
    /// `(v, arc of H_v)` to its glued arc.
    pub arc_of: BTreeMap<(Name, Name), Name>,
    /// `(v, vertex of H_v)` to its vertex.
    pub vertex_of: BTreeMap<(Name, Name), Name>,
    /// The monomorphism from the base boundary onto the new boundary.
    pub boundary_of: BTreeMap<Name, Name>,
}

/// The canonical plugs `star_v` with `m_v(i d) = d^dagger`.
pub fn star_plugs(g: &Graph) -> BTreeMap<Name, Plug> {
    g.vertices()
        .iter()
        .map(|v| {
            let (s, iota) = star_of_vertex(g, v).expect("vertex of g");
            let m = s.boundary().iter().map(|b| (iota[b].clone(), b.clone())).collect();
            (v.clone(), Plug { graph: s, m })
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Substitutes `plugs[v]` for each vertex `v` of `base`.
///
/// Plug names are kept when plugs are pairwise disjoint; otherwise every name is prefixed by
/// its vertex as `v.name`. A glued arc class is named by its least member.
pub fn substitute(base: &Graph, plugs: &BTreeMap<Name, Plug>) -> Result<Substituted, SubstitutionError> {
    if base.vertices().is_empty() {
        return Err(SubstitutionError::BaseHasNoVertices);
    }
    for v in base.vertices() {
        let p = plugs.get(v).ok_or_else(|| SubstitutionError::MissingPlug(v.clone()))?;
        if !p.graph.is_connected() {
            return Err(SubstitutionError::PlugNotConnected(v.clone()));
        }
        let dom: BTreeSet<Name> = base.nbhd(v).iter().map(|d| base.inv(d).clone()).collect();
        let img: BTreeSet<&Name> = p.m.values().collect();
        let keys: BTreeSet<Name> = p.m.keys().cloned().collect();
        if keys != dom
            || img.len() != p.m.len()
            || img.into_iter().cloned().collect::<BTreeSet<_>>() != *p.graph.boundary()
        {
            return Err(SubstitutionError::NotBijection(v.clone()));
        }
    }
    for b in base.boundary() {
        if !base.is_dart(base.inv(b)) {
            return Err(SubstitutionError::LooseBoundary(b.clone()));
        }
    }

    // Tagged arcs, indexed.
    let mut tags: Vec<(Name, Name)> = Vec::new();
    for v in base.vertices() {
        for a in plugs[v].graph.arcs() {
            tags.push((v.clone(), a.clone()));
        }
    }
    let index: BTreeMap<(Name, Name), usize> = tags.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let prefixed = names_collide(base, plugs);
    let render = |v: &Name, x: &Name| if prefixed { format!("{v}.{x}") } else { x.clone() };

    let mut uf = UnionFind((0..tags.len()).collect());
    let inv_tag = |t: &(Name, Name)| (t.0.clone(), plugs[&t.0].graph.inv(&t.1).clone());
    for (x1, x2) in base.internal_edges() {
        let v1 = base.target(&x1).unwrap().clone();
        let v2 = base.target(&x2).unwrap().clone();
        let p = (v1.clone(), plugs[&v1].m[base.inv(&x1)].clone());
        let q = (v2.clone(), plugs[&v2].m[base.inv(&x2)].clone());
        uf.union(index[&p], index[&inv_tag(&q)]);
        uf.union(index[&inv_tag(&p)], index[&q]);
    }

    let mut class_name: BTreeMap<usize, Name> = BTreeMap::new();
    for (i, (v, a)) in tags.iter().enumerate() {
        let r = uf.find(i);
        let n = render(v, a);
        class_name.entry(r).and_modify(|c| if n < *c { *c = n.clone() }).or_insert(n);
    }
    let mut arc_of = BTreeMap::new();
    for (i, t) in tags.iter().enumerate() {
        let r = uf.find(i);
        arc_of.insert(t.clone(), class_name[&r].clone());
    }
    let mut inv = BTreeMap::new();
    for t in &tags {
        let a = arc_of[t].clone();
        let b = arc_of[&inv_tag(t)].clone();
        if let Some(prev) = inv.insert(a.clone(), b.clone()) {
            if prev != b {
                return Err(SubstitutionError::Malformed(format!("arc `{a}` has two partners")));
            }
        }
    }
    let mut vertex_of = BTreeMap::new();
    let mut vertices = BTreeSet::new();
    let mut tgt = BTreeMap::new();
    for v in base.vertices() {
        let h = &plugs[v].graph;
        for u in h.vertices() {
            let n = render(v, u);
            vertex_of.insert((v.clone(), u.clone()), n.clone());
            vertices.insert(n);
        }
        for (d, u) in h.incidence() {
            let a = arc_of[&(v.clone(), d.clone())].clone();
            if tgt.insert(a.clone(), vertex_of[&(v.clone(), u.clone())].clone()).is_some() {
                return Err(SubstitutionError::Malformed(format!("two darts glued into `{a}`")));
            }
        }
    }
    let mut boundary_of = BTreeMap::new();
    for b in base.boundary() {
        let d = base.inv(b);
        let v = base.target(d).unwrap().clone();
        let a = arc_of[&(v.clone(), plugs[&v].m[b].clone())].clone();
        boundary_of.insert(b.clone(), a);
    }
    let bd: BTreeSet<Name> = boundary_of.values().cloned().collect();
    if bd.len() != boundary_of.len() {
        return Err(SubstitutionError::Malformed("boundary map is not injective".into()));
    }
    let graph =
        Graph::from_parts(inv, tgt, vertices, Some(bd)).map_err(|e| SubstitutionError::Malformed(e.to_string()))?;
    Ok(Substituted { graph, arc_of, vertex_of, boundary_of })
}

fn names_collide(base: &Graph, plugs: &BTreeMap<Name, Plug>) -> bool {
    let mut arcs = BTreeSet::new();
    let mut verts = BTreeSet::new();
    for v in base.vertices() {
        let h = &plugs[v].graph;
        if !h.arcs().all(|a| arcs.insert(a.clone())) || !h.vertices().iter().all(|u| verts.insert(u.clone())) {
            return true;
        }
    }
    false
}

/// A colored plug: `zeta` on the base must agree with the plug coloring along `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredPlug {
    pub graph: ColoredGraph,
    pub m: BTreeMap<Name, Name>,
}

/// Colored substitution; the result carries the coloring induced through the quotient.
pub fn substitute_colored(
    base: &ColoredGraph,
    plugs: &BTreeMap<Name, ColoredPlug>,
    colors: &InvolutiveSet,
) -> Result<(ColoredGraph, Substituted), SubstitutionError> {
    for (v, p) in plugs {
        for (b, a) in &p.m {
            if base.zeta.get(b) != p.graph.zeta.get(a) {
                return Err(SubstitutionError::ColorMismatch(format!("{v}: {b}")));
            }
        }
    }
    let bare: BTreeMap<Name, Plug> =
        plugs.iter().map(|(v, p)| (v.clone(), Plug { graph: p.graph.graph.clone(), m: p.m.clone() })).collect();
    let s = substitute(&base.graph, &bare)?;
    let mut zeta: BTreeMap<Name, Name> = BTreeMap::new();
    for ((v, a), k) in &s.arc_of {
        let c = plugs[v].graph.zeta[a].clone();
        if let Some(prev) = zeta.insert(k.clone(), c.clone()) {
            if prev != c {
                return Err(SubstitutionError::ColorMismatch(k.clone()));
            }
        }
    }
    let cg = ColoredGraph::new(s.graph.clone(), zeta, colors).map_err(SubstitutionError::Malformed)?;
    Ok((cg, s))
}

/// Two-level substitution data: plugs `H_v` for the base and plugs `K_u` for each vertex `u`
/// of each `H_v` that has vertices.
#[derive(Debug, Clone)]
pub struct NestedSpec {
    pub base: Graph,
    pub plugs: BTreeMap<Name, Plug>,
    pub inner: BTreeMap<Name, BTreeMap<Name, Plug>>,
}

/// Outcome of a law check over many samples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn trivial_coloring(g: &Graph) -> ColoredGraph {
    ColoredGraph { graph: g.clone(), zeta: g.arcs().map(|a| (a.clone(), "c".to_string())).collect() }
}

/// Isomorphic over the base boundary: some isomorphism carries `f` to `f2`.
fn iso_over(g: &Graph, f: &BTreeMap<Name, Name>, h: &Graph, f2: &BTreeMap<Name, Name>) -> bool {
    !comma_isomorphisms(&trivial_coloring(g), f, &trivial_coloring(h), f2).is_empty()
}

fn identity_boundary(g: &Graph) -> BTreeMap<Name, Name> {
    g.boundary().iter().map(|b| (b.clone(), b.clone())).collect()
}

/// Checks unitality with stars and associativity `G{H_v}{K_u} = G{H_v{K_u}}` up to isomorphism
/// over the boundary of `G`.
pub fn check_substitution_laws(samples: &[NestedSpec]) -> LawReport {
    let mut rep = LawReport::default();
    for (n, s) in samples.iter().enumerate() {
        rep.checked += 1;
        match law_failure(s) {
            Ok(None) => {}
            Ok(Some(msg)) | Err(msg) => rep.failures.push(format!("sample {n}: {msg}\n{}", s.base.to_file_string("G"))),
        }
    }
    rep
}

fn law_failure(s: &NestedSpec) -> Result<Option<String>, String> {
    let e = |x: SubstitutionError| x.to_string();
    let unit = substitute(&s.base, &star_plugs(&s.base)).map_err(e)?;
    if !iso_over(&unit.graph, &unit.boundary_of, &s.base, &identity_boundary(&s.base)) {
        return Ok(Some("G{star_v} is not G".into()));
    }
    let first = substitute(&s.base, &s.plugs).map_err(e)?;

    // Left side: substitute into G{H_v} along the glued names.
    let mut outer: BTreeMap<Name, Plug> = BTreeMap::new();
    for v in s.base.vertices() {
        let h = &s.plugs[v].graph;
        for u in h.vertices() {
            let k = s.inner.get(v).and_then(|m| m.get(u)).ok_or_else(|| format!("no inner plug at {v}/{u}"))?;
            let m = k.m.iter().map(|(x, y)| (first.arc_of[&(v.clone(), x.clone())].clone(), y.clone())).collect();
            outer.insert(first.vertex_of[&(v.clone(), u.clone())].clone(), Plug { graph: k.graph.clone(), m });
        }
    }
    let left = substitute(&first.graph, &outer).map_err(e)?;
    let left_bd: BTreeMap<Name, Name> =
        first.boundary_of.iter().map(|(b, x)| (b.clone(), left.boundary_of[x].clone())).collect();

    // Right side: substitute inside each plug first.
    let mut nested: BTreeMap<Name, Plug> = BTreeMap::new();
    for v in s.base.vertices() {
        let p = &s.plugs[v];
        let inner = substitute(&p.graph, &s.inner[v]).map_err(e)?;
        let m = p.m.iter().map(|(b, x)| (b.clone(), inner.boundary_of[x].clone())).collect();
        nested.insert(v.clone(), Plug { graph: inner.graph, m });
    }
    let right = substitute(&s.base, &nested).map_err(e)?;
    if !iso_over(&left.graph, &left_bd, &right.graph, &right.boundary_of) {
        return Ok(Some("associativity fails".into()));
    }
    // A plug substituted into its own star returns the plug.
    for (v, p) in &s.plugs {
        let (single, iota) = star_of_vertex(&s.base, v).map_err(|x| x.to_string())?;
        let m: BTreeMap<Name, Name> = single.boundary().iter().map(|b| (b.clone(), p.m[&iota[b]].clone())).collect();
        let out = substitute(&single, &[(v.clone(), Plug { graph: p.graph.clone(), m: m.clone() })].into())
            .map_err(e)?;
        if !iso_over(&out.graph, &out.boundary_of, &p.graph, &m) {
            return Ok(Some(format!("star{{H}} is not H at `{v}`")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;
    use crate::iso::find_isomorphism;

    #[test]
    fn stars_are_a_unit() {
        for g in [star(3), linear(3), cycle(2), double_edge(), cycle(1)] {
            let s = substitute(&g, &star_plugs(&g)).unwrap();
            assert!(find_isomorphism(&s.graph, &g).is_some());
            assert_eq!(s.graph.boundary().len(), g.boundary().len());
        }
    }

    #[test]
    fn line_into_two_star() {
        let g = star(2);
        let h = linear(2);
        let m = [("1*".to_string(), "l0*".to_string()), ("2*".to_string(), "l1*".to_string())].into();
        let s = substitute(&g, &[("v".to_string(), Plug { graph: h.clone(), m })].into()).unwrap();
        assert_eq!(s.graph, h);
        assert_eq!(s.boundary_of["1*"], "l0*");
    }

    #[test]
    fn edges_into_a_loop_give_a_nodeless_loop() {
        let g = cycle(1);
        let m = [("x0".to_string(), "e".to_string()), ("y0".to_string(), "e*".to_string())].into();
        let s = substitute(&g, &[("v0".to_string(), Plug { graph: edge(), m })].into()).unwrap();
        assert!(s.graph.is_nodeless_loop());
    }

    #[test]
    fn edges_into_a_line_give_an_edge() {
        let g = linear(2);
        let m0 = [("l0*".to_string(), "e".to_string()), ("y1".to_string(), "e*".to_string())].into();
        let m1 = [("x1".to_string(), "e".to_string()), ("l1*".to_string(), "e*".to_string())].into();
        let plugs = [
            ("v0".to_string(), Plug { graph: edge(), m: m0 }),
            ("v1".to_string(), Plug { graph: edge(), m: m1 }),
        ]
        .into();
        let s = substitute(&g, &plugs).unwrap();
        assert!(s.graph.is_edge());
        assert_eq!(s.boundary_of.len(), 2);
    }

    #[test]
    fn bad_identifications() {
        let g = star(2);
        let m = [("1*".to_string(), "l0*".to_string())].into();
        let r = substitute(&g, &[("v".to_string(), Plug { graph: linear(2), m })].into());
        assert_eq!(r.unwrap_err(), SubstitutionError::NotBijection("v".into()));
        assert_eq!(substitute(&edge(), &BTreeMap::new()).unwrap_err(), SubstitutionError::BaseHasNoVertices);
    }
}
