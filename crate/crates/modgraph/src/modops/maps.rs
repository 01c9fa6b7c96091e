//! Maps out of free operads on graphs: application, composition, the functor `J`, and hom-set
//! enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use super::free::decode;
use super::{embedding_to_element, Deco, DecoratedGraph, Elem, FreeModularOperad, Operad, OperadError};
use crate::graph::{ColoredGraph, Graph};
use crate::graphical::GraphicalMap;
use crate::involutive::{ColoredObject, Name};

/// A map `M(H) -> P`: an involutive color map on the arcs of `H` and, per vertex `v`, an
/// element of `P(i nbhd(v), f0|)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OperadMap {
    pub source: Graph,
    pub f0: BTreeMap<Name, Name>,
    pub f1: BTreeMap<Name, Elem>,
}

impl fmt::Display for OperadMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f0: Vec<String> = self.f0.iter().map(|(a, c)| format!("{a} -> {c}")).collect();
        write!(f, "f0: {}", f0.join(", "))?;
        for (v, x) in &self.f1 {
            write!(f, "\nf1 {v}: {x}")?;
        }
        Ok(())
    }
}

/// The fiber a vertex of `h` must land in under `f0`.
pub fn vertex_profile(h: &Graph, f0: &BTreeMap<Name, Name>, v: &str) -> ColoredObject {
    ColoredObject::new(h.nbhd(v).iter().map(|d| (h.inv(d).clone(), f0[h.inv(d)].clone())).collect())
}

fn member(target: &dyn Operad, p: &ColoredObject, x: &Elem) -> Result<bool, OperadError> {
    Ok(target.fiber(p)?.binary_search(x).is_ok())
}

/// Validates `f0` and the fibers of `f1`. For a free target only decodability is required,
/// so elements beyond its enumeration bound are accepted.
pub fn make_operad_map(
    source: &Graph,
    target: &dyn Operad,
    f0: BTreeMap<Name, Name>,
    f1: BTreeMap<Name, Elem>,
) -> Result<OperadMap, OperadError> {
    let colors = target.colors();
    for a in source.arcs() {
        let c = f0.get(a).ok_or_else(|| OperadError::ColorMismatch(format!("arc `{a}` unmapped")))?;
        if colors.dagger(c) != f0.get(source.inv(a)) {
            return Err(OperadError::ColorMismatch(format!("f0 is not involutive at `{a}`")));
        }
    }
    if f1.keys().collect::<BTreeSet<_>>() != source.vertices().iter().collect() {
        return Err(OperadError::Shape("f1 must decorate every vertex".into()));
    }
    let m = OperadMap { source: source.clone(), f0, f1 };
    for (v, x) in &m.f1 {
        let p = vertex_profile(source, &m.f0, v);
        if !member(target, &p, x)? {
            return Err(OperadError::NotInFiber(x.clone()));
        }
    }
    Ok(m)
}

/// Evaluates `map` on an element of `M(H)(profile)`: decorate, transport, then apply `gamma`.
pub fn apply(map: &OperadMap, target: &dyn Operad, x: &Elem, profile: &ColoredObject) -> Result<Elem, OperadError> {
    let h = &map.source;
    let d = decode(x, profile, &h.involution())?;
    let k = &d.shape.graph;
    let zeta: BTreeMap<Name, Name> = d.shape.zeta.iter().map(|(a, c)| (a.clone(), map.f0[c].clone())).collect();
    let shape = ColoredGraph::new(k.clone(), zeta, target.colors()).map_err(OperadError::ColorMismatch)?;
    let out_profile = ColoredObject::new(profile.coloring.iter().map(|(s, c)| (s.clone(), map.f0[c].clone())).collect());
    let mut decorations = BTreeMap::new();
    for w in k.vertices() {
        let Deco::Atom(v) = &d.decorations[w] else { unreachable!() };
        let from = vertex_profile(h, &map.f0, v);
        // i nbhd(v) -> i nbhd(w), inverse to the coloring on i nbhd(w).
        let f: BTreeMap<Name, Name> = k.nbhd(w).iter().map(|a| (d.shape.zeta[k.inv(a)].clone(), k.inv(a).clone())).collect();
        if f.len() != from.len() || f.keys().any(|x| from.color(x).is_none()) {
            return Err(OperadError::NotInFiber(x.clone()));
        }
        let to = ColoredObject::new(f.values().map(|a| (a.clone(), shape.zeta[a].clone())).collect());
        decorations.insert(w.clone(), Deco::Atom(target.relabel(&map.f1[v], &from, &f, &to)?));
    }
    let dd = DecoratedGraph::new(shape, d.order.clone(), out_profile, decorations)?;
    target.gamma(&dd)
}

/// Kleisli-style composite `g o f` where `f: M(H) -> M(G)` and `g: M(G) -> P`.
pub fn compose_operad_maps(g: &OperadMap, f: &OperadMap, target: &dyn Operad) -> Result<OperadMap, OperadError> {
    let f0 = f.f0.iter().map(|(a, c)| (a.clone(), g.f0[c].clone())).collect();
    let mut f1 = BTreeMap::new();
    for (v, x) in &f.f1 {
        let p = vertex_profile(&f.source, &f.f0, v);
        f1.insert(v.clone(), apply(g, target, x, &p)?);
    }
    Ok(OperadMap { source: f.source.clone(), f0, f1 })
}

/// The identity of `M(H)`: each vertex decorated by its own star.
pub fn identity_map(h: &Graph) -> OperadMap {
    j_functor(&crate::graphical::identity(h, crate::graphical::Mode::Extended)).expect("identity is graphical")
}

/// `J(phi)`: `phi0` on colors, and each vertex sent to the element its embedding class represents.
pub fn j_functor(phi: &GraphicalMap) -> Result<OperadMap, OperadError> {
    let h = &phi.source;
    let g = &phi.target;
    let mut f1 = BTreeMap::new();
    for v in h.vertices() {
        let (from, x) = embedding_to_element(g, &phi.phi1[v])?;
        let to = vertex_profile(h, &phi.phi0, v);
        let f: BTreeMap<Name, Name> = to.coloring.iter().map(|(a, c)| (c.clone(), a.clone())).collect();
        if f.len() != from.len() {
            return Err(OperadError::Shape(format!("boundary of the class at `{v}` is not matched")));
        }
        let free = FreeModularOperad::new(g, 0);
        f1.insert(v.clone(), free.relabel(&x, &from, &f, &to)?);
    }
    Ok(OperadMap { source: h.clone(), f0: phi.phi0.clone(), f1 })
}

/// All involutive color maps on the arcs of `h`, one choice per arc class.
pub fn involutive_color_maps(h: &Graph, target: &dyn Operad) -> Vec<BTreeMap<Name, Name>> {
    let colors = target.colors();
    let classes = h.arc_classes();
    let cs: Vec<Name> = colors.elements().cloned().collect();
    if classes.is_empty() {
        return vec![BTreeMap::new()];
    }
    classes
        .iter()
        .map(|_| cs.iter())
        .multi_cartesian_product()
        .map(|choice| {
            let mut f0 = BTreeMap::new();
            for ((a, b), c) in classes.iter().zip(choice) {
                f0.insert(a.clone(), c.clone());
                f0.insert(b.clone(), colors.dagger(c).unwrap().clone());
            }
            f0
        })
        .collect()
}

/// All maps `M(h) -> target`, computed from the per-vertex data; sorted.
pub fn maps_from_free(h: &Graph, target: &dyn Operad) -> Result<Vec<OperadMap>, OperadError> {
    let mut out = Vec::new();
    let verts: Vec<&Name> = h.vertices().iter().collect();
    for f0 in involutive_color_maps(h, target) {
        let mut fibers = Vec::new();
        for v in &verts {
            fibers.push(target.fiber(&vertex_profile(h, &f0, v))?);
        }
        if verts.is_empty() {
            out.push(OperadMap { source: h.clone(), f0, f1: BTreeMap::new() });
            continue;
        }
        for choice in fibers.iter().map(|f| f.iter()).multi_cartesian_product() {
            let f1 = verts.iter().zip(choice).map(|(v, x)| ((*v).clone(), x.clone())).collect();
            out.push(OperadMap { source: h.clone(), f0: f0.clone(), f1 });
        }
    }
    out.sort();
    Ok(out)
}

/// Maps `M(h) -> M(g)` whose vertex values have at most `vertex_bound` vertices.
pub fn jk_homset(h: &Graph, g: &Graph, vertex_bound: usize) -> Vec<OperadMap> {
    maps_from_free(h, &FreeModularOperad::new(g, vertex_bound)).expect("free fibers are total")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;
    use crate::graphical::{compose, homset, Mode};

    #[test]
    fn j_is_faithful_and_functorial_on_small_homsets() {
        let gs = [edge(), star(1), star(2), linear(2), cycle(1)];
        for h in &gs {
            for g in &gs {
                let hs = homset(h, g, Mode::Strict);
                let js: BTreeSet<OperadMap> = hs.iter().map(|p| j_functor(p).unwrap()).collect();
                assert_eq!(js.len(), hs.len());
                for k in &gs {
                    let free = FreeModularOperad::new(k, 4);
                    for psi in homset(g, k, Mode::Strict).iter().take(4) {
                        for phi in hs.iter().take(4) {
                            let lhs = j_functor(&compose(psi, phi).unwrap()).unwrap();
                            let rhs = compose_operad_maps(&j_functor(psi).unwrap(), &j_functor(phi).unwrap(), &free).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lonely_vertex_maps_to_edge_operad() {
        assert!(homset(&star(0), &edge(), Mode::Strict).is_empty());
        assert_eq!(jk_homset(&star(0), &edge(), 2).len(), 1);
    }

    #[test]
    fn edge_source_counts_arcs() {
        let g = linear(2);
        assert_eq!(jk_homset(&edge(), &g, 2).len(), g.num_arcs());
    }

    #[test]
    fn identity_is_a_unit() {
        let g = linear(2);
        let free = FreeModularOperad::new(&g, 3);
        let id = identity_map(&g);
        for m in jk_homset(&star(2), &g, 2) {
            assert_eq!(compose_operad_maps(&id, &m, &free).unwrap(), m);
        }
    }
}
