//! Generators: exhaustive catalogs of small connected graphs, colorings and decorations, and
//! seeded random shapes for fuzzing.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{ColoredGraph, Graph};
use crate::involutive::{ColoredObject, InvolutiveSet, Name};
use crate::iso::graph_code;
use crate::modops::tabulated::{connected_partitions, split};
use crate::modops::{Deco, DecoratedGraph, Operad};

/// Where an arc class sits: an edge between two vertices (possibly equal) or a leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Edge(usize, usize),
    Leg(usize),
}

fn build(n: usize, slots: &[Slot]) -> Graph {
    let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut pairs = Vec::new();
    let mut inc = Vec::new();
    for (k, s) in slots.iter().enumerate() {
        match *s {
            Slot::Edge(i, j) => {
                pairs.push((format!("x{k}"), format!("y{k}")));
                inc.push((format!("x{k}"), vs[i].clone()));
                inc.push((format!("y{k}"), vs[j].clone()));
            }
            Slot::Leg(i) => {
                pairs.push((format!("l{k}"), format!("l{k}*")));
                inc.push((format!("l{k}"), vs[i].clone()));
            }
        }
    }
    Graph::new(&pairs, &vs, &inc, None).expect("generated graph is valid")
}

/// Every connected safe graph with at most `max_vertices` vertices and `max_arcs` arcs, one per
/// isomorphism class, sorted by canonical code. Includes the exceptional edge.
pub fn connected_safe_graphs(max_vertices: usize, max_arcs: usize) -> Vec<Graph> {
    let mut seen: BTreeMap<String, Graph> = BTreeMap::new();
    if max_arcs >= 2 {
        let e = crate::graph::edge();
        seen.insert(graph_code(&e), e);
    }
    for n in 1..=max_vertices {
        let mut kinds = Vec::new();
        for i in 0..n {
            for j in i..n {
                kinds.push(Slot::Edge(i, j));
            }
            kinds.push(Slot::Leg(i));
        }
        for k in 0..=max_arcs / 2 {
            for slots in kinds.iter().copied().combinations_with_replacement(k) {
                let g = build(n, &slots);
                if g.is_connected() {
                    seen.entry(graph_code(&g)).or_insert(g);
                }
            }
        }
    }
    seen.into_values().collect()
}

/// A random connected safe graph: a random spanning tree on `vertices` vertices, then
/// `extra` further edges (loops allowed) and `legs` legs at random vertices.
pub fn random_connected_graph(rng: &mut impl Rng, vertices: usize, extra: usize, legs: usize) -> Graph {
    let mut slots = Vec::new();
    for i in 1..vertices {
        slots.push(Slot::Edge(rng.gen_range(0..i), i));
    }
    for _ in 0..extra {
        let (i, j) = (rng.gen_range(0..vertices), rng.gen_range(0..vertices));
        slots.push(Slot::Edge(i.min(j), i.max(j)));
    }
    for _ in 0..legs {
        slots.push(Slot::Leg(rng.gen_range(0..vertices)));
    }
    build(vertices, &slots)
}

/// All involutive colorings of the arcs of `g`.
pub fn colorings(g: &Graph, colors: &InvolutiveSet) -> Vec<ColoredGraph> {
    let cs: Vec<&Name> = colors.elements().collect();
    let classes = g.arc_classes();
    if classes.is_empty() {
        return vec![ColoredGraph { graph: g.clone(), zeta: BTreeMap::new() }];
    }
    classes
        .iter()
        .map(|_| cs.iter())
        .multi_cartesian_product()
        .map(|choice| {
            let mut zeta = BTreeMap::new();
            for ((a, b), c) in classes.iter().zip(choice) {
                zeta.insert(a.clone(), (*c).clone());
                zeta.insert(b.clone(), colors.dagger(c).unwrap().clone());
            }
            ColoredGraph { graph: g.clone(), zeta }
        })
        .collect()
}

pub fn random_coloring(rng: &mut impl Rng, g: &Graph, colors: &InvolutiveSet) -> ColoredGraph {
    let cs: Vec<&Name> = colors.elements().collect();
    let mut zeta = BTreeMap::new();
    for (a, b) in g.arc_classes() {
        let c = *cs.choose(rng).unwrap();
        zeta.insert(a, c.clone());
        zeta.insert(b, colors.dagger(c).unwrap().clone());
    }
    ColoredGraph { graph: g.clone(), zeta }
}

/// The boundary ordering that names each boundary arc by itself.
pub fn identity_order(shape: &ColoredGraph) -> (BTreeMap<Name, Name>, ColoredObject) {
    let bd = shape.graph.boundary();
    let order = bd.iter().map(|a| (a.clone(), a.clone())).collect();
    let profile = ColoredObject::new(bd.iter().map(|a| (a.clone(), shape.zeta[a].clone())).collect());
    (order, profile)
}

/// Decorates every vertex with an opaque label `x<vertex>`, for monad-law checks.
pub fn label_decorated(shape: ColoredGraph) -> DecoratedGraph {
    let (order, profile) = identity_order(&shape);
    let decos = shape.graph.vertices().iter().map(|w| (w.clone(), Deco::Atom(format!("x{w}")))).collect();
    DecoratedGraph { shape, order, profile, decorations: decos }
}

/// All decorations of `shape` by operations of `p`, at most `limit` of them.
pub fn decorations(p: &dyn Operad, shape: &ColoredGraph, limit: usize) -> Vec<DecoratedGraph> {
    let (order, profile) = identity_order(shape);
    let base = DecoratedGraph { shape: shape.clone(), order, profile, decorations: BTreeMap::new() };
    let vs: Vec<Name> = shape.graph.vertices().iter().cloned().collect();
    let mut fibers = Vec::new();
    for w in &vs {
        match p.fiber(&base.vertex_profile(w)) {
            Ok(f) if !f.is_empty() => fibers.push(f),
            _ => return Vec::new(),
        }
    }
    if vs.is_empty() {
        return vec![base];
    }
    fibers
        .iter()
        .map(|f| f.iter())
        .multi_cartesian_product()
        .take(limit)
        .map(|xs| {
            let mut d = base.clone();
            d.decorations = vs.iter().cloned().zip(xs.into_iter().map(|x| Deco::Atom(x.clone()))).collect();
            d
        })
        .collect()
}

/// A random decorated shape over `p` with at most `max_vertices` vertices whose vertex
/// profiles have at most `max_valence` colors, or `None` after repeated empty fibers.
pub fn random_decorated(rng: &mut impl Rng, p: &dyn Operad, max_vertices: usize, max_valence: usize) -> Option<DecoratedGraph> {
    for _ in 0..200 {
        let n = rng.gen_range(1..=max_vertices);
        let extra = rng.gen_range(0..=2);
        let legs = rng.gen_range(0..=3);
        let g = random_connected_graph(rng, n, extra, legs);
        if g.vertices().iter().any(|v| g.valence(v) > max_valence) {
            continue;
        }
        let shape = random_coloring(rng, &g, p.colors());
        let (order, profile) = identity_order(&shape);
        let mut d = DecoratedGraph { shape, order, profile, decorations: BTreeMap::new() };
        let mut ok = true;
        for w in g.vertices() {
            match p.fiber(&d.vertex_profile(w)) {
                Ok(f) if !f.is_empty() => {
                    d.decorations.insert(w.clone(), Deco::Atom(f.choose(rng).unwrap().clone()));
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(d);
        }
    }
    None
}

/// Two-level decorations: one per connected partition of the vertices.
pub fn two_level(d: &DecoratedGraph) -> Vec<DecoratedGraph> {
    connected_partitions(d).iter().filter_map(|b| split(d, b).ok()).collect()
}

/// Three-level decorations: a two-level cut followed by a cut of its outer shape.
pub fn three_level(d: &DecoratedGraph) -> Vec<DecoratedGraph> {
    two_level(d).iter().flat_map(two_level).collect()
}

/// Involutive color sets with at most `n` elements, one per shape of involution.
pub fn color_sets(n: usize) -> Vec<InvolutiveSet> {
    let mut out = Vec::new();
    for pairs in 0..=n / 2 {
        for fixed in 0..=n - 2 * pairs {
            if pairs + fixed == 0 {
                continue;
            }
            let mut classes: Vec<Vec<String>> = (0..pairs).map(|i| vec![format!("c{i}"), format!("c{i}*")]).collect();
            classes.extend((0..fixed).map(|i| vec![format!("d{i}")]));
            out.push(InvolutiveSet::from_classes(&classes).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::collections::BTreeSet;

    #[test]
    fn small_catalog_counts() {
        // the edge; then star0, star1, star2, one loop, a loop with a leg, two loops
        let gs = connected_safe_graphs(1, 4);
        assert_eq!(gs.len(), 7);
        let codes: BTreeSet<String> = gs.iter().map(graph_code).collect();
        assert_eq!(codes.len(), gs.len());
    }

    #[test]
    fn random_graphs_are_connected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_connected_graph(&mut rng, 4, 2, 2);
            assert!(g.is_connected() && g.is_safe());
        }
    }

    #[test]
    fn colorings_count() {
        let cs = InvolutiveSet::parse("colors: a a* ; b").unwrap();
        assert_eq!(colorings(&crate::graph::linear(2), &cs).len(), 27);
    }
}
