//! Graph isomorphisms by backtracking and canonical certificates by minimization over vertex orders.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::graph::{ColoredGraph, Graph};
use crate::involutive::Name;

/// An arc bijection and a vertex bijection between two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphIso {
    pub arcs: BTreeMap<Name, Name>,
    pub vertices: BTreeMap<Name, Name>,
}

impl GraphIso {
    pub fn identity(g: &Graph) -> GraphIso {
        GraphIso {
            arcs: g.arcs().map(|a| (a.clone(), a.clone())).collect(),
            vertices: g.vertices().iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    /// `self` after `first`.
    pub fn after(&self, first: &GraphIso) -> GraphIso {
        GraphIso {
            arcs: first.arcs.iter().map(|(a, b)| (a.clone(), self.arcs[b].clone())).collect(),
            vertices: first.vertices.iter().map(|(a, b)| (a.clone(), self.vertices[b].clone())).collect(),
        }
    }

    pub fn inverse(&self) -> GraphIso {
        GraphIso {
            arcs: self.arcs.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            vertices: self.vertices.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }
}

/// Checks every condition on a candidate isomorphism directly.
pub fn is_isomorphism(g: &Graph, h: &Graph, z: &GraphIso) -> bool {
    let arcs_bij = z.arcs.len() == g.num_arcs()
        && g.arcs().all(|a| z.arcs.get(a).is_some_and(|b| h.has_arc(b)))
        && z.arcs.values().collect::<BTreeSet<_>>().len() == h.num_arcs();
    let verts_bij = z.vertices.len() == g.vertices().len()
        && g.vertices().iter().all(|v| z.vertices.get(v).is_some_and(|u| h.vertices().contains(u)))
        && z.vertices.values().collect::<BTreeSet<_>>().len() == h.vertices().len();
    if !arcs_bij || !verts_bij {
        return false;
    }
    g.arcs().all(|a| {
        let b = &z.arcs[a];
        z.arcs[g.inv(a)] == *h.inv(b)
            && g.is_boundary(a) == h.is_boundary(b)
            && match (g.target(a), h.target(b)) {
                (None, None) => true,
                (Some(v), Some(u)) => z.vertices[v] == *u,
                _ => false,
            }
    })
}

type Pred<'a> = &'a dyn Fn(&Name, &Name) -> bool;

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    arc_ok: Pred<'a>,
    vert_ok: Pred<'a>,
    first_only: bool,
    gverts: Vec<Name>,
    gnbhd: BTreeMap<Name, Vec<Name>>,
    hnbhd: BTreeMap<Name, Vec<Name>>,
    free_g: Vec<(Name, Name)>,
    free_h: Vec<(Name, Name)>,
    vmap: BTreeMap<Name, Name>,
    vused: BTreeSet<Name>,
    amap: BTreeMap<Name, Name>,
    aused: BTreeSet<Name>,
    out: Vec<GraphIso>,
}

impl<'a> Search<'a> {
    fn done(&self) -> bool {
        self.first_only && !self.out.is_empty()
    }

    fn vertex(&mut self, k: usize) {
        if self.done() {
            return;
        }
        if k == self.gverts.len() {
            self.free(0);
            return;
        }
        let v = self.gverts[k].clone();
        let cands: Vec<Name> = self.h.vertices().iter().cloned().collect();
        for u in cands {
            if self.vused.contains(&u)
                || self.gnbhd[&v].len() != self.hnbhd[&u].len()
                || !(self.vert_ok)(&v, &u)
            {
                continue;
            }
            self.vmap.insert(v.clone(), u.clone());
            self.vused.insert(u.clone());
            self.darts(k, &v, &u, 0);
            self.vmap.remove(&v);
            self.vused.remove(&u);
            if self.done() {
                return;
            }
        }
    }

    fn darts(&mut self, k: usize, v: &Name, u: &Name, j: usize) {
        if self.done() {
            return;
        }
        let ds = &self.gnbhd[v];
        if j == ds.len() {
            self.vertex(k + 1);
            return;
        }
        let d = ds[j].clone();
        if let Some(img) = self.amap.get(&d) {
            if self.h.target(img) == Some(u) {
                self.darts(k, v, u, j + 1);
            }
            return;
        }
        let cands = self.hnbhd[u].clone();
        for d2 in cands {
            if let Some(undo) = self.assign_pair(&d, &d2) {
                self.darts(k, v, u, j + 1);
                self.unassign(undo);
                if self.done() {
                    return;
                }
            }
        }
    }

    /// Maps `a -> b` and `i a -> i b`; returns the arcs newly assigned.
    fn assign_pair(&mut self, a: &Name, b: &Name) -> Option<Vec<Name>> {
        let (g, h) = (self.g, self.h);
        let pairs = [(a.clone(), b.clone()), (g.inv(a).clone(), h.inv(b).clone())];
        let mut added = Vec::new();
        for (x, y) in pairs {
            if let Some(cur) = self.amap.get(&x) {
                if *cur != y {
                    self.unassign(added);
                    return None;
                }
                continue;
            }
            let compatible = !self.aused.contains(&y)
                && (self.arc_ok)(&x, &y)
                && g.is_boundary(&x) == h.is_boundary(&y)
                && match (g.target(&x), h.target(&y)) {
                    (None, None) => true,
                    (Some(p), Some(q)) => self.vmap.get(p).is_none_or(|m| m == q),
                    _ => false,
                };
            if !compatible {
                self.unassign(added);
                return None;
            }
            self.amap.insert(x.clone(), y.clone());
            self.aused.insert(y);
            added.push(x);
        }
        Some(added)
    }

    fn unassign(&mut self, added: Vec<Name>) {
        for x in added {
            if let Some(y) = self.amap.remove(&x) {
                self.aused.remove(&y);
            }
        }
    }

    fn free(&mut self, j: usize) {
        if self.done() {
            return;
        }
        if j == self.free_g.len() {
            self.out.push(GraphIso { arcs: self.amap.clone(), vertices: self.vmap.clone() });
            return;
        }
        let (a, _) = self.free_g[j].clone();
        let cands = self.free_h.clone();
        for (c, d) in cands {
            for target in [&c, &d] {
                if let Some(undo) = self.assign_pair(&a, target) {
                    self.free(j + 1);
                    self.unassign(undo);
                    if self.done() {
                        return;
                    }
                }
            }
        }
    }
}

fn nbhd_lists(g: &Graph) -> BTreeMap<Name, Vec<Name>> {
    let mut m: BTreeMap<Name, Vec<Name>> = g.vertices().iter().map(|v| (v.clone(), Vec::new())).collect();
    for (d, v) in g.incidence() {
        m.get_mut(v).unwrap().push(d.clone());
    }
    m
}

fn free_classes(g: &Graph) -> Vec<(Name, Name)> {
    g.arc_classes().into_iter().filter(|(a, b)| !g.is_dart(a) && !g.is_dart(b)).collect()
}

fn quick_reject(g: &Graph, h: &Graph) -> bool {
    let valences = |x: &Graph| {
        let mut v: Vec<usize> = x.vertices().iter().map(|w| x.valence(w)).collect();
        v.sort();
        v
    };
    g.num_arcs() != h.num_arcs()
        || g.vertices().len() != h.vertices().len()
        || g.incidence().len() != h.incidence().len()
        || g.boundary().len() != h.boundary().len()
        || valences(g) != valences(h)
}

/// All isomorphisms `g -> h` whose arc and vertex assignments satisfy the given predicates.
pub fn isomorphisms_where(
    g: &Graph,
    h: &Graph,
    arc_ok: Pred<'_>,
    vert_ok: Pred<'_>,
    first_only: bool,
) -> Vec<GraphIso> {
    if quick_reject(g, h) {
        return Vec::new();
    }
    let mut s = Search {
        g,
        h,
        arc_ok,
        vert_ok,
        first_only,
        gverts: g.vertices().iter().cloned().collect(),
        gnbhd: nbhd_lists(g),
        hnbhd: nbhd_lists(h),
        free_g: free_classes(g),
        free_h: free_classes(h),
        vmap: BTreeMap::new(),
        vused: BTreeSet::new(),
        amap: BTreeMap::new(),
        aused: BTreeSet::new(),
        out: Vec::new(),
    };
    if s.free_g.len() != s.free_h.len() {
        return Vec::new();
    }
    s.vertex(0);
    s.out.sort();
    s.out
}

/// The complete sorted list of isomorphisms `g -> h`.
pub fn isomorphisms(g: &Graph, h: &Graph) -> Vec<GraphIso> {
    isomorphisms_where(g, h, &|_, _| true, &|_, _| true, false)
}

pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<GraphIso> {
    isomorphisms_where(g, h, &|_, _| true, &|_, _| true, true).pop()
}

/// Isomorphisms commuting with the colorings.
pub fn colored_isomorphisms(g: &ColoredGraph, h: &ColoredGraph) -> Vec<GraphIso> {
    let ok = |a: &Name, b: &Name| g.zeta.get(a) == h.zeta.get(b);
    isomorphisms_where(&g.graph, &h.graph, &ok, &|_, _| true, false)
}

/// Isomorphisms of colored graphs under `S`: `z o f = f'` on the boundary.
pub fn comma_isomorphisms(
    g: &ColoredGraph,
    f: &BTreeMap<Name, Name>,
    h: &ColoredGraph,
    f2: &BTreeMap<Name, Name>,
) -> Vec<GraphIso> {
    let finv: BTreeMap<&Name, &Name> = f.iter().map(|(s, a)| (a, s)).collect();
    let ok = |a: &Name, b: &Name| {
        g.zeta.get(a) == h.zeta.get(b)
            && finv.get(a).is_none_or(|s| f2.get(*s) == Some(b))
    };
    isomorphisms_where(&g.graph, &h.graph, &ok, &|_, _| true, false)
}

/// A certificate that is equal for two labeled graphs iff a label-preserving isomorphism exists.
/// Missing labels count as the empty string.
pub fn canonical_code(
    g: &Graph,
    arc_label: &BTreeMap<Name, String>,
    vertex_label: &BTreeMap<Name, String>,
) -> String {
    let al = |a: &Name| format!("{:?}", arc_label.get(a).map(String::as_str).unwrap_or(""));
    let vl = |v: &Name| format!("{:?}", vertex_label.get(v).map(String::as_str).unwrap_or(""));
    let nb = nbhd_lists(g);
    // Iterated refinement of vertex classes.
    let mut key: BTreeMap<Name, String> =
        g.vertices().iter().map(|v| (v.clone(), format!("{}#{}", vl(v), nb[v].len()))).collect();
    let rank_of = |key: &BTreeMap<Name, String>| {
        let sorted: Vec<&String> = key.values().collect::<BTreeSet<_>>().into_iter().collect();
        key.iter()
            .map(|(v, k)| (v.clone(), sorted.iter().position(|x| *x == k).unwrap()))
            .collect::<BTreeMap<Name, usize>>()
    };
    let mut classes = key.values().collect::<BTreeSet<_>>().len();
    loop {
        let rank = rank_of(&key);
        let next: BTreeMap<Name, String> = g
            .vertices()
            .iter()
            .map(|v| {
                let mut items: Vec<String> = nb[v]
                    .iter()
                    .map(|d| {
                        let p = g.inv(d);
                        match g.target(p) {
                            Some(u) => format!("E{}{}{}", al(d), rank[u], al(p)),
                            None => format!("L{}{}", al(d), al(p)),
                        }
                    })
                    .collect();
                items.sort();
                (v.clone(), format!("{}[{}]", key[v], items.join(",")))
            })
            .collect();
        let n = next.values().collect::<BTreeSet<_>>().len();
        key = next;
        if n == classes {
            break;
        }
        classes = n;
    }
    let rank = rank_of(&key);
    let mut groups: BTreeMap<usize, Vec<Name>> = BTreeMap::new();
    for (v, r) in &rank {
        groups.entry(*r).or_default().push(v.clone());
    }
    let mut free_items: Vec<String> = free_classes(g)
        .iter()
        .map(|(a, b)| {
            let mut l = [al(a), al(b)];
            l.sort();
            let kind = if g.is_boundary(a) { "F" } else { "O" };
            format!("{kind}{}|{}", l[0], l[1])
        })
        .collect();
    free_items.sort();
    let free_part = free_items.join(";");

    let group_perms: Vec<Vec<Vec<Name>>> = groups
        .values()
        .map(|vs| vs.iter().cloned().permutations(vs.len()).collect())
        .collect();
    let mut best: Option<String> = None;
    for choice in group_perms.iter().map(|p| p.iter()).multi_cartesian_product() {
        let order: Vec<&Name> = choice.iter().flat_map(|p| p.iter()).collect();
        let pos: BTreeMap<&Name, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut items: Vec<String> = Vec::new();
        for (a, b) in g.arc_classes() {
            match (g.target(&a), g.target(&b)) {
                (Some(x), Some(y)) => {
                    let mut ends = [(pos[x], al(&a)), (pos[y], al(&b))];
                    ends.sort();
                    items.push(format!("E{}:{}|{}:{}", ends[0].0, ends[0].1, ends[1].0, ends[1].1));
                }
                (Some(x), None) => items.push(format!("L{}:{}|{}", pos[x], al(&a), al(&b))),
                (None, Some(y)) => items.push(format!("L{}:{}|{}", pos[y], al(&b), al(&a))),
                (None, None) => {}
            }
        }
        items.sort();
        let vlabels: Vec<String> = order.iter().map(|v| vl(v)).collect();
        let code = format!("V{}({})I({})F({})", order.len(), vlabels.join(","), items.join(";"), free_part);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_else(|| format!("V0()I()F({free_part})"))
}

/// Certificate of an unlabeled graph.
pub fn graph_code(g: &Graph) -> String {
    canonical_code(g, &BTreeMap::new(), &BTreeMap::new())
}

/// Certificate of a colored graph.
pub fn colored_code(g: &ColoredGraph) -> String {
    canonical_code(&g.graph, &g.zeta, &BTreeMap::new())
}
