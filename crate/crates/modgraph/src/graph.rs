//! Graphs with boundary: arcs under a free involution, darts incident to vertices, and a boundary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::involutive::{dagger_names, InvolutiveSet, Name};

/// Arc names of the exceptional edge.
pub const EDGE_MAJOR: &str = "e";
pub const EDGE_MINOR: &str = "e*";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("arc `{0}` is its own involution partner")]
    FixedArc(Name),
    #[error("arc `{0}` appears in more than one involution class")]
    DuplicateArc(Name),
    #[error("dart `{0}` is not an arc")]
    DartNotArc(Name),
    #[error("dart `{0}` is attached to more than one vertex")]
    DuplicateDart(Name),
    #[error("vertex `{0}` is declared twice")]
    DuplicateVertex(Name),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Name),
    #[error("boundary arc `{0}` is not an arc")]
    BoundaryNotArc(Name),
    #[error("boundary arc `{0}` is a dart")]
    BoundaryMeetsDarts(Name),
    #[error("partner of dart `{0}` is neither a dart nor in the boundary")]
    AxiomC(Name),
    #[error("boundary arc `{0}` is not closed under the involution")]
    AxiomD(Name),
}

/// A graph: arcs `A` with a fixed-point-free involution, darts `D` with incidence `t: D -> V`,
/// and a boundary contained in `A \ D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    inv: BTreeMap<Name, Name>,
    tgt: BTreeMap<Name, Name>,
    vertices: BTreeSet<Name>,
    boundary: BTreeSet<Name>,
}

fn owned<S: AsRef<str>>(s: &S) -> Name {
    s.as_ref().to_string()
}

impl Graph {
    /// Builds and validates a graph. `boundary = None` makes the graph safe.
    pub fn new<S: AsRef<str>>(
        arc_pairs: &[(S, S)],
        vertices: &[S],
        incidence: &[(S, S)],
        boundary: Option<&[S]>,
    ) -> Result<Graph, GraphError> {
        let mut inv = BTreeMap::new();
        for (a, b) in arc_pairs {
            let (a, b) = (owned(a), owned(b));
            if a == b {
                return Err(GraphError::FixedArc(a));
            }
            for x in [&a, &b] {
                if inv.contains_key(x) {
                    return Err(GraphError::DuplicateArc(x.clone()));
                }
            }
            inv.insert(a.clone(), b.clone());
            inv.insert(b, a);
        }
        let mut vset = BTreeSet::new();
        for v in vertices {
            if !vset.insert(owned(v)) {
                return Err(GraphError::DuplicateVertex(owned(v)));
            }
        }
        let mut tgt = BTreeMap::new();
        for (d, v) in incidence {
            if tgt.insert(owned(d), owned(v)).is_some() {
                return Err(GraphError::DuplicateDart(owned(d)));
            }
        }
        let boundary: Option<BTreeSet<Name>> = boundary.map(|b| b.iter().map(owned).collect());
        Graph::from_parts(inv, tgt, vset, boundary)
    }

    /// Builds from explicit maps, validating every axiom.
    pub fn from_parts(
        inv: BTreeMap<Name, Name>,
        tgt: BTreeMap<Name, Name>,
        vertices: BTreeSet<Name>,
        boundary: Option<BTreeSet<Name>>,
    ) -> Result<Graph, GraphError> {
        for (a, b) in &inv {
            if a == b {
                return Err(GraphError::FixedArc(a.clone()));
            }
            if inv.get(b) != Some(a) {
                return Err(GraphError::DuplicateArc(b.clone()));
            }
        }
        for (d, v) in &tgt {
            if !inv.contains_key(d) {
                return Err(GraphError::DartNotArc(d.clone()));
            }
            if !vertices.contains(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
        }
        let boundary = match boundary {
            Some(b) => b,
            None => inv.keys().filter(|a| !tgt.contains_key(*a)).cloned().collect(),
        };
        let g = Graph { inv, tgt, vertices, boundary };
        g.validate()?;
        Ok(g)
    }

    /// Checks the boundary containment and axioms C and D.
    pub fn validate(&self) -> Result<(), GraphError> {
        for a in &self.boundary {
            if !self.inv.contains_key(a) {
                return Err(GraphError::BoundaryNotArc(a.clone()));
            }
            if self.tgt.contains_key(a) {
                return Err(GraphError::BoundaryMeetsDarts(a.clone()));
            }
        }
        for d in self.tgt.keys() {
            let p = &self.inv[d];
            if !self.tgt.contains_key(p) && !self.boundary.contains(p) {
                return Err(GraphError::AxiomC(d.clone()));
            }
        }
        for a in &self.boundary {
            let p = &self.inv[a];
            if !self.tgt.contains_key(p) && !self.boundary.contains(p) {
                return Err(GraphError::AxiomD(a.clone()));
            }
        }
        Ok(())
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Name> {
        self.inv.keys()
    }

    pub fn arc_set(&self) -> BTreeSet<Name> {
        self.inv.keys().cloned().collect()
    }

    pub fn num_arcs(&self) -> usize {
        self.inv.len()
    }

    pub fn involution(&self) -> InvolutiveSet {
        InvolutiveSet::from_map_unchecked(self.inv.clone())
    }

    pub fn inv_map(&self) -> &BTreeMap<Name, Name> {
        &self.inv
    }

    pub fn inv(&self, a: &str) -> &Name {
        &self.inv[a]
    }

    pub fn has_arc(&self, a: &str) -> bool {
        self.inv.contains_key(a)
    }

    pub fn darts(&self) -> impl Iterator<Item = &Name> {
        self.tgt.keys()
    }

    pub fn incidence(&self) -> &BTreeMap<Name, Name> {
        &self.tgt
    }

    pub fn is_dart(&self, a: &str) -> bool {
        self.tgt.contains_key(a)
    }

    pub fn target(&self, d: &str) -> Option<&Name> {
        self.tgt.get(d)
    }

    pub fn vertices(&self) -> &BTreeSet<Name> {
        &self.vertices
    }

    pub fn boundary(&self) -> &BTreeSet<Name> {
        &self.boundary
    }

    pub fn is_boundary(&self, a: &str) -> bool {
        self.boundary.contains(a)
    }

    /// `t^{-1}(v)`.
    pub fn nbhd(&self, v: &str) -> BTreeSet<Name> {
        self.tgt.iter().filter(|(_, w)| *w == v).map(|(d, _)| d.clone()).collect()
    }

    /// `i(nbhd(v))`, the arcs pointing away from `v`.
    pub fn out_arcs(&self, v: &str) -> BTreeSet<Name> {
        self.nbhd(v).iter().map(|d| self.inv[d].clone()).collect()
    }

    pub fn valence(&self, v: &str) -> usize {
        self.tgt.values().filter(|w| *w == v).count()
    }

    pub fn is_safe(&self) -> bool {
        self.inv.keys().all(|a| self.tgt.contains_key(a) || self.boundary.contains(a))
    }

    /// Connected as a diagram of finite sets: nonempty and a single component.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Components as (arcs, vertices) pairs in a deterministic order.
    pub fn components(&self) -> Vec<(BTreeSet<Name>, BTreeSet<Name>)> {
        let mut uf = UnionFind::default();
        for a in self.inv.keys() {
            uf.add(&format!("a:{a}"));
        }
        for v in &self.vertices {
            uf.add(&format!("v:{v}"));
        }
        for (a, b) in &self.inv {
            uf.union(&format!("a:{a}"), &format!("a:{b}"));
        }
        for (d, v) in &self.tgt {
            uf.union(&format!("a:{d}"), &format!("v:{v}"));
        }
        let mut comps: BTreeMap<String, (BTreeSet<Name>, BTreeSet<Name>)> = BTreeMap::new();
        for a in self.inv.keys() {
            comps.entry(uf.find(&format!("a:{a}"))).or_default().0.insert(a.clone());
        }
        for v in &self.vertices {
            comps.entry(uf.find(&format!("v:{v}"))).or_default().1.insert(v.clone());
        }
        let mut out: Vec<_> = comps.into_values().collect();
        out.sort();
        out
    }

    /// Internal edges `[x1, x2]` (both arcs darts), with `x1` the smaller name.
    pub fn internal_edges(&self) -> Vec<(Name, Name)> {
        self.tgt
            .keys()
            .filter_map(|x| {
                let y = &self.inv[x];
                (x < y && self.tgt.contains_key(y)).then(|| (x.clone(), y.clone()))
            })
            .collect()
    }

    /// Involution classes as (smaller, larger) pairs.
    pub fn arc_classes(&self) -> Vec<(Name, Name)> {
        self.inv
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect()
    }

    /// Isomorphic to the exceptional edge.
    pub fn is_edge(&self) -> bool {
        self.vertices.is_empty() && self.inv.len() == 2 && self.boundary.len() == 2
    }

    pub fn is_nodeless_loop(&self) -> bool {
        self.vertices.is_empty() && self.inv.len() == 2 && self.boundary.is_empty()
    }

    /// The same graph with a different boundary; validated.
    pub fn with_boundary(&self, boundary: BTreeSet<Name>) -> Result<Graph, GraphError> {
        Graph::from_parts(self.inv.clone(), self.tgt.clone(), self.vertices.clone(), Some(boundary))
    }

    /// Renames arcs and vertices; both maps must be injective on their domains.
    pub fn rename(&self, arcs: &BTreeMap<Name, Name>, verts: &BTreeMap<Name, Name>) -> Graph {
        let ra = |a: &Name| arcs.get(a).cloned().unwrap_or_else(|| a.clone());
        let rv = |v: &Name| verts.get(v).cloned().unwrap_or_else(|| v.clone());
        Graph {
            inv: self.inv.iter().map(|(a, b)| (ra(a), ra(b))).collect(),
            tgt: self.tgt.iter().map(|(d, v)| (ra(d), rv(v))).collect(),
            vertices: self.vertices.iter().map(rv).collect(),
            boundary: self.boundary.iter().map(ra).collect(),
        }
    }

    /// Writes the graph in the line-oriented file format.
    pub fn to_file_string(&self, name: &str) -> String {
        let mut s = format!("graph {name}\n");
        let classes: Vec<String> = self.arc_classes().iter().map(|(a, b)| format!("{a} {b}")).collect();
        s.push_str(&format!("arcs: {}\n", classes.join(" ; ")));
        let vs: Vec<&str> = self.vertices.iter().map(|v| v.as_str()).collect();
        s.push_str(&format!("vertices: {}\n", vs.join(" ")));
        for v in &self.vertices {
            let n: Vec<Name> = self.nbhd(v).into_iter().collect();
            s.push_str(&format!("nbhd {v}: {}\n", n.join(" ")));
        }
        let b: Vec<&str> = self.boundary.iter().map(|a| a.as_str()).collect();
        s.push_str(&format!("boundary: {}\n", b.join(" ")));
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_file_string("G"))
    }
}

#[derive(Default)]
struct UnionFind {
    parent: BTreeMap<String, String>,
}

impl UnionFind {
    fn add(&mut self, x: &str) {
        self.parent.entry(x.to_string()).or_insert_with(|| x.to_string());
    }
    fn find(&mut self, x: &str) -> String {
        let p = self.parent[x].clone();
        if p == x {
            return p;
        }
        let r = self.find(&p);
        self.parent.insert(x.to_string(), r.clone());
        r
    }
    fn union(&mut self, a: &str, b: &str) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }
}

/// A graph with an involutive coloring of its arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredGraph {
    pub graph: Graph,
    pub zeta: BTreeMap<Name, Name>,
}

impl ColoredGraph {
    /// Checks totality and `zeta(i a) = zeta(a)^dagger`.
    pub fn new(graph: Graph, zeta: BTreeMap<Name, Name>, colors: &InvolutiveSet) -> Result<Self, String> {
        for a in graph.arcs() {
            let c = zeta.get(a).ok_or_else(|| format!("arc `{a}` has no color"))?;
            let cd = colors.dagger(c).ok_or_else(|| format!("unknown color `{c}`"))?;
            if zeta.get(graph.inv(a)) != Some(cd) {
                return Err(format!("coloring is not involutive at arc `{a}`"));
            }
        }
        Ok(ColoredGraph { graph, zeta })
    }
}

// Standard graphs.

/// The exceptional edge: two arcs, no vertices, full boundary.
pub fn edge() -> Graph {
    Graph::new(&[(EDGE_MAJOR, EDGE_MINOR)], &[], &[], None).unwrap()
}

/// The nodeless loop: two arcs, no vertices, empty boundary.
pub fn nodeless_loop() -> Graph {
    Graph::new(&[(EDGE_MAJOR, EDGE_MINOR)], &[], &[], Some(&[])).unwrap()
}

/// The star on `S`: one vertex `v`, arcs `2S`, darts `S^dagger`, boundary `S`.
pub fn star_of(s: &BTreeSet<Name>) -> Graph {
    let d = dagger_names(s.iter());
    let inv: BTreeMap<Name, Name> =
        d.iter().flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())]).collect();
    let tgt = d.values().map(|b| (b.clone(), "v".to_string())).collect();
    Graph::from_parts(inv, tgt, ["v".to_string()].into(), Some(s.clone())).unwrap()
}

/// The n-star: darts `1..n`, boundary `1*..n*`.
pub fn star(n: usize) -> Graph {
    let pairs: Vec<(String, String)> = (1..=n).map(|k| (k.to_string(), format!("{k}*"))).collect();
    let inc: Vec<(String, String)> = (1..=n).map(|k| (k.to_string(), "v".to_string())).collect();
    Graph::new(&pairs, &["v".to_string()], &inc, None).unwrap()
}

/// The star of a vertex together with the arc map of its canonical embedding.
/// Darts keep their names; their formal daggers form the boundary.
pub fn star_of_vertex(g: &Graph, v: &str) -> Result<(Graph, BTreeMap<Name, Name>), GraphError> {
    if !g.vertices().contains(v) {
        return Err(GraphError::UnknownVertex(v.to_string()));
    }
    let nb = g.nbhd(v);
    let mut used: BTreeSet<Name> = nb.clone();
    used.extend(g.arcs().cloned());
    let d = dagger_names(used.iter());
    let mut inv = BTreeMap::new();
    let mut iota = BTreeMap::new();
    let mut boundary = BTreeSet::new();
    for x in &nb {
        let xd = d[x].clone();
        inv.insert(x.clone(), xd.clone());
        inv.insert(xd.clone(), x.clone());
        iota.insert(x.clone(), x.clone());
        iota.insert(xd.clone(), g.inv(x).clone());
        boundary.insert(xd);
    }
    let tgt = nb.iter().map(|x| (x.clone(), v.to_string())).collect();
    let s = Graph::from_parts(inv, tgt, [v.to_string()].into(), Some(boundary))?;
    Ok((s, iota))
}

/// `star_G = star_{boundary(G)}`.
pub fn star_of_graph(g: &Graph) -> Graph {
    star_of(g.boundary())
}

/// Linear graph with `n >= 1` vertices `v0..`, internal edges between consecutive vertices,
/// and one leg at each end.
pub fn linear(n: usize) -> Graph {
    assert!(n >= 1);
    let mut pairs = vec![("l0".to_string(), "l0*".to_string())];
    let mut inc = vec![("l0".to_string(), "v0".to_string())];
    for k in 1..n {
        let (a, b) = (format!("x{k}"), format!("y{k}"));
        inc.push((a.clone(), format!("v{}", k - 1)));
        inc.push((b.clone(), format!("v{k}")));
        pairs.push((a, b));
    }
    pairs.push(("l1".to_string(), "l1*".to_string()));
    inc.push(("l1".to_string(), format!("v{}", n - 1)));
    let vs: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    Graph::new(&pairs, &vs, &inc, None).unwrap()
}

/// Cycle with `n >= 1` vertices and no boundary; `cycle(1)` is a loop at one vertex.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 1);
    let mut pairs = Vec::new();
    let mut inc = Vec::new();
    for k in 0..n {
        let (a, b) = (format!("x{k}"), format!("y{k}"));
        inc.push((a.clone(), format!("v{k}")));
        inc.push((b.clone(), format!("v{}", (k + 1) % n)));
        pairs.push((a, b));
    }
    let vs: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
    Graph::new(&pairs, &vs, &inc, None).unwrap()
}

/// The 4-cycle `v0, w0, v1, w1` whose edges carry labels 1 and 2 alternately.
pub fn square_cover() -> Graph {
    let e = [("1", "v0", "w0"), ("1", "v1", "w1"), ("2", "v1", "w0"), ("2", "v0", "w1")];
    let mut pairs = Vec::new();
    let mut inc = Vec::new();
    for (l, a, b) in e {
        let (x, y) = (format!("{l}{a}"), format!("{l}{b}"));
        inc.push((x.clone(), a.to_string()));
        inc.push((y.clone(), b.to_string()));
        pairs.push((x, y));
    }
    let vs: Vec<String> = ["v0", "v1", "w0", "w1"].iter().map(|s| s.to_string()).collect();
    Graph::new(&pairs, &vs, &inc, None).unwrap()
}

/// Two vertices `v, w` joined by edges labeled 1 and 2.
pub fn double_edge() -> Graph {
    Graph::new(
        &[("1v", "1w"), ("2v", "2w")],
        &["v", "w"],
        &[("1v", "v"), ("2v", "v"), ("1w", "w"), ("2w", "w")],
        None,
    )
    .unwrap()
}

/// The arc and vertex maps of the double cover `square_cover -> double_edge`.
pub fn square_covering() -> (BTreeMap<Name, Name>, BTreeMap<Name, Name>) {
    let g = square_cover();
    let arcs = g.arcs().map(|a| (a.clone(), a[..2].to_string())).collect();
    let verts = g.vertices().iter().map(|v| (v.clone(), v[..1].to_string())).collect();
    (arcs, verts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_graphs_validate() {
        assert!(edge().is_safe() && edge().is_connected() && edge().is_edge());
        let l = nodeless_loop();
        assert!(!l.is_safe() && l.is_connected() && l.is_nodeless_loop());
        for n in 0..=6 {
            let s = star(n);
            assert!(s.is_safe() && s.is_connected());
            assert_eq!(s.boundary().len(), n);
            assert!(s.internal_edges().is_empty());
        }
        assert!(star(0).arcs().next().is_none());
        assert_eq!(double_edge().internal_edges().len(), 2);
        assert_eq!(linear(2).internal_edges().len(), 1);
        assert!(square_cover().is_connected());
    }

    #[test]
    fn disjoint_edges_are_disconnected() {
        let g = Graph::new(&[("a", "a*"), ("b", "b*")], &[], &[], None).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.components().len(), 2);
    }

    #[test]
    fn vertex_star_of_a_loop_cuts_it_open() {
        let c = cycle(1);
        let (s, iota) = star_of_vertex(&c, "v0").unwrap();
        assert_eq!(s.num_arcs(), 4);
        assert_eq!(s.boundary().len(), 2);
        let images: BTreeSet<&Name> = iota.values().collect();
        assert_eq!(images.len(), 2);
    }

    #[test]
    fn covering_data() {
        let (a, v) = square_covering();
        assert_eq!(a["1v0"], "1v");
        assert_eq!(a["2w1"], "2w");
        assert_eq!(v["w1"], "w");
    }
}
