//! Finite operads presented by tables on elementary shapes, with trivial bijection action.
//! The structure map contracts internal edges one at a time.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::decorated::{gamma_inside, monad_mult, monad_unit};
use super::{Deco, DecoratedGraph, Elem, Operad, OperadError};
use crate::involutive::{ColoredObject, InvolutiveSet, Name};

/// A finite operad. Fibers are keyed by the sorted color multiset of a profile, so the action
/// of bijections is trivial; `comp` is keyed with its smaller side first, `contr` and `loops`
/// by the smaller color of a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabulatedOperad {
    pub name: String,
    pub colors: InvolutiveSet,
    pub arity_bound: usize,
    pub fibers: BTreeMap<Vec<Name>, Vec<Elem>>,
    pub units: BTreeMap<Name, Elem>,
    pub comp: BTreeMap<(Elem, Name, Elem), Elem>,
    pub contr: BTreeMap<(Elem, Name), Elem>,
    pub loops: BTreeMap<Name, Elem>,
}

fn pair_key(colors: &InvolutiveSet, c: &Name) -> Name {
    let d = colors.dagger(c).unwrap_or(c);
    if d < c { d.clone() } else { c.clone() }
}

/// All sorted color multisets of size at most `n`.
pub fn multisets_up_to(colors: &InvolutiveSet, n: usize) -> Vec<Vec<Name>> {
    let cs: Vec<Name> = colors.elements().cloned().collect();
    (0..=n).flat_map(|k| cs.iter().cloned().combinations_with_replacement(k).collect::<Vec<_>>()).collect()
}

impl TabulatedOperad {
    fn key(profile: &ColoredObject) -> Vec<Name> {
        let mut m = profile.color_multiset();
        m.sort();
        m
    }

    pub fn comp_key(&self, x: &Elem, c: &Name, y: &Elem) -> (Elem, Name, Elem) {
        let cd = self.colors.dagger(c).cloned().unwrap_or_else(|| c.clone());
        if (x, c) <= (y, &cd) {
            (x.clone(), c.clone(), y.clone())
        } else {
            (y.clone(), cd, x.clone())
        }
    }

    pub fn unit(&self, c: &Name) -> Result<&Elem, OperadError> {
        self.units.get(&pair_key(&self.colors, c)).ok_or_else(|| OperadError::MissingEntry(format!("unit {c}")))
    }

    /// Composite along an edge whose end at `x` is colored `c` and at `y` is colored `c^dagger`.
    pub fn compose(&self, x: &Elem, c: &Name, y: &Elem) -> Result<&Elem, OperadError> {
        let k = self.comp_key(x, c, y);
        self.comp.get(&k).ok_or_else(|| OperadError::MissingEntry(format!("comp {} {} {}", k.0, k.1, k.2)))
    }

    pub fn contract(&self, x: &Elem, c: &Name) -> Result<&Elem, OperadError> {
        let k = (x.clone(), pair_key(&self.colors, c));
        self.contr.get(&k).ok_or_else(|| OperadError::MissingEntry(format!("contr {} {}", k.0, k.1)))
    }

    pub fn nodeless_loop(&self, c: &Name) -> Result<&Elem, OperadError> {
        self.loops.get(&pair_key(&self.colors, c)).ok_or_else(|| OperadError::MissingEntry(format!("loop {c}")))
    }

    /// Builds a table from rules on color multisets. The composition rules receive the full
    /// multisets of both sides and the glued color.
    pub fn from_rules(
        name: &str,
        colors: InvolutiveSet,
        arity_bound: usize,
        fiber: impl Fn(&[Name]) -> Vec<Elem>,
        unit: impl Fn(&Name) -> Elem,
        comp: impl Fn(&Elem, &Elem) -> Elem,
        contr: impl Fn(&Elem) -> Elem,
        lp: impl Fn(&Name) -> Elem,
    ) -> TabulatedOperad {
        let mut p = TabulatedOperad {
            name: name.to_string(),
            colors: colors.clone(),
            arity_bound,
            fibers: BTreeMap::new(),
            units: BTreeMap::new(),
            comp: BTreeMap::new(),
            contr: BTreeMap::new(),
            loops: BTreeMap::new(),
        };
        for m in multisets_up_to(&colors, arity_bound) {
            let f = fiber(&m);
            p.fibers.insert(m, f);
        }
        for c in colors.elements() {
            let k = pair_key(&colors, c);
            p.units.insert(k.clone(), unit(&k));
            p.loops.insert(k.clone(), lp(&k));
        }
        let elems: BTreeSet<Elem> = p.fibers.values().flatten().cloned().collect();
        for x in &elems {
            for c in colors.elements() {
                p.contr.insert((x.clone(), pair_key(&colors, c)), contr(x));
                for y in &elems {
                    let k = p.comp_key(x, c, y);
                    p.comp.insert(k, comp(x, y));
                }
            }
        }
        p
    }

    /// Every fiber a single point.
    pub fn terminal(colors: InvolutiveSet, arity_bound: usize) -> TabulatedOperad {
        let pt = || "*".to_string();
        Self::from_rules("terminal", colors, arity_bound, |_| vec![pt()], |_| pt(), |_, _| pt(), |_| pt(), |_| pt())
    }

    /// One self-dual color; an operation is a genus in `Z/m`. Gluing two vertices adds genera;
    /// closing a loop adds one.
    pub fn genus_mod(m: usize, arity_bound: usize) -> TabulatedOperad {
        let colors = InvolutiveSet::from_classes(&[vec!["c"]]).unwrap();
        let g = |k: usize| format!("g{}", k % m);
        let val = |x: &Elem| x[1..].parse::<usize>().unwrap();
        Self::from_rules(
            &format!("genus-mod-{m}"),
            colors,
            arity_bound,
            |_| (0..m).map(g).collect(),
            |_| g(0),
            |x, y| g(val(x) + val(y)),
            |x| g(val(x) + 1),
            |_| g(1),
        )
    }

    /// Colors `+` and `-` dual to each other; a single operation exactly when charges cancel.
    pub fn charge(arity_bound: usize) -> TabulatedOperad {
        let colors = InvolutiveSet::from_classes(&[vec!["+", "-"]]).unwrap();
        let pt = || "*".to_string();
        let balanced = |m: &[Name]| {
            let plus = m.iter().filter(|c| *c == "+").count();
            if 2 * plus == m.len() { vec![pt()] } else { vec![] }
        };
        Self::from_rules("charge", colors, arity_bound, balanced, |_| pt(), |_, _| pt(), |_| pt(), |_| pt())
    }

    /// Two self-dual colors `a` and `b`; a single operation exactly when `a` occurs evenly.
    pub fn parity(arity_bound: usize) -> TabulatedOperad {
        let colors = InvolutiveSet::from_classes(&[vec!["a"], vec!["b"]]).unwrap();
        let pt = || "*".to_string();
        let even = |m: &[Name]| {
            if m.iter().filter(|c| *c == "a").count() % 2 == 0 { vec![pt()] } else { vec![] }
        };
        Self::from_rules("parity", colors, arity_bound, even, |_| pt(), |_, _| pt(), |_| pt(), |_| pt())
    }

    /// Sorted fiber over a color multiset.
    pub fn fiber_of(&self, m: &[Name]) -> Result<Vec<Elem>, OperadError> {
        if m.len() > self.arity_bound {
            return Err(OperadError::ArityBeyondTable(m.len()));
        }
        let mut k = m.to_vec();
        k.sort();
        Ok(self.fibers.get(&k).cloned().unwrap_or_default())
    }
}

impl Operad for TabulatedOperad {
    fn colors(&self) -> &InvolutiveSet {
        &self.colors
    }

    fn fiber(&self, profile: &ColoredObject) -> Result<Vec<Elem>, OperadError> {
        self.fiber_of(&Self::key(profile))
    }

    fn relabel(&self, x: &Elem, from: &ColoredObject, _: &BTreeMap<Name, Name>, to: &ColoredObject) -> Result<Elem, OperadError> {
        if Self::key(from) != Self::key(to) {
            return Err(OperadError::ColorMismatch(format!("{from} vs {to}")));
        }
        Ok(x.clone())
    }

    fn gamma(&self, d: &DecoratedGraph) -> Result<Elem, OperadError> {
        biased_gamma(self, d)
    }
}

/// Evaluates by contracting internal edges one at a time, in every order, and fails with
/// `OrderDependence` when two orders disagree.
pub fn biased_gamma(p: &TabulatedOperad, d: &DecoratedGraph) -> Result<Elem, OperadError> {
    let g = &d.shape.graph;
    let zeta = &d.shape.zeta;
    if g.vertices().is_empty() {
        let a = g.arcs().next().ok_or_else(|| OperadError::Shape("empty graph".into()))?;
        return Ok(if g.boundary().is_empty() { p.nodeless_loop(&zeta[a])? } else { p.unit(&zeta[a])? }.clone());
    }
    let verts: Vec<&Name> = g.vertices().iter().collect();
    let idx: BTreeMap<&Name, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut elems = Vec::new();
    for w in &verts {
        let x = d.atom(w)?;
        let prof = d.vertex_profile(w);
        if p.fiber(&prof)?.binary_search(x).is_err() {
            return Err(OperadError::NotInFiber(x.clone()));
        }
        elems.push(x.clone());
    }
    // (end at u, end at v, color of the arc in the profile of u)
    let edges: Vec<(usize, usize, Name)> = g
        .internal_edges()
        .iter()
        .map(|(a, b)| (idx[g.target(a).unwrap()], idx[g.target(b).unwrap()], zeta[b].clone()))
        .collect();
    let mut results = BTreeSet::new();
    let mut first_err = None;
    for perm in (0..edges.len()).permutations(edges.len()) {
        match contract_in_order(p, &edges, &perm, elems.clone()) {
            Ok(x) => {
                results.insert(x);
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
        if results.len() > 1 {
            return Err(OperadError::OrderDependence(format!("{:?}", results)));
        }
    }
    match (results.into_iter().next(), first_err) {
        (Some(x), None) => {
            if p.fiber(&d.profile)?.binary_search(&x).is_err() {
                return Err(OperadError::NotInFiber(x));
            }
            Ok(x)
        }
        (Some(x), Some(e)) => Err(OperadError::OrderDependence(format!("{x} vs failure {e}"))),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!(),
    }
}

fn contract_in_order(
    p: &TabulatedOperad,
    edges: &[(usize, usize, Name)],
    perm: &[usize],
    mut elems: Vec<Elem>,
) -> Result<Elem, OperadError> {
    let mut rep: Vec<usize> = (0..elems.len()).collect();
    fn find(rep: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while rep[r] != r {
            r = rep[r];
        }
        rep[x] = r;
        r
    }
    for &e in perm {
        let (u, v, c) = &edges[e];
        let (ru, rv) = (find(&mut rep, *u), find(&mut rep, *v));
        if ru == rv {
            elems[ru] = p.contract(&elems[ru], c)?.clone();
        } else {
            elems[ru] = p.compose(&elems[ru], c, &elems[rv])?.clone();
            rep[rv] = ru;
        }
    }
    let r = find(&mut rep, 0);
    Ok(elems[r].clone())
}

/// `f*P`: colors pulled back along an involutive map `f0` from a new color set.
pub fn reindex(f0: &BTreeMap<Name, Name>, colors: InvolutiveSet, p: &TabulatedOperad) -> Result<TabulatedOperad, OperadError> {
    for c in colors.elements() {
        let img = f0.get(c).ok_or_else(|| OperadError::ColorMismatch(format!("`{c}` unmapped")))?;
        if p.colors.dagger(img) != f0.get(colors.dagger(c).unwrap()) {
            return Err(OperadError::ColorMismatch(format!("reindexing is not involutive at `{c}`")));
        }
    }
    let mut q = TabulatedOperad {
        name: format!("{}*", p.name),
        colors: colors.clone(),
        arity_bound: p.arity_bound,
        fibers: BTreeMap::new(),
        units: BTreeMap::new(),
        comp: BTreeMap::new(),
        contr: BTreeMap::new(),
        loops: BTreeMap::new(),
    };
    for m in multisets_up_to(&colors, p.arity_bound) {
        let img: Vec<Name> = m.iter().map(|c| f0[c].clone()).collect();
        q.fibers.insert(m, p.fiber_of(&img)?);
    }
    for c in colors.elements() {
        let k = pair_key(&colors, c);
        if let Ok(x) = p.unit(&f0[&k]) {
            q.units.insert(k.clone(), x.clone());
        }
        if let Ok(x) = p.nodeless_loop(&f0[&k]) {
            q.loops.insert(k.clone(), x.clone());
        }
    }
    let elems: BTreeSet<Elem> = q.fibers.values().flatten().cloned().collect();
    for x in &elems {
        for c in colors.elements() {
            if let Ok(z) = p.contract(x, &f0[c]) {
                q.contr.insert((x.clone(), pair_key(&colors, c)), z.clone());
            }
            for y in &elems {
                if let Ok(z) = p.compose(x, &f0[c], y) {
                    let k = q.comp_key(x, c, y);
                    q.comp.insert(k, z.clone());
                }
            }
        }
    }
    Ok(q)
}

/// Outcome of an algebra-law check with the first counterexample.
#[derive(Debug, Clone, Default)]
pub struct AlgebraReport {
    pub unit_checked: usize,
    pub heart_checked: usize,
    pub witness: Option<String>,
}

impl AlgebraReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `gamma o eta = id` on every element of every profile of size at most `arity`, and
/// `gamma o mu = gamma o T gamma` on the given two-level decorations.
pub fn check_algebra_laws(op: &dyn Operad, profiles: &[ColoredObject], nested: &[DecoratedGraph]) -> AlgebraReport {
    let mut r = AlgebraReport::default();
    for p in profiles {
        let Ok(fiber) = op.fiber(p) else { continue };
        for x in fiber {
            r.unit_checked += 1;
            let ok = monad_unit(&x, p, op.colors()).and_then(|u| op.gamma(&u)).is_ok_and(|y| y == x);
            if !ok && r.witness.is_none() {
                r.witness = Some(format!("unit law fails at {x} over {p}"));
            }
        }
    }
    for d in nested {
        r.heart_checked += 1;
        let lhs = monad_mult(d, op).and_then(|m| op.gamma(&m));
        let rhs = gamma_inside(d, op).and_then(|m| op.gamma(&m));
        if lhs != rhs && r.witness.is_none() {
            r.witness = Some(format!("associativity fails ({lhs:?} vs {rhs:?}) on\n{d}"));
        }
    }
    r
}

/// Cuts a decorated graph into the two-level decoration whose outer vertices are the given
/// connected blocks; substitution undoes the cut.
pub fn split(d: &DecoratedGraph, blocks: &[BTreeSet<Name>]) -> Result<DecoratedGraph, OperadError> {
    use crate::graph::{ColoredGraph, Graph};
    let g = &d.shape.graph;
    let block_of: BTreeMap<&Name, usize> =
        blocks.iter().enumerate().flat_map(|(i, b)| b.iter().map(move |w| (w, i))).collect();
    if block_of.len() != g.vertices().len() {
        return Err(OperadError::Shape("blocks do not partition the vertices".into()));
    }
    let internal = |a: &Name| {
        g.target(a).zip(g.target(g.inv(a))).is_some_and(|(u, v)| block_of[u] == block_of[v])
    };
    let mut decorations = BTreeMap::new();
    for (i, b) in blocks.iter().enumerate() {
        let darts: BTreeSet<Name> = g.incidence().iter().filter(|(_, w)| b.contains(*w)).map(|(a, _)| a.clone()).collect();
        let mut inv = BTreeMap::new();
        let mut bd = BTreeSet::new();
        for a in &darts {
            inv.insert(a.clone(), g.inv(a).clone());
            inv.insert(g.inv(a).clone(), a.clone());
            if !internal(a) {
                bd.insert(g.inv(a).clone());
            }
        }
        let tgt = darts.iter().map(|a| (a.clone(), g.target(a).unwrap().clone())).collect();
        let h = Graph::from_parts(inv.clone(), tgt, b.clone(), Some(bd.clone())).map_err(|e| OperadError::Shape(e.to_string()))?;
        if !h.is_connected() {
            return Err(OperadError::Shape(format!("block {i} is not connected")));
        }
        let zeta = inv.keys().map(|a| (a.clone(), d.shape.zeta[a].clone())).collect();
        let shape = ColoredGraph { graph: h, zeta };
        let order = bd.iter().map(|a| (a.clone(), a.clone())).collect();
        let profile = ColoredObject::new(bd.iter().map(|a| (a.clone(), d.shape.zeta[a].clone())).collect());
        let decos = b.iter().map(|w| (w.clone(), d.decorations[w].clone())).collect();
        let inner = DecoratedGraph::new(shape, order, profile, decos)?;
        decorations.insert(format!("B{i}"), Deco::Nested(Box::new(inner)));
    }
    let inv: BTreeMap<Name, Name> = g.arcs().filter(|a| !internal(a)).map(|a| (a.clone(), g.inv(a).clone())).collect();
    let tgt = g
        .incidence()
        .iter()
        .filter(|(a, _)| !internal(a))
        .map(|(a, w)| (a.clone(), format!("B{}", block_of[w])))
        .collect();
    let vs = (0..blocks.len()).map(|i| format!("B{i}")).collect();
    let outer = Graph::from_parts(inv.clone(), tgt, vs, Some(g.boundary().clone())).map_err(|e| OperadError::Shape(e.to_string()))?;
    let zeta = inv.keys().map(|a| (a.clone(), d.shape.zeta[a].clone())).collect();
    DecoratedGraph::new(ColoredGraph { graph: outer, zeta }, d.order.clone(), d.profile.clone(), decorations)
}

/// All partitions of the vertices into connected blocks.
pub fn connected_partitions(d: &DecoratedGraph) -> Vec<Vec<BTreeSet<Name>>> {
    let g = &d.shape.graph;
    let vs: Vec<Name> = g.vertices().iter().cloned().collect();
    let mut out = Vec::new();
    let mut cur: Vec<BTreeSet<Name>> = Vec::new();
    fn go(vs: &[Name], k: usize, cur: &mut Vec<BTreeSet<Name>>, out: &mut Vec<Vec<BTreeSet<Name>>>) {
        if k == vs.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..cur.len() {
            cur[i].insert(vs[k].clone());
            go(vs, k + 1, cur, out);
            cur[i].remove(&vs[k]);
        }
        cur.push([vs[k].clone()].into());
        go(vs, k + 1, cur, out);
        cur.pop();
    }
    go(&vs, 0, &mut cur, &mut out);
    out.retain(|p| p.iter().all(|b| block_connected(g, b)));
    out
}

fn block_connected(g: &crate::graph::Graph, b: &BTreeSet<Name>) -> bool {
    let Some(start) = b.iter().next() else { return true };
    let mut seen: BTreeSet<&Name> = [start].into();
    let mut stack = vec![start];
    while let Some(w) = stack.pop() {
        for a in g.nbhd(w) {
            if let Some(u) = g.target(g.inv(&a)) {
                if b.contains(u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
    }
    seen.len() == b.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, linear, ColoredGraph};

    fn monochrome(g: crate::graph::Graph, decos: &[&str]) -> DecoratedGraph {
        let zeta = g.arcs().map(|a| (a.clone(), "c".to_string())).collect();
        let order: BTreeMap<Name, Name> = g.boundary().iter().map(|a| (a.clone(), a.clone())).collect();
        let profile = ColoredObject::new(order.keys().map(|s| (s.clone(), "c".to_string())).collect());
        let d = g.vertices().iter().zip(decos).map(|(w, x)| (w.clone(), Deco::Atom(x.to_string()))).collect();
        DecoratedGraph::new(ColoredGraph { graph: g, zeta }, order, profile, d).unwrap()
    }

    #[test]
    fn genus_counts_cycles() {
        let p = TabulatedOperad::genus_mod(5, 4);
        assert_eq!(biased_gamma(&p, &monochrome(linear(3), &["g1", "g0", "g2"])).unwrap(), "g3");
        assert_eq!(biased_gamma(&p, &monochrome(cycle(3), &["g0", "g0", "g1"])).unwrap(), "g2");
        assert_eq!(biased_gamma(&p, &monochrome(cycle(1), &["g0"])).unwrap(), "g1");
    }

    #[test]
    fn corrupted_table_is_order_dependent() {
        let mut p = TabulatedOperad::genus_mod(5, 4);
        let k = p.comp_key(&"g0".to_string(), &"c".to_string(), &"g0".to_string());
        p.comp.insert(k, "g1".into());
        let r = biased_gamma(&p, &monochrome(linear(3), &["g1", "g0", "g0"]));
        assert!(matches!(r, Err(OperadError::OrderDependence(_))), "{r:?}");
    }

    #[test]
    fn splits_satisfy_the_heart_square() {
        let p = TabulatedOperad::genus_mod(3, 4);
        let d = monochrome(cycle(3), &["g0", "g1", "g2"]);
        let nested: Vec<DecoratedGraph> = connected_partitions(&d).iter().map(|b| split(&d, b).unwrap()).collect();
        assert_eq!(nested.len(), 5);
        let profiles: Vec<ColoredObject> = (0..=3)
            .map(|n| ColoredObject::new((0..n).map(|k| (format!("s{k}"), "c".to_string())).collect()))
            .collect();
        let r = check_algebra_laws(&p, &profiles, &nested);
        assert!(r.holds(), "{:?}", r.witness);
    }

    #[test]
    fn reindex_along_identity_is_identity() {
        let p = TabulatedOperad::charge(4);
        let id = p.colors.elements().map(|c| (c.clone(), c.clone())).collect();
        let mut q = reindex(&id, p.colors.clone(), &p).unwrap();
        q.name = p.name.clone();
        assert_eq!(q, p);
    }
}
