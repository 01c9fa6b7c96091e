//! The free modular operad generated by a graph. Elements are canonical codes of étale
//! graphs over the generator with an ordered boundary.

use std::collections::{BTreeMap, BTreeSet};

use super::{Deco, DecoratedGraph, Elem, Operad, OperadError};
use crate::etale::{representative, EmbeddingClass};
use crate::graph::{ColoredGraph, Graph};
use crate::involutive::{ColoredObject, InvolutiveSet, Name};
use crate::iso::canonical_code;
use crate::substitution::{substitute_colored, ColoredPlug};

/// `M(G)`: colors are the arcs of `G`; fibers are enumerated up to `vertex_bound` vertices.
#[derive(Debug, Clone)]
pub struct FreeModularOperad {
    pub generator: Graph,
    pub colors: InvolutiveSet,
    pub vertex_bound: usize,
}

impl FreeModularOperad {
    pub fn new(generator: &Graph, vertex_bound: usize) -> FreeModularOperad {
        FreeModularOperad { generator: generator.clone(), colors: generator.involution(), vertex_bound }
    }

    /// Decodes and checks that every vertex of `x` is decorated by a generator vertex whose
    /// neighborhood its own covers bijectively. Nodeless loops may take any color.
    pub fn element(&self, x: &Elem, profile: &ColoredObject) -> Result<DecoratedGraph, OperadError> {
        let d = decode(x, profile, &self.colors)?;
        let g = &self.generator;
        let k = &d.shape.graph;
        for w in k.vertices() {
            let Deco::Atom(v) = &d.decorations[w] else { unreachable!() };
            if !g.vertices().contains(v) {
                return Err(OperadError::BadElement(x.clone()));
            }
            let img: BTreeSet<&Name> = k.nbhd(w).iter().map(|a| &d.shape.zeta[a]).collect();
            if img.len() != k.valence(w) || img.into_iter().cloned().collect::<BTreeSet<_>>() != g.nbhd(v) {
                return Err(OperadError::NotInFiber(x.clone()));
            }
        }
        Ok(d)
    }
}

/// Encodes a decorated graph whose decorations are labels; boundary arcs carry `color@s`.
pub fn encode(d: &DecoratedGraph) -> Elem {
    let mut labels: BTreeMap<Name, String> = d.shape.zeta.clone();
    for (s, a) in &d.order {
        labels.insert(a.clone(), format!("{}@{}", d.shape.zeta[a], s));
    }
    let vl: BTreeMap<Name, String> = d
        .decorations
        .iter()
        .map(|(w, x)| match x {
            Deco::Atom(v) => (w.clone(), v.clone()),
            Deco::Nested(_) => (w.clone(), String::new()),
        })
        .collect();
    canonical_code(&d.shape.graph, &labels, &vl)
}

struct Cursor<'a> {
    s: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn eat(&mut self, t: &str) -> Option<()> {
        if self.s[self.at..].starts_with(t.as_bytes()) {
            self.at += t.len();
            Some(())
        } else {
            None
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.at).copied()
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        std::str::from_utf8(&self.s[start..self.at]).ok()?.parse().ok()
    }

    /// A Debug-quoted string.
    fn quoted(&mut self) -> Option<String> {
        self.eat("\"")?;
        let mut out = Vec::new();
        loop {
            let c = self.peek()?;
            self.at += 1;
            match c {
                b'"' => break,
                b'\\' => {
                    let e = self.peek()?;
                    self.at += 1;
                    match e {
                        b'n' => out.push(b'\n'),
                        b't' => out.push(b'\t'),
                        b'r' => out.push(b'\r'),
                        b'0' => out.push(0),
                        b'u' => {
                            self.eat("{")?;
                            let start = self.at;
                            while self.peek()? != b'}' {
                                self.at += 1;
                            }
                            let hex = std::str::from_utf8(&self.s[start..self.at]).ok()?;
                            self.at += 1;
                            let ch = char::from_u32(u32::from_str_radix(hex, 16).ok()?)?;
                            let mut buf = [0u8; 4];
                            out.extend_from_slice(ch.encode_utf8(&mut buf).as_bytes());
                        }
                        other => out.push(other),
                    }
                }
                other => out.push(other),
            }
        }
        String::from_utf8(out).ok()
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Option<T>, sep: &str) -> Option<Vec<T>> {
        let mut out = Vec::new();
        if self.peek() == Some(b')') {
            return Some(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(sep).is_none() {
                return Some(out);
            }
        }
    }
}

enum Item {
    Edge(usize, String, usize, String),
    Leg(usize, String, String),
    Free(bool, String, String),
}

fn parse_code(code: &str) -> Option<(Vec<String>, Vec<Item>)> {
    let mut c = Cursor { s: code.as_bytes(), at: 0 };
    c.eat("V")?;
    let n = c.number()?;
    c.eat("(")?;
    let vl = c.list(|c| c.quoted(), ",")?;
    c.eat(")I(")?;
    let mut items = c.list(
        |c| {
            if c.eat("E").is_some() {
                let p = c.number()?;
                c.eat(":")?;
                let a = c.quoted()?;
                c.eat("|")?;
                let q = c.number()?;
                c.eat(":")?;
                let b = c.quoted()?;
                Some(Item::Edge(p, a, q, b))
            } else {
                c.eat("L")?;
                let p = c.number()?;
                c.eat(":")?;
                let a = c.quoted()?;
                c.eat("|")?;
                let b = c.quoted()?;
                Some(Item::Leg(p, a, b))
            }
        },
        ";",
    )?;
    c.eat(")F(")?;
    let free = c.list(
        |c| {
            let open = if c.eat("F").is_some() {
                true
            } else {
                c.eat("O")?;
                false
            };
            let a = c.quoted()?;
            c.eat("|")?;
            let b = c.quoted()?;
            Some(Item::Free(open, a, b))
        },
        ";",
    )?;
    c.eat(")")?;
    if c.at != code.len() || vl.len() != n {
        return None;
    }
    items.extend(free);
    Some((vl, items))
}

/// Rebuilds a decorated graph from a code. Arcs are named `a<k>`, `b<k>`; vertices `n<k>`.
pub fn decode(code: &Elem, profile: &ColoredObject, colors: &InvolutiveSet) -> Result<DecoratedGraph, OperadError> {
    let bad = || OperadError::BadElement(code.clone());
    let (vl, items) = parse_code(code).ok_or_else(bad)?;
    let mut inv = BTreeMap::new();
    let mut tgt = BTreeMap::new();
    let mut zeta = BTreeMap::new();
    let mut order = BTreeMap::new();
    let mut boundary = BTreeSet::new();
    let vname = |p: usize| format!("n{p}");
    let mut label = |arc: &Name, l: &str, boundary: &mut BTreeSet<Name>| {
        match l.split_once('@') {
            Some((c, s)) => {
                zeta.insert(arc.clone(), c.to_string());
                order.insert(s.to_string(), arc.clone());
                boundary.insert(arc.clone());
            }
            None => {
                zeta.insert(arc.clone(), l.to_string());
            }
        }
    };
    for (k, it) in items.iter().enumerate() {
        let (a, b) = (format!("a{k}"), format!("b{k}"));
        inv.insert(a.clone(), b.clone());
        inv.insert(b.clone(), a.clone());
        match it {
            Item::Edge(p, la, q, lb) => {
                if *p >= vl.len() || *q >= vl.len() {
                    return Err(bad());
                }
                tgt.insert(a.clone(), vname(*p));
                tgt.insert(b.clone(), vname(*q));
                label(&a, la, &mut boundary);
                label(&b, lb, &mut boundary);
            }
            Item::Leg(p, la, lb) => {
                if *p >= vl.len() {
                    return Err(bad());
                }
                tgt.insert(a.clone(), vname(*p));
                label(&a, la, &mut boundary);
                label(&b, lb, &mut boundary);
            }
            Item::Free(open, la, lb) => {
                if la.contains('@') != *open || lb.contains('@') != *open {
                    return Err(bad());
                }
                label(&a, la, &mut boundary);
                label(&b, lb, &mut boundary);
            }
        }
    }
    let vertices: BTreeSet<Name> = (0..vl.len()).map(vname).collect();
    let g = Graph::from_parts(inv, tgt, vertices, Some(boundary)).map_err(|_| bad())?;
    let shape = ColoredGraph::new(g, zeta, colors).map_err(OperadError::ColorMismatch)?;
    let decorations = vl.iter().enumerate().map(|(p, v)| (vname(p), Deco::Atom(v.clone()))).collect();
    DecoratedGraph::new(shape, order, profile.clone(), decorations)
}

impl Operad for FreeModularOperad {
    fn colors(&self) -> &InvolutiveSet {
        &self.colors
    }

    fn fiber(&self, profile: &ColoredObject) -> Result<Vec<Elem>, OperadError> {
        Ok(free_elements(self, profile, self.vertex_bound))
    }

    fn relabel(&self, x: &Elem, from: &ColoredObject, f: &BTreeMap<Name, Name>, to: &ColoredObject) -> Result<Elem, OperadError> {
        let d = decode(x, from, &self.colors)?;
        let order = d.order.iter().map(|(s, a)| (f[s].clone(), a.clone())).collect();
        Ok(encode(&DecoratedGraph::new(d.shape, order, to.clone(), d.decorations)?))
    }

    /// Substitutes the decoding of each vertex decoration into the shape.
    fn gamma(&self, d: &DecoratedGraph) -> Result<Elem, OperadError> {
        let g = &d.shape.graph;
        if g.vertices().is_empty() {
            let decos = BTreeMap::new();
            return Ok(encode(&DecoratedGraph::new(d.shape.clone(), d.order.clone(), d.profile.clone(), decos)?));
        }
        let mut plugs = BTreeMap::new();
        let mut inner = BTreeMap::new();
        for w in g.vertices() {
            let p = d.vertex_profile(w);
            let e = self.element(d.atom(w)?, &p)?;
            plugs.insert(w.clone(), ColoredPlug { graph: e.shape.clone(), m: e.order.clone() });
            inner.insert(w.clone(), e);
        }
        let (shape, s) = substitute_colored(&d.shape, &plugs, &self.colors)?;
        let order = d.order.iter().map(|(x, a)| (x.clone(), s.boundary_of[a].clone())).collect();
        let mut decorations = BTreeMap::new();
        for (w, e) in &inner {
            for (u, x) in &e.decorations {
                decorations.insert(s.vertex_of[&(w.clone(), u.clone())].clone(), x.clone());
            }
        }
        Ok(encode(&DecoratedGraph::new(shape, order, d.profile.clone(), decorations)?))
    }
}

struct Enumerator<'a> {
    g: &'a Graph,
    profile: &'a ColoredObject,
    /// `(K-vertex, G-dart)` for every dart of the candidate.
    darts: Vec<(usize, Name)>,
    partner: Vec<Option<usize>>,
    out: &'a mut BTreeSet<Elem>,
}

impl Enumerator<'_> {
    /// Pairs darts along internal edges of `G`; unpaired darts become legs whose colors must
    /// exhaust the profile.
    fn pair(&mut self, from: usize, legs: &mut BTreeMap<Name, usize>) {
        let Some(k) = (from..self.darts.len()).find(|&k| self.partner[k].is_none()) else {
            if legs.values().all(|&n| n == 0) {
                self.emit();
            }
            return;
        };
        let leg_color = self.g.inv(&self.darts[k].1).clone();
        if legs.get(&leg_color).is_some_and(|&n| n > 0) {
            *legs.get_mut(&leg_color).unwrap() -= 1;
            self.partner[k] = Some(usize::MAX);
            self.pair(k + 1, legs);
            self.partner[k] = None;
            *legs.get_mut(&leg_color).unwrap() += 1;
        }
        for j in k + 1..self.darts.len() {
            if self.partner[j].is_none() && self.darts[j].1 == leg_color {
                self.partner[k] = Some(j);
                self.partner[j] = Some(k);
                self.pair(k + 1, legs);
                self.partner[k] = None;
                self.partner[j] = None;
            }
        }
    }

    fn emit(&mut self) {
        let nv = self.darts.iter().map(|d| d.0).max().map_or(0, |m| m + 1);
        let mut inv = BTreeMap::new();
        let mut tgt = BTreeMap::new();
        let mut zeta = BTreeMap::new();
        let mut legs_by_color: BTreeMap<Name, Vec<Name>> = BTreeMap::new();
        let mut vlabel = BTreeMap::new();
        for (k, (w, d)) in self.darts.iter().enumerate() {
            let a = format!("d{k}");
            tgt.insert(a.clone(), format!("n{w}"));
            vlabel.insert(format!("n{w}"), self.g.target(d).unwrap().clone());
            zeta.insert(a.clone(), d.clone());
            match self.partner[k] {
                Some(usize::MAX) => {
                    let b = format!("l{k}");
                    inv.insert(a.clone(), b.clone());
                    inv.insert(b.clone(), a);
                    zeta.insert(b.clone(), self.g.inv(d).clone());
                    legs_by_color.entry(self.g.inv(d).clone()).or_default().push(b);
                }
                Some(j) => {
                    inv.insert(a, format!("d{j}"));
                }
                None => unreachable!(),
            }
        }
        let vertices: BTreeSet<Name> = (0..nv).map(|w| format!("n{w}")).collect();
        let boundary: BTreeSet<Name> = legs_by_color.values().flatten().cloned().collect();
        let k = Graph::from_parts(inv, tgt, vertices, Some(boundary)).expect("pairing yields a graph");
        if !k.is_connected() {
            return;
        }
        // Every color-respecting boundary ordering.
        let mut by_color: BTreeMap<&Name, Vec<&Name>> = BTreeMap::new();
        for (s, c) in &self.profile.coloring {
            by_color.entry(c).or_default().push(s);
        }
        let mut orders: Vec<BTreeMap<Name, Name>> = vec![BTreeMap::new()];
        for (c, ss) in &by_color {
            let legs = &legs_by_color[*c];
            let mut next = Vec::new();
            for o in &orders {
                for perm in itertools::Itertools::permutations(legs.iter(), legs.len()) {
                    let mut o2 = o.clone();
                    for (s, l) in ss.iter().zip(perm) {
                        o2.insert((*s).clone(), l.clone());
                    }
                    next.push(o2);
                }
            }
            orders = next;
        }
        let decos: BTreeMap<Name, Deco> = vlabel.into_iter().map(|(w, v)| (w, Deco::Atom(v))).collect();
        for o in orders {
            let shape = ColoredGraph { graph: k.clone(), zeta: zeta.clone() };
            let d = DecoratedGraph { shape, order: o, profile: self.profile.clone(), decorations: decos.clone() };
            self.out.insert(encode(&d));
        }
    }
}

fn multisets(items: &[Name], size: usize) -> Vec<Vec<Name>> {
    itertools::Itertools::combinations_with_replacement(items.iter().cloned(), size).collect()
}

/// All elements of `M(G)(S, xi)` whose shapes have at most `vertex_bound` vertices, sorted.
/// Fibers are infinite when `G` has cycles, so the bound truncates.
pub fn free_elements(f: &FreeModularOperad, profile: &ColoredObject, vertex_bound: usize) -> Vec<Elem> {
    let g = &f.generator;
    let mut out = BTreeSet::new();
    if profile.coloring.values().any(|c| !g.has_arc(c)) {
        return Vec::new();
    }
    if profile.is_empty() {
        for (a, b) in g.arc_classes() {
            let inv = [(a.clone(), b.clone()), (b.clone(), a.clone())].into();
            let k = Graph::from_parts(inv, BTreeMap::new(), BTreeSet::new(), Some(BTreeSet::new())).unwrap();
            let zeta = [(a.clone(), a.clone()), (b.clone(), b.clone())].into();
            let d = DecoratedGraph {
                shape: ColoredGraph { graph: k, zeta },
                order: BTreeMap::new(),
                profile: profile.clone(),
                decorations: BTreeMap::new(),
            };
            out.insert(encode(&d));
        }
    }
    if profile.len() == 2 {
        let ss: Vec<(&Name, &Name)> = profile.coloring.iter().collect();
        if g.inv(ss[0].1) == ss[1].1 {
            let inv = [("e".to_string(), "e*".to_string()), ("e*".to_string(), "e".to_string())].into();
            let k = Graph::from_parts(inv, BTreeMap::new(), BTreeSet::new(), None).unwrap();
            let zeta = [("e".to_string(), ss[0].1.clone()), ("e*".to_string(), ss[1].1.clone())].into();
            let order = [(ss[0].0.clone(), "e".to_string()), (ss[1].0.clone(), "e*".to_string())].into();
            let d = DecoratedGraph {
                shape: ColoredGraph { graph: k, zeta },
                order,
                profile: profile.clone(),
                decorations: BTreeMap::new(),
            };
            out.insert(encode(&d));
        }
    }
    let verts: Vec<Name> = g.vertices().iter().cloned().collect();
    let mut need: BTreeMap<Name, usize> = BTreeMap::new();
    for c in profile.coloring.values() {
        *need.entry(c.clone()).or_default() += 1;
    }
    for n in 1..=vertex_bound {
        for ms in multisets(&verts, n) {
            let darts: Vec<(usize, Name)> =
                ms.iter().enumerate().flat_map(|(w, v)| g.nbhd(v).into_iter().map(move |d| (w, d))).collect();
            if darts.len() < profile.len() || (darts.len() - profile.len()) % 2 != 0 {
                continue;
            }
            if darts.is_empty() && n > 1 {
                continue;
            }
            let partner = vec![None; darts.len()];
            let mut e = Enumerator { g, profile, darts, partner, out: &mut out };
            if e.darts.is_empty() {
                // A bare vertex; the generator is then a single isolated vertex.
                let decos = [("n0".to_string(), Deco::Atom(ms[0].clone()))].into();
                let k = Graph::from_parts(BTreeMap::new(), BTreeMap::new(), ["n0".to_string()].into(), None).unwrap();
                if profile.is_empty() {
                    let d = DecoratedGraph {
                        shape: ColoredGraph { graph: k, zeta: BTreeMap::new() },
                        order: BTreeMap::new(),
                        profile: profile.clone(),
                        decorations: decos,
                    };
                    e.out.insert(encode(&d));
                }
                continue;
            }
            let mut legs = need.clone();
            e.pair(0, &mut legs);
        }
    }
    out.into_iter().collect()
}

/// The element of `M(G)(bd, incl)` represented by an embedding class.
pub fn embedding_to_element(g: &Graph, c: &EmbeddingClass) -> Result<(ColoredObject, Elem), OperadError> {
    let f = representative(g, c).map_err(|e| OperadError::BadElement(e.to_string()))?;
    let k = &f.source;
    let order: BTreeMap<Name, Name> = k.boundary().iter().map(|b| (f.arcs[b].clone(), b.clone())).collect();
    if order.len() != k.boundary().len() {
        return Err(OperadError::BadElement(format!("boundary of {c} is not embedded")));
    }
    let profile = ColoredObject::new(order.keys().map(|s| (s.clone(), s.clone())).collect());
    let shape = ColoredGraph::new(k.clone(), f.arcs.clone(), &g.involution()).map_err(OperadError::ColorMismatch)?;
    let decorations = f.vertices.iter().map(|(w, v)| (w.clone(), Deco::Atom(v.clone()))).collect();
    let d = DecoratedGraph::new(shape, order, profile.clone(), decorations)?;
    Ok((profile, encode(&d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etale::enumerate_embeddings;
    use crate::graph::*;
    use crate::modops::decorated::monad_unit;

    fn prof(pairs: &[(&str, &str)]) -> ColoredObject {
        ColoredObject::from_pairs(pairs)
    }

    #[test]
    fn edge_fibers() {
        let f = FreeModularOperad::new(&edge(), 3);
        assert_eq!(free_elements(&f, &prof(&[]), 3).len(), 1);
        assert_eq!(free_elements(&f, &prof(&[("p", "e"), ("q", "e*")]), 3).len(), 1);
        assert_eq!(free_elements(&f, &prof(&[("p", "e"), ("q", "e")]), 3).len(), 0);
        assert_eq!(free_elements(&f, &prof(&[("p", "e")]), 3).len(), 0);
    }

    #[test]
    fn lonely_vertex_is_a_point() {
        let f = FreeModularOperad::new(&star(0), 3);
        assert_eq!(free_elements(&f, &prof(&[]), 3).len(), 1);
    }

    #[test]
    fn loop_cycles_one_per_length() {
        let f = FreeModularOperad::new(&cycle(1), 4);
        // nodeless loop plus one cycle of each length
        assert_eq!(free_elements(&f, &prof(&[]), 4).len(), 5);
    }

    #[test]
    fn codes_round_trip() {
        let g = double_edge();
        for c in enumerate_embeddings(&g) {
            let (p, x) = embedding_to_element(&g, &c).unwrap();
            let f = FreeModularOperad::new(&g, 3);
            let d = f.element(&x, &p).unwrap();
            assert_eq!(encode(&d), x);
        }
    }

    #[test]
    fn gamma_of_unit_is_identity() {
        let g = linear(2);
        let f = FreeModularOperad::new(&g, 2);
        let p = prof(&[("s", "l0*"), ("t", "l1*")]);
        for x in free_elements(&f, &p, 2) {
            let u = monad_unit(&x, &p, &f.colors).unwrap();
            assert_eq!(f.gamma(&u).unwrap(), x);
        }
    }
}
