//! Decorated graphs, the elements of the free-graph monad, with its unit and multiplication.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Elem, Operad, OperadError};
use crate::graph::{star_of, ColoredGraph};
use crate::involutive::{involutive_extension, ColoredObject, InvolutiveSet, Name};
use crate::iso::comma_isomorphisms;
use crate::substitution::{substitute_colored, ColoredPlug};

/// A vertex decoration: an operation, or a decorated graph one level down.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Deco {
    Atom(Elem),
    Nested(Box<DecoratedGraph>),
}

/// A connected colored graph `(K, zeta)` with a boundary ordering `order: S -> boundary(K)`
/// over `profile = (S, xi)`, and a decoration at each vertex `w` in the fiber at
/// `(i nbhd(w), zeta|)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DecoratedGraph {
    pub shape: ColoredGraph,
    pub order: BTreeMap<Name, Name>,
    pub profile: ColoredObject,
    pub decorations: BTreeMap<Name, Deco>,
}

impl DecoratedGraph {
    /// Validates connectivity, the boundary ordering, and the color equation `zeta o order = xi`.
    pub fn new(
        shape: ColoredGraph,
        order: BTreeMap<Name, Name>,
        profile: ColoredObject,
        decorations: BTreeMap<Name, Deco>,
    ) -> Result<DecoratedGraph, OperadError> {
        let d = DecoratedGraph { shape, order, profile, decorations };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), OperadError> {
        let g = &self.shape.graph;
        if !g.is_connected() {
            return Err(OperadError::Shape("shape is not connected".into()));
        }
        let keys: BTreeSet<&Name> = self.order.keys().collect();
        let carrier: BTreeSet<&Name> = self.profile.carrier().collect();
        let img: BTreeSet<&Name> = self.order.values().collect();
        if keys != carrier || img.len() != self.order.len() || img != g.boundary().iter().collect() {
            return Err(OperadError::Shape("boundary ordering is not a bijection".into()));
        }
        for (s, a) in &self.order {
            if self.shape.zeta.get(a) != self.profile.color(s) {
                return Err(OperadError::ColorMismatch(format!("boundary `{s}`")));
            }
        }
        if self.decorations.keys().collect::<BTreeSet<_>>() != g.vertices().iter().collect() {
            return Err(OperadError::Shape("decorations do not match the vertices".into()));
        }
        Ok(())
    }

    /// The profile `(i nbhd(w), zeta|)` of the fiber decorating `w`.
    pub fn vertex_profile(&self, w: &str) -> ColoredObject {
        let g = &self.shape.graph;
        ColoredObject::new(
            g.nbhd(w).iter().map(|d| (g.inv(d).clone(), self.shape.zeta[g.inv(d)].clone())).collect(),
        )
    }

    /// Total number of vertices at every nesting level.
    pub fn total_vertices(&self) -> usize {
        self.decorations
            .values()
            .map(|d| match d {
                Deco::Atom(_) => 1,
                Deco::Nested(n) => n.total_vertices(),
            })
            .sum::<usize>()
    }

    pub fn atom(&self, w: &str) -> Result<&Elem, OperadError> {
        match self.decorations.get(w) {
            Some(Deco::Atom(x)) => Ok(x),
            _ => Err(OperadError::Shape(format!("vertex `{w}` is not decorated by an operation"))),
        }
    }
}

impl fmt::Display for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape.graph.to_file_string("shape"))?;
        for (a, c) in &self.shape.zeta {
            writeln!(f, "color {a} = {c}")?;
        }
        let order: Vec<String> = self.order.iter().map(|(s, a)| format!("{s}->{a}")).collect();
        writeln!(f, "order: {}", order.join(", "))?;
        writeln!(f, "profile: {}", self.profile)?;
        for (w, d) in &self.decorations {
            match d {
                Deco::Atom(x) => writeln!(f, "decorate {w}: {x}")?,
                Deco::Nested(n) => {
                    writeln!(f, "decorate {w}: {{")?;
                    write!(f, "{n}")?;
                    writeln!(f, "}}")?;
                }
            }
        }
        Ok(())
    }
}

/// The star `star_S` colored by `xi^star` with its single vertex decorated by `deco`.
pub fn unit_shape(deco: Deco, profile: &ColoredObject, colors: &InvolutiveSet) -> Result<DecoratedGraph, OperadError> {
    let s: BTreeSet<Name> = profile.carrier().cloned().collect();
    let g = star_of(&s);
    let zeta = involutive_extension(profile, colors).map_err(|e| OperadError::ColorMismatch(e.to_string()))?;
    let shape = ColoredGraph::new(g, zeta, colors).map_err(OperadError::ColorMismatch)?;
    let order = s.iter().map(|x| (x.clone(), x.clone())).collect();
    let v = shape.graph.vertices().iter().next().unwrap().clone();
    DecoratedGraph::new(shape, order, profile.clone(), [(v, deco)].into())
}

/// The unit of the monad at an operation `x` of profile `profile`.
pub fn monad_unit(x: &Elem, profile: &ColoredObject, colors: &InvolutiveSet) -> Result<DecoratedGraph, OperadError> {
    unit_shape(Deco::Atom(x.clone()), profile, colors)
}

/// Transports a decorated graph along a bijection `f: S -> S'` of profiles.
pub fn relabel_decorated(
    d: &DecoratedGraph,
    f: &BTreeMap<Name, Name>,
    to: &ColoredObject,
) -> Result<DecoratedGraph, OperadError> {
    let order = d.order.iter().map(|(s, a)| (f[s].clone(), a.clone())).collect();
    DecoratedGraph::new(d.shape.clone(), order, to.clone(), d.decorations.clone())
}

fn relabel_deco(
    x: &Deco,
    from: &ColoredObject,
    f: &BTreeMap<Name, Name>,
    to: &ColoredObject,
    op: &dyn Operad,
) -> Result<Deco, OperadError> {
    Ok(match x {
        Deco::Atom(e) => Deco::Atom(op.relabel(e, from, f, to)?),
        Deco::Nested(n) => Deco::Nested(Box::new(relabel_decorated(n, f, to)?)),
    })
}

/// Multiplication: substitutes every nested shape into the outer one and carries the inner
/// decorations along the quotient. A vertexless outer shape is returned as is.
pub fn monad_mult(d: &DecoratedGraph, op: &dyn Operad) -> Result<DecoratedGraph, OperadError> {
    let g = &d.shape.graph;
    if g.vertices().is_empty() {
        return Ok(d.clone());
    }
    let mut plugs = BTreeMap::new();
    let mut inner = BTreeMap::new();
    for w in g.vertices() {
        let Some(Deco::Nested(n)) = d.decorations.get(w) else {
            return Err(OperadError::Shape(format!("vertex `{w}` is not decorated by a graph")));
        };
        if n.profile != d.vertex_profile(w) {
            return Err(OperadError::ColorMismatch(format!("inner profile at `{w}`")));
        }
        plugs.insert(w.clone(), ColoredPlug { graph: n.shape.clone(), m: n.order.clone() });
        inner.insert(w.clone(), n);
    }
    let (shape, s) = substitute_colored(&d.shape, &plugs, op.colors())?;
    let order = d.order.iter().map(|(x, a)| (x.clone(), s.boundary_of[a].clone())).collect();
    let mut decorations = BTreeMap::new();
    for (w, n) in &inner {
        let h = &n.shape.graph;
        for u in h.vertices() {
            let from = n.vertex_profile(u);
            let f: BTreeMap<Name, Name> =
                from.carrier().map(|x| (x.clone(), s.arc_of[&(w.clone(), x.clone())].clone())).collect();
            let nu = s.vertex_of[&(w.clone(), u.clone())].clone();
            let to = ColoredObject::new(f.iter().map(|(x, y)| (y.clone(), from.coloring[x].clone())).collect());
            decorations.insert(nu, relabel_deco(&n.decorations[u], &from, &f, &to, op)?);
        }
    }
    DecoratedGraph::new(shape, order, d.profile.clone(), decorations)
}

/// Applies the structure map to every nested decoration, one level down.
pub fn gamma_inside(d: &DecoratedGraph, op: &dyn Operad) -> Result<DecoratedGraph, OperadError> {
    let mut out = d.clone();
    for (_, deco) in out.decorations.iter_mut() {
        if let Deco::Nested(n) = deco {
            *deco = Deco::Atom(op.gamma(n)?);
        }
    }
    Ok(out)
}

/// Equal as elements of the colimit: some colored isomorphism of shapes commutes with the
/// boundary orderings and transports each decoration onto the other.
pub fn decorated_equal(d1: &DecoratedGraph, d2: &DecoratedGraph, op: &dyn Operad) -> bool {
    if d1.profile != d2.profile {
        return false;
    }
    let isos = comma_isomorphisms(&d1.shape, &d1.order, &d2.shape, &d2.order);
    isos.iter().any(|z| {
        d1.shape.graph.vertices().iter().all(|w| {
            let from = d1.vertex_profile(w);
            let w2 = &z.vertices[w];
            let to = d2.vertex_profile(w2);
            let f: BTreeMap<Name, Name> = from.carrier().map(|x| (x.clone(), z.arcs[x].clone())).collect();
            match (relabel_deco(&d1.decorations[w], &from, &f, &to, op), &d2.decorations[w2]) {
                (Ok(Deco::Atom(a)), Deco::Atom(b)) => a == *b,
                (Ok(Deco::Nested(a)), Deco::Nested(b)) => decorated_equal(&a, b, op),
                _ => false,
            }
        })
    })
}

/// The collection with every label allowed in every fiber and a trivial action; its
/// structure map is undefined, so it only serves as a source of atoms for monad-law checks.
pub struct FreeCollection {
    pub colors: InvolutiveSet,
}

impl Operad for FreeCollection {
    fn colors(&self) -> &InvolutiveSet {
        &self.colors
    }
    fn fiber(&self, _: &ColoredObject) -> Result<Vec<Elem>, OperadError> {
        Ok(Vec::new())
    }
    fn relabel(&self, x: &Elem, _: &ColoredObject, _: &BTreeMap<Name, Name>, _: &ColoredObject) -> Result<Elem, OperadError> {
        Ok(x.clone())
    }
    fn gamma(&self, _: &DecoratedGraph) -> Result<Elem, OperadError> {
        Err(OperadError::Shape("a bare collection has no structure map".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    fn colors() -> InvolutiveSet {
        InvolutiveSet::parse("colors: c c*").unwrap()
    }

    fn line_shape() -> DecoratedGraph {
        let g = linear(2);
        let zeta: BTreeMap<Name, Name> = [("l0", "c"), ("l0*", "c*"), ("x1", "c"), ("y1", "c*"), ("l1", "c"), ("l1*", "c*")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let shape = ColoredGraph::new(g, zeta, &colors()).unwrap();
        let order = [("s".to_string(), "l0*".to_string()), ("t".to_string(), "l1*".to_string())].into();
        let profile = ColoredObject::from_pairs(&[("s", "c*"), ("t", "c*")]);
        let decos = [("v0".to_string(), Deco::Atom("x".into())), ("v1".to_string(), Deco::Atom("y".into()))].into();
        DecoratedGraph::new(shape, order, profile, decos).unwrap()
    }

    #[test]
    fn unit_laws_on_a_line() {
        let c = FreeCollection { colors: colors() };
        let d = line_shape();
        // mu o T eta
        let mut t = d.clone();
        for w in d.shape.graph.vertices() {
            let p = d.vertex_profile(w);
            t.decorations.insert(w.clone(), Deco::Nested(Box::new(unit_shape(d.decorations[w].clone(), &p, &c.colors).unwrap())));
        }
        assert!(decorated_equal(&monad_mult(&t, &c).unwrap(), &d, &c));
        // mu o eta T
        let e = unit_shape(Deco::Nested(Box::new(d.clone())), &d.profile, &c.colors).unwrap();
        assert!(decorated_equal(&monad_mult(&e, &c).unwrap(), &d, &c));
    }

    #[test]
    fn swapped_decorations_differ() {
        let c = FreeCollection { colors: colors() };
        let d = line_shape();
        let mut e = d.clone();
        e.decorations.insert("v0".into(), Deco::Atom("y".into()));
        e.decorations.insert("v1".into(), Deco::Atom("x".into()));
        assert!(!decorated_equal(&d, &e, &c));
    }
}
