//! The operad of a Segal presheaf: operations of arity `n` are values on the `n`-star, colors are
//! values on the edge, and the structure map inverts the Segal map and restricts along an
//! active map.

use std::collections::BTreeMap;

use super::segal::{edge_maps, segal_inverse};
use super::{NerveError, Presheaf, Site};
use crate::etale::EmbeddingClass;
use crate::graph::cycle;
use crate::involutive::{ColoredObject, InvolutiveSet, Name};
use crate::modops::{DecoratedGraph, Elem, Operad, OperadError};

pub struct SegalOperad<'a> {
    pub site: &'a Site,
    pub x: &'a Presheaf,
    pub colors: InvolutiveSet,
    edge: usize,
    /// Star object with `n` legs.
    stars: BTreeMap<usize, usize>,
    /// `colors_of[n][x]`: the color at each position of `x` in `X_{star_n}`.
    colors_of: BTreeMap<usize, Vec<Vec<usize>>>,
    /// Automorphisms of star objects by the permutation of positions they induce.
    autos: BTreeMap<(usize, Vec<usize>), usize>,
    segal_inv: BTreeMap<usize, BTreeMap<Vec<usize>, usize>>,
    /// The degeneracy `star_2 -> edge` placing a value of the edge at position 1.
    degeneracy: Option<usize>,
}

fn err(e: NerveError) -> OperadError {
    match e {
        NerveError::Operad(o) => o,
        NerveError::MissingActiveMap(s) | NerveError::MissingCoreObject(s) => OperadError::MissingActiveMap(s),
        NerveError::SegalFailure(s) => OperadError::SegalFailure(s),
        other => OperadError::Shape(other.to_string()),
    }
}

impl<'a> SegalOperad<'a> {
    /// Requires `X` to satisfy the Segal condition at every object of the site.
    pub fn new(site: &'a Site, x: &'a Presheaf) -> Result<SegalOperad<'a>, NerveError> {
        x.check_functor(site)?;
        let edge = site.edge_object().ok_or_else(|| NerveError::BadSite("no edge".into()))?;
        let eg = site.graph(edge);
        let e0 = eg.arcs().next().unwrap().clone();
        let e1 = eg.inv(&e0).clone();
        let swap = site.lookup(edge, edge, [(e0.clone(), e1.clone()), (e1.clone(), e0.clone())].into(), BTreeMap::new())?;
        let cs = &x.values[edge];
        let pairs: Vec<Vec<&str>> = (0..cs.len())
            .filter(|&c| x.act(swap, c) >= c)
            .map(|c| {
                let d = x.act(swap, c);
                if d == c { vec![cs[c].as_str()] } else { vec![cs[c].as_str(), cs[d].as_str()] }
            })
            .collect();
        let colors = InvolutiveSet::from_classes(&pairs).map_err(|e| NerveError::NotAPresheaf(e.to_string()))?;
        let mut stars = BTreeMap::new();
        let mut colors_of = BTreeMap::new();
        let mut autos = BTreeMap::new();
        for n in 0.. {
            let Some(so) = site.star_object(n) else { break };
            stars.insert(n, so);
            let hs: Vec<usize> = (0..n).map(|k| edge_maps(site, so, k).map(|p| p.1)).collect::<Result<_, _>>()?;
            colors_of.insert(n, (0..x.values[so].len()).map(|y| hs.iter().map(|&h| x.act(h, y)).collect()).collect());
            let (sv, pos) = site.star_positions(so);
            let sg = site.graph(so);
            for perm in itertools::Itertools::permutations(0..n, n) {
                let mut phi0 = BTreeMap::new();
                for (k, &p) in perm.iter().enumerate() {
                    phi0.insert(pos[k].clone(), pos[p].clone());
                    phi0.insert(sg.inv(&pos[k]).clone(), sg.inv(&pos[p]).clone());
                }
                let phi1 = [(sv.clone(), EmbeddingClass::identity(sg))].into();
                autos.insert((n, perm), site.lookup(so, so, phi0, phi1)?);
            }
        }
        let mut segal_inv = BTreeMap::new();
        for o in 0..site.objects.len() {
            if !site.graph(o).vertices().is_empty() {
                segal_inv.insert(o, segal_inverse(x, site, o)?);
            }
        }
        let degeneracy = stars.get(&2).and_then(|&s2| {
            let (sv, pos) = site.star_positions(s2);
            let sg = site.graph(s2);
            let phi0 = [
                (sg.inv(&pos[0]).clone(), e0.clone()),
                (pos[0].clone(), e1.clone()),
                (sg.inv(&pos[1]).clone(), e1.clone()),
                (pos[1].clone(), e0.clone()),
            ]
            .into();
            let class = EmbeddingClass { w: Default::default(), b: eg.arc_set(), bd: eg.arc_set() };
            site.lookup(s2, edge, phi0, [(sv, class)].into()).ok()
        });
        Ok(SegalOperad { site, x, colors, edge, stars, colors_of, autos, segal_inv, degeneracy })
    }

    fn color_index(&self, c: &str) -> Result<usize, OperadError> {
        self.x.index_of(self.edge, c).ok_or_else(|| OperadError::ColorMismatch(format!("`{c}` is not a color")))
    }

    pub(crate) fn star(&self, n: usize) -> Result<usize, OperadError> {
        self.stars.get(&n).copied().ok_or(OperadError::ArityBeyondTable(n))
    }

    /// `X(sigma)(y)` for the star automorphism moving position `k` to `perm[k]`; the result
    /// holds at position `k` what `y` holds at `perm[k]`.
    pub(crate) fn permute(&self, n: usize, perm: Vec<usize>, y: usize) -> Result<usize, OperadError> {
        let m = self.autos.get(&(n, perm)).ok_or_else(|| OperadError::MissingActiveMap(format!("automorphism of star{n}")))?;
        Ok(self.x.act(*m, y))
    }

    pub(crate) fn value(&self, n: usize, e: &Elem) -> Result<usize, OperadError> {
        let so = self.star(n)?;
        self.x.index_of(so, e).ok_or_else(|| OperadError::NotInFiber(e.clone()))
    }

    /// Evaluates on a graph with vertices via the isomorphic site object.
    fn gamma_with_vertices(&self, d: &DecoratedGraph) -> Result<usize, OperadError> {
        let k = &d.shape.graph;
        let (o, theta) = self
            .site
            .find_object(k)
            .ok_or_else(|| OperadError::MissingActiveMap(format!("no site object for shape\n{k}")))?;
        let g = self.site.graph(o);
        let mut tuple = Vec::new();
        for u in g.vertices() {
            let w = &theta.vertices[u];
            let darts: Vec<Name> = g.nbhd(u).into_iter().collect();
            let prof: Vec<Name> = k.nbhd(w).iter().map(|a| k.inv(a).clone()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            let perm: Vec<usize> = darts
                .iter()
                .map(|dk| prof.iter().position(|s| *s == theta.arcs[g.inv(dk)]).unwrap())
                .collect();
            let y = self.value(darts.len(), d.atom(w)?)?;
            tuple.push(self.permute(darts.len(), perm, y)?);
        }
        let z = *self.segal_inv[&o]
            .get(&tuple)
            .ok_or_else(|| OperadError::SegalFailure(format!("decorations do not match along the edges of {}", self.site.objects[o].0)))?;
        let m = d.profile.len();
        let so = self.star(m)?;
        let (sv, pos) = self.site.star_positions(so);
        let sg = self.site.graph(so);
        let inv_theta: BTreeMap<&Name, &Name> = theta.arcs.iter().map(|(a, b)| (b, a)).collect();
        let mut phi0 = BTreeMap::new();
        for (k2, (_, arc)) in d.order.iter().enumerate() {
            let a = inv_theta[arc].clone();
            phi0.insert(sg.inv(&pos[k2]).clone(), a.clone());
            phi0.insert(pos[k2].clone(), g.inv(&a).clone());
        }
        let active = self.site.lookup(so, o, phi0, [(sv, EmbeddingClass::identity(g))].into()).map_err(err)?;
        Ok(self.x.act(active, z))
    }
}

impl Operad for SegalOperad<'_> {
    fn colors(&self) -> &InvolutiveSet {
        &self.colors
    }

    /// Values on the `n`-star whose position colors match the profile in sorted order.
    fn fiber(&self, profile: &ColoredObject) -> Result<Vec<Elem>, OperadError> {
        let n = profile.len();
        let so = self.star(n)?;
        let want: Vec<usize> = profile.coloring.values().map(|c| self.color_index(c)).collect::<Result<_, _>>()?;
        Ok(self.colors_of[&n]
            .iter()
            .enumerate()
            .filter(|(_, cs)| **cs == want)
            .map(|(y, _)| self.x.values[so][y].clone())
            .collect())
    }

    fn relabel(&self, x: &Elem, from: &ColoredObject, f: &BTreeMap<Name, Name>, to: &ColoredObject) -> Result<Elem, OperadError> {
        let n = from.len();
        let src: Vec<&Name> = from.carrier().collect();
        let finv: BTreeMap<&Name, &Name> = f.iter().map(|(a, b)| (b, a)).collect();
        let perm: Vec<usize> = to.carrier().map(|t| src.iter().position(|s| *s == finv[t]).unwrap()).collect();
        let y = self.value(n, x)?;
        let so = self.star(n)?;
        Ok(self.x.values[so][self.permute(n, perm, y)?].clone())
    }

    fn gamma(&self, d: &DecoratedGraph) -> Result<Elem, OperadError> {
        let k = &d.shape.graph;
        let zeta = &d.shape.zeta;
        let deg = || self.degeneracy.ok_or_else(|| OperadError::MissingActiveMap("degeneracy star2 -> edge".into()));
        let s2 = || self.star(2);
        if k.vertices().is_empty() {
            if k.is_edge() {
                // The unit at the color of the first profile position.
                let first = d.order.values().next().unwrap();
                let c = self.color_index(&zeta[first])?;
                return Ok(self.x.values[s2()?][self.x.act(deg()?, c)].clone());
            }
            // A nodeless loop is the contracted unit on the one-vertex loop.
            let a = k.arcs().next().unwrap();
            let c = self.color_index(&zeta[a])?;
            let u = self.x.act(deg()?, c);
            let (o, _) = self
                .site
                .find_object(&cycle(1))
                .ok_or_else(|| OperadError::MissingActiveMap("no one-vertex loop in the site".into()))?;
            let z = *self.segal_inv[&o].get(&vec![u]).ok_or_else(|| OperadError::SegalFailure("loop".into()))?;
            let s0 = self.star(0)?;
            let (sv, _) = self.site.star_positions(s0);
            let g = self.site.graph(o);
            let active = self.site.lookup(s0, o, BTreeMap::new(), [(sv, EmbeddingClass::identity(g))].into()).map_err(err)?;
            return Ok(self.x.values[s0][self.x.act(active, z)].clone());
        }
        let y = self.gamma_with_vertices(d)?;
        Ok(self.x.values[self.star(d.profile.len())?][y].clone())
    }
}

/// Checks that every star object listed up to `n` legs exists, so fibers up to that arity are
/// available.
pub fn max_arity(site: &Site) -> usize {
    (0..).take_while(|&n| site.star_object(n).is_some()).last().unwrap_or(0)
}

