//! Comparisons behind the nerve equivalence: the equalizer description of the nerve, the two
//! roundtrips between operads and Segal presheaves, full faithfulness on a site, and the
//! checks for the site of étale-based maps.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::lcons::SegalOperad;
use super::segal::{segal_check, star_map};
use super::{key, nerve, nerve_presheaf, NerveError, Presheaf, Site};
use crate::etale::check_etale;
use crate::graph::{star_of_vertex, ColoredGraph, Graph};
use crate::graphical::{from_embedding, Mode};
use crate::involutive::{ColoredObject, Name};
use crate::modops::maps::{compose_operad_maps, maps_from_free, vertex_profile};
use crate::modops::{j_functor, Deco, DecoratedGraph, Elem, Operad, OperadMap};

/// Outcome of comparing the nerve at `G` computed directly with its equalizer description.
#[derive(Debug, Clone)]
pub struct EqualizerReport {
    pub direct: usize,
    pub equalizer: usize,
    pub agree: bool,
}

/// Computes `NP_G` as the equalizer of `prod_v NP_{star_v}` over the internal edges and
/// compares it elementwise with the direct computation.
pub fn nerve_equalizer_check(p: &dyn Operad, g: &Graph) -> Result<EqualizerReport, NerveError> {
    let direct = nerve(p, g)?;
    if g.vertices().is_empty() {
        return Ok(EqualizerReport { direct: direct.len(), equalizer: direct.len(), agree: true });
    }
    let mut stars = Vec::new();
    for v in g.vertices() {
        let (s, iota) = star_of_vertex(g, v).map_err(|e| NerveError::BadSite(e.to_string()))?;
        let f = check_etale(&s, g, &iota, &[(v.clone(), v.clone())].into()).map_err(|e| NerveError::BadSite(e.to_string()))?;
        let j = j_functor(&from_embedding(&f, Mode::Strict)?)?;
        // the star dart lying over each dart of `v`, and the boundary arc opposite it
        let over: BTreeMap<Name, (Name, Name)> = iota
            .iter()
            .filter(|(a, _)| s.is_dart(a))
            .map(|(a, b)| (b.clone(), (a.clone(), s.inv(a).clone())))
            .collect();
        stars.push((v.clone(), maps_from_free(&s, p)?, j, over));
    }
    let slot: BTreeMap<&Name, usize> = stars.iter().enumerate().map(|(i, s)| (&s.0, i)).collect();
    let edges: Vec<(usize, Name, usize, Name)> = g
        .internal_edges()
        .into_iter()
        .map(|(x1, x2)| {
            let (i, j) = (slot[g.target(&x1).unwrap()], slot[g.target(&x2).unwrap()]);
            (i, stars[i].3[&x1].0.clone(), j, stars[j].3[&x2].1.clone())
        })
        .collect();
    // Tuples of star values whose colors agree across every internal edge.
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for (k, (_, vals, _, _)) in stars.iter().enumerate() {
        let mut next = Vec::new();
        for t in &tuples {
            for y in 0..vals.len() {
                let mut t2 = t.clone();
                t2.push(y);
                let ok = edges.iter().all(|(i, a, j, b)| {
                    (*i).max(*j) != k || stars[*i].1[t2[*i]].f0[a] == stars[*j].1[t2[*j]].f0[b]
                });
                if ok {
                    next.push(t2);
                }
            }
        }
        tuples = next;
    }
    let eq: BTreeSet<Vec<OperadMap>> =
        tuples.iter().map(|t| t.iter().enumerate().map(|(k, &y)| stars[k].1[y].clone()).collect()).collect();
    let mut image = BTreeSet::new();
    for m in &direct {
        let r: Vec<OperadMap> = stars.iter().map(|(_, _, j, _)| compose_operad_maps(m, j, p)).collect::<Result<_, _>>()?;
        image.insert(r);
    }
    let agree = image.len() == direct.len() && image == eq;
    Ok(EqualizerReport { direct: direct.len(), equalizer: eq.len(), agree })
}

#[derive(Debug, Clone, Default)]
pub struct RoundtripReport {
    pub checked: usize,
    pub mismatch: Option<String>,
}

impl RoundtripReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }

    fn fail(&mut self, s: String) {
        self.mismatch.get_or_insert(s);
    }
}

/// `Phi_G: X_G -> N(L_X)_G`: colors from the arcs, operations from the stars put in profile order.
fn unit_map(l: &SegalOperad, site: &Site, o: usize, z: usize) -> Result<OperadMap, NerveError> {
    let x = l.x;
    let g = site.graph(o);
    let e = site.edge_object().unwrap();
    let eg = site.graph(e);
    let e0 = eg.arcs().next().unwrap().clone();
    let e1 = eg.inv(&e0).clone();
    let mut f0 = BTreeMap::new();
    for a in g.arcs() {
        let m = site.lookup(e, o, [(e0.clone(), a.clone()), (e1.clone(), g.inv(a).clone())].into(), BTreeMap::new())?;
        f0.insert(a.clone(), x.values[e][x.act(m, z)].clone());
    }
    let mut f1 = BTreeMap::new();
    for v in g.vertices() {
        let (so, m) = star_map(site, o, v)?;
        let darts: Vec<Name> = g.nbhd(v).into_iter().collect();
        let prof: Vec<Name> = darts.iter().map(|d| g.inv(d).clone()).sorted().collect();
        let perm: Vec<usize> = prof.iter().map(|s| darts.iter().position(|d| g.inv(d) == s).unwrap()).collect();
        let y = l.permute(darts.len(), perm, x.act(m, z))?;
        f1.insert(v.clone(), x.values[so][y].clone());
    }
    Ok(OperadMap { source: g.clone(), f0, f1 })
}

/// Roundtrip `N(L_X) = X`: the comparison is a bijection at every object and natural in every
/// site map.
pub fn roundtrip_presheaf(x: &Presheaf, site: &Site) -> Result<RoundtripReport, NerveError> {
    let l = SegalOperad::new(site, x)?;
    let mut r = RoundtripReport::default();
    let mut phi: Vec<Vec<OperadMap>> = Vec::new();
    for o in 0..site.objects.len() {
        let ms: Vec<OperadMap> = (0..x.values[o].len()).map(|z| unit_map(&l, site, o, z)).collect::<Result<_, _>>()?;
        let set: BTreeSet<&OperadMap> = ms.iter().collect();
        let nl: BTreeSet<OperadMap> = maps_from_free(site.graph(o), &l)?.into_iter().collect();
        r.checked += 1;
        if set.len() != ms.len() || set.into_iter().cloned().collect::<BTreeSet<_>>() != nl {
            r.fail(format!("comparison at {} is not a bijection ({} vs {})", site.objects[o].0, ms.len(), nl.len()));
        }
        phi.push(ms);
    }
    for (k, m) in site.maps.iter().enumerate() {
        for z in 0..x.values[m.tgt].len() {
            r.checked += 1;
            let lhs = &phi[m.src][x.act(k, z)];
            match compose_operad_maps(&phi[m.tgt][z], &m.map, &l) {
                Ok(rhs) if rhs == *lhs => {}
                Ok(_) => r.fail(format!("naturality fails along {} at `{}`", site.map_name(k), x.values[m.tgt][z])),
                Err(e) => r.fail(format!("along {}: {e}", site.map_name(k))),
            }
        }
    }
    Ok(r)
}

/// `Psi: P(T, zeta) -> L(T, c o zeta)` for `L` built on the nerve of `P`.
struct OperadToSegal<'a> {
    p: &'a dyn Operad,
    l: &'a SegalOperad<'a>,
    color: BTreeMap<Name, Name>,
}

impl OperadToSegal<'_> {
    fn profile(&self, t: &ColoredObject) -> ColoredObject {
        ColoredObject::new(t.coloring.iter().map(|(s, c)| (s.clone(), self.color[c].clone())).collect())
    }

    fn element(&self, x: &Elem, t: &ColoredObject) -> Result<Elem, NerveError> {
        let site = self.l.site;
        let n = t.len();
        let so = self.l.star(n)?;
        let sg = site.graph(so);
        let (sv, pos) = site.star_positions(so);
        let mut f0 = BTreeMap::new();
        let mut rel = BTreeMap::new();
        for (k, (s, c)) in t.coloring.iter().enumerate() {
            let b = sg.inv(&pos[k]).clone();
            f0.insert(b.clone(), c.clone());
            f0.insert(pos[k].clone(), self.p.colors().dagger(c).unwrap().clone());
            rel.insert(s.clone(), b);
        }
        let to = vertex_profile(sg, &f0, &sv);
        let y = self.p.relabel(x, t, &rel, &to)?;
        Ok(key(&OperadMap { source: sg.clone(), f0, f1: [(sv, y)].into() }))
    }

    fn decorated(&self, d: &DecoratedGraph) -> Result<DecoratedGraph, NerveError> {
        let zeta: BTreeMap<Name, Name> = d.shape.zeta.iter().map(|(a, c)| (a.clone(), self.color[c].clone())).collect();
        let shape = ColoredGraph::new(d.shape.graph.clone(), zeta, self.l.colors()).map_err(NerveError::BadSite)?;
        let mut decorations = BTreeMap::new();
        for (w, x) in &d.decorations {
            let Deco::Atom(x) = x else { unreachable!() };
            decorations.insert(w.clone(), Deco::Atom(self.element(x, &d.vertex_profile(w))?));
        }
        Ok(DecoratedGraph::new(shape, d.order.clone(), self.profile(&d.profile), decorations)?)
    }
}

/// Decorated graphs over `P` shaped like each site object, one per nerve element, with the
/// boundary ordered by sorted arc names; plus the edge and nodeless loop in every color.
pub fn site_decorations(p: &dyn Operad, site: &Site) -> Result<Vec<DecoratedGraph>, NerveError> {
    let mut out = Vec::new();
    for (_, g) in &site.objects {
        for z in nerve(p, g)? {
            let shape = ColoredGraph { graph: g.clone(), zeta: z.f0.clone() };
            let order: BTreeMap<Name, Name> =
                g.boundary().iter().enumerate().map(|(k, a)| (format!("s{k}"), a.clone())).collect();
            let profile = ColoredObject::new(order.iter().map(|(s, a)| (s.clone(), z.f0[a].clone())).collect());
            let decorations = z.f1.iter().map(|(v, x)| (v.clone(), Deco::Atom(x.clone()))).collect();
            out.push(DecoratedGraph::new(shape, order, profile, decorations)?);
        }
    }
    for c in p.colors().elements() {
        let cd = p.colors().dagger(c).unwrap().clone();
        for closed in [false, true] {
            let g = if closed { crate::graph::nodeless_loop() } else { crate::graph::edge() };
            let zeta: BTreeMap<Name, Name> = [("e".to_string(), c.clone()), ("e*".to_string(), cd.clone())].into();
            let order: BTreeMap<Name, Name> =
                if closed { BTreeMap::new() } else { [("s0".into(), "e".into()), ("s1".into(), "e*".into())].into() };
            let profile = ColoredObject::new(order.iter().map(|(s, a)| (s.clone(), zeta[a].clone())).collect());
            out.push(DecoratedGraph::new(ColoredGraph { graph: g, zeta }, order, profile, BTreeMap::new())?);
        }
    }
    Ok(out)
}

/// Roundtrip `L_{N P} = P`: fiberwise bijections up to the site's arity, compatible with the
/// structure maps on every decorated graph shaped like a site object.
pub fn roundtrip_operad(p: &dyn Operad, site: &Site) -> Result<RoundtripReport, NerveError> {
    let x = nerve_presheaf(p, site)?;
    let l = SegalOperad::new(site, &x)?;
    let e = site.edge_object().unwrap();
    let eg = site.graph(e);
    let e0 = eg.arcs().next().unwrap().clone();
    let e1 = eg.inv(&e0).clone();
    let mut r = RoundtripReport::default();
    let color: BTreeMap<Name, Name> = p
        .colors()
        .elements()
        .map(|c| {
            let f0 = [(e0.clone(), c.clone()), (e1.clone(), p.colors().dagger(c).unwrap().clone())].into();
            (c.clone(), key(&OperadMap { source: eg.clone(), f0, f1: BTreeMap::new() }))
        })
        .collect();
    let img: BTreeSet<&Name> = color.values().collect();
    r.checked += 1;
    if img.len() != color.len() || img.into_iter().cloned().collect::<BTreeSet<_>>() != l.colors.elements().cloned().collect() {
        r.fail("colors do not correspond".into());
    }
    for c in p.colors().elements() {
        if l.colors.dagger(&color[c]) != Some(&color[p.colors().dagger(c).unwrap()]) {
            r.fail(format!("involution differs at `{c}`"));
        }
    }
    let psi = OperadToSegal { p, l: &l, color };
    let arity = super::lcons::max_arity(site);
    let cs: Vec<Name> = p.colors().elements().cloned().collect();
    for n in 0..=arity {
        for xi in (0..n).map(|_| cs.iter()).multi_cartesian_product() {
            let t = ColoredObject::new(xi.iter().enumerate().map(|(k, c)| (format!("s{k}"), (*c).clone())).collect());
            let src = p.fiber(&t)?;
            let imgs: Vec<Elem> = src.iter().map(|y| psi.element(y, &t)).collect::<Result<_, _>>()?;
            let set: BTreeSet<&Elem> = imgs.iter().collect();
            let tgt: BTreeSet<Elem> = l.fiber(&psi.profile(&t))?.into_iter().collect();
            r.checked += 1;
            if set.len() != imgs.len() || set.into_iter().cloned().collect::<BTreeSet<_>>() != tgt {
                r.fail(format!("fiber over {t}: {} operations vs {}", src.len(), tgt.len()));
            }
        }
    }
    for d in site_decorations(p, site)? {
        r.checked += 1;
        let lhs = psi.element(&p.gamma(&d)?, &d.profile)?;
        match l.gamma(&psi.decorated(&d)?) {
            Ok(rhs) if rhs == lhs => {}
            Ok(rhs) => r.fail(format!("structure maps differ ({lhs} vs {rhs}) on\n{d}")),
            Err(e) => r.fail(format!("{e} on\n{d}")),
        }
    }
    Ok(r)
}

/// Both roundtrips: `L_{N P} = P` for the operad, and `N(L_X) = X` for the presheaf.
pub fn roundtrip_reports(p: &dyn Operad, x: &Presheaf, site: &Site) -> Result<(RoundtripReport, RoundtripReport), NerveError> {
    Ok((roundtrip_operad(p, site)?, roundtrip_presheaf(x, site)?))
}

/// Natural transformations `X -> Y` over the site, found by backtracking element by element.
pub fn natural_transformations(x: &Presheaf, y: &Presheaf, site: &Site) -> Vec<Vec<Vec<usize>>> {
    let slots: Vec<(usize, usize)> =
        (0..site.objects.len()).flat_map(|o| (0..x.values[o].len()).map(move |z| (o, z))).collect();
    // maps touching each object
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); site.objects.len()];
    for (k, m) in site.maps.iter().enumerate() {
        touching[m.src].push(k);
        if m.tgt != m.src {
            touching[m.tgt].push(k);
        }
    }
    let mut alpha: Vec<Vec<Option<usize>>> = x.values.iter().map(|v| vec![None; v.len()]).collect();
    let mut out = Vec::new();
    fn consistent(x: &Presheaf, y: &Presheaf, site: &Site, touching: &[Vec<usize>], alpha: &[Vec<Option<usize>>], o: usize) -> bool {
        for &k in &touching[o] {
            let m = &site.maps[k];
            for z in 0..x.values[m.tgt].len() {
                let (Some(a), Some(b)) = (alpha[m.tgt][z], alpha[m.src][x.act(k, z)]) else { continue };
                if y.act(k, a) != b {
                    return false;
                }
            }
        }
        true
    }
    fn go(
        i: usize,
        slots: &[(usize, usize)],
        x: &Presheaf,
        y: &Presheaf,
        site: &Site,
        touching: &[Vec<usize>],
        alpha: &mut Vec<Vec<Option<usize>>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if i == slots.len() {
            out.push(alpha.iter().map(|a| a.iter().map(|v| v.unwrap()).collect()).collect());
            return;
        }
        let (o, z) = slots[i];
        for c in 0..y.values[o].len() {
            alpha[o][z] = Some(c);
            if consistent(x, y, site, touching, alpha, o) {
                go(i + 1, slots, x, y, site, touching, alpha, out);
            }
        }
        alpha[o][z] = None;
    }
    go(0, &slots, x, y, site, &touching, &mut alpha, &mut out);
    out
}

/// Operad maps `P -> Q` seen through the site: an involutive color map and maps on fibers up to
/// the site's arity, equivariant and compatible with the structure maps on every decorated
/// graph shaped like a site object.
pub struct SiteOperadMap {
    pub f0: BTreeMap<Name, Name>,
    /// Keyed by `(sorted profile colors, operation)` on the canonical carrier `s0, s1, ...`.
    pub f: BTreeMap<(Vec<Name>, Elem), Elem>,
}

fn canonical(n: usize) -> Vec<Name> {
    (0..n).map(|k| format!("s{k}")).collect()
}

fn canon_profile(cs: &[Name]) -> ColoredObject {
    ColoredObject::new(canonical(cs.len()).into_iter().zip(cs.iter().cloned()).collect())
}

/// Applies a site operad map to `x` in `P(t)`, going through the canonical carrier.
fn apply_site_map(p: &dyn Operad, q: &dyn Operad, f: &SiteOperadMap, x: &Elem, t: &ColoredObject) -> Option<Elem> {
    let cs: Vec<Name> = t.coloring.values().cloned().collect();
    let to_c: BTreeMap<Name, Name> = t.carrier().cloned().zip(canonical(cs.len())).collect();
    let from_c: BTreeMap<Name, Name> = to_c.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
    let cp = canon_profile(&cs);
    let xc = p.relabel(x, t, &to_c, &cp).ok()?;
    let yc = f.f.get(&(cs.clone(), xc))?;
    let qcs: Vec<Name> = cs.iter().map(|c| f.f0[c].clone()).collect();
    let qt = ColoredObject::new(t.coloring.iter().map(|(s, c)| (s.clone(), f.f0[c].clone())).collect());
    q.relabel(yc, &canon_profile(&qcs), &from_c, &qt).ok()
}

fn map_decorated(q: &dyn Operad, p: &dyn Operad, f: &SiteOperadMap, d: &DecoratedGraph) -> Option<DecoratedGraph> {
    let zeta: BTreeMap<Name, Name> = d.shape.zeta.iter().map(|(a, c)| (a.clone(), f.f0[c].clone())).collect();
    let shape = ColoredGraph::new(d.shape.graph.clone(), zeta, q.colors()).ok()?;
    let mut decorations = BTreeMap::new();
    for (w, x) in &d.decorations {
        let Deco::Atom(x) = x else { return None };
        decorations.insert(w.clone(), Deco::Atom(apply_site_map(p, q, f, x, &d.vertex_profile(w))?));
    }
    let profile = ColoredObject::new(d.profile.coloring.iter().map(|(s, c)| (s.clone(), f.f0[c].clone())).collect());
    DecoratedGraph::new(shape, d.order.clone(), profile, decorations).ok()
}

/// Enumerates site operad maps by backtracking over canonical fiber slots.
pub fn site_operad_maps(p: &dyn Operad, q: &dyn Operad, site: &Site) -> Result<Vec<SiteOperadMap>, NerveError> {
    let arity = super::lcons::max_arity(site);
    let cp: Vec<Name> = p.colors().elements().cloned().collect();
    let cq: Vec<Name> = q.colors().elements().cloned().collect();
    let decorations = site_decorations(p, site)?;
    let mut out = Vec::new();
    let f0s: Vec<BTreeMap<Name, Name>> = if cp.is_empty() {
        vec![BTreeMap::new()]
    } else {
        cp.iter()
            .map(|_| cq.iter())
            .multi_cartesian_product()
            .map(|ch| cp.iter().cloned().zip(ch.into_iter().cloned()).collect::<BTreeMap<Name, Name>>())
            .filter(|f0| cp.iter().all(|c| q.colors().dagger(&f0[c]) == Some(&f0[p.colors().dagger(c).unwrap()])))
            .collect()
    };
    for f0 in f0s {
        let mut slots: Vec<(Vec<Name>, Elem, Vec<Elem>)> = Vec::new();
        for n in 0..=arity {
            for cs in (0..n).map(|_| cp.iter().cloned()).multi_cartesian_product() {
                let qcs: Vec<Name> = cs.iter().map(|c| f0[c].clone()).collect();
                let dom = q.fiber(&canon_profile(&qcs))?;
                for x in p.fiber(&canon_profile(&cs))? {
                    slots.push((cs.clone(), x, dom.clone()));
                }
            }
        }
        let mut f = SiteOperadMap { f0: f0.clone(), f: BTreeMap::new() };
        search_slots(p, q, &decorations, &slots, 0, &mut f, &mut out);
    }
    Ok(out)
}

/// A partial map is rejected as soon as a check it fully determines fails.
fn violated(p: &dyn Operad, q: &dyn Operad, decorations: &[DecoratedGraph], f: &SiteOperadMap, cs: &[Name], x: &Elem) -> bool {
    let n = cs.len();
    let cp = canon_profile(cs);
    // equivariance under every permutation of the canonical carrier
    for perm in (0..n).permutations(n) {
        let sigma: BTreeMap<Name, Name> = (0..n).map(|k| (format!("s{k}"), format!("s{}", perm[k]))).collect();
        let cs2: Vec<Name> = (0..n).map(|k| cs[perm.iter().position(|&j| j == k).unwrap()].clone()).collect();
        let cp2 = canon_profile(&cs2);
        let Ok(x2) = p.relabel(x, &cp, &sigma, &cp2) else { return true };
        let Some(y2) = f.f.get(&(cs2.clone(), x2)) else { continue };
        let y = &f.f[&(cs.to_vec(), x.clone())];
        let qcs: Vec<Name> = cs.iter().map(|c| f.f0[c].clone()).collect();
        let qcs2: Vec<Name> = cs2.iter().map(|c| f.f0[c].clone()).collect();
        match q.relabel(y, &canon_profile(&qcs), &sigma, &canon_profile(&qcs2)) {
            Ok(z) if z == *y2 => {}
            _ => return true,
        }
    }
    for d in decorations {
        let Ok(r) = p.gamma(d) else { continue };
        let Some(lhs) = apply_site_map(p, q, f, &r, &d.profile) else { continue };
        let Some(dq) = map_decorated(q, p, f, d) else { continue };
        match q.gamma(&dq) {
            Ok(rhs) if rhs == lhs => {}
            _ => return true,
        }
    }
    false
}

fn search_slots(
    p: &dyn Operad,
    q: &dyn Operad,
    decorations: &[DecoratedGraph],
    slots: &[(Vec<Name>, Elem, Vec<Elem>)],
    i: usize,
    f: &mut SiteOperadMap,
    out: &mut Vec<SiteOperadMap>,
) {
    if i == slots.len() {
        out.push(SiteOperadMap { f0: f.f0.clone(), f: f.f.clone() });
        return;
    }
    let (cs, x, dom) = &slots[i];
    for y in dom {
        f.f.insert((cs.clone(), x.clone()), y.clone());
        if !violated(p, q, decorations, f, cs, x) {
            search_slots(p, q, decorations, slots, i + 1, f, out);
        }
    }
    f.f.remove(&(cs.clone(), x.clone()));
}

#[derive(Debug, Clone)]
pub struct FullyFaithfulReport {
    pub presheaf_maps: usize,
    pub operad_maps: usize,
    /// Every operad map induces one of the presheaf maps, and distinct ones induce distinct maps.
    pub induced_injectively: bool,
}

impl FullyFaithfulReport {
    pub fn holds(&self) -> bool {
        self.induced_injectively && self.presheaf_maps == self.operad_maps
    }
}

/// The morphism of nerves induced by a site operad map, as component tables.
fn induced(p: &dyn Operad, q: &dyn Operad, f: &SiteOperadMap, site: &Site, y: &Presheaf) -> Option<Vec<Vec<usize>>> {
    let mut comps = Vec::new();
    for (o, (_, g)) in site.objects.iter().enumerate() {
        let mut c = Vec::new();
        for z in nerve(p, g).ok()?.iter().sorted_by_key(|m| key(m)) {
            let f0: BTreeMap<Name, Name> = z.f0.iter().map(|(a, col)| (a.clone(), f.f0[col].clone())).collect();
            let mut f1 = BTreeMap::new();
            for (v, x) in &z.f1 {
                f1.insert(v.clone(), apply_site_map(p, q, f, x, &vertex_profile(g, &z.f0, v))?);
            }
            c.push(y.index_of(o, &key(&OperadMap { source: g.clone(), f0, f1 }))?);
        }
        comps.push(c);
    }
    Some(comps)
}

/// Counts presheaf maps `N P -> N Q` over the site and site operad maps `P -> Q`.
pub fn fullyfaithful_check(p: &dyn Operad, q: &dyn Operad, site: &Site) -> Result<FullyFaithfulReport, NerveError> {
    let x = nerve_presheaf(p, site)?;
    let y = nerve_presheaf(q, site)?;
    let nats: BTreeSet<Vec<Vec<usize>>> = natural_transformations(&x, &y, site).into_iter().collect();
    let ops = site_operad_maps(p, q, site)?;
    let mut images = BTreeSet::new();
    let mut ok = true;
    for f in &ops {
        match induced(p, q, f, site, &y) {
            Some(a) if nats.contains(&a) => {
                ok &= images.insert(a);
            }
            _ => ok = false,
        }
    }
    Ok(FullyFaithfulReport { presheaf_maps: nats.len(), operad_maps: ops.len(), induced_injectively: ok })
}

/// Segal condition at every object; the first failing object if any.
pub fn segal_everywhere(x: &Presheaf, site: &Site) -> Result<Option<String>, NerveError> {
    for o in 0..site.objects.len() {
        let r = segal_check(x, site, o)?;
        if !r.holds {
            return Ok(Some(format!("{}: {}", r.object, r.witness.unwrap_or_default())));
        }
    }
    Ok(None)
}

/// The limit of `X` over the comma category of site maps `G -> K` whose morphisms are the maps
/// of the smaller site, compared with `X_K` through the canonical map.
pub fn elementary_limit_check(x: &Presheaf, big: &Site, small: &Site, k: usize) -> Result<bool, NerveError> {
    // comma objects: big-site maps into k
    let objs: Vec<usize> = (0..big.objects.len()).flat_map(|s| big.hom(s, k).iter().copied()).collect();
    let pos: BTreeMap<usize, usize> = objs.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    // morphisms (a -> b) given by small-site maps g with b o g = a
    let mut arrows: Vec<(usize, usize, usize)> = Vec::new();
    for (bi, &b) in objs.iter().enumerate() {
        let gb = big.maps[b].src;
        for s in 0..small.objects.len() {
            for &g in small.hom(s, gb) {
                let gi = big.find(gb, &small.maps[g].map).ok_or_else(|| NerveError::BadSite("small map missing".into()))?;
                if let Some(c) = big.composite(b, gi) {
                    arrows.push((pos[&c], bi, gi));
                }
            }
        }
    }
    // x_a = X(g)(x_b) for each arrow; count solutions by backtracking from targets.
    let n = objs.len();
    let dom: Vec<usize> = objs.iter().map(|&m| x.values[big.maps[m].src].len()).collect();
    let mut val: Vec<Option<usize>> = vec![None; n];
    fn ok(val: &[Option<usize>], arrows: &[(usize, usize, usize)], x: &Presheaf) -> bool {
        arrows.iter().all(|&(a, b, g)| match (val[a], val[b]) {
            (Some(va), Some(vb)) => x.act(g, vb) == va,
            _ => true,
        })
    }
    fn count(i: usize, dom: &[usize], val: &mut Vec<Option<usize>>, arrows: &[(usize, usize, usize)], x: &Presheaf, sols: &mut Vec<Vec<usize>>) {
        if i == dom.len() {
            sols.push(val.iter().map(|v| v.unwrap()).collect());
            return;
        }
        for c in 0..dom[i] {
            val[i] = Some(c);
            if ok(val, arrows, x) {
                count(i + 1, dom, val, arrows, x, sols);
            }
        }
        val[i] = None;
    }
    let mut sols = Vec::new();
    count(0, &dom, &mut val, &arrows, x, &mut sols);
    let canon: BTreeSet<Vec<usize>> =
        (0..x.values[k].len()).map(|z| objs.iter().map(|&m| x.act(m, z)).collect()).collect();
    Ok(canon.len() == x.values[k].len() && canon == sols.into_iter().collect())
}

#[derive(Debug, Clone)]
pub struct JkReport {
    pub segal_big: bool,
    pub segal_small: bool,
    pub elementary_limits: Vec<(String, bool)>,
}

impl JkReport {
    pub fn holds(&self) -> bool {
        self.segal_big == self.segal_small && self.elementary_limits.iter().all(|(_, b)| *b)
    }
}

/// (a) Segal on the big site iff Segal after restriction; (b) the limit over the comma
/// category recovers `X` on each elementary object.
pub fn jk_checks(x: &Presheaf, big: &Site, small: &Site) -> Result<JkReport, NerveError> {
    let restricted = x.restrict(big, small)?;
    let segal_big = segal_everywhere(x, big)?.is_none();
    let segal_small = segal_everywhere(&restricted, small)?.is_none();
    let mut elementary_limits = Vec::new();
    for (o, (name, g)) in big.objects.iter().enumerate() {
        let elementary = g.is_edge() || (g.vertices().len() == 1 && g.internal_edges().is_empty());
        if elementary {
            elementary_limits.push((name.clone(), elementary_limit_check(x, big, small, o)?));
        }
    }
    Ok(JkReport { segal_big, segal_small, elementary_limits })
}

/// A morphism of presheaves as component tables; checks naturality and, when it is bijective on
/// elementary objects, that it is bijective everywhere.
pub fn elementary_bijection_check(x: &Presheaf, y: &Presheaf, site: &Site, alpha: &[Vec<usize>]) -> Result<bool, NerveError> {
    for (k, m) in site.maps.iter().enumerate() {
        for z in 0..x.values[m.tgt].len() {
            if y.act(k, alpha[m.tgt][z]) != alpha[m.src][x.act(k, z)] {
                return Err(NerveError::NotAPresheaf(format!("not natural along {}", site.map_name(k))));
            }
        }
    }
    let bij = |o: usize| {
        let s: BTreeSet<&usize> = alpha[o].iter().collect();
        s.len() == alpha[o].len() && alpha[o].len() == y.values[o].len()
    };
    let elementary: Vec<usize> = (0..site.objects.len())
        .filter(|&o| {
            let g = site.graph(o);
            g.is_edge() || (g.vertices().len() == 1 && g.internal_edges().is_empty())
        })
        .collect();
    if !elementary.iter().all(|&o| bij(o)) {
        return Ok(true);
    }
    Ok((0..site.objects.len()).all(bij))
}

/// Component tables of the morphism of nerves induced by post-composition with `f`.
pub fn postcompose_morphism(
    p: &dyn Operad,
    y: &Presheaf,
    site: &Site,
    f: impl Fn(&OperadMap) -> Option<OperadMap>,
) -> Result<Vec<Vec<usize>>, NerveError> {
    let mut comps = Vec::new();
    for (o, (name, g)) in site.objects.iter().enumerate() {
        let mut c = Vec::new();
        for z in nerve(p, g)?.iter().sorted_by_key(|m| key(m)) {
            let w = f(z).ok_or_else(|| NerveError::NotAPresheaf(format!("image undefined at {name}")))?;
            c.push(y.index_of(o, &key(&w)).ok_or_else(|| NerveError::NotAPresheaf(format!("image outside target at {name}")))?);
        }
        comps.push(c);
    }
    Ok(comps)
}
