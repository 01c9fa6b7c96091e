//! The Segal map of a presheaf at a site object, computed against the equalizer of its stars
//! over its internal edges.

use std::collections::BTreeMap;

use super::{NerveError, Presheaf, Site};
use crate::etale::EmbeddingClass;
use crate::involutive::Name;

/// Site maps realizing the segal core of an object.
#[derive(Debug, Clone)]
pub struct CoreMaps {
    /// Per vertex of the object, in sorted order: the star object and the map `star -> G`
    /// sending position `k` to the `k`-th sorted dart.
    pub stars: Vec<(Name, usize, usize)>,
    /// Per internal edge `(x1, x2)`: the vertex slots of `x1` and `x2` and the maps
    /// `edge -> star` picking the dart at `x1` and the boundary arc over `x1` at the other end.
    pub edges: Vec<(usize, usize, usize, usize)>,
}

/// `g_k: e -> k-th dart` and `h_k: e -> k-th boundary arc` of a star object.
pub fn edge_maps(site: &Site, star: usize, k: usize) -> Result<(usize, usize), NerveError> {
    let e = site.edge_object().ok_or_else(|| NerveError::MissingCoreObject("edge".into()))?;
    let eg = site.graph(e);
    let e0 = eg.arcs().next().unwrap().clone();
    let e1 = eg.inv(&e0).clone();
    let s = site.graph(star);
    let (_, pos) = site.star_positions(star);
    let d = pos[k].clone();
    let b = s.inv(&d).clone();
    let g = site.lookup(e, star, [(e0.clone(), d.clone()), (e1.clone(), b.clone())].into(), BTreeMap::new());
    let h = site.lookup(e, star, [(e0, b), (e1, d)].into(), BTreeMap::new());
    match (g, h) {
        (Ok(g), Ok(h)) => Ok((g, h)),
        _ => Err(NerveError::MissingCoreObject(format!("edge maps into {}", site.objects[star].0))),
    }
}

/// The map `star_n -> G` at vertex `v` realizing position order by sorted darts.
pub fn star_map(site: &Site, o: usize, v: &Name) -> Result<(usize, usize), NerveError> {
    let g = site.graph(o);
    let darts: Vec<Name> = g.nbhd(v).into_iter().collect();
    let so = site
        .star_object(darts.len())
        .ok_or_else(|| NerveError::MissingCoreObject(format!("star with {} legs", darts.len())))?;
    let s = site.graph(so);
    let (sv, pos) = site.star_positions(so);
    let mut phi0 = BTreeMap::new();
    for (p, d) in pos.iter().zip(&darts) {
        phi0.insert(p.clone(), d.clone());
        phi0.insert(s.inv(p).clone(), g.inv(d).clone());
    }
    let phi1 = [(sv, EmbeddingClass::of_vertex(g, v))].into();
    let m = site
        .lookup(so, o, phi0, phi1)
        .map_err(|_| NerveError::MissingCoreObject(format!("star of `{v}` in {}", site.objects[o].0)))?;
    Ok((so, m))
}

pub fn core_maps(site: &Site, o: usize) -> Result<CoreMaps, NerveError> {
    let g = site.graph(o);
    let mut stars = Vec::new();
    let mut slot = BTreeMap::new();
    for v in g.vertices() {
        let (so, m) = star_map(site, o, v)?;
        slot.insert(v.clone(), stars.len());
        stars.push((v.clone(), so, m));
    }
    let mut edges = Vec::new();
    for (x1, x2) in g.internal_edges() {
        let (v1, v2) = (g.target(&x1).unwrap(), g.target(&x2).unwrap());
        let k1 = g.nbhd(v1).iter().position(|d| *d == x1).unwrap();
        let k2 = g.nbhd(v2).iter().position(|d| *d == x2).unwrap();
        let (i, j) = (slot[v1], slot[v2]);
        let (gk, _) = edge_maps(site, stars[i].1, k1)?;
        let (_, hk) = edge_maps(site, stars[j].1, k2)?;
        edges.push((i, gk, j, hk));
    }
    Ok(CoreMaps { stars, edges })
}

/// The Segal map `X_G -> X_{Sc[G]}` as tuples of star values, together with the equalizer.
pub struct SegalData {
    pub image: Vec<Vec<usize>>,
    pub equalizer: Vec<Vec<usize>>,
}

pub fn segal_data(x: &Presheaf, site: &Site, o: usize) -> Result<SegalData, NerveError> {
    let core = core_maps(site, o)?;
    let image = (0..x.values[o].len())
        .map(|z| core.stars.iter().map(|(_, _, m)| x.act(*m, z)).collect())
        .collect();
    // Equalizer of the product of star values over the edges.
    let mut equalizer = vec![Vec::new()];
    for (slot, (_, so, _)) in core.stars.iter().enumerate() {
        let mut next = Vec::new();
        for t in &equalizer {
            for y in 0..x.values[*so].len() {
                let mut t2: Vec<usize> = t.clone();
                t2.push(y);
                let ok = core.edges.iter().all(|&(i, gk, j, hk)| {
                    if i.max(j) != slot {
                        return true;
                    }
                    x.act(gk, t2[i]) == x.act(hk, t2[j])
                });
                if ok {
                    next.push(t2);
                }
            }
        }
        equalizer = next;
    }
    if core.stars.is_empty() {
        // Vertexless objects are their own segal core.
        let image: Vec<Vec<usize>> = (0..x.values[o].len()).map(|z| vec![z]).collect();
        return Ok(SegalData { equalizer: image.clone(), image });
    }
    Ok(SegalData { image, equalizer })
}

#[derive(Debug, Clone)]
pub struct SegalReport {
    pub object: String,
    pub holds: bool,
    pub witness: Option<String>,
}

/// Tests bijectivity of the Segal map at object `o`.
pub fn segal_check(x: &Presheaf, site: &Site, o: usize) -> Result<SegalReport, NerveError> {
    let d = segal_data(x, site, o)?;
    let name = site.objects[o].0.clone();
    let mut seen: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
    for (z, t) in d.image.iter().enumerate() {
        if let Some(z0) = seen.insert(t, z) {
            let w = format!("`{}` and `{}` have the same restriction to the stars", x.values[o][z0], x.values[o][z]);
            return Ok(SegalReport { object: name, holds: false, witness: Some(w) });
        }
    }
    for t in &d.equalizer {
        if !seen.contains_key(t) {
            let core = core_maps(site, o)?;
            let parts: Vec<String> =
                t.iter().zip(&core.stars).map(|(y, (v, so, _))| format!("{v}: {}", x.values[*so][*y])).collect();
            let w = format!("matching star family has no preimage: {}", parts.join("; "));
            return Ok(SegalReport { object: name, holds: false, witness: Some(w) });
        }
    }
    Ok(SegalReport { object: name, holds: true, witness: None })
}

/// The inverse of the Segal map at `o`, defined when it is a bijection.
pub fn segal_inverse(x: &Presheaf, site: &Site, o: usize) -> Result<BTreeMap<Vec<usize>, usize>, NerveError> {
    let r = segal_check(x, site, o)?;
    if !r.holds {
        return Err(NerveError::SegalFailure(format!("{}: {}", r.object, r.witness.unwrap_or_default())));
    }
    let d = segal_data(x, site, o)?;
    Ok(d.image.into_iter().enumerate().map(|(z, t)| (t, z)).collect())
}
