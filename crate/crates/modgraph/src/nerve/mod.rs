//! Finite sites of graphs, presheaves on them, the modular nerve, the Segal condition, and the
//! operad underlying a Segal presheaf.

pub mod checks;
pub mod lcons;
pub mod segal;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::etale::EmbeddingClass;
use crate::graph::{cycle, edge, linear, star, Graph};
use crate::graphical::{homset, make_graphical_map, GraphicalMap, MapError, Mode};
use crate::involutive::Name;
use crate::iso::find_isomorphism;
use crate::modops::maps::{compose_operad_maps, jk_homset, maps_from_free};
use crate::modops::{j_functor, FreeModularOperad, Operad, OperadError, OperadMap};

pub use checks::{fullyfaithful_check, jk_checks, roundtrip_reports, FullyFaithfulReport, JkReport, RoundtripReport};
pub use lcons::SegalOperad;
pub use segal::{segal_check, SegalReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerveError {
    #[error("site lacks a segal-core object or map: {0}")]
    MissingCoreObject(String),
    #[error("site lacks the active map for {0}")]
    MissingActiveMap(String),
    #[error("segal condition fails: {0}")]
    SegalFailure(String),
    #[error("not a presheaf: {0}")]
    NotAPresheaf(String),
    #[error("bad site: {0}")]
    BadSite(String),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// `U` realizes maps as images under `J`; `Jk` takes all maps between free operads whose vertex
/// values have at most the given number of vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteMode {
    U,
    Jk(usize),
}

impl fmt::Display for SiteMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteMode::U => write!(f, "U"),
            SiteMode::Jk(b) => write!(f, "jk {b}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SiteMap {
    pub src: usize,
    pub tgt: usize,
    pub map: OperadMap,
}

/// A full subcategory on finitely many graphs. Composites that leave a truncated hom-set are
/// absent from the composition table.
#[derive(Debug, Clone)]
pub struct Site {
    pub mode: SiteMode,
    pub objects: Vec<(String, Graph)>,
    pub maps: Vec<SiteMap>,
    pub homs: BTreeMap<(usize, usize), Vec<usize>>,
    index: BTreeMap<(usize, OperadMap), usize>,
}

/// The standard objects: the edge, stars up to four legs, and four composite graphs.
pub fn standard_objects() -> Vec<(String, Graph)> {
    let mut out = vec![("edge".to_string(), edge())];
    for n in 0..=4 {
        out.push((format!("star{n}"), star(n)));
    }
    let fork = Graph::new(
        &[("a", "a*"), ("b", "b*"), ("x", "y"), ("c", "c*")],
        &["u", "w"],
        &[("a", "u"), ("b", "u"), ("x", "u"), ("y", "w"), ("c", "w")],
        None,
    )
    .unwrap();
    let tadpole = Graph::new(&[("a", "a*"), ("x", "y")], &["u"], &[("a", "u"), ("x", "u"), ("y", "u")], None).unwrap();
    out.push(("line2".to_string(), linear(2)));
    out.push(("fork".to_string(), fork));
    out.push(("tadpole".to_string(), tadpole));
    out.push(("loop1".to_string(), cycle(1)));
    out
}

impl Site {
    pub fn build(objects: Vec<(String, Graph)>, mode: SiteMode) -> Result<Site, NerveError> {
        let mut site = Site { mode, objects, maps: Vec::new(), homs: BTreeMap::new(), index: BTreeMap::new() };
        let n = site.objects.len();
        for s in 0..n {
            for t in 0..n {
                let (h, g) = (&site.objects[s].1, &site.objects[t].1);
                let maps: Vec<OperadMap> = match mode {
                    SiteMode::U => {
                        let mut v: Vec<OperadMap> =
                            homset(h, g, Mode::Strict).iter().map(j_functor).collect::<Result<_, _>>()?;
                        v.sort();
                        v
                    }
                    SiteMode::Jk(b) => jk_homset(h, g, b),
                };
                let mut ids = Vec::new();
                for m in maps {
                    let k = site.maps.len();
                    site.index.insert((t, m.clone()), k);
                    site.maps.push(SiteMap { src: s, tgt: t, map: m });
                    ids.push(k);
                }
                site.homs.insert((s, t), ids);
            }
        }
        site.validate()?;
        Ok(site)
    }

    pub fn standard(mode: SiteMode) -> Site {
        Site::build(standard_objects(), mode).expect("standard site is adequate")
    }

    /// Requires the edge, identities, and every star and map used by a segal core.
    pub fn validate(&self) -> Result<(), NerveError> {
        self.edge_object().ok_or_else(|| NerveError::BadSite("no edge object".into()))?;
        for o in 0..self.objects.len() {
            self.identity(o).ok_or_else(|| NerveError::BadSite(format!("no identity on {}", self.objects[o].0)))?;
            segal::core_maps(self, o)?;
        }
        Ok(())
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|(n, _)| n == name)
    }

    pub fn graph(&self, o: usize) -> &Graph {
        &self.objects[o].1
    }

    pub fn hom(&self, s: usize, t: usize) -> &[usize] {
        &self.homs[&(s, t)]
    }

    pub fn find(&self, tgt: usize, m: &OperadMap) -> Option<usize> {
        self.index.get(&(tgt, m.clone())).copied()
    }

    /// The site map equal to `J(phi)`, with `phi` landing in object `tgt`.
    pub fn find_graphical(&self, tgt: usize, phi: &GraphicalMap) -> Option<usize> {
        self.find(tgt, &j_functor(phi).ok()?)
    }

    pub fn identity(&self, o: usize) -> Option<usize> {
        let g = self.graph(o);
        self.find_graphical(o, &crate::graphical::identity(g, Mode::Strict))
    }

    /// `psi o phi`, when it lies in the site.
    pub fn composite(&self, psi: usize, phi: usize) -> Option<usize> {
        let (p, f) = (&self.maps[psi], &self.maps[phi]);
        if f.tgt != p.src {
            return None;
        }
        let free = FreeModularOperad::new(self.graph(p.tgt), usize::MAX);
        let m = compose_operad_maps(&p.map, &f.map, &free).ok()?;
        self.find(p.tgt, &m)
    }

    /// Endomaps of `o` with a two-sided inverse in the site.
    pub fn automorphisms(&self, o: usize) -> Vec<usize> {
        let id = self.identity(o);
        let ends = self.hom(o, o);
        ends.iter()
            .copied()
            .filter(|&k| ends.iter().any(|&j| self.composite(k, j) == id && self.composite(j, k) == id))
            .collect()
    }

    pub fn map_name(&self, k: usize) -> String {
        let m = &self.maps[k];
        let pos = self.hom(m.src, m.tgt).iter().position(|&j| j == k).unwrap();
        format!("{}--{}--{}", self.objects[m.src].0, self.objects[m.tgt].0, pos)
    }

    pub fn edge_object(&self) -> Option<usize> {
        self.objects.iter().position(|(_, g)| g.is_edge())
    }

    /// A one-vertex object with `n` legs and no loops.
    pub fn star_object(&self, n: usize) -> Option<usize> {
        self.objects.iter().position(|(_, g)| {
            g.vertices().len() == 1 && g.num_arcs() == 2 * n && g.boundary().len() == n && g.internal_edges().is_empty()
        })
    }

    /// An object isomorphic to `k`, with an isomorphism from the object onto `k`.
    pub fn find_object(&self, k: &Graph) -> Option<(usize, crate::iso::GraphIso)> {
        self.objects.iter().enumerate().find_map(|(o, (_, g))| find_isomorphism(g, k).map(|z| (o, z)))
    }

    /// Builds and looks up a strict graphical map given by arc and class data.
    pub fn lookup(
        &self,
        src: usize,
        tgt: usize,
        phi0: BTreeMap<Name, Name>,
        phi1: BTreeMap<Name, EmbeddingClass>,
    ) -> Result<usize, NerveError> {
        let phi = make_graphical_map(self.graph(src), self.graph(tgt), phi0, phi1, Mode::Strict)?;
        self.find_graphical(tgt, &phi).ok_or_else(|| {
            NerveError::MissingActiveMap(format!("{} -> {}", self.objects[src].0, self.objects[tgt].0))
        })
    }

    /// Sorted darts of the unique vertex of a star object: position `k` is the `k`-th dart.
    pub fn star_positions(&self, o: usize) -> (Name, Vec<Name>) {
        let g = self.graph(o);
        let v = g.vertices().iter().next().unwrap().clone();
        (v.clone(), g.nbhd(&v).into_iter().collect())
    }
}

/// A presheaf on a site: sorted value sets per object, and per map `m: H -> G` the table of
/// `X(m): X_G -> X_H` as indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    pub values: Vec<Vec<String>>,
    pub action: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn index_of(&self, o: usize, v: &str) -> Option<usize> {
        self.values[o].binary_search_by(|x| x.as_str().cmp(v)).ok()
    }

    pub fn act(&self, m: usize, x: usize) -> usize {
        self.action[m][x]
    }

    /// Checks table shapes, identities, and contravariant composition on every composable pair
    /// whose composite lies in the site.
    pub fn check_functor(&self, site: &Site) -> Result<usize, NerveError> {
        if self.values.len() != site.objects.len() || self.action.len() != site.maps.len() {
            return Err(NerveError::NotAPresheaf("table sizes".into()));
        }
        for (k, m) in site.maps.iter().enumerate() {
            if self.action[k].len() != self.values[m.tgt].len()
                || self.action[k].iter().any(|&y| y >= self.values[m.src].len())
            {
                return Err(NerveError::NotAPresheaf(format!("action table of {}", site.map_name(k))));
            }
        }
        for o in 0..site.objects.len() {
            let id = site.identity(o).unwrap();
            if self.action[id].iter().enumerate().any(|(i, &j)| i != j) {
                return Err(NerveError::NotAPresheaf(format!("identity on {}", site.objects[o].0)));
            }
        }
        let mut checked = 0;
        for psi in 0..site.maps.len() {
            let mid = site.maps[psi].src;
            for s in 0..site.objects.len() {
                for &phi in site.hom(s, mid) {
                    let Some(c) = site.composite(psi, phi) else { continue };
                    checked += 1;
                    for x in 0..self.values[site.maps[psi].tgt].len() {
                        if self.act(c, x) != self.act(phi, self.act(psi, x)) {
                            return Err(NerveError::NotAPresheaf(format!(
                                "composite of {} and {}",
                                site.map_name(psi),
                                site.map_name(phi)
                            )));
                        }
                    }
                }
            }
        }
        Ok(checked)
    }

    /// Renames values by `f` and re-sorts, carrying the tables along.
    pub fn rename(&self, site: &Site, f: impl Fn(usize, usize, &str) -> String) -> Presheaf {
        let mut perm = Vec::new();
        let mut values = Vec::new();
        for (o, vs) in self.values.iter().enumerate() {
            let mut named: Vec<(String, usize)> = vs.iter().enumerate().map(|(i, v)| (f(o, i, v), i)).collect();
            named.sort();
            let mut p = vec![0; vs.len()];
            for (new, (_, old)) in named.iter().enumerate() {
                p[*old] = new;
            }
            perm.push(p);
            values.push(named.into_iter().map(|(n, _)| n).collect());
        }
        let mut action = self.action.clone();
        for (k, m) in site.maps.iter().enumerate() {
            for (x, &y) in self.action[k].iter().enumerate() {
                action[k][perm[m.tgt][x]] = perm[m.src][y];
            }
        }
        Presheaf { values, action }
    }

    /// Opaque names `x<object>.<index>` that carry no operad data.
    pub fn anonymize(&self, site: &Site) -> Presheaf {
        self.rename(site, |o, i, _| format!("x{o}.{i:04}"))
    }

    /// Deletes `x` from `X_o` and everything that restricts onto a deleted element; the result
    /// is again a presheaf.
    pub fn delete_closure(&self, site: &Site, o: usize, x: usize) -> Presheaf {
        let mut dead: Vec<Vec<bool>> = self.values.iter().map(|v| vec![false; v.len()]).collect();
        dead[o][x] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for (k, m) in site.maps.iter().enumerate() {
                for z in 0..self.values[m.tgt].len() {
                    if !dead[m.tgt][z] && dead[m.src][self.action[k][z]] {
                        dead[m.tgt][z] = true;
                        changed = true;
                    }
                }
            }
        }
        let keep: Vec<Vec<usize>> = dead
            .iter()
            .map(|d| d.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i).collect())
            .collect();
        let newpos: Vec<BTreeMap<usize, usize>> =
            keep.iter().map(|k| k.iter().enumerate().map(|(n, &o)| (o, n)).collect()).collect();
        let values = keep.iter().enumerate().map(|(o, k)| k.iter().map(|&i| self.values[o][i].clone()).collect()).collect();
        let action = site
            .maps
            .iter()
            .enumerate()
            .map(|(k, m)| keep[m.tgt].iter().map(|&z| newpos[m.src][&self.action[k][z]]).collect())
            .collect();
        Presheaf { values, action }
    }

    /// Adds a copy `x'` of the automorphism orbit of `x` in `X_o`. Automorphisms of `o` act on the
    /// copies as on the originals; every other map sends a copy where it sends the original.
    /// The Segal map at `o` then stops being injective whenever `o` has vertices.
    pub fn duplicate_orbit(&self, site: &Site, o: usize, x: usize) -> Presheaf {
        let autos = site.automorphisms(o);
        let orbit: BTreeSet<usize> = autos.iter().map(|&k| self.act(k, x)).collect();
        let copies: BTreeMap<usize, String> = orbit.iter().map(|&z| (z, format!("{}'", self.values[o][z]))).collect();
        let mut values = self.values.clone();
        values[o].extend(copies.values().cloned());
        values[o].sort();
        let renumber = |p: usize, z: usize| values[p].binary_search(&self.values[p][z]).unwrap();
        let copy_at = |z: usize| values[o].binary_search(&copies[&z]).unwrap();
        let mut action = Vec::with_capacity(site.maps.len());
        for (k, m) in site.maps.iter().enumerate() {
            let mut t = vec![0; values[m.tgt].len()];
            for (z, &y) in self.action[k].iter().enumerate() {
                t[renumber(m.tgt, z)] = renumber(m.src, y);
            }
            if m.tgt == o {
                for &z in &orbit {
                    let y = self.action[k][z];
                    t[copy_at(z)] = if autos.contains(&k) { copy_at(y) } else { renumber(m.src, y) };
                }
            }
            action.push(t);
        }
        Presheaf { values, action }
    }

    /// Restriction along an inclusion of sites with the same objects: `iota^* X`.
    pub fn restrict(&self, from: &Site, to: &Site) -> Result<Presheaf, NerveError> {
        let mut action = Vec::new();
        for (k, m) in to.maps.iter().enumerate() {
            let j = from
                .find(m.tgt, &m.map)
                .ok_or_else(|| NerveError::BadSite(format!("map {} is missing from the larger site", to.map_name(k))))?;
            action.push(self.action[j].clone());
        }
        Ok(Presheaf { values: self.values.clone(), action })
    }
}

/// The nerve as a presheaf: values are keyed maps `M(G) -> P`, and a site map acts by
/// precomposition.
pub fn nerve_presheaf(p: &dyn Operad, site: &Site) -> Result<Presheaf, NerveError> {
    let mut elems = Vec::new();
    let mut values = Vec::new();
    for (_, g) in &site.objects {
        let ms = nerve(p, g)?;
        let mut keyed: Vec<(String, OperadMap)> = ms.into_iter().map(|m| (key(&m), m)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        values.push(keyed.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>());
        elems.push(keyed.into_iter().map(|(_, m)| m).collect::<Vec<_>>());
    }
    let x = Presheaf { values, action: Vec::new() };
    let mut action = Vec::with_capacity(site.maps.len());
    for (k, m) in site.maps.iter().enumerate() {
        let mut table = Vec::with_capacity(elems[m.tgt].len());
        for y in &elems[m.tgt] {
            let z = compose_operad_maps(y, &m.map, p)?;
            let i = x.index_of(m.src, &key(&z)).ok_or_else(|| {
                NerveError::NotAPresheaf(format!("restriction along {} leaves the nerve", site.map_name(k)))
            })?;
            table.push(i);
        }
        action.push(table);
    }
    Ok(Presheaf { values: x.values, action })
}

/// All maps `M(G) -> P`, keyed.
pub fn nerve(p: &dyn Operad, g: &Graph) -> Result<Vec<OperadMap>, NerveError> {
    Ok(maps_from_free(g, p)?)
}

/// A one-line key for a nerve element.
pub fn key(m: &OperadMap) -> String {
    let f0: Vec<String> = m.f0.iter().map(|(a, c)| format!("{a}={c}")).collect();
    let f1: Vec<String> = m.f1.iter().map(|(v, x)| format!("{v}={x}")).collect();
    format!("f0[{}] f1[{}]", f0.join(" "), f1.join(" "))
}
