//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modgraph::etale::{check_etale, embedding_class, enumerate_embeddings, EmbeddingClass, EtaleMap};
use modgraph::gen::{
    color_sets, connected_safe_graphs, decorations, label_decorated, random_coloring, random_connected_graph,
    random_decorated, three_level, two_level,
};
use modgraph::graph::*;
use modgraph::graphical::{
    compose, factorize, from_embedding, homset, identity, is_active, is_embedding_map, make_graphical_map,
    GraphicalMap, MapError, Mode,
};
use modgraph::involutive::{ColoredObject, InvolutiveSet, Name};
use modgraph::iso::{graph_code, isomorphisms};
use modgraph::modops::decorated::{unit_shape, FreeCollection};
use modgraph::modops::maps::vertex_profile;
use modgraph::modops::tabulated::multisets_up_to;
use modgraph::modops::{
    biased_gamma, check_algebra_laws, compose_operad_maps, decorated_equal, free_elements, j_functor, jk_homset,
    maps_from_free, monad_mult, Deco, DecoratedGraph, FreeModularOperad, Operad, OperadError, OperadMap,
    TabulatedOperad,
};
use modgraph::nerve::checks::{
    elementary_bijection_check, fullyfaithful_check, jk_checks, nerve_equalizer_check, postcompose_morphism,
    roundtrip_reports,
};
use modgraph::nerve::{nerve_presheaf, segal_check, standard_objects, Presheaf, Site, SiteMode};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn s(x: &str) -> String {
    x.to_string()
}

fn map_of(pairs: &[(&str, &str)]) -> BTreeMap<Name, Name> {
    pairs.iter().map(|(a, b)| (s(a), s(b))).collect()
}

// ---------------------------------------------------------------- criterion 1

fn graph_axioms() -> Outcome {
    let mut valid: Vec<(String, Graph)> = vec![(s("edge"), edge()), (s("nodeless loop"), nodeless_loop())];
    for n in 0..=6 {
        valid.push((format!("star{n}"), star(n)));
    }
    for n in 1..=5 {
        valid.push((format!("linear{n}"), linear(n)));
        valid.push((format!("cycle{n}"), cycle(n)));
    }
    valid.push((s("square cover"), square_cover()));
    valid.push((s("double edge"), double_edge()));
    for (name, g) in &valid {
        ensure!(g.validate().is_ok(), "{name} fails validation");
    }
    ensure!(star(4).vertices().iter().all(|v| star(4).valence(v) == 4), "star4 has the wrong valence");
    ensure!(edge().is_edge() && nodeless_loop().is_nodeless_loop(), "exceptional graphs misclassified");

    let none: Option<&[&str]> = None;
    let cases: Vec<(&str, Result<Graph, GraphError>, fn(&GraphError) -> bool)> = vec![
        ("self-paired arc", Graph::new(&[("a", "a")], &[], &[], none), |e| matches!(e, GraphError::FixedArc(_))),
        ("arc in two classes", Graph::new(&[("a", "b"), ("a", "c")], &[], &[], none), |e| {
            matches!(e, GraphError::DuplicateArc(_))
        }),
        ("vertex declared twice", Graph::new(&[("a", "b")], &["v", "v"], &[], none), |e| {
            matches!(e, GraphError::DuplicateVertex(_))
        }),
        ("dart on two vertices", Graph::new(&[("a", "b")], &["v", "w"], &[("a", "v"), ("a", "w")], none), |e| {
            matches!(e, GraphError::DuplicateDart(_))
        }),
        ("dart outside the arcs", Graph::new(&[("a", "b")], &["v"], &[("z", "v")], none), |e| {
            matches!(e, GraphError::DartNotArc(_))
        }),
        ("incidence to an undeclared vertex", Graph::new(&[("a", "b")], &["v"], &[("a", "u")], none), |e| {
            matches!(e, GraphError::UnknownVertex(_))
        }),
        ("boundary outside the arcs", Graph::new(&[("a", "b")], &["v"], &[("a", "v")], Some(&["z"][..])), |e| {
            matches!(e, GraphError::BoundaryNotArc(_))
        }),
        ("boundary meets a dart", Graph::new(&[("a", "b")], &["v"], &[("a", "v")], Some(&["a", "b"][..])), |e| {
            matches!(e, GraphError::BoundaryMeetsDarts(_))
        }),
        ("leg without boundary partner", Graph::new(&[("a", "b")], &["v"], &[("a", "v")], Some(&[][..])), |e| {
            matches!(e, GraphError::AxiomC(_))
        }),
        ("half of a nodeless pair in the boundary", Graph::new(&[("a", "b")], &[], &[], Some(&["a"][..])), |e| {
            matches!(e, GraphError::AxiomD(_))
        }),
        (
            "non-involutive pairing map",
            Graph::from_parts(map_of(&[("a", "b"), ("b", "c"), ("c", "a")]), BTreeMap::new(), BTreeSet::new(), None),
            |e| matches!(e, GraphError::DuplicateArc(_)),
        ),
        (
            "fixed point in a raw pairing map",
            Graph::from_parts(map_of(&[("a", "a")]), BTreeMap::new(), BTreeSet::new(), None),
            |e| matches!(e, GraphError::FixedArc(_)),
        ),
    ];
    for (name, r, ok) in &cases {
        match r {
            Err(e) if ok(e) => {}
            other => return Err(format!("{name}: got {other:?}")),
        }
    }
    Ok(format!("{} constructors valid, {} invalid inputs rejected", valid.len(), cases.len()))
}

// ---------------------------------------------------------------- criteria 2, 3

/// Every connected graph on `deg.len()` vertices with exactly these valences, one per
/// isomorphism class; boundary is every non-dart arc.
fn graphs_with_degrees(deg: &[usize]) -> Vec<Graph> {
    #[derive(Clone, Copy)]
    enum Slot {
        Edge(usize, usize),
        Leg(usize),
    }
    let n = deg.len();
    let mut kinds = Vec::new();
    for i in 0..n {
        kinds.push(Slot::Edge(i, i));
        kinds.push(Slot::Leg(i));
        for j in i + 1..n {
            kinds.push(Slot::Edge(i, j));
        }
    }
    fn rec(kinds: &[Slot], k: usize, rem: &mut Vec<usize>, slots: &mut Vec<Slot>, out: &mut Vec<Vec<Slot>>) {
        if k == kinds.len() {
            if rem.iter().all(|&r| r == 0) {
                out.push(slots.clone());
            }
            return;
        }
        let mut pushed = 0;
        loop {
            rec(kinds, k + 1, rem, slots, out);
            let fits = match kinds[k] {
                Slot::Edge(i, j) if i == j => rem[i] >= 2,
                Slot::Edge(i, j) => rem[i] >= 1 && rem[j] >= 1,
                Slot::Leg(i) => rem[i] >= 1,
            };
            if !fits {
                break;
            }
            match kinds[k] {
                Slot::Edge(i, j) => {
                    rem[i] -= 1;
                    rem[j] -= 1;
                }
                Slot::Leg(i) => rem[i] -= 1,
            }
            slots.push(kinds[k]);
            pushed += 1;
        }
        for _ in 0..pushed {
            match slots.pop().unwrap() {
                Slot::Edge(i, j) => {
                    rem[i] += 1;
                    rem[j] += 1;
                }
                Slot::Leg(i) => rem[i] += 1,
            }
        }
    }
    let mut all = Vec::new();
    rec(&kinds, 0, &mut deg.to_vec(), &mut Vec::new(), &mut all);
    let vs: Vec<String> = (0..n).map(|i| format!("k{i}")).collect();
    let mut seen = BTreeMap::new();
    for slots in all {
        let mut pairs = Vec::new();
        let mut inc = Vec::new();
        for (k, sl) in slots.iter().enumerate() {
            match *sl {
                Slot::Edge(i, j) => {
                    pairs.push((format!("p{k}"), format!("q{k}")));
                    inc.push((format!("p{k}"), vs[i].clone()));
                    inc.push((format!("q{k}"), vs[j].clone()));
                }
                Slot::Leg(i) => {
                    pairs.push((format!("h{k}"), format!("h{k}'")));
                    inc.push((format!("h{k}"), vs[i].clone()));
                }
            }
        }
        let g = Graph::new(&pairs, &vs, &inc, None).unwrap();
        if g.is_connected() {
            seen.entry(graph_code(&g)).or_insert(g);
        }
    }
    seen.into_values().collect()
}

/// Brute force: every vertex-injective étale map from a connected source into `g`, with legs at
/// a common vertex taken in increasing target order (a subgroup of the source automorphisms).
fn brute_embeddings(g: &Graph) -> Vec<EtaleMap> {
    let mut out = Vec::new();
    for src in [edge(), nodeless_loop()] {
        let arcs: Vec<Name> = src.arcs().cloned().collect();
        for a in g.arcs() {
            let m: BTreeMap<Name, Name> = [(arcs[0].clone(), a.clone()), (arcs[1].clone(), g.inv(a).clone())].into();
            if let Ok(f) = check_etale(&src, g, &m, &BTreeMap::new()) {
                out.push(f);
            }
        }
    }
    let gv: Vec<Name> = g.vertices().iter().cloned().collect();
    let mut degree_seqs: BTreeSet<Vec<usize>> = BTreeSet::new();
    for k in 1..=gv.len() {
        for w in gv.iter().combinations(k) {
            let mut d: Vec<usize> = w.iter().map(|v| g.valence(v)).collect();
            d.sort();
            degree_seqs.insert(d);
        }
    }
    for deg in degree_seqs {
        for k in graphs_with_degrees(&deg) {
            let kv: Vec<Name> = k.vertices().iter().cloned().collect();
            for img in gv.iter().permutations(kv.len()) {
                if kv.iter().zip(&img).any(|(a, b)| k.valence(a) != g.valence(b)) {
                    continue;
                }
                let verts: BTreeMap<Name, Name> = kv.iter().cloned().zip(img.iter().map(|v| (*v).clone())).collect();
                let darts: Vec<Name> = kv
                    .iter()
                    .flat_map(|v| {
                        let nb: Vec<Name> = k.nbhd(v).into_iter().collect();
                        let (legs, rest): (Vec<Name>, Vec<Name>) = nb.into_iter().partition(|d| k.is_boundary(k.inv(d)));
                        legs.into_iter().chain(rest)
                    })
                    .collect();
                let mut assign: BTreeMap<Name, Name> = BTreeMap::new();
                dart_search(&k, g, &verts, &darts, 0, &mut assign, &mut out);
            }
        }
    }
    out
}

fn dart_search(
    k: &Graph,
    g: &Graph,
    verts: &BTreeMap<Name, Name>,
    darts: &[Name],
    i: usize,
    assign: &mut BTreeMap<Name, Name>,
    out: &mut Vec<EtaleMap>,
) {
    if i == darts.len() {
        let mut arcs = assign.clone();
        for (d, e) in assign.iter() {
            let p = k.inv(d);
            if !k.is_dart(p) {
                arcs.insert(p.clone(), g.inv(e).clone());
            }
        }
        if let Ok(f) = check_etale(k, g, &arcs, verts) {
            if f.is_embedding() {
                out.push(f);
            }
        }
        return;
    }
    let d = &darts[i];
    let v = k.target(d).unwrap();
    let is_leg = k.is_boundary(k.inv(d));
    let floor = if is_leg && i > 0 {
        let prev = &darts[i - 1];
        (k.target(prev) == Some(v) && k.is_boundary(k.inv(prev))).then(|| assign[prev].clone())
    } else {
        None
    };
    let used: BTreeSet<Name> = assign.values().cloned().collect();
    for e in g.nbhd(&verts[v]) {
        if used.contains(&e) || floor.as_ref().is_some_and(|f| &e <= f) {
            continue;
        }
        if let Some(pe) = assign.get(k.inv(d)) {
            if pe != g.inv(&e) {
                continue;
            }
        }
        assign.insert(d.clone(), e);
        dart_search(k, g, verts, darts, i + 1, assign, out);
        assign.remove(d);
    }
}

/// An isomorphism `z` with `f = h . z`, if one exists. Vertex-injective étale maps are injective
/// on darts, which pins `z` down; vertexless sources are searched exhaustively.
fn related(f: &EtaleMap, h: &EtaleMap) -> bool {
    if f.source.vertices().len() != h.source.vertices().len() || f.source.num_arcs() != h.source.num_arcs() {
        return false;
    }
    if f.source.vertices().is_empty() {
        return isomorphisms(&f.source, &h.source)
            .iter()
            .any(|z| f.source.arcs().all(|a| f.arcs[a] == h.arcs[&z.arcs[a]]));
    }
    let hv: BTreeMap<&Name, &Name> = h.vertices.iter().map(|(a, b)| (b, a)).collect();
    let ha: BTreeMap<&Name, &Name> =
        h.arcs.iter().filter(|(a, _)| h.source.is_dart(a)).map(|(a, b)| (b, a)).collect();
    let mut zv = BTreeMap::new();
    for (v, u) in &f.vertices {
        match hv.get(u) {
            Some(w) => zv.insert(v.clone(), (*w).clone()),
            None => return false,
        };
    }
    let mut za = BTreeMap::new();
    for d in f.source.darts() {
        match ha.get(&f.arcs[d]) {
            Some(e) => za.insert(d.clone(), (*e).clone()),
            None => return false,
        };
    }
    for d in f.source.darts() {
        let p = f.source.inv(d);
        if !f.source.is_dart(p) {
            za.insert(p.clone(), h.source.inv(&za[d]).clone());
        }
    }
    let z = modgraph::iso::GraphIso { arcs: za, vertices: zv };
    modgraph::iso::is_isomorphism(&f.source, &h.source, &z)
        && f.source.arcs().all(|a| f.arcs[a] == h.arcs[&z.arcs[a]])
}

/// Classes of brute-force embeddings under `f ~ h . z`, each with its image records.
fn oracle_classes(g: &Graph) -> Result<Vec<BTreeSet<EmbeddingClass>>, String> {
    let maps = brute_embeddings(g);
    let mut reps: Vec<(usize, BTreeSet<EmbeddingClass>)> = Vec::new();
    for (i, f) in maps.iter().enumerate() {
        let rec = embedding_class(f).map_err(|e| format!("record of a brute-force embedding: {e}"))?;
        match reps.iter_mut().find(|(j, _)| related(f, &maps[*j])) {
            Some((_, recs)) => {
                recs.insert(rec);
            }
            None => reps.push((i, [rec].into())),
        }
    }
    Ok(reps.into_iter().map(|(_, r)| r).collect())
}

fn embedding_oracle() -> Outcome {
    let catalog = connected_safe_graphs(3, 10);
    let mut total = 0;
    for g in &catalog {
        let classes = oracle_classes(g)?;
        let mut records = BTreeSet::new();
        for recs in &classes {
            ensure!(recs.len() == 1, "one iso class with records {recs:?} in\n{}", g.to_file_string("g"));
            ensure!(records.insert(recs.iter().next().unwrap().clone()), "two iso classes share a record in\n{}", g.to_file_string("g"));
        }
        let enumerated: BTreeSet<EmbeddingClass> = enumerate_embeddings(g).into_iter().collect();
        ensure!(records == enumerated, "enumeration disagrees with brute force in\n{}", g.to_file_string("g"));
        total += records.len();
    }
    Ok(format!("{} graphs, {} classes, zero discrepancies", catalog.len(), total))
}

fn embedding_counts() -> Outcome {
    for n in 0..=4 {
        let c = oracle_classes(&star(n))?.len();
        ensure!(c == n + 1, "star{n}: {c} classes, expected {}", n + 1);
    }
    let c = oracle_classes(&edge())?.len();
    ensure!(c == 1, "edge: {c} classes");
    Ok("star0..star4 have n+1 classes, the edge has 1".into())
}

// ---------------------------------------------------------------- criterion 4

fn same(a: &GraphicalMap, b: &GraphicalMap) -> bool {
    a.phi0 == b.phi0 && a.phi1 == b.phi1
}

fn iso_as_map(g: &Graph, z: &modgraph::iso::GraphIso) -> GraphicalMap {
    from_embedding(&check_etale(g, g, &z.arcs, &z.vertices).unwrap(), Mode::Strict).unwrap()
}

fn category_laws() -> Outcome {
    let cat = connected_safe_graphs(2, 4);
    let n = cat.len();
    let homs: Vec<Vec<Vec<GraphicalMap>>> =
        cat.iter().map(|a| cat.iter().map(|b| homset(a, b, Mode::Strict)).collect()).collect();
    let index = |a: usize, c: usize, m: &GraphicalMap| homs[a][c].iter().position(|x| same(x, m));
    // composite tables: comp[(a,b,c)][i][j] = index of homs[b][c][j] . homs[a][b][i]
    let mut comp: BTreeMap<(usize, usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
    for a in 0..n {
        let ida = identity(&cat[a], Mode::Strict);
        ensure!(index(a, a, &ida).is_some(), "identity missing from its hom-set");
        for b in 0..n {
            let idb = identity(&cat[b], Mode::Strict);
            for f in &homs[a][b] {
                ensure!(same(&compose(&idb, f).map_err(|e| e.to_string())?, f), "left identity fails");
                ensure!(same(&compose(f, &ida).map_err(|e| e.to_string())?, f), "right identity fails");
            }
            for c in 0..n {
                let mut t = Vec::new();
                for f in &homs[a][b] {
                    let mut row = Vec::new();
                    for g in &homs[b][c] {
                        let gf = compose(g, f).map_err(|e| format!("composite fails: {e}"))?;
                        row.push(index(a, c, &gf).ok_or("composite outside the hom-set")?);
                    }
                    t.push(row);
                }
                comp.insert((a, b, c), t);
            }
        }
    }
    let mut triples = 0usize;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (ab, bc, cd) = (&comp[&(a, b, c)], &comp[&(b, c, d)], &comp[&(a, c, d)]);
                    let abd = &comp[&(a, b, d)];
                    for i in 0..homs[a][b].len() {
                        for j in 0..homs[b][c].len() {
                            for k in 0..homs[c][d].len() {
                                // (h g) f = h (g f)
                                let hg = bc[j][k];
                                ensure!(abd[i][hg] == cd[ab[i][j]][k], "associativity fails");
                                triples += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    // fuzzed triples on up to three vertices
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let pool = connected_safe_graphs(3, 6);
    let mut fuzzed = 0;
    let mut attempts = 0;
    while fuzzed < 200 {
        attempts += 1;
        ensure!(attempts < 20_000, "could not find 200 composable triples");
        let [a, b, c, d] = [0; 4].map(|_| pool.choose(&mut rng).unwrap());
        let (fs, gs, hs) = (homset(a, b, Mode::Strict), homset(b, c, Mode::Strict), homset(c, d, Mode::Strict));
        if fs.is_empty() || gs.is_empty() || hs.is_empty() {
            continue;
        }
        let (f, g, h) = (fs.choose(&mut rng).unwrap(), gs.choose(&mut rng).unwrap(), hs.choose(&mut rng).unwrap());
        let e = |e: MapError| e.to_string();
        let lhs = compose(&compose(h, g).map_err(e)?, f).map_err(e)?;
        let rhs = compose(h, &compose(g, f).map_err(e)?).map_err(e)?;
        ensure!(same(&lhs, &rhs), "fuzzed associativity fails");
        ensure!(same(&compose(&identity(b, Mode::Strict), f).map_err(e)?, f), "fuzzed identity fails");
        fuzzed += 1;
    }

    // factorization: exists, and unique up to a unique middle isomorphism
    let mut factored = 0;
    for a in 0..n {
        for b in 0..n {
            for phi in &homs[a][b] {
                let (act, emb) = factorize(phi).map_err(|e| e.to_string())?;
                ensure!(is_active(&act) && is_embedding_map(&emb), "factors have the wrong kind");
                ensure!(same(&compose(&emb, &act).map_err(|e| e.to_string())?, phi), "factors do not recompose");
                let m = &act.target;
                let autos: Vec<GraphicalMap> = isomorphisms(m, m).iter().map(|z| iso_as_map(m, z)).collect();
                let mut alternatives = 0;
                for a2 in homset(&cat[a], m, Mode::Strict).iter().filter(|x| is_active(x)) {
                    for e2 in homset(m, &cat[b], Mode::Strict).iter().filter(|x| is_embedding_map(x)) {
                        if !same(&compose(e2, a2).map_err(|e| e.to_string())?, phi) {
                            continue;
                        }
                        alternatives += 1;
                        let mut witnesses = 0;
                        for z in &autos {
                            let za = compose(z, &act).map_err(|e| e.to_string())?;
                            let e2z = compose(e2, z).map_err(|e| e.to_string())?;
                            if same(&za, a2) && same(&e2z, &emb) {
                                witnesses += 1;
                            }
                        }
                        ensure!(witnesses == 1, "{witnesses} middle isomorphisms for one factorization");
                    }
                }
                ensure!(alternatives == autos.len(), "{alternatives} factorizations, {} middle automorphisms", autos.len());
                factored += 1;
            }
        }
    }
    Ok(format!(
        "{n} objects: {triples} composable triples, {fuzzed} fuzzed triples, {factored} factorizations unique"
    ))
}

// ---------------------------------------------------------------- criterion 5

fn unit_deco(d: &Deco, profile: &ColoredObject, colors: &InvolutiveSet) -> Result<Deco, OperadError> {
    Ok(Deco::Nested(Box::new(unit_shape(d.clone(), profile, colors)?)))
}

fn monad_shapes() -> Vec<Graph> {
    let mut shapes = connected_safe_graphs(3, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for v in [4, 4, 5, 5] {
        let (extra, legs) = (rng.gen_range(0..=1), rng.gen_range(0..=2));
        shapes.push(random_connected_graph(&mut rng, v, extra, legs));
    }
    shapes
}

fn monad_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shapes = monad_shapes();
    let (mut units, mut assoc) = (0, 0);
    for colors in color_sets(4) {
        let c = FreeCollection { colors: colors.clone() };
        for g in &shapes {
            let d = label_decorated(random_coloring(&mut rng, g, &colors));
            ensure!(d.total_vertices() <= 5, "shape too large");
            let e = |e: OperadError| e.to_string();
            // mu . T eta = id
            let mut t = d.clone();
            for w in d.shape.graph.vertices() {
                t.decorations.insert(w.clone(), unit_deco(&d.decorations[w], &d.vertex_profile(w), &colors).map_err(e)?);
            }
            ensure!(decorated_equal(&monad_mult(&t, &c).map_err(e)?, &d, &c), "right unit law fails");
            // mu . eta T = id
            let top = unit_shape(Deco::Nested(Box::new(d.clone())), &d.profile, &colors).map_err(e)?;
            ensure!(decorated_equal(&monad_mult(&top, &c).map_err(e)?, &d, &c), "left unit law fails");
            units += 1;
            // mu . mu T = mu . T mu
            let nested = three_level(&d);
            for n3 in &nested {
                let outer_first = monad_mult(&monad_mult(n3, &c).map_err(e)?, &c).map_err(e)?;
                let mut inner = n3.clone();
                for deco in inner.decorations.values_mut() {
                    if let Deco::Nested(m) = deco {
                        *deco = Deco::Nested(Box::new(monad_mult(m, &c).map_err(e)?));
                    }
                }
                let inner_first = monad_mult(&inner, &c).map_err(e)?;
                ensure!(decorated_equal(&outer_first, &inner_first, &c), "associativity of the monad fails");
                ensure!(decorated_equal(&outer_first, &d, &c), "flattening does not recover the shape");
                assoc += 1;
            }
        }
    }
    // algebra laws: gamma . eta = id and gamma . mu = gamma . T gamma
    let mut hearts = 0;
    for p in [TabulatedOperad::genus_mod(3, 4), TabulatedOperad::charge(4), TabulatedOperad::parity(4)] {
        let profiles: Vec<ColoredObject> = multisets_up_to(&p.colors, 4)
            .into_iter()
            .map(|m| ColoredObject::new(m.iter().enumerate().map(|(i, c)| (format!("s{i}"), c.clone())).collect()))
            .collect();
        let mut nested = Vec::new();
        for g in shapes.iter().filter(|g| g.vertices().iter().all(|v| g.valence(v) <= 4)) {
            for sh in (0..3).map(|_| random_coloring(&mut rng, g, &p.colors)) {
                for d in decorations(&p, &sh, 4) {
                    nested.extend(two_level(&d).into_iter().take(8));
                }
            }
        }
        let r = check_algebra_laws(&p, &profiles, &nested);
        ensure!(r.holds(), "{}: {}", p.name, r.witness.unwrap_or_default());
        hearts += r.heart_checked;
    }
    Ok(format!("{units} unit checks, {assoc} three-level associativity checks, {hearts} algebra associativity checks"))
}

// ---------------------------------------------------------------- criterion 6

fn tabulated() -> Vec<TabulatedOperad> {
    vec![TabulatedOperad::genus_mod(3, 4), TabulatedOperad::charge(4), TabulatedOperad::parity(4)]
}

fn fiber_counts() -> Outcome {
    let me = FreeModularOperad::new(&edge(), 4);
    let colors: Vec<Name> = me.colors.elements().cloned().collect();
    for k in 0..=4 {
        for choice in (0..k).map(|_| colors.iter()).multi_cartesian_product() {
            let profile = ColoredObject::new(choice.iter().enumerate().map(|(i, c)| (format!("s{i}"), (*c).clone())).collect());
            let xi: BTreeSet<&Name> = choice.iter().copied().collect();
            let bijective = k == 2 && xi.len() == 2;
            let expected = usize::from(k == 0 || bijective);
            let got = free_elements(&me, &profile, 4).len();
            ensure!(got == expected, "M(edge) at {profile}: {got}, expected {expected}");
        }
    }
    let ms0 = FreeModularOperad::new(&star(0), 4);
    let got = free_elements(&ms0, &ColoredObject::new(BTreeMap::new()), 4).len();
    ensure!(got == 1, "M(star0) at the empty profile has {got} elements");
    for p in tabulated() {
        let maps = maps_from_free(&edge(), &p).map_err(|e| e.to_string())?;
        let images: BTreeSet<Name> = maps.iter().map(|m| m.f0[EDGE_MAJOR].clone()).collect();
        let cs: BTreeSet<Name> = p.colors.elements().cloned().collect();
        ensure!(maps.len() == cs.len() && images == cs, "{}: {} maps from M(edge)", p.name, maps.len());
    }
    Ok("M(edge) fibers, M(star0) point, maps from M(edge) are colors for 3 operads".into())
}

// ---------------------------------------------------------------- criterion 7

fn double_cover() -> Outcome {
    let (cover, base) = (square_cover(), double_edge());
    let (arcs, verts) = square_covering();
    let hom = jk_homset(&cover, &base, 1);
    let free = FreeModularOperad::new(&base, 1);
    let found = hom.iter().any(|m| {
        m.f0 == arcs
            && cover.vertices().iter().all(|v| {
                let p = vertex_profile(&cover, &m.f0, v);
                free.element(&m.f1[v], &p).is_ok_and(|d| {
                    d.shape.graph.vertices().len() == 1
                        && d.decorations.values().all(|x| matches!(x, Deco::Atom(u) if *u == verts[v]))
                })
            })
    });
    ensure!(found, "double cover missing from the operad hom-set ({} maps)", hom.len());
    let phi1 = verts.iter().map(|(v, u)| (v.clone(), EmbeddingClass::of_vertex(&base, u))).collect();
    let r = make_graphical_map(&cover, &base, arcs, phi1, Mode::Strict);
    ensure!(matches!(r, Err(MapError::VertexDoubleCover(_))), "graphical validation gave {r:?}");
    ensure!(jk_homset(&star(0), &edge(), 2).len() == 1, "no operad map from M(star0) to M(edge)");
    ensure!(homset(&star(0), &edge(), Mode::Strict).is_empty(), "graphical maps from star0 to the edge exist");
    Ok(format!("cover among {} operad maps; VertexDoubleCover; star0 -> edge only as operads", hom.len()))
}

// ---------------------------------------------------------------- criterion 8

fn nerve_equalizer() -> Outcome {
    let mut n = 0;
    for p in tabulated() {
        for (name, g) in standard_objects() {
            let r = nerve_equalizer_check(&p, &g).map_err(|e| e.to_string())?;
            ensure!(r.agree, "{} at {name}: direct {} vs equalizer {}", p.name, r.direct, r.equalizer);
            n += 1;
        }
    }
    Ok(format!("{n} operad/object pairs agree"))
}

// ---------------------------------------------------------------- criterion 9

fn nerve_equivalence(u: &Site) -> Outcome {
    let e = |e: modgraph::nerve::NerveError| e.to_string();
    let g3 = TabulatedOperad::genus_mod(3, 4);
    let ch = TabulatedOperad::charge(4);
    let par = TabulatedOperad::parity(4);
    let ms2 = FreeModularOperad::new(&star(2), 4);
    let mut segal = 0;
    for p in [&g3 as &dyn Operad, &ch, &par, &ms2] {
        let x = nerve_presheaf(p, u).map_err(e)?;
        for o in 0..u.objects.len() {
            let r = segal_check(&x, u, o).map_err(e)?;
            ensure!(r.holds, "nerve not Segal at {}: {}", r.object, r.witness.unwrap_or_default());
            segal += 1;
        }
    }
    // operad roundtrips on g3, charge, parity; presheaf roundtrips on N(parity), N(M(star2)), an anonymized N(g3)
    for p in [&g3 as &dyn Operad, &ch, &par] {
        let x = nerve_presheaf(p, u).map_err(e)?;
        let (op, _) = roundtrip_reports(p, &x, u).map_err(e)?;
        ensure!(op.holds(), "operad roundtrip fails: {:?}", op.mismatch);
    }
    let presheaves = [
        (&par as &dyn Operad, false),
        (&ms2 as &dyn Operad, false),
        (&g3 as &dyn Operad, true),
    ];
    for (p, anon) in presheaves {
        let mut x = nerve_presheaf(p, u).map_err(e)?;
        if anon {
            x = x.anonymize(u);
        }
        let r = modgraph::nerve::checks::roundtrip_presheaf(&x, u).map_err(e)?;
        ensure!(r.holds(), "presheaf roundtrip fails: {:?}", r.mismatch);
    }
    let me = FreeModularOperad::new(&edge(), 4);
    let ms0 = FreeModularOperad::new(&star(0), 4);
    let mut counts = Vec::new();
    for (p, q) in [(&me as &dyn Operad, &me as &dyn Operad), (&ms0, &g3), (&ch, &ch)] {
        let r = fullyfaithful_check(p, q, u).map_err(e)?;
        ensure!(r.holds(), "fully faithful check fails: {r:?}");
        counts.push(r.operad_maps);
    }
    Ok(format!("{segal} Segal checks, 3+3 roundtrips, hom counts {counts:?}"))
}

// ---------------------------------------------------------------- criterion 10

fn elementary_restriction(u: &Site, jk: &Site) -> Outcome {
    let e = |e: modgraph::nerve::NerveError| e.to_string();
    let g3 = TabulatedOperad::genus_mod(3, 4);
    let ch = TabulatedOperad::charge(4);
    let par = TabulatedOperad::parity(4);
    let line2 = jk.object("line2").ok_or("line2 missing")?;
    let fork = jk.object("fork").ok_or("fork missing")?;
    let mut checked = 0;
    for (p, mutate_at) in [(&g3 as &dyn Operad, line2), (&ch, line2), (&par, fork)] {
        let x = nerve_presheaf(p, jk).map_err(e)?;
        let r = jk_checks(&x, jk, u).map_err(e)?;
        ensure!(r.segal_big && r.holds(), "nerve on the large site: {r:?}");
        ensure!(!r.elementary_limits.is_empty(), "no elementary objects checked");
        let m = x.duplicate_orbit(jk, mutate_at, 0);
        m.check_functor(jk).map_err(e)?;
        let r = jk_checks(&m, jk, u).map_err(e)?;
        ensure!(!r.segal_big, "mutation stayed Segal");
        ensure!(r.holds(), "mutated presheaf: {r:?}");
        checked += 2;
    }

    // five morphisms, each bijective on elementary objects
    let ms2 = FreeModularOperad::new(&star(2), 4);
    let mut morphisms: Vec<(&str, Presheaf, Presheaf, Vec<Vec<usize>>)> = Vec::new();
    let x = nerve_presheaf(&g3, jk).map_err(e)?;
    let a = postcompose_morphism(&g3, &x, jk, |m| Some(m.clone())).map_err(e)?;
    morphisms.push(("identity of N(genus3)", x.clone(), x, a));
    let x = nerve_presheaf(&ch, jk).map_err(e)?;
    let swap = map_of(&[("+", "-"), ("-", "+")]);
    let a = postcompose_morphism(&ch, &x, jk, |m| {
        Some(OperadMap { source: m.source.clone(), f0: m.f0.iter().map(|(k, c)| (k.clone(), swap[c].clone())).collect(), f1: m.f1.clone() })
    })
    .map_err(e)?;
    morphisms.push(("charge reversal", x.clone(), x, a));
    let x = nerve_presheaf(&par, jk).map_err(e)?;
    let y = x.anonymize(jk);
    let a: Vec<Vec<usize>> = x.values.iter().map(|v| (0..v.len()).collect()).collect();
    morphisms.push(("N(parity) to a renamed copy", x, y, a));
    let x = nerve_presheaf(&ms2, jk).map_err(e)?;
    let flip = homset(&star(2), &star(2), Mode::Strict)
        .into_iter()
        .find(|f| {
            let img: BTreeSet<&Name> = f.phi0.values().collect();
            img.len() == f.phi0.len() && f.phi0.iter().any(|(a, b)| a != b) && is_embedding_map(f)
        })
        .ok_or("no flip of star2")?;
    let jflip = j_functor(&flip).map_err(|e| e.to_string())?;
    let a = postcompose_morphism(&ms2, &x, jk, |m| compose_operad_maps(&jflip, m, &ms2).ok()).map_err(e)?;
    morphisms.push(("N(J(flip of star2))", x.clone(), x.clone(), a));
    let y = x.anonymize(jk);
    let a: Vec<Vec<usize>> = x.values.iter().map(|v| (0..v.len()).collect()).collect();
    morphisms.push(("N(M(star2)) to a renamed copy", x, y, a));
    for (name, x, y, a) in &morphisms {
        let elementary_bijective = (0..jk.objects.len()).filter(|&o| {
            let g = jk.graph(o);
            g.is_edge() || (g.vertices().len() == 1 && g.internal_edges().is_empty())
        });
        for o in elementary_bijective {
            let img: BTreeSet<&usize> = a[o].iter().collect();
            ensure!(img.len() == y.values[o].len() && a[o].len() == img.len(), "{name} not bijective at {}", jk.objects[o].0);
        }
        ensure!(elementary_bijection_check(x, y, jk, a).map_err(e)?, "{name} is not bijective everywhere");
    }
    Ok(format!("{checked} presheaves agree with their restrictions, {} morphisms bijective", morphisms.len()))
}

// ---------------------------------------------------------------- criterion 11

fn biased_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ops = tabulated();
    let mut shapes: Vec<DecoratedGraph> = Vec::new();
    while shapes.len() < 50 {
        let p = &ops[shapes.len() % ops.len()];
        if let Some(d) = random_decorated(&mut rng, p, 4, 4) {
            biased_gamma(p, &d).map_err(|e| format!("{}: {e}", p.name))?;
            shapes.push(d);
        }
    }
    let mut broken = TabulatedOperad::genus_mod(3, 4);
    let k = broken.comp_key(&s("g0"), &s("c"), &s("g0"));
    broken.comp.insert(k, s("g1"));
    let mut detected = false;
    for _ in 0..500 {
        if let Some(d) = random_decorated(&mut rng, &broken, 4, 4) {
            if matches!(biased_gamma(&broken, &d), Err(OperadError::OrderDependence(_))) {
                detected = true;
                break;
            }
        }
    }
    ensure!(detected, "corrupted composition table went unnoticed");
    Ok("50 random shapes order-independent; corrupted table detected".into())
}

// ----------------------------------------------------------------

fn main() {
    let u = Site::standard(SiteMode::U);
    let jk = Site::standard(SiteMode::Jk(2));
    let criteria: Vec<(usize, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "graph axioms", Box::new(graph_axioms)),
        (2, "embedding classes vs brute force", Box::new(embedding_oracle)),
        (3, "embedding counts", Box::new(embedding_counts)),
        (4, "category laws and factorization", Box::new(category_laws)),
        (5, "monad and algebra laws", Box::new(monad_laws)),
        (6, "fiber counts", Box::new(fiber_counts)),
        (7, "double cover", Box::new(double_cover)),
        (8, "nerve equalizer", Box::new(nerve_equalizer)),
        (9, "nerve equivalence on U", Box::new(|| nerve_equivalence(&u))),
        (10, "restriction to the elementary site", Box::new(|| elementary_restriction(&u, &jk))),
        (11, "biased gamma coherence", Box::new(biased_coherence)),
    ];
    let mut failed = 0;
    for (n, name, f) in &criteria {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let ms = t.elapsed().as_millis();
        match r {
            Ok(detail) => println!("PASS criterion {n}: {name}: {detail} ({ms} ms)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n}: {name}: {why} ({ms} ms)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
