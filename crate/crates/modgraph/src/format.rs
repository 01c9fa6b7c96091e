//! Line-oriented text formats for graphs, graphical maps, substitution manifests, operads and
//! presheaf directories. Every parser reports the offending line.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::etale::EmbeddingClass;
use crate::graph::{ColoredGraph, Graph};
use crate::graphical::{make_graphical_map, GraphicalMap, Mode};
use crate::involutive::{InvolutiveSet, Name};
use crate::modops::TabulatedOperad;
use crate::nerve::{Presheaf, Site, SiteMode};
use crate::substitution::Plug;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{file}:{line}: {msg}")]
    Line { file: String, line: usize, msg: String },
    #[error("{file}: {msg}")]
    File { file: String, msg: String },
}

type R<T> = Result<T, FormatError>;

fn at(file: &str, line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Line { file: file.to_string(), line, msg: msg.into() }
}

fn whole(file: &str, msg: impl Into<String>) -> FormatError {
    FormatError::File { file: file.to_string(), msg: msg.into() }
}

pub fn read(path: &Path) -> R<String> {
    fs::read_to_string(path).map_err(|e| whole(&path.display().to_string(), e.to_string()))
}

/// Non-empty lines with `#` comments removed, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

#[derive(Debug, Clone)]
pub struct GraphFile {
    pub name: String,
    pub graph: Graph,
    /// Present when the file has a `colors:` header.
    pub colored: Option<(InvolutiveSet, ColoredGraph)>,
}

pub fn parse_graph(file: &str, text: &str) -> R<GraphFile> {
    let mut name = None;
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut vertices: Vec<String> = Vec::new();
    let mut incidence: Vec<(String, String)> = Vec::new();
    let mut boundary: Option<Vec<String>> = None;
    let mut colors = None;
    let mut zeta = BTreeMap::new();
    let mut nbhd_seen = BTreeSet::new();
    for (n, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("graph ") {
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = l.strip_prefix("arcs:") {
            for class in rest.split(';').map(words).filter(|c| !c.is_empty()) {
                let [a, b] = <[String; 2]>::try_from(class.clone())
                    .map_err(|_| at(file, n, format!("arc class `{}` does not have two arcs", class.join(" "))))?;
                pairs.push((a, b));
            }
        } else if let Some(rest) = l.strip_prefix("vertices:") {
            vertices.extend(words(rest));
        } else if let Some(rest) = l.strip_prefix("nbhd ") {
            let (v, ds) = rest.split_once(':').ok_or_else(|| at(file, n, "expected `nbhd v: darts`"))?;
            let v = v.trim().to_string();
            if !nbhd_seen.insert(v.clone()) {
                return Err(at(file, n, format!("second `nbhd` line for `{v}`")));
            }
            incidence.extend(words(ds).into_iter().map(|d| (d, v.clone())));
        } else if let Some(rest) = l.strip_prefix("boundary:") {
            boundary = Some(words(rest));
        } else if l.starts_with("colors:") {
            colors = Some(InvolutiveSet::parse(l).map_err(|e| at(file, n, e))?);
        } else if let Some(rest) = l.strip_prefix("color ") {
            let (a, c) = rest.split_once('=').ok_or_else(|| at(file, n, "expected `color a = c`"))?;
            zeta.insert(a.trim().to_string(), c.trim().to_string());
        } else {
            return Err(at(file, n, format!("unrecognized line `{l}`")));
        }
    }
    let graph = Graph::new(&pairs, &vertices, &incidence, boundary.as_deref()).map_err(|e| whole(file, e.to_string()))?;
    let colored = match colors {
        Some(cs) => {
            let cg = ColoredGraph::new(graph.clone(), zeta, &cs).map_err(|e| whole(file, e))?;
            Some((cs, cg))
        }
        None if !zeta.is_empty() => return Err(whole(file, "`color` lines need a `colors:` header")),
        None => None,
    };
    Ok(GraphFile { name: name.unwrap_or_else(|| "G".to_string()), graph, colored })
}

pub fn load_graph(path: &Path) -> R<GraphFile> {
    parse_graph(&path.display().to_string(), &read(path)?)
}

/// A graphical map with the names of its endpoints as written in the file.
#[derive(Debug, Clone)]
pub struct MapFile {
    pub name: String,
    pub source_name: String,
    pub target_name: String,
    pub map: GraphicalMap,
}

/// Resolves a graph name from a map or manifest: a path relative to `dir`, with `.graph`
/// appended when the bare name does not exist.
pub fn resolve(dir: &Path, name: &str) -> PathBuf {
    let p = dir.join(name);
    if p.exists() { p } else { dir.join(format!("{name}.graph")) }
}

/// `map f : G -> H`, an optional `mode: strict|extended`, `phi0:` and `phi1 v:` lines.
pub fn parse_map(file: &str, text: &str, graph: &dyn Fn(&str) -> R<Graph>) -> R<MapFile> {
    let mut head = None;
    let mut mode = Mode::Strict;
    let mut phi0 = BTreeMap::new();
    let mut phi1 = BTreeMap::new();
    for (n, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("map ") {
            let (name, ends) = rest.split_once(':').ok_or_else(|| at(file, n, "expected `map f : G -> H`"))?;
            let (s, t) = ends.split_once("->").ok_or_else(|| at(file, n, "expected `G -> H`"))?;
            head = Some((name.trim().to_string(), s.trim().to_string(), t.trim().to_string()));
        } else if let Some(rest) = l.strip_prefix("mode:") {
            mode = match rest.trim() {
                "strict" => Mode::Strict,
                "extended" => Mode::Extended,
                m => return Err(at(file, n, format!("unknown mode `{m}`"))),
            };
        } else if let Some(rest) = l.strip_prefix("phi0:") {
            for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (a, b) = item.split_once("->").ok_or_else(|| at(file, n, format!("expected `a -> b` in `{item}`")))?;
                if phi0.insert(a.trim().to_string(), b.trim().to_string()).is_some() {
                    return Err(at(file, n, format!("arc `{}` mapped twice", a.trim())));
                }
            }
        } else if let Some(rest) = l.strip_prefix("phi1 ") {
            let (v, c) = rest.split_once(':').ok_or_else(|| at(file, n, "expected `phi1 v: W={...} B={...} bd={...}`"))?;
            phi1.insert(v.trim().to_string(), EmbeddingClass::parse(c).map_err(|e| at(file, n, e))?);
        } else {
            return Err(at(file, n, format!("unrecognized line `{l}`")));
        }
    }
    let (name, source_name, target_name) = head.ok_or_else(|| whole(file, "missing `map f : G -> H` line"))?;
    let map = GraphicalMap { source: graph(&source_name)?, target: graph(&target_name)?, phi0, phi1, mode };
    Ok(MapFile { name, source_name, target_name, map })
}

/// Parses without validating the map, so that validation errors can be reported as such.
pub fn load_map(path: &Path) -> R<MapFile> {
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let g = move |name: &str| load_graph(&resolve(&dir, name)).map(|f| f.graph);
    parse_map(&path.display().to_string(), &read(path)?, &g)
}

/// Validates a parsed map against the axioms of its mode.
pub fn validated(m: &MapFile) -> Result<GraphicalMap, crate::graphical::MapError> {
    let g = &m.map;
    make_graphical_map(&g.source, &g.target, g.phi0.clone(), g.phi1.clone(), g.mode)
}

pub fn write_map(name: &str, source: &str, target: &str, m: &GraphicalMap) -> String {
    let mut s = format!("map {name} : {source} -> {target}\n");
    if m.mode == Mode::Extended {
        s.push_str("mode: extended\n");
    }
    s.push_str(&m.to_string());
    s
}

/// Lines `v <- H.graph with m: a*->x, b*->y`.
pub fn parse_manifest(file: &str, text: &str, graph: &dyn Fn(&str) -> R<Graph>) -> R<BTreeMap<Name, Plug>> {
    let mut plugs = BTreeMap::new();
    for (n, l) in lines(text) {
        let (v, rest) = l.split_once("<-").ok_or_else(|| at(file, n, "expected `v <- H.graph with m: ...`"))?;
        let (h, m) = rest.split_once("with").ok_or_else(|| at(file, n, "expected `with m:`"))?;
        let m = m.trim().strip_prefix("m:").ok_or_else(|| at(file, n, "expected `m:`"))?;
        let mut map = BTreeMap::new();
        for item in m.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item.split_once("->").ok_or_else(|| at(file, n, format!("expected `a->x` in `{item}`")))?;
            map.insert(a.trim().to_string(), b.trim().to_string());
        }
        let g = graph(h.trim()).map_err(|e| at(file, n, e.to_string()))?;
        if plugs.insert(v.trim().to_string(), Plug { graph: g, m: map }).is_some() {
            return Err(at(file, n, format!("second plug for `{}`", v.trim())));
        }
    }
    Ok(plugs)
}

pub fn load_manifest(path: &Path) -> R<BTreeMap<Name, Plug>> {
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let g = move |name: &str| load_graph(&dir.join(name)).map(|f| f.graph);
    parse_manifest(&path.display().to_string(), &read(path)?, &g)
}

/// An operad file: a tabulated operad, or the operad generated by a graph.
#[derive(Debug, Clone)]
pub enum OperadFile {
    Tabulated(TabulatedOperad),
    Free(Graph),
}

/// `colors:` header, `fiber (s1:c1, s2:c2): e1 e2` lines and `gamma` lines for the elementary
/// shapes: `gamma edge c = e` (unit), `gamma loop c = e` (nodeless loop), `gamma x c y = e`
/// (an edge colored `c` at `x`), `gamma x c = e` (a loop at `x`). Alternatively
/// `free-on <graph-file>`. Fibers not listed, and those above `arity_bound`, are empty.
pub fn parse_operad(file: &str, text: &str, arity_bound: usize, graph: &dyn Fn(&str) -> R<Graph>) -> R<OperadFile> {
    let mut name = "P".to_string();
    let mut colors = None;
    let mut fibers: BTreeMap<Vec<Name>, Vec<String>> = BTreeMap::new();
    let mut gammas = Vec::new();
    for (n, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("free-on ") {
            return Ok(OperadFile::Free(graph(rest.trim()).map_err(|e| at(file, n, e.to_string()))?));
        } else if let Some(rest) = l.strip_prefix("operad ") {
            name = rest.trim().to_string();
        } else if l.starts_with("colors:") {
            colors = Some(InvolutiveSet::parse(l).map_err(|e| at(file, n, e))?);
        } else if let Some(rest) = l.strip_prefix("fiber") {
            let cs = colors.as_ref().ok_or_else(|| at(file, n, "`fiber` before `colors:`"))?;
            let rest = rest.trim();
            let close = rest.find(')').filter(|_| rest.starts_with('(')).ok_or_else(|| at(file, n, "expected `fiber (...)`"))?;
            let mut key = Vec::new();
            let mut carrier = BTreeSet::new();
            for item in rest[1..close].split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (s, c) = item.split_once(':').ok_or_else(|| at(file, n, format!("expected `s:c` in `{item}`")))?;
                let c = c.trim().to_string();
                if !cs.contains(&c) {
                    return Err(at(file, n, format!("unknown color `{c}`")));
                }
                if !carrier.insert(s.trim().to_string()) {
                    return Err(at(file, n, format!("repeated carrier element `{}`", s.trim())));
                }
                key.push(c);
            }
            key.sort();
            let body = rest[close + 1..].trim().strip_prefix(':').ok_or_else(|| at(file, n, "expected `:` after the profile"))?;
            let mut es = words(body);
            es.sort();
            es.dedup();
            if fibers.contains_key(&key) {
                return Err(at(file, n, "second fiber line for the same color multiset"));
            }
            // fibers above the arity bound are truncated away
            if key.len() <= arity_bound {
                fibers.insert(key, es);
            }
        } else if let Some(rest) = l.strip_prefix("gamma ") {
            let (lhs, e) = rest.split_once('=').ok_or_else(|| at(file, n, "expected `gamma ... = e`"))?;
            gammas.push((n, words(lhs), e.trim().to_string()));
        } else {
            return Err(at(file, n, format!("unrecognized line `{l}`")));
        }
    }
    let colors = colors.ok_or_else(|| whole(file, "missing `colors:` header"))?;
    let mut p = TabulatedOperad {
        name,
        colors: colors.clone(),
        arity_bound,
        fibers,
        units: BTreeMap::new(),
        comp: BTreeMap::new(),
        contr: BTreeMap::new(),
        loops: BTreeMap::new(),
    };
    let pair = |c: &str| {
        let d = colors.dagger(c).unwrap();
        if d.as_str() < c { d.clone() } else { c.to_string() }
    };
    for (n, lhs, e) in gammas {
        let known = |c: &String| if colors.contains(c) { Ok(()) } else { Err(at(file, n, format!("unknown color `{c}`"))) };
        match lhs.as_slice() {
            [k, c] if k == "edge" => {
                known(c)?;
                p.units.insert(pair(c), e);
            }
            [k, c] if k == "loop" => {
                known(c)?;
                p.loops.insert(pair(c), e);
            }
            [x, c, y] => {
                known(c)?;
                let key = p.comp_key(x, c, y);
                p.comp.insert(key, e);
            }
            [x, c] => {
                known(c)?;
                p.contr.insert((x.clone(), pair(c)), e);
            }
            _ => return Err(at(file, n, "expected `edge c`, `loop c`, `x c y` or `x c` before `=`")),
        }
    }
    Ok(OperadFile::Tabulated(p))
}

pub fn load_operad(path: &Path, arity_bound: usize) -> R<OperadFile> {
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let g = move |name: &str| load_graph(&dir.join(name)).map(|f| f.graph);
    parse_operad(&path.display().to_string(), &read(path)?, arity_bound, &g)
}

pub fn write_operad(p: &TabulatedOperad) -> String {
    let mut s = format!("operad {}\n{}\n", p.name, p.colors);
    for (k, es) in &p.fibers {
        let prof: Vec<String> = k.iter().enumerate().map(|(i, c)| format!("s{}:{c}", i + 1)).collect();
        s.push_str(&format!("fiber ({}): {}\n", prof.join(", "), es.join(" ")));
    }
    for (c, e) in &p.units {
        s.push_str(&format!("gamma edge {c} = {e}\n"));
    }
    for (c, e) in &p.loops {
        s.push_str(&format!("gamma loop {c} = {e}\n"));
    }
    for ((x, c, y), e) in &p.comp {
        s.push_str(&format!("gamma {x} {c} {y} = {e}\n"));
    }
    for ((x, c), e) in &p.contr {
        s.push_str(&format!("gamma {x} {c} = {e}\n"));
    }
    s
}

/// Manifest of a presheaf directory.
pub const PRESHEAF_MANIFEST: &str = "presheaf.txt";

/// Writes `presheaf.txt` (site mode, then `object`, `values` and `action` lines) together with
/// one `.graph` file per object, one `.set` file of values per object and one `.fn` table per
/// site map, each table line reading `x -> X(m)(x)`.
pub fn write_presheaf(dir: &Path, site: &Site, x: &Presheaf) -> R<()> {
    let d = dir.display().to_string();
    fs::create_dir_all(dir).map_err(|e| whole(&d, e.to_string()))?;
    let put = |name: &str, body: String| fs::write(dir.join(name), body).map_err(|e| whole(name, e.to_string()));
    let mut manifest = match site.mode {
        SiteMode::U => "site U\n".to_string(),
        SiteMode::Jk(b) => format!("site jk {b}\n"),
    };
    for (o, (name, g)) in site.objects.iter().enumerate() {
        put(&format!("{name}.graph"), g.to_file_string(name))?;
        manifest.push_str(&format!("object {name}.graph\n"));
        if x.values[o].iter().any(|v| v.contains(" -> ") || v.contains('\n') || v.starts_with('#')) {
            return Err(whole(&d, format!("a value of {name} cannot be written in a table")));
        }
        put(&format!("{name}.set"), x.values[o].iter().map(|v| format!("{v}\n")).collect())?;
    }
    for (name, _) in &site.objects {
        manifest.push_str(&format!("values {name}.set\n"));
    }
    for (k, m) in site.maps.iter().enumerate() {
        let name = site.map_name(k);
        let mut body = format!("# {}\n", m.map.to_string().replace('\n', "\n# "));
        for (z, v) in x.values[m.tgt].iter().enumerate() {
            body.push_str(&format!("{v} -> {}\n", x.values[m.src][x.act(k, z)]));
        }
        put(&format!("{name}.fn"), body)?;
        manifest.push_str(&format!("action {name}.fn\n"));
    }
    put(PRESHEAF_MANIFEST, manifest)
}

fn raw_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#')).map(|(i, l)| (i + 1, l))
}

/// Reads a presheaf directory, rebuilding the site from its objects and checking that the
/// tables cover every site map and form a functor.
pub fn load_presheaf(dir: &Path) -> R<(Site, Presheaf)> {
    let mpath = dir.join(PRESHEAF_MANIFEST);
    let mfile = mpath.display().to_string();
    let mut mode = SiteMode::U;
    let mut objects = Vec::new();
    let mut value_files = BTreeMap::new();
    let mut action_files = BTreeMap::new();
    for (n, l) in lines(&read(&mpath)?) {
        let ws = words(l);
        match ws.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["site", "U"] => mode = SiteMode::U,
            ["site", "jk", b] => mode = SiteMode::Jk(b.parse().map_err(|_| at(&mfile, n, "bad jk bound"))?),
            ["object", f] => {
                let g = load_graph(&dir.join(f))?;
                let stem = f.strip_suffix(".graph").unwrap_or(f).to_string();
                objects.push((stem, g.graph));
            }
            ["values", f] => {
                value_files.insert(f.strip_suffix(".set").unwrap_or(f).to_string(), f.to_string());
            }
            ["action", f] => {
                action_files.insert(f.strip_suffix(".fn").unwrap_or(f).to_string(), f.to_string());
            }
            _ => return Err(at(&mfile, n, format!("unrecognized line `{l}`"))),
        }
    }
    let site = Site::build(objects, mode).map_err(|e| whole(&mfile, e.to_string()))?;
    let mut values = Vec::new();
    for (name, _) in &site.objects {
        let f = value_files.get(name).ok_or_else(|| whole(&mfile, format!("no `values` line for {name}")))?;
        let path = dir.join(f);
        let text = read(&path)?;
        let mut vs: Vec<String> = raw_lines(&text).map(|(_, l)| l.to_string()).collect();
        let len = vs.len();
        vs.sort();
        vs.dedup();
        if vs.len() != len {
            return Err(whole(&path.display().to_string(), "repeated value"));
        }
        values.push(vs);
    }
    let x0 = Presheaf { values, action: Vec::new() };
    let mut action = Vec::new();
    for (k, m) in site.maps.iter().enumerate() {
        let name = site.map_name(k);
        let f = action_files.get(&name).ok_or_else(|| whole(&mfile, format!("no `action` line for {name}")))?;
        let path = dir.join(f);
        let file = path.display().to_string();
        let mut table = vec![None; x0.values[m.tgt].len()];
        for (n, l) in raw_lines(&read(&path)?) {
            let (a, b) = l.split_once(" -> ").ok_or_else(|| at(&file, n, "expected `x -> y`"))?;
            let i = x0.index_of(m.tgt, a).ok_or_else(|| at(&file, n, format!("`{a}` is not a value of the target")))?;
            let j = x0.index_of(m.src, b).ok_or_else(|| at(&file, n, format!("`{b}` is not a value of the source")))?;
            if table[i].replace(j).is_some() {
                return Err(at(&file, n, format!("`{a}` mapped twice")));
            }
        }
        let t: Option<Vec<usize>> = table.into_iter().collect();
        action.push(t.ok_or_else(|| whole(&file, "table is not total"))?);
    }
    let x = Presheaf { values: x0.values, action };
    x.check_functor(&site).map_err(|e| whole(&mfile, e.to_string()))?;
    Ok((site, x))
}
