//! Command-line front end. Exit codes: 0 when the operation succeeds or the property holds,
//! 1 when a checked property fails, 2 on unusable input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::etale::enumerate_embeddings;
use crate::format::{self, OperadFile};
use crate::gen;
use crate::graphical::{compose, factorize, homset, Mode};
use crate::involutive::ColoredObject;
use crate::iso::find_isomorphism;
use crate::modops::maps::jk_homset;
use crate::modops::tabulated::multisets_up_to;
use crate::modops::{check_algebra_laws, free_elements, j_functor, FreeModularOperad, Operad};
use crate::nerve::checks::{jk_checks, roundtrip_operad, roundtrip_presheaf};
use crate::nerve::{nerve, nerve_presheaf, segal_check, standard_objects, Site, SiteMode};
use crate::substitution::substitute;

#[derive(Debug, Parser)]
#[command(name = "modgraph", about = "Graphs with boundary, graphical maps, modular operads and their nerves")]
pub struct Cli {
    /// `lines` prefixes every output line with the verb and a tab.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    pub format: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Lines,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Bounds {
    /// Largest number of vertices in an enumerated graph.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub vertex_bound: u64,
    /// Largest arity of an enumerated fiber.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub arity_bound: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validates a graph, map or operad file, or a presheaf directory.
    Validate { path: PathBuf },
    /// Finds an isomorphism between two graphs.
    Iso { g: PathBuf, h: PathBuf },
    /// Lists the embedding classes of a graph.
    Embeddings { g: PathBuf },
    /// Substitutes plugs into the vertices of a base graph.
    Substitute { base: PathBuf, manifest: PathBuf },
    /// Composes `f: A -> B` and `g: B -> C` into `g o f`.
    Compose { f: PathBuf, g: PathBuf },
    /// Factors a map into an active map followed by an embedding.
    Factorize { map: PathBuf },
    /// Checks a map file against the graphical-map axioms.
    ValidateMap { map: PathBuf },
    /// Lists the graphical maps `G -> H`.
    Homset {
        g: PathBuf,
        h: PathBuf,
        #[arg(long)]
        extended: bool,
    },
    /// Lists elements of the operad generated by a graph at a profile like `s:a,t:b*`.
    FreeElements {
        g: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        vertex_bound: u64,
    },
    /// Lists operad maps between the operads generated by `H` and `G`, marking those in the
    /// image of graphical maps.
    JkHom {
        h: PathBuf,
        g: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        vertex_bound: u64,
    },
    /// Lists the nerve of an operad at a graph; with `--site` also writes the whole nerve on the
    /// standard site to a presheaf directory.
    Nerve {
        operad: PathBuf,
        graph: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        site: Option<PathBuf>,
        /// Build the site from maps of generated operads with this vertex bound.
        #[arg(long)]
        jk: Option<usize>,
    },
    /// Checks the Segal condition at every object of a presheaf directory.
    SegalCheck { dir: PathBuf },
    /// Checks both roundtrips between an operad and a Segal presheaf.
    Roundtrip {
        dir: PathBuf,
        operad: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Compares Segal conditions across the two sites and checks limits at elementary objects.
    JkCheck { dir: PathBuf },
    /// Checks the unit and associativity laws of an operad on bounded shapes.
    Laws {
        operad: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
}

/// Outcome of one command: its report and exit code.
pub struct Outcome {
    pub code: i32,
    pub out: String,
}

fn fail_input(e: impl std::fmt::Display) -> Outcome {
    Outcome { code: 2, out: format!("error: {e}\n") }
}

fn ok(out: String) -> Outcome {
    Outcome { code: 0, out }
}

fn verdict(holds: bool, out: String) -> Outcome {
    Outcome { code: if holds { 0 } else { 1 }, out }
}

/// Parses arguments and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) { 0 } else { 2 };
            return Outcome { code, out: e.to_string() };
        }
    };
    let verb = verb_name(&cli.command);
    let r = execute(cli.command).unwrap_or_else(fail_input);
    match cli.format {
        Output::Text => r,
        Output::Lines => Outcome { code: r.code, out: r.out.lines().map(|l| format!("{verb}\t{l}\n")).collect() },
    }
}

fn verb_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Iso { .. } => "iso",
        Command::Embeddings { .. } => "embeddings",
        Command::Substitute { .. } => "substitute",
        Command::Compose { .. } => "compose",
        Command::Factorize { .. } => "factorize",
        Command::ValidateMap { .. } => "validate-map",
        Command::Homset { .. } => "homset",
        Command::FreeElements { .. } => "free-elements",
        Command::JkHom { .. } => "jk-hom",
        Command::Nerve { .. } => "nerve",
        Command::SegalCheck { .. } => "segal-check",
        Command::Roundtrip { .. } => "roundtrip",
        Command::JkCheck { .. } => "jk-check",
        Command::Laws { .. } => "laws",
    }
}

type Res = Result<Outcome, Box<dyn std::error::Error>>;

fn graph(p: &Path) -> Result<crate::graph::Graph, Box<dyn std::error::Error>> {
    Ok(format::load_graph(p)?.graph)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_else(|| "G".into())
}

/// Runs `k` on the operad in `path`; generated operads truncate at `vertex_bound`.
fn with_operad<T>(path: &Path, b: &Bounds, k: impl FnOnce(&dyn Operad) -> T) -> Result<T, Box<dyn std::error::Error>> {
    Ok(match format::load_operad(path, b.arity_bound as usize)? {
        OperadFile::Tabulated(p) => k(&p),
        OperadFile::Free(g) => k(&FreeModularOperad::new(&g, b.vertex_bound as usize)),
    })
}

fn parse_profile(s: &str) -> Result<ColoredObject, String> {
    let mut m = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (a, c) = item.split_once(':').ok_or_else(|| format!("expected `s:c` in `{item}`"))?;
        if m.insert(a.trim().to_string(), c.trim().to_string()).is_some() {
            return Err(format!("repeated carrier element `{}`", a.trim()));
        }
    }
    Ok(ColoredObject::new(m))
}

fn execute(c: Command) -> Res {
    match c {
        Command::Validate { path } => validate(&path),
        Command::Iso { g, h } => {
            let (g, h) = (graph(&g)?, graph(&h)?);
            Ok(match find_isomorphism(&g, &h) {
                Some(z) => {
                    let mut out = String::from("isomorphic\n");
                    for (a, b) in &z.arcs {
                        out.push_str(&format!("arc {a} -> {b}\n"));
                    }
                    for (v, w) in &z.vertices {
                        out.push_str(&format!("vertex {v} -> {w}\n"));
                    }
                    ok(out)
                }
                None => verdict(false, "not isomorphic\n".into()),
            })
        }
        Command::Embeddings { g } => {
            let g = graph(&g)?;
            let mut lines: Vec<String> = enumerate_embeddings(&g).iter().map(|c| c.to_string()).collect();
            lines.sort();
            Ok(ok(lines.iter().map(|l| format!("{l}\n")).collect()))
        }
        Command::Substitute { base, manifest } => {
            let g = graph(&base)?;
            let plugs = format::load_manifest(&manifest)?;
            let s = substitute(&g, &plugs)?;
            Ok(ok(s.graph.to_file_string(&format!("{}-substituted", stem(&base)))))
        }
        Command::Compose { f, g } => {
            let (mf, mg) = (format::load_map(&f)?, format::load_map(&g)?);
            let (pf, pg) = (format::validated(&mf)?, format::validated(&mg)?);
            if pf.target != pg.source {
                return Err(format!("`{}` ends at {} but `{}` starts at {}", mf.name, mf.target_name, mg.name, mg.source_name).into());
            }
            let h = compose(&pg, &pf)?;
            Ok(ok(format::write_map(&format!("{}.{}", mg.name, mf.name), &mf.source_name, &mg.target_name, &h)))
        }
        Command::Factorize { map } => {
            let m = format::load_map(&map)?;
            let phi = format::validated(&m)?;
            let (active, emb) = factorize(&phi)?;
            let mid = format!("{}-middle", m.name);
            let mut out = active.target.to_file_string(&mid);
            out.push('\n');
            out.push_str(&format::write_map(&format!("{}-active", m.name), &m.source_name, &mid, &active));
            out.push('\n');
            out.push_str(&format::write_map(&format!("{}-embedding", m.name), &mid, &m.target_name, &emb));
            Ok(ok(out))
        }
        Command::ValidateMap { map } => {
            let m = format::load_map(&map)?;
            Ok(match format::validated(&m) {
                Ok(_) => ok(format!("ok map {}\n", m.name)),
                Err(e) => verdict(false, format!("invalid map {}: {e:?}: {e}\n", m.name)),
            })
        }
        Command::Homset { g, h, extended } => {
            let (gn, hn) = (stem(&g), stem(&h));
            let mode = if extended { Mode::Extended } else { Mode::Strict };
            let mut maps = homset(&graph(&g)?, &graph(&h)?, mode);
            maps.sort();
            let mut out = format!("# {} maps\n", maps.len());
            for (i, m) in maps.iter().enumerate() {
                out.push_str(&format::write_map(&format!("m{i}"), &gn, &hn, m));
            }
            Ok(ok(out))
        }
        Command::FreeElements { g, profile, vertex_bound } => {
            let f = FreeModularOperad::new(&graph(&g)?, vertex_bound as usize);
            let p = parse_profile(&profile)?;
            let xs = free_elements(&f, &p, vertex_bound as usize);
            Ok(ok(xs.iter().map(|x| format!("{x}\n")).collect()))
        }
        Command::JkHom { h, g, vertex_bound } => {
            let (h, g) = (graph(&h)?, graph(&g)?);
            let u: Vec<_> = homset(&h, &g, Mode::Strict).iter().map(j_functor).collect::<Result<_, _>>()?;
            let ms = jk_homset(&h, &g, vertex_bound as usize);
            let mut out = format!("# {} maps, {} from graphical maps\n", ms.len(), u.len());
            for m in &ms {
                let tag = if u.contains(m) { "graphical" } else { "other" };
                out.push_str(&format!("[{tag}] {}\n", m.to_string().replace('\n', "; ")));
            }
            Ok(ok(out))
        }
        Command::Nerve { operad, graph: gp, bounds, site, jk } => {
            let g = graph(&gp)?;
            with_operad(&operad, &bounds, |p| -> Res {
                let mut keys: Vec<String> = nerve(p, &g)?.iter().map(crate::nerve::key).collect();
                keys.sort();
                let mut out: String = keys.iter().map(|k| format!("{k}\n")).collect();
                if let Some(dir) = site {
                    let mode = jk.map_or(SiteMode::U, SiteMode::Jk);
                    let s = Site::build(standard_objects(), mode)?;
                    let x = nerve_presheaf(p, &s)?;
                    format::write_presheaf(&dir, &s, &x)?;
                    out.push_str(&format!("# wrote the nerve on {} objects to {}\n", s.objects.len(), dir.display()));
                }
                Ok(ok(out))
            })?
        }
        Command::SegalCheck { dir } => {
            let (site, x) = format::load_presheaf(&dir)?;
            let mut out = String::new();
            let mut holds = true;
            for o in 0..site.objects.len() {
                let r = segal_check(&x, &site, o)?;
                holds &= r.holds;
                match r.witness {
                    None => out.push_str(&format!("PASS {}\n", r.object)),
                    Some(w) => out.push_str(&format!("FAIL {}: {w}\n", r.object)),
                }
            }
            Ok(verdict(holds, out))
        }
        Command::Roundtrip { dir, operad, bounds } => {
            let (site, x) = format::load_presheaf(&dir)?;
            if site.mode != SiteMode::U {
                return Err("roundtrips need a presheaf on the site of graphical maps".into());
            }
            with_operad(&operad, &bounds, |p| -> Res {
                let a = roundtrip_operad(p, &site)?;
                let b = roundtrip_presheaf(&x, &site)?;
                let line = |name: &str, r: &crate::nerve::RoundtripReport| match &r.mismatch {
                    None => format!("PASS {name} ({} checks)\n", r.checked),
                    Some(m) => format!("FAIL {name}: {m}\n"),
                };
                let out = line("operad", &a) + &line("presheaf", &b);
                Ok(verdict(a.holds() && b.holds(), out))
            })?
        }
        Command::JkCheck { dir } => {
            let (big, x) = format::load_presheaf(&dir)?;
            if !matches!(big.mode, SiteMode::Jk(_)) {
                return Err("jk-check needs a presheaf on a site built with `site jk <bound>`".into());
            }
            let small = Site::build(big.objects.clone(), SiteMode::U)?;
            let r = jk_checks(&x, &big, &small)?;
            let mut out = format!("segal on all operad maps: {}\nsegal on graphical maps: {}\n", r.segal_big, r.segal_small);
            for (o, b) in &r.elementary_limits {
                out.push_str(&format!("{} limit at {o}\n", if *b { "PASS" } else { "FAIL" }));
            }
            Ok(verdict(r.holds(), out))
        }
        Command::Laws { operad, bounds } => {
            let vb = bounds.vertex_bound as usize;
            let ab = bounds.arity_bound as usize;
            with_operad(&operad, &bounds, |p| -> Res {
                let profiles: Vec<ColoredObject> = multisets_up_to(p.colors(), ab)
                    .into_iter()
                    .map(|m| ColoredObject::new(m.into_iter().enumerate().map(|(i, c)| (format!("s{i}"), c)).collect()))
                    .collect();
                let mut nested = Vec::new();
                for g in gen::connected_safe_graphs(vb, 2 * ab.max(2)) {
                    if g.vertices().iter().any(|v| g.valence(v) > ab) || g.boundary().len() > ab {
                        continue;
                    }
                    for shape in gen::colorings(&g, p.colors()) {
                        for d in gen::decorations(p, &shape, 64) {
                            nested.extend(gen::two_level(&d));
                        }
                    }
                }
                let r = check_algebra_laws(p, &profiles, &nested);
                let out = match &r.witness {
                    None => format!("PASS unit law on {} operations, associativity on {} decorations\n", r.unit_checked, r.heart_checked),
                    Some(w) => format!("FAIL {w}\n"),
                };
                Ok(verdict(r.holds(), out))
            })?
        }
    }
}

/// Arity accepted when a file is only validated.
const VALIDATE_ARITY: usize = 64;

fn validate(path: &Path) -> Res {
    if path.is_dir() {
        let (site, x) = format::load_presheaf(path)?;
        let n: usize = x.values.iter().map(Vec::len).sum();
        return Ok(ok(format!("ok presheaf on {} objects and {} maps with {n} values\n", site.objects.len(), site.maps.len())));
    }
    let text = format::read(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
    let name = path.display().to_string();
    if first.starts_with("map ") {
        let m = format::load_map(path)?;
        format::validated(&m)?;
        Ok(ok(format!("ok map {}\n", m.name)))
    } else if first.starts_with("operad ") || first.starts_with("colors:") || first.starts_with("free-on ") {
        match format::load_operad(path, VALIDATE_ARITY)? {
            OperadFile::Tabulated(p) => Ok(ok(format!("ok operad {} with {} colors\n", p.name, p.colors.len()))),
            OperadFile::Free(g) => Ok(ok(format!("ok operad generated by a graph with {} arcs\n", g.num_arcs()))),
        }
    } else {
        let f = format::parse_graph(&name, &text)?;
        let g = &f.graph;
        Ok(ok(format!(
            "ok graph {}: {} arcs, {} vertices, {} boundary arcs, connected {}, safe {}\n",
            f.name,
            g.num_arcs(),
            g.vertices().len(),
            g.boundary().len(),
            g.is_connected(),
            g.is_safe()
        )))
    }
}
