//! Command dispatch. Every command renders to a string; identical
//! configurations give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use endscope_core::boundary::{almost_invariance_check, gamma_boundary, in_u_gamma, in_u_gamma_by_growth, Membership};
use endscope_core::dynamics::{act_on_end, act_on_set, dynamics_probe, GroupWord};
use endscope_core::ends::{components, end_count_report_with, removal_set, EndSystem, EndThread};
use endscope_core::quotient::{collapse_components, pullback, QuotientPartition};
use endscope_core::uniformity::PreparedFamily;
use endscope_core::{Error, GraphSpec, Limits, VertexKey, VertexSet, Window};
use serde::{Deserialize, Serialize};

use crate::error::{Failure, Result};
use crate::export;
use crate::source::{load_graph, GraphSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Ends,
    Threads,
    Algebra,
    Act,
    Probe,
    Collapse,
    Pullback,
    Export,
}

impl Command {
    pub const ALL: [(&'static str, Command); 8] = [
        ("ends", Command::Ends),
        ("threads", Command::Threads),
        ("algebra", Command::Algebra),
        ("act", Command::Act),
        ("probe", Command::Probe),
        ("collapse", Command::Collapse),
        ("pullback", Command::Pullback),
        ("export", Command::Export),
    ];

    pub fn parse(name: &str) -> Option<Command> {
        Self::ALL.iter().find(|(n, _)| *n == name).map(|&(_, c)| c)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Dot,
    Table,
}

/// Everything a command may read. Unset budgets fall back to the graph
/// source, then to per-command defaults.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub graph: Option<String>,
    pub basepoint: Option<String>,
    pub rmax: Option<u32>,
    pub horizon: Option<u32>,
    pub depth: Option<u32>,
    pub format: Option<Format>,
    pub seq: Vec<String>,
    pub members: Vec<String>,
    pub prefix: Option<String>,
    pub complement: bool,
    /// `threads`: also check the ultrafilter axioms for every thread.
    pub axioms: bool,
    pub radii: Vec<u32>,
    pub word: Option<String>,
    pub thread: Option<String>,
    pub partition: Option<u32>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub vertex_cap: Option<usize>,
}

struct Ctx {
    source: GraphSource,
    basepoint: String,
    limits: Limits,
}

impl Ctx {
    fn new(cfg: &RunConfig) -> Result<Ctx> {
        let graph = cfg.graph.as_deref().ok_or_else(|| Failure::Config("--graph is required".into()))?;
        let source = load_graph(graph)?;
        let basepoint = match cfg.basepoint.clone().or_else(|| source.basepoint.clone()) {
            Some(b) => b,
            None => source
                .spec
                .default_basepoint()
                .ok_or_else(|| Failure::Config("--basepoint is required for this graph".into()))?
                .to_string(),
        };
        let mut limits = Limits::default();
        if let Some(cap) = cfg.vertex_cap {
            limits.vertex_cap = cap;
        }
        Ok(Ctx { source, basepoint, limits })
    }

    fn spec(&self) -> &GraphSpec {
        &self.source.spec
    }

    fn horizon(&self, cfg: &RunConfig, fallback: u32) -> u32 {
        cfg.horizon.or(self.source.radius).unwrap_or(fallback)
    }

    fn window(&self, radius: u32) -> Result<Window> {
        Ok(Window::materialize_with(self.spec(), &self.basepoint, radius, self.limits)?)
    }

    fn system(&self, radius: u32, depth: u32) -> Result<EndSystem> {
        if radius < depth + 2 {
            return Err(Failure::Config(format!("horizon {radius} must be at least depth + 2 = {}", depth + 2)));
        }
        Ok(EndSystem::new(self.window(radius)?, depth)?)
    }
}

/// Runs one command and returns what it prints. With `--out`, the rendering
/// goes to that file and a one-line note is returned instead.
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<String> {
    let format = cfg.format.unwrap_or(if cmd == Command::Export { Format::Dot } else { Format::Json });
    if format == Format::Dot && cmd != Command::Export {
        return Err(Failure::Config("dot output is only available for export".into()));
    }
    let text = match cmd {
        Command::Ends => ends(cfg, format)?,
        Command::Threads => threads(cfg, format)?,
        Command::Algebra => algebra(cfg, format)?,
        Command::Act => act(cfg, format)?,
        Command::Probe => probe(cfg, format)?,
        Command::Collapse => collapse(cfg, format)?,
        Command::Pullback => pullback_cmd(cfg, format)?,
        Command::Export => export_cmd(cfg, format)?,
    };
    match &cfg.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::io(path, e))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn keys(list: impl IntoIterator<Item = VertexKey>) -> Vec<String> {
    list.into_iter().map(|k| k.to_string()).collect()
}

fn thread_dto(t: &EndThread) -> ThreadDto {
    ThreadDto { id: t.id().to_string(), choices: keys(t.choices.iter().cloned()) }
}

#[derive(Serialize)]
struct ThreadDto {
    id: String,
    choices: Vec<String>,
}

#[derive(Serialize)]
struct EndsDto {
    schema: &'static str,
    graph: String,
    basepoint: String,
    horizon: u32,
    radii: Vec<u32>,
    unbounded_counts: Vec<usize>,
    stable: Vec<bool>,
    exact: bool,
    classification: String,
    lower_bound: usize,
}

fn ends(cfg: &RunConfig, format: Format) -> Result<String> {
    let ctx = Ctx::new(cfg)?;
    let rmax = cfg.rmax.unwrap_or(3);
    let horizon = ctx.horizon(cfg, rmax + 4);
    if horizon < rmax + 2 {
        return Err(Failure::Config(format!("horizon {horizon} must be at least rmax + 2 = {}", rmax + 2)));
    }
    let rep = end_count_report_with(ctx.spec(), &ctx.basepoint, rmax, horizon, ctx.limits)?;
    let dto = EndsDto {
        schema: "endscope.ends/1",
        graph: rep.graph.clone(),
        basepoint: rep.basepoint.to_string(),
        horizon,
        radii: rep.radii.clone(),
        unbounded_counts: rep.unbounded_counts.clone(),
        stable: rep.stable.clone(),
        exact: rep.exact,
        classification: rep.classification.to_string(),
        lower_bound: rep.unbounded_counts.last().copied().unwrap_or(0),
    };
    if format == Format::Json {
        return Ok(json(&dto));
    }
    let mut out = String::new();
    writeln!(out, "graph           {}", dto.graph).unwrap();
    writeln!(out, "basepoint       {}", dto.basepoint).unwrap();
    writeln!(out, "horizon         {horizon}").unwrap();
    writeln!(out, "r  unbounded  stable").unwrap();
    for ((r, c), s) in dto.radii.iter().zip(&dto.unbounded_counts).zip(&dto.stable) {
        writeln!(out, "{r:<2} {c:<10} {}", if *s { "yes" } else { "no" }).unwrap();
    }
    writeln!(out, "classification  {}", dto.classification).unwrap();
    Ok(out)
}

#[derive(Serialize)]
struct ComponentDto {
    id: String,
    size: usize,
    frontier_touching: bool,
}

#[derive(Serialize)]
struct PartitionDto {
    radius: u32,
    components: Vec<ComponentDto>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct AxiomsDto {
    F0: bool,
    F1: bool,
    F2: bool,
    U: bool,
    NB: bool,
}

#[derive(Serialize)]
struct VerdictDto {
    set: String,
    member: bool,
}

#[derive(Serialize)]
struct AxiomReportDto {
    thread: String,
    axioms: AxiomsDto,
    all_pass: bool,
    memberships: Vec<VerdictDto>,
}

#[derive(Serialize)]
struct ThreadsDto {
    schema: &'static str,
    graph: String,
    basepoint: String,
    horizon: u32,
    depth: u32,
    threads: Vec<ThreadDto>,
    partitions: Vec<PartitionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axiom_reports: Option<Vec<AxiomReportDto>>,
}

/// Checks each thread against the family of frontier-touching components of
/// `Γ ∖ M_r`, `r ≤ depth`, and their complements. Set ids are `r:id` and
/// `~r:id` for the complement.
fn axiom_reports(sys: &EndSystem, ts: &[EndThread]) -> Result<Vec<AxiomReportDto>> {
    let mut family = Vec::new();
    let mut names = Vec::new();
    for r in 0..=sys.depth() {
        for c in sys.partition(r).components().iter().filter(|c| c.frontier_touching) {
            family.push(c.vertices.clone());
            names.push(format!("{r}:{}", c.id));
            family.push(c.vertices.complement());
            names.push(format!("~{r}:{}", c.id));
        }
    }
    let prepared = PreparedFamily::new(sys.window(), &family)?;
    ts.iter()
        .map(|t| {
            let rep = prepared.check(sys, t)?;
            Ok(AxiomReportDto {
                thread: t.id().to_string(),
                all_pass: rep.all_pass(),
                axioms: AxiomsDto { F0: rep.f0, F1: rep.f1, F2: rep.f2, U: rep.u, NB: rep.nb },
                memberships: names
                    .iter()
                    .zip(&rep.memberships)
                    .map(|(n, &member)| VerdictDto { set: n.clone(), member })
                    .collect(),
            })
        })
        .collect()
}

fn threads(cfg: &RunConfig, format: Format) -> Result<String> {
    let ctx = Ctx::new(cfg)?;
    let depth = cfg.depth.unwrap_or(1);
    let horizon = ctx.horizon(cfg, depth + 2);
    let sys = ctx.system(horizon, depth)?;
    let ts = if sys.window().frontier().is_empty() { Vec::new() } else { sys.threads() };
    let partitions = (0..=depth)
        .map(|r| PartitionDto {
            radius: r,
            components: sys
                .partition(r)
                .components()
                .iter()
                .map(|c| ComponentDto { id: c.id.to_string(), size: c.size(), frontier_touching: c.frontier_touching })
                .collect(),
        })
        .collect();
    let dto = ThreadsDto {
        schema: "endscope.threads/1",
        graph: ctx.spec().ident(),
        basepoint: ctx.basepoint.clone(),
        horizon,
        depth,
        threads: ts.iter().map(thread_dto).collect(),
        partitions,
        axiom_reports: if cfg.axioms { Some(axiom_reports(&sys, &ts)?) } else { None },
    };
    if format == Format::Json {
        return Ok(json(&dto));
    }
    let mut out = format!("{} threads of depth {depth} at horizon {horizon}\n", dto.threads.len());
    for t in &ts {
        writeln!(out, "{t}").unwrap();
    }
    if let Some(reports) = &dto.axiom_reports {
        writeln!(out, "thread  F0 F1 F2 U NB").unwrap();
        let mark = |b: bool| if b { "ok" } else { "--" };
        for r in reports {
            let a = &r.axioms;
            writeln!(out, "{}  {} {} {} {} {}", r.thread, mark(a.F0), mark(a.F1), mark(a.F2), mark(a.U), mark(a.NB)).unwrap();
        }
    }
    Ok(out)
}

/// A vertex set tied to the window it was taken in, by fingerprint. `algebra`
/// and `act` print their sets this way and read one back with `--input`.
#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SetDto {
    window: String,
    members: Vec<String>,
}

fn window_hash(w: &Window) -> String {
    format!("{:016x}", w.fingerprint())
}

fn set_dto(w: &Window, a: &VertexSet) -> SetDto {
    SetDto { window: window_hash(w), members: keys(w.keys_of(a)) }
}

struct Selection<F> {
    pick: F,
    /// Keys named explicitly; each must lie in the window.
    listed: Vec<String>,
    /// Fingerprint required by a saved set.
    window: Option<String>,
}

/// The set selected by `--members`, `--prefix`, a saved set in `--input`, and
/// `--complement`.
fn selector(cfg: &RunConfig, spec: &GraphSpec) -> Result<Selection<impl Fn(&VertexKey) -> bool>> {
    let saved: Option<SetDto> = if cfg.input.is_some() { Some(read_input(cfg)?) } else { None };
    if cfg.members.is_empty() && cfg.prefix.is_none() && saved.is_none() {
        return Err(Failure::Config("select a set with --members, --prefix or --input".into()));
    }
    let mut listed: Vec<String> = cfg.members.iter().map(|m| m.trim().to_string()).collect();
    if let Some(s) = &saved {
        listed.extend(s.members.iter().cloned());
    }
    let members = listed
        .iter()
        .map(|m| spec.canonicalize(m).map_err(Failure::from))
        .collect::<Result<std::collections::BTreeSet<_>>>()?;
    let prefix = cfg.prefix.clone();
    let flip = cfg.complement;
    let pick = move |k: &VertexKey| {
        let hit = members.contains(k) || prefix.as_deref().is_some_and(|p| k.as_str().starts_with(p));
        hit != flip
    };
    Ok(Selection { pick, listed, window: saved.map(|s| s.window) })
}

fn select<F: Fn(&VertexKey) -> bool>(w: &Window, sel: &Selection<F>) -> Result<VertexSet> {
    if sel.window.as_deref().is_some_and(|h| h != window_hash(w)) {
        return Err(Failure::Core(Error::WindowMismatch));
    }
    for m in &sel.listed {
        if w.id(m).is_none() {
            return Err(Failure::Core(Error::InvalidKey(format!("{m} is outside the window"))));
        }
    }
    Ok(w.set_where(|v| (sel.pick)(w.key(v))))
}

#[derive(Serialize)]
struct InvarianceDto {
    word: String,
    bounded: bool,
    region_radius: u32,
    witness: Vec<String>,
}

#[derive(Serialize)]
struct AlgebraDto {
    schema: &'static str,
    graph: String,
    basepoint: String,
    horizon: u32,
    set: SetDto,
    size: usize,
    boundary_edges: Vec<[String; 2]>,
    support: Vec<String>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    growth: Option<GrowthDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariance: Option<InvarianceDto>,
}

#[derive(Serialize)]
struct GrowthDto {
    radii: Vec<u32>,
    support_sizes: Vec<usize>,
}

fn verdict_name(m: &Membership) -> &'static str {
    match m {
        Membership::Yes => "yes",
        Membership::No(_) => "no",
        Membership::HorizonUnknown => "horizon-unknown",
    }
}

fn algebra(cfg: &RunConfig, format: Format) -> Result<String> {
    let ctx = Ctx::new(cfg)?;
    let sel = selector(cfg, ctx.spec())?;
    let (w, verdict) = if cfg.radii.is_empty() {
        let w = ctx.window(ctx.horizon(cfg, 8))?;
        let v = in_u_gamma(&w, &select(&w, &sel)?)?;
        (w, v)
    } else {
        if sel.window.is_some() {
            return Err(Failure::Config("a saved set belongs to one window and cannot be used with --radii".into()));
        }
        in_u_gamma_by_growth(ctx.spec(), &ctx.basepoint, &cfg.radii, &sel.pick)?
    };
    let a = select(&w, &sel)?;
    let b = gamma_boundary(&w, &a)?;
    let growth = match &verdict.membership {
        Membership::No(cert) => Some(GrowthDto { radii: cert.radii.clone(), support_sizes: cert.support_sizes.clone() }),
        _ => None,
    };
    let invariance = match &cfg.word {
        Some(g) => {
            let v = almost_invariance_check(&w, &a, g)?;
            Some(InvarianceDto {
                word: g.clone(),
                bounded: v.bounded,
                region_radius: v.region_radius,
                witness: keys(w.keys_of(&v.witness)),
            })
        }
        None => None,
    };
    let mut edges: Vec<_> = b.edges.iter().map(|&e| w.edge_keys(e)).collect();
    edges.sort();
    let dto = AlgebraDto {
        schema: "endscope.algebra/1",
        graph: ctx.spec().ident(),
        basepoint: ctx.basepoint.clone(),
        horizon: w.radius(),
        set: set_dto(&w, &a),
        size: a.len(),
        boundary_edges: edges.into_iter().map(|e| [e.a.to_string(), e.b.to_string()]).collect(),
        support: keys(w.keys_of(&b.support)),
        verdict: verdict_name(&verdict.membership),
        growth,
        invariance,
    };
    if format == Format::Json {
        return Ok(json(&dto));
    }
    let mut out = String::new();
    writeln!(out, "set size        {}", dto.size).unwrap();
    writeln!(out, "boundary edges  {}", dto.boundary_edges.len()).unwrap();
    writeln!(out, "support         {}", dto.support.join(" ")).unwrap();
    writeln!(out, "bounded         {}", dto.verdict).unwrap();
    if let Some(g) = &dto.growth {
        writeln!(out, "growth          {:?} at radii {:?}", g.support_sizes, g.radii).unwrap();
    }
    if let Some(inv) = &dto.invariance {
        writeln!(out, "A + A·{}        {} ({})", inv.word, if inv.bounded { "bounded" } else { "unbounded" }, inv.witness.join(" ")).unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct ActDto {
    schema: &'static str,
    graph: String,
    word: String,
    normal_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    set: Option<SetDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<SetDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    thread: Option<ThreadDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    thread_image: Option<ThreadDto>,
}

fn act(cfg: &RunConfig, format: Format) -> Result<String> {
    let ctx = Ctx::new(cfg)?;
    let word = cfg.word.as_deref().ok_or_else(|| Failure::Config("--word is required".into()))?;
    let g = GroupWord::parse(ctx.spec(), word)?;
    let mut dto = ActDto {
        schema: "endscope.act/1",
        graph: ctx.spec().ident(),
        word: g.word.clone(),
        normal_form: g.normal_form.to_string(),
        set: None,
        image: None,
        thread: None,
        thread_image: None,
    };
    if let Some(id) = &cfg.thread {
        let d = cfg.depth.unwrap_or(0);
        let deep = d + g.length();
        let sys = ctx.system(ctx.horizon(cfg, deep + 2).max(deep + 2), deep)?;
        let t = sys
            .thread_by_id(deep, id)
            .or_else(|| sys.window().id(id).and_then(|v| sys.thread_through(v, deep)))
            .ok_or_else(|| Failure::Config(format!("{id} names no thread of depth {deep}")))?;
        dto.thread_image = Some(thread_dto(&act_on_end(&sys, &g, &t, d)?));
        dto.thread = Some(thread_dto(&t));
    } else {
        let sel = selector(cfg, ctx.spec())?;
        let w = ctx.window(ctx.horizon(cfg, 8))?;
        let a = select(&w, &sel)?;
        dto.image = Some(set_dto(&w, &act_on_set(&w, &g, &a)?));
        dto.set = Some(set_dto(&w, &a));
    }
    if format == Format::Json {
        return Ok(json(&dto));
    }
    let mut out = format!("{} = {}\n", dto.word, dto.normal_form);
    if let Some(image) = &dto.image {
        writeln!(out, "image  {}", image.members.join(" ")).unwrap();
    }
    if let (Some(t), Some(i)) = (&dto.thread, &dto.thread_image) {
        writeln!(out, "end    {}", t.choices.join("/")).unwrap();
        writeln!(out, "image  {}", i.choices.join("/")).unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct ProbeDto {
    schema: &'static str,
    graph: String,
    depth: u32,
    horizon: u32,
    sequence: Vec<String>,
    classes: Vec<String>,
    lambda: String,
    mu: String,
    columns: Vec<String>,
    collapse_table: Vec<Vec<bool>>,
    verified_from: Option<usize>,
    collapse_verified: bool,
}

fn probe(cfg: &RunConfig, format: Format) -> Result<String> {
    let ctx = Ctx::new(cfg)?;
    if cfg.seq.is_empty() {
        return Err(Failure::Config("--seq is required".into()));
    }
    let seq = cfg.seq.iter().map(|w| GroupWord::parse(ctx.spec(), w)).collect::<Result<Vec<_>, _>>()?;
    let d = cfg.depth.unwrap_or(0);
    let rep = dynamics_probe(ctx.spec(), &ctx.basepoint, &seq, d, ctx.horizon(cfg, d + 2))?;
    let dto = ProbeDto {
        schema: "endscope.probe/1",
        graph: ctx.spec().ident(),
        depth: d,
        horizon: rep.horizon,
        sequence: keys(rep.sequence.clone()),
        classes: rep.classes.iter().map(|t| t.id().to_string()).collect(),
        lambda: rep.lambda.id().to_string(),
        mu: rep.mu.id().to_string(),
        columns: rep.columns.iter().map(|&j| rep.classes[j].id().to_string()).collect(),
        collapse_table: rep.collapse_table.clone(),
        verified_from: rep.verified_from,
        collapse_verified: rep.collapse_verified(),
    };
    if format == Format::Json {
        return Ok(json(&dto));
    }
    let mut out = String::new();
    writeln!(out, "lambda  {}", dto.lambda).unwrap();
    writeln!(out, "mu      {}", dto.mu).unwrap();
    writeln!(out, "n  g_n  {}", dto.columns.join(" ")).unwrap();
    for (n, (g, row)) in dto.sequence.iter().zip(&dto.collapse_table).enumerate() {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "yes" } else { "no" }).collect();
        writeln!(out, "{} {g} {}", n + 1, cells.join(" ")).unwrap();
    }
    match dto.verified_from {
        Some(n) => writeln!(out, "collapse verified from n = {n}").unwrap(),
        None => writeln!(out, "collapse not verified").unwrap(),
    }
    Ok(out)
}

fn read_input<T: for<'de> Deserialize<'de>>(cfg: &RunConfig) -> Result<T> {
    let path: &Path = cfg.input.as_deref().ok_or_else(|| Failure::Config("--input is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::parse(path, e))
}

/// Input of `collapse`: a labeled graph and automorphisms as label maps.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CollapseInput {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    #[serde(default)]
    automorphisms: Vec<BTreeMap<String, String>>,
}

#[derive(Serialize)]
struct CollapseDto {
    schema: &'static str,
    classes: Vec<Vec<String>>,
    projection: BTreeMap<String, usize>,
    induced: Vec<Vec<usize>>,
    quotient_edges: usize,
}

fn collapse(cfg: &RunConfig, format: Format) -> Result<String> {
    let input: CollapseInput = read_input(cfg)?;
    let index: BTreeMap<&str, usize> = input.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    if index.len() != input.vertices.len() {
        return Err(Failure::Config("vertex labels must be distinct".into()));
    }
    let lookup = |k: &str| index.get(k).copied().ok_or_else(|| Failure::Core(Error::InvalidKey(k.into())));
    let edges = input.edges.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>>>()?;
    let mut perms = Vec::new();
    for (i, map) in input.automorphisms.iter().enumerate() {
        let mut p = Vec::with_capacity(input.vertices.len());
        for v in &input.vertices {
            // unlisted vertices are fixed
            p.push(lookup(map.get(v).map_or(v.as_str(), String::as_str))?);
        }
        if map.keys().any(|k| !index.contains_key(k.as_str())) {
            return Err(Failure::Core(Error::InvalidPermutation(format!("automorphism {i} names unknown vertices"))));
        }
        perms.push(p);
    }
    let c = collapse_components(input.vertices.len(), &edges, &perms)?;
    let dto = CollapseDto {
        schema: "endscope.collapse/1",
        classes: c.classes.iter().map(|m| m.iter().map(|&v| input.vertices[v].clone()).collect()).collect(),
        projection: input.vertices.iter().cloned().zip(c.projection.iter().copied()).collect(),
        induced: c.induced,
        quotient_edges: 0,
    };
    if format == Format::Json {
        return Ok(json(&dto));
    }
    let mut out = format!("{} classes\n", dto.classes.len());
    for (i, cl) in dto.classes.iter().enumerate() {
        writeln!(out, "{i}  {}", cl.join(" ")).unwrap();
    }
    for (i, p) in dto.induced.iter().enumerate() {
        writeln!(out, "automorphism {i}  {p:?}").unwrap();
    }
    Ok(out)
}

/// Input of `pullback`: class labels per thread id for two (optionally
/// three) quotients, and the tracked words.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PullbackInput {
    a: BTreeMap<String, String>,
    b: BTreeMap<String, String>,
    #[serde(default)]
    third: Option<BTreeMap<String, String>>,
    #[serde(default)]
    words: Vec<String>,
}

#[derive(Serialize)]
struct QuotientDto {
    classes: Vec<Vec<String>>,
    actions: BTreeMap<String, Vec<usize>>,
}

#[derive(Serialize)]
struct CertificateDto {
    maps_onto_a: bool,
    maps_onto_b: bool,
    factor: Option<Vec<usize>>,
    commutes: bool,
    holds: bool,
}

#[derive(Serialize)]
struct PullbackDto {
    schema: &'static str,
    graph: String,
    depth: u32,
    threads: Vec<String>,
    a: QuotientDto,
    b: QuotientDto,
    pullback: QuotientDto,
    pairs: Vec<[usize; 2]>,
    to_a: Vec<usize>,
    to_b: Vec<usize>,
    realized_pairs: usize,
    possible_pairs: usize,
    projections_equivariant: bool,
    universality: Option<CertificateDto>,
}

fn quotient_dto(q: &QuotientPartition) -> QuotientDto {
    QuotientDto {
        classes: q.classes().iter().map(|c| c.iter().map(|&t| q.domain[t].to_string()).collect()).collect(),
        actions: q.actions.clone(),
    }
}

fn pullback_cmd(cfg: &RunConfig, format: Format) -> Result<String> {
    let ctx = Ctx::new(cfg)?;
    let input: PullbackInput = read_input(cfg)?;
    let d = cfg.depth.unwrap_or(0);
    let words = input.words.iter().map(|w| GroupWord::parse(ctx.spec(), w)).collect::<Result<Vec<_>, _>>()?;
    let deep = d + words.iter().map(GroupWord::length).max().unwrap_or(0);
    let sys = ctx.system(ctx.horizon(cfg, deep + 2).max(deep + 2), deep)?;
    let ids: Vec<String> = sys.threads_at(d).iter().map(|t| t.id().to_string()).collect();
    let labels = |m: &BTreeMap<String, String>, which: &str| -> Result<Vec<usize>> {
        if m.len() != ids.len() || ids.iter().any(|id| !m.contains_key(id)) {
            return Err(Failure::Config(format!("quotient {which} must label exactly the threads {}", ids.join(","))));
        }
        let mut names: BTreeMap<&str, usize> = BTreeMap::new();
        Ok(ids
            .iter()
            .map(|id| {
                let next = names.len();
                *names.entry(m[id].as_str()).or_insert(next)
            })
            .collect())
    };
    let qa = QuotientPartition::induced(&sys, d, &labels(&input.a, "a")?, &words)?;
    let qb = QuotientPartition::induced(&sys, d, &labels(&input.b, "b")?, &words)?;
    let pb = pullback(&qa, &qb)?;
    let universality = match &input.third {
        Some(m) => {
            let q3 = QuotientPartition::induced(&sys, d, &labels(m, "third")?, &words)?;
            let c = pb.certify(&qa, &qb, &q3);
            Some(CertificateDto {
                maps_onto_a: c.maps_onto_a,
                maps_onto_b: c.maps_onto_b,
                holds: c.holds(),
                factor: c.factor,
                commutes: c.commutes,
            })
        }
        None => None,
    };
    let dto = PullbackDto {
        schema: "endscope.pullback/1",
        graph: ctx.spec().ident(),
        depth: d,
        threads: ids,
        a: quotient_dto(&qa),
        b: quotient_dto(&qb),
        pullback: quotient_dto(&pb.quotient),
        pairs: pb.pairs.iter().map(|&(a, b)| [a, b]).collect(),
        to_a: pb.to_a.clone(),
        to_b: pb.to_b.clone(),
        realized_pairs: pb.pairs.len(),
        possible_pairs: pb.possible_pairs,
        projections_equivariant: pb.projections_equivariant(&qa, &qb),
        universality,
    };
    if format == Format::Json {
        return Ok(json(&dto));
    }
    let mut out = format!("{} of {} pairs realized\n", dto.realized_pairs, dto.possible_pairs);
    for (cl, (a, b)) in dto.pullback.classes.iter().zip(dto.to_a.iter().zip(&dto.to_b)) {
        writeln!(out, "({a},{b})  {}", cl.join(" ")).unwrap();
    }
    writeln!(out, "projections equivariant  {}", dto.projections_equivariant).unwrap();
    if let Some(c) = &dto.universality {
        writeln!(out, "factors through pullback  {}", c.holds).unwrap();
    }
    Ok(out)
}

fn export_cmd(cfg: &RunConfig, format: Format) -> Result<String> {
    let ctx = Ctx::new(cfg)?;
    let w = ctx.window(ctx.horizon(cfg, 3))?;
    let partition = match cfg.partition {
        Some(r) => Some(components(&w, &removal_set(&w, r)?)?),
        None => None,
    };
    match format {
        Format::Dot => Ok(export::to_dot(&w, partition.as_ref())),
        Format::Json => Ok(json(&export::to_json(&w, partition.as_ref()))),
        Format::Table => Err(Failure::Config("export writes dot or json".into())),
    }
}
