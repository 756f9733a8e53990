//! Subcommand bodies. Each builds a serialisable report that renders as
//! text, JSON or CSV.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_rational::Rational64;
use ribbon_core::multiscale::ScaleEntry;
use ribbon_core::numerics::{
    chain_scan, default_grid, scaling_scan, BoundConstants, VariantScan, DEFAULT_SMEARING,
};
use ribbon_core::oscillation::{oracle_check, OracleCheck, PhaseFormReport};
use ribbon_core::{
    classify_graph, gn_tree, is_admissible, rosette_factor, tree_reduce, Counterterm,
    DivergenceReport, ModelParams, RibbonGraph, ScaleAttribution, TopologyReport, TreePreference,
    VertexId,
};
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_graph(path: &Path) -> Result<RibbonGraph, CliError> {
    Ok(RibbonGraph::from_json(&read(path)?)?)
}

/// The attribution file if given, otherwise every segment at scale 1.
pub fn load_scales(g: &RibbonGraph, path: Option<&Path>) -> Result<ScaleAttribution, CliError> {
    match path {
        Some(p) => Ok(ScaleAttribution::from_json(g, &read(p)?)?),
        None => Ok(ScaleAttribution::flat(g, 1)),
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// analyze

#[derive(Serialize)]
pub struct Analysis(pub TopologyReport);

impl Render for Analysis {
    fn text(&self) -> String {
        let t = &self.0;
        let mut s = format!(
            "v={} e={} e0={} e_kappa={} f={} components={} chi={} g={} b={} planar={} regular={} tree_like={}\n",
            t.v, t.e, t.e0, t.e_kappa, t.f, t.k, t.chi, t.g, t.b, yn(t.planar), yn(t.regular), yn(t.tree_like)
        );
        for (i, c) in t.components.iter().enumerate() {
            let _ = writeln!(
                s,
                "component {} [{}]: v={} e={} e0={} e_kappa={} f={} chi={} g={} b={} N={} N_kappa={} tree_like={}",
                i + 1,
                c.vertices.join(","),
                c.v, c.e, c.e0, c.e_kappa, c.f, c.chi, c.g, c.b, c.n, c.n_kappa, yn(c.tree_like)
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s =
            String::from("component,v,e,e0,e_kappa,f,chi,g,b,n,n_kappa,planar,regular,tree_like\n");
        for (i, c) in self.0.components.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                i + 1,
                c.v,
                c.e,
                c.e0,
                c.e_kappa,
                c.f,
                c.chi,
                c.g,
                c.b,
                c.n,
                c.n_kappa,
                c.planar,
                c.regular,
                c.tree_like
            );
        }
        s
    }
}

pub fn analyze(g: &RibbonGraph) -> Result<Analysis, CliError> {
    Ok(Analysis(g.topology()?))
}

// rosette

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    ClosedForm,
    TreeReduce,
}

#[derive(Serialize)]
pub struct Rosette {
    pub construction: Construction,
    pub root: String,
    pub tree_lines: Vec<String>,
    pub loop_lines: Vec<String>,
    #[serde(flatten)]
    pub form: PhaseFormReport,
}

impl Render for Rosette {
    fn text(&self) -> String {
        let mut s = format!(
            "construction: {}\nroot: {}\ntree lines: {}\nloop lines: {}\nphase (coefficient of a ∧ b):\n",
            match self.construction {
                Construction::ClosedForm => "closed-form",
                Construction::TreeReduce => "tree-reduce",
            },
            self.root,
            self.tree_lines.join(", "),
            self.loop_lines.join(", ")
        );
        for t in &self.form.terms {
            let _ = writeln!(s, "  {} ∧ {}  {}", t.a, t.b, t.coefficient);
        }
        let delta: Vec<String> = self
            .form
            .constraint
            .iter()
            .map(|(sym, c)| {
                if c == "1" {
                    sym.clone()
                } else {
                    format!("{c}·{sym}")
                }
            })
            .collect();
        let _ = writeln!(s, "constraint: δ({})", delta.join(" + "));
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("a,b,coefficient\n");
        for t in &self.form.terms {
            let _ = writeln!(s, "{},{},{}", t.a, t.b, t.coefficient);
        }
        for (sym, c) in &self.form.constraint {
            let _ = writeln!(s, "delta,{sym},{c}");
        }
        s
    }
}

pub fn rosette(
    g: &RibbonGraph,
    root: Option<&str>,
    construction: Construction,
) -> Result<Rosette, CliError> {
    let root = match root {
        Some(name) => g.vertex_by_name(name)?,
        None => VertexId(0),
    };
    let t = g.spanning_tree(root, &TreePreference::Default)?;
    let form = match construction {
        Construction::ClosedForm => rosette_factor(g, &t)?,
        Construction::TreeReduce => tree_reduce(g, &t)?,
    };
    let names =
        |set: &BTreeSet<ribbon_core::EdgeId>| set.iter().map(|&e| g.edge(e).id.clone()).collect();
    Ok(Rosette {
        construction,
        root: g.vertex(root).id.clone(),
        tree_lines: names(&t.tree_edges),
        loop_lines: names(&t.loop_edges),
        form: form.report(g),
    })
}

// gn-tree

#[derive(Serialize)]
pub struct NodeView {
    pub label: String,
    pub level: u32,
    pub k: usize,
    pub parent: Option<String>,
    pub children: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub n: usize,
    pub n_kappa: usize,
    pub e_kappa: usize,
}

#[derive(Serialize)]
pub struct LineView {
    pub edge: String,
    pub segments: Vec<u32>,
    pub effective: u32,
    pub admissible: bool,
}

#[derive(Serialize)]
pub struct GnView {
    pub nodes: Vec<NodeView>,
    pub generalised_lines: Vec<LineView>,
}

impl Render for GnView {
    fn text(&self) -> String {
        let mut s = String::new();
        for n in &self.nodes {
            let indent = "  ".repeat(n.level as usize);
            let _ = writeln!(
                s,
                "{indent}{} N={} N_kappa={} E_kappa={} vertices=[{}] lines=[{}]",
                n.label,
                n.n,
                n.n_kappa,
                n.e_kappa,
                n.vertices.join(","),
                n.edges.join(",")
            );
        }
        for l in &self.generalised_lines {
            let _ = writeln!(
                s,
                "generalised line {} segments={:?} i_m={} admissible={}",
                l.edge,
                l.segments,
                l.effective,
                yn(l.admissible)
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("node,level,k,parent,n,n_kappa,e_kappa,vertices,lines\n");
        for n in &self.nodes {
            let _ = writeln!(
                s,
                "\"{}\",{},{},\"{}\",{},{},{},{},{}",
                n.label,
                n.level,
                n.k,
                n.parent.as_deref().unwrap_or(""),
                n.n,
                n.n_kappa,
                n.e_kappa,
                n.vertices.join(" "),
                n.edges.join(" ")
            );
        }
        s
    }
}

pub fn gn_view(g: &RibbonGraph, mu: &ScaleAttribution) -> Result<GnView, CliError> {
    let tree = gn_tree(g, mu);
    let label = |i: usize| tree.nodes[i].label();
    let nodes = tree
        .nodes
        .iter()
        .map(|n| NodeView {
            label: n.label(),
            level: n.level,
            k: n.k,
            parent: n.parent.map(label),
            children: n.children.iter().map(|&c| label(c)).collect(),
            vertices: n.vertices.iter().map(|&v| g.vertex(v).id.clone()).collect(),
            edges: n.edges.iter().map(|&e| g.edge(e).id.clone()).collect(),
            n: n.n,
            n_kappa: n.n_kappa,
            e_kappa: n.e_kappa,
        })
        .collect();
    let mut generalised_lines = Vec::new();
    for e in g.edge_ids().filter(|&e| g.edge(e).kind.is_generalised()) {
        generalised_lines.push(LineView {
            edge: g.edge(e).id.clone(),
            segments: mu.segments(e).to_vec(),
            effective: mu.effective(e),
            admissible: is_admissible(g, mu, e)?,
        });
    }
    Ok(GnView {
        nodes,
        generalised_lines,
    })
}

// classify

#[derive(Serialize)]
pub struct Classified(pub DivergenceReport);

const CLASSIFY_HEADER: &str = "node,level,n,n_kappa,g,b,tree_like,n_kappa_loops,e_kappa_empty,case,bound,divergent,logarithmic,counterterm";

fn node_rows(r: &DivergenceReport, prefix: &str, s: &mut String) {
    for n in &r.nodes {
        let d = &n.data;
        let c = &n.class;
        let _ = writeln!(
            s,
            "{prefix}\"{}\",{},{},{},{},{},{},{},{},{},{},{},{},{}",
            n.label,
            n.level,
            d.n,
            d.n_kappa,
            d.g,
            d.b,
            d.tree_like,
            d.loop_kappa,
            d.e_kappa_empty,
            c.case.name(),
            c.bound,
            c.divergent,
            c.logarithmic,
            c.counterterm.map(Counterterm::name).unwrap_or("none")
        );
    }
}

fn verdict(divergent: bool, logarithmic: bool) -> &'static str {
    match (divergent, logarithmic) {
        (false, _) => "convergent",
        (true, true) => "log-divergent",
        (true, false) => "divergent",
    }
}

fn counterterm_list(set: &BTreeSet<Counterterm>) -> String {
    if set.is_empty() {
        "none".into()
    } else {
        set.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
    }
}

impl Render for Classified {
    fn text(&self) -> String {
        let mut s = format!(
            "{:<8} {:>3} {:>3} {:>3} {:>2} {:>2} {:>9} {:>3} {:<26} {:>5} {:<14} {}\n",
            "node",
            "N",
            "Nκ",
            "nκ",
            "g",
            "b",
            "tree-like",
            "Eκ",
            "case",
            "bound",
            "verdict",
            "counterterm"
        );
        for n in &self.0.nodes {
            let d = &n.data;
            let c = &n.class;
            let _ = writeln!(
                s,
                "{:<8} {:>3} {:>3} {:>3} {:>2} {:>2} {:>9} {:>3} {:<26} {:>5} {:<14} {}",
                n.label,
                d.n,
                d.n_kappa,
                d.loop_kappa,
                d.g,
                d.b,
                yn(d.tree_like),
                if d.e_kappa_empty { "∅" } else { "≠∅" },
                c.case.name(),
                c.bound,
                verdict(c.divergent, c.logarithmic),
                c.counterterm.map(Counterterm::name).unwrap_or("-")
            );
        }
        let _ = writeln!(
            s,
            "counterterms: {}",
            counterterm_list(&self.0.counterterms)
        );
        s
    }

    fn csv(&self) -> String {
        let mut s = format!("{CLASSIFY_HEADER}\n");
        node_rows(&self.0, "", &mut s);
        s
    }
}

pub fn classify(g: &RibbonGraph, mu: &ScaleAttribution) -> Result<Classified, CliError> {
    Ok(Classified(classify_graph(g, mu)?))
}

#[derive(Serialize)]
pub struct Run {
    pub scales: BTreeMap<String, ScaleEntry>,
    pub report: DivergenceReport,
}

#[derive(Serialize)]
pub struct Enumeration {
    pub max_scale: u32,
    pub attributions: usize,
    pub nodes: usize,
    pub divergent_nodes: usize,
    /// Divergent nodes that are not tree-like; zero when the bound holds.
    pub divergent_not_tree_like: usize,
    pub counterterms: BTreeSet<Counterterm>,
    pub runs: Vec<Run>,
}

impl Enumeration {
    pub fn any_divergent(&self) -> bool {
        self.divergent_nodes > 0
    }
}

impl Render for Enumeration {
    fn text(&self) -> String {
        let mut s = format!(
            "attributions: {} (scales ≤ {})\nnodes: {}\ndivergent nodes: {}\ndivergent and not tree-like: {}\ncounterterms: {}\n",
            self.attributions,
            self.max_scale,
            self.nodes,
            self.divergent_nodes,
            self.divergent_not_tree_like,
            counterterm_list(&self.counterterms)
        );
        for run in &self.runs {
            let divergent: Vec<&str> = run
                .report
                .nodes
                .iter()
                .filter(|n| n.class.divergent)
                .map(|n| n.label.as_str())
                .collect();
            let _ = writeln!(
                s,
                "{} divergent=[{}] counterterms={}",
                serde_json::to_string(&run.scales).expect("scales serialise"),
                divergent.join(" "),
                counterterm_list(&run.report.counterterms)
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = format!("attribution,{CLASSIFY_HEADER}\n");
        for (i, run) in self.runs.iter().enumerate() {
            node_rows(&run.report, &format!("{},", i + 1), &mut s);
        }
        s
    }
}

pub fn enumerate(g: &RibbonGraph, max_scale: u32) -> Result<Enumeration, CliError> {
    let mut out = Enumeration {
        max_scale,
        attributions: 0,
        nodes: 0,
        divergent_nodes: 0,
        divergent_not_tree_like: 0,
        counterterms: BTreeSet::new(),
        runs: Vec::new(),
    };
    for mu in ScaleAttribution::enumerate(g, max_scale) {
        let report = classify_graph(g, &mu)?;
        out.attributions += 1;
        out.nodes += report.nodes.len();
        for n in report.nodes.iter().filter(|n| n.class.divergent) {
            out.divergent_nodes += 1;
            if !n.data.tree_like {
                out.divergent_not_tree_like += 1;
            }
        }
        out.counterterms.extend(report.counterterms.iter().copied());
        out.runs.push(Run {
            scales: mu.to_map(g),
            report,
        });
    }
    Ok(out)
}

// verify-bounds

#[derive(Serialize)]
pub struct Bounds {
    pub params: ModelParams,
    pub constants: BoundConstants,
    pub grid_points: usize,
    pub per_slice: Vec<(u32, f64)>,
    pub k: f64,
    pub max_ratio: f64,
    pub variation: f64,
    /// `variation ≤ 0.2`.
    pub stable: bool,
}

impl Render for Bounds {
    fn text(&self) -> String {
        let c = &self.constants;
        let mut s = format!(
            "exponent constants: c_p={:.6} c_short={:.6} c_long={:.6}\ngrid points: {}\n",
            c.c_p, c.c_short, c.c_long, self.grid_points
        );
        for (i, k) in &self.per_slice {
            let _ = writeln!(s, "slice {i}: K_i={k:.6e}");
        }
        let _ = writeln!(
            s,
            "K={:.6e} max ratio={:.6} variation over slices 2..6={:.2}% stable={}",
            self.k,
            self.max_ratio,
            100.0 * self.variation,
            yn(self.stable)
        );
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("i,k_i\n");
        for (i, k) in &self.per_slice {
            let _ = writeln!(s, "{i},{k:.12e}");
        }
        s
    }
}

pub fn verify_bounds(params: &ModelParams, imax: u32) -> Result<Bounds, CliError> {
    if imax < 1 {
        return Err(CliError::Usage("--imax must be at least 1".into()));
    }
    let slices: Vec<u32> = (1..=imax).collect();
    let grid = default_grid();
    let r = ribbon_core::numerics::verify_slice_bound(params, &slices, &grid)?;
    Ok(Bounds {
        params: *params,
        constants: r.constants,
        grid_points: grid.len(),
        per_slice: r.per_slice,
        k: r.k,
        max_ratio: r.max_ratio,
        variation: r.variation,
        stable: r.variation <= 0.2,
    })
}

// scale-scan

#[derive(Serialize)]
pub struct Scan {
    /// `"tadpole"` or `"insertion-chain"`.
    pub graph: String,
    pub samples: usize,
    pub seed: u64,
    pub smearing: f64,
    pub scans: Vec<VariantScan>,
}

fn variant_name(v: &VariantScan) -> String {
    serde_json::to_value(v.variant)
        .ok()
        .and_then(|x| x.as_str().map(str::to_owned))
        .unwrap_or_default()
}

impl Render for Scan {
    fn text(&self) -> String {
        let mut s = format!("graph: {}\n", self.graph);
        if self.graph == "tadpole" {
            let _ = writeln!(
                s,
                "samples per slice: {} seed: {} smearing: {}",
                self.samples, self.seed, self.smearing
            );
        }
        for v in &self.scans {
            let _ = writeln!(s, "{}:", variant_name(v));
            for p in &v.points {
                let _ = writeln!(s, "  slice {}: {:.6e} ± {:.2e}", p.i, p.value, p.stderr);
            }
            let f = &v.fit;
            let _ = writeln!(
                s,
                "  slope over slices {}..{}: {:.4} ± {:.4} (95% CI [{:.4}, {:.4}])",
                f.from, f.to, f.slope, f.stderr, f.ci95.0, f.ci95.1
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("variant,i,value,stderr\n");
        for v in &self.scans {
            let name = variant_name(v);
            for p in &v.points {
                let _ = writeln!(s, "{name},{},{:.12e},{:.12e}", p.i, p.value, p.stderr);
            }
        }
        s
    }
}

/// Tadpoles get the Monte Carlo scan; chains of insertions get the fixed
/// momentum line at `p = (1, 0)`.
pub fn scale_scan(
    params: &ModelParams,
    g: &RibbonGraph,
    imax: u32,
    samples: usize,
    seed: u64,
) -> Result<Scan, CliError> {
    if imax < 3 {
        return Err(CliError::Usage(
            "--imax must be at least 3 to fit a slope".into(),
        ));
    }
    let slices: Vec<u32> = (1..=imax).collect();
    let fit_to = imax.clamp(3, 6);
    if g.is_insertion_chain() {
        let scan = chain_scan(params, [1.0, 0.0], &slices, 2, fit_to)?;
        return Ok(Scan {
            graph: "insertion-chain".into(),
            samples: 0,
            seed,
            smearing: 0.0,
            scans: vec![scan],
        });
    }
    let r = scaling_scan(
        params,
        g,
        &slices,
        samples,
        seed,
        DEFAULT_SMEARING,
        2,
        fit_to,
    )?;
    Ok(Scan {
        graph: "tadpole".into(),
        samples: r.samples,
        seed: r.seed,
        smearing: DEFAULT_SMEARING,
        scans: r.scans,
    })
}

// oracle-check

#[derive(Serialize)]
pub struct OracleView(pub OracleCheck);

impl Render for OracleView {
    fn text(&self) -> String {
        let r = &self.0;
        let mut s = format!(
            "rooted trees: {}\nassignments per tree: {}\nexact matches: {}/{}\nresult: {}\n",
            r.trees,
            r.trials,
            r.matches,
            r.checks,
            if r.passed() { "PASS" } else { "FAIL" }
        );
        for m in r.mismatches.iter().take(5) {
            let _ = writeln!(
                s,
                "mismatch ({}) root={} tree=[{}] expected={} found={}",
                m.construction,
                m.root,
                m.tree_edges.join(","),
                m.expected,
                m.found
            );
            for (sym, x, y) in &m.assignment {
                let _ = writeln!(s, "  {sym} = ({x}, {y})");
            }
        }
        s
    }

    fn csv(&self) -> String {
        let r = &self.0;
        format!(
            "trees,trials,checks,matches,mismatches\n{},{},{},{},{}\n",
            r.trees,
            r.trials,
            r.checks,
            r.matches,
            r.mismatches.len()
        )
    }
}

pub fn oracle(
    g: &RibbonGraph,
    trials: usize,
    max_trees: usize,
    seed: u64,
    perturb: Option<Rational64>,
) -> Result<OracleView, CliError> {
    if max_trees == 0 {
        return Err(CliError::Usage("--max-trees must be positive".into()));
    }
    Ok(OracleView(oracle_check(
        g, trials, max_trees, seed, perturb,
    )?))
}
