//! End-to-end runs: ingest, split into components, balance sampled trees in
//! parallel, write tables.

use std::fmt::{Display, Write as _};
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::thread;

use crate::balance::balance_unchecked;
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, connected_components, SignedGraph, SymmetrizationPolicy, VertexId,
};
use crate::io::read_edge_list;
use crate::metrics::{ConsensusAccumulator, MetricsReport, Provenance, TieAgreement};
use crate::oracle::{exact_metrics, frustration_cloud_exact, FrustrationCloud};
use crate::sampler::{SamplerKind, TreeSampler};
use crate::scalar::{format_decimal, Scalar};
use crate::{ExactReport, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComponentPolicy {
    #[default]
    Largest,
    All,
}

impl std::str::FromStr for ComponentPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "largest" => Ok(ComponentPolicy::Largest),
            "all" => Ok(ComponentPolicy::All),
            other => Err(Error::Config(format!(
                "unknown component policy `{other}` (expected largest or all)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub sampler: SamplerKind,
    pub trees: u64,
    pub seed: u64,
    /// Original label of the vertex that wins ties.
    pub tie_break: Option<String>,
    pub component: ComponentPolicy,
    pub workers: usize,
    pub normalized_influence: bool,
    pub tie_agreement: TieAgreement,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            sampler: SamplerKind::RandomMst,
            trees: 1000,
            seed: 0,
            tie_break: None,
            component: ComponentPolicy::Largest,
            workers: 1,
            normalized_influence: true,
            tie_agreement: TieAgreement::ZeroCut,
            out_dir: out_dir.into(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trees == 0 {
            return Err(Error::Config("tree count must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ComponentRun {
    pub graph: SignedGraph,
    pub accumulator: ConsensusAccumulator,
    pub report: ExactReport,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub components: Vec<ComponentRun>,
    pub files: Vec<PathBuf>,
}

/// Splits `0..total` into at most `parts` contiguous ranges.
fn shards(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts as u64).clamp(1, total.max(1));
    let base = total / parts;
    let extra = total % parts;
    let mut start = 0;
    (0..parts)
        .map(|i| {
            let len = base + u64::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Balances trees `0..trees` of `g` across `workers` threads and merges the
/// per-thread tallies. The result does not depend on `workers`.
pub fn sample_accumulator(
    g: &SignedGraph,
    sampler: SamplerKind,
    seed: u64,
    trees: u64,
    workers: usize,
    tie_break: Option<VertexId>,
    rule: TieAgreement,
) -> Result<ConsensusAccumulator> {
    let sampler = TreeSampler::new(g, sampler, seed)?;
    let mut empty = ConsensusAccumulator::new(g).with_tie_agreement(rule);
    if let Some(t) = tie_break {
        empty = empty.with_tie_break(t)?;
    }
    let parts: Vec<Result<ConsensusAccumulator>> = thread::scope(|scope| {
        let handles: Vec<_> = shards(trees, workers)
            .into_iter()
            .map(|range| {
                let mut acc = empty.clone();
                scope.spawn(move || {
                    for index in range {
                        let t = sampler.tree(index);
                        acc.accumulate(g, &balance_unchecked(g, &t))?;
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut total = empty;
    for part in parts {
        total.merge(&part?)?;
    }
    Ok(total)
}

fn load_components(input: &Path) -> Result<Vec<SignedGraph>> {
    let raw = read_edge_list(input)?;
    let ingested = build_graph(&raw, SymmetrizationPolicy::SumThenSign)?;
    log::info!(
        "ingested {} sentiments: {} neutral, {} self-loops, {} pairs dropped",
        ingested.stats.raw,
        ingested.stats.neutral,
        ingested.stats.self_loops,
        ingested.stats.dropped_pairs
    );
    Ok(connected_components(&ingested.graph))
}

/// Runs the sampled pipeline and writes `vertices.csv`, `edges.csv` and
/// `summary.txt` into `cfg.out_dir`. Nothing is written unless every
/// component succeeds.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let mut components = load_components(&cfg.input)?;
    if cfg.component == ComponentPolicy::Largest {
        components.truncate(1);
    }
    if let Some(label) = &cfg.tie_break {
        if !components.iter().any(|g| g.labels().id(label).is_some()) {
            return Err(Error::UnknownLabel(label.clone()));
        }
    }
    let mut runs = Vec::with_capacity(components.len());
    for g in components {
        log::info!(
            "component with {} vertices, {} edges: sampling {} {} trees",
            g.vertex_count(),
            g.edge_count(),
            cfg.trees,
            cfg.sampler
        );
        let label = cfg
            .tie_break
            .as_ref()
            .filter(|l| g.labels().id(l).is_some());
        let t = label.and_then(|l| g.labels().id(l));
        let accumulator = sample_accumulator(
            &g,
            cfg.sampler,
            cfg.seed,
            cfg.trees,
            cfg.workers,
            t,
            cfg.tie_agreement,
        )?;
        let provenance = Provenance::sampled(cfg.sampler, cfg.seed, cfg.trees)
            .with_tie_break(label.cloned())
            .with_tie_agreement(cfg.tie_agreement);
        let report = accumulator.report::<Rational>(&g, provenance, cfg.normalized_influence)?;
        runs.push(ComponentRun {
            graph: g,
            accumulator,
            report,
        });
    }

    let tagged = cfg.component == ComponentPolicy::All;
    let with_vertical = cfg.tie_break.is_some();
    let parts: Vec<(&SignedGraph, &ExactReport)> =
        runs.iter().map(|r| (&r.graph, &r.report)).collect();
    let mut summary = String::new();
    let _ = writeln!(summary, "components={}", runs.len());
    for (i, run) in runs.iter().enumerate() {
        let prefix = if tagged {
            format!("component{i}.")
        } else {
            String::new()
        };
        summary.push_str(&summarize(&run.report).render(&prefix, &run.graph));
    }
    let files = write_atomically(
        &cfg.out_dir,
        &[
            ("vertices.csv", vertex_table(&parts, tagged, with_vertical)),
            ("edges.csv", edge_table(&parts, tagged)),
            ("summary.txt", summary),
        ],
    )?;
    Ok(RunOutput {
        components: runs,
        files,
    })
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub input: PathBuf,
    pub tie_break: Option<String>,
    pub normalized_influence: bool,
    pub tie_agreement: TieAgreement,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct OracleOutput {
    pub graph: SignedGraph,
    pub report: ExactReport,
    pub cloud: FrustrationCloud,
    pub files: Vec<PathBuf>,
}

/// Exhaustive metrics and frustration cloud of the largest component.
/// Writes the same tables as [`run_pipeline`] plus `cloud.csv`.
pub fn run_oracle(cfg: &OracleConfig) -> Result<OracleOutput> {
    let g = load_components(&cfg.input)?
        .into_iter()
        .next()
        .ok_or(Error::EmptyGraph)?;
    let t = match &cfg.tie_break {
        Some(label) => Some(
            g.labels()
                .id(label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?,
        ),
        None => None,
    };
    let cloud = frustration_cloud_exact(&g)?;
    let report = exact_metrics(&g, t, cfg.tie_agreement, cfg.normalized_influence)?;

    let mut cloud_csv = String::from("side,members,weight,distance\n");
    for s in &cloud.states {
        let members: Vec<&str> = (0..g.vertex_count())
            .filter(|&v| s.side.get(v))
            .map(|v| g.labels().label(v))
            .collect();
        let _ = writeln!(
            cloud_csv,
            "{},{},{},{}",
            s.side,
            members.join(";"),
            s.weight,
            s.distance
        );
    }
    let mut summary = String::from("components=1\n");
    summary.push_str(&summarize(&report).render("", &g));
    let _ = writeln!(summary, "cloud_states={}", cloud.len());
    let _ = writeln!(summary, "balanced_states={}", cloud.balanced_state_count);
    let _ = writeln!(
        summary,
        "frustration_index={}",
        cloud.min_distance().expect("cloud is never empty")
    );
    let parts = [(&g, &report)];
    let files = write_atomically(
        &cfg.out_dir,
        &[
            ("vertices.csv", vertex_table(&parts, false, t.is_some())),
            ("edges.csv", edge_table(&parts, false)),
            ("summary.txt", summary),
            ("cloud.csv", cloud_csv),
        ],
    )?;
    Ok(OracleOutput {
        graph: g,
        report,
        cloud,
        files,
    })
}

/// Run-level statistics of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// Controversy in the report's own number format.
    pub controversy_exact: String,
    pub controversy: f64,
    pub status_mean: f64,
    pub status_stddev: f64,
    pub influence_mean: f64,
    pub influence_stddev: f64,
    pub tie_states: u64,
    pub provenance: Provenance,
}

fn mean_and_stddev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn summarize<S: Scalar + Display>(report: &MetricsReport<S>) -> Summary {
    let status: Vec<f64> = report.status.iter().map(Scalar::to_f64).collect();
    let influence: Vec<f64> = report.influence.iter().map(Scalar::to_f64).collect();
    let (status_mean, status_stddev) = mean_and_stddev(&status);
    let (influence_mean, influence_stddev) = mean_and_stddev(&influence);
    Summary {
        controversy_exact: report.controversy.to_string(),
        controversy: report.controversy.to_f64(),
        status_mean,
        status_stddev,
        influence_mean,
        influence_stddev,
        tie_states: report.tie_count,
        provenance: report.provenance.clone(),
    }
}

impl Summary {
    /// `key=value` lines, each key prefixed with `prefix`.
    pub fn render(&self, prefix: &str, g: &SignedGraph) -> String {
        let p = &self.provenance;
        let mut lines: Vec<(&str, String)> = vec![
            ("method", p.method.clone()),
            ("seed", p.seed.map_or("none".into(), |s| s.to_string())),
            ("trees", p.trees.to_string()),
        ];
        match p.method.as_str() {
            "bfs" | "dfs" => {
                lines.push(("root", "uniform".into()));
                lines.push(("neighbor_order", "shuffled".into()));
            }
            "random-mst" => lines.push(("edge_weights", "uniform-u64".into())),
            _ => {}
        }
        lines.extend([
            (
                "tie_break",
                p.tie_break.clone().unwrap_or_else(|| "none".into()),
            ),
            ("tie_agreement", p.tie_agreement.to_string()),
            ("vertices", g.vertex_count().to_string()),
            ("edges", g.edge_count().to_string()),
            ("positive_edges", g.positive_edge_count().to_string()),
            ("negative_edges", g.negative_edge_count().to_string()),
            ("tie_states", self.tie_states.to_string()),
            ("controversy", format_decimal(self.controversy)),
            ("controversy_exact", self.controversy_exact.clone()),
            ("status_mean", format_decimal(self.status_mean)),
            ("status_stddev", format_decimal(self.status_stddev)),
            ("influence_mean", format_decimal(self.influence_mean)),
            ("influence_stddev", format_decimal(self.influence_stddev)),
        ]);
        let mut out = String::new();
        for (k, v) in lines {
            let _ = writeln!(out, "{prefix}{k}={v}");
        }
        out
    }
}

fn decimal(x: &Rational) -> String {
    format_decimal(Scalar::to_f64(x))
}

fn vertex_table(
    parts: &[(&SignedGraph, &ExactReport)],
    tagged: bool,
    with_vertical: bool,
) -> String {
    let mut out = String::new();
    if tagged {
        out.push_str("component,");
    }
    out.push_str("label,degree,status,status_exact");
    if with_vertical {
        out.push_str(",vertical_status,vertical_status_exact");
    }
    out.push_str(",influence,influence_exact\n");
    for (c, (g, r)) in parts.iter().enumerate() {
        for v in 0..g.vertex_count() {
            if tagged {
                let _ = write!(out, "{c},");
            }
            let _ = write!(
                out,
                "{},{},{},{}",
                g.labels().label(v),
                g.degree(v),
                decimal(&r.status[v]),
                r.status[v]
            );
            if with_vertical {
                match &r.vertical_status {
                    Some(vs) => {
                        let _ = write!(out, ",{},{}", decimal(&vs[v]), vs[v]);
                    }
                    None => out.push_str(",,"),
                }
            }
            let _ = writeln!(out, ",{},{}", decimal(&r.influence[v]), r.influence[v]);
        }
    }
    out
}

fn edge_table(parts: &[(&SignedGraph, &ExactReport)], tagged: bool) -> String {
    let mut out = String::new();
    if tagged {
        out.push_str("component,");
    }
    out.push_str("label_u,label_v,sign,agreement,agreement_exact\n");
    for (c, (g, r)) in parts.iter().enumerate() {
        for (e, edge) in g.edges().iter().enumerate() {
            if tagged {
                let _ = write!(out, "{c},");
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                g.labels().label(edge.u),
                g.labels().label(edge.v),
                edge.sign,
                decimal(&r.agreement[e]),
                r.agreement[e]
            );
        }
    }
    out
}

/// Writes every file under a temporary name first, then renames them all.
fn write_atomically(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
        if let Err(e) = fs::write(&tmp, contents) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            let _ = fs::remove_file(&tmp);
            return Err(Error::io(tmp, e));
        }
        staged.push((tmp, dir.join(name)));
    }
    let mut done = Vec::with_capacity(staged.len());
    for (tmp, dest) in staged {
        fs::rename(&tmp, &dest).map_err(|e| Error::io(&dest, e))?;
        done.push(dest);
    }
    Ok(done)
}
