//! Benchmark harness: runs the approximation dispatcher over a suite of
//! instances and ranges, compares against exact optima and writes CSV rows
//! plus a JSON summary.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::approx_cover;
use crate::error::{CoverError, Result};
use crate::generators::{
    gen_ds_reduction, gen_star_subdivision, gen_triangles_center, gen_triangles_paths, gen_ugc_gadget,
    ConnectorVariant, DsVariant, Family, FamilyInstance, UgcVariant,
};
use crate::graph::{named, Graph};
use crate::io::{parse_graph_file, read_cover, write_cover};
use crate::rational::Rational;
use crate::setcover::{min_cover_exact, Budget};
use crate::verify::is_delta_cover;

/// A small named graph: `path` (n edges), `cycle`, `complete`, `star`
/// (n leaves) or `petersen`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGraph {
    pub named: String,
    #[serde(default)]
    pub n: usize,
}

impl NamedGraph {
    pub fn build(&self) -> Result<Graph> {
        let need = |min: usize| {
            if self.n >= min {
                Ok(())
            } else {
                Err(CoverError::InvalidGraph(format!("{} needs n >= {min}, got {}", self.named, self.n)))
            }
        };
        match self.named.as_str() {
            "path" => need(1).map(|_| named::path(self.n)),
            "cycle" => need(3).map(|_| named::cycle(self.n)),
            "complete" => need(1).map(|_| named::complete(self.n)),
            "star" => need(1).map(|_| named::star(self.n)),
            "petersen" => Ok(named::petersen()),
            other => Err(CoverError::InvalidGraph(format!("unknown named graph {other:?}"))),
        }
    }
}

/// Where a reduction or gadget family takes its input graph from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceGraph {
    File { file: PathBuf },
    Named(NamedGraph),
}

impl SourceGraph {
    pub fn load(&self, base: &Path) -> Result<Graph> {
        match self {
            SourceGraph::File { file } => parse_graph_file(base.join(file)),
            SourceGraph::Named(ng) => ng.build(),
        }
    }
}

/// Parameters of one generated family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub x: Option<usize>,
    #[serde(default)]
    pub ell: Option<usize>,
    #[serde(default)]
    pub variant: Option<String>,
    #[serde(default)]
    pub source: Option<SourceGraph>,
}

impl GeneratorSpec {
    pub fn build(&self, base: &Path) -> Result<FamilyInstance> {
        let missing = |what: &str| CoverError::InvalidGraph(format!("{} needs --{what}", self.family));
        let k = || self.k.ok_or_else(|| missing("k"));
        let x = || self.x.ok_or_else(|| missing("x"));
        let ell = || self.ell.ok_or_else(|| missing("ell"));
        let variant = || self.variant.as_deref().ok_or_else(|| missing("variant"));
        let source = || self.source.as_ref().ok_or_else(|| missing("source"))?.load(base);
        match self.family {
            Family::TrianglesCenter => gen_triangles_center(k()?),
            Family::TrianglesPaths => {
                let v: ConnectorVariant = self.variant.as_deref().unwrap_or("each_corner").parse()?;
                gen_triangles_paths(k()?, self.ell.unwrap_or(3), v)
            }
            Family::StarSubdivision => gen_star_subdivision(x()?, k()?),
            Family::DsReduction => {
                let v: DsVariant = variant()?.parse()?;
                let ell = if v == DsVariant::Wreath { self.ell.unwrap_or(0) } else { ell()? };
                gen_ds_reduction(&source()?, ell, v)
            }
            Family::UgcGadget => gen_ugc_gadget(&source()?, x()?, variant()?.parse::<UgcVariant>()?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    File { file: PathBuf },
    Generated(GeneratorSpec),
    Named(NamedGraph),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub id: String,
    #[serde(flatten)]
    pub source: InstanceSource,
}

/// Suite description, usually read from JSON:
///
/// ```json
/// {"instances": [{"id": "c4", "named": "cycle", "n": 4},
///                {"id": "tc3", "family": "triangles_center", "k": 3}],
///  "deltas": ["3/5", "1"], "budget_secs": 10}
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub instances: Vec<InstanceConfig>,
    pub deltas: Vec<Rational>,
    /// Per-row limit for each exact search.
    #[serde(default)]
    pub budget_secs: Option<u64>,
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    /// Skip the exact solver when false.
    #[serde(default = "yes")]
    pub oracle: bool,
}

fn yes() -> bool {
    true
}

impl BenchConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn budget(&self) -> Budget {
        let default = Budget::default();
        Budget {
            max_nodes: self.budget_nodes.unwrap_or(default.max_nodes),
            max_time: self.budget_secs.map(Duration::from_secs).or(default.max_time),
        }
    }

    /// Loads or generates every instance; relative file paths resolve
    /// against `base`.
    pub fn resolve(&self, base: &Path) -> Result<Vec<BenchInstance>> {
        self.instances
            .iter()
            .map(|ic| {
                let (graph, family, params) = match &ic.source {
                    InstanceSource::File { file } => (parse_graph_file(base.join(file))?, "file".into(), file.display().to_string()),
                    InstanceSource::Named(ng) => (ng.build()?, "named".into(), format!("{}({})", ng.named, ng.n)),
                    InstanceSource::Generated(spec) => {
                        let inst = spec.build(base)?;
                        (inst.graph, spec.family.to_string(), serde_json::to_string(&inst.params)?)
                    }
                };
                Ok(BenchInstance { id: ic.id.clone(), graph, family, params })
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub id: String,
    pub graph: Graph,
    pub family: String,
    pub params: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyStatus {
    Pass,
    /// An exact sub-route of the dispatcher ran out of budget; no cover.
    BudgetExhausted,
}

/// One (instance, δ) result. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub family: String,
    pub params: String,
    pub n: usize,
    pub m: usize,
    pub delta: Rational,
    /// Float rendering of `delta` for plotting; lossy.
    pub delta_float_lossy: f64,
    pub regime: String,
    pub size: Option<usize>,
    pub oracle_size: Option<usize>,
    pub oracle_optimal: bool,
    pub ratio: Option<Rational>,
    pub ratio_float_lossy: Option<f64>,
    pub claimed_factor: Option<Rational>,
    pub verify: VerifyStatus,
    pub runtime_ms: u64,
    pub oracle_runtime_ms: Option<u64>,
    pub cover_file: Option<String>,
}

impl BenchRow {
    pub const COLUMNS: [&'static str; 18] = [
        "instance_id",
        "family",
        "params",
        "n",
        "m",
        "delta",
        "delta_float_lossy",
        "regime",
        "size",
        "oracle_size",
        "oracle_optimal",
        "ratio",
        "ratio_float_lossy",
        "claimed_factor",
        "verify",
        "runtime_ms",
        "oracle_runtime_ms",
        "cover_file",
    ];

    pub fn violates_claim(&self) -> bool {
        matches!((&self.ratio, &self.claimed_factor), (Some(r), Some(f)) if r > f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RegimeSummary {
    pub rows: usize,
    pub rows_with_optimum: usize,
    pub max_ratio: Option<Rational>,
    /// Claimed factor on the row attaining `max_ratio`.
    pub claimed_at_max: Option<Rational>,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BenchSummary {
    pub rows: usize,
    pub verified: usize,
    pub budget_exhausted: usize,
    pub oracle_optimal: usize,
    pub violations: usize,
    pub regimes: BTreeMap<String, RegimeSummary>,
    pub total_runtime_ms: u64,
}

impl BenchSummary {
    pub fn from_rows(rows: &[BenchRow], total: Duration) -> Self {
        let mut s = BenchSummary { rows: rows.len(), total_runtime_ms: total.as_millis() as u64, ..Default::default() };
        for row in rows {
            match row.verify {
                VerifyStatus::Pass => s.verified += 1,
                VerifyStatus::BudgetExhausted => s.budget_exhausted += 1,
            }
            s.oracle_optimal += row.oracle_optimal as usize;
            let reg = s.regimes.entry(row.regime.clone()).or_default();
            reg.rows += 1;
            if let Some(ratio) = &row.ratio {
                reg.rows_with_optimum += 1;
                if reg.max_ratio.as_ref().is_none_or(|m| ratio > m) {
                    reg.max_ratio = Some(ratio.clone());
                    reg.claimed_at_max = row.claimed_factor.clone();
                }
            }
            if row.violates_claim() {
                reg.violations += 1;
                s.violations += 1;
            }
        }
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchOptions {
    pub budget: Budget,
    pub oracle: bool,
    /// When set, each row's cover is written here and re-read for
    /// verification.
    pub cover_dir: Option<PathBuf>,
}

pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    pub summary: BenchSummary,
}

fn millis(d: Duration) -> u64 {
    d.as_millis() as u64
}

fn cover_file_name(id: &str, delta: &Rational) -> String {
    format!("{id}_{}.cover", delta.to_string().replace('/', "_"))
}

fn run_row(inst: &BenchInstance, delta: &Rational, opts: &BenchOptions) -> Result<BenchRow> {
    let g = &inst.graph;
    let mut row = BenchRow {
        instance_id: inst.id.clone(),
        family: inst.family.clone(),
        params: inst.params.clone(),
        n: g.vertex_count(),
        m: g.edge_count(),
        delta: delta.clone(),
        delta_float_lossy: delta.to_f64(),
        regime: String::new(),
        size: None,
        oracle_size: None,
        oracle_optimal: false,
        ratio: None,
        ratio_float_lossy: None,
        claimed_factor: None,
        verify: VerifyStatus::Pass,
        runtime_ms: 0,
        oracle_runtime_ms: None,
        cover_file: None,
    };
    let start = Instant::now();
    let report = approx_cover(g, delta, &opts.budget);
    row.runtime_ms = millis(start.elapsed());
    let report = match report {
        Ok(r) => r,
        Err(CoverError::BudgetExhausted { .. }) => {
            row.regime = "budget_exhausted".into();
            row.verify = VerifyStatus::BudgetExhausted;
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    let mut check = is_delta_cover(g, &report.cover, delta);
    if let Some(dir) = &opts.cover_dir {
        let name = cover_file_name(&inst.id, delta);
        let path = dir.join(&name);
        write_cover(&path, &report.cover)?;
        let reread = read_cover(&path, g)?;
        if reread != report.cover {
            return Err(CoverError::Internal(format!("{name} does not read back to the written cover")));
        }
        check = is_delta_cover(g, &reread, delta);
        row.cover_file = Some(name);
    }
    if !check.is_cover {
        return Err(CoverError::NotACover {
            delta: delta.clone(),
            witness: format!("{} (instance {})", check.witness.map(|p| p.to_string()).unwrap_or_default(), inst.id),
        });
    }
    row.regime = report.regime.to_string();
    row.size = Some(report.size());
    row.claimed_factor = Some(report.claimed_factor.clone());

    if opts.oracle {
        let start = Instant::now();
        let opt = min_cover_exact(g, delta, &opts.budget)?;
        row.oracle_runtime_ms = Some(millis(start.elapsed()));
        row.oracle_size = Some(opt.size);
        row.oracle_optimal = opt.optimal;
        if opt.optimal && opt.size > 0 {
            let ratio = Rational::new(report.size() as i64, opt.size as i64);
            row.ratio_float_lossy = Some(ratio.to_f64());
            row.ratio = Some(ratio);
        }
    }
    Ok(row)
}

/// Runs every (instance, δ) pair on the rayon pool. Rows come back in suite
/// order: instances as listed, δ ascending as listed within each.
pub fn run_bench(instances: &[BenchInstance], deltas: &[Rational], opts: &BenchOptions) -> Result<BenchOutput> {
    let start = Instant::now();
    let jobs: Vec<(&BenchInstance, &Rational)> =
        instances.iter().flat_map(|inst| deltas.iter().map(move |d| (inst, d))).collect();
    let rows = jobs
        .into_par_iter()
        .map(|(inst, d)| run_row(inst, d, opts))
        .collect::<Result<Vec<_>>>()?;
    let summary = BenchSummary::from_rows(&rows, start.elapsed());
    Ok(BenchOutput { rows, summary })
}

/// CSV with a header line, also when there are no rows.
pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(BenchRow::COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
