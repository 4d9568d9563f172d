//! End-to-end driver: dualize, find a long cycle, improve it by surgery,
//! extract the independent caressed set and the proper good curve, and
//! re-run every structural checker for the report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::auxtrees;
use crate::classify::{classify, Classification};
use crate::curve::{
    cycle_to_curve, independent_caressed_set, upper_bound_check, verify_curve,
    CertStats, CollinearCertificate,
};
use crate::cycles::{long_cycle_heuristic, longest_cycle_exact, DualCycle, SearchBudget};
use crate::dual::{check_three_connected, dualize, verify_shared_edge_bound, DualGraph};
use crate::embedding::{max_degree, Triangulation};
use crate::error::{Error, Result};
use crate::surgery::{surgery_loop, StopReason, SurgeryLog};

#[derive(Debug, Clone, Copy)]
pub enum CycleMethod {
    /// Exact search on small duals, heuristic otherwise.
    Auto,
    Exact(SearchBudget),
    Heuristic { seed: u64 },
}

impl Default for CycleMethod {
    fn default() -> Self {
        CycleMethod::Auto
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub cycle: CycleMethod,
    /// Start from this dual vertex sequence instead of searching.
    pub initial_cycle: Option<Vec<usize>>,
    pub max_iters: usize,
    /// Dual size up to which the exact circumference cross-check runs.
    pub upper_bound_max_dual: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            cycle: CycleMethod::Auto,
            initial_cycle: None,
            max_iters: 10_000,
            upper_bound_max_dual: 14,
        }
    }
}

/// Outcomes of every runnable checker, evaluated on the final cycle.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaOutcomes {
    pub dual_three_connected: bool,
    pub dual_shared_edge_bound: bool,
    pub identity_tau_rho_kappa: bool,
    pub touched_lower_bound: bool,
    pub node_inequality: bool,
    pub leaf_caress: bool,
    pub counting: bool,
    pub structural_bad: bool,
    pub curve_verified: bool,
    /// None when the dual was too large for the exact solver.
    pub upper_bound: Option<bool>,
}

impl LemmaOutcomes {
    pub fn all_hold(&self) -> bool {
        self.dual_three_connected
            && self.dual_shared_edge_bound
            && self.identity_tau_rho_kappa
            && self.touched_lower_bound
            && self.node_inequality
            && self.leaf_caress
            && self.counting
            && self.structural_bad
            && self.curve_verified
            && self.upper_bound.unwrap_or(true)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub delta: usize,
    pub dual_vertices: usize,
    pub l0: usize,
    pub l_final: usize,
    pub surgery_steps: usize,
    pub stop_reason: StopReason,
    pub kappa_initial: usize,
    pub kappa_final: usize,
    pub s_size: usize,
    pub checks: LemmaOutcomes,
    /// Wall-clock milliseconds per stage; excluded from deterministic output.
    pub wall_ms: BTreeMap<String, u128>,
}

impl PipelineReport {
    /// JSON with timing fields removed, stable across identical runs.
    pub fn deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_ms.clear();
        serde_json::to_string_pretty(&copy).expect("serialize report")
    }
}

pub struct PipelineOutput {
    pub certificate: CollinearCertificate,
    pub report: PipelineReport,
    pub dual: DualGraph,
    pub final_cycle: DualCycle,
    pub final_classification: Classification,
    pub surgery_log: SurgeryLog,
}

fn initial_cycle(d: &DualGraph, method: CycleMethod) -> Result<DualCycle> {
    match method {
        CycleMethod::Heuristic { seed } => long_cycle_heuristic(d, seed),
        CycleMethod::Exact(budget) => Ok(longest_cycle_exact(d, budget)?.cycle),
        CycleMethod::Auto => {
            if d.vertex_count() <= 24 {
                Ok(longest_cycle_exact(d, SearchBudget::unlimited())?.cycle)
            } else {
                long_cycle_heuristic(d, 0)
            }
        }
    }
}

pub fn run_pipeline(t: &Triangulation, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let mut wall: BTreeMap<String, u128> = BTreeMap::new();
    let clock = Instant::now();
    let d = dualize(t)?;
    wall.insert("dualize".into(), clock.elapsed().as_millis());

    let clock = Instant::now();
    let c0 = match &opts.initial_cycle {
        Some(seq) => crate::cycles::orient_and_partition(&d, seq)?,
        None => initial_cycle(&d, opts.cycle)?,
    };
    let l0 = c0.len();
    wall.insert("cycle_search".into(), clock.elapsed().as_millis());

    let kappa_initial = classify(&d, &c0).kappa;

    let clock = Instant::now();
    let (c, log) = surgery_loop(t, &d, &c0, opts.max_iters)?;
    wall.insert("surgery".into(), clock.elapsed().as_millis());

    let clock = Instant::now();
    let cls = classify(&d, &c);
    let caressed = cls.caressed_faces();
    let chosen = independent_caressed_set(t, &caressed);
    let curve = cycle_to_curve(t, &d, &c, &chosen)?;
    wall.insert("curve".into(), clock.elapsed().as_millis());

    let clock = Instant::now();
    let aux = auxtrees::build_aux(&d, &c, &cls)?;
    let mut trees = auxtrees::build_side_trees(&d, &c, &aux, &cls)?;
    auxtrees::badness_levels(&mut trees, 2);
    let delta = max_degree(t);
    let upper_bound = if d.vertex_count() <= opts.upper_bound_max_dual {
        Some(upper_bound_check(&d, chosen.len(), SearchBudget::unlimited())?)
    } else {
        None
    };
    let checks = LemmaOutcomes {
        dual_three_connected: check_three_connected(&d),
        dual_shared_edge_bound: verify_shared_edge_bound(&d),
        identity_tau_rho_kappa: cls.tau == cls.rho + cls.kappa
            && cls.per_side.iter().all(|s| s.tau == s.rho + s.kappa),
        touched_lower_bound: crate::classify::check_touched_lower_bound(delta, &cls, &c),
        node_inequality: auxtrees::node_inequality_check(&trees).is_ok(),
        leaf_caress: auxtrees::leaf_caress_check(&trees).is_ok(),
        counting: auxtrees::counting_checks(&trees).ok(),
        structural_bad: auxtrees::structural_bad_checks(&trees, &aux, &d, &c).is_ok(),
        curve_verified: verify_curve(t, &curve).is_ok(),
        upper_bound,
    };
    wall.insert("checks".into(), clock.elapsed().as_millis());

    let kappa_final = cls.kappa;
    let s_size = chosen.len();
    if 6 * s_size < kappa_final {
        return Err(Error::Internal(format!(
            "independent set too small: |S| = {s_size} < kappa/6 with kappa = {kappa_final}"
        )));
    }

    let certificate = CollinearCertificate {
        s: chosen,
        events: curve.events.clone(),
        stats: CertStats {
            n: t.n(),
            delta,
            l0,
            l_final: c.len(),
            kappa_final,
            s_size,
        },
    };
    let report = PipelineReport {
        n: t.n(),
        delta,
        dual_vertices: d.vertex_count(),
        l0,
        l_final: c.len(),
        surgery_steps: log.steps.len(),
        stop_reason: log.stop,
        kappa_initial,
        kappa_final,
        s_size,
        checks,
        wall_ms: wall,
    };
    Ok(PipelineOutput {
        certificate,
        report,
        dual: d,
        final_cycle: c,
        final_classification: cls,
        surgery_log: log,
    })
}
