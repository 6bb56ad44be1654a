//! Report assembly and the scenario pipeline: enumerate the group, compute
//! invariants (through the cache when enabled), depth, and the selected
//! theorem verdicts. Reports serialize to JSON with fixed field order so
//! identical scenario + seed runs are byte-identical.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cache::{cache_load, cache_store, CacheKey};
use crate::depth::{depth_report, DepthReport};
use crate::error::Result;
use crate::invariants::{invariant_basis_up_to, minimal_generators_of, InvariantBasis};
use crate::matgroup::MatrixGroup;
use crate::poly::GradingConvention;
use crate::scenario::Scenario;
use crate::theorems::{
    carlson_detection_check, duflot_bound_check, duflot_lifting_check, es_comparison,
    stabilizer_component_check, TheoremVerdict, DEFAULT_CARLSON_SUBSPACE_CAP,
};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub cutoff: Option<u32>,
    pub seed: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub grading: GradingConvention,
    /// timings make reports nondeterministic and are off by default
    pub timings: bool,
    /// compute the depth report even when no depth-dependent theorem is selected
    pub force_depth: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            cutoff: None,
            seed: None,
            cache_dir: None,
            grading: GradingConvention::Algebraic,
            timings: false,
            force_depth: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub tool_version: String,
    pub scenario: Scenario,
    pub cutoff: u32,
    pub seed: u64,
    pub grading: GradingConvention,
    /// dimensions of the invariant ring's graded pieces, degrees 0..=cutoff
    pub hilbert: Vec<usize>,
    /// minimal generator degrees, scaled by the grading convention
    pub minimal_generator_degrees: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<DepthReport>,
    pub verdicts: Vec<TheoremVerdict>,
    pub all_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn any_theorem_failed(&self) -> bool {
        !self.all_passed
    }
}

/// Compute the invariant basis, consulting the cache when a directory is
/// configured.
pub fn cached_invariant_basis(
    group: &MatrixGroup,
    cutoff: u32,
    cache_dir: Option<&std::path::Path>,
) -> Result<InvariantBasis> {
    let key = CacheKey::new(group.p(), group.n(), group.generators(), cutoff);
    if let Some(dir) = cache_dir {
        if let Some(basis) = cache_load(dir, &key) {
            return Ok(basis);
        }
    }
    let basis = invariant_basis_up_to(group, cutoff)?;
    if let Some(dir) = cache_dir {
        cache_store(dir, &key, &basis)?;
    }
    Ok(basis)
}

pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<Report> {
    let cutoff = scenario.cutoff_or_default(opts.cutoff);
    let seed = scenario.seed_or_default(opts.seed);
    let group = scenario.group()?;
    let mut timings: BTreeMap<String, u64> = BTreeMap::new();

    let t0 = Instant::now();
    let basis = cached_invariant_basis(&group, cutoff, opts.cache_dir.as_deref())?;
    timings.insert("invariants".into(), t0.elapsed().as_millis() as u64);

    let hilbert: Vec<usize> = (0..=cutoff).map(|d| basis.dim(d)).collect();
    let minimal_generator_degrees: Vec<u32> = minimal_generators_of(&basis)?
        .iter()
        .map(|(d, _)| opts.grading.display_degree(*d))
        .collect();

    let selected: Vec<String> = scenario
        .theorems
        .clone()
        .unwrap_or_else(|| vec!["duflot".into(), "es".into(), "carlson".into()]);

    let needs_depth =
        opts.force_depth || selected.iter().any(|t| t == "duflot" || t == "es");
    let t1 = Instant::now();
    let depth = if needs_depth {
        Some(depth_report(&group, cutoff, seed)?)
    } else {
        None
    };
    timings.insert("depth".into(), t1.elapsed().as_millis() as u64);

    let t2 = Instant::now();
    let mut verdicts: Vec<TheoremVerdict> = Vec::new();
    for name in &selected {
        match name.as_str() {
            "duflot" => verdicts.push(duflot_bound_check(&group, cutoff, seed)?),
            "es" => verdicts.push(es_comparison(&group, cutoff, seed)?),
            "carlson" => {
                for s in 1..=group.n() {
                    let count = crate::matgroup::gaussian_binomial(
                        group.p() as u64,
                        group.n() as u64,
                        s as u64,
                    );
                    if count > DEFAULT_CARLSON_SUBSPACE_CAP {
                        continue;
                    }
                    verdicts.push(carlson_detection_check(&group, s, cutoff)?);
                }
            }
            "stabilizer" => {
                for u in scenario.parsed_subspaces() {
                    verdicts.push(stabilizer_component_check(&group, &u, cutoff)?);
                }
            }
            "coaction" => {
                verdicts.push(crate::theorems::comodule_identities_check(&group, cutoff)?)
            }
            "lifting" => {
                let p = group.p();
                let n = group.n();
                let sylow = group.sylow_subgroup();
                let vp = crate::matgroup::fixed_subspace(p, n, sylow.elements());
                for seq in scenario.parsed_sequences()? {
                    verdicts.push(duflot_lifting_check(&group, &vp, &seq, cutoff)?);
                }
            }
            other => {
                return Err(crate::error::Error::Input(format!(
                    "unknown theorem selector {other:?} (expected duflot, es, carlson, \
                     stabilizer, or lifting)"
                )))
            }
        }
    }
    timings.insert("theorems".into(), t2.elapsed().as_millis() as u64);

    let all_passed = verdicts.iter().all(|v| v.passed());
    Ok(Report {
        format_version: REPORT_FORMAT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: scenario.clone(),
        cutoff,
        seed,
        grading: opts.grading,
        hilbert,
        minimal_generator_degrees,
        depth,
        verdicts,
        all_passed,
        timings_ms: if opts.timings { Some(timings) } else { None },
    })
}
