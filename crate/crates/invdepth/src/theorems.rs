//! Executable verdicts for the depth theorems in their invariant-theory
//! form: the Duflot bound depth F[V]^G ≥ dim V^P, regular-sequence lifting
//! from the fixed subspace, the Ellingsrud–Skjelbred comparison, the
//! pointwise-stabilizer inclusion, and Carlson-style detection by the
//! product of stabilizer restrictions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::depth::{depth_report, module_regular_sequence_check, RegSeqOutcome};
use crate::error::{Error, Result};
use crate::invariants::{
    invariant_basis_up_to, subgroup_invariant_basis_up_to, InvariantBasis,
};
use crate::linalg::RowSpace;
use crate::matgroup::{fixed_subspace, subspaces_of_dim, MatrixGroup, Subspace};
use crate::poly::Polynomial;
use crate::restriction::restrict_to_subspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// the theorem's hypothesis does not apply to this instance
    Vacuous,
    /// the lifting hypothesis failed downstairs; no claim is made
    HypothesisNotSatisfied,
}

/// Outcome of one theorem check on one concrete instance. Pass verdicts
/// carry the cutoffs under which they hold; fail verdicts carry witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem: String,
    pub instance: String,
    pub quantities: BTreeMap<String, i64>,
    pub status: VerdictStatus,
    pub witnesses: Vec<Polynomial>,
    pub cutoff: u32,
}

impl TheoremVerdict {
    pub fn passed(&self) -> bool {
        matches!(self.status, VerdictStatus::Pass | VerdictStatus::Vacuous)
    }
}

fn describe(group: &MatrixGroup) -> String {
    format!(
        "p={} n={} |G|={} generators={}",
        group.p(),
        group.n(),
        group.order(),
        group.generators().len()
    )
}

/// Depth of F[V]^G is at least dim V^P for P a Sylow p-subgroup.
pub fn duflot_bound_check(group: &MatrixGroup, cutoff: u32, seed: u64) -> Result<TheoremVerdict> {
    let p = group.p();
    let n = group.n();
    let sylow = group.sylow_subgroup();
    let mut quantities = BTreeMap::new();
    if sylow.order() == 1 {
        quantities.insert("sylow_order".into(), 1);
        return Ok(TheoremVerdict {
            theorem: "duflot-bound".into(),
            instance: describe(group),
            quantities,
            status: VerdictStatus::Vacuous,
            witnesses: Vec::new(),
            cutoff,
        });
    }
    let c = fixed_subspace(p, n, sylow.elements()).dim();
    let report = depth_report(group, cutoff, seed)?;
    quantities.insert("sylow_order".into(), sylow.order() as i64);
    quantities.insert("fixed_dim".into(), c as i64);
    quantities.insert("depth".into(), report.depth as i64);
    let status = if report.depth >= c {
        VerdictStatus::Pass
    } else {
        VerdictStatus::Fail
    };
    Ok(TheoremVerdict {
        theorem: "duflot-bound".into(),
        instance: describe(group),
        quantities,
        status,
        witnesses: Vec::new(),
        cutoff,
    })
}

/// If the restrictions of a G-invariant sequence to C ⊆ V^P form a regular
/// sequence in the polynomial ring on C, the sequence is regular upstairs.
/// A failure here is a counterexample to the lifting theorem, i.e. a bug.
pub fn duflot_lifting_check(
    group: &MatrixGroup,
    c: &Subspace,
    seq: &[Polynomial],
    cutoff: u32,
) -> Result<TheoremVerdict> {
    let p = group.p();
    let n = group.n();
    let sylow = group.sylow_subgroup();
    let vp = fixed_subspace(p, n, sylow.elements());
    if !c.is_subspace_of(&vp) {
        return Err(Error::Precondition(
            "C must be contained in the fixed subspace of the Sylow subgroup".into(),
        ));
    }
    let mut quantities = BTreeMap::new();
    quantities.insert("c_dim".into(), c.dim() as i64);
    quantities.insert("sequence_length".into(), seq.len() as i64);

    let restrictions: Vec<Polynomial> = seq
        .iter()
        .map(|f| restrict_to_subspace(f, c))
        .collect::<Result<_>>()?;
    let downstairs =
        crate::depth::regular_in_polynomial_ring(&restrictions, c.dim())?;
    if !downstairs {
        return Ok(TheoremVerdict {
            theorem: "duflot-lifting".into(),
            instance: describe(group),
            quantities,
            status: VerdictStatus::HypothesisNotSatisfied,
            witnesses: Vec::new(),
            cutoff,
        });
    }
    let max_e = seq.iter().filter_map(|f| f.degree()).max().unwrap_or(0);
    let m = invariant_basis_up_to(group, cutoff + max_e)?;
    let outcome = module_regular_sequence_check(&m, seq, cutoff)?;
    let (status, witnesses) = match outcome {
        RegSeqOutcome::Certified(_) => (VerdictStatus::Pass, Vec::new()),
        RegSeqOutcome::Failure { index, witness } => {
            quantities.insert("failure_index".into(), index as i64);
            (VerdictStatus::Fail, vec![witness])
        }
    };
    Ok(TheoremVerdict {
        theorem: "duflot-lifting".into(),
        instance: describe(group),
        quantities,
        status,
        witnesses,
        cutoff,
    })
}

/// Ellingsrud–Skjelbred comparison: depth ≥ min(dim V^P + 2, n); also
/// reports whether equality holds.
pub fn es_comparison(group: &MatrixGroup, cutoff: u32, seed: u64) -> Result<TheoremVerdict> {
    let p = group.p();
    let n = group.n();
    let sylow = group.sylow_subgroup();
    let mut quantities = BTreeMap::new();
    if sylow.order() == 1 {
        return Ok(TheoremVerdict {
            theorem: "es-comparison".into(),
            instance: describe(group),
            quantities,
            status: VerdictStatus::Vacuous,
            witnesses: Vec::new(),
            cutoff,
        });
    }
    let c = fixed_subspace(p, n, sylow.elements()).dim();
    let bound = (c + 2).min(n);
    let report = depth_report(group, cutoff, seed)?;
    quantities.insert("fixed_dim".into(), c as i64);
    quantities.insert("bound".into(), bound as i64);
    quantities.insert("depth".into(), report.depth as i64);
    quantities.insert("equality".into(), (report.depth == bound) as i64);
    let status = if report.depth >= bound {
        VerdictStatus::Pass
    } else {
        VerdictStatus::Fail
    };
    Ok(TheoremVerdict {
        theorem: "es-comparison".into(),
        instance: describe(group),
        quantities,
        status,
        witnesses: Vec::new(),
        cutoff,
    })
}

/// Computable shadows of the stabilizer-component identity: F[V]^G sits
/// inside F[V]^{G_U} degreewise, and the Hilbert coefficients of the larger
/// ring dominate. The full localized isomorphism is out of scope and the
/// verdict is a bounded claim about these two shadows only.
pub fn stabilizer_component_check(
    group: &MatrixGroup,
    u: &Subspace,
    cutoff: u32,
) -> Result<TheoremVerdict> {
    let p = group.p();
    let n = group.n();
    let stab = group.pointwise_stabilizer(u);
    let inv_g = invariant_basis_up_to(group, cutoff)?;
    let inv_stab = subgroup_invariant_basis_up_to(p, n, &stab, cutoff)?;
    let mut quantities = BTreeMap::new();
    quantities.insert("stabilizer_order".into(), stab.order() as i64);
    quantities.insert("u_dim".into(), u.dim() as i64);
    let mut status = VerdictStatus::Pass;
    let mut witnesses = Vec::new();
    for d in 0..=cutoff {
        if inv_stab.dim(d) < inv_g.dim(d) {
            status = VerdictStatus::Fail;
            quantities.insert("domination_failure_degree".into(), d as i64);
            break;
        }
        for b in &inv_g.basis(d).polys {
            if inv_stab.coordinates(b).is_none() {
                status = VerdictStatus::Fail;
                witnesses.push(b.clone());
                break;
            }
        }
        if status == VerdictStatus::Fail {
            break;
        }
    }
    Ok(TheoremVerdict {
        theorem: "stabilizer-component".into(),
        instance: describe(group),
        quantities,
        status,
        witnesses,
        cutoff,
    })
}

/// All subspaces of a given subspace, realized in ambient coordinates.
pub fn subspaces_of(v: &Subspace, cap: u64) -> Result<Vec<Subspace>> {
    let p = v.p();
    let c = v.dim();
    let n = v.ambient_dim();
    let mut out = Vec::new();
    for s in 0..=c {
        for inner in subspaces_of_dim(p, c, s, cap)? {
            let rows: Vec<Vec<u32>> = inner
                .basis_rows()
                .iter()
                .map(|w| {
                    let mut amb = vec![0u32; n];
                    for (k, &wk) in w.iter().enumerate() {
                        for (i, a) in amb.iter_mut().enumerate() {
                            *a = crate::field::addm(
                                *a,
                                crate::field::mulm(wk, v.basis_rows()[k][i], p),
                                p,
                            );
                        }
                    }
                    amb
                })
                .collect();
            out.push(Subspace::from_spanning(p, n, rows));
        }
    }
    Ok(out)
}

/// Comodule identities for the Sylow subgroup: counit and coassociativity
/// of the coaction hold for every invariant-basis element of F[V]^P up to
/// the cutoff, for every subspace C of the fixed space V^P.
pub fn comodule_identities_check(group: &MatrixGroup, cutoff: u32) -> Result<TheoremVerdict> {
    let p = group.p();
    let n = group.n();
    let sylow = group.sylow_subgroup();
    let vp = fixed_subspace(p, n, sylow.elements());
    let basis = subgroup_invariant_basis_up_to(p, n, &sylow, cutoff)?;
    let subspaces = subspaces_of(&vp, 4096)?;
    let mut quantities = BTreeMap::new();
    quantities.insert("sylow_order".into(), sylow.order() as i64);
    quantities.insert("fixed_dim".into(), vp.dim() as i64);
    quantities.insert("subspace_count".into(), subspaces.len() as i64);
    let mut checked: i64 = 0;
    let mut status = VerdictStatus::Pass;
    let mut witnesses = Vec::new();
    'outer: for c in &subspaces {
        for d in 1..=cutoff {
            for f in &basis.basis(d).polys {
                let counit = crate::restriction::counit_check(f, c, sylow.elements())?;
                let coassoc =
                    crate::restriction::coassociativity_check(f, c, sylow.elements())?;
                checked += 1;
                if !(counit && coassoc) {
                    status = VerdictStatus::Fail;
                    witnesses.push(f.clone());
                    break 'outer;
                }
            }
        }
    }
    quantities.insert("identities_checked".into(), checked);
    Ok(TheoremVerdict {
        theorem: "comodule-identities".into(),
        instance: describe(group),
        quantities,
        status,
        witnesses,
        cutoff,
    })
}

pub const DEFAULT_CARLSON_SUBSPACE_CAP: u64 = 200;

/// Carlson detection: the product of the inclusions F[V]^G → F[V]^{G_U}
/// over all U of dimension s has zero kernel in every degree ≤ cutoff.
pub fn carlson_detection_check(
    group: &MatrixGroup,
    s: usize,
    cutoff: u32,
) -> Result<TheoremVerdict> {
    let p = group.p();
    let n = group.n();
    if s > n {
        return Err(Error::Input(format!(
            "subspace dimension {s} exceeds the ambient dimension {n}"
        )));
    }
    let subspaces = subspaces_of_dim(p, n, s, DEFAULT_CARLSON_SUBSPACE_CAP)?;
    let inv_g = invariant_basis_up_to(group, cutoff)?;
    let stab_bases: Vec<InvariantBasis> = subspaces
        .iter()
        .map(|u| subgroup_invariant_basis_up_to(p, n, &group.pointwise_stabilizer(u), cutoff))
        .collect::<Result<_>>()?;
    let mut quantities = BTreeMap::new();
    quantities.insert("subspace_count".into(), subspaces.len() as i64);
    let mut status = VerdictStatus::Pass;
    let mut witnesses = Vec::new();
    'degrees: for d in 0..=cutoff {
        let dim_src = inv_g.dim(d);
        if dim_src == 0 {
            continue;
        }
        // stacked coordinates of each source basis element across all
        // factors; the kernel of the product map is the kernel of this block
        let width: usize = stab_bases.iter().map(|b| b.dim(d)).sum();
        let mut rs = RowSpace::new(p, width);
        let mut rank = 0usize;
        for b in &inv_g.basis(d).polys {
            let mut row = Vec::with_capacity(width);
            for sb in &stab_bases {
                let coords = sb.coordinates(b).ok_or_else(|| {
                    Error::Inconsistency(
                        "G-invariant element is not invariant under a pointwise stabilizer".into(),
                    )
                })?;
                row.extend(coords);
            }
            if rs.insert(&row) {
                rank += 1;
            } else {
                // a kernel element of the product map in this degree
                status = VerdictStatus::Fail;
                quantities.insert("kernel_degree".into(), d as i64);
                witnesses.push(b.clone());
                break 'degrees;
            }
        }
        debug_assert_eq!(rank, dim_src);
    }
    Ok(TheoremVerdict {
        theorem: "carlson-detection".into(),
        instance: describe(group),
        quantities,
        status,
        witnesses,
        cutoff,
    })
}
