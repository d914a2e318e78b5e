//! Structural-controllability verdicts and the optimality certificate.

use alloc::collections::BTreeSet;

use crate::error::Result;
use crate::graphs::{accessible_states, inaccessible_nontop_sccs, LayeredDigraph};
use crate::matching::{
    build_system_bipartite, max_matching, ClassSet, ClassedBipartite, EdgeClass, Matching,
};
use crate::synth::SynthesisReport;
use crate::systems::{apply_interconnections, CompositeSpec, SparsityPattern};

/// Outcome of Lin's test on a structured pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub controllable: bool,
    /// 1-based indices of states no input reaches.
    pub inaccessible_states: BTreeSet<usize>,
    /// Left nodes of `B(a, b)` left unmatched by a maximum matching.
    pub dilation_deficiency: usize,
    pub matching_witness: Matching,
}

/// Lin's criterion: every state reachable from an input, and `B(a, b)` has a
/// matching covering every state copy.
pub fn is_structurally_controllable(a: &SparsityPattern, b: &SparsityPattern) -> Result<Verdict> {
    let digraph = LayeredDigraph::from_system(a, b)?;
    let reached = accessible_states(&digraph);
    let inaccessible_states: BTreeSet<usize> = (1..=a.n_rows())
        .filter(|&v| !reached.contains(&crate::systems::StateId::new(1, v)))
        .collect();

    let g = ClassedBipartite::from_system(a, b)?;
    let matching_witness = max_matching(&g, ClassSet::ALL);
    let dilation_deficiency = a.n_rows() - matching_witness.len();

    Ok(Verdict {
        controllable: inaccessible_states.is_empty() && dilation_deficiency == 0,
        inaccessible_states,
        dilation_deficiency,
        matching_witness,
    })
}

/// Left nodes of `B(A, B)` that no matching over intra-subsystem and input
/// edges can cover. Each added interconnection covers at most one more.
pub fn intra_input_deficiency(spec: &CompositeSpec) -> usize {
    let g = build_system_bipartite(spec, None);
    let m = max_matching(&g, ClassSet::of(&[EdgeClass::Intra, EdgeClass::Input]));
    spec.n_t() - m.len()
}

/// A count no feasible interconnection set can beat: each interconnection
/// repairs at most one unmatched state copy and makes at most one
/// inaccessible source component accessible.
pub fn lower_bound(spec: &CompositeSpec) -> usize {
    inaccessible_nontop_sccs(spec).q().max(intra_input_deficiency(spec))
}

/// Checks a synthesis report against `spec`: the composed system is
/// controllable, the reported `q` and `beta` match an independent
/// recomputation, `|I_A| = q + beta`, and `|I_A|` respects [`lower_bound`].
pub fn certify(report: &SynthesisReport, spec: &CompositeSpec) -> bool {
    if !report.feasible {
        return false;
    }
    let Ok(a) = apply_interconnections(spec, &report.interconnections) else {
        return false;
    };
    let controllable = is_structurally_controllable(&a, spec.b()).is_ok_and(|v| v.controllable);
    if !controllable {
        return false;
    }

    let nset = inaccessible_nontop_sccs(spec);
    let beta = if spec.k() == 1 {
        0
    } else {
        let g = build_system_bipartite(spec, Some(&nset));
        match crate::synth::optimum_matching(&g) {
            Ok(m) => m.count_class(&g, EdgeClass::Interconnection),
            Err(_) => return false,
        }
    };
    let distinct: BTreeSet<_> = report.interconnections.iter().collect();
    let size = report.interconnections.len();
    let expected = if spec.k() == 1 { 0 } else { nset.q() + beta };
    distinct.len() == size
        && report.q == nset.q()
        && report.beta == beta
        && size == expected
        && size >= lower_bound(spec)
}
