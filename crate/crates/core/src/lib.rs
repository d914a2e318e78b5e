//! Minimum-cardinality interconnection synthesis for composite structured systems.
//!
//! Given `k` subsystems that share one zero/star state pattern and a composite
//! input pattern, [`synth::synthesize`] returns a smallest set of
//! inter-subsystem edges that makes the composite pair structurally
//! controllable, together with the matching and accessibility witnesses that
//! certify the count. [`verify`] decides structural controllability of any
//! structured pair (reachability from inputs plus a left-perfect matching of
//! the system bipartite graph) and carries the optimality certificate.
//!
//! All indices in the public data model are 1-based. The crate is `no_std`
//! and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;

pub mod graphs;
pub mod matching;
pub mod oracle;
pub mod synth;
pub mod systems;
pub mod verify;

pub use error::{Error, Infeasibility, Result};
pub use graphs::{
    accessible_states, build_digraph, inaccessible_nontop_sccs, strongly_connected_components,
    ArcClass, InaccessibleSccSet, LayeredDigraph, Links, SccPartition, Vertex,
};
pub use matching::{
    build_system_bipartite, difference, max_matching, min_cost_left_perfect_matching, ClassSet,
    ClassedBipartite, EdgeClass, Matching, RightNode,
};
pub use synth::{
    accessibility_completion, build_mtilde, extract_alpha_beta, rewire_for_accessibility,
    synthesize, RewireTrace, SwapRecord, SynthesisReport,
};
pub use systems::{
    apply_interconnections, compose_full, transpose_system, CompositeSpec, Interconnection,
    SparsityPattern, StateId, SubsystemTemplate,
};
pub use verify::{certify, is_structurally_controllable, lower_bound, Verdict};
