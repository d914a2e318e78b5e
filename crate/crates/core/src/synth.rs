//! Minimum interconnection synthesis.
//!
//! The pipeline:
//!
//! 1. Minimum-cost left-perfect matching `M*` of `B(A, B, N)`; `alpha` and
//!    `beta` count its `N`- and `I`-class edges.
//! 2. Keep the intra/input part `M'` of `M*` and complete it with an
//!    interconnection-only perfect matching `M''` of what is left, giving `M~`.
//! 3. Rewire `M~` so that every source component entered through an
//!    interconnection edge becomes reachable from an input, without changing
//!    the number of interconnection edges.
//! 4. Add one edge into each source component that is still unreachable.
//!
//! The interconnection edges of the rewired matching plus the completion
//! edges form the answer, of size `q + beta`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Infeasibility, Result};
use crate::graphs::{inaccessible_nontop_sccs, reachable, InaccessibleSccSet};
use crate::matching::{
    build_system_bipartite, difference, max_matching, min_cost_left_perfect_matching, ClassSet,
    ClassedBipartite, EdgeClass, Matching, RightNode,
};
use crate::systems::{compose_full, CompositeSpec, Interconnection, StateId};
use crate::verify::{intra_input_deficiency, is_structurally_controllable, lower_bound};

/// One exchange performed while rewiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapRecord {
    /// `(left, right)` pair removed from the matching.
    pub broken: (StateId, StateId),
    /// `(left, right)` pair added; the right end is the free accessible state.
    pub made: (StateId, StateId),
    /// 0-based positions in the [`InaccessibleSccSet`] of components that
    /// became accessible through this swap.
    pub newly_accessible_sccs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RewireTrace {
    pub swaps: Vec<SwapRecord>,
}

/// Result of [`synthesize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisReport {
    pub feasible: bool,
    /// Whether the composite with [`Self::interconnections`] passes the verifier.
    pub controllable: bool,
    /// Number of inaccessible source components.
    pub q: usize,
    /// `N`-class edges in the optimum matching of `B(A, B, N)`.
    pub alpha: usize,
    /// `I`-class edges in the optimum matching of `B(A, B, N)`.
    pub beta: usize,
    /// State copies that intra-subsystem and input edges cannot match.
    pub deficiency: usize,
    pub lower_bound: usize,
    /// Sorted by target, then source.
    pub interconnections: Vec<Interconnection>,
    /// The rewired left-perfect matching of `B(A, B)` as `(left, right)` pairs.
    pub matching_witness: Vec<(StateId, RightNode)>,
    pub trace: RewireTrace,
}

impl SynthesisReport {
    /// The report emitted when no interconnection set can work.
    pub fn infeasible(spec: &CompositeSpec) -> Self {
        Self {
            feasible: false,
            controllable: false,
            q: inaccessible_nontop_sccs(spec).q(),
            alpha: 0,
            beta: 0,
            deficiency: intra_input_deficiency(spec),
            lower_bound: lower_bound(spec),
            interconnections: Vec::new(),
            matching_witness: Vec::new(),
            trace: RewireTrace::default(),
        }
    }
}

/// The optimum matching of `B(A, B, N)` that the pipeline starts from.
pub(crate) fn optimum_matching(g: &ClassedBipartite) -> Result<Matching> {
    min_cost_left_perfect_matching(g)
}

/// Number of `N`-class and `I`-class edges of `mstar` in `g`.
pub fn extract_alpha_beta(mstar: &Matching, g: &ClassedBipartite) -> (usize, usize) {
    (
        mstar.count_class(g, EdgeClass::Scc),
        mstar.count_class(g, EdgeClass::Interconnection),
    )
}

/// `M~ = M' ∪ M''`: the intra/input edges of `mstar`, completed to a
/// left-perfect matching of `sysbp = B(A, B)` with interconnection edges only.
pub fn build_mtilde(mstar: &Matching, sysbp: &ClassedBipartite) -> Result<Matching> {
    let kept = mstar.pairs().filter(|&(l, r)| {
        matches!(
            sysbp.edge_class(l, r),
            Some(EdgeClass::Intra | EdgeClass::Input)
        )
    });
    let m_prime = Matching::from_pairs(sysbp, kept)?;
    let rest = difference(sysbp, &m_prime);
    let m_second = max_matching(&rest, ClassSet::of(&[EdgeClass::Interconnection]));
    if m_prime.len() + m_second.len() != sysbp.n_t() {
        return Err(Error::Internal(
            "no interconnection-only completion of the intra/input matching",
        ));
    }
    let mut out = m_prime;
    for (l, r) in m_second.mate().iter().enumerate() {
        if r.is_some() {
            out.mate_mut()[l] = *r;
        }
    }
    Ok(out)
}

/// State-level view of a composite used while rewiring: template arcs of
/// every subsystem and input entry points, both 0-based.
struct Wiring {
    n_s: usize,
    base: Vec<Vec<usize>>,
    entries: Vec<usize>,
}

impl Wiring {
    fn new(spec: &CompositeSpec) -> Self {
        let n_s = spec.n_s();
        let mut base = vec![Vec::new(); spec.n_t()];
        for i in 0..spec.k() {
            for (r, c) in spec.a_s().stars() {
                base[i * n_s + c - 1].push(i * n_s + r - 1);
            }
        }
        let mut entries: Vec<usize> = spec.b().stars().map(|(r, _)| r - 1).collect();
        entries.sort_unstable();
        entries.dedup();
        Self { n_s, base, entries }
    }

    fn subsystem(&self, v: usize) -> usize {
        v / self.n_s
    }

    /// States reachable from an input when the interconnection edges of the
    /// matching (read `right -> left`) and `extra` links are present.
    fn accessible(&self, mate: &[Option<usize>], extra: &[(usize, usize)]) -> Vec<bool> {
        let mut adj = self.base.clone();
        for (l, r) in mate.iter().enumerate() {
            if let Some(r) = *r {
                if r < adj.len() && self.subsystem(r) != self.subsystem(l) {
                    adj[r].push(l);
                }
            }
        }
        for &(target, source) in extra {
            adj[source].push(target);
        }
        reachable(&adj, self.entries.iter().copied())
    }

    /// Smallest state not used as a right endpoint.
    fn free_state(&self, mate: &[Option<usize>]) -> Option<usize> {
        let mut used = vec![false; mate.len()];
        for r in mate.iter().flatten() {
            if *r < used.len() {
                used[*r] = true;
            }
        }
        used.iter().position(|u| !u)
    }
}

fn state_of(v: usize, n_s: usize) -> StateId {
    StateId::from_global(v + 1, n_s)
}

fn accessible_sccs(nset: &InaccessibleSccSet, n_s: usize, seen: &[bool]) -> Vec<bool> {
    nset.sccs
        .iter()
        .map(|c| seen[c[0].global(n_s) - 1])
        .collect()
}

/// Rewires `mtilde` so that every listed source component containing an
/// interconnection-matched state copy becomes accessible.
///
/// Each round takes the smallest such copy `a` that is still inaccessible
/// and the smallest free state `r` (free states are always accessible: they
/// end the matching path that starts at an input). `a` sits on a matching
/// cycle. If `a` and `r` lie in different subsystems, `a` is re-matched to
/// `r`. Otherwise the cycle must enter the subsystem of `a`'s partner through
/// some interconnection edge; the smallest such edge is re-matched to `r`
/// instead. Either way the cycle is opened onto the input path, so the
/// accessible set grows and the loop ends after at most `n_T` rounds.
pub fn rewire_for_accessibility(
    mtilde: &Matching,
    spec: &CompositeSpec,
    nset: &InaccessibleSccSet,
) -> Result<(Matching, RewireTrace)> {
    let n_s = spec.n_s();
    let n_t = spec.n_t();
    let wiring = Wiring::new(spec);
    let membership = nset.membership();
    let in_nset: Vec<bool> = (0..n_t)
        .map(|v| membership.contains_key(&state_of(v, n_s)))
        .collect();

    let mut out = mtilde.clone();
    let mut trace = RewireTrace::default();
    let is_link = |mate: &[Option<usize>], v: usize| {
        mate[v].is_some_and(|r| r < n_t && r / n_s != v / n_s)
    };

    let mut seen = wiring.accessible(out.mate(), &[]);
    let mut scc_seen = accessible_sccs(nset, n_s, &seen);
    loop {
        let mate = out.mate();
        let Some(a) = (0..n_t).find(|&v| in_nset[v] && !seen[v] && is_link(mate, v)) else {
            break;
        };
        let r_free = wiring
            .free_state(mate)
            .filter(|&r| seen[r])
            .ok_or(Error::Internal("no free accessible state"))?;

        let z = if wiring.subsystem(a) != wiring.subsystem(r_free) {
            a
        } else {
            let j = wiring.subsystem(mate[a].expect("matched"));
            let mut cycle = Vec::new();
            let mut v = a;
            loop {
                cycle.push(v);
                v = match mate[v] {
                    Some(r) if r < n_t => r,
                    _ => return Err(Error::Internal("inaccessible copy not on a matching cycle")),
                };
                if v == a {
                    break;
                }
                if cycle.len() > n_t {
                    return Err(Error::Internal("matching cycle does not close"));
                }
            }
            cycle
                .into_iter()
                .filter(|&z| wiring.subsystem(z) == j && is_link(mate, z))
                .min()
                .ok_or(Error::Internal("no interconnection edge enters the partner subsystem"))?
        };

        let old = out.mate()[z].expect("matched");
        out.mate_mut()[z] = Some(r_free);
        seen = wiring.accessible(out.mate(), &[]);
        let now = accessible_sccs(nset, n_s, &seen);
        let newly: Vec<usize> = (0..now.len()).filter(|&h| now[h] && !scc_seen[h]).collect();
        scc_seen = now;
        trace.swaps.push(SwapRecord {
            broken: (state_of(z, n_s), state_of(old, n_s)),
            made: (state_of(z, n_s), state_of(r_free, n_s)),
            newly_accessible_sccs: newly,
        });
        if !seen[a] {
            return Err(Error::Internal("rewiring swap made no progress"));
        }
    }
    Ok((out, trace))
}

/// One new interconnection into each listed component that `mhat` leaves
/// inaccessible, targeting the component's smallest state. The source is the
/// free accessible state when it lies in another subsystem, otherwise the
/// smallest accessible state of another subsystem.
pub fn accessibility_completion(
    mhat: &Matching,
    spec: &CompositeSpec,
    nset: &InaccessibleSccSet,
) -> Vec<Interconnection> {
    let n_s = spec.n_s();
    let wiring = Wiring::new(spec);
    let free = wiring.free_state(mhat.mate());
    let mut extra: Vec<(usize, usize)> = Vec::new();
    let mut links = Vec::new();
    let mut seen = wiring.accessible(mhat.mate(), &extra);
    let mut pending: Vec<usize> = nset.sccs.iter().map(|c| c[0].global(n_s) - 1).collect();
    // A component can only be fed once some other subsystem is accessible,
    // so sweep until a full pass adds nothing.
    loop {
        pending.retain(|&t| !seen[t]);
        let mut added = false;
        for &target in &pending {
            if seen[target] {
                continue;
            }
            let own = wiring.subsystem(target);
            let source = free
                .filter(|&r| seen[r] && wiring.subsystem(r) != own)
                .or_else(|| (0..seen.len()).find(|&v| seen[v] && wiring.subsystem(v) != own));
            let Some(source) = source else { continue };
            extra.push((target, source));
            links.push(Interconnection {
                target: state_of(target, n_s),
                source: state_of(source, n_s),
            });
            seen = wiring.accessible(mhat.mate(), &extra);
            added = true;
        }
        if !added {
            break;
        }
    }
    links
}

/// Smallest interconnection set that makes `spec` structurally controllable.
pub fn synthesize(spec: &CompositeSpec) -> Result<SynthesisReport> {
    if spec.b().is_empty() {
        return Err(Infeasibility::NoInputs.into());
    }
    if !is_structurally_controllable(&compose_full(spec), spec.b())?.controllable {
        return Err(Infeasibility::NotControllableWithAllLinks.into());
    }
    let nset = inaccessible_nontop_sccs(spec);
    let deficiency = intra_input_deficiency(spec);
    let lower = nset.q().max(deficiency);
    let sysbp = build_system_bipartite(spec, None);

    if spec.k() == 1 {
        let witness = max_matching(&sysbp, ClassSet::ALL);
        return Ok(SynthesisReport {
            feasible: true,
            controllable: true,
            q: nset.q(),
            alpha: 0,
            beta: 0,
            deficiency,
            lower_bound: lower,
            interconnections: Vec::new(),
            matching_witness: witness.pairs().collect(),
            trace: RewireTrace::default(),
        });
    }

    let with_n = build_system_bipartite(spec, Some(&nset));
    let mstar = optimum_matching(&with_n)?;
    let (alpha, beta) = extract_alpha_beta(&mstar, &with_n);
    let mtilde = build_mtilde(&mstar, &sysbp)?;
    let (mhat, trace) = rewire_for_accessibility(&mtilde, spec, &nset)?;

    let n_s = spec.n_s();
    let mut interconnections: Vec<Interconnection> = mhat
        .pairs()
        .filter_map(|(l, r)| match r {
            RightNode::State(s) if s.subsystem != l.subsystem => Some(Interconnection {
                target: l,
                source: s,
            }),
            _ => None,
        })
        .collect();
    interconnections.extend(accessibility_completion(&mhat, spec, &nset));
    interconnections.sort_by_key(|x| (x.target.global(n_s), x.source.global(n_s)));

    let a = crate::systems::apply_interconnections(spec, &interconnections)?;
    let controllable = is_structurally_controllable(&a, spec.b())?.controllable;
    Ok(SynthesisReport {
        feasible: true,
        controllable,
        q: nset.q(),
        alpha,
        beta,
        deficiency,
        lower_bound: lower,
        interconnections,
        matching_witness: mhat.pairs().collect(),
        trace,
    })
}
