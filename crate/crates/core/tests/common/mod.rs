#![allow(dead_code)]

use interlink_core::graphs::InaccessibleSccSet;
use interlink_core::oracle::{random_spec, GenParams};
use interlink_core::*;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn pattern(n_rows: usize, n_cols: usize, stars: &[(usize, usize)]) -> SparsityPattern {
    SparsityPattern::from_stars(n_rows, n_cols, stars.iter().copied()).unwrap()
}

pub fn spec(k: usize, n_s: usize, a_s: &[(usize, usize)], b: &[(usize, usize)], m: usize) -> CompositeSpec {
    let template = SubsystemTemplate::new(pattern(n_s, n_s, a_s)).unwrap();
    CompositeSpec::new(k, template, pattern(k * n_s, m, b)).unwrap()
}

/// Template with arcs x1 <-> x2, x2 <-> x3, x4 -> x2, x2 -> x5 (star at (to, from)).
pub const HUB_TEMPLATE: [(usize, usize); 6] = [(2, 1), (1, 2), (3, 2), (2, 3), (2, 4), (5, 2)];

pub fn hub_instance() -> CompositeSpec {
    spec(4, 5, &HUB_TEMPLATE, &[(1, 1)], 1)
}

pub const DENSITIES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Random composite with `m` inputs, each a single star in a distinct
/// subsystem (requires `m <= k`).
pub fn random_instance(seed: u64, k: usize, n_s: usize, density: f64, m: usize) -> CompositeSpec {
    let base = random_spec(&GenParams {
        k,
        n_s,
        m,
        edge_density: density,
        input_density: 0.0,
        seed,
    })
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1234_abcd);
    let mut subsystems: Vec<usize> = (1..=k).collect();
    let mut b = SparsityPattern::new(k * n_s, m).unwrap();
    for c in 1..=m {
        let pick = rng.gen_range(0..subsystems.len());
        let i = subsystems.swap_remove(pick);
        let p = rng.gen_range(1..=n_s);
        b.insert(StateId::new(i, p).global(n_s), c).unwrap();
    }
    CompositeSpec::new(k, base.template().clone(), b).unwrap()
}

/// Corpus for the identity checks: k in [2, 5], n_s in [1, 6], densities in
/// 0.1..0.9, `m` inputs in distinct subsystems.
pub fn identity_corpus(count: usize, m: usize, seed0: u64) -> Vec<CompositeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed0);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(m.max(2)..=5);
            let n_s = rng.gen_range(1..=6);
            let d = DENSITIES[rng.gen_range(0..DENSITIES.len())];
            random_instance(rng.gen(), k, n_s, d, m)
        })
        .collect()
}

/// Corpus for the exhaustive-oracle comparison: k in [2, 3], n_s in [1, 3].
pub fn oracle_corpus(count: usize, m: usize, seed0: u64) -> Vec<CompositeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed0);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(2..=3);
            let n_s = rng.gen_range(1..=3);
            let d = DENSITIES[rng.gen_range(0..DENSITIES.len())];
            random_instance(rng.gen(), k, n_s, d, m)
        })
        .collect()
}

/// Rank of `[B, AB, ..., A^{n-1}B]` for one random realization of the
/// pattern, with values uniform in [0.5, 1.5]. Columns are scaled to unit
/// length before the SVD; the threshold is `1e-8` times the largest
/// singular value.
pub fn realization_rank(a: &SparsityPattern, b: &SparsityPattern, rng: &mut ChaCha8Rng) -> usize {
    let n = a.n_rows();
    let m = b.n_cols();
    let mut am = DMatrix::<f64>::zeros(n, n);
    for (r, c) in a.stars() {
        am[(r - 1, c - 1)] = rng.gen_range(0.5..=1.5);
    }
    let mut bm = DMatrix::<f64>::zeros(n, m);
    for (r, c) in b.stars() {
        bm[(r - 1, c - 1)] = rng.gen_range(0.5..=1.5);
    }
    let mut k = DMatrix::<f64>::zeros(n, n * m);
    let mut block = bm;
    for step in 0..n {
        for c in 0..m {
            let col = block.column(c);
            let norm = col.norm();
            if norm > 0.0 {
                k.set_column(step * m + c, &(col / norm));
            }
        }
        block = &am * block;
    }
    let sv = k.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-8 * top).count()
}

/// Accessibility of each listed component in the digraph made of template
/// arcs, input arcs and the interconnection edges of `pairs` (read
/// right -> left), computed from scratch.
pub fn accessible_components(
    spec: &CompositeSpec,
    pairs: &[(StateId, RightNode)],
    nset: &InaccessibleSccSet,
) -> Vec<bool> {
    let links: Vec<Interconnection> = pairs
        .iter()
        .filter_map(|&(l, r)| match r {
            RightNode::State(s) if s.subsystem != l.subsystem => Some(Interconnection { target: l, source: s }),
            _ => None,
        })
        .collect();
    let g = build_digraph(spec, Links::Explicit(&links)).unwrap();
    let reached = accessible_states(&g);
    nset.sccs.iter().map(|c| c.iter().all(|s| reached.contains(s))).collect()
}

/// Outcome of the pipeline invariant checks on one instance; `Err` names the first
/// violated property.
pub fn check_pipeline_invariants(spec: &CompositeSpec) -> Result<(), String> {
    let nset = inaccessible_nontop_sccs(spec);
    let with_n = build_system_bipartite(spec, Some(&nset));
    let sysbp = build_system_bipartite(spec, None);
    let mstar = min_cost_left_perfect_matching(&with_n).map_err(|e| format!("no optimum: {e}"))?;

    let inputs_used = mstar.count_class(&with_n, EdgeClass::Input);
    if inputs_used == 0 || (spec.m() == 1 && inputs_used != 1) {
        return Err(format!("optimum uses {inputs_used} input edges"));
    }

    let (alpha, beta) = extract_alpha_beta(&mstar, &with_n);
    let mtilde = build_mtilde(&mstar, &sysbp).map_err(|e| e.to_string())?;
    if !mtilde.is_left_perfect(&sysbp) {
        return Err("M~ is not left-perfect".into());
    }
    let links_tilde = mtilde.count_class(&sysbp, EdgeClass::Interconnection);
    if links_tilde != alpha + beta {
        return Err(format!("M~ has {links_tilde} links, expected {}", alpha + beta));
    }
    let plain_optimum = min_cost_left_perfect_matching(&sysbp).map_err(|e| e.to_string())?;
    if plain_optimum.count_class(&sysbp, EdgeClass::Interconnection) != alpha + beta
        || plain_optimum.cost(&sysbp) != mtilde.cost(&sysbp)
    {
        return Err("M~ is not a minimum-cost matching of B(A, B)".into());
    }

    // An unmatched state of M~ is reachable from an input.
    let pairs: Vec<_> = mtilde.pairs().collect();
    let links: Vec<Interconnection> = pairs
        .iter()
        .filter_map(|&(l, r)| match r {
            RightNode::State(s) if s.subsystem != l.subsystem => Some(Interconnection { target: l, source: s }),
            _ => None,
        })
        .collect();
    let reached = accessible_states(&build_digraph(spec, Links::Explicit(&links)).unwrap());
    let free_accessible = spec
        .states()
        .any(|s| mtilde.left_of(RightNode::State(s)).is_none() && reached.contains(&s));
    if !free_accessible {
        return Err("no unmatched accessible state".into());
    }

    let (mhat, _) = rewire_for_accessibility(&mtilde, spec, &nset).map_err(|e| e.to_string())?;
    if !mhat.is_left_perfect(&sysbp) || mhat.count_class(&sysbp, EdgeClass::Interconnection) != alpha + beta {
        return Err("rewiring changed the link count or broke the matching".into());
    }
    let hat_pairs: Vec<_> = mhat.pairs().collect();
    let acc = accessible_components(spec, &hat_pairs, &nset);
    for (l, r) in &hat_pairs {
        if let (RightNode::State(s), Some(h)) = (r, nset.scc_of(*l)) {
            if s.subsystem != l.subsystem && !acc[h] {
                return Err(format!("component {h} entered by a link stays inaccessible"));
            }
        }
    }
    if acc.iter().filter(|&&x| x).count() < alpha {
        return Err("fewer than alpha components accessible after rewiring".into());
    }
    Ok(())
}
