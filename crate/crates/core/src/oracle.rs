//! Ground truth for small instances: exhaustive minimum-interconnection
//! search and seeded random instance generation.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::systems::{CompositeSpec, Interconnection, SparsityPattern, StateId, SubsystemTemplate};

/// Parameters of [`random_spec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub k: usize,
    pub n_s: usize,
    pub m: usize,
    /// Probability of each template star.
    pub edge_density: f64,
    /// Probability of each input star.
    pub input_density: f64,
    pub seed: u64,
}

/// Draws a composite whose template and input stars are independent
/// Bernoulli trials. The same parameters always give the same spec.
pub fn random_spec(p: &GenParams) -> Result<CompositeSpec> {
    if p.k == 0 || p.n_s == 0 || p.m == 0 {
        return Err(Error::ZeroDimension("generator sizes"));
    }
    for (name, d) in [("edge_density", p.edge_density), ("input_density", p.input_density)] {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::InvalidDensity(name));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut a = SparsityPattern::new(p.n_s, p.n_s)?;
    for r in 1..=p.n_s {
        for c in 1..=p.n_s {
            if rng.gen_bool(p.edge_density) {
                a.insert(r, c)?;
            }
        }
    }
    let n_t = p.k * p.n_s;
    let mut b = SparsityPattern::new(n_t, p.m)?;
    for r in 1..=n_t {
        for c in 1..=p.m {
            if rng.gen_bool(p.input_density) {
                b.insert(r, c)?;
            }
        }
    }
    CompositeSpec::new(p.k, SubsystemTemplate::new(a)?, b)
}

/// Every possible interconnection, ordered by target then source (global
/// indices).
pub fn candidate_interconnections(spec: &CompositeSpec) -> Vec<Interconnection> {
    let n_s = spec.n_s();
    let n_t = spec.n_t();
    let mut out = Vec::new();
    for t in 1..=n_t {
        for s in 1..=n_t {
            let target = StateId::from_global(t, n_s);
            let source = StateId::from_global(s, n_s);
            if target.subsystem != source.subsystem {
                out.push(Interconnection { target, source });
            }
        }
    }
    out
}

/// Lin's test on bitmasks, for composites with at most 64 states and
/// 128 state-plus-input nodes.
struct Kernel {
    n: usize,
    /// Successor states of each state.
    succ: Vec<u64>,
    entries: u64,
    /// Right neighbours of each state copy: states in bits `0..n`, inputs above.
    right: Vec<u128>,
}

impl Kernel {
    fn new(spec: &CompositeSpec) -> Self {
        let n = spec.n_t();
        let n_s = spec.n_s();
        assert!(n <= 64 && n + spec.m() <= 128, "instance too large for the exhaustive oracle");
        let mut succ = alloc::vec![0u64; n];
        let mut right = alloc::vec![0u128; n];
        for i in 0..spec.k() {
            for (r, c) in spec.a_s().stars() {
                let (to, from) = (i * n_s + r - 1, i * n_s + c - 1);
                succ[from] |= 1 << to;
                right[to] |= 1 << from;
            }
        }
        let mut entries = 0;
        for (r, c) in spec.b().stars() {
            entries |= 1u64 << (r - 1);
            right[r - 1] |= 1u128 << (n + c - 1);
        }
        Self { n, succ, entries, right }
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// `extra` holds `(target, source)` pairs, 0-based.
    fn controllable(&self, extra: &[(usize, usize)]) -> bool {
        let mut seen = self.entries;
        let mut frontier = self.entries;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let mut next = self.succ[v];
            for &(t, s) in extra {
                if s == v {
                    next |= 1 << t;
                }
            }
            let new = next & !seen;
            seen |= new;
            frontier |= new;
        }
        if seen != self.all() {
            return false;
        }

        let mut mate_right = [usize::MAX; 128];
        for l in 0..self.n {
            let mut visited = 0u128;
            if !self.augment(l, extra, &mut visited, &mut mate_right) {
                return false;
            }
        }
        true
    }

    fn augment(&self, l: usize, extra: &[(usize, usize)], visited: &mut u128, mate: &mut [usize; 128]) -> bool {
        let mut adj = self.right[l];
        for &(t, s) in extra {
            if t == l {
                adj |= 1 << s;
            }
        }
        let mut candidates = adj & !*visited;
        while candidates != 0 {
            let r = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            *visited |= 1 << r;
            if mate[r] == usize::MAX || self.augment(mate[r], extra, visited, mate) {
                mate[r] = l;
                return true;
            }
        }
        false
    }
}

/// Smallest `c <= cap` for which some `c` interconnections make `spec`
/// structurally controllable, with the lexicographically first such set.
///
/// Subsets are tried by increasing size over [`candidate_interconnections`];
/// the first hit wins. Meant for desk-sized instances only.
///
/// # Panics
///
/// If the composite has more than 64 states or more than 128 states and inputs.
pub fn brute_force_minimum(spec: &CompositeSpec, cap: usize) -> Option<(usize, Vec<Interconnection>)> {
    let kernel = Kernel::new(spec);
    let n_s = spec.n_s();
    let candidates = candidate_interconnections(spec);
    let pairs: Vec<(usize, usize)> = candidates
        .iter()
        .map(|x| (x.target.global(n_s) - 1, x.source.global(n_s) - 1))
        .collect();

    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(cap);
    for size in 0..=cap.min(pairs.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            chosen.clear();
            chosen.extend(idx.iter().map(|&i| pairs[i]));
            if kernel.controllable(&chosen) {
                return Some((size, idx.iter().map(|&i| candidates[i]).collect()));
            }
            if !next_combination(&mut idx, pairs.len()) {
                break;
            }
        }
    }
    None
}

/// Advances `idx` to the next `idx.len()`-subset of `0..n` in lexicographic
/// order; false once exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::apply_interconnections;
    use crate::verify::is_structurally_controllable;

    fn spec(k: usize, n_s: usize, a_s: &[(usize, usize)], b: &[(usize, usize)], m: usize) -> CompositeSpec {
        let a = SparsityPattern::from_stars(n_s, n_s, a_s.iter().copied()).unwrap();
        let b = SparsityPattern::from_stars(k * n_s, m, b.iter().copied()).unwrap();
        CompositeSpec::new(k, SubsystemTemplate::new(a).unwrap(), b).unwrap()
    }

    fn params(k: usize, n_s: usize, d: f64, seed: u64) -> GenParams {
        GenParams { k, n_s, m: 1, edge_density: d, input_density: 0.3, seed }
    }

    #[test]
    fn chain_pair_needs_one_link() {
        let s = spec(2, 2, &[(2, 1)], &[(1, 1)], 1);
        let (size, witness) = brute_force_minimum(&s, 3).unwrap();
        assert_eq!(size, 1);
        let a = apply_interconnections(&s, &witness).unwrap();
        assert!(is_structurally_controllable(&a, s.b()).unwrap().controllable);
    }

    #[test]
    fn controllable_spec_needs_nothing() {
        let s = spec(1, 3, &[(1, 2), (2, 3), (3, 1), (3, 2), (3, 3)], &[(3, 1)], 1);
        assert_eq!(brute_force_minimum(&s, 2), Some((0, Vec::new())));
    }

    #[test]
    fn no_inputs_is_hopeless() {
        let s = spec(2, 1, &[(1, 1)], &[], 1);
        assert_eq!(brute_force_minimum(&s, 2), None);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut idx = alloc::vec![0, 1];
        let mut all = alloc::vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            all.push(idx.clone());
        }
        assert_eq!(all, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        let mut empty: [usize; 0] = [];
        assert!(!next_combination(&mut empty, 3));
    }

    #[test]
    fn kernel_agrees_with_verifier() {
        for seed in 0..300 {
            let s = random_spec(&params(2 + (seed as usize % 2), 1 + (seed as usize % 3), 0.4, seed)).unwrap();
            let cands = candidate_interconnections(&s);
            let pick: Vec<_> = cands.iter().copied().step_by(1 + seed as usize % 5).collect();
            let a = apply_interconnections(&s, &pick).unwrap();
            let expected = is_structurally_controllable(&a, s.b()).unwrap().controllable;
            let n_s = s.n_s();
            let pairs: Vec<_> = pick
                .iter()
                .map(|x| (x.target.global(n_s) - 1, x.source.global(n_s) - 1))
                .collect();
            assert_eq!(Kernel::new(&s).controllable(&pairs), expected, "seed {seed}");
        }
    }

    #[test]
    fn generator_extremes_and_determinism() {
        let empty = random_spec(&params(2, 3, 0.0, 1)).unwrap();
        assert!(empty.a_s().is_empty());
        let full = random_spec(&params(2, 3, 1.0, 1)).unwrap();
        assert_eq!(full.a_s().len(), 9);
        let a = random_spec(&params(2, 3, 0.5, 42)).unwrap();
        let b = random_spec(&params(2, 3, 0.5, 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generator_rejects_bad_params() {
        assert!(random_spec(&params(0, 3, 0.5, 1)).is_err());
        assert!(random_spec(&params(2, 3, 1.5, 1)).is_err());
        assert!(random_spec(&GenParams { input_density: -0.1, ..params(2, 3, 0.5, 1) }).is_err());
    }

    #[test]
    fn candidate_universe_size() {
        let s = spec(3, 2, &[], &[(1, 1)], 1);
        assert_eq!(candidate_interconnections(&s).len(), 2 * 2 * 3 * 2);
    }
}
