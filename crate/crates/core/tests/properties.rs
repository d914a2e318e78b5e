mod common;

use common::*;
use interlink_core::oracle::{brute_force_minimum, random_spec, GenParams};
use interlink_core::*;
use proptest::prelude::*;

fn arb_instance(max_k: usize, max_ns: usize) -> impl Strategy<Value = CompositeSpec> {
    (any::<u64>(), 2..=max_k, 1..=max_ns, 0..DENSITIES.len(), 1usize..=2)
        .prop_map(|(seed, k, n_s, d, m)| random_instance(seed, k, n_s, DENSITIES[d], m.min(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn synthesis_output_is_certified(s in arb_instance(5, 6)) {
        let r = synthesize(&s).unwrap();
        prop_assert!(r.controllable);
        prop_assert_eq!(r.interconnections.len(), r.q + r.beta);
        prop_assert!(r.interconnections.len() >= r.lower_bound);
        prop_assert!(certify(&r, &s));
    }

    #[test]
    fn removing_any_link_breaks_controllability(s in arb_instance(3, 4)) {
        let r = synthesize(&s).unwrap();
        for skip in 0..r.interconnections.len() {
            let fewer: Vec<_> = r.interconnections.iter().enumerate()
                .filter(|&(i, _)| i != skip).map(|(_, x)| *x).collect();
            let a = apply_interconnections(&s, &fewer).unwrap();
            prop_assert!(!is_structurally_controllable(&a, s.b()).unwrap().controllable);
        }
    }

    #[test]
    fn synthesis_is_deterministic(s in arb_instance(4, 5)) {
        prop_assert_eq!(synthesize(&s).unwrap(), synthesize(&s).unwrap());
    }

    #[test]
    fn oracle_sizes_are_monotone(seed in any::<u64>(), d in 0..DENSITIES.len()) {
        let s = random_instance(seed, 2, 2, DENSITIES[d], 1);
        if let Some((c, witness)) = brute_force_minimum(&s, 3) {
            // Any superset of a witness also works.
            let extra = oracle::candidate_interconnections(&s)
                .into_iter()
                .find(|x| !witness.contains(x));
            if let Some(x) = extra {
                let mut bigger = witness.clone();
                bigger.push(x);
                let a = apply_interconnections(&s, &bigger).unwrap();
                prop_assert!(is_structurally_controllable(&a, s.b()).unwrap().controllable);
            }
            prop_assert_eq!(brute_force_minimum(&s, c).map(|x| x.0), Some(c));
            if c > 0 {
                prop_assert_eq!(brute_force_minimum(&s, c - 1), None);
            }
        }
    }

    #[test]
    fn verifier_is_monotone_in_stars(
        seed in any::<u64>(),
        n in 1usize..=6,
        extra in proptest::collection::vec((1usize..=6, 1usize..=6), 1..4),
    ) {
        let s = random_spec(&GenParams { k: 1, n_s: n, m: 1, edge_density: 0.3, input_density: 0.4, seed }).unwrap();
        let before = is_structurally_controllable(s.a_s(), s.b()).unwrap();
        let mut a = s.a_s().clone();
        for (r, c) in extra {
            if r <= n && c <= n {
                a.insert(r, c).unwrap();
            }
        }
        let after = is_structurally_controllable(&a, s.b()).unwrap();
        prop_assert!(!before.controllable || after.controllable);
        prop_assert!(after.dilation_deficiency <= before.dilation_deficiency);
        prop_assert!(after.inaccessible_states.is_subset(&before.inaccessible_states));
    }

    #[test]
    fn verdict_fields_are_consistent(seed in any::<u64>(), n in 1usize..=8, m in 1usize..=3) {
        let s = random_spec(&GenParams { k: 1, n_s: n, m, edge_density: 0.25, input_density: 0.2, seed }).unwrap();
        let v = is_structurally_controllable(s.a_s(), s.b()).unwrap();
        prop_assert_eq!(v.controllable, v.inaccessible_states.is_empty() && v.dilation_deficiency == 0);
        prop_assert_eq!(v.matching_witness.len() + v.dilation_deficiency, n);
    }
}

#[test]
fn hub_instance_details() {
    let s = hub_instance();
    let nset = inaccessible_nontop_sccs(&s);
    let fours: Vec<Vec<StateId>> = (1..=4).map(|i| vec![StateId::new(i, 4)]).collect();
    assert_eq!(nset.sccs, fours);
    let r = synthesize(&s).unwrap();
    assert_eq!((r.q, r.alpha, r.beta), (4, 4, 7));
    assert_eq!(r.deficiency, 11);
    assert!(certify(&r, &s));
    // Every subsystem hosts at least one interconnection target.
    for i in 1..=4 {
        assert!(r.interconnections.iter().any(|x| x.target.subsystem == i));
    }
}

#[test]
fn controller_canonical_three_subsystems() {
    let a = [(1, 2), (2, 3), (3, 1), (3, 2), (3, 3)];
    let r = synthesize(&spec(3, 3, &a, &[(9, 1)], 1)).unwrap();
    assert_eq!(r.interconnections.len(), 2);
    assert_eq!(r.q, 2);
}
