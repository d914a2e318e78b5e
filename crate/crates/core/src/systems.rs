//! Structured-system data model: zero/star patterns, subsystem templates,
//! composite specifications and the interconnections between subsystems.

use alloc::collections::BTreeSet;

use crate::error::{Error, Result};

/// A zero/star matrix stored as the set of its star positions (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsityPattern {
    n_rows: usize,
    n_cols: usize,
    stars: BTreeSet<(usize, usize)>,
}

impl SparsityPattern {
    /// An all-zero pattern.
    pub fn new(n_rows: usize, n_cols: usize) -> Result<Self> {
        if n_rows == 0 {
            return Err(Error::ZeroDimension("pattern rows"));
        }
        if n_cols == 0 {
            return Err(Error::ZeroDimension("pattern columns"));
        }
        Ok(Self {
            n_rows,
            n_cols,
            stars: BTreeSet::new(),
        })
    }

    /// Builds a pattern from 1-based star positions. Repeated positions collapse.
    pub fn from_stars<I>(n_rows: usize, n_cols: usize, stars: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pattern = Self::new(n_rows, n_cols)?;
        for (row, col) in stars {
            pattern.insert(row, col)?;
        }
        Ok(pattern)
    }

    /// Adds a star; returns `false` if it was already present.
    pub fn insert(&mut self, row: usize, col: usize) -> Result<bool> {
        if row == 0 || row > self.n_rows || col == 0 || col > self.n_cols {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                n_rows: self.n_rows,
                n_cols: self.n_cols,
            });
        }
        Ok(self.stars.insert((row, col)))
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.stars.contains(&(row, col))
    }

    /// Star positions in row-major order.
    pub fn stars(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.stars.iter().copied()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n_rows == other.n_rows
            && self.n_cols == other.n_cols
            && self.stars.is_subset(&other.stars)
    }

    pub fn transpose(&self) -> Self {
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            stars: self.stars.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }
}

/// State `state` of subsystem `subsystem`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId {
    pub subsystem: usize,
    pub state: usize,
}

impl StateId {
    pub const fn new(subsystem: usize, state: usize) -> Self {
        Self { subsystem, state }
    }

    /// Row/column of this state in the composite matrix: `n_s * (subsystem - 1) + state`.
    pub const fn global(self, n_s: usize) -> usize {
        n_s * (self.subsystem - 1) + self.state
    }

    /// Inverse of [`StateId::global`]; `global` is 1-based.
    pub const fn from_global(global: usize, n_s: usize) -> Self {
        Self {
            subsystem: (global - 1) / n_s + 1,
            state: (global - 1) % n_s + 1,
        }
    }
}

/// The pattern shared by every subsystem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemTemplate {
    a_s: SparsityPattern,
}

impl SubsystemTemplate {
    pub fn new(a_s: SparsityPattern) -> Result<Self> {
        if !a_s.is_square() {
            return Err(Error::DimensionMismatch {
                what: "subsystem state pattern columns",
                expected: a_s.n_rows(),
                found: a_s.n_cols(),
            });
        }
        Ok(Self { a_s })
    }

    pub fn n_s(&self) -> usize {
        self.a_s.n_rows()
    }

    pub fn a_s(&self) -> &SparsityPattern {
        &self.a_s
    }
}

/// A full problem instance: `k` copies of the template and the composite input pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositeSpec {
    k: usize,
    template: SubsystemTemplate,
    b: SparsityPattern,
}

impl CompositeSpec {
    pub fn new(k: usize, template: SubsystemTemplate, b: SparsityPattern) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroDimension("subsystem count k"));
        }
        let n_t = k * template.n_s();
        if b.n_rows() != n_t {
            return Err(Error::DimensionMismatch {
                what: "input pattern rows (k * n_s)",
                expected: n_t,
                found: b.n_rows(),
            });
        }
        Ok(Self { k, template, b })
    }

    /// Places a per-subsystem `n_s x m` input pattern in the rows of subsystem 1.
    pub fn with_first_subsystem_inputs(
        k: usize,
        template: SubsystemTemplate,
        b_s: &SparsityPattern,
    ) -> Result<Self> {
        if b_s.n_rows() != template.n_s() {
            return Err(Error::DimensionMismatch {
                what: "per-subsystem input pattern rows",
                expected: template.n_s(),
                found: b_s.n_rows(),
            });
        }
        let b = SparsityPattern::from_stars(k * template.n_s(), b_s.n_cols(), b_s.stars())?;
        Self::new(k, template, b)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_s(&self) -> usize {
        self.template.n_s()
    }

    pub fn n_t(&self) -> usize {
        self.k * self.template.n_s()
    }

    pub fn m(&self) -> usize {
        self.b.n_cols()
    }

    pub fn template(&self) -> &SubsystemTemplate {
        &self.template
    }

    pub fn a_s(&self) -> &SparsityPattern {
        self.template.a_s()
    }

    pub fn b(&self) -> &SparsityPattern {
        &self.b
    }

    /// All states in global order.
    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        let n_s = self.n_s();
        (1..=self.n_t()).map(move |g| StateId::from_global(g, n_s))
    }

    pub fn contains_state(&self, s: StateId) -> bool {
        (1..=self.k).contains(&s.subsystem) && (1..=self.n_s()).contains(&s.state)
    }

    pub(crate) fn check_link(&self, link: &Interconnection) -> Result<()> {
        for s in [link.target, link.source] {
            if !self.contains_state(s) {
                return Err(Error::InvalidState {
                    subsystem: s.subsystem,
                    state: s.state,
                });
            }
        }
        if link.target.subsystem == link.source.subsystem {
            return Err(Error::SameSubsystemLink {
                subsystem: link.target.subsystem,
            });
        }
        Ok(())
    }
}

/// A directed edge `source -> target` between states of distinct subsystems,
/// i.e. a star of the connection block `E_{target.subsystem, source.subsystem}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interconnection {
    pub target: StateId,
    pub source: StateId,
}

impl Interconnection {
    pub fn new(target: StateId, source: StateId) -> Result<Self> {
        if target.subsystem == source.subsystem {
            return Err(Error::SameSubsystemLink {
                subsystem: target.subsystem,
            });
        }
        Ok(Self { target, source })
    }
}

fn block_diagonal(spec: &CompositeSpec) -> SparsityPattern {
    let n_s = spec.n_s();
    let mut stars = BTreeSet::new();
    for i in 0..spec.k() {
        for (r, c) in spec.a_s().stars() {
            stars.insert((i * n_s + r, i * n_s + c));
        }
    }
    SparsityPattern {
        n_rows: spec.n_t(),
        n_cols: spec.n_t(),
        stars,
    }
}

/// The composite state pattern with every off-diagonal block full of stars.
pub fn compose_full(spec: &CompositeSpec) -> SparsityPattern {
    let n_s = spec.n_s();
    let mut pattern = block_diagonal(spec);
    for r in 1..=spec.n_t() {
        for c in 1..=spec.n_t() {
            if (r - 1) / n_s != (c - 1) / n_s {
                pattern.stars.insert((r, c));
            }
        }
    }
    pattern
}

/// The composite state pattern with exactly the given interconnections.
pub fn apply_interconnections<'a, I>(spec: &CompositeSpec, links: I) -> Result<SparsityPattern>
where
    I: IntoIterator<Item = &'a Interconnection>,
{
    let n_s = spec.n_s();
    let mut pattern = block_diagonal(spec);
    for link in links {
        spec.check_link(link)?;
        pattern
            .stars
            .insert((link.target.global(n_s), link.source.global(n_s)));
    }
    Ok(pattern)
}

/// `(a, b) -> (a^T, b^T)`: structural observability of `(a, c)` is structural
/// controllability of `(a^T, c^T)`.
pub fn transpose_system(
    a: &SparsityPattern,
    b: &SparsityPattern,
) -> Result<(SparsityPattern, SparsityPattern)> {
    check_pair(a, b)?;
    Ok((a.transpose(), b.transpose()))
}

/// `a` square and `b` with as many rows as `a`.
pub(crate) fn check_pair(a: &SparsityPattern, b: &SparsityPattern) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            what: "state pattern columns",
            expected: a.n_rows(),
            found: a.n_cols(),
        });
    }
    if b.n_rows() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            what: "second pattern rows",
            expected: a.n_rows(),
            found: b.n_rows(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pattern(n: usize, m: usize, stars: &[(usize, usize)]) -> SparsityPattern {
        SparsityPattern::from_stars(n, m, stars.iter().copied()).unwrap()
    }

    fn spec(k: usize, n_s: usize, a_s: &[(usize, usize)], b: &[(usize, usize)]) -> CompositeSpec {
        let template = SubsystemTemplate::new(pattern(n_s, n_s, a_s)).unwrap();
        CompositeSpec::new(k, template, pattern(k * n_s, 1, b)).unwrap()
    }

    #[test]
    fn pattern_rejects_out_of_range_and_zero_dims() {
        assert!(matches!(
            SparsityPattern::from_stars(2, 2, [(0, 1)]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            SparsityPattern::from_stars(2, 2, [(1, 3)]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            SparsityPattern::new(0, 2),
            Err(Error::ZeroDimension(_))
        ));
        let p = pattern(2, 2, &[(1, 1), (1, 1)]);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn spec_checks_dimensions() {
        let t = SubsystemTemplate::new(pattern(2, 2, &[])).unwrap();
        assert!(CompositeSpec::new(2, t.clone(), pattern(3, 1, &[])).is_err());
        assert!(CompositeSpec::new(0, t.clone(), pattern(2, 1, &[])).is_err());
        assert!(SubsystemTemplate::new(pattern(2, 3, &[])).is_err());
        let s = CompositeSpec::new(3, t, pattern(6, 2, &[])).unwrap();
        assert_eq!((s.n_t(), s.m(), s.n_s()), (6, 2, 2));
    }

    #[test]
    fn first_subsystem_loader_places_rows() {
        let t = SubsystemTemplate::new(pattern(2, 2, &[(2, 1)])).unwrap();
        let s = CompositeSpec::with_first_subsystem_inputs(3, t, &pattern(2, 1, &[(1, 1)])).unwrap();
        assert_eq!(s.b(), &pattern(6, 1, &[(1, 1)]));
    }

    #[test]
    fn global_index_is_a_bijection() {
        for k in 1..=20 {
            for n_s in 1..=20 {
                let mut seen = vec![false; k * n_s + 1];
                for i in 1..=k {
                    for p in 1..=n_s {
                        let s = StateId::new(i, p);
                        let g = s.global(n_s);
                        assert!((1..=k * n_s).contains(&g));
                        assert!(!seen[g]);
                        seen[g] = true;
                        assert_eq!(StateId::from_global(g, n_s), s);
                    }
                }
            }
        }
    }

    #[test]
    fn compose_full_examples() {
        let s = spec(1, 2, &[(2, 1)], &[(1, 1)]);
        assert_eq!(compose_full(&s), pattern(2, 2, &[(2, 1)]));

        let s = spec(2, 1, &[], &[(1, 1)]);
        assert_eq!(compose_full(&s), pattern(2, 2, &[(1, 2), (2, 1)]));

        let s = spec(2, 2, &[(2, 1)], &[(1, 1)]);
        let expected = pattern(
            4,
            4,
            &[
                (2, 1),
                (4, 3),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 1),
                (3, 2),
                (4, 1),
                (4, 2),
            ],
        );
        assert_eq!(compose_full(&s), expected);
    }

    #[test]
    fn compose_full_star_count() {
        for k in 1..=4 {
            for n_s in 1..=4 {
                let a: Vec<_> = (1..=n_s).map(|p| (p, (p % n_s) + 1)).collect();
                let s = spec(k, n_s, &a, &[(1, 1)]);
                assert_eq!(
                    compose_full(&s).len(),
                    k * a.len() + n_s * n_s * k * (k - 1)
                );
            }
        }
    }

    #[test]
    fn apply_interconnections_examples() {
        let s = spec(2, 2, &[(2, 1)], &[(1, 1)]);
        assert_eq!(
            apply_interconnections(&s, &[]).unwrap(),
            pattern(4, 4, &[(2, 1), (4, 3)])
        );

        let link = Interconnection::new(StateId::new(2, 1), StateId::new(1, 2)).unwrap();
        assert_eq!(
            apply_interconnections(&s, &[link]).unwrap(),
            pattern(4, 4, &[(2, 1), (4, 3), (3, 2)])
        );
        assert_eq!(
            apply_interconnections(&s, &[link, link]).unwrap(),
            apply_interconnections(&s, &[link]).unwrap()
        );

        let bad = Interconnection {
            target: StateId::new(1, 1),
            source: StateId::new(1, 2),
        };
        assert_eq!(
            apply_interconnections(&s, &[bad]),
            Err(Error::SameSubsystemLink { subsystem: 1 })
        );
        let missing = Interconnection {
            target: StateId::new(3, 1),
            source: StateId::new(1, 2),
        };
        assert!(apply_interconnections(&s, &[missing]).is_err());
    }

    #[test]
    fn transpose_examples() {
        let a = pattern(2, 2, &[(2, 1)]);
        let b = pattern(2, 1, &[]);
        let (at, _) = transpose_system(&a, &b).unwrap();
        assert_eq!(at, pattern(2, 2, &[(1, 2)]));

        let a = pattern(3, 3, &[(1, 2), (3, 3)]);
        let b = pattern(3, 1, &[(2, 1)]);
        let (at, bt) = transpose_system(&a, &b).unwrap();
        assert_eq!(at, pattern(3, 3, &[(2, 1), (3, 3)]));
        assert_eq!(bt, pattern(1, 3, &[(1, 2)]));

        assert!(transpose_system(&pattern(2, 3, &[]), &pattern(2, 1, &[])).is_err());
        assert!(transpose_system(&a, &pattern(2, 1, &[])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_pattern() -> impl Strategy<Value = SparsityPattern> {
            (1usize..6, 1usize..6).prop_flat_map(|(n, m)| {
                proptest::collection::btree_set((1..=n, 1..=m), 0..=n * m)
                    .prop_map(move |s| SparsityPattern::from_stars(n, m, s).unwrap())
            })
        }

        proptest! {
            #[test]
            fn transpose_is_an_involution(p in arb_pattern()) {
                prop_assert_eq!(p.transpose().transpose(), p);
            }

            #[test]
            fn apply_is_monotone(
                n_s in 1usize..4,
                k in 2usize..4,
                raw in proptest::collection::vec((0usize..64, 0usize..64, any::<bool>()), 0..12),
            ) {
                let s = spec(k, n_s, &[], &[(1, 1)]);
                let n_t = k * n_s;
                let links: Vec<(Interconnection, bool)> = raw
                    .into_iter()
                    .filter_map(|(t, u, keep)| {
                        let t = StateId::from_global(t % n_t + 1, n_s);
                        let u = StateId::from_global(u % n_t + 1, n_s);
                        Interconnection::new(t, u).ok().map(|l| (l, keep))
                    })
                    .collect();
                let small: Vec<_> = links.iter().filter(|(_, keep)| *keep).map(|(l, _)| *l).collect();
                let all: Vec<_> = links.iter().map(|(l, _)| *l).collect();
                let p1 = apply_interconnections(&s, &small).unwrap();
                let p2 = apply_interconnections(&s, &all).unwrap();
                prop_assert!(p1.is_subset(&p2));
                let distinct: BTreeSet<_> = all.iter().collect();
                prop_assert_eq!(p2.len(), distinct.len());
            }
        }
    }
}
