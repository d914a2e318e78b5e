//! System bipartite graphs `B(A, B)` / `B(A, B, N)` with classed, costed
//! edges, maximum matching and minimum-cost left-perfect matching.
//!
//! Left nodes are the primed state copies `x'`, one per composite state.
//! Right nodes are ordered states, then inputs, then SCC nodes; that order is
//! also the tie-break order used by every matching routine here.
//!
//! Interconnection (`I`) edges form a complete multipartite biclique between
//! distinct subsystems. They are never materialized; the engines enumerate
//! them on demand.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Infeasibility, Result};
use crate::graphs::InaccessibleSccSet;
use crate::systems::{CompositeSpec, SparsityPattern, StateId};

/// Edge classes of the system bipartite graph, with their matching costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeClass {
    /// `U`, cost 0.
    Input,
    /// `X`, cost 1.
    Intra,
    /// `N`, cost 2.
    Scc,
    /// `I`, cost 3.
    Interconnection,
}

impl EdgeClass {
    pub const ALL: [EdgeClass; 4] = [Self::Input, Self::Intra, Self::Scc, Self::Interconnection];

    pub const fn cost(self) -> i64 {
        match self {
            Self::Input => 0,
            Self::Intra => 1,
            Self::Scc => 2,
            Self::Interconnection => 3,
        }
    }

    const fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// A set of [`EdgeClass`]es.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassSet(u8);

impl ClassSet {
    pub const EMPTY: Self = Self(0);
    pub const ALL: Self = Self(0b1111);

    pub const fn of(classes: &[EdgeClass]) -> Self {
        let mut bits = 0;
        let mut i = 0;
        while i < classes.len() {
            bits |= classes[i].bit();
            i += 1;
        }
        Self(bits)
    }

    pub const fn contains(self, class: EdgeClass) -> bool {
        self.0 & class.bit() != 0
    }

    pub const fn with(self, class: EdgeClass) -> Self {
        Self(self.0 | class.bit())
    }
}

/// A right-hand node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RightNode {
    State(StateId),
    /// Input `u_c`, 1-based.
    Input(usize),
    /// Condensed SCC node `N_h`, 1-based position in the [`InaccessibleSccSet`].
    Scc(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Layout {
    pub k: usize,
    pub n_s: usize,
    pub m: usize,
    pub q: usize,
}

impl Layout {
    pub fn n_t(self) -> usize {
        self.k * self.n_s
    }

    pub fn n_right(self) -> usize {
        self.n_t() + self.m + self.q
    }

    pub fn state(self, ord: usize) -> StateId {
        StateId::from_global(ord + 1, self.n_s)
    }

    pub fn subsystem(self, state_ord: usize) -> usize {
        state_ord / self.n_s
    }

    pub fn right_node(self, ord: usize) -> RightNode {
        let n_t = self.n_t();
        if ord < n_t {
            RightNode::State(self.state(ord))
        } else if ord < n_t + self.m {
            RightNode::Input(ord - n_t + 1)
        } else {
            RightNode::Scc(ord - n_t - self.m + 1)
        }
    }

    pub fn left_ord(self, s: StateId) -> Option<usize> {
        let ok = (1..=self.k).contains(&s.subsystem) && (1..=self.n_s).contains(&s.state);
        ok.then(|| s.global(self.n_s) - 1)
    }

    pub fn right_ord(self, r: RightNode) -> Option<usize> {
        match r {
            RightNode::State(s) => self.left_ord(s),
            RightNode::Input(c) => (1..=self.m).contains(&c).then(|| self.n_t() + c - 1),
            RightNode::Scc(h) => (1..=self.q).contains(&h).then(|| self.n_t() + self.m + h - 1),
        }
    }
}

/// Bipartite graph whose edges carry an [`EdgeClass`]; nodes can be removed
/// (see [`difference`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassedBipartite {
    layout: Layout,
    /// Non-interconnection edges per left node, sorted by right ordinal.
    explicit: Vec<Vec<(usize, EdgeClass)>>,
    implicit_links: bool,
    left_alive: Vec<bool>,
    right_alive: Vec<bool>,
}

impl ClassedBipartite {
    fn with_layout(layout: Layout, implicit_links: bool) -> Self {
        Self {
            layout,
            explicit: vec![Vec::new(); layout.n_t()],
            implicit_links,
            left_alive: vec![true; layout.n_t()],
            right_alive: vec![true; layout.n_right()],
        }
    }

    /// `B(a, b)` of an arbitrary pair: every `a` star is an `X` edge, every
    /// `b` star a `U` edge, no interconnection class.
    pub fn from_system(a: &SparsityPattern, b: &SparsityPattern) -> Result<Self> {
        crate::systems::check_pair(a, b)?;
        let layout = Layout {
            k: 1,
            n_s: a.n_rows(),
            m: b.n_cols(),
            q: 0,
        };
        let mut g = Self::with_layout(layout, false);
        for (r, c) in a.stars() {
            g.explicit[r - 1].push((c - 1, EdgeClass::Intra));
        }
        for (r, c) in b.stars() {
            g.explicit[r - 1].push((layout.n_t() + c - 1, EdgeClass::Input));
        }
        g.finish();
        Ok(g)
    }

    fn finish(&mut self) {
        for row in &mut self.explicit {
            row.sort_unstable();
            row.dedup();
        }
    }

    #[cfg(test)]
    pub(crate) fn layout(&self) -> Layout {
        self.layout
    }

    pub fn n_t(&self) -> usize {
        self.layout.n_t()
    }

    pub fn m(&self) -> usize {
        self.layout.m
    }

    pub fn q(&self) -> usize {
        self.layout.q
    }

    /// Whether the (implicit) interconnection class is part of this graph.
    pub fn has_interconnections(&self) -> bool {
        self.implicit_links && self.layout.k > 1
    }

    pub fn left_nodes(&self) -> Vec<StateId> {
        (0..self.n_t())
            .filter(|&l| self.left_alive[l])
            .map(|l| self.layout.state(l))
            .collect()
    }

    pub fn right_nodes(&self) -> Vec<RightNode> {
        (0..self.layout.n_right())
            .filter(|&r| self.right_alive[r])
            .map(|r| self.layout.right_node(r))
            .collect()
    }

    pub(crate) fn left_alive(&self, l: usize) -> bool {
        self.left_alive[l]
    }

    pub(crate) fn right_alive(&self, r: usize) -> bool {
        self.right_alive[r]
    }

    pub(crate) fn class_by_ord(&self, l: usize, r: usize) -> Option<EdgeClass> {
        if !self.left_alive[l] || !self.right_alive[r] {
            return None;
        }
        if let Ok(i) = self.explicit[l].binary_search_by_key(&r, |&(r, _)| r) {
            return Some(self.explicit[l][i].1);
        }
        let lay = self.layout;
        (self.implicit_links && r < lay.n_t() && lay.subsystem(r) != lay.subsystem(l))
            .then_some(EdgeClass::Interconnection)
    }

    /// Class of the edge `(left, right)`, if present.
    pub fn edge_class(&self, left: StateId, right: RightNode) -> Option<EdgeClass> {
        let l = self.layout.left_ord(left)?;
        let r = self.layout.right_ord(right)?;
        self.class_by_ord(l, r)
    }

    /// Every edge, interconnections expanded. Ordered by left, then right.
    pub fn edges(&self) -> Vec<(StateId, RightNode, EdgeClass)> {
        let mut out = Vec::new();
        for l in 0..self.n_t() {
            let mut row: Vec<(usize, EdgeClass)> = Vec::new();
            self.for_each_neighbour(l, ClassSet::ALL, |r, c| row.push((r, c)));
            row.sort_unstable();
            out.extend(
                row.into_iter()
                    .map(|(r, c)| (self.layout.state(l), self.layout.right_node(r), c)),
            );
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        let mut n = 0;
        for l in 0..self.n_t() {
            self.for_each_neighbour(l, ClassSet::ALL, |_, _| n += 1);
        }
        n
    }

    /// Number of candidate positions scanned by [`Self::neighbour_at`] for `l`.
    fn neighbour_slots(&self, l: usize) -> usize {
        self.explicit[l].len() + if self.implicit_links { self.n_t() } else { 0 }
    }

    /// The neighbour at scan position `pos`, if that slot holds a live edge of
    /// an allowed class. Explicit edges come first, then interconnections in
    /// state order.
    fn neighbour_at(&self, l: usize, pos: usize, allowed: ClassSet) -> Option<usize> {
        let row = &self.explicit[l];
        if let Some(&(r, c)) = row.get(pos) {
            return (allowed.contains(c) && self.right_alive[r]).then_some(r);
        }
        let r = pos - row.len();
        let lay = self.layout;
        (allowed.contains(EdgeClass::Interconnection)
            && self.right_alive[r]
            && lay.subsystem(r) != lay.subsystem(l))
        .then_some(r)
    }

    fn for_each_neighbour(&self, l: usize, allowed: ClassSet, mut f: impl FnMut(usize, EdgeClass)) {
        if !self.left_alive[l] {
            return;
        }
        for &(r, c) in &self.explicit[l] {
            if allowed.contains(c) && self.right_alive[r] {
                f(r, c);
            }
        }
        if self.implicit_links && allowed.contains(EdgeClass::Interconnection) {
            let lay = self.layout;
            let own = lay.subsystem(l);
            for r in 0..lay.n_t() {
                if lay.subsystem(r) != own && self.right_alive[r] {
                    f(r, EdgeClass::Interconnection);
                }
            }
        }
    }
}

/// Builds `B(A, B)` for the composite with all interconnections available,
/// or `B(A, B, N)` when an SCC set is supplied.
pub fn build_system_bipartite(
    spec: &CompositeSpec,
    with_scc_nodes: Option<&InaccessibleSccSet>,
) -> ClassedBipartite {
    let layout = Layout {
        k: spec.k(),
        n_s: spec.n_s(),
        m: spec.m(),
        q: with_scc_nodes.map_or(0, InaccessibleSccSet::q),
    };
    let n_s = spec.n_s();
    let mut g = ClassedBipartite::with_layout(layout, true);
    for i in 0..spec.k() {
        for (r, c) in spec.a_s().stars() {
            g.explicit[i * n_s + r - 1].push((i * n_s + c - 1, EdgeClass::Intra));
        }
    }
    for (r, c) in spec.b().stars() {
        g.explicit[r - 1].push((layout.n_t() + c - 1, EdgeClass::Input));
    }
    if let Some(nset) = with_scc_nodes {
        for (h, scc) in nset.sccs.iter().enumerate() {
            for &s in scc {
                g.explicit[s.global(n_s) - 1].push((layout.n_t() + layout.m + h, EdgeClass::Scc));
            }
        }
    }
    g.finish();
    g
}

/// A matching, stored as the right partner of each left node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    layout: Layout,
    mate: Vec<Option<usize>>,
}

impl Matching {
    pub(crate) fn from_mate(layout: Layout, mate: Vec<Option<usize>>) -> Self {
        Self { layout, mate }
    }

    pub(crate) fn mate(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub(crate) fn mate_mut(&mut self) -> &mut [Option<usize>] {
        &mut self.mate
    }

    /// Builds a matching of `g` from explicit pairs, checking that every pair
    /// is an edge and that no endpoint repeats.
    pub fn from_pairs<I>(g: &ClassedBipartite, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (StateId, RightNode)>,
    {
        let lay = g.layout;
        let mut mate = vec![None; lay.n_t()];
        let mut used = vec![false; lay.n_right()];
        for (left, right) in pairs {
            let l = lay.left_ord(left).ok_or(Error::InvalidState {
                subsystem: left.subsystem,
                state: left.state,
            })?;
            let r = lay
                .right_ord(right)
                .filter(|&r| g.class_by_ord(l, r).is_some())
                .ok_or(Error::Internal("matching pair is not an edge"))?;
            if mate[l].is_some() || used[r] {
                return Err(Error::Internal("matching pairs share an endpoint"));
            }
            mate[l] = Some(r);
            used[r] = true;
        }
        Ok(Self { layout: lay, mate })
    }

    pub fn len(&self) -> usize {
        self.mate.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Matched pairs in left order.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, RightNode)> + '_ {
        self.mate.iter().enumerate().filter_map(move |(l, r)| {
            r.map(|r| (self.layout.state(l), self.layout.right_node(r)))
        })
    }

    pub fn right_of(&self, left: StateId) -> Option<RightNode> {
        let l = self.layout.left_ord(left)?;
        self.mate[l].map(|r| self.layout.right_node(r))
    }

    pub fn left_of(&self, right: RightNode) -> Option<StateId> {
        let r = self.layout.right_ord(right)?;
        self.mate
            .iter()
            .position(|&x| x == Some(r))
            .map(|l| self.layout.state(l))
    }

    pub fn contains(&self, left: StateId, right: RightNode) -> bool {
        self.right_of(left) == Some(right)
    }

    /// Number of pairs of the given class in `g`.
    pub fn count_class(&self, g: &ClassedBipartite, class: EdgeClass) -> usize {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(l, r)| r.and_then(|r| g.class_by_ord(l, r)) == Some(class))
            .count()
    }

    /// Total cost in `g`; `None` if some pair is not an edge of `g`.
    pub fn cost(&self, g: &ClassedBipartite) -> Option<i64> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| g.class_by_ord(l, r).map(EdgeClass::cost)))
            .sum()
    }

    /// Whether this is a valid matching of `g` that saturates all live left nodes.
    pub fn is_left_perfect(&self, g: &ClassedBipartite) -> bool {
        self.is_valid_in(g) && (0..g.n_t()).all(|l| !g.left_alive(l) || self.mate[l].is_some())
    }

    /// Endpoint-disjoint and every pair is an edge of `g`.
    pub fn is_valid_in(&self, g: &ClassedBipartite) -> bool {
        if self.layout != g.layout {
            return false;
        }
        let mut used = vec![false; g.layout.n_right()];
        for (l, r) in self.mate.iter().enumerate() {
            let Some(r) = *r else { continue };
            if used[r] || g.class_by_ord(l, r).is_none() {
                return false;
            }
            used[r] = true;
        }
        true
    }
}

/// Maximum-cardinality matching using only edges whose class is allowed
/// (Hopcroft-Karp).
pub fn max_matching(g: &ClassedBipartite, allowed: ClassSet) -> Matching {
    let n_left = g.n_t();
    let n_right = g.layout.n_right();
    const FREE: usize = usize::MAX;
    let mut mate_l = vec![FREE; n_left];
    let mut mate_r = vec![FREE; n_right];
    let mut dist = vec![usize::MAX; n_left];
    let mut cursor = vec![0usize; n_left];
    let mut queue = Vec::with_capacity(n_left);

    // Greedy seed.
    for l in 0..n_left {
        if !g.left_alive(l) {
            continue;
        }
        for pos in 0..g.neighbour_slots(l) {
            if let Some(r) = g.neighbour_at(l, pos, allowed) {
                if mate_r[r] == FREE {
                    mate_l[l] = r;
                    mate_r[r] = l;
                    break;
                }
            }
        }
    }

    loop {
        // Layered BFS from free left nodes.
        queue.clear();
        for l in 0..n_left {
            if g.left_alive(l) && mate_l[l] == FREE {
                dist[l] = 0;
                queue.push(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut head = 0;
        let mut found = false;
        while head < queue.len() {
            let l = queue[head];
            head += 1;
            for pos in 0..g.neighbour_slots(l) {
                let Some(r) = g.neighbour_at(l, pos, allowed) else { continue };
                let next = mate_r[r];
                if next == FREE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push(next);
                }
            }
        }
        if !found {
            break;
        }

        cursor.fill(0);
        let mut augmented = false;
        let mut path: Vec<usize> = Vec::new();
        for root in 0..n_left {
            if !g.left_alive(root) || mate_l[root] != FREE {
                continue;
            }
            // Iterative layered DFS; `path` holds left nodes, the right node
            // chosen at each level is re-read from `cursor - 1`.
            path.clear();
            path.push(root);
            while let Some(&l) = path.last() {
                let mut advanced = false;
                while cursor[l] < g.neighbour_slots(l) {
                    let pos = cursor[l];
                    cursor[l] += 1;
                    let Some(r) = g.neighbour_at(l, pos, allowed) else { continue };
                    let next = mate_r[r];
                    if next == FREE {
                        // Augment along the path.
                        let mut r_new = r;
                        for &pl in path.iter().rev() {
                            let old = mate_l[pl];
                            mate_l[pl] = r_new;
                            mate_r[r_new] = pl;
                            r_new = old;
                        }
                        path.clear();
                        augmented = true;
                        advanced = true;
                        break;
                    }
                    if dist[next] == dist[l] + 1 {
                        path.push(next);
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    dist[l] = usize::MAX;
                    path.pop();
                }
            }
        }
        if !augmented {
            break;
        }
    }

    let mate = mate_l
        .into_iter()
        .map(|r| (r != FREE).then_some(r))
        .collect();
    Matching::from_mate(g.layout, mate)
}

/// Minimum-cost matching that saturates every live left node.
///
/// Successive shortest augmenting paths with node potentials over a dense
/// row-by-row relaxation (Hungarian/Jonker-Volgenant form). Interconnection
/// edges are priced on the fly, so nothing quadratic is stored.
pub fn min_cost_left_perfect_matching(g: &ClassedBipartite) -> Result<Matching> {
    min_cost_with(g, |c| c.cost())
}

/// Same engine with a caller-supplied integer weight per class.
pub(crate) fn min_cost_with(
    g: &ClassedBipartite,
    weight: impl Fn(EdgeClass) -> i64,
) -> Result<Matching> {
    const INF: i64 = i64::MAX / 4;
    let lay = g.layout;
    let rows: Vec<usize> = (0..g.n_t()).filter(|&l| g.left_alive(l)).collect();
    let cols: Vec<usize> = (0..lay.n_right()).filter(|&r| g.right_alive(r)).collect();
    let n = rows.len();
    let m = cols.len();
    if n > m {
        return Err(Infeasibility::NoPerfectMatching.into());
    }
    let mut col_of = vec![usize::MAX; lay.n_right()];
    for (j, &r) in cols.iter().enumerate() {
        col_of[r] = j + 1;
    }
    let w_link = weight(EdgeClass::Interconnection);

    // 1-based arrays; column 0 is the virtual source.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut minv = vec![INF; m + 1];
    let mut used = vec![false; m + 1];
    let mut row_cost = vec![INF; m + 1];

    let fill_row = |row_cost: &mut [i64], l: usize| {
        row_cost.fill(INF);
        if g.implicit_links {
            let own = lay.subsystem(l);
            for (j, &r) in cols.iter().enumerate() {
                if r < lay.n_t() && lay.subsystem(r) != own {
                    row_cost[j + 1] = w_link;
                }
            }
        }
        for &(r, c) in &g.explicit[l] {
            let j = col_of[r];
            if j != usize::MAX {
                row_cost[j] = weight(c);
            }
        }
    };

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.fill(INF);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            fill_row(&mut row_cost, rows[i0 - 1]);
            let mut delta = INF;
            let mut j1 = 0usize;
            let ui0 = u[i0];
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let c = row_cost[j];
                if c < INF {
                    let cur = c - ui0 - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if delta >= INF / 2 {
                return Err(Infeasibility::NoPerfectMatching.into());
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if minv[j] < INF {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut mate = vec![None; lay.n_t()];
    for j in 1..=m {
        if p[j] != 0 {
            mate[rows[p[j] - 1]] = Some(cols[j - 1]);
        }
    }
    Ok(Matching::from_mate(lay, mate))
}

/// `g ⊙ m`: removes every node matched by `m` together with its edges.
pub fn difference(g: &ClassedBipartite, m: &Matching) -> ClassedBipartite {
    let mut out = g.clone();
    for (l, r) in m.mate.iter().enumerate() {
        if let Some(r) = *r {
            out.left_alive[l] = false;
            out.right_alive[r] = false;
        }
    }
    out
}
