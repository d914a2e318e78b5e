//! State/input digraphs, strongly connected components and accessibility.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::systems::{CompositeSpec, Interconnection, SparsityPattern, StateId};

/// A node of a system digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    State(StateId),
    /// Input `u_c`, 1-based.
    Input(usize),
}

/// Edge classes of the composite digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcClass {
    /// `X`: between two states of one subsystem.
    Intra,
    /// `U`: from an input to a state.
    Input,
    /// `I`: between states of distinct subsystems.
    Interconnection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub from: Vertex,
    pub to: Vertex,
    pub class: ArcClass,
}

/// Which interconnections to materialize in [`build_digraph`].
#[derive(Debug, Clone, Copy)]
pub enum Links<'a> {
    None,
    All,
    Explicit(&'a [Interconnection]),
}

/// The system digraph `D(A, B)` with every arc tagged by its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredDigraph {
    k: usize,
    n_s: usize,
    m: usize,
    arcs: BTreeSet<Arc>,
}

impl LayeredDigraph {
    /// Digraph of an arbitrary pair `(a, b)`, viewed as a single subsystem.
    pub fn from_system(a: &SparsityPattern, b: &SparsityPattern) -> Result<Self> {
        crate::systems::check_pair(a, b)?;
        let n = a.n_rows();
        let mut arcs = BTreeSet::new();
        for (r, c) in a.stars() {
            arcs.insert(Arc {
                from: Vertex::State(StateId::new(1, c)),
                to: Vertex::State(StateId::new(1, r)),
                class: ArcClass::Intra,
            });
        }
        for (r, c) in b.stars() {
            arcs.insert(Arc {
                from: Vertex::Input(c),
                to: Vertex::State(StateId::new(1, r)),
                class: ArcClass::Input,
            });
        }
        Ok(Self {
            k: 1,
            n_s: n,
            m: b.n_cols(),
            arcs,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn n_t(&self) -> usize {
        self.k * self.n_s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn state_nodes(&self) -> impl Iterator<Item = StateId> + '_ {
        (1..=self.n_t()).map(|g| StateId::from_global(g, self.n_s))
    }

    pub fn input_nodes(&self) -> impl Iterator<Item = usize> {
        1..=self.m
    }

    pub fn arcs(&self) -> impl ExactSizeIterator<Item = &Arc> + '_ {
        self.arcs.iter()
    }

    pub fn contains(&self, arc: &Arc) -> bool {
        self.arcs.contains(arc)
    }

    /// Successor lists over 0-based global state indices, plus the 0-based
    /// states each input points at.
    pub(crate) fn adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut states = vec![Vec::new(); self.n_t()];
        let mut inputs = vec![Vec::new(); self.m];
        for arc in &self.arcs {
            let Vertex::State(to) = arc.to else { continue };
            let to = to.global(self.n_s) - 1;
            match arc.from {
                Vertex::State(from) => states[from.global(self.n_s) - 1].push(to),
                Vertex::Input(c) => inputs[c - 1].push(to),
            }
        }
        (states, inputs)
    }
}

/// Builds `D(A', B)` where `A'` carries the template blocks plus the chosen links.
pub fn build_digraph(spec: &CompositeSpec, links: Links<'_>) -> Result<LayeredDigraph> {
    let n_s = spec.n_s();
    let mut arcs = BTreeSet::new();
    for i in 1..=spec.k() {
        for (r, c) in spec.a_s().stars() {
            arcs.insert(Arc {
                from: Vertex::State(StateId::new(i, c)),
                to: Vertex::State(StateId::new(i, r)),
                class: ArcClass::Intra,
            });
        }
    }
    for (r, c) in spec.b().stars() {
        arcs.insert(Arc {
            from: Vertex::Input(c),
            to: Vertex::State(StateId::from_global(r, n_s)),
            class: ArcClass::Input,
        });
    }
    let mut push_link = |link: &Interconnection| {
        arcs.insert(Arc {
            from: Vertex::State(link.source),
            to: Vertex::State(link.target),
            class: ArcClass::Interconnection,
        });
    };
    match links {
        Links::None => {}
        Links::All => {
            for target in spec.states() {
                for source in spec.states() {
                    if target.subsystem != source.subsystem {
                        push_link(&Interconnection { target, source });
                    }
                }
            }
        }
        Links::Explicit(list) => {
            for link in list {
                spec.check_link(link)?;
                push_link(link);
            }
        }
    }
    Ok(LayeredDigraph {
        k: spec.k(),
        n_s,
        m: spec.m(),
        arcs,
    })
}

/// Strongly connected components of the state nodes and their condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    /// Each component sorted; components ordered by their smallest state.
    pub components: Vec<Vec<StateId>>,
    pub condensation_edges: BTreeSet<(usize, usize)>,
    pub non_top_linked: Vec<bool>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, s: StateId) -> Option<usize> {
        self.components.iter().position(|c| c.binary_search(&s).is_ok())
    }
}

/// Tarjan's algorithm with an explicit call stack. Components come out sorted
/// internally and ordered by their smallest node.
pub(crate) fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    // (node, next successor position)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if *pos == 0 && index[v] == UNSEEN {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

/// Component id per node for a list produced by [`tarjan_scc`].
pub(crate) fn component_ids(n: usize, comps: &[Vec<usize>]) -> Vec<usize> {
    let mut ids = vec![0; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            ids[v] = c;
        }
    }
    ids
}

pub fn strongly_connected_components(g: &LayeredDigraph) -> SccPartition {
    let (adj, _) = g.adjacency();
    let comps = tarjan_scc(&adj);
    let ids = component_ids(adj.len(), &comps);
    let mut condensation_edges = BTreeSet::new();
    for (v, succ) in adj.iter().enumerate() {
        for &w in succ {
            if ids[v] != ids[w] {
                condensation_edges.insert((ids[v], ids[w]));
            }
        }
    }
    let mut non_top_linked = vec![true; comps.len()];
    for &(_, to) in &condensation_edges {
        non_top_linked[to] = false;
    }
    let n_s = g.n_s();
    SccPartition {
        components: comps
            .iter()
            .map(|c| c.iter().map(|&v| StateId::from_global(v + 1, n_s)).collect())
            .collect(),
        condensation_edges,
        non_top_linked,
    }
}

/// Breadth-first reachability over 0-based state indices.
pub(crate) fn reachable(adj: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// States reachable from some input node.
pub fn accessible_states(g: &LayeredDigraph) -> BTreeSet<StateId> {
    let (adj, inputs) = g.adjacency();
    let seen = reachable(&adj, inputs.into_iter().flatten());
    let n_s = g.n_s();
    seen.iter()
        .enumerate()
        .filter(|&(_, &s)| s)
        .map(|(v, _)| StateId::from_global(v + 1, n_s))
        .collect()
}

/// The non-top-linked SCCs of the subsystem digraphs that no input reaches
/// when interconnections are absent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InaccessibleSccSet {
    /// Ordered by subsystem, then by smallest state; each set sorted.
    pub sccs: Vec<Vec<StateId>>,
}

impl InaccessibleSccSet {
    pub fn q(&self) -> usize {
        self.sccs.len()
    }

    /// Index (0-based) of the listed SCC that contains `s`.
    pub fn scc_of(&self, s: StateId) -> Option<usize> {
        self.sccs.iter().position(|c| c.binary_search(&s).is_ok())
    }

    /// Map from state to the 0-based index of its SCC.
    pub(crate) fn membership(&self) -> BTreeMap<StateId, usize> {
        self.sccs
            .iter()
            .enumerate()
            .flat_map(|(h, c)| c.iter().map(move |&s| (s, h)))
            .collect()
    }
}

pub fn inaccessible_nontop_sccs(spec: &CompositeSpec) -> InaccessibleSccSet {
    let n_s = spec.n_s();
    let mut template_adj = vec![Vec::new(); n_s];
    for (r, c) in spec.a_s().stars() {
        template_adj[c - 1].push(r - 1);
    }
    let comps = tarjan_scc(&template_adj);
    let ids = component_ids(n_s, &comps);
    let mut top_linked = vec![false; comps.len()];
    for (v, succ) in template_adj.iter().enumerate() {
        for &w in succ {
            if ids[v] != ids[w] {
                top_linked[ids[w]] = true;
            }
        }
    }

    let mut input_rows = vec![Vec::new(); spec.k()];
    for (r, _) in spec.b().stars() {
        let s = StateId::from_global(r, n_s);
        input_rows[s.subsystem - 1].push(s.state - 1);
    }

    let mut sccs = Vec::new();
    for (i, rows) in input_rows.iter().enumerate() {
        let seen = reachable(&template_adj, rows.iter().copied());
        for (c, comp) in comps.iter().enumerate() {
            if top_linked[c] || comp.iter().any(|&v| seen[v]) {
                continue;
            }
            sccs.push(comp.iter().map(|&v| StateId::new(i + 1, v + 1)).collect());
        }
    }
    InaccessibleSccSet { sccs }
}
