//! Structure of a solution set: the vector graph on the integer lattice,
//! the triad-connectivity graph, its components classified up to
//! isomorphism, vector multiplicities, and partial-domain counts.

use std::collections::{BTreeMap, BTreeSet};

use crate::canon;
use crate::dispersion::WaveVector;
use crate::enumerator::SolutionSet;

/// Wave vectors as nodes; each triad contributes its three pairwise edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorGraph {
    pub nodes: Vec<WaveVector>,
    pub edges: Vec<(WaveVector, WaveVector)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriadEdge {
    pub a: usize,
    pub b: usize,
    /// The wave vectors the two triads have in common, ascending.
    pub shared: Vec<WaveVector>,
}

/// Triads as nodes, connected when they share at least one wave vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriadGraph {
    triad_count: usize,
    edges: Vec<TriadEdge>,
    components: Vec<Vec<usize>>,
}

impl TriadGraph {
    pub fn triad_count(&self) -> usize {
        self.triad_count
    }

    /// Edges with `a < b`, ascending.
    pub fn edges(&self) -> &[TriadEdge] {
        &self.edges
    }

    /// Connected components; members ascending, components ordered by their
    /// smallest triad index.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }
}

pub fn build_graphs(set: &SolutionSet) -> (VectorGraph, TriadGraph) {
    let mut membership: BTreeMap<WaveVector, Vec<usize>> = BTreeMap::new();
    let mut vector_edges: BTreeSet<(WaveVector, WaveVector)> = BTreeSet::new();
    for (idx, t) in set.triads.iter().enumerate() {
        let [k1, k2, k3] = t.vectors();
        for v in [k1, k2, k3] {
            membership.entry(v).or_default().push(idx);
        }
        for (a, b) in [(k1, k2), (k1, k3), (k2, k3)] {
            vector_edges.insert(if a <= b { (a, b) } else { (b, a) });
        }
    }

    let mut shared: BTreeMap<(usize, usize), Vec<WaveVector>> = BTreeMap::new();
    for (v, idxs) in &membership {
        for (p, &i) in idxs.iter().enumerate() {
            for &j in &idxs[p + 1..] {
                shared.entry((i, j)).or_default().push(*v);
            }
        }
    }

    let mut parent: Vec<usize> = (0..set.triads.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j) in shared.keys() {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for idx in 0..set.triads.len() {
        let root = find(&mut parent, idx);
        groups.entry(root).or_default().push(idx);
    }
    // Roots are the minimum of their group, so iteration order is already
    // by smallest member.
    let components: Vec<Vec<usize>> = groups.into_values().collect();

    let vg = VectorGraph {
        nodes: membership.keys().copied().collect(),
        edges: vector_edges.into_iter().collect(),
    };
    let tg = TriadGraph {
        triad_count: set.triads.len(),
        edges: shared
            .into_iter()
            .map(|((a, b), shared)| TriadEdge { a, b, shared })
            .collect(),
        components,
    };
    (vg, tg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    Isolated,
    Butterfly,
    Chain(usize),
    Star(usize),
    Complex,
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassLabel::Isolated => write!(f, "isolated"),
            ClassLabel::Butterfly => write!(f, "butterfly"),
            ClassLabel::Chain(l) => write!(f, "chain({l})"),
            ClassLabel::Star(l) => write!(f, "star({l})"),
            ClassLabel::Complex => write!(f, "complex"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentClass {
    /// Triad indices into the originating SolutionSet, ascending.
    pub triad_indices: Vec<usize>,
    pub label: ClassLabel,
    /// Canonical form of the component's triad graph; equal exactly for
    /// isomorphic components.
    pub certificate: Vec<u8>,
}

impl ComponentClass {
    pub fn triad_count(&self) -> usize {
        self.triad_indices.len()
    }

    /// FNV-1a hash of the certificate, for compact display.
    pub fn certificate_hash(&self) -> String {
        format!("{:016x}", fnv1a64(&self.certificate))
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Labels every component and computes its isomorphism certificate.
///
/// A two-triad component is a butterfly only when the pair shares exactly
/// one vector; chains are path-shaped, stars need a hub plus at least
/// three leaves, everything else is complex.
pub fn classify_components(tg: &TriadGraph) -> Vec<ComponentClass> {
    let by_pair: BTreeMap<(usize, usize), &TriadEdge> =
        tg.edges.iter().map(|e| ((e.a, e.b), e)).collect();
    tg.components
        .iter()
        .map(|comp| {
            let l = comp.len();
            let local = |idx: usize| comp.binary_search(&idx).unwrap();
            let mut local_edges: Vec<(usize, usize)> = Vec::new();
            let mut degree = vec![0usize; l];
            let mut two_node_share = 0usize;
            for (p, &i) in comp.iter().enumerate() {
                for &j in &comp[p + 1..] {
                    if let Some(e) = by_pair.get(&(i, j)) {
                        local_edges.push((local(i), local(j)));
                        degree[local(i)] += 1;
                        degree[local(j)] += 1;
                        two_node_share = e.shared.len();
                    }
                }
            }
            let max_deg = degree.iter().copied().max().unwrap_or(0);
            let label = if l == 1 {
                ClassLabel::Isolated
            } else if l == 2 {
                if two_node_share == 1 {
                    ClassLabel::Butterfly
                } else {
                    ClassLabel::Complex
                }
            } else if local_edges.len() == l - 1 && max_deg == 2 {
                ClassLabel::Chain(l)
            } else if local_edges.len() == l - 1 && max_deg == l - 1 && l >= 4 {
                ClassLabel::Star(l)
            } else {
                ClassLabel::Complex
            };
            let certificate = canon::certificate(&canon::Graph::new(l, &local_edges));
            ComponentClass {
                triad_indices: comp.clone(),
                label,
                certificate,
            }
        })
        .collect()
}

/// Triad-membership count per wave vector.
pub fn multiplicity_map(set: &SolutionSet) -> BTreeMap<WaveVector, u32> {
    let mut map: BTreeMap<WaveVector, u32> = BTreeMap::new();
    for t in &set.triads {
        for v in t.vectors() {
            *map.entry(v).or_insert(0) += 1;
        }
    }
    map
}

/// For each multiplicity value, how many distinct vectors have it.
pub fn multiplicity_histogram(set: &SolutionSet) -> BTreeMap<u32, u64> {
    let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
    for count in multiplicity_map(set).values() {
        *hist.entry(*count).or_insert(0) += 1;
    }
    hist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Square,
    Circle,
}

/// Number of triads entirely inside the partial domain of each radius:
/// squares require m ≤ s and n ≤ s for all three vectors, circles require
/// m² + n² ≤ s².
pub fn partial_domain_counts(set: &SolutionSet, radii: &[u32], shape: Shape) -> Vec<u64> {
    let fits = |v: WaveVector, s: u32| -> bool {
        match shape {
            Shape::Square => v.m <= s && v.n <= s,
            Shape::Circle => {
                let (m, n, s) = (v.m as u64, v.n as u64, s as u64);
                m * m + n * n <= s * s
            }
        }
    };
    radii
        .iter()
        .map(|&s| {
            set.triads
                .iter()
                .filter(|t| t.vectors().iter().all(|&v| fits(v, s)))
                .count() as u64
        })
        .collect()
}

pub fn vector_graph_dot(g: &VectorGraph) -> String {
    let mut out = String::from("graph vectors {\n");
    for v in &g.nodes {
        out.push_str(&format!("  \"{},{}\";\n", v.m, v.n));
    }
    for (a, b) in &g.edges {
        out.push_str(&format!(
            "  \"{},{}\" -- \"{},{}\";\n",
            a.m, a.n, b.m, b.n
        ));
    }
    out.push_str("}\n");
    out
}

pub fn triad_graph_dot(g: &TriadGraph) -> String {
    let mut out = String::from("graph triads {\n");
    for i in 0..g.triad_count {
        out.push_str(&format!("  T{i};\n"));
    }
    for e in &g.edges {
        let labels: Vec<String> = e.shared.iter().map(|v| format!("{},{}", v.m, v.n)).collect();
        out.push_str(&format!(
            "  T{} -- T{} [label=\"{}\"];\n",
            e.a,
            e.b,
            labels.join(" ")
        ));
    }
    out.push_str("}\n");
    out
}
