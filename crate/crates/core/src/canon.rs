//! Canonical forms for undirected graphs.
//!
//! A certificate is the node count plus a canonical adjacency bitstring;
//! certificates are equal exactly when the graphs are isomorphic. Graphs at
//! or below [`EXHAUSTIVE_LIMIT`] nodes take the lexicographically greatest
//! column-order bitstring over all node orderings by plain enumeration.
//! Larger graphs run an individualization-refinement search: equitable
//! partition refinement narrows the orderings to a small tree, discovered
//! automorphisms prune symmetric branches, and the certificate is the
//! greatest bitstring over the surviving leaves. Both definitions are
//! isomorphism-invariant; isomorphic graphs share a node count, so they are
//! always compared within a single definition.

/// Components at or below this size take the plain all-permutations scan.
pub(crate) const EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Debug, Clone)]
pub(crate) struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub(crate) fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            assert!(a != b && a < n && b < n, "bad edge ({a}, {b}) for n = {n}");
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Graph { n, adj }
    }

    fn neighbor_lists(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|v| {
                (0..self.n)
                    .filter(|&w| self.adj[v][w])
                    .map(|w| w as u32)
                    .collect()
            })
            .collect()
    }
}

/// Isomorphism-invariant certificate: node count plus the canonical
/// bitstring, packed MSB-first.
pub(crate) fn certificate(g: &Graph) -> Vec<u8> {
    let bits = if g.n <= EXHAUSTIVE_LIMIT {
        canonical_bits_exhaustive(g)
    } else {
        canonical_bits_refinement(g)
    };
    pack(g.n, &bits)
}

fn pack(n: usize, bits: &[bool]) -> Vec<u8> {
    debug_assert_eq!(bits.len(), n * (n - 1) / 2);
    let mut out = Vec::with_capacity(4 + bits.len().div_ceil(8));
    out.extend_from_slice(&(n as u32).to_be_bytes());
    let mut cur = 0u8;
    for (i, &bit) in bits.iter().enumerate() {
        if bit {
            cur |= 1 << (7 - (i % 8));
        }
        if i % 8 == 7 {
            out.push(cur);
            cur = 0;
        }
    }
    if bits.len() % 8 != 0 {
        out.push(cur);
    }
    out
}

/// Max over all n! orderings, bits packed into a u64 key. Only valid while
/// n(n−1)/2 ≤ 64, i.e. n ≤ 11; the public limit keeps n ≤ 8.
fn canonical_bits_exhaustive(g: &Graph) -> Vec<bool> {
    let n = g.n;
    let nbits = n * (n - 1) / 2;
    debug_assert!(nbits <= 64);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = 0u64;
    permute(&mut perm, 0, &mut |p| {
        let mut key = 0u64;
        let mut t = 0;
        for j in 1..n {
            for i in 0..j {
                if g.adj[p[i]][p[j]] {
                    key |= 1 << (nbits - 1 - t);
                }
                t += 1;
            }
        }
        best = best.max(key);
    });
    (0..nbits).map(|t| best >> (nbits - 1 - t) & 1 == 1).collect()
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Individualization-refinement canonical form. The search tree starts from
/// the equitable refinement of the unit partition; at each node the first
/// non-singleton cell is split by individualizing each of its members in
/// turn, followed by re-refinement. Every leaf is a discrete partition,
/// read as a node ordering. The canonical bitstring is the lexicographic
/// maximum over all leaves.
///
/// Two leaves with equal bitstrings expose an automorphism, which is used
/// three ways: members of one orbit are interchangeable at the tree root,
/// a stored generator that fixes the current prefix makes sibling branches
/// interchangeable deeper down, and a leaf equivalent to an already explored
/// one aborts its whole branch back to the point of divergence. None of the
/// cuts remove bitstrings not produced elsewhere, so the maximum is exact.
fn canonical_bits_refinement(g: &Graph) -> Vec<bool> {
    let n = g.n;
    let mut search = IrSearch {
        g,
        neighbors: g.neighbor_lists(),
        scratch: RefineScratch::new(n),
        path: Vec::new(),
        first_perm: Vec::new(),
        first_path: Vec::new(),
        best_bits: Vec::new(),
        best_perm: Vec::new(),
        best_path: Vec::new(),
        generators: Vec::new(),
        generator_set: std::collections::BTreeSet::new(),
        orbit: UnionFind::new(n),
    };
    let mut part = Partition::unit(n);
    if n > 0 {
        search.scratch.enqueue(0);
        refine(&search.neighbors, &mut search.scratch, &mut part);
    }
    search.descend(&part);
    search.best_bits
}

/// Ordered partition of the vertices in a flat layout: `lab` lists vertices
/// in cell order, `pos` inverts it, and every index records the start of
/// its cell. A cell is identified by its start index, which splitting never
/// moves, so no bookkeeping shifts when other cells split.
#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    cell_start: Vec<u32>,
    /// Cell length, valid at start indices only.
    cell_len: Vec<u32>,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut cell_len = vec![0; n];
        if n > 0 {
            cell_len[0] = n as u32;
        }
        Partition {
            lab: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            cell_start: vec![0; n],
            cell_len,
        }
    }

    fn first_non_singleton(&self) -> Option<usize> {
        let n = self.lab.len();
        let mut a = 0;
        while a < n {
            let l = self.cell_len[a] as usize;
            if l > 1 {
                return Some(a);
            }
            a += l;
        }
        None
    }

    /// Splits `v` off as a singleton at the front of its cell. Returns the
    /// cell's start index; the remainder cell begins right after it.
    fn individualize(&mut self, v: u32) -> usize {
        let i = self.pos[v as usize] as usize;
        let a = self.cell_start[i] as usize;
        let l = self.cell_len[a] as usize;
        debug_assert!(l > 1);
        let u = self.lab[a];
        self.lab[a] = v;
        self.lab[i] = u;
        self.pos[v as usize] = a as u32;
        self.pos[u as usize] = i as u32;
        self.cell_len[a] = 1;
        self.cell_len[a + 1] = (l - 1) as u32;
        for k in a + 1..a + l {
            self.cell_start[k] = (a + 1) as u32;
        }
        a
    }
}

struct RefineScratch {
    counts: Vec<u32>,
    touched: Vec<u32>,
    affected: Vec<u32>,
    affected_mark: Vec<bool>,
    pairs: Vec<(u32, u32)>,
    splitter: Vec<u32>,
    queue: Vec<u32>,
    queued: Vec<bool>,
}

impl RefineScratch {
    fn new(n: usize) -> Self {
        RefineScratch {
            counts: vec![0; n],
            touched: Vec::with_capacity(n),
            affected: Vec::with_capacity(n),
            affected_mark: vec![false; n],
            pairs: Vec::with_capacity(n),
            splitter: Vec::with_capacity(n),
            queue: Vec::with_capacity(n),
            queued: vec![false; n],
        }
    }

    fn enqueue(&mut self, start: usize) {
        if !self.queued[start] {
            self.queued[start] = true;
            self.queue.push(start as u32);
        }
    }
}

/// Refines the partition to its coarsest equitable refinement: within every
/// cell, all members end up with the same number of neighbors in every
/// cell. The queue holds the cells the partition is not yet known to be
/// equitable against; processing a splitter subdivides any cell whose
/// members see it unevenly, subcells ordered by neighbor count descending
/// and re-queued. The caller seeds the queue with whatever cells changed
/// (all of them for a fresh partition, the two halves after an
/// individualization). The subcell order depends only on the partition and
/// the graph, not on vertex names, so refinement commutes with relabeling.
fn refine(neighbors: &[Vec<u32>], sc: &mut RefineScratch, p: &mut Partition) {
    while let Some(s) = sc.queue.pop() {
        sc.queued[s as usize] = false;
        let s = s as usize;
        let l = p.cell_len[s] as usize;
        sc.splitter.clear();
        sc.splitter.extend_from_slice(&p.lab[s..s + l]);
        sc.touched.clear();
        for &u in &sc.splitter {
            for &w in &neighbors[u as usize] {
                if sc.counts[w as usize] == 0 {
                    sc.touched.push(w);
                }
                sc.counts[w as usize] += 1;
            }
        }
        sc.affected.clear();
        for &w in &sc.touched {
            let cs = p.cell_start[p.pos[w as usize] as usize];
            if p.cell_len[cs as usize] > 1 && !sc.affected_mark[cs as usize] {
                sc.affected_mark[cs as usize] = true;
                sc.affected.push(cs);
            }
        }
        // Position order, so the processing sequence is independent of
        // vertex names.
        sc.affected.sort_unstable();
        for ai in 0..sc.affected.len() {
            let cs = sc.affected[ai] as usize;
            sc.affected_mark[cs] = false;
            let cl = p.cell_len[cs] as usize;
            sc.pairs.clear();
            let head = sc.counts[p.lab[cs] as usize];
            let mut uniform = true;
            for k in cs..cs + cl {
                let v = p.lab[k];
                let c = sc.counts[v as usize];
                if c != head {
                    uniform = false;
                }
                sc.pairs.push((c, v));
            }
            if uniform {
                continue;
            }
            // Stable by construction order, so ties keep their relative
            // positions.
            sc.pairs.sort_by(|x, y| y.0.cmp(&x.0));
            let mut run = cs;
            for k in 0..cl {
                let (c, v) = sc.pairs[k];
                let idx = cs + k;
                p.lab[idx] = v;
                p.pos[v as usize] = idx as u32;
                if k > 0 && c != sc.pairs[k - 1].0 {
                    p.cell_len[run] = (idx - run) as u32;
                    run = idx;
                }
                p.cell_start[idx] = run as u32;
            }
            p.cell_len[run] = (cs + cl - run) as u32;
            let mut start = cs;
            while start < cs + cl {
                sc.enqueue(start);
                start += p.cell_len[start] as usize;
            }
        }
        for &w in &sc.touched {
            sc.counts[w as usize] = 0;
        }
    }
}

enum Flow {
    /// Keep exploring siblings at the current level.
    Continue,
    /// The branch chosen at this path depth is equivalent to an already
    /// explored one; resume sibling iteration there.
    Backjump(usize),
}

struct IrSearch<'a> {
    g: &'a Graph,
    neighbors: Vec<Vec<u32>>,
    scratch: RefineScratch,
    path: Vec<u32>,
    first_perm: Vec<u32>,
    first_path: Vec<u32>,
    best_bits: Vec<bool>,
    best_perm: Vec<u32>,
    best_path: Vec<u32>,
    generators: Vec<Vec<u32>>,
    generator_set: std::collections::BTreeSet<Vec<u32>>,
    orbit: UnionFind,
}

impl IrSearch<'_> {
    fn descend(&mut self, part: &Partition) -> Flow {
        let target = match part.first_non_singleton() {
            None => return self.leaf(part),
            Some(t) => t,
        };
        let depth = self.path.len();
        let l = part.cell_len[target] as usize;
        let members: Vec<u32> = part.lab[target..target + l].to_vec();
        let mut explored: Vec<u32> = Vec::with_capacity(l);
        for &v in &members {
            let redundant = if depth == 0 {
                explored.iter().any(|&u| self.orbit.find(u) == self.orbit.find(v))
            } else {
                self.generators.iter().any(|p| {
                    self.path.iter().all(|&q| p[q as usize] == q)
                        && explored.iter().any(|&u| p[u as usize] == v || p[v as usize] == u)
                })
            };
            if redundant {
                explored.push(v);
                continue;
            }
            let mut child = part.clone();
            let a = child.individualize(v);
            self.scratch.enqueue(a);
            self.scratch.enqueue(a + 1);
            refine(&self.neighbors, &mut self.scratch, &mut child);
            self.path.push(v);
            let flow = self.descend(&child);
            self.path.pop();
            explored.push(v);
            if let Flow::Backjump(d) = flow {
                if d < depth {
                    return Flow::Backjump(d);
                }
            }
        }
        Flow::Continue
    }

    fn leaf(&mut self, part: &Partition) -> Flow {
        let perm: Vec<u32> = part.lab.clone();
        if self.first_perm.is_empty() {
            self.best_bits = leaf_bits(self.g, &perm);
            self.first_perm = perm.clone();
            self.first_path = self.path.clone();
            self.best_perm = perm;
            self.best_path = self.path.clone();
            return Flow::Continue;
        }
        // Equal leaf bitstrings correspond exactly to an automorphism, so
        // test the composed permutations first and skip the bitstring work.
        let first_perm = std::mem::take(&mut self.first_perm);
        let hit_first = self.try_automorphism(&perm, &first_perm);
        self.first_perm = first_perm;
        if hit_first {
            return Flow::Backjump(divergence(&self.path, &self.first_path));
        }
        if self.best_perm != self.first_perm {
            let best_perm = std::mem::take(&mut self.best_perm);
            let hit_best = self.try_automorphism(&perm, &best_perm);
            self.best_perm = best_perm;
            if hit_best {
                return Flow::Backjump(divergence(&self.path, &self.best_path));
            }
        }
        // Not equivalent to either reference leaf, so the bitstring differs
        // from the incumbent at some position; build only up to it unless
        // this leaf wins.
        if let Some(bits) = leaf_bits_if_greater(self.g, &perm, &self.best_bits) {
            self.best_bits = bits;
            self.best_perm = perm;
            self.best_path = self.path.clone();
        }
        Flow::Continue
    }

    /// If position-wise composition of `perm` against reference `rp` is an
    /// automorphism, records it and merges its orbits.
    fn try_automorphism(&mut self, perm: &[u32], rp: &[u32]) -> bool {
        let n = self.g.n;
        let mut pos = vec![0u32; n];
        for (i, &v) in perm.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let map: Vec<u32> = (0..n).map(|v| rp[pos[v] as usize]).collect();
        let ok = (0..n).all(|u| {
            self.neighbors[u]
                .iter()
                .all(|&w| self.g.adj[map[u] as usize][map[w as usize] as usize])
        });
        if ok {
            for v in 0..n as u32 {
                self.orbit.union(v, map[v as usize]);
            }
            if self.generator_set.insert(map.clone()) {
                self.generators.push(map);
            }
        }
        ok
    }
}

/// First index at which two root-to-leaf paths part ways.
fn divergence(a: &[u32], b: &[u32]) -> usize {
    let d = a.iter().zip(b).position(|(x, y)| x != y);
    debug_assert!(d.is_some(), "distinct leaves share a full path");
    d.unwrap_or(0)
}

fn leaf_bits(g: &Graph, perm: &[u32]) -> Vec<bool> {
    let n = g.n;
    let mut bits = Vec::with_capacity(n * (n - 1) / 2);
    for j in 1..n {
        let row = &g.adj[perm[j] as usize];
        for &p in &perm[..j] {
            bits.push(row[p as usize]);
        }
    }
    bits
}

/// Builds the leaf bitstring only if it beats `best`, comparing as it goes
/// and bailing out at the first losing bit.
fn leaf_bits_if_greater(g: &Graph, perm: &[u32], best: &[bool]) -> Option<Vec<bool>> {
    let n = g.n;
    let mut bits = Vec::with_capacity(best.len());
    let mut won = false;
    for j in 1..n {
        let row = &g.adj[perm[j] as usize];
        for &p in &perm[..j] {
            let bit = row[p as usize];
            if !won {
                let reference = best[bits.len()];
                if bit != reference {
                    if !bit {
                        return None;
                    }
                    won = true;
                }
            }
            bits.push(bit);
        }
    }
    debug_assert!(won, "equal bitstrings must be caught as automorphisms");
    won.then_some(bits)
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}
