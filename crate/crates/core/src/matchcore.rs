//! Matching engine for general graphs.
//!
//! Two blossom searches live here. [`max_matching`] uses the compact
//! base-array formulation and is the workhorse. [`hungarian_forest`] keeps
//! every blossom explicitly (children, connecting edges, base) so that
//! alternating paths inside a blossom can be produced and a blossom's base
//! can be moved to any of its vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Job,
    Slot,
    Aux,
}

/// Undirected graph, simple apart from explicitly added loops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    kinds: Vec<VertexKind>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph::with_kinds(vec![VertexKind::Aux; n])
    }

    pub fn with_kinds(kinds: Vec<VertexKind>) -> Self {
        let n = kinds.len();
        Graph { kinds, adj: vec![Vec::new(); n], ..Default::default() }
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> usize {
        self.kinds.push(kind);
        self.adj.push(Vec::new());
        self.kinds.len() - 1
    }

    /// Adds `uv` unless present; returns its edge id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        assert!(u != v, "use add_loop for loops");
        let key = (u.min(v), u.max(v));
        if let Some(&e) = self.index.get(&key) {
            return e;
        }
        let e = self.edges.len();
        self.edges.push(key);
        self.index.insert(key, e);
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.adj[a].binary_search(&b).unwrap_err();
            self.adj[a].insert(pos, b);
        }
        e
    }

    pub fn add_loop(&mut self, v: usize) -> usize {
        if let Some(&e) = self.index.get(&(v, v)) {
            return e;
        }
        let e = self.edges.len();
        self.edges.push((v, v));
        self.index.insert((v, v), e);
        e
    }

    pub fn n(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    /// Edges as `(min, max)` pairs; loops are `(v, v)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Non-loop neighbours in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Subgraph induced by `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut h = Graph::with_kinds(keep.iter().map(|&v| self.kinds[v]).collect());
        for &(u, v) in &self.edges {
            if let (Some(&a), Some(&b)) = (pos.get(&u), pos.get(&v)) {
                if a == b {
                    h.add_loop(a);
                } else {
                    h.add_edge(a, b);
                }
            }
        }
        (h, keep.to_vec())
    }

    /// DIMACS-like edge list, 1-based: `p <n> <m>` then `e u v` lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p {} {}\n", self.n(), self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Graph> {
        let bad = |l: &str| Error::Parse(format!("bad edge-list line {l:?}"));
        let mut g: Option<Graph> = None;
        for line in text.lines() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                [] | ["c", ..] => {}
                ["p", n, _m] | ["p", _, n, _m] => {
                    g = Some(Graph::new(n.parse().map_err(|_| bad(line))?));
                }
                ["e", u, v] => {
                    let g = g.as_mut().ok_or_else(|| bad(line))?;
                    let u: usize = u.parse().map_err(|_| bad(line))?;
                    let v: usize = v.parse().map_err(|_| bad(line))?;
                    if u == 0 || v == 0 || u > g.n() || v > g.n() {
                        return Err(bad(line));
                    }
                    if u == v {
                        g.add_loop(u - 1);
                    } else {
                        g.add_edge(u - 1, v - 1);
                    }
                }
                _ => return Err(bad(line)),
            }
        }
        g.ok_or_else(|| Error::Parse("missing p line".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn new(n: usize) -> Self {
        Matching { mate: vec![None; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::new(n);
        for &(u, v) in edges {
            if u == v || m.mate[u].is_some() || m.mate[v].is_some() {
                return Err(Error::InvalidAssignment(format!("edge ({u},{v}) breaks the matching")));
            }
            m.join(u, v);
        }
        Ok(m)
    }

    /// From a mate array; fails unless the array is symmetric.
    pub fn from_mates(mate: Vec<Option<usize>>) -> Result<Self> {
        for (u, m) in mate.iter().enumerate() {
            if let Some(v) = *m {
                if v == u || mate.get(v).copied().flatten() != Some(u) {
                    return Err(Error::InvalidAssignment(format!("mate of {u} is not mutual")));
                }
            }
        }
        Ok(Matching { mate })
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    pub fn mates(&self) -> &[Option<usize>] {
        &self.mate
    }

    pub fn join(&mut self, u: usize, v: usize) {
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
    }

    pub fn covers(&self, v: usize) -> bool {
        self.mate[v].is_some()
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    /// Matched edges as sorted `(min, max)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.mate.len())
            .filter_map(|u| self.mate[u].filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        (0..self.mate.len()).all(|u| match self.mate[u] {
            None => true,
            Some(v) => self.mate[v] == Some(u) && g.has_edge(u, v),
        })
    }
}

// ---------------------------------------------------------------------------
// Cardinality matching (base-array blossom search)

fn lca(mate: &[Option<usize>], base: &[usize], parent: &[Option<usize>], a: usize, b: usize) -> usize {
    let mut seen = vec![false; mate.len()];
    let mut a = a;
    loop {
        a = base[a];
        seen[a] = true;
        match mate[a] {
            None => break,
            Some(m) => a = parent[m].expect("matched outer vertex has a tree parent"),
        }
    }
    let mut b = b;
    loop {
        b = base[b];
        if seen[b] {
            return b;
        }
        b = parent[mate[b].expect("walks toward the root")].expect("tree parent");
    }
}

fn mark_path(
    mate: &[Option<usize>],
    base: &[usize],
    parent: &mut [Option<usize>],
    in_blossom: &mut [bool],
    mut v: usize,
    b: usize,
    mut child: usize,
) {
    while base[v] != b {
        let m = mate[v].expect("path vertices are matched");
        in_blossom[base[v]] = true;
        in_blossom[base[m]] = true;
        parent[v] = Some(child);
        child = m;
        v = parent[m].expect("tree parent");
    }
}

/// Searches for an augmenting path from the free vertex `root` and applies
/// it. Returns whether the matching grew.
fn augment_from(g: &Graph, mate: &mut [Option<usize>], root: usize) -> bool {
    let n = g.n();
    let mut used = vec![false; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut queue = VecDeque::new();
    used[root] = true;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        for &to in g.neighbors(v) {
            if base[v] == base[to] || mate[v] == Some(to) {
                continue;
            }
            let to_outer = to == root || mate[to].is_some_and(|m| parent[m].is_some());
            if to_outer {
                let cur = lca(mate, &base, &parent, v, to);
                let mut in_blossom = vec![false; n];
                mark_path(mate, &base, &mut parent, &mut in_blossom, v, cur, to);
                mark_path(mate, &base, &mut parent, &mut in_blossom, to, cur, v);
                for i in 0..n {
                    if in_blossom[base[i]] {
                        base[i] = cur;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to].is_none() {
                parent[to] = Some(v);
                match mate[to] {
                    None => {
                        let mut u = Some(to);
                        while let Some(x) = u {
                            let px = parent[x].expect("augmenting path");
                            let next = mate[px];
                            mate[x] = Some(px);
                            mate[px] = Some(x);
                            u = next;
                        }
                        return true;
                    }
                    Some(m) => {
                        used[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
    }
    false
}

/// Grows `m` to a maximum matching. Augmenting paths never uncover a
/// vertex, so every vertex covered by `m` stays covered.
pub fn augment_to_maximum(g: &Graph, m: &mut Matching) {
    for v in 0..g.n() {
        if m.mate[v].is_none() && !g.neighbors(v).is_empty() {
            augment_from(g, &mut m.mate, v);
        }
    }
}

/// Maximum cardinality matching. Loops are ignored.
pub fn max_matching(g: &Graph) -> Matching {
    let mut m = Matching::new(g.n());
    // cheap greedy start, then augment
    for v in 0..g.n() {
        if m.mate[v].is_none() {
            if let Some(&u) = g.neighbors(v).iter().find(|&&u| m.mate[u].is_none()) {
                m.join(u, v);
            }
        }
    }
    augment_to_maximum(g, &mut m);
    m
}

// ---------------------------------------------------------------------------
// Hungarian forest with explicit blossoms

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Vertex(usize),
    Blossom(usize),
}

/// An odd cycle of sub-nodes. `edges[i]` joins `children[i]` (first
/// endpoint) to `children[(i + 1) % k]` (second endpoint); edges at odd
/// positions are matched, and `children[0]` holds the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blossom {
    pub children: Vec<Node>,
    pub edges: Vec<(usize, usize)>,
    pub base: usize,
    pub vertices: Vec<usize>,
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Outer,
    Inner,
    Unreached,
}

#[derive(Debug, Clone)]
pub struct HungarianForest {
    pub label: Vec<Label>,
    pub blossoms: Vec<Blossom>,
    /// Top-level node holding each vertex.
    pub top: Vec<Node>,
    /// Root vertex of the tree each labelled vertex belongs to.
    pub root: Vec<Option<usize>>,
    /// For inner vertices: the outer vertex whose edge labelled it.
    pub labeled_by: Vec<Option<usize>>,
}

impl HungarianForest {
    pub fn n(&self) -> usize {
        self.label.len()
    }

    pub fn outer_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.label[v] == Label::Outer).collect()
    }

    pub fn inner_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.label[v] == Label::Inner).collect()
    }

    pub fn unreached(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.label[v] == Label::Unreached).collect()
    }

    /// Distinct top-level outer nodes, ordered by their smallest vertex.
    pub fn outer_nodes(&self) -> Vec<Node> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.outer_vertices() {
            if seen.insert(self.top[v]) {
                out.push(self.top[v]);
            }
        }
        out
    }

    /// Top-level blossoms, ordered by their smallest vertex.
    pub fn top_blossoms(&self) -> Vec<usize> {
        self.outer_nodes()
            .into_iter()
            .filter_map(|n| match n {
                Node::Blossom(b) => Some(b),
                Node::Vertex(_) => None,
            })
            .collect()
    }

    pub fn node_vertices(&self, node: Node) -> Vec<usize> {
        match node {
            Node::Vertex(v) => vec![v],
            Node::Blossom(b) => self.blossoms[b].vertices.clone(),
        }
    }

    pub fn node_base(&self, node: Node) -> usize {
        match node {
            Node::Vertex(v) => v,
            Node::Blossom(b) => self.blossoms[b].base,
        }
    }

    /// All structural edges of a blossom, over every nesting level.
    pub fn structural_edges(&self, b: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![b];
        while let Some(c) = stack.pop() {
            out.extend(self.blossoms[c].edges.iter().map(|&(u, v)| (u.min(v), u.max(v))));
            for ch in &self.blossoms[c].children {
                if let Node::Blossom(x) = ch {
                    stack.push(*x);
                }
            }
        }
        out.sort();
        out
    }

    /// Blossom `b` and all blossoms nested in it, outermost first.
    pub fn sub_blossoms(&self, b: usize) -> Vec<usize> {
        let mut out = vec![b];
        let mut i = 0;
        while i < out.len() {
            for ch in &self.blossoms[out[i]].children {
                if let Node::Blossom(x) = ch {
                    out.push(*x);
                }
            }
            i += 1;
        }
        out
    }

    fn child_index(&self, b: usize, v: usize) -> usize {
        self.blossoms[b]
            .children
            .iter()
            .position(|&ch| match ch {
                Node::Vertex(x) => x == v,
                Node::Blossom(c) => self.blossoms[c].vertices.binary_search(&v).is_ok(),
            })
            .expect("vertex lies in the blossom")
    }

    fn node_path(&self, node: Node, v: usize) -> Vec<usize> {
        match node {
            Node::Vertex(x) => {
                debug_assert_eq!(x, v);
                vec![v]
            }
            Node::Blossom(c) => self.path_to_base(c, v),
        }
    }

    /// Even-length alternating path inside blossom `b` from `v` to the base,
    /// starting with a matched edge unless `v` is the base.
    pub fn path_to_base(&self, b: usize, v: usize) -> Vec<usize> {
        let bl = &self.blossoms[b];
        let k = bl.children.len();
        let i = self.child_index(b, v);
        let mut path = self.node_path(bl.children[i], v);
        if i == 0 {
            return path;
        }
        if i % 2 == 1 {
            let mut j = i;
            loop {
                let (_, y) = bl.edges[j];
                let exit = bl.edges[j + 1].0;
                let mut seg = self.node_path(bl.children[j + 1], exit);
                seg.reverse();
                debug_assert_eq!(seg[0], y);
                path.extend(seg);
                let entry = bl.edges[j + 1].1;
                let next = (j + 2) % k;
                path.extend(self.node_path(bl.children[next], entry));
                if next == 0 {
                    break;
                }
                j = next;
            }
        } else {
            let mut j = i;
            loop {
                let x = bl.edges[j - 1].0;
                let exit = bl.edges[j - 2].1;
                let mut seg = self.node_path(bl.children[j - 1], exit);
                seg.reverse();
                debug_assert_eq!(seg[0], x);
                path.extend(seg);
                let entry = bl.edges[j - 2].0;
                path.extend(self.node_path(bl.children[j - 2], entry));
                if j == 2 {
                    break;
                }
                j -= 2;
            }
        }
        path
    }

    fn rotate_node(&mut self, mate: &mut [Option<usize>], node: Node, v: usize) {
        if let Node::Blossom(c) = node {
            self.rotate_inner(mate, c, v);
        }
    }

    fn rotate_inner(&mut self, mate: &mut [Option<usize>], b: usize, v: usize) {
        let i = self.child_index(b, v);
        let k = self.blossoms[b].children.len();
        let child = self.blossoms[b].children[i];
        self.rotate_node(mate, child, v);
        if i != 0 {
            let flips: Vec<usize> = if i % 2 == 0 {
                (0..i).step_by(2).collect()
            } else {
                (i + 1..k).step_by(2).collect()
            };
            for e in flips {
                let (x, y) = self.blossoms[b].edges[e];
                mate[x] = Some(y);
                mate[y] = Some(x);
                let (cx, cy) = (self.blossoms[b].children[e], self.blossoms[b].children[(e + 1) % k]);
                self.rotate_node(mate, cx, x);
                self.rotate_node(mate, cy, y);
            }
            let bl = &mut self.blossoms[b];
            bl.children.rotate_left(i);
            bl.edges.rotate_left(i);
        }
        self.blossoms[b].base = v;
    }

    /// Rearranges the matching inside blossom `b` so that `v` becomes its
    /// base, leaving `v` unmatched. An external partner of the old base is
    /// released.
    pub fn rotate_base(&mut self, mate: &mut [Option<usize>], b: usize, v: usize) {
        let old = self.blossoms[b].base;
        if let Some(p) = mate[old] {
            if self.blossoms[b].vertices.binary_search(&p).is_err() {
                mate[p] = None;
                mate[old] = None;
            }
        }
        self.rotate_inner(mate, b, v);
        mate[v] = None;
    }

    /// Even alternating path from outer vertex `v` to the root of its tree.
    pub fn path_to_root(&self, mate: &[Option<usize>], v: usize) -> Vec<usize> {
        assert_eq!(self.label[v], Label::Outer);
        let mut path = Vec::new();
        let mut cur = v;
        loop {
            match self.top[cur] {
                Node::Vertex(x) => path.push(x),
                Node::Blossom(b) => path.extend(self.path_to_base(b, cur)),
            }
            let base = *path.last().unwrap();
            match mate[base] {
                None => return path,
                Some(t) => {
                    path.push(t);
                    cur = self.labeled_by[t].expect("inner vertex has a labelling edge");
                }
            }
        }
    }

    /// Edges breaking property (*): outer to non-inner outside a blossom.
    pub fn property_violations(&self, g: &Graph, m: &Matching) -> Vec<String> {
        let mut out = Vec::new();
        for &(u, v) in g.edges() {
            if u == v {
                continue;
            }
            for (a, b) in [(u, v), (v, u)] {
                if self.label[a] == Label::Outer
                    && self.label[b] != Label::Inner
                    && self.top[a] != self.top[b]
                {
                    out.push(format!("edge ({a},{b}) leaves outer node {:?}", self.top[a]));
                }
            }
        }
        for v in 0..self.n() {
            if !m.covers(v) {
                let ok = self.label[v] == Label::Outer && self.node_base(self.top[v]) == v;
                if !ok {
                    out.push(format!("unmatched vertex {v} is not a root or blossom base"));
                }
            }
        }
        out
    }

    /// Whether the subgraph of `g` induced by the vertices of blossom `b` is
    /// a triangle cluster.
    pub fn is_t_blossom(&self, g: &Graph, b: usize) -> bool {
        is_triangle_cluster(g, &self.blossoms[b].vertices)
    }
}

/// Whether `g[vs]` is connected with every biconnected component a triangle.
pub fn is_triangle_cluster(g: &Graph, vs: &[usize]) -> bool {
    let (h, _) = g.induced(vs);
    let n = h.n();
    if n == 0 {
        return false;
    }
    let m = h.edges().iter().filter(|(u, v)| u != v).count();
    if n % 2 == 0 || m != 3 * (n - 1) / 2 {
        return false;
    }
    // Tarjan biconnected components with an edge stack
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut ok = true;
    fn dfs(
        h: &Graph,
        u: usize,
        parent: Option<usize>,
        disc: &mut [usize],
        low: &mut [usize],
        timer: &mut usize,
        stack: &mut Vec<(usize, usize)>,
        ok: &mut bool,
    ) {
        disc[u] = *timer;
        low[u] = *timer;
        *timer += 1;
        for &w in h.neighbors(u) {
            if Some(w) == parent {
                continue;
            }
            if disc[w] == usize::MAX {
                stack.push((u, w));
                dfs(h, w, Some(u), disc, low, timer, stack, ok);
                low[u] = low[u].min(low[w]);
                if low[w] >= disc[u] {
                    let mut comp_edges = 0;
                    let mut comp_vertices = BTreeSet::new();
                    while let Some((a, b)) = stack.pop() {
                        comp_edges += 1;
                        comp_vertices.insert(a);
                        comp_vertices.insert(b);
                        if (a, b) == (u, w) {
                            break;
                        }
                    }
                    if comp_edges != 3 || comp_vertices.len() != 3 {
                        *ok = false;
                    }
                }
            } else if disc[w] < disc[u] {
                stack.push((u, w));
                low[u] = low[u].min(disc[w]);
            }
        }
    }
    dfs(&h, 0, None, &mut disc, &mut low, &mut timer, &mut stack, &mut ok);
    ok && disc.iter().all(|&d| d != usize::MAX)
}

struct Grower<'a> {
    g: &'a Graph,
    mate: &'a [Option<usize>],
    f: HungarianForest,
    node_label: HashMap<Node, Label>,
    queue: VecDeque<usize>,
}

impl<'a> Grower<'a> {
    fn label_of(&self, node: Node) -> Label {
        self.node_label.get(&node).copied().unwrap_or(Label::Unreached)
    }

    fn set_outer(&mut self, v: usize, root: usize) {
        self.node_label.insert(Node::Vertex(v), Label::Outer);
        self.f.root[v] = Some(root);
        self.queue.push_back(v);
    }

    /// The edge from `node` toward its tree parent, as (inside, outside).
    fn up_edge(&self, node: Node) -> (usize, usize) {
        match node {
            Node::Vertex(t) if self.label_of(node) == Label::Inner => {
                (t, self.f.labeled_by[t].expect("inner vertex labelled"))
            }
            _ => {
                let b = self.f.node_base(node);
                (b, self.mate[b].expect("non-root outer node is matched"))
            }
        }
    }

    /// Outer ancestors of an outer node, itself first, paired with the
    /// inner vertex between consecutive entries.
    fn chain(&self, start: Node) -> Vec<Node> {
        let mut nodes = vec![start];
        let mut cur = start;
        loop {
            let b = self.f.node_base(cur);
            let Some(t) = self.mate[b] else { return nodes };
            let s = self.f.labeled_by[t].expect("inner vertex labelled");
            nodes.push(Node::Vertex(t));
            cur = self.f.top[s];
            nodes.push(cur);
        }
    }

    fn make_blossom(&mut self, v: usize, w: usize) {
        let (bv, bw) = (self.f.top[v], self.f.top[w]);
        let a_chain = self.chain(bv);
        let c_full = self.chain(bw);
        let on_a: HashMap<Node, usize> = a_chain.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let (cut_c, lca_pos) = c_full
            .iter()
            .enumerate()
            .find_map(|(j, n)| on_a.get(n).map(|&i| (j, i)))
            .expect("same tree");
        let a: Vec<Node> = a_chain[..=lca_pos].to_vec();
        let c: Vec<Node> = c_full[..cut_c].to_vec();
        let p = a.len() - 1;
        let mut children = Vec::new();
        let mut edges = Vec::new();
        for i in 0..=p {
            children.push(a[p - i]);
            if i < p {
                let (x, y) = self.up_edge(a[p - i - 1]);
                edges.push((y, x));
            }
        }
        edges.push((v, w));
        for (j, &node) in c.iter().enumerate() {
            children.push(node);
            edges.push(self.up_edge(c[j]));
        }
        let id = self.f.blossoms.len();
        let mut vertices = Vec::new();
        let root = self.f.root[self.f.node_base(a[p])].expect("labelled");
        let mut newly_outer = Vec::new();
        for &ch in &children {
            match ch {
                Node::Vertex(x) => {
                    if self.label_of(ch) == Label::Inner {
                        newly_outer.push(x);
                    }
                    vertices.push(x);
                }
                Node::Blossom(c) => {
                    self.f.blossoms[c].parent = Some(id);
                    vertices.extend(self.f.blossoms[c].vertices.iter().copied());
                }
            }
        }
        vertices.sort_unstable();
        let base = self.f.node_base(a[p]);
        for &x in &vertices {
            self.f.top[x] = Node::Blossom(id);
        }
        self.f.blossoms.push(Blossom { children, edges, base, vertices, parent: None });
        self.node_label.insert(Node::Blossom(id), Label::Outer);
        for x in newly_outer {
            self.f.root[x] = Some(root);
            self.queue.push_back(x);
        }
    }

    fn grow(mut self, roots: &[usize]) -> Result<HungarianForest> {
        for &r in roots {
            debug_assert!(self.mate[r].is_none());
            self.set_outer(r, r);
        }
        while let Some(v) = self.queue.pop_front() {
            for &w in self.g.neighbors(v) {
                let (bv, bw) = (self.f.top[v], self.f.top[w]);
                if bv == bw || self.mate[v] == Some(w) {
                    continue;
                }
                match self.label_of(bw) {
                    Label::Unreached => {
                        let Some(m) = self.mate[w] else {
                            return Err(Error::NotMaximum(v, w));
                        };
                        let root = self.f.root[v].expect("scanned vertices are labelled");
                        self.node_label.insert(Node::Vertex(w), Label::Inner);
                        self.f.labeled_by[w] = Some(v);
                        self.f.root[w] = Some(root);
                        self.set_outer(m, root);
                    }
                    Label::Inner => {}
                    Label::Outer => {
                        if self.f.root[v] != self.f.root[w] {
                            return Err(Error::NotMaximum(v, w));
                        }
                        self.make_blossom(v, w);
                    }
                }
            }
        }
        for x in 0..self.g.n() {
            self.f.label[x] = self.label_of(self.f.top[x]);
            if self.f.label[x] == Label::Unreached {
                self.f.root[x] = None;
            }
        }
        Ok(self.f)
    }
}

fn grow_forest(g: &Graph, mate: &[Option<usize>], roots: &[usize]) -> Result<HungarianForest> {
    let n = g.n();
    let f = HungarianForest {
        label: vec![Label::Unreached; n],
        blossoms: Vec::new(),
        top: (0..n).map(Node::Vertex).collect(),
        root: vec![None; n],
        labeled_by: vec![None; n],
    };
    Grower { g, mate, f, node_label: HashMap::new(), queue: VecDeque::new() }.grow(roots)
}

/// Alternating forest grown from every unmatched vertex of a maximum
/// matching until it stops growing. Fails if `m` is not maximum.
pub fn hungarian_forest(g: &Graph, m: &Matching) -> Result<HungarianForest> {
    let roots: Vec<usize> = (0..g.n()).filter(|&v| !m.covers(v)).collect();
    grow_forest(g, m.mates(), &roots)
}

/// Maximum matching covering every vertex of `required`.
///
/// Starts from a maximum matching; each uncovered required vertex `r` takes
/// over coverage from some covered vertex outside `required` along an even
/// alternating path from `r`, which keeps the matching maximum.
pub fn max_matching_covering(g: &Graph, required: &[usize]) -> Result<Matching> {
    let mut m = max_matching(g);
    let mut is_req = vec![false; g.n()];
    for &r in required {
        is_req[r] = true;
    }
    for &r in required {
        if m.covers(r) {
            continue;
        }
        let forest = grow_forest(g, m.mates(), &[r])?;
        let donor = (0..g.n()).find(|&y| y != r && !is_req[y] && forest.label[y] == Label::Outer);
        let Some(y) = donor else {
            return Err(Error::UncoverableCover);
        };
        let path = forest.path_to_root(m.mates(), y);
        m.mate[y] = None;
        for pair in path[1..].chunks(2) {
            m.join(pair[0], pair[1]);
        }
    }
    Ok(m)
}

/// Moves coverage of every `m1`-covered vertex onto a matching of the same
/// size as `m2`, by swapping along the even components of `m1 ∪ m2`.
/// `m2` must be maximum.
pub fn transfer_coverage(g: &Graph, m1: &Matching, m2: &Matching) -> Result<Matching> {
    let n = g.n();
    let mut out = m2.clone();
    let mut done = vec![false; n];
    for start in 0..n {
        if done[start] || !m1.covers(start) || m2.covers(start) {
            continue;
        }
        // walk the alternating path start -m1- a -m2- b -m1- ...
        let mut path = vec![start];
        let mut cur = start;
        let mut use_m1 = true;
        loop {
            let next = if use_m1 { m1.mate(cur) } else { m2.mate(cur) };
            match next {
                Some(x) => {
                    path.push(x);
                    cur = x;
                    use_m1 = !use_m1;
                }
                None => break,
            }
        }
        for &v in &path {
            done[v] = true;
        }
        if path.len() % 2 == 0 {
            // odd number of edges, begins and ends with m1: augmenting for m2
            return Err(Error::NotMaximum(path[0], *path.last().unwrap()));
        }
        for &v in &path {
            out.mate[v] = None;
        }
        for pair in path.chunks(2) {
            if pair.len() == 2 {
                out.join(pair[0], pair[1]);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Degree-constrained subgraphs

/// A graph with a degree bound per vertex; loops count twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBoundedGraph {
    pub graph: Graph,
    pub bound: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcsResult {
    /// Edge ids of the subgraph, ascending.
    pub edges: Vec<usize>,
    /// Non-loop edges with a job endpoint.
    pub iota: usize,
    /// Loops in the subgraph.
    pub lambda: usize,
}

impl DcsResult {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self, g: &DegreeBoundedGraph) -> Vec<u32> {
        edge_degrees(&g.graph, &self.edges)
    }
}

fn edge_degrees(g: &Graph, edges: &[usize]) -> Vec<u32> {
    let mut deg = vec![0u32; g.n()];
    for &e in edges {
        let (u, v) = g.edges()[e];
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// Maximum degree-constrained subgraph via per-edge gadgets and a maximum
/// matching. With a seed, the search starts from the seed's matching, so no
/// vertex ends with a smaller degree than the seed gave it.
pub fn max_dcs(g: &DegreeBoundedGraph, seed: Option<&[usize]>) -> Result<DcsResult> {
    let base = &g.graph;
    let mut h = Graph::new(0);
    let copies: Vec<Vec<usize>> = (0..base.n())
        .map(|v| (0..g.bound[v]).map(|_| h.add_vertex(base.kind(v))).collect())
        .collect();
    // gadget ends per edge id; None when a loop cannot be used at all
    let mut gadget: Vec<Option<(usize, usize)>> = Vec::with_capacity(base.edges().len());
    for &(u, v) in base.edges() {
        if u == v {
            if copies[u].len() < 2 {
                gadget.push(None);
                continue;
            }
            let (e1, e2) = (h.add_vertex(VertexKind::Aux), h.add_vertex(VertexKind::Aux));
            h.add_edge(e1, e2);
            h.add_edge(e1, copies[u][0]);
            h.add_edge(e2, copies[u][1]);
            gadget.push(Some((e1, e2)));
        } else {
            let (eu, ev) = (h.add_vertex(VertexKind::Aux), h.add_vertex(VertexKind::Aux));
            h.add_edge(eu, ev);
            for &c in &copies[u] {
                h.add_edge(eu, c);
            }
            for &c in &copies[v] {
                h.add_edge(ev, c);
            }
            gadget.push(Some((eu, ev)));
        }
    }

    let mut m = Matching::new(h.n());
    let mut in_seed = vec![false; base.edges().len()];
    if let Some(seed) = seed {
        for &e in seed {
            if e >= base.edges().len() || in_seed[e] {
                return Err(Error::InvalidSeed(format!("edge {e} is unknown or repeated")));
            }
            in_seed[e] = true;
        }
        let deg = edge_degrees(base, seed);
        if let Some(v) = (0..base.n()).find(|&v| deg[v] > g.bound[v]) {
            return Err(Error::InvalidSeed(format!("vertex {v} exceeds its degree bound")));
        }
        let mut next = vec![0usize; base.n()];
        // loops first: they need the first two copies
        let mut order: Vec<usize> = seed.to_vec();
        order.sort_by_key(|&e| (base.edges()[e].0 != base.edges()[e].1, e));
        for e in order {
            let (u, v) = base.edges()[e];
            let (a, b) = gadget[e].ok_or_else(|| Error::InvalidSeed(format!("loop {e} is unusable")))?;
            if u == v {
                if next[u] != 0 {
                    return Err(Error::InvalidSeed(format!("loop at {u} lacks free copies")));
                }
                m.join(a, copies[u][0]);
                m.join(b, copies[u][1]);
                next[u] = 2;
            } else {
                m.join(a, copies[u][next[u]]);
                m.join(b, copies[v][next[v]]);
                next[u] += 1;
                next[v] += 1;
            }
        }
    }
    for (e, gd) in gadget.iter().enumerate() {
        if let (Some((a, b)), false) = (gd, in_seed[e]) {
            m.join(*a, *b);
        }
    }
    augment_to_maximum(&h, &mut m);

    let mut edges = Vec::new();
    let (mut iota, mut lambda) = (0, 0);
    for (e, gd) in gadget.iter().enumerate() {
        let Some((a, b)) = gd else { continue };
        if m.mate(*a) != Some(*b) && m.covers(*a) && m.covers(*b) {
            edges.push(e);
            let (u, v) = base.edges()[e];
            if u == v {
                lambda += 1;
            } else if base.kind(u) == VertexKind::Job || base.kind(v) == VertexKind::Job {
                iota += 1;
            }
        }
    }
    Ok(DcsResult { edges, iota, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    fn petersen() -> Graph {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching(&cycle(3)).size(), 1);
        let mut p = Graph::new(4);
        p.add_edge(0, 1);
        p.add_edge(1, 2);
        p.add_edge(2, 3);
        assert_eq!(max_matching(&p).size(), 2);
        let pg = petersen();
        assert_eq!(pg.edges().len(), 15);
        let m = max_matching(&pg);
        assert_eq!(m.size(), 5);
        assert!(m.is_valid_in(&pg));
    }

    #[test]
    fn covering_examples() {
        let mut star = Graph::new(3);
        star.add_edge(0, 1);
        star.add_edge(0, 2);
        let m = max_matching_covering(&star, &[1]).unwrap();
        assert_eq!(m.edges(), vec![(0, 1)]);
        let m = max_matching_covering(&star, &[2]).unwrap();
        assert_eq!(m.edges(), vec![(0, 2)]);
        assert_eq!(max_matching_covering(&star, &[1, 2]), Err(Error::UncoverableCover));
        let mut p = Graph::new(4);
        p.add_edge(0, 1);
        p.add_edge(1, 2);
        p.add_edge(2, 3);
        assert_eq!(max_matching_covering(&p, &[0, 3]).unwrap().edges(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn forest_on_perfect_matching_is_empty() {
        let g = cycle(4);
        let m = max_matching(&g);
        let f = hungarian_forest(&g, &m).unwrap();
        assert!(f.outer_vertices().is_empty());
        assert!(f.blossoms.is_empty());
        assert_eq!(f.unreached().len(), 4);
    }

    #[test]
    fn forest_on_triangle() {
        let g = cycle(3);
        let m = Matching::from_edges(3, &[(0, 1)]).unwrap();
        let f = hungarian_forest(&g, &m).unwrap();
        assert_eq!(f.blossoms.len(), 1);
        assert_eq!(f.blossoms[0].vertices, vec![0, 1, 2]);
        assert_eq!(f.blossoms[0].base, 2);
        assert!(f.is_t_blossom(&g, 0));
        assert!(f.property_violations(&g, &m).is_empty());
    }

    #[test]
    fn forest_on_pentagon() {
        let g = cycle(5);
        let m = Matching::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let f = hungarian_forest(&g, &m).unwrap();
        assert_eq!(f.top_blossoms().len(), 1);
        let b = f.top_blossoms()[0];
        assert_eq!(f.blossoms[b].vertices, vec![0, 1, 2, 3, 4]);
        assert!(!f.is_t_blossom(&g, b));
    }

    #[test]
    fn forest_rejects_non_maximum() {
        let mut p = Graph::new(4);
        p.add_edge(0, 1);
        p.add_edge(1, 2);
        p.add_edge(2, 3);
        let m = Matching::from_edges(4, &[(1, 2)]).unwrap();
        assert!(matches!(hungarian_forest(&p, &m), Err(Error::NotMaximum(..))));
    }

    #[test]
    fn rotation_moves_base() {
        let g = cycle(5);
        let mut m = Matching::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let mut f = hungarian_forest(&g, &m).unwrap();
        let b = f.top_blossoms()[0];
        for v in [0, 1, 2, 3, 4, 2, 0] {
            f.rotate_base(&mut m.mate, b, v);
            assert!(!m.covers(v));
            assert_eq!(m.size(), 2);
            assert!(m.is_valid_in(&g));
            let p = f.path_to_base(b, (v + 3) % 5);
            assert_eq!(*p.last().unwrap(), v);
            assert_eq!(p.len() % 2, 1);
        }
    }

    #[test]
    fn triangle_clusters() {
        let g = cycle(3);
        assert!(is_triangle_cluster(&g, &[0, 1, 2]));
        assert!(!is_triangle_cluster(&cycle(5), &[0, 1, 2, 3, 4]));
        let mut bow = Graph::new(5);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)] {
            bow.add_edge(u, v);
        }
        assert!(is_triangle_cluster(&bow, &[0, 1, 2, 3, 4]));
        bow.add_edge(0, 3);
        assert!(!is_triangle_cluster(&bow, &[0, 1, 2, 3, 4]));
        assert!(is_triangle_cluster(&Graph::new(1), &[0]));
    }

    #[test]
    fn dcs_examples() {
        let mut star = Graph::new(4);
        for leaf in 1..4 {
            star.add_edge(0, leaf);
        }
        let g = DegreeBoundedGraph { graph: star, bound: vec![2, 1, 1, 1] };
        assert_eq!(max_dcs(&g, None).unwrap().size(), 2);

        let mut a = Graph::with_kinds(vec![VertexKind::Job, VertexKind::Slot]);
        a.add_edge(0, 1);
        a.add_loop(1);
        let g = DegreeBoundedGraph { graph: a, bound: vec![1, 2] };
        let d = max_dcs(&g, None).unwrap();
        assert_eq!((d.edges.clone(), d.iota, d.lambda), (vec![0], 1, 0));

        let mut lone = Graph::with_kinds(vec![VertexKind::Slot]);
        lone.add_loop(0);
        let g = DegreeBoundedGraph { graph: lone, bound: vec![2] };
        let d = max_dcs(&g, None).unwrap();
        assert_eq!((d.edges.clone(), d.lambda), (vec![0], 1));
    }

    #[test]
    fn dcs_seed_validation() {
        let mut star = Graph::new(3);
        star.add_edge(0, 1);
        star.add_edge(0, 2);
        let g = DegreeBoundedGraph { graph: star, bound: vec![1, 1, 1] };
        assert!(matches!(max_dcs(&g, Some(&[0, 1])), Err(Error::InvalidSeed(_))));
        let d = max_dcs(&g, Some(&[1])).unwrap();
        assert_eq!(d.edges, vec![1]);
    }

    #[test]
    fn dimacs_round_trip() {
        let mut g = petersen();
        g.add_loop(3);
        let text = g.to_dimacs();
        assert!(text.starts_with("p 10 16\n"));
        let h = Graph::from_dimacs(&text).unwrap();
        assert_eq!(h.edges(), g.edges());
        assert!(Graph::from_dimacs("e 1 2\n").is_err());
    }
}
