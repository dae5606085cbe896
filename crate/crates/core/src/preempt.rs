//! Arbitrary-preemption scheduling.
//!
//! For any `B` the problem is a linear program, built here in slot form or
//! interval form and exported as LP text for an external solver. For
//! `B = 2` an optimal schedule is read off a maximum triangle-free
//! 2-matching of the slot-pair graph that covers every job vertex.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matchcore::{
    hungarian_forest, is_triangle_cluster, max_matching, max_matching_covering,
    transfer_coverage, Graph, HungarianForest, Label, Matching, Node, VertexKind,
};
use crate::model::{
    validate_preemptive, Instance, PreemptiveAssignment, Region, Segment, TimedSchedule,
};
use crate::multiwin::solve_b2_lengths;
use crate::rational::{self, half, int, Rational};

// ---------------------------------------------------------------------------
// LP models

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpForm {
    /// `x_js`, `i_s` over unit slots.
    Slot,
    /// `x_ij`, `y_i` over the elementary intervals between window boundaries.
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// A maximization LP over non-negative variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpModel {
    pub form: LpForm,
    pub variables: Vec<String>,
    pub objective: Vec<(usize, Rational)>,
    /// Demand rows, then capacity rows, then pair rows.
    pub constraints: Vec<Constraint>,
    /// Slot form: `[s, s+1)` per slot. Interval form: the elementary intervals.
    pub intervals: Vec<(Rational, Rational)>,
}

/// Feasible time ranges of a job as half-open rational intervals.
fn job_ranges(inst: &Instance, j: usize) -> Vec<(Rational, Rational)> {
    match &inst.jobs()[j].region {
        Region::Windows(ws) => ws.iter().map(|w| (w.release, w.deadline)).collect(),
        Region::Slots(ss) => ss.iter().map(|&s| (int(s as i64), int(s as i64 + 1))).collect(),
    }
}

pub fn build_lp(inst: &Instance, form: LpForm) -> LpModel {
    // per job: (cell index, cell) pairs; cells are slots or intervals
    let (cells, feasible): (Vec<(Rational, Rational)>, Vec<Vec<usize>>) = match form {
        LpForm::Slot => {
            let universe = inst.slot_universe();
            let pos: BTreeMap<u32, usize> =
                universe.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let cells =
                universe.iter().map(|&s| (int(s as i64), int(s as i64 + 1))).collect();
            let feasible = inst
                .jobs()
                .iter()
                .map(|job| job.feasible_slots().iter().map(|s| pos[s]).collect())
                .collect();
            (cells, feasible)
        }
        LpForm::Interval => {
            let ranges: Vec<_> = (0..inst.len()).map(|j| job_ranges(inst, j)).collect();
            let bounds: BTreeSet<Rational> =
                ranges.iter().flatten().flat_map(|&(a, b)| [a, b]).collect();
            let bounds: Vec<Rational> = bounds.into_iter().collect();
            let cells: Vec<(Rational, Rational)> = bounds
                .windows(2)
                .map(|w| (w[0], w[1]))
                .filter(|&(a, b)| ranges.iter().flatten().any(|&(r, d)| r <= a && b <= d))
                .collect();
            let feasible = ranges
                .iter()
                .map(|rs| {
                    (0..cells.len())
                        .filter(|&k| rs.iter().any(|&(r, d)| r <= cells[k].0 && cells[k].1 <= d))
                        .collect()
                })
                .collect();
            (cells, feasible)
        }
    };

    let cell_name = |k: usize| match form {
        LpForm::Slot => format!("s{}", cells[k].0),
        LpForm::Interval => format!("I{}", k + 1),
    };
    let mut variables = Vec::new();
    let mut x_of: Vec<Vec<(usize, usize)>> = Vec::new();
    for (j, ks) in feasible.iter().enumerate() {
        let mut row = Vec::new();
        for &k in ks {
            row.push((k, variables.len()));
            variables.push(format!("x_j{j}_{}", cell_name(k)));
        }
        x_of.push(row);
    }
    let idle_var: Vec<usize> = (0..cells.len())
        .map(|k| {
            let prefix = if form == LpForm::Slot { "i" } else { "y" };
            variables.push(format!("{prefix}_{}", cell_name(k)));
            variables.len() - 1
        })
        .collect();

    let b = int(inst.b() as i64);
    let one = Rational::one();
    let mut constraints = Vec::new();
    for (j, row) in x_of.iter().enumerate() {
        constraints.push(Constraint {
            terms: row.iter().map(|&(_, v)| (v, one)).collect(),
            sense: Sense::Ge,
            rhs: int(inst.jobs()[j].length as i64),
        });
    }
    for k in 0..cells.len() {
        let mut terms: Vec<(usize, Rational)> = x_of
            .iter()
            .flat_map(|row| row.iter().filter(|&&(c, _)| c == k).map(|&(_, v)| (v, one)))
            .collect();
        terms.push((idle_var[k], b));
        let width = cells[k].1 - cells[k].0;
        constraints.push(Constraint { terms, sense: Sense::Le, rhs: b * width });
    }
    for row in &x_of {
        for &(k, v) in row {
            let width = cells[k].1 - cells[k].0;
            constraints.push(Constraint {
                terms: vec![(v, one), (idle_var[k], one)],
                sense: Sense::Le,
                rhs: width,
            });
        }
    }
    LpModel {
        form,
        variables,
        objective: idle_var.iter().map(|&v| (v, one)).collect(),
        constraints,
        intervals: cells,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LpNumbers {
    /// Terminating decimals; other values fall back to 17 significant digits.
    #[default]
    Decimal,
    /// `p/q` fractions.
    Fraction,
}

fn lp_number(r: &Rational, style: LpNumbers) -> String {
    match style {
        LpNumbers::Fraction => rational::format_rational(r),
        LpNumbers::Decimal => rational::to_decimal(r)
            .unwrap_or_else(|| format!("{:.17e}", rational::to_f64(r))),
    }
}

fn lp_terms(m: &LpModel, terms: &[(usize, Rational)], style: LpNumbers) -> String {
    if terms.is_empty() {
        return match m.variables.first() {
            Some(v) => format!("0 {v}"),
            None => "0".to_string(),
        };
    }
    let mut out = String::new();
    for (i, (v, c)) in terms.iter().enumerate() {
        let name = &m.variables[*v];
        let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", *c) };
        if i > 0 {
            out.push_str(&format!(" {sign} "));
        } else if sign == "-" {
            out.push_str("- ");
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{} {name}", lp_number(&mag, style)));
        }
    }
    out
}

/// LP text: objective, rows `c1..cm`, non-negativity bounds.
pub fn emit_lp_file(m: &LpModel, style: LpNumbers) -> String {
    let form = match m.form {
        LpForm::Slot => "slot",
        LpForm::Interval => "interval",
    };
    let mut out = format!("\\ active time, {form} form\n");
    out.push_str("Maximize\n");
    out.push_str(&format!(" obj: {}\n", lp_terms(m, &m.objective, style)));
    out.push_str("Subject To\n");
    for (i, c) in m.constraints.iter().enumerate() {
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
        };
        out.push_str(&format!(
            " c{}: {} {op} {}\n",
            i + 1,
            lp_terms(m, &c.terms, style),
            lp_number(&c.rhs, style)
        ));
    }
    out.push_str("Bounds\n");
    for v in &m.variables {
        out.push_str(&format!(" {v} >= 0\n"));
    }
    out.push_str("End\n");
    out
}

// ---------------------------------------------------------------------------
// 2-matchings

/// Edge weights in {0, 1/2, 1}, keyed by `(min, max)` vertex pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoMatching {
    weights: BTreeMap<(usize, usize), Rational>,
}

impl TwoMatching {
    pub fn set(&mut self, u: usize, v: usize, w: Rational) {
        let key = (u.min(v), u.max(v));
        if w.is_zero() {
            self.weights.remove(&key);
        } else {
            self.weights.insert(key, w);
        }
    }

    pub fn weight(&self, u: usize, v: usize) -> Rational {
        self.weights.get(&(u.min(v), u.max(v))).copied().unwrap_or_else(Rational::zero)
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.weights
    }

    pub fn size(&self) -> Rational {
        self.weights.values().fold(Rational::zero(), |a, b| a + b)
    }

    /// Total weight at each vertex of an `n`-vertex graph.
    pub fn loads(&self, n: usize) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); n];
        for (&(u, v), w) in &self.weights {
            load[u] += w;
            load[v] += w;
        }
        load
    }
}

/// Everything wrong with `tm` as a basic triangle-free 2-matching of `g`
/// covering `cover`.
pub fn tf2m_violations(g: &Graph, tm: &TwoMatching, cover: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    let n = g.n();
    for (&(u, v), w) in tm.weights() {
        if u == v || v >= n || !g.has_edge(u, v) {
            out.push(format!("({u},{v}) is not an edge"));
        } else if *w != half() && !w.is_one() {
            out.push(format!("({u},{v}) has weight {w}"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let load = tm.loads(n);
    for (v, l) in load.iter().enumerate() {
        if *l > Rational::one() {
            out.push(format!("vertex {v} carries {l}"));
        }
    }
    for &v in cover {
        if !load[v].is_one() {
            out.push(format!("cover vertex {v} carries {}", load[v]));
        }
    }
    // half edges: every touched vertex has half-degree 2, components odd cycles
    let mut half_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (&(u, v), w) in tm.weights() {
        if *w == half() {
            half_adj[u].push(v);
            half_adj[v].push(u);
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if half_adj[s].is_empty() || seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &x in &half_adj[comp[i]] {
                if !seen[x] {
                    seen[x] = true;
                    comp.push(x);
                }
            }
            i += 1;
        }
        if comp.iter().any(|&v| half_adj[v].len() != 2) {
            out.push(format!("half edges at {s} do not form a cycle"));
        } else if comp.len() % 2 == 0 {
            out.push(format!("half cycle through {s} is even"));
        } else if comp.len() == 3 {
            out.push(format!("half cycle through {s} is a triangle"));
        }
    }
    for a in 0..n {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > b) {
                if g.has_edge(a, c)
                    && [(a, b), (b, c), (a, c)].iter().all(|&(x, y)| tm.weight(x, y).is_positive())
                {
                    out.push(format!("triangle ({a},{b},{c}) is fully weighted"));
                }
            }
        }
    }
    out
}

/// An augmenting blossom rewritten as one odd alternating cycle through its
/// unmatched vertex plus matched edges on the remaining vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentingCycle {
    /// Cycle in traversal order; the last vertex is adjacent to the first.
    pub cycle: Vec<usize>,
    pub matched: Vec<(usize, usize)>,
}

fn check_cycle(
    g: &Graph,
    mate: &[Option<usize>],
    vertices: &[usize],
    path: Vec<usize>,
) -> Option<AugmentingCycle> {
    let len = path.len();
    if len < 5 || len % 2 == 0 {
        return None;
    }
    let distinct: BTreeSet<usize> = path.iter().copied().collect();
    if distinct.len() != len || !g.has_edge(path[0], path[len - 1]) {
        return None;
    }
    if mate[path[len - 1]].is_some() {
        return None;
    }
    for i in 0..len - 1 {
        let (a, b) = (path[i], path[i + 1]);
        let matched = mate[a] == Some(b);
        if !g.has_edge(a, b) || matched != (i % 2 == 0) {
            return None;
        }
    }
    let matched: Vec<(usize, usize)> = vertices
        .iter()
        .filter(|v| !distinct.contains(v))
        .filter_map(|&v| mate[v].filter(|&w| v < w).map(|w| (v, w)))
        .collect();
    if 2 * matched.len() + len != vertices.len()
        || matched.iter().any(|(_, w)| distinct.contains(w) || vertices.binary_search(w).is_err())
    {
        return None;
    }
    Some(AugmentingCycle { cycle: path, matched })
}

/// Splits the unmatched non-triangle-cluster top-level blossom `b` into an
/// augmenting cycle of length at least 5 and matched edges.
///
/// A sub-blossom with more than three children, or with a child entered and
/// left at different vertices, yields the cycle through all its children
/// once the base sits on one of its edges. Otherwise every sub-blossom is a
/// triangle and a chord of the cluster closes the cycle.
pub fn augblossom_to_cycle(
    g: &Graph,
    forest: &HungarianForest,
    b: usize,
    mate: &[Option<usize>],
) -> Result<AugmentingCycle> {
    let bl = forest
        .blossoms
        .get(b)
        .ok_or_else(|| Error::NonAugmentingBlossom(format!("no blossom {b}")))?;
    if bl.parent.is_some() {
        return Err(Error::NonAugmentingBlossom(format!("blossom {b} is nested")));
    }
    if mate[bl.base].is_some_and(|p| bl.vertices.binary_search(&p).is_err()) {
        return Err(Error::NonAugmentingBlossom(format!("blossom {b} is matched")));
    }
    if is_triangle_cluster(g, &bl.vertices) {
        return Err(Error::NonAugmentingBlossom(format!("blossom {b} is a triangle cluster")));
    }
    let vertices = bl.vertices.clone();

    for sb in forest.sub_blossoms(b) {
        let inner = &forest.blossoms[sb];
        let k = inner.children.len();
        let spread = k > 3 || (0..k).any(|i| inner.edges[(i + k - 1) % k].1 != inner.edges[i].0);
        if !spread {
            continue;
        }
        for i in 0..k {
            let (u0, v1) = inner.edges[i];
            let mut f = forest.clone();
            let mut mt = mate.to_vec();
            f.rotate_base(&mut mt, b, u0);
            let path = f.path_to_base(sb, v1);
            if let Some(c) = check_cycle(g, &mt, &vertices, path) {
                return Ok(c);
            }
        }
    }

    let structural: BTreeSet<(usize, usize)> = forest.structural_edges(b).into_iter().collect();
    for &(u, v) in g.edges() {
        if u == v
            || structural.contains(&(u, v))
            || vertices.binary_search(&u).is_err()
            || vertices.binary_search(&v).is_err()
        {
            continue;
        }
        for (base, far) in [(u, v), (v, u)] {
            let mut f = forest.clone();
            let mut mt = mate.to_vec();
            f.rotate_base(&mut mt, b, base);
            let path = f.path_to_base(b, far);
            if let Some(c) = check_cycle(g, &mt, &vertices, path) {
                return Ok(c);
            }
        }
    }
    Err(Error::NonAugmentingBlossom(format!("blossom {b} has no augmenting cycle")))
}

#[derive(Debug, Clone)]
pub struct Tf2mResult {
    pub two_matching: TwoMatching,
    /// The maximum matching that was reweighted.
    pub matching: Matching,
    /// Hungarian forest of the initial maximum matching.
    pub forest: HungarianForest,
    /// Vertex sets of the reweighted augmenting blossoms.
    pub augmenting: Vec<Vec<usize>>,
    pub cycles: Vec<AugmentingCycle>,
}

impl Tf2mResult {
    /// Number of augmenting blossoms reweighted.
    pub fn pi(&self) -> usize {
        self.augmenting.len()
    }

    pub fn size(&self) -> Rational {
        self.two_matching.size()
    }
}

/// Maximum triangle-free 2-matching of `g` giving every vertex of `cover`
/// full weight.
///
/// Pipeline: maximum matching `M0`, its Hungarian forest, the bipartite
/// graph `BG` of inner vertices against outer nodes, a maximum matching of
/// `BG` without non-triangle-cluster blossoms that matches every outer node
/// inside `cover`, a maximum matching of `BG` keeping that coverage, its
/// extension to `G`, and finally one augmenting cycle per unmatched
/// non-triangle-cluster blossom.
pub fn max_tf2m(g: &Graph, cover: &[usize]) -> Result<Tf2mResult> {
    let n = g.n();
    let mut in_cover = vec![false; n];
    for &v in cover {
        in_cover[v] = true;
    }
    let m0 = max_matching(g);
    let forest0 = hungarian_forest(g, &m0)?;
    let mut forest = forest0.clone();

    let inner = forest.inner_vertices();
    let outer = forest.outer_nodes();
    let ni = inner.len();
    let inner_pos: HashMap<usize, usize> = inner.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let outer_pos: HashMap<Node, usize> =
        outer.iter().enumerate().map(|(i, &x)| (x, ni + i)).collect();

    let mut bg = Graph::new(ni + outer.len());
    let mut rep: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for &(u, v) in g.edges() {
        for (a, c) in [(u, v), (v, u)] {
            if a != c && forest.label[a] == Label::Inner && forest.label[c] == Label::Outer {
                let key = (inner_pos[&a], outer_pos[&forest.top[c]]);
                if !bg.has_edge(key.0, key.1) {
                    bg.add_edge(key.0, key.1);
                    rep.insert(key, (a, c));
                }
            }
        }
    }

    let non_t: BTreeSet<usize> = outer
        .iter()
        .filter_map(|&x| match x {
            Node::Blossom(b) if !forest.is_t_blossom(g, b) => Some(b),
            _ => None,
        })
        .collect();
    let keep: Vec<usize> = (0..bg.n())
        .filter(|&i| i < ni || !matches!(outer[i - ni], Node::Blossom(b) if non_t.contains(&b)))
        .collect();
    let (sub, _) = bg.induced(&keep);
    let j0: Vec<usize> = (0..keep.len())
        .filter(|&i| keep[i] >= ni && forest.node_vertices(outer[keep[i] - ni]).iter().all(|&v| in_cover[v]))
        .collect();
    let m1_sub = max_matching_covering(&sub, &j0)?;
    let mut m1 = Matching::new(bg.n());
    for (a, c) in m1_sub.edges() {
        m1.join(keep[a], keep[c]);
    }
    let m2 = transfer_coverage(&bg, &m1, &max_matching(&bg))?;

    // extension: keep M0 on unreached vertices and inside blossoms
    let mut mate = m0.mates().to_vec();
    for &v in &inner {
        if let Some(x) = mate[v] {
            mate[x] = None;
            mate[v] = None;
        }
    }
    let mut matched_outer = vec![false; outer.len()];
    for (a, c) in m2.edges() {
        let (iv, ov) = rep[&(a, c)];
        if let Node::Blossom(b) = outer[c - ni] {
            forest.rotate_base(&mut mate, b, ov);
        }
        mate[iv] = Some(ov);
        mate[ov] = Some(iv);
        matched_outer[c - ni] = true;
    }
    let mut augmenting_ids = Vec::new();
    for (i, &node) in outer.iter().enumerate() {
        if matched_outer[i] {
            continue;
        }
        match node {
            Node::Blossom(b) if non_t.contains(&b) => augmenting_ids.push(b),
            Node::Blossom(b) => {
                if in_cover[forest.blossoms[b].base] {
                    let free = forest.blossoms[b].vertices.iter().copied().find(|&v| !in_cover[v]);
                    let Some(v) = free else {
                        return Err(Error::UncoverableCover);
                    };
                    forest.rotate_base(&mut mate, b, v);
                }
            }
            Node::Vertex(_) => {}
        }
    }
    let matching = Matching::from_mates(mate.clone())?;
    if matching.size() != m0.size() {
        return Err(Error::Invalid(format!(
            "extended matching has {} edges, expected {}",
            matching.size(),
            m0.size()
        )));
    }

    let mut tm = TwoMatching::default();
    for (u, v) in matching.edges() {
        tm.set(u, v, Rational::one());
    }
    let mut augmenting = Vec::new();
    let mut cycles = Vec::new();
    for b in augmenting_ids {
        let ac = augblossom_to_cycle(g, &forest, b, &mate)?;
        let vs = forest.blossoms[b].vertices.clone();
        for &v in &vs {
            if let Some(w) = mate[v] {
                tm.set(v, w, Rational::zero());
            }
        }
        for &(u, v) in &ac.matched {
            tm.set(u, v, Rational::one());
        }
        let k = ac.cycle.len();
        for i in 0..k {
            tm.set(ac.cycle[i], ac.cycle[(i + 1) % k], half());
        }
        augmenting.push(vs);
        cycles.push(ac);
    }
    let load = tm.loads(n);
    if cover.iter().any(|&v| !load[v].is_one()) {
        return Err(Error::UncoverableCover);
    }
    Ok(Tf2mResult { two_matching: tm, matching, forest: forest0, augmenting, cycles })
}

// ---------------------------------------------------------------------------
// B = 2 scheduling

/// Slot-pair graph. Slot `s` is the edge `s₁s₂`. In the unit form a job is
/// one vertex joined to `s₁, s₂` for each feasible `s`. In the expanded form
/// a job of length `ℓ` with feasible set `S` has one vertex `u_s` per
/// `s ∈ S`, joined to `s₁, s₂`, plus `|S| − ℓ` padding vertices joined to
/// every `u_s`.
#[derive(Debug, Clone)]
pub struct MatchGraph2 {
    pub graph: Graph,
    pub expanded: bool,
    /// `(s₁, s₂)` per slot.
    pub slots: BTreeMap<u32, (usize, usize)>,
    /// Vertices adjacent to slot vertices, per job.
    pub job_vertices: Vec<Vec<usize>>,
    pub padding: Vec<Vec<usize>>,
    owner: Vec<Option<usize>>,
    slot_of: Vec<Option<u32>>,
}

impl MatchGraph2 {
    /// Unit form for unit jobs, expanded form otherwise.
    pub fn build(inst: &Instance) -> Result<Self> {
        if inst.all_unit() {
            Ok(Self::unit(inst))
        } else {
            Self::expanded(inst)
        }
    }

    /// Unit form; job lengths are ignored.
    pub fn unit(inst: &Instance) -> Self {
        let mut g = Graph::with_kinds(vec![VertexKind::Job; inst.len()]);
        let mut owner: Vec<Option<usize>> = (0..inst.len()).map(Some).collect();
        let slots = Self::add_slots(&mut g, &mut owner, inst);
        for (j, job) in inst.jobs().iter().enumerate() {
            for s in job.feasible_slots() {
                let (a, b) = slots[&s];
                g.add_edge(j, a);
                g.add_edge(j, b);
            }
        }
        let job_vertices = (0..inst.len()).map(|j| vec![j]).collect();
        Self::finish(g, false, slots, job_vertices, vec![Vec::new(); inst.len()], owner)
    }

    pub fn expanded(inst: &Instance) -> Result<Self> {
        let mut g = Graph::new(0);
        let mut owner = Vec::new();
        let mut job_vertices = Vec::new();
        let mut padding = Vec::new();
        let mut per_job = Vec::new();
        for (j, job) in inst.jobs().iter().enumerate() {
            let fs = job.feasible_slots();
            let Some(pad) = fs.len().checked_sub(job.length as usize) else {
                return Err(Error::CompletionInfeasible(format!(
                    "job {} needs {} slots but has {}",
                    job.id,
                    job.length,
                    fs.len()
                )));
            };
            let us: Vec<usize> = fs.iter().map(|_| g.add_vertex(VertexKind::Job)).collect();
            let ps: Vec<usize> = (0..pad).map(|_| g.add_vertex(VertexKind::Aux)).collect();
            for &u in &us {
                for &p in &ps {
                    g.add_edge(u, p);
                }
            }
            owner.extend(std::iter::repeat(Some(j)).take(us.len() + ps.len()));
            per_job.push(fs);
            job_vertices.push(us);
            padding.push(ps);
        }
        let slots = Self::add_slots(&mut g, &mut owner, inst);
        for (j, fs) in per_job.iter().enumerate() {
            for (&s, &u) in fs.iter().zip(&job_vertices[j]) {
                let (a, b) = slots[&s];
                g.add_edge(u, a);
                g.add_edge(u, b);
            }
        }
        Ok(Self::finish(g, true, slots, job_vertices, padding, owner))
    }

    fn add_slots(
        g: &mut Graph,
        owner: &mut Vec<Option<usize>>,
        inst: &Instance,
    ) -> BTreeMap<u32, (usize, usize)> {
        let mut slots = BTreeMap::new();
        for s in inst.slot_universe() {
            let a = g.add_vertex(VertexKind::Slot);
            let b = g.add_vertex(VertexKind::Slot);
            g.add_edge(a, b);
            owner.extend([None, None]);
            slots.insert(s, (a, b));
        }
        slots
    }

    fn finish(
        graph: Graph,
        expanded: bool,
        slots: BTreeMap<u32, (usize, usize)>,
        job_vertices: Vec<Vec<usize>>,
        padding: Vec<Vec<usize>>,
        owner: Vec<Option<usize>>,
    ) -> Self {
        let mut slot_of = vec![None; graph.n()];
        for (&s, &(a, b)) in &slots {
            slot_of[a] = Some(s);
            slot_of[b] = Some(s);
        }
        MatchGraph2 { graph, expanded, slots, job_vertices, padding, owner, slot_of }
    }

    /// Job-side and padding vertices, ascending.
    pub fn cover(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.job_vertices.iter().chain(&self.padding).flatten().copied().collect();
        c.sort_unstable();
        c
    }

    pub fn slot_of(&self, v: usize) -> Option<u32> {
        self.slot_of[v]
    }

    pub fn job_of(&self, v: usize) -> Option<usize> {
        self.owner[v]
    }

    pub fn is_job_side(&self, v: usize) -> bool {
        self.graph.kind(v) == VertexKind::Job
    }

    /// `x_js` sums the weights of `js₁, js₂`; `i_s` is the weight of `s₁s₂`.
    pub fn to_assignment(&self, inst: &Instance, tm: &TwoMatching) -> PreemptiveAssignment {
        let mut pa = PreemptiveAssignment::default();
        for &s in self.slots.keys() {
            pa.idle.insert(s, Rational::zero());
        }
        for (&(u, v), w) in tm.weights() {
            match (self.slot_of[u], self.slot_of[v]) {
                (Some(s), Some(_)) => {
                    pa.idle.insert(s, *w);
                }
                (Some(s), None) | (None, Some(s)) => {
                    let j = self.owner[if self.slot_of[u].is_some() { v } else { u }]
                        .expect("job-side vertex");
                    *pa.x.entry((inst.jobs()[j].id.clone(), s)).or_insert_with(Rational::zero) += w;
                }
                (None, None) => {}
            }
        }
        pa
    }
}

#[derive(Debug, Clone)]
pub struct PreemptiveOpt {
    pub assignment: PreemptiveAssignment,
    pub active: Rational,
    pub graph: MatchGraph2,
    pub result: Tf2mResult,
}

/// Minimum active time with arbitrary preemption on two processors.
pub fn preemptive_opt_b2(inst: &Instance) -> Result<PreemptiveOpt> {
    if inst.b() != 2 {
        return Err(Error::Unsupported(format!("needs B = 2, got {}", inst.b())));
    }
    if !inst.is_integral() {
        return Err(Error::Unsupported("windows must have integer endpoints".into()));
    }
    let graph = MatchGraph2::build(inst)?;
    let cover = graph.cover();
    if max_matching_covering(&graph.graph, &cover).is_err() {
        return Err(Error::Infeasible("not every job can be completed".into()));
    }
    let result = max_tf2m(&graph.graph, &cover)?;
    let assignment = graph.to_assignment(inst, &result.two_matching);
    let idle: Rational = assignment.idle.values().sum();
    let active = int(graph.slots.len() as i64) - idle;
    Ok(PreemptiveOpt { assignment, active, graph, result })
}

/// Structural facts every run on a slot-pair graph satisfies: a blossom is
/// a triangle cluster exactly when it holds one job-side vertex; the two
/// vertices of a slot share their label and top node; each augmenting
/// blossom's slots carry at least 3/2 active time.
pub fn structure_violations(opt: &PreemptiveOpt) -> Vec<String> {
    let mg = &opt.graph;
    let f = &opt.result.forest;
    let mut out = Vec::new();
    for (b, bl) in f.blossoms.iter().enumerate() {
        let jobs = bl.vertices.iter().filter(|&&v| mg.is_job_side(v)).count();
        if is_triangle_cluster(&mg.graph, &bl.vertices) != (jobs == 1) {
            out.push(format!("blossom {b} has {jobs} job vertices"));
        }
    }
    for (&s, &(a, b)) in &mg.slots {
        let same = f.label[a] == f.label[b] && (f.label[a] != Label::Outer || f.top[a] == f.top[b]);
        if !same {
            out.push(format!("slot {s} vertices split: {:?} / {:?}", f.label[a], f.label[b]));
        }
    }
    for vs in &opt.result.augmenting {
        let active: Rational = mg
            .slots
            .iter()
            .filter(|(_, (a, b))| vs.binary_search(a).is_ok() && vs.binary_search(b).is_ok())
            .map(|(&s, _)| Rational::one() - opt.assignment.idle_at(s))
            .sum();
        if active < Rational::new(3, 2) {
            out.push(format!("augmenting blossom {vs:?} has active time {active}"));
        }
    }
    out
}

/// Packs each slot's work onto processors, jobs in id order, `1 − i_s` time
/// per processor.
pub fn assignment_to_timed(inst: &Instance, pa: &PreemptiveAssignment) -> Result<TimedSchedule> {
    let report = validate_preemptive(inst, pa);
    if !report.is_valid() {
        return Err(Error::InvalidAssignment(format!("{:?}", report.violations)));
    }
    let mut per_slot: BTreeMap<u32, Vec<(&str, Rational)>> = BTreeMap::new();
    for ((id, s), x) in &pa.x {
        if x.is_positive() {
            per_slot.entry(*s).or_default().push((id.as_str(), *x));
        }
    }
    let mut segments = Vec::new();
    for (s, jobs) in per_slot {
        let cap = Rational::one() - pa.idle_at(s);
        let base = int(s as i64);
        let (mut proc, mut used) = (1u32, Rational::zero());
        for (id, mut left) in jobs {
            while left.is_positive() {
                let take = left.min(cap - used);
                segments.push(Segment {
                    job: id.to_string(),
                    processor: proc,
                    start: base + used,
                    end: base + used + take,
                });
                used += take;
                left -= take;
                if used == cap {
                    proc += 1;
                    used = Rational::zero();
                }
            }
        }
    }
    Ok(TimedSchedule { segments })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub integral: Rational,
    pub preemptive: Rational,
    pub ratio: Rational,
    pub pi: usize,
}

/// Integral-preemption optimum against arbitrary-preemption optimum.
pub fn preemption_gap(inst: &Instance) -> Result<GapReport> {
    let integral = int(solve_b2_lengths(inst)?.active_time() as i64);
    let opt = preemptive_opt_b2(inst)?;
    let pi = opt.result.pi();
    let preemptive = opt.active;
    if integral - preemptive != int(pi as i64) * half() {
        return Err(Error::Invalid(format!(
            "integral {integral} and preemptive {preemptive} differ by other than {pi}/2"
        )));
    }
    let ratio = if preemptive.is_zero() { Rational::one() } else { integral / preemptive };
    if ratio > Rational::new(4, 3) {
        return Err(Error::Invalid(format!("ratio {ratio} exceeds 4/3")));
    }
    Ok(GapReport { integral, preemptive, ratio, pi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchcore::Matching;
    use crate::model::{validate_timed, Job};

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[test]
    fn k3_and_c5() {
        let r = max_tf2m(&cycle(3), &[]).unwrap();
        assert_eq!(r.size(), int(1));
        let r = max_tf2m(&cycle(5), &[]).unwrap();
        assert_eq!(r.size(), Rational::new(5, 2));
        assert!(r.two_matching.weights().values().all(|w| *w == half()));
        assert_eq!(r.pi(), 1);
    }

    #[test]
    fn c5_blossom_is_its_cycle() {
        let g = cycle(5);
        let m = Matching::from_edges(5, &[(1, 2), (3, 4)]).unwrap();
        let f = hungarian_forest(&g, &m).unwrap();
        let b = f.top_blossoms()[0];
        let ac = augblossom_to_cycle(&g, &f, b, m.mates()).unwrap();
        assert_eq!(ac.cycle.len(), 5);
        assert!(ac.matched.is_empty());
    }

    #[test]
    fn triangle_cluster_rejected() {
        let g = cycle(3);
        let m = Matching::from_edges(3, &[(1, 2)]).unwrap();
        let f = hungarian_forest(&g, &m).unwrap();
        let b = f.top_blossoms()[0];
        assert!(matches!(
            augblossom_to_cycle(&g, &f, b, m.mates()),
            Err(Error::NonAugmentingBlossom(_))
        ));
    }

    #[test]
    fn three_triangles_with_chord() {
        let mut g = Graph::new(7);
        for (a, b, c) in [(0, 1, 2), (2, 3, 4), (4, 5, 6)] {
            g.add_edge(a, b);
            g.add_edge(b, c);
            g.add_edge(a, c);
        }
        g.add_edge(1, 3);
        let m = Matching::from_edges(7, &[(1, 2), (3, 4), (5, 6)]).unwrap();
        let f = hungarian_forest(&g, &m).unwrap();
        let b = f.top_blossoms()[0];
        assert_eq!(f.blossoms[b].vertices.len(), 7);
        let ac = augblossom_to_cycle(&g, &f, b, m.mates()).unwrap();
        assert_eq!((ac.cycle.len(), ac.matched.len()), (5, 1));
    }

    fn three_jobs() -> Instance {
        Instance::unit_slots(2, &[&[0, 1][..]; 3]).unwrap()
    }

    #[test]
    fn three_jobs_two_slots() {
        let opt = preemptive_opt_b2(&three_jobs()).unwrap();
        assert_eq!(opt.active, Rational::new(3, 2));
        assert_eq!(opt.result.size() - int(3), half());
        assert!(structure_violations(&opt).is_empty());
        let gap = preemption_gap(&three_jobs()).unwrap();
        assert_eq!(
            (gap.integral, gap.preemptive, gap.ratio),
            (int(2), Rational::new(3, 2), Rational::new(4, 3))
        );
    }

    #[test]
    fn figure_example_idles_half_in_first_slot() {
        let inst = Instance::unit_slots(2, &[&[0, 1], &[0, 1], &[1]]).unwrap();
        let opt = preemptive_opt_b2(&inst).unwrap();
        assert_eq!(opt.active, Rational::new(3, 2));
        assert_eq!(opt.assignment.idle_at(0), half());
        assert_eq!(opt.assignment.idle_at(1), int(0));
        let ts = assignment_to_timed(&inst, &opt.assignment).unwrap();
        assert!(validate_timed(&inst, &opt.assignment, &ts).is_valid());
    }

    #[test]
    fn two_jobs_one_slot() {
        let inst = Instance::unit_slots(2, &[&[0], &[0]]).unwrap();
        let opt = preemptive_opt_b2(&inst).unwrap();
        assert_eq!(opt.active, int(1));
        let gap = preemption_gap(&inst).unwrap();
        assert_eq!((gap.integral, gap.preemptive, gap.ratio), (int(1), int(1), int(1)));
    }

    #[test]
    fn packing_single_job() {
        let inst = Instance::new(1, vec![Job::slots("a", 1, vec![0])]).unwrap();
        let mut pa = PreemptiveAssignment::default();
        pa.x.insert(("a".into(), 0), int(1));
        pa.idle.insert(0, int(0));
        let ts = assignment_to_timed(&inst, &pa).unwrap();
        assert_eq!(ts.segments.len(), 1);
        let s = &ts.segments[0];
        assert_eq!((s.processor, s.start, s.end), (1, int(0), int(1)));
    }

    #[test]
    fn packing_three_halves() {
        let inst = Instance::unit_slots(2, &[&[0][..]; 3]).unwrap();
        let mut pa = PreemptiveAssignment::default();
        for j in inst.jobs() {
            pa.x.insert((j.id.clone(), 0), half());
        }
        pa.idle.insert(0, Rational::new(1, 4));
        let ts = assignment_to_timed(&inst, &pa);
        // demand 1 per job is not met by halves
        assert!(ts.is_err());
        let inst = Instance::new(2, inst.jobs().iter().map(|j| Job::slots(j.id.clone(), 1, vec![0, 1])).collect()).unwrap();
        for j in inst.jobs() {
            pa.x.insert((j.id.clone(), 1), half());
        }
        pa.idle.insert(1, Rational::new(1, 4));
        let ts = assignment_to_timed(&inst, &pa).unwrap();
        assert!(validate_timed(&inst, &pa, &ts).is_valid());
        let p1: Vec<_> = ts.segments.iter().filter(|s| s.processor == 1 && s.start < int(1)).collect();
        assert_eq!(p1.len(), 2);
        assert_eq!(p1[1].end, Rational::new(3, 4));
    }

    #[test]
    fn lp_shapes() {
        let one = Instance::unit_slots(1, &[&[0]]).unwrap();
        let m = build_lp(&one, LpForm::Slot);
        assert_eq!(m.variables, vec!["x_j0_s0", "i_s0"]);
        assert_eq!(m.constraints.len(), 3);
        let m = build_lp(&three_jobs(), LpForm::Slot);
        assert_eq!(m.variables.len(), 8);
        assert_eq!(m.constraints.len(), 3 + 2 + 6);
        let w = Instance::unit_windows(1, &[(0, 3)]).unwrap();
        let m = build_lp(&w, LpForm::Interval);
        assert_eq!(m.intervals, vec![(int(0), int(3))]);
        assert_eq!(m.constraints[1].rhs, int(3));
    }
}
