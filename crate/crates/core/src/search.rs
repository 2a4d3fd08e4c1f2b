//! Exhaustive searches: signings of a rectagraph with `A² = rI`, and weighing
//! matrices with intersection numbers 0 and 2.
//!
//! On a regular rectagraph, `A² = rI` holds exactly when every quadrangle has
//! sign product -1, because each non-adjacent pair at distance 2 sees two
//! 2-paths whose signs must cancel. The signature search therefore assigns
//! edge signs in row-major order, checks every quadrangle as soon as its last
//! edge is set, and forces the last edge of a quadrangle with three signs
//! known. Rows of the normalized labelling are completed in order; the number
//! of partial assignments completing each row is recorded in the proof log.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::graph::{GraphError, SignedGraph, UnderlyingGraph};
use crate::io::write_graph6;
use crate::linalg::IntMatrix;
use crate::switching::{class_invariants, scheme_labelling, switching_isomorphic_capped, ClassInvariants};
use crate::weighing::{
    equivalent, intersection_numbers, is_proper, scheme_two_prefix, verify_weighing, WeighingMatrix,
};

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Maximum number of branching decisions; `None` is unlimited.
    pub budget: Option<u64>,
    pub parallel: bool,
    /// Base vertex of the normalized labelling.
    pub base: usize,
    /// Explicit branching order for the free edges, as input-labelled edges.
    /// Edges missing from the list keep their row-major position after the listed ones.
    pub free_edge_order: Option<Vec<(usize, usize)>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: None, parallel: true, base: 0, free_edge_order: None }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// One representative per switching class, labelled like the input graph.
    pub solutions: Vec<SignedGraph>,
    /// Solutions before deduplication (one per labelled switching class).
    pub raw_solutions: u64,
    pub nodes_explored: u64,
    pub exhausted: bool,
    pub log: ProofLog,
}

/// Replayable summary of a signature search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLog {
    pub graph_sha256: String,
    pub n: usize,
    pub r: usize,
    pub base: usize,
    /// Normalized vertex `i` is input vertex `order[i]`.
    pub order: Vec<usize>,
    pub fixed_edges: usize,
    pub free_edges: usize,
    /// Partial assignments that completed each row of the normalized labelling.
    pub row_candidates: Vec<u64>,
    pub raw_solutions: u64,
    pub solutions: usize,
    pub nodes: u64,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofLogError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("replay mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn graph_sha256(g: &UnderlyingGraph) -> String {
    hex::encode(Sha256::digest(write_graph6(g).as_bytes()))
}

impl ProofLog {
    pub fn to_text(&self) -> String {
        let mut s = String::from("proof-log v1\n");
        let _ = writeln!(s, "graph {}", self.graph_sha256);
        let _ = writeln!(s, "n {} r {} base {}", self.n, self.r, self.base);
        let order: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "order {}", order.join(" "));
        let _ = writeln!(s, "fixed {} free {}", self.fixed_edges, self.free_edges);
        for (row, c) in self.row_candidates.iter().enumerate() {
            let _ = writeln!(s, "depth {row} candidates {c}");
        }
        let _ = writeln!(s, "raw-solutions {}", self.raw_solutions);
        let _ = writeln!(s, "solutions {} nodes {} exhausted {}", self.solutions, self.nodes, self.exhausted);
        s
    }

    pub fn parse(text: &str) -> Result<ProofLog, ProofLogError> {
        let lines: Vec<(usize, &str)> =
            text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
        let err = |line: usize, msg: &str| ProofLogError::Parse { line, msg: msg.to_string() };
        let mut it = lines.into_iter();
        let mut next = |what: &str| it.next().ok_or_else(|| err(0, &format!("missing {what} line")));

        let (l, header) = next("header")?;
        if header != "proof-log v1" {
            return Err(err(l, "expected `proof-log v1`"));
        }
        let (l, g) = next("graph")?;
        let graph_sha256 = g.strip_prefix("graph ").ok_or_else(|| err(l, "expected `graph <hash>`"))?.to_string();
        let (l, dims) = next("size")?;
        let v = keyed_numbers(dims, &["n", "r", "base"]).ok_or_else(|| err(l, "expected `n _ r _ base _`"))?;
        let (n, r, base) = (v[0] as usize, v[1] as usize, v[2] as usize);
        let (l, ord) = next("order")?;
        let order: Vec<usize> = ord
            .strip_prefix("order")
            .ok_or_else(|| err(l, "expected `order ...`"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(l, "bad vertex in order")))
            .collect::<Result<_, _>>()?;
        let (l, fx) = next("fixed")?;
        let v = keyed_numbers(fx, &["fixed", "free"]).ok_or_else(|| err(l, "expected `fixed _ free _`"))?;
        let (fixed_edges, free_edges) = (v[0] as usize, v[1] as usize);
        let mut row_candidates = Vec::new();
        let mut raw_solutions = None;
        for (l, line) in it.by_ref() {
            if let Some(v) = keyed_numbers(line, &["depth", "candidates"]) {
                if v[0] as usize != row_candidates.len() {
                    return Err(err(l, "depth lines out of order"));
                }
                row_candidates.push(v[1]);
            } else if let Some(v) = keyed_numbers(line, &["raw-solutions"]) {
                raw_solutions = Some(v[0]);
            } else if let Some(rest) = line.strip_prefix("solutions ") {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 5 || toks[1] != "nodes" || toks[3] != "exhausted" {
                    return Err(err(l, "expected `solutions _ nodes _ exhausted _`"));
                }
                let solutions = toks[0].parse().map_err(|_| err(l, "bad solution count"))?;
                let nodes = toks[2].parse().map_err(|_| err(l, "bad node count"))?;
                let exhausted = toks[4].parse().map_err(|_| err(l, "bad exhausted flag"))?;
                return Ok(ProofLog {
                    graph_sha256,
                    n,
                    r,
                    base,
                    order,
                    fixed_edges,
                    free_edges,
                    row_candidates,
                    raw_solutions: raw_solutions.ok_or_else(|| err(l, "missing raw-solutions line"))?,
                    solutions,
                    nodes,
                    exhausted,
                });
            } else {
                return Err(err(l, "unrecognized line"));
            }
        }
        Err(err(0, "missing footer"))
    }

    /// Reruns the search on `g` and checks that every recorded quantity matches.
    pub fn replay(&self, g: &UnderlyingGraph) -> Result<(), ProofLogError> {
        let hash = graph_sha256(g);
        if hash != self.graph_sha256 {
            return Err(ProofLogError::Mismatch(format!("graph hash {hash} differs")));
        }
        let opts = SearchOptions { base: self.base, parallel: true, ..SearchOptions::default() };
        let out = search_signatures_with(g, &opts)?;
        let fresh = out.log;
        if fresh != *self {
            return Err(ProofLogError::Mismatch(first_log_difference(self, &fresh)));
        }
        Ok(())
    }
}

fn first_log_difference(a: &ProofLog, b: &ProofLog) -> String {
    if a.order != b.order {
        return "vertex order".into();
    }
    if (a.fixed_edges, a.free_edges) != (b.fixed_edges, b.free_edges) {
        return "fixed/free edge counts".into();
    }
    if let Some(row) = (0..a.row_candidates.len().max(b.row_candidates.len()))
        .find(|&i| a.row_candidates.get(i) != b.row_candidates.get(i))
    {
        return format!("candidate count at depth {row}");
    }
    format!(
        "footer: recorded ({}, {}, {}), replayed ({}, {}, {})",
        a.solutions, a.nodes, a.exhausted, b.solutions, b.nodes, b.exhausted
    )
}

fn keyed_numbers(line: &str, keys: &[&str]) -> Option<Vec<u64>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 * keys.len() {
        return None;
    }
    let mut out = Vec::with_capacity(keys.len());
    for (i, k) in keys.iter().enumerate() {
        if toks[2 * i] != *k {
            return None;
        }
        out.push(toks[2 * i + 1].parse().ok()?);
    }
    Some(out)
}

/// Static data of a signature search in the normalized labelling.
struct Problem {
    n: usize,
    /// Edges `(u, v)`, `u < v`, row-major in normalized labels.
    edges: Vec<(usize, usize)>,
    /// Each quadrangle as four edge indices.
    quads: Vec<[usize; 4]>,
    quads_of: Vec<Vec<usize>>,
    /// Tree edges fixed positive.
    fixed: Vec<usize>,
    /// Branching order over edge indices.
    branch_order: Vec<usize>,
}

impl Problem {
    fn new(h: &UnderlyingGraph, preferred: Option<Vec<(usize, usize)>>) -> Problem {
        let n = h.n();
        let edges = h.edges();
        let mut id = vec![usize::MAX; n * n];
        for (k, &(u, v)) in edges.iter().enumerate() {
            id[u * n + v] = k;
            id[v * n + u] = k;
        }
        let mut seen = std::collections::HashSet::new();
        let mut quads = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if h.has_edge(u, v) {
                    continue;
                }
                let mut common = h.row(u).clone();
                common.intersect_with(h.row(v));
                let c: Vec<usize> = common.ones().collect();
                for i in 0..c.len() {
                    for j in i + 1..c.len() {
                        let (a, b) = (c[i], c[j]);
                        let mut q = [id[u * n + a], id[a * n + v], id[u * n + b], id[b * n + v]];
                        q.sort_unstable();
                        if seen.insert(q) {
                            quads.push(q);
                        }
                    }
                }
            }
        }
        let mut quads_of = vec![Vec::new(); edges.len()];
        for (qi, q) in quads.iter().enumerate() {
            for &e in q {
                quads_of[e].push(qi);
            }
        }
        let fixed: Vec<usize> = (1..n)
            .map(|v| {
                let u = (0..v).find(|&u| h.has_edge(u, v)).expect("connected, earlier neighbour exists");
                id[u * n + v]
            })
            .collect();
        let branch_order = match preferred {
            None => (0..edges.len()).collect(),
            Some(list) => {
                let mut order: Vec<usize> = Vec::with_capacity(edges.len());
                let mut taken = vec![false; edges.len()];
                for (u, v) in list {
                    let e = id[u * n + v];
                    if e != usize::MAX && !taken[e] {
                        taken[e] = true;
                        order.push(e);
                    }
                }
                order.extend((0..edges.len()).filter(|&e| !taken[e]));
                order
            }
        };
        Problem { n, edges, quads, quads_of, fixed, branch_order }
    }
}

#[derive(Clone)]
struct State<'p> {
    p: &'p Problem,
    val: Vec<i8>,
    trail: Vec<usize>,
    row_open: Vec<u32>,
    quad_open: Vec<u8>,
    quad_prod: Vec<i8>,
    /// Number of leading rows with every edge assigned.
    rows_done: usize,
}

impl<'p> State<'p> {
    fn new(p: &'p Problem) -> Self {
        let mut row_open = vec![0u32; p.n];
        for &(u, v) in &p.edges {
            row_open[u] += 1;
            row_open[v] += 1;
        }
        State {
            p,
            val: vec![0; p.edges.len()],
            trail: Vec::new(),
            row_open,
            quad_open: vec![4; p.quads.len()],
            quad_prod: vec![1; p.quads.len()],
            rows_done: 0,
        }
    }

    /// Assigns `e = s` and everything it forces. On conflict the state is
    /// left partially updated; callers undo to their trail mark.
    fn propagate(&mut self, e: usize, s: i8) -> bool {
        let mut stack = vec![(e, s)];
        while let Some((e, s)) = stack.pop() {
            if self.val[e] != 0 {
                if self.val[e] != s {
                    return false;
                }
                continue;
            }
            self.val[e] = s;
            self.trail.push(e);
            let (u, v) = self.p.edges[e];
            self.row_open[u] -= 1;
            self.row_open[v] -= 1;
            for &q in &self.p.quads_of[e] {
                self.quad_open[q] -= 1;
                self.quad_prod[q] *= s;
                match self.quad_open[q] {
                    0 if self.quad_prod[q] != -1 => return false,
                    1 => {
                        let f = *self.p.quads[q].iter().find(|&&f| self.val[f] == 0).expect("one open edge");
                        stack.push((f, -self.quad_prod[q]));
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("above mark");
            let s = self.val[e];
            self.val[e] = 0;
            let (u, v) = self.p.edges[e];
            self.row_open[u] += 1;
            self.row_open[v] += 1;
            for &q in &self.p.quads_of[e] {
                self.quad_open[q] += 1;
                self.quad_prod[q] *= s;
            }
        }
    }

    fn advance_rows(&mut self, counts: Option<&mut [u64]>) {
        let n = self.p.n;
        let start = self.rows_done;
        while self.rows_done < n && self.row_open[self.rows_done] == 0 {
            self.rows_done += 1;
        }
        if let Some(c) = counts {
            for row in start..self.rows_done {
                c[row] += 1;
            }
        }
    }

    fn to_graph(&self) -> SignedGraph {
        let edges: Vec<(usize, usize, i8)> =
            self.p.edges.iter().zip(&self.val).map(|(&(u, v), &s)| (u, v, s)).collect();
        SignedGraph::from_edges(self.p.n, &edges).expect("edges of a simple graph")
    }
}

/// Mutable bookkeeping of one DFS task.
struct Task {
    nodes: u64,
    budget: Option<u64>,
    aborted: bool,
    counts: Vec<u64>,
    solutions: Vec<SignedGraph>,
    /// When set, stop at the first node completing this row and record the decisions.
    split_row: Option<usize>,
    frontier: Vec<Vec<(usize, i8)>>,
    path: Vec<(usize, i8)>,
}

impl Task {
    fn new(n: usize, budget: Option<u64>, split_row: Option<usize>) -> Self {
        Task {
            nodes: 0,
            budget,
            aborted: false,
            counts: vec![0; n],
            solutions: Vec::new(),
            split_row,
            frontier: Vec::new(),
            path: Vec::new(),
        }
    }
}

fn dfs(state: &mut State<'_>, task: &mut Task, mut pos: usize) {
    if let Some(row) = task.split_row {
        if state.rows_done > row {
            task.frontier.push(task.path.clone());
            return;
        }
    }
    let order = &state.p.branch_order;
    while pos < order.len() && state.val[order[pos]] != 0 {
        pos += 1;
    }
    if pos == order.len() {
        task.solutions.push(state.to_graph());
        return;
    }
    let e = order[pos];
    for s in [1i8, -1] {
        if task.budget.is_some_and(|b| task.nodes >= b) {
            task.aborted = true;
            return;
        }
        task.nodes += 1;
        let mark = state.trail.len();
        let rows_before = state.rows_done;
        if state.propagate(e, s) {
            state.advance_rows(Some(&mut task.counts));
            task.path.push((e, s));
            dfs(state, task, pos + 1);
            task.path.pop();
        }
        state.undo(mark);
        state.rows_done = rows_before;
        if task.aborted {
            return;
        }
    }
}

/// All signings of `g` with `A² = rI`, up to switching isomorphism.
pub fn search_signatures(g: &UnderlyingGraph, budget: Option<u64>) -> Result<SearchOutcome, GraphError> {
    search_signatures_with(g, &SearchOptions { budget, ..SearchOptions::default() })
}

pub fn search_signatures_with(g: &UnderlyingGraph, opts: &SearchOptions) -> Result<SearchOutcome, GraphError> {
    let lab = scheme_labelling(g, opts.base)?;
    let n = g.n();
    let mut inv = vec![0usize; n];
    for (i, &v) in lab.order.iter().enumerate() {
        inv[v] = i;
    }
    let h = g.permuted(&lab.order);
    let preferred = opts.free_edge_order.as_ref().map(|list| {
        list.iter()
            .map(|&(u, v)| {
                let (a, b) = (inv[u], inv[v]);
                (a.min(b), a.max(b))
            })
            .collect()
    });
    let problem = Problem::new(&h, preferred);

    let mut root = State::new(&problem);
    let mut counts_root = vec![0u64; n];
    let mut consistent = true;
    for &e in &problem.fixed {
        if !root.propagate(e, 1) {
            consistent = false;
            break;
        }
    }
    let fixed_edges = root.trail.len();
    if consistent {
        root.advance_rows(Some(&mut counts_root));
    }

    let mut nodes = 0u64;
    let mut aborted = false;
    let mut raw: Vec<SignedGraph> = Vec::new();
    let mut counts = counts_root;
    if consistent {
        // Split below the first row that still has an open edge.
        let split_row = root.rows_done;
        let mut head = Task::new(n, opts.budget, Some(split_row));
        let mut st = root.clone();
        dfs(&mut st, &mut head, 0);
        nodes += head.nodes;
        aborted |= head.aborted;
        add_counts(&mut counts, &head.counts);
        raw.extend(head.solutions);

        let tasks = head.frontier;
        let per_task = opts.budget.map(|b| (b.saturating_sub(nodes)) / (tasks.len().max(1) as u64));
        let run = |decisions: &Vec<(usize, i8)>| {
            let mut st = root.clone();
            for &(e, s) in decisions {
                let ok = st.propagate(e, s);
                debug_assert!(ok, "frontier decisions replay consistently");
            }
            st.advance_rows(None);
            let mut t = Task::new(n, per_task, None);
            dfs(&mut st, &mut t, 0);
            t
        };
        let results: Vec<Task> = if opts.parallel {
            tasks.par_iter().map(run).collect()
        } else {
            tasks.iter().map(run).collect()
        };
        for t in results {
            nodes += t.nodes;
            aborted |= t.aborted;
            add_counts(&mut counts, &t.counts);
            raw.extend(t.solutions);
        }
    }

    let raw_count = raw.len() as u64;
    let mut back: Vec<SignedGraph> = Vec::with_capacity(raw.len());
    for s in raw {
        debug_assert_eq!({ let a = s.adjacency(); a.mul(&a).as_scalar() }, Some(lab.r as i64));
        back.push(s.permuted(&inv));
    }
    let solutions = dedupe_switching(back);
    let r = lab.r;
    let log = ProofLog {
        graph_sha256: graph_sha256(g),
        n,
        r,
        base: opts.base,
        order: lab.order.clone(),
        fixed_edges,
        free_edges: problem.edges.len() - fixed_edges,
        row_candidates: counts,
        raw_solutions: raw_count,
        solutions: solutions.len(),
        nodes,
        exhausted: !aborted,
    };
    Ok(SearchOutcome { solutions, raw_solutions: raw_count, nodes_explored: nodes, exhausted: !aborted, log })
}

fn add_counts(into: &mut [u64], from: &[u64]) {
    for (a, b) in into.iter_mut().zip(from) {
        *a += b;
    }
}

/// Keeps the first graph of every switching isomorphism class.
pub fn dedupe_switching(graphs: Vec<SignedGraph>) -> Vec<SignedGraph> {
    let mut buckets: HashMap<ClassInvariants, Vec<usize>> = HashMap::new();
    let mut reps: Vec<SignedGraph> = Vec::new();
    for g in graphs {
        let inv = class_invariants(&g);
        let bucket = buckets.entry(inv).or_default();
        let known = bucket.iter().any(|&i| {
            switching_isomorphic_capped(&reps[i], &g, usize::MAX).expect("no cap").is_some()
        });
        if !known {
            bucket.push(reps.len());
            reps.push(g);
        }
    }
    reps
}

/// Runs the full search and returns its proof log. A log with zero solutions
/// and `exhausted true` certifies that no signing with `A² = rI` exists.
pub fn verify_nonexistence(g: &UnderlyingGraph) -> Result<ProofLog, GraphError> {
    Ok(search_signatures(g, None)?.log)
}

#[derive(Debug, Clone)]
pub struct WeighingSearchOutcome {
    /// One matrix per equivalence class.
    pub matrices: Vec<WeighingMatrix>,
    /// Matrices found before deduplication.
    pub raw: u64,
    pub nodes_explored: u64,
    pub exhausted: bool,
}

struct WeighingSearch {
    n: usize,
    r: usize,
    rows: Vec<Vec<i8>>,
    col_count: Vec<usize>,
    first_free: usize,
    nodes: u64,
    budget: Option<u64>,
    aborted: bool,
    found: Vec<Vec<Vec<i8>>>,
    /// When set, stop after completing this row and record the partial matrix.
    split_row: Option<usize>,
    frontier: Vec<(Vec<Vec<i8>>, Vec<usize>)>,
}

/// Row order key: rows of free position are kept non-decreasing under it.
fn lex_key(v: i8) -> u8 {
    match v {
        0 => 0,
        1 => 1,
        _ => 2,
    }
}

impl WeighingSearch {
    fn run_row(&mut self, i: usize) {
        if i == self.n {
            self.found.push(self.rows.clone());
            return;
        }
        if self.split_row.is_some_and(|s| i > s) {
            self.frontier.push((self.rows.clone(), self.col_count.clone()));
            return;
        }
        let mut overlap = vec![0u8; i];
        let mut dot = vec![0i32; i];
        self.fill(i, 0, 0, true, &mut overlap, &mut dot);
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(&mut self, i: usize, c: usize, weight: usize, tied: bool, overlap: &mut [u8], dot: &mut [i32]) {
        if self.aborted {
            return;
        }
        let (n, r) = (self.n, self.r);
        if c == n {
            if weight != r || overlap.iter().any(|&o| o == 1) {
                return;
            }
            let rows_left = n - i - 1;
            if self.col_count.iter().any(|&k| r - k > rows_left) {
                return;
            }
            self.run_row(i + 1);
            return;
        }
        let need = r - self.col_count[c];
        let rows_here = n - i;
        let mut values: Vec<i8> = Vec::with_capacity(3);
        if need < rows_here && n - c - 1 >= r - weight {
            values.push(0);
        }
        if need > 0 && weight < r {
            values.push(1);
            if weight > 0 {
                values.push(-1);
            }
        }
        let prev = (i > self.first_free).then(|| self.rows[i - 1][c]);
        for v in values {
            let mut still_tied = tied;
            if tied {
                if let Some(p) = prev {
                    let (kv, kp) = (lex_key(v), lex_key(p));
                    if kv < kp {
                        continue;
                    }
                    still_tied = kv == kp;
                }
            }
            if self.budget.is_some_and(|b| self.nodes >= b) {
                self.aborted = true;
                return;
            }
            self.nodes += 1;
            let mut ok = true;
            if v != 0 {
                for k in 0..i {
                    let x = self.rows[k][c];
                    if x != 0 {
                        overlap[k] += 1;
                        dot[k] += (x * v) as i32;
                        if overlap[k] > 2 || (overlap[k] == 2 && dot[k] != 0) {
                            ok = false;
                        }
                    }
                }
            }
            if ok {
                self.rows[i][c] = v;
                if v != 0 {
                    self.col_count[c] += 1;
                }
                self.fill(i, c + 1, weight + (v != 0) as usize, still_tied, overlap, dot);
                if v != 0 {
                    self.col_count[c] -= 1;
                }
                self.rows[i][c] = 0;
            }
            if v != 0 {
                for k in 0..i {
                    let x = self.rows[k][c];
                    if x != 0 {
                        overlap[k] -= 1;
                        dot[k] -= (x * v) as i32;
                    }
                }
            }
            if self.aborted {
                return;
            }
        }
    }
}

/// All `(n, r)` weighing matrices with row intersection numbers in {0, 2}
/// whose first `r` rows are the normal-form prefix, up to equivalence.
pub fn search_weighing(n: usize, r: usize, budget: Option<u64>) -> WeighingSearchOutcome {
    let empty = |exhausted| WeighingSearchOutcome { matrices: Vec::new(), raw: 0, nodes_explored: 0, exhausted };
    if r == 0 || n == 0 || r > n {
        return empty(true);
    }
    let Some(prefix) = scheme_two_prefix(n, r) else {
        return empty(true);
    };
    let mut rows = vec![vec![0i8; n]; n];
    let mut col_count = vec![0usize; n];
    for (i, p) in prefix.iter().enumerate() {
        for j in 0..n {
            rows[i][j] = p[j] as i8;
            col_count[j] += (p[j] != 0) as usize;
        }
    }
    let first_free = prefix.len();
    let mut head = WeighingSearch {
        n,
        r,
        rows,
        col_count,
        first_free,
        nodes: 0,
        budget,
        aborted: false,
        found: Vec::new(),
        split_row: Some(first_free),
        frontier: Vec::new(),
    };
    head.run_row(first_free);
    let mut nodes = head.nodes;
    let mut aborted = head.aborted;
    let mut found = std::mem::take(&mut head.found);
    let per_task = budget.map(|b| b.saturating_sub(nodes) / (head.frontier.len().max(1) as u64));
    let results: Vec<(u64, bool, Vec<Vec<Vec<i8>>>)> = head
        .frontier
        .par_iter()
        .map(|(rows, col_count)| {
            let mut t = WeighingSearch {
                n,
                r,
                rows: rows.clone(),
                col_count: col_count.clone(),
                first_free,
                nodes: 0,
                budget: per_task,
                aborted: false,
                found: Vec::new(),
                split_row: None,
                frontier: Vec::new(),
            };
            t.run_row(first_free + 1);
            (t.nodes, t.aborted, t.found)
        })
        .collect();
    for (k, a, f) in results {
        nodes += k;
        aborted |= a;
        found.extend(f);
    }

    let raw = found.len() as u64;
    let mut classes: Vec<WeighingMatrix> = Vec::new();
    let mut buckets: HashMap<(bool, Vec<usize>), Vec<usize>> = HashMap::new();
    for rows in found {
        let flat: Vec<i64> = rows.iter().flatten().map(|&x| x as i64).collect();
        let w = verify_weighing(&IntMatrix::from_flat(n, flat)).expect("search output is a weighing matrix");
        debug_assert!(intersection_numbers(&w).iter().all(|&k| k == 0 || k == 2));
        let key = (is_proper(&w), row_intersection_profile(&w));
        let bucket = buckets.entry(key).or_default();
        let known = bucket
            .iter()
            .any(|&i| equivalent(&classes[i], &w).map(|x| x.is_some()).unwrap_or(false));
        if !known {
            bucket.push(classes.len());
            classes.push(w);
        }
    }
    WeighingSearchOutcome { matrices: classes, raw, nodes_explored: nodes, exhausted: !aborted }
}

/// Sorted per-row counts of rows met in two places.
fn row_intersection_profile(w: &WeighingMatrix) -> Vec<usize> {
    let n = w.n();
    let mut out: Vec<usize> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| k != i && (0..n).any(|j| w.entry(i, j) != 0 && w.entry(k, j) != 0))
                .count()
        })
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::certify_two_sym;
    use crate::constructions::{clebsch, cycle, hypercube};
    use crate::switching::all_quadrangles_negative;

    #[test]
    fn square_has_one_class() {
        let out = search_signatures(&cycle(4), None).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert!(out.exhausted);
        assert!(all_quadrangles_negative(&out.solutions[0]));
        assert_eq!(out.solutions[0].support(), &cycle(4));
    }

    #[test]
    fn cube_has_one_class() {
        let out = search_signatures(&hypercube(3), None).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert_eq!(certify_two_sym(&out.solutions[0]).unwrap().lambda_sq, 3);
    }

    #[test]
    fn precondition_names_predicate() {
        let p = UnderlyingGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let e = search_signatures(&p, None).unwrap_err();
        assert!(e.to_string().contains("regular"), "{e}");
    }

    #[test]
    fn proof_log_round_trip_and_replay() {
        let g = clebsch();
        let out = search_signatures(&g, None).unwrap();
        let text = out.log.to_text();
        let parsed = ProofLog::parse(&text).unwrap();
        assert_eq!(parsed, out.log);
        parsed.replay(&g).unwrap();
        let mut forged = parsed.clone();
        forged.nodes += 1;
        assert!(forged.replay(&g).is_err());
        assert!(parsed.replay(&hypercube(4)).is_err());
    }

    #[test]
    fn budget_marks_incomplete() {
        let out = search_signatures(&hypercube(4), Some(0)).unwrap();
        assert!(!out.exhausted || out.nodes_explored == 0);
    }

    #[test]
    fn weighing_tiny_orders() {
        let w41 = search_weighing(4, 1, None);
        assert_eq!(w41.matrices.len(), 1);
        assert!(w41.exhausted);
        assert!(search_weighing(6, 5, None).matrices.is_empty());
        let w42 = search_weighing(4, 2, None);
        assert_eq!(w42.matrices.len(), 1);
        assert!(!is_proper(&w42.matrices[0]));
    }
}
