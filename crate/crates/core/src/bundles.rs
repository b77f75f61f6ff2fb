//! Separation families, adjacency graphs, the 2-connected condition and
//! `n`-bundle detection on the chord diagram of an arc system.
//!
//! Public indices here are 1-based (`i, j` for lower shadows `σ_i⁻`, owner
//! labels, interval numbers), matching the certificate format.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arcs::{ArcSystem, Chord, CirclePoint, Layout, Side};
use crate::error::{Error, Result};
use crate::presentation::{format_level, Level, PlatPresentation};

pub const THREADS_ENV: &str = "BRIDGELAB_THREADS";

/// Chords of one hemisphere together with the loop they end on.
#[derive(Clone, Debug)]
pub struct ChordFamily<'a> {
    pub layout: &'a Layout,
    pub side: Side,
    pub chords: Vec<Chord>,
}

impl<'a> ChordFamily<'a> {
    pub fn new(layout: &'a Layout, side: Side) -> Self {
        let chords = layout.chords.iter().filter(|c| c.side == side).copied().collect();
        ChordFamily { layout, side, chords }
    }

    fn size(&self) -> usize {
        self.layout.circle.len()
    }

    /// Circle positions `[lo, hi]` of the lower shadow `σ_i⁻` (1-based `i`).
    fn shadow(&self, i: usize) -> (usize, usize) {
        (self.layout.puncture_pos[2 * i - 2], self.layout.puncture_pos[2 * i - 1])
    }

    /// `Some(inside)` when the chord leaves `σ_i⁻` whole and untouched, with
    /// `inside` telling whether it lies between the chord's endpoints.
    fn placement(&self, c: &Chord, i: usize) -> Option<bool> {
        let (lo, hi) = self.shadow(i);
        let (a, b) = (c.a.min(c.b), c.a.max(c.b));
        for x in [a, b] {
            if (lo..=hi).contains(&x) {
                return None;
            }
        }
        Some(a < lo && hi < b)
    }

    pub fn separates(&self, c: &Chord, i: usize, j: usize) -> bool {
        match (self.placement(c, i), self.placement(c, j)) {
            (Some(x), Some(y)) => x != y,
            _ => false,
        }
    }

    /// Number of circle positions strictly on the `σ_i⁻` side of a chord.
    fn side_size(&self, c: &Chord, i: usize) -> usize {
        let (a, b) = (c.a.min(c.b), c.a.max(c.b));
        let inner = b - a - 1;
        if self.placement(c, i) == Some(true) {
            inner
        } else {
            self.size() - inner - 2
        }
    }

    fn on_i_side(&self, c: &Chord, i: usize, x: usize) -> bool {
        let (a, b) = (c.a.min(c.b), c.a.max(c.b));
        let inside = a < x && x < b;
        inside == (self.placement(c, i) == Some(true))
    }

    /// Chords separating `σ_i⁻` from `σ_j⁻`, ordered from `σ_i⁻` outwards.
    pub fn separation_family(&self, i: usize, j: usize) -> Result<Vec<Chord>> {
        if i == j {
            return Err(Error::Params(format!("separation family needs i != j, got {i}")));
        }
        let mut fam: Vec<(usize, Chord)> = self
            .chords
            .iter()
            .filter(|c| self.separates(c, i, j))
            .map(|c| (self.side_size(c, i), *c))
            .collect();
        fam.sort_by_key(|&(s, c)| (s, c.a.min(c.b), c.a.max(c.b)));
        for w in fam.windows(2) {
            let (inner, outer) = (&w[0].1, &w[1].1);
            if w[0].0 == w[1].0 || !self.on_i_side(outer, i, inner.a) || !self.on_i_side(outer, i, inner.b) {
                return Err(Error::Inconsistent(format!(
                    "separating chords {inner:?} and {outer:?} are not nested"
                )));
            }
        }
        Ok(fam.into_iter().map(|(_, c)| c).collect())
    }
}

/// Simple graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyGraph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl AdjacencyGraph {
    pub fn new(n: usize) -> Self {
        AdjacencyGraph { n, edges: BTreeSet::new() }
    }

    pub fn add_edge(&mut self, v: usize, w: usize) {
        if v != w {
            self.edges.insert((v.min(w), v.max(w)));
        }
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.edges.contains(&(v.min(w), v.max(w)))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(v, w) in &self.edges {
            adj[v].push(w);
            adj[w].push(v);
        }
        adj
    }

    /// Whether the cycle `1–2–…–n–1` is a subgraph.
    pub fn contains_standard_cycle(&self) -> bool {
        (1..=self.n).all(|v| self.has_edge(v, v % self.n + 1))
    }
}

/// Owners of consecutive chords in a separation family are joined.
pub fn build_graph(n: usize, family: &[Chord]) -> AdjacencyGraph {
    let mut g = AdjacencyGraph::new(n);
    for w in family.windows(2) {
        g.add_edge(w[0].owner + 1, w[1].owner + 1);
    }
    g
}

/// Connected with no cut vertex, via Tarjan's low-point recursion.
pub fn is_two_connected(g: &AdjacencyGraph) -> Result<bool> {
    if g.n < 3 {
        return Err(Error::TooFewVertices(g.n));
    }
    let adj = g.adjacency();
    let mut disc = vec![0usize; g.n + 1];
    let mut low = vec![0usize; g.n + 1];
    let mut timer = 0;
    let mut cut = false;
    // Iterative DFS from vertex 1: (vertex, parent, next neighbour index).
    let mut stack: Vec<(usize, usize, usize)> = vec![(1, 0, 0)];
    timer += 1;
    disc[1] = timer;
    low[1] = timer;
    let mut root_children = 0;
    while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
        if *idx < adj[v].len() {
            let w = adj[v][*idx];
            *idx += 1;
            if disc[w] == 0 {
                timer += 1;
                disc[w] = timer;
                low[w] = timer;
                if v == 1 {
                    root_children += 1;
                }
                stack.push((w, v, 0));
            } else if w != parent {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if parent != 0 {
                low[parent] = low[parent].min(low[v]);
                if parent != 1 && low[v] >= disc[parent] {
                    cut = true;
                }
            }
        }
    }
    let connected = disc[1..].iter().all(|&d| d != 0);
    Ok(connected && !cut && root_children <= 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleVerdict {
    pub i: usize,
    pub j: usize,
    pub eps: String,
    pub two_connected: bool,
    pub family_size: usize,
    pub contains_cycle: bool,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleRecord {
    pub eps: String,
    /// Interval numbers `k1 < k2` (1-based) carrying the chord endpoints.
    pub k1: usize,
    pub k2: usize,
    /// `(owner, chord index along its arc)`, owners 1-based, outermost first.
    pub chords: Vec<(usize, usize)>,
    pub punctures: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBundles {
    #[serde(rename = "+")]
    pub plus: Vec<BundleRecord>,
    #[serde(rename = "-")]
    pub minus: Vec<BundleRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub engine_version: String,
    pub input_digest: String,
    /// Bridge number of the sphere being certified.
    pub n: usize,
    pub m: Option<usize>,
    pub intersection_count: usize,
    pub triples: Vec<TripleVerdict>,
    pub condition_holds: bool,
    pub strongly_irreducible: bool,
    pub unperturbed: bool,
    pub reasoning: String,
    pub bundles_at_level: BTreeMap<String, LevelBundles>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

pub fn input_digest(p: &PlatPresentation) -> String {
    let canonical = serde_json::to_string(p).expect("presentation serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn eps_name(side: Side) -> String {
    match side {
        Side::Upper => "+".into(),
        Side::Lower => "-".into(),
    }
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok());
    match threads.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

pub fn verdicts(sys: &ArcSystem) -> Result<Vec<TripleVerdict>> {
    let n = sys.arcs.len();
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let layout = sys.realize()?;
    let families = [ChordFamily::new(&layout, Side::Upper), ChordFamily::new(&layout, Side::Lower)];
    let mut triples = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for f in 0..2 {
                triples.push((i, j, f));
            }
        }
    }
    with_pool(|| {
        triples
            .par_iter()
            .map(|&(i, j, f)| {
                let fam = families[f].separation_family(i, j)?;
                let g = build_graph(n, &fam);
                Ok(TripleVerdict {
                    i,
                    j,
                    eps: eps_name(families[f].side),
                    two_connected: is_two_connected(&g)?,
                    family_size: fam.len(),
                    contains_cycle: g.contains_standard_cycle(),
                    edges: g.edges.iter().copied().collect(),
                })
            })
            .collect()
    })
}

/// Sweep to the bottom and decide the 2-connected condition; `levels` lists
/// heights at which `n`-bundles are also reported.
pub fn check_condition(p: &PlatPresentation, levels: &[Level]) -> Result<Certificate> {
    let violations = p.validate();
    if let Some(v) = violations.first() {
        return Err(Error::Presentation(v.to_string()));
    }
    let sys = ArcSystem::sweep(p);
    let triples = verdicts(&sys)?;
    let holds = triples.iter().all(|t| t.two_connected);
    let mut bundles_at_level = BTreeMap::new();
    for s in levels {
        bundles_at_level.insert(format_level(s), bundles_at(p, s)?);
    }
    Ok(Certificate {
        engine_version: env!("CARGO_PKG_VERSION").into(),
        input_digest: input_digest(p),
        n: p.bridge_number(),
        m: p.meta.as_ref().and_then(|m| m.m),
        intersection_count: sys.intersection_count(),
        triples,
        condition_holds: holds,
        strongly_irreducible: holds,
        unperturbed: holds,
        reasoning: if holds {
            "2-connected condition holds => strongly irreducible => unperturbed".into()
        } else {
            "2-connected condition fails; this proves nothing about the sphere".into()
        },
        bundles_at_level,
    })
}

pub fn bundles_at(p: &PlatPresentation, s: &Level) -> Result<LevelBundles> {
    let sys = ArcSystem::sweep(&p.prefix_to_level(s)?);
    let layout = sys.realize()?;
    Ok(LevelBundles {
        plus: find_n_bundles(&layout, sys.arcs.len(), Side::Upper),
        minus: find_n_bundles(&layout, sys.arcs.len(), Side::Lower),
    })
}

/// Intervals (0-based) a chord endpoint lies on: one for an interior point,
/// the two incident ones for a puncture.
fn endpoint_intervals(layout: &Layout, pos: usize) -> (Vec<usize>, bool) {
    let m = layout.puncture_pos.len();
    match layout.circle[pos] {
        CirclePoint::Crossing { interval, .. } => (vec![interval], false),
        CirclePoint::Puncture(p) => (vec![(p + m - 1) % m, p], true),
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

/// Scan every maximal band of parallel chords in one hemisphere for
/// `n`-bundles.
pub fn find_n_bundles(layout: &Layout, n: usize, side: Side) -> Vec<BundleRecord> {
    let size = layout.circle.len();
    let chords: Vec<Chord> = layout.chords.iter().filter(|c| c.side == side).copied().collect();
    let mut at = vec![usize::MAX; size];
    for (idx, c) in chords.iter().enumerate() {
        at[c.a] = idx;
        at[c.b] = idx;
    }
    let step = |p: usize, d: isize| ((p as isize + d).rem_euclid(size as isize)) as usize;
    // Parallel neighbours: both ends stepped one position towards or away
    // from each other along the circle.
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); chords.len()];
    for (idx, c) in chords.iter().enumerate() {
        for d in [1isize, -1] {
            let (x, y) = (step(c.a, d), step(c.b, -d));
            let other = at[x];
            if other != usize::MAX && other != idx && at[y] == other && !nbrs[idx].contains(&other) {
                nbrs[idx].push(other);
            }
        }
    }
    let mut visited = vec![false; chords.len()];
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..chords.len()).collect();
    order.sort_by_key(|&i| (chords[i].a.min(chords[i].b), chords[i].a.max(chords[i].b)));
    for &s in &order {
        if visited[s] || nbrs[s].len() > 1 {
            continue;
        }
        let mut chain = vec![s];
        visited[s] = true;
        let mut cur = s;
        while let Some(&nxt) = nbrs[cur].iter().find(|&&x| !visited[x]) {
            visited[nxt] = true;
            chain.push(nxt);
            cur = nxt;
        }
        scan_band(layout, n, side, &chords, chain, &mut out);
    }
    out.sort_by(|x, y| (x.k1, x.k2, &x.chords).cmp(&(y.k1, y.k2, &y.chords)));
    out
}

fn scan_band(
    layout: &Layout,
    n: usize,
    side: Side,
    chords: &[Chord],
    chain: Vec<usize>,
    out: &mut Vec<BundleRecord>,
) {
    // Orient every chord so that its first end lies on the same side of the band.
    let mut ends: Vec<(usize, usize)> = Vec::with_capacity(chain.len());
    for (t, &idx) in chain.iter().enumerate() {
        let c = chords[idx];
        if t == 0 {
            ends.push((c.a, c.b));
        } else {
            let (pa, _) = ends[t - 1];
            let size = layout.circle.len();
            let close = |x: usize| {
                let d = x.abs_diff(pa);
                d == 1 || d == size - 1
            };
            ends.push(if close(c.a) { (c.a, c.b) } else { (c.b, c.a) });
        }
    }
    let mut start = 0;
    while start < chain.len() {
        // Longest run from `start` with a common interval on each side.
        let (mut s1, _) = endpoint_intervals(layout, ends[start].0);
        let (mut s2, _) = endpoint_intervals(layout, ends[start].1);
        let mut end = start + 1;
        while end < chain.len() {
            let t1 = intersect(&s1, &endpoint_intervals(layout, ends[end].0).0);
            let t2 = intersect(&s2, &endpoint_intervals(layout, ends[end].1).0);
            if t1.is_empty() || t2.is_empty() {
                break;
            }
            s1 = t1;
            s2 = t2;
            end += 1;
        }
        windows_in_run(layout, n, side, chords, &chain[start..end], &ends[start..end], out);
        start = end;
    }
}

fn windows_in_run(
    layout: &Layout,
    n: usize,
    side: Side,
    chords: &[Chord],
    run: &[usize],
    ends: &[(usize, usize)],
    out: &mut Vec<BundleRecord>,
) {
    let punct = |t: usize| {
        usize::from(endpoint_intervals(layout, ends[t].0).1) + usize::from(endpoint_intervals(layout, ends[t].1).1)
    };
    let pair_id = |t: usize| -> Option<usize> {
        let (u, v) = (chords[run[t]].owner, chords[run[t + 1]].owner);
        if (u + 1) % n == v {
            Some(u)
        } else if (v + 1) % n == u {
            Some(v)
        } else {
            None
        }
    };
    let mut lo = 0;
    while lo + 1 < run.len() {
        let mut count = vec![0usize; n];
        let mut covered = 0;
        let mut hi = lo;
        while covered < n && hi + 1 < run.len() {
            if let Some(p) = pair_id(hi) {
                count[p] += 1;
                if count[p] == 1 {
                    covered += 1;
                }
            }
            hi += 1;
        }
        if covered < n {
            return;
        }
        // Shrink from the left while coverage survives.
        while let Some(p) = pair_id(lo).or(Some(usize::MAX)) {
            if p != usize::MAX && count[p] == 1 {
                break;
            }
            if p != usize::MAX {
                count[p] -= 1;
            }
            lo += 1;
        }
        let punctures: usize = (lo..=hi).map(punct).sum();
        if punctures <= 1 {
            let mut s1 = endpoint_intervals(layout, ends[lo].0).0;
            let mut s2 = endpoint_intervals(layout, ends[lo].1).0;
            for t in lo + 1..=hi {
                s1 = intersect(&s1, &endpoint_intervals(layout, ends[t].0).0);
                s2 = intersect(&s2, &endpoint_intervals(layout, ends[t].1).0);
            }
            if let Some((k1, k2)) = pick_pair(&s1, &s2) {
                out.push(BundleRecord {
                    eps: eps_name(side),
                    k1: k1.min(k2) + 1,
                    k2: k1.max(k2) + 1,
                    chords: run[lo..=hi].iter().map(|&i| (chords[i].owner + 1, chords[i].index)).collect(),
                    punctures,
                });
            }
        }
        lo = hi + 1;
    }
}

fn pick_pair(s1: &[usize], s2: &[usize]) -> Option<(usize, usize)> {
    for &a in s1 {
        for &b in s2 {
            if a != b {
                return Some((a, b));
            }
        }
    }
    None
}

/// Brute-force 2-connectivity: remove each vertex and test connectivity.
pub fn is_two_connected_naive(g: &AdjacencyGraph) -> bool {
    let adj = g.adjacency();
    let connected_without = |skip: usize| {
        let verts: Vec<usize> = (1..=g.n).filter(|&v| v != skip).collect();
        let Some(&first) = verts.first() else { return true };
        let mut seen = vec![false; g.n + 1];
        seen[first] = true;
        let mut q = VecDeque::from([first]);
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if w != skip && !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        verts.iter().all(|&v| seen[v])
    };
    connected_without(0) && (1..=g.n).all(connected_without)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::{Arc, ArcSystem};

    fn graph(n: usize, edges: &[(usize, usize)]) -> AdjacencyGraph {
        let mut g = AdjacencyGraph::new(n);
        for &(v, w) in edges {
            g.add_edge(v, w);
        }
        g
    }

    #[test]
    fn cycle_is_two_connected() {
        let g = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]);
        assert!(is_two_connected(&g).unwrap());
        assert!(g.contains_standard_cycle());
    }

    #[test]
    fn path_is_not() {
        let g = graph(3, &[(1, 2), (2, 3)]);
        assert!(!is_two_connected(&g).unwrap());
    }

    #[test]
    fn isolated_vertex_is_not() {
        let g = graph(4, &[(1, 2), (2, 3), (3, 1)]);
        assert!(!is_two_connected(&g).unwrap());
    }

    #[test]
    fn two_vertices_rejected() {
        assert!(matches!(is_two_connected(&AdjacencyGraph::new(2)), Err(Error::TooFewVertices(2))));
    }

    #[test]
    fn bowtie_has_cut_vertex() {
        let g = graph(5, &[(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3)]);
        assert!(!is_two_connected(&g).unwrap());
        assert!(!is_two_connected_naive(&g));
    }

    #[test]
    fn graph_from_owner_sequence() {
        let mk = |owner| Chord { owner, index: 0, side: Side::Upper, a: 0, b: 1 };
        let g = build_graph(3, &[mk(0), mk(0), mk(1)]);
        assert_eq!(g.edges.iter().copied().collect::<Vec<_>>(), vec![(1, 2)]);
        assert!(build_graph(4, &[]).edges.is_empty());
    }

    #[test]
    fn trivial_system_separates_nothing() {
        let sys = ArcSystem::standard(3);
        let layout = sys.realize().unwrap();
        let fam = ChordFamily::new(&layout, Side::Upper);
        for i in 1..=3 {
            for j in 1..=3 {
                if i != j {
                    assert!(fam.separation_family(i, j).unwrap().is_empty());
                }
            }
        }
        assert!(find_n_bundles(&layout, 3, Side::Upper).is_empty());
    }

    #[test]
    fn chord_between_intervals_separates() {
        // Punctures 0..5; an upper chord from p_1 to p_4 cuts σ_2⁻ (interval 2)
        // off from σ_1⁻ and σ_3⁻ without touching them.
        let sys = ArcSystem {
            punctures: 6,
            arcs: vec![
                Arc::new(0, Side::Upper, vec![], 5),
                Arc::new(1, Side::Upper, vec![], 4),
                Arc::new(2, Side::Upper, vec![], 3),
            ],
        };
        let layout = sys.realize().unwrap();
        let fam = ChordFamily::new(&layout, Side::Upper);
        let c = fam.chords[1];
        assert_eq!(c.owner, 1);
        // p_1 is an endpoint of σ_1⁻ and p_4 of σ_3⁻: boundary rule applies.
        assert!(!fam.separates(&c, 2, 1));
        assert!(!fam.separates(&c, 2, 3));
    }
}
