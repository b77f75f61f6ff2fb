//! Arc systems on a punctured level sphere, encoded by crossing words.
//!
//! The level sphere carries `m = 2n` punctures `p_0..p_{m-1}` on a reference
//! loop. Interval `k` runs from `p_k` to `p_{k+1 mod m}`; interval `m-1` is the
//! one through the back. The loop cuts the sphere into the upper hemisphere
//! (`Side::Upper`, `H_+`) and the lower one (`Side::Lower`, `H_-`).
//!
//! An arc is stored as its start puncture, the hemisphere it first enters,
//! the intervals it crosses in order, and its end puncture. In reduced form
//! the word has no equal adjacent letters and its first (last) letter is not
//! an interval incident to the start (end) puncture, which is exactly minimal
//! position with respect to the loop.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{EventKind, LevelEvent, PlatPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        }
    }

    /// Side after `t` crossings of the loop.
    pub fn after(self, t: usize) -> Side {
        if t.is_multiple_of(2) {
            self
        } else {
            self.flip()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub start: usize,
    pub start_side: Side,
    pub crossings: Vec<usize>,
    pub end: usize,
}

impl Arc {
    pub fn new(start: usize, start_side: Side, crossings: Vec<usize>, end: usize) -> Self {
        Arc { start, start_side, crossings, end }
    }

    /// Side of the segment just before crossing `t` (segment `t`).
    pub fn side_of_segment(&self, t: usize) -> Side {
        self.start_side.after(t)
    }

    pub fn end_side(&self) -> Side {
        self.start_side.after(self.crossings.len())
    }

    pub fn reversed(&self) -> Arc {
        let mut c = self.crossings.clone();
        c.reverse();
        Arc { start: self.end, start_side: self.end_side(), crossings: c, end: self.start }
    }

    fn apply_letter(&self, k: usize, sign: i8, m: usize) -> Arc {
        let prev = (k + m - 1) % m;
        let next = (k + 1) % m;
        let pick = |side: Side| if (side == Side::Upper) == (sign > 0) { prev } else { next };
        let other = |a: usize| if a == prev { next } else { prev };
        let swap = |p: usize| {
            if p == k {
                k + 1
            } else if p == k + 1 {
                k
            } else {
                p
            }
        };
        let mut out = Vec::with_capacity(self.crossings.len() + 4);
        let mut start_side = self.start_side;
        if self.start == k || self.start == k + 1 {
            out.push(pick(self.start_side));
            start_side = start_side.flip();
        }
        for (t, &c) in self.crossings.iter().enumerate() {
            if c == k {
                let a = pick(self.side_of_segment(t));
                out.extend([a, k, other(a)]);
            } else {
                out.push(c);
            }
        }
        if self.end == k || self.end == k + 1 {
            out.push(pick(self.end_side()));
        }
        Arc { start: swap(self.start), start_side, crossings: out, end: swap(self.end) }
    }

    /// Remove bigons and half-bigons with the loop and orient `start < end`.
    pub fn reduce(&self, m: usize) -> Arc {
        let mut w: Vec<usize> = Vec::with_capacity(self.crossings.len());
        for &c in &self.crossings {
            if w.last() == Some(&c) {
                w.pop();
            } else {
                w.push(c);
            }
        }
        let mut start_side = self.start_side;
        let near = |p: usize, c: usize| c == p || c == (p + m - 1) % m;
        let mut lo = 0;
        let mut hi = w.len();
        loop {
            if lo < hi && near(self.start, w[lo]) {
                lo += 1;
                start_side = start_side.flip();
                continue;
            }
            if lo < hi && near(self.end, w[hi - 1]) {
                hi -= 1;
                continue;
            }
            break;
        }
        let mut arc = Arc { start: self.start, start_side, crossings: w[lo..hi].to_vec(), end: self.end };
        if arc.start > arc.end {
            arc = arc.reversed();
        }
        if arc.crossings.is_empty() && adjacent(arc.start, arc.end, m) {
            arc.start_side = Side::Upper;
        }
        arc
    }
}

fn adjacent(a: usize, b: usize, m: usize) -> bool {
    (a + 1) % m == b || (b + 1) % m == a
}

/// A point on the reference loop after the crossings have been ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CirclePoint {
    Puncture(usize),
    Crossing { arc: usize, index: usize, interval: usize },
}

/// A maximal subarc lying in one hemisphere, with endpoints as circle positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chord {
    pub owner: usize,
    pub index: usize,
    pub side: Side,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub circle: Vec<CirclePoint>,
    pub puncture_pos: Vec<usize>,
    /// `point_pos[u][t]`: circle position of crossing `t` of arc `u`.
    pub point_pos: Vec<Vec<usize>>,
    /// Chords of every arc, arc by arc, in order along the arc.
    pub chords: Vec<Chord>,
}

impl Layout {
    /// Points of interval `k` from `p_k` towards `p_{k+1}` as `(arc, index)`.
    pub fn interval_order(&self, k: usize) -> Vec<(usize, usize)> {
        let start = self.puncture_pos[k] + 1;
        self.circle[start..]
            .iter()
            .take_while(|c| matches!(c, CirclePoint::Crossing { .. }))
            .map(|c| match *c {
                CirclePoint::Crossing { arc, index, .. } => (arc, index),
                CirclePoint::Puncture(_) => unreachable!(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcSystem {
    pub punctures: usize,
    pub arcs: Vec<Arc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dest {
    Puncture(usize),
    Point(usize),
}

impl ArcSystem {
    /// Shadows of the upper bridge disks just below the top caps: arc `u`
    /// joins `p_{2u}` and `p_{2u+1}` along interval `2u`.
    pub fn standard(n: usize) -> Self {
        ArcSystem {
            punctures: 2 * n,
            arcs: (0..n).map(|u| Arc::new(2 * u, Side::Upper, vec![], 2 * u + 1)).collect(),
        }
    }

    pub fn intersection_count(&self) -> usize {
        self.arcs.iter().map(|a| a.crossings.len()).sum()
    }

    pub fn check_structure(&self) -> Result<()> {
        let m = self.punctures;
        if m == 0 || !m.is_multiple_of(2) || self.arcs.len() * 2 != m {
            return Err(Error::Unrealizable(format!(
                "{} arcs on {} punctures",
                self.arcs.len(),
                m
            )));
        }
        let mut seen = vec![false; m];
        for (u, a) in self.arcs.iter().enumerate() {
            for p in [a.start, a.end] {
                if p >= m || seen[p] {
                    return Err(Error::Unrealizable(format!("arc {u}: puncture {p} reused or out of range")));
                }
                seen[p] = true;
            }
            if let Some(&c) = a.crossings.iter().find(|&&c| c >= m) {
                return Err(Error::Unrealizable(format!("arc {u}: interval {c} out of range")));
            }
        }
        Ok(())
    }

    pub fn reduce(&self) -> ArcSystem {
        ArcSystem {
            punctures: self.punctures,
            arcs: self.arcs.iter().map(|a| a.reduce(self.punctures)).collect(),
        }
    }

    /// Image under the half-twist exchanging `p_k` and `p_{k+1}`. With
    /// `sign = +1`, `p_k` passes through the lower hemisphere to the right.
    pub fn apply_letter(&self, k: usize, sign: i8) -> ArcSystem {
        assert!(k + 1 < self.punctures, "half-twist {k} out of range");
        let m = self.punctures;
        ArcSystem {
            punctures: m,
            arcs: self.arcs.iter().map(|a| a.apply_letter(k, sign, m).reduce(m)).collect(),
        }
    }

    /// Same as [`ArcSystem::apply_letter`] without reducing the words.
    pub fn apply_letter_unreduced(&self, k: usize, sign: i8) -> ArcSystem {
        assert!(k + 1 < self.punctures, "half-twist {k} out of range");
        let m = self.punctures;
        ArcSystem { punctures: m, arcs: self.arcs.iter().map(|a| a.apply_letter(k, sign, m)).collect() }
    }

    pub fn apply_twist(&self, k: usize, half_twists: u32, sign: i8) -> ArcSystem {
        let mut s = self.clone();
        for _ in 0..half_twists {
            s = s.apply_letter(k, sign);
        }
        s
    }

    pub fn apply_event(&self, ev: &LevelEvent) -> ArcSystem {
        match ev.kind {
            EventKind::Braid { pos, sign } => self.apply_letter(pos - 1, sign),
            EventKind::Twist { pos, half_twists, handedness } => {
                self.apply_twist(pos - 1, half_twists, handedness.sign())
            }
        }
    }

    /// Arc system at the bottom of the presentation's events.
    pub fn sweep(p: &PlatPresentation) -> ArcSystem {
        p.events
            .iter()
            .fold(ArcSystem::standard(p.bridge_number()), |s, ev| s.apply_event(ev))
    }

    fn dest(&self, u: usize, idx: isize) -> Dest {
        let a = &self.arcs[u];
        if idx < 0 {
            Dest::Puncture(a.start)
        } else if idx as usize >= a.crossings.len() {
            Dest::Puncture(a.end)
        } else {
            Dest::Point(a.crossings[idx as usize])
        }
    }

    fn slot(d: Dest) -> usize {
        match d {
            Dest::Puncture(p) => 2 * p,
            Dest::Point(k) => 2 * k + 1,
        }
    }

    /// Rank of every crossing by the sequence of landing offsets met when
    /// following its chords (upper chord first), with signs alternating at
    /// each step. Two crossings of one interval are ordered by their ranks.
    /// Sequences are compared by prefix doubling, so the cost is
    /// O(N log N log L) for N crossings and arcs of length at most L.
    fn walk_ranks(&self) -> HashMap<(usize, usize), u64> {
        let modulus = 2 * self.punctures;
        let offsets: Vec<usize> = self.arcs.iter().scan(0, |acc, a| {
            let o = *acc;
            *acc += a.crossings.len();
            Some(o)
        }).collect();
        let total = self.intersection_count();
        // State 2i + d walks from point i in direction d (0 forward, 1 back);
        // the last state is the terminal one with an all-zero sequence.
        let term = 2 * total;
        let mut next = vec![term; term + 1];
        let mut rank = vec![modulus as u64; term + 1];
        let mut longest = 0;
        for (u, a) in self.arcs.iter().enumerate() {
            longest = longest.max(a.crossings.len() + 1);
            for (t, &here) in a.crossings.iter().enumerate() {
                let i = offsets[u] + t;
                for (d, step) in [(0, 1isize), (1, -1)] {
                    let dest = self.dest(u, t as isize + step);
                    let base = 2 * here + 1;
                    let fwd = (Self::slot(dest) + modulus - base) % modulus;
                    rank[2 * i + d] = (modulus - fwd) as u64;
                    if let Dest::Point(_) = dest {
                        next[2 * i + d] = 2 * (offsets[u] + (t as isize + step) as usize) + d;
                    }
                }
            }
        }
        let mut h = 1;
        let mut negate = true;
        while h < longest {
            let top = *rank.iter().max().unwrap_or(&0);
            let mut keyed: Vec<(u64, u64, u32)> = (0..=term)
                .map(|s| {
                    let r = rank[next[s]];
                    (rank[s], if negate { top - r } else { r }, s as u32)
                })
                .collect();
            keyed.sort_unstable();
            let mut distinct = 0;
            for w in 0..keyed.len() {
                if w > 0 && (keyed[w].0, keyed[w].1) != (keyed[w - 1].0, keyed[w - 1].1) {
                    distinct += 1;
                }
                rank[keyed[w].2 as usize] = distinct;
            }
            next = next.iter().map(|&s| next[s]).collect();
            h *= 2;
            negate = false;
            if distinct as usize == term {
                break;
            }
        }
        let mut out = HashMap::with_capacity(total);
        for (u, a) in self.arcs.iter().enumerate() {
            for t in 0..a.crossings.len() {
                let d = if a.side_of_segment(t) == Side::Upper { 1 } else { 0 };
                out.insert((u, t), rank[2 * (offsets[u] + t) + d]);
            }
        }
        out
    }

    /// Order all crossings along the loop and cut the arcs into chords.
    /// Fails when two distinct crossings cannot be separated, which only
    /// happens for systems that are not in reduced position.
    pub fn layout(&self) -> Result<Layout> {
        self.check_structure()?;
        let m = self.punctures;
        let mut by_interval: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
        for (u, a) in self.arcs.iter().enumerate() {
            for (t, &c) in a.crossings.iter().enumerate() {
                by_interval[c].push((u, t));
            }
        }
        let rank = self.walk_ranks();
        for pts in &mut by_interval {
            pts.sort_by_key(|&x| rank[&x]);
            for w in pts.windows(2) {
                if rank[&w[0]] == rank[&w[1]] {
                    return Err(Error::Unrealizable(format!(
                        "crossings {:?} and {:?} cannot be ordered",
                        w[0], w[1]
                    )));
                }
            }
        }
        let mut circle = Vec::with_capacity(m + self.intersection_count());
        let mut puncture_pos = vec![0; m];
        let mut point_pos: Vec<Vec<usize>> =
            self.arcs.iter().map(|a| vec![0; a.crossings.len()]).collect();
        for (k, pts) in by_interval.iter().enumerate() {
            puncture_pos[k] = circle.len();
            circle.push(CirclePoint::Puncture(k));
            for &(u, t) in pts {
                point_pos[u][t] = circle.len();
                circle.push(CirclePoint::Crossing { arc: u, index: t, interval: k });
            }
        }
        let mut chords = Vec::new();
        for (u, a) in self.arcs.iter().enumerate() {
            let len = a.crossings.len();
            let pos_of = |e: usize| {
                if e == 0 {
                    puncture_pos[a.start]
                } else if e == len + 1 {
                    puncture_pos[a.end]
                } else {
                    point_pos[u][e - 1]
                }
            };
            for j in 0..=len {
                chords.push(Chord {
                    owner: u,
                    index: j,
                    side: a.side_of_segment(j),
                    a: pos_of(j),
                    b: pos_of(j + 1),
                });
            }
        }
        Ok(Layout { circle, puncture_pos, point_pos, chords })
    }

    /// Whether the stored words describe pairwise disjoint arcs in reduced
    /// position; returns the layout when they do.
    pub fn realize(&self) -> Result<Layout> {
        self.check_structure()?;
        if *self != self.reduce() {
            return Err(Error::Unrealizable("words are not reduced".into()));
        }
        let layout = self.layout()?;
        for side in [Side::Upper, Side::Lower] {
            check_non_crossing(&layout, side)?;
        }
        Ok(layout)
    }

    pub fn is_realizable(&self) -> bool {
        self.realize().is_ok()
    }
}

fn check_non_crossing(layout: &Layout, side: Side) -> Result<()> {
    let total = layout.circle.len();
    let mut partner = vec![usize::MAX; total];
    for c in layout.chords.iter().filter(|c| c.side == side) {
        if c.a == c.b || partner[c.a] != usize::MAX || partner[c.b] != usize::MAX {
            return Err(Error::Unrealizable(format!("degenerate chord {c:?}")));
        }
        partner[c.a] = c.b;
        partner[c.b] = c.a;
    }
    let mut stack = Vec::new();
    for (i, &p) in partner.iter().enumerate() {
        if p == usize::MAX {
            continue;
        }
        if p > i {
            stack.push(i);
        } else if stack.pop() != Some(p) {
            return Err(Error::Unrealizable(format!("chords cross in the {side:?} hemisphere")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    impl ArcSystem {
        /// Order of two crossings of the same interval along the loop, found by
        /// following their chords until the two paths separate.
        fn compare_points(&self, x: (usize, usize), y: (usize, usize)) -> Ordering {
            if x == y {
                return Ordering::Equal;
            }
            let modulus = 2 * self.punctures;
            let dir = |(u, t): (usize, usize)| -> isize {
                if self.arcs[u].side_of_segment(t) == Side::Upper {
                    -1
                } else {
                    1
                }
            };
            let (xu, yu) = (x.0, y.0);
            let (dx, dy) = (dir(x), dir(y));
            let (mut ix, mut iy) = (x.1 as isize, y.1 as isize);
            let mut here = self.arcs[xu].crossings[x.1];
            let mut flip = false;
            loop {
                let da = self.dest(xu, ix + dx);
                let db = self.dest(yu, iy + dy);
                let (sa, sb) = (Self::slot(da), Self::slot(db));
                if sa != sb {
                    let base = 2 * here + 1;
                    let fwd = |s: usize| (s + modulus - base) % modulus;
                    let o = fwd(sb).cmp(&fwd(sa));
                    return if flip { o.reverse() } else { o };
                }
                match da {
                    Dest::Puncture(_) => return Ordering::Equal,
                    Dest::Point(k) => {
                        here = k;
                        ix += dx;
                        iy += dy;
                        flip = !flip;
                    }
                }
            }
        }
    }

    #[test]
    fn standard_system_is_realizable() {
        let s = ArcSystem::standard(3);
        let l = s.realize().unwrap();
        assert_eq!(l.circle.len(), 6);
        assert_eq!(l.chords.len(), 3);
    }

    #[test]
    fn letter_inside_a_bridge_is_trivial() {
        let s = ArcSystem::standard(2);
        assert_eq!(s.apply_letter(0, 1), s);
        assert_eq!(s.apply_letter(2, -1), s);
    }

    #[test]
    fn letter_between_bridges() {
        let s = ArcSystem::standard(2).apply_letter(1, 1);
        // p_1 passes below p_2, so the first arc now runs through H_-.
        assert_eq!(s.arcs[0], Arc::new(0, Side::Lower, vec![], 2));
        assert_eq!(s.arcs[1], Arc::new(1, Side::Upper, vec![], 3));
        let t = s.apply_letter(1, 1);
        assert_eq!(t.intersection_count(), 2);
        assert!(t.is_realizable());
        assert_eq!(t.apply_letter(1, -1).apply_letter(1, -1), ArcSystem::standard(2));
    }

    #[test]
    fn reduce_strips_bigons() {
        let a = Arc::new(0, Side::Upper, vec![2, 3, 3, 2], 3);
        assert_eq!(a.reduce(6), Arc::new(0, Side::Upper, vec![], 3));
        let b = Arc::new(2, Side::Lower, vec![2, 4], 3);
        assert_eq!(b.reduce(6), Arc::new(2, Side::Upper, vec![4], 3).reduce(6));
    }

    #[test]
    fn reduce_orients_arcs() {
        let a = Arc::new(4, Side::Lower, vec![2], 1);
        let r = a.reduce(6);
        assert_eq!(r.start, 1);
        assert_eq!(r.end, 4);
        assert_eq!(r.start_side, Side::Upper);
    }

    #[test]
    fn crossing_chords_are_rejected() {
        // Two upper chords p0-p2 and p1-p3 cross.
        let s = ArcSystem {
            punctures: 4,
            arcs: vec![Arc::new(0, Side::Upper, vec![], 2), Arc::new(1, Side::Upper, vec![], 3)],
        };
        assert!(!s.is_realizable());
    }

    #[test]
    fn walk_ranks_match_pairwise_walks() {
        let word = [(1, 1), (2, -1), (1, 1), (3, 1), (2, 1), (1, -1), (4, 1), (3, -1), (2, 1)];
        let s = word.iter().fold(ArcSystem::standard(3), |s, &(k, e)| s.apply_letter(k, e));
        let rank = s.walk_ranks();
        let pts: Vec<_> = rank.keys().copied().collect();
        for &x in &pts {
            for &y in &pts {
                if s.arcs[x.0].crossings[x.1] == s.arcs[y.0].crossings[y.1] {
                    assert_eq!(s.compare_points(x, y), rank[&x].cmp(&rank[&y]), "{x:?} {y:?}");
                }
            }
        }
    }

}
