//! Explicit planar model of an arc system, used to cross-check the
//! crossing-word engine in [`crate::arcs`].
//!
//! Instead of words, the model stores every intersection point of the arcs
//! with the reference loop, the left-to-right order of the points on each
//! interval, and for each point the endpoint reached by its upper and its
//! lower chord. A half-twist is applied by literally redrawing the picture
//! inside a disk around the twisted interval; reduction removes innermost
//! bigons one at a time.

use crate::arcs::{Arc, ArcSystem, Side};
use crate::presentation::{EventKind, PlatPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum End {
    Pt(usize),
    /// Puncture by stable id, not by position.
    Pu(usize),
}

#[derive(Clone, Debug)]
struct Point {
    up: End,
    down: End,
    interval: usize,
    alive: bool,
}

#[derive(Clone, Debug)]
struct Punct {
    side: Side,
    nbr: End,
    label: usize,
}

#[derive(Clone, Debug)]
pub struct PlanarModel {
    m: usize,
    points: Vec<Point>,
    intervals: Vec<Vec<usize>>,
    punct: Vec<Punct>,
    /// Puncture id sitting at each position.
    at: Vec<usize>,
}

impl PlanarModel {
    pub fn standard(n: usize) -> Self {
        let m = 2 * n;
        let punct = (0..m)
            .map(|p| Punct { side: Side::Upper, nbr: End::Pu(p ^ 1), label: p / 2 })
            .collect();
        PlanarModel {
            m,
            points: Vec::new(),
            intervals: vec![Vec::new(); m],
            punct,
            at: (0..m).collect(),
        }
    }

    pub fn sweep(p: &PlatPresentation) -> Self {
        let mut model = PlanarModel::standard(p.bridge_number());
        for ev in &p.events {
            match ev.kind {
                EventKind::Braid { pos, sign } => model.half_twist(pos - 1, sign),
                EventKind::Twist { pos, half_twists, handedness } => {
                    for _ in 0..half_twists {
                        model.half_twist(pos - 1, handedness.sign());
                    }
                }
            }
        }
        model
    }

    pub fn point_count(&self) -> usize {
        self.points.iter().filter(|p| p.alive).count()
    }

    fn new_point(&mut self, up: End, down: End, interval: usize) -> usize {
        self.points.push(Point { up, down, interval, alive: true });
        self.points.len() - 1
    }

    fn link(&self, e: End, side: Side) -> End {
        match e {
            End::Pu(id) => self.punct[id].nbr,
            End::Pt(x) => match side {
                Side::Upper => self.points[x].up,
                Side::Lower => self.points[x].down,
            },
        }
    }

    fn set_link(&mut self, e: End, side: Side, to: End) {
        match e {
            End::Pu(id) => self.punct[id].nbr = to,
            End::Pt(x) => match side {
                Side::Upper => self.points[x].up = to,
                Side::Lower => self.points[x].down = to,
            },
        }
    }

    /// Half-twist of `p_k`, `p_{k+1}`, followed by reduction.
    pub fn half_twist(&mut self, k: usize, sign: i8) {
        assert!(k + 1 < self.m);
        if sign > 0 {
            self.positive_twist(k);
        } else {
            self.mirror();
            self.positive_twist(self.m - 2 - k);
            self.mirror();
        }
        self.reduce();
    }

    /// Reflect the picture left to right, keeping the hemispheres.
    fn mirror(&mut self) {
        let m = self.m;
        self.at.reverse();
        let mut iv = vec![Vec::new(); m];
        for (k, pts) in self.intervals.iter().enumerate() {
            let j = (2 * m - 2 - k) % m;
            iv[j] = pts.iter().rev().copied().collect();
        }
        for (j, pts) in iv.iter().enumerate() {
            for &x in pts {
                self.points[x].interval = j;
            }
        }
        self.intervals = iv;
    }

    fn positive_twist(&mut self, k: usize) {
        let m = self.m;
        let (left, right) = (self.at[k], self.at[k + 1]);
        let strands = |side: Side| -> Vec<End> {
            let mut v = Vec::new();
            if self.punct[left].side == side {
                v.push(End::Pu(left));
            }
            v.extend(self.intervals[k].iter().map(|&x| End::Pt(x)));
            if self.punct[right].side == side {
                v.push(End::Pu(right));
            }
            v
        };
        let top = strands(Side::Upper);
        let bottom = strands(Side::Lower);
        let top_far: Vec<End> = top.iter().map(|&t| self.link(t, Side::Upper)).collect();
        let bottom_far: Vec<End> = bottom.iter().map(|&t| self.link(t, Side::Lower)).collect();

        let prev = (k + m - 1) % m;
        let next = (k + 1) % m;
        let a: Vec<usize> = top.iter().map(|&t| self.new_point(t, t, prev)).collect();
        let b: Vec<usize> = bottom.iter().map(|&t| self.new_point(t, t, next)).collect();

        for (i, &t) in top.iter().enumerate() {
            let f = top_far[i];
            let up = match top.iter().position(|&s| s == f) {
                Some(j) => End::Pt(a[j]),
                None => {
                    self.set_link(f, Side::Upper, End::Pt(a[i]));
                    f
                }
            };
            self.points[a[i]].up = up;
            self.points[a[i]].down = t;
        }
        for (i, &t) in bottom.iter().enumerate() {
            let f = bottom_far[i];
            let down = match bottom.iter().position(|&s| s == f) {
                Some(j) => End::Pt(b[j]),
                None => {
                    self.set_link(f, Side::Lower, End::Pt(b[i]));
                    f
                }
            };
            self.points[b[i]].down = down;
            self.points[b[i]].up = t;
        }
        // The inner disk turns over: upper chords now leave downwards.
        for (i, &t) in top.iter().enumerate() {
            match t {
                End::Pt(x) => self.points[x].down = End::Pt(a[i]),
                End::Pu(id) => {
                    self.punct[id].side = Side::Lower;
                    self.punct[id].nbr = End::Pt(a[i]);
                }
            }
        }
        for (i, &t) in bottom.iter().enumerate() {
            match t {
                End::Pt(x) => self.points[x].up = End::Pt(b[i]),
                End::Pu(id) => {
                    self.punct[id].side = Side::Upper;
                    self.punct[id].nbr = End::Pt(b[i]);
                }
            }
        }
        self.intervals[prev].extend(a.iter().copied());
        let mut nb = b.clone();
        nb.extend(self.intervals[next].iter().copied());
        self.intervals[next] = nb;
        self.intervals[k].reverse();
        self.at.swap(k, k + 1);
    }

    fn remove_point(&mut self, x: usize) {
        let k = self.points[x].interval;
        self.intervals[k].retain(|&y| y != x);
        self.points[x].alive = false;
    }

    /// Join `e`, whose `side` link pointed at a removed point, to `to`.
    fn relink(&mut self, e: End, side: Side, to: End) {
        self.set_link(e, side, to);
    }

    fn reduce_once(&mut self) -> bool {
        for k in 0..self.m {
            for w in 0..self.intervals[k].len().saturating_sub(1) {
                let (x, y) = (self.intervals[k][w], self.intervals[k][w + 1]);
                for side in [Side::Upper, Side::Lower] {
                    if self.link(End::Pt(x), side) == End::Pt(y) {
                        let other = side.flip();
                        let ex = self.link(End::Pt(x), other);
                        let ey = self.link(End::Pt(y), other);
                        self.remove_point(x);
                        self.remove_point(y);
                        self.relink(ex, other, ey);
                        self.relink(ey, other, ex);
                        return true;
                    }
                }
            }
        }
        for p in 0..self.m {
            let id = self.at[p];
            let End::Pt(z) = self.punct[id].nbr else { continue };
            let left_iv = (p + self.m - 1) % self.m;
            let adjacent = self.intervals[p].first() == Some(&z) || self.intervals[left_iv].last() == Some(&z);
            if adjacent {
                let side = self.punct[id].side;
                let other_end = self.link(End::Pt(z), side.flip());
                self.remove_point(z);
                self.punct[id].side = side.flip();
                self.punct[id].nbr = other_end;
                self.relink(other_end, side.flip(), End::Pu(id));
                return true;
            }
        }
        false
    }

    pub fn reduce(&mut self) {
        while self.reduce_once() {}
    }

    fn position_of(&self, id: usize) -> usize {
        self.at.iter().position(|&x| x == id).expect("puncture present")
    }

    /// Follow the arc leaving puncture `id`; returns the far puncture id and
    /// the points met on the way.
    fn trace(&self, id: usize) -> (usize, Vec<usize>) {
        let mut side = self.punct[id].side;
        let mut e = self.punct[id].nbr;
        let mut pts = Vec::new();
        while let End::Pt(z) = e {
            pts.push(z);
            side = side.flip();
            e = self.link(End::Pt(z), side);
        }
        match e {
            End::Pu(j) => (j, pts),
            End::Pt(_) => unreachable!(),
        }
    }

    /// Canonical arcs (indexed by label) and, for each arc, its points in
    /// canonical order.
    fn canonical(&self) -> (ArcSystem, Vec<Vec<usize>>) {
        let n = self.m / 2;
        let mut arcs: Vec<Option<Arc>> = vec![None; n];
        let mut pts_of = vec![Vec::new(); n];
        for p in 0..self.m {
            let id = self.at[p];
            let label = self.punct[id].label;
            if arcs[label].is_some() {
                continue;
            }
            let (far, pts) = self.trace(id);
            let end = self.position_of(far);
            let word = pts.iter().map(|&z| self.points[z].interval).collect();
            let mut arc = Arc::new(p, self.punct[id].side, word, end);
            // p is the smaller position since positions are scanned upwards.
            if arc.crossings.is_empty() && (arc.start + 1 == arc.end || (arc.end + 1) % self.m == arc.start) {
                arc.start_side = Side::Upper;
            }
            arcs[label] = Some(arc);
            pts_of[label] = pts;
        }
        let sys = ArcSystem { punctures: self.m, arcs: arcs.into_iter().map(|a| a.expect("every label traced")).collect() };
        (sys, pts_of)
    }

    pub fn arc_system(&self) -> ArcSystem {
        self.canonical().0
    }

    /// For each interval, its points from left to right as `(label, index)`
    /// with the index taken along the canonically oriented arc.
    pub fn interval_orders(&self) -> Vec<Vec<(usize, usize)>> {
        let (_, pts_of) = self.canonical();
        let mut where_ = std::collections::HashMap::new();
        for (label, pts) in pts_of.iter().enumerate() {
            for (i, &z) in pts.iter().enumerate() {
                where_.insert(z, (label, i));
            }
        }
        self.intervals.iter().map(|iv| iv.iter().map(|z| where_[z]).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_model_matches_engine() {
        let m = PlanarModel::standard(3);
        assert_eq!(m.arc_system(), ArcSystem::standard(3));
    }

    #[test]
    fn single_twist_matches_hand_computation() {
        let mut model = PlanarModel::standard(2);
        model.half_twist(1, 1);
        let s = model.arc_system();
        assert_eq!(s.arcs[0], Arc::new(0, Side::Lower, vec![], 2));
        assert_eq!(s.arcs[1], Arc::new(1, Side::Upper, vec![], 3));
    }

    #[test]
    fn twist_and_inverse_cancel() {
        let mut model = PlanarModel::standard(3);
        for (k, s) in [(1, 1), (2, -1), (3, 1), (1, 1)] {
            model.half_twist(k, s);
        }
        for (k, s) in [(1, -1), (3, -1), (2, 1), (1, -1)] {
            model.half_twist(k, s);
        }
        assert_eq!(model.arc_system(), ArcSystem::standard(3));
        assert_eq!(model.point_count(), 0);
    }
}
