//! Quarter turn of a plat presentation: the plane is rotated so that the
//! horizontal coordinate becomes the height.
//!
//! The diagram is read on a grid (strand `j` on column `j`, braid letters as
//! short diagonals between neighbouring columns) and swept from right to left.
//! Columns give births, deaths and pass-throughs; the gaps between columns
//! give crossings. Twist regions are first turned on their side inside a small
//! disk, so each one costs a single extremum in the new direction. The Morse
//! word is then put in plat position by dragging every cap to the top and
//! every cup to the bottom in front of the other strands.

use crate::error::{Error, Result};
use crate::presentation::{EventKind, Handedness, Level, LevelEvent, PlatPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Morse {
    /// New cap at positions `p, p+1`, carrying a component label.
    Max(usize, usize),
    /// Cup closing positions `p, p+1`.
    Min(usize),
    Cross(usize, i8),
    Twist(usize, u32, i8),
}

/// Which way the moving strand of a braid letter slides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mover {
    Left,
    Right,
}

/// The strand that slides in each braid letter: runs of letters at
/// consecutive positions are read as one strand sliding across the others,
/// which stay put.
fn movers(p: &PlatPresentation) -> Vec<Mover> {
    let pos: Vec<Option<usize>> = p
        .events
        .iter()
        .map(|e| match e.kind {
            EventKind::Braid { pos, .. } => Some(pos),
            EventKind::Twist { .. } => None,
        })
        .collect();
    (0..pos.len())
        .map(|e| {
            let Some(k) = pos[e] else { return Mover::Left };
            let prev = if e > 0 { pos[e - 1] } else { None };
            let next = pos.get(e + 1).copied().flatten();
            if prev == Some(k.wrapping_sub(1)) || next == Some(k + 1) {
                Mover::Left
            } else if prev == Some(k + 1) || next == Some(k.wrapping_sub(1)) {
                Mover::Right
            } else {
                Mover::Left
            }
        })
        .collect()
}

fn maxima(d: &Drawing) -> usize {
    d.verticals.iter().filter(|v| v.top_dir == Dir::L && v.bot_dir == Dir::L).count()
}

/// Either strand of a braid letter may be drawn as the one that slides.
/// Starting from `movers`, flip single letters and whole runs while that
/// lowers the number of maxima in the rotated picture.
fn least_maxima(p: &PlatPresentation) -> Vec<Mover> {
    let mut best = movers(p);
    let Ok(d) = draw(p, &best) else { return best };
    let mut count = maxima(&d);
    let braid: Vec<Option<usize>> = p
        .events
        .iter()
        .map(|e| match e.kind {
            EventKind::Braid { pos, .. } => Some(pos),
            EventKind::Twist { .. } => None,
        })
        .collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut e = 0;
    while e < braid.len() {
        let Some(k) = braid[e] else {
            e += 1;
            continue;
        };
        let mut f = e + 1;
        let step = match braid.get(f).copied().flatten() {
            Some(q) if q == k + 1 => 1isize,
            Some(q) if q + 1 == k => -1,
            _ => 0,
        };
        while step != 0 && braid.get(f).copied().flatten().map(|q| q as isize) == Some(braid[f - 1].unwrap() as isize + step) {
            f += 1;
        }
        runs.push((e, f));
        e = f;
    }
    let flip = |m: Mover| if m == Mover::Left { Mover::Right } else { Mover::Left };
    loop {
        let start = count;
        let singles = (0..braid.len()).filter(|&e| braid[e].is_some()).map(|e| (e, e + 1));
        let candidates: Vec<(usize, usize)> = runs.iter().copied().chain(singles).collect();
        for &(a, b) in &candidates {
            let mut trial = best.clone();
            for m in &mut trial[a..b] {
                *m = flip(*m);
            }
            if let Ok(d) = draw(p, &trial) {
                let c = maxima(&d);
                if c < count {
                    count = c;
                    best = trial;
                }
            }
        }
        if count == start {
            return best;
        }
    }
}

/// Side of a vertical segment on which a horizontal piece leaves it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    L,
    R,
}

#[derive(Clone, Copy, Debug)]
struct Vertical {
    x: i64,
    top: i64,
    bot: i64,
    top_dir: Dir,
    bot_dir: Dir,
    label: usize,
}

#[derive(Clone, Copy, Debug)]
struct Open {
    x: i64,
    top: i64,
    top_dir: Dir,
    label: usize,
}

/// Rectilinear drawing of a plat diagram: vertical segments, the right ends
/// of horizontal pieces (with whether the piece passes over what it crosses)
/// and twist boxes lying on their side.
#[derive(Default)]
struct Drawing {
    verticals: Vec<Vertical>,
    pieces: std::collections::HashMap<(i64, i64), Option<bool>>,
    twists: Vec<(i64, i64, u32, i8)>,
}

const SPACING: i64 = 1 << 40;

impl Drawing {
    fn close(&mut self, o: Open, bot: i64, bot_dir: Dir) {
        self.verticals.push(Vertical { x: o.x, top: o.top, bot, top_dir: o.top_dir, bot_dir, label: o.label });
    }

    fn piece(&mut self, x_right: i64, y: i64, over: Option<bool>) {
        self.pieces.insert((x_right, y), over);
    }
}

fn between(a: i64, b: i64, num: i64, den: i64) -> Result<i64> {
    if b - a < 2 * den {
        return Err(Error::Inconsistent("rectilinear drawing ran out of room".into()));
    }
    Ok(a + (b - a) / den * num)
}

fn draw(p: &PlatPresentation, movers: &[Mover]) -> Result<Drawing> {
    let n = p.strand_count;
    let comps = p.components();
    let mut d = Drawing::default();
    let mut xs: Vec<i64> = (0..n).map(|j| (j as i64 + 1) * SPACING).collect();
    let mut at = comps.top.clone();
    let mut open: Vec<Open> = (0..n)
        .map(|j| Open { x: xs[j], top: 0, top_dir: if j % 2 == 0 { Dir::R } else { Dir::L }, label: at[j] })
        .collect();
    for j in (1..n).step_by(2) {
        d.piece(xs[j], 0, None);
    }
    for (e, ev) in p.events.iter().enumerate() {
        let y = -10 * (e as i64 + 1);
        match ev.kind {
            EventKind::Braid { pos, sign } => {
                let k = pos - 1;
                if movers[e] == Mover::Left {
                    let far = if k + 2 < n { xs[k + 2] } else { xs[k + 1] + SPACING };
                    let nx = between(xs[k + 1], far, 1, 2)?;
                    d.close(open[k], y, Dir::R);
                    d.piece(nx, y, Some(sign < 0));
                    open[k] = Open { x: nx, top: y, top_dir: Dir::L, label: at[k] };
                    xs[k] = nx;
                } else {
                    let far = if k > 0 { xs[k - 1] } else { xs[k] - SPACING };
                    let nx = between(far, xs[k], 1, 2)?;
                    d.close(open[k + 1], y, Dir::L);
                    d.piece(xs[k + 1], y, Some(sign > 0));
                    open[k + 1] = Open { x: nx, top: y, top_dir: Dir::R, label: at[k + 1] };
                    xs[k + 1] = nx;
                }
                xs.swap(k, k + 1);
                at.swap(k, k + 1);
                open.swap(k, k + 1);
            }
            EventKind::Twist { pos, half_twists, handedness } => {
                let k = pos - 1;
                let (xa, xb) = (xs[k], xs[k + 1]);
                let slides_out = k > 0
                    && matches!(p.events.get(e + 1).map(|n| &n.kind), Some(&EventKind::Braid { pos: q, .. }) if q == k)
                    && movers.get(e + 1) == Some(&Mover::Right);
                let fed = open[k + 1];
                let is_fed = fed.top_dir == Dir::L && fed.top == y + 10 && fed.x == xb;
                if slides_out && !is_fed {
                    // Both strands turn left into a box west of the left one; the
                    // left strand carries on sliding and the right one turns back.
                    let xl = xs[k - 1];
                    let xw = between(xl, xa, 1, 5)?;
                    let xq = between(xl, xa, 2, 5)?;
                    let xm = between(xl, xa, 3, 5)?;
                    let (y1, y2, y3) = (y + 1, y - 1, y - 3);
                    d.close(open[k], y1, Dir::L);
                    d.piece(xa, y1, None);
                    d.close(fed, y2, Dir::L);
                    d.piece(xb, y2, None);
                    d.twists.push((xm, y1, half_twists, handedness.sign()));
                    if half_twists % 2 == 1 {
                        at.swap(k, k + 1);
                    }
                    d.verticals.push(Vertical { x: xq, top: y2, bot: y3, top_dir: Dir::R, bot_dir: Dir::R, label: at[k + 1] });
                    d.piece(xb, y3, None);
                    open[k] = Open { x: xw, top: y1, top_dir: Dir::R, label: at[k] };
                    open[k + 1] = Open { x: xb, top: y3, top_dir: Dir::L, label: at[k + 1] };
                    xs[k] = xw;
                    continue;
                }
                let xw = between(xa, xb, 1, 5)?;
                let xm = between(xa, xb, 2, 5)?;
                let xt = between(xa, xb, 4, 5)?;
                let (yt, y1, y2, yb) = (y + 3, y + 1, y - 1, y - 3);
                if is_fed {
                    // The strand on the right slid in from the left just above:
                    // it stops at the west end of the box instead of overshooting.
                    let over = d.pieces.remove(&(xb, fed.top)).ok_or_else(|| {
                        Error::Inconsistent("rectilinear drawing lost a piece".into())
                    })?;
                    d.piece(xw, fed.top, over);
                    d.verticals.push(Vertical { x: xw, top: fed.top, bot: y1, top_dir: Dir::L, bot_dir: Dir::R, label: fed.label });
                } else {
                    // Otherwise it runs above the box to its west end.
                    d.close(fed, yt, Dir::L);
                    d.piece(xb, yt, None);
                    d.verticals.push(Vertical { x: xw, top: yt, bot: y1, top_dir: Dir::R, bot_dir: Dir::R, label: at[k + 1] });
                }
                d.close(open[k], y2, Dir::R);
                d.twists.push((xm, y1, half_twists, handedness.sign()));
                if half_twists % 2 == 1 {
                    at.swap(k, k + 1);
                }
                d.piece(xb, y1, None);
                d.piece(xt, y2, None);
                // The lower track turns back past the east end.
                d.verticals.push(Vertical { x: xt, top: y2, bot: yb, top_dir: Dir::L, bot_dir: Dir::L, label: at[k] });
                d.piece(xt, yb, None);
                open[k] = Open { x: xa, top: yb, top_dir: Dir::R, label: at[k] };
                open[k + 1] = Open { x: xb, top: y1, top_dir: Dir::L, label: at[k + 1] };
            }
        }
    }
    let bottom = -10 * (p.events.len() as i64 + 1);
    for j in 0..n {
        d.close(open[j], bottom, if j % 2 == 0 { Dir::R } else { Dir::L });
        if j % 2 == 1 {
            d.piece(xs[j], bottom, None);
        }
    }
    Ok(d)
}

/// Morse word of the rotated diagram, top (rightmost) first.
fn sweep(p: &PlatPresentation) -> Result<Vec<Morse>> {
    let d = draw(p, &least_maxima(p))?;
    let mismatch = || Error::Inconsistent("rotated sweep lost track of a strand".into());
    #[derive(Clone, Copy)]
    enum Item {
        V(Vertical),
        T(i64, i64, u32, i8),
    }
    let mut items: Vec<Item> = d.verticals.iter().map(|&v| Item::V(v)).collect();
    items.extend(d.twists.iter().map(|&(x, y, h, s)| Item::T(x, y, h, s)));
    let key = |it: &Item| match *it {
        Item::V(v) => (v.x, v.top),
        Item::T(x, y, _, _) => (x, y),
    };
    items.sort_by(|a, b| key(b).cmp(&key(a)));

    // Pieces crossing the sweep line, top first: (height, label, over).
    let mut state: Vec<(i64, usize, Option<bool>)> = Vec::new();
    let mut out = Vec::new();
    let over_of = |x: i64, y: i64| d.pieces.get(&(x, y)).copied().ok_or_else(mismatch);
    for it in items {
        match it {
            Item::T(_, y, h, s) => {
                let i = state.iter().position(|q| q.0 == y).ok_or_else(mismatch)?;
                if i + 1 >= state.len() {
                    return Err(mismatch());
                }
                out.push(Morse::Twist(i, h, s));
                if h % 2 == 1 {
                    let l = state[i].1;
                    state[i].1 = state[i + 1].1;
                    state[i + 1].1 = l;
                }
            }
            Item::V(v) => {
                let first = state.partition_point(|q| q.0 > v.top);
                let mut lo = first;
                if v.top_dir == Dir::R {
                    if state.get(first).map(|q| q.0) != Some(v.top) {
                        return Err(mismatch());
                    }
                    lo += 1;
                }
                let hi = state.partition_point(|q| q.0 > v.bot);
                let passing: Vec<(i64, usize, Option<bool>)> = state[lo..hi].to_vec();
                let sign_down = |q: &(i64, usize, Option<bool>)| -> Result<i8> {
                    // The vertical moves down past q in the rotated picture.
                    Ok(if q.2.ok_or_else(mismatch)? { 1 } else { -1 })
                };
                let sign_up = |q: &(i64, usize, Option<bool>)| -> Result<i8> { Ok(-sign_down(q)?) };
                match (v.top_dir, v.bot_dir) {
                    (Dir::R, Dir::R) => {
                        if state.get(hi).map(|q| q.0) != Some(v.bot) {
                            return Err(mismatch());
                        }
                        for (t, q) in passing.iter().enumerate() {
                            out.push(Morse::Cross(first + t, sign_down(q)?));
                        }
                        out.push(Morse::Min(hi - 1));
                        state.remove(hi);
                        state.remove(first);
                    }
                    (Dir::L, Dir::L) => {
                        out.push(Morse::Max(hi, v.label));
                        for (t, q) in passing.iter().enumerate().rev() {
                            out.push(Morse::Cross(lo + t, sign_up(q)?));
                        }
                        state.insert(hi, (v.bot, v.label, over_of(v.x, v.bot)?));
                        state.insert(lo, (v.top, v.label, over_of(v.x, v.top)?));
                    }
                    (Dir::R, Dir::L) => {
                        if state[first].1 != v.label {
                            return Err(mismatch());
                        }
                        for (t, q) in passing.iter().enumerate() {
                            out.push(Morse::Cross(first + t, sign_down(q)?));
                        }
                        state.remove(first);
                        state.insert(hi - 1, (v.bot, v.label, over_of(v.x, v.bot)?));
                    }
                    (Dir::L, Dir::R) => {
                        if state.get(hi).map(|q| (q.0, q.1)) != Some((v.bot, v.label)) {
                            return Err(mismatch());
                        }
                        for (t, q) in passing.iter().enumerate().rev() {
                            out.push(Morse::Cross(lo + t, sign_up(q)?));
                        }
                        state.remove(hi);
                        state.insert(lo, (v.top, v.label, over_of(v.x, v.top)?));
                    }
                }
            }
        }
    }
    if !state.is_empty() {
        return Err(mismatch());
    }
    Ok(out)
}

/// Sliding the strand at `from` to `to` in front of the strands it passes.
fn slide_in_front(from: usize, to: usize, out: &mut Vec<(usize, i8)>) {
    if from < to {
        out.extend((from..to).map(|k| (k, -1)));
    } else {
        out.extend((to..from).rev().map(|k| (k, 1)));
    }
}

/// Plat position of a Morse word: letters, twists and the label of each cap.
fn to_plat(word: &[Morse]) -> (usize, Vec<EventKind>, Vec<usize>) {
    let caps = word.iter().filter(|w| matches!(w, Morse::Max(..))).count();
    let mut events = Vec::new();
    let mut labels = Vec::with_capacity(caps);
    let mut active = 0;
    let mut dead = 0;
    let mut letters = Vec::new();
    for w in word {
        letters.clear();
        match *w {
            Morse::Max(p, label) => {
                let u = active + dead;
                slide_in_front(u, p, &mut letters);
                slide_in_front(u + 1, p + 1, &mut letters);
                active += 2;
                labels.push(label);
            }
            Morse::Min(p) => {
                slide_in_front(p + 1, active - 1, &mut letters);
                slide_in_front(p, active - 2, &mut letters);
                active -= 2;
                dead += 2;
            }
            Morse::Cross(p, sign) => letters.push((p, sign)),
            Morse::Twist(p, half_twists, sign) => {
                let handedness = if sign > 0 { Handedness::Right } else { Handedness::Left };
                events.push(EventKind::Twist { pos: p + 1, half_twists, handedness });
            }
        }
        events.extend(letters.iter().map(|&(k, sign)| EventKind::Braid { pos: k + 1, sign }));
    }
    (2 * caps, events, labels)
}

/// The rotated presentation, with `labels[c]` the component of the result
/// that corresponds to component `c` of the input.
pub fn quarter_turn(p: &PlatPresentation) -> Result<(PlatPresentation, Vec<usize>)> {
    let word = sweep(p)?;
    let (strands, kinds, cap_labels) = to_plat(&word);
    let total = kinds.len() as i64;
    let events = kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| LevelEvent { level: Level::from_integer(total - i as i64), kind })
        .collect();
    let q = PlatPresentation::new(strands, events).with_components();
    let comps = q.components();
    let count = p.components().count;
    let mut labels = vec![usize::MAX; count];
    for (i, &h) in cap_labels.iter().enumerate() {
        let v = comps.top[2 * i];
        if labels[h] != usize::MAX && labels[h] != v {
            return Err(Error::Inconsistent(format!("component {h} maps to two rotated components")));
        }
        labels[h] = v;
    }
    let mut seen = labels.clone();
    seen.sort_unstable();
    seen.dedup();
    if comps.count != count || seen.len() != count || labels.contains(&usize::MAX) {
        return Err(Error::Inconsistent("rotation changed the component structure".into()));
    }
    Ok((q, labels))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{component_count, determinant, split_components};
    use crate::presentation::{level, LevelEvent};
    use proptest::prelude::*;

    fn plat(n: usize, word: &[(usize, i8, u32)]) -> PlatPresentation {
        let len = word.len() as i64;
        let events = word
            .iter()
            .enumerate()
            .map(|(i, &(k, s, t))| {
                let lv = level(len - i as i64, 1);
                if t == 0 {
                    LevelEvent::braid(lv, k, s)
                } else {
                    LevelEvent::twist(lv, k, t)
                }
            })
            .collect();
        PlatPresentation::new(n, events)
    }

    #[test]
    fn trivial_plats() {
        let (v, labels) = quarter_turn(&plat(2, &[])).unwrap();
        assert_eq!(v.strand_count, 2);
        assert_eq!(labels, vec![0]);
        let (v, _) = quarter_turn(&plat(6, &[])).unwrap();
        assert_eq!(component_count(&v), 3);
    }

    #[test]
    fn figure_eight_keeps_its_determinant() {
        let p = plat(4, &[(2, 1, 0), (2, 1, 0), (1, -1, 0), (2, 1, 0)]);
        let (v, _) = quarter_turn(&p).unwrap();
        assert!(v.is_valid());
        assert_eq!(determinant(&v), determinant(&p));
        assert_eq!(v.strand_count, 4);
    }

    fn word() -> impl Strategy<Value = (usize, Vec<(usize, i8, u32)>)> {
        (2usize..=4).prop_flat_map(|b| {
            let n = 2 * b;
            let letter = (1..n, prop_oneof![Just(1i8), Just(-1i8)], prop_oneof![4 => Just(0u32), 1 => Just(2u32), 1 => Just(4u32)]);
            (Just(n), proptest::collection::vec(letter, 0..12))
        })
    }

    proptest! {
        #[test]
        fn rotation_keeps_the_link((n, w) in word()) {
            let p = plat(n, &w);
            let (v, labels) = quarter_turn(&p).unwrap();
            prop_assert!(v.is_valid());
            let count = component_count(&p);
            prop_assert_eq!(component_count(&v), count);
            prop_assert_eq!(determinant(&v), determinant(&p));
            let hp = split_components(&p);
            let vp = split_components(&v);
            for c in 0..count {
                prop_assert_eq!(determinant(&hp[c]), determinant(&vp[labels[c]]));
            }
        }
    }
}
