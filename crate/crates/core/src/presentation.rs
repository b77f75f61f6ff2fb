//! Links as level presentations on a fixed number of vertical strands.
//!
//! A [`PlatPresentation`] is a word of [`LevelEvent`]s read from the top of the
//! picture downwards, closed off by the standard plat caps: at the top and at
//! the bottom, strand `2i-1` is joined to strand `2i`. Positions are 1-based
//! throughout the public surface and in the JSON format.
//!
//! Crossing convention: a braid letter at position `k` with sign `+1` is a
//! right-handed crossing. Reading downwards, the strand travelling from
//! position `k` to `k+1` passes behind the strand travelling from `k+1` to `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact height of an event or of a level sphere.
pub type Level = Ratio<i64>;

pub fn level(numer: i64, denom: i64) -> Level {
    Ratio::new(numer, denom)
}

pub fn format_level(l: &Level) -> String {
    format!("{}/{}", l.numer(), l.denom())
}

pub fn parse_level(s: &str) -> Result<Level> {
    let s = s.trim();
    let bad = || Error::Presentation(format!("bad rational level {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => match s.split_once('.') {
            Some((a, b)) if !b.is_empty() && b.len() < 10 && b.bytes().all(|c| c.is_ascii_digit()) => {
                let scale = 10i64.pow(b.len() as u32);
                let whole: i64 = if a.is_empty() || a == "-" { 0 } else { a.parse().map_err(|_| bad())? };
                let frac: i64 = b.parse().map_err(|_| bad())?;
                let sign = if a.starts_with('-') { -1 } else { 1 };
                Ok(Ratio::new(whole * scale + sign * frac, scale))
            }
            Some(_) => Err(bad()),
            None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
        },
    }
}

mod level_serde {
    use super::{format_level, parse_level, Level};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(l: &Level, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_level(l))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Level, D::Error> {
        let s = String::deserialize(d)?;
        parse_level(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    #[default]
    Right,
    Left,
}

impl Handedness {
    /// Sign of the braid letters a twist region of this handedness expands to.
    pub fn sign(self) -> i8 {
        match self {
            Handedness::Right => 1,
            Handedness::Left => -1,
        }
    }

    fn is_right(h: &Handedness) -> bool {
        *h == Handedness::Right
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EventKind {
    Braid {
        pos: usize,
        sign: i8,
    },
    Twist {
        pos: usize,
        half_twists: u32,
        #[serde(default, skip_serializing_if = "Handedness::is_right")]
        handedness: Handedness,
    },
}

impl EventKind {
    pub fn pos(&self) -> usize {
        match *self {
            EventKind::Braid { pos, .. } | EventKind::Twist { pos, .. } => pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelEvent {
    #[serde(with = "level_serde")]
    pub level: Level,
    #[serde(flatten)]
    pub kind: EventKind,
}

impl LevelEvent {
    pub fn braid(level: Level, pos: usize, sign: i8) -> Self {
        LevelEvent { level, kind: EventKind::Braid { pos, sign } }
    }

    pub fn twist(level: Level, pos: usize, half_twists: u32) -> Self {
        LevelEvent {
            level,
            kind: EventKind::Twist { pos, half_twists, handedness: Handedness::Right },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SphereKind {
    H,
    V,
}

/// Generator parameters carried along with generated presentations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<u32>>,
    /// Distinguished crossing sites as `[x, y]` pairs, y a rational string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub staircase: Option<Vec<(usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere: Option<SphereKind>,
    /// `"link"` for L_{m,n}, `"knot"` for K_{m,n}, free text otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Height of the topmost level sphere; all events lie strictly below it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlatPresentation {
    pub strand_count: usize,
    pub events: Vec<LevelEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    /// Component label of each bottom strand (entry `i` is strand `i+1`).
    /// Derived data; when present in an input file it is checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_of_strand: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub event: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.event {
            Some(i) => write!(f, "event {i}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Per-component structure of the plat closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Label of the strand that starts at each top position.
    pub top: Vec<usize>,
    /// Label of the strand that ends at each bottom position.
    pub bottom: Vec<usize>,
    pub count: usize,
}

impl PlatPresentation {
    pub fn new(strand_count: usize, events: Vec<LevelEvent>) -> Self {
        PlatPresentation { strand_count, events, meta: None, component_of_strand: None }
    }

    pub fn bridge_number(&self) -> usize {
        self.strand_count / 2
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.strand_count;
        if n == 0 || !n.is_multiple_of(2) {
            out.push(Violation {
                event: None,
                message: format!("strand count {n} is not a positive even integer"),
            });
        }
        for (i, ev) in self.events.iter().enumerate() {
            if i > 0 && ev.level >= self.events[i - 1].level {
                out.push(Violation {
                    event: Some(i),
                    message: format!(
                        "levels not strictly decreasing ({} after {})",
                        format_level(&ev.level),
                        format_level(&self.events[i - 1].level)
                    ),
                });
            }
            let pos = ev.kind.pos();
            if pos == 0 || pos + 1 > n {
                out.push(Violation {
                    event: Some(i),
                    message: format!("position {pos} out of range 1..{}", n.saturating_sub(1)),
                });
            }
            match ev.kind {
                EventKind::Braid { sign, .. } if sign != 1 && sign != -1 => out.push(Violation {
                    event: Some(i),
                    message: format!("braid sign {sign} is not +1 or -1"),
                }),
                EventKind::Twist { half_twists, .. } if half_twists < 2 || half_twists % 2 != 0 => {
                    out.push(Violation {
                        event: Some(i),
                        message: format!("odd or too small half-twist count {half_twists}"),
                    })
                }
                _ => {}
            }
        }
        if let Some(top) = self.meta.as_ref().and_then(|m| m.top.as_deref()) {
            match parse_level(top) {
                Ok(t) => {
                    if let Some(first) = self.events.first() {
                        if first.level >= t {
                            out.push(Violation {
                                event: Some(0),
                                message: "event above the top level sphere".into(),
                            });
                        }
                    }
                }
                Err(e) => out.push(Violation { event: None, message: e.to_string() }),
            }
        }
        if let Some(given) = &self.component_of_strand {
            if out.is_empty() {
                let comps = self.components();
                if *given != comps.bottom {
                    out.push(Violation {
                        event: None,
                        message: "component_of_strand disagrees with the plat closure".into(),
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `perm[i]` is the bottom position (0-based) reached by the strand
    /// starting at top position `i`.
    pub fn induced_permutation(&self) -> Vec<usize> {
        // occupant[p] = top position of the strand currently at p
        let mut occupant: Vec<usize> = (0..self.strand_count).collect();
        for ev in &self.events {
            if let EventKind::Braid { pos, .. } = ev.kind {
                occupant.swap(pos - 1, pos);
            }
        }
        let mut perm = vec![0; self.strand_count];
        for (p, &t) in occupant.iter().enumerate() {
            perm[t] = p;
        }
        perm
    }

    pub fn top_level(&self) -> Level {
        if let Some(t) = self.meta.as_ref().and_then(|m| m.top.as_deref()) {
            if let Ok(l) = parse_level(t) {
                return l;
            }
        }
        match self.events.first() {
            Some(e) => e.level.floor() + Level::one(),
            None => Level::zero(),
        }
    }

    /// The heights at which every puncture lies on the reference loop. For
    /// generated presentations this is the integer heights `0..=2m-1` together
    /// with the half-integers `2.5..=2m-3.5`; hand-written inputs without `m`
    /// accept any height.
    pub fn special_levels(&self) -> Option<Vec<Level>> {
        let m = self.meta.as_ref()?.m?;
        if self.meta.as_ref()?.sphere == Some(SphereKind::V) {
            return None;
        }
        let mut out: Vec<Level> = (0..2 * m as i64).map(Level::from_integer).collect();
        let mut h = level(5, 2);
        while h <= level(4 * m as i64 - 7, 2) {
            out.push(h);
            h += Level::one();
        }
        out.sort();
        Some(out)
    }

    pub fn is_special(&self, s: &Level) -> bool {
        match self.special_levels() {
            Some(ls) => ls.contains(s),
            None => true,
        }
    }

    /// Events strictly above `s`, i.e. everything the level sphere has swept
    /// through on its way down from the top to height `s`.
    pub fn prefix_to_level(&self, s: &Level) -> Result<PlatPresentation> {
        if !self.is_special(s) {
            return Err(Error::Level(format_level(s)));
        }
        let mut p = self.clone();
        p.events.retain(|e| e.level >= *s);
        p.component_of_strand = None;
        Ok(p)
    }

    /// Replace every twist region by its run of equal-sign braid letters.
    pub fn expand_twists(&self) -> PlatPresentation {
        let mut events = Vec::with_capacity(self.events.len());
        for (i, ev) in self.events.iter().enumerate() {
            match ev.kind {
                EventKind::Braid { .. } => events.push(ev.clone()),
                EventKind::Twist { pos, half_twists, handedness } => {
                    let above = if i == 0 { ev.level + Level::one() } else { self.events[i - 1].level };
                    let t = half_twists as i64;
                    for j in 0..t {
                        let lv = ev.level + (above - ev.level) * level(t - 1 - j, t);
                        events.push(LevelEvent::braid(lv, pos, handedness.sign()));
                    }
                }
            }
        }
        PlatPresentation {
            strand_count: self.strand_count,
            events,
            meta: self.meta.clone(),
            component_of_strand: None,
        }
    }

    /// Cancel adjacent inverse braid letters at the same position
    /// (Reidemeister II on the event word), repeatedly.
    pub fn cancel_inverse_pairs(&self) -> PlatPresentation {
        let mut kept: Vec<LevelEvent> = Vec::with_capacity(self.events.len());
        for ev in &self.events {
            if let (Some(last), EventKind::Braid { pos, sign }) = (kept.last(), &ev.kind) {
                if let EventKind::Braid { pos: p2, sign: s2 } = last.kind {
                    if p2 == *pos && s2 == -*sign {
                        kept.pop();
                        continue;
                    }
                }
            }
            kept.push(ev.clone());
        }
        let mut p = self.clone();
        p.events = kept;
        p.component_of_strand = None;
        p
    }

    pub fn components(&self) -> Components {
        let n = self.strand_count;
        let perm = self.induced_permutation();
        // Nodes: top endpoints 0..n, bottom endpoints n..2n.
        let mut uf = UnionFind::new(2 * n);
        for i in (0..n).step_by(2) {
            if i + 1 < n {
                uf.union(i, i + 1);
                uf.union(n + i, n + i + 1);
            }
        }
        for (t, &b) in perm.iter().enumerate() {
            uf.union(t, n + b);
        }
        let mut labels: BTreeMap<usize, usize> = BTreeMap::new();
        let mut bottom = vec![0; n];
        for b in 0..n {
            let r = uf.find(n + b);
            let next = labels.len();
            bottom[b] = *labels.entry(r).or_insert(next);
        }
        let top = (0..n).map(|t| bottom[perm[t]]).collect();
        Components { top, bottom, count: labels.len() }
    }

    pub fn with_components(mut self) -> Self {
        self.component_of_strand = Some(self.components().bottom);
        self
    }

    pub fn split(&self) -> BridgeSplit {
        BridgeSplit::standard(
            self.meta.as_ref().and_then(|m| m.sphere).unwrap_or(SphereKind::H),
            self.bridge_number(),
        )
    }
}

/// Bookkeeping for the bridge sphere at the bottom of a plat presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeSplit {
    pub sphere: SphereKind,
    pub bridge_number: usize,
    /// Punctures `p_1..p_{2n}` in order along the reference loop.
    pub punctures: Vec<usize>,
    /// `intervals[i] = (a, b)`: interval `i+1` runs from `p_a` to `p_b`.
    pub intervals: Vec<(usize, usize)>,
    /// Interval index (1-based) carrying the lower shadow arc of each bridge.
    pub lower_shadow: Vec<usize>,
}

impl BridgeSplit {
    pub fn standard(sphere: SphereKind, bridge_number: usize) -> Self {
        let m = 2 * bridge_number;
        BridgeSplit {
            sphere,
            bridge_number,
            punctures: (1..=m).collect(),
            intervals: (1..=m).map(|i| (i, i % m + 1)).collect(),
            lower_shadow: (1..=bridge_number).map(|i| 2 * i - 1).collect(),
        }
    }

    pub fn check(&self) -> bool {
        let m = 2 * self.bridge_number;
        let mut seen = vec![false; m + 1];
        for &k in &self.lower_shadow {
            let (a, b) = self.intervals[k - 1];
            for p in [a, b] {
                if seen[p] {
                    return false;
                }
                seen[p] = true;
            }
        }
        seen[1..].iter().all(|&s| s)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
