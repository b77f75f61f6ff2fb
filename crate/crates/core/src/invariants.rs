//! Component structure and determinants of plat presentations.
//!
//! The determinant is computed twice: from a Goeritz matrix of the
//! checkerboard-coloured plat diagram, and from the Kauffman bracket at
//! `A = exp(i pi / 4)` evaluated by a Temperley-Lieb transfer over planar
//! matchings. The two paths share nothing but the event word.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{EventKind, LevelEvent, PlatPresentation};

pub fn component_count(p: &PlatPresentation) -> usize {
    p.components().count
}

/// For each event, the labels of the two strands it involves.
fn event_labels(p: &PlatPresentation) -> Vec<(usize, usize)> {
    let comps = p.components();
    let mut occupant = comps.top.clone();
    let mut out = Vec::with_capacity(p.events.len());
    for ev in &p.events {
        let k = ev.kind.pos() - 1;
        out.push((occupant[k], occupant[k + 1]));
        if let EventKind::Braid { .. } = ev.kind {
            occupant.swap(k, k + 1);
        }
    }
    out
}

/// One sub-presentation per component (in label order), obtained by deleting
/// the strands of every other component.
pub fn split_components(p: &PlatPresentation) -> Vec<PlatPresentation> {
    let comps = p.components();
    if comps.count == 1 {
        return vec![p.clone()];
    }
    let labels = event_labels(p);
    (0..comps.count)
        .map(|c| {
            let mut occupant = comps.top.clone();
            let mut events = Vec::new();
            for (ev, &(a, b)) in p.events.iter().zip(&labels) {
                let k = ev.kind.pos() - 1;
                if a == c && b == c {
                    let pos = occupant[..k].iter().filter(|&&x| x == c).count() + 1;
                    let kind = match ev.kind {
                        EventKind::Braid { sign, .. } => EventKind::Braid { pos, sign },
                        EventKind::Twist { half_twists, handedness, .. } => {
                            EventKind::Twist { pos, half_twists, handedness }
                        }
                    };
                    events.push(LevelEvent { level: ev.level, kind });
                }
                if let EventKind::Braid { .. } = ev.kind {
                    occupant.swap(k, k + 1);
                }
            }
            let strands = comps.top.iter().filter(|&&x| x == c).count();
            let mut q = PlatPresentation::new(strands, events);
            q.meta = p.meta.clone();
            if let Some(meta) = q.meta.as_mut() {
                meta.family = Some(format!("component {c}"));
            }
            q
        })
        .collect()
}

/// Number of top closure arcs belonging to component `label`.
pub fn top_arcs(p: &PlatPresentation, label: usize) -> Result<usize> {
    let comps = p.components();
    if label >= comps.count {
        return Err(Error::Params(format!("no component {label} (have {})", comps.count)));
    }
    Ok(comps.top.iter().step_by(2).filter(|&&x| x == label).count())
}

/// V-maxima of a component of a V-presentation.
pub fn v_maxima(p: &PlatPresentation, label: usize) -> Result<usize> {
    top_arcs(p, label)
}

/// H-maxima of a component of an H-presentation.
pub fn h_maxima(p: &PlatPresentation, label: usize) -> Result<usize> {
    top_arcs(p, label)
}

/// Braid letters `(0-based position, sign)` with twist regions expanded.
fn letters(p: &PlatPresentation) -> Vec<(usize, i8)> {
    let mut out = Vec::new();
    for ev in &p.events {
        match ev.kind {
            EventKind::Braid { pos, sign } => out.push((pos - 1, sign)),
            EventKind::Twist { pos, half_twists, handedness } => {
                out.extend(std::iter::repeat_n((pos - 1, handedness.sign()), half_twists as usize))
            }
        }
    }
    out
}

/// Goeritz matrix of the plat diagram. White regions are the pieces of the
/// gaps between strands `j` and `j+1` for odd `j` (1-based), cut at the
/// crossings in that gap; the even gaps belong to the unbounded black region.
pub fn goeritz_matrix(p: &PlatPresentation) -> Vec<Vec<i64>> {
    let n = p.strand_count;
    // current region id of each odd gap, indexed by 0-based gap (g = j-1)
    let mut current = vec![usize::MAX; n];
    let mut count = 0;
    for g in (0..n.saturating_sub(1)).step_by(2) {
        current[g] = count;
        count += 1;
    }
    let mut pairs: Vec<(usize, usize, i64)> = Vec::new();
    for (k, s) in letters(p) {
        // crossing between strands k+1 and k+2 (1-based) sits in gap k
        if k % 2 == 0 {
            let above = current[k];
            current[k] = count;
            count += 1;
            pairs.push((above, current[k], -(s as i64)));
        } else {
            pairs.push((current[k - 1], current[k + 1], s as i64));
        }
    }
    let mut g = vec![vec![0i64; count]; count];
    for (a, b, eta) in pairs {
        if a != b {
            g[a][b] -= eta;
            g[b][a] -= eta;
            g[a][a] += eta;
            g[b][b] += eta;
        }
    }
    g
}

/// Exact determinant by fraction-free Gaussian elimination.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Link determinant from the Goeritz matrix with one row and column removed.
pub fn determinant(p: &PlatPresentation) -> BigInt {
    let g = goeritz_matrix(p);
    let minor: Vec<Vec<BigInt>> =
        g.iter().skip(1).map(|row| row.iter().skip(1).map(|&x| BigInt::from(x)).collect()).collect();
    bareiss(minor).abs()
}

/// Element of `Z[zeta]`, `zeta = exp(i pi / 4)`, on the basis `1, zeta, zeta^2, zeta^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Cyclo([BigInt; 4]);

impl Cyclo {
    fn zero() -> Self {
        Cyclo(Default::default())
    }

    fn one() -> Self {
        let mut c = Cyclo::zero();
        c.0[0] = BigInt::from(1);
        c
    }

    /// Multiply by `zeta^j`.
    fn times_zeta(&self, j: i32) -> Self {
        let j = j.rem_euclid(8) as usize;
        let mut out = Cyclo::zero();
        for (i, c) in self.0.iter().enumerate() {
            let e = i + j;
            let (idx, neg) = ((e % 4), (e / 4) % 2 == 1);
            out.0[idx] = if neg { &out.0[idx] - c } else { &out.0[idx] + c };
        }
        out
    }

    fn add_assign(&mut self, o: &Cyclo) {
        for i in 0..4 {
            self.0[i] += &o.0[i];
        }
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

fn cap_matching(n: usize) -> Vec<u8> {
    (0..n).map(|i| (i ^ 1) as u8).collect()
}

/// Number of loops closed off by joining a matching to the bottom cups.
fn closing_loops(state: &[u8]) -> usize {
    let n = state.len();
    let mut seen = vec![false; n];
    let mut loops = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        loops += 1;
        let mut x = s;
        loop {
            seen[x] = true;
            let y = state[x] as usize;
            seen[y] = true;
            x = y ^ 1;
            if seen[x] {
                break;
            }
        }
    }
    loops
}

/// Kauffman bracket at `A = zeta`, normalised so the unknot has bracket 1.
fn bracket(p: &PlatPresentation) -> Cyclo {
    let n = p.strand_count;
    let mut states: HashMap<Vec<u8>, Cyclo> = HashMap::new();
    states.insert(cap_matching(n), Cyclo::one());
    for (k, s) in letters(p) {
        let (a_id, a_cup) = if s > 0 { (1, -1) } else { (-1, 1) };
        let mut next: HashMap<Vec<u8>, Cyclo> = HashMap::with_capacity(states.len() * 2);
        for (st, c) in states {
            if c.is_zero() {
                continue;
            }
            next.entry(st.clone()).or_insert_with(Cyclo::zero).add_assign(&c.times_zeta(a_id));
            // cup-cap smoothing; a closed loop contributes delta = 0
            if st[k] as usize != k + 1 {
                let (x, y) = (st[k] as usize, st[k + 1] as usize);
                let mut t = st;
                t[k] = (k + 1) as u8;
                t[k + 1] = k as u8;
                t[x] = y as u8;
                t[y] = x as u8;
                next.entry(t).or_insert_with(Cyclo::zero).add_assign(&c.times_zeta(a_cup));
            }
        }
        states = next;
    }
    let mut total = Cyclo::zero();
    for (st, c) in &states {
        if closing_loops(st) == 1 {
            total.add_assign(c);
        }
    }
    total
}

/// Determinant as `|<L>|` at `A = exp(i pi / 4)`. The bracket there is a unit
/// times an integer; anything else is reported as inconsistent.
pub fn bracket_determinant(p: &PlatPresentation) -> Result<BigInt> {
    let b = bracket(p);
    let nonzero: Vec<&BigInt> = b.0.iter().filter(|c| !c.is_zero()).collect();
    match nonzero.len() {
        0 => Ok(BigInt::zero()),
        1 => Ok(nonzero[0].abs()),
        _ => Err(Error::Inconsistent(format!("bracket value {:?} is not a unit multiple of an integer", b.0))),
    }
}

/// Determinant by both paths; an error if they disagree.
pub fn checked_determinant(p: &PlatPresentation) -> Result<u64> {
    let g = determinant(p);
    let b = bracket_determinant(p)?;
    if g != b {
        return Err(Error::Inconsistent(format!("Goeritz determinant {g} but bracket gives {b}")));
    }
    g.to_u64().ok_or_else(|| Error::Inconsistent(format!("determinant {g} out of range")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "unknot-by-bridge-1")]
    UnknotByBridge1,
    #[serde(rename = "candidate-4_1")]
    Candidate41,
    #[serde(rename = "candidate-5_2")]
    Candidate52,
    #[serde(rename = "other")]
    Other,
}

/// Tag for the companion component from its determinant and the parity of n.
pub fn classify_companion(component: &PlatPresentation, n_even: bool) -> Result<Classification> {
    let d = checked_determinant(component)?;
    Ok(match (d, n_even) {
        (5, true) => Classification::Candidate41,
        (7, false) => Classification::Candidate52,
        _ => Classification::Other,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub label: usize,
    /// Bottom strand positions (1-based) of the component in the H-presentation.
    pub strands: Vec<usize>,
    pub v_maxima: usize,
    pub h_maxima: usize,
    pub determinant: u64,
    pub classification: Classification,
}

/// Per-component report. `v_label[c]` is the label in `v` of H-component `c`.
pub fn component_reports(
    h: &PlatPresentation,
    v: &PlatPresentation,
    v_label: &[usize],
    n_even: bool,
) -> Result<Vec<ComponentReport>> {
    let comps = h.components();
    if v_label.len() != comps.count || component_count(v) != comps.count {
        return Err(Error::Inconsistent("H and V presentations have different component counts".into()));
    }
    let parts = split_components(h);
    let mut out = Vec::new();
    for (c, part) in parts.iter().enumerate() {
        let vmax = v_maxima(v, v_label[c])?;
        let hmax = h_maxima(h, c)?;
        let determinant = checked_determinant(part)?;
        let classification = if vmax == 1 {
            Classification::UnknotByBridge1
        } else {
            classify_companion(part, n_even)?
        };
        let strands = (0..h.strand_count).filter(|&b| comps.bottom[b] == c).map(|b| b + 1).collect();
        out.push(ComponentReport { label: c, strands, v_maxima: vmax, h_maxima: hmax, determinant, classification });
    }
    Ok(out)
}

/// What the construction predicts for a generated `L_{m,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub component_count: usize,
    pub v_strand_count: usize,
    pub one_maximum_components: usize,
    pub companion_v_maxima: usize,
    pub companion_classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub component_count: usize,
    pub h_strand_count: usize,
    pub v_strand_count: usize,
    /// Label of the component through the leftmost top arc.
    pub companion: usize,
    pub components: Vec<ComponentReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    /// Whether every expected value was met; absent without expectations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
}

/// Component reports for an H-presentation, with its V-presentation obtained
/// by a quarter turn. Generated links are compared against the predicted
/// structure.
pub fn link_report(h: &PlatPresentation) -> Result<LinkReport> {
    if let Some(v) = h.validate().first() {
        return Err(Error::Presentation(v.to_string()));
    }
    if h.meta.as_ref().and_then(|m| m.sphere) == Some(crate::presentation::SphereKind::V) {
        return Err(Error::Params("expected a presentation with respect to H".into()));
    }
    let (v, labels) = crate::rotate::quarter_turn(h)?;
    let meta = h.meta.clone().unwrap_or_default();
    let n = meta.n.unwrap_or(h.bridge_number());
    let components = component_reports(h, &v, &labels, n.is_multiple_of(2))?;
    let companion = h.components().top[0];
    let expected = match (meta.m, meta.family.as_deref()) {
        (Some(m), Some("link")) => Some(Expected {
            component_count: m - 1,
            v_strand_count: 2 * m,
            one_maximum_components: m - 2,
            companion_v_maxima: 2,
            companion_classification: if n.is_multiple_of(2) {
                Classification::Candidate41
            } else {
                Classification::Candidate52
            },
        }),
        _ => None,
    };
    let matches_expected = expected.as_ref().map(|e| {
        let ones = components.iter().filter(|c| c.label != companion && c.v_maxima == 1).count();
        let comp = &components[companion];
        e.component_count == components.len()
            && e.v_strand_count == v.strand_count
            && e.one_maximum_components == ones
            && e.companion_v_maxima == comp.v_maxima
            && e.companion_classification == comp.classification
    });
    Ok(LinkReport {
        component_count: components.len(),
        h_strand_count: h.strand_count,
        v_strand_count: v.strand_count,
        companion,
        components,
        expected,
        matches_expected,
    })
}
