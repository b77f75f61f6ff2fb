//! The knot K_{m,n} and the links L_{m,n} as level presentations.
//!
//! Columns and heights follow the planar picture of the diagram: the
//! distinguished crossing sites are `(x, y)` points of a highlighted grid and
//! the twist region replacing the crossing at height `y` occupies the heights
//! between `y` and `y + 1/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{format_level, level, Level, LevelEvent, Meta, PlatPresentation, SphereKind};
use crate::rotate::quarter_turn;

/// A crossing site `(column, height)`.
pub type Site = (usize, Level);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub m: usize,
    pub n: usize,
    /// One site per highlighted row, bottom row first.
    pub staircase: Vec<(usize, String)>,
    pub twists: Vec<u32>,
}

fn check_mn(m: usize, n: usize) -> Result<()> {
    if !(3 < m && m < n) {
        return Err(Error::Params(format!("need 3 < m < n, got m = {m}, n = {n}")));
    }
    Ok(())
}

/// Row heights of the highlighted grid, bottom first.
pub fn row_heights(m: usize) -> Vec<Level> {
    (0..m - 2).map(|r| level(5 + 4 * r as i64, 2)).collect()
}

/// Highlighted crossing sites, grouped by row from the bottom.
pub fn highlighted_grid(m: usize, n: usize) -> Result<Vec<Vec<Site>>> {
    check_mn(m, n)?;
    let rows = row_heights(m);
    let mut out = Vec::with_capacity(rows.len());
    for (r, &y) in rows.iter().enumerate() {
        if r == 0 {
            out.push(vec![(5, y)]);
        } else if r == rows.len() - 1 {
            out.push(vec![(2 * n - 2, y)]);
        } else {
            out.push((7..=2 * n - 3).step_by(2).map(|x| (x, y)).collect());
        }
    }
    Ok(out)
}

/// The monotone staircase placed as far right as possible.
pub fn default_staircase(m: usize, n: usize) -> Result<Vec<Site>> {
    let grid = highlighted_grid(m, n)?;
    let rows = grid.len();
    let mut out = Vec::with_capacity(rows);
    for (r, row) in grid.iter().enumerate() {
        if r == 0 || r == rows - 1 {
            out.push(row[0]);
        } else {
            // middle rows use the last m-3 columns, one per row
            let from_top = rows - 1 - r;
            out.push(row[row.len() - from_top]);
        }
    }
    Ok(out)
}

/// Every monotone staircase on the grid.
pub fn all_staircases(m: usize, n: usize) -> Result<Vec<Vec<Site>>> {
    let grid = highlighted_grid(m, n)?;
    let mut out = Vec::new();
    let mut cur: Vec<Site> = vec![grid[0][0]];
    fn rec(grid: &[Vec<Site>], r: usize, cur: &mut Vec<Site>, out: &mut Vec<Vec<Site>>) {
        if r == grid.len() {
            out.push(cur.clone());
            return;
        }
        for &site in &grid[r] {
            if site.0 > cur.last().expect("nonempty").0 {
                cur.push(site);
                rec(grid, r + 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(&grid, 1, &mut cur, &mut out);
    Ok(out)
}

impl GeneratorParams {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        let stairs = default_staircase(m, n)?;
        Ok(GeneratorParams {
            m,
            n,
            staircase: stairs.iter().map(|(x, y)| (*x, format_level(y))).collect(),
            twists: vec![2; m - 2],
        })
    }

    pub fn with_twists(mut self, twists: Vec<u32>) -> Self {
        self.twists = twists;
        self
    }

    pub fn sites(&self) -> Result<Vec<Site>> {
        self.staircase
            .iter()
            .map(|(x, y)| Ok((*x, crate::presentation::parse_level(y)?)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        check_mn(self.m, self.n)?;
        let grid = highlighted_grid(self.m, self.n)?;
        let sites = self.sites()?;
        if sites.len() != grid.len() {
            return Err(Error::Params(format!("staircase needs {} sites, got {}", grid.len(), sites.len())));
        }
        for (r, site) in sites.iter().enumerate() {
            if !grid[r].contains(site) {
                return Err(Error::Params(format!(
                    "site ({}, {}) is not a highlighted crossing of row {}",
                    site.0,
                    format_level(&site.1),
                    r + 1
                )));
            }
            if r > 0 && site.0 <= sites[r - 1].0 {
                return Err(Error::Params("staircase is not monotone".into()));
            }
        }
        if self.twists.len() != grid.len() {
            return Err(Error::Params(format!("need {} twist counts, got {}", grid.len(), self.twists.len())));
        }
        if let Some(t) = self.twists.iter().find(|&&t| t < 2 || t % 2 != 0) {
            return Err(Error::Params(format!("twist count {t} is not even and at least 2")));
        }
        Ok(())
    }
}

/// A position counted from the left (`L(k)`, 1-based) or from the right end
/// (`R(k)` is `2n+1-k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    L(usize),
    R(usize),
}

impl End {
    fn at(self, n: usize) -> usize {
        match self {
            End::L(k) => k,
            End::R(k) => 2 * n + 1 - k,
        }
    }
}

/// One strand of the top or bottom weave: the puncture at `from` slides to
/// `to` with an over-over-under-under pattern started `phase` crossings in.
#[derive(Clone, Copy, Debug)]
struct Weave {
    from: End,
    to: End,
    phase: usize,
    /// Red strand: every crossing is switched when n is odd.
    red: bool,
}

const TOP: [Weave; 2] = [
    Weave { from: End::L(1), to: End::R(1), phase: 0, red: true },
    Weave { from: End::R(1), to: End::L(3), phase: 1, red: false },
];

const BOTTOM: [Weave; 2] = [
    Weave { from: End::L(2), to: End::R(1), phase: 0, red: false },
    Weave { from: End::R(1), to: End::L(3), phase: 2, red: true },
];

/// Letters `(0-based position, sign)` sliding the puncture at `from` to `to`.
/// `front(c)` says whether the moving strand passes in front at its `c`-th crossing.
fn slide(from: usize, to: usize, front: impl Fn(usize) -> bool) -> Vec<(usize, i8)> {
    let mut out = Vec::new();
    if from < to {
        for (c, k) in (from..to).enumerate() {
            out.push((k, if front(c) { -1 } else { 1 }));
        }
    } else {
        for (c, k) in (to..from).rev().enumerate() {
            out.push((k, if front(c) { 1 } else { -1 }));
        }
    }
    out
}

fn weave_letters(w: &Weave, n: usize, switched: &mut usize) -> Vec<(usize, i8)> {
    let flip = w.red && n % 2 == 1;
    let out = slide(w.from.at(n), w.to.at(n), |c| ((c + w.phase) % 4 < 2) != flip);
    if flip {
        *switched += out.len();
    }
    out
}

/// One stage of the construction and the letters it emitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogStage {
    pub name: String,
    pub from: String,
    pub to: String,
    /// `(1-based position, sign)`.
    pub letters: Vec<(usize, i8)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryRecord {
    pub site: (usize, String),
    pub pos: usize,
    pub level: String,
    pub half_twists: u32,
}

/// Replayable record of how a presentation was generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionLog {
    pub m: usize,
    pub n: usize,
    pub family: String,
    pub grid: Vec<Vec<(usize, String)>>,
    pub staircase: Vec<(usize, String)>,
    /// Crossings of red strands switched because n is odd.
    pub switched_crossings: usize,
    /// Adjacent inverse letter pairs removed from the emitted word.
    pub cancelled_pairs: usize,
    pub surgeries: Vec<SurgeryRecord>,
    pub stages: Vec<LogStage>,
    pub event_count: usize,
}

impl ConstructionLog {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("log serializes")
    }
}

struct Builder {
    events: Vec<LevelEvent>,
    stages: Vec<LogStage>,
}

impl Builder {
    /// Spread letters strictly between heights `hi > lo`.
    fn place(&mut self, name: &str, hi: Level, lo: Level, letters: &[(usize, i8)]) {
        let t = letters.len() as i64;
        for (i, &(k, s)) in letters.iter().enumerate() {
            let lv = lo + (hi - lo) * level(t - i as i64, t + 1);
            self.events.push(LevelEvent::braid(lv, k, s));
        }
        self.stages.push(LogStage {
            name: name.to_string(),
            from: format_level(&hi),
            to: format_level(&lo),
            letters: letters.iter().map(|&(k, s)| (k + 1, s)).collect(),
        });
    }
}

/// Whether a distinguished site becomes a twist region or stays a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Surgery {
    Twist,
    Crossing,
}

fn build(params: &GeneratorParams, surgery: Surgery) -> Result<(PlatPresentation, ConstructionLog)> {
    params.validate()?;
    let (m, n) = (params.m, params.n);
    let sites = params.sites()?;
    let mut b = Builder { events: Vec::new(), stages: Vec::new() };
    let mut switched = 0;
    let mut surgeries = Vec::new();
    let top = (2 * m - 1) as i64;
    let li = |h: i64| Level::from_integer(h);
    b.place("top weave 1", li(top), li(top - 1), &weave_letters(&TOP[0], n, &mut switched));
    b.place("top weave 2", li(top - 1), li(top - 2), &weave_letters(&TOP[1], n, &mut switched));
    // Rows from the top down. Below the top row the twist sits one column to
    // the left of its site, fed by the strand at position 2 sliding right.
    let rows = sites.len();
    for r in (0..rows).rev() {
        let (x0, y) = sites[r];
        let x = if r == rows - 1 { x0 } else { x0 - 1 };
        let twist_hi = y + level(1, 2);
        if r != rows - 1 {
            b.place(&format!("row {} inbound", r + 1), twist_hi + level(1, 2), twist_hi, &slide(2, x + 1, |_| true));
        }
        let mid = y + level(1, 4);
        match surgery {
            Surgery::Twist => {
                b.events.push(LevelEvent::twist(mid, x, params.twists[r]));
                surgeries.push(SurgeryRecord {
                    site: params.staircase[r].clone(),
                    pos: x,
                    level: format_level(&mid),
                    half_twists: params.twists[r],
                });
            }
            Surgery::Crossing => b.place(&format!("row {} crossing", r + 1), twist_hi, y, &[(x, 1)]),
        }
        b.place(&format!("row {} outbound", r + 1), y, y - level(1, 2), &slide(x, 2, |_| false));
    }
    b.place("bottom weave 1", li(2), li(1), &weave_letters(&BOTTOM[0], n, &mut switched));
    b.place("bottom weave 2", li(1), li(0), &weave_letters(&BOTTOM[1], n, &mut switched));
    let family = match surgery {
        Surgery::Twist => "link",
        Surgery::Crossing => "knot",
    };
    let raw = PlatPresentation::new(2 * n, b.events);
    let mut p = raw.cancel_inverse_pairs();
    p.meta = Some(Meta {
        m: Some(m),
        n: Some(n),
        twists: match surgery {
            Surgery::Twist => Some(params.twists.clone()),
            Surgery::Crossing => None,
        },
        staircase: Some(params.staircase.clone()),
        sphere: Some(SphereKind::H),
        family: Some(family.into()),
        top: Some(format_level(&li(top))),
    });
    if let Some(first) = p.validate().first() {
        return Err(Error::Presentation(first.to_string()));
    }
    let grid = highlighted_grid(m, n)?
        .iter()
        .map(|row| row.iter().map(|(x, y)| (*x, format_level(y))).collect())
        .collect();
    let log = ConstructionLog {
        m,
        n,
        family: family.into(),
        grid,
        staircase: params.staircase.clone(),
        switched_crossings: switched,
        cancelled_pairs: (raw.events.len() - p.events.len()) / 2,
        surgeries,
        stages: b.stages,
        event_count: p.events.len(),
    };
    Ok((p.with_components(), log))
}

/// `L_{m,n}` in plat position with respect to `H` (height `y`).
pub fn build_h_presentation(params: &GeneratorParams) -> Result<PlatPresentation> {
    Ok(build(params, Surgery::Twist)?.0)
}

/// Same as [`build_h_presentation`], with the construction log.
pub fn build_h_with_log(params: &GeneratorParams) -> Result<(PlatPresentation, ConstructionLog)> {
    build(params, Surgery::Twist)
}

/// The knot `K_{m,n}`: every distinguished site is a single crossing.
pub fn build_knot_presentation(params: &GeneratorParams) -> Result<PlatPresentation> {
    Ok(build(params, Surgery::Crossing)?.0)
}

/// `L_{m,n}` in plat position with respect to `V` (height `x`), with the map
/// from components of the H-presentation to components of the result.
pub fn build_v_with_labels(params: &GeneratorParams) -> Result<(PlatPresentation, Vec<usize>)> {
    let h = build_h_presentation(params)?;
    let (mut v, labels) = quarter_turn(&h)?;
    let mut meta = h.meta.clone().unwrap_or_default();
    meta.sphere = Some(SphereKind::V);
    meta.top = Some(format_level(&v.top_level()));
    v.meta = Some(meta);
    Ok((v, labels))
}

pub fn build_v_presentation(params: &GeneratorParams) -> Result<PlatPresentation> {
    Ok(build_v_with_labels(params)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_for_smallest_case() {
        let g = highlighted_grid(4, 5).unwrap();
        assert_eq!(g, vec![vec![(5, level(5, 2))], vec![(8, level(9, 2))]]);
        assert_eq!(default_staircase(4, 5).unwrap(), vec![(5, level(5, 2)), (8, level(9, 2))]);
        assert!(highlighted_grid(4, 4).is_err());
    }

    #[test]
    fn grid_rows() {
        let g = highlighted_grid(6, 9).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[1].len(), 5);
        let s = default_staircase(6, 9).unwrap();
        assert_eq!(s.last(), Some(&(16, level(17, 2))));
        for w in s.windows(2) {
            assert!(w[1].0 > w[0].0 && w[1].1 > w[0].1);
        }
        assert!(all_staircases(6, 9).unwrap().contains(&s));
    }

    #[test]
    fn params_validation() {
        let p = GeneratorParams::new(4, 5).unwrap();
        assert!(p.validate().is_ok());
        assert!(p.clone().with_twists(vec![2, 3]).validate().is_err());
        assert!(p.clone().with_twists(vec![2]).validate().is_err());
        let mut q = p.clone();
        q.staircase[0].0 = 7;
        assert!(q.validate().is_err());
    }
}
