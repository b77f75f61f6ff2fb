//! Perturbation of a plat presentation and the move-count lower bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{level, Level, LevelEvent, PlatPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Perturb,
    Deperturb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// Top arc (1-based) next to which the move happens.
    pub site: usize,
    pub before: usize,
    pub after: usize,
}

/// Letters of the perturbation next to top arc `b` of a `2n`-plat: the right
/// end of the arc slides behind everything to position `2n`, hooks the new
/// pair of strands `2n+1, 2n+2` and slides back.
pub fn perturbation_letters(n: usize, b: usize) -> Vec<(usize, i8)> {
    let out: Vec<(usize, i8)> = (2 * b..2 * n).map(|k| (k, 1)).collect();
    let back = out.iter().rev().map(|&(k, s)| (k, -s));
    out.iter().copied().chain([(2 * n, 1)]).chain(back).collect()
}

/// Perturb `p` next to its top arc `b` (1-based). The new cap and cup join
/// strands `2n+1, 2n+2`; the inserted letters sit between the top sphere and
/// the first event.
pub fn perturb(p: &PlatPresentation, b: usize) -> Result<(PlatPresentation, MoveRecord)> {
    if let Some(v) = p.validate().first() {
        return Err(Error::Presentation(v.to_string()));
    }
    let n = p.bridge_number();
    if b == 0 || b > n {
        return Err(Error::Move(format!("bridge index {b} out of range 1..={n}")));
    }
    let letters = perturbation_letters(n, b);
    let top = p.top_level();
    let below = match p.events.first() {
        Some(e) => e.level,
        None => top - Level::from_integer(1),
    };
    let count = letters.len() as i64;
    let mut events: Vec<LevelEvent> = letters
        .iter()
        .enumerate()
        .map(|(i, &(k, s))| {
            let lv = top - (top - below) * level(i as i64 + 1, count + 1);
            LevelEvent::braid(lv, k, s)
        })
        .collect();
    events.extend(p.events.iter().cloned());
    let mut q = PlatPresentation::new(2 * n + 2, events);
    q.meta = p.meta.clone().map(|mut m| {
        m.top = Some(crate::presentation::format_level(&top));
        m.family = Some(format!("{} perturbed at bridge {b}", m.family.unwrap_or_else(|| "input".into())));
        m
    });
    let record = MoveRecord { kind: MoveKind::Perturb, site: b, before: n, after: n + 1 };
    Ok((q.with_components(), record))
}

/// Lower bound on the number of perturbation and de-perturbation moves
/// taking the `n`-bridge sphere of `L_{m,n}` to its `m`-bridge sphere.
pub fn move_lower_bound(m: usize, n: usize) -> Result<usize> {
    if !(3 < m && m < n) {
        return Err(Error::Params(format!("need 3 < m < n, got m={m}, n={n}")));
    }
    Ok(n - m + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{checked_determinant, component_count};

    fn plat(n: usize, word: &[(usize, i8)]) -> PlatPresentation {
        let len = word.len() as i64;
        let events =
            word.iter().enumerate().map(|(i, &(k, s))| LevelEvent::braid(level(len - i as i64, 1), k, s)).collect();
        PlatPresentation::new(n, events)
    }

    #[test]
    fn bound_formula() {
        assert_eq!(move_lower_bound(4, 5).unwrap(), 3);
        assert_eq!(move_lower_bound(6, 9).unwrap(), 5);
        assert!(move_lower_bound(4, 4).is_err());
        assert!(move_lower_bound(3, 5).is_err());
    }

    #[test]
    fn unknot_stays_unknot() {
        let (q, rec) = perturb(&plat(2, &[]), 1).unwrap();
        assert_eq!(q.strand_count, 4);
        assert!(q.is_valid());
        assert_eq!(component_count(&q), 1);
        assert_eq!(checked_determinant(&q).unwrap(), 1);
        assert_eq!((rec.before, rec.after), (1, 2));
    }

    #[test]
    fn link_type_is_kept_at_every_bridge() {
        let fig8 = plat(4, &[(2, 1), (2, 1), (1, -1), (2, 1)]);
        let hopf = plat(4, &[(2, 1), (2, 1)]);
        for p in [fig8, hopf] {
            for b in 1..=2 {
                let (q, _) = perturb(&p, b).unwrap();
                assert!(q.is_valid());
                assert_eq!(component_count(&q), component_count(&p));
                assert_eq!(checked_determinant(&q).unwrap(), checked_determinant(&p).unwrap());
            }
        }
    }

    #[test]
    fn bad_bridge_index() {
        assert!(perturb(&plat(4, &[]), 0).is_err());
        assert!(perturb(&plat(4, &[]), 3).is_err());
    }
}
