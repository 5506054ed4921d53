use log::warn;

use super::sorting::{crowding_distance, fast_nondominated_sort};
use crate::error::{KneeError, Result};
use crate::kpitu::{identify_with, KpituConfig};
use crate::objective::TradeoffSet;

#[derive(Debug, Clone, PartialEq)]
pub struct Survivors {
    /// Indices into the merged population, in acceptance order.
    pub chosen: Vec<usize>,
    /// Knee identification passes spent on the split level.
    pub kpitu_passes: usize,
}

/// Whole levels while they fit; the level that overflows is cut by
/// repeatedly taking its knees (best first) and re-identifying on what is
/// left.
pub fn environmental_selection_kpitu<R: AsRef<[f64]>>(
    merged: &[R],
    n: usize,
    config: &KpituConfig,
) -> Result<Survivors> {
    let (mut chosen, split) = whole_levels(merged, n)?;
    let mut passes = 0;
    if let Some(mut remaining) = split {
        let mut slots = n - chosen.len();
        while slots > 0 {
            if remaining.is_empty() {
                // Cannot happen for a level that overflowed, since every pass
                // takes at most `slots` members.
                warn!("split level exhausted with {slots} slot(s) left");
                break;
            }
            let rows: Vec<&[f64]> = remaining.iter().map(|&i| merged[i].as_ref()).collect();
            let knees = identify_with(&TradeoffSet::new(&rows)?, config)?.knees;
            passes += 1;
            let take = knees.len().min(slots);
            chosen.extend(knees[..take].iter().map(|&k| remaining[k]));
            slots -= take;
            let mut drop = knees[..take].to_vec();
            drop.sort_unstable();
            for k in drop.into_iter().rev() {
                remaining.remove(k);
            }
        }
    }
    Ok(Survivors {
        chosen,
        kpitu_passes: passes,
    })
}

/// Canonical NSGA-II truncation by crowding distance, kept as a reference.
pub fn environmental_selection_crowding<R: AsRef<[f64]>>(merged: &[R], n: usize) -> Result<Survivors> {
    let (mut chosen, split) = whole_levels(merged, n)?;
    if let Some(level) = split {
        let d = crowding_distance(merged, &level);
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
        let slots = n - chosen.len();
        chosen.extend(order[..slots].iter().map(|&k| level[k]));
    }
    Ok(Survivors {
        chosen,
        kpitu_passes: 0,
    })
}

fn whole_levels<R: AsRef<[f64]>>(merged: &[R], n: usize) -> Result<(Vec<usize>, Option<Vec<usize>>)> {
    if n == 0 || n > merged.len() {
        return Err(KneeError::param(
            "population",
            format!("cannot keep {n} of {} individuals", merged.len()),
        ));
    }
    let mut chosen = Vec::with_capacity(n);
    for level in fast_nondominated_sort(merged) {
        if chosen.len() + level.len() <= n {
            chosen.extend(level);
            if chosen.len() == n {
                break;
            }
        } else {
            return Ok((chosen, Some(level)));
        }
    }
    Ok((chosen, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(count: usize, offset: f64) -> Vec<Vec<f64>> {
        (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                vec![t + offset, (1.0 - t.sqrt()).powi(2) + offset]
            })
            .collect()
    }

    #[test]
    fn exact_first_level_skips_kpitu() {
        let mut merged = arc(5, 0.0);
        merged.extend(arc(5, 1.0));
        let s = environmental_selection_kpitu(&merged, 5, &KpituConfig::default()).unwrap();
        assert_eq!(s.chosen, vec![0, 1, 2, 3, 4]);
        assert_eq!(s.kpitu_passes, 0);
    }

    #[test]
    fn knees_fill_remaining_slots_in_one_pass() {
        // Second level is the triple with a single knee and one slot left.
        let merged = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![0.2, 0.2], vec![1.0, 0.0]];
        let s = environmental_selection_kpitu(&merged, 2, &KpituConfig::default()).unwrap();
        assert_eq!(s.chosen, vec![0, 2]);
        assert_eq!(s.kpitu_passes, 1);
    }

    #[test]
    fn repeated_passes_on_the_split_level() {
        // Level 1 has one member; level 2 is a convex arc of nine points.
        // The first pass yields one knee, so identification runs again on
        // the rest until three slots are filled.
        let mut merged = vec![vec![-1.0, -1.0]];
        merged.extend(arc(9, 0.0));
        let s = environmental_selection_kpitu(&merged, 4, &KpituConfig::default()).unwrap();
        assert_eq!(s.chosen.len(), 4);
        assert_eq!(s.chosen[0], 0);
        assert!(s.kpitu_passes >= 2, "passes = {}", s.kpitu_passes);
        let first = identify_with(&TradeoffSet::new(&merged[1..]).unwrap(), &KpituConfig::default()).unwrap();
        assert_eq!(s.chosen[1], first.knees[0] + 1);
    }

    #[test]
    fn fitting_levels_survive_whole() {
        // The best knee of the first level is kept while that level fits.
        let mut merged = arc(9, 0.0);
        merged.extend(arc(9, 0.3));
        let best = identify_with(&TradeoffSet::new(&merged[..9]).unwrap(), &KpituConfig::default())
            .unwrap()
            .knees[0];
        for n in 9..18 {
            let s = environmental_selection_kpitu(&merged, n, &KpituConfig::default()).unwrap();
            assert_eq!(&s.chosen[..9], &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
            assert!(s.chosen.contains(&best));
        }
    }

    #[test]
    fn always_returns_n() {
        let mut merged = arc(30, 0.0);
        merged.extend(arc(30, 0.5));
        for n in [1, 10, 29, 30, 31, 45, 60] {
            let s = environmental_selection_kpitu(&merged, n, &KpituConfig::default()).unwrap();
            assert_eq!(s.chosen.len(), n);
            let mut u = s.chosen.clone();
            u.sort_unstable();
            u.dedup();
            assert_eq!(u.len(), n);
            assert_eq!(environmental_selection_crowding(&merged, n).unwrap().chosen.len(), n);
        }
        assert!(environmental_selection_kpitu(&merged, 61, &KpituConfig::default()).is_err());
    }
}
