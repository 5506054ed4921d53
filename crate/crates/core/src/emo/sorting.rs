use crate::objective::{dominance, Dominance};

/// Non-domination levels, best first; each level lists indices ascending.
pub fn fast_nondominated_sort<R: AsRef<[f64]>>(objectives: &[R]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            match dominance(objectives[i].as_ref(), objectives[j].as_ref()) {
                Dominance::Dominates => {
                    dominated[i].push(j);
                    count[j] += 1;
                }
                Dominance::DominatedBy => {
                    dominated[j].push(i);
                    count[i] += 1;
                }
                Dominance::NonDominated => {}
            }
        }
    }
    let mut levels = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        levels.push(current);
        current = next;
    }
    levels
}

/// Crowding distance of each member of one level; extremes are infinite.
pub fn crowding_distance<R: AsRef<[f64]>>(objectives: &[R], level: &[usize]) -> Vec<f64> {
    let len = level.len();
    let mut dist = vec![0.0; len];
    if len <= 2 {
        return vec![f64::INFINITY; len];
    }
    let m = objectives[level[0]].as_ref().len();
    let mut order: Vec<usize> = (0..len).collect();
    for j in 0..m {
        let val = |k: usize| objectives[level[k]].as_ref()[j];
        order.sort_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
        let lo = val(order[0]);
        let hi = val(order[len - 1]);
        dist[order[0]] = f64::INFINITY;
        dist[order[len - 1]] = f64::INFINITY;
        if hi - lo <= 0.0 {
            continue;
        }
        for w in 1..len - 1 {
            dist[order[w]] += (val(order[w + 1]) - val(order[w - 1])) / (hi - lo);
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::dominates;
    use proptest::prelude::*;

    #[test]
    fn worked_levels() {
        let pop = [[0.0, 0.0], [1.0, 1.0], [0.5, 2.0]];
        assert_eq!(fast_nondominated_sort(&pop), vec![vec![0], vec![1, 2]]);
        let flat = [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]];
        assert_eq!(fast_nondominated_sort(&flat), vec![vec![0, 1, 2]]);
        let chain = [[2.0, 2.0], [0.0, 0.0], [1.0, 1.0]];
        assert_eq!(fast_nondominated_sort(&chain), vec![vec![1], vec![2], vec![0]]);
    }

    #[test]
    fn crowding_extremes_infinite() {
        let pop = [[0.0, 1.0], [0.25, 0.75], [0.5, 0.5], [1.0, 0.0]];
        let d = crowding_distance(&pop, &[0, 1, 2, 3]);
        assert!(d[0].is_infinite() && d[3].is_infinite());
        assert!((d[1] - 1.0).abs() < 1e-12);
        assert!((d[2] - 1.5).abs() < 1e-12);
    }

    fn brute_levels(pop: &[Vec<f64>]) -> Vec<Vec<usize>> {
        let mut left: Vec<usize> = (0..pop.len()).collect();
        let mut out = Vec::new();
        while !left.is_empty() {
            let level: Vec<usize> = left
                .iter()
                .copied()
                .filter(|&i| !left.iter().any(|&j| dominates(&pop[j], &pop[i])))
                .collect();
            left.retain(|i| !level.contains(i));
            out.push(level);
        }
        out
    }

    proptest! {
        #[test]
        fn matches_brute_force(pop in prop::collection::vec(prop::collection::vec(0u8..8, 3), 1..100)) {
            let pop: Vec<Vec<f64>> = pop.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
            prop_assert_eq!(fast_nondominated_sort(&pop), brute_levels(&pop));
        }
    }
}
