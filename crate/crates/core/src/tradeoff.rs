//! Trade-off gain, loss and utility between two solutions.
//!
//! Differences are divided by per-objective ranges, so the quantities are
//! dimensionless. Negative components are improvements of `a` over `b`.

/// Utilities inside `[-UTILITY_TIE, UTILITY_TIE]` count as a tie.
pub const UTILITY_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KneeRelation {
    /// `a` knee-dominates `b`.
    Dominates,
    DominatedBy,
    NonDominated,
}

#[inline]
fn scaled<'a>(a: &'a [f64], b: &'a [f64], ranges: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
    debug_assert_eq!(a.len(), b.len());
    debug_assert_eq!(a.len(), ranges.len());
    a.iter().zip(b.iter()).zip(ranges.iter()).map(|((x, y), r)| (x - y) / r)
}

/// Sum of the improvements of `a` over `b`; always `<= 0`.
pub fn gain(a: &[f64], b: &[f64], ranges: &[f64]) -> f64 {
    scaled(a, b, ranges).map(|d| d.min(0.0)).sum()
}

/// Sum of the deteriorations of `a` relative to `b`; always `>= 0`.
pub fn loss(a: &[f64], b: &[f64], ranges: &[f64]) -> f64 {
    scaled(a, b, ranges).map(|d| d.max(0.0)).sum()
}

/// `gain + loss`. Negative means `a` is preferred.
pub fn utility(a: &[f64], b: &[f64], ranges: &[f64]) -> f64 {
    gain(a, b, ranges) + loss(a, b, ranges)
}

/// Utility between two points that already live in normalized space.
#[inline]
pub fn normalized_utility(a: &[f64], b: &[f64]) -> f64 {
    gain_loss_normalized(a, b).iter().sum()
}

#[inline]
fn gain_loss_normalized(a: &[f64], b: &[f64]) -> [f64; 2] {
    let mut g = 0.0;
    let mut l = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        if d < 0.0 {
            g += d;
        } else {
            l += d;
        }
    }
    [g, l]
}

pub fn relation_from_utility(u: f64) -> KneeRelation {
    if u < -UTILITY_TIE {
        KneeRelation::Dominates
    } else if u > UTILITY_TIE {
        KneeRelation::DominatedBy
    } else {
        KneeRelation::NonDominated
    }
}

pub fn knee_compare(a: &[f64], b: &[f64], ranges: &[f64]) -> KneeRelation {
    relation_from_utility(utility(a, b, ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const UNIT: [f64; 2] = [1.0, 1.0];

    #[test]
    fn worked_pair() {
        let a = [0.1, 0.5];
        let b = [0.4, 0.3];
        assert_abs_diff_eq!(gain(&a, &b, &UNIT), -0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(loss(&a, &b, &UNIT), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(utility(&a, &b, &UNIT), -0.1, epsilon = 1e-15);
        assert_eq!(knee_compare(&a, &b, &UNIT), KneeRelation::Dominates);
        assert_eq!(knee_compare(&b, &a, &UNIT), KneeRelation::DominatedBy);
    }

    #[test]
    fn ranges_rescale_differences() {
        assert_abs_diff_eq!(utility(&[0.0, 10.0], &[2.0, 5.0], &[4.0, 10.0]), 0.0);
        assert_eq!(
            knee_compare(&[0.0, 10.0], &[2.0, 5.0], &[4.0, 10.0]),
            KneeRelation::NonDominated
        );
    }

    #[test]
    fn self_comparison_is_a_tie() {
        let a = [0.3, 0.7, 0.2];
        assert_eq!(utility(&a, &a, &[1.0; 3]), 0.0);
        assert_eq!(knee_compare(&a, &a, &[1.0; 3]), KneeRelation::NonDominated);
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, 3)
    }

    proptest! {
        #[test]
        fn signs_and_decomposition(a in vec3(), b in vec3()) {
            let r = [1.0; 3];
            let g = gain(&a, &b, &r);
            let l = loss(&a, &b, &r);
            prop_assert!(g <= 0.0);
            prop_assert!(l >= 0.0);
            let direct: f64 = a.iter().zip(&b).map(|(x, y)| x - y).sum();
            prop_assert!((utility(&a, &b, &r) - direct).abs() <= 1e-12);
            prop_assert!((normalized_utility(&a, &b) - direct).abs() <= 1e-12);
        }

        #[test]
        fn antisymmetric(a in vec3(), b in vec3()) {
            let r = [1.0; 3];
            prop_assert!((utility(&a, &b, &r) + utility(&b, &a, &r)).abs() <= 1e-12);
            let ab = knee_compare(&a, &b, &r);
            let ba = knee_compare(&b, &a, &r);
            let mirrored = match ab {
                KneeRelation::Dominates => KneeRelation::DominatedBy,
                KneeRelation::DominatedBy => KneeRelation::Dominates,
                KneeRelation::NonDominated => KneeRelation::NonDominated,
            };
            prop_assert_eq!(ba, mirrored);
        }

        #[test]
        fn transitive(a in vec3(), b in vec3(), c in vec3()) {
            let r = [1.0; 3];
            if knee_compare(&a, &b, &r) == KneeRelation::Dominates
                && knee_compare(&b, &c, &r) == KneeRelation::Dominates
            {
                prop_assert_eq!(knee_compare(&a, &c, &r), KneeRelation::Dominates);
            }
        }
    }
}
