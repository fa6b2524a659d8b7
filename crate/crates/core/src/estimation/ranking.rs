use std::cmp::Ordering;

use crate::histogram::SpeciesCounts;

/// Tie-breaking keys for ranking species.
///
/// Species are ordered by direct count (descending), then by count under a
/// more general back-off conditioning (descending), then by first appearance
/// in the training data, then lexicographically.
#[derive(Debug, Clone)]
pub struct RankingCriteria {
    pub backoff: Option<SpeciesCounts>,
    pub appearance_order: bool,
}

impl Default for RankingCriteria {
    fn default() -> Self {
        Self {
            backoff: None,
            appearance_order: true,
        }
    }
}

impl RankingCriteria {
    pub fn with_backoff(backoff: SpeciesCounts) -> Self {
        Self {
            backoff: Some(backoff),
            ..Self::default()
        }
    }

    /// Only counts and lexicographic order.
    pub fn lexicographic() -> Self {
        Self {
            backoff: None,
            appearance_order: false,
        }
    }

    fn compare(&self, counts: &SpeciesCounts, a: &str, b: &str) -> Ordering {
        let count = |s: &str| counts.get(s).unwrap_or(0);
        let backoff = |s: &str| self.backoff.as_ref().and_then(|bo| bo.get(s)).unwrap_or(0);
        count(b)
            .cmp(&count(a))
            .then_with(|| backoff(b).cmp(&backoff(a)))
            .then_with(|| {
                if self.appearance_order {
                    counts.appearance_index(a).cmp(&counts.appearance_index(b))
                } else {
                    Ordering::Equal
                }
            })
            .then_with(|| a.cmp(b))
    }
}

/// Ranks all species in `counts`, most frequent first.
pub fn build_ranking(counts: &SpeciesCounts, criteria: &RankingCriteria) -> Vec<String> {
    let mut species: Vec<&str> = counts.species().collect();
    species.sort_by(|a, b| criteria.compare(counts, a, b));
    species.into_iter().map(str::to_owned).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(pairs: &[(&str, u64)]) -> SpeciesCounts {
        SpeciesCounts::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn appearance_breaks_count_ties() {
        let c = counts(&[("c", 1), ("a", 2), ("b", 1)]);
        assert_eq!(
            build_ranking(&c, &RankingCriteria::default()),
            ["a", "c", "b"]
        );
    }

    #[test]
    fn lexicographic_when_nothing_else_differs() {
        let c = counts(&[("z", 3), ("m", 3), ("a", 3)]);
        assert_eq!(
            build_ranking(&c, &RankingCriteria::lexicographic()),
            ["a", "m", "z"]
        );
    }

    #[test]
    fn backoff_reverses_a_tie() {
        let c = counts(&[("b", 1), ("c", 1)]);
        let bo = counts(&[("c", 9), ("b", 2)]);
        assert_eq!(
            build_ranking(&c, &RankingCriteria::with_backoff(bo)),
            ["c", "b"]
        );
    }

    #[test]
    fn backoff_outranks_appearance() {
        let c = counts(&[("x", 2), ("y", 2), ("z", 2)]);
        let bo = counts(&[("z", 1)]);
        assert_eq!(
            build_ranking(&c, &RankingCriteria::with_backoff(bo)),
            ["z", "x", "y"]
        );
    }
}
