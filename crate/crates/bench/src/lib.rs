//! Fixtures shared by the benchmarks.

use crp_core::{GroupIndexing, ModelParams, Rational, SetPartition};

/// `alpha = 1/2, theta = 1` and `kappa = 1/2, m = 3`.
pub fn regimes() -> [(&'static str, ModelParams); 2] {
    [
        (
            "two-param",
            ModelParams::ratio((1, 2), (1, 1)).expect("valid"),
        ),
        (
            "negative-kappa",
            ModelParams::negative_kappa(Rational::new(1.into(), 2.into()), 3).expect("valid"),
        ),
    ]
}

/// The even partition of `[nj]` whose blocks are consecutive runs of
/// `j * size` elements, for the given group-level sizes.
pub fn even_partition(sizes: &[usize], j: usize) -> (SetPartition, GroupIndexing) {
    let n: usize = sizes.iter().sum();
    let mut next = 1;
    let blocks = sizes
        .iter()
        .map(|&s| {
            let b: Vec<usize> = (next..next + s * j).collect();
            next += s * j;
            b
        })
        .collect();
    (
        SetPartition::from_blocks(n * j, blocks).expect("valid blocks"),
        GroupIndexing::new(n, j).expect("valid groups"),
    )
}

/// A balanced partition: group-level sizes, each block taking whole groups.
pub fn balanced_partition(sizes: &[usize], j: usize) -> (SetPartition, GroupIndexing) {
    even_partition(sizes, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crp_core::combinatorics::{is_j_balanced, is_j_even};

    #[test]
    fn fixtures_are_in_class() {
        let (b, g) = balanced_partition(&[3, 1, 2], 3);
        assert!(is_j_balanced(&b, &g).unwrap());
        assert!(is_j_even(&b, 3).unwrap());
    }
}
