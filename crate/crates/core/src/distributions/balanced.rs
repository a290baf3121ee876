//! Laws on balanced partitions of `[nj]`.

use super::terms::{
    div_factorial, div_rising, div_rising_tail, int, mul_block_tail, mul_factorial, mul_gamma,
    mul_pow, mul_table_openings,
};
use super::{dual_pmf, Weight};
use crate::combinatorics::is_j_balanced;
use crate::{Error, GroupIndexing, IntegerPartition, ModelParams, Result, SetPartition};

fn require_balanced(b: &SetPartition, g: &GroupIndexing) -> Result<()> {
    if is_j_balanced(b, g)? {
        Ok(())
    } else {
        Err(Error::Domain(format!("{b} is not {}-balanced", g.j())))
    }
}

pub(crate) fn group_parts(m: &IntegerPartition, j: usize) -> Result<IntegerPartition> {
    m.divide_parts(j).map_err(|e| {
        Error::Domain(format!(
            "{m} is not the block-size profile of a {j}-even partition: {e}"
        ))
    })
}

/// Block-size law of balanced partitions of `[nj]`:
/// `n! (theta/alpha)^{(k)} / theta^{(n)} prod_i [-(-alpha)^{(i)}]^{m_ij} / ((i!)^{m_ij} m_ij!)`
/// where `k = sum_i m_ij`.
///
/// This is the pushforward of the balanced law to block sizes. It coincides
/// with [`even_integer_weight`](super::even_integer_weight).
pub fn balanced_integer_weight<W: Weight>(
    m: &IntegerPartition,
    j: usize,
    params: &ModelParams,
) -> Result<W> {
    let (alpha, theta) = params.alpha_theta()?;
    let groups = group_parts(m, j)?;
    Ok(group_level_integer_weight(&groups, &alpha, &theta, 1))
}

/// `n! (theta/alpha)^{(k)} / theta^{(n)} prod_i [-(-alpha)^{(i)}]^{c_i} / ((i!)^{c_i} (c_i!)^e)`
/// over a group-level integer partition `c` of `n`.
pub(crate) fn group_level_integer_weight<W: Weight>(
    groups: &IntegerPartition,
    alpha: &crate::Rational,
    theta: &crate::Rational,
    mult_factorial_exponent: usize,
) -> W {
    let n = groups.n();
    let mut w = W::one();
    mul_factorial(&mut w, n, 1);
    mul_table_openings(&mut w, theta, alpha, groups.num_parts());
    div_rising_tail(&mut w, theta, n);
    for (i, &c) in groups.multiplicities().iter().enumerate() {
        let size = i + 1;
        for _ in 0..c {
            mul_block_tail(&mut w, alpha, size);
        }
        div_factorial(&mut w, size, c);
        div_factorial(&mut w, c, mult_factorial_exponent);
    }
    w
}

/// Balanced CRP law at `(alpha, theta)`:
/// `(theta/alpha)^{(#B)} / ((theta/j)^{(n)} (n!)^{j-1}) prod_b -(-alpha/j)^{(#b/j)} [(#b/j)!]^{j-1}`.
pub fn balanced_partition_weight<W: Weight>(
    b: &SetPartition,
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    let (alpha, theta) = params.alpha_theta()?;
    require_balanced(b, g)?;
    let (n, j) = (g.n(), g.j());
    let jr = int(j);
    let mut w = W::one();
    mul_table_openings(&mut w, &theta, &alpha, b.num_blocks());
    for _ in 1..b.num_blocks() {
        w.div_int(j);
    }
    div_rising_tail(&mut w, &(&theta / &jr), n);
    let alpha_j = &alpha / &jr;
    for s in b.block_sizes() {
        let groups = s / j;
        mul_block_tail(&mut w, &alpha_j, groups);
        mul_factorial(&mut w, groups, j - 1);
    }
    div_factorial(&mut w, n, j - 1);
    Ok(w)
}

/// Limit of the balanced law as `alpha = -kappa -> 0` with `theta -> lambda`:
/// `(lambda/j)^{#B} prod_b (#b/j)^{j-1} Gamma(#b/j)^j / ((lambda/j)^{(n)} (n!)^{j-1})`.
pub fn balanced_partition_limit_weight<W: Weight>(
    b: &SetPartition,
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    let lambda = params.ewens_parameter()?;
    require_balanced(b, g)?;
    let (n, j) = (g.n(), g.j());
    let lambda_j = &lambda / int(j);
    let mut w = W::one();
    mul_pow(&mut w, &lambda_j, b.num_blocks());
    for s in b.block_sizes() {
        let groups = s / j;
        for _ in 1..j {
            w.mul_int(groups);
        }
        for _ in 0..j {
            mul_gamma(&mut w, groups);
        }
    }
    div_rising(&mut w, &lambda_j, n);
    div_factorial(&mut w, n, j - 1);
    Ok(w)
}

/// Law of the balanced partition assembled from a two-parameter partition of
/// the groups and `j - 1` uniform matchings:
/// `(theta/alpha)^{(#B)} / ((n!)^{j-1} theta^{(n)}) prod_b -(-alpha)^{(#b/j)} [(#b/j)!]^{j-1}`.
pub fn two_step_balanced_weight<W: Weight>(
    b: &SetPartition,
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    let (alpha, theta) = params.alpha_theta()?;
    require_balanced(b, g)?;
    let (n, j) = (g.n(), g.j());
    let mut w = W::one();
    mul_table_openings(&mut w, &theta, &alpha, b.num_blocks());
    div_rising_tail(&mut w, &theta, n);
    for s in b.block_sizes() {
        let groups = s / j;
        mul_block_tail(&mut w, &alpha, groups);
        mul_factorial(&mut w, groups, j - 1);
    }
    div_factorial(&mut w, n, j - 1);
    Ok(w)
}

dual_pmf!(balanced_integer_pmf => balanced_integer_weight(m: &IntegerPartition, j: usize, params: &ModelParams));
dual_pmf!(balanced_partition_pmf => balanced_partition_weight(b: &SetPartition, g: &GroupIndexing, params: &ModelParams));
dual_pmf!(
    balanced_partition_limit_pmf => balanced_partition_limit_weight(b: &SetPartition, g: &GroupIndexing, params: &ModelParams)
);
dual_pmf!(two_step_balanced_pmf => two_step_balanced_weight(b: &SetPartition, g: &GroupIndexing, params: &ModelParams));
