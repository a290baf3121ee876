//! Laws on `j`-even partitions of `[nj]`.

use super::balanced::{group_level_integer_weight, group_parts};
use super::terms::{
    div_factorial, div_gamma, div_rising, div_rising_tail, int, mul_block_tail, mul_factorial,
    mul_gamma, mul_pow, mul_table_openings,
};
use super::{dual_pmf, Weight};
use crate::combinatorics::is_j_even;
use crate::{Error, GroupIndexing, IntegerPartition, ModelParams, Result, SetPartition};

fn require_even(b: &SetPartition, g: &GroupIndexing) -> Result<()> {
    if b.n() != g.size() {
        return Err(Error::Domain(format!(
            "partition of [{}] does not fit n = {}, j = {}",
            b.n(),
            g.n(),
            g.j()
        )));
    }
    if is_j_even(b, g.j())? {
        Ok(())
    } else {
        Err(Error::Domain(format!("{b} is not {}-even", g.j())))
    }
}

/// Block-size law of `j`-even partitions of `[nj]`:
/// `n! (theta/alpha)^{(k)} / theta^{(n)} prod_i [-(-alpha)^{(i)}]^{m_ij} / ((i!)^{m_ij} m_ij!)`.
pub fn even_integer_weight<W: Weight>(
    m: &IntegerPartition,
    j: usize,
    params: &ModelParams,
) -> Result<W> {
    let (alpha, theta) = params.alpha_theta()?;
    let groups = group_parts(m, j)?;
    Ok(group_level_integer_weight(&groups, &alpha, &theta, 1))
}

/// Even CRP law at `(alpha, theta)`:
/// `j^{#B-1} Gamma(n)/Gamma(nj) (theta/alpha)^{(#B)} / (theta/j)^{(n)}
///  prod_b -(-alpha/j)^{(#b/j)} Gamma(#b) / Gamma(#b/j)`.
pub fn even_partition_weight<W: Weight>(
    b: &SetPartition,
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    let (alpha, theta) = params.alpha_theta()?;
    require_even(b, g)?;
    let (n, j) = (g.n(), g.j());
    let jr = int(j);
    let mut w = W::one();
    // j^{k-1} against the j^{-k} from (alpha/j)^k and the j from cancelling theta/j.
    mul_gamma(&mut w, n);
    div_gamma(&mut w, n * j);
    mul_table_openings(&mut w, &theta, &alpha, b.num_blocks());
    div_rising_tail(&mut w, &(&theta / &jr), n);
    let alpha_j = &alpha / &jr;
    for s in b.block_sizes() {
        mul_block_tail(&mut w, &alpha_j, s / j);
        mul_gamma(&mut w, s);
        div_gamma(&mut w, s / j);
    }
    Ok(w)
}

/// Limit of the even law as `alpha = -kappa -> 0`, `theta -> lambda`:
/// `(1/j) Gamma(n)/Gamma(nj) lambda^{#B} prod_b Gamma(#b) / (lambda/j)^{(n)}`.
pub fn even_partition_limit_weight<W: Weight>(
    b: &SetPartition,
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    let lambda = params.ewens_parameter()?;
    require_even(b, g)?;
    let (n, j) = (g.n(), g.j());
    let mut w = W::one();
    w.div_int(j);
    mul_gamma(&mut w, n);
    div_gamma(&mut w, n * j);
    mul_pow(&mut w, &lambda, b.num_blocks());
    for s in b.block_sizes() {
        mul_gamma(&mut w, s);
    }
    div_rising(&mut w, &(&lambda / int(j)), n);
    Ok(w)
}

/// Law of the even partition assembled from a two-parameter partition of
/// the groups and a uniform permutation of `[nj]`:
/// `n!/(nj)! (theta/alpha)^{(#B)} / theta^{(n)} prod_b -(-alpha)^{(#b/j)} (#b)! / (#b/j)!`.
pub fn two_step_even_weight<W: Weight>(
    b: &SetPartition,
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    let (alpha, theta) = params.alpha_theta()?;
    require_even(b, g)?;
    let (n, j) = (g.n(), g.j());
    let mut w = W::one();
    mul_factorial(&mut w, n, 1);
    div_factorial(&mut w, n * j, 1);
    mul_table_openings(&mut w, &theta, &alpha, b.num_blocks());
    div_rising_tail(&mut w, &theta, n);
    for s in b.block_sizes() {
        mul_block_tail(&mut w, &alpha, s / j);
        mul_factorial(&mut w, s, 1);
        div_factorial(&mut w, s / j, 1);
    }
    Ok(w)
}

dual_pmf!(even_integer_pmf => even_integer_weight(m: &IntegerPartition, j: usize, params: &ModelParams));
dual_pmf!(even_partition_pmf => even_partition_weight(b: &SetPartition, g: &GroupIndexing, params: &ModelParams));
dual_pmf!(
    even_partition_limit_pmf => even_partition_limit_weight(b: &SetPartition, g: &GroupIndexing, params: &ModelParams)
);
dual_pmf!(two_step_even_pmf => two_step_even_weight(b: &SetPartition, g: &GroupIndexing, params: &ModelParams));

#[cfg(test)]
mod tests {
    use num_traits::{One, ToPrimitive};

    use super::*;
    use crate::oracle::{enumerate_even, enumerate_integer_partitions};
    use crate::{EnumerationBudget, Rational};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn exact(p: Result<crate::ProbValue>) -> Rational {
        p.unwrap().exact_value().unwrap().clone()
    }

    fn g(n: usize, j: usize) -> GroupIndexing {
        GroupIndexing::new(n, j).unwrap()
    }

    #[test]
    fn even_partition_examples() {
        let (a, t) = (r(1, 3), r(2, 5));
        let p = ModelParams::two_param(a.clone(), t.clone()).unwrap();
        for j in 1..=4 {
            let single = SetPartition::single_block(j).unwrap();
            assert_eq!(exact(even_partition_pmf(&single, &g(1, j), &p)), r(1, 1));
        }
        assert_eq!(
            exact(even_partition_pmf(
                &"1 2 3 4".parse().unwrap(),
                &g(2, 2),
                &p
            )),
            (r(2, 1) - &a) / (&t + r(2, 1))
        );
        assert_eq!(
            exact(even_partition_pmf(
                &"1 2|3 4".parse().unwrap(),
                &g(2, 2),
                &p
            )),
            (&t + &a) / (r(3, 1) * (&t + r(2, 1)))
        );
    }

    #[test]
    fn even_integer_examples() {
        let (a, t) = (r(1, 3), r(2, 5));
        let p = ModelParams::two_param(a.clone(), t.clone()).unwrap();
        let m = |s: &str| s.parse::<IntegerPartition>().unwrap();
        assert_eq!(
            exact(even_integer_pmf(&m("4"), 2, &p)),
            (r(1, 1) - &a) / (&t + r(1, 1))
        );
        assert_eq!(exact(even_integer_pmf(&m("3"), 3, &p)), r(1, 1));
        assert_eq!(
            exact(even_integer_pmf(&m("2 2"), 2, &p)),
            (&t + &a) / (&t + r(1, 1))
        );
    }

    #[test]
    fn rejects_non_even_input() {
        let p = ModelParams::ratio((1, 2), (1, 1)).unwrap();
        assert!(matches!(
            even_partition_pmf(&"1|2 3 4".parse().unwrap(), &g(2, 2), &p),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            even_partition_pmf(&"1 2 3".parse().unwrap(), &g(2, 2), &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn limit_matches_small_kappa() {
        // kappa = 10^-6, m = lambda / kappa.
        let lambda = r(3, 2);
        let kappa = r(1, 1_000_000);
        let m = (&lambda / &kappa).to_integer().to_u64().unwrap();
        let near = ModelParams::negative_kappa(kappa, m).unwrap();
        let limit = ModelParams::ewens(lambda.clone()).unwrap();
        let b: SetPartition = "1 2 3 4".parse().unwrap();
        let x = even_partition_pmf(&b, &g(2, 2), &near).unwrap().to_f64();
        let y = even_partition_limit_pmf(&b, &g(2, 2), &limit)
            .unwrap()
            .to_f64();
        assert!((x - y).abs() < 1e-4, "{x} vs {y}");
        assert_eq!(
            exact(even_partition_limit_pmf(&b, &g(2, 2), &limit)),
            r(2, 1) / (lambda + r(2, 1))
        );
    }

    #[test]
    fn even_laws_normalize() {
        let budget = EnumerationBudget::default();
        let grid = [
            ModelParams::ratio((1, 2), (1, 1)).unwrap(),
            ModelParams::ratio((0, 1), (1, 1)).unwrap(),
            ModelParams::ratio((2, 3), (-1, 2)).unwrap(),
            ModelParams::negative_kappa(r(1, 2), 3).unwrap(),
        ];
        for (n, j) in [(1, 2), (2, 2), (3, 2), (2, 3), (1, 4), (2, 4), (4, 2)] {
            let support = enumerate_even(n, j, &budget).unwrap();
            for p in &grid {
                let s: Rational = support
                    .iter()
                    .map(|b| exact(even_partition_pmf(b, &g(n, j), p)))
                    .sum();
                assert!(s.is_one(), "even law n={n} j={j} {p}");
                let s: Rational = support
                    .iter()
                    .map(|b| exact(two_step_even_pmf(b, &g(n, j), p)))
                    .sum();
                assert!(s.is_one(), "two-step n={n} j={j} {p}");
                let s: Rational = enumerate_integer_partitions(n * j, &budget)
                    .unwrap()
                    .iter()
                    .filter(|m| m.parts().iter().all(|x| x % j == 0))
                    .map(|m| exact(even_integer_pmf(m, j, p)))
                    .sum();
                assert!(s.is_one(), "integer n={n} j={j} {p}");
            }
            let lp = ModelParams::ewens(r(5, 3)).unwrap();
            let s: Rational = support
                .iter()
                .map(|b| exact(even_partition_limit_pmf(b, &g(n, j), &lp)))
                .sum();
            assert!(s.is_one());
        }
    }
}
