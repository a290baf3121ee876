//! Laws on the product spaces behind the balanced and even constructions,
//! and the permutation laws they induce.

use super::terms::{div_factorial, div_gamma};
use super::{dual_pmf, even_partition_weight, two_param_partition_weight, Weight};
use crate::{Error, GroupIndexing, ModelParams, Permutation, Result, SetPartition};

fn check_matchings(n: usize, matchings: &[Permutation], g: &GroupIndexing) -> Result<()> {
    if n != g.n() || matchings.len() + 1 != g.j() || matchings.iter().any(|s| s.n() != n) {
        return Err(Error::Domain(format!(
            "expected a structure on [{}] with {} matchings of [{}]",
            g.n(),
            g.j() - 1,
            g.n()
        )));
    }
    Ok(())
}

fn group_size(n: usize, total: usize) -> Result<usize> {
    if !total.is_multiple_of(n) {
        return Err(Error::Domain(format!("{n} does not divide {total}")));
    }
    Ok(total / n)
}

/// Joint law of a two-parameter partition `pi` of `[n]` and `j - 1`
/// independent uniform matchings:
/// `(theta/alpha)^{(#pi)} / ((n!)^{j-1} theta^{(n)}) prod_b -(-alpha)^{(#b)}`.
pub fn joint_balanced_weight<W: Weight>(
    pi: &SetPartition,
    matchings: &[Permutation],
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    check_matchings(pi.n(), matchings, g)?;
    let mut w: W = two_param_partition_weight(pi, params)?;
    div_factorial(&mut w, g.n(), g.j() - 1);
    Ok(w)
}

/// Joint law of a two-parameter partition `pi` of `[n]` and a uniform
/// permutation `sigma` of `[nj]`; `j` is read off `sigma`.
pub fn joint_even_weight<W: Weight>(
    pi: &SetPartition,
    sigma: &Permutation,
    params: &ModelParams,
) -> Result<W> {
    group_size(pi.n(), sigma.n())?;
    let mut w: W = two_param_partition_weight(pi, params)?;
    div_factorial(&mut w, sigma.n(), 1);
    Ok(w)
}

/// Law of `(sigma_1, sigma_2, ..., sigma_j)` where `sigma_1` is uniform among
/// the permutations with the cycle partition of a two-parameter `pi`.
///
/// With `sigma0` present (a full cycle of `[j]` arranging elements inside
/// each group) the value is further divided by `(j - 1)!`.
pub fn balanced_permutation_weight<W: Weight>(
    sigma1: &Permutation,
    matchings: &[Permutation],
    g: &GroupIndexing,
    params: &ModelParams,
    sigma0: Option<&Permutation>,
) -> Result<W> {
    check_matchings(sigma1.n(), matchings, g)?;
    let pi = sigma1.cycle_partition();
    let mut w: W = two_param_partition_weight(&pi, params)?;
    for s in pi.block_sizes() {
        div_gamma(&mut w, s);
    }
    div_factorial(&mut w, g.n(), g.j() - 1);
    if let Some(s0) = sigma0 {
        if s0.n() != g.j() || !s0.is_full_cycle() {
            return Err(Error::Domain(format!(
                "{s0} is not a cyclic permutation of [{}]",
                g.j()
            )));
        }
        div_factorial(&mut w, g.j() - 1, 1);
    }
    Ok(w)
}

/// Law on pairs `(sigma_0, sigma)` of permutations of `[n]` and `[nj]`:
/// `(theta/alpha)^{(#sigma_0)} / ((nj)! theta^{(n)}) prod_b -(-alpha)^{(#b)} / Gamma(#b)`.
pub fn even_permutation_pair_weight<W: Weight>(
    sigma0: &Permutation,
    sigma: &Permutation,
    params: &ModelParams,
) -> Result<W> {
    group_size(sigma0.n(), sigma.n())?;
    let pi = sigma0.cycle_partition();
    let mut w: W = two_param_partition_weight(&pi, params)?;
    for s in pi.block_sizes() {
        div_gamma(&mut w, s);
    }
    div_factorial(&mut w, sigma.n(), 1);
    Ok(w)
}

/// Law on permutations of `[nj]` with `j`-even cycle type: the even CRP law
/// of the cycle partition spread uniformly over its `prod_b Gamma(#b)`
/// permutations.
pub fn even_permutation_weight<W: Weight>(
    sigma: &Permutation,
    g: &GroupIndexing,
    params: &ModelParams,
) -> Result<W> {
    if sigma.n() != g.size() {
        return Err(Error::Domain(format!(
            "permutation of [{}] does not fit n = {}, j = {}",
            sigma.n(),
            g.n(),
            g.j()
        )));
    }
    let pi = sigma.cycle_partition();
    let mut w: W = even_partition_weight(&pi, g, params)?;
    for s in pi.block_sizes() {
        div_gamma(&mut w, s);
    }
    Ok(w)
}

dual_pmf!(
    joint_balanced_pmf => joint_balanced_weight(pi: &SetPartition, matchings: &[Permutation], g: &GroupIndexing, params: &ModelParams)
);
dual_pmf!(joint_even_pmf => joint_even_weight(pi: &SetPartition, sigma: &Permutation, params: &ModelParams));
dual_pmf!(
    balanced_permutation_pmf => balanced_permutation_weight(
        sigma1: &Permutation,
        matchings: &[Permutation],
        g: &GroupIndexing,
        params: &ModelParams,
        sigma0: Option<&Permutation>,
    )
);
dual_pmf!(
    even_permutation_pair_pmf => even_permutation_pair_weight(sigma0: &Permutation, sigma: &Permutation, params: &ModelParams)
);
dual_pmf!(even_permutation_pmf => even_permutation_weight(sigma: &Permutation, g: &GroupIndexing, params: &ModelParams));

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::combinatorics::{count_permutations_for, is_j_even};
    use crate::distributions::even_partition_pmf;
    use crate::oracle::{enumerate_partitions, enumerate_permutations};
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

    fn params() -> (Rational, Rational, ModelParams) {
        let (a, t) = (r(1, 3), r(2, 5));
        (a.clone(), t.clone(), ModelParams::two_param(a, t).unwrap())
    }

    #[test]
    fn joint_balanced_examples() {
        let (a, t, p) = params();
        let one: SetPartition = "1".parse().unwrap();
        assert_eq!(
            exact(joint_balanced_pmf(
                &one,
                &[Permutation::identity(1)],
                &g(1, 2),
                &p
            )),
            r(1, 1)
        );
        let expected = (r(1, 1) - &a) / (r(2, 1) * (&t + r(1, 1)));
        let pi: SetPartition = "1 2".parse().unwrap();
        for s in enumerate_permutations(2, &EnumerationBudget::default()).unwrap() {
            assert_eq!(exact(joint_balanced_pmf(&pi, &[s], &g(2, 2), &p)), expected);
        }
    }

    #[test]
    fn joint_even_examples() {
        let (a, t, p) = params();
        let one: SetPartition = "1".parse().unwrap();
        for s in enumerate_permutations(2, &EnumerationBudget::default()).unwrap() {
            assert_eq!(exact(joint_even_pmf(&one, &s, &p)), r(1, 2));
        }
        let pi: SetPartition = "1 2".parse().unwrap();
        assert_eq!(
            exact(joint_even_pmf(&pi, &Permutation::identity(2), &p)),
            (r(1, 1) - &a) / (r(2, 1) * (&t + r(1, 1)))
        );
        assert!(joint_even_pmf(&pi, &Permutation::identity(3), &p).is_err());
    }

    #[test]
    fn balanced_permutation_examples() {
        let (a, t, p) = params();
        let id1 = Permutation::identity(1);
        assert_eq!(
            exact(balanced_permutation_pmf(
                &id1,
                std::slice::from_ref(&id1),
                &g(1, 2),
                &p,
                None
            )),
            r(1, 1)
        );
        let cyc: Permutation = "2 1".parse().unwrap();
        let base = (r(1, 1) - &a) / (r(2, 1) * (&t + r(1, 1)));
        let id2 = Permutation::identity(2);
        assert_eq!(
            exact(balanced_permutation_pmf(
                &cyc,
                std::slice::from_ref(&id2),
                &g(2, 2),
                &p,
                None
            )),
            base
        );
        // j = 3: (j - 1)! = 2 cyclic arrangements.
        let s0: Permutation = "2 3 1".parse().unwrap();
        let without = exact(balanced_permutation_pmf(
            &cyc,
            &[id2.clone(), id2.clone()],
            &g(2, 3),
            &p,
            None,
        ));
        let with = exact(balanced_permutation_pmf(
            &cyc,
            &[id2.clone(), id2.clone()],
            &g(2, 3),
            &p,
            Some(&s0),
        ));
        assert_eq!(with * r(2, 1), without);
        let not_cyclic: Permutation = "2 1 3".parse().unwrap();
        assert!(balanced_permutation_pmf(
            &cyc,
            &[id2.clone(), id2],
            &g(2, 3),
            &p,
            Some(&not_cyclic)
        )
        .is_err());
    }

    #[test]
    fn even_permutation_pair_examples() {
        let (a, t, p) = params();
        let id1 = Permutation::identity(1);
        let p1 = ModelParams::ratio((1, 2), (1, 1)).unwrap();
        assert_eq!(exact(even_permutation_pair_pmf(&id1, &id1, &p1)), r(1, 1));
        let cyc: Permutation = "2 1".parse().unwrap();
        let budget = EnumerationBudget::default();
        let mut total = Rational::from_integer(0.into());
        for s0 in enumerate_permutations(2, &budget).unwrap() {
            for s in enumerate_permutations(2, &budget).unwrap() {
                let v = exact(even_permutation_pair_pmf(&s0, &s, &p));
                if s0 == cyc {
                    assert_eq!(v, (r(1, 1) - &a) / (r(2, 1) * (&t + r(1, 1))));
                }
                total += v;
            }
        }
        assert!(total.is_one());
    }

    #[test]
    fn even_permutation_examples() {
        let (_, _, p) = params();
        let budget = EnumerationBudget::default();
        let cyc: Permutation = "2 1".parse().unwrap();
        assert_eq!(exact(even_permutation_pmf(&cyc, &g(1, 2), &p)), r(1, 1));
        assert!(even_permutation_pmf(&Permutation::identity(2), &g(1, 2), &p).is_err());
        let mut total = Rational::from_integer(0.into());
        for s in enumerate_permutations(4, &budget).unwrap() {
            let pi = s.cycle_partition();
            if !is_j_even(&pi, 2).unwrap() {
                continue;
            }
            let v = exact(even_permutation_pmf(&s, &g(2, 2), &p));
            let per_partition = exact(even_partition_pmf(&pi, &g(2, 2), &p));
            let count = Rational::from_integer(count_permutations_for(&pi).into());
            assert_eq!(v.clone() * count, per_partition);
            total += v;
        }
        assert!(total.is_one());
    }

    #[test]
    fn product_laws_normalize() {
        let budget = EnumerationBudget::default();
        let (_, _, p) = params();
        for (n, j) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
            let perms = enumerate_permutations(n, &budget).unwrap();
            let mut total = Rational::from_integer(0.into());
            for pi in enumerate_partitions(n, &budget).unwrap() {
                for s in &perms {
                    let mut ms = vec![s.clone()];
                    ms.resize(j - 1, Permutation::identity(n));
                    // Remaining matchings fixed: scale by the number of choices.
                    let v = exact(joint_balanced_pmf(&pi, &ms, &g(n, j), &p));
                    total += v * Rational::from_integer(
                        crate::combinatorics::factorial(n)
                            .pow((j - 2) as u32)
                            .into(),
                    );
                }
            }
            assert!(total.is_one(), "joint balanced n={n} j={j}");
        }
    }
}
