//! The Ewens family and the two-parameter model on `[n]`.

use super::terms::{
    div_rising, div_rising_tail, mul_block_tail, mul_factorial, mul_gamma, mul_pow,
    mul_table_openings,
};
use super::{dual_pmf, Weight};
use crate::{IntegerPartition, ModelParams, Permutation, Result, SetPartition};

/// Ewens sampling formula on integer partitions of `n`:
/// `n! / lambda^{(n)} prod_j lambda^{c_j} / (j^{c_j} c_j!)`.
pub fn ewens_integer_weight<W: Weight>(
    parts: &IntegerPartition,
    params: &ModelParams,
) -> Result<W> {
    let lambda = params.ewens_parameter()?;
    let n = parts.n();
    let mut w = W::one();
    mul_factorial(&mut w, n, 1);
    div_rising(&mut w, &lambda, n);
    for (i, &c) in parts.multiplicities().iter().enumerate() {
        mul_pow(&mut w, &lambda, c);
        for _ in 0..c {
            w.div_int(i + 1);
        }
        if c > 1 {
            w.div_big(&crate::combinatorics::factorial(c));
        }
    }
    Ok(w)
}

/// Ewens law on set partitions: `lambda^{#B} / lambda^{(n)} prod_b Gamma(#b)`.
pub fn ewens_partition_weight<W: Weight>(b: &SetPartition, params: &ModelParams) -> Result<W> {
    let lambda = params.ewens_parameter()?;
    let mut w = W::one();
    mul_pow(&mut w, &lambda, b.num_blocks());
    div_rising(&mut w, &lambda, b.n());
    for s in b.block_sizes() {
        mul_gamma(&mut w, s);
    }
    Ok(w)
}

/// Ewens law on permutations: `lambda^{#sigma} / lambda^{(n)}`.
pub fn ewens_permutation_weight<W: Weight>(sigma: &Permutation, params: &ModelParams) -> Result<W> {
    let lambda = params.ewens_parameter()?;
    let mut w = W::one();
    mul_pow(&mut w, &lambda, sigma.num_cycles());
    div_rising(&mut w, &lambda, sigma.n());
    Ok(w)
}

/// Two-parameter law on set partitions:
/// `(theta/alpha)^{(#B)} / theta^{(n)} prod_b -(-alpha)^{(#b)}`.
pub fn two_param_partition_weight<W: Weight>(b: &SetPartition, params: &ModelParams) -> Result<W> {
    let (alpha, theta) = params.alpha_theta()?;
    let mut w = W::one();
    mul_table_openings(&mut w, &theta, &alpha, b.num_blocks());
    div_rising_tail(&mut w, &theta, b.n());
    for s in b.block_sizes() {
        mul_block_tail(&mut w, &alpha, s);
    }
    Ok(w)
}

dual_pmf!(ewens_integer_pmf => ewens_integer_weight(parts: &IntegerPartition, params: &ModelParams));
dual_pmf!(ewens_partition_pmf => ewens_partition_weight(b: &SetPartition, params: &ModelParams));
dual_pmf!(
    /// Uses `lambda^{#sigma}`; the rising-factorial reading of the exponent
    /// does not sum to one over the symmetric group.
    ewens_permutation_pmf => ewens_permutation_weight(sigma: &Permutation, params: &ModelParams)
);
dual_pmf!(two_param_partition_pmf => two_param_partition_weight(b: &SetPartition, params: &ModelParams));

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};

    use super::*;
    use crate::oracle::{
        enumerate_integer_partitions, enumerate_partitions, enumerate_permutations,
    };
    use crate::{EnumerationBudget, Rational};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn exact(p: crate::Result<crate::ProbValue>) -> Rational {
        p.unwrap().exact_value().unwrap().clone()
    }

    /// Probability of the seating path that builds `b` one element at a time.
    fn seating_path_probability(b: &SetPartition, alpha: &Rational, theta: &Rational) -> Rational {
        let labels = b.labels();
        let mut sizes: Vec<usize> = Vec::new();
        let mut p = <Rational as num_traits::One>::one();
        for (k, &l) in labels.iter().enumerate() {
            let den = theta + Rational::from_integer(k.into());
            if l == sizes.len() {
                if k > 0 {
                    p *= (theta + alpha * Rational::from_integer(sizes.len().into())) / den;
                }
                sizes.push(1);
            } else {
                p *= (Rational::from_integer(sizes[l].into()) - alpha) / den;
                sizes[l] += 1;
            }
        }
        p
    }

    fn grid() -> Vec<ModelParams> {
        vec![
            ModelParams::ratio((1, 2), (1, 1)).unwrap(),
            ModelParams::ratio((0, 1), (1, 1)).unwrap(),
            ModelParams::ratio((1, 3), (-1, 4)).unwrap(),
            ModelParams::ratio((1, 2), (0, 1)).unwrap(),
            ModelParams::ratio((1, 1), (2, 1)).unwrap(),
            ModelParams::negative_kappa(r(1, 2), 3).unwrap(),
        ]
    }

    #[test]
    fn two_param_matches_seating_path_probability() {
        let budget = EnumerationBudget::default();
        for params in grid() {
            let (a, t) = params.alpha_theta().unwrap();
            for n in 1..=6 {
                for b in enumerate_partitions(n, &budget).unwrap() {
                    assert_eq!(
                        exact(two_param_partition_pmf(&b, &params)),
                        seating_path_probability(&b, &a, &t),
                        "{b} at {params}"
                    );
                }
            }
        }
    }

    #[test]
    fn two_param_examples() {
        let p = ModelParams::ratio((1, 3), (2, 5)).unwrap();
        // (1 - alpha)/(1 + theta)
        assert_eq!(
            exact(two_param_partition_pmf(&"1 2".parse().unwrap(), &p)),
            r(2, 3) / r(7, 5)
        );
        assert_eq!(
            exact(two_param_partition_pmf(&"1".parse().unwrap(), &p)),
            r(1, 1)
        );
        let p = ModelParams::ratio((1, 2), (1, 1)).unwrap();
        assert_eq!(
            exact(two_param_partition_pmf(&"1|2".parse().unwrap(), &p)),
            r(3, 4)
        );
    }

    #[test]
    fn negative_kappa_caps_block_count() {
        let p = ModelParams::negative_kappa(r(1, 2), 2).unwrap();
        let b: SetPartition = "1|2|3".parse().unwrap();
        assert!(exact(two_param_partition_pmf(&b, &p)).is_zero());
        assert_eq!(
            two_param_partition_pmf(&b, &p).unwrap().ln(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn alpha_zero_is_ewens() {
        let budget = EnumerationBudget::default();
        let two = ModelParams::ratio((0, 1), (3, 2)).unwrap();
        let ewens = ModelParams::ewens(r(3, 2)).unwrap();
        for b in enumerate_partitions(5, &budget).unwrap() {
            assert_eq!(
                exact(two_param_partition_pmf(&b, &two)),
                exact(ewens_partition_pmf(&b, &ewens))
            );
        }
    }

    #[test]
    fn ewens_examples() {
        let one = ModelParams::ewens(r(1, 1)).unwrap();
        let any = ModelParams::ewens(r(7, 3)).unwrap();
        let ip = |s: &str| s.parse::<IntegerPartition>().unwrap();
        assert_eq!(exact(ewens_integer_pmf(&ip("2"), &one)), r(1, 2));
        assert_eq!(exact(ewens_integer_pmf(&ip("1 1"), &one)), r(1, 2));
        assert_eq!(exact(ewens_integer_pmf(&ip("1"), &any)), r(1, 1));
        assert_eq!(
            exact(ewens_partition_pmf(&"1 2 3".parse().unwrap(), &one)),
            r(1, 3)
        );
        assert_eq!(
            exact(ewens_partition_pmf(&"1".parse().unwrap(), &any)),
            r(1, 1)
        );
        assert_eq!(
            exact(ewens_partition_pmf(&"1|2".parse().unwrap(), &one)),
            r(1, 2)
        );
        assert_eq!(
            exact(ewens_permutation_pmf(&Permutation::identity(3), &one)),
            r(1, 6)
        );
        assert_eq!(
            exact(ewens_permutation_pmf(&Permutation::identity(1), &any)),
            r(1, 1)
        );
        assert_eq!(
            exact(ewens_permutation_pmf(&"2 3 1".parse().unwrap(), &one)),
            r(1, 6)
        );
    }

    #[test]
    fn ewens_rejects_nonzero_alpha() {
        let p = ModelParams::ratio((1, 2), (1, 1)).unwrap();
        assert!(matches!(
            ewens_partition_pmf(&"1".parse().unwrap(), &p),
            Err(crate::Error::Parameter(_))
        ));
    }

    #[test]
    fn ewens_laws_normalize() {
        let budget = EnumerationBudget::default();
        for lambda in [r(1, 2), r(1, 1), r(5, 2)] {
            let p = ModelParams::ewens(lambda).unwrap();
            for n in 1..=6 {
                let s: Rational = enumerate_integer_partitions(n, &budget)
                    .unwrap()
                    .iter()
                    .map(|l| exact(ewens_integer_pmf(l, &p)))
                    .sum();
                assert!(s.is_one());
                let s: Rational = enumerate_partitions(n, &budget)
                    .unwrap()
                    .iter()
                    .map(|b| exact(ewens_partition_pmf(b, &p)))
                    .sum();
                assert!(s.is_one());
                let s: Rational = enumerate_permutations(n, &budget)
                    .unwrap()
                    .iter()
                    .map(|x| exact(ewens_permutation_pmf(x, &p)))
                    .sum();
                assert!(s.is_one());
            }
        }
    }

    #[test]
    fn log_path_agrees_with_exact_path() {
        let budget = EnumerationBudget::default();
        for params in grid() {
            for b in enumerate_partitions(6, &budget).unwrap() {
                let v = two_param_partition_pmf(&b, &params).unwrap();
                let x = v.exact_value().unwrap();
                if x.is_zero() {
                    assert_eq!(v.stored_log().unwrap(), f64::NEG_INFINITY);
                } else {
                    let l = v.stored_log().unwrap();
                    let e = crate::distributions::ln_abs_rational(x);
                    assert!((l - e).abs() <= 1e-12 * e.abs().max(1.0), "{l} vs {e}");
                }
            }
        }
    }

    #[test]
    fn log_path_handles_large_n() {
        let p = ModelParams::ratio((1, 2), (1, 1)).unwrap();
        let b = SetPartition::single_block(2000).unwrap();
        let l: crate::LogWeight = two_param_partition_weight(&b, &p).unwrap();
        // (1/2)_{(1999)} / 2^{(1999)} = Gamma(1999.5) / (Gamma(1/2) * 2000!) * 1
        let expected = statrs::function::gamma::ln_gamma(1999.5)
            - statrs::function::gamma::ln_gamma(0.5)
            - statrs::function::gamma::ln_gamma(2001.0);
        assert!((l.ln_abs() - expected).abs() < 1e-8);
    }
}
