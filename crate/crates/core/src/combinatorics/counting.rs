use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::{Error, IntegerPartition, Rational, Result, SetPartition};

/// `x (x + 1) ... (x + n - 1)`, with the empty product equal to one.
pub fn rising_factorial(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// `-(-alpha)^{(k)} = alpha (1 - alpha) (2 - alpha) ... (k - 1 - alpha)`,
/// the weight a block of size `k` carries in the two-parameter model.
pub fn neg_rising_block_factor(alpha: &Rational, k: usize) -> Rational {
    -rising_factorial(&-alpha.clone(), k)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `Gamma(k) = (k - 1)!` for a positive integer `k`.
pub fn gamma_int(k: usize) -> BigUint {
    assert!(k >= 1, "Gamma is only evaluated at positive integers");
    factorial(k - 1)
}

/// Number of set partitions of `[n]` with block sizes `lambda`:
/// `n! / prod_j (j!)^{lambda_j} lambda_j!`.
pub fn count_set_partitions_for(lambda: &IntegerPartition) -> BigUint {
    let mut den = BigUint::one();
    for (i, &m) in lambda.multiplicities().iter().enumerate() {
        den *= Pow::pow(factorial(i + 1), m) * factorial(m);
    }
    factorial(lambda.n()) / den
}

/// Number of permutations of `[n]` whose cycles are the blocks of `b`:
/// `prod_b Gamma(#b)`.
pub fn count_permutations_for(b: &SetPartition) -> BigUint {
    b.block_sizes().map(gamma_int).product()
}

/// Bell numbers via the Bell triangle.
pub fn bell_number(n: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("non-empty row").clone());
        for x in &row {
            let v = next.last().expect("non-empty row") + x;
            next.push(v);
        }
        row = next;
    }
    row[0].clone()
}

fn group_level(m: &IntegerPartition, j: usize) -> Result<IntegerPartition> {
    m.divide_parts(j).map_err(|e| {
        Error::Domain(format!(
            "not an integer partition of a {j}-even partition: {e}"
        ))
    })
}

/// Number of `j`-even partitions of `[nj]` with block sizes `m`:
/// `(nj)! / prod_i ((ij)!)^{m_ij} m_ij!`.
pub fn count_even_for(m: &IntegerPartition, j: usize) -> Result<BigUint> {
    let groups = group_level(m, j)?;
    let mut den = BigUint::one();
    for (i, &c) in groups.multiplicities().iter().enumerate() {
        den *= Pow::pow(factorial((i + 1) * j), c) * factorial(c);
    }
    Ok(factorial(m.n()) / den)
}

/// Number of `j`-balanced partitions of `[nj]` (canonical typing) with block
/// sizes `m`: `(n!)^j / prod_i (i!)^{j m_ij} m_ij!`.
///
/// The type-1 elements form a partition of `[n]` with group-level sizes;
/// every other type is then distributed over the already-distinguished
/// blocks in `n! / prod_i (i!)^{m_ij}` ways.
pub fn count_balanced_for(m: &IntegerPartition, j: usize) -> Result<BigUint> {
    let groups = group_level(m, j)?;
    let n = groups.n();
    let mut den = BigUint::one();
    for (i, &c) in groups.multiplicities().iter().enumerate() {
        den *= Pow::pow(factorial(i + 1), j * c) * factorial(c);
    }
    Ok(Pow::pow(factorial(n), j) / den)
}
