use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::{Error, Rational, Result};

/// Parameters of the two-parameter partition model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum ModelParams {
    /// `0 <= alpha <= 1`, `theta > -alpha`.
    TwoParam {
        #[serde(serialize_with = "crate::distributions::ser_rational")]
        alpha: Rational,
        #[serde(serialize_with = "crate::distributions::ser_rational")]
        theta: Rational,
    },
    /// `alpha = -kappa < 0`, `theta = m * kappa`.
    NegativeKappa {
        #[serde(serialize_with = "crate::distributions::ser_rational")]
        kappa: Rational,
        m: u64,
    },
    /// The one-parameter Ewens family, equivalent to `alpha = 0, theta = lambda`.
    Ewens {
        #[serde(serialize_with = "crate::distributions::ser_rational")]
        lambda: Rational,
    },
}

impl ModelParams {
    pub fn two_param(alpha: Rational, theta: Rational) -> Result<Self> {
        let p = ModelParams::TwoParam { alpha, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn negative_kappa(kappa: Rational, m: u64) -> Result<Self> {
        let p = ModelParams::NegativeKappa { kappa, m };
        p.validate()?;
        Ok(p)
    }

    pub fn ewens(lambda: Rational) -> Result<Self> {
        let p = ModelParams::Ewens { lambda };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor from small integer ratios, e.g.
    /// `ModelParams::ratio((1, 2), (1, 1))` for `alpha = 1/2, theta = 1`.
    pub fn ratio(alpha: (i64, i64), theta: (i64, i64)) -> Result<Self> {
        Self::two_param(
            Rational::new(alpha.0.into(), alpha.1.into()),
            Rational::new(theta.0.into(), theta.1.into()),
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::TwoParam { alpha, theta } => {
                if alpha.is_negative() || *alpha > Rational::one() {
                    return Err(Error::Parameter(format!("alpha = {alpha} outside [0, 1]")));
                }
                if *theta <= -alpha.clone() {
                    return Err(Error::Parameter(format!(
                        "theta = {theta} must exceed -alpha = {}",
                        -alpha.clone()
                    )));
                }
            }
            ModelParams::NegativeKappa { kappa, m } => {
                if !kappa.is_positive() {
                    return Err(Error::Parameter(format!(
                        "kappa = {kappa} must be positive"
                    )));
                }
                if *m == 0 {
                    return Err(Error::Parameter("m must be a positive integer".into()));
                }
            }
            ModelParams::Ewens { lambda } => {
                if !lambda.is_positive() {
                    return Err(Error::Parameter(format!(
                        "lambda = {lambda} must be positive"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn alpha(&self) -> Rational {
        match self {
            ModelParams::TwoParam { alpha, .. } => alpha.clone(),
            ModelParams::NegativeKappa { kappa, .. } => -kappa.clone(),
            ModelParams::Ewens { .. } => Rational::zero(),
        }
    }

    pub fn theta(&self) -> Rational {
        match self {
            ModelParams::TwoParam { theta, .. } => theta.clone(),
            ModelParams::NegativeKappa { kappa, m } => kappa * Rational::from_integer((*m).into()),
            ModelParams::Ewens { lambda } => lambda.clone(),
        }
    }

    /// Validated `(alpha, theta)`.
    pub fn alpha_theta(&self) -> Result<(Rational, Rational)> {
        self.validate()?;
        Ok((self.alpha(), self.theta()))
    }

    /// The Ewens parameter: `lambda` for [`ModelParams::Ewens`], `theta` for a
    /// two-parameter model with `alpha = 0`.
    pub fn ewens_parameter(&self) -> Result<Rational> {
        self.validate()?;
        match self {
            ModelParams::Ewens { lambda } => Ok(lambda.clone()),
            ModelParams::TwoParam { alpha, theta } if alpha.is_zero() => Ok(theta.clone()),
            other => Err(Error::Parameter(format!(
                "{other} is not a one-parameter Ewens model"
            ))),
        }
    }

    /// `(alpha / j, theta / j)` in the same regime.
    pub fn scaled_down(&self, j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::Domain("scale factor must be positive".into()));
        }
        let j = Rational::from_integer(j.into());
        let p = match self {
            ModelParams::TwoParam { alpha, theta } => ModelParams::TwoParam {
                alpha: alpha / &j,
                theta: theta / &j,
            },
            ModelParams::NegativeKappa { kappa, m } => ModelParams::NegativeKappa {
                kappa: kappa / &j,
                m: *m,
            },
            ModelParams::Ewens { lambda } => ModelParams::Ewens {
                lambda: lambda / &j,
            },
        };
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelParams::TwoParam { alpha, theta } => write!(f, "alpha={alpha} theta={theta}"),
            ModelParams::NegativeKappa { kappa, m } => write!(f, "kappa={kappa} m={m}"),
            ModelParams::Ewens { lambda } => write!(f, "lambda={lambda}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn regime_validation() {
        assert!(ModelParams::two_param(r(1, 2), r(1, 1)).is_ok());
        assert!(ModelParams::two_param(r(0, 1), r(1, 1)).is_ok());
        assert!(ModelParams::two_param(r(1, 2), r(-1, 4)).is_ok());
        assert!(ModelParams::two_param(r(1, 2), r(0, 1)).is_ok());
        assert!(ModelParams::two_param(r(1, 2), r(-1, 2)).is_err());
        assert!(ModelParams::two_param(r(3, 2), r(1, 1)).is_err());
        assert!(ModelParams::two_param(r(-1, 2), r(1, 1)).is_err());
        assert!(ModelParams::negative_kappa(r(1, 2), 0).is_err());
        assert!(ModelParams::negative_kappa(r(-1, 2), 3).is_err());
        assert!(ModelParams::ewens(r(0, 1)).is_err());
    }

    #[test]
    fn negative_kappa_encoding() {
        let p = ModelParams::negative_kappa(r(1, 2), 3).unwrap();
        assert_eq!(p.alpha_theta().unwrap(), (r(-1, 2), r(3, 2)));
        let q = p.scaled_down(2).unwrap();
        assert_eq!(q.alpha_theta().unwrap(), (r(-1, 4), r(3, 4)));
    }

    #[test]
    fn ewens_parameter_only_for_alpha_zero() {
        assert_eq!(
            ModelParams::two_param(r(0, 1), r(2, 1))
                .unwrap()
                .ewens_parameter()
                .unwrap(),
            r(2, 1)
        );
        assert!(matches!(
            ModelParams::ratio((1, 2), (1, 1))
                .unwrap()
                .ewens_parameter(),
            Err(Error::Parameter(_))
        ));
    }
}
