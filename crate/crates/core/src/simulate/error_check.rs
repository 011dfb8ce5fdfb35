use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::BinaryDistribution;
use crate::error::Error;
use crate::exact::{parse_rational, ExactReal};

/// A multiplicative error level: an exact rational in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Epsilon(BigRational);

impl Epsilon {
    pub fn new(value: BigRational) -> Result<Self, Error> {
        if value.is_negative() || value >= BigRational::one() {
            return Err(Error::InvalidInput(format!("epsilon {value} outside [0, 1)")));
        }
        Ok(Epsilon(value))
    }

    pub fn zero() -> Self {
        Epsilon(BigRational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self, Error> {
        Epsilon::new(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn as_exact(&self) -> ExactReal {
        ExactReal::from_rational(&self.0)
    }
}

impl FromStr for Epsilon {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Epsilon::new(parse_rational(s)?)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativeErrorReport {
    pub ideal: BinaryDistribution,
    pub claimed: BinaryDistribution,
    pub epsilon: Epsilon,
    /// `|claimed.p_z - ideal.p_z|` for z = 0, 1.
    pub residuals: [ExactReal; 2],
    pub pass: bool,
}

/// Passes iff `|claimed.p_z - ideal.p_z| <= ε · ideal.p_z` for both z.
/// An ideal zero therefore forces a claimed zero for every ε.
pub fn check_multiplicative_error(
    ideal: &BinaryDistribution,
    claimed: &BinaryDistribution,
    epsilon: &Epsilon,
) -> MultiplicativeErrorReport {
    let eps = epsilon.as_exact();
    let residual = |z: bool| (claimed.p(z) - ideal.p(z)).abs();
    let residuals = [residual(false), residual(true)];
    let pass = [false, true].iter().zip(&residuals).all(|(&z, r)| *r <= &eps * ideal.p(z));
    MultiplicativeErrorReport {
        ideal: ideal.clone(),
        claimed: claimed.clone(),
        epsilon: epsilon.clone(),
        residuals,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(p0: (i64, i64), p1: (i64, i64)) -> BinaryDistribution {
        BinaryDistribution::new(ExactReal::ratio(p0.0, p0.1), ExactReal::ratio(p1.0, p1.1)).unwrap()
    }

    #[test]
    fn boundary_residual_passes() {
        let r =
            check_multiplicative_error(&dist((1, 2), (1, 2)), &dist((2, 5), (3, 5)), &Epsilon::ratio(1, 5).unwrap());
        assert!(r.pass);
        assert_eq!(r.residuals, [ExactReal::ratio(1, 10), ExactReal::ratio(1, 10)]);
    }

    #[test]
    fn tighter_epsilon_fails() {
        let r =
            check_multiplicative_error(&dist((1, 2), (1, 2)), &dist((2, 5), (3, 5)), &Epsilon::ratio(1, 10).unwrap());
        assert!(!r.pass);
    }

    #[test]
    fn zero_must_stay_zero() {
        let ideal = BinaryDistribution::certain(true);
        let claimed = dist((1, 1000), (999, 1000));
        for eps in ["0", "1/2", "999/1000"] {
            assert!(!check_multiplicative_error(&ideal, &claimed, &eps.parse().unwrap()).pass);
        }
    }

    #[test]
    fn epsilon_zero_is_equality() {
        let d = dist((1, 3), (2, 3));
        assert!(check_multiplicative_error(&d, &d, &Epsilon::zero()).pass);
        assert!(!check_multiplicative_error(&d, &dist((1, 2), (1, 2)), &Epsilon::zero()).pass);
    }

    #[test]
    fn epsilon_range() {
        assert!("1".parse::<Epsilon>().is_err());
        assert!("-1/3".parse::<Epsilon>().is_err());
        assert_eq!("0.2".parse::<Epsilon>().unwrap(), Epsilon::ratio(1, 5).unwrap());
    }

    #[test]
    fn report_json_shape() {
        let r =
            check_multiplicative_error(&dist((1, 2), (1, 2)), &dist((2, 5), (3, 5)), &Epsilon::ratio(1, 5).unwrap());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["ideal"]["p1"], "(1, 0, 1)");
        assert_eq!(v["claimed"]["p0"], "(2, 0, 0)/5");
        assert_eq!(v["epsilon"], "1/5");
        assert_eq!(v["residuals"][0], "(1, 0, 1)/5");
        assert_eq!(v["pass"], true);
    }
}
