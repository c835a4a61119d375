//! Coefficient rings, potentials and the two local algebras: the circle
//! algebra `R[x]/(ω)` and the theta algebra `M`.

mod algebra;
mod poly;
mod scalar;

pub use algebra::{
    beta_product, circle_multiply, counit_eps, split_root, theta_normal_form, theta_split,
    theta_value, CircleElem, Potential, TensorElem, ThetaElem, ThetaPoly,
};
pub use poly::{ZPoly, QU};
pub use scalar::{Fp, F2, F3, F5, Q};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("{0} is not a root of the potential")]
    NotARoot(String),
    #[error("cannot parse ring element {0:?}")]
    Parse(String),
}

/// Commutative ring with exact arithmetic.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Inverse of a unit, `None` otherwise.
    fn inv(&self) -> Option<Self>;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn is_unit(&self) -> bool {
        self.inv().is_some()
    }
    fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }
    /// Parse a decimal integer or fraction literal into the ring.
    fn parse(s: &str) -> Result<Self, CoeffError>;
    /// `U`-degree of a nonzero homogeneous element, `None` if it is not
    /// homogeneous. Constants of the ground field have weight 0.
    fn weight(&self) -> Option<u32> {
        Some(0)
    }
}

/// Rings in which every nonzero element is a unit.
pub trait Field: Ring {}

/// Euclidean domains, used by Smith normal form.
pub trait Euclid: Ring {
    /// Euclidean size; `None` for zero.
    fn size(&self) -> Option<u64>;
    fn div_rem(&self, d: &Self) -> (Self, Self);
}

pub(crate) fn parse_int_or_frac(
    s: &str,
) -> Result<(num_bigint::BigInt, num_bigint::BigInt), CoeffError> {
    use num_bigint::BigInt;
    let s = s.trim();
    let err = || CoeffError::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d == BigInt::from(0) {
        return Err(err());
    }
    Ok((n, d))
}
