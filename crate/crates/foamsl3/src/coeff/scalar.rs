use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{parse_int_or_frac, CoeffError, Euclid, Field, Ring};

/// The rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(n: i64, d: i64) -> Self {
        Q(BigRational::new(n.into(), d.into()))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Ring for Q {
    fn zero() -> Self {
        Q(BigRational::zero())
    }
    fn one() -> Self {
        Q(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Q(BigRational::from_integer(n.into()))
    }
    fn add(&self, o: &Self) -> Self {
        Q(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Q(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Q(&self.0 * &o.0)
    }
    fn neg(&self) -> Self {
        Q(-&self.0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Q(self.0.recip()))
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let (n, d) = parse_int_or_frac(s)?;
        Ok(Q(BigRational::new(n, d)))
    }
}

impl Field for Q {}

impl Euclid for Q {
    fn size(&self) -> Option<u64> {
        (!self.is_zero()).then_some(0)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (Q(&self.0 / &d.0), Q::zero())
    }
}

/// The prime field with `P` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fp<const P: u32>(pub u32);

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;

impl<const P: u32> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u32)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Ring for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_int(n: i64) -> Self {
        Fp::new(n)
    }
    fn add(&self, o: &Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(P-2)
        Some(self.pow(P - 2))
    }
    fn pow(&self, k: u32) -> Self {
        let (mut b, mut e, mut r) = (self.0 as u64, k, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P as u64;
            }
            b = b * b % P as u64;
            e >>= 1;
        }
        Fp(r as u32)
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let (n, d) = parse_int_or_frac(s)?;
        let p = BigInt::from(P);
        let n = n.mod_floor(&p).to_i64().unwrap();
        let d = Fp::<P>::new(d.mod_floor(&p).to_i64().unwrap());
        let di = d.inv().ok_or_else(|| CoeffError::Parse(s.to_string()))?;
        Ok(Fp::<P>::new(n).mul(&di))
    }
}

impl<const P: u32> Field for Fp<P> {}

impl<const P: u32> Euclid for Fp<P> {
    fn size(&self) -> Option<u64> {
        (!self.is_zero()).then_some(0)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (self.mul(&d.inv().expect("division by zero")), Fp(0))
    }
}

pub(crate) fn fmt_signed_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &[(String, String)],
) -> fmt::Result {
    // terms: (coefficient as string, monomial); monomial "" means constant
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (c, m)) in terms.iter().enumerate() {
        let (neg, mag) = match c.strip_prefix('-') {
            Some(r) => (true, r.to_string()),
            None => (false, c.clone()),
        };
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        let needs_paren = mag.contains('/') && !m.is_empty();
        match (mag.as_str(), m.is_empty()) {
            ("1", false) => write!(f, "{m}")?,
            (_, true) => write!(f, "{mag}")?,
            _ if needs_paren => write!(f, "({mag}){m}")?,
            _ => write!(f, "{mag}{m}")?,
        }
    }
    Ok(())
}
