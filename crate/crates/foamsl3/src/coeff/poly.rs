use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::fmt_signed_terms;
use super::{parse_int_or_frac, CoeffError, Euclid, Ring, Q};

/// `ℚ[U]`, stored densely by powers of `U`. In graded use `deg U = 2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QU(Vec<BigRational>);

impl QU {
    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QU(c)
    }
    pub fn u() -> Self {
        QU::monomial(Q::one(), 1)
    }
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c.0;
        QU::from_coeffs(v)
    }
    pub fn constant(c: Q) -> Self {
        QU::monomial(c, 0)
    }
    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    /// Largest `k` with `U^k` dividing `self`; `None` for zero.
    pub fn u_valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }
    /// Substitute `U = t`.
    pub fn eval(&self, t: &Q) -> Q {
        let mut r = BigRational::zero();
        for c in self.0.iter().rev() {
            r = r * &t.0 + c;
        }
        Q(r)
    }
    /// Leading coefficient.
    pub fn lead(&self) -> Option<Q> {
        self.0.last().cloned().map(Q)
    }
}

impl fmt::Display for QU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, String)> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let m = match k {
                    0 => String::new(),
                    1 => "U".into(),
                    _ => format!("U^{k}"),
                };
                (c.to_string(), m)
            })
            .collect();
        fmt_signed_terms(f, &terms)
    }
}

impl Ring for QU {
    fn zero() -> Self {
        QU(vec![])
    }
    fn one() -> Self {
        QU(vec![BigRational::one()])
    }
    fn from_int(n: i64) -> Self {
        QU::from_coeffs(vec![BigRational::from_integer(n.into())])
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QU::from_coeffs(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }
    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return QU::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QU::from_coeffs(v)
    }
    fn neg(&self) -> Self {
        QU(self.0.iter().map(|c| -c).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn inv(&self) -> Option<Self> {
        (self.0.len() == 1).then(|| QU(vec![self.0[0].recip()]))
    }
    fn weight(&self) -> Option<u32> {
        let d = self.degree()?;
        (self.u_valuation() == Some(d)).then_some(d as u32)
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let (n, d) = parse_int_or_frac(s)?;
        Ok(QU::from_coeffs(vec![BigRational::new(n, d)]))
    }
}

impl Euclid for QU {
    fn size(&self) -> Option<u64> {
        self.degree().map(|d| d as u64)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero");
        let lead_inv = d.0[dd].recip();
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &lead_inv;
            for (j, dc) in d.0.iter().enumerate() {
                let t = &c * dc;
                r[k + j] -= t;
            }
            q[k] = c;
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (QU::from_coeffs(q), QU::from_coeffs(r))
    }
}

/// Number of variables of [`ZPoly`].
pub const NVARS: usize = 3;

/// `ℤ[v0, v1, v2]`: the generic symbolic ring. Variables are interpreted by
/// the caller, as `(a₂, a₁, a₀)` or as `(a₁′, a₀′, x₁)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ZPoly(BTreeMap<[u16; NVARS], BigInt>);

impl ZPoly {
    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        ZPoly(BTreeMap::from([(e, BigInt::one())]))
    }
    pub fn terms(&self) -> impl Iterator<Item = (&[u16; NVARS], &BigInt)> {
        self.0.iter()
    }
    /// Evaluate at a point of another ring.
    pub fn eval<R: Ring>(&self, at: &[R; NVARS]) -> R {
        let mut acc = R::zero();
        for (e, c) in &self.0 {
            let mut t = R::parse(&c.to_string()).expect("integer literal");
            for (v, &k) in at.iter().zip(e) {
                t = t.mul(&v.pow(k as u32));
            }
            acc = acc.add(&t);
        }
        acc
    }
    pub fn display_with(&self, names: [&str; NVARS]) -> String {
        struct D<'a>(&'a ZPoly, [&'a str; NVARS]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms: Vec<(String, String)> = self
                    .0
                     .0
                    .iter()
                    .rev()
                    .map(|(e, c)| {
                        let m: Vec<String> = e
                            .iter()
                            .zip(self.1)
                            .filter(|(k, _)| **k > 0)
                            .map(|(k, n)| {
                                if *k == 1 {
                                    n.to_string()
                                } else {
                                    format!("{n}^{k}")
                                }
                            })
                            .collect();
                        (c.to_string(), m.join("*"))
                    })
                    .collect();
                fmt_signed_terms(f, &terms)
            }
        }
        D(self, names).to_string()
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(["v0", "v1", "v2"]))
    }
}

impl Ring for ZPoly {
    fn zero() -> Self {
        ZPoly::default()
    }
    fn one() -> Self {
        ZPoly::from_int(1)
    }
    fn from_int(n: i64) -> Self {
        let mut m = BTreeMap::new();
        if n != 0 {
            m.insert([0; NVARS], BigInt::from(n));
        }
        ZPoly(m)
    }
    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            let v = m.entry(*e).or_insert_with(BigInt::zero);
            *v += c;
            if v.is_zero() {
                m.remove(e);
            }
        }
        ZPoly(m)
    }
    fn mul(&self, o: &Self) -> Self {
        let mut m: BTreeMap<[u16; NVARS], BigInt> = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let mut e = *e1;
                for i in 0..NVARS {
                    e[i] += e2[i];
                }
                *m.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        m.retain(|_, c| !c.is_zero());
        ZPoly(m)
    }
    fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.len() != 1 {
            return None;
        }
        let (e, c) = self.0.iter().next().unwrap();
        (*e == [0; NVARS] && c.abs().is_one()).then(|| self.clone())
    }
    fn weight(&self) -> Option<u32> {
        None
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let (n, d) = parse_int_or_frac(s)?;
        if !d.is_one() {
            return Err(CoeffError::Parse(s.to_string()));
        }
        let mut m = BTreeMap::new();
        if !n.is_zero() {
            m.insert([0; NVARS], n);
        }
        Ok(ZPoly(m))
    }
}
