use std::collections::BTreeMap;
use std::fmt;

use super::{CoeffError, Ring};

/// Monic cubic `ω(x) = x³ + a₂x² + a₁x + a₀`.
#[derive(Clone, PartialEq, Debug)]
pub struct Potential<R> {
    pub a2: R,
    pub a1: R,
    pub a0: R,
    pub roots: Option<[R; 3]>,
}

impl<R: Ring> Potential<R> {
    pub fn new(a2: R, a1: R, a0: R) -> Self {
        Potential {
            a2,
            a1,
            a0,
            roots: None,
        }
    }

    pub fn from_roots(r: [R; 3]) -> Self {
        let a2 = r[0].add(&r[1]).add(&r[2]).neg();
        let a1 = r[0].mul(&r[1]).add(&r[0].mul(&r[2])).add(&r[1].mul(&r[2]));
        let a0 = r[0].mul(&r[1]).mul(&r[2]).neg();
        Potential {
            a2,
            a1,
            a0,
            roots: Some(r),
        }
    }

    /// `ω = x³`.
    pub fn cube() -> Self {
        Potential::from_roots([R::zero(), R::zero(), R::zero()])
    }

    pub fn eval(&self, x: &R) -> R {
        let x2 = x.mul(x);
        x2.mul(x)
            .add(&self.a2.mul(&x2))
            .add(&self.a1.mul(x))
            .add(&self.a0)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Potential<S> {
        Potential {
            a2: f(&self.a2),
            a1: f(&self.a1),
            a0: f(&self.a0),
            roots: self.roots.as_ref().map(|r| [f(&r[0]), f(&r[1]), f(&r[2])]),
        }
    }

    /// Multiplicity of `x` among the known roots, if roots are known.
    pub fn multiplicity(&self, x: &R) -> Option<usize> {
        self.roots
            .as_ref()
            .map(|r| r.iter().filter(|y| *y == x).count())
    }

    /// Whether `ω` is homogeneous when `x` has weight 1: each `a_i` is zero
    /// or of weight `3 − i`.
    pub fn is_homogeneous(&self) -> bool {
        [(&self.a2, 1), (&self.a1, 2), (&self.a0, 3)]
            .iter()
            .all(|(a, w)| a.is_zero() || a.weight() == Some(*w))
    }

    /// `x^k` reduced modulo `ω`.
    pub fn x_pow(&self, k: usize) -> CircleElem<R> {
        let mut e = CircleElem::one();
        for _ in 0..k {
            e = e.times_x(self);
        }
        e
    }

    /// `ω′(x) = 3x² + 2a₂x + a₁`, the handle element up to sign.
    pub fn derivative(&self) -> CircleElem<R> {
        CircleElem([
            self.a1.clone(),
            self.a2.mul(&R::from_int(2)),
            R::from_int(3),
        ])
    }
}

impl<R: Ring> fmt::Display for Potential<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^3 + ({})x^2 + ({})x + ({})", self.a2, self.a1, self.a0)
    }
}

/// `ω = (x − x₁)(x² + a₁′x + a₀′)`; returns `(a₁′, a₀′)`.
pub fn split_root<R: Ring>(pot: &Potential<R>, x1: &R) -> Result<(R, R), CoeffError> {
    let a1p = pot.a2.add(x1);
    let a0p = pot.a1.add(&x1.mul(&a1p));
    if pot.a0.add(&x1.mul(&a0p)).is_zero() {
        Ok((a1p, a0p))
    } else {
        Err(CoeffError::NotARoot(x1.to_string()))
    }
}

/// Element `c₀ + c₁x + c₂x²` of `A = R[x]/(ω)`.
#[derive(Clone, PartialEq, Debug)]
pub struct CircleElem<R>(pub [R; 3]);

impl<R: Ring> CircleElem<R> {
    pub fn zero() -> Self {
        CircleElem([R::zero(), R::zero(), R::zero()])
    }
    pub fn one() -> Self {
        CircleElem([R::one(), R::zero(), R::zero()])
    }
    pub fn x() -> Self {
        CircleElem([R::zero(), R::one(), R::zero()])
    }
    /// `x^k` for `k ≤ 2`, without reduction.
    pub fn basis(k: usize) -> Self {
        let mut c = [R::zero(), R::zero(), R::zero()];
        c[k] = R::one();
        CircleElem(c)
    }
    /// `x² + a₁′x + a₀′`.
    pub fn p_of(a1p: &R, a0p: &R) -> Self {
        CircleElem([a0p.clone(), a1p.clone(), R::one()])
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
    pub fn add(&self, o: &Self) -> Self {
        CircleElem([
            self.0[0].add(&o.0[0]),
            self.0[1].add(&o.0[1]),
            self.0[2].add(&o.0[2]),
        ])
    }
    pub fn scale(&self, s: &R) -> Self {
        CircleElem([self.0[0].mul(s), self.0[1].mul(s), self.0[2].mul(s)])
    }
    pub fn neg(&self) -> Self {
        CircleElem([self.0[0].neg(), self.0[1].neg(), self.0[2].neg()])
    }
    pub fn times_x(&self, pot: &Potential<R>) -> Self {
        // x · (c₀ + c₁x + c₂x²) with x³ = −a₂x² − a₁x − a₀
        let [c0, c1, c2] = &self.0;
        CircleElem([
            c2.mul(&pot.a0).neg(),
            c0.sub(&c2.mul(&pot.a1)),
            c1.sub(&c2.mul(&pot.a2)),
        ])
    }
    pub fn mul(&self, o: &Self, pot: &Potential<R>) -> Self {
        let mut acc = Self::zero();
        let mut xk = o.clone();
        for c in &self.0 {
            acc = acc.add(&xk.scale(c));
            xk = xk.times_x(pot);
        }
        acc
    }
    /// Reduce an arbitrary polynomial `Σ cᵢxⁱ` modulo `ω`.
    pub fn from_poly(coeffs: &[R], pot: &Potential<R>) -> Self {
        let mut acc = Self::zero();
        let mut xk = Self::one();
        for c in coeffs {
            acc = acc.add(&xk.scale(c));
            xk = xk.times_x(pot);
        }
        acc
    }
}

pub fn circle_multiply<R: Ring>(
    u: &CircleElem<R>,
    v: &CircleElem<R>,
    pot: &Potential<R>,
) -> CircleElem<R> {
    u.mul(v, pot)
}

/// `ε(ax² + bx + c) = −a`.
pub fn counit_eps<R: Ring>(u: &CircleElem<R>) -> R {
    u.0[2].neg()
}

/// Polynomial in `A, B, C`, keyed by exponent triples.
pub type ThetaPoly<R> = BTreeMap<(u32, u32, u32), R>;

/// Coordinates in the basis `{1, A, A², B, AB, A²B}` of the theta algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct ThetaElem<R>(pub [R; 6]);

impl<R: Ring> ThetaElem<R> {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
    /// Coordinate of `A^i B^j` (`i ≤ 2`, `j ≤ 1`).
    pub fn coeff(&self, i: usize, j: usize) -> &R {
        &self.0[3 * j + i]
    }
}

/// Normal form in `M = R[A,B,C]/(A+B+C = −a₂, AB+AC+BC = a₁, ABC = −a₀)`.
pub fn theta_normal_form<R: Ring>(p: &ThetaPoly<R>, pot: &Potential<R>) -> ThetaElem<R> {
    // C = −a₂ − A − B
    let c_sub: BTreeMap<(u32, u32), R> = BTreeMap::from([
        ((0, 0), pot.a2.neg()),
        ((1, 0), R::from_int(-1)),
        ((0, 1), R::from_int(-1)),
    ]);
    let mut ab: BTreeMap<(u32, u32), R> = BTreeMap::new();
    for (&(i, j, k), c) in p {
        let mut t: BTreeMap<(u32, u32), R> = BTreeMap::from([((i, j), c.clone())]);
        for _ in 0..k {
            t = mul_ab(&t, &c_sub);
        }
        add_into(&mut ab, &t);
    }
    // B² = −A² − AB − a₂A − a₂B − a₁
    let b2: BTreeMap<(u32, u32), R> = BTreeMap::from([
        ((2, 0), R::from_int(-1)),
        ((1, 1), R::from_int(-1)),
        ((1, 0), pot.a2.neg()),
        ((0, 1), pot.a2.neg()),
        ((0, 0), pot.a1.neg()),
    ]);
    while let Some((&(i, j), _)) = ab.iter().find(|((_, j), c)| *j >= 2 && !c.is_zero()) {
        let c = ab.remove(&(i, j)).unwrap();
        let t = mul_ab(&BTreeMap::from([((i, j - 2), c)]), &b2);
        add_into(&mut ab, &t);
    }
    // A³ = −a₂A² − a₁A − a₀
    let a3: BTreeMap<(u32, u32), R> = BTreeMap::from([
        ((2, 0), pot.a2.neg()),
        ((1, 0), pot.a1.neg()),
        ((0, 0), pot.a0.neg()),
    ]);
    while let Some((&(i, j), _)) = ab.iter().find(|((i, _), c)| *i >= 3 && !c.is_zero()) {
        let c = ab.remove(&(i, j)).unwrap();
        let t = mul_ab(&BTreeMap::from([((i - 3, j), c)]), &a3);
        add_into(&mut ab, &t);
    }
    let mut out: [R; 6] = std::array::from_fn(|_| R::zero());
    for ((i, j), c) in ab {
        out[3 * j as usize + i as usize] = c;
    }
    ThetaElem(out)
}

fn mul_ab<R: Ring>(
    x: &BTreeMap<(u32, u32), R>,
    y: &BTreeMap<(u32, u32), R>,
) -> BTreeMap<(u32, u32), R> {
    let mut out = BTreeMap::new();
    for (&(i1, j1), c1) in x {
        for (&(i2, j2), c2) in y {
            add_term(&mut out, (i1 + i2, j1 + j2), c1.mul(c2));
        }
    }
    out
}

fn add_term<R: Ring>(m: &mut BTreeMap<(u32, u32), R>, k: (u32, u32), c: R) {
    let v = m.entry(k).or_insert_with(R::zero);
    *v = v.add(&c);
    if v.is_zero() {
        m.remove(&k);
    }
}

fn add_into<R: Ring>(m: &mut BTreeMap<(u32, u32), R>, t: &BTreeMap<(u32, u32), R>) {
    for (k, c) in t {
        add_term(m, *k, c.clone());
    }
}

/// Closed theta foam with `(n₁, n₂, n₃)` dots on its facets, listed in the
/// positive cyclic order: minus the `A²B` coordinate of `A^{n₁}B^{n₂}C^{n₃}`.
pub fn theta_value<R: Ring>(n: (u32, u32, u32), pot: &Potential<R>) -> R {
    let nf = theta_normal_form(&BTreeMap::from([(n, R::one())]), pot);
    nf.coeff(2, 1).neg()
}

/// The isomorphism `M(−3) → A(−3) ⊕ A(−1)`, `A^k ↦ (x^k, 0)`, `A^kB ↦ (0, y^k)`.
pub fn theta_split<R: Ring>(m: &ThetaElem<R>) -> (CircleElem<R>, CircleElem<R>) {
    let [c0, c1, c2, d0, d1, d2] = m.0.clone();
    (CircleElem([c0, c1, c2]), CircleElem([d0, d1, d2]))
}

/// Element of `A^{⊗n}`, keyed by exponent vectors with entries in `{0,1,2}`.
#[derive(Clone, PartialEq, Debug)]
pub struct TensorElem<R> {
    pub n: usize,
    pub terms: BTreeMap<Vec<u8>, R>,
}

impl<R: Ring> TensorElem<R> {
    pub fn zero(n: usize) -> Self {
        TensorElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u8>, c: R) {
        debug_assert_eq!(e.len(), self.n);
        let v = self.terms.entry(e.clone()).or_insert_with(R::zero);
        *v = v.add(&c);
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, s: &R) -> Self {
        let mut r = Self::zero(self.n);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.mul(s));
        }
        r
    }

    pub fn pure(factors: &[CircleElem<R>]) -> Self {
        let mut r = TensorElem {
            n: 0,
            terms: BTreeMap::from([(vec![], R::one())]),
        };
        for f in factors {
            r = r.tensor(&TensorElem::single(f));
        }
        r
    }

    pub fn single(f: &CircleElem<R>) -> Self {
        let mut r = Self::zero(1);
        for (k, c) in f.0.iter().enumerate() {
            r.add_term(vec![k as u8], c.clone());
        }
        r
    }

    pub fn tensor(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.n + o.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = e1.clone();
                e.extend_from_slice(e2);
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }

    /// Multiply factor `i` by `u`.
    pub fn act(&self, i: usize, u: &CircleElem<R>, pot: &Potential<R>) -> Self {
        let mut r = Self::zero(self.n);
        for (e, c) in &self.terms {
            let prod = CircleElem::basis(e[i] as usize).mul(u, pot);
            for (k, pc) in prod.0.iter().enumerate() {
                if pc.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] = k as u8;
                r.add_term(e2, c.mul(pc));
            }
        }
        r
    }

    /// Coefficient of the monomial with exponent vector `e`.
    pub fn coefficient_of(&self, e: &[u8]) -> R {
        self.terms.get(e).cloned().unwrap_or_else(R::zero)
    }
}

/// `⊗_γ P(x_γ)` with `P = x² + a₁′x + a₀′`, over `n` circles.
pub fn beta_product<R: Ring>(n: usize, a1p: &R, a0p: &R) -> TensorElem<R> {
    let p = CircleElem::p_of(a1p, a0p);
    TensorElem::pure(&vec![p; n])
}
