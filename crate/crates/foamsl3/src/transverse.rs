//! β-chains on the oriented resolution of mirrored braid closures, their
//! classes, the first Reidemeister maps and the `c`-invariants.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::braid::{BraidError, BraidWord, MarkovMove};
use crate::coeff::{
    beta_product, counit_eps, split_root, CircleElem, CoeffError, Euclid, Field, Potential, Ring,
    TensorElem, Q, QU,
};
use crate::complex::{build_complex, ComplexError, CubeComplex};
use crate::linalg::Matrix;
use crate::web::oriented_bits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransverseError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("closure is not a knot")]
    NotAKnot,
    #[error("roots are not distinct")]
    RootsNotDistinct,
    #[error("move {0:?} is not transverse")]
    NotTransverse(MarkovMove),
}

/// The complex of the closure of `mirror(b)`, where β-chains of `b` live.
pub fn mirror_complex<R: Ring>(
    b: &BraidWord,
    pot: &Potential<R>,
) -> Result<CubeComplex<R>, ComplexError> {
    build_complex(&b.mirror().closure_diagram(), pot)
}

#[derive(Clone, Debug)]
pub struct BetaChain<R> {
    pub root: R,
    pub a1p: R,
    pub a0p: R,
    /// Coordinates in `C⁰`.
    pub coords: Vec<R>,
    /// Largest quantum degree of a generator with nonzero coefficient.
    pub degree: Option<i64>,
}

/// `⊗_γ P(x_γ)` on the oriented resolution of the complex's diagram.
pub fn beta_chain<R: Ring>(c: &CubeComplex<R>, x1: &R) -> Result<BetaChain<R>, TransverseError> {
    let (a1p, a0p) = split_root(&c.pot, x1)?;
    let p = [a0p.clone(), a1p.clone(), R::one()];
    let mask = oriented_bits(&c.diagram)
        .iter()
        .enumerate()
        .map(|(k, &b)| (b as usize) << k)
        .sum::<usize>();
    let v = &c.vertices[mask];
    debug_assert_eq!(v.h, 0);
    debug_assert!(v.web.vertices.is_empty());
    let off = c.offset(mask);
    let qs = c.qdegs(0);
    let mut coords = vec![R::zero(); qs.len()];
    let mut degree = None;
    let path = &v.tree.paths[0];
    for (i, combo) in crate::foamval::MixedRadix::new(&path.site_dims()).enumerate() {
        let mut x = R::one();
        for &l in &combo {
            x = x.mul(&p[l]);
        }
        if !x.is_zero() {
            degree = degree.max(Some(qs[off + i]));
        }
        coords[off + i] = x;
    }
    Ok(BetaChain {
        root: x1.clone(),
        a1p,
        a0p,
        coords,
        degree,
    })
}

impl<R: Ring> BetaChain<R> {
    pub fn is_cycle(&self, c: &CubeComplex<R>) -> bool {
        c.differential(0)
            .apply(&self.coords)
            .iter()
            .all(|x| x.is_zero())
    }
}

/// Whether `[β] = 0`, i.e. `β` is a boundary.
pub fn class_vanishes<F: Field>(c: &CubeComplex<F>, beta: &BetaChain<F>) -> bool {
    c.differential(-1).spans(&beta.coords)
}

/// Rank of the span of the classes in `H⁰`.
pub fn class_rank<F: Field>(c: &CubeComplex<F>, betas: &[&BetaChain<F>]) -> usize {
    let d = c.differential(-1);
    let mut cols: Vec<Vec<F>> = (0..d.cols).map(|j| d.column(j)).collect();
    cols.extend(betas.iter().map(|b| b.coords.clone()));
    Matrix::from_columns(d.rows, &cols).rank() - d.rank()
}

/// `[β]` in a Smith presentation of `H⁰`: the diagonal `d₁, …, d_r` and
/// coordinates whose first `r` entries live in `E/(dᵢ)` and the rest are free.
fn smith_class<E: Euclid>(c: &CubeComplex<E>, beta: &BetaChain<E>) -> (Vec<E>, Vec<E>) {
    let d0 = c.differential(0).smith();
    let r0 = d0.rank();
    // cycles are the trailing coordinates of the basis adapted to d⁰
    let keep: Vec<usize> = (r0..c.dim(0)).collect();
    let dm = d0.right_inv.mul(&c.differential(-1));
    let m = dm.submatrix(&keep, &(0..dm.cols).collect::<Vec<_>>());
    let b = d0.right_inv.apply(&beta.coords);
    let b: Vec<E> = keep.iter().map(|&i| b[i].clone()).collect();
    let s = m.smith();
    (s.diag.clone(), s.left.apply(&b))
}

/// Whether `[β] = 0` over a Euclidean domain.
pub fn class_vanishes_over_pid<E: Euclid>(c: &CubeComplex<E>, beta: &BetaChain<E>) -> bool {
    let (diag, b) = smith_class(c, beta);
    b.iter().enumerate().all(|(i, x)| match diag.get(i) {
        Some(d) => x.div_rem(d).1.is_zero(),
        None => x.is_zero(),
    })
}

/// Largest `k` with `[β] ∈ U^k H⁰` modulo `U`-torsion; `None` when `[β]`
/// is trivial or torsion.
pub fn c_invariant(c: &CubeComplex<QU>, beta: &BetaChain<QU>) -> Option<u64> {
    let (diag, b) = smith_class(c, beta);
    b[diag.len()..]
        .iter()
        .filter_map(|x| x.u_valuation())
        .min()
        .map(|k| k as u64)
}

/// `Φ₁`: `q ↦ −(Σᵢ x^{2−i}q ⊗ x′^i + a₂ Σᵢ x^{1−i}q ⊗ x′^i + a₁ q ⊗ 1)` on
/// factor `a`, with the new circle appended last. This is the coproduct `Δ`
/// applied to factor `a`.
pub fn phi1<R: Ring>(t: &TensorElem<R>, a: usize, pot: &Potential<R>) -> TensorElem<R> {
    let mut out = TensorElem::zero(t.n + 1);
    let m1 = R::from_int(-1);
    let mut kernel: Vec<(u8, u8, R)> = vec![(2, 0, m1.clone()), (1, 1, m1.clone()), (0, 2, m1)];
    kernel.push((1, 0, pot.a2.neg()));
    kernel.push((0, 1, pot.a2.neg()));
    kernel.push((0, 0, pot.a1.neg()));
    for (e, c) in &t.terms {
        for (i, j, k) in &kernel {
            let prod = CircleElem::basis(e[a] as usize).mul(&CircleElem::basis(*i as usize), pot);
            for (r, pc) in prod.0.iter().enumerate() {
                if pc.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[a] = r as u8;
                e2.push(*j);
                out.add_term(e2, c.mul(k).mul(pc));
            }
        }
    }
    out
}

/// `Ψ₁`: `q′ ⊗ u ↦ −ε(q′) u`, contracting factor `new`.
pub fn psi1<R: Ring>(t: &TensorElem<R>, new: usize) -> TensorElem<R> {
    let mut out = TensorElem::zero(t.n - 1);
    for (e, c) in &t.terms {
        let eps = counit_eps(&CircleElem::<R>::basis(e[new] as usize));
        if eps.is_zero() {
            continue;
        }
        let mut e2 = e.clone();
        e2.remove(new);
        out.add_term(e2, c.mul(&eps).neg());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    /// Every step carried β to `±β` of the new braid.
    pub ok: bool,
    /// Product of the signs picked up, `±1`.
    pub sign: i64,
    pub steps: usize,
}

/// Replay `moves` on the oriented summand: the identity for moves that keep
/// the strand count, `Φ₁` for positive stabilization and `Ψ₁` for positive
/// destabilization.
pub fn move_equivariance_check<R: Ring>(
    b: &BraidWord,
    moves: &[MarkovMove],
    pot: &Potential<R>,
    x1: &R,
) -> Result<EquivarianceReport, TransverseError> {
    let (a1p, a0p) = split_root(pot, x1)?;
    let mut cur = b.clone();
    let mut t = beta_product(cur.strands, &a1p, &a0p);
    let mut sign = 1;
    let mut ok = true;
    for m in moves {
        if !m.is_transverse() {
            return Err(TransverseError::NotTransverse(m.clone()));
        }
        let next = cur.apply_move(m)?;
        t = match m {
            MarkovMove::PositiveStabilization => phi1(&t, cur.strands - 1, pot),
            MarkovMove::PositiveDestabilization => psi1(&t, cur.strands - 1),
            _ => t,
        };
        let want = beta_product(next.strands, &a1p, &a0p);
        if t == want {
        } else if t == want.scale(&R::from_int(-1)) {
            sign = -sign;
            t = want;
        } else {
            ok = false;
            t = want;
        }
        cur = next;
    }
    Ok(EquivarianceReport {
        ok,
        sign,
        steps: moves.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BennequinReport {
    pub sl: i64,
    /// `None` stands for `∞`.
    pub c: Option<u64>,
    pub j: Vec<i64>,
    pub inequalities: Vec<Inequality>,
}

fn q_to_qu(x: &Q) -> QU {
    QU::constant(x.clone())
}

/// Discriminant of the monic cubic `ω`; nonzero iff its roots are distinct.
pub fn discriminant<R: Ring>(pot: &Potential<R>) -> R {
    let (b, c, d) = (&pot.a2, &pot.a1, &pot.a0);
    let k = |n: i64| R::from_int(n);
    k(18)
        .mul(b)
        .mul(c)
        .mul(d)
        .sub(&k(4).mul(&b.pow(3)).mul(d))
        .add(&b.pow(2).mul(&c.pow(2)))
        .sub(&k(4).mul(&c.pow(3)))
        .sub(&k(27).mul(&d.pow(2)))
}

/// `ω(x) = x³ + a₂Ux² + a₁U²x + a₀U³`, whose roots are `U` times those of `ω`.
pub fn homogenized(pot: &Potential<Q>) -> Potential<QU> {
    let u = QU::u();
    let mut h = Potential::new(
        u.mul(&q_to_qu(&pot.a2)),
        u.pow(2).mul(&q_to_qu(&pot.a1)),
        u.pow(3).mul(&q_to_qu(&pot.a0)),
    );
    h.roots = pot
        .roots
        .as_ref()
        .map(|r| r.clone().map(|x| u.mul(&q_to_qu(&x))));
    h
}

/// `c_{ω,Ux₁}` for the braid `b`, computed over `ℚ[U]` from `ω` over `ℚ`.
pub fn c_for_braid(
    b: &BraidWord,
    pot: &Potential<Q>,
    x1: &Q,
) -> Result<Option<u64>, TransverseError> {
    if discriminant(pot).is_zero() {
        return Err(TransverseError::RootsNotDistinct);
    }
    let c = mirror_complex(b, &homogenized(pot))?;
    let beta = beta_chain(&c, &QU::u().mul(&q_to_qu(x1)))?;
    Ok(c_invariant(&c, &beta))
}

/// The filtration levels `j₁ ≤ j₂ ≤ j₃` of a knot for `ω` with distinct
/// roots.
pub fn j_levels(b: &BraidWord, pot: &Potential<Q>) -> Result<Vec<i64>, TransverseError> {
    if !b.is_knot() {
        return Err(TransverseError::NotAKnot);
    }
    if discriminant(pot).is_zero() {
        return Err(TransverseError::RootsNotDistinct);
    }
    Ok(build_complex(&b.closure_diagram(), pot)?.filtration_levels())
}

/// Inequalities `2(sl + c) ≤ j₁` and `2(sl + c) ≤ s = (j₁+j₂+j₃)/12`, the
/// latter also in the form `2(sl + c) ≤ 4s` that follows from the first.
pub fn bennequin_check(
    b: &BraidWord,
    pot: &Potential<Q>,
    x1: &Q,
) -> Result<BennequinReport, TransverseError> {
    let j = j_levels(b, pot)?;
    let c = c_for_braid(b, pot, x1)?;
    let sl = b.self_linking();
    let jsum: i64 = j.iter().sum();
    let s = Ratio::new(jsum, 12);
    let mut inequalities = vec![];
    let lhs = c.map(|c| 2 * (sl + c as i64));
    let show = |x: Option<i64>| x.map_or("inf".to_string(), |v| v.to_string());
    let mut push = |name: &str, rhs: Ratio<i64>| {
        let pass = lhs.is_some_and(|l| Ratio::from_integer(l) <= rhs);
        inequalities.push(Inequality {
            name: name.into(),
            lhs: show(lhs),
            rhs: rhs.to_string(),
            pass,
        });
    };
    push("2(sl+c) <= j1", Ratio::from_integer(j[0]));
    push("2(sl+c) <= s", s);
    push("2(sl+c) <= 4s", s * 4);
    Ok(BennequinReport {
        sl,
        c,
        j,
        inequalities,
    })
}

/// Multiplicity of `x₁` as a root of `ω`, by repeated synthetic division.
pub fn root_multiplicity<R: Ring>(pot: &Potential<R>, x1: &R) -> usize {
    if !pot.eval(x1).is_zero() {
        return 0;
    }
    let (a1p, a0p) = (pot.a2.add(x1), pot.a1.add(&x1.mul(&pot.a2.add(x1))));
    if !x1.mul(x1).add(&a1p.mul(x1)).add(&a0p).is_zero() {
        return 1;
    }
    if !x1.add(&a1p).add(x1).is_zero() {
        return 2;
    }
    3
}
