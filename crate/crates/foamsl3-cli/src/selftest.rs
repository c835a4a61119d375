//! Quick internal consistency suite: local foam relations, the symbolic
//! identities behind β being a cycle, and a handful of small braids.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use foamsl3::braid::BraidWord;
use foamsl3::coeff::{
    theta_normal_form, CircleElem, Potential, Ring, TensorElem, ZPoly, F2, F5, Q,
};
use foamsl3::complex::{bracket_euler_characteristic, build_complex};
use foamsl3::foamval::{evaluate_closed, FoamWord, Step};
use foamsl3::khsl2::psi_vanishes;
use foamsl3::transverse::{beta_chain, c_for_braid, class_rank, class_vanishes, mirror_complex};
use foamsl3::web::Web;

use crate::Report;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, r: Result<(), String>) -> Check {
    Check {
        name: name.into(),
        pass: r.is_ok(),
        detail: r.err().unwrap_or_default(),
    }
}

/// `ω = x³ + a₂x² + a₁x + a₀` over `ℤ[a₂, a₁, a₀]`.
pub fn generic_potential() -> Potential<ZPoly> {
    Potential::new(ZPoly::var(0), ZPoly::var(1), ZPoly::var(2))
}

/// `ω = (x − x₁)(x² + a₁′x + a₀′)` over `ℤ[a₁′, a₀′, x₁]`, with `P = x² + a₁′x + a₀′`.
pub fn split_generic_potential() -> (Potential<ZPoly>, CircleElem<ZPoly>) {
    let (a1p, a0p, x1) = (ZPoly::var(0), ZPoly::var(1), ZPoly::var(2));
    let pot = Potential::new(a1p.sub(&x1), a0p.sub(&x1.mul(&a1p)), x1.mul(&a0p).neg());
    (pot, CircleElem::p_of(&a1p, &a0p))
}

pub fn sphere(dots: u32) -> FoamWord {
    FoamWord::new(
        Web::default(),
        vec![Step::Cup { edge: 0, dots }, Step::Cap { edge: 0, dots: 0 }],
    )
    .expect("valid steps")
}

/// Closed theta foam with `n` dots on its facets, in seam order; `reverse`
/// swaps the cyclic order at the seam.
pub fn theta_foam(n: [u32; 3], reverse: bool) -> foamsl3::foamval::ClosedFoam {
    let steps = vec![
        Step::Cup { edge: 10, dots: 0 },
        Step::Cup { edge: 11, dots: 0 },
        Step::Zip {
            t: 0,
            s: 1,
            disk: 2,
            left: 10,
            right: 11,
            tails: [0, 1],
        },
        Step::Unzip {
            t: 0,
            s: 1,
            disk: 2,
        },
        Step::Cap { edge: 0, dots: 0 },
        Step::Cap { edge: 1, dots: 0 },
    ];
    let mut f = FoamWord::new(Web::default(), steps)
        .expect("valid steps")
        .close_up()
        .expect("closed");
    let order = f.seams[0];
    for i in 0..3 {
        f.facets[order[i]].dots = n[i];
    }
    if reverse {
        f.seams[0] = [order[0], order[2], order[1]];
    }
    f
}

fn sphere_table() -> Result<(), String> {
    let z = generic_potential();
    let got: Vec<ZPoly> = (0..3)
        .map(|d| evaluate_closed(&sphere(d).close_up().expect("closed"), &z))
        .collect();
    let want = vec![ZPoly::zero(), ZPoly::zero(), ZPoly::from_int(-1)];
    (got == want)
        .then_some(())
        .ok_or_else(|| format!("{got:?}"))
}

fn theta_table() -> Result<(), String> {
    let z = generic_potential();
    for n in 0..27u32 {
        let (a, b, c) = (n / 9, n / 3 % 3, n % 3);
        let want = match [a, b, c] {
            [1, 2, 0] | [2, 0, 1] | [0, 1, 2] => 1,
            [2, 1, 0] | [1, 0, 2] | [0, 2, 1] => -1,
            _ => 0,
        };
        for (rev, w) in [(false, want), (true, -want)] {
            let v = evaluate_closed(&theta_foam([a, b, c], rev), &z);
            if v != ZPoly::from_int(w) {
                return Err(format!("({a},{b},{c}) reversed={rev}: {v}"));
            }
        }
    }
    Ok(())
}

/// `P(A)P(B) = 0` in the theta algebra.
fn theta_kills_beta() -> Result<(), String> {
    let (pot, p) = split_generic_potential();
    let mut poly = BTreeMap::new();
    for (i, a) in p.0.iter().enumerate() {
        for (j, b) in p.0.iter().enumerate() {
            poly.insert((i as u32, j as u32, 0), a.mul(b));
        }
    }
    let nf = theta_normal_form(&poly, &pot);
    nf.is_zero().then_some(()).ok_or_else(|| format!("{nf:?}"))
}

/// `x²P⊗1 + xP⊗y + a₂ xP⊗1 − x₁ P⊗y − x₁a₁′ P⊗1 = 0` in `A⊗A`.
fn five_term() -> Result<(), String> {
    let (pot, p) = split_generic_potential();
    let (a1p, x1) = (ZPoly::var(0), ZPoly::var(2));
    let x = CircleElem::x();
    let one = CircleElem::one();
    let xp = x.mul(&p, &pot);
    let x2p = x.mul(&xp, &pot);
    let t = |u: &CircleElem<ZPoly>, v: &CircleElem<ZPoly>, c: ZPoly| {
        TensorElem::pure(&[u.clone(), v.clone()]).scale(&c)
    };
    let sum = t(&x2p, &one, ZPoly::one())
        .add(&t(&xp, &x, ZPoly::one()))
        .add(&t(&xp, &one, pot.a2.clone()))
        .add(&t(&p, &x, x1.neg()))
        .add(&t(&p, &one, x1.mul(&a1p).neg()));
    sum.is_zero()
        .then_some(())
        .ok_or_else(|| format!("{sum:?}"))
}

const SMALL: [&str; 6] = [
    "b=1;",
    "b=2; 1",
    "b=2; -1,-1",
    "b=2; 1,1,1",
    "b=3; 1,-2",
    "b=3; 1,2,1",
];

fn small_corpus() -> Result<(), String> {
    let f5 = Potential::from_roots([F5::zero(), F5::one(), F5::from_int(-1)]);
    for s in SMALL {
        let b: BraidWord = s.parse().map_err(|e| format!("{e}"))?;
        let d = b.closure_diagram();
        let c = build_complex(&d, &Potential::<F2>::cube()).map_err(|e| e.to_string())?;
        if !c.verify_d_squared() {
            return Err(format!("{s}: d² ≠ 0 over 𝔽₂"));
        }
        if c.graded_euler_characteristic()
            != bracket_euler_characteristic(&d).map_err(|e| e.to_string())?
        {
            return Err(format!("{s}: Euler characteristic"));
        }
        let c = mirror_complex(&b, &f5).map_err(|e| e.to_string())?;
        let betas: Vec<_> = [0, 1, -1]
            .iter()
            .map(|&x| beta_chain(&c, &F5::from_int(x)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for beta in &betas {
            if !beta.is_cycle(&c) || beta.degree != Some(-2 * b.self_linking()) {
                return Err(format!("{s}: β cycle or degree"));
            }
        }
        if class_rank(&c, &betas.iter().collect::<Vec<_>>()) != 3 {
            return Err(format!("{s}: classes not independent"));
        }
        let double = Potential::from_roots([Q::one(), Q::one(), Q::zero()]);
        let c = mirror_complex(&b, &double).map_err(|e| e.to_string())?;
        let v = class_vanishes(&c, &beta_chain(&c, &Q::one()).map_err(|e| e.to_string())?);
        if v != psi_vanishes::<Q>(&b) {
            return Err(format!("{s}: double-root verdict differs from ψ"));
        }
    }
    Ok(())
}

fn unknot_c() -> Result<(), String> {
    let pot = Potential::from_roots([Q::zero(), Q::one(), Q::from_int(-1)]);
    match c_for_braid(&BraidWord::unknot(), &pot, &Q::zero()) {
        Ok(Some(0)) => Ok(()),
        other => Err(format!("{other:?}")),
    }
}

pub fn run_checks() -> Vec<Check> {
    vec![
        check("sphere table", sphere_table()),
        check("theta table", theta_table()),
        check("theta algebra kills P(A)P(B)", theta_kills_beta()),
        check("five-term identity", five_term()),
        check("small corpus", small_corpus()),
        check("unknot c-invariant", unknot_c()),
    ]
}

pub fn cmd_selftest() -> Report {
    let checks = run_checks();
    let pass = checks.iter().all(|c| c.pass);
    let mut human = String::new();
    for c in &checks {
        let _ = write!(
            human,
            "{:<32} {}",
            c.name,
            if c.pass { "pass" } else { "FAIL" }
        );
        if !c.detail.is_empty() {
            let _ = write!(human, "  {}", c.detail);
        }
        human.push('\n');
    }
    Report {
        pass,
        human,
        json: json!({ "checks": checks, "pass": pass }),
        diagnostics: vec![],
    }
}
