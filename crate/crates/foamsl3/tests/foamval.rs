use foamsl3::braid::BraidWord;
use foamsl3::coeff::{Potential, Ring, ZPoly, F2, Q};
use foamsl3::foamval::{
    evaluate_closed, expand_in_basis, gram_matrix, pair, ClosedFoam, Evaluator, FoamWord, Step,
};
use foamsl3::web::{reduce_web, resolve, Web};

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn generic_q() -> Potential<Q> {
    Potential::new(q(2), q(-3), q(5))
}

fn generic_z() -> Potential<ZPoly> {
    Potential::new(ZPoly::var(0), ZPoly::var(1), ZPoly::var(2))
}

fn sphere(d: u32) -> FoamWord {
    FoamWord::new(
        Web::default(),
        vec![
            Step::Cup { edge: 0, dots: d },
            Step::Cap { edge: 0, dots: 0 },
        ],
    )
    .unwrap()
}

/// `−coeff₂(x^k mod ω)` by long division.
fn sphere_oracle<R: Ring>(k: usize, pot: &Potential<R>) -> R {
    let mut c: Vec<R> = vec![R::zero(); k + 1];
    c[k] = R::one();
    for top in (3..=k).rev() {
        let lead = c[top].clone();
        c[top] = R::zero();
        c[top - 1] = c[top - 1].sub(&lead.mul(&pot.a2));
        c[top - 2] = c[top - 2].sub(&lead.mul(&pot.a1));
        c[top - 3] = c[top - 3].sub(&lead.mul(&pot.a0));
    }
    c.get(2).cloned().unwrap_or_else(R::zero).neg()
}

#[test]
fn spheres() {
    let z = generic_z();
    for d in 0..8 {
        let v = evaluate_closed(&sphere(d).close_up().unwrap(), &z);
        assert_eq!(v, sphere_oracle(d as usize, &z), "d = {d}");
    }
    let (a2, a1) = (ZPoly::var(0), ZPoly::var(1));
    assert_eq!(
        evaluate_closed(&sphere(2).close_up().unwrap(), &z),
        ZPoly::from_int(-1)
    );
    assert_eq!(
        evaluate_closed(&sphere(4).close_up().unwrap(), &z),
        a1.sub(&a2.mul(&a2))
    );
    let f = sphere(0).close_up().unwrap();
    assert_eq!(f.facets.len(), 1);
    assert_eq!(f.facets[0].genus(), 0);
}

/// Two cups zipped into a theta web, then unzipped and capped.
fn zip_theta(dots: [u32; 3]) -> FoamWord {
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
        Step::Dot {
            edge: 0,
            dots: dots[0],
        },
        Step::Dot {
            edge: 1,
            dots: dots[1],
        },
        Step::Dot {
            edge: 2,
            dots: dots[2],
        },
        Step::Unzip {
            t: 0,
            s: 1,
            disk: 2,
        },
        Step::Cap { edge: 0, dots: 0 },
        Step::Cap { edge: 1, dots: 0 },
    ];
    FoamWord::new(Web::default(), steps).unwrap()
}

fn theta_table(n: [u32; 3]) -> i64 {
    match n {
        [1, 2, 0] | [2, 0, 1] | [0, 1, 2] => 1,
        [2, 1, 0] | [1, 0, 2] | [0, 2, 1] => -1,
        _ => 0,
    }
}

#[test]
fn theta_foams() {
    let z = generic_z();
    let base = zip_theta([0, 0, 0]).close_up().unwrap();
    assert_eq!(base.seams.len(), 1);
    assert_eq!(base.facets.len(), 3);
    assert!(base
        .facets
        .iter()
        .all(|f| f.genus() == 0 && f.boundary == 1));
    let order = base.seams[0];
    for n in itertools::iproduct!(0..3u32, 0..3u32, 0..3u32) {
        let n = [n.0, n.1, n.2];
        let mut f = base.clone();
        for i in 0..3 {
            f.facets[order[i]].dots = n[i];
        }
        assert_eq!(
            evaluate_closed(&f, &z),
            ZPoly::from_int(theta_table(n)),
            "{n:?}"
        );
        let mut r = f.clone();
        r.seams[0] = [order[0], order[2], order[1]];
        assert_eq!(evaluate_closed(&r, &z), ZPoly::from_int(-theta_table(n)));
    }
}

#[test]
fn theta_from_digon_matches_zip() {
    let z = generic_z();
    // circle with a digon born on it and capped off again
    for (dl, dm) in [(0, 0), (1, 0), (2, 1), (0, 1)] {
        let steps = vec![
            Step::Cup { edge: 5, dots: dl },
            Step::DigonCup {
                edge: 5,
                t: 0,
                s: 1,
                tail: 6,
                sides: [7, 8],
            },
            Step::Dot { edge: 7, dots: dm },
            Step::DigonCap {
                s: 1,
                t: 0,
                disks: [7, 8],
                dots: 0,
            },
            Step::Cap { edge: 6, dots: 0 },
        ];
        let f = FoamWord::new(Web::default(), steps)
            .unwrap()
            .close_up()
            .unwrap();
        assert_eq!(f.seams.len(), 1);
        let v = evaluate_closed(&f, &z);
        assert!(
            v == ZPoly::from_int(0) || v == ZPoly::from_int(1) || v == ZPoly::from_int(-1),
            "{v}"
        );
    }
}

#[test]
fn disk_pairings() {
    let p = generic_q();
    let circle = {
        let b = FoamWord::new(Web::default(), vec![Step::Cup { edge: 0, dots: 0 }]).unwrap();
        b.codomain().unwrap()
    };
    let disk = |d| FoamWord::new(Web::default(), vec![Step::Cup { edge: 0, dots: d }]).unwrap();
    let cap = |d| FoamWord::new(circle.clone(), vec![Step::Cap { edge: 0, dots: d }]).unwrap();
    assert_eq!(pair(&disk(2), &cap(0), &p).unwrap(), q(-1));
    assert_eq!(pair(&disk(0), &cap(0), &p).unwrap(), q(0));
    assert_eq!(pair(&disk(1), &cap(1), &p).unwrap(), q(-1));
    assert!(pair(&disk(0), &disk(0), &p).is_err());
}

#[test]
fn expansion_of_dotted_disk() {
    let z = generic_z();
    let w = resolve(&"b=1;".parse::<BraidWord>().unwrap().closure_diagram(), &[]).unwrap();
    let tree = reduce_web(&w).unwrap();
    let e = w.loops()[0];
    let f = |d| FoamWord::new(Web::default(), vec![Step::Cup { edge: e, dots: d }]).unwrap();
    let c = expand_in_basis(&f(3), &tree, &z).unwrap();
    assert_eq!(
        c,
        vec![
            ZPoly::var(2).neg(),
            ZPoly::var(1).neg(),
            ZPoly::var(0).neg()
        ]
    );
    for k in 0..3 {
        let c = expand_in_basis(&f(k), &tree, &z).unwrap();
        let unit: Vec<ZPoly> = (0..3).map(|i| ZPoly::from_int(i64::from(i == k))).collect();
        assert_eq!(c, unit);
    }
}

#[test]
fn zip_of_disks_in_theta_basis() {
    let z = generic_z();
    let w = resolve(
        &"b=2; 1".parse::<BraidWord>().unwrap().closure_diagram(),
        &[0],
    )
    .unwrap();
    let tree = reduce_web(&w).unwrap();
    assert_eq!(tree.rank(), 6);
    let f = FoamWord::new(
        Web::default(),
        vec![
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
        ],
    )
    .unwrap();
    assert_eq!(f.codomain().unwrap(), w);
    let c = expand_in_basis(&f, &tree, &z).unwrap();
    let mut unit = vec![ZPoly::from_int(0); 6];
    unit[0] = ZPoly::from_int(1);
    assert_eq!(c, unit, "{c:?}");
}

fn corpus_webs() -> Vec<Web> {
    let mut out = vec![];
    for s in [
        "b=2; 1,1,1",
        "b=2; 1,-1,1,-1",
        "b=3; 1,2,1",
        "b=3; 1,-2,1",
        "b=3; 2,1,2,1",
        "b=3; 1,1,2",
    ] {
        let d = s.parse::<BraidWord>().unwrap().closure_diagram();
        let n = d.crossings.len();
        for v in 0..1u32 << n {
            let bits: Vec<u8> = (0..n).map(|k| ((v >> k) & 1) as u8).collect();
            out.push(resolve(&d, &bits).unwrap());
        }
    }
    out
}

#[test]
fn gram_matrices_invertible() {
    let mut eq = Evaluator::new(generic_q());
    let mut e2 = Evaluator::new(Potential::<F2>::cube());
    for w in corpus_webs() {
        let tree = reduce_web(&w).unwrap();
        let g = gram_matrix(&mut eq, &tree).unwrap();
        let n = g.rows;
        assert!(
            g.solve(&foamsl3::foamval::Matrix::identity(n)).is_some(),
            "{w}"
        );
        let g2 = gram_matrix(&mut e2, &tree).unwrap();
        assert!(
            g2.solve(&foamsl3::foamval::Matrix::identity(n)).is_some(),
            "{w}"
        );
    }
}

#[test]
fn random_contraction_order() {
    let z = generic_z();
    let mut ev = Evaluator::new(z.clone());
    for w in corpus_webs().into_iter().take(12) {
        let tree = reduce_web(&w).unwrap();
        for pi in &tree.paths {
            for pj in &tree.paths {
                let f =
                    foamsl3::foamval::pairing_foam(&w, pi, &FoamWord::identity(&w), pj).unwrap();
                let base = ev.evaluate(&f);
                for seed in 0..3 {
                    assert_eq!(ev.evaluate_ordered(&f, Some(seed)), base);
                }
            }
        }
    }
}

#[test]
fn disjoint_union_is_multiplicative() {
    let z = generic_z();
    let a = zip_theta([1, 2, 2]).close_up().unwrap();
    let b = sphere(5).close_up().unwrap();
    let u: ClosedFoam = a.disjoint_union(&b);
    assert_eq!(
        evaluate_closed(&u, &z),
        evaluate_closed(&a, &z).mul(&evaluate_closed(&b, &z))
    );
}
