use foamsl3::braid::BraidWord;
use foamsl3::coeff::{Potential, Ring, F2, F5, Q, QU};
use foamsl3::complex::{bracket_euler_characteristic, build_complex, total_rank, HomologyEntry};
use foamsl3::web::Laurent;

fn braid(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn x3_minus_x<R: Ring>() -> Potential<R> {
    Potential::from_roots([R::zero(), R::one(), R::from_int(-1)])
}

#[test]
fn unknot() {
    let d = BraidWord::unknot().closure_diagram();
    let c = build_complex(&d, &Potential::<Q>::cube()).unwrap();
    assert_eq!(c.vertices.len(), 1);
    assert_eq!(c.vertices[0].qdegs, vec![-2, 0, 2]);
    assert!(c.verify_d_squared());
    let h = c.homology_over_field();
    let want: Vec<HomologyEntry> = [-2, 0, 2]
        .iter()
        .map(|&q| HomologyEntry {
            h: 0,
            q: Some(q),
            rank: 1,
            torsion: vec![],
        })
        .collect();
    assert_eq!(h, want);
    assert_eq!(
        c.graded_euler_characteristic(),
        Laurent::from_terms([(-2, 1), (0, 1), (2, 1)])
    );
    let c = build_complex(&d, &x3_minus_x::<Q>()).unwrap();
    assert_eq!(c.filtration_levels(), vec![-2, 0, 2]);
}

#[test]
fn two_unknotted_circles() {
    let d = braid("b=2;").closure_diagram();
    let c = build_complex(&d, &Potential::<Q>::cube()).unwrap();
    let q3 = Laurent::qint(3);
    assert_eq!(c.graded_euler_characteristic(), q3.mul(&q3));
}

#[test]
fn one_crossing_unknots() {
    for s in ["b=2; 1", "b=2; -1"] {
        let d = braid(s).closure_diagram();
        for pot in [
            Potential::<Q>::cube(),
            x3_minus_x(),
            Potential::new(q(2), q(-3), q(5)),
        ] {
            let c = build_complex(&d, &pot).unwrap();
            assert!(c.verify_d_squared());
            let h = c.homology_over_field();
            assert_eq!(total_rank(&h), 3, "{s} {h:?}");
            assert!(h.iter().all(|e| e.h == 0), "{s} {h:?}");
        }
        let c = build_complex(&d, &Potential::<Q>::cube()).unwrap();
        assert_eq!(
            c.graded_euler_characteristic(),
            bracket_euler_characteristic(&d).unwrap()
        );
        assert_eq!(c.graded_euler_characteristic(), Laurent::qint(3));
    }
}

#[test]
fn small_corpus_d_squared() {
    for s in [
        "b=2; 1,1",
        "b=2; 1,1,1",
        "b=2; 1,-1",
        "b=3; 1,2",
        "b=3; 1,-2,1",
        "b=3; 1,2,1",
        "b=2; -1,-1,-1",
    ] {
        let d = braid(s).closure_diagram();
        let c = build_complex(&d, &Potential::<F2>::cube()).unwrap();
        assert!(c.verify_d_squared(), "{s}");
        assert_eq!(
            c.graded_euler_characteristic(),
            bracket_euler_characteristic(&d).unwrap(),
            "{s}"
        );
        let c = build_complex(&d, &x3_minus_x::<F5>()).unwrap();
        assert!(c.verify_d_squared(), "{s}");
        let u = QU::u();
        let pot = Potential::from_roots([QU::zero(), u.clone(), u.neg()]);
        let c = build_complex(&d, &pot).unwrap();
        assert!(c.verify_d_squared(), "{s}");
        println!("{s}: {:?}", c.homology_over_pid());
    }
}

#[test]
fn trefoil_levels() {
    for s in ["b=2; 1,1,1", "b=2; -1,-1,-1"] {
        let d = braid(s).closure_diagram();
        let c = build_complex(&d, &x3_minus_x::<Q>()).unwrap();
        let h = c.homology_over_field();
        assert_eq!(total_rank(&h), 3);
        println!("{s}: {:?} levels {:?}", h, c.filtration_levels());
        let c = build_complex(&d, &Potential::<Q>::cube()).unwrap();
        println!("{s}: x^3 {:?}", c.homology_over_field());
    }
}
