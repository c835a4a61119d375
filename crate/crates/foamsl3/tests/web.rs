use foamsl3::braid::BraidWord;
use foamsl3::web::{
    kuperberg_bracket, kuperberg_bracket_with, oriented_resolution, reduce_web, resolve, Laurent,
    Reducible,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn braid(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn q3() -> Laurent {
    Laurent::qint(3)
}

#[test]
fn sigma1_resolutions() {
    let d = braid("b=2; 1").closure_diagram();
    let smooth = resolve(&d, &[1]).unwrap();
    assert_eq!(smooth.loops().len(), 2);
    assert!(smooth.vertices.is_empty());
    let theta = resolve(&d, &[0]).unwrap();
    assert_eq!(theta.vertices.len(), 2);
    assert_eq!(theta.edges.len(), 3);
    assert!(theta.validate().is_ok());
    assert!(resolve(&d, &[0, 1]).is_err());
}

#[test]
fn empty_braid_closure() {
    let d = braid("b=2;").closure_diagram();
    let w = resolve(&d, &[]).unwrap();
    assert_eq!(w.loops().len(), 2);
    assert_eq!(kuperberg_bracket(&w).unwrap(), q3().mul(&q3()));
}

#[test]
fn oriented_resolution_is_circles() {
    for (s, bits) in [
        ("b=2; 1,1,1", vec![1, 1, 1]),
        ("b=2; -1", vec![0]),
        ("b=1;", vec![]),
    ] {
        let b = braid(s);
        let r = oriented_resolution(&b.closure_diagram());
        assert_eq!(r.bits, bits);
        assert_eq!(r.web.loops().len(), b.strands);
        assert!(r.web.vertices.is_empty());
        assert_eq!(r.weight(), b.n_plus());
    }
}

#[test]
fn face_choice() {
    let circle = resolve(&braid("b=1;").closure_diagram(), &[]).unwrap();
    assert!(matches!(
        circle.find_reducible_face().unwrap(),
        Some(Reducible::Circle { .. })
    ));
    let theta = resolve(&braid("b=2; 1").closure_diagram(), &[0]).unwrap();
    assert!(matches!(
        theta.find_reducible_face().unwrap(),
        Some(Reducible::Digon { .. })
    ));
    let ladder = resolve(&braid("b=2; 1,1").closure_diagram(), &[0, 0]).unwrap();
    assert!(matches!(
        ladder.find_reducible_face().unwrap(),
        Some(Reducible::Digon { .. })
    ));
    assert_eq!(ladder.faces().len(), 4);
}

#[test]
fn brackets() {
    let circle = resolve(&braid("b=1;").closure_diagram(), &[]).unwrap();
    assert_eq!(
        kuperberg_bracket(&circle).unwrap(),
        Laurent::from_terms([(-2, 1), (0, 1), (2, 1)])
    );
    let theta = resolve(&braid("b=2; 1").closure_diagram(), &[0]).unwrap();
    assert_eq!(
        kuperberg_bracket(&theta).unwrap(),
        Laurent::qint(2).mul(&q3())
    );
    let tree = reduce_web(&theta).unwrap();
    assert_eq!(tree.graded_rank(), kuperberg_bracket(&theta).unwrap());
    let empty = foamsl3::web::Web::default();
    assert_eq!(kuperberg_bracket(&empty).unwrap(), Laurent::one());
    assert_eq!(reduce_web(&empty).unwrap().rank(), 1);
}

fn all_resolutions(b: &BraidWord) -> Vec<foamsl3::web::Web> {
    let d = b.closure_diagram();
    let n = d.crossings.len();
    (0..1u32 << n)
        .map(|m| {
            let bits: Vec<u8> = (0..n).map(|i| ((m >> i) & 1) as u8).collect();
            resolve(&d, &bits).unwrap()
        })
        .collect()
}

#[test]
fn squares_and_order_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in [
        "b=3; 1,2,1",
        "b=3; 1,-2,1,-2",
        "b=3; 2,1,2,1",
        "b=4; 1,2,3,2,1",
    ] {
        for w in all_resolutions(&braid(s)) {
            w.validate().unwrap();
            let canon = kuperberg_bracket(&w).unwrap();
            let tree = reduce_web(&w).unwrap();
            assert_eq!(tree.graded_rank(), canon, "{s}\n{w}");
            for _ in 0..5 {
                let r =
                    kuperberg_bracket_with(&w, &mut |f: &[Reducible]| rng.gen_range(0..f.len()))
                        .unwrap();
                assert_eq!(r, canon);
            }
        }
    }
}
