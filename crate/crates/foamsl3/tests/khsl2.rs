use foamsl3::braid::BraidWord;
use foamsl3::coeff::{Ring, F2, Q};
use foamsl3::complex::{total_rank, HomologyEntry};
use foamsl3::khsl2::{kh_homology, psi_vanishes, Sl2Complex};

fn braid(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn table(h: &[HomologyEntry]) -> Vec<(i64, i64, usize)> {
    h.iter().map(|e| (e.h, e.q.unwrap(), e.rank)).collect()
}

#[test]
fn unknot_and_unlink() {
    assert_eq!(
        table(&kh_homology::<Q>(&BraidWord::unknot().closure_diagram())),
        vec![(0, -1, 1), (0, 1, 1)]
    );
    assert_eq!(
        table(&kh_homology::<Q>(&braid("b=2;").closure_diagram())),
        vec![(0, -2, 1), (0, 0, 2), (0, 2, 1)]
    );
    for s in ["b=2; 1", "b=2; -1", "b=3; 1,-2"] {
        assert_eq!(
            table(&kh_homology::<Q>(&braid(s).closure_diagram())),
            vec![(0, -1, 1), (0, 1, 1)],
            "{s}"
        );
    }
}

#[test]
fn hopf_link() {
    let h = kh_homology::<Q>(&braid("b=2; 1,1").closure_diagram());
    assert_eq!(total_rank(&h), 4);
    assert_eq!(table(&h), vec![(0, 0, 1), (0, 2, 1), (2, 4, 1), (2, 6, 1)]);
}

#[test]
fn trefoils() {
    assert_eq!(
        table(&kh_homology::<Q>(&braid("b=2; 1,1,1").closure_diagram())),
        vec![(0, 1, 1), (0, 3, 1), (2, 5, 1), (3, 9, 1)]
    );
    assert_eq!(
        table(&kh_homology::<Q>(&braid("b=2; -1,-1,-1").closure_diagram())),
        vec![(-3, -9, 1), (-2, -5, 1), (0, -3, 1), (0, -1, 1)]
    );
    // over 𝔽₂ the torsion of the positive trefoil shows up as extra rank
    assert_eq!(
        total_rank(&kh_homology::<F2>(&braid("b=2; 1,1,1").closure_diagram())),
        6
    );
}

#[test]
fn d_squared_and_psi_cycle() {
    for s in [
        "b=2; 1,1,1",
        "b=3; 1,-2,1",
        "b=3; -1,2,-1,2",
        "b=2; 1,-1,1,1",
    ] {
        let c = Sl2Complex::new(&braid(s).closure_diagram());
        for h in -4..4 {
            assert!(
                c.differential::<Q>(h + 1)
                    .mul(&c.differential::<Q>(h))
                    .is_zero(),
                "{s} {h}"
            );
        }
        let psi = c.psi_chain::<Q>();
        assert!(
            c.differential::<Q>(0)
                .apply(&psi)
                .iter()
                .all(|x| x == &Q::from_int(0)),
            "{s}"
        );
    }
}

#[test]
fn psi_verdicts() {
    assert!(!psi_vanishes::<Q>(&BraidWord::unknot()));
    for s in ["b=2; 1", "b=2; 1,1,1", "b=3; 1,2,1,2", "b=3; 1,2"] {
        assert!(!psi_vanishes::<Q>(&braid(s)), "{s}");
        assert!(!psi_vanishes::<F2>(&braid(s)), "{s}");
    }
    // negative stabilizations kill ψ
    for s in ["b=2; -1", "b=3; 1,-2", "b=2; -1,-1,-1"] {
        assert!(psi_vanishes::<Q>(&braid(s)), "{s}");
    }
}
