use merohecke::quotient::{
    pole_class_relation, quotient_hecke_matrix, theorem_check, QuotientKind,
};

const KINDS: [QuotientKind; 2] = [QuotientKind::ModM, QuotientKind::ModS];

#[test]
fn charpolys_agree_on_grid() {
    for w in (4..=28).step_by(2) {
        for kind in KINDS {
            for m in [2, 3, 5, 7] {
                let c = theorem_check(w, kind, m).unwrap();
                assert!(
                    c.holds(),
                    "weight {w} {kind} T_{m}: {} vs {}",
                    c.quotient_charpoly,
                    c.space_charpoly
                );
            }
        }
    }
}

#[test]
fn pole_classes_follow_hecke_relation() {
    for w in (12..=26).step_by(2) {
        for kind in KINDS {
            for n in 1..=12 {
                assert!(pole_class_relation(w, kind, n).unwrap(), "weight {w} {kind} n={n}");
            }
        }
    }
}

#[test]
fn quotient_matrices_commute() {
    for w in [12, 16, 24, 28] {
        for kind in KINDS {
            for m in 2..=7 {
                for n in 2..=7 {
                    let a = quotient_hecke_matrix(w, kind, m).unwrap();
                    let b = quotient_hecke_matrix(w, kind, n).unwrap();
                    assert!(a.commutes_with(&b).unwrap(), "weight {w} {kind} m={m} n={n}");
                }
            }
        }
    }
}
