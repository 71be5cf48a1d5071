use super::*;
use crate::arith::{gl_order, sylow_sym_valuation, valuation, wreath_order};
use crate::permgroup::{GroupTable, DEFAULT_CAP};
use num_bigint::BigUint;

fn order(spec: &GroupSpec) -> usize {
    GroupTable::closure(spec, DEFAULT_CAP).unwrap().len()
}

#[test]
fn cyclic_examples() {
    let c1 = cyclic(1).unwrap();
    assert_eq!(c1.degree, 1);
    assert_eq!(order(&c1), 1);
    let c4 = cyclic(4).unwrap();
    assert_eq!(c4.generators[0].images(), &[1, 2, 3, 0]);
    assert_eq!(order(&cyclic(9).unwrap()), 9);
    assert!(cyclic(0).is_err());
}

#[test]
fn semidihedral_relations_hold_verbatim() {
    for c in 3..=5u32 {
        let sd = semidihedral(c).unwrap();
        let (x, y) = (&sd.generators[0], &sd.generators[1]);
        let n = 1u64 << c;
        assert!(x.pow(2).is_identity());
        assert!(y.pow(n).is_identity());
        assert_eq!(y.order(), n);
        assert_eq!(y.conjugate_by(x), y.inverse().pow(1 + n / 2));
        let g = GroupTable::closure(&sd, DEFAULT_CAP).unwrap();
        assert_eq!(g.len() as u64, 2 * n);
        let centre = (0..g.len() as u32)
            .filter(|&z| (0..g.len() as u32).all(|h| g.mul(z, h) == g.mul(h, z)))
            .count();
        assert_eq!(centre, 2);
    }
    // c = 3: y^x = y^-5 = y^3 in C_8
    let sd = semidihedral(3).unwrap();
    let (x, y) = (&sd.generators[0], &sd.generators[1]);
    assert_eq!(y.conjugate_by(x), y.pow(3));
    assert!(semidihedral(2).is_err());
}

#[test]
fn wreath_orders() {
    let c2 = cyclic(2).unwrap();
    let c4 = cyclic(4).unwrap();
    let w = wreath(&c2, &c2);
    assert_eq!((w.degree, order(&w)), (4, 8));
    let w = wreath(&c4, &c2);
    assert_eq!((w.degree, order(&w)), (8, 32));
    let w = wreath(&semidihedral(3).unwrap(), &c2);
    assert_eq!((w.degree, order(&w)), (32, 512));
}

#[test]
fn iterated_wreath_matches_order_formula() {
    for (ell, rmax) in [(2u64, 4u32), (3, 2), (5, 1)] {
        for r in 0..=rmax {
            let w = iterated_wreath(ell, r).unwrap();
            assert_eq!(w.degree as u64, ell.pow(r));
            let g = GroupTable::closure(&w, DEFAULT_CAP).unwrap();
            assert_eq!(g.order(), wreath_order(ell, r), "W_{r}({ell})");
            assert_eq!(g.d_frattini(ell).unwrap(), r);
        }
    }
}

#[test]
fn xgroup_and_ygroup_orders() {
    let x = xgroup(2, 2, 1).unwrap();
    assert_eq!((x.degree, x.generators.len(), order(&x)), (8, 3, 32));
    assert_eq!(order(&xgroup(3, 1, 1).unwrap()), 81);
    for r in 0..=2 {
        assert_eq!(
            order(&xgroup(2, 1, r).unwrap()),
            order(&iterated_wreath(2, r + 1).unwrap())
        );
    }
    assert_eq!(order(&ygroup(3, 0).unwrap()), 16);
    assert_eq!(order(&ygroup(4, 0).unwrap()), 32);
    assert_eq!(order(&ygroup(3, 1).unwrap()), 512);
    assert!(ygroup(2, 0).is_err());
}

#[test]
fn predicted_orders_on_small_grid() {
    for ell in [2u64, 3, 5] {
        for a in 1..=3u32 {
            for r in 0..=2u32 {
                let predicted =
                    BigUint::from(ell).pow(a * ell.pow(r) as u32) * wreath_order(ell, r);
                if predicted > BigUint::from(1u32 << 10) {
                    continue;
                }
                let g = GroupTable::closure(&xgroup(ell, a, r).unwrap(), DEFAULT_CAP).unwrap();
                assert_eq!(g.order(), predicted, "X_{{{a},{r}}}({ell})");
            }
        }
    }
}

#[test]
fn sylow_sym_examples() {
    let s = sylow_sym(4, 2).unwrap();
    assert_eq!((s.degree, order(&s)), (4, 8));
    let s = sylow_sym(5, 3).unwrap();
    assert_eq!((s.degree, order(&s)), (5, 3));
    // blocks follow the fixed points
    assert_eq!(s.generators[0].images(), &[0, 1, 3, 4, 2]);
    let s = sylow_sym(2, 5).unwrap();
    assert_eq!((s.degree, order(&s)), (2, 1));
    for n in 0..=10u64 {
        let g = GroupTable::closure(&sylow_sym(n, 2).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(g.ell_exponent(2), Some(sylow_sym_valuation(n, 2) as u32));
    }
}

fn perm_order(m: &MatrixGroupSpec) -> usize {
    order(&matrix_to_perm(m, DEFAULT_POINT_CAP).unwrap())
}

#[test]
fn gl_sylow_examples() {
    let s = gl_sylow_matrix(2, 5, 2).unwrap();
    assert!(s.all_invertible());
    assert_eq!(perm_order(&s), 32);
    let s = gl_sylow_matrix(2, 3, 2).unwrap();
    assert_eq!(perm_order(&s), 16);
    let sd = semidihedral_matrices(3, 3).unwrap();
    check_semidihedral(&sd.0, &sd.1, 3, 3).unwrap();
    assert_eq!(perm_order(&gl_sylow_matrix(2, 5, 3).unwrap()), 3);
    assert!(gl_sylow_matrix(2, 2, 3).is_err());
    assert!(gl_sylow_matrix(2, 5, 5).is_err());
}

#[test]
fn gl_sylow_has_full_sylow_order() {
    for (d, p, ell) in [
        (1u32, 3u64, 2u64),
        (3, 3, 2),
        (1, 5, 2),
        (3, 5, 2),
        (2, 7, 3),
        (3, 7, 2),
        (3, 5, 3),
        (4, 3, 2),
        (2, 11, 5),
        (3, 2 + 1, 13),
    ] {
        let m = match gl_sylow_matrix(d, p, ell) {
            Ok(m) => m,
            Err(e) => panic!("({d},{p},{ell}): {e}"),
        };
        assert!(m.all_invertible());
        let expected = BigUint::from(ell).pow(valuation(&gl_order(d, p), ell));
        let g = GroupTable::closure(&matrix_to_perm(&m, DEFAULT_POINT_CAP).unwrap(), DEFAULT_CAP)
            .unwrap();
        assert_eq!(g.order(), expected, "Syl_{ell}(GL_{d}(F_{p}))");
    }
}

#[test]
fn matrix_to_perm_examples() {
    let trivial = MatrixGroupSpec {
        d: 1,
        modulus: 3,
        generators: vec![Matrix::identity(1)],
    };
    let g = matrix_to_perm(&trivial, DEFAULT_POINT_CAP).unwrap();
    assert_eq!((g.degree, order(&g)), (3, 1));
    let neg = MatrixGroupSpec {
        d: 1,
        modulus: 5,
        generators: vec![Matrix(vec![4])],
    };
    let g = matrix_to_perm(&neg, DEFAULT_POINT_CAP).unwrap();
    assert_eq!(g.degree, 5);
    assert_eq!(g.generators[0].images(), &[0, 4, 3, 2, 1]);
    let g = matrix_to_perm(&gl_sylow_matrix(2, 3, 2).unwrap(), DEFAULT_POINT_CAP).unwrap();
    assert_eq!(g.degree, 9);
    let big = MatrixGroupSpec {
        d: 11,
        modulus: 3,
        generators: vec![],
    };
    assert!(matches!(
        matrix_to_perm(&big, DEFAULT_POINT_CAP),
        Err(ConstructionError::CapExceeded { .. })
    ));
}

#[test]
fn orbit_action_is_faithful() {
    let m = gl_sylow_matrix(2, 5, 2).unwrap();
    let g = matrix_orbit_perm(&m, DEFAULT_POINT_CAP).unwrap();
    assert_eq!(order(&g), 32);
}

#[test]
fn swap_scalar_examples() {
    let s = swap_scalar_group(5).unwrap();
    assert_eq!(s.generators[1], Matrix::diagonal(&[2, 2]));
    let g =
        GroupTable::closure(&matrix_to_perm(&s, DEFAULT_POINT_CAP).unwrap(), DEFAULT_CAP).unwrap();
    assert_eq!(g.len(), 16);
    assert_eq!(g.d_frattini(2).unwrap(), 3);
    assert!(!has_common_invariant_line(&s));
    let s13 = swap_scalar_group(13).unwrap();
    assert_eq!(s13.generators[1], Matrix::diagonal(&[5, 5]));
    assert_eq!(perm_order(&s13), 16);
    assert!(swap_scalar_group(7).is_err());
    let upper = MatrixGroupSpec {
        d: 2,
        modulus: 5,
        generators: vec![Matrix::from_rows(&[&[1, 1], &[0, 1]], 5)],
    };
    assert!(has_common_invariant_line(&upper));
}

#[test]
fn affine_extension_orders() {
    assert_eq!(order(&affine_extension(3, 2, 2, 1).unwrap()), 18);
    assert_eq!(order(&affine_extension(3, 2, 2, 2).unwrap()), 162);
    assert!(affine_extension(3, 1, 2, 1).is_err());
    assert!(affine_extension(5, 3, 1, 1).is_err());
}

#[test]
fn dihedral_models() {
    assert_eq!(order(&dihedral_model(2).unwrap()), 8);
    assert_eq!(order(&dihedral_model(3).unwrap()), 16);
    let sq = direct_power(&dihedral_model(2).unwrap(), 2);
    assert_eq!((sq.degree, order(&sq)), (8, 64));
}

#[test]
fn small_classical_groups() {
    assert_eq!(order(&symmetric(4).unwrap()), 24);
    assert_eq!(perm_order(&general_linear(2, 3).unwrap()), 48);
    assert_eq!(perm_order(&heisenberg(3).unwrap()), 27);
}

#[test]
fn descriptors_round_trip_through_files() {
    let desc = Descriptor::Xgroup { l: 2, a: 2, r: 1 };
    let spec = desc.build().unwrap();
    assert_eq!(spec.name.as_deref(), Some("X_{2,1}(2)"));
    let text = spec.to_file_string();
    assert!(text.contains(r#""descriptor":{"builder":"xgroup","l":2,"a":2,"r":1}"#));
    assert_eq!(GroupSpec::from_file_str(&text).unwrap(), spec);
    assert_eq!(
        Descriptor::GlSylow { d: 2, p: 3, l: 2 }
            .build()
            .unwrap()
            .degree,
        9
    );
}
