use std::sync::OnceLock;

use dirac_core::liestruct::{LieAlgebra, LieError, LiePair, SubalgebraSpec};
use dirac_core::linalg::{is_zero_vec, q, Q};
use dirac_core::rootdata::{CartanMatrix, RootSystem};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn algebra(label: &str) -> LieAlgebra {
    let rs = RootSystem::build(&CartanMatrix::from_type(label).unwrap()).unwrap();
    LieAlgebra::build(&rs).unwrap()
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn jacobi_holds(g: &LieAlgebra, a: usize, b: usize, c: usize) -> bool {
    let (x, y, z) = (g.unit(a), g.unit(b), g.unit(c));
    let t1 = g.bracket_vec(&x, &g.bracket_vec(&y, &z));
    let t2 = g.bracket_vec(&y, &g.bracket_vec(&z, &x));
    let t3 = g.bracket_vec(&z, &g.bracket_vec(&x, &y));
    is_zero_vec(&add(&add(&t1, &t2), &t3))
}

fn invariant(g: &LieAlgebra, a: usize, b: usize, c: usize) -> bool {
    let (x, y, z) = (g.unit(a), g.unit(b), g.unit(c));
    g.form(&g.bracket_vec(&x, &y), &z) + g.form(&y, &g.bracket_vec(&x, &z)) == Q::zero()
}

#[test]
fn sl2_hand_values() {
    let g = algebra("A1");
    assert_eq!(g.dim(), 3);
    let (h, e, f) = (0, 1, 2);
    assert_eq!(g.bracket(e, f).to_dense(3), g.unit(h));
    assert_eq!(
        g.bracket(h, e).to_dense(3),
        g.unit(e).iter().map(|x| x * q(2)).collect::<Vec<_>>()
    );
    assert_eq!(*g.form_basis(e, f), Q::one());
    assert_eq!(*g.form_basis(h, h), q(2));
    assert_eq!(*g.form_basis(h, e), Q::zero());
}

#[test]
fn a2_jacobi_on_all_triples() {
    let g = algebra("A2");
    let d = g.dim();
    assert_eq!(d, 8);
    for a in 0..d {
        for b in 0..d {
            assert_eq!(
                g.bracket(a, b).to_dense(d),
                g.bracket(b, a)
                    .to_dense(d)
                    .iter()
                    .map(|x| -x)
                    .collect::<Vec<_>>()
            );
            for c in 0..d {
                assert!(jacobi_holds(&g, a, b, c));
                assert!(invariant(&g, a, b, c));
            }
        }
    }
}

#[test]
fn normalization_holds_in_every_type() {
    for label in ["B3", "C3", "G2", "F4", "D4", "A1xA1"] {
        let g = algebra(label);
        let rs = g.root_system();
        let np = rs.num_positive();
        for k in 0..np {
            let e = g.root_vector(k);
            let f = g.root_vector(k + np);
            assert_eq!(*g.form_basis(e, f), Q::one(), "{label}");
            for i in 0..g.rank() {
                assert!(g.form_basis(i, e).is_zero());
            }
        }
    }
}

fn g2() -> &'static LieAlgebra {
    static G: OnceLock<LieAlgebra> = OnceLock::new();
    G.get_or_init(|| algebra("G2"))
}

fn f4() -> &'static LieAlgebra {
    static G: OnceLock<LieAlgebra> = OnceLock::new();
    G.get_or_init(|| algebra("F4"))
}

proptest! {
    #[test]
    fn g2_jacobi_and_invariance(a in 0usize..14, b in 0usize..14, c in 0usize..14) {
        prop_assert!(jacobi_holds(g2(), a, b, c));
        prop_assert!(invariant(g2(), a, b, c));
    }

    #[test]
    fn f4_jacobi_and_invariance(a in 0usize..52, b in 0usize..52, c in 0usize..52) {
        prop_assert!(jacobi_holds(f4(), a, b, c));
        prop_assert!(invariant(f4(), a, b, c));
    }
}

fn pair(label: &str, spec: SubalgebraSpec) -> LiePair {
    LiePair::build(&algebra(label), &spec).unwrap()
}

#[test]
fn full_pair_has_empty_p() {
    let p = pair("A2", SubalgebraSpec::Full);
    assert_eq!(p.dim_p(), 0);
    assert!(p.gamma_plus.is_empty());
    assert!(is_zero_vec(&p.rho.rho_p));
    assert_eq!(p.rho.rho_r, p.restrict(&p.rho.rho));
}

#[test]
fn levi_in_a2() {
    let p = pair("A2", SubalgebraSpec::Levi(vec![0]));
    assert_eq!(p.dim_p(), 4);
    assert_eq!(p.dim_hp(), 0);
    assert!(p.delta0.is_empty());
    assert_eq!(p.gamma_plus.len(), 2);
    assert_eq!(p.gamma_plus_dims, vec![1, 1]);
}

#[test]
fn principal_sl2_in_a2() {
    let p = pair("A2", SubalgebraSpec::PrincipalSl2);
    assert_eq!(p.dim_r(), 3);
    assert_eq!(p.dim_p(), 5);
    assert_eq!(p.dim_hp(), 1);
    assert!(p.delta0.is_empty());
    assert_eq!(p.blocks.p0().len(), 1);
    assert_eq!(p.blocks.p_plus.len(), 2);
    // Lemma: y_{ρ₂} = 0.
    assert!(is_zero_vec(&p.cartan_vector(&p.rho.rho2).y));
}

#[test]
fn zero_and_diagonal_pairs() {
    let p = pair("A1", SubalgebraSpec::Zero);
    assert_eq!(p.dim_p(), 3);
    assert_eq!(p.dim_hp(), 1);
    assert_eq!(p.delta0.len(), 2);
    assert_eq!(p.blocks.m_p().len(), 1);
    let d = pair("A1xA1", SubalgebraSpec::Diagonal);
    assert_eq!(d.dim_r(), 3);
    assert_eq!(d.dim_p(), 3);
    assert_eq!(d.dim_hp(), 1);
}

#[test]
fn equal_rank_f4_b4() {
    let p = pair(
        "F4",
        SubalgebraSpec::EqualRank(vec![
            vec![-2, -3, -4, -2],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
        ]),
    );
    assert!(p.is_equal_rank());
    assert_eq!(p.dim_r(), 36);
    assert_eq!(p.dim_p(), 16);
}

#[test]
fn cartan_vectors() {
    let p = pair("A2", SubalgebraSpec::PrincipalSl2);
    let zero = vec![Q::zero(); 2];
    let cv = p.cartan_vector(&zero);
    assert!(is_zero_vec(&cv.z) && is_zero_vec(&cv.x) && is_zero_vec(&cv.y));
    let nu = vec![q(3), q(-1)];
    let cv = p.cartan_vector(&nu);
    assert_eq!(add(&cv.x, &cv.y), cv.z);
    // (z, z_ν) = ν(z) on the simple coroots
    let g = &p.g;
    for i in 0..2 {
        let zi = g.unit(i);
        assert_eq!(g.form(&zi, &g.cartan_element(&cv.z)), g.eval(&nu, &zi[..2]));
    }
    let lev = pair("A2", SubalgebraSpec::Levi(vec![1]));
    assert!(is_zero_vec(&lev.cartan_vector(&nu).y));
}

#[test]
fn rho_identities_on_several_pairs() {
    for (label, spec) in [
        ("A2", SubalgebraSpec::Levi(vec![0])),
        ("A2", SubalgebraSpec::PrincipalSl2),
        ("A2", SubalgebraSpec::Zero),
        (
            "B2",
            SubalgebraSpec::EqualRank(vec![vec![1, 0], vec![1, 2]]),
        ),
        ("G2", SubalgebraSpec::PrincipalSl2),
        ("A1xA1", SubalgebraSpec::Diagonal),
        ("A3", SubalgebraSpec::Levi(vec![0, 2])),
    ] {
        let p = pair(label, spec);
        let t = p.trace_weights().unwrap();
        let sum: Vec<Q> = (0..p.g.rank())
            .map(|i| &t.rho0[i] + &t.rho1[i] + &t.rho2[i])
            .collect();
        assert_eq!(sum, t.rho);
        assert_eq!(add(&t.rho_p, &t.rho_r), p.restrict(&t.rho));
    }
}

#[test]
fn invalid_subalgebras_are_rejected() {
    let g = algebra("A2");
    let e = |k: usize| g.unit(g.root_vector(k));
    let not_closed = SubalgebraSpec::Explicit(vec![e(0), e(1)]);
    assert!(matches!(
        LiePair::build(&g, &not_closed),
        Err(LieError::NotSubalgebra(_))
    ));
    let nilpotent = SubalgebraSpec::Explicit(vec![e(0)]);
    assert!(matches!(
        LiePair::build(&g, &nilpotent),
        Err(LieError::DegenerateForm(_))
    ));
    let a1 = algebra("A1");
    let tilted = SubalgebraSpec::Explicit(vec![add(&a1.unit(0), &a1.unit(1))]);
    assert!(matches!(
        LiePair::build(&a1, &tilted),
        Err(LieError::CartanNotAligned(_))
    ));
    // Short roots of B2 form a reflection-closed set that is not a subalgebra.
    let b2 = algebra("B2");
    assert!(matches!(
        LiePair::build(
            &b2,
            &SubalgebraSpec::EqualRank(vec![vec![0, 1], vec![1, 1]])
        ),
        Err(LieError::NotSubalgebra(_))
    ));
}
