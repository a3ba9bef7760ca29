#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use dirac_core::clifford::{
    cubic_term, nu_star, p_element, sigma_star, weight_grading, CliffordAlgebra, CliffordElement,
    CliffordError, PClifford, SpinIdeal,
};
use dirac_core::liestruct::{LieAlgebra, LiePair, SubalgebraSpec};
use dirac_core::linalg::{determinant, inverse, q, qr, rank, Q};
use dirac_core::rootdata::{CartanMatrix, RootSystem};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn algebra(label: &str) -> LieAlgebra {
    let rs = RootSystem::build(&CartanMatrix::from_type(label).unwrap()).unwrap();
    LieAlgebra::build(&rs).unwrap()
}

fn pair(label: &str, spec: SubalgebraSpec) -> LiePair {
    LiePair::build(&algebra(label), &spec).unwrap()
}

fn sample_pairs() -> Vec<LiePair> {
    vec![
        pair("A2", SubalgebraSpec::PrincipalSl2),
        pair("A2", SubalgebraSpec::Levi(vec![0])),
        pair("A2", SubalgebraSpec::Zero),
        pair("B2", SubalgebraSpec::Levi(vec![1])),
        pair("G2", SubalgebraSpec::PrincipalSl2),
        pair("A1xA1", SubalgebraSpec::Diagonal),
        pair("A3", SubalgebraSpec::Levi(vec![0, 2])),
    ]
}

/// Rational orthogonal basis: rows `f_k` in b-coordinates and norms `c_k`.
fn orthogonalize(gram: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = gram.len();
    let form = |x: &[Q], y: &[Q]| -> Q {
        let mut s = Q::zero();
        for i in 0..n {
            for j in 0..n {
                s += &x[i] * &gram[i][j] * &y[j];
            }
        }
        s
    };
    let mut rest: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    let (mut fs, mut cs) = (Vec::new(), Vec::new());
    while !rest.is_empty() {
        let pick = (0..rest.len()).find(|&i| !form(&rest[i], &rest[i]).is_zero());
        let v = match pick {
            Some(i) => rest.remove(i),
            None => {
                let (i, j) = (0..rest.len())
                    .flat_map(|i| (0..rest.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| i < j && !form(&rest[i], &rest[j]).is_zero())
                    .expect("nondegenerate");
                let s: Vec<Q> = rest[i].iter().zip(&rest[j]).map(|(a, b)| a + b).collect();
                rest.remove(i);
                s
            }
        };
        let c = form(&v, &v);
        for w in rest.iter_mut() {
            let t = form(w, &v) / &c;
            for (a, b) in w.iter_mut().zip(&v) {
                *a -= &t * b;
            }
        }
        rest.retain(|w| w.iter().any(|x| !x.is_zero()));
        fs.push(v);
        cs.push(c);
    }
    (fs, cs)
}

fn minor(m: &[Vec<Q>], rows: &[usize], cols: &[usize]) -> Q {
    let sub: Vec<Vec<Q>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
        .collect();
    determinant(&sub)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Product via an orthogonal basis, where monomials multiply by signs and
/// norms only.
fn oracle_product(gram: &[Vec<Q>], a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
    let n = gram.len();
    let (p, c) = orthogonalize(gram);
    // f_k = Σ_i p[k][i] b_i, so b_i = Σ_k inv[i][k] f_k with inv = p⁻¹.
    let pt: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|k| p[k][i].clone()).collect())
        .collect();
    let inv = inverse(&p).unwrap();
    let to_f = |x: &CliffordElement| -> BTreeMap<Vec<usize>, Q> {
        let mut out = BTreeMap::new();
        for (m, coef) in x.terms() {
            for ks in subsets(n, m.len()) {
                let d = minor(&inv, m, &ks);
                if !d.is_zero() {
                    *out.entry(ks).or_insert_with(Q::zero) += coef * d;
                }
            }
        }
        out
    };
    let (fa, fb) = (to_f(a), to_f(b));
    let mut prod: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    for (s, x) in &fa {
        for (t, y) in &fb {
            let mut cur = t.clone();
            let mut coef = x * y;
            for &k in s.iter().rev() {
                let before = cur.iter().filter(|&&v| v < k).count();
                if before % 2 == 1 {
                    coef = -coef;
                }
                match cur.binary_search(&k) {
                    Ok(pos) => {
                        cur.remove(pos);
                        coef *= &c[k];
                    }
                    Err(pos) => cur.insert(pos, k),
                }
            }
            *prod.entry(cur).or_insert_with(Q::zero) += coef;
        }
    }
    let mut out = CliffordElement::zero(n);
    for (ks, x) in prod {
        for is in subsets(n, ks.len()) {
            let d = minor(&pt, &is, &ks);
            out.add_scaled(&CliffordElement::monomial(n, &is, Q::one()), &(&x * d));
        }
    }
    out
}

fn random_element(n: usize, deg: usize, coefs: &[i64]) -> CliffordElement {
    let mut e = CliffordElement::zero(n);
    for (m, c) in subsets(n, deg).iter().zip(coefs.iter().cycle()) {
        e.add_scaled(&CliffordElement::monomial(n, m, Q::one()), &q(*c));
    }
    e
}

#[test]
fn isotropic_orthogonal_vectors() {
    let alg = CliffordAlgebra::new(vec![vec![q(0), q(0)], vec![q(0), q(0)]]);
    let z = CliffordElement::basis(2, 0);
    let w = CliffordElement::basis(2, 1);
    assert_eq!(alg.product(&z, &w).unwrap(), z.wedge(&w).unwrap());
}

#[test]
fn unit_pairing_relation() {
    let alg = CliffordAlgebra::new(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
    let z = CliffordElement::basis(2, 0);
    let w = CliffordElement::basis(2, 1);
    let rhs = CliffordElement::one(2).sub(&alg.product(&w, &z).unwrap());
    assert_eq!(z.wedge(&w).unwrap(), rhs);
}

#[test]
fn basis_mismatch() {
    let alg = CliffordAlgebra::new(vec![vec![q(1)]]);
    let a = CliffordElement::one(1);
    let b = CliffordElement::one(2);
    assert_eq!(alg.product(&a, &b), Err(CliffordError::BasisMismatch(2, 1)));
    assert!(a.wedge(&b).is_err());
}

#[test]
fn clifford_relation_on_pairs() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let n = pc.dim();
        for i in 0..n {
            for j in 0..n {
                let (z, w) = (pc.b(i), pc.b(j));
                let s = pc
                    .alg
                    .product(&z, &w)
                    .unwrap()
                    .add(&pc.alg.product(&w, &z).unwrap());
                assert_eq!(s, CliffordElement::scalar(n, q(2) * &pc.alg.gram()[i][j]));
            }
        }
    }
}

#[test]
fn products_match_orthogonal_oracle() {
    let pr = pair("A2", SubalgebraSpec::PrincipalSl2);
    let pc = PClifford::new(&pr);
    let n = pc.dim();
    for (ca, cb) in [
        (vec![1, -2, 3], vec![2, 1, -1, 5]),
        (vec![4, 0, -1], vec![1, 1, 1]),
    ] {
        let a = random_element(n, 2, &ca);
        let b = random_element(n, 3, &cb);
        let got = pc.alg.product(&a, &b).unwrap();
        assert_eq!(got, oracle_product(pc.alg.gram(), &a, &b));
        assert_eq!(
            pc.alg.product(&b, &a).unwrap(),
            oracle_product(pc.alg.gram(), &b, &a)
        );
    }
}

#[test]
fn gram_pairing_values() {
    let pr = pair("A2", SubalgebraSpec::Levi(vec![0]));
    let pc = PClifford::new(&pr);
    let n = pc.dim();
    let one = CliffordElement::one(n);
    assert_eq!(pc.alg.gram_pairing(&one, &one).unwrap(), Q::one());
    for i in 0..n {
        for j in (i + 1)..n {
            let bb = pc.b(i).wedge(&pc.b(j)).unwrap();
            let dd = pc.d(i).wedge(&pc.d(j)).unwrap();
            assert_eq!(pc.alg.gram_pairing(&bb, &dd).unwrap(), Q::one());
            assert!(pc.alg.gram_pairing(&pc.b(i), &bb).unwrap().is_zero());
        }
    }
    // Laplace expansion on a random degree-two pair.
    let w = random_element(n, 2, &[1, 3, -2]);
    let z = random_element(n, 2, &[2, -1]);
    let g = pc.alg.gram();
    let mut expect = Q::zero();
    for (a, x) in w.terms() {
        for (b, y) in z.terms() {
            let d = &g[a[0]][b[0]] * &g[a[1]][b[1]] - &g[a[0]][b[1]] * &g[a[1]][b[0]];
            expect += x * y * d;
        }
    }
    assert_eq!(pc.alg.gram_pairing(&w, &z).unwrap(), expect);
}

fn check_cubic_identity(pr: &LiePair) {
    let pc = PClifford::new(pr);
    let cubic = cubic_term(pr);
    let n = pc.dim();
    for t in subsets(n, 3) {
        let (x, y, z) = (&pr.p_basis[t[0]], &pr.p_basis[t[1]], &pr.p_basis[t[2]]);
        let lhs = pr.g.form(&pr.g.bracket_vec(x, y), z);
        let xyz = CliffordElement::monomial(n, &t, Q::one());
        let rhs = q(-2) * pc.alg.gram_pairing(&cubic.v, &xyz).unwrap();
        assert_eq!(lhs, rhs, "triple {t:?}");
    }
    assert_eq!(cubic.v, cubic.v0.add(&cubic.v1));
    assert_eq!(
        cubic.v.grading(),
        if cubic.v.is_zero() { vec![] } else { vec![3] }
    );
    let p0 = pr.blocks.p0();
    assert!(cubic.v0.support().iter().all(|i| p0.contains(i)));
}

#[test]
fn cubic_term_identity() {
    for pr in sample_pairs() {
        check_cubic_identity(&pr);
    }
    check_cubic_identity(&pair(
        "B2",
        SubalgebraSpec::EqualRank(vec![vec![1, 0], vec![1, 2]]),
    ));
}

#[test]
fn cubic_term_vanishes_for_symmetric_pair() {
    let pr = pair("A1xA1", SubalgebraSpec::Diagonal);
    assert!(cubic_term(&pr).v.is_zero());
}

#[test]
fn cubic_term_for_sl2() {
    let pr = pair("A1", SubalgebraSpec::Zero);
    let cubic = cubic_term(&pr);
    assert_eq!(cubic.v.terms().len(), 1);
    assert!(cubic.v1.is_zero());
    // ([e, f], h) = −2 (v, e∧f∧h)
    let pc = PClifford::new(&pr);
    let g = &pr.g;
    let (h, e, f) = (g.unit(0), g.unit(1), g.unit(2));
    let lhs = g.form(&g.bracket_vec(&e, &f), &h);
    let pe = p_element(&pr, &e).unwrap();
    let pf = p_element(&pr, &f).unwrap();
    let ph = p_element(&pr, &h).unwrap();
    let efh = pe.wedge(&pf).unwrap().wedge(&ph).unwrap();
    assert_eq!(lhs, q(-2) * pc.alg.gram_pairing(&cubic.v, &efh).unwrap());
    assert_eq!(lhs, q(2));
}

#[test]
fn principal_cubic_terms() {
    // The principal sl2 of sl3 is so3, a symmetric subalgebra.
    let pr = pair("A2", SubalgebraSpec::PrincipalSl2);
    assert_eq!(pr.dim_p(), 5);
    assert_eq!(subsets(5, 3).len(), 10);
    assert!(cubic_term(&pr).v.is_zero());
    check_cubic_identity(&pr);
    assert!(!cubic_term(&pair("G2", SubalgebraSpec::PrincipalSl2))
        .v
        .is_zero());
    assert!(!cubic_term(&pair("A2", SubalgebraSpec::Zero)).v.is_zero());
}

fn r_elements(pr: &LiePair) -> Vec<Vec<Q>> {
    pr.r_basis.clone()
}

#[test]
fn nu_star_defining_property() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        for x in r_elements(&pr) {
            let nx = nu_star(&pr, &pc, &x).unwrap();
            assert!(nx.grading().iter().all(|&d| d == 2));
            for i in 0..pr.dim_p() {
                let lhs = pc.alg.commutator(&nx, &pc.b(i)).unwrap();
                let br = pr.g.bracket_vec(&x, &pr.p_basis[i]);
                assert_eq!(lhs, p_element(&pr, &br).unwrap());
            }
        }
    }
}

#[test]
fn nu_star_is_a_homomorphism() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let rb = r_elements(&pr);
        for x in rb.iter().take(4) {
            for y in rb.iter().rev().take(4) {
                let lhs = nu_star(&pr, &pc, &pr.g.bracket_vec(x, y)).unwrap();
                let nx = nu_star(&pr, &pc, x).unwrap();
                let ny = nu_star(&pr, &pc, y).unwrap();
                assert_eq!(lhs, pc.alg.commutator(&nx, &ny).unwrap());
            }
        }
    }
}

#[test]
fn nu_star_errors_and_zero() {
    let pr = pair("A2", SubalgebraSpec::Levi(vec![0]));
    let pc = PClifford::new(&pr);
    let y = pr.p_basis[0].clone();
    assert_eq!(nu_star(&pr, &pc, &y), Err(CliffordError::NotInR));
    // r = g: nothing to act on.
    let full = pair("A2", SubalgebraSpec::Full);
    let pcf = PClifford::new(&full);
    assert!(nu_star(&full, &pcf, &full.g.unit(3)).unwrap().is_zero());
}

#[test]
fn nu_star_on_cartan_matches_weight_formula() {
    let pr = pair("A2", SubalgebraSpec::Levi(vec![0]));
    let pc = PClifford::new(&pr);
    let half = qr(1, 2);
    for t in 0..pr.dim_hr() {
        let x = pr.hr_element(t);
        let mut expect = CliffordElement::zero(pc.dim());
        for i in pr.blocks.p_plus.clone() {
            let w = pc.b(i).wedge(&pc.d(i)).unwrap();
            expect.add_scaled(&w, &(&half * &pr.p_weights[i][t]));
        }
        assert_eq!(nu_star(&pr, &pc, &x).unwrap(), expect);
    }
}

#[test]
fn nu_star_on_u() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let ideal = SpinIdeal::build(&pr, &pc);
        for t in 0..pr.dim_hr() {
            let nx = nu_star(&pr, &pc, &pr.hr_element(t)).unwrap();
            let lhs = pc.alg.product(&nx, &ideal.u).unwrap();
            assert_eq!(lhs, ideal.u.scaled(&pr.rho.rho_p[t]));
        }
    }
}

#[test]
fn sigma_star_properties() {
    let eq = pair("A2", SubalgebraSpec::Levi(vec![0]));
    assert!(eq.h_p.is_empty());
    let pr = pair("A2", SubalgebraSpec::PrincipalSl2);
    let pc = PClifford::new(&pr);
    let ideal = SpinIdeal::build(&pr, &pc);
    for t in 0..pr.dim_hp() {
        let y = pr.hp_element(t);
        let s = sigma_star(&pr, &y).unwrap();
        let rho0 = pr.g.eval(&pr.rho.rho0, &pr.h_p[t]);
        assert_eq!(pc.alg.product(&s, &ideal.u).unwrap(), ideal.u.scaled(&rho0));
        for i in pr.blocks.p0() {
            let lhs = pc.alg.commutator(&s, &pc.b(i)).unwrap();
            let br = pr.g.bracket_vec(&y, &pr.p_basis[i]);
            assert_eq!(lhs, p_element(&pr, &br).unwrap());
        }
    }
    let not_hp = pr.g.unit(pr.g.rank());
    assert_eq!(sigma_star(&pr, &not_hp), Err(CliffordError::NotInHp));
    let zero = pair("A2", SubalgebraSpec::Zero);
    for t in 0..zero.dim_hp() {
        let s = sigma_star(&zero, &zero.hp_element(t)).unwrap();
        assert_eq!(s.grading(), vec![2]);
    }
}

#[test]
fn spin_ideal_dimensions() {
    let pr = pair("A2", SubalgebraSpec::Levi(vec![0]));
    let pc = PClifford::new(&pr);
    assert_eq!(SpinIdeal::build(&pr, &pc).dim(), 4);
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let ideal = SpinIdeal::build(&pr, &pc);
        let exp = pr.dim_hp() + pr.delta0_pos.len() + pr.blocks.p_plus.len();
        assert_eq!(ideal.dim(), 1 << exp);
    }
}

#[test]
fn u_is_killed_by_m_p() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let ideal = SpinIdeal::build(&pr, &pc);
        for i in pr.blocks.m_p() {
            assert!(pc.alg.product(&pc.b(i), &ideal.u).unwrap().is_zero());
            // z a u = 0 for a ∈ C(h_p)
            for j in pr.blocks.hp.clone() {
                let au = pc.alg.product(&pc.b(j), &ideal.u).unwrap();
                assert!(pc.alg.product(&pc.b(i), &au).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn ideal_model_agrees_with_clifford_products() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let ideal = SpinIdeal::build(&pr, &pc);
        let embedded: Vec<CliffordElement> = (0..ideal.dim())
            .map(|k| ideal.embed(&pc, &ideal.basis_element(k)))
            .collect();
        // w ↦ wu is injective
        let mut support: Vec<Vec<usize>> = embedded
            .iter()
            .flat_map(|e| e.terms().keys().cloned())
            .collect();
        support.sort();
        support.dedup();
        let rows: Vec<Vec<Q>> = embedded
            .iter()
            .map(|e| support.iter().map(|m| e.coefficient(m)).collect())
            .collect();
        assert_eq!(rank(&rows), ideal.dim());
        let mut ops: Vec<CliffordElement> = (0..pc.dim()).map(|i| pc.b(i)).collect();
        ops.push(cubic_term(&pr).v);
        for x in &ops {
            for (k, e) in embedded.iter().enumerate() {
                let model = ideal.act(&pc, x, &ideal.basis_element(k));
                let direct = pc.alg.product(x, e).unwrap();
                assert_eq!(ideal.embed(&pc, &model), direct);
            }
        }
    }
}

#[test]
fn weight_grading_examples() {
    let pr = pair("A2", SubalgebraSpec::Levi(vec![0]));
    let pc = PClifford::new(&pr);
    let ideal = SpinIdeal::build(&pr, &pc);
    let wg = weight_grading(&ideal, &pr);
    assert_eq!(wg.weights[0], pr.rho.rho_p);
    let g1 = &pr.gamma_plus[0];
    let sub = |a: &[Q], b: &[Q]| -> Vec<Q> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let mut expect = vec![pr.rho.rho_p.clone()];
    let mut all: Vec<Vec<Q>> = Vec::new();
    for i in pr.blocks.p_plus.clone() {
        all.push(pr.p_weights[i].clone());
    }
    assert_eq!(all.len(), 2);
    expect.push(sub(&pr.rho.rho_p, &all[0]));
    expect.push(sub(&pr.rho.rho_p, &all[1]));
    expect.push(sub(&sub(&pr.rho.rho_p, &all[0]), &all[1]));
    let mut got = wg.weights.clone();
    got.sort();
    expect.sort();
    assert_eq!(got, expect);
    assert!(all.contains(g1));
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let ideal = SpinIdeal::build(&pr, &pc);
        let wg = weight_grading(&ideal, &pr);
        assert_eq!(wg.spaces.values().map(Vec::len).sum::<usize>(), ideal.dim());
        // highest weight ρ_p with L^{ρ_p} = C(n⁰₋)C(h_p)u
        let top = &wg.spaces[&pr.rho.rho_p];
        assert_eq!(top.len(), 1 << (pr.dim_hp() + pr.delta0_pos.len()));
        assert!(top.iter().all(|&k| ideal.in_l0(&pr, k)));
        let at_f = |w: &[Q]| -> Q { w.iter().zip(&pr.f_r).map(|(a, b)| a * b).sum() };
        let top_value = at_f(&pr.rho.rho_p);
        for (k, w) in wg.weights.iter().enumerate() {
            if !ideal.in_l0(&pr, k) {
                assert!(at_f(w) < top_value);
            }
        }
        // ν*(x) acts on each monomial by its weight
        for t in 0..pr.dim_hr() {
            let m = ideal.matrix(&pc, &nu_star(&pr, &pc, &pr.hr_element(t)).unwrap());
            for k in 0..ideal.dim() {
                let col = m.column(k).unwrap();
                let mut expect = dirac_core::linalg::SparseVec::new();
                expect.add_term(k, wg.weights[k][t].clone());
                assert_eq!(col, &expect);
            }
        }
    }
}

#[test]
fn cubic_term_invariance() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let cubic = cubic_term(&pr);
        for t in 0..pr.dim_hr() {
            let nx = nu_star(&pr, &pc, &pr.hr_element(t)).unwrap();
            assert!(pc.alg.commutator(&nx, &cubic.v).unwrap().is_zero());
        }
        for t in 0..pr.dim_hp() {
            let s = sigma_star(&pr, &pr.hp_element(t)).unwrap();
            assert!(pc.alg.commutator(&cubic.v0, &s).unwrap().is_zero());
        }
    }
}

#[test]
fn cubic_term_preserves_lower_part() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let ideal = SpinIdeal::build(&pr, &pc);
        let m = ideal.matrix(&pc, &cubic_term(&pr).v);
        for k in (0..ideal.dim()).filter(|&k| ideal.has_minus_factor(k)) {
            for (r, _) in m.column(k).unwrap().iter() {
                assert!(ideal.has_minus_factor(r), "{k} -> {r}");
            }
        }
    }
}

#[test]
fn l0_highest_weight_space() {
    for pr in sample_pairs() {
        let pc = PClifford::new(&pr);
        let ideal = SpinIdeal::build(&pr, &pc);
        for t in 0..pr.dim_hp() {
            let y = pr.hp_element(t);
            let s = ideal.matrix(&pc, &sigma_star(&pr, &y).unwrap());
            let rho0 = pr.g.eval(&pr.rho.rho0, &pr.h_p[t]);
            for k in (0..ideal.dim()).filter(|&k| ideal.in_l0(&pr, k)) {
                let col = s.column(k).unwrap();
                if !ideal.has_minus_factor(k) {
                    assert_eq!(col.get(k), rho0);
                    assert_eq!(col.len(), usize::from(!rho0.is_zero()));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn associativity(g in prop::collection::vec(-2i64..3, 10),
                     ca in prop::collection::vec(-3i64..4, 6),
                     cb in prop::collection::vec(-3i64..4, 6),
                     cc in prop::collection::vec(-3i64..4, 4)) {
        let n = 4;
        let mut gram = vec![vec![Q::zero(); n]; n];
        let mut t = 0;
        for i in 0..n {
            for j in i..n {
                gram[i][j] = q(g[t]);
                gram[j][i] = q(g[t]);
                t += 1;
            }
        }
        let alg = CliffordAlgebra::new(gram);
        let a = random_element(n, 2, &ca).add(&random_element(n, 1, &cc));
        let b = random_element(n, 2, &cb);
        let c = random_element(n, 3, &cc).add(&CliffordElement::one(n));
        let ab_c = alg.product(&alg.product(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.product(&a, &alg.product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        // graded anticommutativity of the exterior product
        let x = random_element(n, 1, &ca);
        let y = random_element(n, 3, &cb);
        prop_assert_eq!(x.wedge(&y).unwrap(), y.wedge(&x).unwrap().scaled(&q(-1)));
        let w2 = random_element(n, 2, &cc);
        prop_assert_eq!(x.wedge(&w2).unwrap(), w2.wedge(&x).unwrap());
        let z = random_element(n, 1, &cc);
        prop_assert_eq!(x.wedge(&z).unwrap(), z.wedge(&x).unwrap().scaled(&q(-1)));
        // filtration: wz − w∧z has degree ≤ k + k' − 2
        let diff = alg.product(&b, &y).unwrap().sub(&b.wedge(&y).unwrap());
        prop_assert!(diff.grading().iter().all(|&d| d <= 3));
    }
}
