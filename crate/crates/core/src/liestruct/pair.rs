use std::collections::BTreeMap;
use std::ops::Range;

use num_traits::{One, Signed, Zero};

use super::{LieAlgebra, LieError};
use crate::linalg::{
    coords_in, determinant, intersection, inverse, is_zero_vec, nullspace, q, rank, solve,
    span_basis, Q,
};
use crate::repmod::RRootData;
use crate::rootdata::{close_subsystem, Root};

/// How r sits inside g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubalgebraSpec {
    Full,
    Zero,
    /// Root subsystem generated by the given roots, together with all of h.
    EqualRank(Vec<Root>),
    /// Levi subalgebra on a set of simple roots (0-based).
    Levi(Vec<usize>),
    /// Explicit basis in g-coordinates.
    Explicit(Vec<Vec<Q>>),
    PrincipalSl2,
    /// Diagonal copy in a product of two isomorphic simple factors.
    Diagonal,
}

/// Index ranges of the blocks of the ordered basis of p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBlocks {
    pub hp: Range<usize>,
    pub n0: Range<usize>,
    pub n0_minus: Range<usize>,
    pub p_plus: Range<usize>,
    pub p_minus: Range<usize>,
}

impl PBlocks {
    /// Indices of `p⁰ = h_p + n⁰ + n⁰₋`.
    pub fn p0(&self) -> Range<usize> {
        self.hp.start..self.n0_minus.end
    }

    /// Indices whose span is `m_p = n⁰ + p⁺`.
    pub fn m_p(&self) -> Vec<usize> {
        self.n0.clone().chain(self.p_plus.clone()).collect()
    }

    /// Indices whose span is `m_p⁻ = n⁰₋ + p⁻`.
    pub fn m_p_minus(&self) -> Vec<usize> {
        self.n0_minus.clone().chain(self.p_minus.clone()).collect()
    }
}

/// Half-sums of roots: `ρ, ρ₀, ρ₁, ρ₂` in simple-root coordinates, and
/// `ρ_p, ρ_r` as values on the basis of `h_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoParts {
    pub rho: Vec<Q>,
    pub rho0: Vec<Q>,
    pub rho1: Vec<Q>,
    pub rho2: Vec<Q>,
    pub rho_p: Vec<Q>,
    pub rho_r: Vec<Q>,
}

/// `z_ν = x_ν + y_ν` with `x_ν ∈ h_r`, `y_ν ∈ h_p`, all in coroot
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanVector {
    pub nu: Vec<Q>,
    pub z: Vec<Q>,
    pub x: Vec<Q>,
    pub y: Vec<Q>,
}

#[derive(Clone, Debug)]
pub struct LiePair {
    pub g: LieAlgebra,
    pub spec: SubalgebraSpec,
    /// Basis of r in g-coordinates.
    pub r_basis: Vec<Vec<Q>>,
    /// Roots of g lying in r when `h ⊂ r`.
    pub sub_roots: Option<Vec<usize>>,
    pub h_r: Vec<Vec<Q>>,
    pub h_p: Vec<Vec<Q>>,
    /// Inverse Gram matrix of `B` on `h_r`: the form on `h_r*`.
    pub hr_dual_form: Vec<Vec<Q>>,
    pub delta0: Vec<usize>,
    pub delta0_pos: Vec<usize>,
    pub delta1_pos: Vec<usize>,
    pub delta2_pos: Vec<usize>,
    pub gamma_plus: Vec<Vec<Q>>,
    /// `dim p^μ` for `μ ∈ Γ₊`, same order.
    pub gamma_plus_dims: Vec<usize>,
    pub p_basis: Vec<Vec<Q>>,
    pub p_dual: Vec<Vec<Q>>,
    pub p_weights: Vec<Vec<Q>>,
    pub blocks: PBlocks,
    /// `f_r` in coordinates on the `h_r` basis, and `f` in coroot
    /// coefficients.
    pub f_r: Vec<Q>,
    pub f: Vec<Q>,
    pub n_r: Vec<Vec<Q>>,
    pub r_positive_roots: Vec<Vec<Q>>,
    pub rho: RhoParts,
}

fn unit(dim: usize, a: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[a] = Q::one();
    v
}

fn lin_comb(vs: &[Vec<Q>], coeffs: &[Q], dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (v, c) in vs.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

fn inconsistent(msg: impl Into<String>) -> LieError {
    LieError::InternalInconsistency(msg.into())
}

impl LiePair {
    pub fn build(g: &LieAlgebra, spec: &SubalgebraSpec) -> Result<Self, LieError> {
        let rs = g.root_system();
        let n = g.rank();
        let np = rs.num_positive();
        let dim = g.dim();

        let (r_raw, sub_roots) = r_basis_from_spec(g, spec)?;
        let r_basis = if rank(&r_raw) == r_raw.len() {
            r_raw
        } else {
            span_basis(&r_raw)
        };

        for (a, x) in r_basis.iter().enumerate() {
            for y in &r_basis[a + 1..] {
                if coords_in(&r_basis, &g.bracket_vec(x, y)).is_none() {
                    return Err(LieError::NotSubalgebra(
                        "bracket of basis elements leaves the span".into(),
                    ));
                }
            }
        }
        let gram_r: Vec<Vec<Q>> = r_basis
            .iter()
            .map(|x| r_basis.iter().map(|y| g.form(x, y)).collect())
            .collect();
        if determinant(&gram_r).is_zero() {
            return Err(LieError::DegenerateForm(
                "B restricted to r is singular".into(),
            ));
        }

        // p = r^⊥
        let bm = g.form_matrix();
        let constraints: Vec<Vec<Q>> = r_basis
            .iter()
            .map(|x| {
                (0..dim)
                    .map(|b| (0..dim).map(|a| &x[a] * &bm[a][b]).sum())
                    .collect()
            })
            .collect();
        let p_all = if constraints.is_empty() {
            (0..dim).map(|a| unit(dim, a)).collect()
        } else {
            nullspace(&constraints, dim)
        };

        // h_r = r ∩ h
        let h_units: Vec<Vec<Q>> = (0..n).map(|i| unit(dim, i)).collect();
        let h_r_g = intersection(&r_basis, &h_units, dim);
        let h_r: Vec<Vec<Q>> = h_r_g.iter().map(|v| v[..n].to_vec()).collect();
        let k = h_r.len();
        let centralizer_eqs: Vec<Vec<Q>> = {
            let mut rows = Vec::new();
            for hv in &h_r_g {
                let cols: Vec<Vec<Q>> = r_basis.iter().map(|x| g.bracket_vec(hv, x)).collect();
                for c in 0..dim {
                    rows.push(cols.iter().map(|col| col[c].clone()).collect());
                }
            }
            rows
        };
        let centralizer_dim = if centralizer_eqs.is_empty() {
            r_basis.len()
        } else {
            nullspace(&centralizer_eqs, r_basis.len()).len()
        };
        if centralizer_dim != k {
            return Err(LieError::CartanNotAligned(format!(
                "r ∩ h has dimension {k} but its centralizer in r has dimension {centralizer_dim}"
            )));
        }

        // h_p = orthocomplement of h_r in h
        let gh: Vec<Vec<Q>> = (0..n).map(|i| bm[i][..n].to_vec()).collect();
        let hr_rows: Vec<Vec<Q>> = h_r
            .iter()
            .map(|x| {
                (0..n)
                    .map(|j| (0..n).map(|i| &x[i] * &gh[i][j]).sum())
                    .collect()
            })
            .collect();
        let h_p: Vec<Vec<Q>> = if hr_rows.is_empty() {
            (0..n).map(|i| unit(n, i)).collect()
        } else {
            nullspace(&hr_rows, n)
        };
        let embed = |x: &[Q]| -> Vec<Q> { g.cartan_element(x) };
        for y in &h_p {
            let yg = embed(y);
            if r_basis.iter().any(|x| !g.form(x, &yg).is_zero()) {
                return Err(LieError::CartanNotAligned(
                    "the orthocomplement of h_r in h is not contained in p".into(),
                ));
            }
        }
        let gram_hr: Vec<Vec<Q>> = h_r
            .iter()
            .map(|x| h_r.iter().map(|y| g.form(&embed(x), &embed(y))).collect())
            .collect();
        let hr_dual_form = inverse(&gram_hr)
            .ok_or_else(|| LieError::DegenerateForm("B restricted to h_r is singular".into()))?;

        let restrict = |kk: usize| -> Vec<Q> {
            let labels = rs.dynkin_labels(&rs.root_q(kk));
            h_r.iter()
                .map(|x| x.iter().zip(&labels).map(|(a, b)| a * b).sum())
                .collect()
        };
        let res: Vec<Vec<Q>> = (0..rs.num_roots()).map(restrict).collect();
        let delta0: Vec<usize> = (0..rs.num_roots())
            .filter(|&kk| is_zero_vec(&res[kk]))
            .collect();

        let f_r = choose_f_r(g, &h_r, &gram_hr, &res, np)?;
        let eval_fr = |mu: &[Q]| -> Q { mu.iter().zip(&f_r).map(|(a, b)| a * b).sum() };
        let f_r_h = lin_comb(&h_r, &f_r, n);
        let z_rho = g.dual_cartan(rs.rho());
        let f = choose_f(g, &f_r_h, &z_rho)?;

        // h_r-weight spaces of g
        let mut spaces: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
        for (kk, mu) in res.iter().enumerate() {
            if !is_zero_vec(mu) {
                spaces.entry(mu.clone()).or_default().push(kk);
            }
        }
        let mut p_mu: BTreeMap<Vec<Q>, Vec<Vec<Q>>> = BTreeMap::new();
        let mut r_mu: BTreeMap<Vec<Q>, Vec<Vec<Q>>> = BTreeMap::new();
        for (mu, roots) in &spaces {
            let gmu: Vec<Vec<Q>> = roots
                .iter()
                .map(|&kk| unit(dim, g.root_vector(kk)))
                .collect();
            let pm = intersection(&p_all, &gmu, dim);
            let rm = intersection(&r_basis, &gmu, dim);
            if pm.len() + rm.len() != gmu.len() {
                return Err(inconsistent(format!(
                    "g^μ ≠ r^μ + p^μ for μ = {:?}",
                    crate::linalg::fmt_vec(mu)
                )));
            }
            if !pm.is_empty() {
                p_mu.insert(mu.clone(), pm);
            }
            if !rm.is_empty() {
                r_mu.insert(mu.clone(), rm);
            }
        }
        let neg = |mu: &[Q]| -> Vec<Q> { mu.iter().map(|x| -x).collect() };
        for mu in p_mu.keys() {
            if !p_mu.contains_key(&neg(mu)) {
                return Err(inconsistent("Γ is not symmetric"));
            }
        }
        let mut gamma_plus: Vec<Vec<Q>> = p_mu
            .keys()
            .filter(|mu| eval_fr(mu).is_positive())
            .cloned()
            .collect();
        gamma_plus.reverse();
        if gamma_plus.len() * 2 != p_mu.len() {
            return Err(inconsistent("some μ ∈ Γ vanishes on f_r"));
        }

        // Ordered basis of p.
        let mut p_basis: Vec<Vec<Q>> = h_p.iter().map(|y| embed(y)).collect();
        let hp_range = 0..p_basis.len();
        let delta0_pos: Vec<usize> = delta0.iter().copied().filter(|&kk| kk < np).collect();
        p_basis.extend(delta0_pos.iter().map(|&kk| unit(dim, g.root_vector(kk))));
        let n0_range = hp_range.end..p_basis.len();
        p_basis.extend(
            delta0_pos
                .iter()
                .map(|&kk| unit(dim, g.root_vector(rs.negate_index(kk)))),
        );
        let n0m_range = n0_range.end..p_basis.len();
        let mut gamma_plus_dims = Vec::new();
        for mu in &gamma_plus {
            gamma_plus_dims.push(p_mu[mu].len());
            p_basis.extend(p_mu[mu].iter().cloned());
        }
        let pplus_range = n0m_range.end..p_basis.len();
        for mu in &gamma_plus {
            let plus = &p_mu[mu];
            let minus = &p_mu[&neg(mu)];
            let m: Vec<Vec<Q>> = plus
                .iter()
                .map(|b| minus.iter().map(|c| g.form(b, c)).collect())
                .collect();
            let mi = inverse(&m).ok_or_else(|| {
                inconsistent(format!(
                    "p^μ and p^-μ are paired singularly for μ = {:?}",
                    crate::linalg::fmt_vec(mu)
                ))
            })?;
            for kk in 0..plus.len() {
                let coeffs: Vec<Q> = (0..minus.len()).map(|l| mi[l][kk].clone()).collect();
                p_basis.push(lin_comb(minus, &coeffs, dim));
            }
        }
        let pminus_range = pplus_range.end..p_basis.len();
        if p_basis.len() != p_all.len() || rank(&p_basis) != p_basis.len() {
            return Err(inconsistent(format!(
                "p basis has {} vectors, expected {}",
                p_basis.len(),
                p_all.len()
            )));
        }
        let gram_p: Vec<Vec<Q>> = p_basis
            .iter()
            .map(|x| p_basis.iter().map(|y| g.form(x, y)).collect())
            .collect();
        let gi = inverse(&gram_p)
            .ok_or_else(|| LieError::DegenerateForm("B restricted to p is singular".into()))?;
        let p_dual: Vec<Vec<Q>> = (0..p_basis.len())
            .map(|kk| {
                let coeffs: Vec<Q> = (0..p_basis.len()).map(|l| gi[l][kk].clone()).collect();
                lin_comb(&p_basis, &coeffs, dim)
            })
            .collect();
        let hr_g: Vec<Vec<Q>> = h_r.iter().map(|x| embed(x)).collect();
        let weight_of = |v: &[Q]| -> Option<Vec<Q>> {
            let mut out = Vec::with_capacity(k);
            for x in &hr_g {
                let w = g.bracket_vec(x, v);
                let pos = v.iter().position(|c| !c.is_zero())?;
                let c = &w[pos] / &v[pos];
                if w.iter().zip(v).any(|(a, b)| *a != &c * b) {
                    return None;
                }
                out.push(c);
            }
            Some(out)
        };
        let p_weights = p_basis
            .iter()
            .map(|v| {
                weight_of(v).ok_or_else(|| inconsistent("p basis vector is not a weight vector"))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut n_r = Vec::new();
        let mut r_positive_roots = Vec::new();
        for (mu, basis) in &r_mu {
            if eval_fr(mu).is_positive() {
                for b in basis {
                    n_r.push(b.clone());
                    r_positive_roots.push(mu.clone());
                }
            }
        }

        let delta1_pos: Vec<usize> = (0..np)
            .filter(|&kk| gamma_plus.contains(&res[kk]))
            .collect();
        let delta2_pos: Vec<usize> = (0..np)
            .filter(|&kk| !delta0.contains(&kk) && !gamma_plus.contains(&res[kk]))
            .collect();

        let half = |roots: &[usize]| crate::rootdata::half_sum(rs, roots);
        let all_pos: Vec<usize> = (0..np).collect();
        let mut rho_p = vec![Q::zero(); k];
        for (mu, d) in gamma_plus.iter().zip(&gamma_plus_dims) {
            for (o, x) in rho_p.iter_mut().zip(mu) {
                *o += x * q(*d as i64) / q(2);
            }
        }
        let mut rho_r = vec![Q::zero(); k];
        for mu in &r_positive_roots {
            for (o, x) in rho_r.iter_mut().zip(mu) {
                *o += x / q(2);
            }
        }
        let rho = RhoParts {
            rho: half(&all_pos),
            rho0: half(&delta0_pos),
            rho1: half(&delta1_pos),
            rho2: half(&delta2_pos),
            rho_p,
            rho_r,
        };

        let pair = Self {
            g: g.clone(),
            spec: spec.clone(),
            r_basis,
            sub_roots,
            h_r,
            h_p,
            hr_dual_form,
            delta0,
            delta0_pos,
            delta1_pos,
            delta2_pos,
            gamma_plus,
            gamma_plus_dims,
            p_basis,
            p_dual,
            p_weights,
            blocks: PBlocks {
                hp: hp_range,
                n0: n0_range,
                n0_minus: n0m_range,
                p_plus: pplus_range,
                p_minus: pminus_range,
            },
            f_r,
            f,
            n_r,
            r_positive_roots,
            rho,
        };
        pair.check_structure()?;
        pair.trace_weights()?;
        Ok(pair)
    }

    pub fn dim_r(&self) -> usize {
        self.r_basis.len()
    }

    pub fn dim_p(&self) -> usize {
        self.p_basis.len()
    }

    pub fn dim_hr(&self) -> usize {
        self.h_r.len()
    }

    pub fn dim_hp(&self) -> usize {
        self.h_p.len()
    }

    pub fn is_equal_rank(&self) -> bool {
        self.h_p.is_empty()
    }

    pub fn hr_element(&self, i: usize) -> Vec<Q> {
        self.g.cartan_element(&self.h_r[i])
    }

    pub fn hp_element(&self, i: usize) -> Vec<Q> {
        self.g.cartan_element(&self.h_p[i])
    }

    /// Coordinates of `y ∈ p` on the ordered basis, `c_i = B(y, d_i)`.
    pub fn p_coords(&self, y: &[Q]) -> Vec<Q> {
        self.p_dual.iter().map(|d| self.g.form(y, d)).collect()
    }

    /// Restriction to `h_r` of a functional on h in simple-root coordinates.
    pub fn restrict(&self, nu: &[Q]) -> Vec<Q> {
        let labels = self.g.root_system().dynkin_labels(nu);
        self.h_r
            .iter()
            .map(|x| x.iter().zip(&labels).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Functional in simple-root coordinates vanishing on `h_p` whose
    /// restriction to `h_r` is `mu`.
    pub fn lift(&self, mu: &[Q]) -> Vec<Q> {
        let rs = self.g.root_system();
        let n = rs.rank();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        let mut rhs = Vec::new();
        let a: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| q(rs.cartan().get(i, j))).collect())
            .collect();
        // ν(x) = Σ_i x_i Σ_j ν_j a_ij
        for (x, val) in self.h_r.iter().zip(mu) {
            rows.push(
                (0..n)
                    .map(|j| (0..n).map(|i| &x[i] * &a[i][j]).sum())
                    .collect(),
            );
            rhs.push(val.clone());
        }
        for y in &self.h_p {
            rows.push(
                (0..n)
                    .map(|j| (0..n).map(|i| &y[i] * &a[i][j]).sum())
                    .collect(),
            );
            rhs.push(Q::zero());
        }
        solve(&rows, &rhs).expect("h = h_r ⊕ h_p")
    }

    pub fn hr_inner(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * &self.hr_dual_form[i][j] * y;
            }
        }
        s
    }

    pub fn r_root_data(&self) -> RRootData {
        RRootData {
            dual_form: self.hr_dual_form.clone(),
            positive_roots: self.r_positive_roots.clone(),
        }
    }

    /// `ρ_r` in simple-root coordinates, for pairs with `h ⊂ r`.
    pub fn rho_r_weight(&self) -> Option<Vec<Q>> {
        self.is_equal_rank().then(|| self.lift(&self.rho.rho_r))
    }

    pub fn cartan_vector(&self, nu: &[Q]) -> CartanVector {
        let z = self.g.dual_cartan(nu);
        let n = self.g.rank();
        let basis: Vec<Vec<Q>> = self.h_r.iter().chain(&self.h_p).cloned().collect();
        let t: Vec<Vec<Q>> = (0..n)
            .map(|i| basis.iter().map(|b| b[i].clone()).collect())
            .collect();
        let c = solve(&t, &z).expect("h = h_r ⊕ h_p");
        let k = self.h_r.len();
        let x = lin_comb(&self.h_r, &c[..k], n);
        let y = lin_comb(&self.h_p, &c[k..], n);
        CartanVector {
            nu: nu.to_vec(),
            z,
            x,
            y,
        }
    }

    fn check_structure(&self) -> Result<(), LieError> {
        let g = &self.g;
        let rs = g.root_system();
        let np = rs.num_positive();
        for x in &self.r_basis {
            for d in &self.p_basis {
                if !g.form(x, d).is_zero() {
                    return Err(inconsistent("B(r, p) ≠ 0"));
                }
                let br = g.bracket_vec(x, d);
                if self.r_basis.iter().any(|y| !g.form(y, &br).is_zero()) {
                    return Err(inconsistent("[r, p] ⊄ p"));
                }
            }
        }
        for set in [self.blocks.m_p(), self.blocks.m_p_minus()] {
            for &i in &set {
                for &j in &set {
                    if !g.form(&self.p_basis[i], &self.p_basis[j]).is_zero() {
                        return Err(inconsistent("m_p or m_p⁻ is not isotropic"));
                    }
                }
            }
        }
        // m_p ⊂ n
        for &i in &self.blocks.m_p() {
            let v = &self.p_basis[i];
            let ok = v
                .iter()
                .enumerate()
                .all(|(a, c)| c.is_zero() || g.basis_root(a).is_some_and(|kk| kk < np));
            if !ok {
                return Err(inconsistent("m_p ⊄ n"));
            }
        }
        // φ|h_p = 0 on Δ₊²
        for &kk in &self.delta2_pos {
            let labels = rs.dynkin_labels(&rs.root_q(kk));
            for y in &self.h_p {
                let v: Q = y.iter().zip(&labels).map(|(a, b)| a * b).sum();
                if !v.is_zero() {
                    return Err(inconsistent("a root in Δ₊² is nonzero on h_p"));
                }
            }
        }
        // b_r = h_r + n_r is a subalgebra with [b_r, b_r] = n_r.
        let b_r: Vec<Vec<Q>> = (0..self.dim_hr())
            .map(|i| self.hr_element(i))
            .chain(self.n_r.iter().cloned())
            .collect();
        let mut derived = Vec::new();
        for x in &b_r {
            for y in &b_r {
                let br = g.bracket_vec(x, y);
                if coords_in(&self.n_r, &br).is_none() {
                    return Err(inconsistent("[b_r, b_r] ⊄ n_r"));
                }
                derived.push(br);
            }
        }
        if rank(&derived) != self.n_r.len() {
            return Err(inconsistent("[b_r, b_r] ≠ n_r"));
        }
        Ok(())
    }

    /// Computes every ρ-part from its trace definition and compares with the
    /// root sums.
    pub fn trace_weights(&self) -> Result<RhoParts, LieError> {
        let g = &self.g;
        let rs = g.root_system();
        let n = g.rank();
        let np = rs.num_positive();
        // ½ tr ad z on span{e_φ : φ ∈ roots} for z = h_i, giving Dynkin labels.
        let trace_on_roots = |roots: &[usize]| -> Vec<Q> {
            let labels: Vec<Q> = (0..n)
                .map(|i| {
                    let z = g.unit(i);
                    roots
                        .iter()
                        .map(|&kk| {
                            let e = g.unit(g.root_vector(kk));
                            let f = g.unit(g.root_vector(rs.negate_index(kk)));
                            g.form(&g.bracket_vec(&z, &e), &f)
                        })
                        .sum::<Q>()
                        / q(2)
                })
                .collect();
            rs.from_dynkin_labels(&labels)
        };
        let all: Vec<usize> = (0..np).collect();
        let rho = trace_on_roots(&all);
        let rho0 = trace_on_roots(&self.delta0_pos);
        let rho1 = trace_on_roots(&self.delta1_pos);
        let rho2 = trace_on_roots(&self.delta2_pos);
        let k = self.dim_hr();
        let rho_p: Vec<Q> = (0..k)
            .map(|i| {
                let x = self.hr_element(i);
                self.blocks
                    .p_plus
                    .clone()
                    .map(|j| g.form(&g.bracket_vec(&x, &self.p_basis[j]), &self.p_dual[j]))
                    .sum::<Q>()
                    / q(2)
            })
            .collect();
        let rho_r: Vec<Q> = (0..k)
            .map(|i| {
                let x = self.hr_element(i);
                let mut t = Q::zero();
                for (j, b) in self.n_r.iter().enumerate() {
                    let c = coords_in(&self.n_r, &g.bracket_vec(&x, b)).expect("n_r is h_r-stable");
                    t += &c[j];
                }
                t / q(2)
            })
            .collect();
        let traced = RhoParts {
            rho,
            rho0,
            rho1,
            rho2,
            rho_p,
            rho_r,
        };
        if traced != self.rho {
            return Err(inconsistent(format!(
                "root-sum and trace ρ-parts disagree: {:?} vs {:?}",
                self.rho, traced
            )));
        }
        let sum: Vec<Q> = (0..n)
            .map(|i| &self.rho.rho0[i] + &self.rho.rho1[i] + &self.rho.rho2[i])
            .collect();
        if sum != self.rho.rho {
            return Err(inconsistent("ρ ≠ ρ₀ + ρ₁ + ρ₂"));
        }
        let rho_hr = self.restrict(&self.rho.rho);
        let lhs: Vec<Q> = (0..k)
            .map(|i| &self.rho.rho_p[i] + &self.rho.rho_r[i])
            .collect();
        if lhs != rho_hr {
            return Err(inconsistent("ρ_p + ρ_r ≠ ρ|h_r"));
        }
        if !is_zero_vec(&self.cartan_vector(&self.rho.rho2).y) {
            return Err(inconsistent("y_ρ₂ ≠ 0"));
        }
        // ½ Σ_{μ∈Γ₊} tr ad z|g^μ = ρ₁(z) for z ∈ h_p
        for y in &self.h_p {
            let z = g.cartan_element(y);
            let mut t = Q::zero();
            for &kk in &self.delta1_pos {
                let e = g.unit(g.root_vector(kk));
                let f = g.unit(g.root_vector(rs.negate_index(kk)));
                t += g.form(&g.bracket_vec(&z, &e), &f);
            }
            if t / q(2) != g.eval(&self.rho.rho1, y) {
                return Err(inconsistent("trace identity for ρ₁ fails on h_p"));
            }
        }
        Ok(traced)
    }
}

fn r_basis_from_spec(
    g: &LieAlgebra,
    spec: &SubalgebraSpec,
) -> Result<(Vec<Vec<Q>>, Option<Vec<usize>>), LieError> {
    let rs = g.root_system();
    let n = g.rank();
    let dim = g.dim();
    let with_roots = |roots: Vec<usize>| {
        let mut b: Vec<Vec<Q>> = (0..n).map(|i| unit(dim, i)).collect();
        b.extend(roots.iter().map(|&kk| unit(dim, g.root_vector(kk))));
        (b, Some(roots))
    };
    Ok(match spec {
        SubalgebraSpec::Full => with_roots((0..rs.num_roots()).collect()),
        SubalgebraSpec::Zero => (Vec::new(), None),
        SubalgebraSpec::EqualRank(gens) => with_roots(close_subsystem(rs, gens)?),
        SubalgebraSpec::Levi(simple) => {
            let gens: Vec<Root> = simple
                .iter()
                .map(|&i| {
                    if i >= n {
                        Err(LieError::NotSubalgebra(format!("no simple root {}", i + 1)))
                    } else {
                        Ok(rs.simple_root(i))
                    }
                })
                .collect::<Result<_, _>>()?;
            with_roots(close_subsystem(rs, &gens)?)
        }
        SubalgebraSpec::Explicit(basis) => {
            if basis.iter().any(|v| v.len() != dim) {
                return Err(LieError::NotSubalgebra(format!(
                    "basis vectors must have {dim} coordinates"
                )));
            }
            (basis.clone(), None)
        }
        SubalgebraSpec::PrincipalSl2 => {
            let a: Vec<Vec<Q>> = (0..n)
                .map(|i| (0..n).map(|j| q(rs.cartan().get(j, i))).collect())
                .collect();
            // α_i(h) = Σ_j c_j a_ji = 2
            let c = solve(&a, &vec![q(2); n]).expect("Cartan matrix is invertible");
            let h = g.cartan_element(&c);
            let mut e = vec![Q::zero(); dim];
            let mut f = vec![Q::zero(); dim];
            for i in 0..n {
                let kk = rs.index_of(&rs.simple_root(i)).unwrap();
                e[g.root_vector(kk)] = Q::one();
                f[g.root_vector(rs.negate_index(kk))] = q(2) * &c[i] / &rs.inner_matrix()[i][i];
            }
            (vec![h, e, f], None)
        }
        SubalgebraSpec::Diagonal => {
            let comps = rs.cartan().components();
            let same = comps.len() == 2 && {
                let (a, b) = (&comps[0], &comps[1]);
                a.len() == b.len()
                    && a.iter().zip(b).all(|(&i, &ii)| {
                        a.iter()
                            .zip(b)
                            .all(|(&j, &jj)| rs.cartan().get(i, j) == rs.cartan().get(ii, jj))
                    })
            };
            if !same {
                return Err(LieError::NotSubalgebra(
                    "diagonal needs exactly two isomorphic simple factors".into(),
                ));
            }
            let (a, b) = (&comps[0], &comps[1]);
            let mut basis = Vec::new();
            for (&i, &ii) in a.iter().zip(b) {
                let mut v = unit(dim, i);
                v[ii] = Q::one();
                basis.push(v);
            }
            for kk in 0..rs.num_roots() {
                let r = rs.root(kk);
                if b.iter().any(|&i| r[i] != 0) {
                    continue;
                }
                let mut image = vec![0i64; n];
                for (&i, &ii) in a.iter().zip(b) {
                    image[ii] = r[i];
                }
                let kk2 = rs.index_of(&image).unwrap();
                let mut v = unit(dim, g.root_vector(kk));
                v[g.root_vector(kk2)] = Q::one();
                basis.push(v);
            }
            (basis, None)
        }
    })
}

/// `f_r = x_ρ` when every positive root is nonnegative on it and vanishes
/// exactly on Δ⁰; otherwise a power-of-base combination of the `h_r` basis.
fn choose_f_r(
    g: &LieAlgebra,
    h_r: &[Vec<Q>],
    gram_hr: &[Vec<Q>],
    res: &[Vec<Q>],
    np: usize,
) -> Result<Vec<Q>, LieError> {
    let k = h_r.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let ok = |c: &[Q]| -> bool {
        (0..np).all(|kk| {
            let v: Q = res[kk].iter().zip(c).map(|(a, b)| a * b).sum();
            !v.is_negative() && (v.is_zero() == is_zero_vec(&res[kk]))
        })
    };
    let rho = g.root_system().rho().to_vec();
    let rho_vals: Vec<Q> = h_r.iter().map(|x| g.eval(&rho, x)).collect();
    let x_rho = solve(gram_hr, &rho_vals).expect("form on h_r is nonsingular");
    if ok(&x_rho) {
        return Ok(x_rho);
    }
    let mut base = q(10);
    for _ in 0..16 {
        let c: Vec<Q> = (0..k)
            .map(|i| num_traits::pow(base.clone(), i + 1))
            .collect();
        if ok(&c) {
            return Ok(c);
        }
        base *= q(2);
    }
    Err(LieError::CartanNotAligned(
        "no f_r in h_r is dominant for the standard positive system".into(),
    ))
}

/// `f = f_r + ε z_ρ` with `ε = 1/N`, doubling `N` until every sign of
/// `φ(f_r)` is kept and `f` is regular.
fn choose_f(g: &LieAlgebra, f_r: &[Q], z_rho: &[Q]) -> Result<Vec<Q>, LieError> {
    let rs = g.root_system();
    let mut big_n = Q::one();
    for _ in 0..64 {
        let f: Vec<Q> = f_r.iter().zip(z_rho).map(|(a, b)| a + b / &big_n).collect();
        let good = (0..rs.num_positive()).all(|kk| {
            let r = rs.root_q(kk);
            let vf = g.eval(&r, &f);
            let vr = g.eval(&r, f_r);
            vf.is_positive() && (vr.is_zero() || vr.signum() == vf.signum())
        });
        if good {
            return Ok(f);
        }
        big_n *= q(2);
    }
    Err(inconsistent("no regular f near f_r"))
}
