use num_traits::{One, Zero};

use super::LieError;
use crate::linalg::{q, solve, SparseMatrix, SparseVec, Q};
use crate::repmod::GeneratorModule;
use crate::rootdata::RootSystem;

/// Bracket recipe for a non-simple positive root `φ = α_i + β`:
/// `E_φ = e_coef [E_i, E_β]`, `F_φ = f_coef [F_i, F_β]`.
#[derive(Clone, Debug)]
struct Recipe {
    simple: usize,
    beta: usize,
    e_coef: Q,
    f_coef: Q,
}

/// Semisimple Lie algebra on the basis `h_1..h_n, e_φ (φ ∈ Δ₊), e_{−φ}`,
/// with `B(e_φ, e_{−φ}) = 1` and `B` normalized so long roots have
/// squared length 2.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    rs: RootSystem,
    recipes: Vec<Option<Recipe>>,
    scale: Vec<Q>,
    brackets: Vec<Vec<SparseVec>>,
    form: Vec<Vec<Q>>,
}

fn ratio(m: &SparseMatrix, base: &SparseMatrix) -> Option<Q> {
    let (r, c) =
        (0..base.ncols()).find_map(|c| base.column(c)?.iter().next().map(|(r, _)| (r, c)))?;
    let x = m.entry(r, c)? / base.entry(r, c)?;
    m.sub(&base.scaled(&x)).is_zero().then_some(x)
}

impl LieAlgebra {
    pub fn build(rs: &RootSystem) -> Result<Self, LieError> {
        let cm = rs.cartan();
        let n = rs.rank();
        let np = rs.num_positive();

        // Faithful module: in each simple component the fundamental weight
        // of least dimension.
        let mut labels = vec![Q::zero(); n];
        for comp in cm.components() {
            let best = comp
                .iter()
                .copied()
                .min_by_key(|&i| {
                    let mut l = vec![Q::zero(); n];
                    l[i] = Q::one();
                    crate::repmod::weyl_dimension(rs, &rs.from_dynkin_labels(&l)).unwrap()
                })
                .unwrap();
            labels[best] = Q::one();
        }
        let v = GeneratorModule::build(cm, &labels, None, usize::MAX)
            .map_err(|e| LieError::InternalInconsistency(e.to_string()))?;

        let mut e_mats: Vec<SparseMatrix> = Vec::with_capacity(np);
        let mut f_mats: Vec<SparseMatrix> = Vec::with_capacity(np);
        let mut recipes = Vec::with_capacity(np);
        for k in 0..np {
            let phi = rs.root(k);
            if RootSystem::height(&phi) == 1 {
                let i = phi.iter().position(|&x| x == 1).unwrap();
                e_mats.push(v.e(i).clone());
                f_mats.push(v.f(i).clone());
                recipes.push(None);
                continue;
            }
            let (i, beta) = (0..n)
                .find_map(|i| {
                    let mut b = phi.clone();
                    b[i] -= 1;
                    rs.index_of(&b)
                        .filter(|&x| rs.is_positive_index(x))
                        .map(|x| (i, x))
                })
                .expect("non-simple positive root has a simple predecessor");
            let p = rs.string_down(&rs.root(beta), i);
            let e_coef = Q::one() / q(p + 1);
            let e = v.e(i).commutator(&e_mats[beta]).scaled(&e_coef);
            let f0 = v.f(i).commutator(&f_mats[beta]).scaled(&e_coef);
            let mut h_phi = SparseMatrix::zeros(v.dim(), v.dim());
            for (j, c) in rs.coroot_coefficients(k).iter().enumerate() {
                h_phi.add_scaled(v.h(j), c);
            }
            let c = ratio(&e.commutator(&f0), &h_phi).ok_or_else(|| {
                LieError::InternalInconsistency(format!("[E, F] is not a coroot for {phi:?}"))
            })?;
            let f_coef = &e_coef / &c;
            e_mats.push(e);
            f_mats.push(f0.scaled(&c.recip()));
            recipes.push(Some(Recipe {
                simple: i,
                beta,
                e_coef,
                f_coef,
            }));
        }
        let scale: Vec<Q> = (0..np).map(|k| rs.length_sq(k) / q(2)).collect();

        let mut basis: Vec<SparseMatrix> = (0..n).map(|i| v.h(i).clone()).collect();
        basis.extend(e_mats.iter().zip(&scale).map(|(m, s)| m.scaled(s)));
        basis.extend(f_mats);
        let dim = basis.len();

        let weight = |a: usize| -> Vec<i64> {
            if a < n {
                vec![0; n]
            } else {
                rs.root(a - n)
            }
        };
        let diag: Vec<Vec<Q>> = (0..v.dim())
            .map(|r| (0..n).map(|i| v.h(i).entry(r, r).unwrap()).collect())
            .collect();
        let mut brackets = vec![vec![SparseVec::new(); dim]; dim];
        for a in 0..dim {
            for b in (a + 1)..dim {
                let m = basis[a].commutator(&basis[b]);
                let w: Vec<i64> = weight(a)
                    .iter()
                    .zip(weight(b))
                    .map(|(x, y)| x + y)
                    .collect();
                let out: SparseVec = if m.is_zero() {
                    SparseVec::new()
                } else if w.iter().all(|&x| x == 0) {
                    let d: Vec<Q> = (0..v.dim()).map(|r| m.entry(r, r).unwrap()).collect();
                    let c = solve(&diag, &d).ok_or_else(|| {
                        LieError::InternalInconsistency("bracket leaves the Cartan".into())
                    })?;
                    let mut check = SparseMatrix::zeros(v.dim(), v.dim());
                    for (i, x) in c.iter().enumerate() {
                        check.add_scaled(&basis[i], x);
                    }
                    if !m.sub(&check).is_zero() {
                        return Err(LieError::InternalInconsistency(
                            "bracket of opposite root vectors is not in h".into(),
                        ));
                    }
                    SparseVec::from_dense(&c)
                } else if let Some(k) = rs.index_of(&w) {
                    let t = n + k;
                    let c = ratio(&m, &basis[t]).ok_or_else(|| {
                        LieError::InternalInconsistency(format!("bracket not a root vector {w:?}"))
                    })?;
                    SparseVec::unit(t).scaled(&c)
                } else {
                    return Err(LieError::InternalInconsistency(format!(
                        "nonzero bracket of weight {w:?}"
                    )));
                };
                brackets[b][a] = out.scaled(&-Q::one());
                brackets[a][b] = out;
            }
        }

        let mut form = vec![vec![Q::zero(); dim]; dim];
        let inner = rs.inner_matrix();
        for i in 0..n {
            for j in 0..n {
                form[i][j] = q(4) * &inner[i][j] / (&inner[i][i] * &inner[j][j]);
            }
        }
        for k in 0..np {
            form[n + k][n + np + k] = Q::one();
            form[n + np + k][n + k] = Q::one();
        }
        Ok(Self {
            rs: rs.clone(),
            recipes,
            scale,
            brackets,
            form,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        self.rs.rank() + self.rs.num_roots()
    }

    /// Basis index of the root vector for the root with index `k`.
    pub fn root_vector(&self, k: usize) -> usize {
        self.rank() + k
    }

    /// Root index of a basis element, `None` for Cartan elements.
    pub fn basis_root(&self, a: usize) -> Option<usize> {
        a.checked_sub(self.rank())
    }

    pub fn basis_name(&self, a: usize) -> String {
        match self.basis_root(a) {
            None => format!("h{}", a + 1),
            Some(k) => {
                let r = self.rs.root(k);
                let s: Vec<String> = r.iter().map(|x| x.abs().to_string()).collect();
                let sign = if self.rs.is_positive_index(k) {
                    ""
                } else {
                    "-"
                };
                format!("e{sign}[{}]", s.join(","))
            }
        }
    }

    pub fn bracket(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a][b]
    }

    pub fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = SparseVec::new();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                out.add_scaled(&self.brackets[a][b], &(xa * yb));
            }
        }
        out.to_dense(self.dim())
    }

    pub fn form_basis(&self, a: usize, b: usize) -> &Q {
        &self.form[a][b]
    }

    pub fn form_matrix(&self) -> &[Vec<Q>] {
        &self.form
    }

    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if !yb.is_zero() && !self.form[a][b].is_zero() {
                    s += xa * &self.form[a][b] * yb;
                }
            }
        }
        s
    }

    /// Matrix of `ad x`, column `b` holding `[x, x_b]`.
    pub fn ad(&self, x: &[Q]) -> Vec<Vec<Q>> {
        let d = self.dim();
        let mut m = vec![vec![Q::zero(); d]; d];
        for b in 0..d {
            let mut unit = vec![Q::zero(); d];
            unit[b] = Q::one();
            for (r, v) in self.bracket_vec(x, &unit).into_iter().enumerate() {
                m[r][b] = v;
            }
        }
        m
    }

    pub fn unit(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[a] = Q::one();
        v
    }

    /// Embeds coefficients on `h_1..h_n` into g.
    pub fn cartan_element(&self, coeffs: &[Q]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[..self.rank()].clone_from_slice(coeffs);
        v
    }

    /// `ν(h)` for `ν` in simple-root coordinates and `h` in coroot
    /// coefficients.
    pub fn eval(&self, nu: &[Q], h: &[Q]) -> Q {
        self.rs
            .dynkin_labels(nu)
            .iter()
            .zip(h)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Coroot coefficients of `z_ν ∈ h` with `B(z_ν, h) = ν(h)`.
    pub fn dual_cartan(&self, nu: &[Q]) -> Vec<Q> {
        let n = self.rank();
        let g: Vec<Vec<Q>> = (0..n).map(|i| self.form[i][..n].to_vec()).collect();
        solve(&g, &self.rs.dynkin_labels(nu)).expect("form on h is nonsingular")
    }

    /// Matrices of every basis element on a module given by generators.
    pub fn represent(&self, v: &GeneratorModule) -> Vec<SparseMatrix> {
        let n = self.rank();
        let np = self.rs.num_positive();
        let mut e: Vec<SparseMatrix> = Vec::with_capacity(np);
        let mut f: Vec<SparseMatrix> = Vec::with_capacity(np);
        for (k, recipe) in self.recipes.iter().enumerate() {
            match recipe {
                None => {
                    let i = self.rs.root(k).iter().position(|&x| x == 1).unwrap();
                    e.push(v.e(i).clone());
                    f.push(v.f(i).clone());
                }
                Some(r) => {
                    e.push(v.e(r.simple).commutator(&e[r.beta]).scaled(&r.e_coef));
                    f.push(v.f(r.simple).commutator(&f[r.beta]).scaled(&r.f_coef));
                }
            }
        }
        let mut out: Vec<SparseMatrix> = (0..n).map(|i| v.h(i).clone()).collect();
        out.extend(e.iter().zip(&self.scale).map(|(m, s)| m.scaled(s)));
        out.extend(f);
        out
    }
}
