//! Exterior and Clifford products over the ordered basis of p, the cubic
//! term, the maps `ν*` and `σ*`, and the spin ideal `L = C(p)u`.
//!
//! Elements are stored in the exterior basis: a monomial is a strictly
//! increasing index list and stands for `b_{i1} ∧ … ∧ b_{ik}`. The Clifford
//! relation is `zw + wz = 2B(z, w)`, so for vectors `zw = z∧w + B(z, w)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::liestruct::LiePair;
use crate::linalg::{determinant, is_zero_vec, q, SparseMatrix, SparseVec, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("BasisMismatch: elements over bases of dimension {0} and {1}")]
    BasisMismatch(usize, usize),
    #[error("NotInR: element is not in r")]
    NotInR,
    #[error("NotInHp: element is not in h_p")]
    NotInHp,
}

pub type Monomial = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    dim: usize,
    terms: BTreeMap<Monomial, Q>,
}

/// Sorts `idx`, returning the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &[usize]) -> Option<(Monomial, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl CliffordElement {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Q) -> Self {
        let mut e = Self::zero(dim);
        e.add_term(Vec::new(), c);
        e
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, Q::one())
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        Self::monomial(dim, &[i], Q::one())
    }

    /// `c · b_{i1} ∧ … ∧ b_{ik}` for indices in any order.
    pub fn monomial(dim: usize, idx: &[usize], c: Q) -> Self {
        assert!(idx.iter().all(|&i| i < dim), "index out of range");
        let mut e = Self::zero(dim);
        if let Some((m, s)) = sort_sign(idx) {
            e.add_term(m, if s < 0 { -c } else { c });
        }
        e
    }

    /// Degree-one element with the given coordinates.
    pub fn vector(coords: &[Q]) -> Self {
        let mut e = Self::zero(coords.len());
        for (i, c) in coords.iter().enumerate() {
            e.add_term(vec![i], c.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[usize]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exterior degrees with a nonzero component.
    pub fn grading(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Vec::len).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn grade(&self, k: usize) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.len() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        debug_assert_eq!(self.dim, other.dim);
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.dim);
        out.add_scaled(self, c);
        out
    }

    /// `b_i ∧ self`.
    pub fn wedge_basis(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            if let Err(pos) = m.binary_search(&i) {
                let mut m2 = m.clone();
                m2.insert(pos, i);
                out.add_term(m2, if pos % 2 == 0 { c.clone() } else { -c });
            }
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, CliffordError> {
        check_dims(self, other)?;
        let mut out = Self::zero(self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((m, s)) = sort_sign(&idx) {
                    let c = x * y;
                    out.add_term(m, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product with the functional `x ↦ Σ φ_j x_j`, an odd
    /// derivation of the exterior algebra.
    pub fn contract(&self, phi: &[Q]) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            for (j, &i) in m.iter().enumerate() {
                if phi[i].is_zero() {
                    continue;
                }
                let mut m2 = m.clone();
                m2.remove(j);
                let x = c * &phi[i];
                out.add_term(m2, if j % 2 == 0 { x } else { -x });
            }
        }
        out
    }

    /// Indices of the basis vectors occurring in some monomial.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.terms.keys().flatten().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

fn check_dims(a: &CliffordElement, b: &CliffordElement) -> Result<(), CliffordError> {
    if a.dim != b.dim {
        return Err(CliffordError::BasisMismatch(a.dim, b.dim));
    }
    Ok(())
}

/// Clifford algebra of a space with a symmetric bilinear form, given by
/// its Gram matrix on the ordered basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordAlgebra {
    gram: Vec<Vec<Q>>,
}

impl CliffordAlgebra {
    pub fn new(gram: Vec<Vec<Q>>) -> Self {
        for (i, row) in gram.iter().enumerate() {
            assert_eq!(row.len(), gram.len(), "Gram matrix must be square");
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, gram[j][i], "Gram matrix must be symmetric");
            }
        }
        Self { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    fn check(&self, a: &CliffordElement) -> Result<(), CliffordError> {
        if a.dim != self.dim() {
            return Err(CliffordError::BasisMismatch(a.dim, self.dim()));
        }
        Ok(())
    }

    /// `ι(b_i)`, contraction with `B(b_i, ·)`.
    pub fn contract_basis(&self, i: usize, x: &CliffordElement) -> CliffordElement {
        x.contract(&self.gram[i])
    }

    /// Clifford product `b_i · x = b_i ∧ x + ι(b_i) x`.
    pub fn basis_mul(&self, i: usize, x: &CliffordElement) -> CliffordElement {
        let mut out = x.wedge_basis(i);
        out.add_scaled(&self.contract_basis(i, x), &Q::one());
        out
    }

    /// Left Clifford multiplication by the exterior monomial `m`, using
    /// `b ∧ w = b·w − ι(b)w` on its first factor.
    fn monomial_mul(&self, m: &[usize], x: &CliffordElement) -> CliffordElement {
        let Some((&i, rest)) = m.split_first() else {
            return x.clone();
        };
        let mut out = self.basis_mul(i, &self.monomial_mul(rest, x));
        let tail = CliffordElement::monomial(self.dim(), rest, Q::one());
        for (m2, c) in self.contract_basis(i, &tail).terms {
            out.add_scaled(&self.monomial_mul(&m2, x), &-c);
        }
        out
    }

    pub fn product(
        &self,
        a: &CliffordElement,
        b: &CliffordElement,
    ) -> Result<CliffordElement, CliffordError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = CliffordElement::zero(self.dim());
        for (m, c) in &a.terms {
            out.add_scaled(&self.monomial_mul(m, b), c);
        }
        Ok(out)
    }

    pub fn commutator(
        &self,
        a: &CliffordElement,
        b: &CliffordElement,
    ) -> Result<CliffordElement, CliffordError> {
        Ok(self.product(a, b)?.sub(&self.product(b, a)?))
    }

    /// Extension of the form to the exterior algebra: distinct degrees are
    /// orthogonal and within a degree it is `det(B(w_i, z_j))`.
    pub fn gram_pairing(
        &self,
        w: &CliffordElement,
        z: &CliffordElement,
    ) -> Result<Q, CliffordError> {
        self.check(w)?;
        self.check(z)?;
        let mut s = Q::zero();
        for (a, x) in &w.terms {
            for (b, y) in &z.terms {
                if a.len() != b.len() {
                    continue;
                }
                let m: Vec<Vec<Q>> = a
                    .iter()
                    .map(|&i| b.iter().map(|&j| self.gram[i][j].clone()).collect())
                    .collect();
                s += x * y * determinant(&m);
            }
        }
        Ok(s)
    }
}

/// `C(p)` on the ordered basis `{b_i}` of a pair, with the dual basis
/// `{d_i}` in `b`-coordinates.
#[derive(Clone, Debug)]
pub struct PClifford {
    pub alg: CliffordAlgebra,
    pub dual: Vec<Vec<Q>>,
}

impl PClifford {
    pub fn new(pair: &LiePair) -> Self {
        let g = &pair.g;
        let gram: Vec<Vec<Q>> = pair
            .p_basis
            .iter()
            .map(|x| pair.p_basis.iter().map(|y| g.form(x, y)).collect())
            .collect();
        let dual = pair.p_dual.iter().map(|d| pair.p_coords(d)).collect();
        Self {
            alg: CliffordAlgebra::new(gram),
            dual,
        }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn b(&self, i: usize) -> CliffordElement {
        CliffordElement::basis(self.dim(), i)
    }

    pub fn d(&self, i: usize) -> CliffordElement {
        CliffordElement::vector(&self.dual[i])
    }
}

/// Coordinates of `y ∈ g` on the p-basis, or `None` when `y ∉ p`.
fn p_vector(pair: &LiePair, y: &[Q]) -> Option<Vec<Q>> {
    let c = pair.p_coords(y);
    let mut back = vec![Q::zero(); y.len()];
    for (ci, b) in c.iter().zip(&pair.p_basis) {
        if ci.is_zero() {
            continue;
        }
        for (t, x) in back.iter_mut().zip(b) {
            *t += ci * x;
        }
    }
    (back == y).then_some(c)
}

/// Element of `C(p)` for a vector of g lying in p.
pub fn p_element(pair: &LiePair, y: &[Q]) -> Option<CliffordElement> {
    p_vector(pair, y).map(|c| CliffordElement::vector(&c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicTerm {
    pub v: CliffordElement,
    pub v0: CliffordElement,
    pub v1: CliffordElement,
}

/// `v = Σ_{i<j<k} c_ijk b_i∧b_j∧b_k` with `c_ijk = −½ B([d_i, d_j], d_k)`.
pub fn cubic_term(pair: &LiePair) -> CubicTerm {
    let n = pair.dim_p();
    let g = &pair.g;
    let p0 = pair.blocks.p0();
    let half = Q::new(1.into(), 2.into());
    let mut v = CliffordElement::zero(n);
    let mut v0 = CliffordElement::zero(n);
    let mut v1 = CliffordElement::zero(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let br = g.bracket_vec(&pair.p_dual[i], &pair.p_dual[j]);
            if is_zero_vec(&br) {
                continue;
            }
            // B(x, d_k) is the b_k-coordinate of the p-component of x.
            let coords = pair.p_coords(&br);
            for (k, ck) in coords.iter().enumerate().skip(j + 1) {
                if ck.is_zero() {
                    continue;
                }
                let wsum: Vec<Q> = (0..pair.dim_hr())
                    .map(|t| &pair.p_weights[i][t] + &pair.p_weights[j][t] + &pair.p_weights[k][t])
                    .collect();
                assert!(is_zero_vec(&wsum), "cubic term with nonzero total weight");
                let c = -(&half * ck);
                let m = vec![i, j, k];
                v.add_term(m.clone(), c.clone());
                if [i, j, k].iter().all(|x| p0.contains(x)) {
                    v0.add_term(m, c);
                } else {
                    v1.add_term(m, c);
                }
            }
        }
    }
    CubicTerm { v, v0, v1 }
}

/// `ν*(x) = ¼ Σ_i [x, b_i] ∧ d_i` for `x ∈ r`.
pub fn nu_star(pair: &LiePair, pc: &PClifford, x: &[Q]) -> Result<CliffordElement, CliffordError> {
    if !is_zero_vec(&pair.p_coords(x)) {
        return Err(CliffordError::NotInR);
    }
    let n = pair.dim_p();
    let quarter = Q::new(1.into(), 4.into());
    let mut out = CliffordElement::zero(n);
    for i in 0..n {
        let br = pair.g.bracket_vec(x, &pair.p_basis[i]);
        if is_zero_vec(&br) {
            continue;
        }
        let a = CliffordElement::vector(&pair.p_coords(&br));
        let w = a.wedge(&pc.d(i)).expect("same basis");
        out.add_scaled(&w, &quarter);
    }
    Ok(out)
}

/// `σ*(y) = ½ Σ_{φ ∈ Δ₊⁰} φ(y) e_φ ∧ e_{−φ}` for `y ∈ h_p`.
pub fn sigma_star(pair: &LiePair, y: &[Q]) -> Result<CliffordElement, CliffordError> {
    let rank = pair.g.rank();
    let in_h = y[rank..].iter().all(Zero::is_zero);
    if !in_h || crate::linalg::coords_in(&pair.h_p, &y[..rank]).is_none() {
        return Err(CliffordError::NotInHp);
    }
    let b = &pair.blocks;
    let rs = pair.g.root_system();
    let half = Q::new(1.into(), 2.into());
    let mut out = CliffordElement::zero(pair.dim_p());
    for (t, &k) in pair.delta0_pos.iter().enumerate() {
        let c = &half * pair.g.eval(&rs.root_q(k), &y[..rank]);
        out.add_term(vec![b.n0.start + t, b.n0_minus.start + t], c);
    }
    Ok(out)
}

/// The left ideal `L = C(p)u`, realized on `∧(m_p⁻ ⊕ h_p)` through
/// `w ↦ w·u`.
///
/// With `q = m_p⁻ ⊕ h_p`, a vector `x = x_q + x₊` (`x₊ ∈ m_p`) acts by
/// `x·(wu) = (x_q w)u + 2(ι(x₊)w)u`, because `m_p` anticommutes with `h_p`,
/// pairs only with `m_p⁻` and kills `u`.
///
/// The coefficient algebra multiplying `u` is `C(h_p)`, never `C(h_r)`:
/// Clifford generators have to lie in p. Sources that write `C(h_r)` for
/// this factor are read as meaning `h_p`.
#[derive(Clone, Debug)]
pub struct SpinIdeal {
    /// `u = u₀u₊` in `C(p)`, factors in root order. Another order only
    /// changes `u` by a sign, which flips signs in cocycle witnesses.
    pub u: CliffordElement,
    /// p-indices spanning `q`: the `m_p⁻` basis, then the `h_p` basis.
    pub q_indices: Vec<usize>,
    /// Basis of L as monomials in positions of `q_indices`.
    pub basis_monomials: Vec<Monomial>,
    q_alg: CliffordAlgebra,
    /// For each p-index: its position in q, or for an `m_p` index the
    /// functional `2B(b_i, ·)` on q.
    roles: Vec<Role>,
    index: HashMap<Monomial, usize>,
    /// Number of leading q positions that belong to `m_p⁻`.
    n_minus: usize,
}

#[derive(Clone, Debug)]
enum Role {
    InQ(usize),
    Plus(Vec<Q>),
}

impl SpinIdeal {
    pub fn build(pair: &LiePair, pc: &PClifford) -> Self {
        let b = &pair.blocks;
        let m_minus = b.m_p_minus();
        let q_indices: Vec<usize> = m_minus.iter().copied().chain(b.hp.clone()).collect();
        let nq = q_indices.len();
        let gram = pc.alg.gram();
        let q_gram: Vec<Vec<Q>> = q_indices
            .iter()
            .map(|&i| q_indices.iter().map(|&j| gram[i][j].clone()).collect())
            .collect();
        let mut roles = Vec::with_capacity(pc.dim());
        for i in 0..pc.dim() {
            match q_indices.iter().position(|&x| x == i) {
                Some(pos) => roles.push(Role::InQ(pos)),
                None => roles.push(Role::Plus(
                    q_indices.iter().map(|&j| q(2) * &gram[i][j]).collect(),
                )),
            }
        }
        let mut basis_monomials: Vec<Monomial> = (0u64..(1u64 << nq))
            .map(|mask| (0..nq).filter(|k| mask >> k & 1 == 1).collect())
            .collect();
        basis_monomials.sort_by(|a: &Monomial, b: &Monomial| a.len().cmp(&b.len()).then(a.cmp(b)));
        let index = basis_monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let plus: Vec<usize> = b.m_p();
        let u = CliffordElement::monomial(pc.dim(), &plus, Q::one());
        Self {
            u,
            q_indices,
            basis_monomials,
            q_alg: CliffordAlgebra::new(q_gram),
            roles,
            index,
            n_minus: m_minus.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_monomials.len()
    }

    /// Basis vector of L as an element of `∧q`.
    pub fn basis_element(&self, k: usize) -> CliffordElement {
        CliffordElement::monomial(self.q_alg.dim(), &self.basis_monomials[k], Q::one())
    }

    pub fn to_coords(&self, w: &CliffordElement) -> SparseVec {
        let mut out = SparseVec::new();
        for (m, c) in w.terms() {
            out.add_term(self.index[m], c.clone());
        }
        out
    }

    pub fn from_coords(&self, v: &SparseVec) -> CliffordElement {
        let mut out = CliffordElement::zero(self.q_alg.dim());
        for (k, c) in v.iter() {
            out.add_term(self.basis_monomials[k].clone(), c.clone());
        }
        out
    }

    /// Whether the basis monomial has an `m_p⁻` factor.
    pub fn has_minus_factor(&self, k: usize) -> bool {
        self.basis_monomials[k].iter().any(|&p| p < self.n_minus)
    }

    /// Whether the basis monomial lies in `C(p⁰)u`.
    pub fn in_l0(&self, pair: &LiePair, k: usize) -> bool {
        let p0 = pair.blocks.p0();
        self.basis_monomials[k]
            .iter()
            .all(|&p| p0.contains(&self.q_indices[p]))
    }

    fn act_basis(&self, i: usize, w: &CliffordElement) -> CliffordElement {
        match &self.roles[i] {
            Role::InQ(pos) => self.q_alg.basis_mul(*pos, w),
            Role::Plus(phi) => w.contract(phi),
        }
    }

    fn act_monomial(&self, pc: &PClifford, m: &[usize], w: &CliffordElement) -> CliffordElement {
        let Some((&i, rest)) = m.split_first() else {
            return w.clone();
        };
        let mut out = self.act_basis(i, &self.act_monomial(pc, rest, w));
        let tail = CliffordElement::monomial(pc.dim(), rest, Q::one());
        for (m2, c) in pc.alg.contract_basis(i, &tail).terms() {
            out.add_scaled(&self.act_monomial(pc, m2, w), &-c);
        }
        out
    }

    /// Left multiplication of an element of `C(p)` on an element of L.
    pub fn act(&self, pc: &PClifford, x: &CliffordElement, w: &CliffordElement) -> CliffordElement {
        let mut out = CliffordElement::zero(self.q_alg.dim());
        for (m, c) in x.terms() {
            out.add_scaled(&self.act_monomial(pc, m, w), c);
        }
        out
    }

    /// Matrix of left multiplication by `x` on the basis of L.
    pub fn matrix(&self, pc: &PClifford, x: &CliffordElement) -> SparseMatrix {
        let cols = (0..self.dim())
            .map(|k| Some(self.to_coords(&self.act(pc, x, &self.basis_element(k)))))
            .collect();
        SparseMatrix::from_columns(self.dim(), cols)
    }

    /// An element of `∧p` supported on `q`, rewritten on q positions.
    pub fn from_p(&self, x: &CliffordElement) -> Option<CliffordElement> {
        let mut out = CliffordElement::zero(self.q_alg.dim());
        for (m, c) in x.terms() {
            let idx: Option<Vec<usize>> = m
                .iter()
                .map(|i| match self.roles[*i] {
                    Role::InQ(pos) => Some(pos),
                    Role::Plus(_) => None,
                })
                .collect();
            out.add_scaled(
                &CliffordElement::monomial(self.q_alg.dim(), &idx?, Q::one()),
                c,
            );
        }
        Some(out)
    }

    /// Basis indices of `C(h_p)u`.
    pub fn top_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| !self.has_minus_factor(k))
            .collect()
    }

    /// The element `w·u` of `C(p)` for `w ∈ ∧q`.
    pub fn embed(&self, pc: &PClifford, w: &CliffordElement) -> CliffordElement {
        let mut lifted = CliffordElement::zero(pc.dim());
        for (m, c) in w.terms() {
            let idx: Vec<usize> = m.iter().map(|&p| self.q_indices[p]).collect();
            lifted.add_scaled(&CliffordElement::monomial(pc.dim(), &idx, Q::one()), c);
        }
        pc.alg.product(&lifted, &self.u).expect("same basis")
    }
}

/// Weights of the basis of L under `ad h_r` (values on the `h_r` basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGrading {
    pub weights: Vec<Vec<Q>>,
    pub spaces: BTreeMap<Vec<Q>, Vec<usize>>,
}

pub fn weight_grading(ideal: &SpinIdeal, pair: &LiePair) -> WeightGrading {
    let mut weights = Vec::with_capacity(ideal.dim());
    let mut spaces: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
    for (k, m) in ideal.basis_monomials.iter().enumerate() {
        let mut w = pair.rho.rho_p.clone();
        for &pos in m {
            let i = ideal.q_indices[pos];
            for (a, b) in w.iter_mut().zip(&pair.p_weights[i]) {
                *a += b;
            }
        }
        spaces.entry(w.clone()).or_default().push(k);
        weights.push(w);
    }
    WeightGrading { weights, spaces }
}
