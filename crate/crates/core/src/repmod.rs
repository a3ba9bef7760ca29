//! Highest-weight modules with exact action matrices.
//!
//! Modules are grown level by level from the highest-weight vector. A
//! candidate `f_i b` at the next level is identified with its signature
//! `(e_j f_i b)_j`, computed from `e_j f_i = f_i e_j + δ_ij h_i`. Below the
//! highest weight a vector is zero in the irreducible quotient exactly when
//! every `e_j` kills it, so row reduction of the signatures in each weight
//! space yields the quotient by the maximal submodule for any rational `λ`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liestruct::LieAlgebra;
use crate::linalg::{nullspace, q, rank, rref, SparseMatrix, SparseVec, Q};
use crate::rootdata::{CartanMatrix, RootSystem};

pub const DEFAULT_DIM_CAP: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("NotDominantIntegral: {0}")]
    NotDominantIntegral(String),
    #[error("DimensionCapExceeded: dimension {dim} exceeds cap {cap}")]
    DimensionCapExceeded { dim: u128, cap: usize },
    #[error("DepthLeak: {0}")]
    DepthLeak(String),
    #[error("NotSemisimpleAction: {0}")]
    NotSemisimpleAction(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleKind {
    IrreducibleFinite,
    TruncatedVermaIrreducibleQuotient,
}

/// A highest-weight module given by the Chevalley generators only.
#[derive(Clone, Debug)]
pub struct GeneratorModule {
    labels: Vec<Q>,
    drops: Vec<Vec<i64>>,
    depth: Vec<usize>,
    e: Vec<SparseMatrix>,
    f: Vec<SparseMatrix>,
    h: Vec<SparseMatrix>,
    depth_cap: Option<usize>,
}

impl GeneratorModule {
    /// Builds the irreducible quotient of the Verma module with
    /// `λ(h_i) = labels[i]`, up to depth `depth_cap` when given.
    pub fn build(
        cm: &CartanMatrix,
        labels: &[Q],
        depth_cap: Option<usize>,
        dim_cap: usize,
    ) -> Result<Self, RepError> {
        let n = cm.rank();
        let value = |drop: &[i64], i: usize| -> Q {
            let mut x = labels[i].clone();
            for (j, &d) in drop.iter().enumerate() {
                x -= q(d * cm.get(i, j));
            }
            x
        };
        let mut drops = vec![vec![0i64; n]];
        let mut depth = vec![0usize];
        let mut e_cols: Vec<Vec<SparseVec>> = vec![vec![SparseVec::new(); n]];
        let mut f_cols: Vec<Vec<Option<SparseVec>>> = vec![vec![None; n]];
        let mut level = vec![0usize];
        let mut k = 0usize;
        while !level.is_empty() && depth_cap.is_none_or(|cap| k < cap) {
            let mut groups: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
            for &b in &level {
                for i in 0..n {
                    let mut d = drops[b].clone();
                    d[i] += 1;
                    groups.entry(d).or_default().push((b, i));
                }
            }
            let mut next = Vec::new();
            for (drop, cands) in groups {
                let sigs: Vec<BTreeMap<(usize, usize), Q>> = cands
                    .iter()
                    .map(|&(b, i)| {
                        let mut s = BTreeMap::new();
                        for j in 0..n {
                            let mut v = SparseVec::new();
                            for (c, x) in e_cols[b][j].iter() {
                                let fc = f_cols[c][i].as_ref().expect("lower level is complete");
                                v.add_scaled(fc, x);
                            }
                            if i == j {
                                v.add_term(b, value(&drops[b], i));
                            }
                            for (idx, x) in v.iter() {
                                s.insert((j, idx), x.clone());
                            }
                        }
                        s
                    })
                    .collect();
                let keys: BTreeSet<(usize, usize)> =
                    sigs.iter().flat_map(|s| s.keys().copied()).collect();
                let key_row: HashMap<(usize, usize), usize> =
                    keys.iter().enumerate().map(|(r, &k)| (k, r)).collect();
                let mut m = vec![vec![Q::zero(); cands.len()]; keys.len()];
                for (c, s) in sigs.iter().enumerate() {
                    for (key, x) in s {
                        m[key_row[key]][c] = x.clone();
                    }
                }
                let pivots = rref(&mut m);
                let base = drops.len();
                for &p in &pivots {
                    let mut ecol = vec![SparseVec::new(); n];
                    for (&(j, idx), x) in &sigs[p] {
                        ecol[j].add_term(idx, x.clone());
                    }
                    next.push(drops.len());
                    drops.push(drop.clone());
                    depth.push(k + 1);
                    e_cols.push(ecol);
                    f_cols.push(vec![None; n]);
                }
                for (c, &(b, i)) in cands.iter().enumerate() {
                    let col: SparseVec = (0..pivots.len())
                        .filter(|&r| !m[r][c].is_zero())
                        .map(|r| (base + r, m[r][c].clone()))
                        .collect();
                    f_cols[b][i] = Some(col);
                }
            }
            if drops.len() > dim_cap {
                return Err(RepError::DimensionCapExceeded {
                    dim: drops.len() as u128,
                    cap: dim_cap,
                });
            }
            level = next;
            k += 1;
        }
        let dim = drops.len();
        let e = (0..n)
            .map(|j| {
                SparseMatrix::from_columns(dim, e_cols.iter().map(|c| Some(c[j].clone())).collect())
            })
            .collect();
        let f = (0..n)
            .map(|i| SparseMatrix::from_columns(dim, f_cols.iter().map(|c| c[i].clone()).collect()))
            .collect();
        let h = (0..n)
            .map(|i| {
                let d: Vec<Q> = drops.iter().map(|dr| value(dr, i)).collect();
                SparseMatrix::diagonal(&d)
            })
            .collect();
        Ok(Self {
            labels: labels.to_vec(),
            drops,
            depth,
            e,
            f,
            h,
            depth_cap,
        })
    }

    pub fn dim(&self) -> usize {
        self.drops.len()
    }

    pub fn labels(&self) -> &[Q] {
        &self.labels
    }

    pub fn drop(&self, v: usize) -> &[i64] {
        &self.drops[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn depth_cap(&self) -> Option<usize> {
        self.depth_cap
    }

    pub fn e(&self, i: usize) -> &SparseMatrix {
        &self.e[i]
    }

    pub fn f(&self, i: usize) -> &SparseMatrix {
        &self.f[i]
    }

    pub fn h(&self, i: usize) -> &SparseMatrix {
        &self.h[i]
    }

    /// Basis indices grouped by `λ − μ` in simple-root coordinates.
    pub fn weight_spaces(&self) -> BTreeMap<Vec<i64>, Vec<usize>> {
        let mut out: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (v, d) in self.drops.iter().enumerate() {
            out.entry(d.clone()).or_default().push(v);
        }
        out
    }
}

/// A highest-weight g-module with matrices for every basis element of g.
#[derive(Clone, Debug)]
pub struct WeightModule {
    lambda: Vec<Q>,
    gens: GeneratorModule,
    actions: Vec<SparseMatrix>,
    kind: ModuleKind,
}

impl WeightModule {
    pub fn lambda(&self) -> &[Q] {
        &self.lambda
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.gens.dim()
    }

    pub fn generators(&self) -> &GeneratorModule {
        &self.gens
    }

    /// Action of the g-basis element with index `a`.
    pub fn action(&self, a: usize) -> &SparseMatrix {
        &self.actions[a]
    }

    pub fn actions(&self) -> &[SparseMatrix] {
        &self.actions
    }

    pub fn depth(&self, v: usize) -> usize {
        self.gens.depth(v)
    }

    pub fn depth_cap(&self) -> Option<usize> {
        self.gens.depth_cap()
    }

    /// Weight of basis vector `v` in simple-root coordinates.
    pub fn weight(&self, v: usize) -> Vec<Q> {
        self.lambda
            .iter()
            .zip(self.gens.drop(v))
            .map(|(l, &d)| l - q(d))
            .collect()
    }

    /// Action of an arbitrary element of g given in basis coordinates.
    pub fn act_element(&self, x: &[Q]) -> SparseMatrix {
        let n = self.dim();
        let mut m = SparseMatrix::zeros(n, n);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(&self.actions[a], c);
            }
        }
        m
    }
}

/// Finite-dimensional irreducible module with highest weight `λ`
/// (simple-root coordinates).
pub fn build_irrep(g: &LieAlgebra, lambda: &[Q], dim_cap: usize) -> Result<WeightModule, RepError> {
    let rs = g.root_system();
    let predicted = weyl_dimension(rs, lambda)?;
    if predicted > dim_cap as u128 {
        return Err(RepError::DimensionCapExceeded {
            dim: predicted,
            cap: dim_cap,
        });
    }
    let labels = rs.dynkin_labels(lambda);
    let gens = GeneratorModule::build(rs.cartan(), &labels, None, dim_cap)?;
    let actions = g.represent(&gens);
    Ok(WeightModule {
        lambda: lambda.to_vec(),
        gens,
        actions,
        kind: ModuleKind::IrreducibleFinite,
    })
}

/// Irreducible quotient of the Verma module, truncated at depth `n`.
/// Lowering actions out of depth `n` are unknown.
pub fn build_truncated_verma(
    g: &LieAlgebra,
    lambda: &[Q],
    depth: usize,
    dim_cap: usize,
) -> Result<WeightModule, RepError> {
    let rs = g.root_system();
    let labels = rs.dynkin_labels(lambda);
    let gens = GeneratorModule::build(rs.cartan(), &labels, Some(depth), dim_cap)?;
    let actions = g.represent(&gens);
    Ok(WeightModule {
        lambda: lambda.to_vec(),
        gens,
        actions,
        kind: ModuleKind::TruncatedVermaIrreducibleQuotient,
    })
}

/// `Π (λ+ρ, φ)/(ρ, φ)` over the positive roots.
pub fn weyl_dimension(rs: &RootSystem, lambda: &[Q]) -> Result<u128, RepError> {
    if !rs.is_dominant_integral(lambda) {
        return Err(RepError::NotDominantIntegral(format!(
            "labels {:?}",
            crate::linalg::fmt_vec(&rs.dynkin_labels(lambda))
        )));
    }
    let shifted: Vec<Q> = lambda.iter().zip(rs.rho()).map(|(a, b)| a + b).collect();
    let mut num = Q::one();
    for k in 0..rs.num_positive() {
        let phi = rs.root_q(k);
        num *= rs.inner(&shifted, &phi) / rs.inner(rs.rho(), &phi);
    }
    debug_assert!(num.is_integer());
    Ok(num.to_integer().try_into().expect("dimension fits in u128"))
}

/// Number of ways to write `drop` as a sum of positive roots.
pub fn partition_function(rs: &RootSystem, drop: &[i64]) -> u128 {
    fn go(
        roots: &[Vec<i64>],
        k: usize,
        rest: Vec<i64>,
        memo: &mut HashMap<(usize, Vec<i64>), u128>,
    ) -> u128 {
        if rest.iter().all(|&x| x == 0) {
            return 1;
        }
        if k == roots.len() || rest.iter().any(|&x| x < 0) {
            return 0;
        }
        if let Some(&v) = memo.get(&(k, rest.clone())) {
            return v;
        }
        let mut total = 0;
        let mut cur = rest.clone();
        while cur.iter().all(|&x| x >= 0) {
            total += go(roots, k + 1, cur.clone(), memo);
            for (c, r) in cur.iter_mut().zip(&roots[k]) {
                *c -= r;
            }
        }
        memo.insert((k, rest), total);
        total
    }
    go(rs.positive_roots(), 0, drop.to_vec(), &mut HashMap::new())
}

/// Gram matrix of the Shapovalov form on one weight space of the Verma
/// module, computed on the spanning set of lowering words.
#[derive(Clone, Debug)]
pub struct ShapovalovBlock {
    pub drop: Vec<i64>,
    pub words: Vec<Vec<usize>>,
    pub gram: Vec<Vec<Q>>,
    pub verma_dim: u128,
    pub rank: usize,
}

impl ShapovalovBlock {
    pub fn radical_dim(&self) -> u128 {
        self.verma_dim - self.rank as u128
    }
}

#[derive(Clone, Debug)]
pub struct ShapovalovForm {
    pub blocks: Vec<ShapovalovBlock>,
}

/// Shapovalov form up to depth `depth`, using `⟨f_i w, w'⟩ = ⟨w, e_i w'⟩`.
pub fn shapovalov(rs: &RootSystem, lambda: &[Q], depth: usize) -> ShapovalovForm {
    let n = rs.rank();
    let labels = rs.dynkin_labels(lambda);
    let cm = rs.cartan();
    let mut by_drop: BTreeMap<Vec<i64>, Vec<Vec<usize>>> = BTreeMap::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for w in &layer {
            let mut d = vec![0i64; n];
            for &i in w {
                d[i] += 1;
            }
            by_drop.entry(d).or_default().push(w.clone());
            for i in 0..n {
                let mut x = vec![i];
                x.extend_from_slice(w);
                next.push(x);
            }
        }
        layer = next;
    }
    // e_i f_{j1}..f_{jk} v = Σ_{p: j_p = i} (λ − drop(tail))(h_i) f_{J∖p} v
    let e_word = |i: usize, w: &[usize]| -> Vec<(Vec<usize>, Q)> {
        let mut out = Vec::new();
        for p in 0..w.len() {
            if w[p] != i {
                continue;
            }
            let mut val = labels[i].clone();
            for &j in &w[p + 1..] {
                val -= q(cm.get(i, j));
            }
            if !val.is_zero() {
                let mut rest = w[..p].to_vec();
                rest.extend_from_slice(&w[p + 1..]);
                out.push((rest, val));
            }
        }
        out
    };
    let mut memo: HashMap<(Vec<usize>, Vec<usize>), Q> = HashMap::new();
    fn pair(
        a: &[usize],
        b: &[usize],
        e_word: &dyn Fn(usize, &[usize]) -> Vec<(Vec<usize>, Q)>,
        memo: &mut HashMap<(Vec<usize>, Vec<usize>), Q>,
    ) -> Q {
        if a.is_empty() {
            return if b.is_empty() { Q::one() } else { Q::zero() };
        }
        if let Some(v) = memo.get(&(a.to_vec(), b.to_vec())) {
            return v.clone();
        }
        let mut total = Q::zero();
        for (rest, c) in e_word(a[0], b) {
            total += c * pair(&a[1..], &rest, e_word, memo);
        }
        memo.insert((a.to_vec(), b.to_vec()), total.clone());
        total
    }
    let blocks = by_drop
        .into_iter()
        .map(|(drop, words)| {
            let gram: Vec<Vec<Q>> = words
                .iter()
                .map(|a| {
                    words
                        .iter()
                        .map(|b| pair(a, b, &e_word, &mut memo))
                        .collect()
                })
                .collect();
            let rank = rank(&gram);
            ShapovalovBlock {
                verma_dim: partition_function(rs, &drop),
                drop,
                words,
                gram,
                rank,
            }
        })
        .collect();
    ShapovalovForm { blocks }
}

/// Root data of r on a basis of `h_r`: the inverse Gram matrix of `B` on
/// `h_r` (the form on `h_r*`) and the positive roots of r as value vectors.
#[derive(Clone, Debug)]
pub struct RRootData {
    pub dual_form: Vec<Vec<Q>>,
    pub positive_roots: Vec<Vec<Q>>,
}

impl RRootData {
    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                s += x * &self.dual_form[i][j] * y;
            }
        }
        s
    }

    pub fn rho(&self) -> Vec<Q> {
        let k = self.dual_form.len();
        let mut out = vec![Q::zero(); k];
        for r in &self.positive_roots {
            for (o, x) in out.iter_mut().zip(r) {
                *o += x;
            }
        }
        out.iter().map(|x| x / q(2)).collect()
    }

    pub fn is_dominant_integral(&self, mu: &[Q]) -> bool {
        self.positive_roots.iter().all(|phi| {
            let c = q(2) * self.inner(mu, phi) / self.inner(phi, phi);
            c.is_integer() && !c.is_negative()
        })
    }

    pub fn weyl_dimension(&self, mu: &[Q]) -> Q {
        let rho = self.rho();
        let shifted: Vec<Q> = mu.iter().zip(&rho).map(|(a, b)| a + b).collect();
        let mut out = Q::one();
        for phi in &self.positive_roots {
            out *= self.inner(&shifted, phi) / self.inner(&rho, phi);
        }
        out
    }
}

/// A space with a basis of `h_r`-weight vectors and the actions of a basis
/// of `n_r`.
#[derive(Clone, Debug)]
pub struct RAction {
    pub dim: usize,
    pub weights: Vec<Vec<Q>>,
    pub raising: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub highest_weight: Vec<Q>,
    pub multiplicity: usize,
    pub dim: u128,
}

#[derive(Clone, Debug)]
pub struct RModuleDecomposition {
    pub constituents: Vec<Constituent>,
    pub highest_vectors: Vec<(Vec<Q>, Vec<SparseVec>)>,
}

pub fn decompose_under_r(
    action: &RAction,
    rdata: &RRootData,
) -> Result<RModuleDecomposition, RepError> {
    let mut blocks: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
    for (v, w) in action.weights.iter().enumerate() {
        blocks.entry(w.clone()).or_default().push(v);
    }
    let mut constituents = Vec::new();
    let mut highest_vectors = Vec::new();
    let mut total: Q = Q::zero();
    for (w, cols) in blocks.iter().rev() {
        let mut rows: BTreeMap<(usize, usize), Vec<Q>> = BTreeMap::new();
        for (c, &v) in cols.iter().enumerate() {
            for (k, r) in action.raising.iter().enumerate() {
                let col = r.column(v).ok_or_else(|| {
                    RepError::DepthLeak(format!("raising operator {k} unknown on vector {v}"))
                })?;
                for (t, x) in col.iter() {
                    rows.entry((k, t))
                        .or_insert_with(|| vec![Q::zero(); cols.len()])[c] = x.clone();
                }
            }
        }
        let m: Vec<Vec<Q>> = rows.into_values().collect();
        let ker = nullspace(&m, cols.len());
        if ker.is_empty() {
            continue;
        }
        if !rdata.is_dominant_integral(w) {
            return Err(RepError::NotSemisimpleAction(format!(
                "highest vector of non-dominant weight {:?}",
                crate::linalg::fmt_vec(w)
            )));
        }
        let dim = rdata.weyl_dimension(w);
        total += &dim * q(ker.len() as i64);
        let vecs = ker
            .iter()
            .map(|x| {
                cols.iter()
                    .zip(x)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&v, c)| (v, c.clone()))
                    .collect()
            })
            .collect();
        constituents.push(Constituent {
            highest_weight: w.clone(),
            multiplicity: ker.len(),
            dim: dim.to_integer().try_into().unwrap_or(0),
        });
        highest_vectors.push((w.clone(), vecs));
    }
    if total != q(action.dim as i64) {
        return Err(RepError::NotSemisimpleAction(format!(
            "constituent dimensions sum to {} but the space has dimension {}",
            total, action.dim
        )));
    }
    Ok(RModuleDecomposition {
        constituents,
        highest_vectors,
    })
}
