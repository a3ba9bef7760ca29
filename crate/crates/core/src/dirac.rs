//! The cubic Dirac operator on `V ⊗ L`, its cohomology and the
//! verifications built on it.
//!
//! Basis vectors of `V ⊗ L` are indexed by `v * dim L + l`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::clifford::{
    cubic_term, nu_star, p_element, weight_grading, CliffordElement, CliffordError, CubicTerm,
    PClifford, SpinIdeal,
};
use crate::liestruct::{LieAlgebra, LieError, LiePair};
use crate::linalg::{
    column_space, complement, coords_in, intersection, inverse, is_zero_vec, mat_mul, nullspace, q,
    SparseMatrix, SparseVec, Q,
};
use crate::repmod::{
    build_irrep, build_truncated_verma, decompose_under_r, RAction, RModuleDecomposition, RepError,
    WeightModule,
};
use crate::rootdata::{coset_transversal, dot_action, RootDataError, RootSystem, WeylGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiracError {
    #[error("BasisMismatch: {0}")]
    BasisMismatch(String),
    #[error("DepthLeak: {0}")]
    DepthLeak(String),
    #[error("NotScalar: entry ({row}, {col}) of D² − Cas_g⊗1 + ζ(Cas_r) is {value}")]
    NotScalar { row: usize, col: usize, value: Q },
    #[error("NotEqualRank: the pair has h_p of dimension {0}")]
    NotEqualRank(usize),
    #[error("Precondition: {0}")]
    Precondition(String),
    #[error("InternalInconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Combined status: any failure fails, then any inconclusive part.
    pub fn all(parts: impl IntoIterator<Item = Status>) -> Self {
        parts.into_iter().fold(Status::Pass, Status::max)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `Cas = Σ_a x_a x^a` on a module, with `{x^a}` B-dual to the g-basis.
pub fn casimir_matrix(g: &LieAlgebra, module: &WeightModule) -> SparseMatrix {
    let finv = inverse(g.form_matrix()).expect("Killing-type form is nonsingular");
    let n = module.dim();
    let mut out = SparseMatrix::zeros(n, n);
    for (a, row) in finv.iter().enumerate() {
        let dual = module.act_element(row);
        out = out.add(&module.action(a).mul(&dual));
    }
    out
}

/// Harish-Chandra value `(λ+ρ, λ+ρ) − (ρ, ρ)` of `Cas_g`.
pub fn casimir_scalar(rs: &RootSystem, lambda: &[Q]) -> Q {
    let rho = rs.rho();
    let s = add(lambda, rho);
    rs.inner(&s, &s) - rs.inner(rho, rho)
}

/// `(ρ, ρ) − (ρ_r, ρ_r)`, the constant in `□² = Cas_g⊗1 − ζ(Cas_r) + c`.
pub fn predicted_constant(pair: &LiePair) -> Q {
    let rs = pair.g.root_system();
    let rho = rs.rho();
    rs.inner(rho, rho) - pair.hr_inner(&pair.rho.rho_r, &pair.rho.rho_r)
}

/// `□` realized on `V ⊗ L`, together with the `ζ(r)`-action.
#[derive(Clone, Debug)]
pub struct DiracComplex {
    pub pair: LiePair,
    pub module: WeightModule,
    pub pc: PClifford,
    pub ideal: SpinIdeal,
    pub cubic: CubicTerm,
    pub d: SparseMatrix,
    pub d_prime: SparseMatrix,
    pub d_cubic: SparseMatrix,
    /// `ζ(x)` for the basis of r, in the order of `pair.r_basis`.
    pub zeta: Vec<SparseMatrix>,
    /// Diagonal `h_r`-weight of each basis vector of `V ⊗ L`.
    pub weights: Vec<Vec<Q>>,
}

impl DiracComplex {
    pub fn assemble(
        pair: &LiePair,
        module: &WeightModule,
        pc: &PClifford,
        ideal: &SpinIdeal,
    ) -> Result<Self, DiracError> {
        if module.actions().len() != pair.g.dim() {
            return Err(DiracError::BasisMismatch(format!(
                "module has {} actions, g has dimension {}",
                module.actions().len(),
                pair.g.dim()
            )));
        }
        if pc.dim() != pair.dim_p() {
            return Err(DiracError::BasisMismatch(format!(
                "Clifford algebra over {} vectors, p has dimension {}",
                pc.dim(),
                pair.dim_p()
            )));
        }
        let dv = module.dim();
        let dl = ideal.dim();
        let id_v = SparseMatrix::identity(dv);
        // Exact addition is associative, so the parallel sum is deterministic.
        let d_prime = pair
            .p_basis
            .par_iter()
            .enumerate()
            .map(|(i, b)| module.act_element(b).kron(&ideal.matrix(pc, &pc.d(i))))
            .reduce(|| SparseMatrix::zeros(dv * dl, dv * dl), |a, b| a.add(&b));
        let cubic = cubic_term(pair);
        let d_cubic = id_v.kron(&ideal.matrix(pc, &cubic.v));
        let d = d_prime.add(&d_cubic);
        let zeta = pair
            .r_basis
            .par_iter()
            .map(|x| zeta_matrix(pair, module, pc, ideal, x))
            .collect::<Result<Vec<_>, _>>()?;
        let lw = weight_grading(ideal, pair).weights;
        let mut weights = Vec::with_capacity(dv * dl);
        for v in 0..dv {
            let mv = pair.restrict(&module.weight(v));
            for w in &lw {
                weights.push(add(&mv, w));
            }
        }
        Ok(Self {
            pair: pair.clone(),
            module: module.clone(),
            pc: pc.clone(),
            ideal: ideal.clone(),
            cubic,
            d,
            d_prime,
            d_cubic,
            zeta,
            weights,
        })
    }

    /// Builds the Clifford data and assembles in one step.
    pub fn build(pair: &LiePair, module: &WeightModule) -> Result<Self, DiracError> {
        let pc = PClifford::new(pair);
        let ideal = SpinIdeal::build(pair, &pc);
        Self::assemble(pair, module, &pc, &ideal)
    }

    pub fn dim(&self) -> usize {
        self.module.dim() * self.ideal.dim()
    }

    pub fn index(&self, v: usize, l: usize) -> usize {
        v * self.ideal.dim() + l
    }

    /// `ζ(x)` for an arbitrary `x ∈ r` in g-coordinates.
    pub fn zeta_of(&self, x: &[Q]) -> Result<SparseMatrix, DiracError> {
        zeta_matrix(&self.pair, &self.module, &self.pc, &self.ideal, x)
    }

    /// `ξ(Cas_g ⊗ 1)`.
    pub fn cas_g(&self) -> SparseMatrix {
        casimir_matrix(&self.pair.g, &self.module).kron(&SparseMatrix::identity(self.ideal.dim()))
    }

    /// `ζ(Cas_r)` with `Cas_r` formed from `B` restricted to r.
    pub fn zeta_cas_r(&self) -> SparseMatrix {
        let n = self.dim();
        let mut out = SparseMatrix::zeros(n, n);
        let k = self.pair.dim_r();
        if k == 0 {
            return out;
        }
        let gram: Vec<Vec<Q>> = self
            .pair
            .r_basis
            .iter()
            .map(|x| {
                self.pair
                    .r_basis
                    .iter()
                    .map(|y| self.pair.g.form(x, y))
                    .collect()
            })
            .collect();
        let ginv = inverse(&gram).expect("form on r is nonsingular");
        for (i, row) in ginv.iter().enumerate() {
            let mut dual = SparseMatrix::zeros(n, n);
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    dual.add_scaled(&self.zeta[j], c);
                }
            }
            out = out.add(&self.zeta[i].mul(&dual));
        }
        out
    }

    /// Vector `v ⊗ w` for a module basis vector and an element of L.
    pub fn tensor(&self, v: usize, w: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (l, c) in w.iter() {
            out.add_term(self.index(v, l), c.clone());
        }
        out
    }
}

fn zeta_matrix(
    pair: &LiePair,
    module: &WeightModule,
    pc: &PClifford,
    ideal: &SpinIdeal,
    x: &[Q],
) -> Result<SparseMatrix, DiracError> {
    let nx = nu_star(pair, pc, x)?;
    let xv = module.act_element(x);
    let a = xv.kron(&SparseMatrix::identity(ideal.dim()));
    let b = SparseMatrix::identity(module.dim()).kron(&ideal.matrix(pc, &nx));
    Ok(a.add(&b))
}

fn apply(m: &SparseMatrix, v: &SparseVec, what: &str) -> Result<SparseVec, DiracError> {
    m.apply(v).map_err(|c| {
        DiracError::DepthLeak(format!("{what} needs the image of basis vector {}", c.0))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareReport {
    /// The scalar `c` with `E = c·I`, when `E` is scalar on known columns.
    pub scalar: Option<Q>,
    pub predicted: Q,
    /// First entry where `E` fails to be scalar.
    pub offending: Option<(usize, usize, Q)>,
    pub unknown_columns: usize,
    pub status: Status,
}

/// Checks `D² − ξ(Cas_g⊗1) + ζ(Cas_r) = c·I` and compares `c` with
/// `(ρ,ρ) − (ρ_r,ρ_r)`.
pub fn verify_square_identity(cx: &DiracComplex) -> SquareReport {
    let e = cx.d.mul(&cx.d).sub(&cx.cas_g()).add(&cx.zeta_cas_r());
    let predicted = predicted_constant(&cx.pair);
    let n = e.ncols();
    let mut scalar: Option<Q> = None;
    let mut offending = None;
    let mut unknown = 0;
    'cols: for j in 0..n {
        let Some(col) = e.column(j) else {
            unknown += 1;
            continue;
        };
        for (i, x) in col.iter() {
            if i != j {
                offending = Some((i, j, x.clone()));
                break 'cols;
            }
        }
        let diag = col.get(j);
        match &scalar {
            None => scalar = Some(diag),
            Some(c) if *c != diag => {
                offending = Some((j, j, diag));
                break;
            }
            _ => {}
        }
    }
    if offending.is_some() {
        scalar = None;
    }
    let status = if offending.is_some() || scalar.as_ref().is_some_and(|c| *c != predicted) {
        Status::Fail
    } else if unknown > 0 || scalar.is_none() && n > 0 {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    SquareReport {
        scalar: if n == 0 {
            Some(predicted.clone())
        } else {
            scalar
        },
        predicted,
        offending,
        unknown_columns: unknown,
        status,
    }
}

/// As [`verify_square_identity`], turning a non-scalar `E` into an error.
pub fn square_constant(cx: &DiracComplex) -> Result<Q, DiracError> {
    let r = verify_square_identity(cx);
    if let Some((row, col, value)) = r.offending {
        return Err(DiracError::NotScalar { row, col, value });
    }
    r.scalar
        .ok_or_else(|| DiracError::DepthLeak("no known column of E".into()))
}

/// `y_ν ∈ h_p` as an element of `C(p)`.
fn y_element(pair: &LiePair, nu: &[Q]) -> CliffordElement {
    let y = pair.cartan_vector(nu).y;
    p_element(pair, &pair.g.cartan_element(&y)).expect("h_p lies in p")
}

/// Whether `ν` vanishes on `h_p`.
pub fn vanishes_on_hp(pair: &LiePair, nu: &[Q]) -> bool {
    pair.h_p.iter().all(|y| pair.g.eval(nu, y).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    /// `ξ(□)(v_λ ⊗ au)`.
    pub image: SparseVec,
    /// `v_λ ⊗ y_{λ+ρ} a u`.
    pub expected: SparseVec,
    pub theorem: bool,
    pub lemma_prime: bool,
    pub lemma_cubic0: bool,
    pub lemma_cubic1: bool,
    /// `(λ+ρ)|h_p = 0`.
    pub vanishing_case: bool,
    pub is_zero: bool,
    pub status: Status,
}

/// Checks `ξ(□)(v_λ ⊗ au) = v_λ ⊗ y_{λ+ρ}au` for `a ∈ C(h_p)` together
/// with its three constituent identities.
pub fn cocycle_check(cx: &DiracComplex, a: &CliffordElement) -> Result<CocycleReport, DiracError> {
    let pair = &cx.pair;
    if a.support().iter().any(|i| !pair.blocks.hp.contains(i)) {
        return Err(DiracError::Precondition("a must lie in C(h_p)".into()));
    }
    if cx.module.generators().drop(0).iter().any(|&x| x != 0) {
        return Err(DiracError::Precondition(
            "module vector 0 is not v_λ".into(),
        ));
    }
    let pc = &cx.pc;
    let ideal = &cx.ideal;
    let a_l = ideal.from_p(a).expect("h_p lies in q");
    let lambda = cx.module.lambda().to_vec();
    let rho = &pair.rho;
    let lr = add(&lambda, &rho.rho);
    let start = cx.tensor(0, &ideal.to_coords(&a_l));
    let on_l = |x: &CliffordElement| ideal.to_coords(&ideal.act(pc, x, &a_l));

    let image = apply(&cx.d, &start, "ξ(□)")?;
    let expected = cx.tensor(0, &on_l(&y_element(pair, &lr)));
    let prime = apply(&cx.d_prime, &start, "ξ(□′)")?;
    let lemma_prime = prime == cx.tensor(0, &on_l(&y_element(pair, &lambda)));
    let lemma_cubic0 = on_l(&cx.cubic.v0) == on_l(&y_element(pair, &rho.rho0));
    let lemma_cubic1 = on_l(&cx.cubic.v1) == on_l(&y_element(pair, &rho.rho1));
    let theorem = image == expected;
    let vanishing_case = vanishes_on_hp(pair, &lr);
    let is_zero = image.is_zero();
    let status = Status::from_bool(
        theorem && lemma_prime && lemma_cubic0 && lemma_cubic1 && (is_zero == vanishing_case),
    );
    Ok(CocycleReport {
        image,
        expected,
        theorem,
        lemma_prime,
        lemma_cubic0,
        lemma_cubic1,
        vanishing_case,
        is_zero,
        status,
    })
}

#[derive(Clone, Debug)]
pub struct DiracCohomology {
    pub kernel_basis: Vec<SparseVec>,
    pub image_intersection_basis: Vec<SparseVec>,
    pub cohomology_basis: Vec<SparseVec>,
    /// Diagonal weight of each cohomology representative.
    pub cohomology_weights: Vec<Vec<Q>>,
    pub dim: usize,
    /// `Ker D = Ker D²`.
    pub kernel_is_kernel_of_square: bool,
    pub r_structure: RModuleDecomposition,
}

struct Block {
    indices: Vec<usize>,
    kernel: Vec<Vec<Q>>,
    inter: Vec<Vec<Q>>,
    reps: Vec<Vec<Q>>,
}

fn dense_block(m: &SparseMatrix, idx: &[usize]) -> Result<Vec<Vec<Q>>, DiracError> {
    let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let mut out = vec![vec![Q::zero(); idx.len()]; idx.len()];
    for (c, &j) in idx.iter().enumerate() {
        let col = m
            .column(j)
            .ok_or_else(|| DiracError::DepthLeak(format!("column {j} of D is unknown")))?;
        for (i, x) in col.iter() {
            let r = *pos.get(&i).ok_or_else(|| {
                DiracError::InternalInconsistency("D does not preserve h_r-weights".into())
            })?;
            out[r][c] = x.clone();
        }
    }
    Ok(out)
}

fn to_sparse(idx: &[usize], v: &[Q]) -> SparseVec {
    let mut out = SparseVec::new();
    for (&i, x) in idx.iter().zip(v) {
        out.add_term(i, x.clone());
    }
    out
}

/// `Ker D / (Ker D ∩ Im D)`, computed on each diagonal `h_r`-weight space.
pub fn dirac_cohomology(cx: &DiracComplex) -> Result<DiracCohomology, DiracError> {
    let mut by_weight: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
    for (i, w) in cx.weights.iter().enumerate() {
        by_weight.entry(w.clone()).or_default().push(i);
    }
    let mut blocks: BTreeMap<Vec<Q>, Block> = BTreeMap::new();
    let mut ker_sq_ok = true;
    for (w, idx) in &by_weight {
        let m = dense_block(&cx.d, idx)?;
        let n = idx.len();
        let kernel = nullspace(&m, n);
        let image = column_space(&m, n);
        let inter = intersection(&kernel, &image, n);
        let sq = mat_mul(&m, &m);
        if nullspace(&sq, n).len() != kernel.len() {
            ker_sq_ok = false;
        }
        let reps = complement(&inter, &kernel);
        blocks.insert(
            w.clone(),
            Block {
                indices: idx.clone(),
                kernel,
                inter,
                reps,
            },
        );
    }

    let mut kernel_basis = Vec::new();
    let mut image_intersection_basis = Vec::new();
    let mut cohomology_basis = Vec::new();
    let mut cohomology_weights = Vec::new();
    // Position of each block's first representative in the global list.
    let mut offsets: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    for (w, b) in &blocks {
        kernel_basis.extend(b.kernel.iter().map(|v| to_sparse(&b.indices, v)));
        image_intersection_basis.extend(b.inter.iter().map(|v| to_sparse(&b.indices, v)));
        offsets.insert(w.clone(), cohomology_basis.len());
        for v in &b.reps {
            cohomology_basis.push(to_sparse(&b.indices, v));
            cohomology_weights.push(w.clone());
        }
    }
    let dim = cohomology_basis.len();

    // ζ(n_r) on the quotient: express ζ(x)c in (inter ++ reps) of the
    // target block and keep the reps part.
    let mut raising = Vec::with_capacity(cx.pair.n_r.len());
    for x in &cx.pair.n_r {
        let z = cx.zeta_of(x)?;
        let mut cols = Vec::with_capacity(dim);
        for (c, w) in cohomology_basis.iter().zip(&cohomology_weights) {
            let img = apply(&z, c, "ζ(n_r)")?;
            let mut col = SparseVec::new();
            if !img.is_zero() {
                let (tw, _) = img
                    .iter()
                    .next()
                    .map(|(i, _)| (cx.weights[i].clone(), i))
                    .unwrap();
                let tb = blocks.get(&tw).ok_or_else(|| {
                    DiracError::InternalInconsistency("ζ(n_r) left the weight blocks".into())
                })?;
                let pos: BTreeMap<usize, usize> = tb
                    .indices
                    .iter()
                    .enumerate()
                    .map(|(a, &b)| (b, a))
                    .collect();
                let mut dense = vec![Q::zero(); tb.indices.len()];
                for (i, v) in img.iter() {
                    dense[pos[&i]] = v.clone();
                }
                let basis: Vec<Vec<Q>> = tb.inter.iter().chain(&tb.reps).cloned().collect();
                let coords = coords_in(&basis, &dense).ok_or_else(|| {
                    DiracError::InternalInconsistency(format!(
                        "ζ(n_r) does not preserve Ker D (from weight {:?})",
                        w
                    ))
                })?;
                let off = offsets[&tw];
                for (k, v) in coords[tb.inter.len()..].iter().enumerate() {
                    col.add_term(off + k, v.clone());
                }
            }
            cols.push(Some(col));
        }
        raising.push(SparseMatrix::from_columns(dim, cols));
    }
    let action = RAction {
        dim,
        weights: cohomology_weights.clone(),
        raising,
    };
    let r_structure = decompose_under_r(&action, &cx.pair.r_root_data())?;
    Ok(DiracCohomology {
        kernel_basis,
        image_intersection_basis,
        cohomology_basis,
        cohomology_weights,
        dim,
        kernel_is_kernel_of_square: ker_sq_ok,
        r_structure,
    })
}

/// Root indices of r for an equal-rank pair.
pub fn r_roots(pair: &LiePair) -> Vec<usize> {
    if let Some(s) = &pair.sub_roots {
        return s.clone();
    }
    let g = &pair.g;
    (0..g.root_system().num_roots())
        .filter(|&k| is_zero_vec(&pair.p_coords(&g.unit(g.root_vector(k)))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipletReport {
    /// `(highest weight on h_r, multiplicity)` read off `H_D`.
    pub cohomology: Vec<(Vec<Q>, usize)>,
    /// `τ•λ` restricted to `h_r` for `τ ∈ W¹`.
    pub predicted: Vec<Vec<Q>>,
    /// `τ•λ` in simple-root coordinates.
    pub predicted_full: Vec<Vec<Q>>,
    pub euler_number: usize,
    pub cohomology_dim: usize,
    pub predicted_dim: Q,
    pub distinct: bool,
    pub kernel_is_kernel_of_square: bool,
    pub status: Status,
}

/// Compares `H_D(V_λ ⊗ S)` with `Σ_{τ ∈ W¹} Z_{τ•λ}`.
pub fn multiplet_check(
    pair: &LiePair,
    lambda: &[Q],
    dim_cap: usize,
    group_cap: usize,
) -> Result<MultipletReport, DiracError> {
    if !pair.is_equal_rank() {
        return Err(DiracError::NotEqualRank(pair.dim_hp()));
    }
    let module = build_irrep(&pair.g, lambda, dim_cap)?;
    let pc = PClifford::new(pair);
    let ideal = SpinIdeal::build(pair, &pc);
    if module.dim() * ideal.dim() > dim_cap {
        return Err(RepError::DimensionCapExceeded {
            dim: (module.dim() * ideal.dim()) as u128,
            cap: dim_cap,
        }
        .into());
    }
    let cx = DiracComplex::assemble(pair, &module, &pc, &ideal)?;
    let coh = dirac_cohomology(&cx)?;
    multiplet_compare(pair, lambda, &coh, group_cap)
}

/// The comparison half of [`multiplet_check`] on a computed cohomology.
pub fn multiplet_compare(
    pair: &LiePair,
    lambda: &[Q],
    coh: &DiracCohomology,
    group_cap: usize,
) -> Result<MultipletReport, DiracError> {
    let rs = pair.g.root_system();
    let w = WeylGroup::build_with_cap(rs, group_cap)?;
    let cs = coset_transversal(&w, rs, &r_roots(pair))?;
    let rho = rs.rho();
    let rho_r = pair
        .rho_r_weight()
        .ok_or(DiracError::NotEqualRank(pair.dim_hp()))?;
    let mut predicted_full: Vec<Vec<Q>> = cs
        .transversal
        .iter()
        .map(|&t| dot_action(w.element(t), lambda, rho, &rho_r))
        .collect();
    predicted_full.sort();
    let mut predicted: Vec<Vec<Q>> = predicted_full.iter().map(|m| pair.restrict(m)).collect();
    predicted.sort();
    let mut cohomology: Vec<(Vec<Q>, usize)> = coh
        .r_structure
        .constituents
        .iter()
        .map(|c| (c.highest_weight.clone(), c.multiplicity))
        .collect();
    cohomology.sort();
    let rdata = pair.r_root_data();
    let predicted_dim: Q = predicted.iter().map(|m| rdata.weyl_dimension(m)).sum();
    let mut dedup = predicted.clone();
    dedup.dedup();
    let distinct = dedup.len() == predicted.len();
    let lhs: Vec<Vec<Q>> = cohomology
        .iter()
        .flat_map(|(w, m)| std::iter::repeat_n(w.clone(), *m))
        .collect();
    let ok = lhs == predicted
        && cohomology.iter().all(|(_, m)| *m == 1)
        && predicted.len() == cs.euler_number
        && distinct
        && coh.kernel_is_kernel_of_square
        && q(coh.dim as i64) == predicted_dim;
    Ok(MultipletReport {
        cohomology,
        predicted,
        predicted_full,
        euler_number: cs.euler_number,
        cohomology_dim: coh.dim,
        predicted_dim,
        distinct,
        kernel_is_kernel_of_square: coh.kernel_is_kernel_of_square,
        status: Status::from_bool(ok),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonvanishingReport {
    /// `k = dim h_p`.
    pub k: usize,
    /// Number of independent cocycles `v_λ ⊗ au`, `a` in a basis of `C(h_p)`.
    pub dim_e: usize,
    pub cocycles_ok: bool,
    /// Basis vectors of M of depth at most `N − 1` that were checked.
    pub checked: usize,
    pub stable: bool,
    pub verified_depth: usize,
    pub internal_depth: usize,
    pub status: Status,
}

/// Depth to which the module is built so that every column of `ξ(□)` at
/// depth `n − 1` is determined.
pub fn internal_depth(pair: &LiePair, n: usize) -> usize {
    let rs = pair.g.root_system();
    let top = (0..rs.num_positive())
        .map(|k| RootSystem::height(&rs.root(k)) as usize)
        .max()
        .unwrap_or(1);
    n - 1 + top
}

/// Theorem-level check that `ℂv_λ ⊗ C(h_p)u` injects into `H_D` when
/// `(λ+ρ)|h_p = 0`: the cocycles lie in `Ker ξ(□)` and M is stable.
pub fn nonvanishing_check(
    pair: &LiePair,
    lambda: &[Q],
    n: usize,
    dim_cap: usize,
) -> Result<NonvanishingReport, DiracError> {
    if n < 3 {
        return Err(DiracError::Precondition(format!("depth {n} < 3")));
    }
    let rho = pair.g.root_system().rho();
    if !vanishes_on_hp(pair, &add(lambda, rho)) {
        return Err(DiracError::Precondition("(λ+ρ)|h_p ≠ 0".into()));
    }
    let depth = internal_depth(pair, n);
    let module = build_truncated_verma(&pair.g, lambda, depth, dim_cap)?;
    let cx = DiracComplex::build(pair, &module)?;
    let ideal = &cx.ideal;
    let top = ideal.top_indices();
    let mut cocycles_ok = true;
    for &k in &top {
        let v = SparseVec::unit(cx.index(0, k));
        if !apply(&cx.d, &v, "ξ(□)")?.is_zero() {
            cocycles_ok = false;
        }
    }
    // The complement of M is spanned by v_λ ⊗ C(h_p)u.
    let outside: Vec<usize> = top.iter().map(|&k| cx.index(0, k)).collect();
    let mut checked = 0;
    let mut stable = true;
    for v in 0..module.dim() {
        if module.depth(v) > n - 1 {
            continue;
        }
        for l in 0..ideal.dim() {
            if v == 0 && !ideal.has_minus_factor(l) {
                continue;
            }
            let col = apply(&cx.d, &SparseVec::unit(cx.index(v, l)), "ξ(□) on M")?;
            checked += 1;
            if outside.iter().any(|&i| !col.get(i).is_zero()) {
                stable = false;
            }
        }
    }
    Ok(NonvanishingReport {
        k: pair.dim_hp(),
        dim_e: top.len(),
        cocycles_ok,
        checked,
        stable,
        verified_depth: n - 1,
        internal_depth: depth,
        status: Status::from_bool(cocycles_ok && stable && top.len() == 1 << pair.dim_hp()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcSample {
    /// `λ` in simple-root coordinates.
    pub lambda: Vec<Q>,
    /// `A_g(Cas_g)(λ+ρ)`.
    pub lhs: Q,
    /// `A_r(η_r(Cas_g))((λ+ρ)|h_r)`.
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarishChandraEvaluation {
    /// Constant of the square identity, read from the assembled operator.
    pub square_constant: Q,
    /// `η_r(Cas_g) = Cas_r + eta_constant`.
    pub eta_constant: Q,
    pub samples: Vec<HcSample>,
    pub grid_step: Q,
    pub all_equal: bool,
}

/// Grid of `(λ+ρ)|h_r` values with step `1/m` in `[−2, 2]` per coordinate,
/// `m` the least integer giving at least `count` points.
pub fn hc_grid(dim_hr: usize, count: usize) -> (Q, Vec<Vec<Q>>) {
    let mut m: i64 = 1;
    while dim_hr > 0 && ((4 * m + 1) as u128).pow(dim_hr as u32) < count as u128 {
        m += 1;
    }
    let vals: Vec<Q> = (-2 * m..=2 * m)
        .map(|k| Q::new(k.into(), m.into()))
        .collect();
    let mut pts: Vec<Vec<Q>> = vec![Vec::new()];
    for _ in 0..dim_hr {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut p2 = p.clone();
                    p2.push(v.clone());
                    p2
                })
            })
            .collect();
    }
    (Q::new(1.into(), m.into()), pts)
}

/// Scalar form of the Harish-Chandra diagram for `Cas_g`: the constant is
/// taken from `□²` on the trivial module.
pub fn harish_chandra_diagram(
    pair: &LiePair,
    sample_count: usize,
) -> Result<HarishChandraEvaluation, DiracError> {
    let rs = pair.g.root_system();
    let zero = vec![Q::zero(); rs.rank()];
    let trivial = build_irrep(&pair.g, &zero, 1)?;
    let cx = DiracComplex::build(pair, &trivial)?;
    let c = square_constant(&cx)?;
    // On H_D, D² = 0 gives Cas_g⊗1 = ζ(Cas_r) − c.
    let eta_constant = -c.clone();
    let rho = rs.rho();
    let rho_r = &pair.rho.rho_r;
    let (step, grid) = hc_grid(pair.dim_hr(), sample_count);
    let mut samples = Vec::with_capacity(grid.len());
    for mu in grid {
        let shifted = pair.lift(&mu);
        let lambda = sub(&shifted, rho);
        let lhs = casimir_scalar(rs, &lambda);
        let rhs = pair.hr_inner(&mu, &mu) - pair.hr_inner(rho_r, rho_r) + &eta_constant;
        samples.push(HcSample { lambda, lhs, rhs });
    }
    let all_equal = samples.iter().all(|s| s.lhs == s.rhs);
    Ok(HarishChandraEvaluation {
        square_constant: c,
        eta_constant,
        samples,
        grid_step: step,
        all_equal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyCasimirReport {
    /// `ξ(Cas_g⊗1) = ζ(Cas_r) + η` on every cohomology representative.
    pub operator_identity: bool,
    /// `ζ(Cas_r)` scalar on each r-highest vector of `H_D`.
    pub zeta_scalars: Vec<(Vec<Q>, Q)>,
    pub cas_g_scalar: Q,
    pub status: Status,
}

/// Checks the consequence `p⊗1 = ζ(η_r(p))` of the diagram for `p = Cas_g`
/// on a computed `H_D`.
pub fn casimir_on_cohomology(
    cx: &DiracComplex,
    coh: &DiracCohomology,
    eta_constant: &Q,
) -> Result<CohomologyCasimirReport, DiracError> {
    let cas = cx.cas_g();
    let zc = cx.zeta_cas_r();
    let mut ok = true;
    for v in &coh.cohomology_basis {
        let lhs = apply(&cas, v, "Cas_g")?;
        let mut rhs = apply(&zc, v, "ζ(Cas_r)")?;
        rhs.add_scaled(v, eta_constant);
        if lhs != rhs {
            ok = false;
        }
    }
    let mut zeta_scalars = Vec::new();
    for (w, vecs) in &coh.r_structure.highest_vectors {
        for hv in vecs {
            // Highest vectors are in cohomology-basis coordinates.
            let mut full = SparseVec::new();
            for (i, c) in hv.iter() {
                full.add_scaled(&coh.cohomology_basis[i], c);
            }
            let img = apply(&zc, &full, "ζ(Cas_r)")?;
            let (i, x) = full.iter().next().expect("nonzero highest vector");
            let s = img.get(i) / x;
            if img != full.scaled(&s) {
                ok = false;
            }
            zeta_scalars.push((w.clone(), s));
        }
    }
    let lambda = cx.module.lambda().to_vec();
    let cas_g_scalar = casimir_scalar(cx.pair.g.root_system(), &lambda);
    Ok(CohomologyCasimirReport {
        operator_identity: ok,
        zeta_scalars,
        cas_g_scalar,
        status: Status::from_bool(ok),
    })
}

/// `λ` in simple-root coordinates with `λ+ρ` vanishing on `h_p` and
/// restricting to `mu` on `h_r`.
pub fn lambda_with_vanishing_hp(pair: &LiePair, mu: &[Q]) -> Vec<Q> {
    sub(&pair.lift(mu), pair.g.root_system().rho())
}
