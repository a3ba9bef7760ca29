//! Root systems, Weyl groups and minimal coset representatives built from a
//! Cartan matrix.
//!
//! Conventions: `a[i][j] = α_j(h_i) = 2(α_i, α_j)/(α_i, α_i)`. Weights are
//! stored in simple-root coordinates; Dynkin labels (values on the simple
//! coroots) are derived on demand. The invariant form is normalized so that
//! long roots of every simple component have squared length 2.

use std::cmp::Reverse;
use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{determinant, inverse, mat_vec, q, Q};

pub const DEFAULT_GROUP_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("unknown Cartan type label `{0}`")]
    UnknownType(String),
    #[error("NotFiniteType: {0}")]
    NotFiniteType(String),
    #[error("GroupTooLarge: Weyl group order {order} exceeds cap {cap}")]
    GroupTooLarge { order: u128, cap: usize },
    #[error("NotASubsystem: {0}")]
    NotASubsystem(String),
}

/// Integer Cartan matrix with a series label such as `A2`, `F4` or `A1xA1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
    label: String,
}

impl CartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>, label: impl Into<String>) -> Result<Self, RootDataError> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(RootDataError::InvalidCartan("matrix is not square".into()));
            }
            if row[i] != 2 {
                return Err(RootDataError::InvalidCartan(format!("a[{i}][{i}] != 2")));
            }
            for (j, &a) in row.iter().enumerate() {
                if i != j && a > 0 {
                    return Err(RootDataError::InvalidCartan(format!("a[{i}][{j}] > 0")));
                }
                if (a == 0) != (entries[j][i] == 0) {
                    return Err(RootDataError::InvalidCartan(format!(
                        "a[{i}][{j}] and a[{j}][{i}] disagree on vanishing"
                    )));
                }
            }
        }
        Ok(Self {
            entries,
            label: label.into(),
        })
    }

    /// Parses labels like `A2`, `G2`, `F4`, `B4` and products `A1xA1`.
    pub fn from_type(label: &str) -> Result<Self, RootDataError> {
        let parts: Vec<&str> = label.split(['x', '*', '+']).map(str::trim).collect();
        let mut blocks = Vec::new();
        for p in &parts {
            blocks.push(simple_cartan(p)?);
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut entries = vec![vec![0; n]; n];
        let mut off = 0;
        for b in &blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    entries[off + i][off + j] = a;
                }
            }
            off += b.len();
        }
        Self::new(entries, parts.join("x"))
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// Connected components of the Dynkin diagram, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let i = comp[k];
                for j in 0..n {
                    if !seen[j] && self.entries[i][j] != 0 {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Squared lengths of the simple roots, long roots normalized to 2 in
    /// every component.
    fn root_lengths(&self) -> Result<Vec<Q>, RootDataError> {
        let n = self.rank();
        let mut len: Vec<Option<Q>> = vec![None; n];
        for comp in self.components() {
            len[comp[0]] = Some(q(1));
            let mut queue = VecDeque::from([comp[0]]);
            while let Some(i) = queue.pop_front() {
                let li = len[i].clone().unwrap();
                for &j in &comp {
                    if i == j || self.entries[i][j] == 0 {
                        continue;
                    }
                    // (α_i,α_j) = a_ij r_i / 2 = a_ji r_j / 2
                    let lj = &li * q(self.entries[i][j]) / q(self.entries[j][i]);
                    match &len[j] {
                        None => {
                            len[j] = Some(lj);
                            queue.push_back(j);
                        }
                        Some(old) if *old != lj => {
                            return Err(RootDataError::NotFiniteType(format!(
                                "{} is not symmetrizable",
                                self.label
                            )))
                        }
                        _ => {}
                    }
                }
            }
            let max = comp.iter().map(|&i| len[i].clone().unwrap()).max().unwrap();
            for &i in &comp {
                let v = len[i].take().unwrap();
                len[i] = Some(v * q(2) / &max);
            }
        }
        Ok(len.into_iter().map(Option::unwrap).collect())
    }
}

fn simple_cartan(label: &str) -> Result<Vec<Vec<i64>>, RootDataError> {
    let bad = || RootDataError::UnknownType(label.to_string());
    let mut chars = label.chars();
    let series = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    let chain = |n: usize| {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    };
    let a = match (series, n) {
        ('A', n) if n >= 1 => chain(n),
        ('B', n) if n >= 2 => {
            let mut a = chain(n);
            a[n - 1][n - 2] = -2;
            a
        }
        ('C', n) if n >= 2 => {
            let mut a = chain(n);
            a[n - 2][n - 1] = -2;
            a
        }
        ('D', n) if n >= 3 => {
            let mut a = chain(n);
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
            a
        }
        ('E', n) if (6..=8).contains(&n) => {
            // Bourbaki numbering: 1-3-4-5-..., 2 attached to 4.
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
            }
            let mut link = |i: usize, j: usize| {
                a[i][j] = -1;
                a[j][i] = -1;
            };
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
            a
        }
        ('F', 4) => {
            let mut a = chain(4);
            a[2][1] = -2;
            a
        }
        ('G', 2) => vec![vec![2, -3], vec![-1, 2]],
        _ => return Err(bad()),
    };
    Ok(a)
}

pub type Root = Vec<i64>;

/// Roots, positive system, ρ and the normalized invariant form.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: CartanMatrix,
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
    inner: Vec<Vec<Q>>,
    cartan_inv: Vec<Vec<Q>>,
    rho: Vec<Q>,
}

impl RootSystem {
    pub fn build(cm: &CartanMatrix) -> Result<Self, RootDataError> {
        let n = cm.rank();
        let lengths = cm.root_lengths()?;
        let inner: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| q(cm.get(i, j)) * &lengths[i] / q(2))
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in 0..n {
                if inner[i][j] != inner[j][i] {
                    return Err(RootDataError::NotFiniteType(format!(
                        "{} is not symmetrizable",
                        cm.label()
                    )));
                }
            }
        }
        for k in 1..=n {
            let minor: Vec<Vec<Q>> = inner[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !determinant(&minor).is_positive() {
                return Err(RootDataError::NotFiniteType(format!(
                    "symmetrized {} is not positive definite",
                    cm.label()
                )));
            }
        }

        // Closure by root strings, height by height.
        let bound = 4 * n * n * n + 8;
        let simple: Vec<Root> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut all: HashSet<Root> = simple.iter().cloned().collect();
        let mut layer = simple.clone();
        let mut positive = simple.clone();
        let pairing = |r: &Root, i: usize| -> i64 { (0..n).map(|j| r[j] * cm.get(i, j)).sum() };
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if all.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let qv = p - pairing(beta, i);
                    if qv > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if all.insert(up.clone()) {
                            next.push(up.clone());
                            positive.push(up);
                        }
                    }
                }
            }
            if positive.len() > bound {
                return Err(RootDataError::NotFiniteType(format!(
                    "root closure for {} exceeded {} positive roots",
                    cm.label(),
                    bound
                )));
            }
            layer = next;
        }
        positive.sort_by_key(|r| (r.iter().sum::<i64>(), Reverse(r.clone())));
        let np = positive.len();
        let mut index = HashMap::new();
        for (k, r) in positive.iter().enumerate() {
            index.insert(r.clone(), k);
            index.insert(r.iter().map(|x| -x).collect(), np + k);
        }
        let mut rho = vec![Q::zero(); n];
        for r in &positive {
            for (x, &c) in rho.iter_mut().zip(r) {
                *x += q(c);
            }
        }
        for x in rho.iter_mut() {
            *x /= q(2);
        }
        let a: Vec<Vec<Q>> = cm
            .entries()
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        let cartan_inv = inverse(&a).expect("finite-type Cartan matrix is invertible");
        Ok(Self {
            cartan: cm.clone(),
            positive,
            index,
            inner,
            cartan_inv,
            rho,
        })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Root by index: positive roots `0..N`, their negatives `N..2N`.
    pub fn root(&self, k: usize) -> Root {
        let np = self.positive.len();
        if k < np {
            self.positive[k].clone()
        } else {
            self.positive[k - np].iter().map(|x| -x).collect()
        }
    }

    pub fn index_of(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn negate_index(&self, k: usize) -> usize {
        let np = self.positive.len();
        if k < np {
            k + np
        } else {
            k - np
        }
    }

    pub fn is_positive_index(&self, k: usize) -> bool {
        k < self.positive.len()
    }

    pub fn height(r: &[i64]) -> i64 {
        r.iter().sum()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        (0..self.rank()).map(|j| i64::from(i == j)).collect()
    }

    pub fn rho(&self) -> &[Q] {
        &self.rho
    }

    /// Gram matrix `(α_i, α_j)` of the normalized form.
    pub fn inner_matrix(&self) -> &[Vec<Q>] {
        &self.inner
    }

    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        let ab = mat_vec(&self.inner, b);
        a.iter().zip(&ab).map(|(x, y)| x * y).sum()
    }

    pub fn root_q(&self, k: usize) -> Vec<Q> {
        self.root(k).into_iter().map(q).collect()
    }

    pub fn length_sq(&self, k: usize) -> Q {
        let r = self.root_q(k);
        self.inner(&r, &r)
    }

    /// Values `w(h_i)` on the simple coroots.
    pub fn dynkin_labels(&self, w: &[Q]) -> Vec<Q> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| &w[j] * q(self.cartan.get(i, j))).sum())
            .collect()
    }

    pub fn from_dynkin_labels(&self, labels: &[Q]) -> Vec<Q> {
        mat_vec(&self.cartan_inv, labels)
    }

    /// `⟨w, φ^∨⟩ = 2(w, φ)/(φ, φ)` for the root with index `k`.
    pub fn coroot_pairing(&self, w: &[Q], k: usize) -> Q {
        let r = self.root_q(k);
        q(2) * self.inner(w, &r) / self.inner(&r, &r)
    }

    /// Coefficients of `φ^∨` in the simple coroots `h_i`.
    pub fn coroot_coefficients(&self, k: usize) -> Vec<Q> {
        let r = self.root(k);
        let len = self.length_sq(k);
        (0..self.rank())
            .map(|i| q(r[i]) * &self.inner[i][i] / &len)
            .collect()
    }

    /// Largest `p` with `β − pα_i` a root.
    pub fn string_down(&self, beta: &[i64], i: usize) -> i64 {
        let mut p = 0;
        let mut down = beta.to_vec();
        loop {
            down[i] -= 1;
            if self.index.contains_key(&down) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    /// Largest `p` with `β − pα` a root, for arbitrary roots.
    pub fn string_down_root(&self, beta: &[i64], alpha: &[i64]) -> i64 {
        let mut p = 0;
        let mut down = beta.to_vec();
        loop {
            for (d, a) in down.iter_mut().zip(alpha) {
                *d -= a;
            }
            if self.index.contains_key(&down) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    pub fn is_dominant_integral(&self, w: &[Q]) -> bool {
        self.dynkin_labels(w)
            .iter()
            .all(|x| x.is_integer() && !x.is_negative())
    }

    /// Order of the Weyl group from the classification of the components.
    pub fn classical_weyl_order(&self) -> u128 {
        let mut order: u128 = 1;
        for comp in self.cartan.components() {
            let n = comp.len() as u128;
            let np = self
                .positive
                .iter()
                .filter(|r| comp.iter().any(|&i| r[i] != 0))
                .count() as u128;
            let laced = comp
                .iter()
                .all(|&i| comp.iter().all(|&j| self.cartan.get(i, j) >= -1));
            let fact = |m: u128| (1..=m).product::<u128>();
            order *= match (n, np) {
                (_, x) if laced && x == n * (n + 1) / 2 => fact(n + 1),
                (_, x) if !laced && x == n * n && n != 2 || (n == 2 && x == 4) => {
                    (1u128 << n) * fact(n)
                }
                (2, 6) => 12,
                (4, 24) => 1152,
                (6, 36) => 51_840,
                (7, 63) => 2_903_040,
                (8, 120) => 696_729_600,
                (_, x) if laced && x == n * (n - 1) => (1u128 << (n - 1)) * fact(n),
                _ => unreachable!("unclassified component"),
            };
        }
        order
    }

    /// Reflection of `w` in the root with index `k`.
    pub fn reflect(&self, w: &[Q], k: usize) -> Vec<Q> {
        let c = self.coroot_pairing(w, k);
        let r = self.root(k);
        w.iter().zip(&r).map(|(x, &a)| x - &c * q(a)).collect()
    }
}

/// An element of the Weyl group: its integer matrix on simple-root
/// coordinates, the induced permutation of the roots, and its
/// lexicographically minimal reduced word.
#[derive(Clone, Debug)]
pub struct WeylElement {
    matrix: Vec<Vec<i64>>,
    perm: Vec<u32>,
    word: Vec<u8>,
}

impl WeylElement {
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// Index of `τ(φ_k)`.
    pub fn image(&self, k: usize) -> usize {
        self.perm[k] as usize
    }

    pub fn act(&self, w: &[Q]) -> Vec<Q> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(w).map(|(&a, x)| q(a) * x).sum())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    lookup: HashMap<Vec<i64>, usize>,
    gens: Vec<Vec<Vec<i64>>>,
    num_positive: usize,
}

fn flat(m: &[Vec<i64>]) -> Vec<i64> {
    m.iter().flatten().copied().collect()
}

fn int_mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

impl WeylGroup {
    pub fn build(rs: &RootSystem) -> Result<Self, RootDataError> {
        Self::build_with_cap(rs, DEFAULT_GROUP_CAP)
    }

    pub fn build_with_cap(rs: &RootSystem, cap: usize) -> Result<Self, RootDataError> {
        let order = rs.classical_weyl_order();
        if order > cap as u128 {
            return Err(RootDataError::GroupTooLarge { order, cap });
        }
        let n = rs.rank();
        let cm = rs.cartan();
        let gens: Vec<Vec<Vec<i64>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| {
                                let id = i64::from(r == c);
                                if r == i {
                                    id - cm.get(i, c)
                                } else {
                                    id
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let id: Vec<Vec<i64>> = (0..n)
            .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
            .collect();

        // Breadth-first search on left multiplication gives lengths.
        let mut mats = vec![id.clone()];
        let mut lengths = vec![0usize];
        let mut lookup = HashMap::from([(flat(&id), 0usize)]);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &e in &frontier {
                for g in &gens {
                    let m = int_mat_mul(g, &mats[e]);
                    let key = flat(&m);
                    if let std::collections::hash_map::Entry::Vacant(slot) = lookup.entry(key) {
                        slot.insert(mats.len());
                        next.push(mats.len());
                        lengths.push(lengths[e] + 1);
                        mats.push(m);
                    }
                }
            }
            if mats.len() > cap {
                return Err(RootDataError::GroupTooLarge {
                    order: mats.len() as u128,
                    cap,
                });
            }
            frontier = next;
        }

        // Lexicographically least reduced words, by increasing length.
        let mut order_idx: Vec<usize> = (0..mats.len()).collect();
        order_idx.sort_by_key(|&e| lengths[e]);
        let mut words: Vec<Option<Vec<u8>>> = vec![None; mats.len()];
        words[0] = Some(Vec::new());
        for &e in order_idx.iter().skip(1) {
            for (i, g) in gens.iter().enumerate() {
                let prev = lookup[&flat(&int_mat_mul(g, &mats[e]))];
                if lengths[prev] + 1 == lengths[e] {
                    let mut w = vec![i as u8];
                    w.extend_from_slice(words[prev].as_ref().unwrap());
                    words[e] = Some(w);
                    break;
                }
            }
        }

        let roots: Vec<Root> = (0..rs.num_roots()).map(|k| rs.root(k)).collect();
        let mut elements: Vec<WeylElement> = mats
            .into_iter()
            .zip(words)
            .map(|(m, w)| {
                let perm = roots
                    .iter()
                    .map(|r| {
                        let img: Root = m
                            .iter()
                            .map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum())
                            .collect();
                        rs.index_of(&img).expect("Weyl group permutes roots") as u32
                    })
                    .collect();
                WeylElement {
                    matrix: m,
                    perm,
                    word: w.unwrap(),
                }
            })
            .collect();
        elements.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
        let lookup = elements
            .iter()
            .enumerate()
            .map(|(k, e)| (flat(&e.matrix), k))
            .collect();
        Ok(Self {
            elements,
            lookup,
            gens,
            num_positive: rs.num_positive(),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of_matrix(&self, m: &[Vec<i64>]) -> Option<usize> {
        self.lookup.get(&flat(m)).copied()
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        let m = int_mat_mul(&self.elements[a].matrix, &self.elements[b].matrix);
        self.lookup[&flat(&m)]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let e = &self.elements[a];
        let n = e.matrix.len();
        let mut m = identity_matrix(n);
        for &i in &e.word {
            m = int_mat_mul(&m, &self.gens[i as usize]);
        }
        // m = w; w^{-1} is the product of the same word reversed.
        let mut inv = identity_matrix(n);
        for &i in e.word.iter().rev() {
            inv = int_mat_mul(&inv, &self.gens[i as usize]);
        }
        debug_assert_eq!(m, e.matrix);
        self.lookup[&flat(&inv)]
    }

    /// `ℓ(τ)` as the number of positive roots sent to negative roots.
    pub fn inversion_count(&self, a: usize) -> usize {
        let e = &self.elements[a];
        (0..self.num_positive)
            .filter(|&k| e.perm[k] as usize >= self.num_positive)
            .count()
    }

    /// Index of the reflection in the root with index `k`.
    pub fn reflection(&self, rs: &RootSystem, k: usize) -> usize {
        let n = rs.rank();
        let m: Vec<Vec<i64>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let img = rs.reflect(&rs.root_q_simple(c), k);
                        let x = &img[r];
                        debug_assert!(x.is_integer());
                        x.to_integer().try_into().unwrap()
                    })
                    .collect()
            })
            .collect();
        self.lookup[&flat(&m)]
    }

    /// Elements of the subgroup generated by the reflections in `roots`.
    pub fn subgroup(&self, rs: &RootSystem, roots: &[usize]) -> Vec<usize> {
        let gens: Vec<usize> = roots.iter().map(|&k| self.reflection(rs, k)).collect();
        let mut seen = HashSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for &g in &gens {
                let x = self.compose(g, e);
                if seen.insert(x) {
                    queue.push_back(x);
                }
            }
        }
        let mut out: Vec<usize> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
        .collect()
}

impl RootSystem {
    fn root_q_simple(&self, i: usize) -> Vec<Q> {
        (0..self.rank())
            .map(|j| if i == j { Q::one() } else { Q::zero() })
            .collect()
    }
}

/// Minimal-length representatives `W¹` for the cosets `W_r τ`.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub sub_roots: Vec<usize>,
    pub sub_positive: Vec<usize>,
    pub sub_simple: Vec<usize>,
    pub transversal: Vec<usize>,
    pub euler_number: usize,
}

/// Checks that `roots` (indices) is closed under negation and reflections.
pub fn check_subsystem(rs: &RootSystem, roots: &[usize]) -> Result<(), RootDataError> {
    let set: HashSet<usize> = roots.iter().copied().collect();
    for &a in roots {
        if !set.contains(&rs.negate_index(a)) {
            return Err(RootDataError::NotASubsystem(format!(
                "root {:?} present without its negative",
                rs.root(a)
            )));
        }
        for &b in roots {
            let img = rs.reflect(&rs.root_q(b), a);
            let img: Root = img
                .iter()
                .map(|x| x.to_integer().try_into().unwrap())
                .collect();
            match rs.index_of(&img) {
                Some(k) if set.contains(&k) => {}
                _ => {
                    return Err(RootDataError::NotASubsystem(format!(
                        "reflection of {:?} in {:?} leaves the set",
                        rs.root(b),
                        rs.root(a)
                    )))
                }
            }
        }
    }
    Ok(())
}

/// Closes a set of roots under reflections and negation.
pub fn close_subsystem(rs: &RootSystem, generators: &[Root]) -> Result<Vec<usize>, RootDataError> {
    let mut set: Vec<usize> = Vec::new();
    let mut seen = HashSet::new();
    for g in generators {
        let k = rs
            .index_of(g)
            .ok_or_else(|| RootDataError::NotASubsystem(format!("{g:?} is not a root")))?;
        for x in [k, rs.negate_index(k)] {
            if seen.insert(x) {
                set.push(x);
            }
        }
    }
    let mut i = 0;
    while i < set.len() {
        let snapshot = set.clone();
        for &a in &snapshot {
            let b = set[i];
            let img = rs.reflect(&rs.root_q(b), a);
            let img: Root = img
                .iter()
                .map(|x| x.to_integer().try_into().unwrap())
                .collect();
            let k = rs.index_of(&img).unwrap();
            if seen.insert(k) {
                set.push(k);
            }
        }
        i += 1;
    }
    set.sort_unstable();
    Ok(set)
}

/// Indecomposable elements of a positive subsystem.
pub fn simple_of(rs: &RootSystem, positive: &[usize]) -> Vec<usize> {
    let set: HashSet<Root> = positive.iter().map(|&k| rs.root(k)).collect();
    positive
        .iter()
        .copied()
        .filter(|&k| {
            let r = rs.root(k);
            !positive.iter().any(|&a| {
                let ra = rs.root(a);
                let rest: Root = r.iter().zip(&ra).map(|(x, y)| x - y).collect();
                set.contains(&rest)
            })
        })
        .collect()
}

pub fn coset_transversal(
    w: &WeylGroup,
    rs: &RootSystem,
    sub_roots: &[usize],
) -> Result<CosetSystem, RootDataError> {
    check_subsystem(rs, sub_roots)?;
    let mut sub_roots = sub_roots.to_vec();
    sub_roots.sort_unstable();
    let sub_positive: Vec<usize> = sub_roots
        .iter()
        .copied()
        .filter(|&k| rs.is_positive_index(k))
        .collect();
    let sub_simple = simple_of(rs, &sub_positive);
    let np = rs.num_positive();
    let transversal: Vec<usize> = (0..w.order())
        .filter(|&t| {
            let e = w.element(t);
            // τ⁻¹φ is positive iff φ = τψ for a positive ψ.
            sub_positive.iter().all(|&phi| {
                let pre = e.perm.iter().position(|&p| p as usize == phi).unwrap();
                pre < np
            })
        })
        .collect();
    let euler_number = transversal.len();
    Ok(CosetSystem {
        sub_roots,
        sub_positive,
        sub_simple,
        transversal,
        euler_number,
    })
}

/// `τ•λ = τ(λ + ρ) − ρ_r`.
pub fn dot_action(tau: &WeylElement, lambda: &[Q], rho: &[Q], rho_r: &[Q]) -> Vec<Q> {
    let shifted: Vec<Q> = lambda.iter().zip(rho).map(|(a, b)| a + b).collect();
    tau.act(&shifted)
        .into_iter()
        .zip(rho_r)
        .map(|(a, b)| a - b)
        .collect()
}

/// Half-sum of the given positive roots.
pub fn half_sum(rs: &RootSystem, roots: &[usize]) -> Vec<Q> {
    let mut out = vec![Q::zero(); rs.rank()];
    for &k in roots {
        for (x, c) in out.iter_mut().zip(rs.root(k)) {
            *x += q(c);
        }
    }
    out.iter().map(|x| x / q(2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(label: &str) -> RootSystem {
        RootSystem::build(&CartanMatrix::from_type(label).unwrap()).unwrap()
    }

    #[test]
    fn a1_has_one_positive_root() {
        let r = rs("A1");
        assert_eq!(r.positive_roots(), &[vec![1]]);
        assert_eq!(r.rho(), &[crate::linalg::qr(1, 2)]);
    }

    #[test]
    fn a2_rho_norm() {
        let r = rs("A2");
        assert_eq!(r.num_positive(), 3);
        assert_eq!(r.inner(r.rho(), r.rho()), q(2));
    }

    #[test]
    fn exceptional_counts() {
        assert_eq!(rs("F4").num_positive(), 24);
        assert_eq!(rs("G2").num_positive(), 6);
        assert_eq!(rs("E6").num_positive(), 36);
        assert_eq!(rs("E8").num_positive(), 120);
    }

    #[test]
    fn long_roots_have_length_two() {
        for label in ["B3", "C3", "F4", "G2"] {
            let r = rs(label);
            let max = (0..r.num_roots()).map(|k| r.length_sq(k)).max().unwrap();
            assert_eq!(max, q(2), "{label}");
        }
    }

    #[test]
    fn rho_pairs_to_one_with_simple_coroots() {
        for label in ["A3", "B4", "G2", "F4", "A1xA1"] {
            let r = rs(label);
            for x in r.dynkin_labels(r.rho()) {
                assert_eq!(x, q(1));
            }
        }
    }

    #[test]
    fn rejects_affine_and_malformed() {
        let affine = CartanMatrix::new(vec![vec![2, -2], vec![-2, 2]], "A1~").unwrap();
        assert!(matches!(
            RootSystem::build(&affine),
            Err(RootDataError::NotFiniteType(_))
        ));
        assert!(CartanMatrix::new(vec![vec![2, 1], vec![1, 2]], "bad").is_err());
        assert!(CartanMatrix::new(vec![vec![2, -1], vec![0, 2]], "bad").is_err());
        assert!(CartanMatrix::from_type("Q7").is_err());
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(WeylGroup::build(&rs("A1")).unwrap().order(), 2);
        assert_eq!(WeylGroup::build(&rs("B4")).unwrap().order(), 384);
        assert_eq!(WeylGroup::build(&rs("G2")).unwrap().order(), 12);
    }

    #[test]
    fn group_cap_is_enforced() {
        let r = rs("E8");
        assert!(matches!(
            WeylGroup::build(&r),
            Err(RootDataError::GroupTooLarge { .. })
        ));
        assert!(matches!(
            WeylGroup::build_with_cap(&rs("A3"), 10),
            Err(RootDataError::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn whole_system_gives_trivial_transversal() {
        let r = rs("A2");
        let w = WeylGroup::build(&r).unwrap();
        let all: Vec<usize> = (0..r.num_roots()).collect();
        let c = coset_transversal(&w, &r, &all).unwrap();
        assert_eq!(c.euler_number, 1);
        assert_eq!(c.transversal, vec![w.identity()]);
    }

    #[test]
    fn non_subsystem_is_rejected() {
        let r = rs("A2");
        let w = WeylGroup::build(&r).unwrap();
        // α1 and α2 without α1+α2 is not reflection closed.
        let a1 = r.index_of(&[1, 0]).unwrap();
        let a2 = r.index_of(&[0, 1]).unwrap();
        let set = vec![a1, a2, r.negate_index(a1), r.negate_index(a2)];
        assert!(matches!(
            coset_transversal(&w, &r, &set),
            Err(RootDataError::NotASubsystem(_))
        ));
        assert!(matches!(
            coset_transversal(&w, &r, &[a1]),
            Err(RootDataError::NotASubsystem(_))
        ));
    }

    #[test]
    fn dot_action_identity() {
        let r = rs("A2");
        let w = WeylGroup::build(&r).unwrap();
        let zero = vec![Q::zero(); 2];
        let id = w.element(w.identity());
        let rho_r = vec![crate::linalg::qr(1, 2), Q::zero()];
        let out = dot_action(id, &zero, r.rho(), &rho_r);
        let expect: Vec<Q> = r.rho().iter().zip(&rho_r).map(|(a, b)| a - b).collect();
        assert_eq!(out, expect);
        let lambda = vec![q(3), crate::linalg::qr(-1, 3)];
        assert_eq!(dot_action(id, &lambda, r.rho(), r.rho()), lambda);
    }
}
