//! The vertex algebra `ker Q̃ ⊂ M(1)` and its Virasoro structure, checked at
//! finite level.
//!
//! Generators are `F = e^{-α}`, `H = Q F`, `E = Q² F`. Graded kernels of the
//! screening operators are computed as exact nullspaces on the charge-zero
//! Fock space; Virasoro submodules are compared through brute-force spanning
//! ranks inside `M(1)` rather than character formulas.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::{int, Rational, SparseMatrix};
use crate::fock::{basis, virasoro, FockVector, ModelParams, Partition, Sector};
use crate::vertexops::{product, products, screening_q, screening_q_power, screening_qtilde};

/// `F`, `H`, `E`, all of conformal weight `2p - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub f: FockVector,
    pub h: FockVector,
    pub e: FockVector,
}

impl Generators {
    pub fn new(params: &ModelParams) -> Self {
        let f = params.exponential(-params.p_i64());
        let h = screening_q(params, &f).expect("Q is defined on every lattice sector");
        let e = screening_q(params, &h).expect("Q is defined on every lattice sector");
        Self { f, h, e }
    }
}

/// Which screening operator a kernel belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScreeningOp {
    Q,
    QTilde,
}

impl ScreeningOp {
    pub fn apply(&self, params: &ModelParams, v: &FockVector) -> Result<FockVector> {
        match self {
            ScreeningOp::Q => screening_q(params, v),
            ScreeningOp::QTilde => screening_qtilde(params, v),
        }
    }

    /// Charge shift in units of `β`.
    pub fn charge_shift(&self, params: &ModelParams) -> i64 {
        match self {
            ScreeningOp::Q => params.p_i64(),
            ScreeningOp::QTilde => -1,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ScreeningOp::Q => "Q",
            ScreeningOp::QTilde => "Qtilde",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "Q" => Some(ScreeningOp::Q),
            "Qtilde" => Some(ScreeningOp::QTilde),
            _ => None,
        }
    }
}

impl fmt::Display for ScreeningOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Basis of the kernel of a screening operator on `M(1)` at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub op: ScreeningOp,
    pub level: u32,
    pub vectors: Vec<FockVector>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Ordered word `L(-n_1) ⋯ L(-n_s) 1` with a coefficient; parts are weakly
/// decreasing and at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroWord {
    pub parts: Vec<u32>,
    pub coefficient: Rational,
}

impl VirasoroWord {
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl fmt::Display for VirasoroWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for n in &self.parts {
            write!(f, " L(-{n})")?;
        }
        write!(f, " 1")
    }
}

/// `L(-n_1) ⋯ L(-n_s) v`, applying the rightmost operator first.
pub fn apply_word(params: &ModelParams, parts: &[u32], v: &FockVector) -> FockVector {
    parts
        .iter()
        .rev()
        .fold(v.clone(), |acc, &n| virasoro(params, -(n as i64), &acc))
}

/// Sum of coefficient-weighted words applied to the vacuum.
pub fn words_to_vector(params: &ModelParams, words: &[VirasoroWord]) -> FockVector {
    let vac = params.vacuum();
    let mut out = FockVector::zero(params.vacuum_sector());
    for w in words {
        out.add_scaled(&apply_word(params, &w.parts, &vac), &w.coefficient);
    }
    out
}

/// Weakly decreasing sequences of integers `>= min_part` summing to `total`,
/// in reverse-lexicographic order.
pub fn words_of_weight(total: u32, min_part: u32) -> Vec<Vec<u32>> {
    basis(total)
        .into_iter()
        .filter(|p| p.parts().iter().all(|&x| x >= min_part))
        .map(|p| p.parts().to_vec())
        .collect()
}

/// `u_n = Q^n e^{-nα}`.
pub fn singular_vector(params: &ModelParams, n: u32) -> FockVector {
    let start = params.exponential(-(n as i64) * params.p_i64());
    screening_q_power(params, n, &start).expect("Q is defined on every lattice sector")
}

/// `n²p + np - n`.
pub fn singular_weight(params: &ModelParams, n: u32) -> u32 {
    let p = params.p();
    n * n * p + n * p - n
}

/// `n²p - np + n`.
pub fn cosingular_weight(params: &ModelParams, n: u32) -> u32 {
    let p = params.p();
    n * n * p - n * p + n
}

fn index_of(level: u32) -> HashMap<Partition, usize> {
    basis(level).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Matrix of `op` from the charge-zero level-`level` basis to the target
/// sector's graded piece of the same conformal weight. Columns are assembled
/// in parallel; their order is the basis order.
fn operator_matrix(
    params: &ModelParams,
    level: u32,
    apply: impl Fn(&FockVector) -> Result<FockVector> + Sync,
    target: &Sector,
) -> Result<SparseMatrix> {
    let weight = int(level as i64);
    let target_level = &weight - target.delta();
    let source = basis(level);
    let (rows, index) = match crate::exactlin::rational::to_i64(&target_level) {
        Some(l) if l >= 0 => (basis(l as u32).len(), index_of(l as u32)),
        _ => (0, HashMap::new()),
    };
    let columns: Vec<Vec<(usize, Rational)>> = source
        .into_par_iter()
        .map(|mono| -> Result<Vec<(usize, Rational)>> {
            let v = FockVector::monomial(params.vacuum_sector(), mono, Rational::one());
            let image = apply(&v)?;
            debug_assert!(image.is_zero() || image.sector() == target);
            Ok(image
                .terms()
                .map(|(m, c)| (*index.get(m).expect("image stays in the graded piece"), c.clone()))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(SparseMatrix::from_columns(rows, &columns))
}

/// Kernel of `Q` or `Q̃` on `M(1)` at one level.
pub fn kernel(params: &ModelParams, op: ScreeningOp, level: u32) -> Result<KernelBasis> {
    let target = params.vacuum_sector().shifted(op.charge_shift(params));
    let m = operator_matrix(params, level, |v| op.apply(params, v), &target)?;
    let vectors = m
        .nullspace()
        .into_iter()
        .map(|x| FockVector::from_coordinates(params.vacuum_sector(), level, &x))
        .collect();
    Ok(KernelBasis { op, level, vectors })
}

/// Rank of a family of charge-zero vectors at one level.
pub fn span_rank(vectors: &[FockVector], level: u32) -> usize {
    coordinate_matrix(vectors, level).rank()
}

fn coordinate_matrix(vectors: &[FockVector], level: u32) -> SparseMatrix {
    let index = index_of(level);
    let columns: Vec<Vec<(usize, Rational)>> = vectors
        .iter()
        .map(|v| {
            v.terms()
                .filter_map(|(m, c)| index.get(m).map(|i| (*i, c.clone())))
                .collect()
        })
        .collect();
    SparseMatrix::from_columns(index.len(), &columns)
}

/// Maximal independent subset, greedy in the given order.
pub fn independent_subset(vectors: &[FockVector], level: u32) -> Vec<FockVector> {
    coordinate_matrix(vectors, level)
        .pivot_columns()
        .into_iter()
        .map(|i| vectors[i].clone())
        .collect()
}

/// `true` if both families span the same subspace of the level-`level` piece.
pub fn same_subspace(a: &[FockVector], b: &[FockVector], level: u32) -> bool {
    let ra = span_rank(a, level);
    let rb = span_rank(b, level);
    let joint: Vec<FockVector> = a.iter().chain(b).cloned().collect();
    ra == rb && span_rank(&joint, level) == ra
}

/// Independent subset of `{L(-m_1) ⋯ L(-m_s) seed}` at conformal weight
/// `level`, words with parts `>= 1`.
pub fn virasoro_span(params: &ModelParams, seeds: &[FockVector], level: u32) -> Result<Vec<FockVector>> {
    let mut family = Vec::new();
    for seed in seeds {
        if seed.is_zero() {
            continue;
        }
        let w = seed.level().ok_or(Error::NotHomogeneous("level"))?;
        if w > level {
            continue;
        }
        let words = words_of_weight(level - w, 1);
        let vectors: Vec<FockVector> = words
            .par_iter()
            .map(|parts| apply_word(params, parts, seed))
            .collect();
        family.extend(vectors);
    }
    Ok(independent_subset(&family, level))
}

/// Singular vectors `u_n` of weight at most `level`.
pub fn singular_seeds(params: &ModelParams, level: u32) -> Vec<FockVector> {
    (0..)
        .take_while(|&n| singular_weight(params, n) <= level)
        .map(|n| singular_vector(params, n))
        .collect()
}

/// Some `w` of charge zero with `Q^n w = e^{nα}`, found by exact solve.
pub fn cosingular_witness(params: &ModelParams, n: u32) -> Result<FockVector> {
    let level = cosingular_weight(params, n);
    let target = params.lattice(n as i64 * params.p_i64());
    let m = operator_matrix(params, level, |v| screening_q_power(params, n, v), &target)?;
    let goal = params.exponential(n as i64 * params.p_i64());
    let tl = crate::exactlin::rational::to_i64(&(int(level as i64) - target.delta()))
        .expect("integral level") as u32;
    let rhs = goal.coordinates(tl);
    let x = m
        .solve(&rhs)
        .ok_or_else(|| Error::NoSolution(format!("Q^{n} w = e^({n} alpha) at level {level}")))?;
    Ok(FockVector::from_coordinates(params.vacuum_sector(), level, &x))
}

/// Coefficients expressing `v` through the given words applied to the
/// vacuum, level by level. The solver picks one representative; free
/// variables are zero in the supplied word order.
pub fn express_in_words(
    params: &ModelParams,
    v: &FockVector,
    words_at: impl Fn(u32) -> Vec<Vec<u32>>,
) -> Result<Vec<VirasoroWord>> {
    let vac = params.vacuum();
    let mut out = Vec::new();
    for level in v.levels() {
        let component = v.level_component(level);
        let words = words_at(level);
        let vectors: Vec<FockVector> = words
            .par_iter()
            .map(|parts| apply_word(params, parts, &vac))
            .collect();
        let m = coordinate_matrix(&vectors, level);
        let x = m.solve(&component.coordinates(level)).ok_or_else(|| {
            Error::NoSolution(format!("vector at level {level} is not a Virasoro descendant of 1"))
        })?;
        for (parts, c) in words.into_iter().zip(x) {
            if !c.is_zero() {
                out.push(VirasoroWord {
                    parts,
                    coefficient: c,
                });
            }
        }
    }
    Ok(out)
}

/// PBW expression of a vector of `ker Q` up to weight `max_weight`.
pub fn express_in_pbw(params: &ModelParams, v: &FockVector, max_weight: u32) -> Result<Vec<VirasoroWord>> {
    if let Some(top) = v.levels().last() {
        if *top > max_weight {
            return Err(Error::NoSolution(format!(
                "component of weight {top} exceeds the bound {max_weight}"
            )));
        }
    }
    express_in_words(params, v, |level| words_of_weight(level, 2))
}

/// `H_i H` for a range of `i`, keyed by `i`.
pub fn h_products(params: &ModelParams, lo: i64, hi: i64) -> Result<std::collections::BTreeMap<i64, FockVector>> {
    let h = Generators::new(params).h;
    products(params, &h, &h, lo, hi)
}

/// `Q(H_i H) = 0`.
pub fn hih_membership(params: &ModelParams, i: i64) -> Result<bool> {
    let h = Generators::new(params).h;
    let hih = product(params, &h, i, &h)?;
    Ok(screening_q(params, &hih)?.is_zero())
}

/// `H_{-n_1} ⋯ H_{-n_t} 1` with `n_1 >= … >= n_t >= 1`, of weight at most
/// `max_weight`, paired with their weights.
pub fn h_strings(params: &ModelParams, max_weight: u32) -> Result<Vec<(FockVector, u32)>> {
    let h = Generators::new(params).h;
    let hw = 2 * params.p() - 1;
    // Innermost operator first; later (outer) modes are at least as deep.
    let mut out = vec![(params.vacuum(), 0u32, 1u32)];
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (v, w, min_n) in &frontier {
            let mut n = *min_n;
            while w + hw + n - 1 <= max_weight {
                let nv = product(params, &h, -(n as i64), v)?;
                if !nv.is_zero() {
                    next.push((nv, w + hw + n - 1, n));
                }
                n += 1;
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out.into_iter().map(|(v, w, _)| (v, w)).collect())
}

/// The vectors `L(-m_1) ⋯ L(-m_s) H_{-n_1} ⋯ H_{-n_t} 1` (`m_i >= 2`,
/// `n_j >= 1`) at one level.
pub fn spanning_family(params: &ModelParams, level: u32) -> Result<Vec<FockVector>> {
    let strings = h_strings(params, level)?;
    let mut family = Vec::new();
    for (v, w) in &strings {
        let words = words_of_weight(level - w, 2);
        let vectors: Vec<FockVector> = words
            .par_iter()
            .map(|parts| apply_word(params, parts, v))
            .collect();
        family.extend(vectors);
    }
    Ok(family)
}

/// The spanning family equals `ker Q̃` at this level.
pub fn spanning_check(params: &ModelParams, level: u32) -> Result<bool> {
    let family = spanning_family(params, level)?;
    let k = kernel(params, ScreeningOp::QTilde, level)?;
    Ok(same_subspace(&family, &k.vectors, level))
}
