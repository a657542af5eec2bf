//! Canonical primitives of `H_*(QRP^∞_+)`, the operations `λ, λ', λ''` on
//! them, and the homology-side models of the first two loop spaces.
//!
//! A level-`L` model records, for each `d ≥ 1`, a subspace `D_d` of
//! `PH_{d+L}` dual to the degree-`d` cohomology generators, and the map
//! `μ = Sq^d_*: D_{2d} → D_d` dual to the squaring operation on generators.
//! Level 1 has `D_d = PH_{d+1}`. Passing from level 1 to level 2 keeps
//! `D_e` for odd `e` and replaces it by `Ker(μ|D_e)` for even `e`, then
//! shifts degrees down by one.

use std::fmt;

use thiserror::Error;

use crate::dyer_lashof::{excess, is_admissible, Excess, Indices, QGenerator};
use crate::gf2la::{BitVec, Echelon, F2Subspace};
use crate::qhopf::afunctor::AFunctorPresentation;
use crate::qhopf::{AlgebraError, Element, Normalization, QAlgebra};
use crate::space::{LambdaKind, SpaceClass, SpaceId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error("invalid primitive label {0}")]
    InvalidLabel(String),
    #[error("no primitive with linear part {0}")]
    NoSolution(String),
    #[error("more than one primitive with linear part {0}")]
    NonUnique(String),
    #[error("canonical primitives of degree {degree} do not form a basis: rank {rank}, dim {dim}")]
    BasisMismatch { degree: u32, rank: usize, dim: usize },
    #[error("squaring map leaves the model in degree {0}")]
    NotClosed(u32),
    #[error("level {0} model is not polynomial, cannot loop again")]
    NotPolynomial(u8),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A label `(I, i)` of a canonical primitive `p_{(I,i)}` of degree `|I| + i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveLabel {
    word: Indices,
    index: u32,
}

impl PrimitiveLabel {
    /// Requires `I` admissible, `e(I) ≥ i` and not every entry even.
    pub fn new(word: &[u32], index: u32) -> Result<Self, LoopError> {
        let label = PrimitiveLabel { word: word.iter().copied().collect(), index };
        let excess_ok = match excess(word) {
            Excess::Infinite => true,
            Excess::Finite(e) => e >= index as i64,
        };
        let all_even = index % 2 == 0 && word.iter().all(|i| i % 2 == 0);
        if word.contains(&0) || !is_admissible(word) || !excess_ok || all_even {
            return Err(LoopError::InvalidLabel(label.to_string()));
        }
        Ok(label)
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn degree(&self) -> u32 {
        self.word.iter().sum::<u32>() + self.index
    }
}

impl fmt::Display for PrimitiveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "p_{}", self.index);
        }
        let parts: Vec<String> = self.word.iter().chain([&self.index]).map(u32::to_string).collect();
        write!(f, "p_({})", parts.join(","))
    }
}

fn rp_class(index: u32) -> SpaceClass {
    SpaceClass::new(SpaceId::RPinf, index)
}

/// Smallest base index allowed in the model.
fn min_index(alg: &QAlgebra) -> u32 {
    match alg.normalization() {
        Normalization::Plus => 0,
        Normalization::Reduced => 1,
    }
}

/// All labels of degree `n` for the given model of `QRP^∞`.
pub fn labels(alg: &QAlgebra, n: u32) -> Vec<PrimitiveLabel> {
    fn words(total: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
        if total == 0 {
            out.push(cur.clone());
            return;
        }
        for s in 1..=total {
            cur.push(s);
            words(total - s, out, cur);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for i in min_index(alg)..=n {
        let mut ws = Vec::new();
        words(n - i, &mut ws, &mut Vec::new());
        out.extend(ws.iter().filter_map(|w| PrimitiveLabel::new(w, i).ok()));
    }
    out.sort();
    out
}

/// The unique primitive in degree `deg x` whose linear part is that of `x`.
/// Only odd degrees have unique solutions.
pub fn primitive_with_linear_part(alg: &QAlgebra, x: &Element) -> Result<Element, LoopError> {
    let target = x.linear_part();
    let n = x.degree().ok_or(AlgebraError::NotHomogeneous)?;
    let basis = alg.basis(n);
    let gens: Vec<usize> = basis.generator_positions().collect();
    let project = |v: &BitVec| BitVec::from_ones(gens.len(), gens.iter().enumerate().filter(|(_, &g)| v.get(g)).map(|(k, _)| k));
    let prim = alg.primitives(n);
    let goal = project(&basis.coords(&target)?);
    // Tags record which primitive basis vectors combine to a given linear
    // part; a relation among them means the solution is not unique.
    let images: Vec<BitVec> = prim.basis().iter().map(&project).collect();
    let mut ech = Echelon::new(gens.len());
    let mut unique = true;
    for (k, img) in images.iter().enumerate() {
        unique &= ech.insert_tagged(img.clone(), BitVec::unit(images.len(), k)).is_none();
    }
    let rendered = target.render();
    let Some(combination) = ech.insert_tagged(goal, BitVec::zeros(images.len())) else {
        return Err(LoopError::NoSolution(rendered));
    };
    if !unique {
        return Err(LoopError::NonUnique(rendered));
    }
    let mut v = BitVec::zeros(basis.dim());
    for k in combination.ones() {
        v.xor_assign(&prim.basis()[k]);
    }
    Ok(basis.element(&v))
}

/// The canonical primitive `p_{(I,i)}`.
///
/// With `j` the last odd entry of `(I, i)`: if `j = i` then
/// `p_{(I,i)} = Q^I p_i`, where `p_i` is the primitive with linear part
/// `e_i`; otherwise `I = (I', j, I'')` and `p_{(I,i)} = Q^{I'} p`, where `p`
/// is the primitive with linear part `Q^{(j, I'')} e_i`.
pub fn canonical_primitive(alg: &QAlgebra, label: &PrimitiveLabel) -> Result<Element, LoopError> {
    if alg.space() != SpaceId::RPinf || label.index < min_index(alg) {
        return Err(LoopError::InvalidLabel(label.to_string()));
    }
    let word = label.word();
    if label.index % 2 == 1 {
        let base = alg.raw_base(rp_class(label.index));
        let p = primitive_with_linear_part(alg, &base)?;
        return Ok(alg.apply_word(word, &p));
    }
    let c = word.iter().rposition(|i| i % 2 == 1).expect("label has an odd entry");
    let lead = Element::generator(QGenerator::new(rp_class(label.index), &word[c..]));
    let p = primitive_with_linear_part(alg, &lead)?;
    Ok(alg.apply_word(&word[..c], &p))
}

/// Labels of degree `n`, checked to give a basis of the primitives.
pub fn primitive_basis(alg: &QAlgebra, n: u32) -> Result<Vec<(PrimitiveLabel, Element)>, LoopError> {
    let basis = alg.basis(n);
    let out: Vec<(PrimitiveLabel, Element)> = labels(alg, n)
        .into_iter()
        .map(|l| canonical_primitive(alg, &l).map(|p| (l, p)))
        .collect::<Result<_, _>>()?;
    let coords: Vec<BitVec> = out.iter().map(|(_, p)| basis.coords(p)).collect::<Result<_, _>>()?;
    let span = F2Subspace::span(basis.dim(), coords);
    let prim = alg.primitives(n);
    if span.dim() != out.len() || span != *prim {
        return Err(LoopError::BasisMismatch { degree: n, rank: span.dim(), dim: prim.dim() });
    }
    Ok(out)
}

/// Outcome of a surjectivity check in one target degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCheck {
    pub source_degree: u32,
    pub target_degree: u32,
    pub rank: usize,
    pub target_dim: usize,
}

impl RankCheck {
    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }
}

fn target_degree(kind: LambdaKind, n: u32) -> Option<u32> {
    kind.index_for(n).map(|k| n - k)
}

/// `λ` on indecomposables, `QH_{2k} → QH_k`, for source degrees up to
/// `max_degree`.
pub fn lambda_on_indecomposables(alg: &QAlgebra, max_degree: u32) -> Result<Vec<RankCheck>, LoopError> {
    let mut out = Vec::new();
    for n in (2..=max_degree).step_by(2) {
        let t = n / 2;
        let tb = alg.basis(t);
        let gens: Vec<usize> = tb.generator_positions().collect();
        let mut ech = Echelon::new(gens.len());
        for g in alg.generators_of_degree(n) {
            let v = tb.coords(&alg.lambda(LambdaKind::Lambda, &Element::generator(g))?)?;
            ech.insert(BitVec::from_ones(gens.len(), gens.iter().enumerate().filter(|(_, &p)| v.get(p)).map(|(k, _)| k)));
        }
        out.push(RankCheck { source_degree: n, target_degree: t, rank: ech.rank(), target_dim: gens.len() });
    }
    Ok(out)
}

/// An operation from the `λ` family on primitives, for source degrees up to
/// `max_degree`.
pub fn lambda_on_primitives(alg: &QAlgebra, kind: LambdaKind, max_degree: u32) -> Result<Vec<RankCheck>, LoopError> {
    let mut out = Vec::new();
    for n in 1..=max_degree {
        let Some(t) = target_degree(kind, n) else { continue };
        if t == 0 || t >= n {
            continue;
        }
        let tb = alg.basis(t);
        let image = alg
            .primitive_elements(n)
            .iter()
            .map(|p| Ok(tb.coords(&alg.lambda(kind, p)?)?))
            .collect::<Result<Vec<_>, LoopError>>()?;
        let rank = F2Subspace::span(tb.dim(), image).dim();
        out.push(RankCheck { source_degree: n, target_degree: t, rank, target_dim: alg.primitives(t).dim() });
    }
    Ok(out)
}

/// The failure of `λ''` to be onto the kernel of `λ'`: the element
/// `p_{(2,1)} + p_3` of `Ker λ'` in degree 3 is not in `λ''(PH_4)`.
#[derive(Clone, Debug)]
pub struct LambdaDoubleWitness {
    pub label: String,
    pub element: Element,
    pub in_kernel_of_lambda_prime: bool,
    pub hit_by_lambda_double: bool,
    pub lambda_prime_of_p3: Element,
    pub degree4_primitives: Vec<Element>,
}

pub fn lambda_double_witness(alg: &QAlgebra) -> Result<LambdaDoubleWitness, LoopError> {
    let p21 = canonical_primitive(alg, &PrimitiveLabel::new(&[2], 1)?)?;
    let p3 = canonical_primitive(alg, &PrimitiveLabel::new(&[], 3)?)?;
    let w = p21.add(&p3);
    let in_kernel = alg.lambda(LambdaKind::LambdaPrime, &w)?.is_zero();
    let b3 = alg.basis(3);
    let image = alg
        .primitive_elements(4)
        .iter()
        .map(|p| Ok(b3.coords(&alg.lambda(LambdaKind::LambdaDouble, p)?)?))
        .collect::<Result<Vec<_>, LoopError>>()?;
    let hit = F2Subspace::span(b3.dim(), image).contains(&b3.coords(&w)?);
    Ok(LambdaDoubleWitness {
        label: "p_(2,1) + p_3".to_string(),
        element: w,
        in_kernel_of_lambda_prime: in_kernel,
        hit_by_lambda_double: hit,
        lambda_prime_of_p3: alg.lambda(LambdaKind::LambdaPrime, &p3)?,
        degree4_primitives: alg.primitive_elements(4),
    })
}

/// A homology-side model of `Ω^L Q_0 X`, `L = 1, 2`.
#[derive(Clone, Debug)]
pub struct LoopModel {
    level: u8,
    alg: &'static QAlgebra,
    max_degree: u32,
    /// `spaces[d]` is `D_d` inside `basis(d + level)`; index 0 unused.
    spaces: Vec<F2Subspace>,
}

/// Rank of `μ: D_{2d} → D_d` and whether the generator count exceeds it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquaringCheck {
    pub degree: u32,
    pub dim: usize,
    pub rank: usize,
}

impl SquaringCheck {
    /// Generators of this degree whose square is zero.
    pub fn square_zero_generators(&self) -> usize {
        self.dim - self.rank
    }
}

impl LoopModel {
    /// The first loop space: `D_d = PH_{d+1}`, for `d ≤ max_degree`.
    pub fn first(alg: &'static QAlgebra, max_degree: u32) -> Self {
        let spaces = (0..=max_degree)
            .map(|d| if d == 0 { F2Subspace::zero(0) } else { (*alg.primitives(d + 1)).clone() })
            .collect();
        LoopModel { level: 1, alg, max_degree, spaces }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn space(&self, d: u32) -> &F2Subspace {
        &self.spaces[d as usize]
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|d| if d == 0 { 0 } else { self.space(d).dim() }).collect()
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        (1..=self.max_degree).flat_map(|d| std::iter::repeat(d).take(self.space(d).dim())).collect()
    }

    fn ambient(&self, d: u32) -> u32 {
        d + self.level as u32
    }

    /// `μ` on the basis of `D_{2d}`, in coordinates of the basis of `D_d`.
    pub fn mu_matrix(&self, d: u32) -> Result<Vec<BitVec>, LoopError> {
        let src = self.space(2 * d);
        let (sb, tb) = (self.alg.basis(self.ambient(2 * d)), self.alg.basis(self.ambient(d)));
        let target = self.space(d);
        src.basis()
            .iter()
            .map(|v| {
                let y = self.alg.sq(d, &sb.element(v));
                let c = tb.coords(&y)?;
                target.coordinates(&c).ok_or(LoopError::NotClosed(d))
            })
            .collect()
    }

    /// Rank of `μ` into each `D_d` with `2d ≤ max_degree`.
    pub fn squaring_checks(&self) -> Result<Vec<SquaringCheck>, LoopError> {
        (1..=self.max_degree / 2)
            .map(|d| {
                let m = self.mu_matrix(d)?;
                let dim = self.space(d).dim();
                let rank = F2Subspace::span(dim, m).dim();
                Ok(SquaringCheck { degree: d, dim, rank })
            })
            .collect()
    }

    /// The cohomology is polynomial exactly when squaring is injective on
    /// generators, i.e. `μ` is onto in every degree.
    pub fn is_polynomial(&self) -> Result<bool, LoopError> {
        Ok(self.squaring_checks()?.iter().all(|c| c.rank == c.dim))
    }

    /// The next loop space. Degrees shrink by one.
    pub fn next(&self) -> Result<LoopModel, LoopError> {
        if self.level >= 2 {
            return Err(LoopError::NotPolynomial(self.level));
        }
        let max = self.max_degree - 1;
        let mut spaces = vec![F2Subspace::zero(0)];
        for d in 1..=max {
            let e = d + 1;
            let space = self.space(e);
            if e % 2 == 1 {
                spaces.push(space.clone());
                continue;
            }
            let half = e / 2;
            let (sb, tb) = (self.alg.basis(self.ambient(e)), self.alg.basis(self.ambient(half)));
            let images: Vec<BitVec> = space
                .basis()
                .iter()
                .map(|v| Ok(tb.coords(&self.alg.sq(half, &sb.element(v)))?))
                .collect::<Result<_, LoopError>>()?;
            let rel = crate::gf2la::kernel_of_images(tb.dim(), &images);
            let vecs = rel.iter().map(|r| {
                let mut v = BitVec::zeros(sb.dim());
                for k in r.ones() {
                    v.xor_assign(&space.basis()[k]);
                }
                v
            });
            spaces.push(F2Subspace::span(sb.dim(), vecs));
        }
        Ok(LoopModel { level: self.level + 1, alg: self.alg, max_degree: max, spaces })
    }

    /// The cohomology presentation `(V, ξ)`: generators dual to the bases of
    /// `D_d`, and `ξ` the transpose of `μ`.
    pub fn presentation(&self) -> Result<AFunctorPresentation, LoopError> {
        let mut offsets = vec![0usize; self.max_degree as usize + 2];
        for d in 1..=self.max_degree {
            offsets[d as usize + 1] = offsets[d as usize] + self.space(d).dim();
        }
        let degrees = self.generator_degrees();
        let mut xi = vec![Vec::new(); degrees.len()];
        for d in 1..=self.max_degree / 2 {
            for (i, col) in self.mu_matrix(d)?.iter().enumerate() {
                for j in col.ones() {
                    xi[offsets[d as usize] + j].push(offsets[2 * d as usize] + i);
                }
            }
        }
        AFunctorPresentation::new(degrees, xi).map_err(|_| LoopError::NotClosed(0))
    }

    /// A level-`L` class in `D_d` with zero square, with its ambient degree,
    /// if any.
    pub fn square_zero_witness(&self) -> Result<Option<(u32, Element)>, LoopError> {
        for c in self.squaring_checks()? {
            if c.rank < c.dim {
                let d = c.degree;
                let image = F2Subspace::span(self.space(d).dim(), self.mu_matrix(d)?);
                let basis = self.space(d).basis();
                // A basis vector of D_d outside the image of μ: dually, a
                // generator with vanishing square.
                for (k, v) in basis.iter().enumerate() {
                    if !image.contains(&BitVec::unit(basis.len(), k)) {
                        return Ok(Some((d, self.alg.basis(self.ambient(d)).element(v))));
                    }
                }
            }
        }
        Ok(None)
    }
}
