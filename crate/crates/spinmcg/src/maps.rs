//! The S¹-transfer `∂: QΣCP^∞_+ → QRP^∞_+`, the sphere-bundle transfer on
//! `QBSpin(2)_+`, and the assembly of the stable Betti numbers of the spin
//! mapping class group.

use std::fmt;
use std::str::FromStr;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyer_lashof::QGenerator;
use crate::gf2la::{kernel_of_images, BitVec, F2Subspace};
use crate::loopspace::{canonical_primitive, primitive_with_linear_part, LoopError, LoopModel, PrimitiveLabel};
use crate::qhopf::afunctor::{convolve, exterior_dims};
use crate::qhopf::kernel::{hopf_kernel_dims, ExteriorTarget};
use crate::qhopf::{AlgebraError, Element, Monomial, Normalization, QAlgebra};
use crate::space::{SpaceClass, SpaceId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("{0} does not have a doubled word")]
    NonDoubledWord(String),
    #[error("{0} is not a generator of the expected space")]
    WrongSource(String),
    #[error("generating space is not closed under squaring in degree {0}")]
    NotClosedUnderSquaring(u32),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// How the decomposable tail of `∂(ā_r)` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailPolicy {
    /// `e_{2r+1} + Q^{r+1} e_r`.
    Zero,
    /// `p_{2r+1} + p_{(r+1,r)}`, which is primitive.
    Primitive,
}

impl TailPolicy {
    pub const ALL: [TailPolicy; 2] = [TailPolicy::Zero, TailPolicy::Primitive];
}

impl fmt::Display for TailPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailPolicy::Zero => "zero",
            TailPolicy::Primitive => "primitive",
        })
    }
}

impl FromStr for TailPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(TailPolicy::Zero),
            "primitive" => Ok(TailPolicy::Primitive),
            _ => Err(format!("unknown tail policy `{s}` (expected zero or primitive)")),
        }
    }
}

pub fn rp_plus() -> &'static QAlgebra {
    QAlgebra::get(SpaceId::RPinf, Normalization::Plus)
}

pub fn scp_plus() -> &'static QAlgebra {
    QAlgebra::get(SpaceId::SigmaCPinf, Normalization::Plus)
}

pub fn bspin2_plus() -> &'static QAlgebra {
    QAlgebra::get(SpaceId::BSpin2, Normalization::Plus)
}

pub fn bspin3_plus() -> &'static QAlgebra {
    QAlgebra::get(SpaceId::BSpin3, Normalization::Plus)
}

fn e_gen(word: &[u32], index: u32) -> Element {
    Element::generator(QGenerator::new(SpaceClass::new(SpaceId::RPinf, index), word))
}

/// `∂(ā_r)` under the given tail policy.
pub fn partial_on_generator(r: u32, policy: TailPolicy) -> Result<Element, MapError> {
    match policy {
        TailPolicy::Zero => Ok(e_gen(&[], 2 * r + 1).add(&e_gen(&[r + 1], r))),
        TailPolicy::Primitive => {
            let alg = rp_plus();
            let a = canonical_primitive(alg, &PrimitiveLabel::new(&[], 2 * r + 1)?)?;
            let b = canonical_primitive(alg, &PrimitiveLabel::new(&[r + 1], r)?)?;
            Ok(a.add(&b))
        }
    }
}

/// `∂_*` extended multiplicatively and by `∂ Q^I = Q^I ∂`.
pub struct PartialMap {
    policy: TailPolicy,
    images: RwLock<FxHashMap<QGenerator, Element>>,
}

impl PartialMap {
    pub fn new(policy: TailPolicy) -> Self {
        PartialMap { policy, images: RwLock::new(FxHashMap::default()) }
    }

    pub fn policy(&self) -> TailPolicy {
        self.policy
    }

    pub fn on_generator(&self, g: QGenerator) -> Result<Element, MapError> {
        if g.space() != SpaceId::SigmaCPinf {
            return Err(MapError::WrongSource(g.render()));
        }
        if let Some(x) = self.images.read().get(&g) {
            return Ok(x.clone());
        }
        let base = partial_on_generator(g.base().index, self.policy)?;
        let x = rp_plus().apply_word(&g.word(), &base);
        self.images.write().insert(g, x.clone());
        Ok(x)
    }

    pub fn on_monomial(&self, m: &Monomial) -> Result<Element, MapError> {
        let mut out = Element::one();
        for &(g, e) in m.factors() {
            out = out.mul(&self.on_generator(g)?.pow(e));
        }
        Ok(out)
    }

    pub fn apply(&self, x: &Element) -> Result<Element, MapError> {
        let mut out = Element::zero();
        for m in x.terms() {
            out.add_assign(&self.on_monomial(m)?);
        }
        Ok(out)
    }

    /// Images of a family of source vectors in degree `n`, in target
    /// coordinates.
    fn images_of(&self, n: u32, vectors: &[BitVec]) -> Result<Vec<BitVec>, MapError> {
        let (sb, tb) = (scp_plus().basis(n), rp_plus().basis(n));
        vectors.iter().map(|v| Ok(tb.coords(&self.apply(&sb.element(v))?)?)).collect()
    }

    /// Rank of `∂_*` on all of degree `n`.
    pub fn rank(&self, n: u32) -> Result<usize, MapError> {
        let dim = scp_plus().basis(n).dim();
        let units: Vec<BitVec> = (0..dim).map(|i| BitVec::unit(dim, i)).collect();
        let images = self.images_of(n, &units)?;
        Ok(F2Subspace::span(rp_plus().basis(n).dim(), images).dim())
    }

    /// The image of the primitives in degree `n`, as a subspace of the
    /// primitives of the target.
    ///
    /// With primitive tails this is the image itself. With zero tails the
    /// values are not primitive: in odd degrees each value is replaced by
    /// the unique primitive with the same linear part; even degrees are
    /// spanned by the images of indecomposable primitives (taken modulo
    /// decomposables) and by squares of the image in half the degree.
    pub fn primitive_image(&self, n: u32) -> Result<PrimitiveImage, MapError> {
        let (src, tgt) = (scp_plus(), rp_plus());
        let tb = tgt.basis(n);
        let sources = src.primitives(n).basis().to_vec();
        let images = self.images_of(n, &sources)?;
        match self.policy {
            TailPolicy::Primitive => Ok(PrimitiveImage::Subspace(F2Subspace::span(tb.dim(), images))),
            TailPolicy::Zero if n % 2 == 1 => {
                let prim = images
                    .iter()
                    .map(|v| {
                        let y = tb.element(v);
                        if y.is_zero() {
                            return Ok(BitVec::zeros(tb.dim()));
                        }
                        Ok(tb.coords(&primitive_with_linear_part(tgt, &y)?)?)
                    })
                    .collect::<Result<Vec<_>, MapError>>()?;
                Ok(PrimitiveImage::Subspace(F2Subspace::span(tb.dim(), prim)))
            }
            TailPolicy::Zero => {
                let gens: Vec<usize> = tb.generator_positions().collect();
                let linear = images.iter().map(|v| {
                    BitVec::from_ones(gens.len(), gens.iter().enumerate().filter(|(_, &p)| v.get(p)).map(|(k, _)| k))
                });
                let lin_rank = F2Subspace::span(gens.len(), linear).dim();
                let half = if n >= 2 { self.primitive_image(n / 2)?.dim() } else { 0 };
                Ok(PrimitiveImage::Rank(lin_rank + half))
            }
        }
    }

    pub fn injectivity(&self, max_degree: u32) -> Result<Vec<InjectivityRow>, MapError> {
        (0..=max_degree)
            .map(|n| {
                let source_dim = scp_plus().basis(n).dim();
                let rank = if n == 0 { source_dim } else { self.rank(n)? };
                let prim_dim = if n == 0 { 0 } else { scp_plus().primitives(n).dim() };
                let prim_rank = if n == 0 { 0 } else { self.primitive_image(n)?.dim() };
                Ok(InjectivityRow { degree: n, source_dim, rank, primitive_dim: prim_dim, primitive_rank: prim_rank })
            })
            .collect()
    }
}

/// The image of primitives, either as an explicit subspace or, when only
/// its dimension is determined, as a rank.
#[derive(Clone, Debug)]
pub enum PrimitiveImage {
    Subspace(F2Subspace),
    Rank(usize),
}

impl PrimitiveImage {
    pub fn dim(&self) -> usize {
        match self {
            PrimitiveImage::Subspace(s) => s.dim(),
            PrimitiveImage::Rank(r) => *r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityRow {
    pub degree: u32,
    pub source_dim: usize,
    pub rank: usize,
    pub primitive_dim: usize,
    pub primitive_rank: usize,
}

impl InjectivityRow {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim && self.primitive_rank == self.primitive_dim
    }
}

/// `Sq^a_* ∂ = ∂ Sq^a_*` on every source generator up to `max_degree`;
/// returns the failures.
pub fn steenrod_naturality_failures(map: &PartialMap, max_degree: u32) -> Result<Vec<String>, MapError> {
    let (src, tgt) = (scp_plus(), rp_plus());
    let mut failures = Vec::new();
    for g in src.generators(max_degree).iter() {
        let x = Element::generator(*g);
        let image = map.on_generator(*g)?;
        for a in 1..=g.degree() / 2 {
            if tgt.sq(a, &image) != map.apply(&src.sq(a, &x))? {
                failures.push(format!("Sq^{a} on {g}"));
            }
        }
    }
    Ok(failures)
}

/// `(ι + c)_*(a_i) = sum_{r+s=i} a_r a_s`, untranslated: the value lies in
/// the component of `[2]`.
pub fn transfer_iota_plus_c(i: u32) -> Element {
    let a = |r| Element::generator(QGenerator::base_class(SpaceClass::new(SpaceId::BSpin2, r)));
    let mut out = Element::zero();
    for r in 0..=i {
        out.add_assign(&a(r).mul(&a(i - r)));
    }
    out
}

/// The composite `H_*(QBSpin(3)_+) → H_*(QBSpin(2)_+)` on `Q^{2I} b_i`,
/// computed as `Q^{2I}` applied to `(ι + c)_*(a_{2i})` and translated to the
/// zero component.
pub fn bspin3_composite(g: QGenerator) -> Result<Element, MapError> {
    if g.space() != SpaceId::BSpin3 {
        return Err(MapError::WrongSource(g.render()));
    }
    let word = g.word();
    if word.iter().any(|i| i % 2 == 1) {
        return Err(MapError::NonDoubledWord(g.render()));
    }
    let alg = bspin2_plus();
    let value = transfer_iota_plus_c(2 * g.base().index);
    Ok(alg.translate(&alg.raw_apply_word(&word, &value)))
}

/// `(Q^I a_i)^2`, the expected value of the composite on `Q^{2I} b_i`.
pub fn bspin3_composite_expected(g: QGenerator) -> Element {
    let half: Vec<u32> = g.word().iter().map(|i| i / 2).collect();
    let a = QGenerator::new(SpaceClass::new(SpaceId::BSpin2, g.base().index), &half);
    if a.degree() == 0 {
        return Element::one();
    }
    Element::monomial(Monomial::power(a, 2))
}

/// Dimensions of `ξH_*(Q_0 BSpin(2)_+)`: squares of the whole algebra.
pub fn kernel_poincare(max_degree: u32) -> Vec<usize> {
    let alg = bspin2_plus();
    (0..=max_degree).map(|n| if n % 2 == 0 { alg.basis(n / 2).dim() } else { 0 }).collect()
}

/// The Hopf kernel of `Ω∂_*` on `H_*(Q_0 BSpin(2)_+)`, modelled by sending
/// `Q^I a_i` to the desuspension of `Q^I ∂(ā_i)` in an exterior algebra on
/// the span of these classes.
pub fn loop_partial_kernel_dims(policy: TailPolicy, max_degree: u32) -> Result<Vec<usize>, MapError> {
    let alg = bspin2_plus();
    let tgt = rp_plus();
    let mut values: FxHashMap<QGenerator, BitVec> = FxHashMap::default();
    for q in 1..=max_degree {
        let tb = tgt.basis(q + 1);
        let gens = alg.generators_of_degree(q);
        let mut vecs = Vec::new();
        for g in &gens {
            let source = QGenerator::new(SpaceClass::new(SpaceId::SigmaCPinf, g.base().index), &g.word());
            let base = partial_on_generator(source.base().index, policy)?;
            let y = tgt.apply_word(&source.word(), &base);
            vecs.push(tb.coords(&y)?);
        }
        // Coordinates in a basis of the span W_q.
        let span = F2Subspace::span(tb.dim(), vecs.iter().cloned());
        for (g, v) in gens.iter().zip(&vecs) {
            let c = span.coordinates(v).expect("vector lies in its span");
            values.insert(*g, c);
        }
    }
    Ok(hopf_kernel_dims(alg, &ExteriorTarget::new(values), max_degree)?)
}

/// The generating space of the kernel Hopf algebra, in homology: for each
/// `k`, the level-2 classes `D_{k-2} ⊆ PH_k` modulo the image of `P∂_*`.
#[derive(Clone, Debug, Serialize)]
pub struct CokernelRow {
    /// Degree in `H_*(QRP^∞_+)`.
    pub degree: u32,
    /// Degree after double desuspension.
    pub loop_degree: u32,
    pub model_dim: usize,
    pub image_dim: usize,
    pub generators: usize,
}

pub struct CokernelReport {
    pub rows: Vec<CokernelRow>,
    pub closed_under_squaring: bool,
}

impl CokernelReport {
    /// Generator degrees with multiplicity, in loop degrees.
    pub fn generator_degrees(&self) -> Vec<u32> {
        self.rows.iter().flat_map(|r| std::iter::repeat(r.loop_degree).take(r.generators)).collect()
    }
}

/// `U_k = dim D − dim(D ∩ Im P∂_k)` for `3 ≤ k ≤ max_degree + 2`, with a
/// closure check: squaring preserves the generating space exactly when
/// `μ(D ∩ Im) ⊆ D ∩ Im`.
pub fn cokernel_generators(policy: TailPolicy, max_degree: u32) -> Result<CokernelReport, MapError> {
    let alg = rp_plus();
    let map = PartialMap::new(policy);
    let level2 = LoopModel::first(alg, max_degree + 1).next()?;
    let mut rows = Vec::new();
    let mut meets: FxHashMap<u32, Option<F2Subspace>> = FxHashMap::default();
    for d in 1..=max_degree {
        let k = d + 2;
        let model = level2.space(d);
        let image = map.primitive_image(k)?;
        let (image_dim, meet) = match &image {
            PrimitiveImage::Subspace(s) => {
                let dim = model.intersection_dim(s);
                (dim, Some(intersection(model, s)))
            }
            // Only in even degrees, where the model is all of PH_k and the
            // image lies inside it.
            PrimitiveImage::Rank(r) => (*r, None),
        };
        meets.insert(d, meet);
        rows.push(CokernelRow {
            degree: k,
            loop_degree: d,
            model_dim: model.dim(),
            image_dim,
            generators: model.dim() - image_dim,
        });
    }
    let mut closed = true;
    for d in 1..=max_degree / 2 {
        let (Some(Some(big)), Some(Some(small))) = (meets.get(&(2 * d)), meets.get(&d)) else {
            // The zero-tail policy does not determine these subspaces; the
            // check is made with primitive tails.
            continue;
        };
        let (sb, tb) = (alg.basis(2 * d + 2), alg.basis(d + 2));
        for v in big.basis() {
            let y = alg.sq(d, &sb.element(v));
            if !small.contains(&tb.coords(&y)?) {
                closed = false;
            }
        }
    }
    Ok(CokernelReport { rows, closed_under_squaring: closed })
}

fn intersection(a: &F2Subspace, b: &F2Subspace) -> F2Subspace {
    // x = sum α_i a_i = sum β_j b_j: kernel of the stacked family.
    let n = a.ambient_dim();
    let family: Vec<BitVec> = a.basis().iter().chain(b.basis()).cloned().collect();
    let rel = kernel_of_images(n, &family);
    let vecs = rel.iter().map(|r| {
        let mut v = BitVec::zeros(n);
        for k in r.ones().filter(|&k| k < a.dim()) {
            v.xor_assign(&a.basis()[k]);
        }
        v
    });
    F2Subspace::span(n, vecs)
}

/// Per-degree dimensions with the two tensor factors they come from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BettiTable {
    pub max_degree: u32,
    pub policy: TailPolicy,
    /// Exterior algebra on the double desuspension of the cokernel
    /// generators.
    pub kernel_factor: Vec<usize>,
    /// `ξH_*(Q_0 BSpin(2)_+)`.
    pub xi_factor: Vec<usize>,
    pub rows: Vec<BettiRow>,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BettiRow {
    pub degree: u32,
    pub dim: usize,
    /// `(p, kernel_p * xi_{n-p})` for each nonzero contribution.
    pub terms: Vec<(u32, usize)>,
}

impl BettiTable {
    pub fn dims(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.dim).collect()
    }
}

/// Stable Betti numbers through `max_degree`, as the graded tensor product
/// of the kernel Hopf algebra with `ξH_*(Q_0 BSpin(2)_+)`.
pub fn spin_betti(policy: TailPolicy, max_degree: u32) -> Result<BettiTable, MapError> {
    let coker = cokernel_generators(policy, max_degree)?;
    if !coker.closed_under_squaring {
        return Err(MapError::NotClosedUnderSquaring(max_degree));
    }
    let kernel_factor = exterior_dims(&coker.generator_degrees(), max_degree);
    let xi_factor = kernel_poincare(max_degree);
    let total = convolve(&kernel_factor, &xi_factor, max_degree);
    let rows = (0..=max_degree)
        .map(|n| BettiRow {
            degree: n,
            dim: total[n as usize],
            terms: (0..=n)
                .map(|p| (p, kernel_factor[p as usize] * xi_factor[(n - p) as usize]))
                .filter(|&(_, c)| c > 0)
                .collect(),
        })
        .collect();
    Ok(BettiTable {
        max_degree,
        policy,
        kernel_factor,
        xi_factor,
        rows,
        provenance: format!(
            "exterior algebra on cokernel generators (tail policy {policy}) tensor squares of H_*(Q_0 BSpin(2)_+); \
             zero-component normalization by translation"
        ),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub degree: u32,
    pub betti: usize,
    pub bound: usize,
}

/// `dim H_n ≤ sum_{p+q=n} dim H_p(Ω^2_0 QRP^∞_+) dim H_q(Q_0 BSpin(3)_+)`.
pub fn betti_bound_check(policy: TailPolicy, max_degree: u32) -> Result<Vec<BoundRow>, MapError> {
    let betti = spin_betti(policy, max_degree)?;
    let level2 = LoopModel::first(rp_plus(), max_degree + 1).next()?;
    let loop_dims = exterior_dims(&level2.generator_degrees(), max_degree);
    let b3 = bspin3_plus();
    let b3_dims: Vec<usize> = (0..=max_degree).map(|n| b3.basis(n).dim()).collect();
    let bound = convolve(&loop_dims, &b3_dims, max_degree);
    Ok(betti
        .rows
        .iter()
        .map(|r| BoundRow { degree: r.degree, betti: r.dim, bound: bound[r.degree as usize] })
        .collect())
}
