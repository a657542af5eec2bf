//! The Hopf algebra `H_*(Q_0 X_+)` as a polynomial algebra on the
//! generators `Q^I x`, with Dyer-Lashof operations, the dual Steenrod
//! action, the coproduct, primitives and indecomposables.
//!
//! Elements are written in translated coordinates: a generator symbol `g`
//! stands for `g * [-w(g)]`, where `w(Q^I x) = 2^len(I)` is the component of
//! `Q^I x` and `[-w]` is the inverse point class. Computations on
//! generators are carried out untranslated ("raw"), where the degree-zero
//! class is an ordinary generator, and then translated by setting it to 1.
//! Coproducts and Steenrod operations commute with translation;
//! Dyer-Lashof operations pick up a correction from the inverse point
//! classes, see [`QAlgebra::q`].

mod basis;
pub mod afunctor;
pub mod element;
pub mod kernel;
pub mod monomial;

use std::sync::{Arc, OnceLock};

use parking_lot::RwLock;
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

pub use basis::DegreeBasis;
pub use element::{Element, Tensor};
pub use monomial::Monomial;

use crate::dyer_lashof::{adem_pairs, generator_set, QGenerator};
use crate::gf2la::F2Subspace;
use crate::space::{self, LambdaKind, SpaceClass, SpaceId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements over different spaces: {0} and {1}")]
    SpaceMismatch(SpaceId, SpaceId),
    #[error("{op} is not defined in degree {degree}")]
    ParityMismatch { op: &'static str, degree: u32 },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("monomial {monomial} is not in the degree-{degree} basis")]
    NotInBasis { degree: u32, monomial: String },
    #[error("map has no value on generator {0}")]
    InsufficientGeneratorData(String),
}

/// Which version of the algebra is modelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Normalization {
    /// `H_*(Q_0 X_+)`: the degree-zero class is a generator before
    /// translation, so the operations `Q^I x_0` survive.
    Plus,
    /// `H_*(Q_0 X)`: the degree-zero class is the basepoint, i.e. the unit.
    Reduced,
}

type Cache<K> = RwLock<FxHashMap<K, Arc<Element>>>;

pub struct QAlgebra {
    space: SpaceId,
    norm: Normalization,
    raw_q_gen: Cache<(u32, QGenerator)>,
    raw_q_mono: Cache<(u32, Monomial)>,
    raw_sq_gen: Cache<(u32, QGenerator)>,
    q_gen: Cache<(u32, QGenerator)>,
    q_mono: Cache<(u32, Monomial)>,
    sq_mono: Cache<(u32, Monomial)>,
    psi_gen: RwLock<FxHashMap<QGenerator, Arc<Tensor>>>,
    inverse_series: RwLock<Vec<Element>>,
    generators: RwLock<(u32, Arc<Vec<QGenerator>>)>,
    bases: RwLock<FxHashMap<u32, Arc<DegreeBasis>>>,
    primitives: RwLock<FxHashMap<u32, Arc<F2Subspace>>>,
}

impl std::fmt::Debug for QAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QAlgebra({}, {:?})", self.space, self.norm)
    }
}

static INSTANCES: OnceLock<Vec<QAlgebra>> = OnceLock::new();

impl QAlgebra {
    pub fn new(space: SpaceId, norm: Normalization) -> Self {
        QAlgebra {
            space,
            norm,
            raw_q_gen: Default::default(),
            raw_q_mono: Default::default(),
            raw_sq_gen: Default::default(),
            q_gen: Default::default(),
            q_mono: Default::default(),
            sq_mono: Default::default(),
            psi_gen: Default::default(),
            inverse_series: RwLock::new(vec![Element::one()]),
            generators: RwLock::new((0, Arc::new(Vec::new()))),
            bases: Default::default(),
            primitives: Default::default(),
        }
    }

    /// Shared, cached instance.
    pub fn get(space: SpaceId, norm: Normalization) -> &'static QAlgebra {
        let all = INSTANCES.get_or_init(|| {
            SpaceId::ALL
                .iter()
                .flat_map(|&s| [Normalization::Plus, Normalization::Reduced].map(|n| QAlgebra::new(s, n)))
                .collect()
        });
        all.iter().find(|a| a.space == space && a.norm == norm).expect("instance exists")
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn normalization(&self) -> Normalization {
        self.norm
    }

    /// True when the degree-zero class is a generator before translation.
    pub fn has_point_generator(&self) -> bool {
        self.space.has_point_class() && self.norm == Normalization::Plus
    }

    pub fn point_class(&self) -> Option<QGenerator> {
        self.space
            .has_point_class()
            .then(|| QGenerator::base_class(SpaceClass::new(self.space, 0)))
    }

    fn is_unit_class(&self, c: SpaceClass) -> bool {
        c.degree() == 0 && self.norm == Normalization::Reduced
    }

    /// A base class as a raw element; in the reduced model the degree-zero
    /// class is the unit.
    pub fn raw_base(&self, c: SpaceClass) -> Element {
        if self.is_unit_class(c) {
            Element::one()
        } else {
            Element::generator(QGenerator::base_class(c))
        }
    }

    /// Whether `g` is a positive-degree generator of this model.
    pub fn is_model_generator(&self, g: QGenerator) -> bool {
        g.space() == self.space
            && g.degree() > 0
            && g.is_polynomial_generator()
            && !(self.norm == Normalization::Reduced && g.base().degree() == 0)
    }

    /// Positive-degree generators up to `max_degree`, sorted.
    pub fn generators(&self, max_degree: u32) -> Arc<Vec<QGenerator>> {
        {
            let cached = self.generators.read();
            if cached.0 >= max_degree && !cached.1.is_empty() {
                return Arc::new(cached.1.iter().copied().filter(|g| g.degree() <= max_degree).collect());
            }
        }
        let gens: Vec<QGenerator> = generator_set(self.space, max_degree)
            .into_iter()
            .filter(|&g| self.is_model_generator(g))
            .collect();
        let gens = Arc::new(gens);
        let mut w = self.generators.write();
        if w.0 < max_degree || w.1.is_empty() {
            *w = (max_degree, gens.clone());
        }
        gens
    }

    pub fn generators_of_degree(&self, n: u32) -> Vec<QGenerator> {
        self.generators(n).iter().copied().filter(|g| g.degree() == n).collect()
    }

    /// Sets degree-zero generators to 1.
    pub fn translate(&self, x: &Element) -> Element {
        if self.has_point_generator() {
            x.drop_point_classes()
        } else {
            x.clone()
        }
    }

    fn cached<K: std::hash::Hash + Eq + Clone>(
        cache: &Cache<K>,
        key: K,
        compute: impl FnOnce() -> Element,
    ) -> Arc<Element> {
        if let Some(v) = cache.read().get(&key) {
            return v.clone();
        }
        let v = Arc::new(compute());
        cache.write().entry(key).or_insert(v).clone()
    }

    // ---- raw Dyer-Lashof operations -------------------------------------

    /// Raw `Q^s` on a generator in normal form.
    fn raw_q_gen(&self, s: u32, g: QGenerator) -> Arc<Element> {
        Self::cached(&self.raw_q_gen, (s, g), || {
            let d = g.degree();
            if d == 0 {
                // The point class of the plus model.
                return if s == 0 { Element::monomial(Monomial::power(g, 2)) } else { Element::generator(g.prepend(s)) };
            }
            if s < d {
                return Element::zero();
            }
            if s == d {
                return Element::monomial(Monomial::power(g, 2));
            }
            match g.first() {
                Some(i1) if s > 2 * i1 => {
                    let inner = g.tail();
                    let mut out = Element::zero();
                    for (a, b) in adem_pairs(s, i1) {
                        let y = self.raw_q_gen_or_unit(b, inner);
                        out.add_assign(&self.raw_q(a, &y));
                    }
                    out
                }
                _ => Element::generator(g.prepend(s)),
            }
        })
    }

    /// `Q^s` of a base class or generator, honouring the unit convention.
    fn raw_q_gen_or_unit(&self, s: u32, g: QGenerator) -> Element {
        if g.is_base() && self.is_unit_class(g.base()) {
            return if s == 0 { Element::one() } else { Element::zero() };
        }
        (*self.raw_q_gen(s, g)).clone()
    }

    fn raw_q_mono(&self, s: u32, m: &Monomial) -> Arc<Element> {
        if m.is_one() {
            return Arc::new(if s == 0 { Element::one() } else { Element::zero() });
        }
        if let Some(g) = m.as_generator() {
            return self.raw_q_gen(s, g);
        }
        if s < m.degree() {
            return Arc::new(Element::zero());
        }
        Self::cached(&self.raw_q_mono, (s, m.clone()), || {
            if let Some(root) = m.sqrt() {
                return if s % 2 == 1 { Element::zero() } else { self.raw_q_mono(s / 2, &root).square() };
            }
            let (g, rest) = m.split_first().expect("nonunit monomial");
            let mut out = Element::zero();
            for i in g.degree()..=s - rest.degree() {
                let a = self.raw_q_gen(i, g);
                if a.is_zero() {
                    continue;
                }
                let b = self.raw_q_mono(s - i, &rest);
                out.add_assign(&a.mul(&b));
            }
            out
        })
    }

    /// Raw `Q^s` on any element (untranslated).
    pub fn raw_q(&self, s: u32, x: &Element) -> Element {
        let mut out = Element::zero();
        for m in x.terms() {
            out.add_assign(&self.raw_q_mono(s, m));
        }
        out
    }

    /// Raw `Q^I` with the innermost (last) index applied first.
    pub fn raw_apply_word(&self, word: &[u32], x: &Element) -> Element {
        word.iter().rev().fold(x.clone(), |acc, &s| self.raw_q(s, &acc))
    }

    // ---- raw dual Steenrod operations -----------------------------------

    /// Raw `Sq^a_*` on a generator, by the Nishida relations.
    fn raw_sq_gen(&self, a: u32, g: QGenerator) -> Arc<Element> {
        if a == 0 {
            return Arc::new(Element::generator(g));
        }
        Self::cached(&self.raw_sq_gen, (a, g), || {
            if g.is_base() {
                return match space::steenrod_dual(a, g.base()) {
                    Some(c) => self.raw_base(c),
                    None => Element::zero(),
                };
            }
            let r = g.first().expect("word") as i64;
            let inner = g.tail();
            let a = a as i64;
            let mut out = Element::zero();
            for b in 0..=a / 2 {
                if !space::binom2(r - a, a - 2 * b) {
                    continue;
                }
                let y = if inner.is_base() && self.is_unit_class(inner.base()) {
                    if b == 0 { Element::one() } else { Element::zero() }
                } else {
                    (*self.raw_sq_gen(b as u32, inner)).clone()
                };
                out.add_assign(&self.raw_q((r - a + b) as u32, &y));
            }
            out
        })
    }

    fn sq_mono(&self, a: u32, m: &Monomial) -> Arc<Element> {
        if a == 0 {
            return Arc::new(Element::monomial(m.clone()));
        }
        if m.is_one() || 2 * a > m.degree() {
            return Arc::new(Element::zero());
        }
        if let Some(g) = m.as_generator() {
            return Self::cached(&self.sq_mono, (a, m.clone()), || self.translate(&self.raw_sq_gen(a, g)));
        }
        Self::cached(&self.sq_mono, (a, m.clone()), || {
            if let Some(root) = m.sqrt() {
                return if a % 2 == 1 { Element::zero() } else { self.sq_mono(a / 2, &root).square() };
            }
            let (g, rest) = m.split_first().expect("nonunit monomial");
            let gm = Monomial::generator(g);
            let mut out = Element::zero();
            for i in 0..=a.min(g.degree() / 2) {
                let x = self.sq_mono(i, &gm);
                if x.is_zero() {
                    continue;
                }
                let y = self.sq_mono(a - i, &rest);
                out.add_assign(&x.mul(&y));
            }
            out
        })
    }

    /// `Sq^a_*` on an element. Commutes with translation, so it applies to
    /// translated and raw elements alike.
    pub fn sq(&self, a: u32, x: &Element) -> Element {
        let mut out = Element::zero();
        for m in x.terms() {
            out.add_assign(&self.sq_mono(a, m));
        }
        out
    }

    /// `λ`, `λ'` or `λ''` on a homogeneous element.
    pub fn lambda(&self, kind: LambdaKind, x: &Element) -> Result<Element, AlgebraError> {
        let Some(d) = x.degree() else {
            return if x.is_zero() { Ok(Element::zero()) } else { Err(AlgebraError::NotHomogeneous) };
        };
        let k = kind.index_for(d).ok_or(AlgebraError::ParityMismatch { op: kind.name(), degree: d })?;
        Ok(self.sq(k, x))
    }

    // ---- translated Dyer-Lashof operations ------------------------------

    /// Coefficient `v_j` of `W(t)^{-1}` where `W(t) = 1 + sum_k Q^k[1] t^k`
    /// in translated form.
    fn inverse_coefficient(&self, j: usize) -> Element {
        if let Some(v) = self.inverse_series.read().get(j) {
            return v.clone();
        }
        let point = self.point_class().expect("plus model");
        let mut series = self.inverse_series.write();
        while series.len() <= j {
            let s = series.len();
            let mut v = Element::zero();
            for k in 1..=s {
                let u = Monomial::generator(point.prepend(k as u32));
                v.add_assign(&series[s - k].mul_monomial(&u));
            }
            series.push(v);
        }
        series[j].clone()
    }

    fn q_gen(&self, s: u32, g: QGenerator) -> Arc<Element> {
        if !self.has_point_generator() {
            return self.raw_q_gen(s, g);
        }
        Self::cached(&self.q_gen, (s, g), || {
            let weight_log = g.len() as u32;
            let mut out = Element::zero();
            for i in g.degree()..=s {
                let j = s - i;
                if j % (1 << weight_log) != 0 {
                    continue;
                }
                let head = self.translate(&self.raw_q_gen(i, g));
                if head.is_zero() {
                    continue;
                }
                let mut coef = self.inverse_coefficient((j >> weight_log) as usize);
                for _ in 0..weight_log {
                    coef = coef.square();
                }
                out.add_assign(&head.mul(&coef));
            }
            out
        })
    }

    fn q_mono(&self, s: u32, m: &Monomial) -> Arc<Element> {
        if m.is_one() {
            return Arc::new(if s == 0 { Element::one() } else { Element::zero() });
        }
        if let Some(g) = m.as_generator() {
            return self.q_gen(s, g);
        }
        if s < m.degree() {
            return Arc::new(Element::zero());
        }
        Self::cached(&self.q_mono, (s, m.clone()), || {
            if let Some(root) = m.sqrt() {
                return if s % 2 == 1 { Element::zero() } else { self.q_mono(s / 2, &root).square() };
            }
            let (g, rest) = m.split_first().expect("nonunit monomial");
            let mut out = Element::zero();
            for i in g.degree()..=s - rest.degree() {
                let a = self.q_gen(i, g);
                if a.is_zero() {
                    continue;
                }
                let b = self.q_mono(s - i, &rest);
                out.add_assign(&a.mul(&b));
            }
            out
        })
    }

    /// `Q^s` on a translated element of the zero component.
    ///
    /// For a generator of component `w = 2^l`,
    /// `Q^s(g[-w]) = sum_j (Q^{s-j} g)[-2w] * coef_j(W^{-w})` and
    /// `W^{-2^l}(t) = V(t^{2^l})^{2^l}`; products follow the Cartan formula.
    pub fn q(&self, s: u32, x: &Element) -> Element {
        let mut out = Element::zero();
        for m in x.terms() {
            out.add_assign(&self.q_mono(s, m));
        }
        out
    }

    /// Translated `Q^I`, innermost (last) index first.
    pub fn apply_word(&self, word: &[u32], x: &Element) -> Element {
        word.iter().rev().fold(x.clone(), |acc, &s| self.q(s, &acc))
    }

    // ---- coproduct -------------------------------------------------------

    fn raw_q_side(&self, s: u32, m: &Monomial) -> Element {
        (*self.raw_q_mono(s, m)).clone()
    }

    /// Translated coproduct of a generator.
    pub fn coproduct_generator(&self, g: QGenerator) -> Arc<Tensor> {
        if let Some(t) = self.psi_gen.read().get(&g) {
            return t.clone();
        }
        let base = g.base();
        let side = |c: Option<SpaceClass>| -> Element {
            match c {
                None => Element::one(),
                Some(c) => self.raw_base(c),
            }
        };
        let mut raw: Vec<(Monomial, Monomial)> = Vec::new();
        for (l, r) in space::coproduct(base) {
            let (le, re) = (side(l), side(r));
            for a in le.terms() {
                for b in re.terms() {
                    raw.push((a.clone(), b.clone()));
                }
            }
        }
        let mut current = Tensor::from_terms(raw);
        for &s in g.word().iter().rev() {
            let mut next: Vec<(Monomial, Monomial)> = Vec::new();
            for (l, r) in current.terms() {
                for i in 0..=s {
                    let ql = self.raw_q_side(i, l);
                    if ql.is_zero() {
                        continue;
                    }
                    let qr = self.raw_q_side(s - i, r);
                    for a in ql.terms() {
                        for b in qr.terms() {
                            next.push((a.clone(), b.clone()));
                        }
                    }
                }
            }
            current = Tensor::from_terms(next);
        }
        let translated = if self.has_point_generator() {
            Tensor::from_terms(current.terms().map(|(a, b)| (a.drop_point_classes(), b.drop_point_classes())))
        } else {
            current
        };
        let t = Arc::new(translated);
        self.psi_gen.write().entry(g).or_insert(t).clone()
    }

    /// Coproduct of a translated monomial, as a list of tensor terms.
    pub fn coproduct_monomial(&self, m: &Monomial) -> Vec<(Monomial, Monomial)> {
        let mut acc: FxHashSet<(Monomial, Monomial)> = FxHashSet::default();
        acc.insert((Monomial::one(), Monomial::one()));
        for &(g, e) in m.factors() {
            let psi = self.coproduct_generator(g);
            let mut bit = 0;
            while e >> bit > 0 {
                if (e >> bit) & 1 == 1 {
                    let mut next: FxHashSet<(Monomial, Monomial)> = FxHashSet::default();
                    for (a, b) in &acc {
                        for (c, d) in psi.terms() {
                            let (c, d) = (pow2(c, bit), pow2(d, bit));
                            let t = (a.mul(&c), b.mul(&d));
                            if !next.remove(&t) {
                                next.insert(t);
                            }
                        }
                    }
                    acc = next;
                }
                bit += 1;
            }
        }
        acc.into_iter().collect()
    }

    pub fn coproduct(&self, x: &Element) -> Tensor {
        Tensor::from_terms(x.terms().flat_map(|m| self.coproduct_monomial(m)))
    }

    pub fn reduced_coproduct(&self, x: &Element) -> Tensor {
        self.coproduct(x).reduced()
    }

    pub fn is_primitive(&self, x: &Element) -> bool {
        self.reduced_coproduct(x).is_zero()
    }

    pub fn frobenius(&self, x: &Element) -> Element {
        x.square()
    }

    // ---- degreewise linear algebra --------------------------------------

    pub fn basis(&self, n: u32) -> Arc<DegreeBasis> {
        if let Some(b) = self.bases.read().get(&n) {
            return b.clone();
        }
        let gens = self.generators(n);
        let b = Arc::new(DegreeBasis::enumerate(self.space, n, &gens));
        self.bases.write().entry(n).or_insert(b).clone()
    }

    /// Primitives in degree `n`, in basis coordinates.
    pub fn primitives(&self, n: u32) -> Arc<F2Subspace> {
        if let Some(p) = self.primitives.read().get(&n) {
            return p.clone();
        }
        let p = Arc::new(basis::compute_primitives(self, n));
        self.primitives.write().entry(n).or_insert(p).clone()
    }

    /// Primitive basis vectors as elements.
    pub fn primitive_elements(&self, n: u32) -> Vec<Element> {
        let b = self.basis(n);
        self.primitives(n).basis().iter().map(|v| b.element(v)).collect()
    }

    /// Indecomposables: spanned by the generator monomials in degree `n`.
    pub fn indecomposables(&self, n: u32) -> F2Subspace {
        let b = self.basis(n);
        F2Subspace::span(
            b.dim(),
            b.generator_positions().map(|i| crate::gf2la::BitVec::unit(b.dim(), i)),
        )
    }
}

fn pow2(m: &Monomial, k: u32) -> Monomial {
    (0..k).fold(m.clone(), |acc, _| acc.square())
}

#[cfg(test)]
mod tests;
