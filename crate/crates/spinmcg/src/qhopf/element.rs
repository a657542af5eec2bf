use std::collections::BTreeSet;
use std::fmt;

use rustc_hash::FxHashSet;

use super::monomial::Monomial;
use super::AlgebraError;
use crate::dyer_lashof::QGenerator;
use crate::space::SpaceId;

/// An F_2-linear combination of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeSet<Monomial>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Element { terms }
    }

    pub fn generator(g: QGenerator) -> Self {
        Self::monomial(Monomial::generator(g))
    }

    /// Sum of monomials, cancelling in pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut acc = FxHashSet::default();
        for m in terms {
            if !acc.remove(&m) {
                acc.insert(m);
            }
        }
        Element { terms: acc.into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        for m in &other.terms {
            if !self.terms.remove(m) {
                self.terms.insert(m.clone());
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul(&self, other: &Element) -> Element {
        if self.is_zero() || other.is_zero() {
            return Element::zero();
        }
        Element::from_terms(self.terms.iter().flat_map(|a| other.terms.iter().map(move |b| a.mul(b))))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Element {
        Element { terms: self.terms.iter().map(|a| a.mul(m)).collect() }
    }

    /// Frobenius: squaring is additive in characteristic two.
    pub fn square(&self) -> Element {
        Element { terms: self.terms.iter().map(Monomial::square).collect() }
    }

    pub fn pow(&self, e: u32) -> Element {
        let mut result = Element::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        result
    }

    /// Degree of a homogeneous element.
    pub fn degree(&self) -> Option<u32> {
        let mut degrees = self.terms.iter().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// The space of the generators occurring, if any and if unique.
    pub fn space(&self) -> Result<Option<SpaceId>, AlgebraError> {
        let mut found: Option<SpaceId> = None;
        for m in &self.terms {
            for &(g, _) in m.factors() {
                match found {
                    None => found = Some(g.space()),
                    Some(s) if s != g.space() => return Err(AlgebraError::SpaceMismatch(s, g.space())),
                    _ => {}
                }
            }
        }
        Ok(found)
    }

    /// Product with a check that both factors live over the same space.
    pub fn product(&self, other: &Element) -> Result<Element, AlgebraError> {
        if let (Some(a), Some(b)) = (self.space()?, other.space()?) {
            if a != b {
                return Err(AlgebraError::SpaceMismatch(a, b));
            }
        }
        Ok(self.mul(other))
    }

    /// Sum of the single-generator terms.
    pub fn linear_part(&self) -> Element {
        Element { terms: self.terms.iter().filter(|m| m.as_generator().is_some()).cloned().collect() }
    }

    pub fn is_decomposable(&self) -> bool {
        self.terms.iter().all(|m| m.as_generator().is_none() && !m.is_one())
    }

    /// Image under the map setting every degree-zero generator to 1.
    pub fn drop_point_classes(&self) -> Element {
        Element::from_terms(self.terms.iter().map(Monomial::drop_point_classes))
    }

    /// Keeps only monomials passing the filter.
    pub fn retain(&self, keep: impl Fn(&Monomial) -> bool) -> Element {
        Element { terms: self.terms.iter().filter(|m| keep(m)).cloned().collect() }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms.iter().map(Monomial::render).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.render())
    }
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        Element::monomial(m)
    }
}

impl FromIterator<Monomial> for Element {
    fn from_iter<T: IntoIterator<Item = Monomial>>(iter: T) -> Self {
        Element::from_terms(iter)
    }
}

/// An element of `H ⊗ H`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Tensor {
    terms: BTreeSet<(Monomial, Monomial)>,
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Monomial)>) -> Self {
        let mut acc = FxHashSet::default();
        for t in terms {
            if !acc.remove(&t) {
                acc.insert(t);
            }
        }
        Tensor { terms: acc.into_iter().collect() }
    }

    pub fn simple(a: &Element, b: &Element) -> Self {
        Tensor::from_terms(a.terms().flat_map(|x| b.terms().map(move |y| (x.clone(), y.clone()))))
    }

    pub fn terms(&self) -> impl Iterator<Item = &(Monomial, Monomial)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        Tensor::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn mul(&self, other: &Tensor) -> Tensor {
        Tensor::from_terms(
            self.terms
                .iter()
                .flat_map(|(a, b)| other.terms.iter().map(move |(c, d)| (a.mul(c), b.mul(d)))),
        )
    }

    pub fn square(&self) -> Tensor {
        Tensor { terms: self.terms.iter().map(|(a, b)| (a.square(), b.square())).collect() }
    }

    /// Drops the two primitive-type terms `x⊗1` and `1⊗x`.
    pub fn reduced(&self) -> Tensor {
        Tensor { terms: self.terms.iter().filter(|(a, b)| !a.is_one() && !b.is_one()).cloned().collect() }
    }

    pub fn swap(&self) -> Tensor {
        Tensor { terms: self.terms.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(a, b)| format!("{}⊗{}", a.render(), b.render()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor({})", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceClass;

    fn e(n: u32) -> Element {
        Element::generator(QGenerator::base_class(SpaceClass::new(SpaceId::RPinf, n)))
    }

    #[test]
    fn product_examples() {
        let x = e(1).add(&e(2));
        assert_eq!(x.mul(&Element::one()), x);
        assert_eq!(e(1).mul(&e(1)).render(), "e_1^2");
        assert_eq!(x.mul(&e(1)).render(), "e_1^2 + e_1*e_2");
    }

    #[test]
    fn frobenius_is_additive() {
        let x = e(1).add(&e(3));
        assert_eq!(x.square(), x.mul(&x));
        assert_eq!(x.square(), e(1).square().add(&e(3).square()));
    }

    #[test]
    fn space_mismatch_detected() {
        let a = Element::generator(QGenerator::base_class(SpaceClass::new(SpaceId::BSpin2, 1)));
        assert!(matches!(e(1).product(&a), Err(AlgebraError::SpaceMismatch(..))));
        assert!(e(1).product(&Element::one()).is_ok());
    }

    #[test]
    fn rendering_is_sorted() {
        let x = e(1).pow(3).add(&e(1).mul(&e(2))).add(&e(3));
        assert_eq!(x.render(), "e_3 + e_1*e_2 + e_1^3");
    }
}
