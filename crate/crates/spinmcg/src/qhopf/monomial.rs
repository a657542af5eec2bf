use std::fmt;

use smallvec::SmallVec;

use crate::dyer_lashof::QGenerator;

type Factors = SmallVec<[(QGenerator, u32); 4]>;

/// A commutative monomial in the generators `Q^I x`.
///
/// Ordered by degree, then number of factors, then factors; equality is
/// structural on the sorted factor list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    degree: u32,
    count: u32,
    factors: Factors,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(g: QGenerator) -> Self {
        Self::power(g, 1)
    }

    pub fn power(g: QGenerator, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut factors = Factors::new();
        factors.push((g, e));
        Monomial { degree: g.degree() * e, count: e, factors }
    }

    pub fn from_factors(list: impl IntoIterator<Item = (QGenerator, u32)>) -> Self {
        list.into_iter().fold(Self::one(), |acc, (g, e)| acc.mul(&Self::power(g, e)))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.count
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(QGenerator, u32)] {
        &self.factors
    }

    pub fn as_generator(&self) -> Option<QGenerator> {
        match self.factors.as_slice() {
            [(g, 1)] => Some(*g),
            _ => None,
        }
    }

    pub fn contains(&self, g: QGenerator) -> bool {
        self.factors.iter().any(|&(h, _)| h == g)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut factors = Factors::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    factors.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    factors.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    factors.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&a[i..]);
        factors.extend_from_slice(&b[j..]);
        Monomial { degree: self.degree + other.degree, count: self.count + other.count, factors }
    }

    pub fn square(&self) -> Monomial {
        Monomial {
            degree: 2 * self.degree,
            count: 2 * self.count,
            factors: self.factors.iter().map(|&(g, e)| (g, 2 * e)).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e % 2 == 0)
    }

    /// Square root of a perfect square.
    pub fn sqrt(&self) -> Option<Monomial> {
        self.is_square().then(|| Monomial {
            degree: self.degree / 2,
            count: self.count / 2,
            factors: self.factors.iter().map(|&(g, e)| (g, e / 2)).collect(),
        })
    }

    /// True when some factor occurs at least twice.
    pub fn has_repeat(&self) -> bool {
        self.factors.iter().any(|&(_, e)| e > 1)
    }

    /// Splits off one copy of the first factor.
    pub fn split_first(&self) -> Option<(QGenerator, Monomial)> {
        let &(g, e) = self.factors.first()?;
        let mut rest = self.clone();
        if e == 1 {
            rest.factors.remove(0);
        } else {
            rest.factors[0].1 -= 1;
        }
        rest.degree -= g.degree();
        rest.count -= 1;
        Some((g, rest))
    }

    /// Removes degree-zero factors (component markers).
    pub fn drop_point_classes(&self) -> Monomial {
        if self.factors.iter().all(|(g, _)| g.degree() > 0) {
            return self.clone();
        }
        let factors: Factors = self.factors.iter().filter(|(g, _)| g.degree() > 0).copied().collect();
        let count = factors.iter().map(|&(_, e)| e).sum();
        Monomial { degree: self.degree, count, factors }
    }

    pub fn render(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(g, e)| {
                let base = if g.is_base() { g.render() } else { format!("({})", g.render()) };
                match e {
                    1 => g.render(),
                    _ => format!("{base}^{e}"),
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({})", self.render())
    }
}
