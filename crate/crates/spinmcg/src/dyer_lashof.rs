//! Dyer-Lashof words: admissibility, excess, Adem relations and the
//! polynomial generators `Q^I x` of `H_*(QX_+)`.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::space::{binom2, SpaceClass, SpaceId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("word {0:?} is not admissible")]
    NotAdmissible(Vec<u32>),
    #[error("word {0:?} contains a zero index")]
    ZeroIndex(Vec<u32>),
}

/// Excess of a word; the empty word has infinite excess.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Excess {
    Finite(i64),
    Infinite,
}

impl Excess {
    pub fn exceeds(self, d: i64) -> bool {
        match self {
            Excess::Infinite => true,
            Excess::Finite(e) => e > d,
        }
    }
}

impl fmt::Display for Excess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Excess::Finite(e) => write!(f, "{e}"),
            Excess::Infinite => f.write_str("inf"),
        }
    }
}

pub fn excess(indices: &[u32]) -> Excess {
    match indices.split_first() {
        None => Excess::Infinite,
        Some((&first, rest)) => Excess::Finite(first as i64 - rest.iter().map(|&i| i as i64).sum::<i64>()),
    }
}

pub fn is_admissible(indices: &[u32]) -> bool {
    indices.windows(2).all(|w| w[0] <= 2 * w[1])
}

/// Position of the leftmost inadmissible adjacent pair.
pub fn first_inadmissible(indices: &[u32]) -> Option<usize> {
    indices.windows(2).position(|w| w[0] > 2 * w[1])
}

pub type Indices = SmallVec<[u32; 8]>;

/// An admissible sequence of positive Dyer-Lashof indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleWord(Indices);

impl AdmissibleWord {
    pub fn new(indices: &[u32]) -> Result<Self, WordError> {
        if indices.contains(&0) {
            return Err(WordError::ZeroIndex(indices.to_vec()));
        }
        if !is_admissible(indices) {
            return Err(WordError::NotAdmissible(indices.to_vec()));
        }
        Ok(AdmissibleWord(indices.iter().copied().collect()))
    }

    pub fn empty() -> Self {
        AdmissibleWord(Indices::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_shift(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn excess(&self) -> Excess {
        excess(&self.0)
    }
}

/// The Adem relation for `Q^r Q^s` with `r > 2s`, as a list of admissible
/// pairs `(a, b)` with `Q^r Q^s = sum Q^a Q^b`.
pub fn adem_pairs(r: u32, s: u32) -> Vec<(u32, u32)> {
    debug_assert!(r > 2 * s);
    let (r, s) = (r as i64, s as i64);
    ((r + 1) / 2..=r - s - 1)
        .filter(|&i| binom2(i - s - 1, 2 * i - r))
        .map(|i| ((r + s - i) as u32, i as u32))
        .collect()
}

/// Rewrites a word to a sum of admissible words using the Adem relations
/// only, always reducing the leftmost inadmissible pair first. No instability
/// is applied, so the result is an identity in the Dyer-Lashof algebra.
pub fn adem_rewrite_word(indices: &[u32]) -> Vec<Indices> {
    let mut done: BTreeMap<Indices, bool> = BTreeMap::new();
    let mut pending: Vec<Indices> = vec![indices.iter().copied().collect()];
    while let Some(w) = pending.pop() {
        match first_inadmissible(&w) {
            None => {
                let entry = done.entry(w).or_insert(false);
                *entry = !*entry;
            }
            Some(k) => {
                for (a, b) in adem_pairs(w[k], w[k + 1]) {
                    let mut v = w.clone();
                    v[k] = a;
                    v[k + 1] = b;
                    pending.push(v);
                }
            }
        }
    }
    done.into_iter().filter_map(|(w, odd)| odd.then_some(w)).collect()
}

const WORD_SLOTS: usize = 11;
const DEGREE_SHIFT: u32 = 112;
const SPACE_SHIFT: u32 = 108;
const INDEX_SHIFT: u32 = 92;

/// A class `Q^I x` with `x` a base class, packed into one integer.
///
/// The derived order is: degree, space, base index, then the word
/// lexicographically. The word need not be admissible; normal forms only
/// ever contain admissible words of excess above the base degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QGenerator(u128);

impl QGenerator {
    pub fn new(base: SpaceClass, word: &[u32]) -> Self {
        assert!(word.len() <= WORD_SLOTS, "word too long: {word:?}");
        assert!(word.iter().all(|&i| (1..256).contains(&i)), "index out of range: {word:?}");
        assert!(base.index < 1 << 16);
        let degree = base.degree() + word.iter().sum::<u32>();
        assert!(degree < 1 << 16);
        let mut packed = (degree as u128) << DEGREE_SHIFT
            | (base.space.code() as u128) << SPACE_SHIFT
            | (base.index as u128) << INDEX_SHIFT;
        for (k, &i) in word.iter().enumerate() {
            packed |= (i as u128) << (INDEX_SHIFT - 8 * (k as u32 + 1));
        }
        QGenerator(packed)
    }

    pub fn base_class(base: SpaceClass) -> Self {
        Self::new(base, &[])
    }

    pub fn degree(self) -> u32 {
        (self.0 >> DEGREE_SHIFT) as u32
    }

    pub fn space(self) -> SpaceId {
        SpaceId::from_code(((self.0 >> SPACE_SHIFT) & 0xf) as u8)
    }

    pub fn base(self) -> SpaceClass {
        SpaceClass::new(self.space(), ((self.0 >> INDEX_SHIFT) & 0xffff) as u32)
    }

    fn slot(self, k: usize) -> u32 {
        ((self.0 >> (INDEX_SHIFT - 8 * (k as u32 + 1))) & 0xff) as u32
    }

    pub fn len(self) -> usize {
        (0..WORD_SLOTS).take_while(|&k| self.slot(k) != 0).count()
    }

    pub fn is_base(self) -> bool {
        self.slot(0) == 0
    }

    pub fn word(self) -> Indices {
        (0..WORD_SLOTS).map(|k| self.slot(k)).take_while(|&i| i != 0).collect()
    }

    pub fn first(self) -> Option<u32> {
        let i = self.slot(0);
        (i != 0).then_some(i)
    }

    /// Drops the outermost operation.
    pub fn tail(self) -> QGenerator {
        let w = self.word();
        QGenerator::new(self.base(), &w[1.min(w.len())..])
    }

    /// Applies one more operation on the outside.
    pub fn prepend(self, s: u32) -> QGenerator {
        let mut w: Indices = SmallVec::new();
        w.push(s);
        w.extend(self.word());
        QGenerator::new(self.base(), &w)
    }

    pub fn excess(self) -> Excess {
        excess(&self.word())
    }

    /// True for members of the polynomial generating set: admissible word of
    /// excess strictly above the base degree.
    pub fn is_polynomial_generator(self) -> bool {
        let w = self.word();
        is_admissible(&w) && excess(&w).exceeds(self.base().degree() as i64)
    }

    /// True for the degree-zero base class, which marks a component.
    pub fn is_point_class(self) -> bool {
        self.degree() == 0
    }

    pub fn render(self) -> String {
        let mut s = String::new();
        for i in self.word() {
            s.push_str(&format!("Q^{i} "));
        }
        s.push_str(&self.base().to_string());
        s
    }
}

impl fmt::Display for QGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for QGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QGenerator({})", self.render())
    }
}

/// All polynomial generators `Q^I x` of total degree at most `max_degree`,
/// including degree-zero base classes, sorted.
pub fn generator_set(space: SpaceId, max_degree: u32) -> Vec<QGenerator> {
    let mut out = Vec::new();
    let mut index = 0;
    while space.class_degree(index) <= max_degree {
        let base = SpaceClass::new(space, index);
        let d = base.degree();
        // Extend words outward; tails of generators are generators.
        let mut frontier: Vec<(Indices, u32)> = vec![(Indices::new(), 0)];
        while let Some((word, shift)) = frontier.pop() {
            out.push(QGenerator::new(base, &word));
            let lower = d + shift + 1;
            let upper = match word.first() {
                Some(&i1) => 2 * i1,
                None => max_degree,
            };
            for s in lower..=upper {
                if d + shift + s > max_degree {
                    break;
                }
                let mut next: Indices = SmallVec::new();
                next.push(s);
                next.extend(word.iter().copied());
                frontier.push((next, shift + s));
            }
        }
        index += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u32) -> SpaceClass {
        SpaceClass::new(SpaceId::RPinf, n)
    }

    #[test]
    fn excess_examples() {
        assert_eq!(excess(&[2, 1]), Excess::Finite(1));
        assert_eq!(excess(&[]), Excess::Infinite);
        assert_eq!(excess(&[4, 2, 1]), Excess::Finite(1));
    }

    #[test]
    fn admissible_word_validation() {
        assert!(AdmissibleWord::new(&[2, 1]).is_ok());
        assert_eq!(AdmissibleWord::new(&[5, 1]), Err(WordError::NotAdmissible(vec![5, 1])));
        assert_eq!(AdmissibleWord::new(&[0]), Err(WordError::ZeroIndex(vec![0])));
        let w = AdmissibleWord::new(&[6, 3, 2]).unwrap();
        assert_eq!(w.degree_shift(), 11);
        assert_eq!(w.excess(), Excess::Finite(1));
    }

    #[test]
    fn adem_five_one() {
        assert_eq!(adem_pairs(5, 1), vec![(3, 3)]);
        assert_eq!(adem_rewrite_word(&[5, 1]), vec![Indices::from_slice(&[3, 3])]);
    }

    #[test]
    fn packing_round_trips() {
        let g = QGenerator::new(e(2), &[3, 1]);
        assert_eq!(g.degree(), 6);
        assert_eq!(g.base(), e(2));
        assert_eq!(g.word().as_slice(), &[3, 1]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.first(), Some(3));
        assert_eq!(g.tail(), QGenerator::new(e(2), &[1]));
        assert_eq!(g.tail().prepend(3), g);
        assert_eq!(g.render(), "Q^3 Q^1 e_2");
        assert_eq!(QGenerator::base_class(e(0)).render(), "e_0");
    }

    #[test]
    fn generator_sets_small() {
        let g1 = generator_set(SpaceId::RPinf, 1);
        let names: Vec<String> = g1.iter().map(|g| g.render()).collect();
        assert_eq!(names, ["e_0", "Q^1 e_0", "e_1"]);
        let g2 = generator_set(SpaceId::RPinf, 2);
        let new: Vec<String> = g2.iter().filter(|g| g.degree() == 2).map(|g| g.render()).collect();
        assert_eq!(new, ["Q^2 e_0", "e_2"]);
        assert!(!g2.contains(&QGenerator::new(e(1), &[1])));
        let b3: Vec<String> = generator_set(SpaceId::BSpin3, 3).iter().map(|g| g.render()).collect();
        assert_eq!(b3, ["b_0", "Q^1 b_0", "Q^2 b_0", "Q^2 Q^1 b_0", "Q^3 b_0"]);
    }

    #[test]
    fn generator_sets_are_generators_and_ordered() {
        for space in SpaceId::ALL {
            let gens = generator_set(space, 14);
            assert!(gens.windows(2).all(|w| w[0] < w[1]));
            assert!(gens.iter().all(|g| g.is_polynomial_generator() && g.degree() <= 14));
        }
    }

    fn compositions(n: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        (1..=n)
            .flat_map(|first| {
                compositions(n - first).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }

    #[test]
    fn generator_counts_match_brute_force() {
        for space in [SpaceId::RPinf, SpaceId::BSpin2, SpaceId::SigmaCPinf] {
            let gens = generator_set(space, 12);
            for n in 0..=12u32 {
                let mut brute = 0;
                for index in 0..=n {
                    let d = space.class_degree(index);
                    if d > n {
                        break;
                    }
                    brute += compositions(n - d)
                        .iter()
                        .filter(|w| is_admissible(w) && excess(w).exceeds(d as i64))
                        .count();
                }
                let got = gens.iter().filter(|g| g.degree() == n).count();
                assert_eq!(got, brute, "{space} degree {n}");
            }
        }
    }
}
