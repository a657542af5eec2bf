use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{AlgebraError, Element, Monomial, QAlgebra};
use crate::dyer_lashof::QGenerator;
use crate::gf2la::{kernel_of_images, BitVec, F2Subspace};
use crate::space::SpaceId;

/// All monomials of one degree in a fixed order, with coordinates.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    space: SpaceId,
    degree: u32,
    monomials: Vec<Monomial>,
    index: FxHashMap<Monomial, usize>,
}

impl DegreeBasis {
    /// Monomials of degree `n` in the given positive-degree generators.
    pub fn enumerate(space: SpaceId, n: u32, gens: &[QGenerator]) -> Self {
        let gens: Vec<QGenerator> = gens.iter().copied().filter(|g| g.degree() >= 1 && g.degree() <= n).collect();
        let mut monomials = Vec::new();
        let mut stack: Vec<(QGenerator, u32)> = Vec::new();
        fill(&gens, 0, n, &mut stack, &mut monomials);
        monomials.sort();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeBasis { space, degree: n, monomials, index }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Positions of the monomials that are single generators.
    pub fn generator_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.monomials.iter().enumerate().filter(|(_, m)| m.as_generator().is_some()).map(|(i, _)| i)
    }

    pub fn coords(&self, x: &Element) -> Result<BitVec, AlgebraError> {
        let mut v = BitVec::zeros(self.dim());
        for m in x.terms() {
            let i = self.index_of(m).ok_or_else(|| AlgebraError::NotInBasis {
                degree: self.degree,
                monomial: m.render(),
            })?;
            v.flip(i);
        }
        Ok(v)
    }

    pub fn element(&self, v: &BitVec) -> Element {
        Element::from_terms(v.ones().map(|i| self.monomials[i].clone()))
    }
}

fn fill(gens: &[QGenerator], from: usize, remaining: u32, stack: &mut Vec<(QGenerator, u32)>, out: &mut Vec<Monomial>) {
    if remaining == 0 {
        out.push(Monomial::from_factors(stack.iter().copied()));
        return;
    }
    for (k, &g) in gens.iter().enumerate().skip(from) {
        let d = g.degree();
        if d > remaining {
            // Generators are sorted by degree.
            break;
        }
        for e in 1..=remaining / d {
            stack.push((g, e));
            fill(gens, k + 1, remaining - e * d, stack, out);
            stack.pop();
        }
    }
}

/// Kernel of the reduced coproduct in degree `n`, as the intersection over
/// `p = 1..=n/2` of the kernels of the `(p, n-p)` components. The remaining
/// components are redundant by cocommutativity.
pub(super) fn compute_primitives(alg: &QAlgebra, n: u32) -> F2Subspace {
    let basis = alg.basis(n);
    let dim = basis.dim();
    if n <= 1 {
        return F2Subspace::full(dim);
    }
    let sides: Vec<_> = (1..n).map(|p| alg.basis(p)).collect();
    let side = |p: u32| &sides[(p - 1) as usize];

    // For each monomial: the (p, column) positions of its reduced coproduct
    // with left degree p <= n/2.
    let columns: Vec<Vec<(u32, usize)>> = basis
        .monomials()
        .par_iter()
        .map(|m| {
            let mut cols = Vec::new();
            for (l, r) in alg.coproduct_monomial(m) {
                let p = l.degree();
                if p == 0 || 2 * p > n {
                    continue;
                }
                let li = side(p).index_of(&l).expect("left factor in basis");
                let ri = side(n - p).index_of(&r).expect("right factor in basis");
                cols.push((p, li * side(n - p).dim() + ri));
            }
            cols
        })
        .collect();

    let mut current: Option<Vec<BitVec>> = None;
    for p in 1..=n / 2 {
        let width = side(p).dim() * side(n - p).dim();
        let image_of = |i: usize, acc: &mut BitVec| {
            for &(q, c) in &columns[i] {
                if q == p {
                    acc.flip(c);
                }
            }
        };
        let images: Vec<BitVec> = match &current {
            None => (0..dim)
                .map(|i| {
                    let mut v = BitVec::zeros(width);
                    image_of(i, &mut v);
                    v
                })
                .collect(),
            Some(vs) => vs
                .par_iter()
                .map(|x| {
                    let mut v = BitVec::zeros(width);
                    for i in x.ones() {
                        image_of(i, &mut v);
                    }
                    v
                })
                .collect(),
        };
        let relations = kernel_of_images(width, &images);
        current = Some(match current {
            None => relations,
            Some(vs) => relations
                .iter()
                .map(|r| {
                    let mut v = BitVec::zeros(dim);
                    for k in r.ones() {
                        v.xor_assign(&vs[k]);
                    }
                    v
                })
                .collect(),
        });
    }
    F2Subspace::span(dim, current.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyer_lashof::generator_set;

    fn brute_count(degrees: &[u32], n: u32) -> usize {
        // Number of multisets: partition-style dynamic programming.
        let mut ways = vec![0usize; n as usize + 1];
        ways[0] = 1;
        for &d in degrees {
            for k in d as usize..=n as usize {
                ways[k] += ways[k - d as usize];
            }
        }
        ways[n as usize]
    }

    #[test]
    fn basis_sizes_match_partition_counts() {
        let gens: Vec<QGenerator> = generator_set(SpaceId::RPinf, 8).into_iter().filter(|g| g.degree() > 0).collect();
        let degrees: Vec<u32> = gens.iter().map(|g| g.degree()).collect();
        for n in 0..=8 {
            let b = DegreeBasis::enumerate(SpaceId::RPinf, n, &gens);
            assert_eq!(b.dim(), brute_count(&degrees, n), "degree {n}");
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let gens: Vec<QGenerator> = generator_set(SpaceId::BSpin2, 6).into_iter().filter(|g| g.degree() > 0).collect();
        let b = DegreeBasis::enumerate(SpaceId::BSpin2, 6, &gens);
        for i in 0..b.dim() {
            let v = BitVec::unit(b.dim(), i);
            assert_eq!(b.coords(&b.element(&v)).unwrap(), v);
        }
        assert!(b.coords(&Element::one()).is_err());
    }
}
