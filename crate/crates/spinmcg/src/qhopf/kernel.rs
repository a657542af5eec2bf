//! Hopf kernels `A \\ f = {x : (1 ⊗ f) ψ x = x ⊗ 1}` degreewise.

use std::hash::Hash;

use rustc_hash::FxHashMap;

use super::{AlgebraError, Monomial, QAlgebra};
use crate::dyer_lashof::QGenerator;
use crate::gf2la::{kernel_of_images, BitVec, F2Subspace};

/// The values of an algebra map on positive-degree monomials, as sums of
/// target basis keys.
pub trait HopfTarget {
    type Key: Clone + Eq + Hash;

    fn apply(&self, m: &Monomial) -> Result<Vec<Self::Key>, AlgebraError>;
}

/// The identity map.
pub struct IdentityTarget;

impl HopfTarget for IdentityTarget {
    type Key = Monomial;

    fn apply(&self, m: &Monomial) -> Result<Vec<Monomial>, AlgebraError> {
        Ok(vec![m.clone()])
    }
}

/// The map killing everything of positive degree.
pub struct TrivialTarget;

impl HopfTarget for TrivialTarget {
    type Key = ();

    fn apply(&self, _: &Monomial) -> Result<Vec<()>, AlgebraError> {
        Ok(Vec::new())
    }
}

/// A map into an exterior algebra `E[W]`, given on generators by
/// coordinates in a fixed basis of `W_q`.
pub struct ExteriorTarget {
    values: FxHashMap<QGenerator, BitVec>,
}

impl ExteriorTarget {
    pub fn new(values: FxHashMap<QGenerator, BitVec>) -> Self {
        ExteriorTarget { values }
    }
}

/// A square-free product of basis vectors `(degree, index)`, sorted.
pub type Wedge = Vec<(u32, usize)>;

impl HopfTarget for ExteriorTarget {
    type Key = Wedge;

    fn apply(&self, m: &Monomial) -> Result<Vec<Wedge>, AlgebraError> {
        let mut acc: FxHashMap<Wedge, bool> = FxHashMap::default();
        acc.insert(Vec::new(), true);
        for &(g, e) in m.factors() {
            if e > 1 {
                return Ok(Vec::new());
            }
            let v = self
                .values
                .get(&g)
                .ok_or_else(|| AlgebraError::InsufficientGeneratorData(g.render()))?;
            let q = g.degree();
            let mut next: FxHashMap<Wedge, bool> = FxHashMap::default();
            for (w, on) in acc {
                if !on {
                    continue;
                }
                for i in v.ones() {
                    if w.contains(&(q, i)) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    let pos = w2.partition_point(|&x| x < (q, i));
                    w2.insert(pos, (q, i));
                    *next.entry(w2).or_insert(false) ^= true;
                }
            }
            acc = next;
        }
        Ok(acc.into_iter().filter_map(|(w, on)| on.then_some(w)).collect())
    }
}

/// The Hopf kernel in degree `n`, in basis coordinates.
pub fn hopf_kernel<T: HopfTarget>(alg: &QAlgebra, n: u32, target: &T) -> Result<F2Subspace, AlgebraError> {
    let basis = alg.basis(n);
    if n == 0 {
        return Ok(F2Subspace::full(basis.dim()));
    }
    let mut columns: FxHashMap<(Monomial, T::Key), usize> = FxHashMap::default();
    let mut sparse: Vec<Vec<usize>> = Vec::with_capacity(basis.dim());
    for m in basis.monomials() {
        let mut cols = Vec::new();
        for (l, r) in alg.coproduct_monomial(m) {
            if r.is_one() {
                continue;
            }
            for key in target.apply(&r)? {
                let next = columns.len();
                cols.push(*columns.entry((l.clone(), key)).or_insert(next));
            }
        }
        sparse.push(cols);
    }
    let width = columns.len();
    let images: Vec<BitVec> = sparse
        .iter()
        .map(|cols| {
            let mut v = BitVec::zeros(width);
            for &c in cols {
                v.flip(c);
            }
            v
        })
        .collect();
    Ok(F2Subspace::span(basis.dim(), kernel_of_images(width, &images)))
}

/// Dimensions of the Hopf kernel in degrees `0..=max_degree`.
pub fn hopf_kernel_dims<T: HopfTarget>(alg: &QAlgebra, target: &T, max_degree: u32) -> Result<Vec<usize>, AlgebraError> {
    (0..=max_degree).map(|n| hopf_kernel(alg, n, target).map(|k| k.dim())).collect()
}

/// Whether products of kernel elements stay in the kernel through
/// `max_degree`.
pub fn kernel_closed_under_products<T: HopfTarget>(
    alg: &QAlgebra,
    target: &T,
    max_degree: u32,
) -> Result<bool, AlgebraError> {
    let kernels: Vec<F2Subspace> = (0..=max_degree).map(|n| hopf_kernel(alg, n, target)).collect::<Result<_, _>>()?;
    for n in 2..=max_degree {
        let bn = alg.basis(n);
        for p in 1..=n / 2 {
            let (bp, bq) = (alg.basis(p), alg.basis(n - p));
            for u in kernels[p as usize].basis() {
                let x = bp.element(u);
                for v in kernels[(n - p) as usize].basis() {
                    let y = bq.element(v);
                    if !kernels[n as usize].contains(&bn.coords(&x.mul(&y))?) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
