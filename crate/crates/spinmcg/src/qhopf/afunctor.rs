//! The functor `A(V, ξ) = S(V) / (x^2 + ξx)`.

use rustc_hash::FxHashMap;

use crate::gf2la::{BitVec, Echelon};

/// A graded vector space with a degree-doubling linear map.
#[derive(Clone, Debug, Default)]
pub struct AFunctorPresentation {
    degrees: Vec<u32>,
    /// `xi[j]` is `ξ` of generator `j`, as a set of generator indices.
    xi: Vec<Vec<usize>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("xi of generator {0} is not in twice its degree")]
    NotDegreeDoubling(usize),
}

impl AFunctorPresentation {
    pub fn new(degrees: Vec<u32>, xi: Vec<Vec<usize>>) -> Result<Self, PresentationError> {
        assert_eq!(degrees.len(), xi.len());
        for (j, targets) in xi.iter().enumerate() {
            if targets.iter().any(|&t| degrees.get(t) != Some(&(2 * degrees[j]))) {
                return Err(PresentationError::NotDegreeDoubling(j));
            }
        }
        Ok(AFunctorPresentation { degrees, xi })
    }

    /// `ξ = 0`.
    pub fn trivial(degrees: Vec<u32>) -> Self {
        let xi = vec![Vec::new(); degrees.len()];
        AFunctorPresentation { degrees, xi }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn xi(&self, j: usize) -> &[usize] {
        &self.xi[j]
    }
}

/// Monomials as sorted lists of generator indices with multiplicity.
type Mono = Vec<usize>;

fn monomials_of_degree(degrees: &[u32], n: u32) -> Vec<Mono> {
    fn go(degrees: &[u32], from: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for j in from..degrees.len() {
            if degrees[j] <= left {
                cur.push(j);
                go(degrees, j, left - degrees[j], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(degrees, 0, n, &mut Vec::new(), &mut out);
    out
}

/// `dim A(V, ξ)_n` for `n ≤ max_degree`, as the dimension of `S(V)_n`
/// modulo the degree-`n` part of the ideal generated by `x^2 + ξx`.
pub fn a_functor_dims(p: &AFunctorPresentation, max_degree: u32) -> Vec<usize> {
    let degrees: Vec<u32> = p.degrees.clone();
    (0..=max_degree)
        .map(|n| {
            let monos = monomials_of_degree(&degrees, n);
            let index: FxHashMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut ideal = Echelon::new(monos.len());
            for (j, &d) in degrees.iter().enumerate() {
                if 2 * d > n {
                    continue;
                }
                for m in monomials_of_degree(&degrees, n - 2 * d) {
                    let mut v = BitVec::zeros(monos.len());
                    let mut sq = m.clone();
                    sq.extend([j, j]);
                    sq.sort_unstable();
                    v.flip(index[&sq]);
                    for &t in &p.xi[j] {
                        let mut lin = m.clone();
                        lin.push(t);
                        lin.sort_unstable();
                        v.flip(index[&lin]);
                    }
                    ideal.insert(v);
                }
            }
            monos.len() - ideal.rank()
        })
        .collect()
}

/// Coefficients of `prod_d (1 + t^d)` through `max_degree`.
pub fn exterior_dims(degrees: &[u32], max_degree: u32) -> Vec<usize> {
    let mut dims = vec![0usize; max_degree as usize + 1];
    dims[0] = 1;
    for &d in degrees {
        if d == 0 || d > max_degree {
            continue;
        }
        for k in (d as usize..=max_degree as usize).rev() {
            dims[k] += dims[k - d as usize];
        }
    }
    dims
}

/// Coefficients of `prod_d 1/(1 - t^d)` through `max_degree`.
pub fn polynomial_dims(degrees: &[u32], max_degree: u32) -> Vec<usize> {
    let mut dims = vec![0usize; max_degree as usize + 1];
    dims[0] = 1;
    for &d in degrees {
        if d == 0 || d > max_degree {
            continue;
        }
        for k in d as usize..=max_degree as usize {
            dims[k] += dims[k - d as usize];
        }
    }
    dims
}

/// Graded tensor product of two Poincaré series.
pub fn convolve(a: &[usize], b: &[usize], max_degree: u32) -> Vec<usize> {
    (0..=max_degree as usize)
        .map(|n| (0..=n).map(|p| a.get(p).copied().unwrap_or(0) * b.get(n - p).copied().unwrap_or(0)).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_xi_is_exterior() {
        let p = AFunctorPresentation::trivial(vec![1, 2, 2, 3]);
        assert_eq!(a_functor_dims(&p, 8), exterior_dims(&[1, 2, 2, 3], 8));
    }

    #[test]
    fn single_generator() {
        let p = AFunctorPresentation::trivial(vec![1]);
        assert_eq!(a_functor_dims(&p, 4), vec![1, 1, 0, 0, 0]);
    }

    #[test]
    fn rejects_non_doubling_xi() {
        assert_eq!(
            AFunctorPresentation::new(vec![1, 3], vec![vec![1], vec![]]).unwrap_err(),
            PresentationError::NotDegreeDoubling(0)
        );
    }

    #[test]
    fn series_helpers() {
        assert_eq!(polynomial_dims(&[1, 2], 4), vec![1, 1, 2, 2, 3]);
        assert_eq!(exterior_dims(&[1, 1], 3), vec![1, 2, 1, 0]);
        assert_eq!(convolve(&[1, 1], &[1, 0, 1], 3), vec![1, 1, 1, 1]);
    }

    fn presentation() -> impl Strategy<Value = AFunctorPresentation> {
        prop::collection::vec(1u32..=4, 1..6).prop_flat_map(|mut degrees| {
            degrees.sort_unstable();
            let n = degrees.len();
            prop::collection::vec(prop::collection::vec(any::<bool>(), n), n).prop_map(move |choice| {
                let xi = (0..n)
                    .map(|j| {
                        (0..n).filter(|&t| choice[j][t] && degrees[t] == 2 * degrees[j]).collect()
                    })
                    .collect();
                AFunctorPresentation::new(degrees.clone(), xi).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn dimension_law_holds(p in presentation()) {
            prop_assert_eq!(a_functor_dims(&p, 8), exterior_dims(p.degrees(), 8));
        }
    }
}
