//! Property tests on random elements.

use proptest::prelude::*;
use proptest::sample::subsequence;

use spinmcg::maps::{self, PartialMap, TailPolicy};
use spinmcg::qhopf::element::Element;
use spinmcg::qhopf::QAlgebra;
use spinmcg::space::LambdaKind;

const TOP: u32 = 10;

/// A random nonzero element of degree `n`: a nonempty set of basis monomials.
fn element(alg: &'static QAlgebra, n: u32) -> impl Strategy<Value = Element> {
    let monos = alg.basis(n).monomials().to_vec();
    let len = monos.len();
    subsequence(monos, 1..=len).prop_map(Element::from_terms)
}

fn rp_element(max: u32) -> impl Strategy<Value = (u32, Element)> {
    (1..=max).prop_flat_map(|n| element(maps::rp_plus(), n).prop_map(move |x| (n, x)))
}

fn scp_element(max: u32) -> impl Strategy<Value = Element> {
    (1..=max).prop_filter("nonzero degree", |&n| maps::scp_plus().basis(n).dim() > 0).prop_flat_map(|n| element(maps::scp_plus(), n))
}

fn odd(c: bool, x: Element) -> Element {
    if c {
        x
    } else {
        Element::zero()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The commutation rules of the `λ` family with `Q` hold on arbitrary
    /// elements, not only on generators.
    #[test]
    fn lambda_commutes_with_q((d, x) in rp_element(6), t in 1u32..=6) {
        use LambdaKind::*;
        let a = maps::rp_plus();
        prop_assume!(t + d <= 12);
        let y = a.q(t, &x);
        let l = |k, z: &Element| a.lambda(k, z).unwrap();
        if t % 2 == 0 {
            let s = t / 2;
            if d % 2 == 0 {
                prop_assert_eq!(l(Lambda, &y), a.q(s, &l(Lambda, &x)));
                if l(Lambda, &x).is_zero() && d >= 2 {
                    prop_assert_eq!(l(LambdaDouble, &y), a.q(s, &l(LambdaDouble, &x)));
                }
            } else {
                prop_assert_eq!(l(LambdaPrime, &y), a.q(s, &l(LambdaPrime, &x)));
            }
        } else {
            let s = (t + 1) / 2;
            if d % 2 == 0 {
                prop_assert_eq!(l(LambdaPrime, &y), odd((s + d / 2) % 2 == 1, a.q(s, &l(Lambda, &x))));
            } else {
                prop_assert_eq!(l(LambdaDouble, &y), odd((s + (d + 1) / 2) % 2 == 0, a.q(s, &l(LambdaPrime, &x))));
            }
        }
    }

    #[test]
    fn partial_is_multiplicative(x in scp_element(5), y in scp_element(5), zero_tail in any::<bool>()) {
        let f = PartialMap::new(if zero_tail { TailPolicy::Zero } else { TailPolicy::Primitive });
        prop_assert_eq!(f.apply(&x.mul(&y)).unwrap(), f.apply(&x).unwrap().mul(&f.apply(&y).unwrap()));
    }

    #[test]
    fn partial_commutes_with_q(x in scp_element(5), s in 1u32..=6, zero_tail in any::<bool>()) {
        prop_assume!(x.degree().unwrap() + s <= TOP);
        let f = PartialMap::new(if zero_tail { TailPolicy::Zero } else { TailPolicy::Primitive });
        let (src, tgt) = (maps::scp_plus(), maps::rp_plus());
        prop_assert_eq!(f.apply(&src.q(s, &x)).unwrap(), tgt.q(s, &f.apply(&x).unwrap()));
    }

    /// With primitive tails the map preserves primitives.
    #[test]
    fn partial_preserves_primitives(n in 1u32..=TOP, pick in any::<prop::sample::Index>()) {
        let src = maps::scp_plus();
        let prims = src.primitive_elements(n);
        prop_assume!(!prims.is_empty());
        let p = &prims[pick.index(prims.len())];
        let image = PartialMap::new(TailPolicy::Primitive).apply(p).unwrap();
        prop_assert!(maps::rp_plus().is_primitive(&image));
    }

    #[test]
    fn ranks_ignore_tails(n in 0u32..=TOP) {
        let r: Vec<usize> = TailPolicy::ALL.iter().map(|&p| PartialMap::new(p).rank(n).unwrap()).collect();
        prop_assert_eq!(r[0], r[1]);
    }

    /// Steenrod operations are additive and commute with the Frobenius.
    #[test]
    fn sq_and_frobenius((d, x) in rp_element(5), a in 0u32..=5) {
        let alg = maps::rp_plus();
        prop_assume!(a <= d);
        let lhs = alg.sq(2 * a, &alg.frobenius(&x));
        prop_assert_eq!(lhs, alg.frobenius(&alg.sq(a, &x)));
    }
}
