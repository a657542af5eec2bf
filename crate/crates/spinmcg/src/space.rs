//! Base spaces as homology coalgebras with the dual Steenrod action.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Binomial coefficient mod 2 (Lucas). Negative arguments give zero.
pub fn binom2(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (k & n) == k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SpaceId {
    RPinf,
    BSpin2,
    BSpin3,
    SigmaCPinf,
}

impl SpaceId {
    pub const ALL: [SpaceId; 4] = [SpaceId::RPinf, SpaceId::BSpin2, SpaceId::BSpin3, SpaceId::SigmaCPinf];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> SpaceId {
        SpaceId::ALL[code as usize]
    }

    /// Degree of the class with the given index.
    pub fn class_degree(self, index: u32) -> u32 {
        match self {
            SpaceId::RPinf => index,
            SpaceId::BSpin2 => 2 * index,
            SpaceId::BSpin3 => 4 * index,
            SpaceId::SigmaCPinf => 2 * index + 1,
        }
    }

    /// Degree step between consecutive classes.
    pub fn period(self) -> u32 {
        match self {
            SpaceId::RPinf => 1,
            SpaceId::BSpin2 | SpaceId::SigmaCPinf => 2,
            SpaceId::BSpin3 => 4,
        }
    }

    /// Whether the space has a degree-zero class (a basepoint component).
    pub fn has_point_class(self) -> bool {
        self != SpaceId::SigmaCPinf
    }

    pub fn class_symbol(self) -> &'static str {
        match self {
            SpaceId::RPinf => "e",
            SpaceId::BSpin2 => "a",
            SpaceId::BSpin3 => "b",
            SpaceId::SigmaCPinf => "abar",
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            SpaceId::RPinf => "rp-inf",
            SpaceId::BSpin2 => "bspin2",
            SpaceId::BSpin3 => "bspin3",
            SpaceId::SigmaCPinf => "sigma-cp-inf",
        }
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for SpaceId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpaceId::ALL
            .into_iter()
            .find(|sp| sp.cli_name() == s)
            .ok_or_else(|| format!("unknown space `{s}` (expected rp-inf, bspin2, bspin3 or sigma-cp-inf)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceClass {
    pub space: SpaceId,
    pub index: u32,
}

impl SpaceClass {
    pub fn new(space: SpaceId, index: u32) -> Self {
        SpaceClass { space, index }
    }

    pub fn degree(self) -> u32 {
        self.space.class_degree(self.index)
    }
}

impl fmt::Display for SpaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.space.class_symbol(), self.index)
    }
}

/// One side of a base coproduct term; `None` is the unit of the suspension.
pub type CoproductTerm = (Option<SpaceClass>, Option<SpaceClass>);

pub fn coproduct(c: SpaceClass) -> Vec<CoproductTerm> {
    let sp = c.space;
    match sp {
        SpaceId::SigmaCPinf => vec![(Some(c), None), (None, Some(c))],
        _ => (0..=c.index)
            .map(|i| (Some(SpaceClass::new(sp, i)), Some(SpaceClass::new(sp, c.index - i))))
            .collect(),
    }
}

/// `Sq^k_*` on a base class. Odd-primary style gaps (e.g. `Sq^1` on `a_n`)
/// vanish.
pub fn steenrod_dual(k: u32, c: SpaceClass) -> Option<SpaceClass> {
    let step = c.space.period();
    if k % step != 0 {
        return None;
    }
    let j = (k / step) as i64;
    let n = c.index as i64;
    binom2(n - j, j).then(|| SpaceClass::new(c.space, (n - j) as u32))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LambdaKind {
    /// `Sq^k_*` on degree `2k`.
    Lambda,
    /// `Sq^k_*` on degree `2k + 1`.
    LambdaPrime,
    /// `Sq^k_*` on degree `2k + 2`.
    LambdaDouble,
}

impl LambdaKind {
    /// The Steenrod index for an input of degree `deg`, or `None` when the
    /// parity does not match.
    pub fn index_for(self, deg: u32) -> Option<u32> {
        match self {
            LambdaKind::Lambda => (deg % 2 == 0).then_some(deg / 2),
            LambdaKind::LambdaPrime => (deg % 2 == 1).then_some(deg / 2),
            LambdaKind::LambdaDouble => (deg % 2 == 0 && deg >= 2).then(|| (deg - 2) / 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LambdaKind::Lambda => "lambda",
            LambdaKind::LambdaPrime => "lambda'",
            LambdaKind::LambdaDouble => "lambda''",
        }
    }
}

pub fn lambda_base(kind: LambdaKind, c: SpaceClass) -> Option<SpaceClass> {
    kind.index_for(c.degree()).and_then(|k| steenrod_dual(k, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: u32) -> SpaceClass {
        SpaceClass::new(SpaceId::RPinf, n)
    }

    #[test]
    fn lucas() {
        assert!(binom2(3, 1));
        assert!(!binom2(2, 1));
        assert!(binom2(4, 0));
        assert!(!binom2(-1, 0));
        assert!(!binom2(3, -1));
        for n in 0..40i64 {
            let mut row = vec![1u64];
            for _ in 0..n {
                let mut next = vec![1u64; row.len() + 1];
                for k in 1..row.len() {
                    next[k] = (row[k - 1] + row[k]) % 2;
                }
                row = next;
            }
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(binom2(n, k as i64), c == 1, "C({n},{k})");
            }
        }
    }

    #[test]
    fn coproduct_examples() {
        assert_eq!(coproduct(e(0)), vec![(Some(e(0)), Some(e(0)))]);
        assert_eq!(
            coproduct(e(2)),
            vec![(Some(e(0)), Some(e(2))), (Some(e(1)), Some(e(1))), (Some(e(2)), Some(e(0)))]
        );
        let a3 = SpaceClass::new(SpaceId::SigmaCPinf, 3);
        assert_eq!(coproduct(a3), vec![(Some(a3), None), (None, Some(a3))]);
    }

    #[test]
    fn steenrod_examples() {
        assert_eq!(steenrod_dual(2, e(4)), Some(e(2)));
        assert_eq!(steenrod_dual(2, e(5)), Some(e(3)));
        assert_eq!(steenrod_dual(1, e(4)), Some(e(3)));
        assert_eq!(steenrod_dual(0, e(7)), Some(e(7)));
        let a = |i| SpaceClass::new(SpaceId::BSpin2, i);
        assert_eq!(steenrod_dual(1, a(3)), None);
        assert_eq!(steenrod_dual(2, a(3)), None);
        assert_eq!(steenrod_dual(2, a(2)), Some(a(1)));
        let b = |i| SpaceClass::new(SpaceId::BSpin3, i);
        assert_eq!(steenrod_dual(2, b(2)), None);
        assert_eq!(steenrod_dual(4, b(3)), None);
        assert_eq!(steenrod_dual(4, b(2)), Some(b(1)));
        let s = |i| SpaceClass::new(SpaceId::SigmaCPinf, i);
        assert_eq!(steenrod_dual(2, s(3)), None);
        assert_eq!(steenrod_dual(2, s(2)), Some(s(1)));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_base(LambdaKind::Lambda, e(4)), Some(e(2)));
        assert_eq!(lambda_base(LambdaKind::LambdaPrime, e(7)), None);
        assert_eq!(lambda_base(LambdaKind::LambdaDouble, e(4)), Some(e(3)));
        assert_eq!(lambda_base(LambdaKind::Lambda, e(3)), None);
    }

    #[test]
    fn lambda_on_rp_matches_closed_forms() {
        for r in 1..=6u32 {
            assert_eq!(lambda_base(LambdaKind::Lambda, e(2 * r)), Some(e(r)));
            let prime = lambda_base(LambdaKind::LambdaPrime, e(2 * r - 1));
            assert_eq!(prime, (r % 2 == 1).then_some(e(r)));
            if r >= 1 {
                let double = lambda_base(LambdaKind::LambdaDouble, e(2 * r - 2));
                let c = (r * r.saturating_sub(1) / 2) % 2 == 1;
                assert_eq!(double, c.then_some(e(r)), "r = {r}");
            }
        }
    }
}
