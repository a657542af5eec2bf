//! Verification suites. Each target runs a family of exact checks and
//! returns per-check pass counts; failures are reported, never thrown.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::dyer_lashof::QGenerator;
use crate::loopspace::{self, LambdaDoubleWitness, LoopError, LoopModel, PrimitiveLabel};
use crate::maps::{self, MapError, TailPolicy};
use crate::qhopf::afunctor::{a_functor_dims, exterior_dims};
use crate::qhopf::element::Element;
use crate::qhopf::{AlgebraError, Normalization, QAlgebra};
use crate::space::{binom2, lambda_base, LambdaKind, SpaceClass, SpaceId};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown target `{0}`; expected one of {}", Target::ids().join(", "))]
    UnknownTarget(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// The closed set of verification targets, with their command-line ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Target {
    #[serde(rename = "lemma3.6")]
    BaseLambda,
    #[serde(rename = "lemma3.7")]
    LambdaCommutation,
    #[serde(rename = "prop3.8")]
    LambdaOnto,
    #[serde(rename = "prop3.9")]
    LambdaPrimeOnto,
    #[serde(rename = "prop3.10")]
    LambdaDoubleGap,
    #[serde(rename = "cor2.7")]
    PartialInjective,
    #[serde(rename = "thm2")]
    TransferComposite,
    #[serde(rename = "thm3")]
    FirstLoop,
    #[serde(rename = "thm4")]
    SecondLoop,
    #[serde(rename = "cor1.8")]
    BettiBound,
}

impl Target {
    pub const ALL: [Target; 10] = [
        Target::BaseLambda,
        Target::LambdaCommutation,
        Target::LambdaOnto,
        Target::LambdaPrimeOnto,
        Target::LambdaDoubleGap,
        Target::PartialInjective,
        Target::TransferComposite,
        Target::FirstLoop,
        Target::SecondLoop,
        Target::BettiBound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Target::BaseLambda => "lemma3.6",
            Target::LambdaCommutation => "lemma3.7",
            Target::LambdaOnto => "prop3.8",
            Target::LambdaPrimeOnto => "prop3.9",
            Target::LambdaDoubleGap => "prop3.10",
            Target::PartialInjective => "cor2.7",
            Target::TransferComposite => "thm2",
            Target::FirstLoop => "thm3",
            Target::SecondLoop => "thm4",
            Target::BettiBound => "cor1.8",
        }
    }

    pub fn ids() -> Vec<&'static str> {
        Target::ALL.iter().map(|t| t.id()).collect()
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Target {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL.into_iter().find(|t| t.id() == s).ok_or_else(|| VerifyError::UnknownTarget(s.to_string()))
    }
}

const MAX_LISTED_FAILURES: usize = 20;

/// Pass count for one family of checks.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: 0, total: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(what());
        }
    }

    fn single(name: impl Into<String>, ok: bool, what: impl FnOnce() -> String) -> Self {
        let mut c = Check::new(name);
        c.record(ok, what);
        c
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub target: Target,
    pub max_degree: u32,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Named values worth printing (witnesses, dimension lists).
    pub facts: Vec<(String, String)>,
}

impl Report {
    fn new(target: Target, max_degree: u32, checks: Vec<Check>, facts: Vec<(String, String)>) -> Self {
        let passed = checks.iter().all(Check::ok);
        Report { target, max_degree, passed, checks, facts }
    }

    pub fn fact(&self, key: &str) -> Option<&str> {
        self.facts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn run(target: Target, max_degree: u32) -> Result<Report, VerifyError> {
    match target {
        Target::BaseLambda => base_lambda(max_degree),
        Target::LambdaCommutation => lambda_commutation(max_degree),
        Target::LambdaOnto => lambda_onto(max_degree),
        Target::LambdaPrimeOnto => lambda_prime_onto(max_degree),
        Target::LambdaDoubleGap => lambda_double_gap(max_degree),
        Target::PartialInjective => partial_injective(max_degree),
        Target::TransferComposite => transfer_composite(max_degree),
        Target::FirstLoop => first_loop(max_degree),
        Target::SecondLoop => second_loop(max_degree),
        Target::BettiBound => betti_bound(max_degree),
    }
}

fn rp_class(n: u32) -> SpaceClass {
    SpaceClass::new(SpaceId::RPinf, n)
}

fn e(n: u32) -> Element {
    Element::generator(QGenerator::base_class(rp_class(n)))
}

fn scaled(c: bool, x: Element) -> Element {
    if c {
        x
    } else {
        Element::zero()
    }
}

/// `λe_{2r} = e_r`, `λ'e_{2r-1} = r e_r`, `λ''e_{2r-2} = C(r,2) e_r`, on the
/// space and inside the loop-space algebra.
fn base_lambda(max_degree: u32) -> Result<Report, VerifyError> {
    let alg = maps::rp_plus();
    let cases: [(LambdaKind, fn(u32) -> (u32, bool), u32); 3] = [
        (LambdaKind::Lambda, |r| (2 * r, true), 1),
        (LambdaKind::LambdaPrime, |r| (2 * r - 1, r % 2 == 1), 1),
        (LambdaKind::LambdaDouble, |r| (2 * r - 2, binom2(r as i64, 2)), 2),
    ];
    let mut checks = Vec::new();
    for (kind, input, r0) in cases {
        let mut space = Check::new(format!("{} on the space", kind.name()));
        let mut loops = Check::new(format!("{} in the algebra", kind.name()));
        for r in r0.. {
            let (n, c) = input(r);
            if n > max_degree {
                break;
            }
            let expected = c.then(|| rp_class(r));
            let got = lambda_base(kind, rp_class(n));
            space.record(got == expected, || format!("{} e_{n} = {got:?}", kind.name()));
            let got = alg.lambda(kind, &e(n))?;
            let want = scaled(c, e(r));
            loops.record(got == want, || format!("{} e_{n} = {got}, expected {want}", kind.name()));
        }
        checks.push(space);
        checks.push(loops);
    }
    Ok(Report::new(Target::BaseLambda, max_degree, checks, Vec::new()))
}

/// The commutation rules of the `λ` family with `Q^t`, for `x` ranging over
/// all generators and `t + deg x ≤ max_degree`.
fn lambda_commutation(max_degree: u32) -> Result<Report, VerifyError> {
    use LambdaKind::*;
    let alg = maps::rp_plus();
    let mut eq = [
        Check::new("lambda Q^2s x = Q^s lambda x"),
        Check::new("lambda' Q^2s x = Q^s lambda' x"),
        Check::new("lambda' Q^(2s-1) x = (deg Q^s lambda x) Q^s lambda x"),
        Check::new("lambda'' Q^2s x = Q^s lambda'' x if lambda x = 0"),
        Check::new("lambda'' Q^(2s-1) x = (1 + deg Q^s lambda' x) Q^s lambda' x"),
    ];
    let mut covered = 0usize;
    for &g in alg.generators(max_degree).iter() {
        if g.is_point_class() {
            continue;
        }
        let x = Element::generator(g);
        let d = g.degree();
        for t in 1..=max_degree - d {
            let y = alg.q(t, &x);
            covered += 1;
            let label = || format!("t={t}, x={g}");
            if t % 2 == 0 {
                let s = t / 2;
                if d % 2 == 0 {
                    let lx = alg.lambda(Lambda, &x)?;
                    eq[0].record(alg.lambda(Lambda, &y)? == alg.q(s, &lx), label);
                    if lx.is_zero() && d >= 2 {
                        let want = alg.q(s, &alg.lambda(LambdaDouble, &x)?);
                        eq[3].record(alg.lambda(LambdaDouble, &y)? == want, label);
                    }
                } else {
                    let want = alg.q(s, &alg.lambda(LambdaPrime, &x)?);
                    eq[1].record(alg.lambda(LambdaPrime, &y)? == want, label);
                }
            } else {
                let s = (t + 1) / 2;
                if d % 2 == 0 {
                    let base = alg.q(s, &alg.lambda(Lambda, &x)?);
                    let want = scaled((s + d / 2) % 2 == 1, base);
                    eq[2].record(alg.lambda(LambdaPrime, &y)? == want, label);
                } else {
                    let base = alg.q(s, &alg.lambda(LambdaPrime, &x)?);
                    let want = scaled((s + (d + 1) / 2) % 2 == 0, base);
                    eq[4].record(alg.lambda(LambdaDouble, &y)? == want, label);
                }
            }
        }
    }
    let facts = vec![("instances".to_string(), covered.to_string())];
    Ok(Report::new(Target::LambdaCommutation, max_degree, eq.into(), facts))
}

/// `λ` onto `QH_*`, in the reduced and plus models, plus the explicit
/// preimages `λQ^{2I}e_{2r} ≡ Q^I e_r` modulo decomposables.
fn lambda_onto(max_degree: u32) -> Result<Report, VerifyError> {
    let mut checks = Vec::new();
    for norm in [Normalization::Plus, Normalization::Reduced] {
        let alg = QAlgebra::get(SpaceId::RPinf, norm);
        let mut c = Check::new(format!("lambda onto QH ({norm:?})"));
        for r in loopspace::lambda_on_indecomposables(alg, max_degree)? {
            c.record(r.surjective(), || format!("QH_{} -> QH_{}: rank {} of {}", r.source_degree, r.target_degree, r.rank, r.target_dim));
        }
        checks.push(c);
    }
    let alg = maps::rp_plus();
    let mut hits = Check::new("lambda Q^2I e_2r = Q^I e_r mod decomposables");
    for &g in alg.generators(max_degree / 2).iter() {
        if g.is_point_class() || g.base().index == 0 {
            continue;
        }
        let doubled: Vec<u32> = g.word().iter().map(|i| 2 * i).collect();
        let src = QGenerator::new(rp_class(2 * g.base().index), &doubled);
        let got = alg.lambda(LambdaKind::Lambda, &Element::generator(src))?.linear_part();
        hits.record(got == Element::generator(g), || format!("lambda {src} = {got} mod decomposables"));
    }
    checks.push(hits);
    Ok(Report::new(Target::LambdaOnto, max_degree, checks, Vec::new()))
}

/// `λ'` onto `PH_*`, plus `λ'p_{4r+1} = p_{2r+1}`.
fn lambda_prime_onto(max_degree: u32) -> Result<Report, VerifyError> {
    let mut checks = Vec::new();
    for norm in [Normalization::Plus, Normalization::Reduced] {
        let alg = QAlgebra::get(SpaceId::RPinf, norm);
        let mut c = Check::new(format!("lambda' onto PH ({norm:?})"));
        for r in loopspace::lambda_on_primitives(alg, LambdaKind::LambdaPrime, max_degree)? {
            c.record(r.surjective(), || format!("PH_{} -> PH_{}: rank {} of {}", r.source_degree, r.target_degree, r.rank, r.target_dim));
        }
        checks.push(c);
    }
    let alg = maps::rp_plus();
    let mut c = Check::new("lambda' p_(4r+1) = p_(2r+1)");
    for r in 0.. {
        if 4 * r + 1 > max_degree {
            break;
        }
        let p = loopspace::canonical_primitive(alg, &PrimitiveLabel::new(&[], 4 * r + 1)?)?;
        let q = loopspace::canonical_primitive(alg, &PrimitiveLabel::new(&[], 2 * r + 1)?)?;
        let got = alg.lambda(LambdaKind::LambdaPrime, &p)?;
        c.record(got == q, || format!("lambda' p_{} = {got}", 4 * r + 1));
    }
    checks.push(c);
    Ok(Report::new(Target::LambdaPrimeOnto, max_degree, checks, Vec::new()))
}

/// `λ''` misses `p_{(2,1)} + p_3 ∈ Ker λ'`. Computed in the reduced model,
/// where `PH_4` is spanned by `Q^3 e_1` and `Q^2 Q^1 e_1 = e_1^4`.
fn lambda_double_gap(max_degree: u32) -> Result<Report, VerifyError> {
    let alg = QAlgebra::get(SpaceId::RPinf, Normalization::Reduced);
    let w: LambdaDoubleWitness = loopspace::lambda_double_witness(alg)?;
    let b4 = alg.basis(4);
    let ph4 = alg.primitives(4);
    let q3 = QGenerator::new(rp_class(1), &[3]);
    let stated = [Element::generator(q3), alg.apply_word(&[2, 1], &e(1))];
    let mut basis = Check::new("PH_4 = span{Q^3 e_1, Q^2 Q^1 e_1}");
    basis.record(ph4.dim() == 2, || format!("dim PH_4 = {}", ph4.dim()));
    for x in &stated {
        basis.record(ph4.contains(&b4.coords(x)?), || format!("{x} is not primitive"));
    }
    basis.record(!stated[0].add(&stated[1]).is_zero() && stated[0] != stated[1], || "classes coincide".into());
    let facts = vec![
        ("witness".to_string(), w.label.clone()),
        ("witness_element".to_string(), w.element.render()),
        ("lambda'(p_3)".to_string(), w.lambda_prime_of_p3.render()),
        ("PH_4".to_string(), w.degree4_primitives.iter().map(Element::render).collect::<Vec<_>>().join("; ")),
    ];
    let checks = vec![
        basis,
        Check::single("witness in Ker lambda'", w.in_kernel_of_lambda_prime, || "lambda' of witness is nonzero".into()),
        Check::single("witness not in lambda''(PH_4)", !w.hit_by_lambda_double, || "witness is hit".into()),
        Check::single("lambda' p_3 = Q^1 e_1", w.lambda_prime_of_p3 == alg.apply_word(&[1], &e(1)), || {
            format!("lambda' p_3 = {}", w.lambda_prime_of_p3)
        }),
    ];
    Ok(Report::new(Target::LambdaDoubleGap, max_degree, checks, facts))
}

fn partial_injective(max_degree: u32) -> Result<Report, VerifyError> {
    let mut checks = Vec::new();
    for policy in TailPolicy::ALL {
        let rows = maps::PartialMap::new(policy).injectivity(max_degree)?;
        let mut all = Check::new(format!("partial injective (tail {policy})"));
        let mut prim = Check::new(format!("P(partial) injective (tail {policy})"));
        for r in &rows {
            all.record(r.rank == r.source_dim, || format!("degree {}: rank {} of {}", r.degree, r.rank, r.source_dim));
            prim.record(r.primitive_rank == r.primitive_dim, || {
                format!("degree {}: rank {} of {}", r.degree, r.primitive_rank, r.primitive_dim)
            });
        }
        checks.push(all);
        checks.push(prim);
    }
    Ok(Report::new(Target::PartialInjective, max_degree, checks, Vec::new()))
}

fn transfer_composite(max_degree: u32) -> Result<Report, VerifyError> {
    let mut checks = Vec::new();
    let xi = maps::kernel_poincare(max_degree);
    for policy in TailPolicy::ALL {
        let k = maps::loop_partial_kernel_dims(policy, max_degree)?;
        checks.push(Check::single(format!("kernel dims = xi dims (tail {policy})"), k == xi, || {
            format!("kernel {k:?} vs xi {xi:?}")
        }));
    }

    let b3 = maps::bspin3_plus();
    let mut formula = Check::new("Q^2I b_i -> (Q^I a_i)^2");
    for &g in b3.generators(max_degree).iter() {
        if g.word().iter().any(|i| i % 2 == 1) {
            continue;
        }
        let got = maps::bspin3_composite(g)?;
        let want = maps::bspin3_composite_expected(g);
        formula.record(got == want, || format!("{g} -> {got}, expected {want}"));
    }
    checks.push(formula);

    // Every generator square of ξH is hit by a generator of the source.
    let b2 = maps::bspin2_plus();
    let mut onto = Check::new("xi generators hit");
    for &h in b2.generators(max_degree / 2).iter() {
        let doubled: Vec<u32> = h.word().iter().map(|i| 2 * i).collect();
        let g = QGenerator::new(SpaceClass::new(SpaceId::BSpin3, h.base().index), &doubled);
        let ok = b3.is_model_generator(g) && maps::bspin3_composite(g)? == maps::bspin3_composite_expected(g);
        onto.record(ok, || format!("{h}^2 has no generator preimage"));
    }
    checks.push(onto);

    let a = |i| Element::generator(QGenerator::base_class(SpaceClass::new(SpaceId::BSpin2, i)));
    let mut transfer = Check::new("(iota + c) a_2i = a_i^2, a_(2i+1) -> 0");
    for i in 0.. {
        if 2 * i + 1 > 6.min(max_degree) {
            break;
        }
        let got = maps::transfer_iota_plus_c(2 * i);
        transfer.record(got == a(i).square(), || format!("a_{} -> {got}", 2 * i));
        let got = maps::transfer_iota_plus_c(2 * i + 1);
        transfer.record(got.is_zero(), || format!("a_{} -> {got}", 2 * i + 1));
    }
    checks.push(transfer);
    let facts = vec![("xi_dims".to_string(), format!("{xi:?}"))];
    Ok(Report::new(Target::TransferComposite, max_degree, checks, facts))
}

fn first_loop(max_degree: u32) -> Result<Report, VerifyError> {
    let model = LoopModel::first(maps::rp_plus(), max_degree);
    let polynomial = model.is_polynomial()?;
    let pres = model.presentation()?;
    let a = a_functor_dims(&pres, max_degree);
    let ext = exterior_dims(pres.degrees(), max_degree);
    // Squaring on D_d = PH_{d+1} is λ': PH_{2d+1} → PH_{d+1}.
    let onto = loopspace::lambda_on_primitives(maps::rp_plus(), LambdaKind::LambdaPrime, max_degree + 1)?
        .iter()
        .filter(|r| r.target_degree >= 2)
        .all(|r| r.surjective());
    let checks = vec![
        Check::single("first loop space polynomial", polynomial, || "squaring not injective".into()),
        Check::single("polynomial iff lambda' onto", polynomial == onto, || format!("lambda' onto: {onto}")),
        Check::single("A-functor dims = exterior dims", a == ext, || format!("{a:?} vs {ext:?}")),
    ];
    let facts = vec![
        ("generator_dims".to_string(), format!("{:?}", model.dims())),
        ("poincare".to_string(), format!("{a:?}")),
    ];
    Ok(Report::new(Target::FirstLoop, max_degree, checks, facts))
}

/// The second loop space is primitively generated but not polynomial.
/// Degrees count in the second loop space; the square-zero generator sits
/// in degree 1 there, degree 2 in the first loop space.
fn second_loop(max_degree: u32) -> Result<Report, VerifyError> {
    let model = LoopModel::first(maps::rp_plus(), max_degree + 1).next()?;
    let polynomial = model.is_polynomial()?;
    let witness = model.square_zero_witness()?;
    let pres = model.presentation()?;
    let a = a_functor_dims(&pres, max_degree);
    let ext = exterior_dims(pres.degrees(), max_degree);
    let zero_squares: Vec<(u32, usize)> = model
        .squaring_checks()?
        .iter()
        .map(|c| (c.degree, c.square_zero_generators()))
        .filter(|&(_, k)| k > 0)
        .collect();
    let checks = vec![
        Check::single("second loop space not polynomial", !polynomial, || "squaring injective".into()),
        Check::single("square-zero generator from first-loop degree 2", witness.as_ref().is_some_and(|w| w.0 + 1 == 2), || {
            format!("witness {witness:?}")
        }),
        Check::single("A-functor dims = exterior dims", a == ext, || format!("{a:?} vs {ext:?}")),
    ];
    let mut facts = vec![
        ("generator_dims".to_string(), format!("{:?}", model.dims())),
        ("square_zero_generators".to_string(), format!("{zero_squares:?}")),
        ("poincare".to_string(), format!("{a:?}")),
    ];
    if let Some((d, x)) = witness {
        facts.push(("witness".to_string(), format!("degree {d}: {x}")));
    }
    Ok(Report::new(Target::SecondLoop, max_degree, checks, facts))
}

fn betti_bound(max_degree: u32) -> Result<Report, VerifyError> {
    let mut checks = Vec::new();
    let mut facts = Vec::new();
    for policy in TailPolicy::ALL {
        let rows = maps::betti_bound_check(policy, max_degree)?;
        let mut c = Check::new(format!("betti <= bound (tail {policy})"));
        for r in &rows {
            c.record(r.betti <= r.bound, || format!("degree {}: {} > {}", r.degree, r.betti, r.bound));
        }
        checks.push(c);
        if policy == TailPolicy::Primitive {
            facts.push(("betti".to_string(), format!("{:?}", rows.iter().map(|r| r.betti).collect::<Vec<_>>())));
            facts.push(("bound".to_string(), format!("{:?}", rows.iter().map(|r| r.bound).collect::<Vec<_>>())));
        }
    }
    Ok(Report::new(Target::BettiBound, max_degree, checks, facts))
}
