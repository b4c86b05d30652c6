//! Randomized properties shared by the property suite and the acceptance
//! run. Each returns the first failure as text.

#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use partcong::basis::{load_basis_n20, mw_reduce, ModuleElement, ReductionResult, ReductionTable};
use partcong::modcurve::{canonical, cusp_equivalent, cusp_representatives, eta_order_at_cusp, Cusp};
use partcong::series::{divisors, eta_expand, EtaQuotient, Integers, ModPrimePower, QSeries, Ring};
use partcong::ujump::u_ell;

pub const CASES: u32 = 256;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&s, f).map_err(|e| e.to_string())
}

fn series(start: i64, coeffs: Vec<i64>, trunc: i64) -> QSeries<Integers> {
    QSeries::from_i64s(0, start, &coeffs, trunc)
}

fn int_series() -> impl Strategy<Value = QSeries<Integers>> {
    (-6i64..6, prop::collection::vec(-20i64..20, 1..30)).prop_map(|(start, c)| {
        let trunc = start + 30;
        series(start, c, trunc)
    })
}

fn mod_series(ring: ModPrimePower) -> impl Strategy<Value = QSeries<ModPrimePower>> {
    int_series().prop_map(move |s| s.reduce_mod(ring))
}

/// U_ℓ is linear, and U_ℓ(f(q^ℓ)·g) = f·U_ℓ(g).
pub fn lemma1_identities(cases: u32) -> Result<(), String> {
    let s = (prop::sample::select(vec![2u64, 3, 5, 7]), int_series(), int_series(), int_series());
    run(cases, s, |(ell, f, g, h)| {
        let lhs = u_ell(&g.add(&h).unwrap(), ell).unwrap();
        let rhs = u_ell(&g, ell).unwrap().add(&u_ell(&h, ell).unwrap()).unwrap();
        prop_assert_eq!(lhs.truncate(rhs.trunc()), rhs.truncate(lhs.trunc()));
        let fl = f.substitute_power(ell);
        let lhs = u_ell(&fl.mul(&g).unwrap(), ell).unwrap();
        let rhs = f.mul(&u_ell(&g, ell).unwrap()).unwrap();
        let t = lhs.trunc().min(rhs.trunc());
        prop_assert_eq!(lhs.truncate(t), rhs.truncate(t));
        Ok(())
    })
}

fn ring_laws<R: Ring>(a: &QSeries<R>, b: &QSeries<R>, c: &QSeries<R>) -> Result<(), TestCaseError> {
    let same = |x: QSeries<R>, y: QSeries<R>| {
        let t = x.trunc().min(y.trunc());
        x.truncate(t) == y.truncate(t)
    };
    prop_assert!(same(a.mul(b).unwrap(), b.mul(a).unwrap()), "commutativity");
    prop_assert!(
        same(a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap()),
        "associativity"
    );
    prop_assert!(
        same(
            a.mul(&b.add(c).unwrap()).unwrap(),
            a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap()
        ),
        "distributivity"
    );
    prop_assert!(same(a.add(&a.neg()).unwrap(), QSeries::zero(a.ring().clone(), 0, a.trunc())), "negation");
    Ok(())
}

/// Commutativity, associativity, distributivity and inverses over Z and
/// Z/5³.
pub fn series_ring_laws(cases: u32) -> Result<(), String> {
    let ring = ModPrimePower::new(5, 3).unwrap();
    run(cases, (int_series(), int_series(), int_series()), |(a, b, c)| ring_laws(&a, &b, &c))?;
    run(cases, (mod_series(ring), mod_series(ring), mod_series(ring)), |(a, b, c)| {
        ring_laws(&a, &b, &c)?;
        if let Ok(inv) = a.inv() {
            let p = a.mul(&inv).unwrap();
            prop_assert_eq!(p.clone(), QSeries::one(ring, p.trunc()));
        }
        Ok(())
    })
}

fn eta_quotient() -> impl Strategy<Value = EtaQuotient> {
    prop::sample::select(vec![4u64, 6, 10, 12, 20, 25, 36, 50]).prop_flat_map(|n| {
        let d = divisors(n);
        prop::collection::vec(-6i64..6, d.len())
            .prop_map(move |r| EtaQuotient::new(n, divisors(n).into_iter().zip(r)).unwrap())
    })
}

/// The Ligozat order at the class of ∞ equals the exponent of the leading
/// term of the q-expansion.
pub fn ligozat_matches_valuation(cases: u32) -> Result<(), String> {
    run(cases, eta_quotient(), |eq| {
        let n = eq.level();
        let ord = eta_order_at_cusp(&eq, Cusp::new(1, n as i64));
        let s = eta_expand(&eq, 10).unwrap();
        let lead24 = s.offset24() + 24 * s.valuation();
        prop_assert_eq!(ord * 24, num_rational::Rational64::from(lead24));
        Ok(())
    })
}

/// Expanding Σ c·t^j·g_k and reducing the series recovers the element.
pub fn mw_reduce_reconstruction(cases: u32) -> Result<(), String> {
    let b = load_basis_n20();
    let mut table = ReductionTable::new(Integers, &b, 24);
    table.ensure(30).unwrap();
    let term = (0i64..4, 0usize..5, -9i64..10);
    run(cases, prop::collection::vec(term, 0..8), |terms| {
        let mut e = ModuleElement::zero(Integers);
        for (j, k, c) in terms {
            e.add_term(j, k, &BigInt::from(c));
        }
        let f = e.expand(&b, 24).unwrap();
        match mw_reduce(&f, &table).unwrap() {
            ReductionResult::Member(back) => prop_assert_eq!(back, e),
            ReductionResult::NotMember { order } => prop_assert!(false, "gap at {}", order),
        }
        Ok(())
    })
}

/// Orders of an eta quotient agree on equivalent cusps, and γ·x is
/// equivalent to x for γ in Γ0(N).
pub fn order_equivalence_invariance(cases: u32) -> Result<(), String> {
    let s = (eta_quotient(), -40i64..40, 1i64..60, -5i64..6, -5i64..6);
    run(cases, s, |(eq, a, c, p, q)| {
        let n = eq.level() as i64;
        let x = Cusp::new(a, c);
        // γ = [[1 + p·q·N, p], [q·N, 1]] has determinant 1 and lower-left ≡ 0 mod N.
        let (ga, gb, gc, gd) = (1 + p * q * n, p, q * n, 1);
        let y = Cusp::new(ga * x.a() + gb * x.c() as i64, gc * x.a() + gd * x.c() as i64);
        prop_assume!(!y.is_infinity());
        prop_assert!(cusp_equivalent(x, y, n as u64).is_some(), "{} !~ {}", x, y);
        let rx = canonical(x, n as u64);
        let ry = canonical(y, n as u64);
        prop_assert_eq!(rx, ry);
        prop_assert!(cusp_representatives(n as u64).contains(&rx));
        prop_assert_eq!(eta_order_at_cusp(&eq, x), eta_order_at_cusp(&eq, rx));
        prop_assert_eq!(eta_order_at_cusp(&eq, y), eta_order_at_cusp(&eq, rx));
        Ok(())
    })
}
