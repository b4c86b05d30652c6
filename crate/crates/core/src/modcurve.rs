//! Cusps of Γ0(N), Newman's modularity criteria for eta quotients, and
//! Ligozat's order formula.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::series::{divisors, EtaQuotient};

/// A cusp a/c in lowest terms. `c == 0` is the cusp at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cusp {
    a: i64,
    c: u64,
}

impl Cusp {
    /// Reduces a/c; a negative denominator flips both signs.
    pub fn new(a: i64, c: i64) -> Self {
        if c == 0 {
            return Cusp::infinity();
        }
        let g = a.gcd(&c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 {
            a = -a;
            c = -c;
        }
        Cusp { a, c: c as u64 }
    }

    pub fn infinity() -> Self {
        Cusp { a: 1, c: 0 }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }
}

/// Cusps order by their value as rationals, with infinity last.
impl Ord for Cusp {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.c, other.c) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            (c1, c2) => (self.a as i128 * c2 as i128)
                .cmp(&(other.a as i128 * c1 as i128))
                .then(c1.cmp(&c2)),
        }
    }
}

impl PartialOrd for Cusp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c {
            0 => write!(f, "inf"),
            1 => write!(f, "{}", self.a),
            c => write!(f, "{}/{}", self.a, c),
        }
    }
}

impl FromStr for Cusp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Cusp::infinity());
        }
        let bad = || format!("invalid cusp {s:?}, expected a/c");
        match s.split_once('/') {
            Some((a, c)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let c: i64 = c.trim().parse().map_err(|_| bad())?;
                if c == 0 {
                    return Err(bad());
                }
                Ok(Cusp::new(a, c))
            }
            None => Ok(Cusp::new(s.parse().map_err(|_| bad())?, 1)),
        }
    }
}

fn modinv(a: i64, m: i64) -> Option<i64> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Number of cusps of Γ0(N): Σ_{c|N} φ(gcd(c, N/c)).
pub fn cusp_count(n: u64) -> usize {
    divisors(n).into_iter().map(|c| euler_phi(c.gcd(&(n / c)))).sum::<u64>() as usize
}

fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// Tests whether x and y lie in the same Γ0(N)-orbit.
///
/// Returns a witness (m, n) with gcd(m, N) = 1, m·a₁ ≡ a + n·c and
/// c₁ ≡ m·c (mod N), where x = a/c and y = a₁/c₁. The smallest m is
/// reported, with the smallest n ≥ 0 for that m.
pub fn cusp_equivalent(x: Cusp, y: Cusp, n: u64) -> Option<(u64, u64)> {
    let big_n = n as i64;
    let (x, y) = (as_finite(x, n), as_finite(y, n));
    let (a, c) = (x.a.rem_euclid(big_n), (x.c % n) as i64);
    let (a1, c1) = (y.a.rem_euclid(big_n), (y.c % n) as i64);
    if c.gcd(&big_n) != c1.gcd(&big_n) {
        return None;
    }
    let g = c.gcd(&big_n);
    let step = big_n / g;
    let c_red_inv = if step == 1 { 0 } else { modinv(c / g, step)? };
    for m in 1..big_n.max(2) {
        if m.gcd(&big_n) != 1 {
            continue;
        }
        if (m * c - c1).rem_euclid(big_n) != 0 {
            continue;
        }
        let diff = (m * a1 - a).rem_euclid(big_n);
        if diff % g != 0 {
            continue;
        }
        let nn = if step == 1 { 0 } else { ((diff / g) * c_red_inv).rem_euclid(step) };
        return Some((m as u64, nn as u64));
    }
    None
}

/// Infinity stands for the class of 1/N.
fn as_finite(x: Cusp, n: u64) -> Cusp {
    if x.is_infinity() {
        Cusp::new(1, n as i64)
    } else {
        x
    }
}

/// One representative per cusp class of Γ0(N), ascending by value.
///
/// For each c | N the numerators run over the units modulo gcd(c, N/c),
/// each lifted to the smallest positive a coprime to c.
pub fn cusp_representatives(n: u64) -> Vec<Cusp> {
    assert!(n >= 1, "level must be positive");
    let mut reps: Vec<Cusp> = Vec::new();
    for c in divisors(n) {
        let g = c.gcd(&(n / c));
        for u in 0..g {
            if u.gcd(&g) != 1 {
                continue;
            }
            let mut a = if u == 0 { g } else { u };
            while a.gcd(&c) != 1 {
                a += g;
            }
            let cand = Cusp::new(a as i64, c as i64);
            if !reps.iter().any(|r| cusp_equivalent(*r, cand, n).is_some()) {
                reps.push(cand);
            }
        }
    }
    reps.sort();
    reps
}

/// Representative in [`cusp_representatives`] of the class of x.
pub fn canonical(x: Cusp, n: u64) -> Cusp {
    canonical_in(x, n, &cusp_representatives(n))
}

/// [`canonical`] against a precomputed representative list.
pub fn canonical_in(x: Cusp, n: u64, reps: &[Cusp]) -> Cusp {
    let x = as_finite(x, n);
    let g = x.c.gcd(&n);
    *reps
        .iter()
        .filter(|r| r.c.gcd(&n) == g)
        .find(|r| cusp_equivalent(x, **r, n).is_some())
        .expect("every cusp is equivalent to some representative")
}

/// Class over Γ0(target) of the limit of (τ + r)/ℓ as τ → x.
pub fn cusp_image_under_scaling(x: Cusp, r: u64, ell: u64, target: u64) -> Cusp {
    canonical(scaled(x, r, ell), target)
}

/// (a + c·r)/(c·ℓ) as a reduced fraction; infinity stays at infinity.
pub fn scaled(x: Cusp, r: u64, ell: u64) -> Cusp {
    if x.is_infinity() {
        return x;
    }
    let c = x.c as i64;
    Cusp::new(x.a + c * r as i64, c * ell as i64)
}

/// Outcome of Newman's four modularity conditions for an eta quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewmanCheck {
    pub weight_zero: bool,
    pub delta_sum_ok: bool,
    pub codelta_sum_ok: bool,
    pub square: bool,
    /// k₀ with ∏ δ^{|r_δ|} = k₀², when that product is a square.
    pub k0: Option<BigUint>,
}

impl NewmanCheck {
    pub fn holds(&self) -> bool {
        self.weight_zero && self.delta_sum_ok && self.codelta_sum_ok && self.square
    }
}

/// Checks Σr_δ = 0, Σδr_δ ≡ 0, Σ(N/δ)r_δ ≡ 0 (mod 24) and that ∏δ^{|r_δ|}
/// is a perfect square.
pub fn newman_check(eq: &EtaQuotient) -> NewmanCheck {
    let n = eq.level() as i64;
    let codelta: i64 = eq.exponents().iter().map(|(&d, &r)| (n / d as i64) * r).sum();
    let mut prime_exps: BTreeMap<u64, u64> = BTreeMap::new();
    for (&d, &r) in eq.exponents() {
        for (p, e) in factor(d) {
            *prime_exps.entry(p).or_insert(0) += e * r.unsigned_abs();
        }
    }
    let square = prime_exps.values().all(|e| e % 2 == 0);
    let k0 = square.then(|| {
        prime_exps
            .iter()
            .fold(BigUint::one(), |acc, (&p, &e)| acc * BigUint::from(p).pow((e / 2) as u32))
    });
    NewmanCheck {
        weight_zero: eq.weight_sum() == 0,
        delta_sum_ok: eq.delta_sum() % 24 == 0,
        codelta_sum_ok: codelta % 24 == 0,
        square,
        k0,
    }
}

fn factor(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Order of an eta quotient at a cusp over Γ0(level of `eq`):
/// N/(24·gcd(c², N)) · Σ r_δ·gcd(c, δ)²/δ.
pub fn eta_order_at_cusp(eq: &EtaQuotient, cusp: Cusp) -> Rational64 {
    let n = eq.level();
    let c = cusp.c % n;
    let gc2 = (c * c).gcd(&n) as i64;
    let sum = eq.exponents().iter().fold(Rational64::zero(), |acc, (&d, &r)| {
        let g = c.gcd(&d) as i64;
        acc + Rational64::new(r * g * g, d as i64)
    });
    sum * Rational64::new(n as i64, 24 * gc2)
}

/// Orders of a function at every cusp representative of its level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspOrderVector {
    pub level: u64,
    pub entries: Vec<(Cusp, Rational64)>,
}

impl CuspOrderVector {
    pub fn get(&self, cusp: Cusp) -> Option<Rational64> {
        self.entries.iter().find(|(c, _)| *c == cusp).map(|(_, o)| *o)
    }

    /// Cusps with negative order.
    pub fn poles(&self) -> Vec<Cusp> {
        self.entries.iter().filter(|(_, o)| *o < Rational64::zero()).map(|(c, _)| *c).collect()
    }

    pub fn total(&self) -> Rational64 {
        self.entries.iter().map(|(_, o)| *o).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|(_, o)| o.is_integer())
    }

    /// Integer orders, when all of them are integral.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|(_, o)| o.is_integer().then(|| o.to_integer())).collect()
    }
}

impl fmt::Display for CuspOrderVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, o)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}: {o}")?;
        }
        Ok(())
    }
}

pub fn order_vector(eq: &EtaQuotient) -> CuspOrderVector {
    let entries = cusp_representatives(eq.level())
        .into_iter()
        .map(|c| (c, eta_order_at_cusp(eq, c)))
        .collect();
    CuspOrderVector {
        level: eq.level(),
        entries,
    }
}
