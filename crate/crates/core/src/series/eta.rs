use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::qseries::QSeries;
use super::ring::{Integers, Ring};
use super::SeriesError;

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The eta quotient ∏_{δ|N} η(δτ)^{r_δ} at level N.
///
/// Zero exponents are accepted on construction and dropped from storage, so
/// two quotients compare equal exactly when they define the same function
/// at the same level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    pub fn new(level: u64, exponents: impl IntoIterator<Item = (u64, i64)>) -> Result<Self, SeriesError> {
        if level == 0 {
            return Err(SeriesError::Parse("level must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (d, r) in exponents {
            if d == 0 || level % d != 0 {
                return Err(SeriesError::NotADivisor { divisor: d, level });
            }
            *map.entry(d).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient { level, exponents: map })
    }

    /// The constant function 1 at level N.
    pub fn one(level: u64) -> Self {
        EtaQuotient {
            level,
            exponents: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Nonzero exponents keyed by divisor.
    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    /// Exponent vector over all divisors of the level, ascending.
    pub fn exponent_vector(&self) -> Vec<i64> {
        divisors(self.level).into_iter().map(|d| self.exponent(d)).collect()
    }

    /// Σ r_δ.
    pub fn weight_sum(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// Σ δ·r_δ, i.e. 24 times the order at infinity.
    pub fn delta_sum(&self) -> i64 {
        self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum()
    }

    /// Same function regarded at a multiple of the level.
    pub fn lift(&self, level: u64) -> Result<Self, SeriesError> {
        if level % self.level != 0 {
            return Err(SeriesError::NotADivisor {
                divisor: self.level,
                level,
            });
        }
        Ok(EtaQuotient {
            level,
            exponents: self.exponents.clone(),
        })
    }

    /// f(τ) ↦ f(dτ), at level d·N.
    pub fn scale_argument(&self, d: u64) -> Self {
        EtaQuotient {
            level: self.level * d,
            exponents: self.exponents.iter().map(|(&k, &r)| (k * d, r)).collect(),
        }
    }

    /// Product of two quotients, at the lcm of their levels.
    pub fn mul(&self, other: &Self) -> Self {
        let level = self.level.lcm(&other.level);
        let mut exponents = self.exponents.clone();
        for (&d, &r) in &other.exponents {
            *exponents.entry(d).or_insert(0) += r;
        }
        exponents.retain(|_, r| *r != 0);
        EtaQuotient { level, exponents }
    }

    pub fn pow(&self, n: i64) -> Self {
        let exponents = if n == 0 {
            BTreeMap::new()
        } else {
            self.exponents.iter().map(|(&d, &r)| (d, r * n)).collect()
        };
        EtaQuotient {
            level: self.level,
            exponents,
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.level)?;
        let parts: Vec<String> = self.exponents.iter().map(|(d, r)| format!("{d}^{r}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for EtaQuotient {
    type Err = SeriesError;

    /// Parses `N:d1^e1,d2^e2,...`, e.g. `20:1^2,4^2,10^8,5^-2,20^-10`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| SeriesError::Parse(format!("{s:?}: {why}"));
        let (level, rest) = s.split_once(':').ok_or_else(|| bad("expected N:d^e,..."))?;
        let level: u64 = level.trim().parse().map_err(|_| bad("level is not a positive integer"))?;
        let mut pairs = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, e) = part.split_once('^').ok_or_else(|| bad("factor must look like d^e"))?;
            let d: u64 = d.trim().parse().map_err(|_| bad("divisor is not an integer"))?;
            let e: i64 = e.trim().parse().map_err(|_| bad("exponent is not an integer"))?;
            pairs.push((d, e));
        }
        EtaQuotient::new(level, pairs)
    }
}

/// (q^d;q^d)_∞ over the integers, known below q^trunc.
pub fn euler_product(d: u64, trunc: i64) -> QSeries<Integers> {
    euler_product_in(Integers, d, trunc)
}

/// (q^d;q^d)_∞ over any ring, from the pentagonal number theorem
/// Σ_k (-1)^k q^{d·k(3k-1)/2}.
pub fn euler_product_in<R: Ring>(ring: R, d: u64, trunc: i64) -> QSeries<R> {
    assert!(d >= 1, "Euler product needs a positive step");
    if trunc <= 0 {
        return QSeries::zero(ring, 0, trunc.max(0));
    }
    let d = d as i64;
    let mut dense = vec![ring.zero(); trunc as usize];
    let one = ring.one();
    let minus_one = ring.neg(&one);
    let mut k: i64 = 0;
    loop {
        let sign = if k % 2 == 0 { &one } else { &minus_one };
        let p1 = d * k * (3 * k - 1) / 2;
        let p2 = d * k * (3 * k + 1) / 2;
        if p1 >= trunc && p2 >= trunc {
            break;
        }
        if p1 < trunc {
            dense[p1 as usize] = sign.clone();
        }
        if k > 0 && p2 < trunc {
            dense[p2 as usize] = sign.clone();
        }
        k += 1;
    }
    QSeries::from_dense(ring, 0, 0, dense, trunc)
}

/// Expansion of an eta quotient over the integers.
///
/// The result carries `offset24 = Σ δ·r_δ` and its product part is known
/// below `q^trunc` (relative to that offset).
pub fn eta_expand(eq: &EtaQuotient, trunc: i64) -> Result<QSeries<Integers>, SeriesError> {
    eta_expand_in(Integers, eq, trunc)
}

/// [`eta_expand`] over any ring. Negative exponents invert the sparse
/// pentagonal series before raising to a power.
pub fn eta_expand_in<R: Ring>(ring: R, eq: &EtaQuotient, trunc: i64) -> Result<QSeries<R>, SeriesError> {
    if trunc < 0 {
        return Err(SeriesError::InsufficientPrecision {
            needed: 0,
            available: trunc,
        });
    }
    let mut acc = QSeries::one(ring.clone(), trunc);
    for (&d, &r) in eq.exponents() {
        let base_trunc = (trunc + d as i64 - 1) / d as i64;
        let base = euler_product_in(ring.clone(), 1, base_trunc);
        let factor = base.pow(r)?.substitute_power(d).truncate(trunc);
        acc = acc.mul_to(&factor, trunc);
    }
    Ok(QSeries::from_dense(
        ring,
        eq.delta_sum(),
        acc.valuation(),
        acc.coeffs().to_vec(),
        acc.trunc(),
    ))
}

/// Expansion with the q^{Σδr/24} prefactor folded into integer exponents,
/// known below q^abs_trunc. Fails when Σδr is not a multiple of 24.
pub fn eta_expand_at<R: Ring>(ring: R, eq: &EtaQuotient, abs_trunc: i64) -> Result<QSeries<R>, SeriesError> {
    let delta = eq.delta_sum();
    if delta % 24 != 0 {
        return Err(SeriesError::FractionalExponent { offset24: delta });
    }
    let rel = abs_trunc - delta / 24;
    if rel <= 0 {
        return Ok(QSeries::zero(ring, 0, abs_trunc));
    }
    eta_expand_in(ring, eq, rel)?.normalize_offset()
}

/// Exact expansion of ∏(q^δ;q^δ)^{r_δ} through the logarithmic-derivative
/// recurrence n·a(n) = Σ_{k≤n} b(k)·a(n−k), b(k) = −Σ_{δ|k} r_δ·δ·σ(k/δ).
///
/// This is an independent route to the same coefficients as
/// [`eta_expand`]; the offset is `Σ δ·r_δ` as there.
pub fn expand_by_divisor_sums(eq: &EtaQuotient, trunc: i64) -> QSeries<Integers> {
    let n_max = trunc.max(0) as usize;
    let mut sigma = vec![0i64; n_max + 1];
    for d in 1..=n_max {
        for m in (d..=n_max).step_by(d) {
            sigma[m] += d as i64;
        }
    }
    let mut b = vec![0i64; n_max + 1];
    for (&delta, &r) in eq.exponents() {
        let delta = delta as usize;
        for k in (delta..=n_max).step_by(delta.max(1)) {
            b[k] -= r * delta as i64 * sigma[k / delta];
        }
    }
    let mut a: Vec<BigInt> = Vec::with_capacity(n_max);
    if n_max > 0 {
        a.push(BigInt::from(1));
    }
    for n in 1..n_max {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            if b[k] != 0 {
                acc += &a[n - k] * b[k];
            }
        }
        let (q, rem) = acc.div_rem(&BigInt::from(n as i64));
        debug_assert!(rem.is_zero(), "log-derivative recurrence must divide exactly");
        a.push(q);
    }
    QSeries::from_dense(Integers, eq.delta_sum(), 0, a, trunc.max(0))
}
