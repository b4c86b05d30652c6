use std::fmt;

use num_bigint::BigInt;

use super::ring::{Integers, ModPrimePower, Ring};
use super::SeriesError;

/// A truncated Laurent series in q with a global prefactor q^{offset24/24}.
///
/// The coefficient stored at index `i` belongs to the monomial
/// `q^{offset24/24 + valuation + i}`. Coefficients are known (possibly zero)
/// for every integer exponent `< trunc`; nothing beyond `trunc` is known.
/// The first stored coefficient is nonzero; the zero series stores nothing
/// and reports `valuation == trunc`.
#[derive(Clone, PartialEq)]
pub struct QSeries<R: Ring> {
    ring: R,
    offset24: i64,
    valuation: i64,
    coeffs: Vec<R::Elem>,
    trunc: i64,
}

impl<R: Ring> QSeries<R> {
    /// Builds a series from dense coefficients starting at exponent `start`.
    /// Exponents in `[start + coeffs.len(), trunc)` are taken to be zero and
    /// coefficients at or beyond `trunc` are dropped.
    pub fn from_dense(ring: R, offset24: i64, start: i64, mut coeffs: Vec<R::Elem>, trunc: i64) -> Self {
        let keep = (trunc - start).max(0) as usize;
        coeffs.truncate(keep);
        let first = coeffs.iter().position(|c| !ring.is_zero(c));
        match first {
            None => Self::zero(ring, offset24, trunc),
            Some(skip) => {
                coeffs.drain(..skip);
                let valuation = start + skip as i64;
                coeffs.resize((trunc - valuation) as usize, ring.zero());
                QSeries {
                    ring,
                    offset24,
                    valuation,
                    coeffs,
                    trunc,
                }
            }
        }
    }

    /// Builds a series from sparse `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms(ring: R, offset24: i64, terms: &[(i64, R::Elem)], trunc: i64) -> Self {
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero(ring, offset24, trunc);
        };
        let lo = lo.min(trunc);
        let mut dense = vec![ring.zero(); (trunc - lo).max(0) as usize];
        for (e, c) in terms {
            if *e < trunc {
                let idx = (e - lo) as usize;
                dense[idx] = ring.add(&dense[idx], c);
            }
        }
        Self::from_dense(ring, offset24, lo, dense, trunc)
    }

    pub fn zero(ring: R, offset24: i64, trunc: i64) -> Self {
        QSeries {
            ring,
            offset24,
            valuation: trunc,
            coeffs: Vec::new(),
            trunc,
        }
    }

    pub fn one(ring: R, trunc: i64) -> Self {
        let one = ring.one();
        Self::from_dense(ring, 0, 0, vec![one], trunc)
    }

    /// `c·q^e` known to `trunc`.
    pub fn monomial(ring: R, coeff: R::Elem, exp: i64, trunc: i64) -> Self {
        Self::from_dense(ring, 0, exp, vec![coeff], trunc)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    /// Lowest exponent (relative to the offset) with a nonzero coefficient;
    /// equals `trunc` for the zero series.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Dense coefficients from `valuation` up to `trunc`.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.first()
    }

    /// Coefficient of q^{offset24/24 + n}, or `None` when `n ≥ trunc`.
    pub fn coeff(&self, n: i64) -> Option<R::Elem> {
        if n >= self.trunc {
            None
        } else if n < self.valuation {
            Some(self.ring.zero())
        } else {
            Some(self.coeffs[(n - self.valuation) as usize].clone())
        }
    }

    /// Coefficients for exponents `lo..hi`, all of which must be known.
    pub fn coeff_range(&self, lo: i64, hi: i64) -> Result<Vec<R::Elem>, SeriesError> {
        if hi > self.trunc {
            return Err(SeriesError::InsufficientPrecision {
                needed: hi,
                available: self.trunc,
            });
        }
        Ok((lo..hi).map(|n| self.coeff(n).expect("below trunc")).collect())
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R::Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(move |(i, c)| (self.valuation + i as i64, c))
    }

    /// Drops everything at or beyond `trunc`.
    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        Self::from_dense(
            self.ring.clone(),
            self.offset24,
            self.valuation,
            self.coeffs.clone(),
            trunc,
        )
    }

    /// Moves the q^{offset24/24} prefactor into integer exponents. Fails if
    /// the prefactor is fractional.
    pub fn normalize_offset(&self) -> Result<Self, SeriesError> {
        if self.offset24 % 24 != 0 {
            return Err(SeriesError::FractionalExponent {
                offset24: self.offset24,
            });
        }
        let shift = self.offset24 / 24;
        Ok(QSeries {
            ring: self.ring.clone(),
            offset24: 0,
            valuation: self.valuation + shift,
            coeffs: self.coeffs.clone(),
            trunc: self.trunc + shift,
        })
    }

    /// Multiplies by q^k.
    pub fn shift(&self, k: i64) -> Self {
        QSeries {
            ring: self.ring.clone(),
            offset24: self.offset24,
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            trunc: self.trunc + k,
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch {
                left: self.ring.kind(),
                right: other.ring.kind(),
            });
        }
        Ok(())
    }

    /// Re-expresses `other` with this series' offset, when the two offsets
    /// differ by an integer power of q.
    fn aligned(&self, other: &Self) -> Result<Self, SeriesError> {
        let diff = other.offset24 - self.offset24;
        if diff % 24 != 0 {
            return Err(SeriesError::OffsetMismatch {
                left: self.offset24,
                right: other.offset24,
            });
        }
        let mut o = other.shift(diff / 24);
        o.offset24 = self.offset24;
        Ok(o)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, |r, a, b| r.sub(a, b))
    }

    fn combine(&self, other: &Self, op: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let other = self.aligned(other)?;
        let trunc = self.trunc.min(other.trunc);
        let lo = self.valuation.min(other.valuation).min(trunc);
        let zero = self.ring.zero();
        let dense: Vec<R::Elem> = (lo..trunc)
            .map(|n| {
                let a = self.coeff(n).unwrap_or_else(|| zero.clone());
                let b = other.coeff(n).unwrap_or_else(|| zero.clone());
                op(&self.ring, &a, &b)
            })
            .collect();
        Ok(Self::from_dense(self.ring.clone(), self.offset24, lo, dense, trunc))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        QSeries {
            coeffs,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.ring.mul(c, x)).collect();
        Self::from_dense(self.ring.clone(), self.offset24, self.valuation, coeffs, self.trunc)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let trunc = (self.valuation + other.trunc).min(other.valuation + self.trunc);
        Ok(self.mul_to(other, trunc))
    }

    /// Product known up to `min(trunc, natural truncation)`; cheaper than
    /// [`QSeries::mul`] when fewer coefficients are needed.
    pub fn mul_to(&self, other: &Self, trunc: i64) -> Self {
        let natural = (self.valuation + other.trunc).min(other.valuation + self.trunc);
        let trunc = trunc.min(natural);
        let offset24 = self.offset24 + other.offset24;
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone(), offset24, trunc);
        }
        let val = self.valuation + other.valuation;
        let len = (trunc - val).max(0) as usize;
        let coeffs = self.ring.convolve(&self.coeffs, &other.coeffs, len);
        Self::from_dense(self.ring.clone(), offset24, val, coeffs, trunc)
    }

    /// Multiplicative inverse; the leading coefficient must be a unit.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let lead = self.leading().ok_or(SeriesError::NonUnitLeading)?;
        let lead_inv = self.ring.inv(lead).ok_or(SeriesError::NonUnitLeading)?;
        let rel = self.coeffs.len();
        let f = &self.coeffs;
        let nonzero: Vec<usize> = (1..rel).filter(|&k| !self.ring.is_zero(&f[k])).collect();
        let sparse = nonzero.len() * 8 < rel;
        let mut g: Vec<R::Elem> = Vec::with_capacity(rel);
        g.push(lead_inv.clone());
        let neg_inv = self.ring.neg(&lead_inv);
        for n in 1..rel {
            let acc = if sparse {
                let mut acc = self.ring.zero();
                for &k in nonzero.iter().take_while(|&&k| k <= n) {
                    acc = self.ring.add(&acc, &self.ring.mul(&f[k], &g[n - k]));
                }
                acc
            } else {
                self.ring.dot_rev(&f[1..=n], &g[..n])
            };
            g.push(self.ring.mul(&neg_inv, &acc));
        }
        let val = -self.valuation;
        Ok(Self::from_dense(
            self.ring.clone(),
            -self.offset24,
            val,
            g,
            val + rel as i64,
        ))
    }

    /// Integer power; negative exponents go through [`QSeries::inv`].
    pub fn pow(&self, n: i64) -> Result<Self, SeriesError> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let rel = self.trunc - self.valuation;
        let mut result = QSeries::one(self.ring.clone(), rel);
        if n == 0 {
            return Ok(result);
        }
        let mut base = self.clone();
        let mut e = n as u64;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { base.clone() } else { result.mul(&base)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// f(q) ↦ f(q^d).
    pub fn substitute_power(&self, d: u64) -> Self {
        assert!(d >= 1, "substitution power must be positive");
        let d = d as i64;
        if self.is_zero() {
            return Self::zero(self.ring.clone(), self.offset24 * d, self.trunc * d);
        }
        let trunc = self.trunc * d;
        let val = self.valuation * d;
        let mut dense = vec![self.ring.zero(); (trunc - val) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            dense[i * d as usize] = c.clone();
        }
        Self::from_dense(self.ring.clone(), self.offset24 * d, val, dense, trunc)
    }

    /// Maps coefficients into another ring through `f`.
    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> QSeries<S> {
        let coeffs = self.coeffs.iter().map(f).collect();
        QSeries::from_dense(target, self.offset24, self.valuation, coeffs, self.trunc)
    }
}

impl QSeries<Integers> {
    /// Reduces every coefficient to its least nonnegative residue mod ℓ^B.
    pub fn reduce_mod(&self, ring: ModPrimePower) -> QSeries<ModPrimePower> {
        self.map_ring(ring, |c| ring.from_bigint(c))
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_i64s(offset24: i64, start: i64, coeffs: &[i64], trunc: i64) -> Self {
        let dense = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_dense(Integers, offset24, start, dense, trunc)
    }
}

impl<R: Ring> fmt::Debug for QSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<R: Ring> fmt::Display for QSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.offset24 != 0 {
            write!(f, "q^({}/24)·(", self.offset24)?;
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let text = self.ring.format(c);
            let text = match (first, text.strip_prefix('-')) {
                (true, _) => text.clone(),
                (false, Some(rest)) => format!(" - {rest}"),
                (false, None) => format!(" + {text}"),
            };
            first = false;
            match e {
                0 => write!(f, "{text}")?,
                1 => write!(f, "{text}·q")?,
                _ => write!(f, "{text}·q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc)?;
        if self.offset24 != 0 {
            write!(f, ")")?;
        }
        Ok(())
    }
}
