//! The operator U_ℓ, the auxiliary function A, stability exponents, and
//! the table of images U_ℓ(A^i·t^j·g_k) written in the basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basis::{mw_reduce, AlgebraBasis, BasisFunction, ModuleElement, ReductionResult, ReductionTable};
use crate::error::{Error, Result};
use crate::modcurve::{cusp_representatives, eta_order_at_cusp, Cusp};
use crate::series::{eta_expand_at, is_prime, EtaQuotient, QSeries, Ring, SeriesError};

/// G(q) = ∏_{δ|M} (q^δ;q^δ)^{r_δ} together with the prime ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyGenerator {
    m: u64,
    r: BTreeMap<u64, i64>,
    ell: u64,
}

impl FamilyGenerator {
    /// Validates divisibility, primality of ℓ > 3, and
    /// 0 ≤ −Σδr_δ ≤ 24/(ℓ+1).
    pub fn new(m: u64, r: impl IntoIterator<Item = (u64, i64)>, ell: u64) -> Result<Self> {
        let eq = EtaQuotient::new(m, r).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        if ell <= 3 || !is_prime(ell) {
            return Err(Error::InvalidSpec(format!("ell = {ell} must be a prime greater than 3")));
        }
        let s = -eq.delta_sum();
        if s < 0 || s * (ell as i64 + 1) > 24 {
            return Err(Error::InvalidSpec(format!(
                "need 0 <= -sum(delta*r) <= 24/(ell+1), got -sum(delta*r) = {s} with ell = {ell}"
            )));
        }
        Ok(FamilyGenerator {
            m,
            r: eq.exponents().clone(),
            ell,
        })
    }

    /// 1/C(q) = (q²;q²)⁵ / ((q;q)³(q⁴;q⁴)²) with ℓ = 5.
    pub fn rogers_ramanujan() -> Self {
        FamilyGenerator::new(4, [(1, -3), (2, 5), (4, -2)], 5).expect("valid generator")
    }

    /// CΦ₂(q) = (q²;q²)⁵ / ((q;q)⁴(q⁴;q⁴)²) with ℓ = 5.
    pub fn andrews_sellers() -> Self {
        FamilyGenerator::new(4, [(1, -4), (2, 5), (4, -2)], 5).expect("valid generator")
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn r(&self) -> &BTreeMap<u64, i64> {
        &self.r
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// N = ℓ·M.
    pub fn level(&self) -> u64 {
        self.ell * self.m
    }

    /// G as an eta quotient at level M; its expansion carries q^{Σδr/24}.
    pub fn eta(&self) -> EtaQuotient {
        EtaQuotient::new(self.m, self.r.clone()).expect("validated on construction")
    }

    /// Σδr_δ.
    pub fn delta_sum(&self) -> i64 {
        self.eta().delta_sum()
    }
}

/// A = q^{(1−ℓ²)Σδr/24}·G(q)/G(q^{ℓ²}) as an eta quotient of level ℓ²M.
pub fn build_a(gen: &FamilyGenerator) -> EtaQuotient {
    let l2 = gen.ell * gen.ell;
    let g = gen.eta().lift(gen.m * l2).expect("M divides l^2 M");
    let a = g.mul(&gen.eta().scale_argument(l2).inv());
    assert_eq!(
        a.delta_sum() % 24,
        0,
        "q-power of A must be integral"
    );
    a
}

/// U_ℓ: keeps the exponents divisible by ℓ and divides them by ℓ.
///
/// A coefficient of q^{ℓm} is known when ℓm < trunc, so the result is
/// known below ⌈trunc/ℓ⌉.
pub fn u_ell<R: Ring>(f: &QSeries<R>, ell: u64) -> std::result::Result<QSeries<R>, SeriesError> {
    let f = f.normalize_offset()?;
    let l = ell as i64;
    let trunc = Integer::div_ceil(&f.trunc(), &l);
    let lo = Integer::div_ceil(&f.valuation(), &l);
    let coeffs: Vec<R::Elem> = (lo..trunc).map(|m| f.coeff(m * l).expect("below trunc")).collect();
    Ok(QSeries::from_dense(f.ring().clone(), 0, lo, coeffs, trunc))
}

/// U_ℓ(p·q) below q^trunc without forming the full product.
pub fn u_of_product<R: Ring>(p: &QSeries<R>, q: &QSeries<R>, ell: u64, trunc: i64) -> Result<QSeries<R>> {
    let ring = p.ring().clone();
    let (p, q) = (
        p.normalize_offset().map_err(Error::series("u_ell"))?,
        q.normalize_offset().map_err(Error::series("u_ell"))?,
    );
    if p.is_zero() || q.is_zero() {
        return Ok(QSeries::zero(ring, 0, trunc));
    }
    let l = ell as i64;
    let (vp, vq) = (p.valuation(), q.valuation());
    let top = l * (trunc - 1);
    let natural = (vp + q.trunc()).min(vq + p.trunc());
    if top >= natural {
        return Err(Error::series("u_ell")(SeriesError::InsufficientPrecision {
            needed: top + 1,
            available: natural,
        }));
    }
    let lo = Integer::div_ceil(&(vp + vq), &l);
    let coeffs: Vec<R::Elem> = (lo..trunc)
        .map(|m| {
            let len = (l * m - vp - vq + 1) as usize;
            ring.dot_rev(&p.coeffs()[..len.min(p.coeffs().len())], &q.coeffs()[..len.min(q.coeffs().len())][..])
        })
        .collect();
    Ok(QSeries::from_dense(ring, 0, lo, coeffs, trunc))
}

/// Minimal powers of t(ℓτ) that cancel every finite-cusp pole over
/// Γ0(ℓN); index 0 of `m_k` belongs to g₀ = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityExponents {
    pub m_a: u64,
    pub m_t: u64,
    pub m_negt: u64,
    pub m_k: Vec<u64>,
}

impl StabilityExponents {
    /// m(i,j,k) = i·m_A + |j|·(m_t for j > 0, m_{t⁻¹} for j < 0) + m_k.
    pub fn m(&self, i: u8, j: i64, k: usize) -> u64 {
        let per = if j > 0 { self.m_t } else { self.m_negt };
        i as u64 * self.m_a + j.unsigned_abs() * per + self.m_k[k]
    }
}

pub fn stability_exponent(se: &StabilityExponents, i: u8, j: i64, k: usize) -> u64 {
    se.m(i, j, k)
}

/// Orders over Γ0(ℓN) of t(ℓτ)^m·f written as `constant + coefficient·m`,
/// one row per cusp representative.
pub fn scaled_order_table(f: &EtaQuotient, t: &EtaQuotient, ell: u64) -> Vec<(Cusp, Rational64, Rational64)> {
    let big = t.level() * ell;
    let f = f.lift(big).expect("f must have level dividing l*N");
    let ts = t.scale_argument(ell);
    cusp_representatives(big)
        .into_iter()
        .map(|c| (c, eta_order_at_cusp(&f, c), eta_order_at_cusp(&ts, c)))
        .collect()
}

/// Least m ≥ 0 with m·ord(t(ℓτ)) + ord(f) ≥ 0 at every cusp of Γ0(ℓN)
/// other than ∞.
fn minimal_m(f: &EtaQuotient, t: &EtaQuotient, ell: u64, name: &str) -> Result<u64> {
    let rows = scaled_order_table(f, t, ell);
    let mut lower = 0i64;
    let mut upper = i64::MAX;
    for (c, base, coef) in rows.into_iter().skip(1) {
        if coef > Rational64::zero() {
            lower = lower.max((-base / coef).ceil().to_integer());
        } else if coef < Rational64::zero() {
            upper = upper.min((-base / coef).floor().to_integer());
        } else if base < Rational64::zero() {
            return Err(Error::Unbounded {
                op: "compute_m_constants",
                function: name.to_string(),
                cusp: c,
            });
        }
    }
    if lower > upper {
        return Err(Error::Unbounded {
            op: "compute_m_constants",
            function: name.to_string(),
            cusp: Cusp::infinity(),
        });
    }
    Ok(lower as u64)
}

fn minimal_m_for(f: &BasisFunction, t: &EtaQuotient, ell: u64) -> Result<u64> {
    f.terms()
        .iter()
        .map(|(_, e)| minimal_m(e, t, ell, f.name()))
        .try_fold(0, |acc, m| m.map(|m| acc.max(m)))
}

pub fn compute_m_constants(b: &AlgebraBasis, a: &EtaQuotient, ell: u64) -> Result<StabilityExponents> {
    let t = b
        .t
        .as_eta()
        .ok_or_else(|| Error::InvalidSpec("t must be a single eta quotient".into()))?;
    let mut m_k = vec![0];
    for g in &b.gs {
        m_k.push(minimal_m_for(g, t, ell)?);
    }
    Ok(StabilityExponents {
        m_a: minimal_m(a, t, ell, "A")?,
        m_t: minimal_m(t, t, ell, "t")?,
        m_negt: minimal_m(&t.inv(), t, ell, "1/t")?,
        m_k,
    })
}

/// Index of a fundamental image U_ℓ(A^i·t^j·g_k).
pub type ImageKey = (u8, i64, usize);

/// Coefficients q^e for e < slack are matched when reducing an image.
pub const DEFAULT_SLACK: i64 = 16;

/// Powers b⁰, b¹, … of one series, all with the same relative precision.
struct PowerChain<R: Ring> {
    rel: i64,
    powers: Vec<QSeries<R>>,
}

impl<R: Ring> PowerChain<R> {
    fn new() -> Self {
        PowerChain {
            rel: 0,
            powers: Vec::new(),
        }
    }

    fn ensure(&mut self, count: usize, rel: i64, base: impl Fn(i64) -> Result<QSeries<R>>) -> Result<()> {
        if count < self.powers.len() && rel <= self.rel {
            return Ok(());
        }
        let rel = if rel > self.rel { rel.max(self.rel + self.rel / 4) } else { self.rel };
        let count = count.max(self.powers.len());
        let b = base(rel)?;
        let one = QSeries::one(b.ring().clone(), rel);
        let mut powers = vec![one];
        for n in 1..=count {
            let next = powers[n - 1].mul(&b).map_err(Error::series("u_image"))?;
            powers.push(next);
        }
        self.powers = powers;
        self.rel = rel;
        Ok(())
    }

    fn get(&self, n: usize) -> &QSeries<R> {
        &self.powers[n]
    }
}

/// Computes and memoizes fundamental images over a coefficient ring.
///
/// Requests are prepared sequentially (series caches are grown to the
/// largest precision needed), then evaluated in parallel.
pub struct ImageEngine<R: Ring> {
    ring: R,
    basis: AlgebraBasis,
    a: EtaQuotient,
    a_ord: i64,
    ell: u64,
    se: StabilityExponents,
    slack: i64,
    t_pos: PowerChain<R>,
    t_neg: PowerChain<R>,
    ag: HashMap<(u8, usize), QSeries<R>>,
    table: ReductionTable<R>,
    memo: HashMap<ImageKey, ModuleElement<R>>,
    cache_dir: Option<PathBuf>,
    computed: usize,
}

impl<R: Ring> ImageEngine<R> {
    pub fn new(ring: R, basis: &AlgebraBasis, a: &EtaQuotient, ell: u64) -> Result<Self> {
        let se = compute_m_constants(basis, a, ell)?;
        let a_ord = a.delta_sum() / 24;
        Ok(ImageEngine {
            table: ReductionTable::new(ring.clone(), basis, DEFAULT_SLACK),
            ring,
            basis: basis.clone(),
            a: a.clone(),
            a_ord,
            ell,
            se,
            slack: DEFAULT_SLACK,
            t_pos: PowerChain::new(),
            t_neg: PowerChain::new(),
            ag: HashMap::new(),
            memo: HashMap::new(),
            cache_dir: None,
            computed: 0,
        })
    }

    /// Persists images under `dir`, one file per key.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn stability(&self) -> &StabilityExponents {
        &self.se
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Number of images computed from scratch (not memoized or cached).
    pub fn computed(&self) -> usize {
        self.computed
    }

    /// Absolute truncations needed for one key.
    fn plan(&self, (i, j, k): ImageKey) -> Plan {
        let n_t = self.basis.n_t();
        let l = self.ell as i64;
        let m = self.se.m(i, j, k) as i64;
        let tu = self.slack + n_t * m;
        let top = l * (tu - 1);
        let vp = i as i64 * self.a_ord - self.basis.g_order(k);
        let vq = -n_t * j;
        let vu = Integer::div_ceil(&(vp + vq), &l);
        Plan {
            m,
            tu,
            p_trunc: top - vq + 1,
            q_rel: top - vp + 1 - vq,
            tm_rel: self.slack - vu + n_t * m,
            poles: n_t * m - vu,
        }
    }

    fn prepare(&mut self, keys: &[ImageKey]) -> Result<()> {
        let plans: Vec<(ImageKey, Plan)> = keys.iter().map(|&key| (key, self.plan(key))).collect();
        let mut pos_rel = 0;
        let mut pos_count = 0usize;
        let mut neg_rel = 0;
        let mut neg_count = 0usize;
        let mut poles = 0;
        let mut ag_need: HashMap<(u8, usize), i64> = HashMap::new();
        for &((i, j, k), ref p) in &plans {
            if j >= 0 {
                pos_rel = pos_rel.max(p.q_rel);
                pos_count = pos_count.max(j as usize);
            } else {
                neg_rel = neg_rel.max(p.q_rel);
                neg_count = neg_count.max(j.unsigned_abs() as usize);
            }
            pos_rel = pos_rel.max(p.tm_rel);
            pos_count = pos_count.max(p.m as usize);
            poles = poles.max(p.poles);
            let e = ag_need.entry((i, k)).or_insert(i64::MIN);
            *e = (*e).max(p.p_trunc);
        }
        let (ring, basis) = (self.ring.clone(), self.basis.clone());
        let n_t = basis.n_t();
        self.t_pos
            .ensure(pos_count, pos_rel, |rel| basis.t.expand_in(ring.clone(), rel - n_t))?;
        if neg_count > 0 {
            self.t_neg.ensure(neg_count, neg_rel, |rel| {
                basis.t.expand_in(ring.clone(), rel - n_t)?.inv().map_err(Error::series("u_image"))
            })?;
        }
        for ((i, k), need) in ag_need {
            let have = self.ag.get(&(i, k)).map_or(i64::MIN, |s| s.trunc());
            if have >= need {
                continue;
            }
            let need = need.max(have.saturating_add(have.max(0) / 4));
            let g_ord = basis.g_order(k);
            let g = match k {
                0 => QSeries::one(ring.clone(), need + self.a_ord.abs() + 1),
                _ => basis.gs[k - 1].expand_in(ring.clone(), need - i as i64 * self.a_ord)?,
            };
            let s = if i == 1 {
                let a = eta_expand_at(ring.clone(), &self.a, need + g_ord).map_err(Error::series("u_image"))?;
                a.mul_to(&g, need)
            } else {
                g.truncate(need)
            };
            self.ag.insert((i, k), s);
        }
        self.table.ensure(poles)?;
        Ok(())
    }

    fn compute(&self, key: ImageKey) -> Result<ModuleElement<R>> {
        let (i, j, k) = key;
        let plan = self.plan(key);
        let p = &self.ag[&(i, k)];
        let q = if j >= 0 {
            self.t_pos.get(j as usize)
        } else {
            self.t_neg.get(j.unsigned_abs() as usize)
        };
        let u = u_of_product(p, q, self.ell, plan.tu)?;
        let f = self.t_pos.get(plan.m as usize).mul_to(&u, self.slack);
        if f.trunc() < self.slack {
            return Err(Error::series("u_image")(SeriesError::InsufficientPrecision {
                needed: self.slack,
                available: f.trunc(),
            }));
        }
        match mw_reduce(&f, &self.table)? {
            ReductionResult::Member(e) => Ok(e.shift_j(-plan.m)),
            ReductionResult::NotMember { order } => Err(Error::Stall { order }),
        }
    }

    /// Images for all keys, in order.
    pub fn images(&mut self, keys: &[ImageKey]) -> Result<Vec<ModuleElement<R>>> {
        let mut missing: Vec<ImageKey> = Vec::new();
        for &key in keys {
            if self.memo.contains_key(&key) || missing.contains(&key) {
                continue;
            }
            match self.load(key)? {
                Some(e) => {
                    self.memo.insert(key, e);
                }
                None => missing.push(key),
            }
        }
        if !missing.is_empty() {
            self.prepare(&missing)?;
            let results: Vec<Result<ModuleElement<R>>> = missing.par_iter().map(|&key| self.compute(key)).collect();
            for (key, r) in missing.into_iter().zip(results) {
                let e = r?;
                self.store(key, &e)?;
                self.computed += 1;
                self.memo.insert(key, e);
            }
        }
        Ok(keys.iter().map(|key| self.memo[key].clone()).collect())
    }

    pub fn image(&mut self, i: u8, j: i64, k: usize) -> Result<ModuleElement<R>> {
        Ok(self.images(&[(i, j, k)])?.remove(0))
    }

    /// Overrides a memoized image; used to inject faults in tests.
    pub fn set_image(&mut self, key: ImageKey, e: ModuleElement<R>) {
        self.memo.insert(key, e);
    }

    fn cache_path(&self, (i, j, k): ImageKey) -> Option<PathBuf> {
        let dir = self.cache_dir.as_ref()?;
        let mut h = Sha256::new();
        h.update(format!(
            "{}|{}|{}|{}|{}",
            self.basis.fingerprint(),
            self.a,
            self.ell,
            self.ring.kind(),
            self.slack
        ));
        let digest: String = h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect();
        Some(dir.join(format!("{digest}_{i}_{j}_{k}.img")))
    }

    fn header(&self, (i, j, k): ImageKey) -> String {
        format!("{} {} {} {} {} {}", self.basis.level, self.ell, i, j, k, self.basis.v())
    }

    fn load(&self, key: ImageKey) -> Result<Option<ModuleElement<R>>> {
        let Some(path) = self.cache_path(key) else {
            return Ok(None);
        };
        let Ok(text) = fs::read_to_string(&path) else {
            return Ok(None);
        };
        let bad = |why: &str| Error::Cache(format!("{}: {why}", path.display()));
        let mut lines = text.lines();
        if lines.next() != Some(self.header(key).as_str()) {
            return Err(bad("header does not match the requested image"));
        }
        let mut e = ModuleElement::zero(self.ring.clone());
        for line in lines {
            let mut it = line.split_whitespace();
            let (Some(j), Some(k), Some(c), None) = (it.next(), it.next(), it.next(), it.next()) else {
                return Err(bad("malformed line"));
            };
            let j: i64 = j.parse().map_err(|_| bad("bad j"))?;
            let k: usize = k.parse().map_err(|_| bad("bad k"))?;
            let c: BigInt = c.parse().map_err(|_| bad("bad coefficient"))?;
            e.add_term(j, k, &self.ring.from_bigint(&c));
        }
        Ok(Some(e))
    }

    fn store(&self, key: ImageKey, e: &ModuleElement<R>) -> Result<()> {
        let Some(path) = self.cache_path(key) else {
            return Ok(());
        };
        let mut text = self.header(key);
        text.push('\n');
        for (j, k, c) in e.terms() {
            let c = self
                .ring
                .to_bigint(c)
                .ok_or_else(|| Error::Cache("coefficient has no integer representative".into()))?;
            writeln!(text, "{j} {k} {c}").expect("writing to a String");
        }
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| Error::Cache(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))?;
        Ok(())
    }
}

struct Plan {
    m: i64,
    tu: i64,
    p_trunc: i64,
    q_rel: i64,
    tm_rel: i64,
    poles: i64,
}

/// Applies Σ c_{j,k}·U_ℓ(A^i·t^j·g_k) to an element by linearity.
pub fn apply_u<R: Ring>(engine: &mut ImageEngine<R>, i: u8, f: &ModuleElement<R>) -> Result<ModuleElement<R>> {
    let keys: Vec<ImageKey> = f.terms().map(|(j, k, _)| (i, j, k)).collect();
    let images = engine.images(&keys)?;
    let ring = engine.ring().clone();
    let coeffs: Vec<R::Elem> = f.terms().map(|(_, _, c)| c.clone()).collect();
    Ok(images
        .par_iter()
        .zip(coeffs.par_iter())
        .fold(
            || ModuleElement::zero(ring.clone()),
            |mut acc, (img, c)| {
                acc.add_scaled(img, c);
                acc
            },
        )
        .reduce(
            || ModuleElement::zero(ring.clone()),
            |mut a, b| {
                a.add_assign(&b);
                a
            },
        ))
}

/// T₁ = U(t⁻¹), T_α = U^{(α mod 2)}(T_{α−1}) where U^{(0)} = U(A·) and
/// U^{(1)} = U. Returns T₁, …, T_steps.
pub fn t_sequence<R: Ring>(engine: &mut ImageEngine<R>, steps: usize) -> Result<Vec<ModuleElement<R>>> {
    let one = engine.ring().one();
    let mut f = ModuleElement::from_terms(engine.ring().clone(), [((-1, 0), one)]);
    let mut out = Vec::with_capacity(steps);
    for alpha in 1..=steps {
        f = apply_u(engine, (alpha % 2 == 0) as u8, &f)?;
        out.push(f.clone());
    }
    Ok(out)
}

/// Coefficients of an exact image as machine integers, for display.
pub fn small_coefficients(e: &ModuleElement<crate::series::Integers>) -> Vec<(i64, usize, i64)> {
    e.terms()
        .map(|(j, k, c)| (j, k, c.to_i64().unwrap_or(if c.is_negative() { i64::MIN } else { i64::MAX })))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::load_basis_n20;
    use crate::modcurve::newman_check;
    use crate::series::{Integers, ModPrimePower};

    #[test]
    fn u_ell_examples() {
        let f = QSeries::from_i64s(0, 3, &[2, 0, 7, 0, 0, 0, 0, 1], 11);
        let u = u_ell(&f, 5).unwrap();
        assert_eq!(u, QSeries::from_i64s(0, 1, &[7, 1], 3));
        let c = QSeries::from_i64s(0, 0, &[9], 20);
        assert_eq!(u_ell(&c, 5).unwrap(), QSeries::from_i64s(0, 0, &[9], 4));
        assert!(u_ell(&QSeries::from_i64s(1, 0, &[1], 5), 5).is_err());
    }

    #[test]
    fn decimated_product_matches_full_product() {
        let b = load_basis_n20();
        let t = b.t.expand(200).unwrap();
        let g = b.gs[3].expand(200).unwrap();
        let direct = u_ell(&t.mul(&g).unwrap(), 5).unwrap().truncate(38);
        assert_eq!(u_of_product(&t, &g, 5, 38).unwrap(), direct);
    }

    #[test]
    fn generators_and_a() {
        let rr = build_a(&FamilyGenerator::rogers_ramanujan());
        assert_eq!(rr.to_string(), "100:1^-3,2^5,4^-2,25^3,50^-5,100^2");
        assert_eq!(rr.delta_sum(), 24);
        assert!(newman_check(&rr).holds());
        let s = build_a(&FamilyGenerator::andrews_sellers());
        assert_eq!(s.delta_sum(), 48);
        assert!(newman_check(&s).holds());
        let trivial = FamilyGenerator::new(4, [], 5).unwrap();
        assert!(build_a(&trivial).is_one());
        assert!(FamilyGenerator::new(4, [(1, -5)], 5).is_err());
        assert!(FamilyGenerator::new(4, [(1, 1)], 5).is_err());
        assert!(FamilyGenerator::new(4, [(1, -1)], 9).is_err());
    }

    #[test]
    fn m_constants_for_level_20() {
        let b = load_basis_n20();
        let a = build_a(&FamilyGenerator::rogers_ramanujan());
        let se = compute_m_constants(&b, &a, 5).unwrap();
        assert_eq!(se.m_a, 2);
        assert_eq!((se.m_t, se.m_negt), (5, 5));
        assert_eq!(se.m_k, vec![0, 2, 3, 4, 6]);
        assert_eq!(se.m(1, 1, 1), 9);
        assert_eq!(se.m(0, 0, 0), 0);
        assert_eq!(se.m(0, -1, 0), 5);
    }

    #[test]
    fn trivial_and_t_images() {
        let b = load_basis_n20();
        let a = build_a(&FamilyGenerator::rogers_ramanujan());
        let mut eng = ImageEngine::new(Integers, &b, &a, 5).unwrap();
        assert_eq!(eng.image(0, 0, 0).unwrap(), ModuleElement::one(Integers));
        let t1 = eng.image(0, 1, 0).unwrap();
        let direct = u_ell(&b.t.expand(200).unwrap(), 5).unwrap();
        assert_eq!(t1.expand(&b, 30).unwrap(), direct.truncate(30));
    }

    #[test]
    fn t_sequence_cycles_mod_5() {
        let ring = ModPrimePower::new(5, 1).unwrap();
        let el = |terms: &[(usize, u64)]| ModuleElement::from_terms(ring, terms.iter().map(|&(k, c)| ((-1, k), c)));
        let b = load_basis_n20();
        let a = build_a(&FamilyGenerator::rogers_ramanujan());
        let mut eng = ImageEngine::new(ring, &b, &a, 5).unwrap();
        let seq = t_sequence(&mut eng, 14).unwrap();
        assert_eq!(seq[0], el(&[(0, 4), (1, 2), (2, 1), (3, 1)]));
        assert_eq!(seq[1], el(&[(1, 3), (3, 2)]));
        let cycle = [
            el(&[(1, 3), (3, 2)]),
            el(&[(0, 3), (1, 4), (2, 2)]),
            el(&[(1, 4), (3, 1)]),
            el(&[(0, 4), (1, 2), (2, 1)]),
        ];
        for (n, want) in cycle.iter().enumerate() {
            assert_eq!(&seq[2 + n], want, "T{}", 3 + n);
            assert_eq!(&seq[10 + n], want, "T{}", 11 + n);
        }
    }

    #[test]
    fn image_expansion_matches_u_of_series() {
        let b = load_basis_n20();
        let a = build_a(&FamilyGenerator::rogers_ramanujan());
        let mut eng = ImageEngine::new(Integers, &b, &a, 5).unwrap();
        let e = eng.image(1, -1, 2).unwrap();
        let h = eta_expand_at(Integers, &a, 200)
            .unwrap()
            .mul(&b.t.expand(400).unwrap().inv().unwrap())
            .unwrap()
            .mul(&b.gs[1].expand(200).unwrap())
            .unwrap();
        let u = u_ell(&h, 5).unwrap().truncate(30);
        assert_eq!(e.expand(&b, 30).unwrap(), u);
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let b = load_basis_n20();
        let a = build_a(&FamilyGenerator::rogers_ramanujan());
        let mut eng = ImageEngine::new(Integers, &b, &a, 5).unwrap().with_cache_dir(dir.path());
        let first = eng.image(1, 2, 3).unwrap();
        assert_eq!(eng.computed(), 1);
        let mut again = ImageEngine::new(Integers, &b, &a, 5).unwrap().with_cache_dir(dir.path());
        assert_eq!(again.image(1, 2, 3).unwrap(), first);
        assert_eq!(again.computed(), 0);
        let file = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
        let text = fs::read_to_string(file).unwrap();
        assert!(text.starts_with("20 5 1 2 3 4\n"));
    }
}
