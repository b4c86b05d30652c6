//! The ℓ-adic iteration L_{α+1} = U^{(α)}(L_α) mod ℓ^B, the divisibility
//! exponents v_α it exposes, and brute-force cross-checks against the
//! partition function itself.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::basis::{construct_basis, AlgebraBasis, ModuleElement};
use crate::error::{Error, Result};
use crate::series::{expand_by_divisor_sums, ModPrimePower, QSeries, Ring};
use crate::tfinder::{find_t, SearchLimits};
use crate::ujump::{apply_u, build_a, FamilyGenerator, ImageEngine};

/// Default bound on |j| in the t-support of any iterate.
pub const DEFAULT_SUPPORT_CEILING: i64 = 64;

/// Required minimum v_α as a function of α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// v_{2α} ≥ α; odd steps carry no claim.
    EvenAlpha,
    /// v_α ≥ α.
    EveryAlpha,
    /// v_α ≥ list[α]; no claim past the end of the list.
    Explicit(Vec<u32>),
}

impl Pattern {
    pub fn required(&self, alpha: usize) -> u32 {
        match self {
            Pattern::EvenAlpha if alpha % 2 == 0 => (alpha / 2) as u32,
            Pattern::EvenAlpha => 0,
            Pattern::EveryAlpha => alpha as u32,
            Pattern::Explicit(list) => list.get(alpha).copied().unwrap_or(0),
        }
    }

    /// Iterations needed for the pattern to make B claims.
    pub fn default_iterations(&self, b: u32) -> usize {
        match self {
            Pattern::EvenAlpha => 2 * b as usize,
            Pattern::EveryAlpha => b as usize,
            Pattern::Explicit(list) => list.len().saturating_sub(1),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PatternRepr {
    Name(String),
    List(Vec<u32>),
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Pattern::EvenAlpha => PatternRepr::Name("even-alpha".into()),
            Pattern::EveryAlpha => PatternRepr::Name("every-alpha".into()),
            Pattern::Explicit(list) => PatternRepr::List(list.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PatternRepr::deserialize(d)? {
            PatternRepr::Name(n) if n == "even-alpha" => Ok(Pattern::EvenAlpha),
            PatternRepr::Name(n) if n == "every-alpha" => Ok(Pattern::EveryAlpha),
            PatternRepr::Name(n) => Err(serde::de::Error::custom(format!(
                "unknown pattern {n:?}, expected \"even-alpha\", \"every-alpha\" or a list"
            ))),
            PatternRepr::List(list) => Ok(Pattern::Explicit(list)),
        }
    }
}

/// A conjectured congruence family: a(n) ≡ 0 (mod ℓ^{pattern(α)}) whenever
/// c·n ≡ 1 (mod ℓ^α).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecFile", into = "SpecFile")]
pub struct CongruenceFamilySpec {
    pub gen: FamilyGenerator,
    pub c: u64,
    pub pattern: Pattern,
    pub b: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(rename = "M")]
    m: u64,
    r: BTreeMap<u64, i64>,
    ell: u64,
    c: u64,
    pattern: Pattern,
    #[serde(rename = "B")]
    b: u32,
}

impl TryFrom<SpecFile> for CongruenceFamilySpec {
    type Error = Error;

    fn try_from(f: SpecFile) -> Result<Self> {
        let gen = FamilyGenerator::new(f.m, f.r, f.ell)?;
        CongruenceFamilySpec::new(gen, f.c, f.pattern, f.b)
    }
}

impl From<CongruenceFamilySpec> for SpecFile {
    fn from(s: CongruenceFamilySpec) -> Self {
        SpecFile {
            m: s.gen.m(),
            r: s.gen.r().clone(),
            ell: s.gen.ell(),
            c: s.c,
            pattern: s.pattern,
            b: s.b,
        }
    }
}

impl CongruenceFamilySpec {
    pub fn new(gen: FamilyGenerator, c: u64, pattern: Pattern, b: u32) -> Result<Self> {
        if c.gcd(&gen.ell()) != 1 {
            return Err(Error::InvalidSpec(format!("c = {c} must be coprime to ell = {}", gen.ell())));
        }
        if b == 0 || ModPrimePower::new(gen.ell(), b).is_none() {
            return Err(Error::InvalidSpec(format!("B = {b} must be positive and ell^B must fit in 64 bits")));
        }
        Ok(CongruenceFamilySpec { gen, c, pattern, b })
    }

    pub fn rogers_ramanujan() -> Self {
        Self::new(FamilyGenerator::rogers_ramanujan(), 24, Pattern::EvenAlpha, 5).expect("valid spec")
    }

    pub fn andrews_sellers() -> Self {
        Self::new(FamilyGenerator::andrews_sellers(), 12, Pattern::EveryAlpha, 5).expect("valid spec")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "rogers-ramanujan" => Some(Self::rogers_ramanujan()),
            "andrews-sellers" => Some(Self::andrews_sellers()),
            _ => None,
        }
    }

    /// A built-in name or the path of a JSON spec file.
    pub fn load(source: &str) -> Result<Self> {
        if let Some(s) = Self::builtin(source) {
            return Ok(s);
        }
        let text = fs::read_to_string(source).map_err(|e| {
            Error::InvalidSpec(format!(
                "{source:?} is neither a built-in spec (rogers-ramanujan, andrews-sellers) nor a readable file: {e}"
            ))
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn with_b(mut self, b: u32) -> Result<Self> {
        self.b = b;
        Self::new(self.gen, self.c, self.pattern, self.b)
    }

    pub fn ell(&self) -> u64 {
        self.gen.ell()
    }

    pub fn level(&self) -> u64 {
        self.gen.level()
    }

    pub fn default_iterations(&self) -> usize {
        self.pattern.default_iterations(self.b)
    }

    pub fn ring(&self) -> ModPrimePower {
        ModPrimePower::new(self.ell(), self.b).expect("validated on construction")
    }
}

/// Finds t by solving the exponent system and builds the algebra basis
/// over Γ0(ℓM) around it.
pub fn basis_for(gen: &FamilyGenerator) -> Result<AlgebraBasis> {
    let sol = find_t(gen, SearchLimits::default())?;
    construct_basis(&sol.t, gen.level())
}

/// One α of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub alpha: usize,
    pub v: u32,
    /// The iterate vanished mod ℓ^B, so v is only a lower bound.
    pub saturated: bool,
    pub required: u32,
    pub pass: bool,
    pub j_min: i64,
    pub j_max: i64,
    pub terms: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub spec: CongruenceFamilySpec,
    pub iterations: usize,
    pub steps: Vec<StepReport>,
}

impl VerificationReport {
    pub fn v(&self) -> Vec<u32> {
        self.steps.iter().map(|s| s.v).collect()
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.steps.iter().find(|s| !s.pass).map(|s| s.alpha)
    }

    pub fn passed(&self) -> bool {
        self.first_violation().is_none()
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for s in &mut r.steps {
            s.seconds = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "M = {}, r = {:?}, ell = {}, c = {}, B = {}",
            self.spec.gen.m(),
            self.spec.gen.r(),
            self.spec.ell(),
            self.spec.c,
            self.spec.b
        )?;
        writeln!(f, "alpha  v  need  pass  j-range      terms  seconds")?;
        for s in &self.steps {
            writeln!(
                f,
                "{:>5}  {}{} {:>4}  {:<4}  [{:>3}, {:>3}]  {:>6}  {:>7.2}",
                s.alpha,
                s.v,
                if s.saturated { "+" } else { " " },
                s.required,
                if s.pass { "yes" } else { "NO" },
                s.j_min,
                s.j_max,
                s.terms,
                s.seconds
            )?;
        }
        let v: Vec<String> = self.v().iter().map(u32::to_string).collect();
        write!(f, "V = [{}]", v.join(", "))
    }
}

/// Pointwise comparison of V against the pattern.
pub fn check_pattern(report: &VerificationReport, pattern: &Pattern) -> bool {
    first_pattern_violation(report, pattern).is_none()
}

pub fn first_pattern_violation(report: &VerificationReport, pattern: &Pattern) -> Option<usize> {
    report.steps.iter().find(|s| s.v < pattern.required(s.alpha)).map(|s| s.alpha)
}

/// Drives the iteration for one spec over a fixed basis.
pub struct Verifier {
    spec: CongruenceFamilySpec,
    engine: ImageEngine<ModPrimePower>,
    ceiling: i64,
}

impl Verifier {
    pub fn new(spec: &CongruenceFamilySpec, basis: &AlgebraBasis) -> Result<Self> {
        let engine = ImageEngine::new(spec.ring(), basis, &build_a(&spec.gen), spec.ell())?;
        Ok(Verifier {
            spec: spec.clone(),
            engine,
            ceiling: DEFAULT_SUPPORT_CEILING,
        })
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.engine = self.engine.with_cache_dir(dir);
        self
    }

    pub fn with_ceiling(mut self, ceiling: i64) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn engine_mut(&mut self) -> &mut ImageEngine<ModPrimePower> {
        &mut self.engine
    }

    pub fn basis(&self) -> &AlgebraBasis {
        self.engine.basis()
    }

    /// L₀, …, L_iterations reduced mod ℓ^B, with the per-step report.
    pub fn run(&mut self, iterations: usize) -> Result<(VerificationReport, Vec<ModuleElement<ModPrimePower>>)> {
        let ring = self.spec.ring();
        let mut l = ModuleElement::one(ring);
        let mut steps = vec![self.step_report(0, &l, 0.0)];
        let mut iterates = vec![l.clone()];
        for alpha in 1..=iterations {
            let start = Instant::now();
            // L_α = U^{(α−1)}(L_{α−1}); U^{(0)} multiplies by A first.
            let i = ((alpha - 1) % 2 == 0) as u8;
            l = apply_u(&mut self.engine, i, &l)?;
            if let Some((j_min, j_max)) = l.j_range() {
                if j_min < -self.ceiling || j_max > self.ceiling {
                    return Err(Error::SupportOverflow {
                        alpha,
                        j_min,
                        j_max,
                        ceiling: self.ceiling,
                    });
                }
            }
            steps.push(self.step_report(alpha, &l, start.elapsed().as_secs_f64()));
            iterates.push(l.clone());
        }
        let report = VerificationReport {
            spec: self.spec.clone(),
            iterations,
            steps,
        };
        Ok((report, iterates))
    }

    pub fn iterate(&mut self, iterations: usize) -> Result<VerificationReport> {
        Ok(self.run(iterations)?.0)
    }

    fn step_report(&self, alpha: usize, l: &ModuleElement<ModPrimePower>, seconds: f64) -> StepReport {
        let (v, saturated) = match l.valuation() {
            Some(v) => (v, false),
            None => (self.spec.b, true),
        };
        let required = self.spec.pattern.required(alpha);
        let (j_min, j_max) = l.j_range().unwrap_or((0, 0));
        StepReport {
            alpha,
            v,
            saturated,
            required,
            pass: v >= required,
            j_min,
            j_max,
            terms: l.len(),
            seconds,
        }
    }
}

/// Runs the iteration for `spec` over `basis`.
pub fn iterate(spec: &CongruenceFamilySpec, basis: &AlgebraBasis, iterations: usize) -> Result<VerificationReport> {
    Verifier::new(spec, basis)?.iterate(iterations)
}

/// The unique λ in [0, ℓ^α) with c·λ ≡ 1 (mod ℓ^α).
pub fn residue_for_case(c: u64, ell: u64, alpha: u32) -> Result<u64> {
    if c.gcd(&ell) != 1 {
        return Err(Error::InvalidSpec(format!("c = {c} is not coprime to ell = {ell}")));
    }
    let m = ell
        .checked_pow(alpha)
        .ok_or_else(|| Error::InvalidSpec(format!("{ell}^{alpha} overflows")))?;
    if m == 1 {
        return Ok(0);
    }
    let e = (c as i128 % m as i128).extended_gcd(&(m as i128));
    Ok(e.x.rem_euclid(m as i128) as u64)
}

/// Result of testing ℓ^e | a(m·n + j) for 0 ≤ n ≤ n_max.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    pub holds: bool,
    /// The first n whose coefficient is not divisible, with that coefficient.
    pub witness: Option<(u64, BigInt)>,
    pub checked: u64,
}

/// Coefficients a(0), …, a(len − 1) of G(q).
pub fn partition_values(gen: &FamilyGenerator, len: usize) -> Vec<BigInt> {
    let s = expand_by_divisor_sums(&gen.eta(), len as i64);
    (0..len as i64).map(|n| s.coeff(n).expect("within truncation")).collect()
}

/// Brute-force check of a single congruence from the exact expansion of G.
pub fn direct_oracle(gen: &FamilyGenerator, m: u64, j: u64, ell: u64, e: u32, n_max: u64) -> OracleOutcome {
    let a = partition_values(gen, (m * n_max + j + 1) as usize);
    let modulus = BigInt::from(ell).pow(e);
    for n in 0..=n_max {
        let x = &a[(m * n + j) as usize];
        if !(x % &modulus).is_zero() {
            return OracleOutcome {
                holds: false,
                witness: Some((n, x.clone())),
                checked: n + 1,
            };
        }
    }
    OracleOutcome {
        holds: true,
        witness: None,
        checked: n_max + 1,
    }
}

/// Φ_α·Σ_{c·n ≡ 1 (mod ℓ^α)} a(n)·q^{⌊n/ℓ^α⌋} mod ℓ^B, known below q^trunc,
/// with Φ_α = q/G(q^ℓ) for odd α and q/G(q) for even α.
pub fn subseries(spec: &CongruenceFamilySpec, alpha: u32, trunc: i64) -> Result<QSeries<ModPrimePower>> {
    let ring = spec.ring();
    let ell = spec.ell();
    let step = ell.pow(alpha);
    let lambda = residue_for_case(spec.c, ell, alpha)?;
    let count = trunc.max(1) as u64;
    let a = partition_values(&spec.gen, (lambda + step * count) as usize);
    let sub: Vec<u64> = (0..count).map(|k| ring.from_bigint(&a[(lambda + step * k) as usize])).collect();
    let sub = QSeries::from_dense(ring, 0, 0, sub, trunc);
    let g = expand_by_divisor_sums(&spec.gen.eta(), trunc).map_ring(ring, |c| ring.from_bigint(c));
    let g = QSeries::from_dense(ring, 0, 0, g.coeffs().to_vec(), trunc);
    let g = if alpha % 2 == 1 { g.substitute_power(ell) } else { g };
    let phi = g.inv().map_err(Error::series("subseries"))?.shift(1);
    Ok(phi.mul_to(&sub, trunc))
}

/// Compares the basis-side expansion of L_α with [`subseries`] below
/// q^trunc; returns the first disagreeing exponent.
pub fn consistency_check(
    spec: &CongruenceFamilySpec,
    basis: &AlgebraBasis,
    l_alpha: &ModuleElement<ModPrimePower>,
    alpha: u32,
    trunc: i64,
) -> Result<Option<i64>> {
    let lhs = l_alpha.expand(basis, trunc)?;
    let rhs = subseries(spec, alpha, trunc)?;
    let lo = lhs.valuation().min(rhs.valuation()).min(0);
    let ring = spec.ring();
    Ok((lo..trunc).find(|&n| {
        let x = lhs.coeff(n).unwrap_or_else(|| ring.zero());
        let y = rhs.coeff(n).unwrap_or_else(|| ring.zero());
        x != y
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::load_basis_n20;

    #[test]
    fn residues() {
        assert_eq!(residue_for_case(24, 5, 4).unwrap(), 599);
        assert_eq!(residue_for_case(24, 5, 2).unwrap(), 24);
        assert_eq!(residue_for_case(12, 5, 1).unwrap(), 3);
        assert_eq!(residue_for_case(1, 7, 3).unwrap(), 1);
        assert!(residue_for_case(10, 5, 1).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        for s in [CongruenceFamilySpec::rogers_ramanujan(), CongruenceFamilySpec::andrews_sellers()] {
            let text = s.to_json();
            assert_eq!(CongruenceFamilySpec::from_json(&text).unwrap(), s);
        }
        let text = r#"{"M":4,"r":{"1":-3,"2":5,"4":-2},"ell":5,"c":24,"pattern":"even-alpha","B":5}"#;
        assert_eq!(
            CongruenceFamilySpec::from_json(text).unwrap(),
            CongruenceFamilySpec::rogers_ramanujan()
        );
        assert!(CongruenceFamilySpec::from_json(&text.replace("24", "25")).is_err());
        assert!(CongruenceFamilySpec::from_json(&text.replace("even-alpha", "odd")).is_err());
    }

    #[test]
    fn patterns() {
        assert_eq!((0..6).map(|a| Pattern::EvenAlpha.required(a)).collect::<Vec<_>>(), [0, 0, 1, 0, 2, 0]);
        assert_eq!(Pattern::EveryAlpha.required(4), 4);
        assert_eq!(Pattern::EvenAlpha.default_iterations(5), 10);
        assert_eq!(Pattern::EveryAlpha.default_iterations(3), 3);
    }

    #[test]
    fn zero_iterations_is_trivial() {
        let spec = CongruenceFamilySpec::rogers_ramanujan().with_b(1).unwrap();
        let r = iterate(&spec, &load_basis_n20(), 0).unwrap();
        assert_eq!(r.v(), vec![0]);
        assert!(r.passed());
    }

    #[test]
    fn small_rogers_ramanujan_run() {
        let spec = CongruenceFamilySpec::rogers_ramanujan().with_b(2).unwrap();
        let b = load_basis_n20();
        let mut ver = Verifier::new(&spec, &b).unwrap();
        let (r, ls) = ver.run(4).unwrap();
        assert!(check_pattern(&r, &spec.pattern), "{r}");
        assert_eq!(r.v()[2], 1);
        for alpha in 1..=2 {
            assert_eq!(consistency_check(&spec, &b, &ls[alpha], alpha as u32, 20).unwrap(), None);
        }
    }

    #[test]
    fn oracle_examples() {
        let rr = FamilyGenerator::rogers_ramanujan();
        assert!(direct_oracle(&rr, 25, 24, 5, 1, 40).holds);
        let o = direct_oracle(&rr, 125, 99, 5, 2, 20);
        assert!(!o.holds && o.witness.is_some());
    }
}
