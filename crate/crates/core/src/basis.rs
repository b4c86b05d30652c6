//! Algebra bases ⟨1, g₁, …, g_v⟩ over polynomials in t, and membership
//! reduction by principal-part elimination.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::modcurve::{cusp_representatives, eta_order_at_cusp, newman_check};
use crate::series::{eta_expand_at, EtaQuotient, Integers, ModPrimePower, QSeries, Ring};
use crate::tfinder::ExponentSystem;

/// An integer combination of eta quotients with a pole only at ∞.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisFunction {
    name: String,
    terms: Vec<(i64, EtaQuotient)>,
    ord_inf: i64,
    leading: i64,
}

impl BasisFunction {
    pub fn eta(name: &str, eq: EtaQuotient) -> Result<Self> {
        Self::combination(name, vec![(1, eq)])
    }

    /// Σ c·f over the given terms; like quotients are merged.
    pub fn combination(name: &str, terms: Vec<(i64, EtaQuotient)>) -> Result<Self> {
        let level = terms.iter().fold(1u64, |l, (_, e)| num_integer::lcm(l, e.level()));
        let mut merged: Vec<(i64, EtaQuotient)> = Vec::new();
        for (c, e) in terms {
            let e = e.lift(level).map_err(Error::series("BasisFunction"))?;
            match merged.iter_mut().find(|(_, x)| *x == e) {
                Some(slot) => slot.0 += c,
                None => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| *c != 0);
        if merged.is_empty() {
            return Err(Error::InvalidSpec(format!("{name} is the zero combination")));
        }
        let expansion = expand_terms(Integers, &merged, 0)?;
        let lead = expansion.leading().ok_or_else(|| {
            Error::InvalidSpec(format!("{name} has no pole at infinity"))
        })?;
        Ok(BasisFunction {
            name: name.to_string(),
            ord_inf: expansion.valuation(),
            leading: lead.to_i64().expect("leading coefficient fits in i64"),
            terms: merged,
        })
    }

    /// Product, distributed over the terms of both factors.
    pub fn product(name: &str, a: &Self, b: &Self) -> Result<Self> {
        let mut terms = Vec::new();
        for (ca, ea) in &a.terms {
            for (cb, eb) in &b.terms {
                terms.push((ca * cb, ea.mul(eb)));
            }
        }
        Self::combination(name, terms)
    }

    pub fn difference(name: &str, a: &Self, b: &Self) -> Result<Self> {
        let terms = a.terms.iter().cloned().chain(b.terms.iter().map(|(c, e)| (-c, e.clone()))).collect();
        Self::combination(name, terms)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[(i64, EtaQuotient)] {
        &self.terms
    }

    /// The single eta quotient, when the function is one.
    pub fn as_eta(&self) -> Option<&EtaQuotient> {
        match self.terms.as_slice() {
            [(1, e)] => Some(e),
            _ => None,
        }
    }

    pub fn level(&self) -> u64 {
        self.terms[0].1.level()
    }

    pub fn ord_inf(&self) -> i64 {
        self.ord_inf
    }

    /// Pole order at ∞, i.e. −ord_inf.
    pub fn pole_order(&self) -> i64 {
        -self.ord_inf
    }

    pub fn leading(&self) -> i64 {
        self.leading
    }

    /// q-expansion known below q^abs_trunc.
    pub fn expand_in<R: Ring>(&self, ring: R, abs_trunc: i64) -> Result<QSeries<R>> {
        expand_terms(ring, &self.terms, abs_trunc)
    }

    pub fn expand(&self, abs_trunc: i64) -> Result<QSeries<Integers>> {
        self.expand_in(Integers, abs_trunc)
    }
}

impl fmt::Display for BasisFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.name)?;
        for (i, (c, e)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if *c < 0 { "-" } else { "+" })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            if c.abs() != 1 {
                write!(f, "{}·", c.abs())?;
            }
            write!(f, "[{e}]")?;
        }
        write!(f, "  (ord_inf {})", self.ord_inf)
    }
}

fn expand_terms<R: Ring>(ring: R, terms: &[(i64, EtaQuotient)], abs_trunc: i64) -> Result<QSeries<R>> {
    let mut acc = QSeries::zero(ring.clone(), 0, abs_trunc);
    for (c, e) in terms {
        let s = eta_expand_at(ring.clone(), e, abs_trunc).map_err(Error::series("expand"))?;
        acc = acc.add(&s.scale(&ring.from_i64(*c))).map_err(Error::series("expand"))?;
    }
    Ok(acc)
}

/// The generator t together with g₁, …, g_v; g₀ = 1 is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraBasis {
    pub level: u64,
    pub t: BasisFunction,
    pub gs: Vec<BasisFunction>,
}

impl AlgebraBasis {
    pub fn v(&self) -> usize {
        self.gs.len()
    }

    /// |ord_∞(t)|.
    pub fn n_t(&self) -> i64 {
        self.t.pole_order()
    }

    /// |ord_∞(g_k)|, with g₀ = 1 of order 0.
    pub fn g_order(&self, k: usize) -> i64 {
        if k == 0 {
            0
        } else {
            self.gs[k - 1].pole_order()
        }
    }

    pub fn g_name(&self, k: usize) -> String {
        if k == 0 {
            "1".into()
        } else {
            self.gs[k - 1].name().to_string()
        }
    }

    /// Index k of the g whose pole order has the given residue mod n_t.
    pub fn index_for_residue(&self, order: i64) -> Option<usize> {
        let n_t = self.n_t();
        (0..=self.v()).find(|&k| self.g_order(k).rem_euclid(n_t) == order.rem_euclid(n_t))
    }

    /// Hash of the constructions, for cache keys.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}|{}", self.level, self.t));
        for g in &self.gs {
            h.update(format!("|{g}"));
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for AlgebraBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "level {}, v = {}", self.level, self.v())?;
        writeln!(f, "{}", self.t)?;
        for g in &self.gs {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// The level-20 basis T, G₁ = G, G₂ = H − G, G₃ = G², G₄ = (H − G)².
pub fn load_basis_n20() -> AlgebraBasis {
    let eq = |s: &str| s.parse::<EtaQuotient>().expect("valid eta quotient");
    let t = BasisFunction::eta("T", eq("20:1^2,4^2,10^8,5^-2,20^-10")).expect("T");
    let g = BasisFunction::eta("G1", eq("20:4^4,10^2,2^-2,20^-4")).expect("G");
    let h = BasisFunction::eta("H", eq("20:4^1,5^5,1^-1,20^-5")).expect("H");
    let g2 = BasisFunction::difference("G2", &h, &g).expect("G2");
    let g3 = BasisFunction::product("G3", &g, &g).expect("G3");
    let g4 = BasisFunction::product("G4", &g2, &g2).expect("G4");
    AlgebraBasis {
        level: 20,
        t,
        gs: vec![g, g2, g3, g4],
    }
}

/// Every failed basis condition, as text; empty when the basis is valid.
pub fn basis_problems(b: &AlgebraBasis) -> Vec<String> {
    let mut out = Vec::new();
    let n_t = b.n_t();
    if n_t != b.v() as i64 + 1 {
        out.push(format!("|ord(t)| = {n_t} but v + 1 = {}", b.v() + 1));
    }
    for k in 1..b.v() {
        if b.g_order(k) >= b.g_order(k + 1) {
            out.push(format!("pole orders of g{k} and g{} do not increase", k + 1));
        }
    }
    for k in 1..=b.v() {
        let rk = b.g_order(k).rem_euclid(n_t.max(1));
        if rk == 0 {
            out.push(format!("|ord(g{k})| is divisible by {n_t}"));
        }
        for l in k + 1..=b.v() {
            if b.g_order(l).rem_euclid(n_t.max(1)) == rk {
                out.push(format!("g{k} and g{l} share a residue mod {n_t}"));
            }
        }
    }
    let reps = cusp_representatives(b.level);
    for f in std::iter::once(&b.t).chain(&b.gs) {
        if f.pole_order() <= 0 {
            out.push(format!("{} has no pole at infinity", f.name()));
        }
        for (_, e) in f.terms() {
            if !newman_check(e).holds() {
                out.push(format!("{e} in {} fails Newman's conditions", f.name()));
            }
            let e = match e.lift(b.level) {
                Ok(e) => e,
                Err(_) => {
                    out.push(format!("{e} in {} is not of level dividing {}", f.name(), b.level));
                    continue;
                }
            };
            for c in &reps[1..] {
                if eta_order_at_cusp(&e, *c) < Rational64::zero() {
                    out.push(format!("{e} in {} has a pole at {c}", f.name()));
                }
            }
        }
    }
    out
}

pub fn verify_basis(b: &AlgebraBasis) -> bool {
    basis_problems(b).is_empty()
}

/// Largest exponent bound used when searching for basis eta quotients.
pub const BASIS_SEARCH_BOUND: i64 = 16;

/// Builds a basis for t at level N from eta quotients with poles only at
/// ∞ and their pairwise products, taking the smallest pole order in each
/// nonzero residue class mod |ord(t)|.
pub fn construct_basis(t: &EtaQuotient, n: u64) -> Result<AlgebraBasis> {
    let t = t.lift(n).map_err(Error::series("construct_basis"))?;
    let t_fn = BasisFunction::eta("t", t)?;
    let n_t = t_fn.pole_order();
    let reps = cusp_representatives(n);
    let mut singles: Vec<(i64, EtaQuotient)> = Vec::new();
    for order in 1..=2 * n_t {
        if order % n_t == 0 {
            continue;
        }
        let mut sys = ExponentSystem::new(n, order);
        for c in &reps[1..] {
            sys.require_nonnegative(*c);
        }
        if let Some(w) = sys.first_solution(BASIS_SEARCH_BOUND) {
            let divs = crate::series::divisors(n);
            let eq = EtaQuotient::new(n, divs.into_iter().zip(w)).map_err(Error::series("construct_basis"))?;
            singles.push((order, eq));
        }
    }
    let mut chosen: BTreeMap<i64, (i64, Vec<usize>)> = BTreeMap::new();
    let mut offer = |order: i64, parts: Vec<usize>| {
        let rho = order % n_t;
        if rho == 0 {
            return;
        }
        let better = match chosen.get(&rho) {
            None => true,
            Some((o, p)) => order < *o || (order == *o && parts.len() < p.len()),
        };
        if better {
            chosen.insert(rho, (order, parts));
        }
    };
    for (i, (o, _)) in singles.iter().enumerate() {
        offer(*o, vec![i]);
    }
    for (i, (o1, _)) in singles.iter().enumerate() {
        for (j, (o2, _)) in singles.iter().enumerate().skip(i) {
            offer(o1 + o2, vec![i, j]);
        }
    }
    if (chosen.len() as i64) < n_t - 1 {
        return Err(Error::SearchExhausted {
            op: "construct_basis",
            detail: format!(
                "covered residues {:?} mod {n_t} with |r| <= {BASIS_SEARCH_BOUND}",
                chosen.keys().collect::<Vec<_>>()
            ),
        });
    }
    let mut picks: Vec<(i64, Vec<usize>)> = chosen.into_values().collect();
    picks.sort_by_key(|(o, _)| *o);
    let mut gs = Vec::new();
    for (k, (_, parts)) in picks.into_iter().enumerate() {
        let eq = parts[1..].iter().fold(singles[parts[0]].1.clone(), |acc, &i| acc.mul(&singles[i].1));
        gs.push(BasisFunction::eta(&format!("g{}", k + 1), eq)?);
    }
    let basis = AlgebraBasis { level: n, t: t_fn, gs };
    debug_assert!(verify_basis(&basis), "{:?}", basis_problems(&basis));
    Ok(basis)
}

/// Σ c_{j,k}·t^j·g_k with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleElement<R: Ring> {
    ring: R,
    terms: BTreeMap<(i64, usize), R::Elem>,
}

impl<R: Ring> ModuleElement<R> {
    pub fn zero(ring: R) -> Self {
        ModuleElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    /// The element 1 = t⁰·g₀.
    pub fn one(ring: R) -> Self {
        let mut e = Self::zero(ring.clone());
        e.add_term(0, 0, &ring.one());
        e
    }

    pub fn from_terms(ring: R, terms: impl IntoIterator<Item = ((i64, usize), R::Elem)>) -> Self {
        let mut e = Self::zero(ring);
        for ((j, k), c) in terms {
            e.add_term(j, k, &c);
        }
        e
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn add_term(&mut self, j: i64, k: usize, c: &R::Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        let sum = match self.terms.get(&(j, k)) {
            Some(old) => self.ring.add(old, c),
            None => c.clone(),
        };
        if self.ring.is_zero(&sum) {
            self.terms.remove(&(j, k));
        } else {
            self.terms.insert((j, k), sum);
        }
    }

    pub fn get(&self, j: i64, k: usize) -> R::Elem {
        self.terms.get(&(j, k)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Terms in (j, k) order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, usize, &R::Elem)> + '_ {
        self.terms.iter().map(|(&(j, k), c)| (j, k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest and largest power of t present.
    pub fn j_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().map(|(j, _)| *j).min()?;
        let hi = self.terms.keys().map(|(j, _)| *j).max()?;
        Some((lo, hi))
    }

    /// Multiplies by t^d.
    pub fn shift_j(&self, d: i64) -> Self {
        ModuleElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&(j, k), c)| ((j + d, k), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(self.ring.clone());
        for (&(j, k), x) in &self.terms {
            out.add_term(j, k, &self.ring.mul(c, x));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (&(j, k), c) in &other.terms {
            self.add_term(j, k, c);
        }
    }

    /// Adds c·other.
    pub fn add_scaled(&mut self, other: &Self, c: &R::Elem) {
        for (&(j, k), x) in &other.terms {
            let y = self.ring.mul(c, x);
            self.add_term(j, k, &y);
        }
    }

    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> ModuleElement<S> {
        let mut out = ModuleElement::zero(target);
        for (&(j, k), c) in &self.terms {
            let y = f(c);
            out.add_term(j, k, &y);
        }
        out
    }

    /// q-expansion of Σ c·t^j·g_k known below q^abs_trunc.
    pub fn expand(&self, basis: &AlgebraBasis, abs_trunc: i64) -> Result<QSeries<R>> {
        let ring = self.ring.clone();
        let Some((j_lo, j_hi)) = self.j_range() else {
            return Ok(QSeries::zero(ring, 0, abs_trunc));
        };
        let n_t = basis.n_t();
        let g_max = (0..=basis.v()).map(|k| basis.g_order(k)).max().unwrap_or(0);
        // Every t-power is needed to abs_trunc + g_max; raising t^{±1}
        // to the p-th power keeps its relative precision.
        let span = j_lo.unsigned_abs().max(j_hi.unsigned_abs()) as i64;
        let need = abs_trunc + g_max + n_t * (span + 1);
        let t = basis.t.expand_in(ring.clone(), need)?;
        let t_inv = t.inv().map_err(Error::series("expand"))?;
        let gs: Vec<QSeries<R>> = (0..=basis.v())
            .map(|k| match k {
                0 => Ok(QSeries::one(ring.clone(), need)),
                _ => basis.gs[k - 1].expand_in(ring.clone(), need),
            })
            .collect::<Result<_>>()?;
        let mut acc = QSeries::zero(ring.clone(), 0, abs_trunc);
        for (j, k, c) in self.terms() {
            let tj = if j >= 0 { t.pow(j) } else { t_inv.pow(-j) }.map_err(Error::series("expand"))?;
            let term = tj.mul_to(&gs[k], abs_trunc).scale(c);
            acc = acc.add(&term).map_err(Error::series("expand"))?;
        }
        Ok(acc.truncate(abs_trunc))
    }

    pub fn format_with(&self, basis: Option<&AlgebraBasis>) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(j, k), c)| {
                let mut s = self.ring.format(c);
                if k > 0 {
                    let name = basis.map_or_else(|| format!("g{k}"), |b| b.g_name(k));
                    s.push_str(&format!("·{name}"));
                }
                match j {
                    0 => {}
                    1 => s.push_str("·t"),
                    _ => s.push_str(&format!("·t^{j}")),
                }
                s
            })
            .collect();
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        out
    }
}

impl ModuleElement<ModPrimePower> {
    /// Largest e ≤ B with ℓ^e dividing every coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.values().map(|c| self.ring.valuation(*c)).min()
    }
}

impl ModuleElement<Integers> {
    pub fn reduce_mod(&self, ring: ModPrimePower) -> ModuleElement<ModPrimePower> {
        self.map_ring(ring, |c| ring.from_bigint(c))
    }
}

impl<R: Ring> fmt::Display for ModuleElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(None))
    }
}

impl<R: Ring> fmt::Debug for ModuleElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(None))
    }
}

/// Outcome of [`mw_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub enum ReductionResult<R: Ring> {
    Member(ModuleElement<R>),
    /// No basis element has a pole order matching `order`.
    NotMember { order: i64 },
}

/// Expansions of g_k·t^n known below a fixed absolute order `slack`.
#[derive(Clone)]
pub struct ReductionTable<R: Ring> {
    ring: R,
    basis: AlgebraBasis,
    slack: i64,
    entries: Vec<Vec<QSeries<R>>>,
    max_order: i64,
}

impl<R: Ring> ReductionTable<R> {
    pub fn new(ring: R, basis: &AlgebraBasis, slack: i64) -> Self {
        ReductionTable {
            ring,
            basis: basis.clone(),
            slack,
            entries: vec![Vec::new(); basis.v() + 1],
            max_order: -1,
        }
    }

    pub fn slack(&self) -> i64 {
        self.slack
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    /// Largest pole order the table can eliminate.
    pub fn max_order(&self) -> i64 {
        self.max_order
    }

    /// Grows the table so pole orders up to `order` can be eliminated.
    pub fn ensure(&mut self, order: i64) -> Result<()> {
        if order <= self.max_order {
            return Ok(());
        }
        let order = order.max(self.max_order + self.max_order / 2);
        let b = &self.basis;
        let n_t = b.n_t();
        let g_max = (0..=b.v()).map(|k| b.g_order(k)).max().unwrap_or(0);
        let n_max = order / n_t + 1;
        let x = self.slack + g_max;
        let t = b.t.expand_in(self.ring.clone(), x + n_t * n_max)?;
        let mut powers = vec![QSeries::one(self.ring.clone(), x + n_t * n_max)];
        for n in 1..=n_max as usize {
            let next = powers[n - 1].mul_to(&t, x + n_t * (n_max - n as i64));
            powers.push(next);
        }
        let mut entries = Vec::with_capacity(b.v() + 1);
        for k in 0..=b.v() {
            let g = match k {
                0 => QSeries::one(self.ring.clone(), self.slack + n_t * n_max),
                _ => b.gs[k - 1].expand_in(self.ring.clone(), self.slack + n_t * n_max)?,
            };
            let row: Vec<QSeries<R>> = powers.iter().map(|p| g.mul_to(p, self.slack)).collect();
            entries.push(row);
        }
        self.entries = entries;
        self.max_order = n_t * n_max;
        Ok(())
    }

    fn entry(&self, k: usize, n: usize) -> &QSeries<R> {
        &self.entries[k][n]
    }
}

/// Writes f as Σ p_k(t)·g_k by cancelling its principal part from the
/// highest pole down, then checks that what remains is a constant.
///
/// `f` must have integer exponents and be known to at least q⁰. The table
/// must already cover the pole order of f.
pub fn mw_reduce<R: Ring>(f: &QSeries<R>, table: &ReductionTable<R>) -> Result<ReductionResult<R>> {
    let ring = &table.ring;
    if f.offset24() % 24 != 0 {
        return Err(Error::series("mw_reduce")(crate::series::SeriesError::FractionalExponent {
            offset24: f.offset24(),
        }));
    }
    let f = f.normalize_offset().map_err(Error::series("mw_reduce"))?;
    if f.trunc() < 1 {
        return Err(Error::series("mw_reduce")(crate::series::SeriesError::InsufficientPrecision {
            needed: 1,
            available: f.trunc(),
        }));
    }
    let poles = (-f.valuation()).max(0);
    if poles > table.max_order {
        return Err(Error::series("mw_reduce")(crate::series::SeriesError::InsufficientPrecision {
            needed: poles,
            available: table.max_order,
        }));
    }
    let b = &table.basis;
    let n_t = b.n_t();
    let limit = f.trunc().min(table.slack);
    let lo = -poles;
    let mut residual: Vec<R::Elem> = (lo..limit).map(|e| f.coeff(e).expect("below trunc")).collect();
    let mut out = ModuleElement::zero(ring.clone());
    let mut last = i64::MAX;
    for order in (1..=poles).rev() {
        let idx = (-order - lo) as usize;
        let coeff = residual[idx].clone();
        if ring.is_zero(&coeff) {
            continue;
        }
        assert!(order < last, "pole orders must strictly decrease");
        last = order;
        let Some(k) = b.index_for_residue(order) else {
            return Ok(ReductionResult::NotMember { order });
        };
        if order < b.g_order(k) {
            return Ok(ReductionResult::NotMember { order });
        }
        let n = ((order - b.g_order(k)) / n_t) as usize;
        let entry = table.entry(k, n);
        let lead = entry.leading().expect("basis products are nonzero");
        let c = ring.div_exact(&coeff, lead).ok_or_else(|| Error::NonIntegral {
            op: "mw_reduce",
            value: ring.format(&coeff),
            lead: ring.format(lead),
        })?;
        for (e, x) in entry.terms() {
            if e >= limit {
                break;
            }
            let i = (e - lo) as usize;
            residual[i] = ring.sub(&residual[i], &ring.mul(&c, x));
        }
        out.add_term(n as i64, k, &c);
    }
    let zero_idx = (0 - lo) as usize;
    let constant = residual[zero_idx].clone();
    out.add_term(0, 0, &constant);
    residual[zero_idx] = ring.zero();
    if let Some(pos) = residual.iter().position(|x| !ring.is_zero(x)) {
        return Err(Error::Residual {
            exponent: lo + pos as i64,
        });
    }
    Ok(ReductionResult::Member(out))
}

/// Integer coefficients of an exact-rational element, when all are integral.
pub fn integral_part(e: &ModuleElement<crate::series::Rationals>) -> Option<ModuleElement<Integers>> {
    let mut out = ModuleElement::zero(Integers);
    for (j, k, c) in e.terms() {
        if !c.is_integer() {
            return None;
        }
        out.add_term(j, k, &c.to_integer());
    }
    Some(out)
}

/// Convenience for tests and examples: integer coefficient as i64.
pub fn coeff_i64(e: &ModuleElement<Integers>, j: i64, k: usize) -> i64 {
    e.get(j, k).to_i64().unwrap_or_else(|| panic!("coefficient {} overflows", e.get(j, k)))
}
