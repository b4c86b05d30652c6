//! Search for the generator t: pole bookkeeping under τ ↦ (τ+r)/ℓ and a
//! bounded branch-and-prune solver for the resulting integer system.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modcurve::{canonical_in, cusp_representatives, eta_order_at_cusp, newman_check, scaled, Cusp};
use crate::series::{divisors, EtaQuotient};
use crate::ujump::{build_a, FamilyGenerator};

/// Cusps of Γ0(N) sorted by the constraint t must satisfy there.
///
/// `p_a`, `p_g` and `p_inv` need a zero of t, `p0_prime` allows any
/// nonnegative order, and `p1_prime` forces order zero. Together with the
/// class of ∞ they cover every cusp exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleSets {
    pub level: u64,
    pub ell: u64,
    pub infinity: Cusp,
    pub p_a: BTreeSet<Cusp>,
    pub p_g: BTreeSet<Cusp>,
    pub p_inv: BTreeSet<Cusp>,
    pub p0_prime: BTreeSet<Cusp>,
    pub p1_prime: BTreeSet<Cusp>,
}

impl PoleSets {
    /// Cusps where t needs positive order.
    pub fn strict(&self) -> BTreeSet<Cusp> {
        self.p_a.iter().chain(&self.p_g).chain(&self.p_inv).copied().collect()
    }

    /// Pole sets with nothing to cancel: every finite cusp may have order 0.
    pub fn empty(level: u64, ell: u64) -> Self {
        let reps = cusp_representatives(level);
        let infinity = reps[0];
        PoleSets {
            level,
            ell,
            infinity,
            p_a: BTreeSet::new(),
            p_g: BTreeSet::new(),
            p_inv: BTreeSet::new(),
            p0_prime: reps[1..].iter().copied().collect(),
            p1_prime: BTreeSet::new(),
        }
    }
}

/// Γ0(target) classes reached by (x + r)/ℓ for r = 0..ℓ-1.
fn images(x: Cusp, ell: u64, target: u64, reps: &[Cusp]) -> BTreeSet<Cusp> {
    (0..ell).map(|r| canonical_in(scaled(x, r, ell), target, reps)).collect()
}

/// Classifies the finite cusps of Γ0(N) for the t-search.
///
/// A cusp lands in `p_a` when one of its scaled images over Γ0(ℓN) is a
/// pole of A, and in `p_g` when a scaled image over Γ0(N) is the class of
/// ∞. The remaining cusps whose images reach either set, directly or
/// through cusps already added, form `p_inv`: there t⁻¹ would feed a pole
/// back into U_ℓ(t⁻¹). Of what is left, a cusp that only maps to itself
/// and is reached by no other leftover cusp goes to `p0_prime`; the rest
/// go to `p1_prime`.
pub fn compute_pole_sets(a: &EtaQuotient, ell: u64, n: u64) -> Result<PoleSets> {
    let big = ell * n;
    let a = a.lift(big).map_err(Error::series("compute_pole_sets"))?;
    let reps_n = cusp_representatives(n);
    let reps_big = cusp_representatives(big);
    let infinity = reps_n[0];
    let finite: Vec<Cusp> = reps_n[1..].to_vec();

    let a_poles: BTreeSet<Cusp> = reps_big
        .iter()
        .filter(|c| eta_order_at_cusp(&a, **c) < Rational64::zero())
        .copied()
        .collect();
    let p_a: BTreeSet<Cusp> = finite
        .iter()
        .filter(|x| images(**x, ell, big, &reps_big).iter().any(|y| a_poles.contains(y)))
        .copied()
        .collect();
    let down: Vec<(Cusp, BTreeSet<Cusp>)> = finite.iter().map(|x| (*x, images(*x, ell, n, &reps_n))).collect();
    let p_g: BTreeSet<Cusp> = down
        .iter()
        .filter(|(_, im)| im.contains(&infinity))
        .map(|(x, _)| *x)
        .collect();

    let mut covered: BTreeSet<Cusp> = p_a.union(&p_g).copied().collect();
    let mut p_inv = BTreeSet::new();
    loop {
        let next: Vec<Cusp> = down
            .iter()
            .filter(|(x, im)| !covered.contains(x) && im.iter().any(|y| covered.contains(y)))
            .map(|(x, _)| *x)
            .collect();
        if next.is_empty() {
            break;
        }
        for x in next {
            p_inv.insert(x);
            covered.insert(x);
        }
    }

    let rest: Vec<&(Cusp, BTreeSet<Cusp>)> = down.iter().filter(|(x, _)| !covered.contains(x)).collect();
    let mut p0_prime = BTreeSet::new();
    let mut p1_prime = BTreeSet::new();
    for (x, im) in &rest {
        let only_self = im.len() == 1 && im.contains(x);
        let reached = rest.iter().any(|(y, im_y)| y != x && im_y.contains(x));
        if only_self && !reached {
            p0_prime.insert(*x);
        } else {
            p1_prime.insert(*x);
        }
    }
    Ok(PoleSets {
        level: n,
        ell,
        infinity,
        p_a,
        p_g,
        p_inv,
        p0_prime,
        p1_prime,
    })
}

/// A solution of the system for t with its auxiliary integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WSolution {
    pub t: EtaQuotient,
    /// −ord of t at the class of ∞.
    pub x1: i64,
    /// −Σ(N/δ)w_δ / 24.
    pub x2: i64,
    /// Square root of ∏ δ^{|w_δ|}.
    pub x3: BigUint,
}

impl WSolution {
    pub fn w(&self) -> Vec<i64> {
        self.t.exponent_vector()
    }
}

/// Integer linear constraints on an exponent vector over the divisors of
/// N, together with Newman's conditions and a prescribed Σδw.
#[derive(Clone, Debug)]
pub struct ExponentSystem {
    level: u64,
    divisors: Vec<u64>,
    delta_target: i64,
    positive: Vec<Vec<i64>>,
    nonnegative: Vec<Vec<i64>>,
    zero: Vec<Vec<i64>>,
    prime_valuations: Vec<Vec<u64>>,
}

impl ExponentSystem {
    /// Σδw = −24·n0 with no cusp constraints yet.
    pub fn new(level: u64, n0: i64) -> Self {
        let divisors = divisors(level);
        let primes: Vec<u64> = divisors.iter().copied().filter(|&d| d > 1 && crate::series::is_prime(d)).collect();
        let prime_valuations = primes
            .iter()
            .map(|&p| {
                divisors
                    .iter()
                    .map(|&d| {
                        let (mut d, mut e) = (d, 0);
                        while d % p == 0 {
                            d /= p;
                            e += 1;
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        ExponentSystem {
            level,
            divisors,
            delta_target: -24 * n0,
            positive: Vec::new(),
            nonnegative: Vec::new(),
            zero: Vec::new(),
            prime_valuations,
        }
    }

    /// Positive multiple of the order at a/c, as a linear form in w:
    /// coefficients gcd(c, δ)²·N/δ.
    fn form(&self, cusp: Cusp) -> Vec<i64> {
        let c = cusp.c() % self.level;
        self.divisors
            .iter()
            .map(|&d| {
                let g = c.gcd(&d) as i64;
                g * g * (self.level / d) as i64
            })
            .collect()
    }

    pub fn require_positive(&mut self, cusp: Cusp) {
        let f = self.form(cusp);
        self.positive.push(f);
    }

    pub fn require_nonnegative(&mut self, cusp: Cusp) {
        let f = self.form(cusp);
        self.nonnegative.push(f);
    }

    pub fn require_zero(&mut self, cusp: Cusp) {
        let f = self.form(cusp);
        self.zero.push(f);
    }

    /// The system W(n0) for the given pole sets.
    pub fn for_pole_sets(ps: &PoleSets, n0: i64) -> Self {
        let mut sys = ExponentSystem::new(ps.level, n0);
        for c in ps.strict() {
            sys.require_positive(c);
        }
        for c in &ps.p0_prime {
            sys.require_nonnegative(*c);
        }
        for c in &ps.p1_prime {
            sys.require_zero(*c);
        }
        sys
    }

    /// Every constraint, including Newman's, on a complete vector.
    pub fn accepts(&self, w: &[i64]) -> bool {
        let dot = |f: &[i64]| f.iter().zip(w).map(|(a, b)| a * b).sum::<i64>();
        w.iter().sum::<i64>() == 0
            && self.divisors.iter().zip(w).map(|(&d, &x)| d as i64 * x).sum::<i64>() == self.delta_target
            && self.positive.iter().all(|f| dot(f) > 0)
            && self.nonnegative.iter().all(|f| dot(f) >= 0)
            && self.zero.iter().all(|f| dot(f) == 0)
            && self
                .divisors
                .iter()
                .zip(w)
                .map(|(&d, &x)| (self.level / d) as i64 * x)
                .sum::<i64>()
                % 24
                == 0
            && self
                .prime_valuations
                .iter()
                .all(|vals| vals.iter().zip(w).map(|(&e, &x)| e * x.unsigned_abs()).sum::<u64>() % 2 == 0)
    }

    /// Lexicographically smallest solution with |w_δ| ≤ bound.
    pub fn first_solution(&self, bound: i64) -> Option<Vec<i64>> {
        let k = self.divisors.len();
        if k <= 2 {
            return self.small_cases(bound).into_iter().next();
        }
        let pruner = Pruner::new(self, bound);
        (-bound..=bound).into_par_iter().find_map_first(|w0| {
            let mut w = vec![0; k];
            w[0] = w0;
            let mut found = None;
            self.dfs(&pruner, &mut w, 1, bound, &mut |sol| {
                found = Some(sol.to_vec());
                false
            });
            found
        })
    }

    /// All solutions with |w_δ| ≤ bound, in lexicographic order.
    pub fn all_solutions(&self, bound: i64) -> Vec<Vec<i64>> {
        let k = self.divisors.len();
        if k <= 2 {
            return self.small_cases(bound);
        }
        let pruner = Pruner::new(self, bound);
        (-bound..=bound)
            .into_par_iter()
            .flat_map_iter(|w0| {
                let mut w = vec![0; k];
                w[0] = w0;
                let mut out = Vec::new();
                self.dfs(&pruner, &mut w, 1, bound, &mut |sol| {
                    out.push(sol.to_vec());
                    true
                });
                out
            })
            .collect()
    }

    fn small_cases(&self, bound: i64) -> Vec<Vec<i64>> {
        let k = self.divisors.len();
        let candidates: Vec<Vec<i64>> = if k == 1 {
            vec![vec![0]]
        } else {
            (-bound..=bound).map(|x| vec![x, -x]).collect()
        };
        candidates.into_iter().filter(|w| self.accepts(w)).collect()
    }

    /// Assigns w[pos..k-2] by recursion and solves the last two entries
    /// from the two equalities. `visit` returns false to stop.
    fn dfs(&self, pruner: &Pruner, w: &mut [i64], pos: usize, bound: i64, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if !pruner.feasible(w, pos) {
            return true;
        }
        let k = w.len();
        if pos == k - 2 {
            let s1: i64 = -w[..pos].iter().sum::<i64>();
            let s2: i64 =
                self.delta_target - self.divisors[..pos].iter().zip(&w[..pos]).map(|(&d, &x)| d as i64 * x).sum::<i64>();
            let (da, db) = (self.divisors[k - 2] as i64, self.divisors[k - 1] as i64);
            let num = s2 - da * s1;
            if num % (db - da) != 0 {
                return true;
            }
            let last = num / (db - da);
            let second = s1 - last;
            if last.abs() > bound || second.abs() > bound {
                return true;
            }
            w[k - 2] = second;
            w[k - 1] = last;
            let keep_going = if self.accepts(w) { visit(w) } else { true };
            w[k - 2] = 0;
            w[k - 1] = 0;
            return keep_going;
        }
        for x in -bound..=bound {
            w[pos] = x;
            if !self.dfs(pruner, w, pos + 1, bound, visit) {
                w[pos] = 0;
                return false;
            }
        }
        w[pos] = 0;
        true
    }
}

/// Suffix bounds for cutting branches whose linear forms can no longer
/// reach their targets. Each row keeps bound·Σ_{i≥pos}|f[i]| per position.
struct Pruner {
    rows: Vec<(Vec<i64>, Vec<i64>, Kind)>,
}

#[derive(Clone, Copy)]
enum Kind {
    Positive,
    Nonnegative,
    Zero,
    Equals(i64),
}

impl Pruner {
    fn new(sys: &ExponentSystem, bound: i64) -> Self {
        let ones = vec![1; sys.divisors.len()];
        let deltas: Vec<i64> = sys.divisors.iter().map(|&d| d as i64).collect();
        let mut rows = vec![(ones, Kind::Equals(0)), (deltas, Kind::Equals(sys.delta_target))];
        rows.extend(sys.positive.iter().map(|f| (f.clone(), Kind::Positive)));
        rows.extend(sys.nonnegative.iter().map(|f| (f.clone(), Kind::Nonnegative)));
        rows.extend(sys.zero.iter().map(|f| (f.clone(), Kind::Zero)));
        let rows = rows
            .into_iter()
            .map(|(f, kind)| {
                let mut suffix = vec![0; f.len() + 1];
                for i in (0..f.len()).rev() {
                    suffix[i] = suffix[i + 1] + bound * f[i].abs();
                }
                (f, suffix, kind)
            })
            .collect();
        Pruner { rows }
    }

    fn feasible(&self, w: &[i64], pos: usize) -> bool {
        self.rows.iter().all(|(f, suffix, kind)| {
            let partial: i64 = f[..pos].iter().zip(&w[..pos]).map(|(a, b)| a * b).sum();
            let slack = suffix[pos];
            match kind {
                Kind::Positive => partial + slack >= 1,
                Kind::Nonnegative => partial + slack >= 0,
                Kind::Zero => partial.abs() <= slack,
                Kind::Equals(target) => (target - partial).abs() <= slack,
            }
        })
    }
}

/// Lexicographically smallest solution of W(n0) with |w_δ| ≤ bound.
pub fn solve_w(ps: &PoleSets, n0: i64, bound: i64) -> Option<WSolution> {
    let sys = ExponentSystem::for_pole_sets(ps, n0);
    let w = sys.first_solution(bound)?;
    Some(check_w(ps, n0, &w).expect("solver output satisfies its own system"))
}

/// Every solution of W(n0) with |w_δ| ≤ bound, lexicographically ordered.
pub fn enumerate_w(ps: &PoleSets, n0: i64, bound: i64) -> Vec<Vec<i64>> {
    ExponentSystem::for_pole_sets(ps, n0).all_solutions(bound)
}

/// Re-verifies a candidate vector against W(n0) through the Ligozat order
/// formula and Newman's criteria, independently of the solver's scaled
/// linear forms.
pub fn check_w(ps: &PoleSets, n0: i64, w: &[i64]) -> std::result::Result<WSolution, String> {
    let divs = divisors(ps.level);
    if w.len() != divs.len() {
        return Err(format!("expected {} exponents, got {}", divs.len(), w.len()));
    }
    let t = EtaQuotient::new(ps.level, divs.iter().copied().zip(w.iter().copied())).map_err(|e| e.to_string())?;
    let check = newman_check(&t);
    if !check.holds() {
        return Err(format!("Newman conditions fail: {check:?}"));
    }
    let ord = |c: Cusp| eta_order_at_cusp(&t, c);
    if ord(ps.infinity) != Rational64::from(-n0) {
        return Err(format!("order at infinity is {}, expected {}", ord(ps.infinity), -n0));
    }
    for c in ps.strict() {
        if ord(c) <= Rational64::zero() {
            return Err(format!("order {} at {c} is not positive", ord(c)));
        }
    }
    for c in &ps.p0_prime {
        if ord(*c) < Rational64::zero() {
            return Err(format!("order {} at {c} is negative", ord(*c)));
        }
    }
    for c in &ps.p1_prime {
        if !ord(*c).is_zero() {
            return Err(format!("order {} at {c} is not zero", ord(*c)));
        }
    }
    let codelta: i64 = t.exponents().iter().map(|(&d, &r)| (ps.level / d) as i64 * r).sum();
    Ok(WSolution {
        x1: n0,
        x2: -codelta / 24,
        x3: check.k0.unwrap_or_else(BigUint::one),
        t,
    })
}

/// Ceilings for [`find_t`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_n0: i64,
    pub bound: i64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_n0: 12, bound: 12 }
    }
}

/// Solves W(1), W(2), … and returns the first solution found.
pub fn find_t(gen: &FamilyGenerator, limits: SearchLimits) -> Result<WSolution> {
    let a = build_a(gen);
    let ps = compute_pole_sets(&a, gen.ell(), gen.level())?;
    find_t_for(&ps, limits)
}

/// [`find_t`] for precomputed pole sets.
pub fn find_t_for(ps: &PoleSets, limits: SearchLimits) -> Result<WSolution> {
    (1..=limits.max_n0)
        .find_map(|n0| solve_w(ps, n0, limits.bound))
        .ok_or_else(|| Error::SearchExhausted {
            op: "find_t",
            detail: format!("no solution with n0 <= {} and |w| <= {}", limits.max_n0, limits.bound),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rr_sets() -> PoleSets {
        let gen = FamilyGenerator::rogers_ramanujan();
        compute_pole_sets(&build_a(&gen), 5, 20).unwrap()
    }

    fn set(list: &str) -> BTreeSet<Cusp> {
        list.split(',').filter(|s| !s.is_empty()).map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn rogers_ramanujan_pole_sets() {
        let ps = rr_sets();
        assert_eq!(ps.p_a, set("1/10,1/4,1"));
        assert_eq!(ps.p_g, set("1/4"));
        assert_eq!(ps.p_inv, set("1/2"));
        assert_eq!(ps.p0_prime, set("1/5"));
        assert!(ps.p1_prime.is_empty());
    }

    #[test]
    fn andrews_sellers_shares_pole_sets() {
        let gen = FamilyGenerator::andrews_sellers();
        let ps = compute_pole_sets(&build_a(&gen), 5, 20).unwrap();
        assert_eq!(ps, rr_sets());
    }

    #[test]
    fn level20_t_solves_w5() {
        let ps = rr_sets();
        let sol = check_w(&ps, 5, &[2, 0, 2, -2, 8, -10]).unwrap();
        assert_eq!(sol.x1, 5);
        assert!(ExponentSystem::for_pole_sets(&ps, 5).accepts(&[2, 0, 2, -2, 8, -10]));
        assert!(enumerate_w(&ps, 5, 12).contains(&vec![2, 0, 2, -2, 8, -10]));
    }

    #[test]
    fn no_smaller_order() {
        let ps = rr_sets();
        for n0 in 1..5 {
            assert!(solve_w(&ps, n0, 12).is_none(), "n0={n0}");
        }
        let sol = find_t(&FamilyGenerator::rogers_ramanujan(), SearchLimits::default()).unwrap();
        assert_eq!(sol.x1, 5);
    }

    #[test]
    fn empty_sets_admit_zero_vector() {
        let ps = PoleSets::empty(20, 5);
        let sol = solve_w(&ps, 0, 3).unwrap();
        assert_eq!(sol.w(), vec![0; 6]);
    }

    #[test]
    fn first_solution_is_lexicographic_minimum() {
        let ps = rr_sets();
        let all = enumerate_w(&ps, 5, 12);
        let first = solve_w(&ps, 5, 12).unwrap().w();
        assert_eq!(Some(&first), all.iter().min());
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }
}
