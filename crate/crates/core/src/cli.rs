//! Command-line front end. Exit codes: 0 pass, 1 negative result (failed
//! congruence, exhausted search, non-modular quotient), 2 bad input, 3
//! broken internal invariant.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::basis::{basis_problems, load_basis_n20, AlgebraBasis};
use crate::error::{Error, Result};
use crate::modcurve::{
    canonical, cusp_image_under_scaling, cusp_representatives, eta_order_at_cusp, newman_check, Cusp,
};
use crate::series::{EtaQuotient, Integers, ModPrimePower, Ring};
use crate::tfinder::{compute_pole_sets, find_t_for, SearchLimits};
use crate::ujump::{build_a, compute_m_constants, scaled_order_table, FamilyGenerator, ImageEngine};
use crate::verifier::{basis_for, direct_oracle, CongruenceFamilySpec, Verifier};

#[derive(Debug, Parser)]
#[command(name = "partcong", version, about = "Partition congruence families via eta-quotient bases and U_l")]
pub struct Cli {
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for the on-disk image cache.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cusp representatives of Γ0(N).
    Cusps {
        /// Level N.
        n: u64,
    },
    /// Order of an eta quotient at a cusp.
    Order {
        /// Eta quotient, written N:δ^r,δ^r,...
        eta: EtaQuotient,
        /// Cusp a/c.
        cusp: Cusp,
    },
    /// Newman's modularity conditions for an eta quotient.
    Newman {
        /// Eta quotient, written N:δ^r,δ^r,...
        eta: EtaQuotient,
    },
    /// Pole sets and the smallest-order generator t.
    FindT {
        /// Built-in family (rogers-ramanujan, andrews-sellers), JSON text, or a JSON file.
        spec: String,
        /// Largest pole order at infinity to try.
        #[arg(long, default_value_t = 12)]
        max_n0: i64,
        /// Bound on each exponent |w_δ|.
        #[arg(long, default_value_t = 12)]
        bound: i64,
    },
    /// Algebra basis t, g_1, ..., g_v and the stability exponents.
    Basis {
        /// Built-in family (rogers-ramanujan, andrews-sellers), JSON text, or a JSON file.
        spec: String,
    },
    /// U_l(A^i t^j g_k) expressed in the basis.
    #[command(allow_negative_numbers = true)]
    UImage {
        /// Built-in family (rogers-ramanujan, andrews-sellers), JSON text, or a JSON file.
        spec: String,
        /// Power of A, 0 or 1.
        i: u8,
        /// Power of t, may be negative.
        j: i64,
        /// Index of g_k, 0 for g_0 = 1.
        k: usize,
        /// Reduce modulo a prime power, written p^e.
        #[arg(long = "mod")]
        modulus: Option<String>,
    },
    /// Run the l-adic iteration and check the spec's pattern.
    Verify {
        /// Built-in family (rogers-ramanujan, andrews-sellers), JSON text, or a JSON file.
        spec: String,
        /// Work modulo l^B instead of the spec's B.
        #[arg(long = "B")]
        b: Option<u32>,
        /// Number of steps; defaults to what the pattern needs to reach B.
        #[arg(long)]
        iterations: Option<usize>,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Test l^e | a(m*n + j) for 0 <= n <= n_max from the exact expansion.
    DirectCheck {
        /// Built-in family (rogers-ramanujan, andrews-sellers), JSON text, or a JSON file.
        spec: String,
        /// Modulus of the progression.
        m: u64,
        /// Residue of the progression.
        j: u64,
        /// Exponent e of l^e.
        e: u32,
        /// Largest n checked.
        n_max: u64,
    },
    /// Cusp image tables and order tables for the level-20 family.
    Tables,
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return 2;
        }
    }
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Cache(format!("output: {e}"))
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Cusps { n } => {
            if *n == 0 {
                return Err(Error::InvalidSpec("N must be positive".into()));
            }
            let reps = cusp_representatives(*n);
            writeln!(out, "{} cusp classes of Gamma0({n})", reps.len()).map_err(io)?;
            let list: Vec<String> = reps.iter().map(Cusp::to_string).collect();
            writeln!(out, "{}", list.join(" ")).map_err(io)?;
            Ok(0)
        }
        Command::Order { eta, cusp } => {
            let n = eta.level();
            let rep = canonical(*cusp, n);
            let ord = eta_order_at_cusp(eta, rep);
            writeln!(out, "ord at {cusp} (class {rep}) over Gamma0({n}) = {ord}").map_err(io)?;
            Ok(0)
        }
        Command::Newman { eta } => {
            let c = newman_check(eta);
            let k0 = c.k0.as_ref().map_or("-".to_string(), |k| k.to_string());
            writeln!(out, "{:<24}{}", "sum r = 0", c.weight_zero).map_err(io)?;
            writeln!(out, "{:<24}{}", "sum d*r = 0 mod 24", c.delta_sum_ok).map_err(io)?;
            writeln!(out, "{:<24}{}", "sum (N/d)*r = 0 mod 24", c.codelta_sum_ok).map_err(io)?;
            writeln!(out, "{:<24}{} (k0 = {k0})", "prod d^|r| square", c.square).map_err(io)?;
            writeln!(out, "modular over Gamma0({}): {}", eta.level(), c.holds()).map_err(io)?;
            Ok(if c.holds() { 0 } else { 1 })
        }
        Command::FindT { spec, max_n0, bound } => {
            let spec = CongruenceFamilySpec::load(spec)?;
            let a = build_a(&spec.gen);
            let ps = compute_pole_sets(&a, spec.ell(), spec.level())?;
            let show = |s: &std::collections::BTreeSet<Cusp>| {
                s.iter().map(Cusp::to_string).collect::<Vec<_>>().join(", ")
            };
            writeln!(out, "A = {a}").map_err(io)?;
            writeln!(out, "P(A)  = {{{}}}", show(&ps.p_a)).map_err(io)?;
            writeln!(out, "P(g)  = {{{}}}", show(&ps.p_g)).map_err(io)?;
            writeln!(out, "P'    = {{{}}}", show(&ps.p_inv)).map_err(io)?;
            writeln!(out, "P'_0  = {{{}}}", show(&ps.p0_prime)).map_err(io)?;
            writeln!(out, "P'_1  = {{{}}}", show(&ps.p1_prime)).map_err(io)?;
            let limits = SearchLimits {
                max_n0: *max_n0,
                bound: *bound,
            };
            let sol = find_t_for(&ps, limits)?;
            writeln!(out, "t = {}", sol.t).map_err(io)?;
            writeln!(out, "w = {:?}", sol.w()).map_err(io)?;
            writeln!(out, "x1 = {}, x2 = {}, x3 = {}", sol.x1, sol.x2, sol.x3).map_err(io)?;
            Ok(0)
        }
        Command::Basis { spec } => {
            let spec = CongruenceFamilySpec::load(spec)?;
            let basis = basis_for(&spec.gen)?;
            write!(out, "{basis}").map_err(io)?;
            let problems = basis_problems(&basis);
            for p in &problems {
                writeln!(out, "problem: {p}").map_err(io)?;
            }
            let se = compute_m_constants(&basis, &build_a(&spec.gen), spec.ell())?;
            writeln!(out, "m_A = {}, m_t = {}, m_1/t = {}, m_k = {:?}", se.m_a, se.m_t, se.m_negt, se.m_k)
                .map_err(io)?;
            Ok(if problems.is_empty() { 0 } else { 3 })
        }
        Command::UImage { spec, i, j, k, modulus } => {
            let spec = CongruenceFamilySpec::load(spec)?;
            if *i > 1 {
                return Err(Error::InvalidSpec(format!("i = {i} must be 0 or 1")));
            }
            let basis = basis_for(&spec.gen)?;
            if *k > basis.v() {
                return Err(Error::InvalidSpec(format!("k = {k} exceeds v = {}", basis.v())));
            }
            let a = build_a(&spec.gen);
            let text = match modulus {
                None => u_image_text(Integers, cli, &basis, &a, &spec, (*i, *j, *k))?,
                Some(m) => u_image_text(parse_modulus(m)?, cli, &basis, &a, &spec, (*i, *j, *k))?,
            };
            writeln!(out, "{text}").map_err(io)?;
            Ok(0)
        }
        Command::Verify {
            spec,
            b,
            iterations,
            json,
            output,
        } => {
            let mut spec = CongruenceFamilySpec::load(spec)?;
            if let Some(b) = b {
                spec = spec.with_b(*b)?;
            }
            let iterations = iterations.unwrap_or_else(|| spec.default_iterations());
            let basis = basis_for(&spec.gen)?;
            let mut ver = Verifier::new(&spec, &basis)?;
            if let Some(dir) = &cli.cache_dir {
                ver = ver.with_cache_dir(dir);
            }
            let report = ver.iterate(iterations)?;
            if *json {
                writeln!(out, "{}", report.to_json()).map_err(io)?;
            } else {
                writeln!(out, "{report}").map_err(io)?;
                match report.first_violation() {
                    None => writeln!(out, "pattern holds for 0 <= alpha <= {iterations}"),
                    Some(a) => writeln!(out, "pattern fails at alpha = {a}"),
                }
                .map_err(io)?;
            }
            if let Some(path) = output {
                std::fs::write(path, report.to_json()).map_err(io)?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::DirectCheck { spec, m, j, e, n_max } => {
            let spec = CongruenceFamilySpec::load(spec)?;
            if *m == 0 {
                return Err(Error::InvalidSpec("m must be positive".into()));
            }
            let ell = spec.ell();
            let o = direct_oracle(&spec.gen, *m, *j, ell, *e, *n_max);
            match &o.witness {
                None => writeln!(out, "{ell}^{e} divides a({m}n+{j}) for 0 <= n <= {n_max}"),
                Some((n, x)) => writeln!(
                    out,
                    "{ell}^{e} does not divide a({m}n+{j}) at n = {n}: a({}) = {x}",
                    m * n + j
                ),
            }
            .map_err(io)?;
            Ok(if o.holds { 0 } else { 1 })
        }
        Command::Tables => {
            write!(out, "{}", tables_text()).map_err(io)?;
            Ok(0)
        }
    }
}

fn u_image_text<R: Ring>(
    ring: R,
    cli: &Cli,
    basis: &AlgebraBasis,
    a: &EtaQuotient,
    spec: &CongruenceFamilySpec,
    (i, j, k): (u8, i64, usize),
) -> Result<String> {
    let mut eng = ImageEngine::new(ring.clone(), basis, a, spec.ell())?;
    if let Some(dir) = &cli.cache_dir {
        eng = eng.with_cache_dir(dir);
    }
    let m = eng.stability().m(i, j, k);
    let e = eng.image(i, j, k)?;
    let mut arg: Vec<String> = Vec::new();
    if i == 1 {
        arg.push("A".into());
    }
    if j != 0 {
        arg.push(format!("t^{j}"));
    }
    if k > 0 {
        arg.push(basis.g_name(k));
    }
    let arg = if arg.is_empty() { "1".to_string() } else { arg.join("·") };
    Ok(format!("m = {m}\nU({arg}) = {}", e.format_with(Some(basis))))
}

/// `p^e` or a bare prime `p`.
pub fn parse_modulus(s: &str) -> Result<ModPrimePower> {
    let bad = || Error::InvalidSpec(format!("--mod {s:?}: expected p^e with p prime"));
    let (p, e) = match s.split_once('^') {
        Some((p, e)) => (p.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    ModPrimePower::new(p, e).ok_or_else(bad)
}

/// `c + k·m` written the way the order tables print it.
pub fn affine(c: Rational64, k: Rational64) -> String {
    let mterm = |k: Rational64| {
        if k.is_one() {
            "m".to_string()
        } else {
            format!("{k}m")
        }
    };
    match (c.is_zero(), k.is_zero()) {
        (_, true) => c.to_string(),
        (true, false) if k.is_negative() => format!("-{}", mterm(-k)),
        (true, false) => mterm(k),
        (false, false) if k.is_negative() => format!("{c} - {}", mterm(-k)),
        (false, false) => format!("{c} + {}", mterm(k)),
    }
}

fn pad(s: &str, w: usize) -> String {
    format!("{s:<w$}")
}

/// Golden text for the level-20 Rogers–Ramanujan setting: cusp images under
/// τ ↦ (τ + r)/5 over Γ0(100) and Γ0(20), orders of A and T, and the orders
/// of t(5τ)^m·f over Γ0(100) for f = A, T, 1/T, G, H.
pub fn tables_text() -> String {
    let mut s = String::new();
    let gen = FamilyGenerator::rogers_ramanujan();
    let a = build_a(&gen);
    let basis = load_basis_n20();
    let t = basis.t.as_eta().expect("T is an eta quotient").clone();
    let c20 = cusp_representatives(20);
    let c100 = cusp_representatives(100);

    for (title, target) in [("Cusps of Gamma0(100) approached by (tau+r)/5", 100), ("Cusps of Gamma0(20) approached by (tau+r)/5", 20)] {
        writeln!(s, "{title}").unwrap();
        let header: String = (0..5).map(|r| pad(&format!("r={r}"), 8)).collect();
        writeln!(s, "{}{}", pad("a/c", 8), header.trim_end()).unwrap();
        for x in &c20 {
            let row: String = (0..5)
                .map(|r| pad(&cusp_image_under_scaling(*x, r, 5, target).to_string(), 8))
                .collect();
            writeln!(s, "{}{}", pad(&x.to_string(), 8), row.trim_end()).unwrap();
        }
        writeln!(s).unwrap();
    }

    writeln!(s, "Orders of A over Gamma0(100)").unwrap();
    for x in &c100 {
        writeln!(s, "{}{}", pad(&x.to_string(), 8), eta_order_at_cusp(&a, *x)).unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "Orders of T over Gamma0(20)").unwrap();
    for x in &c20 {
        writeln!(s, "{}{}", pad(&x.to_string(), 8), eta_order_at_cusp(&t, *x)).unwrap();
    }
    writeln!(s).unwrap();

    let g = basis.gs[0].as_eta().expect("G is an eta quotient").clone();
    let h: EtaQuotient = "20:4^1,5^5,1^-1,20^-5".parse().expect("H");
    let cols: [(&str, EtaQuotient); 5] = [("A", a), ("T", t.clone()), ("1/T", t.inv()), ("G", g), ("H", h)];
    let rows: Vec<Vec<(Cusp, Rational64, Rational64)>> =
        cols.iter().map(|(_, f)| scaled_order_table(f, &t, 5)).collect();
    writeln!(s, "Orders of T(5 tau)^m * f over Gamma0(100)").unwrap();
    writeln!(s, "{}{}", pad("cusp", 8), cols.iter().map(|(n, _)| pad(n, 12)).collect::<String>().trim_end()).unwrap();
    for (idx, x) in c100.iter().enumerate() {
        let line: String = rows.iter().map(|r| pad(&affine(r[idx].1, r[idx].2), 12)).collect();
        writeln!(s, "{}{}", pad(&x.to_string(), 8), line.trim_end()).unwrap();
    }
    s
}
