// Runs the 5-adic iteration for a(n), the coefficients of
// (q²;q²)⁵/((q;q)³(q⁴;q⁴)²), and checks v_{2α} ≥ α.
//
//     cargo run --release --example verify_rogers_ramanujan -- 5

use partcong::verifier::{basis_for, CongruenceFamilySpec, Verifier};

fn main() -> partcong::Result<()> {
    let b: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let spec = CongruenceFamilySpec::rogers_ramanujan().with_b(b)?;
    let basis = basis_for(&spec.gen)?;
    println!("{basis}");
    let mut verifier = Verifier::new(&spec, &basis)?;
    let report = verifier.iterate(spec.default_iterations())?;
    println!("{report}");
    println!("pattern {}", if report.passed() { "holds" } else { "fails" });
    Ok(())
}
