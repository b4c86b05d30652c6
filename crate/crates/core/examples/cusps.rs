// Cusp classes of Γ0(N), the equivalence witness between two cusps, and
// where (τ + r)/ℓ lands when τ approaches each cusp.
//
//     cargo run --example cusps -- 100

use partcong::modcurve::{cusp_count, cusp_equivalent, cusp_image_under_scaling, cusp_representatives, Cusp};

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let reps = cusp_representatives(n);
    assert_eq!(reps.len(), cusp_count(n));
    let list: Vec<String> = reps.iter().map(Cusp::to_string).collect();
    println!("Gamma0({n}): {} classes", reps.len());
    println!("  {}", list.join(" "));

    let (x, y) = (Cusp::new(31, 50), Cusp::new(1, 50));
    match cusp_equivalent(x, y, 100) {
        Some((m, k)) => println!("{x} ~ {y} over Gamma0(100) with m = {m}, n = {k}"),
        None => println!("{x} and {y} are inequivalent over Gamma0(100)"),
    }

    println!("images of (tau + r)/5 over Gamma0(100):");
    for x in cusp_representatives(20) {
        let row: Vec<String> = (0..5).map(|r| cusp_image_under_scaling(x, r, 5, 100).to_string()).collect();
        println!("  {x:<5} -> {}", row.join(" "));
    }
}
