// The sequence T₁ = U(1/T), T_α = U^{(α mod 2)}(T_{α−1}) modulo 5. It
// falls into a cycle instead of tending to 0 5-adically.
//
//     cargo run --release --example t_sequence

use partcong::basis::load_basis_n20;
use partcong::series::ModPrimePower;
use partcong::ujump::{build_a, t_sequence, FamilyGenerator, ImageEngine};

fn main() -> partcong::Result<()> {
    let basis = load_basis_n20();
    let a = build_a(&FamilyGenerator::rogers_ramanujan());
    let ring = ModPrimePower::new(5, 1).expect("5 is prime");
    let mut engine = ImageEngine::new(ring, &basis, &a, 5)?;
    let seq = t_sequence(&mut engine, 14)?;
    for (n, e) in seq.iter().enumerate() {
        let back = (0..n).find(|&m| seq[m] == *e);
        let note = back.map_or(String::new(), |m| format!("   (= T{})", m + 1));
        println!("T{:<2} = {}{note}", n + 1, e.format_with(Some(&basis)));
    }
    Ok(())
}
