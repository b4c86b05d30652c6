// Fundamental images U_ℓ(A^i·t^j·g_k) over the integers, with the power of
// t(ℓτ) that makes each one holomorphic away from ∞.
//
//     cargo run --release --example u_image

use partcong::basis::load_basis_n20;
use partcong::series::Integers;
use partcong::ujump::{build_a, FamilyGenerator, ImageEngine};

fn main() -> partcong::Result<()> {
    let basis = load_basis_n20();
    let a = build_a(&FamilyGenerator::rogers_ramanujan());
    let mut engine = ImageEngine::new(Integers, &basis, &a, 5)?;
    let se = engine.stability().clone();
    println!("m_A = {}, m_t = {}, m_1/t = {}, m_k = {:?}", se.m_a, se.m_t, se.m_negt, se.m_k);
    for (i, j, k) in [(0, 1, 0), (0, -1, 0), (1, 0, 0), (1, -1, 1)] {
        let e = engine.image(i, j, k)?;
        println!("U(A^{i} T^{j} G{k}) [m = {}] = {}", se.m(i, j, k), e.format_with(Some(&basis)));
    }
    Ok(())
}
