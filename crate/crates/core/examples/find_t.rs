// Pole sets of A and the generator t of least pole order at ∞ that can
// cancel every pole U_ℓ introduces.
//
//     cargo run --release --example find_t

use partcong::tfinder::{compute_pole_sets, find_t_for, solve_w, SearchLimits};
use partcong::ujump::{build_a, FamilyGenerator};

fn main() -> partcong::Result<()> {
    let gen = FamilyGenerator::rogers_ramanujan();
    let a = build_a(&gen);
    let ps = compute_pole_sets(&a, gen.ell(), gen.level())?;
    println!("A = {a}");
    println!("P(A) = {:?}", ps.p_a.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("P(g) = {:?}", ps.p_g.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("P'   = {:?}", ps.p_inv.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    for n0 in 1..5 {
        assert!(solve_w(&ps, n0, 12).is_none());
        println!("no t with a pole of order {n0} at infinity");
    }
    let sol = find_t_for(&ps, SearchLimits::default())?;
    println!("t = {} with pole order {}", sol.t, sol.x1);
    Ok(())
}
