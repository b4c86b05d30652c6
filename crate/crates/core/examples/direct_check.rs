// Brute-force checks of single congruences straight from the product
// expansion, and the progression each congruence belongs to.
//
//     cargo run --release --example direct_check

use partcong::ujump::FamilyGenerator;
use partcong::verifier::{direct_oracle, residue_for_case};

fn main() -> partcong::Result<()> {
    let rr = FamilyGenerator::rogers_ramanujan();
    let as2 = FamilyGenerator::andrews_sellers();
    println!("24n = 1 mod 5^2 at n = {}", residue_for_case(24, 5, 2)?);
    println!("24n = 1 mod 5^4 at n = {}", residue_for_case(24, 5, 4)?);
    let cases = [
        ("a", &rr, 25, 24, 1, 100),
        ("a", &rr, 125, 99, 1, 50),
        ("a", &rr, 125, 99, 2, 50),
        ("cphi2", &as2, 5, residue_for_case(12, 5, 1)?, 1, 200),
    ];
    for (name, gen, m, j, e, n_max) in cases {
        let o = direct_oracle(gen, m, j, 5, e, n_max);
        match o.witness {
            None => println!("5^{e} | {name}({m}n+{j}) for n <= {n_max}"),
            Some((n, x)) => println!("5^{e} does not divide {name}({m}n+{j}) at n = {n}: {x}"),
        }
    }
    Ok(())
}
