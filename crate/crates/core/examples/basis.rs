// Builds the algebra basis around t and writes a modular function in it
// with the Weierstrass-gap reduction.
//
//     cargo run --release --example basis

use num_bigint::BigInt;
use partcong::basis::{basis_problems, mw_reduce, ReductionResult, ReductionTable};
use partcong::series::{Integers, QSeries};
use partcong::ujump::FamilyGenerator;
use partcong::verifier::basis_for;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let basis = basis_for(&FamilyGenerator::rogers_ramanujan())?;
    print!("{basis}");
    assert!(basis_problems(&basis).is_empty());

    // t²·g₂ − 3·g₄ + 7, recovered from its q-series alone.
    let t = basis.t.expand(80)?;
    let g2 = basis.gs[1].expand(80)?;
    let g4 = basis.gs[3].expand(80)?;
    let f = t
        .mul(&t)?
        .mul(&g2)?
        .sub(&g4.scale(&BigInt::from(3)))?
        .add(&QSeries::from_i64s(0, 0, &[7], 80))?;
    let mut table = ReductionTable::new(Integers, &basis, 30);
    table.ensure(20)?;
    match mw_reduce(&f, &table)? {
        ReductionResult::Member(e) => println!("f = {}", e.format_with(Some(&basis))),
        ReductionResult::NotMember { order } => println!("f is not in the module (gap at order {order})"),
    }
    Ok(())
}
