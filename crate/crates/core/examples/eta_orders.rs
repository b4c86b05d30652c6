// Newman's modularity test and the order vector of an eta quotient.
//
//     cargo run --example eta_orders -- "20:1^2,4^2,10^8,5^-2,20^-10"

use partcong::modcurve::{newman_check, order_vector};
use partcong::series::{eta_expand, EtaQuotient};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eq: EtaQuotient = match std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        Some(eq) => eq,
        None => "20:1^2,4^2,10^8,5^-2,20^-10".parse()?,
    };
    let check = newman_check(&eq);
    println!("{eq}: modular over Gamma0({}) = {}", eq.level(), check.holds());
    let ords = order_vector(&eq);
    println!("{ords}");
    println!("total order {} (zero for a modular function)", ords.total());
    let s = eta_expand(&eq, 12)?;
    println!("q-expansion: {s}");
    Ok(())
}
