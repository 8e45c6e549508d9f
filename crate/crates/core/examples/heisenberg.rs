//! Conformal vector fields of the Heisenberg structure.

use contact_conformal::heisenberg::{bracket_table, conformal_residuals, generators, verify};

fn main() -> contact_conformal::Result<()> {
    let gens = generators();
    for (i, f) in gens.iter().enumerate() {
        let eta = conformal_residuals(f).eta.map(|e| e.to_string()).unwrap_or_else(|| "-".into());
        println!("F{}  eta={eta:4} {f}", i + 1);
    }
    let table = bracket_table(&gens)?;
    println!("orientation: {:?}", table.orientation);
    let cert = verify(4)?;
    println!("dimension {} signature {:?} passed {}", cert.dimension, cert.su21_signature, cert.passed());
    Ok(())
}
