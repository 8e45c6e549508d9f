//! Finds the flattening function for a flat structure and checks it.

use contact_conformal::cli::FLATNESS_POINTS;
use contact_conformal::flatness::{check_flattening, flatness_verdict};
use contact_conformal::structure::StructureConstants;

fn main() -> contact_conformal::Result<()> {
    for a in [[0, 3, 0, 2, 0, 0], [0, 0, 0, 2, -2, 0], [0, 0, 0, 1, 1, 0], [0, 1, 0, 1, 0, 0]] {
        let sc = StructureConstants::from_ints(a);
        let v = flatness_verdict(&sc, 0.0)?;
        print!("{a:?}: {} alpha={}", v.family.name(), v.alpha);
        match v.flattening {
            Some(fl) => {
                let c = check_flattening(&fl, &FLATNESS_POINTS)?;
                println!("  phi={}  max|chi^2|={:.1e} max|kappa|={:.1e}", fl.phi, c.max_chi2, c.max_kappa);
            }
            None => println!("  not flat"),
        }
    }
    Ok(())
}
