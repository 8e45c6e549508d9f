//! Classifies a few canonical structures and prints their invariants.

use contact_conformal::chains::conformal_class_decision;
use contact_conformal::scalar::q;
use contact_conformal::structure::{chi2_kappa, classify, StructureConstants};

fn main() -> contact_conformal::Result<()> {
    let inputs = [
        ("su(2)", StructureConstants::from_ints([0, 0, 0, 1, -1, 0])),
        ("unimodular chi=1 kappa=0", StructureConstants::unimodular(q(1, 1), q(0, 1))),
        ("solv+ on the flat locus", StructureConstants::from_ints([0, 3, 0, 2, 0, 0])),
        ("solv+ rigid", StructureConstants::solv_plus(q(1, 1), q(1, 1))),
    ];
    for (name, sc) in inputs {
        let (chi2, kappa) = chi2_kappa(&sc);
        let kind = classify(&sc, 0.0)?;
        let class = conformal_class_decision(&sc, 0.0)?;
        println!("{name:28} {kind:?}  chi^2={chi2}  kappa={kappa}  {class:?}");
    }
    Ok(())
}
