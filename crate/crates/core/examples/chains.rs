//! Integrates a chain and reports conservation drift.

use contact_conformal::chains::{integrate_chain, light_like_h0, write_csv, ChainState};
use contact_conformal::scalar::q;
use contact_conformal::structure::StructureConstants;

fn main() -> contact_conformal::Result<()> {
    let sc = StructureConstants::solv_plus(q(1, 1), q(1, 1));
    let c = sc.to_f64();
    let start = [light_like_h0(&c, &1.0, &1.0), 1.0, 1.0, 1.0];
    let traj = integrate_chain(&sc, &ChainState::new(start), 10.0, 1e-3, None)?;
    let d = &traj.drift;
    println!("steps={} dH={:.1e} dh_inf={:.1e}", d.steps, d.max_delta_h, d.max_delta_hinf);
    if let (Some(kind), Some(di)) = (d.invariant, d.max_delta_invariant) {
        println!("invariant {kind:?} drift {di:.1e}");
    }
    let mut out = Vec::new();
    write_csv(&traj, &mut out).expect("csv");
    let text = String::from_utf8(out).expect("utf8");
    for line in text.lines().step_by(2000) {
        println!("{line}");
    }
    Ok(())
}
