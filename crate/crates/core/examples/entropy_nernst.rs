//! Low-temperature entropy for the modified ideal metal and for gold,
//! with a polynomial extrapolation to T = 0.

use casimir::asymptotics::mim_entropy_defect;
use casimir::thermo::{entropy, extrapolate_to_zero, low_t_derivative, tight_tolerances};
use casimir::{DispersionModel, LifshitzQuery, ZeroModePolicy};

fn main() -> casimir::Result<()> {
    let a = 1e-6;
    let defect = mim_entropy_defect(a);
    let temps = [20.0, 10.0, 5.0, 2.0, 1.0, 0.5];
    let mim = LifshitzQuery::new(a, 20.0, DispersionModel::IdealMetal)?
        .with_policy(ZeroModePolicy::ForceMIM)
        .with_tolerances(tight_tolerances());
    let gold = LifshitzQuery::new(a, 20.0, DispersionModel::gold())?.with_tolerances(tight_tolerances());
    let spec = low_t_derivative();

    println!("a = 1 um, S in units of |S_MIM(0)| = {:.4e} J/(K m^2)", defect.abs());
    println!("{:>6} {:>10} {:>10}", "T (K)", "MIM", "gold");
    let mut mim_samples = Vec::new();
    let mut gold_samples = Vec::new();
    for t in temps {
        let s_mim = entropy(&mim.at_temperature(t)?, &spec)?.value;
        let s_gold = entropy(&gold.at_temperature(t)?, &spec)?.value;
        println!("{t:>6} {:>10.5} {:>10.5}", s_mim / defect.abs(), s_gold / defect.abs());
        mim_samples.push((t, s_mim));
        gold_samples.push((t, s_gold));
    }
    let (s0_mim, _) = extrapolate_to_zero(&mim_samples[..4])?;
    let (s0_gold, _) = extrapolate_to_zero(&gold_samples[..4])?;
    println!(
        "extrapolated from 20..2 K: MIM {:.5}, gold {:.5}",
        s0_mim / defect.abs(),
        s0_gold / defect.abs()
    );
    Ok(())
}
