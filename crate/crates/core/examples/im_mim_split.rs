//! Effect of the zero-frequency TE mode: ideal metal with and without it,
//! and the plasma and Drude models in between.

use casimir::asymptotics::{classical_limit_pressure, ModePolicy};
use casimir::constants::ev_to_angular_frequency;
use casimir::lifshitz::pressure;
use casimir::{DispersionModel, LifshitzQuery, ZeroModePolicy};

fn main() -> casimir::Result<()> {
    let t = 300.0;
    let plasma = DispersionModel::plasma(ev_to_angular_frequency(9.03)?)?;
    let p = |model: &DispersionModel, policy: ZeroModePolicy, a: f64| -> casimir::Result<f64> {
        let q = LifshitzQuery::new(a, t, model.clone())?.with_policy(policy);
        Ok(pressure(&q)?.pressure.expect("pressure requested").value)
    };
    println!("T = {t} K; pressures in Pa");
    println!("{:>7} {:>13} {:>13} {:>13} {:>13} {:>13}", "a (um)", "IM", "MIM", "plasma", "drude", "IM-MIM");
    for a_um in [0.5, 1.0, 3.0, 10.0] {
        let a = a_um * 1e-6;
        let im = p(&DispersionModel::IdealMetal, ZeroModePolicy::ForceIM, a)?;
        let mim = p(&DispersionModel::IdealMetal, ZeroModePolicy::ForceMIM, a)?;
        let pl = p(&plasma, ZeroModePolicy::FromModel, a)?;
        let dr = p(&DispersionModel::gold(), ZeroModePolicy::FromModel, a)?;
        println!("{a_um:>7} {im:>13.5e} {mim:>13.5e} {pl:>13.5e} {dr:>13.5e} {:>13.5e}", im - mim);
    }
    let a = 10e-6;
    println!();
    println!(
        "at a = 10 um the m = 0 term alone gives IM {:.5e} Pa, MIM {:.5e} Pa",
        classical_limit_pressure(a, t, ModePolicy::IM),
        classical_limit_pressure(a, t, ModePolicy::MIM)
    );
    Ok(())
}
