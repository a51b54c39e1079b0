//! Pressure and free energy for gold plates at room temperature, compared
//! with the ideal-metal law.

use casimir::asymptotics::casimir_pressure_ideal_t0;
use casimir::lifshitz::{evaluate, pressure_t0};
use casimir::{DispersionModel, LifshitzQuery};

fn main() -> casimir::Result<()> {
    let gold = DispersionModel::gold();
    println!(
        "{:>8} {:>15} {:>15} {:>15} {:>8} {:>6}",
        "a (um)", "P(300K) Pa", "P(0K) Pa", "F(300K) J/m2", "P/P_id", "terms"
    );
    for a_um in [0.2, 0.5, 1.0, 2.0, 5.0] {
        let a = a_um * 1e-6;
        let r = evaluate(&LifshitzQuery::new(a, 300.0, gold.clone())?)?;
        let p = r.pressure.expect("pressure requested").value;
        let f = r.free_energy.expect("free energy requested").value;
        let p0 = pressure_t0(&gold, a, 1e-9)?.value;
        println!(
            "{a_um:>8} {p:>15.6e} {p0:>15.6e} {f:>15.6e} {:>8.4} {:>6}",
            p / casimir_pressure_ideal_t0(a),
            r.terms_used
        );
    }
    Ok(())
}
