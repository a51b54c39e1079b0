//! Pressure from a tabulated permittivity read from CSV, with a Drude tail
//! below the table, checked against the analytic Drude model.

use std::io::Cursor;
use std::sync::Arc;

use casimir::dispersion::load_permittivity_table;
use casimir::lifshitz::pressure;
use casimir::{DispersionModel, DrudeParams, LifshitzQuery};

fn main() -> casimir::Result<()> {
    let gold = DrudeParams::gold();
    let mut csv = String::from("# gold, Drude model sampled at 300 K\nzeta_rad_s,epsilon\n");
    for i in 0..=400 {
        let zeta = 1e12 * 10f64.powf(f64::from(i) / 50.0);
        csv.push_str(&format!("{zeta:e},{:e}\n", gold.epsilon(zeta, 300.0)));
    }
    let table = load_permittivity_table(Cursor::new(csv))?
        .with_drude_tail(gold.clone())
        .with_high_frequency_tail(true);
    println!("table rows: {}", table.len());
    let tabulated = DispersionModel::Tabulated(Arc::new(table));

    for a_um in [0.5, 1.0, 3.0] {
        let a = a_um * 1e-6;
        let p = |m: DispersionModel| -> casimir::Result<f64> { Ok(pressure(&LifshitzQuery::new(a, 300.0, m)?)?.pressure.expect("pressure requested").value) };
        let from_table = p(tabulated.clone())?;
        let analytic = p(DispersionModel::Drude(gold.clone()))?;
        println!(
            "a = {a_um} um: table {from_table:.8e} Pa, drude {analytic:.8e} Pa, rel diff {:.1e}",
            ((from_table - analytic) / analytic).abs()
        );
    }
    Ok(())
}
