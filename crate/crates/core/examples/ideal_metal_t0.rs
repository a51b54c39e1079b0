//! Zero-temperature pressure between ideal-metal plates, numerical versus
//! the closed form.

use casimir::asymptotics::casimir_pressure_ideal_t0;
use casimir::lifshitz::pressure_t0;
use casimir::DispersionModel;

fn main() -> casimir::Result<()> {
    println!("{:>10} {:>16} {:>16} {:>10}", "a (um)", "numerical (Pa)", "closed (Pa)", "rel diff");
    for a_um in [0.1, 0.3, 1.0, 3.0, 10.0] {
        let a = a_um * 1e-6;
        let p = pressure_t0(&DispersionModel::IdealMetal, a, 1e-10)?;
        let exact = casimir_pressure_ideal_t0(a);
        println!("{a_um:>10} {:>16.6e} {exact:>16.6e} {:>10.1e}", p.value, ((p.value - exact) / exact).abs());
    }
    Ok(())
}
