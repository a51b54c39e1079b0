//! Sweep of a^4 f over 1..7 um for gold at 300 K, written as CSV to
//! stdout or to the path given as the first argument.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use casimir::sweep::{parse_outputs, run_sweep, Axis, Spacing, SweepSpec};
use casimir::thermo::{DerivativeSpec, Variable};
use casimir::{DispersionModel, Tolerances, ZeroModePolicy};

fn main() -> casimir::Result<()> {
    let spec = SweepSpec {
        axis: Axis::Gap,
        start: 1e-6,
        stop: 7e-6,
        points: 61,
        spacing: Spacing::Linear,
        fixed: 300.0,
        model: DispersionModel::gold(),
        policy: ZeroModePolicy::FromModel,
        outputs: parse_outputs("pressure,a4f")?,
        tolerances: Tolerances::default(),
        derivative: DerivativeSpec::default_for(Variable::Temperature),
    };
    let mut sink: Box<dyn Write> = match std::env::args().nth(1) {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let summary = run_sweep(&spec, &mut sink)?;
    sink.flush()?;
    eprintln!("{} rows, {} failures", summary.rows, summary.failures);
    Ok(())
}
