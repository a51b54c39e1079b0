//! Runs every thermodynamic audit for gold and prints a summary per audit.

use casimir::cli::{run_audit, AuditConfig, AUDITS};
use casimir::{DispersionModel, Tolerances};

fn main() -> casimir::Result<()> {
    let cfg = AuditConfig {
        model: DispersionModel::gold(),
        tolerances: Tolerances::default(),
        gap: None,
        temperature: None,
    };
    for name in AUDITS {
        let report = run_audit(name, &cfg)?;
        let failed: Vec<&str> = report.failures().map(|e| e.check.as_str()).collect();
        if failed.is_empty() {
            println!("{name:<18} pass ({} checks)", report.entries.len());
        } else {
            println!("{name:<18} FAIL ({} of {} checks): {}", failed.len(), report.entries.len(), failed.join("; "));
        }
    }
    Ok(())
}
