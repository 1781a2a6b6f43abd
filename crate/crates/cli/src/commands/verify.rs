use std::str::FromStr;

use biharm::verify::{run_suite, Suite};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{num, Table};

/// Runs a suite; the boolean is `true` when every check passed.
pub fn run(
    suite: &str,
    cfg: &RunConfig,
    mut header: Vec<(String, String)>,
) -> Result<(Table, bool), CliError> {
    let suite = Suite::from_str(suite).map_err(|_| {
        CliError::config(format!(
            "unknown suite `{suite}` (axioms, interval, bilaplace, newtonian, adjoint, all)"
        ))
    })?;
    let checks = run_suite(suite, &cfg.tol);
    let failed = checks.iter().filter(|c| !c.passed).count();
    header.push(("suite".into(), suite.to_string()));
    header.push(("checks".into(), checks.len().to_string()));
    header.push(("failed".into(), failed.to_string()));
    let mut t = Table::new(header, vec!["id", "value", "tolerance", "verdict"]);
    for c in &checks {
        t.push(vec![
            c.id.clone(),
            num(c.value),
            format!("{:e}", c.tolerance),
            if c.passed { "pass" } else { "fail" }.to_string(),
        ]);
    }
    Ok((t, failed == 0))
}
