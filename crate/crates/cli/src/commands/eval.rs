use biharm::adjoint::adjoint_apply;
use biharm::kernel::kernel_eval;
use biharm::models::newtonian::NewtonianModel;
use biharm::quadrature::RadialRange;
use biharm::{compose_green, coupling_apply, ExtendedValue, LineModel};

use crate::config::{KernelChoice, ModelChoice, RunConfig};
use crate::error::CliError;
use crate::table::{extended_cells, num, Table};

pub fn run(cfg: &RunConfig, header: Vec<(String, String)>) -> Result<Table, CliError> {
    let model = cfg
        .model
        .ok_or_else(|| CliError::config("eval needs --model"))?;
    let kernel = cfg
        .kernel
        .ok_or_else(|| CliError::config("eval needs --kernel"))?;
    match (model, model.line_model(cfg.tol.quad)) {
        (_, Some(m)) => line(cfg, &m, kernel, header),
        (ModelChoice::Newtonian(n), None) => newtonian(cfg, NewtonianModel::new(n)?, kernel, header),
        (other, None) => Err(CliError::config(format!("model {other} has no kernel table"))),
    }
}

fn line(
    cfg: &RunConfig,
    m: &LineModel,
    kernel: KernelChoice,
    header: Vec<(String, String)>,
) -> Result<Table, CliError> {
    if !cfg.dist.is_empty() {
        return Err(CliError::config("--dist applies to the newtonian models only"));
    }
    if cfg.x.is_empty() {
        return Err(CliError::config("eval needs --x"));
    }
    if kernel.is_operator() {
        if !cfg.y.is_empty() {
            return Err(CliError::config(format!("--y is not used by the {kernel} operator")));
        }
        let f = cfg.func.evaluable();
        let mut t = Table::new(header, vec!["x", "value", "error_bound", "exponent"]);
        for &x in &cfg.x {
            let v = match kernel {
                KernelChoice::V => coupling_apply(m, &f, x)?,
                _ => adjoint_apply(m, &f, x)?,
            };
            t.push(row(&[num(x)], &v));
        }
        return Ok(t);
    }
    if cfg.y.is_empty() {
        return Err(CliError::config(format!("the {kernel} kernel needs --y")));
    }
    let mut t = Table::new(header, vec!["x", "y", "value", "error_bound", "exponent"]);
    for &x in &cfg.x {
        for &y in &cfg.y {
            let v = match kernel {
                KernelChoice::G1 => kernel_eval(&m.g1, x, y)?,
                KernelChoice::G2 => kernel_eval(&m.g2, x, y)?,
                _ => compose_green(m, x, y)?,
            };
            t.push(row(&[num(x), num(y)], &v));
        }
    }
    Ok(t)
}

/// Newtonian kernels depend on `|x - y|` only and are queried by distance;
/// `v`/`vstar` (equal by symmetry) are evaluated at the origin for radial
/// data `f(|z|)`.
fn newtonian(
    cfg: &RunConfig,
    m: NewtonianModel,
    kernel: KernelChoice,
    header: Vec<(String, String)>,
) -> Result<Table, CliError> {
    if !cfg.x.is_empty() || !cfg.y.is_empty() {
        return Err(CliError::config(
            "newtonian models take --dist instead of --x/--y",
        ));
    }
    if kernel.is_operator() {
        if !cfg.dist.is_empty() {
            return Err(CliError::config(format!("--dist is not used by the {kernel} operator")));
        }
        let f = cfg.func.clone();
        let v = m.coupling_apply_radial(|r| f.value(r), RadialRange::Whole, cfg.tol.quad)?;
        let mut t = Table::new(header, vec!["x", "value", "error_bound", "exponent"]);
        t.push(row(&["0".to_string()], &v));
        return Ok(t);
    }
    if cfg.dist.is_empty() {
        return Err(CliError::config(format!("the {kernel} kernel needs --dist")));
    }
    let origin = vec![0.0; m.dim as usize];
    let mut t = Table::new(header, vec!["dist", "value", "error_bound", "exponent"]);
    for &d in &cfg.dist {
        if d < 0.0 {
            return Err(CliError::config(format!("distance {d} is negative")));
        }
        let mut x = origin.clone();
        x[0] = d;
        let v = match kernel {
            KernelChoice::H => m.riesz_compose(&x, &origin, cfg.tol.quad)?,
            _ => m.newton_kernel(&x, &origin)?,
        };
        t.push(row(&[num(d)], &v));
    }
    Ok(t)
}

fn row(inputs: &[String], v: &ExtendedValue) -> Vec<String> {
    let mut r = inputs.to_vec();
    r.extend(extended_cells(v));
    r
}
