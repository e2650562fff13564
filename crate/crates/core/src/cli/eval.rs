use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use serde::Serialize;

use super::input::{self, require};
use super::{emit_json, CliError, CliResult, Common, Envelope};
use crate::dist::SimplexPoint;
use crate::hahn::{chi_h, h_kernel, xi_h, HahnContext};
use crate::jacobi::{q_kernel, xi};
use crate::numkit::{Field, Flavor, Rational, Scalar};
use crate::symkern::{h_kernel_esf, h_kernel_ranked, q_kernel_pd, q_kernel_ranked, xi_h_esf, xi_h_ranked, xi_pd, xi_ranked};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalKind {
    /// Dirichlet kernel `Q_n(x, y)`; needs `--x`, `--y`.
    Jacobi,
    /// Dirichlet-multinomial kernel `H_n(r, s)`; needs `--r`, `--s`.
    Hahn,
    /// Symmetric ranked kernel with `--theta`, `--dim` and either points or counts.
    Ranked,
    /// Poisson-Dirichlet kernel on ranked points; needs `--theta`.
    Pd,
    /// Ewens kernel on partitions of `N`; needs `--theta`.
    Esf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Kernel,
    Xi,
    /// Falling-factorial kernel, Hahn only.
    Chi,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub kind: EvalKind,
    /// Degree `n` (or `m` for xi and chi).
    #[arg(short = 'n', long, default_value_t = 0)]
    pub degree: u32,
    #[arg(long, value_enum, default_value = "kernel")]
    pub quantity: Quantity,
    /// First point, comma separated.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    /// First count vector or partition, comma separated.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    /// Total mass of the symmetric parameters.
    #[arg(long)]
    pub theta: Option<String>,
    /// Dimension of the ranked simplex.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Serialize)]
struct EvalReport {
    kind: EvalKind,
    quantity: Quantity,
    degree: u32,
    inputs: BTreeMap<&'static str, String>,
    value: Scalar,
}

pub(super) fn run(common: &Common, args: &EvalArgs) -> CliResult<()> {
    let value = match common.flavor {
        Flavor::Exact => evaluate::<Rational>(common, args)?,
        Flavor::Float => evaluate::<f64>(common, args)?,
    };
    let mut inputs = BTreeMap::new();
    let flags = [("alpha", &common.alpha), ("x", &args.x), ("y", &args.y), ("r", &args.r), ("s", &args.s), ("theta", &args.theta)];
    for (k, v) in flags {
        if let Some(v) = v {
            inputs.insert(k, v.clone());
        }
    }
    if let Some(d) = args.dim {
        inputs.insert("dim", d.to_string());
    }
    let report = EvalReport { kind: args.kind, quantity: args.quantity, degree: args.degree, inputs, value };
    emit_json(common, &Envelope::new("eval", common, None, report))
}

fn no_chi(args: &EvalArgs) -> CliResult<()> {
    if args.quantity == Quantity::Chi {
        return Err(CliError::Config("--quantity chi is only defined for hahn".into()));
    }
    Ok(())
}

fn theta<F: Field>(args: &EvalArgs) -> CliResult<F> {
    input::scalar(require(&args.theta, "theta")?, "theta")
}

fn evaluate<F: Field>(common: &Common, args: &EvalArgs) -> CliResult<Scalar> {
    let n = args.degree;
    let v: F = match args.kind {
        EvalKind::Jacobi => {
            no_chi(args)?;
            let alpha = input::alpha::<F>(common, "1,1")?;
            let x: SimplexPoint<F> = input::point(require(&args.x, "x")?, "x")?;
            let y: SimplexPoint<F> = input::point(require(&args.y, "y")?, "y")?;
            match args.quantity {
                Quantity::Kernel => q_kernel(&alpha, n, &x, &y)?,
                _ => xi(&alpha, n, &x, &y)?,
            }
        }
        EvalKind::Hahn => {
            let alpha = input::alpha::<F>(common, "1,1")?;
            let r = input::multi_index(require(&args.r, "r")?, "r")?;
            let s = input::multi_index(require(&args.s, "s")?, "s")?;
            let ctx = HahnContext::new(alpha, r.total());
            match args.quantity {
                Quantity::Kernel => h_kernel(&ctx, n, &r, &s)?,
                Quantity::Xi => xi_h(&ctx, n, &r, &s)?,
                Quantity::Chi => chi_h(&ctx, n, &r, &s)?,
            }
        }
        EvalKind::Ranked => {
            no_chi(args)?;
            let theta = theta::<F>(args)?;
            let d = args.dim.ok_or_else(|| CliError::Config("--dim is required for ranked".into()))?;
            if let (Some(x), Some(y)) = (&args.x, &args.y) {
                let (x, y) = (input::ranked::<F>(x, "x")?, input::ranked::<F>(y, "y")?);
                match args.quantity {
                    Quantity::Kernel => q_kernel_ranked(&theta, d, n, &x, &y)?,
                    _ => xi_ranked(&theta, d, n, &x, &y)?,
                }
            } else {
                let r = input::partition(require(&args.r, "r")?, "r")?;
                let s = input::partition(require(&args.s, "s")?, "s")?;
                match args.quantity {
                    Quantity::Kernel => h_kernel_ranked(&theta, d, r.total(), n, &r, &s)?,
                    _ => xi_h_ranked(&theta, d, n, &r, &s)?,
                }
            }
        }
        EvalKind::Pd => {
            no_chi(args)?;
            let theta = theta::<F>(args)?;
            let x = input::ranked::<F>(require(&args.x, "x")?, "x")?;
            let y = input::ranked::<F>(require(&args.y, "y")?, "y")?;
            match args.quantity {
                Quantity::Kernel => q_kernel_pd(&theta, n, &x, &y)?,
                _ => xi_pd(&theta, n, &x, &y)?,
            }
        }
        EvalKind::Esf => {
            no_chi(args)?;
            let theta = theta::<F>(args)?;
            let r = input::partition(require(&args.r, "r")?, "r")?;
            let s = input::partition(require(&args.s, "s")?, "s")?;
            match args.quantity {
                Quantity::Kernel => h_kernel_esf(&theta, r.total(), n, &r, &s)?,
                _ => xi_h_esf(&theta, n, &r, &s)?,
            }
        }
    };
    Ok(v.to_scalar())
}
