use clap::{Args, ValueEnum};
use serde::Serialize;

use super::input;
use super::{emit_json, CliError, CliResult, Common, Envelope};
use crate::dist::DirichletParams;
use crate::numkit::{Field, Flavor, Rational, Scalar};
use crate::pds::{
    bernstein_approx, jpds_to_hpds, jpds_to_pmf, pmf_to_jpds, scan_hpds, scan_jpds, wf_sequence, DegreeSequence, PositivityReport,
    DEFAULT_RESOLUTION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PdsTransform {
    /// Mixing pmf `d_m` to canonical correlations `rho_n`.
    Pmf2rho,
    /// Canonical correlations back to the mixing pmf.
    Rho2pmf,
    /// Dirichlet sequence to its Dirichlet-multinomial image at `N`.
    J2h,
    /// Bernstein-smoothed sequence `rho^N` (two dimensions).
    Bernstein,
    /// Positivity scan of a kernel series.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    /// Exhaustive over all count pairs at `N`; a proof in exact mode.
    Hpds,
    /// Grid scan on the continuous simplex, float only.
    Jpds,
}

#[derive(Debug, Clone, Args)]
pub struct PdsArgs {
    #[arg(value_enum)]
    pub transform: PdsTransform,
    /// Mixing pmf `d_0,d_1,...`.
    #[arg(long)]
    pub pmf: Option<String>,
    /// Sequence `rho_0,rho_1,...`.
    #[arg(long)]
    pub rho: Option<String>,
    /// Use the Wright-Fisher sequence `exp(-n(n+theta-1)t/2)` at this time.
    #[arg(long)]
    pub wf: Option<String>,
    /// Defaults to the sum of `--alpha`.
    #[arg(long)]
    pub theta: Option<String>,
    /// Sample size `N`.
    #[arg(long)]
    pub size: Option<u32>,
    #[arg(long, value_enum, default_value = "hpds")]
    pub kind: ScanKind,
    /// Scan `--rho` as given instead of mapping it to its image at `N`.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Serialize)]
#[serde(bound = "")]
struct PdsReport<F: Field> {
    transform: PdsTransform,
    theta: Scalar,
    input: DegreeSequence<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<DegreeSequence<F>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inversion: Option<InversionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scan: Option<PositivityReport>,
}

#[derive(Debug, Serialize)]
struct InversionSummary {
    is_pmf: bool,
    converged: bool,
    negative: Vec<u32>,
    mass: Scalar,
    last_term: f64,
    magnitude: f64,
}

pub(super) fn run(common: &Common, args: &PdsArgs) -> CliResult<()> {
    match common.flavor {
        Flavor::Exact => run_with::<Rational>(common, args),
        Flavor::Float => run_with::<f64>(common, args),
    }
}

fn size(args: &PdsArgs, default: u32) -> u32 {
    args.size.unwrap_or(default)
}

/// `--rho` in the working flavor, or the Wright-Fisher sequence through
/// `nmax` converted exactly from `f64`.
fn rho_input<F: Field>(args: &PdsArgs, theta: &F, nmax: u32) -> CliResult<DegreeSequence<F>> {
    match (&args.rho, &args.wf) {
        (Some(text), None) => input::sequence(text, "rho"),
        (None, Some(t)) => {
            let t = input::scalar::<f64>(t, "wf")?;
            let wf = wf_sequence(theta.to_f64(), t, nmax)?;
            Ok(DegreeSequence::new(wf.values().iter().map(|&v| F::from_f64(v)).collect(), wf.provenance()))
        }
        _ => Err(CliError::Config("give exactly one of --rho and --wf".into())),
    }
}

fn run_with<F: Field>(common: &Common, args: &PdsArgs) -> CliResult<()> {
    let alpha = input::alpha::<F>(common, "1,1")?;
    let theta: F = match &args.theta {
        Some(t) => input::scalar(t, "theta")?,
        None => alpha.total().clone(),
    };
    if !(theta.to_f64() > 0.0) {
        return Err(CliError::Config("--theta must be positive".into()));
    }
    let mut report = PdsReport {
        transform: args.transform,
        theta: theta.to_scalar(),
        input: DegreeSequence::new(Vec::new(), ""),
        size: None,
        output: None,
        inversion: None,
        scan: None,
    };
    let mut truncation = common.truncation;
    match args.transform {
        PdsTransform::Pmf2rho => {
            let pmf: DegreeSequence<F> = input::sequence(input::require(&args.pmf, "pmf")?, "pmf")?;
            let nmax = common.truncation.unwrap_or_else(|| pmf.max_degree().max(10));
            truncation = Some(nmax);
            report.output = Some(pmf_to_jpds(&theta, &pmf, nmax)?);
            report.input = pmf;
        }
        PdsTransform::Rho2pmf => {
            let rho = rho_input(args, &theta, common.truncation.unwrap_or(60))?;
            let inv = jpds_to_pmf(&theta, &rho)?;
            report.inversion = Some(InversionSummary {
                is_pmf: inv.is_pmf(),
                converged: inv.converged,
                negative: inv.negative.clone(),
                mass: inv.mass.to_scalar(),
                last_term: inv.last_term,
                magnitude: inv.magnitude,
            });
            report.output = Some(inv.pmf);
            report.input = rho;
        }
        PdsTransform::J2h => {
            let n = args.size.ok_or_else(|| CliError::Config("--size is required for j2h".into()))?;
            let rho = rho_input(args, &theta, n)?;
            report.size = Some(n);
            report.output = Some(jpds_to_hpds(&theta, n, &rho));
            report.input = rho;
        }
        PdsTransform::Bernstein => {
            let n = size(args, 8);
            let trunc = common.truncation.unwrap_or(30);
            let rho = rho_input::<f64>(args, &theta.to_f64(), trunc)?;
            let trunc = trunc.min(rho.max_degree());
            truncation = Some(trunc);
            let smooth = bernstein_approx(&alpha, &rho, n, trunc)?;
            report.scan = Some(scan_hpds(&alpha, n, &smooth)?);
            report.size = Some(n);
            report.output = Some(smooth);
            report.input = DegreeSequence::new(rho.values().iter().map(|&v| F::from_f64(v)).collect(), rho.provenance());
        }
        PdsTransform::Scan => match args.kind {
            ScanKind::Hpds => {
                let n = size(args, 4);
                let rho = rho_input(args, &theta, n)?;
                let hpds = if args.raw { rho.clone() } else { jpds_to_hpds(&theta, n, &rho) };
                report.scan = Some(scan_hpds(&alpha, n, &hpds)?);
                report.size = Some(n);
                report.output = Some(hpds);
                report.input = rho;
            }
            ScanKind::Jpds => {
                let trunc = common.truncation.unwrap_or(30);
                truncation = Some(trunc);
                let rho = rho_input::<f64>(args, &theta.to_f64(), trunc)?;
                let af = DirichletParams::new(alpha.alpha().iter().map(Field::to_f64).collect())?;
                report.scan = Some(scan_jpds(&af, &rho, common.grid.unwrap_or(DEFAULT_RESOLUTION), trunc.min(rho.max_degree()))?);
                report.input = DegreeSequence::new(rho.values().iter().map(|&v| F::from_f64(v)).collect(), rho.provenance());
            }
        },
    }
    emit_json(common, &Envelope::new(format!("pds {}", transform_name(args.transform)), common, truncation, report))
}

fn transform_name(t: PdsTransform) -> String {
    t.to_possible_value().expect("no skipped variants").get_name().to_string()
}
