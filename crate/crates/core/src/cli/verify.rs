use clap::{Args, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::input;
use super::{emit_json, CliError, CliResult, Common, Envelope};
use crate::dist::{dm_pmf, DirichletParams, RngStream, SimplexPoint};
use crate::hahn::{gasper_product, h_kernel, h_kernel_chi, h_kernels, u_norm, HahnContext};
use crate::intrep::{verify_hahn_representation, verify_kernel_representation, verify_z_moments, KernelCheck};
use crate::jacobi::{q_kernel, q_kernel_poly, q_kernels};
use crate::numkit::{compositions, Field, Flavor, MultiIndex, Poly, Rational, Scalar};
use crate::pds::{jpds_to_hpds, jpds_to_pmf, mixture_density, pmf_to_jpds, scan_hpds, wf_sequence, DegreeSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifySuite {
    /// Reproducing identities for Jacobi and Hahn kernels.
    Orthogonality,
    /// Product-formula form of the Hahn kernels against the xi form.
    Gasper,
    /// Monte Carlo check of the Z-chain representation.
    Zchain,
    /// Monte Carlo check of the Hahn posterior mixture.
    HahnMixture,
    /// pmf to sequence round trip, HPDS certificate and dimension independence.
    PdsRoundtrip,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: VerifySuite,
    /// Sample size `N` for the discrete suites.
    #[arg(long)]
    pub size: Option<u32>,
    /// Highest kernel degree checked.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Highest `Z` moment checked by the zchain suite.
    #[arg(long, default_value_t = 3)]
    pub moments: u32,
    /// Random point pairs drawn from the seed.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    /// Monte Carlo draws per check.
    #[arg(long, default_value_t = 100_000)]
    pub draws: u64,
    /// Largest accepted `|z|`.
    #[arg(long, default_value_t = 3.0)]
    pub z_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Float,
    MonteCarlo,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    /// Inputs where the identity failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    fn identity(name: String, mode: Mode, witness: Option<Value>) -> Self {
        let status = if witness.is_none() { Status::Pass } else { Status::Fail };
        Check { name, status, mode, estimate: None, se: None, expected: None, z: None, witness }
    }

    fn mc(name: String, c: &KernelCheck, bound: f64, inputs: Value) -> Self {
        let ok = c.passes(bound);
        Check {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            mode: Mode::MonteCarlo,
            estimate: Some(c.estimate.mean),
            se: Some(c.estimate.se),
            expected: Some(Scalar::Float(c.exact)),
            z: Some(c.z),
            witness: (!ok).then_some(inputs),
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    suite: VerifySuite,
    alpha: Vec<Scalar>,
    passed: bool,
    failed: usize,
    checks: Vec<Check>,
}

pub(super) fn run(common: &Common, args: &VerifyArgs) -> CliResult<()> {
    let default_alpha = match args.suite {
        VerifySuite::Zchain | VerifySuite::HahnMixture => "2,2,1",
        _ => "1,1",
    };
    let (alpha, checks) = match (args.suite, common.flavor) {
        (VerifySuite::Zchain, _) => {
            let alpha = input::alpha::<f64>(common, default_alpha)?;
            (scalars(&alpha), zchain(common, args, &alpha)?)
        }
        (VerifySuite::HahnMixture, _) => {
            let alpha = input::alpha::<f64>(common, default_alpha)?;
            (scalars(&alpha), hahn_mixture(common, args, &alpha)?)
        }
        (suite, Flavor::Exact) => {
            let alpha = input::alpha::<Rational>(common, default_alpha)?;
            (scalars(&alpha), identities(suite, common, args, &alpha)?)
        }
        (suite, Flavor::Float) => {
            let alpha = input::alpha::<f64>(common, default_alpha)?;
            (scalars(&alpha), identities(suite, common, args, &alpha)?)
        }
    };
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    let report = VerifyReport { suite: args.suite, alpha, passed: failed == 0, failed, checks };
    let truncation = args.degree.or(common.truncation);
    emit_json(common, &Envelope::new(format!("verify {}", suite_name(args.suite)), common, truncation, report))?;
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn suite_name(s: VerifySuite) -> String {
    s.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn scalars<F: Field>(alpha: &DirichletParams<F>) -> Vec<Scalar> {
    alpha.alpha().iter().map(Field::to_scalar).collect()
}

fn show<F: Field>(v: &[F]) -> Value {
    serde_json::to_value(v.iter().map(Field::to_scalar).collect::<Vec<_>>()).expect("scalars serialize")
}

/// Exact equality for rationals, a relative `1e-9` for floats.
fn agree<F: Field>(a: &F, b: &F) -> bool {
    match a.flavor() {
        Flavor::Exact => a == b,
        Flavor::Float => (a.to_f64() - b.to_f64()).abs() <= 1e-9 * (1.0 + b.to_f64().abs()),
    }
}

fn mode_of(flavor: Flavor) -> Mode {
    match flavor {
        Flavor::Exact => Mode::Exact,
        Flavor::Float => Mode::Float,
    }
}

/// Interior point with small random integer weights, so every coordinate
/// is a short rational.
pub(crate) fn random_point<F: Field>(d: usize, rng: &mut RngStream) -> SimplexPoint<F> {
    let w: Vec<i64> = (0..d).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = w.iter().sum();
    SimplexPoint::new(w.iter().map(|&k| F::from_ratio(k, total)).collect()).expect("weights sum to one")
}

fn identities<F: Field>(suite: VerifySuite, common: &Common, args: &VerifyArgs, alpha: &DirichletParams<F>) -> CliResult<Vec<Check>> {
    match suite {
        VerifySuite::Orthogonality => orthogonality(common, args, alpha),
        VerifySuite::Gasper => gasper(args, alpha),
        VerifySuite::PdsRoundtrip => pds_roundtrip(common, args, alpha),
        VerifySuite::Zchain | VerifySuite::HahnMixture => unreachable!("Monte Carlo suites run in float"),
    }
}

/// `Q_n(x, Y)` as a polynomial in `Y`.
fn at_x<F: Field>(p: &Poly<F>, x: &SimplexPoint<F>) -> Poly<F> {
    let d = x.dim();
    let subs: Vec<Poly<F>> = (0..2 * d)
        .map(|i| if i < d { Poly::constant(d, x.coords()[i].clone()) } else { Poly::var(d, i - d) })
        .collect();
    p.compose(&subs)
}

fn orthogonality<F: Field>(common: &Common, args: &VerifyArgs, alpha: &DirichletParams<F>) -> CliResult<Vec<Check>> {
    let mode = mode_of(common.flavor);
    let d = alpha.dim();
    let nmax = args.degree.unwrap_or(4);
    let mut rng = RngStream::new(common.seed);
    let pairs: Vec<(SimplexPoint<F>, SimplexPoint<F>)> =
        (0..args.points).map(|_| (random_point(d, &mut rng), random_point(d, &mut rng))).collect();
    let polys = (0..=nmax).map(|n| q_kernel_poly(alpha, n)).collect::<crate::Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    // E_Y[Q_n(x, Y) Q_m(z, Y)] = delta_nm Q_n(x, z)
    let restricted: Vec<(Vec<Poly<F>>, Vec<Poly<F>>)> = pairs
        .iter()
        .map(|(x, z)| (polys.iter().map(|p| at_x(p, x)).collect(), polys.iter().map(|p| at_x(p, z)).collect()))
        .collect();
    let kernels = pairs.iter().map(|(x, z)| q_kernels(alpha, nmax, x, z)).collect::<crate::Result<Vec<_>>>()?;
    for n in 0..=nmax as usize {
        for m in 0..=nmax as usize {
            let witness = pairs.iter().enumerate().find_map(|(i, (x, z))| {
                let lhs = restricted[i].0[n].mul(&restricted[i].1[m]).expect_dirichlet(&[alpha.alpha()]);
                let rhs = if n == m { kernels[i][n].clone() } else { F::zero() };
                (!agree(&lhs, &rhs)).then(|| json!({"x": show(x.coords()), "z": show(z.coords()), "lhs": lhs.to_scalar(), "rhs": rhs.to_scalar()}))
            });
            checks.push(Check::identity(format!("jacobi reproducing n={n} m={m}"), mode, witness));
        }
    }
    // sum_r DM(r) H_n(s, r) H_m(r, t) = delta_nm H_n(s, t), over every s, t
    let size = args.size.unwrap_or(4);
    let hmax = nmax.min(size);
    let ctx = HahnContext::new(alpha.clone(), size);
    let comps: Vec<MultiIndex> = compositions(d, size).collect();
    let dm: Vec<F> = comps.iter().map(|r| dm_pmf(alpha, r)).collect();
    let mut table = Vec::with_capacity(comps.len());
    for s in &comps {
        table.push(comps.iter().map(|r| h_kernels(&ctx, hmax, s, r)).collect::<crate::Result<Vec<_>>>()?);
    }
    for n in 0..=hmax as usize {
        for m in 0..=hmax as usize {
            let mut witness = None;
            'outer: for (i, s) in comps.iter().enumerate() {
                for (j, t) in comps.iter().enumerate() {
                    let lhs = (0..comps.len()).fold(F::zero(), |acc, k| acc + dm[k].clone() * &table[i][k][n] * &table[k][j][m]);
                    let rhs = if n == m { table[i][j][n].clone() } else { F::zero() };
                    if !agree(&lhs, &rhs) {
                        witness = Some(json!({"s": s.parts(), "t": t.parts(), "lhs": lhs.to_scalar(), "rhs": rhs.to_scalar()}));
                        break 'outer;
                    }
                }
            }
            checks.push(Check::identity(format!("hahn reproducing N={size} n={n} m={m}"), mode, witness));
        }
    }
    Ok(checks)
}

fn gasper<F: Field>(args: &VerifyArgs, alpha: &DirichletParams<F>) -> CliResult<Vec<Check>> {
    let mode = mode_of(alpha.total().flavor());
    let size = args.size.unwrap_or(5);
    let nmax = args.degree.unwrap_or(size).min(size);
    let ctx = HahnContext::new(alpha.clone(), size);
    let comps: Vec<MultiIndex> = compositions(alpha.dim(), size).collect();
    let mut checks = Vec::new();
    for n in 0..=nmax {
        let mut witness = None;
        let mut product = None;
        'outer: for r in &comps {
            for s in &comps {
                let xi_form = h_kernel(&ctx, n, r, s)?;
                let chi_form = h_kernel_chi(&ctx, n, r, s)?;
                if !agree(&xi_form, &chi_form) {
                    witness = Some(json!({"r": r.parts(), "s": s.parts(), "xi": xi_form.to_scalar(), "chi": chi_form.to_scalar()}));
                    break 'outer;
                }
                if alpha.dim() == 2 && product.is_none() {
                    let (a, b) = (&alpha.alpha()[0], &alpha.alpha()[1]);
                    let g = u_norm(a, b, size, n)? * gasper_product(a, b, n, r.parts()[0], s.parts()[0], size)?;
                    if !agree(&g, &chi_form) {
                        product = Some(json!({"r": r.parts(), "s": s.parts(), "product": g.to_scalar(), "chi": chi_form.to_scalar()}));
                    }
                }
            }
        }
        checks.push(Check::identity(format!("chi form = xi form N={size} n={n}"), mode, witness));
        if alpha.dim() == 2 {
            checks.push(Check::identity(format!("product formula N={size} n={n}"), mode, product));
        }
    }
    Ok(checks)
}

fn pds_roundtrip<F: Field>(common: &Common, args: &VerifyArgs, alpha: &DirichletParams<F>) -> CliResult<Vec<Check>> {
    let mode = mode_of(common.flavor);
    let theta = alpha.total().clone();
    let support = args.degree.unwrap_or(8);
    let mut rng = RngStream::new(common.seed);
    let weights: Vec<i64> = (0..=support).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let random = DegreeSequence::new(weights.iter().map(|&w| F::from_ratio(w, total)).collect(), "seeded pmf");
    let mut pmfs: Vec<DegreeSequence<F>> = (0..=support).map(crate::pds::dirac_pmf).collect();
    pmfs.push(random.clone());
    let mut checks = Vec::new();
    for pmf in &pmfs {
        let rho = pmf_to_jpds(&theta, pmf, support)?;
        let back = jpds_to_pmf(&theta, &rho)?;
        let got: Vec<F> = (0..=support).map(|m| back.pmf.get(m)).collect();
        let want: Vec<F> = (0..=support).map(|m| pmf.get(m)).collect();
        let witness = got
            .iter()
            .zip(&want)
            .any(|(a, b)| !agree(a, b))
            .then(|| json!({"pmf": show(&want), "recovered": show(&got)}));
        checks.push(Check::identity(format!("round trip {}", pmf.provenance()), mode, witness));
    }
    // the Wright-Fisher image at N passes the exhaustive HPDS scan
    let size = args.size.unwrap_or(4);
    let wf = wf_sequence(theta.to_f64(), 1.0, size)?;
    let wf = DegreeSequence::new(wf.values().iter().map(|&v| F::from_f64(v)).collect(), wf.provenance());
    let report = scan_hpds(alpha, size, &jpds_to_hpds(&theta, size, &wf))?;
    let witness = (!report.is_positive()).then(|| json!({"verdict": report.verdict(), "witness": report.witness()}));
    checks.push(Check::identity(format!("wright-fisher HPDS N={size} ({})", report.verdict()), mode, witness));
    // sum_m d_m xi_m = sum_n rho_n Q_n in this dimension and one other
    let other = DirichletParams::symmetric(&theta, if alpha.dim() == 2 { 3 } else { 2 })?;
    let rho = pmf_to_jpds(&theta, &random, support)?;
    for a in [alpha, &other] {
        let d = a.dim();
        let mut witness = None;
        for _ in 0..args.points {
            let (x, y) = (random_point::<F>(d, &mut rng), random_point::<F>(d, &mut rng));
            let lhs = mixture_density(a, &random, &x, &y)?;
            let rhs = (0..=support).try_fold(F::zero(), |s, n| q_kernel(a, n, &x, &y).map(|k| s + rho.get(n) * k))?;
            if !agree(&lhs, &rhs) {
                witness = Some(json!({"x": show(x.coords()), "y": show(y.coords()), "mixture": lhs.to_scalar(), "series": rhs.to_scalar()}));
                break;
            }
        }
        checks.push(Check::identity(format!("mixture = kernel series d={d}"), mode, witness));
    }
    Ok(checks)
}

fn zchain(common: &Common, args: &VerifyArgs, alpha: &DirichletParams<f64>) -> CliResult<Vec<Check>> {
    let nmax = args.degree.unwrap_or(4);
    let mut rng = RngStream::new(common.seed);
    let mut checks = Vec::new();
    for i in 0..args.points {
        let (x, y) = (random_point::<f64>(alpha.dim(), &mut rng), random_point::<f64>(alpha.dim(), &mut rng));
        let inputs = json!({"x": x.coords(), "y": y.coords()});
        let seed = common.seed.wrapping_add(i as u64);
        for c in verify_kernel_representation(alpha, &x, &y, nmax, args.draws, seed)? {
            checks.push(Check::mc(format!("pair {i} kernel n={}", c.degree), &c, args.z_bound, inputs.clone()));
        }
        for c in verify_z_moments(alpha, &x, &y, args.moments, args.draws, seed ^ 0x5a5a)? {
            checks.push(Check::mc(format!("pair {i} moment m={}", c.degree), &c, args.z_bound, inputs.clone()));
        }
    }
    Ok(checks)
}

fn hahn_mixture(common: &Common, args: &VerifyArgs, alpha: &DirichletParams<f64>) -> CliResult<Vec<Check>> {
    let size = args.size.unwrap_or(4);
    let nmax = args.degree.unwrap_or(size).min(size);
    let comps: Vec<MultiIndex> = compositions(alpha.dim(), size).collect();
    let mut rng = RngStream::new(common.seed);
    let mut checks = Vec::new();
    for i in 0..args.points {
        let r = &comps[rng.random_range(0..comps.len())];
        let s = &comps[rng.random_range(0..comps.len())];
        let inputs = json!({"r": r.parts(), "s": s.parts()});
        for c in verify_hahn_representation(alpha, r, s, nmax, args.draws, common.seed.wrapping_add(i as u64))? {
            checks.push(Check::mc(format!("pair {i} n={}", c.degree), &c, args.z_bound, inputs.clone()));
        }
    }
    Ok(checks)
}
