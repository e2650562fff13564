use std::fmt::Write as _;

use clap::{Args, ValueEnum};

use super::input::{self, require};
use super::{emit, CliError, CliResult, Common};
use crate::copula::{sample_pair_detailed, CopulaSpec};
use crate::dist::{sample_dirichlet, sample_dm, sample_pd};
use crate::intrep::ZChain;
use crate::numkit::mc::sharded_collect;
use crate::pds::DegreeSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleTarget {
    /// Points of `Dirichlet(alpha)`: columns `x1..xd`.
    Dirichlet,
    /// Counts of `DM(alpha, N)`: columns `r1..rd`.
    Dm,
    /// Ranked Poisson-Dirichlet weights: columns `w1..wK,tail`.
    Pd,
    /// Gibbs copula pairs: columns `x1..xd,y1..yd,m`.
    Copula,
    /// Z-chain endpoint for fixed `x`, `y`: column `z`.
    Zchain,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(value_enum)]
    pub target: SampleTarget,
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
    /// Sample size `N` for `dm`.
    #[arg(long, default_value_t = 10)]
    pub size: u32,
    /// Poisson-Dirichlet parameter.
    #[arg(long, default_value = "1")]
    pub theta: String,
    /// Copula mixing pmf `d_0,d_1,...`; defaults to a point mass at `--m`.
    #[arg(long)]
    pub pmf: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
}

fn header(out: &mut String, prefixes: &[&str], d: usize, extra: &[&str]) {
    let mut cols: Vec<String> = prefixes.iter().flat_map(|p| (1..=d).map(move |i| format!("{p}{i}"))).collect();
    cols.extend(extra.iter().map(|s| s.to_string()));
    out.push_str(&cols.join(","));
    out.push('\n');
}

fn row<T: std::fmt::Display>(out: &mut String, values: impl IntoIterator<Item = T>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        first = false;
        write!(out, "{v}").expect("string write");
    }
    out.push('\n');
}

pub(super) fn run(common: &Common, args: &SampleArgs) -> CliResult<()> {
    let seed = common.seed;
    let n = args.count;
    let mut out = String::new();
    match args.target {
        SampleTarget::Dirichlet => {
            let alpha = input::alpha::<f64>(common, "1,1,1")?;
            header(&mut out, &["x"], alpha.dim(), &[]);
            for x in sharded_collect(n, seed, |rng| sample_dirichlet(&alpha, rng)) {
                row(&mut out, x.coords());
            }
        }
        SampleTarget::Dm => {
            let alpha = input::alpha::<f64>(common, "1,1,1")?;
            header(&mut out, &["r"], alpha.dim(), &[]);
            for r in sharded_collect(n, seed, |rng| sample_dm(&alpha, args.size, rng)) {
                row(&mut out, r.parts());
            }
        }
        SampleTarget::Pd => {
            let theta = input::scalar::<f64>(&args.theta, "theta")?;
            let k = common.truncation.unwrap_or(20) as usize;
            let draws = sharded_collect(n, seed, |rng| sample_pd(theta, k, rng)).into_iter().collect::<crate::Result<Vec<_>>>()?;
            header(&mut out, &["w"], k, &["tail"]);
            for p in draws {
                let mut w = p.padded(k);
                w.push(*p.tail());
                row(&mut out, w);
            }
        }
        SampleTarget::Copula => {
            let alpha = input::alpha::<f64>(common, "1,1")?;
            let spec = match &args.pmf {
                Some(text) => CopulaSpec::new(alpha, DegreeSequence::new(input::values(text, "pmf")?, "--pmf"))?,
                None => CopulaSpec::dirac(alpha, args.m),
            };
            let d = spec.alpha().dim();
            header(&mut out, &["x", "y"], d, &["m"]);
            for p in sharded_collect(n, seed, |rng| sample_pair_detailed(&spec, rng)) {
                let mut v: Vec<String> = p.x.coords().iter().chain(p.y.coords()).map(f64::to_string).collect();
                v.push(p.m.to_string());
                row(&mut out, v);
            }
        }
        SampleTarget::Zchain => {
            let alpha = input::alpha::<f64>(common, "2,2,1")?;
            let x = input::point::<f64>(require(&args.x, "x")?, "x")?;
            let y = input::point::<f64>(require(&args.y, "y")?, "y")?;
            if x.dim() != alpha.dim() || y.dim() != alpha.dim() {
                return Err(CliError::Config(format!("points must have {} coordinates", alpha.dim())));
            }
            let chain = ZChain::new(&alpha)?;
            header(&mut out, &[], 0, &["z"]);
            for z in sharded_collect(n, seed, |rng| chain.sample(x.coords(), y.coords(), rng)) {
                row(&mut out, [z]);
            }
        }
    }
    emit(common, &out)
}
