//! Flag parsing into library types. Everything here fails with a config error.

use super::{CliError, CliResult, Common};
use crate::dist::{DirichletParams, RankedPoint, SimplexPoint};
use crate::numkit::{parse_rational, Field, MultiIndex, PartitionProfile, Rational};
use crate::pds::DegreeSequence;

pub fn rationals(text: &str, what: &str) -> CliResult<Vec<Rational>> {
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(CliError::Config(format!("--{what} is empty")));
    }
    items
        .into_iter()
        .map(|s| parse_rational(s).map_err(|e| CliError::Config(format!("--{what}: {e}"))))
        .collect()
}

pub fn to_field<F: Field>(q: &Rational) -> F {
    F::from_bigint(q.numer()) / F::from_bigint(q.denom())
}

pub fn values<F: Field>(text: &str, what: &str) -> CliResult<Vec<F>> {
    Ok(rationals(text, what)?.iter().map(to_field).collect())
}

pub fn scalar<F: Field>(text: &str, what: &str) -> CliResult<F> {
    let mut v = values::<F>(text, what)?;
    if v.len() != 1 {
        return Err(CliError::Config(format!("--{what} takes a single value")));
    }
    Ok(v.remove(0))
}

pub fn alpha<F: Field>(common: &Common, default: &str) -> CliResult<DirichletParams<F>> {
    let text = common.alpha.as_deref().unwrap_or(default);
    DirichletParams::new(values(text, "alpha")?).map_err(CliError::config)
}

pub fn point<F: Field>(text: &str, what: &str) -> CliResult<SimplexPoint<F>> {
    SimplexPoint::new(values(text, what)?).map_err(|e| CliError::Config(format!("--{what}: {e}")))
}

pub fn ranked<F: Field>(text: &str, what: &str) -> CliResult<RankedPoint<F>> {
    RankedPoint::from_unranked(values(text, what)?).map_err(|e| CliError::Config(format!("--{what}: {e}")))
}

pub fn counts(text: &str, what: &str) -> CliResult<Vec<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| CliError::Config(format!("--{what}: `{s}` is not a count"))))
        .collect()
}

pub fn multi_index(text: &str, what: &str) -> CliResult<MultiIndex> {
    let c = counts(text, what)?;
    if c.is_empty() {
        return Err(CliError::Config(format!("--{what} is empty")));
    }
    Ok(MultiIndex::new(c))
}

pub fn partition(text: &str, what: &str) -> CliResult<PartitionProfile> {
    Ok(PartitionProfile::from_parts(counts(text, what)?))
}

pub fn sequence<F: Field>(text: &str, what: &str) -> CliResult<DegreeSequence<F>> {
    Ok(DegreeSequence::new(values(text, what)?, format!("--{what}")))
}

pub fn require<'a>(v: &'a Option<String>, what: &str) -> CliResult<&'a str> {
    v.as_deref().ok_or_else(|| CliError::Config(format!("--{what} is required")))
}
