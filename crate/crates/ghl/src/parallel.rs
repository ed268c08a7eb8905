//! Deterministic parallel drivers over the core's per-sigma slices.
//!
//! Every driver fans work out with rayon and reduces with `Chain::merge`,
//! which adds exact rationals keyed by canonical cell. Addition of exact
//! values is associative and commutative, so the reduced chain is identical
//! for every worker count and schedule; determinism is checked in the test
//! suite by comparing 1-worker and many-worker runs byte for byte.

use ghl_core::complex::Chain;
use ghl_core::morita::{Sigma, VertexOrientedGraph};
use ghl_core::stab::{self, StabContext};
use rayon::prelude::*;

use crate::config::{check_memory_cap, RunConfig};
use crate::{CliError, CliResult};

fn reduce_chains(mut chains: Vec<Chain>) -> CliResult<Chain> {
    let Some(mut acc) = chains.pop() else {
        return Err(CliError::BadInput("nothing to reduce".into()));
    };
    for c in chains {
        acc.merge(c).map_err(CliError::Core)?;
    }
    Ok(acc)
}

fn par_sum_sigma(
    cfg: &RunConfig,
    sigmas: &[Sigma],
    f: impl Fn(&Sigma) -> ghl_core::Result<Chain> + Sync,
) -> CliResult<Chain> {
    let pool = cfg.pool();
    let chains: Result<Vec<Chain>, CliError> = pool.install(|| {
        sigmas
            .par_iter()
            .map(|s| {
                check_memory_cap()?;
                f(s).map_err(CliError::Core)
            })
            .collect()
    });
    reduce_chains(chains?)
}

/// `z(gamma)`, parallel over permutation families.
pub fn z_parallel(
    cfg: &RunConfig,
    gamma: &VertexOrientedGraph,
    basepointed: bool,
    base: Option<u32>,
) -> CliResult<Chain> {
    let base = if basepointed {
        Some(base.unwrap_or(0))
    } else {
        None
    };
    let sigmas = ghl_core::morita::sigma_families(gamma);
    par_sum_sigma(cfg, &sigmas, |s| {
        ghl_core::morita::z_for_sigma(gamma, s, base)
    })
}

/// The stabilized cycle, built through the stabilization map.
pub fn z_plus_parallel(cfg: &RunConfig, ctx: &StabContext) -> CliResult<Chain> {
    let z = z_parallel(cfg, ctx.gamma(), true, Some(ctx.base()))?;
    stab::stabilize(&z).map_err(CliError::Core)
}

/// The bounding chain `W`, parallel over permutation families.
pub fn w_parallel(cfg: &RunConfig, ctx: &StabContext) -> CliResult<Chain> {
    let sigmas = ctx.sigmas();
    par_sum_sigma(cfg, &sigmas, |s| stab::w_for_sigma(ctx, s))
}

/// Any single stab builder, parallel over permutation families.
pub fn stab_builder_parallel(
    cfg: &RunConfig,
    ctx: &StabContext,
    f: impl Fn(&StabContext, &Sigma) -> ghl_core::Result<Chain> + Sync,
) -> CliResult<Chain> {
    let sigmas = ctx.sigmas();
    par_sum_sigma(cfg, &sigmas, |s| f(ctx, s))
}

/// Which boundary or coboundary to apply in parallel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainOp {
    DR,
    DC,
    Boundary,
    DeltaR,
    DeltaC,
}

/// Applies an operator term by term across the pool and reduces.
pub fn chain_op_parallel(cfg: &RunConfig, chain: &Chain, op: ChainOp) -> CliResult<Chain> {
    let terms: Vec<(ghl_core::canon::CellKey, ghl_core::Rat)> = chain
        .terms()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let out_dim = match op {
        ChainOp::DR | ChainOp::DC | ChainOp::Boundary => chain.dim().saturating_sub(1),
        ChainOp::DeltaR | ChainOp::DeltaC => chain.dim() + 1,
    };
    if terms.is_empty() {
        return Ok(Chain::zero(chain.rank(), chain.variant(), out_dim));
    }
    let pool = cfg.pool();
    let chunk = terms.len().div_ceil(4 * cfg.workers.max(1));
    let chains: Result<Vec<Chain>, CliError> = pool.install(|| {
        terms
            .par_chunks(chunk.max(1))
            .map(|part| {
                check_memory_cap()?;
                let sub = Chain::from_terms(
                    chain.rank(),
                    chain.variant(),
                    chain.dim(),
                    part.iter().cloned(),
                )
                .map_err(CliError::Core)?;
                Ok(match op {
                    ChainOp::DR => sub.d_r(),
                    ChainOp::DC => sub.d_c(),
                    ChainOp::Boundary => sub.boundary(),
                    ChainOp::DeltaR => sub.delta_r(),
                    ChainOp::DeltaC => sub.delta_c(),
                })
            })
            .collect()
    });
    reduce_chains(chains?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghl_core::fixtures;

    #[test]
    fn worker_count_does_not_change_results() {
        let gamma = fixtures::gamma_theta();
        let one = RunConfig {
            workers: 1,
            ..RunConfig::default()
        };
        let many = RunConfig {
            workers: 8,
            ..RunConfig::default()
        };
        let a = z_parallel(&one, &gamma, false, None).unwrap();
        let b = z_parallel(&many, &gamma, false, None).unwrap();
        assert_eq!(a, b);
        let sequential = ghl_core::morita::z(&gamma, false, None).unwrap();
        assert_eq!(a, sequential);

        let da = chain_op_parallel(&one, &a, ChainOp::DeltaR).unwrap();
        let db = chain_op_parallel(&many, &a, ChainOp::DeltaR).unwrap();
        assert_eq!(da, db);
        assert_eq!(da, a.delta_r());
    }
}
