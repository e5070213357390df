//! The six sweeps. Rows are evaluated on the rayon pool and kept in request order.

use rayon::prelude::*;

use lattice_casimir::lattice::{ChainPairConfig, Lattice2DPairConfig};
use lattice_casimir::limits::{
    casimir_polder_closed, cylinder_energy_per_length, lifshitz_delta_planes, pairwise_energy_chain,
    wire_limit_energy, CylinderPairConfig,
};
use lattice_casimir::numerics::QuadratureSpec;
use lattice_casimir::tgtg::{chain_segments, energy_1d, energy_2d, finite_lattice_energy, richardson_in_inverse_n, EnergyResult};
use lattice_casimir::Error;

use crate::request::{Direction, Geometry, Mode, Request};
use crate::table::{Field, Table};

/// How one row ended.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Failed { kind: &'static str, message: String },
}

impl RowStatus {
    fn from_error(e: &Error) -> Self {
        let kind = match e {
            Error::Domain { .. } => "domain",
            Error::InvalidConfig(_) => "invalid-config",
            Error::Convergence { .. } => "convergence",
            Error::Singularity { .. } => "singularity",
            Error::Validity { .. } => "validity",
            Error::Matrix(_) => "matrix",
        };
        RowStatus::Failed {
            kind,
            message: e.to_string(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Failed { kind, .. } => kind,
        }
    }
}

/// A finished sweep.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub table: Table,
    pub statuses: Vec<RowStatus>,
}

impl Sweep {
    /// 0 on success, 4 if any row failed to converge, 3 if no row succeeded.
    pub fn exit_code(&self) -> i32 {
        if self.statuses.iter().any(|s| s.label() == "convergence") {
            4
        } else if !self.statuses.is_empty() && self.statuses.iter().all(|s| *s != RowStatus::Ok) {
            3
        } else {
            0
        }
    }
}

type Values = Vec<Field>;

fn num(v: f64) -> Field {
    Field::Num(v)
}

fn opt(v: Option<f64>) -> Field {
    v.map_or(Field::Empty, Field::Num)
}

/// Assembles rows of `params ++ values ++ [status]`; a failed row keeps its
/// parameters and leaves `n_values` cells empty.
fn assemble(req: &Request, columns: &[&str], n_values: usize, rows: Vec<(Values, Result<Values, Error>)>) -> Sweep {
    let mut table = Table::new(columns);
    table.metadata = req.metadata.clone();
    let mut statuses = Vec::with_capacity(rows.len());
    for (mut params, result) in rows {
        let status = match result {
            Ok(values) => {
                debug_assert_eq!(values.len(), n_values);
                params.extend(values);
                RowStatus::Ok
            }
            Err(e) => {
                params.extend(std::iter::repeat_n(Field::Empty, n_values));
                RowStatus::from_error(&e)
            }
        };
        params.push(Field::Text(status.label().into()));
        table.rows.push(params);
        statuses.push(status);
    }
    Sweep { table, statuses }
}

fn chain(b: f64, c: f64, g: f64) -> Result<ChainPairConfig, Error> {
    ChainPairConfig::new(1.0, b, c, g)
}

fn energy(req: &Request, b: f64, c: f64, g: f64) -> Result<EnergyResult, Error> {
    match req.geometry {
        Geometry::Chain => energy_1d(&chain(b, c, g)?, &req.numerics),
        Geometry::Lattice2D => energy_2d(&Lattice2DPairConfig::new(1.0, b, [c, 0.0], g)?, &req.numerics),
    }
}

/// Quadrature settings for the cheap one-dimensional limit formulas.
fn limit_quadrature(req: &Request) -> QuadratureSpec {
    let q = req.numerics.quadrature.clone();
    let tol = q.adaptive_tol.min(1e-9);
    q.with_tol(tol)
}

pub fn run(req: &Request) -> Sweep {
    match req.mode {
        Mode::EnergyCurve => energy_curve(req),
        Mode::Displacement => displacement(req),
        Mode::PairwiseCompare => pairwise_compare(req),
        Mode::LimitsCheck => limits_check(req),
        Mode::CylinderOracle => cylinder_oracle(req),
        Mode::FiniteOracle => finite_oracle(req),
    }
}

pub fn energy_curve(req: &Request) -> Sweep {
    let c = req.c[0];
    let grid: Vec<(f64, f64)> = req.g.iter().flat_map(|&g| req.b.iter().map(move |&b| (g, b))).collect();
    let rows = grid
        .par_iter()
        .map(|&(g, b)| {
            let result = energy(req, b, c, g).map(|e| {
                vec![
                    num(e.value),
                    num(e.error_estimate),
                    num(e.diagnostics.max_h2),
                    num(e.diagnostics.xi_panels as f64),
                    num(e.diagnostics.evaluations as f64),
                ]
            });
            (vec![num(g), num(b)], result)
        })
        .collect();
    assemble(
        req,
        &["g_over_a", "b_over_a", "energy", "error_estimate", "max_h2", "xi_panels", "evaluations", "status"],
        5,
        rows,
    )
}

pub fn displacement(req: &Request) -> Sweep {
    let grid: Vec<(f64, f64)> = req.g.iter().flat_map(|&g| req.beta.iter().map(move |&b| (g, b))).collect();
    let references: Vec<Result<EnergyResult, Error>> =
        grid.par_iter().map(|&(g, beta)| energy(req, beta, 0.0, g)).collect();
    let cells: Vec<(usize, f64)> = (0..grid.len()).flat_map(|i| req.c.iter().map(move |&c| (i, c))).collect();
    let rows = cells
        .par_iter()
        .map(|&(i, c)| {
            let (g, beta) = grid[i];
            let result = references[i].clone().and_then(|reference| {
                let e = energy(req, beta, c, g)?;
                Ok(vec![num(e.value), num(e.value / reference.value), num(e.error_estimate)])
            });
            (vec![num(g), num(beta), num(c)], result)
        })
        .collect();
    assemble(
        req,
        &["g_over_a", "beta", "c_over_a", "energy", "eta", "error_estimate", "status"],
        3,
        rows,
    )
}

pub fn pairwise_compare(req: &Request) -> Sweep {
    let grid: Vec<(f64, f64)> = req.g.iter().flat_map(|&g| req.b.iter().map(move |&b| (g, b))).collect();
    let rows = grid
        .par_iter()
        .map(|&(g, b)| {
            let result = (|| {
                let cfg = chain(b, 0.0, g)?;
                let exact = energy_1d(&cfg, &req.numerics)?;
                let pw = pairwise_energy_chain(&cfg, req.n_terms)?;
                Ok(vec![num(exact.value), num(pw), num(pw / exact.value), num(exact.error_estimate)])
            })();
            (vec![num(g), num(b)], result)
        })
        .collect();
    assemble(
        req,
        &["g_over_a", "b_over_a", "e_exact", "e_pairwise", "ratio", "error_estimate", "status"],
        4,
        rows,
    )
}

pub fn limits_check(req: &Request) -> Sweep {
    let direction = req.direction.unwrap_or(Direction::ToZero);
    let quad = limit_quadrature(req);
    let grid: Vec<(f64, f64)> =
        req.g.iter().flat_map(|&g| req.a_over_b.iter().map(move |&r| (g, r))).collect();
    let rows = grid
        .par_iter()
        .map(|&(g, ratio)| {
            // a = 1, so b = 1 / ratio and the energy per cell is per length or area
            let b = 1.0 / ratio;
            let result = (|| {
                let full = energy(req, b, 0.0, g)?;
                let limit = match (direction, req.geometry) {
                    (Direction::ToInfinity, _) => casimir_polder_closed(g, b)?,
                    (Direction::ToZero, Geometry::Lattice2D) => lifshitz_delta_planes(g, b, &quad)?,
                    (Direction::ToZero, Geometry::Chain) => wire_limit_energy(1.0, b, &quad)?.value,
                };
                Ok(vec![num(full.value), num(limit), num(full.value / limit), num(full.error_estimate)])
            })();
            (vec![num(g), num(ratio)], result)
        })
        .collect();
    assemble(
        req,
        &["g_over_a", "a_over_b", "e_full", "e_limit", "ratio", "error_estimate", "status"],
        4,
        rows,
    )
}

pub fn cylinder_oracle(req: &Request) -> Sweep {
    let quad = &req.numerics.quadrature;
    let rows = req
        .r_over_d
        .par_iter()
        .map(|&r| {
            let result = (|| {
                let cfg = CylinderPairConfig::new(r, 1.0, req.g_r / r)?;
                let e = cylinder_energy_per_length(&cfg, quad)?;
                let asymptote = cfg.asymptote();
                Ok(vec![
                    num(e.value),
                    num(asymptote),
                    num(e.value / asymptote),
                    num(e.lmax as f64),
                    num(if e.converged { 1.0 } else { 0.0 }),
                    num(quad.adaptive_tol * e.value.abs()),
                ])
            })();
            (vec![num(r), num(req.g_r)], result)
        })
        .collect();
    let mut sweep = assemble(
        req,
        &[
            "r_over_d",
            "g_r",
            "e_cylinder",
            "e_asymptote",
            "ratio",
            "lmax",
            "lmax_converged",
            "error_estimate",
            "status",
        ],
        6,
        rows,
    );
    // an infinite coupling is a parameter, not a value; keep it readable
    if req.g_r.is_infinite() {
        for row in &mut sweep.table.rows {
            row[1] = Field::Text("inf".into());
        }
    }
    sweep
}

pub fn finite_oracle(req: &Request) -> Sweep {
    let (g, b, c) = (req.g[0], req.b[0], req.c[0]);
    let quad = &req.numerics.quadrature;
    let per_cell: Vec<Result<f64, Error>> = req
        .sites
        .par_iter()
        .map(|&n| {
            let cfg = chain(b, c, g)?;
            Ok(finite_lattice_energy(&chain_segments(&cfg, n), quad, true)? / n as f64)
        })
        .collect();
    let momentum = chain(b, c, g).and_then(|cfg| energy_1d(&cfg, &req.numerics));
    let points: Vec<(usize, f64)> = req
        .sites
        .iter()
        .zip(&per_cell)
        .filter_map(|(&n, e)| e.as_ref().ok().map(|&e| (n, e)))
        .collect();
    let extrapolated = (points.len() >= 2).then(|| richardson_in_inverse_n(&points));
    let rows = req
        .sites
        .iter()
        .zip(per_cell)
        .map(|(&n, e)| {
            let result = e.and_then(|e| {
                let exact = momentum.clone()?.value;
                let rel = extrapolated.map(|x| ((x - exact) / exact).abs());
                Ok(vec![num(e), opt(extrapolated), num(exact), opt(rel), num(quad.adaptive_tol * e.abs())])
            });
            (vec![num(n as f64), num(g), num(b)], result)
        })
        .collect();
    assemble(
        req,
        &[
            "n_sites",
            "g_over_a",
            "b_over_a",
            "e_per_cell",
            "e_extrapolated",
            "e_momentum",
            "rel_diff",
            "error_estimate",
            "status",
        ],
        5,
        rows,
    )
}
