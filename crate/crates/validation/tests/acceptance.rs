//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use lattice_casimir::lattice::{ChainPairConfig, Lattice2DPairConfig, NumericsSpec};
use lattice_casimir::limits::{
    casimir_polder_closed, casimir_polder_two_point, cylinder_energy_per_length, lifshitz_delta_planes,
    pairwise_energy_chain, wire_limit_energy, CylinderPairConfig,
};
use lattice_casimir::numerics::QuadratureSpec;
use lattice_casimir::tgtg::{chain_segments, energy_1d, energy_2d, finite_lattice_energy, richardson_in_inverse_n};
use lattice_casimir::{Error, Result};
use lattice_casimir_validation::{approaches_one, rel, run, Outcome};

fn chain(a: f64, b: f64, c: f64, g: f64) -> Result<ChainPairConfig> {
    ChainPairConfig::new(a, b, c, g)
}

fn lattice(b: f64, g: f64) -> Result<Lattice2DPairConfig> {
    Lattice2DPairConfig::new(1.0, b, [0.0, 0.0], g)
}

/// Lattice runs only need percent-level accuracy here.
fn lattice_numerics(tol: f64) -> NumericsSpec {
    let mut n = NumericsSpec::lattice2d();
    n.quadrature = n.quadrature.with_orders(16, 16).with_tol(tol);
    n
}

fn chain_numerics(tol: f64) -> NumericsSpec {
    let mut n = NumericsSpec::chain();
    n.quadrature = n.quadrature.with_tol(tol);
    n
}

fn e1(cfg: &ChainPairConfig, n: &NumericsSpec) -> Result<f64> {
    Ok(energy_1d(cfg, n)?.value)
}

fn e2(cfg: &Lattice2DPairConfig, n: &NumericsSpec) -> Result<f64> {
    Ok(energy_2d(cfg, n)?.value)
}

fn casimir_polder_grid() -> Result<(bool, String)> {
    let start = Instant::now();
    let quad = QuadratureSpec::default().with_orders(64, 8).with_tol(1e-12);
    let mut worst: f64 = 0.0;
    for &d in &[0.1, 0.3, 1.0, 3.0, 10.0] {
        for &x in &[0.001, 0.01, 0.1, 0.3, 0.5] {
            let g = 4.0 * PI * d * x;
            let q = casimir_polder_two_point(g, d, &quad)?;
            worst = worst.max(rel(q, casimir_polder_closed(g, d)?));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst < 1e-8 && secs < 1.0,
        format!("max rel dev {worst:.2e} (tol 1e-8), {secs:.3} s (limit 1 s)"),
    ))
}

fn finite_oracle() -> Result<(bool, String)> {
    let start = Instant::now();
    let cfg = chain(1.0, 1.0, 0.0, 0.1)?;
    let quad = QuadratureSpec::default().with_orders(32, 8).with_tol(1e-9);
    let mut points = Vec::new();
    for &n in &[51usize, 101, 201] {
        let e = finite_lattice_energy(&chain_segments(&cfg, n), &quad, true)?;
        points.push((n, e / n as f64));
    }
    let extrapolated = richardson_in_inverse_n(&points);
    let exact = e1(&cfg, &chain_numerics(1e-8))?;
    let dev = rel(extrapolated, exact);
    let secs = start.elapsed().as_secs_f64();
    Ok((
        dev < 1e-2 && secs < 120.0,
        format!(
            "per cell {:.6e} {:.6e} {:.6e}, extrapolated {extrapolated:.6e} vs {exact:.6e}, rel {dev:.2e} (tol 1e-2), {secs:.1} s",
            points[0].1, points[1].1, points[2].1
        ),
    ))
}

fn short_separation() -> Result<(bool, String)> {
    let (d, g) = (0.01, 0.1);
    let cp = casimir_polder_closed(g, d)?;
    let ec = e1(&chain(1.0, d, 0.0, g)?, &chain_numerics(1e-6))?;
    let el = e2(&lattice(d, g)?, &lattice_numerics(1e-4))?;
    let (rc, rl) = (rel(ec, cp), rel(el, cp));
    Ok((
        rc < 1e-2 && rl < 1e-2,
        format!("a/d=100, g/a=0.1: chain rel {rc:.2e}, lattice rel {rl:.2e} vs two-point {cp:.6e} (tol 1e-2)"),
    ))
}

fn plane_limit() -> Result<(bool, String)> {
    // a = 1, so the energy per cell is the energy per area and g_area = g
    let (b, g) = (20.0, 0.01);
    let e = e2(&lattice(b, g)?, &lattice_numerics(1e-4))?;
    let planes = lifshitz_delta_planes(g, b, &QuadratureSpec::default().with_tol(1e-9))?;
    let dev = rel(e, planes);
    Ok((
        dev < 2e-2,
        format!("a/b=0.05, g/a=0.01: {e:.6e} vs planes {planes:.6e}, rel {dev:.2e} (tol 2e-2)"),
    ))
}

fn wire_limit() -> Result<(bool, String)> {
    // strongest coupling that keeps phi~ positive on the whole zone, where the
    // coupling term 1/g is smallest next to the logarithm the limit keeps
    let g_over_a = 0.95 * 2.0 * PI / 2f64.ln();
    let quad = QuadratureSpec::default().with_tol(1e-9);
    let mut chain_ratio = Vec::new();
    let mut wire_ratio = Vec::new();
    for &ab in &[0.1, 0.03, 0.01] {
        let w = wire_limit_energy(ab, 1.0, &quad)?;
        let e = e1(&chain(ab, 1.0, 0.0, g_over_a * ab)?, &chain_numerics(1e-6))? / ab;
        chain_ratio.push(e / w.value);
        wire_ratio.push(w.value / w.asymptote);
    }
    let ok = approaches_one(&chain_ratio)
        && approaches_one(&wire_ratio)
        && (chain_ratio[2] - 1.0).abs() < 0.1;
    Ok((
        ok,
        format!(
            "a/b=0.1,0.03,0.01: chain/wire {:.4} {:.4} {:.4} (tol 0.1 at 0.01), wire/asymptote {:.4} {:.4} {:.4}",
            chain_ratio[0], chain_ratio[1], chain_ratio[2], wire_ratio[0], wire_ratio[1], wire_ratio[2]
        ),
    ))
}

fn cylinder_oracle() -> Result<(bool, String)> {
    // Dirichlet shells, the coupling that brings the energy closest to the asymptote
    let quad = QuadratureSpec::default().with_orders(32, 8).with_tol(1e-8);
    let mut ratios = Vec::new();
    let mut lmax = Vec::new();
    for &r in &[1e-2, 1e-3, 1e-4] {
        let cfg = CylinderPairConfig::new(r, 1.0, f64::INFINITY)?;
        let e = cylinder_energy_per_length(&cfg, &quad)?;
        if !e.converged {
            return Ok((false, format!("lmax did not converge at R/d={r}")));
        }
        ratios.push(e.value / cfg.asymptote());
        lmax.push(e.lmax);
    }
    let ok = approaches_one(&ratios) && (ratios[2] - 1.0).abs() < 0.15;
    Ok((
        ok,
        format!(
            "R/d=1e-2,1e-3,1e-4: ratio {:.4} {:.4} {:.4} (tol 0.15 at 1e-4), lmax {lmax:?}",
            ratios[0], ratios[1], ratios[2]
        ),
    ))
}

fn pairwise() -> Result<(bool, String)> {
    let g = 0.1;
    let n = NumericsSpec::chain();
    let near = chain(1.0, 0.05, 0.0, g)?;
    let dev = rel(pairwise_energy_chain(&near, 1000)?, e1(&near, &n)?);
    let mut over = true;
    let mut worst = f64::INFINITY;
    for i in 0..7 {
        let b = 0.5 + 0.25 * i as f64;
        let cfg = chain(1.0, b, 0.0, g)?;
        let ratio = pairwise_energy_chain(&cfg, 1000)?.abs() / e1(&cfg, &n)?.abs();
        over &= ratio > 1.0;
        worst = worst.min(ratio);
    }
    Ok((
        dev < 2e-2 && over,
        format!("b/a=0.05 rel {dev:.2e} (tol 2e-2); b/a in [0.5,2]: min |E_pw|/|E| = {worst:.4} (needs > 1)"),
    ))
}

fn displacement() -> Result<(bool, String)> {
    let n = chain_numerics(1e-8);
    let shifts: Vec<f64> = (0..10).map(|i| 0.1 * i as f64).collect();
    let eta = |beta: f64| -> Result<Vec<f64>> {
        let base = e1(&chain(1.0, beta, 0.0, 0.1)?, &n)?;
        shifts.iter().map(|&c| Ok(e1(&chain(1.0, beta, c, 0.1)?, &n)? / base)).collect()
    };
    let (low, high) = (eta(0.1)?, eta(0.6)?);
    let mut origin: f64 = 0.0;
    let mut mirror: f64 = 0.0;
    for curve in [&low, &high] {
        origin = origin.max((curve[0] - 1.0).abs());
        for i in 1..10 {
            mirror = mirror.max((curve[i] - curve[10 - i]).abs());
        }
    }
    let ordered = (1..10).all(|i| (1.0 - high[i]).abs() < (1.0 - low[i]).abs());
    Ok((
        origin < 1e-6 && mirror < 1e-6 && ordered,
        format!(
            "|eta(0)-1| {origin:.1e}, max |eta(c)-eta(a-c)| {mirror:.1e} (tol 1e-6), eta(a/2) beta=0.1 {:.4} beta=0.6 {:.4}, ordered {ordered}",
            low[5], high[5]
        ),
    ))
}

fn structure() -> Result<(bool, String)> {
    let n = chain_numerics(1e-8);
    let chain_curve: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&b| e1(&chain(1.0, b, 0.0, 0.1)?, &n))
        .collect::<Result<_>>()?;
    let ln = lattice_numerics(1e-4);
    let lattice_curve: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&b| e2(&lattice(b, 0.1)?, &ln))
        .collect::<Result<_>>()?;
    let mut sign_and_order = true;
    for curve in [&chain_curve, &lattice_curve] {
        sign_and_order &= curve.iter().all(|&e| e < 0.0);
        sign_and_order &= curve.windows(2).all(|w| w[1].abs() < w[0].abs());
    }

    let pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))
    };
    let c = chain(1.0, 0.7, 0.3, 0.1)?;
    let l = Lattice2DPairConfig::new(1.0, 1.0, [0.25, 0.0], 0.1)?;
    let coarse = lattice_numerics(1e-3);
    let single = pool(1)?.install(|| -> Result<_> { Ok((e1(&c, &n)?, e2(&l, &coarse)?)) })?;
    let many = pool(4)?.install(|| -> Result<_> { Ok((e1(&c, &n)?, e2(&l, &coarse)?)) })?;
    let identical = single.0.to_bits() == many.0.to_bits() && single.1.to_bits() == many.1.to_bits();

    let mut doubled = n.clone();
    doubled.truncation.n_recip *= 2;
    let mut doubled_l = coarse.clone();
    doubled_l.truncation.n_recip *= 2;
    let shift_c = rel(e1(&c, &doubled)?, single.0);
    let shift_l = rel(e2(&l, &doubled_l)?, single.1);
    let stable = shift_c < 1e-6 && shift_l < 1e-6;

    Ok((
        sign_and_order && identical && stable,
        format!(
            "negative and |E| decreasing in b: {sign_and_order}; 1 vs 4 threads bit-identical: {identical}; n_recip doubling rel change chain {shift_c:.1e}, lattice {shift_l:.1e} (tol 1e-6)"
        ),
    ))
}

fn main() -> ExitCode {
    let outcomes: Vec<Outcome> = vec![
        run(1, "two-point closed form", casimir_polder_grid),
        run(2, "position-space oracle", finite_oracle),
        run(3, "short-separation limit", short_separation),
        run(4, "plane limit", plane_limit),
        run(5, "chain wire limit", wire_limit),
        run(6, "cylinder oracle", cylinder_oracle),
        run(7, "pairwise summation", pairwise),
        run(8, "lateral displacement", displacement),
        run(9, "structural invariants", structure),
    ];
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
