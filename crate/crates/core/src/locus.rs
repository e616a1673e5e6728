//! Searches over the whole domain: the parabolic curve `Δ = 0` by marching
//! squares, and inflection points `Δ = κ = 0`.

use std::collections::BTreeMap;

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{hessian_of_delta, InflectionType, ToleranceSet};
use crate::localgeom::{invariant_gradients, local_invariants, GeomError, SurfaceSpec};

pub const MIN_RES: usize = 16;
pub const MAX_RES: usize = 4096;
pub const DEFAULT_RES: usize = 256;
pub const BISECTION_STEPS: usize = 40;
/// Cells whose corners all satisfy `|Δ| ≤ FLAT_TOL·‖ℳ‖⁴` are degenerate.
pub const FLAT_TOL: f64 = 1e-9;
pub const SEED_TOL: f64 = 1e-3;
pub const NEWTON_MAX_ITER: usize = 25;
/// Acceptance on `max(|Δ|/‖ℳ‖⁴, |κ|/‖ℳ‖²)`.
pub const NEWTON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocusError {
    #[error("resolution {0} outside [{MIN_RES}, {MAX_RES}]")]
    Resolution(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Δ, κ and `‖ℳ‖` at a grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeSample {
    pub x: f64,
    pub y: f64,
    pub delta: f64,
    pub kappa: f64,
    pub scale: f64,
}

fn sample(surface: &SurfaceSpec, x: f64, y: f64) -> Result<NodeSample, GeomError> {
    let inv = local_invariants(surface, x, y)?;
    Ok(NodeSample {
        x,
        y,
        delta: inv.delta,
        kappa: inv.kappa,
        scale: inv.sff.norm(),
    })
}

fn check_res(res: usize) -> Result<(), LocusError> {
    if (MIN_RES..=MAX_RES).contains(&res) {
        Ok(())
    } else {
        Err(LocusError::Resolution(res))
    }
}

/// Samples the `res × res` lattice, row-major from `(xmin, ymin)` with `x`
/// varying fastest. Runs on the current rayon pool.
pub fn sample_grid(surface: &SurfaceSpec, res: usize) -> Result<Vec<NodeSample>, LocusError> {
    check_res(res)?;
    let d = surface.domain;
    (0..res * res)
        .into_par_iter()
        .map(|k| {
            let (x, y) = d.node(res, k % res, k / res);
            sample(surface, x, y)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(LocusError::from)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    /// `|Δ|` at each vertex.
    pub residuals: Vec<f64>,
    /// Last vertex connects back to the first (not repeated in `points`).
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolylineSet {
    pub polylines: Vec<Polyline>,
    /// Cells `(i, j)` where Δ vanishes identically at all corners.
    pub degenerate_cells: Vec<(usize, usize)>,
}

/// Lattice edge: `(vertical, i, j)` starting at node `(i, j)`.
type EdgeId = (bool, usize, usize);

fn positive(s: &NodeSample) -> bool {
    s.delta > 0.0
}

fn flat(s: &NodeSample) -> bool {
    s.delta.abs() <= FLAT_TOL * s.scale.powi(4)
}

/// Bisection for the sign change of Δ between two nodes.
fn refine(surface: &SurfaceSpec, p: &NodeSample, q: &NodeSample) -> Result<(f64, f64, f64), GeomError> {
    let (mut lo, mut hi) = ((p.x, p.y, p.delta), (q.x, q.y, q.delta));
    let lo_pos = positive(p);
    for _ in 0..BISECTION_STEPS {
        let (mx, my) = (0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1));
        let m = sample(surface, mx, my)?;
        if positive(&m) == lo_pos {
            lo = (mx, my, m.delta);
        } else {
            hi = (mx, my, m.delta);
        }
    }
    let best = if lo.2.abs() <= hi.2.abs() { lo } else { hi };
    Ok((best.0, best.1, best.2.abs()))
}

/// Marching squares on the sampled Δ field with bisection-refined crossings.
pub fn trace_parabolic(surface: &SurfaceSpec, res: usize) -> Result<PolylineSet, LocusError> {
    let grid = sample_grid(surface, res)?;
    let node = |i: usize, j: usize| &grid[j * res + i];
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    let mut degenerate_cells = Vec::new();

    for j in 0..res - 1 {
        for i in 0..res - 1 {
            let c = [node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)];
            if c.iter().all(|s| flat(s)) {
                degenerate_cells.push((i, j));
                continue;
            }
            let s: Vec<bool> = c.iter().map(|n| positive(n)).collect();
            let bottom = (false, i, j);
            let right = (true, i + 1, j);
            let top = (false, i, j + 1);
            let left = (true, i, j);
            // edges between corners k and k+1
            let edges = [bottom, right, top, left];
            let crossing: Vec<usize> = (0..4).filter(|&k| s[k] != s[(k + 1) % 4]).collect();
            match crossing.len() {
                2 => segments.push((edges[crossing[0]], edges[crossing[1]])),
                4 => {
                    let (cx, cy) = (0.5 * (c[0].x + c[2].x), 0.5 * (c[0].y + c[2].y));
                    let centre = positive(&sample(surface, cx, cy)?);
                    // cut off the corners whose sign differs from the centre
                    if s[0] != centre {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    }
                }
                _ => {}
            }
        }
    }

    // refine each crossing once
    let mut ids: Vec<EdgeId> = segments.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort();
    ids.dedup();
    let refined: Vec<(f64, f64, f64)> = ids
        .par_iter()
        .map(|&(vertical, i, j)| {
            let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
            refine(surface, node(i, j), node(i2, j2))
        })
        .collect::<Result<_, _>>()?;
    let crossings: BTreeMap<EdgeId, (f64, f64, f64)> = ids.into_iter().zip(refined).collect();

    let polylines = link(&segments)
        .into_iter()
        .map(|(edges, closed)| {
            let pts: Vec<_> = edges.iter().map(|e| crossings[e]).collect();
            Polyline {
                points: pts.iter().map(|p| (p.0, p.1)).collect(),
                residuals: pts.iter().map(|p| p.2).collect(),
                closed,
            }
        })
        .collect();
    Ok(PolylineSet {
        polylines,
        degenerate_cells,
    })
}

/// Chains segments sharing an edge into polylines; open chains first start
/// at an endpoint, in segment order.
fn link(segments: &[(EdgeId, EdgeId)]) -> Vec<(Vec<EdgeId>, bool)> {
    let mut incident: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start_seg: usize, start_edge: EdgeId, used: &mut [bool]| {
        let mut chain = vec![start_edge];
        let mut seg = start_seg;
        let mut at = start_edge;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            chain.push(next);
            at = next;
            match incident[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        let closed = chain.len() > 2 && chain.first() == chain.last();
        if closed {
            chain.pop();
        }
        (chain, closed)
    };

    for (k, &(a, b)) in segments.iter().enumerate() {
        if used[k] {
            continue;
        }
        if incident[&a].len() == 1 {
            out.push(walk(k, a, &mut used));
        } else if incident[&b].len() == 1 {
            out.push(walk(k, b, &mut used));
        }
    }
    for (k, &(a, _)) in segments.iter().enumerate() {
        if !used[k] {
            out.push(walk(k, a, &mut used));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflectionReport {
    pub x: f64,
    pub y: f64,
    pub kind: InflectionType,
    pub k: f64,
    pub det_h_delta: f64,
    /// `max(|Δ|/‖ℳ‖⁴, |κ|/‖ℳ‖²)` at the reported point.
    pub residual: f64,
}

/// Gauss-Newton on the 𝔑 coefficients, which vanish exactly where Δ and κ
/// do (κ is their outer sum, Δ a quadratic in them) and keep a full-rank
/// Jacobian at generic inflections.
fn polish(surface: &SurfaceSpec, x0: f64, y0: f64) -> Option<(f64, f64, f64)> {
    let d = surface.domain;
    let (mut x, mut y) = (x0, y0);
    for _ in 0..=NEWTON_MAX_ITER {
        let g = invariant_gradients(surface, x, y).ok()?;
        let sff = g.sff;
        let s2: f64 = [sff.a, sff.b, sff.c, sff.e, sff.f, sff.g]
            .iter()
            .map(|j| j.v * j.v)
            .sum();
        if !(s2 > 0.0) {
            return None;
        }
        let residual = (g.delta.v.abs() / (s2 * s2)).max(g.kappa.v.abs() / s2);
        if residual <= NEWTON_TOL {
            return Some((x, y, residual));
        }
        let mut jtj = Matrix2::zeros();
        let mut jtr = Vector2::zeros();
        for c in g.nq {
            let row = Vector2::new(c.dx, c.dy);
            jtj += row * row.transpose();
            jtr += row * c.v;
        }
        let step = jtj.lu().solve(&jtr)?;
        x -= step.x;
        y -= step.y;
        if !d.contains(x, y) || !x.is_finite() || !y.is_finite() {
            return None;
        }
    }
    None
}

/// Inflection points seeded from grid nodes where `|Δ|` and `|κ|` are small
/// (relative to `‖ℳ‖` plus their variation over the neighbouring nodes) and
/// locally minimal, then polished and deduplicated within one cell.
pub fn find_inflections(surface: &SurfaceSpec, res: usize) -> Result<Vec<InflectionReport>, LocusError> {
    let grid = sample_grid(surface, res)?;
    let idx = |i: usize, j: usize| j * res + i;
    let mut seeds = Vec::new();
    for j in 0..res {
        for i in 0..res {
            let s = &grid[idx(i, j)];
            let s2 = s.scale * s.scale;
            if !(s2 > 0.0) {
                continue;
            }
            // widen the thresholds by the sampled variation so that zeros
            // between nodes are not missed on coarse grids
            let neighbours: Vec<&NodeSample> = (-1i64..=1)
                .flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)))
                .filter(|&d| d != (0, 0))
                .map(|(di, dj)| (i as i64 + di, j as i64 + dj))
                .filter(|&(ni, nj)| ni >= 0 && nj >= 0 && ni < res as i64 && nj < res as i64)
                .map(|(ni, nj)| &grid[idx(ni as usize, nj as usize)])
                .collect();
            let dvar = neighbours.iter().fold(0.0f64, |m, n| m.max((n.delta - s.delta).abs()));
            let kvar = neighbours.iter().fold(0.0f64, |m, n| m.max((n.kappa - s.kappa).abs()));
            if s.delta.abs() > SEED_TOL * s2 * s2 + dvar || s.kappa.abs() > SEED_TOL * s2 + kvar {
                continue;
            }
            // local minimum of the merit with each term weighted by its
            // variation over the stencil
            let merit = |n: &NodeSample| {
                (n.delta / dvar.max(f64::MIN_POSITIVE)).powi(2) + (n.kappa / kvar.max(f64::MIN_POSITIVE)).powi(2)
            };
            let m = merit(s);
            if neighbours.iter().all(|n| !(n.scale > 0.0) || merit(n) >= m) {
                seeds.push((s.x, s.y));
            }
        }
    }

    let polished: Vec<Option<(f64, f64, f64)>> = seeds.par_iter().map(|&(x, y)| polish(surface, x, y)).collect();
    let d = surface.domain;
    let cell = ((d.xmax - d.xmin) / (res - 1) as f64).max((d.ymax - d.ymin) / (res - 1) as f64);
    let mut found: Vec<(f64, f64, f64)> = Vec::new();
    for p in polished.into_iter().flatten() {
        if let Some(q) = found
            .iter_mut()
            .find(|q| (q.0 - p.0).hypot(q.1 - p.1) <= cell)
        {
            if p.2 < q.2 {
                *q = p;
            }
        } else {
            found.push(p);
        }
    }
    found.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));

    let tol = ToleranceSet::default();
    found
        .into_iter()
        .map(|(x, y, residual)| {
            let inv = local_invariants(surface, x, y)?;
            let h = hessian_of_delta(surface, x, y)?;
            let scale = inv.sff.norm();
            Ok(InflectionReport {
                x,
                y,
                kind: InflectionType::from_curvature(inv.k, tol.quadratic_tol(scale)),
                k: inv.k,
                det_h_delta: h.determinant(),
                residual,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localgeom::Domain;

    fn surface(phi: &str, psi: &str) -> SurfaceSpec {
        SurfaceSpec::parse(phi, psi, Domain::new(-0.5, 0.5, -0.5, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn resolution_bounds() {
        let s = surface("0", "0");
        assert_eq!(trace_parabolic(&s, 15), Err(LocusError::Resolution(15)));
        assert_eq!(find_inflections(&s, 4097), Err(LocusError::Resolution(4097)));
    }

    #[test]
    fn umbilic_has_no_parabolic_curve() {
        let set = trace_parabolic(&surface("x^2 - y^2", "2*x*y"), 64).unwrap();
        assert!(set.polylines.is_empty());
        assert!(set.degenerate_cells.is_empty());
        assert!(find_inflections(&surface("x^2 - y^2", "2*x*y"), 64).unwrap().is_empty());
    }

    #[test]
    fn isolated_zero_gives_no_curve() {
        let s = surface("x^2 + 3*y^2", "x^3/3 + x*y^2");
        assert!(trace_parabolic(&s, 65).unwrap().polylines.is_empty());
        let r = find_inflections(&s, 65).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].kind, InflectionType::Imaginary);
        assert!(r[0].x.abs() < 1e-9 && r[0].y.abs() < 1e-9);
    }

    #[test]
    fn flat_plane_is_degenerate() {
        let set = trace_parabolic(&surface("0", "0"), 16).unwrap();
        assert!(set.polylines.is_empty());
        assert_eq!(set.degenerate_cells.len(), 15 * 15);
    }

    #[test]
    fn real_inflection_crossing() {
        let s = surface("x^2 - y^2", "x^3/3 + x*y^2");
        let r = find_inflections(&s, 64).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].kind, InflectionType::Real);
        assert!((r[0].det_h_delta + 1024.0).abs() < 1.024);
        let set = trace_parabolic(&s, 64).unwrap();
        assert!(set.polylines.len() >= 2);
        for p in &set.polylines {
            for (&(x, y), &res) in p.points.iter().zip(&p.residuals) {
                let inv = local_invariants(&s, x, y).unwrap();
                assert!(res <= 1e-9 * inv.sff.norm().powi(4), "{res} at {x},{y}");
            }
        }
    }

    #[test]
    fn linking_open_and_closed_chains() {
        let e = |k: usize| (false, k, 0);
        // open chain 0-1-2 given out of order, and a loop 10-11-12-10
        let segs = [(e(1), e(2)), (e(10), e(11)), (e(0), e(1)), (e(12), e(10)), (e(11), e(12))];
        let chains = link(&segs);
        assert_eq!(chains.len(), 2);
        assert_eq!(chains[0], (vec![e(2), e(1), e(0)], false));
        assert_eq!(chains[1], (vec![e(10), e(11), e(12)], true));
    }
}
