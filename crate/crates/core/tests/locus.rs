//! Parabolic-curve tracing and inflection search on fixture and random
//! surfaces.

mod common;

use common::*;
use monge4::classify::{classify_point, hessian_of_delta, rank_m, InflectionType, PointKind, ToleranceSet};
use monge4::locus::{find_inflections, trace_parabolic, PolylineSet};
use monge4::localgeom::local_invariants;

/// Number of separate passes of the traced curve through the disk of
/// `radius` around `(x, y)`: maximal runs of consecutive vertices inside it.
fn branches_near(set: &PolylineSet, x: f64, y: f64, radius: f64) -> usize {
    set.polylines
        .iter()
        .map(|p| {
            let inside: Vec<bool> = p.points.iter().map(|&(u, v)| (u - x).hypot(v - y) <= radius).collect();
            let n = inside.len();
            let starts = (0..n)
                .filter(|&k| inside[k] && !(if k == 0 { p.closed && inside[n - 1] } else { inside[k - 1] }))
                .count();
            if starts == 0 && inside.iter().all(|&b| b) {
                1
            } else {
                starts
            }
        })
        .sum()
}

#[test]
fn traced_vertices_are_parabolic() {
    let tol = ToleranceSet::default();
    let mut surfaces: Vec<_> = [D, E, G, H].iter().map(|&f| surface(f)).collect();
    surfaces.extend(random_surfaces(5, 6));
    let mut vertices = 0;
    for s in &surfaces {
        let set = trace_parabolic(s, 64).unwrap();
        for p in &set.polylines {
            assert_eq!(p.points.len(), p.residuals.len());
            for &(x, y) in &p.points {
                let inv = local_invariants(s, x, y).unwrap();
                let c = classify_point(&inv, &tol);
                assert!(
                    matches!(c.kind, PointKind::Parabolic | PointKind::Inflection),
                    "({x}, {y}): {:?} with Delta {}",
                    c.kind,
                    inv.delta
                );
                vertices += 1;
            }
        }
    }
    assert!(vertices > 100);
}

#[test]
fn fixture_inflections() {
    for (f, kind, det) in [(C, InflectionType::Imaginary, 3072.0), (H, InflectionType::Real, -1024.0)] {
        let s = surface_on(f, 0.5);
        let reports = find_inflections(&s, 64).unwrap();
        assert_eq!(reports.len(), 1, "{f:?}: {reports:?}");
        let r = reports[0];
        assert!(r.x.hypot(r.y) < 1e-9);
        assert_eq!(r.kind, kind);
        assert!(((r.det_h_delta - det) / det).abs() < 1e-3, "{}", r.det_h_delta);
        assert!(r.residual <= 1e-12);
    }
    assert!(find_inflections(&surface_on(B, 0.5), 64).unwrap().is_empty());
}

#[test]
fn reports_have_rank_at_most_one_and_match_the_locus() {
    let mut surfaces = vec![surface_on(C, 0.5), surface_on(H, 0.5)];
    surfaces.extend(random_surfaces(17, 8));
    surfaces.extend(random_surfaces(5, 40));
    let res = 64;
    for s in &surfaces {
        let set = trace_parabolic(s, res).unwrap();
        let cell = (s.domain.xmax - s.domain.xmin) / (res - 1) as f64;
        for r in find_inflections(s, res).unwrap() {
            let inv = local_invariants(s, r.x, r.y).unwrap();
            assert!(rank_m(&inv.sff, 1e-6) <= 1, "{r:?}");
            // crossings at a shallow angle leave the sign wedge between the
            // branches thinner than a cell; only resolvable ones are checked
            let e = hessian_of_delta(s, r.x, r.y).unwrap().symmetric_eigenvalues();
            let resolvable = e[0].abs().min(e[1].abs()) >= 0.1 * e[0].abs().max(e[1].abs());
            match r.kind {
                InflectionType::Real if !resolvable => {}
                InflectionType::Real => assert!(branches_near(&set, r.x, r.y, 2.0 * cell) >= 2, "{r:?}"),
                InflectionType::Imaginary => assert_eq!(branches_near(&set, r.x, r.y, 2.0 * cell), 0, "{r:?}"),
                InflectionType::Flat => {}
            }
        }
    }
}

#[test]
fn flat_plane_has_no_curve_and_no_reports() {
    let s = surface(FLAT);
    let set = trace_parabolic(&s, 16).unwrap();
    assert!(set.polylines.is_empty());
    assert!(!set.degenerate_cells.is_empty());
    assert!(find_inflections(&s, 16).unwrap().is_empty());
}
