//! Real root directions of binary quadratic forms `A x² + B xy + C y²`.

/// How many distinct real root directions the caller expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RootCount {
    Two,
    One,
    Zero,
}

/// Flips `v` so that its first component that is not negligible is positive.
pub(crate) fn canonical_sign(v: [f64; 2]) -> [f64; 2] {
    let lead = if v[0].abs() > 1e-12 * v[1].abs().max(1e-300) {
        v[0]
    } else {
        v[1]
    };
    if lead < 0.0 {
        [-v[0], -v[1]]
    } else {
        v
    }
}

pub(crate) fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    canonical_sign([v[0] / n, v[1] / n])
}

/// Root directions of `a x² + b xy + c y²`, as unit vectors with canonical
/// sign. The caller decides the count (usually from a tolerance band on the
/// discriminant) and guarantees the form is not identically zero.
pub(crate) fn root_directions(a: f64, b: f64, c: f64, count: RootCount) -> Vec<[f64; 2]> {
    match count {
        RootCount::Zero => Vec::new(),
        RootCount::One => {
            let v = if a.abs() >= c.abs() {
                [-b / (2.0 * a), 1.0]
            } else {
                [1.0, -b / (2.0 * c)]
            };
            vec![unit(v)]
        }
        RootCount::Two => {
            if a == 0.0 && c == 0.0 {
                return vec![unit([1.0, 0.0]), unit([0.0, 1.0])];
            }
            let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
            let sign = if b < 0.0 { -1.0 } else { 1.0 };
            let q = -0.5 * (b + sign * disc);
            let (lead, trail) = if a.abs() >= c.abs() { (a, c) } else { (c, a) };
            // roots of lead·t² + b·t + trail
            let t1 = q / lead;
            let t2 = if q != 0.0 { trail / q } else { -t1 };
            let mut out: Vec<[f64; 2]> = [t1, t2]
                .iter()
                .map(|&t| {
                    if a.abs() >= c.abs() {
                        unit([t, 1.0])
                    } else {
                        unit([1.0, t])
                    }
                })
                .collect();
            out.sort_by(|p, q| q[0].total_cmp(&p[0]).then(p[1].total_cmp(&q[1])));
            out
        }
    }
}
