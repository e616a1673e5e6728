//! The curvature ellipse (indicatrix), the characteristic conic, and the
//! polarity in the unit circle of the normal plane that maps one onto the
//! other.
//!
//! Points of the normal plane are written in the `(e₃, e₄)` frame. Conics are
//! symmetric 3×3 matrices acting on homogeneous coordinates `(X, Y, 1)`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use thiserror::Error;

use crate::localgeom::{singular_pair, SecondFundamentalForm};
use crate::quadratic::{root_directions, RootCount};

/// Relative threshold on `|det 𝒜|` for a degenerate (segment) indicatrix.
pub const DEGENERATE_TOL: f64 = 1e-10;
/// Relative threshold for umbilic detection in the canonical frame.
pub const UMBILIC_TOL: f64 = 1e-10;
/// Relative band on the 2×2 minor inside which a conic is a parabola.
pub const KIND_TOL: f64 = 1e-9;
/// Absolute threshold on the `[η; ζ]` determinant for the evolvent system.
pub const EVOLVENT_SINGULAR_TOL: f64 = 1e-12;
/// Homogeneous coordinate below which a pole is at infinity.
pub const POLE_INFINITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConicError {
    #[error("indicatrix is degenerate (normal curvature vanishes)")]
    DegenerateIndicatrix,
    #[error("umbilic point: canonical frame undefined")]
    Umbilic,
    #[error("tangent to the indicatrix at theta = {theta} passes through the origin")]
    SingularSystem { theta: f64 },
    #[error("conic matrix is rank deficient")]
    RankDeficient,
    #[error("pole lies at infinity")]
    PoleAtInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

impl ConicKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConicKind::Ellipse => "ellipse",
            ConicKind::Parabola => "parabola",
            ConicKind::Hyperbola => "hyperbola",
            ConicKind::Degenerate => "degenerate",
        }
    }
}

/// A real conic `(X, Y, 1) m (X, Y, 1)ᵀ = 0`, stored normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conic {
    m: Matrix3<f64>,
    kind: ConicKind,
}

impl Conic {
    /// Symmetrizes and normalizes `m` (largest entry magnitude 1, non-negative
    /// trace of the upper-left block), then classifies it.
    pub fn new(m: Matrix3<f64>) -> Self {
        let sym = (m + m.transpose()) * 0.5;
        let scale = sym.amax();
        if scale == 0.0 {
            return Conic {
                m: sym,
                kind: ConicKind::Degenerate,
            };
        }
        let mut n = sym / scale;
        let tr = n[(0, 0)] + n[(1, 1)];
        let flip = if tr.abs() > 1e-12 {
            tr < 0.0
        } else {
            n.iter().find(|v| v.abs() > 1e-12).is_some_and(|v| *v < 0.0)
        };
        if flip {
            n = -n;
        }
        let kind = classify_matrix(&n);
        Conic { m: n, kind }
    }

    /// The unit circle `X² + Y² = 1`.
    pub fn unit_circle() -> Self {
        Conic::new(Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn kind(&self) -> ConicKind {
        self.kind
    }

    pub fn eval(&self, p: Vector2<f64>) -> f64 {
        let h = Vector3::new(p.x, p.y, 1.0);
        h.dot(&(self.m * h))
    }

    /// Quadratic form value scaled by `‖m‖ (1 + |p|²)`, a dimensionless
    /// on-curve residual.
    pub fn residual(&self, p: Vector2<f64>) -> f64 {
        self.eval(p) / (self.m.norm() * (1.0 + p.norm_squared()))
    }

    /// Directions of the points at infinity (asymptote directions), as unit
    /// vectors with canonical sign.
    pub fn asymptote_directions(&self) -> Vec<Vector2<f64>> {
        let count = match self.kind {
            ConicKind::Hyperbola => RootCount::Two,
            ConicKind::Parabola => RootCount::One,
            _ => RootCount::Zero,
        };
        root_directions(self.m[(0, 0)], 2.0 * self.m[(0, 1)], self.m[(1, 1)], count)
            .into_iter()
            .map(Vector2::from)
            .collect()
    }
}

fn classify_matrix(m: &Matrix3<f64>) -> ConicKind {
    let norm = m.norm();
    if m.determinant().abs() <= 1e-13 * norm.powi(3) {
        return ConicKind::Degenerate;
    }
    let minor = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if minor.abs() <= KIND_TOL * norm * norm {
        ConicKind::Parabola
    } else if minor > 0.0 {
        ConicKind::Ellipse
    } else {
        ConicKind::Hyperbola
    }
}

fn adjugate(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
    };
    Matrix3::new(
        c(1, 2, 1, 2),
        -c(0, 2, 1, 2),
        c(0, 1, 1, 2),
        -c(1, 2, 0, 2),
        c(0, 2, 0, 2),
        -c(0, 1, 0, 2),
        c(1, 2, 0, 1),
        -c(0, 2, 0, 1),
        c(0, 1, 0, 1),
    )
}

/// The curvature ellipse `η(θ) = ℋ + 𝒜 (cos 2θ, sin 2θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Indicatrix {
    pub center: Vector2<f64>,
    /// 𝒜 = [[(a - c)/2, b], [(e - g)/2, f]]
    pub map: Matrix2<f64>,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub degenerate: bool,
}

impl Indicatrix {
    pub fn is_circle(&self, tol: f64) -> bool {
        self.semi_major - self.semi_minor <= tol
    }
}

pub fn indicatrix_map(sff: &SecondFundamentalForm) -> Matrix2<f64> {
    Matrix2::new(0.5 * (sff.a - sff.c), sff.b, 0.5 * (sff.e - sff.g), sff.f)
}

pub fn indicatrix(sff: &SecondFundamentalForm) -> Indicatrix {
    let map = indicatrix_map(sff);
    let det = map.determinant();
    let fro2 = map.norm_squared();
    let (semi_major, semi_minor) = singular_pair(fro2, det.abs());
    let [h1, h2] = sff.mean_curvature();
    Indicatrix {
        center: Vector2::new(h1, h2),
        map,
        semi_major,
        semi_minor,
        degenerate: det.abs() <= DEGENERATE_TOL * fro2,
    }
}

/// `η(θ) = II(cos θ e₁ + sin θ e₂)`.
pub fn eta(sff: &SecondFundamentalForm, theta: f64) -> Vector2<f64> {
    let (s, c) = theta.sin_cos();
    Vector2::new(
        sff.a * c * c + 2.0 * sff.b * c * s + sff.c * s * s,
        sff.e * c * c + 2.0 * sff.f * c * s + sff.g * s * s,
    )
}

/// `dη/dθ`, which equals `2ζ(θ)`.
pub fn eta_prime(sff: &SecondFundamentalForm, theta: f64) -> Vector2<f64> {
    2.0 * conjugate_radii(sff, theta).1
}

/// Conjugate radii `ξ = η - ℋ = 𝒜(cos 2θ, sin 2θ)` and `ζ = 𝒜(-sin 2θ, cos 2θ)`.
pub fn conjugate_radii(sff: &SecondFundamentalForm, theta: f64) -> (Vector2<f64>, Vector2<f64>) {
    let map = indicatrix_map(sff);
    let (s, c) = (2.0 * theta).sin_cos();
    (map * Vector2::new(c, s), map * Vector2::new(-s, c))
}

/// Coefficients in a canonical frame where `b = 0`, `g = e` and
/// `(a - c)/2 ≥ |f|`; the semi-axes are `(a - c)/2` and `|f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFrame {
    pub a: f64,
    pub c: f64,
    pub e: f64,
    pub f: f64,
    /// Rotation angle of `(e₃, e₄)`.
    pub normal_angle: f64,
    /// Rotation angle of `(e₁, e₂)`.
    pub tangent_angle: f64,
}

impl CanonicalFrame {
    pub fn gaussian_curvature(&self) -> f64 {
        self.a * self.c + self.e * self.e - self.f * self.f
    }

    pub fn normal_curvature(&self) -> f64 {
        (self.a - self.c) * self.f
    }

    pub fn mean_curvature(&self) -> [f64; 2] {
        [0.5 * (self.a + self.c), self.e]
    }

    pub fn sff(&self) -> SecondFundamentalForm {
        SecondFundamentalForm::new(self.a, 0.0, self.c, self.e, self.f, self.e)
    }
}

pub fn canonical_coefficients(sff: &SecondFundamentalForm) -> Result<CanonicalFrame, ConicError> {
    let ind = indicatrix(sff);
    let scale = sff.norm();
    let circle = ind.semi_major - ind.semi_minor <= UMBILIC_TOL * scale;
    let minimal = ind.center.norm() <= UMBILIC_TOL * scale;
    if circle && minimal {
        return Err(ConicError::Umbilic);
    }
    let mut beta = if circle {
        ind.center.y.atan2(ind.center.x)
    } else {
        let p = ind.map * ind.map.transpose();
        0.5 * (2.0 * p[(0, 1)]).atan2(p[(0, 0)] - p[(1, 1)])
    };
    let rot = |t: f64| Matrix2::new(t.cos(), -t.sin(), t.sin(), t.cos());
    let mut u = rot(beta);
    let mut h = u.transpose() * ind.center;
    if h.y < 0.0 || (h.y == 0.0 && h.x < 0.0) {
        beta += PI;
        u = rot(beta);
        h = -h;
    }
    let sigma1 = ind.semi_major;
    // first column of the tangent rotation R(2α) is 𝒜ᵀu₁/σ₁
    let v1 = ind.map.transpose() * u.column(0) / sigma1;
    let tangent_angle = 0.5 * v1.y.atan2(v1.x);
    let f = ind.map.determinant() / sigma1;
    Ok(CanonicalFrame {
        a: h.x + sigma1,
        c: h.x - sigma1,
        e: h.y,
        f,
        normal_angle: beta,
        tangent_angle,
    })
}

/// `|ℋ|² - K - |κ|`, which is `(σ₁ - σ₂)²` for semi-axes σ₁ ≥ σ₂.
pub fn wintgen_gap(sff: &SecondFundamentalForm) -> f64 {
    sff.mean_curvature_norm_sq() - sff.gaussian_curvature() - sff.normal_curvature().abs()
}

/// Homogeneous matrix of the indicatrix (scaled by `det(𝒜)²` before
/// normalization).
pub fn indicatrix_conic(ind: &Indicatrix) -> Result<Conic, ConicError> {
    if ind.degenerate {
        return Err(ConicError::DegenerateIndicatrix);
    }
    let p = ind.map * ind.map.transpose();
    let adj = Matrix2::new(p[(1, 1)], -p[(0, 1)], -p[(1, 0)], p[(0, 0)]);
    let det = ind.map.determinant();
    let h = ind.center;
    let ah = adj * h;
    let q = Matrix3::new(
        adj[(0, 0)],
        adj[(0, 1)],
        -ah.x,
        adj[(1, 0)],
        adj[(1, 1)],
        -ah.y,
        -ah.x,
        -ah.y,
        h.dot(&ah) - det * det,
    );
    Ok(Conic::new(q))
}

/// Polar conjugate of the indicatrix with respect to the unit circle:
/// `U adj(Q) U` with `U = diag(1, 1, -1)`.
pub fn characteristic_conic(ind: &Indicatrix) -> Result<Conic, ConicError> {
    let q = indicatrix_conic(ind)?;
    let u = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
    Ok(Conic::new(u * adjugate(q.matrix()) * u))
}

/// The point `n` with `n·η(θ) = 1` and `n·ζ(θ) = 0`: where the polar of
/// `η(θ)` touches the characteristic curve.
pub fn evolvent_point(sff: &SecondFundamentalForm, theta: f64) -> Result<Vector2<f64>, ConicError> {
    let eta = eta(sff, theta);
    let (_, zeta) = conjugate_radii(sff, theta);
    let det = eta.x * zeta.y - eta.y * zeta.x;
    if det.abs() <= EVOLVENT_SINGULAR_TOL {
        return Err(ConicError::SingularSystem { theta });
    }
    Ok(Vector2::new(zeta.y / det, -zeta.x / det))
}

/// Pole of the line `l₀X + l₁Y + l₂ = 0`.
pub fn pole(line: Vector3<f64>, conic: &Conic) -> Result<Vector2<f64>, ConicError> {
    let inv = conic.matrix().try_inverse().ok_or(ConicError::RankDeficient)?;
    if conic.kind() == ConicKind::Degenerate {
        return Err(ConicError::RankDeficient);
    }
    let p = inv * line;
    if p.z.abs() <= POLE_INFINITY_TOL * p.norm() {
        return Err(ConicError::PoleAtInfinity);
    }
    Ok(Vector2::new(p.x / p.z, p.y / p.z))
}

/// Polar line of `point` as a covector `(l₀, l₁, l₂)`.
pub fn polar(point: Vector2<f64>, conic: &Conic) -> Vector3<f64> {
    conic.matrix() * Vector3::new(point.x, point.y, 1.0)
}

/// Shoelace area of `η(kπ/n)`, `k = 0..n`: one traversal of the indicatrix.
pub fn oriented_area(sff: &SecondFundamentalForm, n: usize) -> f64 {
    let pts: Vec<Vector2<f64>> = (0..n).map(|k| eta(sff, k as f64 * PI / n as f64)).collect();
    let mut twice = 0.0;
    for k in 0..n {
        let p = pts[k];
        let q = pts[(k + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    0.5 * twice
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn sff(v: [f64; 6]) -> SecondFundamentalForm {
        SecondFundamentalForm::from_array(v)
    }
    const A: [f64; 6] = [2.0, 0.0, 0.0, 0.0, 0.0, 2.0];
    const B: [f64; 6] = [2.0, 0.0, -2.0, 0.0, 2.0, 0.0];
    const D: [f64; 6] = [2.0, 0.0, 0.0, 0.0, 2.0, 0.0];
    const G: [f64; 6] = [3.0, 0.0, 1.0, 0.0, 2.0, 0.0];

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn indicatrix_examples() {
        let b = indicatrix(&sff(B));
        assert_eq!(b.center, Vector2::zeros());
        assert!(close(b.semi_major, 2.0, 1e-12) && close(b.semi_minor, 2.0, 1e-12));
        assert!(!b.degenerate);

        let a = indicatrix(&sff(A));
        assert_eq!(a.center, Vector2::new(1.0, 1.0));
        assert!(close(a.semi_major, 2f64.sqrt(), 1e-12));
        assert_eq!(a.semi_minor, 0.0);
        assert!(a.degenerate);
        assert!((eta(&sff(A), 0.0) - Vector2::new(2.0, 0.0)).norm() < 1e-15);
        assert!((eta(&sff(A), FRAC_PI_2) - Vector2::new(0.0, 2.0)).norm() < 1e-15);

        let d = indicatrix(&sff(D));
        assert_eq!(d.center, Vector2::new(1.0, 0.0));
        assert_eq!(d.map, Matrix2::new(1.0, 0.0, 0.0, 2.0));
        assert!(close(d.semi_major, 2.0, 1e-12) && close(d.semi_minor, 1.0, 1e-12));
    }

    #[test]
    fn eta_examples() {
        let g = sff(G);
        assert_eq!(eta(&g, 0.0), Vector2::new(g.a, g.e));
        assert!(eta(&sff(D), FRAC_PI_2).norm() < 1e-15);
        assert!((eta(&sff(B), PI / 4.0) - Vector2::new(0.0, 2.0)).norm() < 1e-15);
        // η = ℋ + ξ
        let s = sff([0.3, -1.2, 0.7, 2.0, 0.1, -0.4]);
        for t in [0.0, 0.4, 1.9] {
            let (xi, _) = conjugate_radii(&s, t);
            let [h1, h2] = s.mean_curvature();
            assert!((eta(&s, t) - Vector2::new(h1, h2) - xi).norm() < 1e-14);
        }
    }

    #[test]
    fn conjugate_radii_examples() {
        let (xi, zeta) = conjugate_radii(&sff(B), 0.0);
        assert_eq!((xi, zeta), (Vector2::new(2.0, 0.0), Vector2::new(0.0, 2.0)));
        let (xi, zeta) = conjugate_radii(&sff(A), 0.0);
        assert_eq!((xi, zeta), (Vector2::new(1.0, -1.0), Vector2::new(0.0, 0.0)));
        // dξ/dθ = 2ζ
        let s = sff([0.3, -1.2, 0.7, 2.0, 0.1, -0.4]);
        let h = 1e-6;
        for t in [0.1, 1.3, 2.8] {
            let d = (conjugate_radii(&s, t + h).0 - conjugate_radii(&s, t - h).0) / (2.0 * h);
            assert!((d - 2.0 * conjugate_radii(&s, t).1).norm() < 1e-8);
        }
    }

    #[test]
    fn canonical_frame_examples() {
        let a = canonical_coefficients(&sff(A)).unwrap();
        let r2 = 2f64.sqrt();
        assert!(close(a.a, r2, 1e-12) && close(a.c, -r2, 1e-12));
        assert!(close(a.e, r2, 1e-12) && close(a.f, 0.0, 1e-12));
        assert!(close(a.gaussian_curvature(), 0.0, 1e-12));
        assert!(close(a.normal_curvature(), 0.0, 1e-12));

        let d = canonical_coefficients(&sff(D)).unwrap();
        assert!(close(0.5 * (d.a - d.c), 2.0, 1e-12));
        assert!(close(d.f.abs(), 1.0, 1e-12));
        assert!(close(d.normal_curvature(), 4.0, 1e-12));

        assert_eq!(canonical_coefficients(&sff(B)), Err(ConicError::Umbilic));
        assert_eq!(canonical_coefficients(&sff([0.0; 6])), Err(ConicError::Umbilic));
    }

    #[test]
    fn canonical_frame_of_offset_circle() {
        // circle of radius 1 centred at (0, 3): a - c = 2, f = 1, e = g = 3
        let s = sff([1.0, 0.0, -1.0, 3.0, 1.0, 3.0]);
        let cf = canonical_coefficients(&s).unwrap();
        assert!(close(cf.e, 0.0, 1e-12), "{cf:?}");
        assert!(close(0.5 * (cf.a + cf.c), 3.0, 1e-12));
        assert!(close(cf.f.abs(), 1.0, 1e-12));
    }

    #[test]
    fn wintgen_examples() {
        assert!(close(wintgen_gap(&sff(B)), 0.0, 1e-12));
        assert!(close(wintgen_gap(&sff(A)), 2.0, 1e-12));
        assert!(close(wintgen_gap(&sff(D)), 1.0, 1e-12));
    }

    #[test]
    fn indicatrix_conic_examples() {
        let b = indicatrix_conic(&indicatrix(&sff(B))).unwrap();
        assert_eq!(b.kind(), ConicKind::Ellipse);
        let expect = Matrix3::from_diagonal(&Vector3::new(0.25, 0.25, -1.0));
        assert!((b.matrix() - expect).norm() < 1e-12);

        let d = indicatrix_conic(&indicatrix(&sff(D))).unwrap();
        // (X - 1)² + (Y/2)² = 1  ⇔  X² + Y²/4 - 2X = 0
        let expect = Matrix3::new(1.0, 0.0, -1.0, 0.0, 0.25, 0.0, -1.0, 0.0, 0.0);
        assert!((d.matrix() - expect).norm() < 1e-12, "{}", d.matrix());
        for t in [0.0, 0.5, 1.0, 2.0] {
            assert!(d.residual(eta(&sff(D), t)).abs() < 1e-14);
        }

        assert_eq!(
            indicatrix_conic(&indicatrix(&sff(A))),
            Err(ConicError::DegenerateIndicatrix)
        );
    }

    #[test]
    fn characteristic_conic_examples() {
        let b = characteristic_conic(&indicatrix(&sff(B))).unwrap();
        assert_eq!(b.kind(), ConicKind::Ellipse);
        let expect = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -0.25));
        assert!((b.matrix() - expect).norm() < 1e-12, "{}", b.matrix());

        let d = characteristic_conic(&indicatrix(&sff(D))).unwrap();
        assert_eq!(d.kind(), ConicKind::Parabola);

        let g = characteristic_conic(&indicatrix(&sff(G))).unwrap();
        assert_eq!(g.kind(), ConicKind::Hyperbola);

        assert!(characteristic_conic(&indicatrix(&sff(A))).is_err());
    }

    #[test]
    fn evolvent_examples() {
        let n = evolvent_point(&sff(B), 0.0).unwrap();
        assert!((n - Vector2::new(0.5, 0.0)).norm() < 1e-15);
        for k in 0..256 {
            let t = k as f64 * PI / 256.0;
            let n = evolvent_point(&sff(B), t).unwrap();
            assert!(close(n.norm(), 0.5, 1e-9));
        }
        assert_eq!(
            evolvent_point(&sff(D), FRAC_PI_2),
            Err(ConicError::SingularSystem { theta: FRAC_PI_2 })
        );
    }

    #[test]
    fn pole_polar_unit_circle() {
        let c = Conic::unit_circle();
        let l = polar(Vector2::new(2.0, 0.0), &c);
        // 2X - 1 = 0 up to scale
        assert!(close(l.y, 0.0, 1e-15) && close(-l.z / l.x, 0.5, 1e-15));
        let p = pole(Vector3::new(1.0, 0.0, -1.0), &c).unwrap();
        assert!((p - Vector2::new(1.0, 0.0)).norm() < 1e-15);
        // a line through the centre has its pole at infinity
        assert_eq!(
            pole(Vector3::new(1.0, 1.0, 0.0), &c),
            Err(ConicError::PoleAtInfinity)
        );
        let degenerate = Conic::new(Matrix3::from_diagonal(&Vector3::new(1.0, 0.0, -1.0)));
        assert_eq!(degenerate.kind(), ConicKind::Degenerate);
        assert_eq!(
            pole(Vector3::new(1.0, 0.0, -1.0), &degenerate),
            Err(ConicError::RankDeficient)
        );
    }

    #[test]
    fn conic_normalization() {
        let c = Conic::new(Matrix3::from_diagonal(&Vector3::new(-2.0, -2.0, 8.0)));
        assert_eq!(
            *c.matrix(),
            Matrix3::from_diagonal(&Vector3::new(0.25, 0.25, -1.0))
        );
    }

    #[test]
    fn area_of_circle_point() {
        let area = oriented_area(&sff(B), 4096);
        assert!(((area - PI / 2.0 * 8.0) / (4.0 * PI)).abs() < 1e-3);
    }
}
