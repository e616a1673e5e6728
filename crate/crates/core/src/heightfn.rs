//! Height functions `f_b(p) = p·b` for unit normals `b`: degenerate normal
//! directions and the fold / cusp / umbilic type of the singularity.

use nalgebra::Matrix2;

use crate::classify::{ClassifyError, NormalDirection, TangentDirection, ToleranceSet};
use crate::localgeom::{local_invariants, GeomError, LocalInvariants, SecondFundamentalForm, SurfaceSpec};
use crate::quadratic::{root_directions, RootCount};

/// Relative fold threshold, applied to the cube of the jet scale.
pub const FOLD_TOL: f64 = 1e-8;

/// Hessian of `f_b` at a point, for `b = n₁e₃ + n₂e₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightHessian {
    /// In the orthonormal tangent frame `(e₁, e₂)`: `n₁[[a,b],[b,c]] + n₂[[e,f],[f,g]]`.
    pub frame: Matrix2<f64>,
    /// In the parameters `(x, y)`: `b₃ Hess φ + b₄ Hess ψ`.
    pub coords: Matrix2<f64>,
    pub det_frame: f64,
    pub det_coords: f64,
    /// `(ac - b²)n₁² + (ag + ce - 2bf)n₁n₂ + (eg - f²)n₂²`
    pub det_quadratic: f64,
}

/// Coefficients of the Hessian determinant as a quadratic in `(n₁, n₂)`.
pub fn determinant_quadratic(sff: &SecondFundamentalForm) -> [f64; 3] {
    let SecondFundamentalForm { a, b, c, e, f, g } = *sff;
    [a * c - b * b, a * g + c * e - 2.0 * b * f, e * g - f * f]
}

pub fn frame_hessian(sff: &SecondFundamentalForm, n: NormalDirection) -> Matrix2<f64> {
    let [n1, n2] = n.as_array();
    let SecondFundamentalForm { a, b, c, e, f, g } = *sff;
    Matrix2::new(n1 * a + n2 * e, n1 * b + n2 * f, n1 * b + n2 * f, n1 * c + n2 * g)
}

pub fn height_hessian(inv: &LocalInvariants, n: NormalDirection) -> HeightHessian {
    let frame = frame_hessian(&inv.sff, n);
    let [b3, b4] = inv.normal_to_ambient(n.as_array());
    let (p, q) = (&inv.phi, &inv.psi);
    let coords = Matrix2::new(
        b3 * p.fxx + b4 * q.fxx,
        b3 * p.fxy + b4 * q.fxy,
        b3 * p.fxy + b4 * q.fxy,
        b3 * p.fyy + b4 * q.fyy,
    );
    let [q0, q1, q2] = determinant_quadratic(&inv.sff);
    let [n1, n2] = n.as_array();
    HeightHessian {
        frame,
        coords,
        det_frame: frame.determinant(),
        det_coords: coords.determinant(),
        det_quadratic: q0 * n1 * n1 + q1 * n1 * n2 + q2 * n2 * n2,
    }
}

/// Normals whose height function has a degenerate critical point; the count
/// follows the sign of Δ (the quadratic's discriminant is `-4Δ`).
pub fn degenerate_normals(
    sff: &SecondFundamentalForm,
    tol: &ToleranceSet,
) -> Result<Vec<NormalDirection>, ClassifyError> {
    let scale = sff.norm();
    let [q0, q1, q2] = determinant_quadratic(sff);
    let qtol = tol.quadratic_tol(scale);
    if q0.abs() <= qtol && q1.abs() <= qtol && q2.abs() <= qtol {
        return Err(ClassifyError::AllDirectionsAsymptotic);
    }
    let delta = sff.delta();
    let count = if delta.abs() <= tol.delta_tol(scale) {
        RootCount::One
    } else if delta < 0.0 {
        RootCount::Two
    } else {
        RootCount::Zero
    };
    Ok(root_directions(q0, q1, q2, count)
        .into_iter()
        .filter_map(NormalDirection::new)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightKind {
    NonDegenerate,
    Fold,
    CuspOrHigher,
    UmbilicOrHigher,
}

impl HeightKind {
    pub fn as_str(self) -> &'static str {
        match self {
            HeightKind::NonDegenerate => "nondegenerate",
            HeightKind::Fold => "fold",
            HeightKind::CuspOrHigher => "cusp-or-higher",
            HeightKind::UmbilicOrHigher => "umbilic-or-higher",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightSingularity {
    pub normal: NormalDirection,
    pub kind: HeightKind,
    pub kernel_direction: Option<TangentDirection>,
    /// Cubic coefficient of `f_b` along the kernel; zero unless rank 1.
    pub third_order_coefficient: f64,
}

/// Largest second derivative of φ and ψ at the point.
fn jet_scale(inv: &LocalInvariants) -> f64 {
    [inv.phi.fxx, inv.phi.fxy, inv.phi.fyy, inv.psi.fxx, inv.psi.fxy, inv.psi.fyy]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Unit eigenvector of the symmetric `h` for its eigenvalue of least
/// magnitude.
fn kernel_vector(h: &Matrix2<f64>) -> [f64; 2] {
    let (p, q, r) = (h[(0, 0)], h[(0, 1)], h[(1, 1)]);
    let mean = 0.5 * (p + r);
    let rad = (0.5 * (p - r)).hypot(q);
    let lam = if mean >= 0.0 { mean - rad } else { mean + rad };
    // (h - λI) has rank ≤ 1; its kernel is perpendicular to the larger row
    let r0 = [p - lam, q];
    let r1 = [q, r - lam];
    let row = if r0[0].hypot(r0[1]) >= r1[0].hypot(r1[1]) { r0 } else { r1 };
    if row[0] == 0.0 && row[1] == 0.0 {
        return [1.0, 0.0];
    }
    [-row[1], row[0]]
}

pub fn classify_height(
    surface: &SurfaceSpec,
    x: f64,
    y: f64,
    n: NormalDirection,
) -> Result<HeightSingularity, GeomError> {
    let inv = local_invariants(surface, x, y)?;
    Ok(classify_height_at(&inv, n, &ToleranceSet::default()))
}

pub fn classify_height_at(inv: &LocalInvariants, n: NormalDirection, tol: &ToleranceSet) -> HeightSingularity {
    let hh = height_hessian(inv, n);
    let scale = inv.sff.norm();
    let h = hh.frame;
    let largest = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = HeightSingularity {
        normal: n,
        kind: HeightKind::NonDegenerate,
        kernel_direction: None,
        third_order_coefficient: 0.0,
    };
    if largest <= tol.rel * scale {
        out.kind = HeightKind::UmbilicOrHigher;
        return out;
    }
    if hh.det_frame.abs() > tol.quadratic_tol(scale) {
        return out;
    }
    let u = TangentDirection::new(kernel_vector(&h)).expect("kernel vector is nonzero");
    let [kx, ky] = inv.tangent_to_coords(u.as_array());
    let [b3, b4] = inv.normal_to_ambient(n.as_array());
    // Df_b = 0 and D²f_b(k, ·) = 0, so D³f_b(k, k, k) is the cubic
    // coefficient in any coordinates adapted to the kernel.
    let d3 = b3 * inv.phi.third_directional(kx, ky) + b4 * inv.psi.third_directional(kx, ky);
    let t = d3 / 6.0;
    out.kernel_direction = Some(u);
    out.third_order_coefficient = t;
    out.kind = if t.abs() > FOLD_TOL * jet_scale(inv).powi(3) {
        HeightKind::Fold
    } else {
        HeightKind::CuspOrHigher
    };
    out
}

/// Derivative of `det Hess f_b` (in parameters) along the coordinate vector
/// `dir`, with `b` held fixed.
pub fn hessian_det_derivative(inv: &LocalInvariants, n: NormalDirection, dir: [f64; 2]) -> f64 {
    let hh = height_hessian(inv, n);
    let [b3, b4] = inv.normal_to_ambient(n.as_array());
    let [u, v] = dir;
    let d = |j: &crate::jetexpr::Jet3| {
        Matrix2::new(
            j.fxxx * u + j.fxxy * v,
            j.fxxy * u + j.fxyy * v,
            j.fxxy * u + j.fxyy * v,
            j.fxyy * u + j.fyyy * v,
        )
    };
    let dh = d(&inv.phi) * b3 + d(&inv.psi) * b4;
    let h = hh.coords;
    let adj = Matrix2::new(h[(1, 1)], -h[(0, 1)], -h[(1, 0)], h[(0, 0)]);
    (adj * dh).trace()
}
