//! Point taxonomy (elliptic, parabolic, hyperbolic, inflection), asymptotic
//! directions and binormals.

use nalgebra::Matrix2;
use thiserror::Error;

use crate::conics::{eta, eta_prime, indicatrix};
use crate::localgeom::{invariant_gradients, GeomError, LocalInvariants, SecondFundamentalForm, SurfaceSpec};
use crate::quadratic::{canonical_sign, root_directions, RootCount};

/// Relative tolerances; thresholds scale with `‖ℳ‖` to the degree of the
/// quantity they test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSet {
    pub rel: f64,
    /// Bound on `σ₂/σ₁` for rank ≤ 1.
    pub rank_ratio: f64,
    /// Relative bound for circle and minimal point tests.
    pub umbilic: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            rel: 1e-8,
            rank_ratio: 1e-8,
            umbilic: 1e-10,
        }
    }
}

impl ToleranceSet {
    pub fn with_rel(rel: f64) -> Self {
        ToleranceSet {
            rel,
            ..Default::default()
        }
    }

    pub fn delta_tol(&self, scale: f64) -> f64 {
        self.rel * scale.powi(4)
    }

    pub fn quadratic_tol(&self, scale: f64) -> f64 {
        self.rel * scale * scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Inflection,
}

impl PointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PointKind::Elliptic => "elliptic",
            PointKind::Parabolic => "parabolic",
            PointKind::Hyperbolic => "hyperbolic",
            PointKind::Inflection => "inflection",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InflectionType {
    Real,
    Flat,
    Imaginary,
}

impl InflectionType {
    pub fn as_str(self) -> &'static str {
        match self {
            InflectionType::Real => "real",
            InflectionType::Flat => "flat",
            InflectionType::Imaginary => "imaginary",
        }
    }

    /// Type from the sign of `K` with a `±tol` band for flat.
    pub fn from_curvature(k: f64, tol: f64) -> Self {
        if k < -tol {
            InflectionType::Real
        } else if k > tol {
            InflectionType::Imaginary
        } else {
            InflectionType::Flat
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointClassification {
    pub kind: PointKind,
    pub inflection_type: Option<InflectionType>,
    pub is_circle: bool,
    pub is_minimal: bool,
    pub is_umbilic: bool,
    pub rank_m: u8,
    pub delta: f64,
    pub kappa: f64,
    pub k: f64,
    /// Frobenius norm of ℳ, the scale of all thresholds.
    pub scale: f64,
    pub tol: ToleranceSet,
}

impl PointClassification {
    /// Short label: the kind, `inflection-<type>`, or `degenerate` where
    /// the second fundamental form vanishes.
    pub fn label(&self) -> String {
        match (self.rank_m, self.inflection_type) {
            (0, _) => "degenerate".to_string(),
            (_, Some(t)) => format!("inflection-{}", t.as_str()),
            _ => self.kind.as_str().to_string(),
        }
    }
}

/// Rank of ℳ = [[a, b, c], [e, f, g]] from its singular values.
pub fn rank_m(sff: &SecondFundamentalForm, rank_ratio: f64) -> u8 {
    let (s1, s2) = sff.singular_values();
    if s1 <= f64::MIN_POSITIVE {
        0
    } else if s2 <= rank_ratio * s1 {
        1
    } else {
        2
    }
}

pub fn classify_point(inv: &LocalInvariants, tol: &ToleranceSet) -> PointClassification {
    classify_sff(&inv.sff, tol)
}

pub fn classify_sff(sff: &SecondFundamentalForm, tol: &ToleranceSet) -> PointClassification {
    let scale = sff.norm();
    let delta = sff.delta();
    let kappa = sff.normal_curvature();
    let k = sff.gaussian_curvature();
    let rank = rank_m(sff, tol.rank_ratio);
    let quad_tol = tol.quadratic_tol(scale);

    let kind = if delta.abs() <= tol.delta_tol(scale) {
        if kappa.abs() <= quad_tol && rank <= 1 {
            PointKind::Inflection
        } else {
            PointKind::Parabolic
        }
    } else if delta > 0.0 {
        PointKind::Elliptic
    } else {
        PointKind::Hyperbolic
    };
    let inflection_type =
        (kind == PointKind::Inflection).then(|| InflectionType::from_curvature(k, quad_tol));

    let ind = indicatrix(sff);
    let is_circle = ind.semi_major - ind.semi_minor <= tol.umbilic * scale;
    let is_minimal = ind.center.norm() <= tol.umbilic * scale;
    PointClassification {
        kind,
        inflection_type,
        is_circle,
        is_minimal,
        is_umbilic: is_circle && is_minimal,
        rank_m: rank,
        delta,
        kappa,
        k,
        scale,
        tol: *tol,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("every tangent direction is asymptotic (inflection point)")]
    AllDirectionsAsymptotic,
}

macro_rules! direction_type {
    ($name:ident) => {
        /// Unit 2-vector identified with its negative; stored with canonical
        /// sign.
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name([f64; 2]);

        impl $name {
            /// Normalizes `v`; `None` for the zero or a non-finite vector.
            pub fn new(v: [f64; 2]) -> Option<Self> {
                let n = v[0].hypot(v[1]);
                if !(n > 0.0) || !n.is_finite() {
                    return None;
                }
                Some($name(canonical_sign([v[0] / n, v[1] / n])))
            }

            pub fn from_angle(theta: f64) -> Self {
                let (s, c) = theta.sin_cos();
                $name(canonical_sign([c, s]))
            }

            pub fn as_array(&self) -> [f64; 2] {
                self.0
            }

            /// Angle in `(-π/2, π/2]`.
            pub fn angle(&self) -> f64 {
                self.0[1].atan2(self.0[0])
            }

            /// `|sin|` of the angle between the two lines.
            pub fn angle_to(&self, other: &Self) -> f64 {
                (self.0[0] * other.0[1] - self.0[1] * other.0[0]).abs()
            }
        }
    };
}

direction_type!(TangentDirection);
direction_type!(NormalDirection);

/// Asymptotic directions with default tolerances.
pub fn asymptotic_directions(inv: &LocalInvariants) -> Result<Vec<TangentDirection>, ClassifyError> {
    asymptotic_directions_with(&inv.sff, &ToleranceSet::default())
}

/// Real roots of `𝔑(x, y)`; the count follows the sign of Δ.
pub fn asymptotic_directions_with(
    sff: &SecondFundamentalForm,
    tol: &ToleranceSet,
) -> Result<Vec<TangentDirection>, ClassifyError> {
    let scale = sff.norm();
    let [n0, n1, n2] = sff.n_quadratic();
    let qtol = tol.quadratic_tol(scale);
    if n0.abs() <= qtol && n1.abs() <= qtol && n2.abs() <= qtol {
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
    Ok(root_directions(n0, n1, n2, count)
        .into_iter()
        .map(TangentDirection)
        .collect())
}

/// An asymptotic direction and the binormal paired with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinormalPair {
    pub asymptotic: TangentDirection,
    pub binormal: NormalDirection,
    /// The tangent line to the indicatrix was taken along `η′` (origin on
    /// the indicatrix).
    pub from_derivative: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binormals {
    pub pairs: Vec<BinormalPair>,
    /// The indicatrix is a segment; binormals come from its endpoints.
    pub degenerate_indicatrix: bool,
}

impl Binormals {
    pub fn directions(&self) -> Vec<NormalDirection> {
        self.pairs.iter().map(|p| p.binormal).collect()
    }
}

pub fn binormals(inv: &LocalInvariants) -> Result<Binormals, ClassifyError> {
    binormals_with(&inv.sff, &ToleranceSet::default())
}

/// For each asymptotic direction θ, the normal direction perpendicular to
/// the line through the origin tangent to the indicatrix at `η(θ)`.
pub fn binormals_with(sff: &SecondFundamentalForm, tol: &ToleranceSet) -> Result<Binormals, ClassifyError> {
    let dirs = asymptotic_directions_with(sff, tol)?;
    let scale = sff.norm();
    let pairs = dirs
        .into_iter()
        .map(|u| {
            let theta = u.angle();
            let e = eta(sff, theta);
            let (span, from_derivative) = if e.norm() > tol.rel * scale {
                (e, false)
            } else {
                (eta_prime(sff, theta), true)
            };
            let binormal = NormalDirection::new([-span.y, span.x])
                .expect("span of a nonzero indicatrix tangent is nonzero");
            BinormalPair {
                asymptotic: u,
                binormal,
                from_derivative,
            }
        })
        .collect();
    Ok(Binormals {
        pairs,
        degenerate_indicatrix: indicatrix(sff).degenerate,
    })
}

/// Exact gradient of Δ at a point.
pub fn delta_gradient(surface: &SurfaceSpec, x: f64, y: f64) -> Result<[f64; 2], GeomError> {
    Ok(invariant_gradients(surface, x, y)?.delta.gradient())
}

/// Step for the finite differences in [`hessian_of_delta`].
pub const HESSIAN_STEP: f64 = 1e-4;

/// Hessian of Δ by central differences of its exact gradient, with one
/// Richardson step, symmetrized.
pub fn hessian_of_delta(surface: &SurfaceSpec, x: f64, y: f64) -> Result<Matrix2<f64>, GeomError> {
    let central = |h: f64| -> Result<Matrix2<f64>, GeomError> {
        let gxp = delta_gradient(surface, x + h, y)?;
        let gxm = delta_gradient(surface, x - h, y)?;
        let gyp = delta_gradient(surface, x, y + h)?;
        let gym = delta_gradient(surface, x, y - h)?;
        let d = 2.0 * h;
        Ok(Matrix2::new(
            (gxp[0] - gxm[0]) / d,
            (gyp[0] - gym[0]) / d,
            (gxp[1] - gxm[1]) / d,
            (gyp[1] - gym[1]) / d,
        ))
    };
    let coarse = central(HESSIAN_STEP)?;
    let fine = central(HESSIAN_STEP / 2.0)?;
    let h = (fine * 4.0 - coarse) / 3.0;
    Ok((h + h.transpose()) * 0.5)
}
