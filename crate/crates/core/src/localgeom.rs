//! Pointwise invariants of a Monge-form surface.
//!
//! Coefficients are computed in the frame obtained by Gram–Schmidt from
//! `T₁ = Ξ_x`, `T₂ = Ξ_y` and `N₁ = (-φ_x, -φ_y, 1, 0)`, `N₂ = (-ψ_x, -ψ_y, 0, 1)`.
//! Gaussian curvature, normal curvature and Δ each have a second closed form;
//! both are always evaluated and reconciled.

use log::warn;
use nalgebra::Matrix4;
use thiserror::Error;

use crate::jetexpr::{eval_jet3, parse_expression, EvalError, Expr, Jet1, Jet2, Jet3, ParseError, Real};

/// Metric degeneracy threshold on `W = EG - F²`.
pub const METRIC_EPS: f64 = 1e-12;

/// Relative tolerances of the redundant-formula checks.
pub const K_TOL: f64 = 1e-9;
pub const KAPPA_TOL: f64 = 1e-9;
pub const DELTA_TOL: f64 = 1e-9;
pub const GRAM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("empty parameter interval [{min}, {max}] on {axis}")]
    EmptyInterval { axis: char, min: f64, max: f64 },
    #[error("evaluation failed at ({x}, {y}): {source}")]
    Eval {
        x: f64,
        y: f64,
        #[source]
        source: EvalError,
    },
    #[error("degenerate metric at ({x}, {y}): W = {w}")]
    DegenerateMetric { x: f64, y: f64, w: f64 },
    #[error("{quantity} disagrees at ({x}, {y}): {primary} vs {alternate}")]
    CrossCheck {
        x: f64,
        y: f64,
        quantity: &'static str,
        primary: f64,
        alternate: f64,
    },
}

impl GeomError {
    /// Parameter point the failure refers to, if any.
    pub fn point(&self) -> Option<(f64, f64)> {
        match *self {
            GeomError::EmptyInterval { .. } => None,
            GeomError::Eval { x, y, .. }
            | GeomError::DegenerateMetric { x, y, .. }
            | GeomError::CrossCheck { x, y, .. } => Some((x, y)),
        }
    }
}

/// Rectangular parameter domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Domain {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self, GeomError> {
        // written as negations so NaN bounds are rejected too
        if !(xmin < xmax) {
            return Err(GeomError::EmptyInterval {
                axis: 'x',
                min: xmin,
                max: xmax,
            });
        }
        if !(ymin < ymax) {
            return Err(GeomError::EmptyInterval {
                axis: 'y',
                min: ymin,
                max: ymax,
            });
        }
        Ok(Domain {
            xmin,
            xmax,
            ymin,
            ymax,
        })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.xmin..=self.xmax).contains(&x) && (self.ymin..=self.ymax).contains(&y)
    }

    /// Node `(i, j)` of an `n × n` lattice including the boundary.
    pub fn node(&self, n: usize, i: usize, j: usize) -> (f64, f64) {
        let t = |k: usize| k as f64 / (n - 1) as f64;
        (
            self.xmin + (self.xmax - self.xmin) * t(i),
            self.ymin + (self.ymax - self.ymin) * t(j),
        )
    }
}

/// A surface `(x, y, φ, ψ)` over a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    pub phi: Expr,
    pub psi: Expr,
    pub domain: Domain,
}

impl SurfaceSpec {
    pub fn new(phi: Expr, psi: Expr, domain: Domain) -> Self {
        SurfaceSpec { phi, psi, domain }
    }

    /// Convenience constructor from expression text.
    pub fn parse(phi: &str, psi: &str, domain: Domain) -> Result<Self, ParseError> {
        Ok(SurfaceSpec {
            phi: parse_expression(phi)?,
            psi: parse_expression(psi)?,
            domain,
        })
    }

    pub fn jets(&self, x: f64, y: f64) -> Result<(Jet3, Jet3), GeomError> {
        let wrap = |source| GeomError::Eval { x, y, source };
        Ok((
            eval_jet3(&self.phi, x, y).map_err(wrap)?,
            eval_jet3(&self.psi, x, y).map_err(wrap)?,
        ))
    }
}

/// Coefficients of `I = E dx² + 2F dx dy + G dy²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstFundamentalForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `EG - F²`
    pub w: f64,
}

/// Gram coefficients `Ê = N₁·N₁`, `F̂ = N₁·N₂`, `Ĝ = N₂·N₂` of the normal basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalGram {
    pub e_hat: f64,
    pub f_hat: f64,
    pub g_hat: f64,
}

/// Second fundamental form in an orthonormal frame:
/// `II = (a ω₁² + 2b ω₁ω₂ + c ω₂²) e₃ + (e ω₁² + 2f ω₁ω₂ + g ω₂²) e₄`.
///
/// Generic so that the same formulas run on plain values and on [`Jet1`]
/// (value plus exact gradient).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SecondFundamentalForm<T = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub e: T,
    pub f: T,
    pub g: T,
}

impl<T: Real> SecondFundamentalForm<T> {
    pub fn new(a: T, b: T, c: T, e: T, f: T, g: T) -> Self {
        SecondFundamentalForm { a, b, c, e, f, g }
    }

    /// `K = (ac - b²) + (eg - f²)`
    pub fn gaussian_curvature(&self) -> T {
        let Self { a, b, c, e, f, g } = *self;
        (a * c - b * b) + (e * g - f * f)
    }

    /// `κ = (a - c) f - (e - g) b`
    pub fn normal_curvature(&self) -> T {
        let Self { a, b, c, e, f, g } = *self;
        (a - c) * f - (e - g) * b
    }

    /// Mean curvature vector in the `(e₃, e₄)` frame.
    pub fn mean_curvature(&self) -> [T; 2] {
        let half = T::cst(0.5);
        [half * (self.a + self.c), half * (self.e + self.g)]
    }

    /// Δ in expanded form, `(ac - b²)(eg - f²) - ¼(ag + ce - 2bf)²`.
    pub fn delta(&self) -> T {
        let Self { a, b, c, e, f, g } = *self;
        let m = a * g + c * e - T::cst(2.0) * b * f;
        (a * c - b * b) * (e * g - f * f) - T::cst(0.25) * m * m
    }

    /// Coefficients `(af - be, ag - ce, bg - cf)` of the quadratic form 𝔑.
    /// They are also the 2×2 minors of the coefficient matrix ℳ.
    pub fn n_quadratic(&self) -> [T; 3] {
        let Self { a, b, c, e, f, g } = *self;
        [a * f - b * e, a * g - c * e, b * g - c * f]
    }
}

impl SecondFundamentalForm<f64> {
    pub fn from_array(v: [f64; 6]) -> Self {
        SecondFundamentalForm::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.e, self.f, self.g]
    }

    /// Frobenius norm of ℳ = [[a, b, c], [e, f, g]].
    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Singular values `(σ₁, σ₂)` of ℳ, `σ₁ ≥ σ₂ ≥ 0`.
    ///
    /// Uses `σ₁σ₂ = |𝔑 coefficients|` (Cauchy–Binet) so that a small σ₂ is
    /// resolved to full relative precision.
    pub fn singular_values(&self) -> (f64, f64) {
        let nq = self.n_quadratic();
        let prod = (nq[0] * nq[0] + nq[1] * nq[1] + nq[2] * nq[2]).sqrt();
        let sum_sq = self.to_array().iter().map(|v| v * v).sum::<f64>();
        singular_pair(sum_sq, prod)
    }

    /// `|ℋ|²`
    pub fn mean_curvature_norm_sq(&self) -> f64 {
        let [h1, h2] = self.mean_curvature();
        h1 * h1 + h2 * h2
    }
}

/// Singular values from `σ₁² + σ₂²` and `σ₁σ₂ ≥ 0`.
pub(crate) fn singular_pair(sum_sq: f64, prod: f64) -> (f64, f64) {
    if sum_sq <= 0.0 {
        return (0.0, 0.0);
    }
    let disc = (sum_sq * sum_sq - 4.0 * prod * prod).max(0.0).sqrt();
    let s1 = ((sum_sq + disc) / 2.0).sqrt();
    let s2 = if s1 > 0.0 { prod / s1 } else { 0.0 };
    (s1, s2.min(s1))
}

/// ¼ of the 4×4 Sylvester resultant of `ax² + 2bxy + cy²` and `ex² + 2fxy + gy²`.
pub fn delta_resultant(a: f64, b: f64, c: f64, e: f64, f: f64, g: f64) -> f64 {
    #[rustfmt::skip]
    let m = Matrix4::new(
        a, 2.0 * b, c, 0.0,
        e, 2.0 * f, g, 0.0,
        0.0, a, 2.0 * b, c,
        0.0, e, 2.0 * f, g,
    );
    0.25 * m.determinant()
}

/// Redundant values computed by the alternative closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    /// `(Ê H_ψ - F̂ Q + Ĝ H_φ) / W²`
    pub k_hessian: f64,
    /// `(E L - F M + G N) / W²`
    pub kappa_minors: f64,
    /// Δ from the resultant determinant.
    pub delta_resultant: f64,
    /// `ÊĜ - F̂²`, which equals W.
    pub normal_gram_det: f64,
}

/// Everything the later stages need about one surface point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalInvariants {
    pub x: f64,
    pub y: f64,
    pub first: FirstFundamentalForm,
    pub normal_gram: NormalGram,
    pub sff: SecondFundamentalForm,
    /// Gaussian curvature.
    pub k: f64,
    /// Normal curvature.
    pub kappa: f64,
    /// Mean curvature vector ℋ in the `(e₃, e₄)` frame.
    pub mean: [f64; 2],
    pub delta: f64,
    /// Coefficients of 𝔑: `af - be`, `ag - ce`, `bg - cf`.
    pub nq: [f64; 3],
    pub phi: Jet3,
    pub psi: Jet3,
    pub cross: CrossCheck,
}

impl LocalInvariants {
    pub fn mean_norm_sq(&self) -> f64 {
        self.mean[0] * self.mean[0] + self.mean[1] * self.mean[1]
    }

    /// Coordinate vector `(dx, dy)` of the unit tangent `u₁e₁ + u₂e₂`.
    pub fn tangent_to_coords(&self, u: [f64; 2]) -> [f64; 2] {
        let FirstFundamentalForm { e, f, w, .. } = self.first;
        let dy = u[1] * (e / w).sqrt();
        let dx = (u[0] - f / e.sqrt() * dy) / e.sqrt();
        [dx, dy]
    }

    /// Last two ambient components of the normal vector `n₁e₃ + n₂e₄`
    /// (the first two are determined by orthogonality to the tangent plane).
    pub fn normal_to_ambient(&self, n: [f64; 2]) -> [f64; 2] {
        let NormalGram { e_hat, f_hat, .. } = self.normal_gram;
        let w = self.first.w;
        let s3 = 1.0 / e_hat.sqrt();
        let s4 = 1.0 / (e_hat * w).sqrt();
        [n[0] * s3 - n[1] * f_hat * s4, n[1] * e_hat * s4]
    }
}

/// One comparison between redundant formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub quantity: &'static str,
    pub primary: f64,
    pub alternate: f64,
    pub rel: f64,
    pub tol: f64,
}

impl CheckOutcome {
    pub fn new(quantity: &'static str, primary: f64, alternate: f64, scale: f64, tol: f64) -> Self {
        CheckOutcome {
            quantity,
            primary,
            alternate,
            rel: rel_diff(primary, alternate, scale),
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.rel <= self.tol
    }
}

impl LocalInvariants {
    /// The four comparisons made during construction, recomputed.
    pub fn cross_checks(&self) -> [CheckOutcome; 4] {
        let s2 = self.sff.norm().powi(2);
        [
            CheckOutcome::new("Gaussian curvature", self.k, self.cross.k_hessian, s2, K_TOL),
            CheckOutcome::new("normal curvature", self.kappa, self.cross.kappa_minors, s2, KAPPA_TOL),
            CheckOutcome::new("Delta", self.delta, self.cross.delta_resultant, s2 * s2, DELTA_TOL),
            CheckOutcome::new("normal Gram determinant", self.first.w, self.cross.normal_gram_det, 0.0, GRAM_TOL),
        ]
    }
}

/// Controls how disagreements between redundant formulas are handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckPolicy {
    /// Disagreement is an error when set, a logged warning otherwise.
    pub strict: bool,
    pub metric_eps: f64,
}

impl Default for CheckPolicy {
    fn default() -> Self {
        CheckPolicy {
            strict: true,
            metric_eps: METRIC_EPS,
        }
    }
}

/// Relative difference with a floor `scale` for quantities that may vanish.
pub fn rel_diff(p: f64, q: f64, scale: f64) -> f64 {
    let denom = p.abs().max(q.abs()).max(scale);
    if denom == 0.0 {
        (p - q).abs()
    } else {
        (p - q).abs() / denom
    }
}

struct MongeDerivs<T> {
    px: T,
    py: T,
    pxx: T,
    pxy: T,
    pyy: T,
    qx: T,
    qy: T,
    qxx: T,
    qxy: T,
    qyy: T,
}

impl MongeDerivs<f64> {
    fn values(p: &Jet3, q: &Jet3) -> Self {
        MongeDerivs {
            px: p.fx,
            py: p.fy,
            pxx: p.fxx,
            pxy: p.fxy,
            pyy: p.fyy,
            qx: q.fx,
            qy: q.fy,
            qxx: q.fxx,
            qxy: q.fxy,
            qyy: q.fyy,
        }
    }
}

impl MongeDerivs<Jet1> {
    fn gradients(p: &Jet3, q: &Jet3) -> Self {
        MongeDerivs {
            px: Jet1::new(p.fx, p.fxx, p.fxy),
            py: Jet1::new(p.fy, p.fxy, p.fyy),
            pxx: Jet1::new(p.fxx, p.fxxx, p.fxxy),
            pxy: Jet1::new(p.fxy, p.fxxy, p.fxyy),
            pyy: Jet1::new(p.fyy, p.fxyy, p.fyyy),
            qx: Jet1::new(q.fx, q.fxx, q.fxy),
            qy: Jet1::new(q.fy, q.fxy, q.fyy),
            qxx: Jet1::new(q.fxx, q.fxxx, q.fxxy),
            qxy: Jet1::new(q.fxy, q.fxxy, q.fxyy),
            qyy: Jet1::new(q.fyy, q.fxyy, q.fyyy),
        }
    }
}

struct FrameData<T> {
    e: T,
    f: T,
    g: T,
    w: T,
    e_hat: T,
    f_hat: T,
    g_hat: T,
    sff: SecondFundamentalForm<T>,
}

fn frame_data<T: Real>(d: &MongeDerivs<T>) -> FrameData<T> {
    let one = T::cst(1.0);
    let two = T::cst(2.0);
    let e = one + d.px * d.px + d.qx * d.qx;
    let f = d.px * d.py + d.qx * d.qy;
    let g = one + d.py * d.py + d.qy * d.qy;
    let w = e * g - f * f;
    let e_hat = one + d.px * d.px + d.py * d.py;
    let f_hat = d.px * d.qx + d.py * d.qy;
    let g_hat = one + d.qx * d.qx + d.qy * d.qy;

    let se_hat = e_hat.sqrt();
    let sw = w.sqrt();
    // ψ second derivatives projected off N₁
    let rxx = e_hat * d.qxx - f_hat * d.pxx;
    let rxy = e_hat * d.qxy - f_hat * d.pxy;
    let ryy = e_hat * d.qyy - f_hat * d.pyy;

    let a = d.pxx / (e * se_hat);
    let b = (e * d.pxy - f * d.pxx) / (e * sw * se_hat);
    let c = (e * e * d.pyy - two * e * f * d.pxy + f * f * d.pxx) / (e * w * se_hat);
    let ee = rxx / (e * se_hat * sw);
    let ff = (e * rxy - f * rxx) / (e * w * se_hat);
    let gg = (e * e * ryy - two * e * f * rxy + f * f * rxx) / (e * w * sw * se_hat);

    FrameData {
        e,
        f,
        g,
        w,
        e_hat,
        f_hat,
        g_hat,
        sff: SecondFundamentalForm::new(a, b, c, ee, ff, gg),
    }
}

fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a * d - b * c
}

#[allow(clippy::too_many_arguments)]
fn check(
    policy: &CheckPolicy,
    x: f64,
    y: f64,
    quantity: &'static str,
    primary: f64,
    alternate: f64,
    scale: f64,
    tol: f64,
) -> Result<(), GeomError> {
    if rel_diff(primary, alternate, scale) <= tol {
        return Ok(());
    }
    if policy.strict {
        Err(GeomError::CrossCheck {
            x,
            y,
            quantity,
            primary,
            alternate,
        })
    } else {
        warn!("{quantity} disagrees at ({x}, {y}): {primary} vs {alternate}");
        Ok(())
    }
}

/// All pointwise invariants at `(x, y)` with the default (strict) policy.
pub fn local_invariants(surface: &SurfaceSpec, x: f64, y: f64) -> Result<LocalInvariants, GeomError> {
    local_invariants_with(surface, x, y, &CheckPolicy::default())
}

pub fn local_invariants_with(
    surface: &SurfaceSpec,
    x: f64,
    y: f64,
    policy: &CheckPolicy,
) -> Result<LocalInvariants, GeomError> {
    let (phi, psi) = surface.jets(x, y)?;
    invariants_from_jets(phi, psi, x, y, policy)
}

/// Invariants from precomputed jets of φ and ψ at `(x, y)`.
pub fn invariants_from_jets(
    phi: Jet3,
    psi: Jet3,
    x: f64,
    y: f64,
    policy: &CheckPolicy,
) -> Result<LocalInvariants, GeomError> {
    let d = MongeDerivs::values(&phi, &psi);
    let fd = frame_data(&d);
    if !(fd.w > policy.metric_eps) {
        return Err(GeomError::DegenerateMetric { x, y, w: fd.w });
    }
    let sff = fd.sff;
    let k = sff.gaussian_curvature();
    let kappa = sff.normal_curvature();
    let delta = sff.delta();

    let w2 = fd.w * fd.w;
    let h_phi = det2(d.pxx, d.pxy, d.pxy, d.pyy);
    let h_psi = det2(d.qxx, d.qxy, d.qxy, d.qyy);
    let q = det2(d.pxx, d.pxy, d.qxy, d.qyy) - det2(d.pxy, d.pyy, d.qxx, d.qxy);
    let k_hessian = (fd.e_hat * h_psi - fd.f_hat * q + fd.g_hat * h_phi) / w2;
    let l = det2(d.pxy, d.pyy, d.qxy, d.qyy);
    let m = det2(d.pxx, d.pyy, d.qxx, d.qyy);
    let n = det2(d.pxx, d.pxy, d.qxx, d.qxy);
    let kappa_minors = (fd.e * l - fd.f * m + fd.g * n) / w2;
    let delta_det = delta_resultant(sff.a, sff.b, sff.c, sff.e, sff.f, sff.g);
    let gram = fd.e_hat * fd.g_hat - fd.f_hat * fd.f_hat;

    let s2 = sff.norm().powi(2);
    check(policy, x, y, "Gaussian curvature", k, k_hessian, s2, K_TOL)?;
    check(policy, x, y, "normal curvature", kappa, kappa_minors, s2, KAPPA_TOL)?;
    check(policy, x, y, "Delta", delta, delta_det, s2 * s2, DELTA_TOL)?;
    check(policy, x, y, "normal Gram determinant", fd.w, gram, 0.0, GRAM_TOL)?;

    Ok(LocalInvariants {
        x,
        y,
        first: FirstFundamentalForm {
            e: fd.e,
            f: fd.f,
            g: fd.g,
            w: fd.w,
        },
        normal_gram: NormalGram {
            e_hat: fd.e_hat,
            f_hat: fd.f_hat,
            g_hat: fd.g_hat,
        },
        sff,
        k,
        kappa,
        mean: sff.mean_curvature(),
        delta,
        nq: sff.n_quadratic(),
        phi,
        psi,
        cross: CrossCheck {
            k_hessian,
            kappa_minors,
            delta_resultant: delta_det,
            normal_gram_det: gram,
        },
    })
}

/// Second fundamental form coefficients with exact gradients in `(x, y)`.
pub fn sff_gradients(phi: &Jet3, psi: &Jet3) -> SecondFundamentalForm<Jet1> {
    frame_data(&MongeDerivs::gradients(phi, psi)).sff
}

/// Δ, κ, K and the 𝔑 coefficients, each with its exact gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantGradients {
    pub delta: Jet1,
    pub kappa: Jet1,
    pub k: Jet1,
    pub nq: [Jet1; 3],
    pub sff: SecondFundamentalForm<Jet1>,
}

pub fn invariant_gradients(surface: &SurfaceSpec, x: f64, y: f64) -> Result<InvariantGradients, GeomError> {
    let (phi, psi) = surface.jets(x, y)?;
    let sff = sff_gradients(&phi, &psi);
    let e = 1.0 + phi.fx * phi.fx + psi.fx * psi.fx;
    let f = phi.fx * phi.fy + psi.fx * psi.fy;
    let g = 1.0 + phi.fy * phi.fy + psi.fy * psi.fy;
    let w = e * g - f * f;
    if !(w > METRIC_EPS) {
        return Err(GeomError::DegenerateMetric { x, y, w });
    }
    Ok(InvariantGradients {
        delta: sff.delta(),
        kappa: sff.normal_curvature(),
        k: sff.gaussian_curvature(),
        nq: sff.n_quadratic(),
        sff,
    })
}

/// Intrinsic Gauss curvature from the Brioschi formula, using exact second
/// derivatives of E, F, G.
pub fn brioschi_curvature(surface: &SurfaceSpec, x: f64, y: f64) -> Result<f64, GeomError> {
    let (phi, psi) = surface.jets(x, y)?;
    brioschi_from_jets(&phi, &psi, x, y)
}

pub fn brioschi_from_jets(phi: &Jet3, psi: &Jet3, x: f64, y: f64) -> Result<f64, GeomError> {
    let (px, py, qx, qy) = (phi.d_dx(), phi.d_dy(), psi.d_dx(), psi.d_dy());
    let one = Jet2::constant(1.0);
    let e: Jet2 = one + px * px + qx * qx;
    let f: Jet2 = px * py + qx * qy;
    let g: Jet2 = one + py * py + qy * qy;
    let w = e.f * g.f - f.f * f.f;
    if !(w > METRIC_EPS) {
        return Err(GeomError::DegenerateMetric { x, y, w });
    }
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let first = det3([
        [
            -0.5 * e.fyy + f.fxy - 0.5 * g.fxx,
            0.5 * e.fx,
            f.fx - 0.5 * e.fy,
        ],
        [f.fy - 0.5 * g.fx, e.f, f.f],
        [0.5 * g.fy, f.f, g.f],
    ]);
    let second = det3([
        [0.0, 0.5 * e.fy, 0.5 * g.fx],
        [0.5 * e.fy, e.f, f.f],
        [0.5 * g.fx, f.f, g.f],
    ]);
    Ok((first - second) / (w * w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Domain {
        Domain::new(-1.0, 1.0, -1.0, 1.0).unwrap()
    }

    fn surface(phi: &str, psi: &str) -> SurfaceSpec {
        SurfaceSpec::parse(phi, psi, unit_square()).unwrap()
    }

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn surface_a_origin() {
        let inv = local_invariants(&surface("x^2", "y^2"), 0.0, 0.0).unwrap();
        assert_eq!(inv.sff.to_array(), [2.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(inv.k, 0.0);
        assert_eq!(inv.kappa, 0.0);
        assert_eq!(inv.mean, [1.0, 1.0]);
        assert_eq!(inv.delta, -4.0);
        assert_close(inv.cross.delta_resultant, -4.0);
    }

    #[test]
    fn surface_b_origin() {
        let inv = local_invariants(&surface("x^2 - y^2", "2*x*y"), 0.0, 0.0).unwrap();
        assert_eq!(inv.sff.to_array(), [2.0, 0.0, -2.0, 0.0, 2.0, 0.0]);
        assert_eq!(inv.k, -8.0);
        assert_eq!(inv.kappa, 8.0);
        assert_eq!(inv.mean, [0.0, 0.0]);
        assert_eq!(inv.delta, 16.0);
        assert_eq!(inv.nq, [4.0, 0.0, 4.0]);
    }

    #[test]
    fn flat_plane() {
        let s = surface("0", "0");
        for (x, y) in [(0.0, 0.0), (0.3, -0.7), (1.0, 1.0)] {
            let inv = local_invariants(&s, x, y).unwrap();
            assert_eq!(inv.sff.to_array(), [0.0; 6]);
            assert_eq!((inv.k, inv.kappa, inv.delta), (0.0, 0.0, 0.0));
            assert_eq!(inv.mean, [0.0, 0.0]);
            assert_eq!((inv.first.e, inv.first.f, inv.first.g), (1.0, 0.0, 1.0));
            assert_eq!(brioschi_curvature(&s, x, y).unwrap(), 0.0);
        }
    }

    #[test]
    fn delta_resultant_examples() {
        assert_close(delta_resultant(2.0, 0.0, 0.0, 0.0, 0.0, 2.0), -4.0);
        assert_close(delta_resultant(2.0, 0.0, -2.0, 0.0, 2.0, 0.0), 16.0);
        assert_eq!(delta_resultant(0.0, 0.0, 0.0, 0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn brioschi_matches_extrinsic() {
        let b = surface("x^2 - y^2", "2*x*y");
        assert_close(brioschi_curvature(&b, 0.0, 0.0).unwrap(), -8.0);
        let graph = surface("x^2 + y^2", "0");
        let k = local_invariants(&graph, 0.3, -0.2).unwrap().k;
        let kb = brioschi_curvature(&graph, 0.3, -0.2).unwrap();
        assert!((k - kb).abs() <= 1e-8 * k.abs(), "{k} vs {kb}");
        // classical graph curvature 4 / (1 + 4x² + 4y²)²
        let expect = 4.0 / (1.0f64 + 4.0 * 0.09 + 4.0 * 0.04).powi(2);
        assert!((k - expect).abs() < 1e-12);
    }

    #[test]
    fn domain_validation() {
        assert!(matches!(
            Domain::new(1.0, -1.0, 0.0, 1.0),
            Err(GeomError::EmptyInterval { axis: 'x', .. })
        ));
        assert!(Domain::new(0.0, 1.0, 2.0, 2.0).is_err());
        assert!(Domain::new(f64::NAN, 1.0, 0.0, 1.0).is_err());
        let d = unit_square();
        assert!(d.contains(1.0, -1.0));
        assert!(!d.contains(1.1, 0.0));
        assert_eq!(d.node(3, 1, 2), (0.0, 1.0));
    }

    #[test]
    fn eval_errors_carry_point() {
        let s = surface("log(x)", "0");
        let err = local_invariants(&s, -0.5, 0.25).unwrap_err();
        assert_eq!(err.point(), Some((-0.5, 0.25)));
    }

    #[test]
    fn strict_policy_rejects_bad_metric() {
        let policy = CheckPolicy {
            strict: true,
            metric_eps: 10.0,
        };
        let s = surface("x", "y");
        assert!(matches!(
            local_invariants_with(&s, 0.0, 0.0, &policy),
            Err(GeomError::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn gradients_match_values() {
        let s = surface("sin(x)*y + x^3", "cos(x + 2*y)");
        let (p, q) = s.jets(0.2, 0.1).unwrap();
        let g = sff_gradients(&p, &q);
        let v = local_invariants(&s, 0.2, 0.1).unwrap();
        assert_close(g.delta().v, v.delta);
        assert_close(g.normal_curvature().v, v.kappa);
        assert_close(g.a.v, v.sff.a);
        assert_close(g.g.v, v.sff.g);
    }

    #[test]
    fn frame_maps_are_consistent() {
        // |tangent_to_coords(u)| measured in the metric must be 1
        let s = surface("0.7*x*y + x^2", "sin(y) - x");
        let inv = local_invariants(&s, 0.4, -0.3).unwrap();
        for t in [0.0, 0.7, 2.1] {
            let u = [f64::cos(t), f64::sin(t)];
            let [dx, dy] = inv.tangent_to_coords(u);
            let FirstFundamentalForm { e, f, g, .. } = inv.first;
            let len2 = e * dx * dx + 2.0 * f * dx * dy + g * dy * dy;
            assert!((len2 - 1.0).abs() < 1e-13);
        }
        // ambient normal components: (−φ_x, −φ_y, 1, 0)·n₃ etc. must be unit length
        let [b3, b4] = inv.normal_to_ambient([0.6, 0.8]);
        let b1 = -inv.phi.fx * b3 - inv.psi.fx * b4;
        let b2 = -inv.phi.fy * b3 - inv.psi.fy * b4;
        assert!((b1 * b1 + b2 * b2 + b3 * b3 + b4 * b4 - 1.0).abs() < 1e-13);
    }
}
