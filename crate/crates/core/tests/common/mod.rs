//! Fixture surfaces, a random surface generator and an independent
//! finite-difference oracle for the second fundamental form.
#![allow(dead_code)]

use monge4::jetexpr::eval_jet3;
use monge4::localgeom::{Domain, SecondFundamentalForm, SurfaceSpec};
use nalgebra::Vector4;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const A: (&str, &str) = ("x^2", "y^2");
pub const B: (&str, &str) = ("x^2 - y^2", "2*x*y");
pub const C: (&str, &str) = ("x^2 + 3*y^2", "x^3/3 + x*y^2");
pub const D: (&str, &str) = ("x^2", "2*x*y");
pub const E: (&str, &str) = ("x^2 + y^3", "2*x*y");
pub const G: (&str, &str) = ("1.5*x^2 + 0.5*y^2", "2*x*y");
pub const H: (&str, &str) = ("x^2 - y^2", "x^3/3 + x*y^2");
pub const FLAT: (&str, &str) = ("0", "0");

pub fn surface_on(f: (&str, &str), half: f64) -> SurfaceSpec {
    SurfaceSpec::parse(f.0, f.1, Domain::new(-half, half, -half, half).unwrap()).unwrap()
}

pub fn surface(f: (&str, &str)) -> SurfaceSpec {
    surface_on(f, 1.0)
}

/// Random smooth surface on `[-1, 1]²`: a quadratic part plus cubic,
/// quartic and trigonometric perturbations.
pub fn random_surface(rng: &mut StdRng) -> (String, String) {
    let mut expr = || {
        let mut terms = Vec::new();
        for (i, j) in [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1)] {
            terms.push(format!("{:.4}*x^{i}*y^{j}", rng.gen_range(-2.0..2.0)));
        }
        for _ in 0..rng.gen_range(1..4) {
            let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..3));
            terms.push(format!("{:.4}*x^{i}*y^{j}", rng.gen_range(-1.0..1.0)));
        }
        let f = ["sin", "cos", "exp"][rng.gen_range(0..3)];
        terms.push(format!(
            "{:.4}*{f}({:.4}*x + {:.4}*y)",
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5)
        ));
        terms.join(" + ")
    };
    (expr(), expr())
}

pub fn random_surfaces(seed: u64, n: usize) -> Vec<SurfaceSpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (p, q) = random_surface(&mut rng);
            SurfaceSpec::parse(&p, &q, Domain::new(-1.0, 1.0, -1.0, 1.0).unwrap()).unwrap()
        })
        .collect()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Value of φ and ψ only; derivatives in the oracle come from differences.
fn values(s: &SurfaceSpec, x: f64, y: f64) -> (f64, f64) {
    (eval_jet3(&s.phi, x, y).unwrap().f, eval_jet3(&s.psi, x, y).unwrap().f)
}

fn point(s: &SurfaceSpec, x: f64, y: f64) -> Vector4<f64> {
    let (p, q) = values(s, x, y);
    Vector4::new(x, y, p, q)
}

/// Second fundamental form from finite differences of Ξ and Gram–Schmidt
/// frames: tangent from `(Ξ_x, Ξ_y)`, normal from
/// `((-φ_x, -φ_y, 1, 0), (-ψ_x, -ψ_y, 0, 1))`.
pub fn fd_sff(s: &SurfaceSpec, x: f64, y: f64) -> SecondFundamentalForm {
    let h = 1e-3;
    let p = |dx: f64, dy: f64| point(s, x + dx, y + dy);
    // fourth-order central differences
    let d1 = |ex: f64, ey: f64| {
        (p(-2.0 * h * ex, -2.0 * h * ey) - p(2.0 * h * ex, 2.0 * h * ey)
            + (p(h * ex, h * ey) - p(-h * ex, -h * ey)) * 8.0)
            / (12.0 * h)
    };
    let d2 = |ex: f64, ey: f64| {
        (-p(2.0 * h * ex, 2.0 * h * ey) + p(h * ex, h * ey) * 16.0 - p(0.0, 0.0) * 30.0 + p(-h * ex, -h * ey) * 16.0
            - p(-2.0 * h * ex, -2.0 * h * ey))
            / (12.0 * h * h)
    };
    let xi_x = d1(1.0, 0.0);
    let xi_y = d1(0.0, 1.0);
    let xi_xx = d2(1.0, 0.0);
    let xi_yy = d2(0.0, 1.0);
    let xi_xy = (d2(1.0, 1.0) - xi_xx - xi_yy) * 0.5;

    let e1 = xi_x.normalize();
    let e2 = (xi_y - e1 * e1.dot(&xi_y)).normalize();
    let n1 = Vector4::new(-xi_x[2], -xi_y[2], 1.0, 0.0);
    let n2 = Vector4::new(-xi_x[3], -xi_y[3], 0.0, 1.0);
    let e3 = n1.normalize();
    let e4 = (n2 - e3 * e3.dot(&n2)).normalize();

    // coordinate vectors of e1, e2 in the basis (Ξ_x, Ξ_y)
    let gram = nalgebra::Matrix2::new(
        xi_x.dot(&xi_x),
        xi_x.dot(&xi_y),
        xi_y.dot(&xi_x),
        xi_y.dot(&xi_y),
    );
    let inv = gram.try_inverse().unwrap();
    let coords = |v: Vector4<f64>| inv * nalgebra::Vector2::new(xi_x.dot(&v), xi_y.dot(&v));
    let u = coords(e1);
    let w = coords(e2);
    let second = |a: nalgebra::Vector2<f64>, b: nalgebra::Vector2<f64>| {
        xi_xx * (a.x * b.x) + xi_xy * (a.x * b.y + a.y * b.x) + xi_yy * (a.y * b.y)
    };
    let (s11, s12, s22) = (second(u, u), second(u, w), second(w, w));
    SecondFundamentalForm::new(
        s11.dot(&e3),
        s12.dot(&e3),
        s22.dot(&e3),
        s11.dot(&e4),
        s12.dot(&e4),
        s22.dot(&e4),
    )
}

pub fn max_abs_diff(p: &SecondFundamentalForm, q: &SecondFundamentalForm) -> f64 {
    p.to_array()
        .iter()
        .zip(q.to_array())
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}
