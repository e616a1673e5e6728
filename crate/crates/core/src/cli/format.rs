//! Number formatting and the `analyze` record.

use std::fmt::Write as _;

use nalgebra::Matrix3;

use crate::classify::{binormals_with, classify_point, ClassifyError, ToleranceSet};
use crate::conics::{characteristic_conic, indicatrix, indicatrix_conic, wintgen_gap, Conic};
use crate::localgeom::LocalInvariants;

/// Shortest representation that parses back to the same value; exponent
/// notation outside `[1e-5, 1e16)`, and no negative zero.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let a = v.abs();
    if !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn pair(v: [f64; 2]) -> String {
    format!("{},{}", num(v[0]), num(v[1]))
}

fn matrix(m: &Matrix3<f64>) -> String {
    let mut s = String::new();
    for r in 0..3 {
        for c in 0..3 {
            if !s.is_empty() {
                s.push(',');
            }
            s.push_str(&num(m[(r, c)]));
        }
    }
    s
}

/// Flat `key=value` record; keys always appear in this order.
pub fn analyze_record(inv: &LocalInvariants, brioschi: f64, tol: &ToleranceSet) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k}={v}");
    };
    let s = &inv.sff;
    kv("x", num(inv.x));
    kv("y", num(inv.y));
    kv("E", num(inv.first.e));
    kv("F", num(inv.first.f));
    kv("G", num(inv.first.g));
    kv("W", num(inv.first.w));
    kv("E_hat", num(inv.normal_gram.e_hat));
    kv("F_hat", num(inv.normal_gram.f_hat));
    kv("G_hat", num(inv.normal_gram.g_hat));
    for (k, v) in ["a", "b", "c", "e", "f", "g"].iter().zip(s.to_array()) {
        kv(k, num(v));
    }
    kv("K", num(inv.k));
    kv("K_brioschi", num(brioschi));
    kv("kappa", num(inv.kappa));
    kv("H", pair(inv.mean));
    kv("H_norm_sq", num(inv.mean_norm_sq()));
    kv("Delta", num(inv.delta));
    kv("nq", format!("{},{},{}", num(inv.nq[0]), num(inv.nq[1]), num(inv.nq[2])));

    let c = classify_point(inv, tol);
    kv("class", c.label());
    kv("kind", c.kind.as_str().to_string());
    kv("inflection_type", c.inflection_type.map_or("none", |t| t.as_str()).to_string());
    kv("rank_M", c.rank_m.to_string());
    kv("circle", c.is_circle.to_string());
    kv("minimal", c.is_minimal.to_string());
    kv("umbilic", c.is_umbilic.to_string());

    let ind = indicatrix(s);
    kv("semi_major", num(ind.semi_major));
    kv("semi_minor", num(ind.semi_minor));
    kv("indicatrix_degenerate", ind.degenerate.to_string());
    kv("wintgen_gap", num(wintgen_gap(s)));

    match binormals_with(s, tol) {
        Ok(b) => {
            kv("asymptotic_count", b.pairs.len().to_string());
            let dirs: Vec<String> = b.pairs.iter().map(|p| pair(p.asymptotic.as_array())).collect();
            let norms: Vec<String> = b.pairs.iter().map(|p| pair(p.binormal.as_array())).collect();
            kv("asymptotic", dirs.join(";"));
            kv("binormals", norms.join(";"));
            let conv = if b.degenerate_indicatrix && !b.pairs.is_empty() {
                "degenerate-indicatrix"
            } else if b.pairs.iter().any(|p| p.from_derivative) {
                "derivative"
            } else {
                "tangent"
            };
            kv("binormal_convention", conv.to_string());
        }
        Err(ClassifyError::AllDirectionsAsymptotic) => {
            kv("asymptotic_count", "all".to_string());
            kv("asymptotic", String::new());
            kv("binormals", String::new());
            kv("binormal_convention", "none".to_string());
        }
    }

    let conic = |c: Option<Conic>| c.map_or(("none".to_string(), "none"), |c| (matrix(c.matrix()), c.kind().as_str()));
    let (im, ik) = conic(indicatrix_conic(&ind).ok());
    let (cm, ck) = conic(characteristic_conic(&ind).ok());
    kv("indicatrix_conic", im);
    kv("indicatrix_conic_kind", ik.to_string());
    kv("characteristic_conic", cm);
    kv("characteristic_conic_kind", ck.to_string());
    out
}
