//! The surface description format:
//!
//! ```text
//! # Enneper-like example
//! phi = x^2 - y^2
//! psi = 2*x*y
//! domain = -1 1 -1 1
//! ```
//!
//! Each key appears exactly once; `#` starts a comment.

use std::path::Path;

use thiserror::Error;

use crate::jetexpr::{parse_expression, ParseError};
use crate::localgeom::{Domain, GeomError, SurfaceSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceFileError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: &'static str },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("line {line}: {source}")]
    Expression { line: usize, source: ParseError },
    #[error("line {line}: domain needs four numbers `xmin xmax ymin ymax`")]
    DomainFormat { line: usize },
    #[error("line {line}: {source}")]
    Domain { line: usize, source: GeomError },
}

pub fn parse_surface_file(path: &Path) -> Result<SurfaceSpec, SurfaceFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| SurfaceFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_surface_text(&text)
}

pub fn parse_surface_text(text: &str) -> Result<SurfaceSpec, SurfaceFileError> {
    let mut phi = None;
    let mut psi = None;
    let mut domain = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(SurfaceFileError::Malformed { line })?;
        let (key, value) = (key.trim(), value.trim());
        let expr = |v: &str| parse_expression(v).map_err(|source| SurfaceFileError::Expression { line, source });
        match key {
            "phi" => set(&mut phi, "phi", line, expr(value)?)?,
            "psi" => set(&mut psi, "psi", line, expr(value)?)?,
            "domain" => {
                let nums: Vec<f64> = value
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| SurfaceFileError::DomainFormat { line })?;
                let [x0, x1, y0, y1] = nums[..] else {
                    return Err(SurfaceFileError::DomainFormat { line });
                };
                let d = Domain::new(x0, x1, y0, y1).map_err(|source| SurfaceFileError::Domain { line, source })?;
                set(&mut domain, "domain", line, d)?;
            }
            other => {
                return Err(SurfaceFileError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
    }
    Ok(SurfaceSpec::new(
        phi.ok_or(SurfaceFileError::MissingKey("phi"))?,
        psi.ok_or(SurfaceFileError::MissingKey("psi"))?,
        domain.ok_or(SurfaceFileError::MissingKey("domain"))?,
    ))
}

fn set<T>(slot: &mut Option<T>, key: &'static str, line: usize, value: T) -> Result<(), SurfaceFileError> {
    if slot.is_some() {
        return Err(SurfaceFileError::DuplicateKey { line, key });
    }
    *slot = Some(value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complete_file() {
        let s = parse_surface_text("phi = x^2 - y^2\npsi = 2*x*y\ndomain = -1 1 -1 1").unwrap();
        assert_eq!(s.phi, parse_expression("x^2 - y^2").unwrap());
        assert_eq!(s.psi, parse_expression("2*x*y").unwrap());
        assert_eq!(s.domain, Domain::new(-1.0, 1.0, -1.0, 1.0).unwrap());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nphi = x^2 # trailing\n  psi=y^2\ndomain = 0 1 0 2\n";
        let s = parse_surface_text(text).unwrap();
        assert_eq!(s.domain.ymax, 2.0);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_surface_text("phi = x\ndomain = 0 1 0 1"),
            Err(SurfaceFileError::MissingKey("psi"))
        );
        assert!(matches!(
            parse_surface_text("phi = x\npsi = y\ndomain = 1 -1 0 1"),
            Err(SurfaceFileError::Domain {
                line: 3,
                source: GeomError::EmptyInterval { axis: 'x', .. }
            })
        ));
        assert_eq!(
            parse_surface_text("phi = x\nphi = y"),
            Err(SurfaceFileError::DuplicateKey { line: 2, key: "phi" })
        );
        assert!(matches!(
            parse_surface_text("phi = x\npsi = x +\ndomain = 0 1 0 1"),
            Err(SurfaceFileError::Expression { line: 2, .. })
        ));
        assert_eq!(
            parse_surface_text("phi = x\npsi = y\ndomain = 0 1 0"),
            Err(SurfaceFileError::DomainFormat { line: 3 })
        );
        assert_eq!(
            parse_surface_text("chi = 1"),
            Err(SurfaceFileError::UnknownKey {
                line: 1,
                key: "chi".into()
            })
        );
        assert_eq!(parse_surface_text("phi x"), Err(SurfaceFileError::Malformed { line: 1 }));
    }
}
