//! Parsing of kernel and space spec strings used by the CLI and configs.
//!
//! Kernels: `constant:c=2`, `dubins:c=0.26`, `chkns:delta=0.125`,
//! `rank1:p=4,a=1`, `turova:lambda=0.8,delta=1`, `halftriangle`,
//! `window:c=2,w=0.25`, `matrix:@file.json`. A trailing `,scale=<s>`
//! multiplies any preset.
//!
//! Spaces: `uniform:m=2000`, `log:m=1000,depth=60`,
//! `finite:w=0.5,0.25,0.25`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use gnk_core::kernels::Kernel;
use gnk_core::spaces::{GridScale, TypeSpace};
use serde::Deserialize;

#[derive(Debug)]
pub struct SpecError(pub String);

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "bad spec: {}", self.0)
    }
}

impl std::error::Error for SpecError {}

fn params_of(body: &str) -> Result<BTreeMap<String, String>, SpecError> {
    let mut out = BTreeMap::new();
    if body.is_empty() {
        return Ok(out);
    }
    for part in body.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| SpecError(format!("expected key=value, got '{part}'")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn get_f64(params: &BTreeMap<String, String>, key: &str, what: &str) -> Result<f64, SpecError> {
    params
        .get(key)
        .ok_or_else(|| SpecError(format!("{what} needs {key}=<value>")))?
        .parse::<f64>()
        .map_err(|e| SpecError(format!("{what}: bad {key}: {e}")))
}

/// JSON shape of `matrix:@file.json`.
#[derive(Deserialize)]
struct MatrixFile {
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
    w: Vec<f64>,
}

/// Parse a kernel spec. Matrix kernels carry their own finite space, which
/// is returned alongside.
pub fn parse_kernel(spec: &str, base_dir: &Path) -> Result<(Kernel, Option<TypeSpace>), SpecError> {
    let (name, body) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = if name == "matrix" {
        BTreeMap::new()
    } else {
        params_of(body)?
    };
    let scale = match params.remove("scale") {
        Some(s) => s
            .parse::<f64>()
            .map_err(|e| SpecError(format!("bad scale: {e}")))?,
        None => 1.0,
    };
    let kernel = match name {
        "constant" => Kernel::constant(get_f64(&params, "c", "constant")?),
        "dubins" => Kernel::dubins(get_f64(&params, "c", "dubins")?),
        "chkns" => Kernel::chkns(get_f64(&params, "delta", "chkns")?),
        "rank1" => Kernel::rank1(get_f64(&params, "p", "rank1")?, get_f64(&params, "a", "rank1")?),
        "turova" => Kernel::turova(
            get_f64(&params, "lambda", "turova")?,
            get_f64(&params, "delta", "turova")?,
        ),
        "halftriangle" => Ok(Kernel::half_triangle()),
        "window" => Kernel::window(get_f64(&params, "c", "window")?, get_f64(&params, "w", "window")?),
        "matrix" => {
            let path = body
                .strip_prefix('@')
                .ok_or_else(|| SpecError("matrix spec is matrix:@file.json".into()))?;
            let full = base_dir.join(path);
            let text = fs::read_to_string(&full)
                .map_err(|e| SpecError(format!("cannot read {}: {e}", full.display())))?;
            let mf: MatrixFile =
                serde_json::from_str(&text).map_err(|e| SpecError(format!("bad matrix json: {e}")))?;
            let r = mf.w.len();
            if mf.k.len() != r || mf.k.iter().any(|row| row.len() != r) {
                return Err(SpecError("matrix K must be r x r matching w".into()));
            }
            let flat: Vec<f64> = mf.k.into_iter().flatten().collect();
            let kernel =
                Kernel::finite_matrix(flat, r).map_err(|e| SpecError(format!("bad matrix kernel: {e}")))?;
            let space =
                TypeSpace::finite(&mf.w).map_err(|e| SpecError(format!("bad matrix weights: {e}")))?;
            return Ok((kernel.scaled(scale), Some(space)));
        }
        other => return Err(SpecError(format!("unknown kernel preset '{other}'"))),
    }
    .map_err(|e| SpecError(format!("{e}")))?;
    Ok((kernel.scaled(scale), None))
}

/// Parse a space spec.
pub fn parse_space(spec: &str) -> Result<TypeSpace, SpecError> {
    let (name, body) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "uniform" => {
            let params = params_of(body)?;
            let m = get_f64(&params, "m", "uniform space")? as usize;
            TypeSpace::interval(m, GridScale::Uniform, 0.0).map_err(|e| SpecError(format!("{e}")))
        }
        "log" | "logarithmic" => {
            let params = params_of(body)?;
            let m = get_f64(&params, "m", "log space")? as usize;
            let depth = params
                .get("depth")
                .map(|s| s.parse::<f64>())
                .transpose()
                .map_err(|e| SpecError(format!("bad depth: {e}")))?
                .unwrap_or(30.0);
            TypeSpace::interval(m, GridScale::Logarithmic, depth).map_err(|e| SpecError(format!("{e}")))
        }
        "finite" => {
            let body = body
                .strip_prefix("w=")
                .ok_or_else(|| SpecError("finite space is finite:w=w1,w2,...".into()))?;
            let weights: Result<Vec<f64>, _> = body.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let weights = weights.map_err(|e| SpecError(format!("bad weight: {e}")))?;
            TypeSpace::finite(&weights).map_err(|e| SpecError(format!("{e}")))
        }
        other => Err(SpecError(format!("unknown space kind '{other}'"))),
    }
}

/// Names and formulas of the built-in presets, for `gnk presets`.
pub fn preset_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("constant:c=<c>", "kappa = c (Erdos-Renyi G(n, c/n))"),
        ("dubins:c=<c>", "kappa = c / max(x, y); threshold c = 1/4"),
        (
            "chkns:delta=<d>",
            "kappa = 2 d (1/max(x, y) - 1); threshold d = 1/8",
        ),
        (
            "rank1:p=<p>,a=<a>",
            "kappa = psi(x) psi(y), psi = a x^(-1/p); power-law degrees",
        ),
        (
            "turova:lambda=<l>,delta=<d>",
            "kappa = (2l/(1-d)) (max(x,y)^(d-1) - 1); d=1 log form",
        ),
        ("halftriangle", "kappa = 1[x + y <= 1]; norm 2/pi"),
        (
            "window:c=<c>,w=<w>",
            "kappa = c/(2w) 1[circular dist <= w]; homogeneous",
        ),
        (
            "matrix:@file.json",
            "explicit finite-type matrix {\"K\": [[..]], \"w\": [..]}",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_presets() {
        let d = Path::new(".");
        let (k, sp) = parse_kernel("constant:c=2", d).unwrap();
        assert!(sp.is_none());
        assert_eq!(k.eval(0.3, 0.4), 2.0);
        let (k, _) = parse_kernel("dubins:c=0.26", d).unwrap();
        assert!((k.eval(0.5, 0.25) - 0.52).abs() < 1e-12);
        let (k, _) = parse_kernel("rank1:p=4,a=1", d).unwrap();
        assert!(k.eval(0.5, 0.5) > 0.0);
        let (k, _) = parse_kernel("halftriangle", d).unwrap();
        assert_eq!(k.eval(0.2, 0.2), 1.0);
        let (k, _) = parse_kernel("constant:c=2,scale=3", d).unwrap();
        assert_eq!(k.eval(0.1, 0.1), 6.0);
        assert!(parse_kernel("nope:a=1", d).is_err());
        assert!(parse_kernel("turova:lambda=1,delta=-2", d).is_err());
    }

    #[test]
    fn parse_spaces() {
        let s = parse_space("uniform:m=8").unwrap();
        assert_eq!(s.len(), 8);
        let s = parse_space("log:m=100,depth=40").unwrap();
        assert_eq!(s.len(), 100);
        let (lo, hi) = s.cell_bounds(0);
        assert_eq!(lo, 0.0);
        assert!((hi - (-40.0f64).exp()).abs() < 1e-27);
        let s = parse_space("finite:w=0.5,0.25,0.25").unwrap();
        assert_eq!(s.len(), 3);
        assert!(parse_space("weird").is_err());
    }
}
