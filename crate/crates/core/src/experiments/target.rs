//! Universality targets: holomorphic functions on a disc with a computable
//! extension, plus the admissibility conditions for the real structure.

use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::randmodel::EvalGrid;

#[derive(Debug, Clone, PartialEq)]
pub enum TargetRepr {
    Constant(f64),
    /// `sum_k c_k (s - center)^k` with real `c_k`.
    Polynomial(Vec<f64>),
    /// Taylor coefficients recovered from boundary samples by a discrete
    /// Fourier transform (complex in general).
    Tabulated(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetFunction {
    pub repr: TargetRepr,
    pub grid: EvalGrid,
    /// Original spec string, echoed into reports.
    pub spec: String,
}

#[derive(Debug, Deserialize)]
struct TabulatedFile {
    grid: EvalGrid,
    values: Vec<Complex64>,
}

const DIAMETER_SAMPLES: usize = 101;

impl TargetFunction {
    pub fn constant(c: f64, grid: &EvalGrid) -> Self {
        TargetFunction {
            repr: TargetRepr::Constant(c),
            grid: grid.clone(),
            spec: format!("const:{c}"),
        }
    }

    pub fn polynomial(coeffs: Vec<f64>, grid: &EvalGrid) -> Self {
        let spec = format!(
            "poly:{}",
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        );
        TargetFunction {
            repr: TargetRepr::Polynomial(coeffs),
            grid: grid.clone(),
            spec,
        }
    }

    /// Parse `const:<real>`, `poly:<c0,c1,...>` or `file:<path>`. For files
    /// the grid stored in the file is used.
    pub fn parse(spec: &str, grid: &EvalGrid) -> Result<Self> {
        let (kind, body) = spec
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("target '{spec}' lacks a '<kind>:' prefix")))?;
        let num = |x: &str| -> Result<f64> {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number '{x}' in target '{spec}'")))
        };
        let mut t = match kind {
            "const" => Self::constant(num(body)?, grid),
            "poly" => {
                let c = body.split(',').map(num).collect::<Result<Vec<_>>>()?;
                if c.is_empty() {
                    return Err(Error::invalid("empty polynomial"));
                }
                Self::polynomial(c, grid)
            }
            "file" => Self::from_file(Path::new(body))?,
            _ => return Err(Error::invalid(format!("unknown target kind '{kind}'"))),
        };
        t.spec = spec.to_string();
        Ok(t)
    }

    /// JSON `{grid, values}` with values in grid-point order; the boundary
    /// values determine the function.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let f: TabulatedFile = serde_json::from_str(&text)
            .map_err(|e| Error::validation(format!("{}:line {}", path.display(), e.line()), e.to_string()))?;
        if f.values.len() < f.grid.k() {
            return Err(Error::validation(
                path.display().to_string(),
                format!("{} values for {} boundary points", f.values.len(), f.grid.k()),
            ));
        }
        let t = Self::from_boundary(&f.grid, &f.values[..f.grid.k()])?;
        Ok(TargetFunction {
            spec: format!("file:{}", path.display()),
            ..t
        })
    }

    /// Interpolate boundary samples `f(c + r e^{2 pi i j/K})` by the Taylor
    /// polynomial of degree `< K/2` from their discrete Fourier transform.
    pub fn from_boundary(grid: &EvalGrid, values: &[Complex64]) -> Result<Self> {
        let k = grid.k();
        if values.len() != k {
            return Err(Error::invalid("boundary value count differs from K"));
        }
        let r = grid.radius();
        let deg = k / 2;
        let taylor = (0..deg)
            .map(|m| {
                let s: Complex64 = values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (m * j) as f64 / k as f64))
                    .sum();
                s / (k as f64 * r.powi(m as i32))
            })
            .collect();
        Ok(TargetFunction {
            repr: TargetRepr::Tabulated(taylor),
            grid: grid.clone(),
            spec: "tabulated".into(),
        })
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let z = s - self.grid.center();
        match &self.repr {
            TargetRepr::Constant(c) => Complex64::new(*c, 0.0),
            TargetRepr::Polynomial(c) => c
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a),
            TargetRepr::Tabulated(c) => c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a),
        }
    }

    /// Values at the grid points (boundary first).
    pub fn values(&self) -> Vec<Complex64> {
        self.grid.points().iter().map(|s| self.eval(*s)).collect()
    }

    /// Minimum of the (real) target over the real diameter.
    pub fn min_on_diameter(&self) -> f64 {
        self.grid
            .real_diameter(DIAMETER_SAMPLES)
            .into_iter()
            .map(|x| self.eval(Complex64::new(x, 0.0)).re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks positivity on the real diameter, real values there, and
    /// conjugate symmetry on the grid. Returns the violated condition.
    pub fn admissibility(&self) -> std::result::Result<(), String> {
        if !self.grid.is_real_centered() {
            return Err("target domain must be a real-centered disc".into());
        }
        for x in self.grid.real_diameter(DIAMETER_SAMPLES) {
            let v = self.eval(Complex64::new(x, 0.0));
            if v.im.abs() > 1e-10 * (1.0 + v.norm()) {
                return Err(format!("target is not real at s = {x} (value {v})"));
            }
            if !(v.re > 0.0) {
                return Err(format!("target is not positive on the real diameter: phi({x}) = {}", v.re));
            }
        }
        let pts = self.grid.points();
        let vals = self.values();
        for i in 0..pts.len() {
            if let Some(j) = self.grid.conjugate_index(i) {
                if (vals[i].conj() - vals[j]).norm() > 1e-10 * (1.0 + vals[i].norm()) {
                    return Err(format!("values at {} and its conjugate are not conjugate", pts[i]));
                }
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().is_ok()
    }

    pub fn require_admissible(&self) -> Result<()> {
        self.admissibility().map_err(Error::InadmissibleTarget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_admissibility() {
        let g = EvalGrid::disc(0.75, 0.1, 32).unwrap();
        assert!(TargetFunction::parse("const:1", &g).unwrap().is_admissible());
        assert!(!TargetFunction::parse("const:-1", &g).unwrap().is_admissible());
        let p = TargetFunction::parse("poly:1,2", &g).unwrap();
        assert!(p.is_admissible());
        assert!((p.eval(Complex64::new(0.85, 0.0)).re - 1.2).abs() < 1e-15);
        // 0.1 + 2 (s - 3/4) vanishes at 0.7
        assert!(!TargetFunction::parse("poly:0.1,2", &g).unwrap().is_admissible());
        assert!(TargetFunction::parse("sin:1", &g).is_err());
        assert!(TargetFunction::parse("const:x", &g).is_err());
    }

    #[test]
    fn boundary_interpolation_reproduces_polynomial() {
        let g = EvalGrid::disc(0.75, 0.2, 16).unwrap();
        let p = TargetFunction::polynomial(vec![1.0, -0.5, 0.25], &g);
        let b: Vec<Complex64> = g.boundary().iter().map(|s| p.eval(*s)).collect();
        let t = TargetFunction::from_boundary(&g, &b).unwrap();
        for s in g.points() {
            assert!((t.eval(s) - p.eval(s)).norm() < 1e-12);
        }
        assert!(t.is_admissible());
    }
}
