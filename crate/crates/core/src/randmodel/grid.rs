use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::serial::fnv1a64;

/// Closed disc in the strip `1/2 < Re s < 1`, sampled at `k` equally spaced
/// boundary points (angle `2 pi j / k`) plus interior points.
///
/// Boundary point `k - j` is the exact conjugate of point `j`, so real
/// coefficients produce conjugate-symmetric values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridJson", into = "GridJson")]
pub struct EvalGrid {
    center: Complex64,
    radius: f64,
    boundary: Vec<Complex64>,
    interior: Vec<Complex64>,
}

/// On-disk layout with explicit point lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    pub center: [f64; 2],
    pub radius: f64,
    pub k: usize,
    pub boundary: Vec<[f64; 2]>,
    pub interior: Vec<[f64; 2]>,
}

fn in_strip(s: Complex64) -> bool {
    s.re > 0.5 && s.re < 1.0
}

impl EvalGrid {
    /// Disc with `k` boundary points and the center as the single interior point.
    pub fn disc(center: f64, radius: f64, k: usize) -> Result<Self> {
        Self::disc_with_interior(Complex64::new(center, 0.0), radius, k, true)
    }

    pub fn disc_with_interior(
        center: Complex64,
        radius: f64,
        k: usize,
        include_center: bool,
    ) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid(format!("radius must be > 0, got {radius}")));
        }
        if k < 4 {
            return Err(Error::invalid(format!(
                "need at least 4 boundary points, got {k}"
            )));
        }
        if !(center.re - radius > 0.5 && center.re + radius < 1.0) {
            return Err(Error::invalid(format!(
                "disc |s - {center}| <= {radius} leaves the strip 1/2 < Re s < 1"
            )));
        }
        let mut boundary = vec![Complex64::new(0.0, 0.0); k];
        for j in 0..=k / 2 {
            let th = 2.0 * PI * j as f64 / k as f64;
            let (sn, cs) = th.sin_cos();
            let mut z = Complex64::new(center.re + radius * cs, center.im + radius * sn);
            if j == 0 || 2 * j == k {
                z.im = center.im;
                if 2 * j == k {
                    z.re = center.re - radius;
                }
            }
            boundary[j] = z;
            if j > 0 && 2 * j != k {
                boundary[k - j] = Complex64::new(z.re, 2.0 * center.im - z.im);
            }
        }
        let interior = if include_center {
            vec![center]
        } else {
            Vec::new()
        };
        Ok(EvalGrid {
            center,
            radius,
            boundary,
            interior,
        })
    }

    /// Parse `"<center>,<radius>,<K>"`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!(
                "grid spec '{spec}' is not <center>,<radius>,<K>"
            )));
        }
        let c: f64 = parts[0]
            .parse()
            .map_err(|_| Error::invalid(format!("bad grid center '{}'", parts[0])))?;
        let r: f64 = parts[1]
            .parse()
            .map_err(|_| Error::invalid(format!("bad grid radius '{}'", parts[1])))?;
        let k: usize = parts[2]
            .parse()
            .map_err(|_| Error::invalid(format!("bad grid K '{}'", parts[2])))?;
        Self::disc(c, r, k)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn k(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary(&self) -> &[Complex64] {
        &self.boundary
    }

    pub fn interior(&self) -> &[Complex64] {
        &self.interior
    }

    /// Boundary points followed by interior points; the index order used by
    /// every value vector attached to this grid.
    pub fn points(&self) -> Vec<Complex64> {
        let mut v = self.boundary.clone();
        v.extend_from_slice(&self.interior);
        v
    }

    pub fn len(&self) -> usize {
        self.boundary.len() + self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Indices (into [`points`](Self::points)) of points on the real axis.
    pub fn real_indices(&self) -> Vec<usize> {
        self.points()
            .iter()
            .enumerate()
            .filter(|(_, z)| z.im == 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the conjugate point, if the grid contains it.
    pub fn conjugate_index(&self, i: usize) -> Option<usize> {
        let pts = self.points();
        let target = pts[i].conj();
        pts.iter()
            .position(|z| (z.re - target.re).abs() < 1e-14 && (z.im - target.im).abs() < 1e-14)
    }

    /// `n >= 2` equally spaced points on the real diameter, endpoints included.
    pub fn real_diameter(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let lo = self.center.re - self.radius;
        (0..n)
            .map(|i| lo + 2.0 * self.radius * i as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn is_real_centered(&self) -> bool {
        self.center.im == 0.0
    }

    /// Sup-norm estimate from values on [`points`](Self::points): the max
    /// over boundary points (maximum modulus principle).
    pub fn sup_norm(&self, values: &[Complex64]) -> f64 {
        values[..self.k()]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Sup-norm of a holomorphic function on the closed disc, doubling the
    /// number of boundary samples (from `k`) until the estimate moves < 1%.
    pub fn sup_norm_adaptive(&self, f: impl Fn(Complex64) -> Complex64) -> f64 {
        let mut k = self.k();
        let mut prev = sup_on_circle(self.center, self.radius, k, &f);
        loop {
            k *= 2;
            let cur = sup_on_circle(self.center, self.radius, k, &f);
            if (cur - prev).abs() <= 0.01 * cur.abs().max(f64::MIN_POSITIVE) || k >= 1 << 16 {
                return cur;
            }
            prev = cur;
        }
    }

    /// Stable fingerprint of the point set.
    pub fn hash(&self) -> u64 {
        let pts = self.points();
        fnv1a64(pts.iter().flat_map(|z| {
            z.re.to_bits()
                .to_le_bytes()
                .into_iter()
                .chain(z.im.to_bits().to_le_bytes())
        }))
    }
}

fn sup_on_circle(c: Complex64, r: f64, k: usize, f: &impl Fn(Complex64) -> Complex64) -> f64 {
    (0..k)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / k as f64;
            f(c + Complex64::from_polar(r, th)).norm()
        })
        .fold(0.0, f64::max)
}

impl From<EvalGrid> for GridJson {
    fn from(g: EvalGrid) -> Self {
        GridJson {
            center: [g.center.re, g.center.im],
            radius: g.radius,
            k: g.boundary.len(),
            boundary: g.boundary.iter().map(|z| [z.re, z.im]).collect(),
            interior: g.interior.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<GridJson> for EvalGrid {
    type Error = Error;

    fn try_from(j: GridJson) -> Result<Self> {
        if j.boundary.len() != j.k {
            return Err(Error::validation(
                "grid.boundary",
                format!("expected {} points, found {}", j.k, j.boundary.len()),
            ));
        }
        let to_c = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        let boundary: Vec<Complex64> = j.boundary.iter().map(to_c).collect();
        let interior: Vec<Complex64> = j.interior.iter().map(to_c).collect();
        if let Some(z) = boundary.iter().chain(&interior).find(|z| !in_strip(**z)) {
            return Err(Error::validation(
                "grid",
                format!("point {z} outside 1/2 < Re s < 1"),
            ));
        }
        if !(j.radius > 0.0) {
            return Err(Error::validation("grid.radius", "radius must be positive"));
        }
        Ok(EvalGrid {
            center: Complex64::new(j.center[0], j.center[1]),
            radius: j.radius,
            boundary,
            interior,
        })
    }
}

impl std::fmt::Display for EvalGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.center.re, self.radius, self.k())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_disc_geometry() {
        let g = EvalGrid::disc(0.75, 0.2, 64).unwrap();
        assert_eq!(g.len(), 65);
        assert!(g.points().iter().all(|z| in_strip(*z)));
        assert_eq!(g.real_indices(), vec![0, 32, 64]);
        for j in 1..64 {
            assert_eq!(g.boundary()[64 - j], g.boundary()[j].conj());
            assert_eq!(g.conjugate_index(j), Some(64 - j));
        }
        assert_eq!(g.boundary()[32], Complex64::new(0.55, 0.0));
    }

    #[test]
    fn rejects_discs_leaving_strip() {
        assert!(EvalGrid::disc(0.75, 0.25, 64).is_err());
        assert!(EvalGrid::disc(0.75, 0.0, 64).is_err());
        assert!(EvalGrid::parse_spec("0.75,0.2").is_err());
        assert!(EvalGrid::parse_spec("0.75,0.2,64").is_ok());
    }

    #[test]
    fn json_keeps_explicit_points() {
        let g = EvalGrid::disc(0.8, 0.1, 16).unwrap();
        let s = crate::serial::to_json_string(&g).unwrap();
        let back: EvalGrid = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        assert_eq!(g.hash(), back.hash());
    }

    #[test]
    fn adaptive_sup_norm_of_polynomial() {
        let g = EvalGrid::disc(0.75, 0.2, 8).unwrap();
        // |1 + (s - c)^3| has max 1 + r^3 on the circle
        let v = g.sup_norm_adaptive(|s| 1.0 + (s - 0.75).powi(3));
        assert!((v - 1.008).abs() < 0.01 * 1.008);
    }
}
