use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::charts::{BoundaryPoint, CoordinateChart, GridSpacing, Point, SampleGrid};
use crate::error::{Error, Result};

/// Relative slack for domain membership of stencil points.
pub const DOMAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainShape {
    /// Axis-aligned box in cartesian coordinates.
    Box { min: [f64; 3], max: [f64; 3] },
    /// `Ri <= R <= Ro`, `0 <= Z <= height`.
    Annulus { ri: f64, ro: f64, height: f64 },
    /// `Ri <= R <= Ro`.
    SphericalShell { ri: f64, ro: f64 },
}

impl DomainShape {
    pub fn name(&self) -> &'static str {
        match self {
            DomainShape::Box { .. } => "box",
            DomainShape::Annulus { .. } => "annulus",
            DomainShape::SphericalShell { .. } => "spherical_shell",
        }
    }

    /// Chart the shape is parameterized in.
    pub fn native_chart(&self) -> CoordinateChart {
        match self {
            DomainShape::Box { .. } => CoordinateChart::CARTESIAN,
            DomainShape::Annulus { .. } => CoordinateChart::CYLINDRICAL,
            DomainShape::SphericalShell { .. } => CoordinateChart::SPHERICAL,
        }
    }

    /// 16³ for boxes, 16×16×8 for shells and annuli.
    pub fn default_resolution(&self) -> [usize; 3] {
        match self {
            DomainShape::Box { .. } => [16, 16, 16],
            _ => [16, 16, 8],
        }
    }

    fn extent(&self) -> f64 {
        match self {
            DomainShape::Box { min, max } => (0..3)
                .map(|i| min[i].abs().max(max[i].abs()))
                .fold(1.0, f64::max),
            DomainShape::Annulus { ro, height, .. } => ro.max(height.abs()).max(1.0),
            DomainShape::SphericalShell { ro, .. } => ro.max(1.0),
        }
    }
}

/// A reference domain, the chart its samples are expressed in, and the grid
/// resolution in the shape's own parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub shape: DomainShape,
    pub chart: CoordinateChart,
    pub resolution: [usize; 3],
}

impl DomainSpec {
    pub fn new(shape: DomainShape, chart: CoordinateChart, resolution: [usize; 3]) -> Result<Self> {
        let ok = match &shape {
            DomainShape::Box { min, max } => (0..3).all(|i| min[i] < max[i]),
            DomainShape::Annulus { ri, ro, height } => 0.0 < *ri && ri < ro && *height > 0.0,
            DomainShape::SphericalShell { ri, ro } => 0.0 < *ri && ri < ro,
        };
        let finite = match &shape {
            DomainShape::Box { min, max } => min.iter().chain(max).all(|v| v.is_finite()),
            DomainShape::Annulus { ri, ro, height } => {
                [ri, ro, height].iter().all(|v| v.is_finite())
            }
            DomainShape::SphericalShell { ri, ro } => ri.is_finite() && ro.is_finite(),
        };
        if !ok || !finite {
            return Err(Error::Input(format!("invalid {} extents", shape.name())));
        }
        if resolution.iter().any(|&n| n < 2) {
            return Err(Error::Input(
                "grid resolution must be at least 2 per axis".into(),
            ));
        }
        Ok(Self {
            shape,
            chart,
            resolution,
        })
    }

    pub fn with_default_resolution(shape: DomainShape, chart: CoordinateChart) -> Result<Self> {
        let res = shape.default_resolution();
        Self::new(shape, chart, res)
    }

    pub fn scaled(&self, factor: usize) -> Result<Self> {
        Self::new(
            self.shape.clone(),
            self.chart,
            self.resolution.map(|n| n * factor.max(1)),
        )
    }

    /// Whether `x`, given in `self.chart`, lies in the closed domain up to
    /// [`DOMAIN_SLACK`] relative to the domain size.
    pub fn contains(&self, x: &Point) -> bool {
        self.chart.is_valid(x)
            && self.excess(&self.chart.to_cartesian(x)) <= DOMAIN_SLACK * self.shape.extent()
    }

    /// Admissibility of a stencil point `p` around the node `center`.
    ///
    /// A straight step of length `d` tangent to a convex wall of radius `ρ`
    /// leaves the domain by about `d²/2ρ`; points within twice that are
    /// accepted so tangential stencils stay centred on curved walls whatever
    /// the chart.
    pub fn admits(&self, center: &Point, p: &Point) -> bool {
        if !self.chart.is_valid(p) {
            return false;
        }
        let q = self.chart.to_cartesian(p);
        let mut allowance = DOMAIN_SLACK * self.shape.extent();
        if let DomainShape::Annulus { ro, .. } | DomainShape::SphericalShell { ro, .. } =
            &self.shape
        {
            let mut d = q - self.chart.to_cartesian(center);
            if matches!(self.shape, DomainShape::Annulus { .. }) {
                d[2] = 0.0;
            }
            allowance += d.norm_squared() / ro;
        }
        self.excess(&q) <= allowance
    }

    /// Largest signed distance by which a cartesian point lies outside.
    fn excess(&self, p: &Point) -> f64 {
        match &self.shape {
            DomainShape::Box { min, max } => (0..3)
                .map(|i| (min[i] - p[i]).max(p[i] - max[i]))
                .fold(f64::NEG_INFINITY, f64::max),
            DomainShape::Annulus { ri, ro, height } => {
                let r = p[0].hypot(p[1]);
                (ri - r).max(r - ro).max(-p[2]).max(p[2] - height)
            }
            DomainShape::SphericalShell { ri, ro } => {
                let r = p.norm();
                (ri - r).max(r - ro)
            }
        }
    }

    /// Nodes of the closed domain and boundary nodes with outward unit normals.
    pub fn grid(&self) -> Result<SampleGrid> {
        let [n0, n1, n2] = self.resolution;
        let native = self.shape.native_chart();
        let lin = |a: f64, b: f64, n: usize, i: usize| a + (b - a) * i as f64 / (n - 1) as f64;
        let periodic = |n: usize, i: usize| 2.0 * PI * i as f64 / n as f64;
        let polar = |n: usize, i: usize| PI * (i as f64 + 0.5) / n as f64;

        let mut nodes: Vec<Point> = Vec::with_capacity(n0 * n1 * n2);
        let mut boundary: Vec<(Point, Point)> = Vec::new();
        let steps;
        match &self.shape {
            DomainShape::Box { min, max } => {
                let axis = |k: usize, i: usize| lin(min[k], max[k], self.resolution[k], i);
                for i in 0..n0 {
                    for j in 0..n1 {
                        for k in 0..n2 {
                            nodes.push(Point::new(axis(0, i), axis(1, j), axis(2, k)));
                        }
                    }
                }
                for k in 0..3 {
                    let (u, v) = ((k + 1) % 3, (k + 2) % 3);
                    for (side, bound) in [(-1.0, min[k]), (1.0, max[k])] {
                        for i in 0..self.resolution[u] {
                            for j in 0..self.resolution[v] {
                                let mut p = Point::zeros();
                                p[k] = bound;
                                p[u] = axis(u, i);
                                p[v] = axis(v, j);
                                let mut n = Point::zeros();
                                n[k] = side;
                                boundary.push((p, n));
                            }
                        }
                    }
                }
                steps =
                    std::array::from_fn(|k| (max[k] - min[k]) / (self.resolution[k] - 1) as f64);
            }
            DomainShape::Annulus { ri, ro, height } => {
                for i in 0..n0 {
                    for j in 0..n1 {
                        for k in 0..n2 {
                            nodes.push(Point::new(
                                lin(*ri, *ro, n0, i),
                                periodic(n1, j),
                                lin(0.0, *height, n2, k),
                            ));
                        }
                    }
                }
                for (r, side) in [(*ri, -1.0), (*ro, 1.0)] {
                    for j in 0..n1 {
                        for k in 0..n2 {
                            boundary.push((
                                Point::new(r, periodic(n1, j), lin(0.0, *height, n2, k)),
                                Point::new(side, 0.0, 0.0),
                            ));
                        }
                    }
                }
                for (z, side) in [(0.0, -1.0), (*height, 1.0)] {
                    for i in 0..n0 {
                        for j in 0..n1 {
                            boundary.push((
                                Point::new(lin(*ri, *ro, n0, i), periodic(n1, j), z),
                                Point::new(0.0, 0.0, side),
                            ));
                        }
                    }
                }
                steps = [
                    (ro - ri) / (n0 - 1) as f64,
                    2.0 * PI / n1 as f64,
                    height / (n2 - 1) as f64,
                ];
            }
            DomainShape::SphericalShell { ri, ro } => {
                for i in 0..n0 {
                    for j in 0..n1 {
                        for k in 0..n2 {
                            nodes.push(Point::new(
                                lin(*ri, *ro, n0, i),
                                polar(n1, j),
                                periodic(n2, k),
                            ));
                        }
                    }
                }
                for (r, side) in [(*ri, -1.0), (*ro, 1.0)] {
                    for j in 0..n1 {
                        for k in 0..n2 {
                            boundary.push((
                                Point::new(r, polar(n1, j), periodic(n2, k)),
                                Point::new(side, 0.0, 0.0),
                            ));
                        }
                    }
                }
                steps = [
                    (ro - ri) / (n0 - 1) as f64,
                    PI / n1 as f64,
                    2.0 * PI / n2 as f64,
                ];
            }
        }

        let interior_points = nodes
            .iter()
            .map(|y| native.convert_point(&self.chart, y))
            .collect();
        let boundary_points = boundary
            .iter()
            .map(|(y, n)| {
                Ok(BoundaryPoint {
                    point: native.convert_point(&self.chart, y),
                    normal: native.transform_vector(n, &self.chart, y)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let grid = SampleGrid {
            chart: self.chart,
            interior_points,
            boundary_points,
            spacing: GridSpacing {
                shape: self.shape.name().to_string(),
                resolution: self.resolution,
                steps,
            },
        };
        grid.validate()?;
        Ok(grid)
    }
}
