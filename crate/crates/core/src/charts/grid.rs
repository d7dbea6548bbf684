use serde::{Deserialize, Serialize};

use super::{CoordinateChart, Point};
use crate::error::{Error, Result};

/// A boundary sample with its outward unit normal (contravariant components).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub point: Point,
    pub normal: Point,
}

/// Sample points of a domain, expressed in one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub chart: CoordinateChart,
    pub interior_points: Vec<Point>,
    pub boundary_points: Vec<BoundaryPoint>,
    pub spacing: GridSpacing,
}

/// Resolution metadata echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpacing {
    pub shape: String,
    pub resolution: [usize; 3],
    pub steps: [f64; 3],
}

impl SampleGrid {
    /// Checks that every point is chart-valid and every normal has unit
    /// length under the chart metric.
    pub fn validate(&self) -> Result<()> {
        for x in &self.interior_points {
            self.chart.ensure_valid(x)?;
        }
        for b in &self.boundary_points {
            let g = self.chart.metric_pair(&b.point)?;
            let n = g.vector_norm(&b.normal);
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::Input(format!(
                    "boundary normal at {:?} has length {n}",
                    b.point
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.interior_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior_points.is_empty()
    }
}
