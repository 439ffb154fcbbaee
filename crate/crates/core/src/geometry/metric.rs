use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::func::FieldFn;
use crate::point::{check_dim, Point};

/// A conformally flat metric `g_ij = λ(x)² δ_ij` on a chart of ℝⁿ.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    factor: Option<FieldFn>,
}

impl MetricField {
    pub fn flat(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(MetricField { dim, factor: None })
    }

    /// The caller guarantees `factor > 0` wherever it is evaluated.
    pub fn conformal(dim: usize, factor: FieldFn) -> Result<Self> {
        check_dim(dim)?;
        Ok(MetricField {
            dim,
            factor: Some(factor),
        })
    }

    pub fn constant(dim: usize, lambda: f64) -> Result<Self> {
        Self::conformal(dim, Arc::new(move |_| lambda))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_flat(&self) -> bool {
        self.factor.is_none()
    }

    /// λ(x).
    #[inline]
    pub fn factor_at(&self, x: &Point) -> f64 {
        match &self.factor {
            None => 1.0,
            Some(f) => f(x),
        }
    }

    /// Volume density `sqrt(det g) = λ(x)^n`.
    #[inline]
    pub fn volume_density(&self, x: &Point) -> f64 {
        match &self.factor {
            None => 1.0,
            Some(f) => f(x).powi(self.dim as i32),
        }
    }

    /// Area density on a hypersurface, `λ(x)^(n-1)`.
    #[inline]
    pub fn area_density(&self, x: &Point) -> f64 {
        match &self.factor {
            None => 1.0,
            Some(f) => f(x).powi(self.dim as i32 - 1),
        }
    }
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("dim", &self.dim)
            .field("flat", &self.is_flat())
            .finish()
    }
}
