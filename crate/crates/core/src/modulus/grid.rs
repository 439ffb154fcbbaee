use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Curve, Domain, DomainKind, MetricField};
use crate::point::Point;

/// Cell counts of a density grid.
///
/// Ring domains get a polar grid with `radial` log-uniform shells,
/// `azimuthal` sectors and (n = 3 only) `polar` equal-area bands in cos θ.
/// Balls get a Cartesian grid with `radial` cells per axis over the
/// bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridResolution {
    pub radial: usize,
    pub azimuthal: usize,
    pub polar: usize,
}

impl GridResolution {
    /// `n` radial shells and `n` sectors (`n/2` polar bands in space).
    pub fn square(n: usize) -> Self {
        GridResolution {
            radial: n,
            azimuthal: n,
            polar: (n / 2).max(1),
        }
    }
}

impl Default for GridResolution {
    fn default() -> Self {
        GridResolution::square(256)
    }
}

#[derive(Clone, Debug)]
enum Layout {
    Polar {
        log_r1: f64,
        dlog: f64,
        n_r: usize,
        n_az: usize,
        n_pol: usize,
    },
    Cartesian {
        lo: Point,
        h: f64,
        n: usize,
    },
}

/// A piecewise-constant density ρ ≥ 0 with per-cell metric measure.
#[derive(Clone, Debug)]
pub struct DensityGrid {
    layout: Layout,
    center: Point,
    measure: Vec<f64>,
    values: Vec<f64>,
}

const TIE: f64 = 1e-9;

/// Cell index along one axis from the continuous coordinate `u`; a point on
/// an interior cell boundary goes to the lower cell.
fn axis_index(u: f64, n: usize) -> usize {
    let k = u.round();
    if (u - k).abs() < TIE && k >= 1.0 {
        (k as usize - 1).min(n - 1)
    } else {
        (u.floor().max(0.0) as usize).min(n - 1)
    }
}

/// Same, for a periodic axis: the seam at 0 belongs to cell 0.
fn periodic_index(u: f64, n: usize) -> usize {
    let k = u.round();
    if (u - k).abs() < TIE {
        if k <= 0.0 || k as usize >= n {
            0
        } else {
            k as usize - 1
        }
    } else {
        (u.floor().max(0.0) as usize).min(n - 1)
    }
}

fn push_quadratic_roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    if a.abs() < 1e-300 {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    // numerically stable pair
    let q = -0.5 * (b + b.signum() * sq);
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

impl DensityGrid {
    pub fn new(domain: &Domain, metric: &MetricField, res: GridResolution) -> Result<Self> {
        let dim = domain.dim();
        if metric.dim() != dim {
            return Err(Error::InvalidArgument(
                "metric and domain dimensions differ".into(),
            ));
        }
        if res.radial == 0 || res.azimuthal < 3 || (dim == 3 && res.polar == 0) {
            return Err(Error::InvalidArgument(format!(
                "grid resolution too small: {res:?}"
            )));
        }
        let center = domain.center();
        let mut grid = match domain.kind() {
            DomainKind::Annulus => {
                let (r1, r2) = (domain.inner_radius(), domain.outer_radius());
                let n_pol = if dim == 2 { 1 } else { res.polar };
                DensityGrid {
                    layout: Layout::Polar {
                        log_r1: r1.ln(),
                        dlog: (r2 / r1).ln() / res.radial as f64,
                        n_r: res.radial,
                        n_az: res.azimuthal,
                        n_pol,
                    },
                    center,
                    measure: Vec::new(),
                    values: Vec::new(),
                }
            }
            DomainKind::Ball | DomainKind::PuncturedBall => {
                let r = domain.outer_radius();
                let mut lo = center;
                for x in lo.as_mut_slice() {
                    *x -= r;
                }
                DensityGrid {
                    layout: Layout::Cartesian {
                        lo,
                        h: 2.0 * r / res.radial as f64,
                        n: res.radial,
                    },
                    center,
                    measure: Vec::new(),
                    values: Vec::new(),
                }
            }
        };
        grid.measure = grid.compute_measures(metric);
        grid.values = vec![0.0; grid.measure.len()];
        Ok(grid)
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    pub fn cell_measures(&self) -> &[f64] {
        &self.measure
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn set_values(&mut self, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.measure.len());
        self.values = values;
    }

    /// Σ ρ^p · cell measure.
    pub fn energy(&self, p: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.measure)
            .map(|(v, m)| if *v > 0.0 { v.powf(p) * m } else { 0.0 })
            .sum()
    }

    /// ∫_γ ρ ds for the current density.
    pub fn line_integral(&self, curve: &Curve, metric: &MetricField) -> f64 {
        self.line_weights(curve, metric)
            .iter()
            .map(|(c, w)| self.values[*c] * w)
            .sum()
    }

    fn compute_measures(&self, metric: &MetricField) -> Vec<f64> {
        let dim = self.dim();
        match &self.layout {
            Layout::Polar {
                log_r1,
                dlog,
                n_r,
                n_az,
                n_pol,
            } => {
                let daz = TAU / *n_az as f64;
                let dz = 2.0 / *n_pol as f64;
                let mut out = Vec::with_capacity(n_r * n_az * n_pol);
                for j in 0..*n_r {
                    let a = (log_r1 + j as f64 * dlog).exp();
                    let b = (log_r1 + (j + 1) as f64 * dlog).exp();
                    let base = if dim == 2 {
                        0.5 * daz * (b * b - a * a)
                    } else {
                        daz * dz * (b.powi(3) - a.powi(3)) / 3.0
                    };
                    let rm = 0.5 * (a + b);
                    for k in 0..*n_pol {
                        for i in 0..*n_az {
                            let m = if metric.is_flat() {
                                base
                            } else {
                                let phi = (i as f64 + 0.5) * daz;
                                let x = if dim == 2 {
                                    Point::new2(rm * phi.cos(), rm * phi.sin())
                                } else {
                                    let z = -1.0 + (k as f64 + 0.5) * dz;
                                    let s = (1.0 - z * z).sqrt();
                                    Point::new3(rm * s * phi.cos(), rm * s * phi.sin(), rm * z)
                                };
                                base * metric.volume_density(&(self.center + x))
                            };
                            out.push(m);
                        }
                    }
                }
                out
            }
            Layout::Cartesian { lo, h, n } => {
                let cells = n.pow(dim as u32);
                let base = h.powi(dim as i32);
                (0..cells)
                    .map(|idx| {
                        if metric.is_flat() {
                            base
                        } else {
                            base * metric.volume_density(&self.cartesian_center(*lo, *h, *n, idx))
                        }
                    })
                    .collect()
            }
        }
    }

    fn cartesian_center(&self, lo: Point, h: f64, n: usize, mut idx: usize) -> Point {
        let mut p = lo;
        // linear index is row-major with the last axis fastest
        let dim = self.dim();
        for axis in (0..dim).rev() {
            let i = idx % n;
            idx /= n;
            p.as_mut_slice()[axis] += (i as f64 + 0.5) * h;
        }
        p
    }

    /// The cell containing `x`, if any.
    pub fn locate(&self, x: &Point) -> Option<usize> {
        match &self.layout {
            Layout::Polar {
                log_r1,
                dlog,
                n_r,
                n_az,
                n_pol,
            } => {
                let rel = *x - self.center;
                let r = rel.norm();
                if r <= 0.0 {
                    return None;
                }
                let ur = (r.ln() - log_r1) / dlog;
                let nr = *n_r as f64;
                if ur < -TIE || ur > nr + TIE {
                    return None;
                }
                let j = axis_index(ur.clamp(0.0, nr), *n_r);
                let mut phi = rel[1].atan2(rel[0]);
                if phi < 0.0 {
                    phi += TAU;
                }
                let i = periodic_index(phi / TAU * *n_az as f64, *n_az);
                let k = if self.dim() == 3 {
                    let z = (rel[2] / r).clamp(-1.0, 1.0);
                    axis_index((z + 1.0) * 0.5 * *n_pol as f64, *n_pol)
                } else {
                    0
                };
                Some((j * n_pol + k) * n_az + i)
            }
            Layout::Cartesian { lo, h, n } => {
                let mut idx = 0;
                for axis in 0..self.dim() {
                    let u = (x[axis] - lo[axis]) / h;
                    if u < -TIE || u > *n as f64 + TIE {
                        return None;
                    }
                    idx = idx * n + axis_index(u, *n);
                }
                Some(idx)
            }
        }
    }

    /// Parameters in (0, 1) where segment `a → b` crosses a cell boundary.
    fn crossings(&self, a: &Point, b: &Point, out: &mut Vec<f64>) {
        let d = *b - *a;
        match &self.layout {
            Layout::Polar {
                log_r1,
                dlog,
                n_r,
                n_az,
                n_pol,
            } => {
                let a0 = *a - self.center;
                let dd = d.dot(&d);
                let ad = a0.dot(&d);
                let aa = a0.dot(&a0);
                // spheres, restricted to the radii the segment can reach
                let rmax = aa.sqrt().max(b.distance(&self.center));
                for j in 0..=*n_r {
                    let re = (log_r1 + j as f64 * dlog).exp();
                    if re > rmax * (1.0 + 1e-12) {
                        break;
                    }
                    push_quadratic_roots(dd, 2.0 * ad, aa - re * re, out);
                }
                // azimuthal half-planes (whole planes through the axis)
                for i in 0..*n_az {
                    let phi = i as f64 * TAU / *n_az as f64;
                    let (s, c) = phi.sin_cos();
                    let dn = -s * d[0] + c * d[1];
                    if dn != 0.0 {
                        out.push((s * a0[0] - c * a0[1]) / dn);
                    }
                }
                // cones z = c·r in space
                if self.dim() == 3 {
                    for k in 1..*n_pol {
                        let cz = -1.0 + 2.0 * k as f64 / *n_pol as f64;
                        let c2 = cz * cz;
                        push_quadratic_roots(
                            d[2] * d[2] - c2 * dd,
                            2.0 * (a0[2] * d[2] - c2 * ad),
                            a0[2] * a0[2] - c2 * aa,
                            out,
                        );
                    }
                }
            }
            Layout::Cartesian { lo, h, n } => {
                for axis in 0..self.dim() {
                    if d[axis] == 0.0 {
                        continue;
                    }
                    let ua = (a[axis] - lo[axis]) / h;
                    let ub = (b[axis] - lo[axis]) / h;
                    let (u0, u1) = if ua < ub { (ua, ub) } else { (ub, ua) };
                    let first = u0.ceil().max(0.0) as i64;
                    let last = u1.floor().min(*n as f64) as i64;
                    for i in first..=last {
                        out.push((lo[axis] + i as f64 * h - a[axis]) / d[axis]);
                    }
                }
            }
        }
    }

    /// Sparse row `(cell, ∫_{γ ∩ cell} λ ds)` sorted by cell index.
    ///
    /// Each segment is cut at every cell boundary it crosses; each piece is
    /// assigned by its midpoint and weighted by λ at that midpoint.
    pub fn line_weights(&self, curve: &Curve, metric: &MetricField) -> Vec<(usize, f64)> {
        let mut acc: Vec<(usize, f64)> = Vec::new();
        let mut ts = Vec::new();
        for (a, b) in curve.segments() {
            ts.clear();
            self.crossings(&a, &b, &mut ts);
            ts.retain(|t| *t > 0.0 && *t < 1.0 && t.is_finite());
            ts.push(0.0);
            ts.push(1.0);
            ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let len = a.distance(&b);
            for w in ts.windows(2) {
                let dt = w[1] - w[0];
                if dt <= 1e-15 {
                    continue;
                }
                let m = a.lerp(&b, 0.5 * (w[0] + w[1]));
                if let Some(cell) = self.locate(&m) {
                    acc.push((cell, metric.factor_at(&m) * len * dt));
                }
            }
        }
        acc.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(acc.len());
        for (c, w) in acc {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += w,
                _ => merged.push((c, w)),
            }
        }
        merged
    }
}
