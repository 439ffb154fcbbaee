//! Cached tail integrals `F(r) = ∫_r^1 h(t) dt` on a logarithmic grid.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::func::ScalarFn;
use crate::geometry::{gauss_legendre, log_substituted, NODES_PER_DECADE};

pub const TABLE_NODES: usize = 4096;
pub const TABLE_MIN: f64 = 1e-8;
/// Lower limit used for `F(0)`.
pub const TAIL_FLOOR: f64 = 1e-300;

/// Monotone cubic Hermite interpolant of F in u = ln r, with exact slopes
/// `dF/du = -r h(r)` clamped by the Fritsch–Carlson condition.
///
/// The segment on `[TABLE_MIN, 1]` is built eagerly; the one reaching down
/// to `TAIL_FLOOR` at the same node density is built on first use.
pub struct TailTable {
    h: ScalarFn,
    main: Segment,
    deep: OnceLock<Result<Segment>>,
    at_floor: f64,
}

struct Segment {
    u0: f64,
    du: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl Segment {
    /// Nodes `lo = r_0 < … < r_{len-1} = hi`, with `F(hi) = offset`.
    fn build(h: &ScalarFn, lo: f64, hi: f64, len: usize, offset: f64) -> Result<Self> {
        let u0 = lo.ln();
        let du = (hi.ln() - u0) / (len - 1) as f64;
        let rule = gauss_legendre(8);
        let mut values = vec![offset; len];
        let mut slopes = vec![0.0; len];
        for i in (0..len).rev() {
            let u = u0 + i as f64 * du;
            let r = u.exp();
            let hr = h(r);
            if !hr.is_finite() || hr < 0.0 {
                return Err(Error::QuadratureFailure(format!(
                    "profile integrand is {hr} at r = {r:e}"
                )));
            }
            slopes[i] = -r * hr;
            if i + 1 < len {
                let mid = u + 0.5 * du;
                let mut acc = 0.0;
                for &(x, w) in &rule {
                    let t = (mid + 0.5 * du * x).exp();
                    acc += w * t * h(t);
                }
                let piece = 0.5 * du * acc;
                if !piece.is_finite() {
                    return Err(Error::QuadratureFailure(format!(
                        "non-finite profile integral near r = {r:e}"
                    )));
                }
                values[i] = values[i + 1] + piece;
            }
        }
        for i in 0..len - 1 {
            let delta = (values[i + 1] - values[i]) / du;
            if delta == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let (a, b) = (slopes[i] / delta, slopes[i + 1] / delta);
            let s = a * a + b * b;
            if s > 9.0 {
                let tau = 3.0 / s.sqrt();
                slopes[i] = tau * a * delta;
                slopes[i + 1] = tau * b * delta;
            }
        }
        Ok(Segment {
            u0,
            du,
            values,
            slopes,
        })
    }

    fn eval(&self, r: f64) -> f64 {
        let len = self.values.len();
        let x = ((r.ln() - self.u0) / self.du).max(0.0);
        let i = (x.floor() as usize).min(len - 2);
        let s = x - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.du, self.slopes[i + 1] * self.du);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1
    }
}

impl TailTable {
    pub fn new(h: ScalarFn) -> Result<Self> {
        let main = Segment::build(&h, TABLE_MIN, 1.0, TABLE_NODES, 0.0)?;
        let tail = {
            let h = h.clone();
            log_substituted(move |t| h(t), TAIL_FLOOR, TABLE_MIN, NODES_PER_DECADE / 8)
                .map_err(|e| Error::QuadratureFailure(e.to_string()))?
        };
        let at_floor = main.values[0] + tail;
        Ok(TailTable {
            h,
            main,
            deep: OnceLock::new(),
            at_floor,
        })
    }

    fn deep(&self) -> Option<&Segment> {
        self.deep
            .get_or_init(|| {
                let decades = (TABLE_MIN / TAIL_FLOOR).log10();
                let len = (decades * (TABLE_NODES - 1) as f64 / 8.0).round() as usize + 1;
                Segment::build(&self.h, TAIL_FLOOR, TABLE_MIN, len, self.main.values[0])
            })
            .as_ref()
            .ok()
    }

    /// F(r) for r > 0; NaN below `TAIL_FLOOR` or where h fails.
    pub fn eval(&self, r: f64) -> f64 {
        let h = &self.h;
        if r == 1.0 {
            return 0.0;
        }
        if r > 1.0 {
            return -log_substituted(|t| h(t), 1.0, r, NODES_PER_DECADE).unwrap_or(f64::NAN);
        }
        if r >= TABLE_MIN {
            return self.main.eval(r);
        }
        if r < TAIL_FLOOR {
            return f64::NAN;
        }
        self.deep().map_or(f64::NAN, |d| d.eval(r))
    }

    /// F evaluated down to 10⁻³⁰⁰, standing in for F(0).
    pub fn at_zero(&self) -> f64 {
        self.at_floor
    }

    pub fn integrand(&self, r: f64) -> f64 {
        (self.h)(r)
    }
}
