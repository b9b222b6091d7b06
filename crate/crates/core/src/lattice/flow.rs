use twofloat::TwoFloat;

use super::basis::LatticeBasis;
use super::reduce::{self, Columns, Qr};
use crate::error::{Error, Result};
use crate::geometry::{check_dim, Point, RealScalar, Scalar};
use crate::TOLERANCE;

/// Search nodes allowed for one shortest-vector computation.
pub const FLOW_NODE_CAP: f64 = 5e7;

/// Largest `‖t‖_∞` accepted by the flow probes.
pub const MAX_FLOW_NORM: f64 = 20.0;

/// A trace-zero vector `t`, acting as `diag(e^t_1, …, e^t_d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalFlowVector {
    t: Vec<f64>,
}

impl DiagonalFlowVector {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() || t.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("flow vector must be finite and nonempty".into()));
        }
        let sum: f64 = t.iter().sum();
        if sum.abs() >= TOLERANCE {
            return Err(Error::InvalidArgument(format!("flow vector has trace {sum}, expected 0")));
        }
        Ok(Self { t })
    }

    /// Completes `free` (the first `d - 1` entries) with the entry that makes
    /// the trace vanish.
    pub fn from_free(free: &[f64]) -> Result<Self> {
        let mut t = free.to_vec();
        t.push(-free.iter().sum::<f64>());
        Self::new(t)
    }

    pub fn zero(d: usize) -> Self {
        Self { t: vec![0.0; d] }
    }

    pub fn dim(&self) -> usize {
        self.t.len()
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn sup_norm(&self) -> f64 {
        self.t.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn apply_flow<T: RealScalar>(t: &DiagonalFlowVector, p: &Point<T>) -> Result<Point<T>> {
    check_dim(t.dim(), p.dim())?;
    Ok(Point::new(
        p.coords()
            .iter()
            .zip(t.t())
            .map(|(x, &ti)| T::from_f64(ti).exp().mul(x))
            .collect(),
    ))
}

/// `Π |p_i|`.
pub fn norm_product<T: Scalar>(p: &Point<T>) -> T {
    p.coords().iter().fold(T::one(), |acc, x| acc.mul(&x.abs()))
}

/// Columns of `g_t B` in f64, scaled in double-double first.
pub(crate) fn flowed_columns(b: &LatticeBasis, t: &DiagonalFlowVector) -> Result<Columns> {
    check_dim(b.dim(), t.dim())?;
    if t.sup_norm() > MAX_FLOW_NORM {
        return Err(Error::FlowTooLarge {
            estimate: t.sup_norm(),
            cap: MAX_FLOW_NORM,
        });
    }
    let d = b.dim();
    let factors: Vec<TwoFloat> = t.t().iter().map(|&ti| TwoFloat::from(ti).exp()).collect();
    Ok((0..d)
        .map(|j| (0..d).map(|i| f64::from(factors[i] * b.matrix()[i][j])).collect())
        .collect())
}

/// Shortest nonzero vector of `g_t Λ`: its Euclidean length and its
/// coefficients in the stored basis.
pub fn shortest_vector_with_coeffs(b: &LatticeBasis, t: &DiagonalFlowVector) -> Result<(f64, Vec<i64>)> {
    let cols = flowed_columns(b, t)?;
    let d = cols.len();
    let (reduced, u) = reduce::lll(&cols, 0.99);
    // any basis vector bounds the minimum
    let radius_sq = reduced
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let qr = Qr::new(&reduced);
    let estimate = qr.node_estimate(radius_sq);
    if estimate > FLOW_NODE_CAP {
        return Err(Error::FlowTooLarge {
            estimate,
            cap: FLOW_NODE_CAP,
        });
    }
    let mut best = (radius_sq * (1.0 + 1e-12), Vec::new());
    qr.search(&vec![0.0; d], radius_sq * (1.0 + 1e-12), true, |c, dist| {
        if c.iter().all(|&v| v == 0) || dist > best.0 {
            return false;
        }
        best = (dist, c.to_vec());
        true
    });
    let c_red = best.1;
    let coeffs: Vec<i64> = (0..d)
        .map(|i| u[i].iter().zip(&c_red).map(|(a, c)| a * c).sum())
        .collect();
    // recompute the length from the exact coefficients in double-double
    let p = apply_flow(t, &b.point(&coeffs)?)?;
    let len = p
        .coords()
        .iter()
        .fold(TwoFloat::from(0.0), |acc, &x| acc + x * x)
        .sqrt();
    Ok((f64::from(len), coeffs))
}

/// `min ‖g_t B c‖_2` over nonzero integer `c`.
pub fn shortest_vector_under_flow(b: &LatticeBasis, t: &DiagonalFlowVector) -> Result<f64> {
    shortest_vector_with_coeffs(b, t).map(|(len, _)| len)
}

/// Trace-zero vectors whose first `d - 1` entries are multiples of `step`
/// and whose sup norm is at most `bound`.
pub fn flow_grid(d: usize, bound: f64, step: f64) -> Result<Vec<DiagonalFlowVector>> {
    if d < 2 || !(step > 0.0) || !(bound >= 0.0) {
        return Err(Error::InvalidArgument("flow grid needs d >= 2, step > 0, bound >= 0".into()));
    }
    let k = (bound / step + 1e-9).floor() as i64;
    let count = (2 * k + 1) as f64;
    if count.powi(d as i32 - 1) > 1e7 {
        return Err(Error::FlowTooLarge {
            estimate: count.powi(d as i32 - 1),
            cap: 1e7,
        });
    }
    let mut out = Vec::new();
    let mut idx = vec![-k; d - 1];
    loop {
        let free: Vec<f64> = idx.iter().map(|&i| i as f64 * step).collect();
        let last = -free.iter().sum::<f64>();
        if last.abs() <= bound + 1e-9 {
            out.push(DiagonalFlowVector::from_free(&free)?);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] <= k {
                break;
            }
            idx[pos] = -k;
            pos += 1;
        }
    }
}
