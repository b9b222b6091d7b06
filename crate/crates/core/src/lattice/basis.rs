use rayon::prelude::*;
use twofloat::TwoFloat;

use super::field::TotallyRealField;
use super::reduce::{self, Columns};
use crate::error::{Error, Result};
use crate::geometry::{check_dim, AlignedBox, Point, Window};
use crate::TOLERANCE;

/// A full-rank lattice in `R^d` stored by its basis matrix.
///
/// `matrix[i][j]` is coordinate `i` of basis vector `j`. For a field basis the
/// columns are the embeddings of `1, α, …, α^(d-1)`.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    matrix: Vec<Vec<TwoFloat>>,
    covolume: TwoFloat,
    unscaled_covolume: TwoFloat,
    scale: TwoFloat,
}

fn abs_det(m: &[Vec<TwoFloat>]) -> TwoFloat {
    let n = m.len();
    let mut a: Vec<Vec<TwoFloat>> = m.to_vec();
    let mut det = TwoFloat::from(1.0);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&x, &y| a[x][k].abs().partial_cmp(&a[y][k].abs()).unwrap())
            .unwrap();
        if a[piv][k] == TwoFloat::from(0.0) {
            return TwoFloat::from(0.0);
        }
        a.swap(k, piv);
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            let pivot_row = a[k].clone();
            for (x, &v) in a[i].iter_mut().zip(&pivot_row).skip(k) {
                *x -= f * v;
            }
        }
    }
    det.abs()
}

impl LatticeBasis {
    fn from_matrix(matrix: Vec<Vec<TwoFloat>>) -> Result<Self> {
        let d = matrix.len();
        if d == 0 || matrix.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument("basis must be a nonempty square matrix".into()));
        }
        let covolume = abs_det(&matrix);
        if f64::from(covolume) <= TOLERANCE {
            return Err(Error::InvalidArgument("basis is singular".into()));
        }
        Ok(Self {
            matrix,
            covolume,
            unscaled_covolume: covolume,
            scale: TwoFloat::from(1.0),
        })
    }

    /// Rows of the matrix, `rows[i][j]` = coordinate `i` of basis vector `j`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_matrix(
            rows.into_iter()
                .map(|r| r.into_iter().map(TwoFloat::from).collect())
                .collect(),
        )
    }

    /// The standard lattice `Z^d`.
    pub fn identity(d: usize) -> Result<Self> {
        Self::from_rows(
            (0..d)
                .map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<TwoFloat>] {
        &self.matrix
    }

    /// `|det|` of the stored matrix.
    pub fn covolume(&self) -> TwoFloat {
        self.covolume
    }

    /// `|det|` before any normalization.
    pub fn unscaled_covolume(&self) -> TwoFloat {
        self.unscaled_covolume
    }

    /// Factor applied to the raw embedding; `1` unless normalized.
    pub fn scale(&self) -> TwoFloat {
        self.scale
    }

    pub fn columns_f64(&self) -> Columns {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| f64::from(self.matrix[i][j])).collect())
            .collect()
    }

    /// `B c` in double-double precision.
    pub fn point(&self, c: &[i64]) -> Result<Point<TwoFloat>> {
        check_dim(self.dim(), c.len())?;
        Ok(Point::new(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(c)
                        .fold(TwoFloat::from(0.0), |acc, (&m, &cj)| acc + m * TwoFloat::from(cj))
                })
                .collect(),
        ))
    }
}

/// Vandermonde basis of the power basis of `Z[α]`; with `normalize` the matrix
/// is scaled to determinant one.
pub fn build_basis(f: &TotallyRealField, normalize: bool) -> LatticeBasis {
    let matrix: Vec<Vec<TwoFloat>> = f
        .roots()
        .iter()
        .map(|&r| {
            let mut row = Vec::with_capacity(f.degree());
            let mut pow = TwoFloat::from(1.0);
            for _ in 0..f.degree() {
                row.push(pow);
                pow *= r;
            }
            row
        })
        .collect();
    let mut b = LatticeBasis::from_matrix(matrix).expect("distinct roots give a nonsingular Vandermonde");
    if normalize {
        let d = TwoFloat::from(b.dim() as f64);
        let s = (-b.covolume.ln() / d).exp();
        for row in b.matrix.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        b.scale = s;
        b.covolume = abs_det(&b.matrix);
    }
    b
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticePoint {
    /// Integer coordinates in the stored basis.
    pub coeffs: Vec<i64>,
    pub point: Point<TwoFloat>,
}

/// Every lattice point in the closed window, widened by the tolerance.
/// Output is sorted by coefficient vector.
pub fn enumerate_lattice(b: &LatticeBasis, w: &Window<f64>) -> Result<Vec<LatticePoint>> {
    let d = b.dim();
    check_dim(d, w.dim())?;
    let cap = crate::point_cap();
    let lo: Vec<f64> = w.lower().coords().iter().map(|v| v - TOLERANCE).collect();
    let hi: Vec<f64> = w.upper().coords().iter().map(|v| v + TOLERANCE).collect();

    let expected = w.volume() / f64::from(b.covolume());
    if !expected.is_finite() || expected > cap as f64 {
        return Err(Error::WindowTooLarge {
            estimate: expected,
            cap,
        });
    }

    let (reduced, u) = reduce::lll(&b.columns_f64(), 0.99);
    let inv = reduce::inverse_rows(&reduced).ok_or(Error::DegenerateRoots)?;
    // bounds on reduced coordinates over the window; the slack absorbs
    // rounding in the f64 inverse
    let ranges: Vec<(i64, i64)> = inv
        .iter()
        .map(|row| {
            let (mut mn, mut mx) = (0.0, 0.0);
            for ((&r, &l), &h) in row.iter().zip(&lo).zip(&hi) {
                let (a, c) = (r * l, r * h);
                mn += a.min(c);
                mx += a.max(c);
            }
            let slack = 1e-7 * (1.0 + mn.abs().max(mx.abs()));
            ((mn - slack).floor() as i64, (mx + slack).ceil() as i64)
        })
        .collect();
    let boxes: f64 = ranges.iter().map(|&(a, c)| (c - a + 1) as f64).product();
    if boxes > 64.0 * cap as f64 + 1e6 {
        return Err(Error::WindowTooLarge {
            estimate: boxes,
            cap,
        });
    }

    let (first_lo, first_hi) = ranges[0];
    let mut out: Vec<LatticePoint> = (first_lo..=first_hi)
        .into_par_iter()
        .flat_map_iter(|c0| {
            let mut found = Vec::new();
            let mut cur = vec![0i64; d];
            cur[0] = c0;
            walk(b, &reduced, &u, &ranges, &lo, &hi, 1, &mut cur, &mut found);
            found
        })
        .collect();
    if out.len() > cap {
        return Err(Error::WindowTooLarge {
            estimate: out.len() as f64,
            cap,
        });
    }
    out.sort_by(|x, y| x.coeffs.cmp(&y.coeffs));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    b: &LatticeBasis,
    reduced: &Columns,
    u: &[Vec<i64>],
    ranges: &[(i64, i64)],
    lo: &[f64],
    hi: &[f64],
    level: usize,
    cur: &mut Vec<i64>,
    found: &mut Vec<LatticePoint>,
) {
    let d = ranges.len();
    if level == d {
        let approx = reduce::apply(reduced, cur);
        let near = approx
            .iter()
            .zip(lo.iter().zip(hi))
            .all(|(&x, (&l, &h))| x >= l - 1e-6 && x <= h + 1e-6);
        if !near {
            return;
        }
        let coeffs: Vec<i64> = (0..d)
            .map(|i| u[i].iter().zip(cur.iter()).map(|(a, c)| a * c).sum())
            .collect();
        let p = b.point(&coeffs).expect("dimension checked");
        let inside = p
            .coords()
            .iter()
            .zip(lo.iter().zip(hi))
            .all(|(&x, (&l, &h))| x >= TwoFloat::from(l) && x <= TwoFloat::from(h));
        if inside {
            found.push(LatticePoint { coeffs, point: p });
        }
        return;
    }
    let (a, c) = ranges[level];
    for v in a..=c {
        cur[level] = v;
        walk(b, reduced, u, ranges, lo, hi, level + 1, cur, found);
    }
}

/// A lattice point in the box, respecting its open faces, or `None`.
pub fn hit_box_lattice(b: &LatticeBasis, r: &AlignedBox<f64>) -> Result<Option<LatticePoint>> {
    check_dim(b.dim(), r.dim())?;
    let w = Window::new(r.lower().coords().to_vec(), r.upper().coords().to_vec())?;
    let pts = enumerate_lattice(b, &w)?;
    Ok(pts.into_iter().find(|lp| {
        let p = lp.point.to_f64();
        (0..r.dim()).all(|i| {
            let (l, h) = (r.lower()[i], r.upper()[i]);
            let above = if r.lower_open()[i] { p[i] > l } else { p[i] >= l - TOLERANCE };
            let below = if r.upper_open()[i] { p[i] < h } else { p[i] <= h + TOLERANCE };
            above && below
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::field::{build_field, preset_field, Preset};

    fn sqrt2_basis() -> LatticeBasis {
        build_basis(&build_field(&[1, 0, -2]).unwrap(), false)
    }

    #[test]
    fn quadratic_matrix_and_covolume() {
        let b = sqrt2_basis();
        let m = b.matrix();
        let s2 = 2f64.sqrt();
        assert_eq!(f64::from(m[0][0]), 1.0);
        assert!((f64::from(m[0][1]) - s2).abs() < 1e-15);
        assert!((f64::from(m[1][1]) + s2).abs() < 1e-15);
        assert!((f64::from(b.covolume()) - 2.0 * s2).abs() < 1e-12);
        assert!((f64::from(b.covolume()) - 2.828_427_1).abs() < 1e-7);
    }

    #[test]
    fn normalized_has_unit_determinant() {
        for p in Preset::ALL {
            let b = build_basis(&preset_field(p), true);
            assert!((f64::from(b.covolume()) - 1.0).abs() < TOLERANCE);
            assert!(f64::from(b.unscaled_covolume()) > 0.0);
        }
    }

    #[test]
    fn small_window_only_origin() {
        let b = sqrt2_basis();
        let w = Window::cube(2, -0.5, 0.5).unwrap();
        let pts = enumerate_lattice(&b, &w).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].coeffs, vec![0, 0]);
    }

    #[test]
    fn window_contains_unit_and_generator() {
        let b = sqrt2_basis();
        let w = Window::cube(2, -3.0, 3.0).unwrap();
        let pts = enumerate_lattice(&b, &w).unwrap();
        assert!(pts.iter().any(|p| p.coeffs == vec![1, 0]));
        assert!(pts.iter().any(|p| p.coeffs == vec![0, 1]));
    }

    #[test]
    fn hit_examples() {
        let b = sqrt2_basis();
        let r = AlignedBox::from_bounds(vec![0.9, 0.9], vec![1.1, 1.1]).unwrap();
        let hit = hit_box_lattice(&b, &r).unwrap().unwrap();
        assert_eq!(hit.coeffs, vec![1, 0]);
        let r = AlignedBox::from_bounds(vec![0.1, 0.1], vec![0.2, 0.2]).unwrap();
        assert!(hit_box_lattice(&b, &r).unwrap().is_none());
    }

    #[test]
    fn singular_rows_rejected() {
        assert!(LatticeBasis::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
    }
}
