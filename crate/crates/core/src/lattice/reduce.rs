//! Floating-point lattice kernels: LLL reduction, QR factors and sphere
//! enumeration for shortest and closest vectors in dimension at most four or so.

/// Basis given by columns, `cols[j][i]` is coordinate `i` of basis vector `j`.
pub type Columns = Vec<Vec<f64>>;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(cols: &Columns) -> (Columns, Vec<Vec<f64>>, Vec<f64>) {
    let n = cols.len();
    let mut star: Columns = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = cols[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&cols[i], &star[j]) / norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= mu[i][j] * sk;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (star, mu, norms)
}

/// LLL-reduced basis and the unimodular transform `U` with
/// `reduced[j] = Σ_i cols[i] * U[i][j]`.
pub fn lll(cols: &Columns, delta: f64) -> (Columns, Vec<Vec<i64>>) {
    let n = cols.len();
    let mut b = cols.clone();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu, _) = gram_schmidt(&b);
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                let qi = q as i64;
                for row in u.iter_mut() {
                    row[k] -= qi * row[j];
                }
            }
        }
        let (_, mu, norms) = gram_schmidt(&b);
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        }
    }
    (b, u)
}

/// `B = Q R` with orthonormal `Q` and upper-triangular `R`, for a square
/// nonsingular basis.
#[derive(Clone, Debug)]
pub struct Qr {
    q: Columns,
    /// `r[i][j]`, zero below the diagonal.
    r: Vec<Vec<f64>>,
}

impl Qr {
    pub fn new(cols: &Columns) -> Self {
        let n = cols.len();
        let (star, mu, norms) = gram_schmidt(cols);
        let q: Columns = star
            .iter()
            .zip(&norms)
            .map(|(v, &nn)| v.iter().map(|x| x / nn.sqrt()).collect())
            .collect();
        let mut r = vec![vec![0.0; n]; n];
        for j in 0..n {
            r[j][j] = norms[j].sqrt();
            for i in 0..j {
                r[i][j] = mu[j][i] * norms[i].sqrt();
            }
        }
        Self { q, r }
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    /// Expected number of search nodes for a ball of the given squared
    /// radius, used to refuse hopeless searches up front.
    pub fn node_estimate(&self, radius_sq: f64) -> f64 {
        let rad = radius_sq.sqrt();
        (0..self.dim()).map(|k| 2.0 * rad / self.r[k][k].abs() + 1.0).product()
    }

    fn project(&self, target: &[f64]) -> Vec<f64> {
        self.q.iter().map(|qk| dot(qk, target)).collect()
    }

    /// Babai nearest-plane coefficients for `target`.
    pub fn nearest_plane(&self, target: &[f64]) -> Vec<i64> {
        let n = self.dim();
        let y = self.project(target);
        let mut c = vec![0i64; n];
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|j| self.r[k][j] * c[j] as f64).sum();
            c[k] = ((y[k] - s) / self.r[k][k]).round() as i64;
        }
        c
    }

    /// Every integer vector `c` with `|B c - target|^2 <= radius_sq`, passed to
    /// `visit` with its squared distance. When `shrink` is set the radius
    /// tightens to each visited distance, which turns the walk into an exact
    /// closest-vector search. Returns the number of nodes explored.
    pub fn search<F>(&self, target: &[f64], mut radius_sq: f64, shrink: bool, mut visit: F) -> usize
    where
        F: FnMut(&[i64], f64) -> bool,
    {
        let n = self.dim();
        let y = self.project(target);
        let mut c = vec![0i64; n];
        let mut nodes = 0;
        self.descend(n, &y, 0.0, &mut radius_sq, shrink, &mut c, &mut nodes, &mut visit);
        nodes
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<F>(
        &self,
        level: usize,
        y: &[f64],
        partial: f64,
        radius_sq: &mut f64,
        shrink: bool,
        c: &mut Vec<i64>,
        nodes: &mut usize,
        visit: &mut F,
    ) where
        F: FnMut(&[i64], f64) -> bool,
    {
        *nodes += 1;
        if level == 0 {
            if visit(c, partial) && shrink {
                *radius_sq = radius_sq.min(partial);
            }
            return;
        }
        let k = level - 1;
        let n = self.dim();
        let s: f64 = (k + 1..n).map(|j| self.r[k][j] * c[j] as f64).sum();
        let rkk = self.r[k][k];
        let center = (y[k] - s) / rkk;
        let room = *radius_sq - partial;
        if room < 0.0 {
            return;
        }
        let half = room.sqrt() / rkk.abs();
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        // walk outward from the center so shrinking prunes early
        let start = center.round() as i64;
        let mut order = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        order.push(start);
        for step in 1.. {
            let (a, b) = (start + step, start - step);
            if a > hi && b < lo {
                break;
            }
            if a <= hi {
                order.push(a);
            }
            if b >= lo {
                order.push(b);
            }
        }
        for ck in order {
            if ck < lo || ck > hi {
                continue;
            }
            let diff = rkk * (ck as f64 - center);
            let next = partial + diff * diff;
            if next > *radius_sq {
                continue;
            }
            c[k] = ck;
            self.descend(k, y, next, radius_sq, shrink, c, nodes, visit);
        }
        c[k] = 0;
    }
}

pub fn apply(cols: &Columns, c: &[i64]) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (col, &cj) in cols.iter().zip(c) {
        for (o, v) in out.iter_mut().zip(col) {
            *o += v * cj as f64;
        }
    }
    out
}

/// `Σ_j cols[j] * c[j]` for real coefficients.
pub fn apply_real(cols: &Columns, c: &[f64]) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (col, &cj) in cols.iter().zip(c) {
        for (o, v) in out.iter_mut().zip(col) {
            *o += v * cj;
        }
    }
    out
}

/// Inverse of a small square matrix given by columns, as rows of `B^-1`.
pub fn inverse_rows(cols: &Columns) -> Option<Vec<Vec<f64>>> {
    let n = cols.len();
    // augmented [B | I] with B[i][j] = cols[j][i]
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| cols[j][i]).collect();
            row.extend((0..n).map(|j| f64::from(u8::from(i == j))));
            row
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))?;
        if a[piv][k] == 0.0 {
            return None;
        }
        a.swap(k, piv);
        let p = a[k][k];
        for v in a[k].iter_mut() {
            *v /= p;
        }
        for i in 0..n {
            if i != k {
                let f = a[i][k];
                if f != 0.0 {
                    let rowk = a[k].clone();
                    for (v, w) in a[i].iter_mut().zip(&rowk) {
                        *v -= f * w;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
