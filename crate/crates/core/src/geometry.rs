//! Points, aligned boxes and windows over an exact or floating scalar.

use std::fmt::Debug;

use twofloat::TwoFloat;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};

/// Ordered field-like scalar used by the geometry and the verifier.
pub trait Scalar: Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

/// Scalars that approximate the reals, for lattice coordinates.
pub trait RealScalar: Scalar + Copy {
    fn from_f64(v: f64) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
}

impl RealScalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
}

impl Scalar for TwoFloat {
    fn zero() -> Self {
        TwoFloat::from(0.0)
    }
    fn one() -> Self {
        TwoFloat::from(1.0)
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn sub(&self, other: &Self) -> Self {
        *self - *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl RealScalar for TwoFloat {
    fn from_f64(v: f64) -> Self {
        TwoFloat::from(v)
    }
    fn exp(&self) -> Self {
        TwoFloat::exp(*self)
    }
    fn sqrt(&self) -> Self {
        TwoFloat::sqrt(*self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for DyadicRational {
    fn zero() -> Self {
        DyadicRational::zero()
    }
    fn one() -> Self {
        DyadicRational::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        DyadicRational::to_f64(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply<T: Scalar>(self, v: &T) -> T {
        match self {
            Sign::Plus => v.clone(),
            Sign::Minus => v.neg(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Self::new(vec![T::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point::new(self.coords.iter().map(Scalar::to_f64).collect())
    }

    /// Coordinate-wise sign flip.
    pub fn reflect(&self, signs: &[Sign]) -> Result<Self> {
        check_dim(self.dim(), signs.len())?;
        Ok(Self::new(
            self.coords
                .iter()
                .zip(signs)
                .map(|(c, s)| s.apply(c))
                .collect(),
        ))
    }

    pub fn squared_distance(&self, other: &Self) -> Result<T> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(T::zero(), |acc, (a, b)| {
                let d = a.sub(b);
                acc.add(&d.mul(&d))
            }))
    }
}

impl<T> std::ops::Index<usize> for Point<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Axis-parallel box with a per-face open/closed flag.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignedBox<T> {
    lower: Point<T>,
    upper: Point<T>,
    lower_open: Vec<bool>,
    upper_open: Vec<bool>,
}

impl<T: Scalar> AlignedBox<T> {
    pub fn with_openness(
        lower: Point<T>,
        upper: Point<T>,
        lower_open: Vec<bool>,
        upper_open: Vec<bool>,
    ) -> Result<Self> {
        let d = lower.dim();
        check_dim(d, upper.dim())?;
        check_dim(d, lower_open.len())?;
        check_dim(d, upper_open.len())?;
        if d == 0 {
            return Err(Error::InvalidBox("zero-dimensional box".into()));
        }
        for i in 0..d {
            if !(lower[i] <= upper[i]) {
                return Err(Error::InvalidBox(format!(
                    "lower[{i}] = {:?} exceeds upper[{i}] = {:?}",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(Self {
            lower,
            upper,
            lower_open,
            upper_open,
        })
    }

    pub fn closed(lower: Point<T>, upper: Point<T>) -> Result<Self> {
        let d = lower.dim();
        Self::with_openness(lower, upper, vec![false; d], vec![false; d])
    }

    pub fn open(lower: Point<T>, upper: Point<T>) -> Result<Self> {
        let d = lower.dim();
        Self::with_openness(lower, upper, vec![true; d], vec![true; d])
    }

    pub fn from_bounds(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        Self::closed(Point::new(lower), Point::new(upper))
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &Point<T> {
        &self.lower
    }

    pub fn upper(&self) -> &Point<T> {
        &self.upper
    }

    pub fn lower_open(&self) -> &[bool] {
        &self.lower_open
    }

    pub fn upper_open(&self) -> &[bool] {
        &self.upper_open
    }

    pub fn side(&self, i: usize) -> T {
        self.upper[i].sub(&self.lower[i])
    }

    /// Product of side lengths; exact for exact scalars.
    pub fn volume(&self) -> T {
        (0..self.dim()).fold(T::one(), |acc, i| acc.mul(&self.side(i)))
    }

    pub fn contains(&self, p: &Point<T>) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        Ok((0..self.dim()).all(|i| {
            let x = &p[i];
            let lo_ok = if self.lower_open[i] {
                *x > self.lower[i]
            } else {
                *x >= self.lower[i]
            };
            let hi_ok = if self.upper_open[i] {
                *x < self.upper[i]
            } else {
                *x <= self.upper[i]
            };
            lo_ok && hi_ok
        }))
    }

    /// Whether `p` lies strictly inside, ignoring the face flags.
    pub fn interior_contains(&self, p: &Point<T>) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        Ok((0..self.dim()).all(|i| p[i] > self.lower[i] && p[i] < self.upper[i]))
    }

    pub fn as_closed(&self) -> Self {
        let d = self.dim();
        Self {
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            lower_open: vec![false; d],
            upper_open: vec![false; d],
        }
    }

    /// Image under a coordinate-wise sign flip; faces swap roles on flipped axes.
    pub fn reflect(&self, signs: &[Sign]) -> Result<Self> {
        check_dim(self.dim(), signs.len())?;
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        let mut lower_open = Vec::with_capacity(self.dim());
        let mut upper_open = Vec::with_capacity(self.dim());
        for (i, s) in signs.iter().enumerate() {
            match s {
                Sign::Plus => {
                    lower.push(self.lower[i].clone());
                    upper.push(self.upper[i].clone());
                    lower_open.push(self.lower_open[i]);
                    upper_open.push(self.upper_open[i]);
                }
                Sign::Minus => {
                    lower.push(self.upper[i].neg());
                    upper.push(self.lower[i].neg());
                    lower_open.push(self.upper_open[i]);
                    upper_open.push(self.lower_open[i]);
                }
            }
        }
        Self::with_openness(Point::new(lower), Point::new(upper), lower_open, upper_open)
    }

    pub fn translate(&self, offset: &[T]) -> Result<Self> {
        check_dim(self.dim(), offset.len())?;
        let shift = |p: &Point<T>| {
            Point::new(p.coords().iter().zip(offset).map(|(a, b)| a.add(b)).collect())
        };
        Self::with_openness(
            shift(&self.lower),
            shift(&self.upper),
            self.lower_open.clone(),
            self.upper_open.clone(),
        )
    }

    /// Split along the coordinate hyperplanes.
    ///
    /// Pieces come in orthant order: `+` before `-` on each axis, first axis
    /// most significant. Faces created by the split are closed. A side that
    /// touches zero without crossing it yields a single piece on that axis.
    pub fn quadrant_pieces(&self) -> Vec<(Vec<Sign>, AlignedBox<T>)> {
        let zero = T::zero();
        // per-axis list of (sign, lo, hi, lo_open, hi_open)
        let mut axes: Vec<Vec<(Sign, T, T, bool, bool)>> = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let (lo, hi) = (&self.lower[i], &self.upper[i]);
            let mut parts = Vec::with_capacity(2);
            if *hi > zero || *lo >= zero {
                let (plo, plo_open) = if *lo >= zero {
                    (lo.clone(), self.lower_open[i])
                } else {
                    (zero.clone(), false)
                };
                parts.push((Sign::Plus, plo, hi.clone(), plo_open, self.upper_open[i]));
            }
            if *lo < zero {
                let (nhi, nhi_open) = if *hi <= zero {
                    (hi.clone(), self.upper_open[i])
                } else {
                    (zero.clone(), false)
                };
                parts.push((Sign::Minus, lo.clone(), nhi, self.lower_open[i], nhi_open));
            }
            axes.push(parts);
        }

        let mut out = Vec::new();
        let mut idx = vec![0usize; self.dim()];
        loop {
            let mut signs = Vec::with_capacity(self.dim());
            let mut lower = Vec::with_capacity(self.dim());
            let mut upper = Vec::with_capacity(self.dim());
            let mut lo_open = Vec::with_capacity(self.dim());
            let mut hi_open = Vec::with_capacity(self.dim());
            for (axis, &j) in axes.iter().zip(&idx) {
                let (s, lo, hi, lop, hop) = &axis[j];
                signs.push(*s);
                lower.push(lo.clone());
                upper.push(hi.clone());
                lo_open.push(*lop);
                hi_open.push(*hop);
            }
            let piece = AlignedBox::with_openness(Point::new(lower), Point::new(upper), lo_open, hi_open)
                .expect("pieces of a valid box are valid");
            out.push((signs, piece));

            // odometer, last axis fastest
            let mut k = self.dim();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// Closed region of enumeration or verification with positive volume.
#[derive(Clone, Debug, PartialEq)]
pub struct Window<T> {
    bounds: AlignedBox<T>,
}

impl<T: Scalar> Window<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        let bounds = AlignedBox::from_bounds(lower, upper)?;
        for i in 0..bounds.dim() {
            if !(bounds.lower()[i] < bounds.upper()[i]) {
                return Err(Error::InvalidBox(format!("window side {i} has zero length")));
            }
        }
        Ok(Self { bounds })
    }

    /// `[lo, hi]^d`.
    pub fn cube(dim: usize, lo: T, hi: T) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn from_box(b: &AlignedBox<T>) -> Result<Self> {
        Self::new(b.lower().coords().to_vec(), b.upper().coords().to_vec())
    }

    pub fn bounds(&self) -> &AlignedBox<T> {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn lower(&self) -> &Point<T> {
        self.bounds.lower()
    }

    pub fn upper(&self) -> &Point<T> {
        self.bounds.upper()
    }

    pub fn contains(&self, p: &Point<T>) -> Result<bool> {
        self.bounds.contains(p)
    }

    pub fn volume(&self) -> T {
        self.bounds.volume()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type D = DyadicRational;

    fn dbox(lo: [i64; 2], hi: [i64; 2]) -> AlignedBox<D> {
        AlignedBox::from_bounds(
            lo.iter().map(|&v| D::from_int(v)).collect(),
            hi.iter().map(|&v| D::from_int(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(dbox([0, 0], [1, 1]).volume(), D::from_int(1));
        assert_eq!(dbox([0, 0], [8, 2]).volume(), D::from_int(16));
        let cube = AlignedBox::from_bounds(vec![-1.0; 3], vec![1.0; 3]).unwrap();
        assert_eq!(cube.volume(), 8.0);
        // degenerate boxes are accepted and have volume zero
        assert_eq!(dbox([3, 0], [3, 5]).volume(), D::zero());
    }

    #[test]
    fn containment_respects_openness() {
        let closed = AlignedBox::from_bounds(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(closed.contains(&Point::new(vec![1.0, 1.0])).unwrap());
        let open = AlignedBox::open(Point::new(vec![0.0, 0.0]), Point::new(vec![1.0, 1.0])).unwrap();
        assert!(!open.contains(&Point::new(vec![0.0, 0.5])).unwrap());
        let b = dbox([0, 0], [8, 2]);
        let p = Point::new(vec![D::from_int(6), D::new(3, -2)]);
        assert!(b.contains(&p).unwrap());
        assert_eq!(
            b.contains(&Point::new(vec![D::zero(); 3])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn rejects_inverted_box() {
        assert!(AlignedBox::from_bounds(vec![1.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(Window::new(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn quadrant_pieces_examples() {
        let pieces = dbox([-4, -4], [4, 4]).quadrant_pieces();
        assert_eq!(pieces.len(), 4);
        assert!(pieces.iter().all(|(_, b)| b.volume() == D::from_int(16)));
        let order: Vec<_> = pieces.iter().map(|(s, _)| s.clone()).collect();
        use Sign::*;
        assert_eq!(
            order,
            vec![vec![Plus, Plus], vec![Plus, Minus], vec![Minus, Plus], vec![Minus, Minus]]
        );

        let one = dbox([1, 2], [3, 5]).quadrant_pieces();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].0, vec![Plus, Plus]);
        assert_eq!(one[0].1, dbox([1, 2], [3, 5]));

        let two = dbox([-2, 0], [6, 8]).quadrant_pieces();
        let vols: Vec<_> = two.iter().map(|(_, b)| b.volume()).collect();
        assert_eq!(vols, vec![D::from_int(48), D::from_int(16)]);
    }

    #[test]
    fn reflect_examples() {
        use Sign::*;
        let p = Point::new(vec![1.0, 2.0]);
        assert_eq!(p.reflect(&[Minus, Plus]).unwrap(), Point::new(vec![-1.0, 2.0]));
        let o = Point::new(vec![0.0, 0.0]);
        assert_eq!(o.reflect(&[Minus, Minus]).unwrap(), o);
    }

    #[test]
    fn reflected_box_swaps_faces() {
        let b = AlignedBox::with_openness(
            Point::new(vec![1.0, 2.0]),
            Point::new(vec![3.0, 4.0]),
            vec![true, false],
            vec![false, false],
        )
        .unwrap();
        let r = b.reflect(&[Sign::Minus, Sign::Plus]).unwrap();
        assert_eq!(r.lower().coords(), &[-3.0, 2.0]);
        assert_eq!(r.upper().coords(), &[-1.0, 4.0]);
        assert_eq!(r.upper_open(), &[true, false]);
        assert_eq!(r.lower_open(), &[false, false]);
    }

    fn arb_dyadic() -> impl Strategy<Value = D> {
        (-4096i64..4096, -6i64..4).prop_map(|(m, e)| D::new(m, e))
    }

    proptest! {
        #[test]
        fn reflect_is_involutive(x in arb_dyadic(), y in arb_dyadic(), sx: bool, sy: bool) {
            let s = |b: bool| if b { Sign::Minus } else { Sign::Plus };
            let signs = [s(sx), s(sy)];
            let p = Point::new(vec![x, y]);
            prop_assert_eq!(p.reflect(&signs).unwrap().reflect(&signs).unwrap(), p);
        }

        #[test]
        fn volume_translation_invariant(a in arb_dyadic(), b in arb_dyadic(), w in arb_dyadic(),
                                         h in arb_dyadic(), dx in arb_dyadic(), dy in arb_dyadic()) {
            let bx = AlignedBox::from_bounds(vec![a.clone(), b.clone()],
                vec![&a + &w.abs(), &b + &h.abs()]).unwrap();
            let moved = bx.translate(&[dx, dy]).unwrap();
            prop_assert_eq!(bx.volume(), moved.volume());
        }

        #[test]
        fn pieces_partition_volume(a in arb_dyadic(), b in arb_dyadic(), w in arb_dyadic(), h in arb_dyadic()) {
            let bx = AlignedBox::from_bounds(vec![a.clone(), b.clone()],
                vec![&a + &w.abs(), &b + &h.abs()]).unwrap();
            let pieces = bx.quadrant_pieces();
            let total = pieces.iter().fold(D::zero(), |acc, (_, p)| acc + p.volume());
            prop_assert_eq!(total, bx.volume());
            for (signs, piece) in &pieces {
                for (i, s) in signs.iter().enumerate() {
                    match s {
                        Sign::Plus => prop_assert!(piece.lower()[i] >= D::zero()),
                        Sign::Minus => prop_assert!(piece.upper()[i] <= D::zero()),
                    }
                }
            }
        }
    }
}
