use twofloat::TwoFloat;

use super::poly::IntPoly;
use crate::error::{Error, Result};
use crate::TOLERANCE;

/// Built-in totally real polynomials with small discriminants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `x^2 - 2`
    Quadratic,
    /// `x^3 + x^2 - 2x - 1`, minimal polynomial of `2 cos(2π/7)`
    Cubic,
    /// `x^4 - 4x^2 + 2`, roots `±sqrt(2 ± sqrt 2)`
    Quartic,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Quadratic, Preset::Cubic, Preset::Quartic];

    /// Coefficients, highest degree first.
    pub fn coefficients(self) -> &'static [i64] {
        match self {
            Preset::Quadratic => &[1, 0, -2],
            Preset::Cubic => &[1, 1, -2, -1],
            Preset::Quartic => &[1, 0, -4, 0, 2],
        }
    }

    pub fn for_degree(d: usize) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.coefficients().len() == d + 1)
    }
}

/// A monic integer polynomial with only real roots, and those roots.
#[derive(Clone, Debug)]
pub struct TotallyRealField {
    poly: IntPoly,
    /// Decreasing order; `roots[i]` is the image of the generator under the
    /// `i`-th real embedding.
    roots: Vec<TwoFloat>,
    irreducible: Option<bool>,
}

impl TotallyRealField {
    pub fn polynomial(&self) -> &IntPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn roots(&self) -> &[TwoFloat] {
        &self.roots
    }

    /// `Some(true)` when irreducibility was confirmed.
    pub fn irreducible(&self) -> Option<bool> {
        self.irreducible
    }
}

pub fn build_field(coeffs_desc: &[i64]) -> Result<TotallyRealField> {
    let poly = IntPoly::from_descending(coeffs_desc)?;
    let d = poly.degree();
    if d < 2 {
        return Err(Error::InvalidPolynomial(format!("degree {d} is below 2")));
    }
    if !poly.is_monic() {
        return Err(Error::InvalidPolynomial("leading coefficient must be 1".into()));
    }
    if !poly.is_squarefree() {
        return Err(Error::DegenerateRoots);
    }
    let real = poly.count_real_roots();
    if real < d {
        return Err(Error::NotTotallyReal {
            degree: d,
            real_roots: real,
        });
    }
    let mut roots = poly.real_roots_tf();
    roots.reverse();
    for pair in roots.windows(2) {
        if (pair[0] - pair[1]).abs() < TOLERANCE {
            return Err(Error::DegenerateRoots);
        }
    }
    if roots.iter().any(|&r| poly.eval_tf(r).abs() >= TOLERANCE) {
        return Err(Error::DegenerateRoots);
    }
    let irreducible = poly.is_irreducible();
    if irreducible != Some(true) {
        log::warn!(
            "polynomial {:?} is {}; the lattice is still a valid embedding of Z[x]/(f)",
            poly.descending(),
            if irreducible == Some(false) { "reducible" } else { "of unknown irreducibility" }
        );
    }
    Ok(TotallyRealField {
        poly,
        roots,
        irreducible,
    })
}

pub fn preset_field(p: Preset) -> TotallyRealField {
    build_field(p.coefficients()).expect("presets are totally real")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: TwoFloat, b: f64, tol: f64) -> bool {
        (f64::from(a) - b).abs() < tol
    }

    #[test]
    fn quadratic_roots() {
        let f = build_field(&[1, 0, -2]).unwrap();
        assert!(close(f.roots()[0], std::f64::consts::SQRT_2, 1e-15));
        assert!(close(f.roots()[1], -std::f64::consts::SQRT_2, 1e-15));
        assert_eq!(f.irreducible(), Some(true));
    }

    #[test]
    fn cubic_roots_are_cosines() {
        let f = preset_field(Preset::Cubic);
        let expected: Vec<f64> = [1.0, 2.0, 3.0]
            .iter()
            .map(|k| 2.0 * (2.0 * std::f64::consts::PI * k / 7.0).cos())
            .collect();
        assert!(close(f.roots()[0], expected[0], 1e-14));
        assert!(close(f.roots()[1], expected[1], 1e-14));
        assert!(close(f.roots()[2], expected[2], 1e-14));
        assert!(close(f.roots()[0], 1.24698, 1e-5));
        assert!(close(f.roots()[1], -0.44504, 1e-5));
        assert!(close(f.roots()[2], -1.80194, 1e-5));
    }

    #[test]
    fn quartic_closed_form() {
        let f = preset_field(Preset::Quartic);
        let s2 = 2f64.sqrt();
        let expected = [(2.0 + s2).sqrt(), (2.0 - s2).sqrt(), -(2.0 - s2).sqrt(), -(2.0 + s2).sqrt()];
        for (r, e) in f.roots().iter().zip(expected) {
            assert!(close(*r, e, 1e-14));
        }
    }

    #[test]
    fn residuals_are_tiny() {
        for p in Preset::ALL {
            let f = preset_field(p);
            for &r in f.roots() {
                assert!(f64::from(f.polynomial().eval_tf(r).abs()) < 1e-25);
            }
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            build_field(&[1, 0, 1]).unwrap_err(),
            Error::NotTotallyReal { degree: 2, real_roots: 0 }
        );
        assert_eq!(build_field(&[1, -2, 1]).unwrap_err(), Error::DegenerateRoots);
        assert!(matches!(build_field(&[2, 0, -1]), Err(Error::InvalidPolynomial(_))));
        assert!(matches!(build_field(&[1, -3]), Err(Error::InvalidPolynomial(_))));
    }

    #[test]
    fn reducible_input_is_accepted_with_warning() {
        // (x - 1)(x - 2) is totally real and squarefree
        let f = build_field(&[1, -3, 2]).unwrap();
        assert_eq!(f.irreducible(), Some(false));
    }
}
