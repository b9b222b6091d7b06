//! Integer polynomials: Sturm root isolation, double-double root refinement,
//! squarefreeness and a small-degree irreducibility test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

type RatPoly = Vec<BigRational>;

impl IntPoly {
    /// From coefficients listed highest degree first, constant term last.
    pub fn from_descending(desc: &[i64]) -> Result<Self> {
        let first = desc.iter().position(|&c| c != 0);
        let Some(first) = first else {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        };
        let mut coeffs: Vec<i64> = desc[first..].to_vec();
        coeffs.reverse();
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficients highest degree first.
    pub fn descending(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn eval_tf(&self, x: TwoFloat) -> TwoFloat {
        self.coeffs
            .iter()
            .rev()
            .fold(TwoFloat::from(0.0), |acc, &c| acc * x + TwoFloat::from(c))
    }

    fn eval_derivative_tf(&self, x: TwoFloat) -> TwoFloat {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(TwoFloat::from(0.0), |acc, (i, &c)| acc * x + TwoFloat::from(c * i as i64))
    }

    fn to_rat(&self) -> RatPoly {
        self.coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    /// Whether the polynomial has no repeated root.
    pub fn is_squarefree(&self) -> bool {
        let f = self.to_rat();
        let g = rat_gcd(f.clone(), derivative(&f));
        g.len() <= 1
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let chain = sturm_chain(&self.to_rat());
        let b = cauchy_bound(&self.to_rat());
        sign_changes(&chain, &(-b.clone())) - sign_changes(&chain, &b)
    }

    /// Disjoint half-open rational intervals `(a, b]`, one per real root, in
    /// increasing order.
    pub fn isolate_real_roots(&self) -> Vec<(BigRational, BigRational)> {
        let f = self.to_rat();
        let chain = sturm_chain(&f);
        let b = cauchy_bound(&f);
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = sign_changes(&chain, &lo) - sign_changes(&chain, &hi);
            match n {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// All real roots in increasing order, refined to double-double precision.
    ///
    /// Sturm bisection narrows each isolating interval to width below 2^-40,
    /// then Newton steps in double-double arithmetic polish the midpoint.
    pub fn real_roots_tf(&self) -> Vec<TwoFloat> {
        let f = self.to_rat();
        let chain = sturm_chain(&f);
        let target = BigRational::new(BigInt::one(), BigInt::one() << 40);
        self.isolate_real_roots()
            .into_iter()
            .map(|(mut lo, mut hi)| {
                if eval_rat(&f, &hi).is_zero() {
                    return rat_to_tf(&hi);
                }
                while &hi - &lo > target {
                    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                    if sign_changes(&chain, &lo) - sign_changes(&chain, &mid) == 1 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                    if eval_rat(&f, &hi).is_zero() {
                        return rat_to_tf(&hi);
                    }
                }
                let (lo_tf, hi_tf) = (rat_to_tf(&lo), rat_to_tf(&hi));
                let mut x = rat_to_tf(&((&lo + &hi) / BigRational::from_integer(2.into())));
                for _ in 0..6 {
                    let fx = self.eval_tf(x);
                    let dfx = self.eval_derivative_tf(x);
                    if dfx == 0.0 {
                        break;
                    }
                    let next = x - fx / dfx;
                    if next < lo_tf || next > hi_tf {
                        break;
                    }
                    x = next;
                }
                x
            })
            .collect()
    }

    /// Irreducibility over the rationals for monic polynomials of degree at
    /// most 4; `None` beyond that.
    pub fn is_irreducible(&self) -> Option<bool> {
        let d = self.degree();
        if d <= 1 {
            return Some(true);
        }
        if d > 4 || !self.is_monic() {
            return None;
        }
        // monic integer polynomial: rational roots are integer divisors of c0
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return Some(false);
        }
        let divs = divisors(c0.unsigned_abs());
        for &r in &divs {
            for r in [r as i64, -(r as i64)] {
                let v = self.coeffs.iter().rev().fold(0i128, |acc, &c| acc * r as i128 + c as i128);
                if v == 0 {
                    return Some(false);
                }
            }
        }
        if d < 4 {
            return Some(true);
        }
        // (x^2 + a x + b)(x^2 + c x + e) with b e = c0
        let (c1, c2, c3) = (self.coeffs[1], self.coeffs[2], self.coeffs[3]);
        for &b in &divs {
            for b in [b as i64, -(b as i64)] {
                let e = c0 / b;
                // a + c = c3, ac = c2 - b - e  =>  a^2 - c3 a + (c2 - b - e) = 0
                let disc = (c3 as i128).pow(2) - 4 * (c2 - b - e) as i128;
                if disc < 0 {
                    continue;
                }
                let s = (disc as f64).sqrt().round() as i128;
                for s in [s - 1, s, s + 1] {
                    if s < 0 || s * s != disc || (c3 as i128 + s) % 2 != 0 {
                        continue;
                    }
                    for a in [(c3 as i128 + s) / 2, (c3 as i128 - s) / 2] {
                        let c = c3 as i128 - a;
                        if a * e as i128 + c * b as i128 == c1 as i128 {
                            return Some(false);
                        }
                    }
                }
            }
        }
        Some(true)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

fn rat_to_tf(r: &BigRational) -> TwoFloat {
    // numerator and denominator are small after the bisection, so the quotient
    // of their double-double images is accurate to double-double precision
    let to_tf = |v: &BigInt| match v.to_i128() {
        Some(i) => TwoFloat::from(i),
        None => TwoFloat::from(v.to_f64().unwrap_or(f64::NAN)),
    };
    to_tf(r.numer()) / to_tf(r.denom())
}

fn trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &RatPoly) -> RatPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn rat_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let q = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &q * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn rat_gcd(mut a: RatPoly, mut b: RatPoly) -> RatPoly {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = rat_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn eval_rat(p: &RatPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.clone(), derivative(f)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = rat_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = eval_rat(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `1 + max |a_i / a_n|`, an integer upper bound on the root moduli.
fn cauchy_bound(f: &RatPoly) -> BigRational {
    let lead = f.last().expect("nonzero polynomial").abs();
    let m = f[..f.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    (m + BigRational::one()).ceil()
}
