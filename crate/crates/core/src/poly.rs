//! Univariate polynomials over `F`, coefficients stored low degree first.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `x - root`
    pub fn linear_root(ctx: &FieldCtx, root: FieldElem) -> Self {
        Self::from_coeffs(vec![ctx.neg(root), FieldElem::ONE])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Uniform polynomial with `len` coefficients (degree `< len`).
    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, len: usize, rng: &mut R) -> Self {
        let order = ctx.order();
        Self::from_coeffs(
            (0..len)
                .map(|_| FieldElem(rng.gen_range(0..order) as u32))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the end.
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FieldElem) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Lagrange interpolation through `points`; x-coordinates must be distinct.
    pub fn interpolate(ctx: &FieldCtx, points: &[(FieldElem, FieldElem)]) -> Result<Poly> {
        for (i, (xi, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|(xj, _)| xj == xi) {
                return Err(Error::DuplicatePoint(xi.0));
            }
        }
        let mut acc = Poly::zero();
        for (i, &(xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Poly::constant(FieldElem::ONE);
            let mut denom = FieldElem::ONE;
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(ctx, &Poly::linear_root(ctx, xj));
                    denom = ctx.mul(denom, ctx.sub(xi, xj));
                }
            }
            acc = acc.add(ctx, &basis.scale(ctx, ctx.div(yi, denom)));
        }
        Ok(acc)
    }

    pub fn render(&self, ctx: &FieldCtx) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let coef = if c == FieldElem::ONE && i > 0 {
                    String::new()
                } else {
                    format!("({})", ctx.render(c))
                };
                match i {
                    0 => coef,
                    1 => format!("{coef}x"),
                    _ => format!("{coef}x^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}
