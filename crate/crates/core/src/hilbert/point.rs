use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dims, Error, Result};

/// A vector in ℝⁿ with the Euclidean inner product.
///
/// Every coordinate of a `Point` built through [`Point::new`] is finite.
/// Arithmetic helpers produce unchecked results; callers that finish an
/// operation run [`Point::finite`] on the outcome so that overflow surfaces
/// as [`Error::NumericOverflow`] instead of propagating NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidProblem(
                "a point needs at least one coordinate".into(),
            ));
        }
        Point { coords }.finite("Point::new")
    }

    pub fn zeros(dim: usize) -> Self {
        Point {
            coords: vec![0.0; dim],
        }
    }

    pub fn filled(dim: usize, value: f64) -> Self {
        Point {
            coords: vec![value; dim],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Point {
            coords: vec![value],
        }
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    /// Returns `self` if every coordinate is finite.
    pub fn finite(self, context: &'static str) -> Result<Self> {
        if self.coords.iter().all(|c| c.is_finite()) {
            Ok(self)
        } else {
            Err(Error::NumericOverflow { context })
        }
    }

    pub fn inner(&self, other: &Point) -> Result<f64> {
        ensure_dims("inner product", self.dim(), other.dim())?;
        Ok(dot(&self.coords, &other.coords))
    }

    pub fn norm(&self) -> f64 {
        dot(&self.coords, &self.coords).sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        dot(&self.coords, &self.coords)
    }

    pub fn distance(&self, other: &Point) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        ensure_dims("vector addition", self.dim(), other.dim())?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        ensure_dims("vector subtraction", self.dim(), other.dim())?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, factor: f64) -> Point {
        self.map(|c| factor * c)
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &Point) -> Result<Point> {
        ensure_dims("axpy", self.dim(), other.dim())?;
        Ok(self.zip_with(other, |a, b| a + factor * b))
    }

    /// `(1 - t) * self + t * other`, evaluated coordinatewise in that form.
    pub fn lerp(&self, t: f64, other: &Point) -> Result<Point> {
        ensure_dims("convex combination", self.dim(), other.dim())?;
        Ok(self.zip_with(other, |a, b| (1.0 - t) * a + t * b))
    }

    pub fn max_abs_diff(&self, other: &Point) -> Result<f64> {
        ensure_dims("max abs difference", self.dim(), other.dim())?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Point {
        Point {
            coords: self.coords.iter().map(|&c| f(c)).collect(),
        }
    }

    fn zip_with(&self, other: &Point, f: impl Fn(f64, f64) -> f64) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Euclidean inner product.
pub fn inner(a: &Point, b: &Point) -> Result<f64> {
    a.inner(b)
}

pub fn norm(a: &Point) -> f64 {
    a.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&p(&[1.0, 0.0]), &p(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(inner(&p(&[3.0, 4.0]), &p(&[3.0, 4.0])).unwrap(), 25.0);
        assert_eq!(inner(&p(&[2.0]), &p(&[3.0])).unwrap(), 6.0);
    }

    #[test]
    fn inner_dimension_mismatch_names_both_dims() {
        let err = inner(&p(&[1.0, 2.0]), &p(&[1.0])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                context: "inner product",
                left: 2,
                right: 1
            }
        );
        assert!(err.to_string().contains("2 vs 1"));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&p(&[0.0, 0.0, 0.0])), 0.0);
        assert_eq!(norm(&p(&[3.0, 4.0])), 5.0);
        assert_eq!(norm(&p(&[1.0, 1.0, 1.0, 1.0])), 2.0);
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(
            Point::new(vec![1.0, f64::NAN]),
            Err(Error::NumericOverflow { .. })
        ));
        assert!(matches!(
            Point::new(vec![f64::INFINITY]),
            Err(Error::NumericOverflow { .. })
        ));
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn lerp_endpoints() {
        let a = p(&[1.0, -2.0]);
        let b = p(&[3.0, 5.0]);
        assert_eq!(a.lerp(0.0, &b).unwrap(), a);
        assert_eq!(a.lerp(1.0, &b).unwrap(), b);
    }
}
