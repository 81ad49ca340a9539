use super::operator::DenseOperator;
use super::point::{dot, Point};
use crate::error::{ensure_dims, Error, Result};

/// Closed convex sets with closed-form metric projections.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    WholeSpace {
        dim: usize,
    },
    NonnegativeOrthant {
        dim: usize,
    },
    /// Coordinatewise bounds; `-inf` / `+inf` leave a side open.
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Ball {
        center: Point,
        radius: f64,
    },
    /// `{x : ⟨normal, x⟩ ≤ offset}`.
    HalfSpace {
        normal: Point,
        offset: f64,
    },
    AffineSubspace(AffineSubspace),
}

/// `{shift + basis·t : t ∈ ℝᵏ}` where `basis` is an n×k matrix.
///
/// The column span is orthonormalized once at construction (modified
/// Gram–Schmidt with rank detection), so projection is two dense products.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSubspace {
    basis: DenseOperator,
    shift: Point,
    orthonormal: Vec<Vec<f64>>,
}

const RANK_TOL: f64 = 1e-12;

impl AffineSubspace {
    pub fn new(basis: DenseOperator, shift: Point) -> Result<Self> {
        ensure_dims(
            "affine subspace basis rows",
            basis.codomain_dim(),
            shift.dim(),
        )?;
        let n = basis.codomain_dim();
        let scale = (0..basis.domain_dim())
            .flat_map(|c| (0..n).map(move |r| (r, c)))
            .map(|(r, c)| basis.get(r, c).abs())
            .fold(0.0, f64::max);
        let mut orthonormal: Vec<Vec<f64>> = Vec::new();
        for c in 0..basis.domain_dim() {
            let mut col: Vec<f64> = (0..n).map(|r| basis.get(r, c)).collect();
            // Two passes of modified Gram-Schmidt for numerical orthogonality.
            for _ in 0..2 {
                for q in &orthonormal {
                    let proj = dot(q, &col);
                    col.iter_mut().zip(q).for_each(|(v, qi)| *v -= proj * qi);
                }
            }
            let norm = dot(&col, &col).sqrt();
            if norm > RANK_TOL * scale.max(1.0) {
                col.iter_mut().for_each(|v| *v /= norm);
                orthonormal.push(col);
            }
        }
        Ok(AffineSubspace {
            basis,
            shift,
            orthonormal,
        })
    }

    pub fn basis(&self) -> &DenseOperator {
        &self.basis
    }

    pub fn shift(&self) -> &Point {
        &self.shift
    }

    pub fn rank(&self) -> usize {
        self.orthonormal.len()
    }

    fn project(&self, x: &Point) -> Result<Point> {
        let d = x.sub(&self.shift)?;
        let mut out = self.shift.coords().to_vec();
        for q in &self.orthonormal {
            let coef = dot(q, d.coords());
            out.iter_mut().zip(q).for_each(|(o, qi)| *o += coef * qi);
        }
        Ok(Point::from_vec_unchecked(out))
    }
}

impl ConvexSet {
    pub fn whole_space(dim: usize) -> Self {
        ConvexSet::WholeSpace { dim }
    }

    pub fn nonnegative_orthant(dim: usize) -> Self {
        ConvexSet::NonnegativeOrthant { dim }
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let set = ConvexSet::Box { lower, upper };
        set.validate()?;
        Ok(set)
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let set = ConvexSet::Ball { center, radius };
        set.validate()?;
        Ok(set)
    }

    pub fn half_space(normal: Point, offset: f64) -> Result<Self> {
        let set = ConvexSet::HalfSpace { normal, offset };
        set.validate()?;
        Ok(set)
    }

    pub fn affine(basis: DenseOperator, shift: Point) -> Result<Self> {
        Ok(ConvexSet::AffineSubspace(AffineSubspace::new(
            basis, shift,
        )?))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::WholeSpace { dim } | ConvexSet::NonnegativeOrthant { dim } => *dim,
            ConvexSet::Box { lower, .. } => lower.len(),
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::HalfSpace { normal, .. } => normal.dim(),
            ConvexSet::AffineSubspace(a) => a.shift.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConvexSet::WholeSpace { .. } => "whole-space",
            ConvexSet::NonnegativeOrthant { .. } => "nonnegative-orthant",
            ConvexSet::Box { .. } => "box",
            ConvexSet::Ball { .. } => "ball",
            ConvexSet::HalfSpace { .. } => "half-space",
            ConvexSet::AffineSubspace(_) => "affine-subspace",
        }
    }

    /// Checks that the set is well formed and nonempty.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexSet::WholeSpace { dim } | ConvexSet::NonnegativeOrthant { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidProblem(
                        "set dimension must be positive".into(),
                    ));
                }
            }
            ConvexSet::Box { lower, upper } => {
                ensure_dims("box bounds", lower.len(), upper.len())?;
                if lower.is_empty() {
                    return Err(Error::InvalidProblem(
                        "set dimension must be positive".into(),
                    ));
                }
                for (index, (&lo, &hi)) in lower.iter().zip(upper).enumerate() {
                    if lo.is_nan()
                        || hi.is_nan()
                        || lo > hi
                        || lo == f64::INFINITY
                        || hi == f64::NEG_INFINITY
                    {
                        return Err(Error::EmptyBox {
                            index,
                            lower: lo,
                            upper: hi,
                        });
                    }
                }
            }
            ConvexSet::Ball { radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "radius",
                        value: *radius,
                        reason: "must be positive and finite".into(),
                    });
                }
            }
            ConvexSet::HalfSpace { normal, offset } => {
                if normal.norm() == 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "normal",
                        value: 0.0,
                        reason: "half-space normal must be nonzero".into(),
                    });
                }
                if !offset.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "offset",
                        value: *offset,
                        reason: "must be finite".into(),
                    });
                }
            }
            ConvexSet::AffineSubspace(_) => {}
        }
        Ok(())
    }

    /// Metric projection: the unique nearest point of the set.
    pub fn project(&self, x: &Point) -> Result<Point> {
        ensure_dims("projection", x.dim(), self.dim())?;
        self.validate()?;
        let out = match self {
            ConvexSet::WholeSpace { .. } => x.clone(),
            ConvexSet::NonnegativeOrthant { .. } => x.map(|c| c.max(0.0)),
            ConvexSet::Box { lower, upper } => Point::from_vec_unchecked(
                x.coords()
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(&c, (&lo, &hi))| c.clamp(lo, hi))
                    .collect(),
            ),
            ConvexSet::Ball { center, radius } => {
                let d = x.sub(center)?;
                let dist = d.norm();
                if dist <= *radius {
                    x.clone()
                } else {
                    center.axpy(radius / dist, &d)?
                }
            }
            ConvexSet::HalfSpace { normal, offset } => {
                let excess = normal.inner(x)? - offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    x.axpy(-excess / normal.norm_squared(), normal)?
                }
            }
            ConvexSet::AffineSubspace(a) => a.project(x)?,
        };
        out.finite("projection")
    }

    /// Membership up to `tol` (absolute, scaled for the subspace/half-space residuals).
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        ensure_dims("membership", x.dim(), self.dim())?;
        Ok(match self {
            ConvexSet::WholeSpace { .. } => true,
            ConvexSet::NonnegativeOrthant { .. } => x.coords().iter().all(|&c| c >= -tol),
            ConvexSet::Box { lower, upper } => x
                .coords()
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(&c, (&lo, &hi))| c >= lo - tol && c <= hi + tol),
            ConvexSet::Ball { center, radius } => x.distance(center)? <= radius + tol,
            ConvexSet::HalfSpace { normal, offset } => {
                normal.inner(x)? - offset <= tol * normal.norm()
            }
            ConvexSet::AffineSubspace(a) => a.project(x)?.distance(x)? <= tol * (1.0 + x.norm()),
        })
    }
}

/// Free-function form of [`ConvexSet::project`].
pub fn project(set: &ConvexSet, x: &Point) -> Result<Point> {
    set.project(x)
}
