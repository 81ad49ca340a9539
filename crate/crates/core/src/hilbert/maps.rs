use super::point::Point;
use super::sets::ConvexSet;
use crate::error::{ensure_dims, Error, Result};

/// The concrete nonlinear maps used as `U` and `T`.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Identity,
    /// `x ↦ (x² + 5)/(1 + x)` per coordinate on `[0, ∞)`; fixed point 5.
    PaperRational,
    /// `x ↦ (x + 5)/5` per coordinate; fixed point 5/4.
    PaperAffine,
    /// `x ↦ anchor + ratio·(x − anchor)`, `ratio ∈ [0, 1)`.
    ContractionToward {
        anchor: Point,
        ratio: f64,
    },
    ProjectionMap(ConvexSet),
    /// `x ↦ (1 − θ)x + θ·base(x)`, `θ ∈ (0, 1]`.
    RelaxedMap {
        base: Box<MapKind>,
        theta: f64,
    },
    /// `x ↦ factor·x`. Not quasi-nonexpansive when `|factor| > 1`; kept for
    /// exercising the property checkers.
    Scaled {
        factor: f64,
    },
}

/// A map together with an optional declared fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiNonexpansiveMap {
    pub kind: MapKind,
    pub fixed_point: Option<Point>,
}

impl MapKind {
    pub fn name(&self) -> &'static str {
        match self {
            MapKind::Identity => "identity",
            MapKind::PaperRational => "paper-rational",
            MapKind::PaperAffine => "paper-affine",
            MapKind::ContractionToward { .. } => "contraction",
            MapKind::ProjectionMap(_) => "projection",
            MapKind::RelaxedMap { .. } => "relaxed",
            MapKind::Scaled { .. } => "scaled",
        }
    }

    /// The dimension the map is tied to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            MapKind::ContractionToward { anchor, .. } => Some(anchor.dim()),
            MapKind::ProjectionMap(set) => Some(set.dim()),
            MapKind::RelaxedMap { base, .. } => base.dim(),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MapKind::ContractionToward { ratio, .. } => {
                if !(0.0..1.0).contains(ratio) {
                    return Err(Error::InvalidParameter {
                        name: "ratio",
                        value: *ratio,
                        reason: "contraction ratio must lie in [0, 1)".into(),
                    });
                }
            }
            MapKind::ProjectionMap(set) => set.validate()?,
            MapKind::RelaxedMap { base, theta } => {
                if !(*theta > 0.0 && *theta <= 1.0) {
                    return Err(Error::InvalidParameter {
                        name: "theta",
                        value: *theta,
                        reason: "relaxation must lie in (0, 1]".into(),
                    });
                }
                base.validate()?;
            }
            MapKind::Scaled { factor } if !factor.is_finite() => {
                return Err(Error::InvalidParameter {
                    name: "factor",
                    value: *factor,
                    reason: "must be finite".into(),
                });
            }
            _ => {}
        }
        Ok(())
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        if let Some(d) = self.dim() {
            ensure_dims("map apply", x.dim(), d)?;
        }
        let out = match self {
            MapKind::Identity => x.clone(),
            MapKind::PaperRational => {
                if let Some((index, &value)) =
                    x.coords().iter().enumerate().find(|(_, &c)| !(c >= 0.0))
                {
                    return Err(Error::Domain {
                        map: "paper-rational map (x^2+5)/(1+x)",
                        value,
                        index,
                    });
                }
                x.map(|c| (c * c + 5.0) / (1.0 + c))
            }
            MapKind::PaperAffine => x.map(|c| (c + 5.0) / 5.0),
            MapKind::ContractionToward { anchor, ratio } => anchor.axpy(*ratio, &x.sub(anchor)?)?,
            MapKind::ProjectionMap(set) => set.project(x)?,
            MapKind::RelaxedMap { base, theta } => x.lerp(*theta, &base.apply(x)?)?,
            MapKind::Scaled { factor } => x.scale(*factor),
        };
        out.finite("map apply")
    }

    /// A fixed point the map is known to have in dimension `dim`, if one is
    /// available in closed form.
    pub fn natural_fixed_point(&self, dim: usize) -> Option<Point> {
        match self {
            MapKind::Identity | MapKind::Scaled { .. } => Some(Point::zeros(dim)),
            MapKind::PaperRational => Some(Point::filled(dim, 5.0)),
            MapKind::PaperAffine => Some(Point::filled(dim, 1.25)),
            MapKind::ContractionToward { anchor, .. } => Some(anchor.clone()),
            MapKind::ProjectionMap(set) => set.project(&Point::zeros(dim)).ok(),
            MapKind::RelaxedMap { base, .. } => base.natural_fixed_point(dim),
        }
    }
}

impl QuasiNonexpansiveMap {
    pub fn new(kind: MapKind, fixed_point: Option<Point>) -> Result<Self> {
        kind.validate()?;
        if let (Some(d), Some(q)) = (kind.dim(), &fixed_point) {
            ensure_dims("declared fixed point", q.dim(), d)?;
        }
        Ok(QuasiNonexpansiveMap { kind, fixed_point })
    }

    pub fn identity() -> Self {
        QuasiNonexpansiveMap {
            kind: MapKind::Identity,
            fixed_point: None,
        }
    }

    /// `(x² + 5)/(1 + x)` with declared fixed point 5 in every coordinate.
    pub fn paper_rational(dim: usize) -> Self {
        QuasiNonexpansiveMap {
            kind: MapKind::PaperRational,
            fixed_point: Some(Point::filled(dim, 5.0)),
        }
    }

    /// `(x + 5)/5` with declared fixed point 5/4 in every coordinate.
    pub fn paper_affine(dim: usize) -> Self {
        QuasiNonexpansiveMap {
            kind: MapKind::PaperAffine,
            fixed_point: Some(Point::filled(dim, 1.25)),
        }
    }

    pub fn contraction_toward(anchor: Point, ratio: f64) -> Result<Self> {
        Self::new(
            MapKind::ContractionToward {
                anchor: anchor.clone(),
                ratio,
            },
            Some(anchor),
        )
    }

    pub fn projection(set: ConvexSet) -> Self {
        QuasiNonexpansiveMap {
            kind: MapKind::ProjectionMap(set),
            fixed_point: None,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.kind
            .dim()
            .or_else(|| self.fixed_point.as_ref().map(Point::dim))
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.kind.apply(x)
    }
}

/// Free-function form of [`QuasiNonexpansiveMap::apply`].
pub fn map_apply(m: &QuasiNonexpansiveMap, x: &Point) -> Result<Point> {
    m.apply(x)
}
