use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dims, Error, Result};
use crate::hilbert::{ConvexSet, DenseOperator, Point, QuasiNonexpansiveMap};

/// Find `x ∈ C ∩ Fix(U)` and `y ∈ Q ∩ Fix(T)` such that `Ax = By`.
///
/// `A: ℝ^{n1} → ℝ^{n3}`, `B: ℝ^{n2} → ℝ^{n3}`. The optional known solution
/// is carried as given; [`crate::diagnostics::check_problem_consistency`]
/// verifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct SffpepProblem {
    pub c: ConvexSet,
    pub q: ConvexSet,
    pub u: QuasiNonexpansiveMap,
    pub t: QuasiNonexpansiveMap,
    pub a: DenseOperator,
    pub b: DenseOperator,
    known_solution: Option<(Point, Point)>,
}

impl SffpepProblem {
    pub fn new(
        c: ConvexSet,
        q: ConvexSet,
        u: QuasiNonexpansiveMap,
        t: QuasiNonexpansiveMap,
        a: DenseOperator,
        b: DenseOperator,
    ) -> Result<Self> {
        ensure_dims("A and B codomains", a.codomain_dim(), b.codomain_dim())?;
        ensure_dims("C and domain of A", c.dim(), a.domain_dim())?;
        ensure_dims("Q and domain of B", q.dim(), b.domain_dim())?;
        if let Some(d) = u.dim() {
            ensure_dims("U and domain of A", d, a.domain_dim())?;
        }
        if let Some(d) = t.dim() {
            ensure_dims("T and domain of B", d, b.domain_dim())?;
        }
        c.validate()?;
        q.validate()?;
        u.kind.validate()?;
        t.kind.validate()?;
        Ok(SffpepProblem {
            c,
            q,
            u,
            t,
            a,
            b,
            known_solution: None,
        })
    }

    pub fn with_known_solution(mut self, x_star: Point, y_star: Point) -> Result<Self> {
        ensure_dims("known solution x*", x_star.dim(), self.n1())?;
        ensure_dims("known solution y*", y_star.dim(), self.n2())?;
        self.known_solution = Some((x_star, y_star));
        Ok(self)
    }

    pub fn known_solution(&self) -> Option<(&Point, &Point)> {
        self.known_solution.as_ref().map(|(x, y)| (x, y))
    }

    pub fn n1(&self) -> usize {
        self.a.domain_dim()
    }

    pub fn n2(&self) -> usize {
        self.b.domain_dim()
    }

    pub fn n3(&self) -> usize {
        self.a.codomain_dim()
    }

    /// `Ax − By`.
    pub fn coupling(&self, x: &Point, y: &Point) -> Result<Point> {
        self.a.apply(x)?.sub(&self.b.apply(y)?)
    }
}

/// Full state of one iteration: the iterate pair plus the intermediates that
/// produced it.
///
/// After a step from `(xₙ, yₙ)`, `x`/`y` hold `(xₙ₊₁, yₙ₊₁)` and `z, w, u, r`
/// hold the step's intermediates. Schemes without a given intermediate
/// repeat the nearest one (see each step function).
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub n: usize,
    pub x: Point,
    pub y: Point,
    pub z: Point,
    pub w: Point,
    pub u: Point,
    pub r: Point,
}

impl IterateState {
    pub fn start(x: Point, y: Point) -> Self {
        IterateState {
            n: 0,
            z: x.clone(),
            w: x.clone(),
            u: y.clone(),
            r: y.clone(),
            x,
            y,
        }
    }

    pub fn check_dims(&self, p: &SffpepProblem) -> Result<()> {
        for (pt, d, what) in [
            (&self.x, p.n1(), "iterate x"),
            (&self.z, p.n1(), "iterate z"),
            (&self.w, p.n1(), "iterate w"),
            (&self.y, p.n2(), "iterate y"),
            (&self.u, p.n2(), "iterate u"),
            (&self.r, p.n2(), "iterate r"),
        ] {
            ensure_dims(what, pt.dim(), d)?;
        }
        Ok(())
    }
}

/// The iteration schemes available to [`super::solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    Sffpep,
    Corollary,
    Moudafi,
    Landweber,
    Byrne,
    Yuan,
    Chidume,
    Chen,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::Sffpep,
        SchemeId::Corollary,
        SchemeId::Moudafi,
        SchemeId::Landweber,
        SchemeId::Byrne,
        SchemeId::Yuan,
        SchemeId::Chidume,
        SchemeId::Chen,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Sffpep => "sffpep",
            SchemeId::Corollary => "corollary",
            SchemeId::Moudafi => "moudafi",
            SchemeId::Landweber => "landweber",
            SchemeId::Byrne => "byrne",
            SchemeId::Yuan => "yuan",
            SchemeId::Chidume => "chidume",
            SchemeId::Chen => "chen",
        }
    }

    pub fn uses_beta(self) -> bool {
        matches!(self, SchemeId::Sffpep | SchemeId::Chen)
    }

    pub fn uses_alpha(self) -> bool {
        !matches!(
            self,
            SchemeId::Moudafi | SchemeId::Landweber | SchemeId::Byrne
        )
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidProblem(format!("unknown scheme `{s}`")))
    }
}
