//! One-step update rules.
//!
//! Every coupled scheme reads the same `(xₙ, yₙ)` for both halves: the
//! coupling residual `e = Axₙ − Byₙ` is formed once and the x- and y-updates
//! are independent functions of it.

use super::problem::{IterateState, SffpepProblem};
use crate::error::{ensure_dims, Result};
use crate::hilbert::{ConvexSet, DenseOperator, Point, QuasiNonexpansiveMap};

/// `x − λA*e`.
fn descend(a: &DenseOperator, x: &Point, lambda: f64, e: &Point) -> Result<Point> {
    x.axpy(-lambda, &a.apply_adjoint(e)?)
}

/// `y + λB*e`.
fn ascend(b: &DenseOperator, y: &Point, lambda: f64, e: &Point) -> Result<Point> {
    y.axpy(lambda, &b.apply_adjoint(e)?)
}

/// `(1 − β)z + β M(z)` then `(1 − α)z + α M(w)`; returns `(w, next)`.
fn ishikawa(m: &QuasiNonexpansiveMap, z: &Point, alpha: f64, beta: f64) -> Result<(Point, Point)> {
    let w = z.lerp(beta, &m.apply(z)?)?.finite("Ishikawa inner step")?;
    let next = z
        .lerp(alpha, &m.apply(&w)?)?
        .finite("Ishikawa outer step")?;
    Ok((w, next))
}

struct Half {
    proj: Point,
    mid: Point,
    next: Point,
}

fn sffpep_x_half(
    p: &SffpepProblem,
    x: &Point,
    e: &Point,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<Half> {
    let z = p.c.project(&descend(&p.a, x, lambda, e)?)?;
    let (w, next) = ishikawa(&p.u, &z, alpha, beta)?;
    Ok(Half {
        proj: z,
        mid: w,
        next,
    })
}

fn sffpep_y_half(
    p: &SffpepProblem,
    y: &Point,
    e: &Point,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<Half> {
    let u = p.q.project(&ascend(&p.b, y, lambda, e)?)?;
    let (r, next) = ishikawa(&p.t, &u, alpha, beta)?;
    Ok(Half {
        proj: u,
        mid: r,
        next,
    })
}

fn assemble(n: usize, xh: Half, yh: Half) -> IterateState {
    IterateState {
        n: n + 1,
        x: xh.next,
        y: yh.next,
        z: xh.proj,
        w: xh.mid,
        u: yh.proj,
        r: yh.mid,
    }
}

fn coupling(p: &SffpepProblem, s: &IterateState) -> Result<Point> {
    ensure_dims("iterate x", s.x.dim(), p.n1())?;
    ensure_dims("iterate y", s.y.dim(), p.n2())?;
    p.coupling(&s.x, &s.y)?.finite("coupling residual")
}

/// One step of the split feasibility and fixed-point equality iteration:
///
/// ```text
/// zₙ = P_C(xₙ − λA*(Axₙ − Byₙ))      uₙ = P_Q(yₙ + λB*(Axₙ − Byₙ))
/// wₙ = (1 − β)zₙ + βU(zₙ)            rₙ = (1 − β)uₙ + βT(uₙ)
/// xₙ₊₁ = (1 − α)zₙ + αU(wₙ)          yₙ₊₁ = (1 − α)uₙ + αT(rₙ)
/// ```
pub fn sffpep_iterate(
    p: &SffpepProblem,
    s: &IterateState,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<IterateState> {
    let e = coupling(p, s)?;
    let xh = sffpep_x_half(p, &s.x, &e, lambda, alpha, beta)?;
    let yh = sffpep_y_half(p, &s.y, &e, lambda, alpha, beta)?;
    Ok(assemble(s.n, xh, yh))
}

/// Projection-free, single-relaxation variant. Intermediates: `z = w = zₙ`,
/// `u = r = uₙ`.
pub fn corollary_iterate(
    p: &SffpepProblem,
    s: &IterateState,
    lambda: f64,
    alpha: f64,
) -> Result<IterateState> {
    let e = coupling(p, s)?;
    let z = descend(&p.a, &s.x, lambda, &e)?.finite("corollary x step")?;
    let x_next = z.lerp(alpha, &p.u.apply(&z)?)?.finite("corollary x step")?;
    let u = ascend(&p.b, &s.y, lambda, &e)?.finite("corollary y step")?;
    let y_next = u.lerp(alpha, &p.t.apply(&u)?)?.finite("corollary y step")?;
    Ok(IterateState {
        n: s.n + 1,
        x: x_next,
        y: y_next,
        w: z.clone(),
        z,
        r: u.clone(),
        u,
    })
}

/// `xₙ₊₁ = U(xₙ − λA*e)`, `yₙ₊₁ = T(yₙ + λB*e)`; `C`, `Q` are not used.
/// Intermediates hold the pre-map points.
pub fn moudafi_alshemas_iterate(
    p: &SffpepProblem,
    s: &IterateState,
    lambda: f64,
) -> Result<IterateState> {
    let e = coupling(p, s)?;
    let z = descend(&p.a, &s.x, lambda, &e)?.finite("moudafi x step")?;
    let u = ascend(&p.b, &s.y, lambda, &e)?.finite("moudafi y step")?;
    Ok(IterateState {
        n: s.n + 1,
        x: p.u.apply(&z)?,
        y: p.t.apply(&u)?,
        w: z.clone(),
        z,
        r: u.clone(),
        u,
    })
}

/// Projected Landweber: `xₙ₊₁ = P_C(xₙ − λA*e)`, `yₙ₊₁ = P_Q(yₙ + λB*e)`.
/// `U`, `T` are not used; the intermediates equal the new iterates.
pub fn landweber_iterate(p: &SffpepProblem, s: &IterateState, lambda: f64) -> Result<IterateState> {
    let e = coupling(p, s)?;
    let x = p.c.project(&descend(&p.a, &s.x, lambda, &e)?)?;
    let y = p.q.project(&ascend(&p.b, &s.y, lambda, &e)?)?;
    Ok(IterateState {
        n: s.n + 1,
        z: x.clone(),
        w: x.clone(),
        u: y.clone(),
        r: y.clone(),
        x,
        y,
    })
}

/// CQ step `x₊ = P_C(x − λA*(I − P_Q)Ax)` for the split feasibility problem.
pub fn byrne_cq_iterate(
    c: &ConvexSet,
    q: &ConvexSet,
    a: &DenseOperator,
    x: &Point,
    lambda: f64,
) -> Result<Point> {
    let ax = a.apply(x)?;
    let residual = ax.sub(&q.project(&ax)?)?;
    c.project(&descend(a, x, lambda, &residual)?)
}

/// Relaxed Moudafi step: `xₙ₊₁ = (1 − α)xₙ + αU(xₙ − λA*e)` and likewise for y.
pub fn yuan_iterate(
    p: &SffpepProblem,
    s: &IterateState,
    lambda: f64,
    alpha: f64,
) -> Result<IterateState> {
    let e = coupling(p, s)?;
    let z = descend(&p.a, &s.x, lambda, &e)?.finite("yuan x step")?;
    let u = ascend(&p.b, &s.y, lambda, &e)?.finite("yuan y step")?;
    let x = s.x.lerp(alpha, &p.u.apply(&z)?)?.finite("yuan x step")?;
    let y = s.y.lerp(alpha, &p.t.apply(&u)?)?.finite("yuan y step")?;
    Ok(IterateState {
        n: s.n + 1,
        x,
        y,
        w: z.clone(),
        z,
        r: u.clone(),
        u,
    })
}

/// Relaxation applied after the gradient step, with a constant `α`.
/// Intermediates: `z = w` is the x gradient point, `u = r` the y one.
pub fn chidume_iterate(
    p: &SffpepProblem,
    s: &IterateState,
    lambda: f64,
    alpha: f64,
) -> Result<IterateState> {
    let e = coupling(p, s)?;
    let gx = descend(&p.a, &s.x, lambda, &e)?.finite("chidume x step")?;
    let gy = ascend(&p.b, &s.y, lambda, &e)?.finite("chidume y step")?;
    let x = gx.lerp(alpha, &p.u.apply(&gx)?)?.finite("chidume x step")?;
    let y = gy.lerp(alpha, &p.t.apply(&gy)?)?.finite("chidume y step")?;
    Ok(IterateState {
        n: s.n + 1,
        x,
        y,
        w: gx.clone(),
        z: gx,
        r: gy.clone(),
        u: gy,
    })
}

/// Intermediates of one extra-gradient step.
#[derive(Debug, Clone, PartialEq)]
pub struct ChenStep {
    pub y: Point,
    pub z: Point,
    pub w: Point,
    pub x_next: Point,
}

/// Ishikawa extra-gradient step for `x ∈ C ∩ Fix(T)`, `Ax ∈ Q ∩ Fix(U)`.
///
/// Here `u` acts on the codomain of `A` and `t` on its domain.
#[allow(clippy::too_many_arguments)]
pub fn chen_step(
    c: &ConvexSet,
    q: &ConvexSet,
    a: &DenseOperator,
    u: &QuasiNonexpansiveMap,
    t: &QuasiNonexpansiveMap,
    x: &Point,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<ChenStep> {
    // A*(I − U P_Q)A v
    let gradient = |v: &Point| -> Result<Point> {
        let av = a.apply(v)?;
        let target = u.apply(&q.project(&av)?)?;
        a.apply_adjoint(&av.sub(&target)?)
    };
    let y = c.project(&x.axpy(-lambda, &gradient(x)?)?)?;
    let z = c.project(&x.axpy(-lambda, &gradient(&y)?)?)?;
    let (w, x_next) = ishikawa(t, &z, alpha, beta)?;
    Ok(ChenStep { y, z, w, x_next })
}

#[allow(clippy::too_many_arguments)]
pub fn chen_iterate(
    c: &ConvexSet,
    q: &ConvexSet,
    a: &DenseOperator,
    u: &QuasiNonexpansiveMap,
    t: &QuasiNonexpansiveMap,
    x: &Point,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<Point> {
    Ok(chen_step(c, q, a, u, t, x, lambda, alpha, beta)?.x_next)
}

/// Byrne's step embedded in the coupled state (requires `n2 = n3`).
///
/// `xₙ₊₁` is the CQ step and `yₙ₊₁ = P_Q(Axₙ)`; `z = w = xₙ₊₁`, `u = r = yₙ₊₁`.
pub(crate) fn byrne_state_step(
    p: &SffpepProblem,
    s: &IterateState,
    lambda: f64,
) -> Result<IterateState> {
    ensure_dims("Byrne scheme: Q and codomain of A", p.q.dim(), p.n3())?;
    let x = byrne_cq_iterate(&p.c, &p.q, &p.a, &s.x, lambda)?;
    let y = p.q.project(&p.a.apply(&s.x)?)?;
    Ok(IterateState {
        n: s.n + 1,
        z: x.clone(),
        w: x.clone(),
        u: y.clone(),
        r: y.clone(),
        x,
        y,
    })
}

/// Chen's step embedded in the coupled state (requires `n2 = n3`).
///
/// The problem's `T` (on the codomain of `A`) plays the inner map and the
/// problem's `U` the outer one; `yₙ₊₁ = T(P_Q(Axₙ₊₁))` tracks the image side
/// so that `‖Ax − y‖` measures `(I − T P_Q)A x`.
pub(crate) fn chen_state_step(
    p: &SffpepProblem,
    s: &IterateState,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<IterateState> {
    ensure_dims("Chen scheme: Q and codomain of A", p.q.dim(), p.n3())?;
    let step = chen_step(&p.c, &p.q, &p.a, &p.t, &p.u, &s.x, lambda, alpha, beta)?;
    let image = p.q.project(&p.a.apply(&s.x)?)?;
    let y = p.t.apply(&p.q.project(&p.a.apply(&step.x_next)?)?)?;
    Ok(IterateState {
        n: s.n + 1,
        x: step.x_next,
        y,
        z: step.z,
        w: step.w,
        r: image.clone(),
        u: image,
    })
}
