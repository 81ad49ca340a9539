//! Iteration schemes for the split equality fixed-point problem family and
//! the driver that runs them.

mod problem;
mod schedule;
mod schemes;
mod solve;

pub use problem::{IterateState, SchemeId, SffpepProblem};
pub use schedule::{Schedule, ScheduleKind};
pub use schemes::{
    byrne_cq_iterate, chen_iterate, chen_step, chidume_iterate, corollary_iterate,
    landweber_iterate, moudafi_alshemas_iterate, sffpep_iterate, yuan_iterate, ChenStep,
};
pub use solve::{
    make_params, make_params_for, scheme_step, solve, SolveResult, SolverParams, SpectralRadii,
    StepBoundRule, Termination, TraceRecord,
};
