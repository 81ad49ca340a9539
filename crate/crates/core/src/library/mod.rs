//! Worked scalar example, its reference iteration tables, and a generator
//! of synthetic instances with known solutions.

mod paper;
mod synthetic;
pub mod tables;

pub use paper::{build_paper_example, paper_recurrence_run, paper_recurrence_step, PaperExample};
pub use synthetic::{generate_synthetic, SyntheticSpec};
