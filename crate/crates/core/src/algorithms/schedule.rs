use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleKind {
    Constant(f64),
    /// Values for n = 1, 2, …; the last value repeats.
    Sequence(Vec<f64>),
    /// `floor + (base − floor)/n`: starts at `base`, tends to `floor`.
    Harmonic {
        base: f64,
        floor: f64,
    },
}

/// A parameter rule `n ↦ value` with the open interval it must respect.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub lower: f64,
    pub upper: f64,
}

impl Schedule {
    /// Builds a schedule and checks that every value it can emit lies in
    /// `(lower, upper)`.
    pub fn new(kind: ScheduleKind, lower: f64, upper: f64, name: &'static str) -> Result<Self> {
        let s = Schedule { kind, lower, upper };
        s.validate(name)?;
        Ok(s)
    }

    pub fn constant(value: f64, lower: f64, upper: f64, name: &'static str) -> Result<Self> {
        Self::new(ScheduleKind::Constant(value), lower, upper, name)
    }

    /// A constant schedule that accepts any finite value.
    pub fn unbounded(value: f64) -> Self {
        Schedule {
            kind: ScheduleKind::Constant(value),
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    /// The raw value for iteration `n ≥ 1`.
    pub fn at(&self, n: usize) -> f64 {
        let n = n.max(1);
        match &self.kind {
            ScheduleKind::Constant(v) => *v,
            ScheduleKind::Sequence(values) => values[(n - 1).min(values.len().saturating_sub(1))],
            ScheduleKind::Harmonic { base, floor } => {
                let inv = 1.0 / n as f64;
                base * inv + floor * (1.0 - inv)
            }
        }
    }

    /// The value for iteration `n`, rejected if it leaves `(lower, upper)`.
    pub fn checked(&self, n: usize, name: &'static str) -> Result<f64> {
        let v = self.at(n);
        self.admit(v, name)?;
        Ok(v)
    }

    fn admit(&self, v: f64, name: &'static str) -> Result<()> {
        if v.is_finite() && v > self.lower && v < self.upper {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name,
                value: v,
                reason: format!(
                    "must lie in the open interval ({}, {})",
                    self.lower, self.upper
                ),
            })
        }
    }

    pub fn validate(&self, name: &'static str) -> Result<()> {
        match &self.kind {
            ScheduleKind::Constant(v) => self.admit(*v, name),
            ScheduleKind::Sequence(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidParameter {
                        name,
                        value: f64::NAN,
                        reason: "sequence schedule needs at least one value".into(),
                    });
                }
                values.iter().try_for_each(|&v| self.admit(v, name))
            }
            // Values lie between base and floor, so checking both endpoints suffices.
            ScheduleKind::Harmonic { base, floor } => {
                self.admit(*base, name)?;
                self.admit(*floor, name)
            }
        }
    }
}
