use std::time::{Duration, Instant};

/// Cooperative wall-clock limit polled by the long-running solvers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline {
    at: Option<Instant>,
}

impl Deadline {
    pub fn none() -> Self {
        Self { at: None }
    }

    pub fn after(limit: Duration) -> Self {
        Self {
            at: Some(Instant::now() + limit),
        }
    }

    pub fn from_secs(limit: Option<f64>) -> Self {
        limit.map_or(Self::none(), |s| Self::after(Duration::from_secs_f64(s)))
    }

    pub fn expired(&self) -> bool {
        self.at.is_some_and(|t| Instant::now() >= t)
    }
}
