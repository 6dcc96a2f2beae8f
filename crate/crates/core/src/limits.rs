use crate::error::{Error, Result};

/// Resource guards. Every enumerating operation is exponential in something,
/// so each one checks its size against these before starting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest predicate count accepted by the syntax layer.
    pub q_max: usize,
    /// Largest number of objects (state descriptions, functions, orbit
    /// members) a single enumeration may visit.
    pub max_enum: u64,
    /// Largest q for which the spectrum-preserving group is materialized.
    pub group_q_max: usize,
    /// Largest q accepted by the decomposition pipeline.
    pub decompose_q_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            q_max: 16,
            max_enum: 1 << 24,
            group_q_max: 4,
            decompose_q_max: 2,
        }
    }
}

impl Limits {
    pub fn check_q(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.q_max {
            return Err(Error::Bounds(format!(
                "q = {q} outside 1..={}",
                self.q_max
            )));
        }
        Ok(())
    }

    /// Guards an enumeration of `base^exp` objects.
    pub fn check_power(&self, base: u64, exp: usize, what: &str) -> Result<u64> {
        let mut total: u64 = 1;
        for _ in 0..exp {
            total = total.saturating_mul(base);
            if total > self.max_enum {
                return Err(Error::Guard(format!(
                    "{what}: {base}^{exp} exceeds the enumeration guard {}",
                    self.max_enum
                )));
            }
        }
        Ok(total)
    }

    pub fn check_count(&self, count: u64, what: &str) -> Result<()> {
        if count > self.max_enum {
            return Err(Error::Guard(format!(
                "{what}: {count} exceeds the enumeration guard {}",
                self.max_enum
            )));
        }
        Ok(())
    }
}
