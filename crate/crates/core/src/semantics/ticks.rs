use serde::{Deserialize, Serialize};

use crate::requirement::{Duration, TimeUnit};

use super::SemanticsError;

pub const DEFAULT_TICK_PERIOD_MS: u64 = 100;

/// How long one trace position lasts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickConfig {
    pub tick_period_ms: u64,
}

impl Default for TickConfig {
    fn default() -> Self {
        TickConfig {
            tick_period_ms: DEFAULT_TICK_PERIOD_MS,
        }
    }
}

impl TickConfig {
    pub fn new(tick_period_ms: u64) -> Result<Self, SemanticsError> {
        if tick_period_ms == 0 {
            return Err(SemanticsError::InvalidTickPeriod);
        }
        Ok(TickConfig { tick_period_ms })
    }
}

/// Rounds `d` up to whole ticks. Tick durations pass through unchanged.
pub fn duration_to_ticks(d: Duration, cfg: &TickConfig) -> Result<u64, SemanticsError> {
    if cfg.tick_period_ms == 0 {
        return Err(SemanticsError::InvalidTickPeriod);
    }
    let Some(unit_ms) = d.unit.millis() else {
        debug_assert_eq!(d.unit, TimeUnit::Tick);
        return Ok(d.magnitude);
    };
    let ms = d
        .magnitude
        .checked_mul(unit_ms)
        .ok_or_else(|| SemanticsError::Overflow(d.to_string()))?;
    let p = cfg.tick_period_ms;
    Ok(ms / p + u64::from(ms % p != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        let cfg = TickConfig::default();
        assert_eq!(duration_to_ticks(Duration::new(15, TimeUnit::Minute), &cfg), Ok(9000));
        assert_eq!(duration_to_ticks(Duration::ticks(1), &TickConfig::new(7).unwrap()), Ok(1));
        let second = TickConfig::new(1000).unwrap();
        assert_eq!(duration_to_ticks(Duration::new(1, TimeUnit::Second), &second), Ok(1));
        let odd = TickConfig::new(300).unwrap();
        assert_eq!(duration_to_ticks(Duration::new(1, TimeUnit::Second), &odd), Ok(4));
        assert!(matches!(
            duration_to_ticks(Duration::new(u64::MAX, TimeUnit::Hour), &cfg),
            Err(SemanticsError::Overflow(_))
        ));
        assert_eq!(TickConfig::new(0), Err(SemanticsError::InvalidTickPeriod));
    }
}
