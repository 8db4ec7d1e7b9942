//! Static timing metadata: movement durations and mean action times.

use crate::error::{Error, Result};
use crate::model::{Movement, Profile, TimingSpec};

/// Duration of a movement along a symmetric trapezoidal (or triangular)
/// velocity profile, plus settling time.
///
/// Third-order profiles are stored but not timed.
pub fn movement_duration(m: &Movement) -> Result<f64> {
    match m.profile {
        Profile::SecondOrder { vmax, amax } => {
            Ok(m.settling + second_order_travel_time(m.distance, vmax, amax))
        }
        Profile::ThirdOrder { .. } => Err(Error::UnsupportedProfile(m.id.to_string())),
    }
}

/// Travel time over distance `d` starting and ending at rest.
pub fn second_order_travel_time(d: f64, vmax: f64, amax: f64) -> f64 {
    if d <= vmax * vmax / amax {
        // peak velocity never reaches vmax
        2.0 * (d / amax).sqrt()
    } else {
        vmax / amax + d / vmax
    }
}

/// Mean of an action's duration distribution.
pub fn timing_mean(t: &TimingSpec) -> f64 {
    match *t {
        TimingSpec::Deterministic { t } => t,
        TimingSpec::Normal { mu, .. } => mu,
        TimingSpec::Triangular { a, m, b } => (a + m + b) / 3.0,
        TimingSpec::Pert { a, m, b } => (a + 4.0 * m + b) / 6.0,
    }
}
