//! Movement durations along trapezoidal velocity profiles and mean action
//! times of the supported distributions.

use lsat_semantics::model::{Movement, Profile, TimingSpec};
use lsat_semantics::timing::{movement_duration, timing_mean};

fn main() -> lsat_semantics::Result<()> {
    for d in [0.0, 0.25, 0.5, 1.0, 4.0] {
        let m = Movement {
            id: "l_to_r".into(),
            source: "left".into(),
            target: "right".into(),
            profile: Profile::SecondOrder {
                vmax: 1.0,
                amax: 2.0,
            },
            settling: 0.1,
            distance: d,
        };
        println!("distance {d:>4}: {:.4} s", movement_duration(&m)?);
    }
    for t in [
        TimingSpec::Deterministic { t: 2.0 },
        TimingSpec::Normal {
            mu: 1.5,
            sigma: 0.2,
        },
        TimingSpec::Triangular {
            a: 1.0,
            m: 2.0,
            b: 6.0,
        },
        TimingSpec::Pert {
            a: 1.0,
            m: 2.0,
            b: 6.0,
        },
    ] {
        println!("{t:?}: mean {:.4}", timing_mean(&t));
    }
    Ok(())
}
