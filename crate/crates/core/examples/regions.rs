// Outer bound, achievable sum rate and regime flags for a few channels.
//
// $ cargo run --example regions

use asdgic::bounds::{achievable_sum_rate, outer_sum_rate};
use asdgic::envelope::PowerGrid;
use asdgic::model::{build_params, classify_regime, RawParams};

fn main() -> asdgic::Result<()> {
    let grid = PowerGrid::default();
    let channels = [
        RawParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
        RawParams::new(1.0, 1.0, 1.0, 1.0, 4.0, 4.0),
        RawParams::new(16.0, 1.0, 2.0, 1.0, 4.0, 0.25),
        RawParams::new(1.0, 100.0, 5.0, 1.0, 1.0, 1.0),
    ];
    for raw in channels {
        let params = build_params(raw)?;
        let outer = outer_sum_rate(&params);
        let flags = classify_regime(&params);
        print!("P=({}, {}) N=({}, {}) a=({}, {})  outer {:.4}", raw.p1, raw.p2, raw.n1, raw.n2, raw.a12, raw.a21, outer.value);
        match achievable_sum_rate(&params, &grid) {
            Ok(a) => println!("  achievable {:.4} [{}]  flags {}", a.value, a.kind.tag(), flags.compact()),
            Err(e) => println!("  achievable: {e}  flags {}", flags.compact()),
        }
    }
    Ok(())
}
