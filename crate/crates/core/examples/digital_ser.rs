// Symbol error rate of the finite-rate nested-cubic stand-in as the noise
// grows.
//
// $ cargo run --release --example digital_ser

use asdgic::model::{build_params, RawParams};
use asdgic::simulate::{run_digital, saturated_ser, Scheme, SchemeSpec};

fn main() -> asdgic::Result<()> {
    println!("{:>8} {:>3} {:>10} {:>10}", "N1", "k", "ser", "se");
    for n1 in [0.01, 0.1, 1.0, 10.0, 1e4] {
        for k in [1, 2] {
            let params = build_params(RawParams::new(1.0, 100.0, n1, 1.0, 1.0, 1.0))?;
            let mut spec = SchemeSpec::new(Scheme::ImbalancedCrossCorner, &params);
            spec.trials = 100_000;
            let r = run_digital(&params, &spec, k)?;
            println!("{n1:>8} {k:>3} {:>10.5} {:>10.1e}", r.ser.unwrap(), r.ser_se.unwrap());
        }
    }
    println!("uniform-output limit for n = 1: k = 1 -> {}, k = 2 -> {}", saturated_ser(1, 1), saturated_ser(1, 2));
    Ok(())
}
