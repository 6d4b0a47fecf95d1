// Random-binning sum-rate bound as the state variance grows.
//
// $ cargo run --example binning

use asdgic::bounds::{binning_sum_rate_bound, binning_zero_threshold};
use asdgic::model::{build_params, RawParams, StateVariance};

fn main() -> asdgic::Result<()> {
    let params = build_params(RawParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0))?;
    println!("bound reaches zero at Q = {:.3}", binning_zero_threshold(&params));
    for q in [2.0, 10.0, 50.0, 100.0, 1e3, 1e6] {
        let b = binning_sum_rate_bound(&params, StateVariance::Finite(q), StateVariance::Finite(q))?;
        println!("Q = {q:>9}: {:.4} bits", b.value);
    }
    Ok(())
}
