// Empirical effective-noise curve over the receiver coefficient, next to
// the closed-form MMSE value.
//
// $ cargo run --release --example mmse_sweep

use asdgic::model::{build_params, RawParams};
use asdgic::simulate::{alpha_grid, sweep_alpha, Scheme, SchemeSpec};

fn main() -> asdgic::Result<()> {
    let params = build_params(RawParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0))?;
    let grid = alpha_grid(101, 1.0);
    for scheme in [Scheme::ImbalancedCrossCorner, Scheme::BalancedCrossCorner] {
        let mut spec = SchemeSpec::new(scheme, &params);
        spec.trials = 50_000;
        let sweep = sweep_alpha(&params, &spec, &grid)?;
        println!("{}: argmin {:.3}, closed form {:.4}", scheme.tag(), sweep.argmin, sweep.closed_form);
        for i in (9..101).step_by(10) {
            let bar = "#".repeat((sweep.pre_mod_var[i] * 40.0).round() as usize);
            println!("  {:.2} {:.4} {bar}", sweep.grid[i], sweep.pre_mod_var[i]);
        }
    }
    Ok(())
}
