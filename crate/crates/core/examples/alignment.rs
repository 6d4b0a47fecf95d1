// Runs every transceiver chain and prints the alignment residual, transmit
// powers and effective noise.
//
// $ cargo run --release --example alignment

use asdgic::model::{build_params, RawParams};
use asdgic::simulate::{run_analog, trace_trial, Scheme, SchemeSpec};

fn main() -> asdgic::Result<()> {
    let params = build_params(RawParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0))?;
    for scheme in Scheme::ALL {
        let mut spec = SchemeSpec::new(scheme, &params);
        spec.trials = 100_000;
        spec.dim = 2;
        let r = run_analog(&params, &spec)?;
        println!(
            "{:<34} residual {:.1e}  X1 {:.3}/{:.3}  X2 {:.3}/{:.3}  Zeff pre {:.4} (pred {:.4}) post {:.4}",
            scheme.tag(),
            r.max_alignment_residual,
            r.x1_power,
            r.lattice1_sigma2,
            r.x2_power,
            r.lattice2_sigma2,
            r.zeff_pre_var,
            r.predicted_pre_var,
            r.zeff_post_var
        );
    }

    let spec = SchemeSpec::new(Scheme::ImbalancedCrossCorner, &params);
    let t = trace_trial(&params, &spec, 0)?;
    println!("\ntrial 0: Yd1 = {:?}\n     reduced = {:?}", t.yd1, t.reduced_form);
    Ok(())
}
