// Gap between outer and inner bounds on the symmetric ray, at a handful of
// SNRs.
//
// $ cargo run --example gap_table

use asdgic::bounds::gap_tilde;
use asdgic::envelope::PowerGrid;

fn main() -> asdgic::Result<()> {
    let grid = PowerGrid::default();
    println!("{:>6} {:>10} {:>10} {:>10} {:>8}", "x", "outer", "raw", "env", "gap");
    for x in [0.1, 0.5, 1.0, 10.0, 20.0] {
        let r = gap_tilde(x, &grid)?;
        println!(
            "{:>6} {:>10.5} {:>10.5} {:>10.5} {:>8.5}",
            x, r.term_outer, r.term_inner_raw, r.term_inner_env, r.gap
        );
    }
    Ok(())
}
