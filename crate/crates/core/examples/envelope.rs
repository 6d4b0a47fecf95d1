// Upper concave envelope, first of a sampled curve and then of a balanced
// rate term over the power plane.
//
// $ cargo run --example envelope

use asdgic::bounds::balanced_raw_value;
use asdgic::envelope::{uce_1d, uce_at_power, PowerGrid};

fn main() -> asdgic::Result<()> {
    let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
    let vals: Vec<f64> = grid.iter().map(|&x| (x * 1.7).sin() + 0.1 * x).collect();
    let env = uce_1d(&grid, &vals)?;
    println!("hull vertices at x = {:?}", env.hull_vertices.iter().map(|&i| grid[i]).collect::<Vec<_>>());
    println!("envelope at 3.1: {:.4} (raw there {:.4})", env.eval(3.1).expect("3.1 lies inside the grid"), (3.1f64 * 1.7).sin() + 0.31);

    let f = |p1: f64, p2: f64| balanced_raw_value(p1, p2, 1.0);
    for density in [16, 64, 256] {
        let g = PowerGrid::new(density, 100.0)?;
        println!("density {density:>3}: envelope at P = (1, 1) is {:.6}, raw {:.6}", uce_at_power(f, 1.0, 1.0, &g), f(1.0, 1.0));
    }
    Ok(())
}
