// Normalized second moments and a few quantizer calls for each lattice
// family.
//
// $ cargo run --release --example lattice_moments

use asdgic::lattice::Lattice;

fn main() -> asdgic::Result<()> {
    let lattices = [
        Lattice::integer_cubic(1)?,
        Lattice::integer_cubic(4)?,
        Lattice::hexagonal().with_moment_samples(1_000_000, 1),
        Lattice::d4().with_moment_samples(1_000_000, 1),
        Lattice::e8().with_moment_samples(1_000_000, 1),
    ];
    for lat in &lattices {
        let m = lat.second_moment();
        println!(
            "{:<14} n={} G={:.6} (se {:.1e})  shaping loss {:.4} bits",
            lat.family().tag(),
            lat.dim(),
            lat.nsm(),
            m.std_error / lat.volume().powf(2.0 / lat.dim() as f64),
            lat.shaping_loss_bits()
        );
    }

    let hex = Lattice::hexagonal();
    let x = [0.9, 0.7];
    println!("Q_hex({x:?}) = {:?}", hex.nearest_point(&x)?);
    println!("{x:?} mod hex = {:?}", hex.mod_lattice(&x)?);
    Ok(())
}
