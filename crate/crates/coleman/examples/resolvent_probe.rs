//! Grid-dependence probe for the resolvent quadrature on the acceptance
//! suite's seeded pairs.

use coleman::diskgreen::eigen::SeriesTruncation;
use coleman::diskgreen::{DiskGreen, DiskSpec};
use coleman::point::ComplexPoint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let trunc = SeriesTruncation::new(48, 48, 1e-6).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for (l, mu) in [(2.0_f64, 0.5_f64), (3.0, 1.0)] {
        let dg = DiskGreen::new(DiskSpec::new(l, mu, trunc).unwrap()).unwrap();
        let mut pairs = Vec::new();
        while pairs.len() < 10 {
            let x = ComplexPoint::new(
                rng.gen_range(-0.7 * l..0.7 * l),
                rng.gen_range(-0.7 * l..0.7 * l),
            );
            let y = ComplexPoint::new(
                rng.gen_range(-0.7 * l..0.7 * l),
                rng.gen_range(-0.7 * l..0.7 * l),
            );
            if x.z().norm() < 0.8 * l && y.z().norm() < 0.8 * l && x.dist(&y) > 0.15 * l {
                pairs.push((x, y));
            }
        }
        let (x, y) = pairs[0];
        println!(
            "(L={l}, mu={mu}) pair x=({:.3},{:.3}) |x|={:.3}, y=({:.3},{:.3}) |y|={:.3}, |x-y|={:.3}",
            x.x0,
            x.x1,
            x.z().norm(),
            y.x0,
            y.x1,
            y.z().norm(),
            x.dist(&y)
        );
        for grid in [32usize, 48, 64] {
            let t0 = std::time::Instant::now();
            let r = dg.resolvent_check(x, y, grid).unwrap();
            println!("  grid {grid}: resolvent dev {r:.3e}  ({:.1?})", t0.elapsed());
        }
    }
}
