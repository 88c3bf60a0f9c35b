//! Adjusted Rand index on a few hand-made label vectors.

use ksplits::adjusted_rand_index;
use ksplits::rng::SeededRng;

fn main() -> ksplits::Result<()> {
    let truth = [0, 0, 0, 1, 1, 1, 2, 2, 2];
    let cases: [(&str, [usize; 9]); 4] = [
        ("identical", [0, 0, 0, 1, 1, 1, 2, 2, 2]),
        ("renamed", [5, 5, 5, 9, 9, 9, 1, 1, 1]),
        ("one point moved", [0, 0, 1, 1, 1, 1, 2, 2, 2]),
        ("two clusters merged", [0, 0, 0, 0, 0, 0, 2, 2, 2]),
    ];
    for (name, labels) in cases {
        println!("{name:<20} {:.4}", adjusted_rand_index(&truth, &labels)?);
    }

    let mut rng = SeededRng::new(3);
    let n = 200;
    let mut total = 0.0;
    for _ in 0..100 {
        let a: Vec<usize> = (0..n).map(|_| rng.below(4) as usize).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.below(4) as usize).collect();
        total += adjusted_rand_index(&a, &b)?;
    }
    println!("{:<20} {:.4}", "random (mean of 100)", total / 100.0);
    Ok(())
}
