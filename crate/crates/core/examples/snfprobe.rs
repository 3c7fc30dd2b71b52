use coalgtop::intlinalg::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_sparse(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64, span: i64) -> IntMatrix {
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                m.set(i, j, BigInt::from(rng.gen_range(-span..=span)));
            }
        }
    }
    m
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..40 {
        let rows = rng.gen_range(1..=30usize);
        let cols = rng.gen_range(1..=30usize);
        let m = random_sparse(&mut rng, rows, cols, 0.3, 9);
        let t0 = std::time::Instant::now();
        let snf = smith_normal_form(&m);
        eprintln!("case {k}: {rows}x{cols} done in {:?}, rank {}", t0.elapsed(), snf.rank);
    }
    // acceptance-scale benchmark
    let m = random_sparse(&mut rng, 300, 300, 0.02, 9);
    let t0 = std::time::Instant::now();
    let snf = smith_normal_form(&m);
    eprintln!("300x300 density 0.02 done in {:?}, rank {}", t0.elapsed(), snf.rank);
    let t0 = std::time::Instant::now();
    let umv = snf.u.mul(&m).mul(&snf.v);
    assert_eq!(umv, snf.d);
    eprintln!("U*M*V verified in {:?}", t0.elapsed());
}
