use coalgtop::intlinalg::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (rows, cols) = (300usize, 300usize);
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(0.02) {
                m.set(i, j, BigInt::from(rng.gen_range(-3i64..=3)));
            }
        }
    }
    let t0 = std::time::Instant::now();
    let snf = smith_normal_form(&m);
    eprintln!("snf in {:?}, rank {}", t0.elapsed(), snf.rank);
    let t0 = std::time::Instant::now();
    assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    eprintln!("verified in {:?}", t0.elapsed());
}
