use coalgtop::sset::{smash, sphere};
use coalgtop::susp::loops_level;
use std::time::Instant;

fn main() {
    for (name, x) in [("S1", sphere(1)), ("S2", sphere(2))] {
        let z = smash(&x, &sphere(1));
        for k in 0..=3 {
            let t = Instant::now();
            let n = loops_level(&z, 1, k).len();
            println!("{name} wedge-susp, k={k}: {n} elems in {:?}", t.elapsed());
        }
    }
}
