use polylab::poly::rudin_shapiro;
use polylab::zeros::{classify, find_roots};
use std::time::Instant;

fn main() {
    for k in [10u32, 11, 12] {
        let pair = rudin_shapiro(k).unwrap();
        for (name, f) in [("P", &pair.p), ("Q", &pair.q)] {
            let t0 = Instant::now();
            match find_roots::<f64>(f, None) {
                Ok(r) => {
                    let c = classify(&r, pair.n, 1e-8, 2.0);
                    println!(
                        "k={k} {name}: {} roots in {} sweeps, {:.2?}, max res {:.2e}, on_circle={} annulus={} real={}",
                        r.roots.len(), r.iterations, t0.elapsed(), r.max_residual(),
                        c.on_circle, c.annulus, c.real_zeros
                    );
                }
                Err(e) => println!("k={k} {name}: FAILED {e}"),
            }
        }
    }
}
