use std::time::Instant;
use lincsp::generator::{greedy_maximal_hypergraph, hypergraph_size_lower_bound};
use lincsp::rng::derive_seed;
use num_traits::ToPrimitive;

fn sweep(seed: u64) -> std::time::Duration {
    let t = Instant::now();
    for k in 2..=6usize {
        for ell in 2..=k {
            for n in k as u64..=30 {
                let h = greedy_maximal_hypergraph(n, k, ell, derive_seed(seed, n)).unwrap();
                let bound = hypergraph_size_lower_bound(n, k as u64, ell as u64).unwrap().to_usize().unwrap();
                assert!(h.num_edges() >= bound);
                assert!(h.overlap_witness(ell).is_none());
            }
        }
    }
    t.elapsed()
}

fn main() {
    for s in 0..4 {
        println!("sweep {s}: {:?}", sweep(s));
    }
}
