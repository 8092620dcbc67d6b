//! Exhaustive locality oracle against the sampling checker on random pipelines.

use std::sync::Arc;

use tilelocal::locality::check_local;
use tilelocal::rational::q;
use tilelocal::system::period_doubling;
use tilelocal::verify::{brute_force_locality_oracle, random_pipeline};

fn main() -> tilelocal::error::Result<()> {
    let sys = Arc::new(period_doubling());
    for seed in 0..8u64 {
        let (f, reach) = random_pipeline(&sys, seed)?;
        let r = q(3, 2);
        let oracle = brute_force_locality_oracle(&f, &r, reach)?;
        let sampled = check_local(&f, &r, 200, seed)?;
        let kinds: Vec<&str> = f.stages.iter().map(|s| s.kind()).collect();
        println!(
            "{kinds:?}: oracle {} over {} configurations, sampler {}",
            oracle.local, oracle.configurations, sampled.pass
        );
    }
    Ok(())
}
