//! Map pipelines, their modulus certificates, and sampled locality.

use std::sync::Arc;

use tilelocal::locality::check_local;
use tilelocal::map::{LocalTable, MapPipeline, Stage, Wiggle};
use tilelocal::rational::{q, Vector};
use tilelocal::system::period_doubling;

fn main() -> tilelocal::error::Result<()> {
    let sys = Arc::new(period_doubling());
    let swap = LocalTable::complete(&sys, sys.clone(), q(1, 1), |w| if w[2] == 1 { 1 - w[0] } else { w[0] })?;
    let maps = [
        (
            "translate 1/4",
            MapPipeline::single(
                sys.clone(),
                Stage::Translate {
                    v: Vector(vec![q(1, 4)]),
                },
            ),
        ),
        (
            "block code then substitute",
            MapPipeline::single(sys.clone(), Stage::LocalTable(swap)).then(Stage::Substitute),
        ),
        (
            "wiggle K=10",
            MapPipeline::single(sys.clone(), Stage::Wiggle(Wiggle::geometric_1d(10, q(1, 4), 0))),
        ),
    ];
    for (name, f) in &maps {
        let cert = f.modulus(&q(1, 16), &q(1, 32))?;
        let local = check_local(f, &q(2, 1), 200, 1)?;
        println!(
            "{name}: δ = {}, L = {}, local at radius 2: {}",
            cert.delta, cert.lipschitz, local.pass
        );
    }
    Ok(())
}
