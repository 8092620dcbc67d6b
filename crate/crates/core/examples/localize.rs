//! Localizing a non-local wiggle: f_ε is local at R + δ and moves tilings by less than ε.

use std::sync::Arc;

use tilelocal::locality::check_local;
use tilelocal::localize::localize;
use tilelocal::map::{MapPipeline, Stage, Wiggle};
use tilelocal::rational::q;
use tilelocal::system::period_doubling;
use tilelocal::tiling::sample_hull;

fn main() -> tilelocal::error::Result<()> {
    let sys = Arc::new(period_doubling());
    let f = MapPipeline::single(sys.clone(), Stage::Wiggle(Wiggle::geometric_1d(10, q(1, 4), 0)));
    let fe = localize(f.clone(), &q(1, 8))?;
    let radius = fe.locality_radius();
    println!(
        "ε = 1/8: δ = {}, R = {}, R + δ = {radius}",
        fe.params.delta, fe.params.radius
    );
    println!("f local at 2: {}", check_local(&f, &q(2, 1), 200, 7)?.pass);
    println!("f_ε local at R + δ: {}", check_local(&fe, &radius, 200, 7)?.pass);
    for t in sample_hull(&sys, 3, 2) {
        let s = fe.displacement(&t.place(&sys)?)?;
        println!("s_ε(T) ≈ {:.3e}", s.to_f64()[0]);
    }
    Ok(())
}
