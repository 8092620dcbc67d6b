//! Group-averaged localization on the chair recoding: f_ε commutes with quarter turns.

use std::sync::Arc;

use tilelocal::localize::equivariant_localize;
use tilelocal::map::{MapPipeline, Stage, Wiggle};
use tilelocal::rational::q;
use tilelocal::system::chair;
use tilelocal::verify::verify_theorem3;

fn main() -> tilelocal::error::Result<()> {
    let sys = Arc::new(chair());
    let group = sys.group.clone().expect("chair has a C4 action");
    let f = MapPipeline::single(sys, Stage::Wiggle(Wiggle::equivariant_2d(3, q(1, 8), 0, &group)));
    let fe = equivariant_localize(f, &q(2, 5), &group)?;
    println!("δ = {}, R = {}", fe.params.delta, fe.params.radius);
    let report = verify_theorem3(&fe, 10, 19)?;
    for p in &report.properties {
        println!("{}: {}", p.name, if p.pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}
