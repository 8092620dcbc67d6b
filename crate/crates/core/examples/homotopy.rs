//! A family of wiggles localized slice by slice, with connectors back to the exact endpoints.

use std::sync::Arc;

use tilelocal::localize::{homotopy_localize, HomotopyFamily};
use tilelocal::map::Wiggle;
use tilelocal::rational::q;
use tilelocal::system::period_doubling;
use tilelocal::verify::verify_theorem2;

fn main() -> tilelocal::error::Result<()> {
    let sys = Arc::new(period_doubling());
    let family = HomotopyFamily::linear_wiggle(sys, Wiggle::geometric_1d(10, q(1, 4), 0));
    let h = homotopy_localize(family, &q(1, 8), 11)?;
    println!(
        "{} slices, δ = {}, R = {}",
        h.slices.len(),
        h.params.delta,
        h.params.radius
    );
    for tau in [q(0, 1), q(1, 8), q(1, 2), q(7, 8), q(1, 1)] {
        let slice = h.at(&tau)?;
        println!(
            "τ = {tau}: node scale {}, locality radius {}",
            slice.node_scale,
            slice.locality_radius()
        );
    }
    let report = verify_theorem2(&h, 40, 17)?;
    for p in &report.properties {
        println!("{}: {}", p.name, if p.pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}
