//! The section g: every hull point is matched on B_R(0) by a translate of the reference tiling.

use std::sync::Arc;

use tilelocal::patch::central_patch;
use tilelocal::rational::q;
use tilelocal::section::{approximant_summary, build_section};
use tilelocal::system::period_doubling;
use tilelocal::tiling::sample_hull;

fn main() -> tilelocal::error::Result<()> {
    let sys = Arc::new(period_doubling());
    let r = q(4, 1);
    let section = build_section(sys.clone(), r.clone())?;
    let summary = approximant_summary(&sys, &r)?;
    println!(
        "radius {r}: {} classes, {} adjacent pairs",
        section.census(),
        summary.adjacency.len()
    );
    for t in sample_hull(&sys, 5, 1) {
        let p = t.place(&sys)?;
        let rep = section.representative(&p)?;
        let same = central_patch(&p, &r)? == central_patch(&rep, &r)?;
        println!("g(T) = {:?}, agrees on B_R: {same}", section.g_of(&p)?);
    }
    Ok(())
}
