//! Bundled substitution systems: validation, supertiles and patch censuses.

use tilelocal::patch::enumerate_patch_classes;
use tilelocal::rational::q;
use tilelocal::system::catalog;

fn main() -> tilelocal::error::Result<()> {
    for sys in catalog() {
        let report = sys.validate()?;
        println!(
            "{}: dimension {}, primitive {} (exponent {:?})",
            sys.name, sys.dim, report.primitive, report.primitivity_exponent
        );
        let tile = sys.expand_supertile(0, 3);
        for y in (0..tile.rows()).rev() {
            let row: String = (0..tile.side)
                .map(|x| sys.label_name(tile.get(x, y)).chars().next().unwrap())
                .collect();
            println!("  {row}");
        }
        for r in [q(1, 1), q(3, 2), q(2, 1)] {
            println!(
                "  radius {r}: {} patch classes",
                enumerate_patch_classes(&sys, &r)?.count()
            );
        }
    }
    Ok(())
}
