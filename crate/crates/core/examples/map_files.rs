//! Writes the sample map and family files used by the command-line walkthrough.
//!
//! `cargo run --example map_files -- <dir>`

use std::path::PathBuf;
use std::sync::Arc;

use tilelocal::io::{family_to_file, pipeline_to_file, write_json};
use tilelocal::localize::HomotopyFamily;
use tilelocal::map::{LocalTable, MapPipeline, Stage, Wiggle};
use tilelocal::rational::{q, Vector};
use tilelocal::system::{chair, period_doubling};

fn main() -> tilelocal::error::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "maps".into()));
    std::fs::create_dir_all(&dir)?;
    let pd = Arc::new(period_doubling());
    let wiggle = Wiggle::geometric_1d(10, q(1, 4), 0);
    let f = MapPipeline::single(pd.clone(), Stage::Wiggle(wiggle.clone()));
    write_json(&dir.join("wiggle.json"), &pipeline_to_file(&f))?;

    let shift = MapPipeline::single(
        pd.clone(),
        Stage::Translate {
            v: Vector(vec![q(1, 4)]),
        },
    );
    write_json(&dir.join("translate.json"), &pipeline_to_file(&shift))?;

    // swap a and b wherever the left neighbour is b
    let recode = LocalTable::complete(&pd, pd.clone(), q(1, 1), |w| if w[2] == 1 { 1 - w[0] } else { w[0] })?;
    let block = MapPipeline::single(pd.clone(), Stage::LocalTable(recode)).then(Stage::Substitute);
    write_json(&dir.join("block-code.json"), &pipeline_to_file(&block))?;

    write_json(
        &dir.join("linear-wiggle.json"),
        &family_to_file(&HomotopyFamily::linear_wiggle(pd, wiggle)),
    )?;

    let ch = Arc::new(chair());
    let group = ch.group.clone().expect("chair carries its C4 action");
    let eq = MapPipeline::single(ch, Stage::Wiggle(Wiggle::equivariant_2d(3, q(1, 8), 0, &group)));
    write_json(&dir.join("chair-wiggle.json"), &pipeline_to_file(&eq))?;
    println!("wrote 5 files to {}", dir.display());
    Ok(())
}
