//! Load a coefficient family from CSV (rows = sequence index, columns =
//! atoms) and run the partition pipeline on it.

use std::io::Write;

use cesaro_hull::decomposition::{partition, Mode};
use cesaro_hull::family::{AtomBound, CoefficientFamily, DivergenceRule, SequenceWindow};
use cesaro_hull::limits::{limit_profile, LimitParams};
use cesaro_hull::space::AtomicSpace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("cesaro-hull-table-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("family.csv");

    // column `steady` is constant, column `ramp` grows linearly
    let mut file = std::fs::File::create(&path)?;
    writeln!(file, "steady,ramp")?;
    for n in 1..=256u64 {
        writeln!(file, "0.8,{}", n as f64)?;
    }
    drop(file);

    let family =
        CoefficientFamily::from_csv(&path, vec![AtomBound::Bounded(0.8), AtomBound::Unbounded])?;
    println!("loaded: {}", family.description());
    println!("defined up to n = {:?}", family.max_index());

    let space = AtomicSpace::new(vec![0.7, 0.3], 0.0)?;
    let window = SequenceWindow::identity(family, space, 256)?;
    let part = partition(&window, Mode::Exact, &DivergenceRule::default())?;
    println!(
        "J_b = {:?}, J_u = {:?}",
        part.bounded_atoms(),
        part.unbounded_atoms()
    );

    let profile = limit_profile(&window, &LimitParams::default())?;
    for (atom, limit) in profile.limits().iter().enumerate() {
        println!("atom {}: limit {:?}", profile.labels()[atom], limit);
    }
    Ok(())
}
