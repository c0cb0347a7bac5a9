//! Extract a convergent subsequence by dyadic band refinement.
//!
//! The family `c_n = n * 1{n odd}` has no Cesàro limit classification
//! problem on its own (the means diverge), but it is bounded along the even
//! indices. Selection keeps the modal value band, which is the zero band, so
//! the surviving window is exactly the evens, where the limit is 0.

use cesaro_hull::decomposition::{partition, Mode};
use cesaro_hull::family::{AtomBound, CoefficientFamily, DivergenceRule};
use cesaro_hull::limits::{limit_profile, select_subsequence, LimitParams};
use cesaro_hull::space::AtomicSpace;

fn main() -> cesaro_hull::Result<()> {
    let space = AtomicSpace::new(vec![1.0], 0.0)?;
    let family = CoefficientFamily::from_fn(
        |n, _| if n % 2 == 1 { n as f64 } else { 0.0 },
        vec![AtomBound::Unknown],
        "odd-index bursts",
    )?;

    let params = LimitParams::default();
    let result = select_subsequence(&family, &space, 512, 32, &params)?;
    println!(
        "selection kept {} of 512 indices (identity: {}, fallback: {})",
        result.window.len(),
        result.identity,
        result.fallback
    );
    println!(
        "first survivors: {:?}",
        &result.window.indices()[..8.min(result.window.len())]
    );

    let profile = limit_profile(&result.window, &params)?;
    println!("limit on the selected window: {:?}", profile.limit(0));

    // the probe classifies the refined window as bounded (heuristic verdict)
    let part = partition(&result.window, Mode::Heuristic, &DivergenceRule::default())?;
    println!(
        "heuristic partition of the selected window: J_b = {:?} ({:?})",
        part.bounded_atoms(),
        part.provenance()
    );
    Ok(())
}
