//! Hull membership mechanics: convex combinations of evaluations, the
//! Cesàro mean as the uniform mixture, and flattening of nested mixtures.

use cesaro_hull::family::{convex_combination, AtomBound, CoefficientFamily, SequenceWindow};
use cesaro_hull::space::{expectation, AtomicSpace};

fn main() -> cesaro_hull::Result<()> {
    let space = AtomicSpace::new(vec![0.5, 0.3, 0.2], 0.0)?;
    let family = CoefficientFamily::from_fn(
        |n, m| ((n * (m as u64 + 2)) % 5) as f64,
        vec![AtomBound::Bounded(4.0); 3],
        "mod-5 pattern",
    )?;
    let window = SequenceWindow::identity(family, space.clone(), 8)?;

    let evals: Vec<_> = (1..=8)
        .map(|k| window.evaluate(k))
        .collect::<cesaro_hull::Result<_>>()?;

    // the Cesàro mean at k = 8 is the uniform convex combination
    let uniform = convex_combination(&evals, &[1.0 / 8.0; 8])?;
    let cesaro = window.cesaro(8)?;
    println!("uniform mixture: {:?}", uniform.values());
    println!("cesaro mean:     {:?}", cesaro.values());

    // nested mixtures flatten
    let inner = convex_combination(&evals[..2], &[0.25, 0.75])?;
    let nested = convex_combination(&[inner, evals[2].clone()], &[0.4, 0.6])?;
    let flat = convex_combination(&evals[..3], &[0.1, 0.3, 0.6])?;
    println!("nested mixture:  {:?}", nested.values());
    println!("flat mixture:    {:?}", flat.values());

    println!(
        "expectation of the mixture under P: {:.4}",
        expectation(&space, &flat, None)?
    );
    Ok(())
}
