//! The infinite-mean branch: Pareto terms with tail index 1/2 have no finite
//! mean, the Cesàro trajectory outgrows every level, and the divergence
//! classifier fires on both the raw draws and the running means.

use cesaro_hull::limits::{classify_trajectory, LimitParams};
use cesaro_hull::slln::{
    generate, slln_regime_check, DistributionSpec, GeneratorSpec, RegimeParams,
};

fn main() -> cesaro_hull::Result<()> {
    let spec = GeneratorSpec::iid(
        DistributionSpec::Pareto {
            shape: 0.5,
            scale: 1.0,
        },
        99,
        100_000,
        2,
    );
    let run = generate(&spec)?;

    println!("declared mean: {}", spec.mean());
    println!("n         cesaro (path 0)");
    for n in [10usize, 100, 1_000, 10_000, 100_000] {
        println!("{:>8}  {:.3e}", n, run.cesaro()[0][n - 1]);
    }

    let params = LimitParams {
        tol: 0.05,
        ..LimitParams::default()
    };
    let class = classify_trajectory(&run.cesaro()[0], &params)?;
    let raw_fires = params.divergence.diverges(
        run.paths()[0]
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u64 + 1, v)),
    );
    println!("\ncesaro classification: {class:?}");
    println!("growth probe on raw draws fires: {raw_fires}");

    let regime = RegimeParams {
        limit: params,
        ..RegimeParams::default()
    };
    let report = slln_regime_check(&spec, &run, &regime)?;
    println!(
        "regime verdict (all four statements false together): {:?}",
        report.verdict
    );
    Ok(())
}
