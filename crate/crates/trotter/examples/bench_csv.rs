//! Bound-only benchmark rows for the even-odd chain over several sizes,
//! rendered as CSV.

use trotter::bench::{bench_csv, run_bench, BenchConfig, BenchModel, TimeRule};
use trotter::bounds::NormMode;

fn main() -> trotter::Result<()> {
    let cfg = BenchConfig {
        model: BenchModel::HeisenbergNn,
        ordering: "even-odd".into(),
        sizes: vec![8, 16, 32],
        time_rule: TimeRule::EqualsN,
        eps: 1e-3,
        instances: 3,
        seed: 1,
        order: 4,
        mode: NormMode::Cluster,
        skip_empirical: true,
    };
    let rows = run_bench(&cfg)?;
    print!("{}", bench_csv(&cfg, &rows)?.render());
    Ok(())
}
