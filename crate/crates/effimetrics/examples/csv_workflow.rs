//! File-based workflow without the CLI binary: write a price series as a
//! `date,close` CSV, ingest it back, and run a single-market rolling
//! measurement — the same code paths the `effimetrics` executable drives.
//!
//! ```bash
//! cargo run --release --example csv_workflow
//! ```

use std::fmt::Write as _;

use effimetrics::apen::ApEnConfig;
use effimetrics::dfa::DfaConfig;
use effimetrics::nn::EmbeddingConfig;
use effimetrics::pipeline::run_market;
use effimetrics::report::ingest_csv;
use effimetrics::synthetic::{gen_fgn, FgnSpec};
use effimetrics::timeseries::{log_returns, price_series_from_returns, WindowPlan};

fn main() {
    // fabricate a persistent market and write it the way `synth` would
    let spec = FgnSpec::with_scale(0.68, 2520, 21, 0.012).expect("valid spec");
    let returns = gen_fgn(&spec).expect("generation succeeds");
    let prices = price_series_from_returns(&returns, 100.0).expect("positive prices");

    let mut csv_text = String::from("date,close\n");
    for (date, close) in prices.dates().iter().zip(prices.prices()) {
        writeln!(csv_text, "{date},{close}").expect("string write");
    }
    let dir = std::env::temp_dir().join("effimetrics_csv_workflow");
    std::fs::create_dir_all(&dir).expect("create temp dir");
    let path = dir.join("demo_market.csv");
    std::fs::write(&path, csv_text).expect("write csv");
    println!("wrote {} ({} rows)", path.display(), prices.len());

    // ingest and verify the round trip is exact
    let ingested = ingest_csv(&path).expect("valid csv");
    assert_eq!(ingested.prices(), prices.prices());
    println!(
        "ingested {} — {} observations, prices reproduced bit-for-bit",
        ingested.market_id(),
        ingested.len()
    );

    let first_returns = log_returns(&ingested);
    println!(
        "first returns: {:?}",
        &first_returns.values()[..4]
            .iter()
            .map(|r| format!("{r:+.5}"))
            .collect::<Vec<_>>()
    );

    // rolling measurement straight from prices
    let summary = run_market(
        &ingested,
        &WindowPlan::default(),
        &DfaConfig::default(),
        &ApEnConfig::default(),
        &EmbeddingConfig::default(),
    )
    .expect("series long enough");
    println!("\nrolling summary for {}:", summary.market_id);
    println!("{:>4} {:>8} {:>8} {:>8}", "t", "H", "A", "NN");
    for row in &summary.per_subperiod {
        println!(
            "{:>4} {:>8.4} {:>8.4} {:>8.4}",
            row.t, row.hurst, row.apen, row.hit_rate
        );
    }
    println!(
        "means: H̄ {:.4}  Ā {:.4}  NN̄ {:.4}",
        summary.mean_hurst, summary.mean_apen, summary.mean_hit_rate
    );
}
