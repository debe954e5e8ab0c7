//! How many distinct noise settings a full multinomial fit needs, versus
//! standard ZNE, and how long that takes at one setting per minute.
//!
//!     cargo run --example overhead -- 200 3

use zne::pipeline::{overhead_report, MINUTES_PER_YEAR};

fn main() -> zne::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let sources = args.next().unwrap_or(200);
    let order = args.next().unwrap_or(3);

    let report = overhead_report(sources, order, 1.0, 1)?;
    println!("N = {sources}, n = {order}");
    for (k, c) in report.count.per_order.iter().enumerate() {
        println!("  order {k}: {c}");
    }
    println!(
        "top-order term {} ({:.3} years)",
        report.count.top_order_term,
        report.top_order_minutes() / MINUTES_PER_YEAR
    );
    println!(
        "cumulative     {} ({:.3} years)",
        report.count.cumulative,
        report.cumulative_minutes() / MINUTES_PER_YEAR
    );
    println!("standard ZNE   {} settings", report.standard_zne());
    Ok(())
}
