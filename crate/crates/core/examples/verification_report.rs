//! Every claim side by side: closed form, exact value, Monte Carlo estimate.
//!
//! cargo run --release --example verification_report

use blackwell::cli::{parse_config, verify_all};

fn main() {
    let config = parse_config(["blackwell", "verify", "--trials", "200000"]).expect("valid flags");
    let report = verify_all(&config).expect("claims run");
    report.write_table(&mut std::io::stdout()).expect("stdout");
}
