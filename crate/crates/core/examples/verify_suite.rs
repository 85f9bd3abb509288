//! The consolidated check matrix on the default graphs.

use lipgraph::experiment::{run_verify_suite, VerifyConfig, VerifyStatus};

fn main() -> lipgraph::Result<()> {
    let report = run_verify_suite(&VerifyConfig::default())?;
    print!("{}", report.render());
    println!(
        "pass {} fail {} skipped {}",
        report.count(VerifyStatus::Pass),
        report.count(VerifyStatus::Fail),
        report.count(VerifyStatus::Skipped)
    );
    Ok(())
}
