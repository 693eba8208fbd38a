//! Every example runs to completion.

#[path = "../examples/balayage.rs"]
mod balayage;
#[path = "../examples/block_density.rs"]
mod block_density;
#[path = "../examples/canonical_product.rs"]
mod canonical_product;
#[path = "../examples/cli_report.rs"]
mod cli_report;
#[path = "../examples/conditions.rs"]
mod conditions;
#[path = "../examples/harmonic_measure.rs"]
mod harmonic_measure;
#[path = "../examples/interval_logs.rs"]
mod interval_logs;
#[path = "../examples/kahane.rs"]
mod kahane;
#[path = "../examples/means.rs"]
mod means;
#[path = "../examples/mr_criterion.rs"]
mod mr_criterion;
#[path = "../examples/verify_majorants.rs"]
mod verify_majorants;

#[test]
fn runs_balayage() {
    balayage::run().unwrap();
}

#[test]
fn runs_block_density() {
    block_density::run().unwrap();
}

#[test]
fn runs_canonical_product() {
    canonical_product::run().unwrap();
}

#[test]
fn runs_cli_report() {
    cli_report::run().unwrap();
}

#[test]
fn runs_conditions() {
    conditions::run().unwrap();
}

#[test]
fn runs_harmonic_measure() {
    harmonic_measure::run().unwrap();
}

#[test]
fn runs_interval_logs() {
    interval_logs::run().unwrap();
}

#[test]
fn runs_kahane() {
    kahane::run().unwrap();
}

#[test]
fn runs_means() {
    means::run().unwrap();
}

#[test]
fn runs_mr_criterion() {
    mr_criterion::run().unwrap();
}

#[test]
fn runs_verify_majorants() {
    verify_majorants::run().unwrap();
}
