#[path = "../examples/normal_functions.rs"]
mod normal_functions;

#[path = "../examples/kernel_distances.rs"]
mod kernel_distances;

#[path = "../examples/sliced_cost.rs"]
mod sliced_cost;

#[path = "../examples/normality_diagnostics.rs"]
mod normality_diagnostics;

#[path = "../examples/load_idx.rs"]
mod load_idx;

#[path = "../examples/distance_report.rs"]
mod distance_report;

#[path = "../examples/train_autoencoder.rs"]
mod train_autoencoder;

#[path = "../examples/compare_distances.rs"]
mod compare_distances;


#[test]
fn normal_functions_runs() {
    normal_functions::run_example().unwrap();
}

#[test]
fn kernel_distances_runs() {
    kernel_distances::run_example().unwrap();
}

#[test]
fn sliced_cost_runs() {
    sliced_cost::run_example().unwrap();
}

#[test]
fn normality_diagnostics_runs() {
    normality_diagnostics::run_example().unwrap();
}

#[test]
fn load_idx_runs() {
    load_idx::run_example().unwrap();
}

#[test]
fn distance_report_runs() {
    distance_report::run_example().unwrap();
}

#[test]
fn train_autoencoder_runs() {
    train_autoencoder::run_example().unwrap();
}

#[test]
fn compare_distances_runs() {
    compare_distances::run_example().unwrap();
}
