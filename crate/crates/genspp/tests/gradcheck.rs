//! Analytic gradients vs central finite differences for every
//! differentiable block and the composed predictor.

mod common;

#[test]
fn dense_layer_gradients() {
    common::gradcheck_dense(30, 100).assert_ok("dense");
}

#[test]
fn gru_bptt_gradients() {
    common::gradcheck_gru(30, 101).assert_ok("gru");
}

#[test]
fn max_pool_gradients() {
    common::gradcheck_pool(20, 102).assert_ok("pool");
}

#[test]
fn cross_entropy_gradients() {
    common::gradcheck_ce(20, 103).assert_ok("cross_entropy");
}

#[test]
fn composed_predictor_gradients() {
    common::gradcheck_predictor(30, 104).assert_ok("predictor");
}

#[test]
fn suite_covers_at_least_100_instances() {
    let outcome = common::gradcheck_suite(105);
    assert!(outcome.instances >= 100, "{} instances", outcome.instances);
    outcome.assert_ok("suite");
}
