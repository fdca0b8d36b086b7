//! Every cargo example runs to completion.

#![allow(dead_code)]

#[path = "../examples/bell_basis.rs"]
mod bell_basis;
#[path = "../examples/classify_all.rs"]
mod classify_all;
#[path = "../examples/condition_r.rs"]
mod condition_r;
#[path = "../examples/equivalence_classes.rs"]
mod equivalence_classes;
#[path = "../examples/example_one.rs"]
mod example_one;
#[path = "../examples/one_way_protocols.rs"]
mod one_way_protocols;

#[test]
fn examples_succeed() {
    bell_basis::run().unwrap();
    equivalence_classes::run().unwrap();
    condition_r::run().unwrap();
    example_one::run().unwrap();
    one_way_protocols::run().unwrap();
    classify_all::run().unwrap();
}
