#![allow(dead_code)]

use locc::bell::BellSet;
use locc::protocol::Provenance;

fn sets(prefix: &str, tails: &[&str]) -> Vec<BellSet> {
    tails.iter().map(|t| BellSet::parse(4, &format!("{prefix},{}", t.replace(' ', ","))).unwrap()).collect()
}

/// Known indistinguishable sets beginning with ψ_00, ψ_01.
pub fn failing_with_00_01() -> Vec<BellSet> {
    sets(
        "00,01",
        &[
            "02 20", "02 22", "10 12", "10 21", "10 22", "11 13", "11 20", "11 23", "12 21", "12 22", "13 20", "13 23", "20 22",
            "20 23", "20 31", "20 33", "21 23", "21 30", "21 32", "22 30", "22 32", "23 31", "23 33", "30 32", "31 33",
        ],
    )
}

/// Known indistinguishable sets beginning with ψ_00, ψ_02.
pub fn failing_with_00_02() -> Vec<BellSet> {
    sets("00,02", &["10 20", "10 22", "10 31", "10 32", "10 33", "11 20", "11 22", "11 30", "11 31", "11 32", "20 30", "20 31", "20 32", "20 33"])
}

/// Sets each catalog basis is meant to handle directly.
pub fn listed_sets() -> Vec<(Provenance, BellSet)> {
    let mut out = Vec::new();
    let mut add = |p: Provenance, v: Vec<BellSet>| out.extend(v.into_iter().map(|s| (p, s)));
    add(Provenance::Set1, sets("00,01", &["02 10", "02 21", "02 32", "10 13", "10 20", "10 31", "13 21", "20 21", "20 32", "21 31"]));
    add(Provenance::Set1, sets("00,02", &["10 12", "10 23", "10 30", "21 30"]));
    add(Provenance::Set2, sets("00", &["01 02 11", "01 02 31", "01 10 23", "01 11 22", "01 22 31", "01 23 30", "02 11 21", "02 21 31"]));
    add(Provenance::Set3, sets("00", &["01 02 12", "01 02 30", "01 11 21", "01 12 20", "01 20 30", "01 21 33", "02 10 21", "02 21 32"]));
    add(
        Provenance::Set4,
        sets("00", &["01 10 11", "01 10 30", "01 10 32", "01 11 12", "01 11 31", "01 11 33", "01 12 30", "01 12 32", "01 13 31", "01 13 33"]),
    );
    add(Provenance::Set5, sets("00", &["01 10 33", "01 11 32", "01 12 31", "01 13 30", "01 11 30"]));
    add(Provenance::Set6, sets("00", &["02 20 22"]));
    out
}
