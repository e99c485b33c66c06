#![allow(dead_code)]

use cohomolib::{ActionSpec, GroupTable};

pub fn small_groups() -> Vec<(&'static str, GroupTable)> {
    vec![
        ("Z2", GroupTable::cyclic(2)),
        ("Z3", GroupTable::cyclic(3)),
        ("Z4", GroupTable::cyclic(4)),
        ("Z2xZ2", GroupTable::abelian(&[2, 2])),
    ]
}

pub fn small_modules(max_a: usize) -> Vec<(&'static str, GroupTable)> {
    let all = vec![
        ("Z2", GroupTable::cyclic(2)),
        ("Z3", GroupTable::cyclic(3)),
        ("Z4", GroupTable::cyclic(4)),
        ("Z2xZ2", GroupTable::abelian(&[2, 2])),
        ("Z5", GroupTable::cyclic(5)),
        ("Z6", GroupTable::cyclic(6)),
    ];
    all.into_iter().filter(|(_, a)| a.order() <= max_a).collect()
}

/// The trivial action, plus inversion when it is defined and nontrivial.
pub fn actions(g: &GroupTable, a: &GroupTable) -> Vec<ActionSpec> {
    let mut out = vec![ActionSpec::Trivial];
    if let Ok(inv) = ActionSpec::inversion(g, a) {
        if !inv.is_trivial() {
            out.push(inv);
        }
    }
    out
}
