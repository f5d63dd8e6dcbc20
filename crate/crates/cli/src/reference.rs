//! Published cycle-length sets, used by `table` and `search` to flag
//! discrepancies.

use std::collections::BTreeSet;

use pancake_core::GraphParams;

pub struct Reference {
    pub m: u32,
    pub n: usize,
    pub directed: bool,
    pub lengths: BTreeSet<usize>,
}

fn range(lo: usize, hi: usize, step: usize, except: &[usize]) -> BTreeSet<usize> {
    (lo..=hi)
        .step_by(step)
        .filter(|l| !except.contains(l))
        .collect()
}

/// Every published row, undirected first, in table order.
pub fn rows() -> Vec<Reference> {
    let row = |m, n, directed, lengths| Reference {
        m,
        n,
        directed,
        lengths,
    };
    vec![
        row(2, 3, false, range(8, 48, 1, &[])),
        row(3, 2, false, range(3, 18, 1, &[])),
        row(3, 3, false, range(3, 162, 1, &[])),
        row(4, 2, false, range(4, 32, 2, &[])),
        row(5, 2, false, range(5, 50, 1, &[])),
        row(3, 2, true, range(3, 18, 1, &[5, 7, 11, 16, 17])),
        row(4, 2, true, range(4, 32, 2, &[30])),
        row(5, 2, true, range(5, 50, 1, &[7, 9, 13, 47, 48, 49])),
        row(6, 2, true, range(4, 72, 2, &[])),
    ]
}

pub fn lookup(params: &GraphParams) -> Option<Reference> {
    rows()
        .into_iter()
        .find(|r| r.m == params.m && r.n == params.n && r.directed == params.directed)
}

/// P(3,2) is published two ways: the table omits 16, the figure caption
/// lists only 5, 7, 11 and 17 as missing. Says which one `found` matches.
pub fn p32_variant(params: &GraphParams, found: &BTreeSet<usize>) -> Option<String> {
    if (params.m, params.n, params.directed) != (3, 2, true) {
        return None;
    }
    let table = range(3, 18, 1, &[5, 7, 11, 16, 17]);
    let caption = range(3, 18, 1, &[5, 7, 11, 17]);
    let verdict = if *found == table {
        "16 absent: matches the table variant"
    } else if *found == caption {
        "16 present: matches the caption variant"
    } else {
        "matches neither published variant"
    };
    Some(format!("P(3,2) {verdict}"))
}
