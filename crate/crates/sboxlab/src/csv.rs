//! CSV export of count tables: a header `a\b,0,1,...` then one row per `a`.

use std::fmt::Write as _;

use sboxlab_core::CountTable;

pub fn table_csv(t: &CountTable) -> String {
    let mut out = String::from("a\\b");
    for b in 0..t.size() {
        let _ = write!(out, ",{b}");
    }
    out.push('\n');
    for (a, row) in t.rows().enumerate() {
        let _ = write!(out, "{a}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}
