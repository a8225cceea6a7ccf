//! Multi-threaded driver for the `(A, B, C)` search.

use std::thread;

use sboxlab_core::search::{merge_shards, shard_ranges, AbcScanner, SearchConfig, SearchResult};
use sboxlab_core::{Field, Result};

/// Runs one scoped thread per shard; the merged result equals
/// [`sboxlab_core::search::search_abc`] for any `jobs`.
pub fn search_abc(field: Field, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate(field)?;
    let scanner = AbcScanner::new(field, cfg.s)?;
    let ranges = shard_ranges(field.order(), cfg.jobs);
    let shards = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let scanner = &scanner;
                scope.spawn(move || scanner.scan(r, cfg.verify_bct))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect::<Vec<_>>()
    });
    merge_shards(field, cfg, shards)
}
