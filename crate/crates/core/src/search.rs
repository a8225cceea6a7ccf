//! Exhaustive search over `F(x) = x^(2^(s+1)+2) + A x + B x^4 + C x^16`.
//!
//! The candidate space `GF(2^n)^3` is split by the outer coordinate `A` into
//! independent shards. Each shard is scanned with [`AbcScanner::scan`] and the
//! results are combined by [`merge_shards`], which only adds counts and sorts
//! the witness list, so the outcome does not depend on how the space was cut.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::quadratic::{abc_exponent, check_abc_params, find_li_lambdas};
use crate::sbox::SBox;
use crate::tables::{bct_paircount, differential_uniformity};

/// Witnesses kept in memory.
pub const WITNESS_LIMIT: usize = 4096;

/// Exhaustive search is only offered up to this degree.
pub const MAX_SEARCH_DEGREE: u32 = 10;

pub const GOLD_CASE: &str = "gold-case";
pub const LI_CASE: &str = "li-case";
pub const OTHER: &str = "other";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: u32,
    pub s: u32,
    pub verify_bct: bool,
    pub jobs: usize,
}

impl SearchConfig {
    /// BCT verification defaults to on for `n <= 6`.
    pub fn new(n: u32, s: u32) -> Self {
        SearchConfig {
            n,
            s,
            verify_bct: n <= 6,
            jobs: 1,
        }
    }

    pub fn validate(&self, field: Field) -> Result<()> {
        if field.degree() != self.n {
            return Err(Error::FieldMismatch);
        }
        if self.n > MAX_SEARCH_DEGREE {
            return Err(Error::Precondition("n <= 10 for exhaustive search"));
        }
        if self.jobs == 0 {
            return Err(Error::Precondition("jobs >= 1"));
        }
        check_abc_params(field, self.s)
    }
}

/// Coefficients `(A, B, C)` of one member of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbcTriple {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
}

/// Partial result over a range of `A` values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchShard {
    pub candidates: u64,
    pub permutation_count: u64,
    /// `Some` only when verification ran.
    pub all_delta_4: Option<bool>,
    pub all_beta_4: Option<bool>,
    pub witnesses: Vec<AbcTriple>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: u32,
    pub s: u32,
    pub reduction_poly: u32,
    pub total_candidates: u64,
    pub permutation_count: u64,
    /// `None` when BCT verification was disabled.
    pub all_delta_4: Option<bool>,
    pub all_beta_4: Option<bool>,
    /// Sorted; at most [`WITNESS_LIMIT`] entries.
    pub witnesses: Vec<AbcTriple>,
    pub truncated: bool,
    /// Empty when the witness list is truncated.
    pub classified_counts: BTreeMap<String, u64>,
}

impl SearchResult {
    /// True when every clause that was checked holds.
    pub fn verified(&self) -> bool {
        self.all_delta_4 != Some(false) && self.all_beta_4 != Some(false)
    }
}

/// Precomputed tables for scanning the family over one field.
pub struct AbcScanner {
    field: Field,
    s: u32,
    lead: Vec<Elem>,
    /// `B x^4` for each `B`, flattened row-major.
    quartic: Vec<Elem>,
    /// `C x^16` for each `C`.
    hexadecic: Vec<Elem>,
}

impl AbcScanner {
    pub fn new(field: Field, s: u32) -> Result<Self> {
        check_abc_params(field, s)?;
        if field.degree() > MAX_SEARCH_DEGREE {
            return Err(Error::Precondition("n <= 10 for exhaustive search"));
        }
        let lead = SBox::power(field, abc_exponent(field, s)).into_lut();
        let x4 = SBox::power(field, 4).into_lut();
        let x16 = SBox::power(field, 16).into_lut();
        let table = |pows: &[Elem]| -> Vec<Elem> {
            field
                .elements()
                .flat_map(|coef| pows.iter().map(move |&p| field.mul(coef, p)))
                .collect()
        };
        Ok(AbcScanner {
            field,
            s,
            lead,
            quartic: table(&x4),
            hexadecic: table(&x16),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn sbox(&self, t: AbcTriple) -> SBox {
        let size = self.field.order();
        let (b, c) = (t.b as usize * size, t.c as usize * size);
        SBox::from_fn(self.field, |x| {
            let xi = x as usize;
            self.lead[xi] ^ self.field.mul(t.a, x) ^ self.quartic[b + xi] ^ self.hexadecic[c + xi]
        })
    }

    /// Scans every `(A, B, C)` with `A` in `a_range`.
    pub fn scan(&self, a_range: Range<Elem>, verify: bool) -> SearchShard {
        let field = self.field;
        let size = field.order();
        let mut shard = SearchShard {
            all_delta_4: verify.then_some(true),
            all_beta_4: verify.then_some(true),
            ..SearchShard::default()
        };
        let mut with_a = vec![0 as Elem; size];
        let mut with_ab = vec![0 as Elem; size];
        // seen[v] == stamp marks v as taken in the current candidate
        let mut seen = vec![0u32; size];
        let mut stamp = 0u32;
        for a in a_range {
            for (x, slot) in with_a.iter_mut().enumerate() {
                *slot = self.lead[x] ^ field.mul(a, x as Elem);
            }
            for b in field.elements() {
                let quartic = &self.quartic[b as usize * size..][..size];
                for (slot, (&v, &w)) in with_ab.iter_mut().zip(with_a.iter().zip(quartic)) {
                    *slot = v ^ w;
                }
                for c in field.elements() {
                    shard.candidates += 1;
                    stamp = stamp.wrapping_add(1);
                    if stamp == 0 {
                        seen.fill(0);
                        stamp = 1;
                    }
                    let hex = &self.hexadecic[c as usize * size..][..size];
                    let bijective = with_ab.iter().zip(hex).all(|(&v, &w)| {
                        let y = (v ^ w) as usize;
                        let fresh = seen[y] != stamp;
                        seen[y] = stamp;
                        fresh
                    });
                    if !bijective {
                        continue;
                    }
                    let t = AbcTriple { a, b, c };
                    shard.permutation_count += 1;
                    if verify {
                        let f = self.sbox(t);
                        if differential_uniformity(&f) != 4 {
                            shard.all_delta_4 = Some(false);
                        }
                        if bct_paircount(&f).max_nonzero() != 4 {
                            shard.all_beta_4 = Some(false);
                        }
                    }
                    if shard.witnesses.len() < WITNESS_LIMIT {
                        shard.witnesses.push(t);
                    }
                }
            }
        }
        shard
    }
}

/// Splits `0..2^n` into at most `jobs` contiguous ranges of near-equal size.
pub fn shard_ranges(order: usize, jobs: usize) -> Vec<Range<Elem>> {
    let jobs = jobs.clamp(1, order);
    let (base, extra) = (order / jobs, order % jobs);
    let mut start = 0;
    (0..jobs)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let r = start as Elem..(start + len) as Elem;
            start += len;
            r
        })
        .collect()
}

fn and_opt(x: Option<bool>, y: Option<bool>) -> Option<bool> {
    match (x, y) {
        (Some(p), Some(q)) => Some(p && q),
        _ => None,
    }
}

/// Combines shard results; independent of shard order and boundaries.
pub fn merge_shards(
    field: Field,
    cfg: &SearchConfig,
    shards: impl IntoIterator<Item = SearchShard>,
) -> Result<SearchResult> {
    let mut total = SearchShard {
        all_delta_4: cfg.verify_bct.then_some(true),
        all_beta_4: cfg.verify_bct.then_some(true),
        ..SearchShard::default()
    };
    let mut truncated = false;
    for shard in shards {
        total.candidates += shard.candidates;
        total.permutation_count += shard.permutation_count;
        total.all_delta_4 = and_opt(total.all_delta_4, shard.all_delta_4);
        total.all_beta_4 = and_opt(total.all_beta_4, shard.all_beta_4);
        truncated |= (shard.witnesses.len() as u64) < shard.permutation_count;
        total.witnesses.extend(shard.witnesses);
    }
    total.witnesses.sort_unstable();
    if total.witnesses.len() > WITNESS_LIMIT {
        total.witnesses.truncate(WITNESS_LIMIT);
        truncated = true;
    }
    let mut result = SearchResult {
        n: cfg.n,
        s: cfg.s,
        reduction_poly: field.reduction_poly(),
        total_candidates: total.candidates,
        permutation_count: total.permutation_count,
        all_delta_4: total.all_delta_4,
        all_beta_4: total.all_beta_4,
        witnesses: total.witnesses,
        truncated,
        classified_counts: BTreeMap::new(),
    };
    if !truncated {
        result.classified_counts = classify_witnesses(field, &result)?;
    }
    Ok(result)
}

/// Runs the search on the current thread, shard by shard.
pub fn search_abc(field: Field, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate(field)?;
    let scanner = AbcScanner::new(field, cfg.s)?;
    let shards = shard_ranges(field.order(), cfg.jobs)
        .into_iter()
        .map(|r| scanner.scan(r, cfg.verify_bct));
    merge_shards(field, cfg, shards)
}

/// Buckets witnesses into `gold-case` (`A = B = C = 0`), `li-case`
/// (`B = C = 0` and `A` one of the Li lambdas, when the family's leading
/// exponent coincides with `2^m + 2`), and `other`.
pub fn classify_witnesses(field: Field, result: &SearchResult) -> Result<BTreeMap<String, u64>> {
    if result.truncated {
        return Err(Error::TruncatedWitnesses);
    }
    let n = field.degree();
    let li_lambdas = if n.is_multiple_of(2) && (n / 2) % 2 == 1 {
        let m = n / 2;
        let li_exp = field.normalize_exponent((1u64 << m) + 2);
        if field.normalize_exponent(abc_exponent(field, result.s)) == li_exp {
            find_li_lambdas(field)?
        } else {
            Vec::new()
        }
    } else {
        Vec::new()
    };
    let mut counts: BTreeMap<String, u64> = [GOLD_CASE, LI_CASE, OTHER]
        .iter()
        .map(|l| (l.to_string(), 0))
        .collect();
    for t in &result.witnesses {
        let label = if t.b == 0 && t.c == 0 && t.a == 0 {
            GOLD_CASE
        } else if t.b == 0 && t.c == 0 && li_lambdas.binary_search(&t.a).is_ok() {
            LI_CASE
        } else {
            OTHER
        };
        *counts.get_mut(label).expect("label present") += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::construct_abc;

    #[test]
    fn shard_ranges_cover() {
        for (order, jobs) in [(64, 1), (64, 3), (64, 8), (4, 9)] {
            let r = shard_ranges(order, jobs);
            assert_eq!(r.first().unwrap().start, 0);
            assert_eq!(r.last().unwrap().end as usize, order);
            assert!(r.windows(2).all(|w| w[0].end == w[1].start));
        }
    }

    #[test]
    fn scanner_sbox_matches_construction() {
        let field = Field::with_default_poly(6).unwrap();
        let scanner = AbcScanner::new(field, 2).unwrap();
        for t in [(0, 0, 0), (3, 9, 60), (63, 1, 2)] {
            let triple = AbcTriple { a: t.0, b: t.1, c: t.2 };
            assert_eq!(
                scanner.sbox(triple),
                construct_abc(field, 2, t.0, t.1, t.2).unwrap()
            );
        }
    }

    #[test]
    fn n2_search_matches_bruteforce() {
        let field = Field::with_default_poly(2).unwrap();
        let cfg = SearchConfig::new(2, 2);
        let r = search_abc(field, &cfg).unwrap();
        let mut expected = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if construct_abc(field, 2, a, b, c).unwrap().is_permutation() {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(r.total_candidates, 64);
        assert_eq!(r.permutation_count, expected);
        assert_eq!(r.classified_counts.values().sum::<u64>(), expected);
    }

    #[test]
    fn truncated_classification_rejected() {
        let field = Field::with_default_poly(6).unwrap();
        let r = SearchResult {
            n: 6,
            s: 2,
            reduction_poly: field.reduction_poly(),
            total_candidates: 0,
            permutation_count: 5000,
            all_delta_4: None,
            all_beta_4: None,
            witnesses: Vec::new(),
            truncated: true,
            classified_counts: BTreeMap::new(),
        };
        assert_eq!(classify_witnesses(field, &r), Err(Error::TruncatedWitnesses));
    }

    #[test]
    fn config_validation() {
        let field = Field::with_default_poly(6).unwrap();
        assert!(search_abc(field, &SearchConfig::new(6, 3)).is_err());
        let mut cfg = SearchConfig::new(6, 2);
        cfg.jobs = 0;
        assert!(search_abc(field, &cfg).is_err());
        assert_eq!(
            search_abc(field, &SearchConfig::new(10, 2)),
            Err(Error::FieldMismatch)
        );
    }
}
