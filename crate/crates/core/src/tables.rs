//! Difference distribution and boomerang connectivity tables.
//!
//! The BCT is computed three ways:
//!
//! - [`bct_definition`] counts `x` with `F^-1(F(x)+b) + F^-1(F(x+a)+b) = a`
//!   using the inverse table;
//! - [`bct_paircount`] sums, over every difference `gamma`, the number of
//!   ordered pairs inside each preimage set `U_{gamma,b} = {x : D_gamma F(x) = b}`
//!   that differ by `a`;
//! - [`bct_boura_canteaut`] starts from the DDT and adds the pairs of the
//!   preimage sets of the inverse function, excluding the trivial ones.
//!
//! All three agree on permutations; `bct_paircount` also accepts
//! non-bijective functions.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::sbox::SBox;

/// A `2^n x 2^n` table of counts indexed by `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountTable {
    size: usize,
    counts: Vec<u32>,
}

impl CountTable {
    pub fn zeros(size: usize) -> Self {
        CountTable {
            size,
            counts: vec![0; size * size],
        }
    }

    /// Number of rows (and columns).
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, a: Elem, b: Elem) -> u32 {
        self.counts[a as usize * self.size + b as usize]
    }

    #[inline]
    fn bump(&mut self, a: Elem, b: Elem, by: u32) {
        self.counts[a as usize * self.size + b as usize] += by;
    }

    pub fn row(&self, a: Elem) -> &[u32] {
        let start = a as usize * self.size;
        &self.counts[start..start + self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.counts.chunks(self.size)
    }

    pub fn column(&self, b: Elem) -> impl Iterator<Item = u32> + '_ {
        self.rows().map(move |r| r[b as usize])
    }

    /// Maximum over entries with `a != 0` and `b != 0`.
    pub fn max_nonzero(&self) -> u32 {
        self.rows()
            .skip(1)
            .flat_map(|r| r[1..].iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn transpose(&self) -> CountTable {
        let mut t = CountTable::zeros(self.size);
        for a in 0..self.size {
            for b in 0..self.size {
                t.counts[b * self.size + a] = self.counts[a * self.size + b];
            }
        }
        t
    }
}

/// `DDT(a, b) = #{x : F(x + a) + F(x) = b}`.
pub fn ddt(f: &SBox) -> CountTable {
    let lut = f.lut();
    let size = f.size();
    let mut t = CountTable::zeros(size);
    for a in 0..size {
        let row = &mut t.counts[a * size..(a + 1) * size];
        for (x, &y) in lut.iter().enumerate() {
            row[(lut[x ^ a] ^ y) as usize] += 1;
        }
    }
    t
}

/// Max DDT entry over nonzero `(a, b)`.
pub fn differential_uniformity(f: &SBox) -> u32 {
    ddt(f).max_nonzero()
}

/// BCT straight from its definition, via the inverse lookup table.
pub fn bct_definition(f: &SBox) -> Result<CountTable> {
    let inv = f.inverse()?;
    let (lut, ilut) = (f.lut(), inv.lut());
    let size = f.size();
    let mut t = CountTable::zeros(size);
    for a in 0..size {
        for b in 0..size {
            let b = b as Elem;
            let count = (0..size)
                .filter(|&x| {
                    ilut[(lut[x] ^ b) as usize] ^ ilut[(lut[x ^ a] ^ b) as usize] == a as Elem
                })
                .count();
            t.counts[a * size + b as usize] = count as u32;
        }
    }
    Ok(t)
}

/// Buckets the inputs of `D_gamma g` by output value.
///
/// Returns `(starts, members)`: the inputs with derivative value `v` are
/// `members[starts[v]..starts[v + 1]]`, in ascending order.
fn derivative_buckets(g: &[Elem], gamma: usize, starts: &mut [usize], members: &mut [Elem]) {
    let size = g.len();
    starts.fill(0);
    for x in 0..size {
        starts[(g[x ^ gamma] ^ g[x]) as usize + 1] += 1;
    }
    for v in 0..size {
        starts[v + 1] += starts[v];
    }
    let mut fill = starts[..size].to_vec();
    for x in 0..size {
        let v = (g[x ^ gamma] ^ g[x]) as usize;
        members[fill[v]] = x as Elem;
        fill[v] += 1;
    }
}

/// BCT as `sum_gamma #(U_{gamma,b} & (a + U_{gamma,b}))`.
///
/// For each `gamma` the inputs are bucketed by `D_gamma F(x) = b`, and every
/// ordered pair `(x, x')` in a bucket adds one to entry `(x + x', b)`. Total
/// work is `sum DDT(gamma, b)^2`. The `gamma = 0` term only touches column 0
/// and supplies its `2^n` entries; for nonzero `(a, b)` it contributes nothing.
pub fn bct_paircount(f: &SBox) -> CountTable {
    let lut = f.lut();
    let size = f.size();
    let mut t = CountTable::zeros(size);
    let mut starts = vec![0usize; size + 1];
    let mut members = vec![0 as Elem; size];
    for gamma in 0..size {
        derivative_buckets(lut, gamma, &mut starts, &mut members);
        for b in 0..size {
            let bucket = &members[starts[b]..starts[b + 1]];
            for &x in bucket {
                for &y in bucket {
                    t.bump(x ^ y, b as Elem, 1);
                }
            }
        }
    }
    t
}

/// BCT as `DDT(a, b) + sum_{gamma not in {0, b}} #(V_{gamma,a} & (b + V_{gamma,a}))`
/// with `V_{gamma,a} = {y : D_gamma F^-1(y) = a}`.
///
/// Entries with `a = 0` or `b = 0` are `2^n` by definition and filled directly.
pub fn bct_boura_canteaut(f: &SBox) -> Result<CountTable> {
    let inv = f.inverse()?;
    let ilut = inv.lut();
    let size = f.size();
    let mut t = ddt(f);
    let mut starts = vec![0usize; size + 1];
    let mut members = vec![0 as Elem; size];
    for gamma in 1..size {
        derivative_buckets(ilut, gamma, &mut starts, &mut members);
        for a in 1..size {
            let bucket = &members[starts[a]..starts[a + 1]];
            for &x in bucket {
                for &y in bucket {
                    let b = (x ^ y) as usize;
                    if b != 0 && b != gamma {
                        t.bump(a as Elem, b as Elem, 1);
                    }
                }
            }
        }
    }
    let full = size as u32;
    for i in 0..size {
        t.counts[i] = full;
        t.counts[i * size] = full;
    }
    Ok(t)
}

/// Max BCT entry over nonzero `(a, b)`; computed with [`bct_paircount`].
pub fn boomerang_uniformity(f: &SBox) -> Result<u32> {
    if !f.is_permutation() {
        return Err(Error::NotAPermutation);
    }
    Ok(bct_paircount(f).max_nonzero())
}

/// `U_{gamma,b} = {x : D_gamma F(x) = b}`, ascending.
pub fn u_set(f: &SBox, gamma: Elem, b: Elem) -> Vec<Elem> {
    f.field()
        .elements()
        .filter(|&x| f.apply(x ^ gamma) ^ f.apply(x) == b)
        .collect()
}

/// Three expressions of one BCT row or column sum over nonzero indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumTriple {
    /// Sum of the BCT entries.
    pub bct: u64,
    /// Sum over `c` of the zero counts of the second-order derivative.
    pub second_derivative_zeros: u64,
    /// Sum over `c` of squared DDT entries, minus `2^n`.
    pub squared_ddt: i64,
}

impl SumTriple {
    pub fn agrees(&self) -> bool {
        self.bct == self.second_derivative_zeros && self.squared_ddt == self.bct as i64
    }
}

/// Precomputed tables for evaluating row and column sum identities.
///
/// Holds the BCT (paircount), DDT, and the inverse function, so that each
/// row or column query only has to count second-derivative zeros.
pub struct SumIdentities<'a> {
    f: &'a SBox,
    inv: SBox,
    bct: CountTable,
    ddt: CountTable,
}

impl<'a> SumIdentities<'a> {
    pub fn new(f: &'a SBox) -> Result<Self> {
        let inv = f.inverse()?;
        Ok(SumIdentities {
            f,
            inv,
            bct: bct_paircount(f),
            ddt: ddt(f),
        })
    }

    pub fn with_bct(f: &'a SBox, bct: CountTable) -> Result<Self> {
        let inv = f.inverse()?;
        Ok(SumIdentities {
            f,
            inv,
            bct,
            ddt: ddt(f),
        })
    }

    /// Row `a`: BCT row sum, zeros of `D_a D_c F`, squared DDT row.
    pub fn row(&self, a: Elem) -> Result<SumTriple> {
        if a == 0 {
            return Err(Error::ZeroDifference);
        }
        let bct = self.bct.row(a)[1..].iter().map(|&v| v as u64).sum();
        let zeros = second_derivative_zero_sum(self.f.lut(), a);
        let sq: i64 = self.ddt.row(a)[1..].iter().map(|&v| (v as i64) * (v as i64)).sum();
        Ok(SumTriple {
            bct,
            second_derivative_zeros: zeros,
            squared_ddt: sq - self.f.size() as i64,
        })
    }

    /// Column `b`: BCT column sum, zeros of `D_b D_c F^-1`, squared DDT column.
    pub fn column(&self, b: Elem) -> Result<SumTriple> {
        if b == 0 {
            return Err(Error::ZeroDifference);
        }
        let bct = self.bct.column(b).skip(1).map(|v| v as u64).sum();
        let zeros = second_derivative_zero_sum(self.inv.lut(), b);
        let sq: i64 = self
            .ddt
            .column(b)
            .skip(1)
            .map(|v| (v as i64) * (v as i64))
            .sum();
        Ok(SumTriple {
            bct,
            second_derivative_zeros: zeros,
            squared_ddt: sq - self.f.size() as i64,
        })
    }
}

/// `sum_{c != 0} #{x : D_a D_c g(x) = 0}`.
fn second_derivative_zero_sum(g: &[Elem], a: Elem) -> u64 {
    let a = a as usize;
    let mut total = 0u64;
    for c in 1..g.len() {
        for x in 0..g.len() {
            if g[x ^ a] ^ g[x ^ c] ^ g[x ^ a ^ c] ^ g[x] == 0 {
                total += 1;
            }
        }
    }
    total
}

/// Row-sum triple for a single row; see [`SumIdentities`] for bulk use.
pub fn bct_row_sum_identity(f: &SBox, a: Elem) -> Result<SumTriple> {
    if a == 0 {
        return Err(Error::ZeroDifference);
    }
    SumIdentities::new(f)?.row(a)
}

/// Column-sum triple for a single column.
pub fn bct_column_sum_identity(f: &SBox, b: Elem) -> Result<SumTriple> {
    if b == 0 {
        return Err(Error::ZeroDifference);
    }
    SumIdentities::new(f)?.column(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::sbox::{random_permutation, SBox};

    fn gf(n: u32) -> Field {
        Field::with_default_poly(n).unwrap()
    }

    /// Direct `(x, y)` pair count, independent of the bucket code path.
    fn bct_pairs_bruteforce(f: &SBox, a: Elem, b: Elem) -> u32 {
        let fl = f.field();
        let mut n = 0;
        for x in fl.elements() {
            for y in fl.elements() {
                if f.apply(x) ^ f.apply(y) == b && f.apply(x ^ a) ^ f.apply(y ^ a) == b {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn ddt_identity_and_cube() {
        let field = gf(3);
        let t = ddt(&SBox::identity(field));
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(t.get(a, b), if a == b { 8 } else { 0 });
            }
        }
        let cube = SBox::power(field, 3);
        assert_eq!(differential_uniformity(&cube), 2);
        assert_eq!(differential_uniformity(&SBox::identity(field)), 8);
        for row in ddt(&cube).rows() {
            assert_eq!(row.iter().sum::<u32>(), 8);
            assert!(row.iter().all(|v| v % 2 == 0));
        }
    }

    #[test]
    fn x5_over_gf64() {
        let f = SBox::power(gf(6), 5);
        assert_eq!(differential_uniformity(&f), 4);
        assert_eq!(boomerang_uniformity(&f).unwrap(), 4);
        let pc = bct_paircount(&f);
        assert_eq!(bct_boura_canteaut(&f).unwrap(), pc);
        assert_eq!(bct_definition(&f).unwrap(), pc);
    }

    #[test]
    fn identity_bct_is_full() {
        let field = gf(4);
        let id = SBox::identity(field);
        for t in [
            bct_definition(&id).unwrap(),
            bct_paircount(&id),
            bct_boura_canteaut(&id).unwrap(),
        ] {
            assert!(t.rows().all(|r| r.iter().all(|&v| v == 16)));
        }
        assert_eq!(boomerang_uniformity(&id).unwrap(), 16);
    }

    #[test]
    fn apn_cube_gf32() {
        let f = SBox::power(gf(5), 3);
        let t = bct_definition(&f).unwrap();
        assert_eq!(t.max_nonzero(), 2);
        assert!(t.row(0).iter().all(|&v| v == 32));
        assert!(t.column(0).all(|v| v == 32));
    }

    #[test]
    fn paircount_matches_pair_bruteforce() {
        let field = gf(4);
        for seed in 0..4 {
            let f = random_permutation(field, seed);
            let t = bct_paircount(&f);
            for a in 1..16 {
                for b in 1..16 {
                    assert_eq!(t.get(a, b), bct_pairs_bruteforce(&f, a, b));
                }
            }
        }
        // non-bijective input: still the (x, y) pair count
        let sq = SBox::from_fn(field, |x| field.mul(x, field.mul(x, x)) ^ field.mul(3, x));
        let t = bct_paircount(&sq);
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(t.get(a, b), bct_pairs_bruteforce(&sq, a, b));
            }
        }
    }

    #[test]
    fn all_permutations_n2_and_n3_agree() {
        for n in [2u32, 3] {
            let field = gf(n);
            let mut lut: Vec<Elem> = field.elements().collect();
            let mut checked = 0;
            permute(&mut lut, 0, &mut |l| {
                let f = SBox::from_lut(field, l.to_vec()).unwrap();
                let def = bct_definition(&f).unwrap();
                assert_eq!(bct_paircount(&f), def);
                assert_eq!(bct_boura_canteaut(&f).unwrap(), def);
                checked += 1;
            });
            assert_eq!(checked, (1..=field.order()).product::<usize>());
        }
    }

    fn permute(v: &mut [Elem], k: usize, visit: &mut impl FnMut(&[Elem])) {
        if k == v.len() {
            visit(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, visit);
            v.swap(k, i);
        }
    }

    #[test]
    fn u_sets() {
        let field = gf(4);
        let f = random_permutation(field, 7);
        let d = ddt(&f);
        for b in 1..16 {
            assert!(u_set(&f, 0, b).is_empty());
        }
        for g in 1..16 {
            for b in 0..16 {
                let u = u_set(&f, g, b);
                assert_eq!(u.len() as u32, d.get(g, b));
                assert!(u.iter().all(|x| u.contains(&(x ^ g))));
            }
            assert_eq!(u_set(&SBox::identity(field), g, g).len(), 16);
        }
    }

    #[test]
    fn sum_identities() {
        let field = gf(4);
        let id = SBox::identity(field);
        let expected = 16 * 15;
        for a in 1..16 {
            let r = bct_row_sum_identity(&id, a).unwrap();
            assert_eq!(r.bct, expected);
            assert!(r.agrees());
            assert!(bct_column_sum_identity(&id, a).unwrap().agrees());
        }
        assert_eq!(bct_row_sum_identity(&id, 0), Err(Error::ZeroDifference));
        assert_eq!(bct_column_sum_identity(&id, 0), Err(Error::ZeroDifference));

        let f = random_permutation(field, 11);
        let sums = SumIdentities::new(&f).unwrap();
        let inv = f.inverse().unwrap();
        let isums = SumIdentities::new(&inv).unwrap();
        for a in 1..16 {
            assert!(sums.row(a).unwrap().agrees());
            assert!(sums.column(a).unwrap().agrees());
            assert_eq!(sums.column(a).unwrap(), isums.row(a).unwrap());
        }
    }

    #[test]
    fn duality_and_bound() {
        let field = gf(5);
        for seed in 0..5 {
            let f = random_permutation(field, seed);
            let inv = f.inverse().unwrap();
            assert_eq!(bct_paircount(&inv), bct_paircount(&f).transpose());
            assert_eq!(ddt(&inv), ddt(&f).transpose());
            let (b, d) = (bct_paircount(&f), ddt(&f));
            for a in 0..32 {
                for c in 0..32 {
                    assert!(b.get(a, c) >= d.get(a, c));
                }
            }
        }
        assert_eq!(
            boomerang_uniformity(&SBox::constant(field, 0)),
            Err(Error::NotAPermutation)
        );
    }
}
