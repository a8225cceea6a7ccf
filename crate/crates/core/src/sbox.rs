//! (n,n)-functions stored as lookup tables.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// A function GF(2^n) -> GF(2^n) given by its full lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SBox {
    field: Field,
    lut: Vec<Elem>,
}

impl SBox {
    pub fn from_lut(field: Field, lut: Vec<Elem>) -> Result<Self> {
        if lut.len() != field.order() {
            return Err(Error::LutLength {
                expected: field.order(),
                found: lut.len(),
            });
        }
        for &v in &lut {
            field.check(v)?;
        }
        Ok(SBox { field, lut })
    }

    /// Tabulates `f` over every element. Outputs must lie in the field.
    pub fn from_fn(field: Field, mut f: impl FnMut(Elem) -> Elem) -> Self {
        let lut = field.elements().map(&mut f).collect::<Vec<_>>();
        debug_assert!(lut.iter().all(|&v| field.contains(v)));
        SBox { field, lut }
    }

    pub fn identity(field: Field) -> Self {
        SBox::from_fn(field, |x| x)
    }

    pub fn constant(field: Field, c: Elem) -> Self {
        SBox::from_fn(field, |_| c)
    }

    /// The power map `x -> x^e`.
    pub fn power(field: Field, e: u64) -> Self {
        SBox::from_fn(field, |x| field.pow(x, e))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lut(&self) -> &[Elem] {
        &self.lut
    }

    pub fn into_lut(self) -> Vec<Elem> {
        self.lut
    }

    /// Number of inputs, `2^n`.
    pub fn size(&self) -> usize {
        self.lut.len()
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.lut[x as usize]
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![0u64; self.size().div_ceil(64)];
        for &v in &self.lut {
            let (w, b) = (v as usize / 64, v % 64);
            if seen[w] >> b & 1 == 1 {
                return false;
            }
            seen[w] |= 1 << b;
        }
        true
    }

    /// Compositional inverse.
    pub fn inverse(&self) -> Result<SBox> {
        if !self.is_permutation() {
            return Err(Error::NotAPermutation);
        }
        let mut inv = vec![0; self.size()];
        for (x, &y) in self.lut.iter().enumerate() {
            inv[y as usize] = x as Elem;
        }
        Ok(SBox {
            field: self.field,
            lut: inv,
        })
    }

    /// `D_a F(x) = F(x + a) + F(x)`.
    pub fn derivative(&self, a: Elem) -> SBox {
        SBox::from_fn(self.field, |x| self.apply(x ^ a) ^ self.apply(x))
    }

    /// `D_a D_b F(x) = F(x + a) + F(x + b) + F(x + a + b) + F(x)`.
    pub fn second_derivative(&self, a: Elem, b: Elem) -> SBox {
        SBox::from_fn(self.field, |x| {
            self.apply(x ^ a) ^ self.apply(x ^ b) ^ self.apply(x ^ a ^ b) ^ self.apply(x)
        })
    }

    /// `self o inner`, i.e. `x -> self(inner(x))`.
    pub fn compose(&self, inner: &SBox) -> Result<SBox> {
        if self.field != inner.field {
            return Err(Error::FieldMismatch);
        }
        Ok(SBox::from_fn(self.field, |x| self.apply(inner.apply(x))))
    }

    /// Pointwise sum `x -> self(x) + other(x)`.
    pub fn add(&self, other: &SBox) -> Result<SBox> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(SBox::from_fn(self.field, |x| self.apply(x) ^ other.apply(x)))
    }

    /// Coefficients of the algebraic normal form, packed: entry `u` holds, in
    /// bit `j`, the coefficient of the monomial `prod_{i in u} x_i` in output
    /// coordinate `j`.
    ///
    /// The binary Moebius transform is XOR-linear, so running it once on the
    /// whole table handles all `n` coordinate functions together.
    pub fn anf(&self) -> Vec<Elem> {
        let mut t = self.lut.clone();
        let size = t.len();
        let mut step = 1;
        while step < size {
            for block in (0..size).step_by(2 * step) {
                for i in block..block + step {
                    t[i + step] ^= t[i];
                }
            }
            step *= 2;
        }
        t
    }

    /// Maximum ANF monomial degree over all coordinates (0 for constants).
    pub fn algebraic_degree(&self) -> u32 {
        self.anf()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(u, _)| u.count_ones())
            .max()
            .unwrap_or(0)
    }
}

/// A random affine permutation `x -> Mx + c`, `M` a nonsingular bit matrix.
///
/// `M` is drawn by rejection sampling; the output depends only on `seed`.
pub fn random_affine_permutation(field: Field, seed: u64) -> SBox {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = field.degree() as usize;
    let mask = field.mask();
    let columns = loop {
        let cols: Vec<Elem> = (0..n).map(|_| rng.random::<u32>() & mask).collect();
        if bit_rank(&cols) == n {
            break cols;
        }
    };
    let c = rng.random::<u32>() & mask;
    SBox::from_fn(field, |x| {
        columns
            .iter()
            .enumerate()
            .filter(|(i, _)| x >> i & 1 == 1)
            .fold(c, |acc, (_, &col)| acc ^ col)
    })
}

/// A uniformly random permutation of GF(2^n), deterministic per seed.
pub fn random_permutation(field: Field, seed: u64) -> SBox {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lut: Vec<Elem> = field.elements().collect();
    for i in (1..lut.len()).rev() {
        let j = rng.random_range(0..=i);
        lut.swap(i, j);
    }
    SBox { field, lut }
}

/// Rank over GF(2) of a set of bit vectors.
fn bit_rank(vectors: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vectors {
        let reduced = basis.iter().fold(v, |acc, &b| acc.min(acc ^ b));
        if reduced != 0 {
            basis.push(reduced);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// A univariate polynomial `sum delta_i x^i` over GF(2^n), as sparse terms.
///
/// Exponents are normalized on construction: terms whose exponents agree
/// modulo `2^n - 1` are merged, while `x^0` and `x^(2^n - 1)` stay distinct
/// because they differ at zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePoly {
    field: Field,
    /// (coefficient, exponent), sorted by exponent, coefficients nonzero.
    terms: Vec<(Elem, u64)>,
}

impl UnivariatePoly {
    pub fn new(field: Field, terms: impl IntoIterator<Item = (Elem, u64)>) -> Result<Self> {
        let mut acc: Vec<(Elem, u64)> = Vec::new();
        for (c, e) in terms {
            field.check(c)?;
            let e = field.normalize_exponent(e);
            match acc.iter_mut().find(|(_, x)| *x == e) {
                Some(t) => t.0 ^= c,
                None => acc.push((c, e)),
            }
        }
        acc.retain(|&(c, _)| c != 0);
        acc.sort_unstable_by_key(|&(_, e)| e);
        Ok(UnivariatePoly { field, terms: acc })
    }

    pub fn monomial(field: Field, c: Elem, e: u64) -> Result<Self> {
        UnivariatePoly::new(field, [(c, e)])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &[(Elem, u64)] {
        &self.terms
    }

    pub fn eval(&self, x: Elem) -> Elem {
        self.terms
            .iter()
            .fold(0, |acc, &(c, e)| acc ^ self.field.mul(c, self.field.pow(x, e)))
    }

    pub fn evaluate(&self) -> SBox {
        SBox::from_fn(self.field, |x| self.eval(x))
    }

    /// Maximum 2-weight over the exponents present.
    pub fn max_two_weight(&self) -> u32 {
        self.terms
            .iter()
            .map(|&(_, e)| e.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// The unique polynomial of degree at most `2^n - 1` agreeing with `f`.
    ///
    /// Uses `sum_{x != 0} x^k = 1` if `(2^n - 1) | k` and 0 otherwise, which
    /// gives `delta_0 = F(0)`, `delta_i = sum_{x != 0} F(x) x^(-i)` for
    /// `0 < i < 2^n - 1`, and `delta_{2^n - 1} = sum_x F(x)`.
    pub fn interpolate(f: &SBox) -> UnivariatePoly {
        let field = f.field;
        let last = field.group_order();
        let mut terms = Vec::new();
        terms.push((f.apply(0), 0));
        if last > 1 {
            // x^(-i) = x^(last - i); walk x^(-1) powers incrementally per x
            let inverses: Vec<Elem> = (1..=field.mask())
                .map(|x| field.inv(x).expect("nonzero"))
                .collect();
            let mut powers: Vec<Elem> = inverses.clone();
            for i in 1..last {
                let mut d = 0;
                for (idx, &p) in powers.iter().enumerate() {
                    d ^= field.mul(f.lut[idx + 1], p);
                }
                terms.push((d, i));
                for (p, &inv) in powers.iter_mut().zip(&inverses) {
                    *p = field.mul(*p, inv);
                }
            }
        }
        let total = f.lut.iter().fold(0, |acc, &v| acc ^ v);
        terms.push((total, last));
        UnivariatePoly::new(field, terms).expect("coefficients are field elements")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: u32) -> Field {
        Field::with_default_poly(n).unwrap()
    }

    /// Independent interpolation oracle: Lagrange basis
    /// `L_a(x) = 1 + (x + a)^(2^n - 1)` summed with weights F(a).
    fn lagrange_eval(f: &SBox, x: Elem) -> Elem {
        let field = f.field();
        field
            .elements()
            .map(|a| {
                let basis = 1 ^ field.pow(x ^ a, field.group_order());
                field.mul(f.apply(a), basis)
            })
            .fold(0, |acc, v| acc ^ v)
    }

    #[test]
    fn evaluate_basics() {
        let f = gf(3);
        assert_eq!(
            UnivariatePoly::monomial(f, 1, 1).unwrap().evaluate(),
            SBox::identity(f)
        );
        assert_eq!(
            UnivariatePoly::monomial(f, 5, 0).unwrap().evaluate(),
            SBox::constant(f, 5)
        );
        assert_eq!(
            UnivariatePoly::monomial(f, 1, 3).unwrap().evaluate().apply(0b010),
            0b011
        );
    }

    #[test]
    fn poly_normalization() {
        let f = gf(3);
        let p = UnivariatePoly::new(f, [(1, 3), (1, 10), (2, 7), (3, 0)]).unwrap();
        assert_eq!(p.terms(), &[(3, 0), (2, 7)]);
        assert!(UnivariatePoly::new(f, [(8, 1)]).is_err());
    }

    #[test]
    fn permutation_and_inverse() {
        let f = gf(3);
        assert!(SBox::identity(f).is_permutation());
        assert!(!SBox::constant(f, 0).is_permutation());
        let cube = SBox::power(f, 3);
        assert!(cube.is_permutation());
        assert_eq!(cube.inverse().unwrap(), SBox::power(f, 5));
        assert_eq!(cube.inverse().unwrap().inverse().unwrap(), cube);
        assert_eq!(SBox::identity(f).inverse().unwrap(), SBox::identity(f));
        assert_eq!(SBox::constant(f, 1).inverse(), Err(Error::NotAPermutation));
    }

    #[test]
    fn derivatives() {
        let f = gf(3);
        let cube = SBox::power(f, 3);
        assert_eq!(cube.derivative(0), SBox::constant(f, 0));
        for a in f.elements() {
            assert_eq!(SBox::identity(f).derivative(a), SBox::constant(f, a));
            let d = cube.derivative(a);
            for x in f.elements() {
                assert_eq!(d.apply(x), d.apply(x ^ a));
            }
            assert_eq!(cube.second_derivative(a, a), SBox::constant(f, 0));
            for b in f.elements() {
                let dd = cube.second_derivative(a, b);
                assert!(dd.lut().iter().all(|&v| v == dd.apply(0)));
                assert_eq!(dd, cube.derivative(b).derivative(a));
                assert_eq!(dd, cube.second_derivative(b, a));
            }
        }
        let aff = random_affine_permutation(gf(5), 3);
        for a in 0..32 {
            for b in 0..32 {
                assert_eq!(aff.second_derivative(a, b), SBox::constant(gf(5), 0));
            }
        }
    }

    #[test]
    fn degrees() {
        let f6 = gf(6);
        assert_eq!(SBox::identity(f6).algebraic_degree(), 1);
        assert_eq!(SBox::power(gf(3), 3).algebraic_degree(), 2);
        assert_eq!(SBox::constant(f6, 7).algebraic_degree(), 0);
        assert_eq!(SBox::power(f6, 7).algebraic_degree(), 3);
        assert_eq!(SBox::power(f6, 62).algebraic_degree(), 5);
    }

    #[test]
    fn interpolation_round_trip_exhaustive_small() {
        // every function GF(2)->GF(2) and GF(4)->GF(4), then random ones up to n = 4
        for n in 1..=2u32 {
            let field = gf(n);
            let size = field.order() as u32;
            for code in 0..size.pow(size) {
                let lut: Vec<Elem> = (0..size).map(|i| code / size.pow(i) % size).collect();
                let s = SBox::from_lut(field, lut).unwrap();
                assert_eq!(UnivariatePoly::interpolate(&s).evaluate(), s);
            }
        }
        for n in 3..=4 {
            let field = gf(n);
            for seed in 0..50 {
                let s = random_permutation(field, seed).compose(&random_permutation(field, seed + 99)).unwrap();
                let p = UnivariatePoly::interpolate(&s);
                assert_eq!(p.evaluate(), s);
                for x in field.elements() {
                    assert_eq!(lagrange_eval(&s, x), s.apply(x));
                }
                assert_eq!(p.max_two_weight(), s.algebraic_degree());
            }
        }
    }

    #[test]
    fn degree_matches_two_weight() {
        let field = gf(5);
        for seed in 0..20 {
            let s = random_permutation(field, seed);
            assert_eq!(
                UnivariatePoly::interpolate(&s).max_two_weight(),
                s.algebraic_degree()
            );
        }
    }

    #[test]
    fn affine_permutations() {
        for n in [1, 3, 6, 8] {
            let field = gf(n);
            for seed in 0..10 {
                let a = random_affine_permutation(field, seed);
                assert!(a.is_permutation());
                assert!(a.algebraic_degree() <= 1);
                assert_eq!(a, random_affine_permutation(field, seed));
            }
        }
    }

    #[test]
    fn composition() {
        let field = gf(4);
        let f = random_permutation(field, 1);
        let g = random_permutation(field, 2);
        let h = random_permutation(field, 3);
        assert_eq!(f.compose(&SBox::identity(field)).unwrap(), f);
        assert_eq!(f.compose(&f.inverse().unwrap()).unwrap(), SBox::identity(field));
        assert_eq!(
            f.compose(&g).unwrap().compose(&h).unwrap(),
            f.compose(&g.compose(&h).unwrap()).unwrap()
        );
        assert_eq!(f.compose(&SBox::identity(gf(3))), Err(Error::FieldMismatch));
    }

    #[test]
    fn from_lut_validation() {
        let field = gf(3);
        assert_eq!(
            SBox::from_lut(field, vec![0; 7]),
            Err(Error::LutLength { expected: 8, found: 7 })
        );
        assert!(SBox::from_lut(field, vec![8; 8]).is_err());
    }
}
