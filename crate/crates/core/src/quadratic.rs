//! Quadratic forms `F(x) = sum_{i <= j} c_ij x^(q^i + q^j)` over GF(q^m) and
//! the concrete differentially 4-uniform families built from them.
//!
//! For such an `F` and `gamma != 0`, `H_gamma(x) = F(x + gamma) + F(x) + F(gamma)`
//! is additive in `x`, its kernel contains the line `gamma * F_q`, and so
//! `Delta(F) >= q`. When `F` is a permutation with `Delta(F) = q`, every BCT
//! entry collapses to `BCT(a, b) = sum_{g in F_q^*} DDT(a g, b)` with at most
//! one nonzero term, giving boomerang uniformity `q`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{gcd_u32, Elem, Field, Subfield};
use crate::sbox::{SBox, UnivariatePoly};
use crate::tables::{bct_paircount, ddt, CountTable};

/// Coefficients `c_ij`, `0 <= i <= j < m`, of a quadratic form over F_{q^m}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QForm {
    field: Field,
    sub: Subfield,
    coeffs: BTreeMap<(u32, u32), Elem>,
}

impl QForm {
    pub fn new(
        field: Field,
        sub: Subfield,
        coeffs: impl IntoIterator<Item = ((u32, u32), Elem)>,
    ) -> Result<Self> {
        if sub.k() * sub.m() != field.degree() {
            return Err(Error::NotADivisor {
                r: sub.k(),
                n: field.degree(),
            });
        }
        let mut map = BTreeMap::new();
        for ((i, j), c) in coeffs {
            if i > j || j >= sub.m() {
                return Err(Error::Precondition("0 <= i <= j <= m - 1"));
            }
            field.check(c)?;
            *map.entry((i, j)).or_insert(0) ^= c;
        }
        map.retain(|_, c| *c != 0);
        Ok(QForm {
            field,
            sub,
            coeffs: map,
        })
    }

    /// Recovers the coefficients of `f` viewed as a quadratic form over F_q.
    ///
    /// Fails with [`Error::MalformedExponent`] if the interpolating polynomial
    /// has a monomial that is not of the form `x^(q^i + q^j)`.
    pub fn from_sbox(f: &SBox, sub: Subfield) -> Result<Self> {
        let field = f.field();
        let index = exponent_index(field, sub);
        let poly = UnivariatePoly::interpolate(f);
        let mut coeffs = Vec::new();
        for &(c, e) in poly.terms() {
            let ij = index
                .get(&e)
                .copied()
                .ok_or(Error::MalformedExponent(e))?;
            coeffs.push((ij, c));
        }
        QForm::new(field, sub, coeffs)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn subfield(&self) -> Subfield {
        self.sub
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), Elem> {
        &self.coeffs
    }

    pub fn to_poly(&self) -> UnivariatePoly {
        let q = self.sub.q();
        UnivariatePoly::new(
            self.field,
            self.coeffs
                .iter()
                .map(|(&(i, j), &c)| (c, q.pow(i) + q.pow(j))),
        )
        .expect("coefficients checked on construction")
    }

    pub fn to_sbox(&self) -> SBox {
        self.to_poly().evaluate()
    }

    pub fn h_gamma(&self, gamma: Elem) -> Result<SBox> {
        h_gamma(&self.to_sbox(), gamma)
    }

    pub fn kernel(&self, gamma: Elem) -> Result<Vec<Elem>> {
        kernel_k(&self.to_sbox(), gamma)
    }

    pub fn image(&self, a: Elem) -> Result<Vec<Elem>> {
        image_h(&self.to_sbox(), a)
    }

    pub fn check_theorem(&self) -> QFormReport {
        check_qform_theorem(&self.to_sbox(), self.sub)
    }
}

/// Map from normalized exponent `q^i + q^j` to `(i, j)`.
fn exponent_index(field: Field, sub: Subfield) -> BTreeMap<u64, (u32, u32)> {
    let q = sub.q();
    let mut index = BTreeMap::new();
    for i in 0..sub.m() {
        for j in i..sub.m() {
            index.insert(field.normalize_exponent(q.pow(i) + q.pow(j)), (i, j));
        }
    }
    index
}

/// `H_gamma(x) = F(x + gamma) + F(x) + F(gamma)`.
pub fn h_gamma(f: &SBox, gamma: Elem) -> Result<SBox> {
    if gamma == 0 {
        return Err(Error::ZeroDifference);
    }
    f.field().check(gamma)?;
    let fg = f.apply(gamma);
    Ok(SBox::from_fn(f.field(), |x| {
        f.apply(x ^ gamma) ^ f.apply(x) ^ fg
    }))
}

/// `K_F(gamma) = {x : H_gamma(x) = 0}`, ascending.
pub fn kernel_k(f: &SBox, gamma: Elem) -> Result<Vec<Elem>> {
    let h = h_gamma(f, gamma)?;
    Ok(f.field().elements().filter(|&x| h.apply(x) == 0).collect())
}

/// `Im H_a`, ascending and deduplicated.
pub fn image_h(f: &SBox, a: Elem) -> Result<Vec<Elem>> {
    let h = h_gamma(f, a)?;
    let mut hit = alloc::vec![false; f.size()];
    for &v in h.lut() {
        hit[v as usize] = true;
    }
    Ok(f.field().elements().filter(|&v| hit[v as usize]).collect())
}

/// Outcome of one checked statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    Holds,
    Fails,
    /// The hypotheses of the statement do not apply.
    Skipped,
}

impl Clause {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Clause::Holds
        } else {
            Clause::Fails
        }
    }

    pub fn is_failure(self) -> bool {
        self == Clause::Fails
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Holds => "holds",
            Clause::Fails => "FAILS",
            Clause::Skipped => "skipped",
        })
    }
}

/// Result of checking the quadratic-form boomerang statements on one function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFormReport {
    pub q: u64,
    pub delta: u32,
    pub is_permutation: bool,
    /// `None` unless the function is a permutation.
    pub beta: Option<u32>,
    /// `Delta(F) >= q`; skipped for constant functions.
    pub delta_at_least_q: Clause,
    /// `gamma * F_q` lies in `K_F(gamma)` for every `gamma != 0`.
    pub kernel_contains_line: Clause,
    /// Permutations only: `F(a)` is never in `Im H_a`.
    pub value_outside_image: Clause,
    /// Permutations with `Delta = q`: every nonzero DDT entry equals `q`.
    pub ddt_values_zero_or_q: Clause,
    /// Permutations with `Delta = q`: `BCT(a, b) = sum_{g in F_q^*} DDT(a g, b)`.
    pub bct_ddt_identity: Clause,
    /// Permutations with `Delta = q`: `beta(F) = q`.
    pub beta_equals_q: Clause,
    /// Permutations: for each nonzero `(a, b)` at most one `g in F_q^*` has
    /// `DDT(a g, b) != 0`.
    pub at_most_one_gamma: Clause,
    /// Nonzero `(a, b)` where the BCT/DDT identity failed.
    pub identity_mismatches: u64,
}

impl QFormReport {
    pub fn clauses(&self) -> [(&'static str, Clause); 7] {
        [
            ("delta >= q", self.delta_at_least_q),
            ("gamma*F_q in K(gamma)", self.kernel_contains_line),
            ("F(a) not in Im H_a", self.value_outside_image),
            ("DDT in {0,q}", self.ddt_values_zero_or_q),
            ("BCT(a,b) = sum DDT(a*g,b)", self.bct_ddt_identity),
            ("beta = q", self.beta_equals_q),
            ("at most one g", self.at_most_one_gamma),
        ]
    }

    pub fn passed(&self) -> bool {
        self.clauses().iter().all(|(_, c)| !c.is_failure())
    }
}

impl fmt::Display for QFormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={} delta={} permutation={}", self.q, self.delta, self.is_permutation)?;
        if let Some(beta) = self.beta {
            writeln!(f, "beta={beta}")?;
        }
        for (name, clause) in self.clauses() {
            writeln!(f, "{name}: {clause}")?;
        }
        if self.identity_mismatches > 0 {
            writeln!(f, "identity mismatches: {}", self.identity_mismatches)?;
        }
        Ok(())
    }
}

/// Checks the quadratic-form statements on `f`, claimed quadratic over `sub`.
///
/// Nothing here verifies that `f` really is such a form; use
/// [`QForm::from_sbox`] for that.
pub fn check_qform_theorem(f: &SBox, sub: Subfield) -> QFormReport {
    let field = f.field();
    let q = sub.q();
    let d = ddt(f);
    let delta = d.max_nonzero();
    let line: Vec<Elem> = field.subfield_elements(sub);
    let units = &line[1..];

    let kernel_ok = (1..=field.mask()).all(|g| {
        let h = h_gamma(f, g).expect("gamma != 0");
        line.iter().all(|&c| h.apply(field.mul(g, c)) == 0)
    });

    // a constant function has no nonzero output difference, so Delta = 0
    let constant = f.lut().iter().all(|&v| v == f.apply(0));
    let is_permutation = f.is_permutation();
    let mut report = QFormReport {
        q,
        delta,
        is_permutation,
        beta: None,
        delta_at_least_q: if constant {
            Clause::Skipped
        } else {
            Clause::from_bool(delta as u64 >= q)
        },
        kernel_contains_line: Clause::from_bool(kernel_ok),
        value_outside_image: Clause::Skipped,
        ddt_values_zero_or_q: Clause::Skipped,
        bct_ddt_identity: Clause::Skipped,
        beta_equals_q: Clause::Skipped,
        at_most_one_gamma: Clause::Skipped,
        identity_mismatches: 0,
    };
    if !is_permutation {
        return report;
    }

    report.value_outside_image = Clause::from_bool((1..=field.mask()).all(|a| {
        let image = image_h(f, a).expect("a != 0");
        image.binary_search(&f.apply(a)).is_err()
    }));
    report.at_most_one_gamma = Clause::from_bool(at_most_one_gamma(&d, field, units));

    let bct = bct_paircount(f);
    let beta = bct.max_nonzero();
    report.beta = Some(beta);
    if delta as u64 != q {
        return report;
    }

    report.ddt_values_zero_or_q = Clause::from_bool(
        d.rows()
            .skip(1)
            .all(|r| r[1..].iter().all(|&v| v == 0 || v as u64 == q)),
    );
    let mut mismatches = 0;
    for a in 1..=field.mask() {
        for b in 1..=field.mask() {
            let sum: u32 = units.iter().map(|&g| d.get(field.mul(a, g), b)).sum();
            if sum != bct.get(a, b) {
                mismatches += 1;
            }
        }
    }
    report.identity_mismatches = mismatches;
    report.bct_ddt_identity = Clause::from_bool(mismatches == 0);
    report.beta_equals_q = Clause::from_bool(beta as u64 == q);
    report
}

fn at_most_one_gamma(d: &CountTable, field: Field, units: &[Elem]) -> bool {
    (1..=field.mask()).all(|a| {
        (1..=field.mask()).all(|b| {
            units
                .iter()
                .filter(|&&g| d.get(field.mul(a, g), b) != 0)
                .count()
                <= 1
        })
    })
}

/// Splits a sum of monomials `x^(q^i + q^j)` into the `i < j` part `f` and the
/// `i = j` part `phi` (which is F_2-linear).
pub fn decompose_f_phi(poly: &UnivariatePoly, sub: Subfield) -> Result<(SBox, SBox)> {
    let field = poly.field();
    if sub.k() * sub.m() != field.degree() {
        return Err(Error::NotADivisor {
            r: sub.k(),
            n: field.degree(),
        });
    }
    let index = exponent_index(field, sub);
    let mut cross = Vec::new();
    let mut diag = Vec::new();
    for &(c, e) in poly.terms() {
        match index.get(&e) {
            Some(&(i, j)) if i < j => cross.push((c, e)),
            Some(_) => diag.push((c, e)),
            None => return Err(Error::MalformedExponent(e)),
        }
    }
    let f = UnivariatePoly::new(field, cross)?.evaluate();
    let phi = UnivariatePoly::new(field, diag)?.evaluate();
    Ok((f, phi))
}

fn require(ok: bool, clause: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(clause))
    }
}

/// Gold function `x^(2^t + 1)` with `n = 2 mod 4`, `t` even, `gcd(t, n) = 2`.
pub fn construct_gold(field: Field, t: u32) -> Result<SBox> {
    let n = field.degree();
    require(n % 4 == 2, "n = 2 (mod 4)")?;
    require(t.is_multiple_of(2), "t is even")?;
    require(gcd_u32(t, n) == 2, "gcd(t, n) = 2")?;
    Ok(SBox::power(field, field.pow2_exponent(t as i64) + 1))
}

/// All `lambda != 0` with `lambda^(2^m - 1)` of multiplicative order exactly 3,
/// where `n = 2m`, `m` odd.
pub fn find_li_lambdas(field: Field) -> Result<Vec<Elem>> {
    let m = li_half_degree(field)?;
    let e = (1u64 << m) - 1;
    Ok((1..=field.mask())
        .filter(|&l| {
            let v = field.pow(l, e);
            v != 1 && field.pow(v, 3) == 1
        })
        .collect())
}

fn li_half_degree(field: Field) -> Result<u32> {
    let n = field.degree();
    require(n.is_multiple_of(2), "n = 2m")?;
    let m = n / 2;
    require(m % 2 == 1, "m is odd")?;
    Ok(m)
}

/// `x^(2^m + 2) + lambda x` over GF(2^(2m)), `m` odd.
pub fn construct_li(field: Field, lambda: Elem) -> Result<SBox> {
    let m = li_half_degree(field)?;
    field.check(lambda)?;
    let v = field.pow(lambda, (1u64 << m) - 1);
    require(
        lambda != 0 && v != 1 && field.pow(v, 3) == 1,
        "lambda^(2^m - 1) has multiplicative order 3",
    )?;
    UnivariatePoly::new(field, [(1, (1u64 << m) + 2), (lambda, 1)]).map(|p| p.evaluate())
}

/// Binomial `beta x^(2^s + 1) + beta^(2^k) x^(2^-k + 2^(k+s))` over GF(2^(3k)).
///
/// `beta` defaults to [`Field::find_primitive`]. When `n = 6` both exponents
/// reduce to 17 and the result is a single monomial.
pub fn construct_btt(field: Field, k: u32, s: u32, beta: Option<Elem>) -> Result<SBox> {
    let n = field.degree();
    require(n == 3 * k, "n = 3k")?;
    require(k % 4 == 2, "k = 2 (mod 4)")?;
    require(!k.is_multiple_of(3), "3 does not divide k")?;
    require(gcd_u32(n, s) == 2, "gcd(n, s) = 2")?;
    require((k + s).is_multiple_of(3), "3 divides k + s")?;
    let beta = match beta {
        Some(b) => field.check(b)?,
        None => field.find_primitive(),
    };
    require(
        beta != 0 && field.multiplicative_order(beta)? == field.group_order(),
        "beta is primitive",
    )?;
    let e1 = field.pow2_exponent(s as i64) + 1;
    let e2 = field.pow2_exponent(-(k as i64)) + field.pow2_exponent((k + s) as i64);
    let c2 = field.pow(beta, field.pow2_exponent(k as i64));
    UnivariatePoly::new(field, [(beta, e1), (c2, e2)]).map(|p| p.evaluate())
}

/// Exponent `2^(s+1) + 2` of the leading monomial in the `(A, B, C)` family.
pub fn abc_exponent(field: Field, s: u32) -> u64 {
    field.pow2_exponent(s as i64 + 1) + 2
}

/// Checks `n = 2 (mod 4)` and `gcd(n, s) = 2`.
pub fn check_abc_params(field: Field, s: u32) -> Result<()> {
    let n = field.degree();
    require(n % 4 == 2, "n = 2 (mod 4)")?;
    require(gcd_u32(n, s) == 2, "gcd(n, s) = 2")
}

/// `x^(2^(s+1) + 2) + A x + B x^4 + C x^16`; not necessarily a permutation.
pub fn construct_abc(field: Field, s: u32, a: Elem, b: Elem, c: Elem) -> Result<SBox> {
    check_abc_params(field, s)?;
    UnivariatePoly::new(field, [(1, abc_exponent(field, s)), (a, 1), (b, 4), (c, 16)])
        .map(|p| p.evaluate())
}
