//! Sparse multivariate Laurent polynomials over arbitrary-precision integers.
//!
//! A [`LaurentPoly`] is a finite map from exponent vectors (negative entries
//! allowed) to nonzero `BigInt` coefficients, indexed by a shared
//! [`VarTable`]. The map is kept in a `BTreeMap` keyed by the exponent
//! vector, so terms are always ordered lexicographically in table order;
//! that ordering is also the canonical serialization order.
//!
//! Values are immutable after construction and all operations are pure:
//! everything here is safe to share across threads.

mod div;
mod gcd;
mod json;
mod subst;

pub use gcd::coprime;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a term; entry `i` is the exponent of variable `i` of
/// the owning table. Lexicographic `Ord` on `Vec<i64>` is exactly the
/// canonical term order.
pub type ExponentVector = Vec<i64>;

/// An ordered set of distinct variable names shared by a family of
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    /// Build a table from distinct, non-empty names. The order is fixed for
    /// the lifetime of the table.
    pub fn new<I, S>(names: I) -> Result<Arc<VarTable>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Usage("variable names must be non-empty".into()));
            }
            if names[..i].contains(name) {
                return Err(Error::Usage(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(Arc::new(VarTable { names }))
    }

    /// Table `x1..xk`, the initial cluster variables.
    pub fn cluster_vars(k: usize) -> Arc<VarTable> {
        VarTable::new((1..=k).map(|i| format!("x{i}"))).expect("generated names are distinct")
    }

    /// Table with no variables; its polynomials are plain integers.
    pub fn scalar() -> Arc<VarTable> {
        VarTable::new(Vec::<String>::new()).expect("empty table is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A single term: nonzero coefficient times a monomial in the table
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exps: ExponentVector,
}

impl Monomial {
    pub fn new(coeff: BigInt, exps: ExponentVector) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::ZeroOperand("Monomial::new"));
        }
        Ok(Monomial { coeff, exps })
    }

    /// True when the monomial is a unit of the Laurent ring, i.e. its
    /// coefficient is +1 or -1.
    pub fn is_unit(&self) -> bool {
        self.coeff.abs().is_one()
    }
}

/// Sparse multivariate Laurent polynomial with integer coefficients.
///
/// Invariants: no zero coefficients are stored, and two values are equal iff
/// their tables agree and their term maps are identical. The zero polynomial
/// is the empty map.
#[derive(Clone)]
pub struct LaurentPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_table(other) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl LaurentPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        LaurentPoly {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<VarTable>, value: impl Into<BigInt>) -> Self {
        let value = value.into();
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(vec![0; table.len()], value);
        }
        LaurentPoly {
            table: Arc::clone(table),
            terms,
        }
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::constant(table, 1)
    }

    /// The variable at `idx` as a polynomial.
    pub fn var(table: &Arc<VarTable>, idx: usize) -> Self {
        Self::var_pow(table, idx, 1)
    }

    /// `name(idx)^exp`, with `exp` of either sign.
    pub fn var_pow(table: &Arc<VarTable>, idx: usize, exp: i64) -> Self {
        assert!(idx < table.len(), "variable index out of range");
        let mut exps = vec![0; table.len()];
        exps[idx] = exp;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigInt::one());
        LaurentPoly {
            table: Arc::clone(table),
            terms,
        }
    }

    pub fn from_monomial(table: &Arc<VarTable>, m: &Monomial) -> Result<Self> {
        if m.exps.len() != table.len() {
            return Err(Error::Usage("monomial length does not match table".into()));
        }
        let mut terms = BTreeMap::new();
        terms.insert(m.exps.clone(), m.coeff.clone());
        Ok(LaurentPoly {
            table: Arc::clone(table),
            terms,
        })
    }

    /// Canonicalizing constructor: merges duplicate exponent vectors and
    /// drops zero coefficients.
    pub fn from_terms(
        table: &Arc<VarTable>,
        terms: impl IntoIterator<Item = (ExponentVector, BigInt)>,
    ) -> Result<Self> {
        let mut poly = Self::zero(table);
        for (exps, coeff) in terms {
            if exps.len() != table.len() {
                return Err(Error::Usage(format!(
                    "exponent vector of length {} in a table of {} variables",
                    exps.len(),
                    table.len()
                )));
            }
            poly.add_term(exps, coeff);
        }
        Ok(poly)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn same_table(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.table, &other.table) || self.table == other.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num_terms() == 1 && {
            let (e, c) = self.terms.iter().next().expect("one term");
            c.is_one() && e.iter().all(|&x| x == 0)
        }
    }

    /// A unit of the Laurent ring: a single term with coefficient +-1.
    pub fn is_unit(&self) -> bool {
        self.num_terms() == 1
            && self
                .terms
                .values()
                .next()
                .expect("one term")
                .abs()
                .is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.num_terms() == 1
    }

    /// True when every exponent is zero (the polynomial is an integer).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    /// Lexicographically greatest term; `None` for zero.
    pub fn leading(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Lexicographically least term; `None` for zero.
    pub fn trailing(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.iter().next()
    }

    /// The coefficient at an exponent vector, zero if absent.
    pub fn coeff(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Componentwise minimum exponent over all terms. `None` for zero.
    pub fn min_exponents(&self) -> Option<ExponentVector> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, e| {
            for (a, &x) in acc.iter_mut().zip(e.iter()) {
                if x < *a {
                    *a = x;
                }
            }
            acc
        }))
    }

    /// Largest exponent of variable `idx` over all terms, `None` for zero.
    pub fn degree_in(&self, idx: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[idx]).max()
    }

    /// True when variable `idx` appears with a nonzero exponent somewhere.
    pub fn uses_var(&self, idx: usize) -> bool {
        self.terms.keys().any(|e| e[idx] != 0)
    }

    pub(crate) fn add_term(&mut self, exps: ExponentVector, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        LaurentPoly {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_table(other), "variable table mismatch in add");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_table(other), "variable table mismatch in sub");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_table(other), "variable table mismatch in mul");
        let mut out = Self::zero(&self.table);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        // Iterate over the smaller operand in the outer loop.
        let (small, large) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                let exps: ExponentVector =
                    ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| (e.clone(), k * c))
            .collect();
        LaurentPoly {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    /// Multiply by the monomial `x^delta` (a unit shift).
    pub fn shift_exponents(&self, delta: &[i64]) -> Self {
        assert_eq!(delta.len(), self.table.len(), "shift length mismatch");
        if delta.iter().all(|&d| d == 0) {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let shifted: ExponentVector =
                    e.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
                (shifted, c.clone())
            })
            .collect();
        LaurentPoly {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    /// Nonnegative power by repeated squaring.
    pub fn pow(&self, exp: u64) -> Self {
        if exp == 0 {
            return Self::one(&self.table);
        }
        let mut base = self.clone();
        let mut acc: Option<LaurentPoly> = None;
        let mut e = exp;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.expect("exp > 0")
    }

    /// Inverse of a unit monomial. Fails on anything that is not a single
    /// term with coefficient +-1.
    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonInvertibleSubstitution);
        }
        let (e, c) = self.terms.iter().next().expect("unit has one term");
        let inv_exps: ExponentVector = e.iter().map(|x| -x).collect();
        let mut terms = BTreeMap::new();
        terms.insert(inv_exps, c.clone());
        Ok(LaurentPoly {
            table: Arc::clone(&self.table),
            terms,
        })
    }

    /// Map this polynomial into a larger table that contains all of its
    /// variables (by name). Used to embed e.g. `x1..xk` into the table with
    /// the extra non-autonomy roots.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Self> {
        let mapping: Option<Vec<usize>> = self
            .table
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mapping = mapping.ok_or(Error::VarTableMismatch)?;
        let mut out = LaurentPoly::zero(target);
        for (e, c) in &self.terms {
            let mut exps = vec![0i64; target.len()];
            for (src, &dst) in mapping.iter().enumerate() {
                exps[dst] = e[src];
            }
            out.add_term(exps, c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Display from the lexicographically greatest term down.
        for (exps, coeff) in self.terms.iter().rev() {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                if e == 1 {
                    factors.push(self.table.name(i).to_string());
                } else if e != 0 {
                    factors.push(format!("{}^{}", self.table.name(i), e));
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

// Debug delegates to Display so test assertion output stays readable.
impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<VarTable> {
        VarTable::new(["x", "y"]).unwrap()
    }

    fn parse_terms(table: &Arc<VarTable>, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            table,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
        .unwrap()
    }

    #[test]
    fn add_cancels() {
        let t = xy();
        let x = LaurentPoly::var(&t, 0);
        let y = LaurentPoly::var(&t, 1);
        // (x - y) + y = x
        assert_eq!(x.sub(&y).add(&y), x);
    }

    #[test]
    fn mul_distributes_over_laurent_terms() {
        let t = xy();
        let x = LaurentPoly::var(&t, 0);
        let x_inv = LaurentPoly::var_pow(&t, 0, -1);
        // (x + x^-1) * x = x^2 + 1
        let lhs = x.add(&x_inv).mul(&x);
        let expected = parse_terms(&t, &[(&[2, 0], 1), (&[0, 0], 1)]);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let t = xy();
        let p = parse_terms(&t, &[(&[1, 2], 3), (&[-1, 0], -4)]);
        let zero = LaurentPoly::zero(&t);
        assert_eq!(p.mul(&zero), zero);
    }

    #[test]
    fn unit_checks() {
        let t = VarTable::new(["x1", "x2", "x3"]).unwrap();
        // -x1*x3^-2 is a unit
        let u = parse_terms_3(&t, &[(&[1, 0, -2], -1)]);
        assert!(u.is_unit());
        // 2x is not
        let p = parse_terms_3(&t, &[(&[1, 0, 0], 2)]);
        assert!(!p.is_unit());
        fn parse_terms_3(table: &Arc<VarTable>, terms: &[(&[i64], i64)]) -> LaurentPoly {
            LaurentPoly::from_terms(
                table,
                terms
                    .iter()
                    .map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
            )
            .unwrap()
        }
    }

    #[test]
    fn zero_polynomial_has_empty_term_map() {
        let t = xy();
        let p = parse_terms(&t, &[(&[1, 0], 2), (&[1, 0], -2)]);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn empty_table_constants() {
        let t = VarTable::scalar();
        let five = LaurentPoly::constant(&t, 5);
        assert!(five.is_constant());
        assert_eq!(five.mul(&five), LaurentPoly::constant(&t, 25));
    }

    #[test]
    fn var_table_rejects_duplicates() {
        assert!(VarTable::new(["x", "x"]).is_err());
        assert!(VarTable::new(["x", ""]).is_err());
    }

    #[test]
    fn display_is_readable() {
        let t = xy();
        let p = parse_terms(&t, &[(&[2, 0], 1), (&[0, -1], -3), (&[0, 0], 1)]);
        assert_eq!(p.to_string(), "x^2 + 1 - 3*y^-1");
    }
}
