//! Reduced rational functions over the integer Laurent ring.
//!
//! A [`RationalFunction`] is a fraction num/den of [`LaurentPoly`] values
//! kept in canonical form:
//!
//! - `den` is nonzero, an ordinary polynomial (its per-variable minimum
//!   exponent is zero) with positive leading coefficient; the variable
//!   shift and the sign are pushed into `num`;
//! - the primitive parts of `num` and `den` are coprime, and their integer
//!   contents are coprime (fractions are stored over the integer ring with
//!   fractions cleared, so a content may remain on either side);
//! - zero is `0/1`, and equality of values is equality of canonical forms.
//!
//! Reduction uses the gcd engine; multiplication and addition reduce via
//! cross-gcds of the already-reduced operands, which keeps the gcd calls on
//! the smallest possible operands. All values are immutable and all
//! operations pure.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{coprime, LaurentPoly, VarTable};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    /// Build and reduce a fraction. Fails when `den` is zero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if !num.same_table(&den) {
            return Err(Error::VarTableMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                den: LaurentPoly::one(num.table()),
                num,
            });
        }
        let g = num.gcd(&den)?;
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let c = num.int_content().gcd(&den.int_content());
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        Ok(Self::normalize_units(num, den))
    }

    /// Push the denominator's monomial shift and sign into the numerator.
    /// Assumes the pair is already reduced.
    fn normalize_units(num: LaurentPoly, den: LaurentPoly) -> Self {
        let shift = den.min_exponents().expect("den nonzero");
        let (mut num, mut den) = if shift.iter().any(|&s| s != 0) {
            let neg: Vec<i64> = shift.iter().map(|s| -s).collect();
            (num.shift_exponents(&neg), den.shift_exponents(&neg))
        } else {
            (num, den)
        };
        if den.leading().expect("den nonzero").1.is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction {
            den: LaurentPoly::one(p.table()),
            num: p,
        }
    }

    pub fn constant(table: &Arc<VarTable>, value: impl Into<BigInt>) -> Self {
        Self::from_poly(LaurentPoly::constant(table, value))
    }

    pub fn var(table: &Arc<VarTable>, idx: usize) -> Self {
        Self::from_poly(LaurentPoly::var(table, idx))
    }

    /// Embed an exact rational number as a constant function.
    pub fn from_ratio(table: &Arc<VarTable>, value: &BigRational) -> Self {
        let num = LaurentPoly::constant(table, value.numer().clone());
        let den = LaurentPoly::constant(table, value.denom().clone());
        Self::new(num, den).expect("rational denominators are nonzero")
    }

    pub fn zero(table: &Arc<VarTable>) -> Self {
        Self::from_poly(LaurentPoly::zero(table))
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::from_poly(LaurentPoly::one(table))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn table(&self) -> &Arc<VarTable> {
        self.num.table()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.num.same_table(&other.num) {
            return Err(Error::VarTableMismatch);
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        // a/b + c/d with g0 = gcd(b, d): the only factors shared between
        // the new numerator and denominator divide g0.
        let g0 = self.den.gcd(&other.den)?;
        let (b1, d1) = if g0.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (self.den.exact_div(&g0)?, other.den.exact_div(&g0)?)
        };
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Ok(Self::zero(self.table()));
        }
        let g2 = if g0.is_one() {
            g0.clone()
        } else {
            num.gcd(&g0)?
        };
        let (num, g0) = if g2.is_one() {
            (num, g0)
        } else {
            (num.exact_div(&g2)?, g0.exact_div(&g2)?)
        };
        let mut num = num;
        let mut den = g0.mul(&b1).mul(&d1);
        let c = num.int_content().gcd(&den.int_content());
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        Ok(Self::normalize_units(num, den))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.num.same_table(&other.num) {
            return Err(Error::VarTableMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.table()));
        }
        // Cross-reduce: both operands are reduced, so shared factors only
        // live across the diagonal.
        let g1 = self.num.gcd(&other.den)?;
        let g2 = other.num.gcd(&self.den)?;
        let a = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.exact_div(&g1)?
        };
        let d = if g1.is_one() {
            other.den.clone()
        } else {
            other.den.exact_div(&g1)?
        };
        let c = if g2.is_one() {
            other.num.clone()
        } else {
            other.num.exact_div(&g2)?
        };
        let b = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.exact_div(&g2)?
        };
        let mut num = a.mul(&c);
        let mut den = b.mul(&d);
        let cont = num.int_content().gcd(&den.int_content());
        if !cont.is_one() {
            num = num.div_scalar_exact(&cont);
            den = den.div_scalar_exact(&cont);
        }
        Ok(Self::normalize_units(num, den))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_units(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow_i(&self, exp: i64) -> Result<Self> {
        if exp == 0 {
            return Ok(Self::one(self.table()));
        }
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let e = exp.unsigned_abs();
        // Powers of a reduced fraction stay reduced.
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Evaluate as an exact rational number when the value is constant.
    pub fn as_ratio(&self) -> Option<BigRational> {
        if !self.num.is_constant() || !self.den.is_constant() {
            return None;
        }
        let num = self.num.coeff(&vec![0; self.table().len()]);
        let den = self.den.coeff(&vec![0; self.table().len()]);
        Some(BigRational::new(num, den))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": self.num.to_json(),
            "den": self.den.to_json(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Usage("rational JSON must be an object".into()))?;
        let num_v = obj
            .get("num")
            .ok_or_else(|| Error::Usage("rational JSON needs `num`".into()))?;
        let den_v = obj
            .get("den")
            .ok_or_else(|| Error::Usage("rational JSON needs `den`".into()))?;
        let num = LaurentPoly::from_json(num_v)?;
        let den = LaurentPoly::from_json_with_table(den_v, num.table())?;
        Self::new(num, den)
    }

    pub fn from_json_with_table(value: &Value, table: &Arc<VarTable>) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Usage("rational JSON must be an object".into()))?;
        let num_v = obj
            .get("num")
            .ok_or_else(|| Error::Usage("rational JSON needs `num`".into()))?;
        let den_v = obj
            .get("den")
            .ok_or_else(|| Error::Usage("rational JSON needs `den`".into()))?;
        let num = LaurentPoly::from_json_with_table(num_v, table)?;
        let den = LaurentPoly::from_json_with_table(den_v, table)?;
        Self::new(num, den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Co-primeness of two rational functions in the sense of the field of
/// fractions: with `f = g1/g2` and `g = h1/h2` reduced, every cross pair
/// `(g_i, h_j)` must be coprime in the Laurent ring.
pub fn coprime_rf(f: &RationalFunction, g: &RationalFunction) -> Result<bool> {
    for (p, q) in [
        (f.numer(), g.numer()),
        (f.numer(), g.denom()),
        (f.denom(), g.numer()),
        (f.denom(), g.denom()),
    ] {
        if !coprime(p, q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A parameter binding: formally symbolic, or a fixed nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Symbolic,
    Numeric(BigRational),
}

impl ParamValue {
    pub fn numeric(value: BigRational) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::Usage("parameters must be nonzero".into()));
        }
        Ok(ParamValue::Numeric(value))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ParamValue::Symbolic)
    }
}

/// Assignment of the equation parameters (or their formal roots) to values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamAssignment {
    entries: BTreeMap<String, ParamValue>,
}

impl ParamAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: &str, value: ParamValue) {
        self.entries.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn all_symbolic(&self) -> bool {
        self.entries.values().all(ParamValue::is_symbolic)
    }

    pub fn all_numeric(&self) -> bool {
        self.entries.values().all(|v| !v.is_symbolic())
    }
}

impl LaurentPoly {
    /// Image of this polynomial under an evaluation into the rational
    /// function field; negative exponents only require the assigned value to
    /// be nonzero.
    pub fn substitute_rational(
        &self,
        values: &BTreeMap<String, RationalFunction>,
    ) -> Result<RationalFunction> {
        let target: Arc<VarTable> = match values.values().next() {
            Some(v) => Arc::clone(v.table()),
            None => Arc::clone(self.table()),
        };
        let nvars = self.table().len();
        let mut resolved: Vec<Option<&RationalFunction>> = vec![None; nvars];
        for i in 0..nvars {
            if self.uses_var(i) {
                match values.get(self.table().name(i)) {
                    Some(v) => resolved[i] = Some(v),
                    None => {
                        return Err(Error::Usage(format!(
                            "no value assigned to variable `{}`",
                            self.table().name(i)
                        )))
                    }
                }
            }
        }
        let mut cache: BTreeMap<(usize, i64), RationalFunction> = BTreeMap::new();
        let mut out = RationalFunction::zero(&target);
        for (exps, coeff) in self.terms() {
            let mut term = RationalFunction::constant(&target, coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let value = resolved[i].expect("occurring variable resolved above");
                if value.is_zero() && e < 0 {
                    return Err(Error::SingularSubstitution);
                }
                let key = (i, e);
                if !cache.contains_key(&key) {
                    cache.insert(key, value.pow_i(e)?);
                }
                term = term.mul(&cache[&key])?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<VarTable> {
        VarTable::new(["y0", "y1"]).unwrap()
    }

    fn y(i: usize) -> RationalFunction {
        RationalFunction::var(&table(), i)
    }

    #[test]
    fn common_denominator_collapses() {
        // y/(y+1) + 1/(y+1) = 1
        let t = table();
        let y0 = LaurentPoly::var(&t, 0);
        let one = LaurentPoly::one(&t);
        let den = y0.add(&one);
        let f = RationalFunction::new(y0, den.clone()).unwrap();
        let g = RationalFunction::new(one, den).unwrap();
        assert!(f.add(&g).unwrap().is_one());
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let t = table();
        let y0 = LaurentPoly::var(&t, 0);
        let yp1 = y0.add(&LaurentPoly::one(&t));
        let f = RationalFunction::new(yp1.clone(), y0.clone()).unwrap();
        let g = RationalFunction::new(y0, yp1).unwrap();
        assert!(f.mul(&g).unwrap().is_one());
    }

    #[test]
    fn inv_of_variable_keeps_integer_form() {
        let f = y(0).inv().unwrap();
        // 1/y0 is stored as the Laurent monomial y0^-1 over denominator 1.
        assert!(f.denom().is_one());
        assert_eq!(f.numer(), &LaurentPoly::var_pow(&table(), 0, -1));
    }

    #[test]
    fn reduction_is_idempotent() {
        let t = table();
        let y0 = LaurentPoly::var(&t, 0);
        let one = LaurentPoly::one(&t);
        let num = y0.add(&one).mul(&y0).mul_scalar(&BigInt::from(6));
        let den = y0.add(&one).mul_scalar(&BigInt::from(4));
        let f = RationalFunction::new(num, den).unwrap();
        let again = RationalFunction::new(f.numer().clone(), f.denom().clone()).unwrap();
        assert_eq!(f, again);
        // 6 y0 (y0+1) / 4 (y0+1) = 3 y0 / 2
        assert_eq!(f.numer(), &LaurentPoly::var(&t, 0).mul_scalar(&BigInt::from(3)));
        assert_eq!(f.denom(), &LaurentPoly::constant(&t, 2));
    }

    #[test]
    fn div_by_self_is_one() {
        let t = table();
        let f = RationalFunction::new(
            LaurentPoly::var(&t, 0).add(&LaurentPoly::constant(&t, 3)),
            LaurentPoly::var(&t, 1).add(&LaurentPoly::one(&t)),
        )
        .unwrap();
        assert!(f.div(&f).unwrap().is_one());
        assert!(RationalFunction::zero(&t).inv().is_err());
    }

    #[test]
    fn coprime_rf_detects_shared_factors() {
        // y0/(y1+1) and (y1+1)/y0 share both y0 and y1+1 across the cross pairs.
        let t = table();
        let y0 = LaurentPoly::var(&t, 0);
        let y1p1 = LaurentPoly::var(&t, 1).add(&LaurentPoly::one(&t));
        let f = RationalFunction::new(y0.clone(), y1p1.clone()).unwrap();
        let g = RationalFunction::new(y1p1, y0).unwrap();
        assert!(!coprime_rf(&f, &g).unwrap());
        assert!(coprime_rf(&y(0), &y(1)).unwrap());
        // symmetry
        assert_eq!(
            coprime_rf(&f, &g).unwrap(),
            coprime_rf(&g, &f).unwrap()
        );
    }

    #[test]
    fn numeric_fractions_keep_content_in_denominator() {
        let t = table();
        let f = RationalFunction::from_ratio(&t, &BigRational::new(3.into(), 4.into()));
        assert_eq!(f.as_ratio().unwrap(), BigRational::new(3.into(), 4.into()));
        let g = f.add(&f).unwrap();
        assert_eq!(g.as_ratio().unwrap(), BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn json_round_trip() {
        let t = table();
        let f = RationalFunction::new(
            LaurentPoly::var_pow(&t, 0, -2).mul_scalar(&BigInt::from(5)),
            LaurentPoly::var(&t, 1).add(&LaurentPoly::constant(&t, 7)),
        )
        .unwrap();
        let j = f.to_json();
        assert_eq!(RationalFunction::from_json(&j).unwrap(), f);
    }
}
