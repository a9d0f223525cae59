//! Evaluation homomorphisms: substitute polynomials for variables.
//!
//! The assignment maps every variable occurring in the source polynomial to
//! a value polynomial; all values must share one target table, which becomes
//! the table of the result. A variable occurring with a negative exponent
//! must be assigned an invertible value: zero raises
//! [`Error::SingularSubstitution`], a non-unit raises
//! [`Error::NonInvertibleSubstitution`]. Substitution into rational
//! functions (which lifts those restrictions) lives in the `rational`
//! module.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::{LaurentPoly, VarTable};

impl LaurentPoly {
    /// Exact image of `self` under the evaluation taking each variable to
    /// its assigned polynomial.
    pub fn substitute(&self, values: &BTreeMap<String, LaurentPoly>) -> Result<LaurentPoly> {
        let target: Arc<VarTable> = match values.values().next() {
            Some(v) => Arc::clone(v.table()),
            None => Arc::clone(self.table()),
        };
        for v in values.values() {
            if !(Arc::ptr_eq(v.table(), &target) || **v.table() == *target) {
                return Err(Error::VarTableMismatch);
            }
        }

        // Resolve each source variable that actually occurs.
        let nvars = self.table().len();
        let mut resolved: Vec<Option<&LaurentPoly>> = vec![None; nvars];
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

        let mut power_cache: BTreeMap<(usize, i64), LaurentPoly> = BTreeMap::new();
        let mut out = LaurentPoly::zero(&target);
        for (exps, coeff) in self.terms() {
            let mut term = LaurentPoly::constant(&target, coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let value = resolved[i].expect("occurring variable resolved above");
                let key = (i, e);
                if !power_cache.contains_key(&key) {
                    let p = if e > 0 {
                        value.pow(e as u64)
                    } else {
                        if value.is_zero() {
                            return Err(Error::SingularSubstitution);
                        }
                        value.unit_inverse()?.pow((-e) as u64)
                    };
                    power_cache.insert(key, p);
                }
                term = term.mul(&power_cache[&key]);
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// The identity assignment on this polynomial's own table.
    pub fn identity_assignment(table: &Arc<VarTable>) -> BTreeMap<String, LaurentPoly> {
        table
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), LaurentPoly::var(table, i)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn poly(table: &Arc<VarTable>, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            table,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
        .unwrap()
    }

    #[test]
    fn specialization_to_t() {
        // x1^-1 (x2 x4 + x3^2) at x1=x2=x3=1, x4=t gives t + 1.
        let t4 = VarTable::cluster_vars(4);
        let p = poly(&t4, &[(&[-1, 1, 0, 1], 1), (&[-1, 0, 2, 0], 1)]);
        let tt = VarTable::new(["t"]).unwrap();
        let mut values = BTreeMap::new();
        for name in ["x1", "x2", "x3"] {
            values.insert(name.to_string(), LaurentPoly::one(&tt));
        }
        values.insert("x4".to_string(), LaurentPoly::var(&tt, 0));
        let image = p.substitute(&values).unwrap();
        assert_eq!(image, poly(&tt, &[(&[1], 1), (&[0], 1)]));
    }

    #[test]
    fn identity_substitution() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let p = poly(&t, &[(&[2, -1], 3), (&[0, 1], -2)]);
        let id = LaurentPoly::identity_assignment(&t);
        assert_eq!(p.substitute(&id).unwrap(), p);
    }

    #[test]
    fn numeric_evaluation() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let p = poly(&t, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let scalar = VarTable::scalar();
        let mut values = BTreeMap::new();
        values.insert("x".to_string(), LaurentPoly::constant(&scalar, 2));
        values.insert("y".to_string(), LaurentPoly::constant(&scalar, 3));
        assert_eq!(
            p.substitute(&values).unwrap(),
            LaurentPoly::constant(&scalar, 5)
        );
    }

    #[test]
    fn zero_into_negative_exponent_is_singular() {
        let t = VarTable::new(["x"]).unwrap();
        let p = poly(&t, &[(&[-1], 1)]);
        let scalar = VarTable::scalar();
        let mut values = BTreeMap::new();
        values.insert("x".to_string(), LaurentPoly::zero(&scalar));
        assert_eq!(p.substitute(&values), Err(Error::SingularSubstitution));
        // A nonzero non-unit is rejected as non-invertible.
        values.insert("x".to_string(), LaurentPoly::constant(&scalar, 2));
        assert_eq!(p.substitute(&values), Err(Error::NonInvertibleSubstitution));
    }
}
