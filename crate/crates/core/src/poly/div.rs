//! Exact division in the Laurent ring.
//!
//! Monomials are units here, so `p / q` exists iff it exists after shifting
//! both operands to ordinary polynomials: factor the componentwise-minimal
//! exponent vector out of each side, run ordinary multivariate exact
//! division on the shifted operands, and shift the quotient back. For the
//! shifted operands the greedy leading-term algorithm is complete: when a
//! quotient exists its leading term equals lt(p)/lt(q), so any failed step
//! (negative exponent or a coefficient that does not divide) proves
//! non-divisibility.

use num_integer::Integer;
use num_traits::Zero;

use super::LaurentPoly;
use crate::error::{Error, Result};

impl LaurentPoly {
    /// Return `r` with `self = q * r` in the Laurent ring, or
    /// [`Error::NotDivisible`] when no such `r` exists.
    pub fn exact_div(&self, q: &LaurentPoly) -> Result<LaurentPoly> {
        if !self.same_table(q) {
            return Err(Error::VarTableMismatch);
        }
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.table()));
        }

        let p_shift = self.min_exponents().expect("nonzero");
        let q_shift = q.min_exponents().expect("nonzero");
        let neg = |v: &[i64]| -> Vec<i64> { v.iter().map(|x| -x).collect() };

        let num = self.shift_exponents(&neg(&p_shift));
        let den = q.shift_exponents(&neg(&q_shift));

        let mut rem = num;
        let mut quot = LaurentPoly::zero(self.table());
        let (den_exps, den_coeff) = {
            let (e, c) = den.leading().expect("nonzero divisor");
            (e.clone(), c.clone())
        };

        while !rem.is_zero() {
            let (r_exps, r_coeff) = {
                let (e, c) = rem.leading().expect("nonzero remainder");
                (e.clone(), c.clone())
            };
            let mut t_exps = Vec::with_capacity(r_exps.len());
            for (a, b) in r_exps.iter().zip(den_exps.iter()) {
                let d = a - b;
                if d < 0 {
                    return Err(Error::NotDivisible);
                }
                t_exps.push(d);
            }
            let (t_coeff, r) = r_coeff.div_rem(&den_coeff);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            let term = LaurentPoly::from_terms(self.table(), [(t_exps, t_coeff)])
                .expect("term length matches table");
            rem = rem.sub(&term.mul(&den));
            quot = quot.add(&term);
        }

        // Shift back: quotient of the original operands is x^(p_shift - q_shift) * quot.
        let delta: Vec<i64> = p_shift
            .iter()
            .zip(q_shift.iter())
            .map(|(a, b)| a - b)
            .collect();
        Ok(quot.shift_exponents(&delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;
    use num_bigint::BigInt;

    fn poly(table: &std::sync::Arc<VarTable>, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            table,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
        .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let num = poly(&t, &[(&[2, 0], 1), (&[0, 2], -1)]);
        let den = poly(&t, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let expected = poly(&t, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(num.exact_div(&den).unwrap(), expected);
    }

    #[test]
    fn laurent_quotient_with_negative_exponents() {
        let t = VarTable::new(["x"]).unwrap();
        // (x - x^-1) / (x + 1) = 1 - x^-1; checked by multiplying back.
        let num = poly(&t, &[(&[1], 1), (&[-1], -1)]);
        let den = poly(&t, &[(&[1], 1), (&[0], 1)]);
        let q = num.exact_div(&den).unwrap();
        let expected = poly(&t, &[(&[0], 1), (&[-1], -1)]);
        assert_eq!(q, expected);
        assert_eq!(den.mul(&q), num);
    }

    #[test]
    fn not_divisible() {
        let t = VarTable::new(["x"]).unwrap();
        let num = poly(&t, &[(&[1], 1), (&[0], 1)]);
        let den = poly(&t, &[(&[1], 1), (&[0], -1)]);
        assert_eq!(num.exact_div(&den), Err(Error::NotDivisible));
    }

    #[test]
    fn zero_divisor_rejected() {
        let t = VarTable::new(["x"]).unwrap();
        let num = poly(&t, &[(&[1], 1)]);
        let zero = LaurentPoly::zero(&t);
        assert_eq!(num.exact_div(&zero), Err(Error::DivisionByZero));
        assert_eq!(zero.exact_div(&num).unwrap(), zero);
    }

    #[test]
    fn coefficient_divisibility_matters() {
        let t = VarTable::new(["x"]).unwrap();
        let num = poly(&t, &[(&[1], 3)]);
        let den = poly(&t, &[(&[0], 2)]);
        assert_eq!(num.exact_div(&den), Err(Error::NotDivisible));
        let den_ok = poly(&t, &[(&[0], 3)]);
        assert_eq!(num.exact_div(&den_ok).unwrap(), poly(&t, &[(&[1], 1)]));
    }
}
