//! Exchange matrices, seeds, and seed mutation.
//!
//! A seed is a triple (B, x, y): a skew-symmetric integer exchange matrix,
//! a tuple of cluster variables (Laurent polynomials), and a tuple of
//! coefficients (rational functions). Mutation in direction d replaces all
//! three, reading the pre-mutation matrix throughout:
//!
//! - matrix: `b'[i][j] = -b[i][j]` if `i = d` or `j = d`;
//!   `b[i][j] + b[i][d] b[d][j]` if both factors are positive;
//!   `b[i][j] - b[i][d] b[d][j]` if both are negative; unchanged otherwise.
//! - cluster: `x[d] <- (prod_{b[d][j]>0} x_j^{b[d][j]} +
//!   prod_{b[d][j]<0} x_j^{-b[d][j]}) / x[d]` (empty products are 1).
//! - coefficients: `y[d] <- y[d]^-1`; for `i != d` with `b = b[d][i]`,
//!   `y[i] <- y[i] (y[d]^-1 + 1)^-b` when `b > 0` and
//!   `y[i] <- y[i] (y[d] + 1)^-b` when `b < 0`.
//!
//! Directions are 1-based in every public signature.
//!
//! The sign convention in the `b < 0` branch of the coefficient rule is
//! the one that makes the cyclic orbit of the `bk` matrices reproduce the
//! standard coefficient relations (each mutation multiplies the neighbours
//! by `(y+1)` to the positive power `|b|`); see the orbit tests.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{LaurentPoly, VarTable};
use crate::rational::RationalFunction;
use crate::recurrence::OrbitScalar;

/// Skew-symmetric integer exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeMatrix {
    entries: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let k = entries.len();
        if k < 2 {
            return Err(Error::Usage("exchange matrix needs k >= 2".into()));
        }
        if entries.iter().any(|row| row.len() != k) {
            return Err(Error::Usage("exchange matrix must be square".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if entries[i][j] != -entries[j][i] {
                    return Err(Error::Usage(format!(
                        "matrix is not skew-symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(ExchangeMatrix { entries })
    }

    pub fn zero(k: usize) -> Result<Self> {
        Self::new(vec![vec![0; k]; k])
    }

    /// The k x k exchange matrix `B_k` whose cyclic mutation orbit generates
    /// the Somos-k bilinear recurrence (k >= 4).
    ///
    /// Construction: the banded skew matrix with `b[i][i+1] = -2` and
    /// `b[i][i+2] = +1`, with corner corrections
    /// `b[1][2] += 1`, `b[1][k-1] += 1`, `b[1][k] -= 1`,
    /// `b[2][k-1] -= 1`, `b[2][k] += 1`, `b[k-1][k] += 1`
    /// (1-based), lower triangle by skew-symmetry.
    pub fn bk(k: usize) -> Result<Self> {
        if k < 4 {
            return Err(Error::Usage("bk requires k >= 4".into()));
        }
        let mut m = vec![vec![0i64; k]; k];
        for i in 0..k - 1 {
            m[i][i + 1] = -2;
        }
        for i in 0..k - 2 {
            m[i][i + 2] = 1;
        }
        m[0][1] += 1;
        m[0][k - 2] += 1;
        m[0][k - 1] -= 1;
        m[1][k - 2] -= 1;
        m[1][k - 1] += 1;
        m[k - 2][k - 1] += 1;
        for i in 0..k {
            for j in 0..i {
                m[i][j] = -m[j][i];
            }
        }
        let out = ExchangeMatrix { entries: m };

        // The k = 4 and k = 5 matrices are pinned explicitly; the banded
        // construction must reproduce them entry for entry.
        if k == 4 {
            let expected = [
                [0, -1, 2, -1],
                [1, 0, -3, 2],
                [-2, 3, 0, -1],
                [1, -2, 1, 0],
            ];
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(out.entries[i][j], expected[i][j], "bk(4) at ({i},{j})");
                }
            }
        }
        if k == 5 {
            let expected = [
                [0, -1, 1, 1, -1],
                [1, 0, -2, 0, 1],
                [-1, 2, 0, -2, 1],
                [-1, 0, 2, 0, -1],
                [1, -1, -1, 1, 0],
            ];
            for i in 0..5 {
                for j in 0..5 {
                    assert_eq!(out.entries[i][j], expected[i][j], "bk(5) at ({i},{j})");
                }
            }
        }
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    /// Entry at 1-based position (i, j).
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    fn check_dir(&self, dir: usize) -> Result<usize> {
        if dir == 0 || dir > self.k() {
            return Err(Error::IndexOutOfRange {
                index: dir as i64,
                limit: self.k(),
            });
        }
        Ok(dir - 1)
    }

    /// Matrix mutation in direction `dir` (1-based).
    pub fn mutate(&self, dir: usize) -> Result<Self> {
        let d = self.check_dir(dir)?;
        let k = self.k();
        let b = &self.entries;
        let mut out = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                out[i][j] = if i == d || j == d {
                    -b[i][j]
                } else if b[i][d] > 0 && b[d][j] > 0 {
                    b[i][j] + b[i][d] * b[d][j]
                } else if b[i][d] < 0 && b[d][j] < 0 {
                    b[i][j] - b[i][d] * b[d][j]
                } else {
                    b[i][j]
                };
            }
        }
        debug_assert!((0..k).all(|i| (0..k).all(|j| out[i][j] == -out[j][i])));
        Ok(ExchangeMatrix { entries: out })
    }

    pub fn to_json(&self) -> Value {
        json!(self.entries)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Usage("matrix JSON must be an array of rows".into()))?;
        let mut entries = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Usage("matrix rows must be arrays".into()))?;
            entries.push(
                row.iter()
                    .map(|e| {
                        e.as_i64()
                            .ok_or_else(|| Error::Usage("matrix entries must be integers".into()))
                    })
                    .collect::<Result<Vec<i64>>>()?,
            );
        }
        Self::new(entries)
    }
}

/// The cyclic permutation sending basis index i to i+1 (mod k); conjugation
/// by its powers realizes the mutation-periodicity of the `bk` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicShift {
    k: usize,
}

impl CyclicShift {
    pub fn new(k: usize) -> Self {
        CyclicShift { k }
    }

    /// The permutation matrix R (1 on the subdiagonal, 1 in the top-right
    /// corner). `R^k` is the identity.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.k]; self.k];
        m[0][self.k - 1] = 1;
        for i in 1..self.k {
            m[i][i - 1] = 1;
        }
        m
    }

    /// `R^power B R^-power`: entry (i, j) moves to (i+power, j+power).
    pub fn conjugate(&self, b: &ExchangeMatrix, power: usize) -> ExchangeMatrix {
        let k = self.k;
        let p = power % k;
        let mut out = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                out[i][j] = b.entries[(i + k - p) % k][(j + k - p) % k];
            }
        }
        ExchangeMatrix { entries: out }
    }
}

/// Verify that mutating `bk(k)` at directions 1..k steps through the cyclic
/// conjugates of itself and returns to the start.
pub fn check_mutation_period(k: usize) -> Result<bool> {
    let b = ExchangeMatrix::bk(k)?;
    let shift = CyclicShift::new(k);
    for n in 1..=k {
        let lhs = shift.conjugate(&b, n - 1).mutate(n)?;
        let rhs = shift.conjugate(&b, n);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A mutation state: matrix, cluster tuple and coefficient tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    matrix: ExchangeMatrix,
    x: Vec<LaurentPoly>,
    y: Vec<RationalFunction>,
}

impl Seed {
    pub fn new(matrix: ExchangeMatrix, x: Vec<LaurentPoly>, y: Vec<RationalFunction>) -> Result<Self> {
        let k = matrix.k();
        if x.len() != k || y.len() != k {
            return Err(Error::Usage(format!(
                "seed tuples must have length {k} (got x: {}, y: {})",
                x.len(),
                y.len()
            )));
        }
        if x.iter().any(LaurentPoly::is_zero) {
            return Err(Error::Usage("cluster variables must be nonzero".into()));
        }
        if x.windows(2).any(|w| !w[0].same_table(&w[1])) {
            return Err(Error::VarTableMismatch);
        }
        if y.windows(2).any(|w| !w[0].numer().same_table(w[1].numer())) {
            return Err(Error::VarTableMismatch);
        }
        Ok(Seed { matrix, x, y })
    }

    /// The fully symbolic initial seed on `bk(k)`: `x = (x1..xk)` and
    /// `y = (y1..yk)` as free variables.
    pub fn symbolic(k: usize) -> Result<Self> {
        let matrix = ExchangeMatrix::bk(k)?;
        let xt = VarTable::cluster_vars(k);
        let yt = VarTable::new((1..=k).map(|i| format!("y{i}")))?;
        let x = (0..k).map(|i| LaurentPoly::var(&xt, i)).collect();
        let y = (0..k).map(|i| RationalFunction::var(&yt, i)).collect();
        Seed::new(matrix, x, y)
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    pub fn x(&self) -> &[LaurentPoly] {
        &self.x
    }

    pub fn y(&self) -> &[RationalFunction] {
        &self.y
    }

    fn exchange_x(&self, d: usize) -> Result<LaurentPoly> {
        let row = &self.matrix.entries[d];
        let table = self.x[0].table();
        let mut pos = LaurentPoly::one(table);
        let mut neg = LaurentPoly::one(table);
        for (j, &b) in row.iter().enumerate() {
            if b > 0 {
                pos = pos.mul(&self.x[j].pow(b as u64));
            } else if b < 0 {
                neg = neg.mul(&self.x[j].pow((-b) as u64));
            }
        }
        let sum = pos.add(&neg);
        if self.x[d].is_zero() {
            return Err(Error::SingularityEncountered(
                "cluster mutation at a zero variable".into(),
            ));
        }
        sum.exact_div(&self.x[d])
    }

    /// Mutate only the cluster tuple in direction `dir` (1-based); the
    /// matrix and coefficients are returned unchanged.
    pub fn mutate_x(&self, dir: usize) -> Result<Seed> {
        let d = self.matrix.check_dir(dir)?;
        let mut x = self.x.clone();
        x[d] = self.exchange_x(d)?;
        Ok(Seed {
            matrix: self.matrix.clone(),
            x,
            y: self.y.clone(),
        })
    }

    /// Mutate only the coefficient tuple in direction `dir` (1-based).
    pub fn mutate_y(&self, dir: usize) -> Result<Seed> {
        let y = mutate_y_tuple(&self.matrix, &self.y, dir)?;
        Ok(Seed {
            matrix: self.matrix.clone(),
            x: self.x.clone(),
            y,
        })
    }

    /// Full seed mutation: matrix, cluster and coefficients, all reading
    /// the pre-mutation matrix.
    pub fn mutate(&self, dir: usize) -> Result<Seed> {
        let d = self.matrix.check_dir(dir)?;
        let mut x = self.x.clone();
        x[d] = self.exchange_x(d)?;
        let y = mutate_y_tuple(&self.matrix, &self.y, dir)?;
        Ok(Seed {
            matrix: self.matrix.mutate(dir)?,
            x,
            y,
        })
    }

    /// Left fold of `mutate` over a list of 1-based directions.
    pub fn mutation_sequence(&self, dirs: &[usize]) -> Result<Seed> {
        let mut seed = self.clone();
        for &dir in dirs {
            seed = seed.mutate(dir)?;
        }
        Ok(seed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k(),
            "matrix": self.matrix.to_json(),
            "x": self.x.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
            "y": self.y.iter().map(RationalFunction::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Usage("seed JSON must be an object".into()))?;
        let matrix = ExchangeMatrix::from_json(
            obj.get("matrix")
                .ok_or_else(|| Error::Usage("seed JSON needs `matrix`".into()))?,
        )?;
        if let Some(k) = obj.get("k").and_then(Value::as_u64) {
            if k as usize != matrix.k() {
                return Err(Error::Usage("seed `k` does not match the matrix size".into()));
            }
        }
        let xs = obj
            .get("x")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Usage("seed JSON needs an `x` array".into()))?;
        let ys = obj
            .get("y")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Usage("seed JSON needs a `y` array".into()))?;
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::Usage("seed tuples must be non-empty".into()));
        }
        let first_x = LaurentPoly::from_json(&xs[0])?;
        let x_table = Arc::clone(first_x.table());
        let mut x = vec![first_x];
        for v in &xs[1..] {
            x.push(LaurentPoly::from_json_with_table(v, &x_table)?);
        }
        let first_y = RationalFunction::from_json(&ys[0])?;
        let y_table = Arc::clone(first_y.table());
        let mut y = vec![first_y];
        for v in &ys[1..] {
            y.push(RationalFunction::from_json_with_table(v, &y_table)?);
        }
        Seed::new(matrix, x, y)
    }
}

/// Coefficient mutation in direction `dir` (1-based) against the
/// pre-mutation matrix. Generic over the coefficient ring so the same rule
/// drives canonical rational functions and the factored values used for
/// long orbits.
pub fn mutate_y_tuple<T: OrbitScalar>(
    matrix: &ExchangeMatrix,
    y: &[T],
    dir: usize,
) -> Result<Vec<T>> {
    let d = matrix.check_dir(dir)?;
    if y.len() != matrix.k() {
        return Err(Error::Usage("coefficient tuple length mismatch".into()));
    }
    if y[d].is_zero() {
        return Err(Error::SingularityEncountered(
            "coefficient mutation at a zero coefficient".into(),
        ));
    }
    let inv = y[d].inv()?;
    let one = y[d].one_like();
    let plus_one = y[d].add(&one)?;
    if plus_one.is_zero() {
        return Err(Error::SingularityEncountered(
            "coefficient mutation at a coefficient equal to -1".into(),
        ));
    }
    let inv_plus_one = inv.add(&one)?;
    let mut out = y.to_vec();
    out[d] = inv;
    for (i, value) in out.iter_mut().enumerate() {
        if i == d {
            continue;
        }
        let b = matrix.entries[d][i];
        if b > 0 {
            *value = value.mul(&inv_plus_one.pow_i(-b)?)?;
        } else if b < 0 {
            *value = value.mul(&plus_one.pow_i(-b)?)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bk_matches_pinned_small_cases() {
        let b4 = ExchangeMatrix::bk(4).unwrap();
        assert_eq!(
            b4.rows(),
            &[
                vec![0, -1, 2, -1],
                vec![1, 0, -3, 2],
                vec![-2, 3, 0, -1],
                vec![1, -2, 1, 0]
            ]
        );
        let b5 = ExchangeMatrix::bk(5).unwrap();
        assert_eq!(b5.get(2, 4), 0);
        assert_eq!(b5.get(3, 4), -2);
        // first row of the banded construction at k = 6
        let b6 = ExchangeMatrix::bk(6).unwrap();
        assert_eq!(b6.rows()[0], vec![0, -1, 1, 0, 1, -1]);
        assert!(ExchangeMatrix::bk(3).is_err());
    }

    #[test]
    fn matrix_mutation_is_cyclic_conjugation_on_b4() {
        let b4 = ExchangeMatrix::bk(4).unwrap();
        let mutated = b4.mutate(1).unwrap();
        assert_eq!(
            mutated.rows(),
            &[
                vec![0, 1, -2, 1],
                vec![-1, 0, -1, 2],
                vec![2, 1, 0, -3],
                vec![-1, -2, 3, 0]
            ]
        );
        let shift = CyclicShift::new(4);
        assert_eq!(mutated, shift.conjugate(&b4, 1));
    }

    #[test]
    fn matrix_mutation_is_involutive() {
        let b = ExchangeMatrix::bk(6).unwrap();
        for dir in 1..=6 {
            assert_eq!(b.mutate(dir).unwrap().mutate(dir).unwrap(), b);
        }
        let zero = ExchangeMatrix::zero(4).unwrap();
        assert_eq!(zero.mutate(1).unwrap(), zero);
    }

    #[test]
    fn mutation_period_holds_for_small_k() {
        for k in 4..=10 {
            assert!(check_mutation_period(k).unwrap(), "period failed at k={k}");
        }
    }

    #[test]
    fn cyclic_shift_matrix_has_order_k() {
        let shift = CyclicShift::new(5);
        let r = shift.matrix();
        assert_eq!(r[0][4], 1);
        assert_eq!(r[1][0], 1);
        // conjugating five times is the identity
        let b = ExchangeMatrix::bk(5).unwrap();
        assert_eq!(shift.conjugate(&b, 5), b);
    }

    #[test]
    fn seed_x_mutation_matches_exchange_relation() {
        let seed = Seed::symbolic(4).unwrap();
        let mutated = seed.mutate_x(1).unwrap();
        // x1 -> (x2 x4 + x3^2) / x1
        let t = seed.x()[0].table();
        let expected = LaurentPoly::from_terms(
            t,
            [
                (vec![-1, 1, 0, 1], 1.into()),
                (vec![-1, 0, 2, 0], 1.into()),
            ],
        )
        .unwrap();
        assert_eq!(mutated.x()[0], expected);
        // involution on the cluster tuple
        assert_eq!(mutated.mutate_x(1).unwrap().x(), seed.x());
    }

    #[test]
    fn numeric_all_ones_mutation() {
        let matrix = ExchangeMatrix::bk(4).unwrap();
        let t = VarTable::scalar();
        let x = vec![LaurentPoly::one(&t); 4];
        let y = vec![RationalFunction::one(&t); 4];
        let seed = Seed::new(matrix, x, y).unwrap();
        let mutated = seed.mutate_x(1).unwrap();
        assert_eq!(mutated.x()[0], LaurentPoly::constant(&t, 2));
    }

    #[test]
    fn full_mutation_is_involutive_on_symbolic_seed() {
        for k in [4, 5] {
            let seed = Seed::symbolic(k).unwrap();
            for dir in 1..=k {
                let back = seed.mutate(dir).unwrap().mutate(dir).unwrap();
                assert_eq!(back, seed, "mutation squared differs at k={k}, dir={dir}");
            }
        }
    }

    #[test]
    fn commuting_directions_commute() {
        // b[2][4] = 0 in bk(5), so mutations at 2 and 4 commute.
        let seed = Seed::symbolic(5).unwrap();
        assert_eq!(seed.matrix().get(2, 4), 0);
        let a = seed.mutation_sequence(&[2, 4]).unwrap();
        let b = seed.mutation_sequence(&[4, 2]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_cycle_restores_matrix() {
        for k in [4, 5, 6] {
            let seed = Seed::symbolic(k).unwrap();
            let dirs: Vec<usize> = (1..=k).collect();
            let cycled = seed.mutation_sequence(&dirs).unwrap();
            assert_eq!(cycled.matrix(), seed.matrix(), "matrix not restored at k={k}");
        }
    }

    #[test]
    fn coefficient_mutation_matches_displayed_relations() {
        // k=4, direction 1: (y1, y2, y3, y4) ->
        //   (y1^-1, y2 (y1+1), y3 (y1^-1+1)^-2, y4 (y1+1))
        let seed = Seed::symbolic(4).unwrap();
        let yt = seed.y()[0].table();
        let y1 = RationalFunction::var(yt, 0);
        let one = RationalFunction::one(yt);
        let mutated = seed.mutate_y(1).unwrap();
        let y1p1 = y1.add(&one).unwrap();
        let y1invp1 = y1.inv().unwrap().add(&one).unwrap();
        assert_eq!(mutated.y()[0], y1.inv().unwrap());
        assert_eq!(
            mutated.y()[1],
            RationalFunction::var(yt, 1).mul(&y1p1).unwrap()
        );
        assert_eq!(
            mutated.y()[2],
            RationalFunction::var(yt, 2)
                .mul(&y1invp1.pow_i(-2).unwrap())
                .unwrap()
        );
        assert_eq!(
            mutated.y()[3],
            RationalFunction::var(yt, 3).mul(&y1p1).unwrap()
        );

        // k=5, direction 1: the middle coefficients pick up (y1^-1+1)^-1.
        let seed5 = Seed::symbolic(5).unwrap();
        let yt5 = seed5.y()[0].table();
        let w1 = RationalFunction::var(yt5, 0);
        let one5 = RationalFunction::one(yt5);
        let m5 = seed5.mutate_y(1).unwrap();
        let p1 = w1.add(&one5).unwrap();
        let ip1 = w1.inv().unwrap().add(&one5).unwrap();
        assert_eq!(m5.y()[0], w1.inv().unwrap());
        assert_eq!(m5.y()[1], RationalFunction::var(yt5, 1).mul(&p1).unwrap());
        assert_eq!(
            m5.y()[2],
            RationalFunction::var(yt5, 2).mul(&ip1.pow_i(-1).unwrap()).unwrap()
        );
        assert_eq!(
            m5.y()[3],
            RationalFunction::var(yt5, 3).mul(&ip1.pow_i(-1).unwrap()).unwrap()
        );
        assert_eq!(m5.y()[4], RationalFunction::var(yt5, 4).mul(&p1).unwrap());
    }

    #[test]
    fn seed_json_round_trip() {
        let seed = Seed::symbolic(4).unwrap();
        let j = seed.to_json();
        let back = Seed::from_json(&j).unwrap();
        assert_eq!(back, seed);
        // skew-symmetry is validated on load
        let mut bad = j.clone();
        bad["matrix"][0][1] = json!(5);
        assert!(Seed::from_json(&bad).is_err());
    }
}
