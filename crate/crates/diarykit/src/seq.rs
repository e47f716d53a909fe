//! Tangent numbers, the counting sequence for anticlique diaries in the
//! triangle-free setting: 1, 2, 16, 272, 7936, ...
//!
//! The primary implementation is the boustrophedon (zigzag) triangle, which
//! is integer-only and needs one row per sequence index. The tangent numbers
//! are the odd-indexed zigzag numbers.

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("tangent numbers are indexed from 1")]
    IndexFromOne,
}

/// The tangent numbers `T(1)..=T(n)`, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentTable {
    values: Vec<BigUint>,
}

impl TangentTable {
    /// Computes `T(1)..=T(upto)` by the boustrophedon recurrence: row `k` of
    /// the zigzag triangle is filled with alternating partial sums of the
    /// previous row, and the zigzag number `Z(k)` is its final entry.
    /// `T(n) = Z(2n - 1)`.
    pub fn up_to(upto: usize) -> TangentTable {
        let mut values = Vec::with_capacity(upto);
        // row k holds T(k, 0..=k) with T(k, 0) = 0 for k >= 1,
        // T(k, j) = T(k, j-1) + T(k-1, k-j), seeded by T(0, 0) = 1.
        let mut row: Vec<BigUint> = vec![BigUint::from(1u32)];
        for k in 1..=(2 * upto).saturating_sub(1) {
            let mut next: Vec<BigUint> = Vec::with_capacity(k + 1);
            next.push(BigUint::from(0u32));
            for j in 1..=k {
                let v = &next[j - 1] + &row[k - j];
                next.push(v);
            }
            row = next;
            if k % 2 == 1 {
                values.push(row[k].clone());
            }
        }
        TangentTable { values }
    }

    /// `T(n)` for `1 <= n <= len`, or `None` outside the table.
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        if n == 0 {
            return None;
        }
        self.values.get(n - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// The `n`-th tangent number (`n >= 1`).
pub fn tangent_number(n: usize) -> Result<BigUint, SeqError> {
    if n == 0 {
        return Err(SeqError::IndexFromOne);
    }
    Ok(TangentTable::up_to(n)
        .get(n)
        .expect("table covers the requested index")
        .clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent cross-implementation: the square recurrence
    /// `T(N) = sum over n+m=N of C(2N-2, 2n-1) T(n) T(m)`, obtained by
    /// comparing coefficients in `tan' = 1 + tan^2`.
    fn tangent_by_convolution(upto: usize) -> Vec<BigUint> {
        fn binomial(n: usize, k: usize) -> BigUint {
            let k = k.min(n - k);
            let mut out = BigUint::from(1u32);
            for i in 0..k {
                out = out * BigUint::from(n - i) / BigUint::from(i + 1);
            }
            out
        }
        let mut t: Vec<BigUint> = vec![BigUint::from(1u32)];
        for total in 2..=upto {
            let mut acc = BigUint::from(0u32);
            for n in 1..total {
                let m = total - n;
                acc += binomial(2 * total - 2, 2 * n - 1) * &t[n - 1] * &t[m - 1];
            }
            t.push(acc);
        }
        t
    }

    #[test]
    fn first_ten_values() {
        let expected: [u64; 10] = [
            1,
            2,
            16,
            272,
            7936,
            353792,
            22368256,
            1903757312,
            209865342976,
            29088885112832,
        ];
        let table = TangentTable::up_to(10);
        for (i, want) in expected.iter().enumerate() {
            assert_eq!(table.get(i + 1).unwrap(), &BigUint::from(*want), "T({})", i + 1);
        }
    }

    #[test]
    fn boustrophedon_agrees_with_convolution() {
        let a = TangentTable::up_to(12);
        let b = tangent_by_convolution(12);
        assert_eq!(a.values(), &b[..]);
    }

    #[test]
    fn index_zero_is_an_error() {
        assert_eq!(tangent_number(0), Err(SeqError::IndexFromOne));
        assert_eq!(TangentTable::up_to(3).get(0), None);
        assert_eq!(TangentTable::up_to(3).get(4), None);
    }

    #[test]
    fn single_value_helper() {
        assert_eq!(tangent_number(1).unwrap(), BigUint::from(1u32));
        assert_eq!(tangent_number(5).unwrap(), BigUint::from(7936u32));
    }
}
