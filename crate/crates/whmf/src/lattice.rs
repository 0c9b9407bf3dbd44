//! Exact lattice basis reduction.
//!
//! A small LLL implementation over arbitrary-precision integers with the
//! classical parameter δ = 3/4 and exact rational Gram–Schmidt data — no
//! floating point enters the reduction, so the output basis is certifiably
//! size-reduced and Lovász-conditioned.  The bases that arise here are tiny
//! (at most nine rows), so the Gram–Schmidt table is simply recomputed at
//! each outer step; only the in-place size reduction updates μ incrementally
//! (the orthogonalized vectors are unchanged by row operations on later
//! rows).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Gram–Schmidt data for integer rows: `(‖b*_i‖², μ)` with `μ[i][j]` the
/// projection coefficient of row i on `b*_j` (j < i).
fn gram_schmidt(basis: &[Vec<BigInt>]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = basis.len();
    let dim = basis.first().map_or(0, Vec::len);
    let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v: Vec<BigRational> = basis[i]
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            let mut dot = BigRational::zero();
            for t in 0..dim {
                dot += BigRational::from_integer(basis[i][t].clone()) * &bstar[j][t];
            }
            let coeff = dot / &norms[j];
            for t in 0..dim {
                let sub = &coeff * &bstar[j][t];
                v[t] -= sub;
            }
            mu[i][j] = coeff;
        }
        let mut norm = BigRational::zero();
        for t in 0..dim {
            norm += &v[t] * &v[t];
        }
        norms.push(norm);
        bstar.push(v);
    }
    (norms, mu)
}

fn round_to_int(r: &BigRational) -> BigInt {
    r.round().to_integer()
}

/// Reduces `basis` in place with the LLL algorithm (δ = 3/4).  Rows are
/// integer vectors of equal length; the row span is preserved.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let dim = basis[0].len();
    assert!(basis.iter().all(|r| r.len() == dim), "ragged basis");
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));

    let mut k = 1usize;
    while k < n {
        let (norms, mut mu) = gram_schmidt(basis);
        // Size-reduce row k against rows k−1 … 0, updating its μ row.
        for j in (0..k).rev() {
            let q = round_to_int(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            for t in 0..dim {
                let sub = &q * &basis[j][t];
                basis[k][t] -= sub;
            }
            let qr = BigRational::from_integer(q);
            for t in 0..j {
                let sub = &qr * &mu[j][t];
                mu[k][t] -= sub;
            }
            mu[k][j] -= qr;
        }
        // Lovász condition on the (unchanged) orthogonalized norms.
        let bound = (&delta - &(&mu[k][k - 1] * &mu[k][k - 1])) * &norms[k - 1];
        if norms[k] >= bound {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
}

/// Squared Euclidean norm of an integer row.
pub fn norm_squared(row: &[BigInt]) -> BigInt {
    row.iter().map(|x| x * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rug::ops::Pow;

    fn rows(data: &[&[i64]]) -> Vec<Vec<BigInt>> {
        data.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn two_dimensional_reduction_finds_the_shortest_vector() {
        // Lattice spanned by (12, 2) and (13, 4): the shortest vector is
        // (1, 2) = (13, 4) − (12, 2), of squared norm 5.
        let mut basis = rows(&[&[12, 2], &[13, 4]]);
        lll_reduce(&mut basis);
        assert_eq!(norm_squared(&basis[0]), BigInt::from(5));
    }

    #[test]
    fn recognizes_square_root_of_two() {
        // Rows [e_i | round(S·√2^i)] for i = 0, 1, 2: the shortest reduced
        // row encodes the relation x² − 2 = 0.
        let prec = 192;
        let s = rug::Float::with_val(prec, 1u32) << 96u32;
        let x = rug::Float::with_val(prec, 2u32).sqrt();
        let mut basis: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..3u32 {
            let mut row = vec![BigInt::from(0); 4];
            row[i as usize] = BigInt::from(1);
            let scaled = rug::Float::with_val(prec, (&x).pow(i)) * &s;
            row[3] = crate::hp::scaled_round(&scaled, 0);
            basis.push(row);
        }
        lll_reduce(&mut basis);
        let hit = basis.iter().any(|row| {
            let (c0, c1, c2) = (&row[0], &row[1], &row[2]);
            (c0 == &BigInt::from(-2) && c1.is_zero() && c2 == &BigInt::from(1))
                || (c0 == &BigInt::from(2) && c1.is_zero() && c2 == &BigInt::from(-1))
        });
        assert!(hit, "x² − 2 not recovered: {basis:?}");
    }

    #[test]
    fn recognizes_the_golden_ratio_polynomial() {
        let prec = 192;
        let s = rug::Float::with_val(prec, 1u32) << 96u32;
        let x = (rug::Float::with_val(prec, 5u32).sqrt() + 1u32) / 2u32;
        let mut basis: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..3u32 {
            let mut row = vec![BigInt::from(0); 4];
            row[i as usize] = BigInt::from(1);
            let scaled = rug::Float::with_val(prec, (&x).pow(i)) * &s;
            row[3] = crate::hp::scaled_round(&scaled, 0);
            basis.push(row);
        }
        lll_reduce(&mut basis);
        // x² − x − 1 = 0, up to overall sign.
        let hit = basis.iter().any(|row| {
            let v: Vec<i64> = row[..3].iter().map(|x| i64::try_from(x).unwrap_or(i64::MAX)).collect();
            v == [-1, -1, 1] || v == [1, 1, -1]
        });
        assert!(hit, "x² − x − 1 not recovered: {basis:?}");
    }

    #[test]
    fn preserves_the_row_span() {
        // The reduced basis of an integer lattice keeps the determinant up
        // to sign (2×2 case checked directly).
        let mut basis = rows(&[&[4, 1], &[1, 1]]);
        let det_before = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
        lll_reduce(&mut basis);
        let det_after = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
        assert_eq!(det_before.abs(), det_after.abs());
    }
}
