//! Attached quadratic forms and the space of bilinear quasi-left-inversions.

use super::{BilinearLaw, LdbError};
use crate::field::Scalar;
use crate::forms::QuadraticForm;
use crate::linalg::Matrix;

/// Interpolates `q` from `L*(x) L.(x)` at every `e_i` and `e_i + e_j`, then
/// re-checks the identity `L*(x) L.(x) = q(x) I` coefficient by coefficient.
pub fn attach_form(star: &BilinearLaw, bullet: &BilinearLaw) -> Result<QuadraticForm, LdbError> {
    if star.field() != bullet.field() {
        return Err(LdbError::FieldMismatch);
    }
    if star.dim() != bullet.dim() {
        return Err(LdbError::Dimension {
            expected: star.dim(),
            got: bullet.dim(),
        });
    }
    let f = star.field();
    let n = star.dim();
    let ls: Vec<Matrix> = (0..n).map(|i| star.basis_left(i)).collect();
    let lb: Vec<Matrix> = (0..n).map(|i| bullet.basis_left(i)).collect();
    let t: Vec<Vec<Matrix>> = (0..n).map(|a| (0..n).map(|b| ls[a].mul(&lb[b])).collect()).collect();

    let scalar_at = |m: &Matrix, at: String| -> Result<Scalar, LdbError> {
        m.is_scalar().ok_or_else(|| {
            let (row, col) = m.first_non_scalar_cell().expect("non-scalar matrix has a witness cell");
            LdbError::NotScalar { at, row, col }
        })
    };
    let mut s = Vec::with_capacity(n);
    for i in 0..n {
        s.push(scalar_at(&t[i][i], format!("e{}", i + 1))?);
    }
    let mut upper = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            if i == j {
                upper.push(s[i].clone());
                continue;
            }
            let m = t[i][i].add(&t[i][j]).add(&t[j][i]).add(&t[j][j]);
            let sij = scalar_at(&m, format!("e{}+e{}", i + 1, j + 1))?;
            upper.push(f.sub(&f.sub(&sij, &s[i]), &s[j]));
        }
    }
    let q = QuadraticForm::from_upper(f, n, &upper)?;
    for a in 0..n {
        for b in a..n {
            let lhs = if a == b { t[a][a].clone() } else { t[a][b].add(&t[b][a]) };
            let rhs = Matrix::scalar(f, n, q.coeff(a, b));
            if let Some((row, col)) = first_difference(&lhs, &rhs) {
                return Err(LdbError::Mismatch { a, b, row, col });
            }
        }
    }
    Ok(q)
}

fn first_difference(a: &Matrix, b: &Matrix) -> Option<(usize, usize)> {
    let n = a.cols();
    a.entries()
        .iter()
        .zip(b.entries())
        .position(|(x, y)| x != y)
        .map(|p| (p / n, p % n))
}

/// Basis of all bilinear laws `B` with `x * B(x, y) = c(x) y` for some
/// quadratic `c`.
///
/// The coefficient of `e_l` in `x * (x B e_k)` is
/// `sum_{i,j} x_i x_j sum_m c[i][m][l] B[j][k][m]`; for each `k` the
/// off-diagonal (`l != k`) conditions only involve the block `B[.][k][.]`,
/// so they are solved block by block before the diagonal conditions tie the
/// blocks to a common form.
pub fn quasi_left_inverse_space(star: &BilinearLaw) -> Vec<BilinearLaw> {
    let f = star.field();
    let n = star.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    // Row of the (i, j, l) condition over block unknowns indexed j' * n + m.
    let row = |i: usize, j: usize, l: usize| -> Vec<Scalar> {
        let mut r = vec![f.zero(); n * n];
        for m in 0..n {
            if i == j {
                r[i * n + m] = star.entry(i, m, l).clone();
            } else {
                r[j * n + m] = f.add(&r[j * n + m], star.entry(i, m, l));
                r[i * n + m] = f.add(&r[i * n + m], star.entry(j, m, l));
            }
        }
        r
    };
    let dot = |a: &[Scalar], b: &[Scalar]| a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)));

    let mut blocks: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(n);
    for k in 0..n {
        let rows: Vec<Vec<Scalar>> = pairs
            .iter()
            .flat_map(|&(i, j)| (0..n).filter(move |&l| l != k).map(move |l| (i, j, l)))
            .map(|(i, j, l)| row(i, j, l))
            .collect();
        let kernel = if rows.is_empty() {
            (0..n * n).map(|p| crate::forms::unit_vec(f, n * n, p)).collect()
        } else {
            Matrix::from_rows(f, &rows).expect("rectangular").kernel_basis()
        };
        blocks.push(kernel);
    }
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let block_unknowns: usize = blocks.iter().map(|b| b.len()).sum();
    let total = block_unknowns + pairs.len();
    let mut rows = Vec::with_capacity(n * pairs.len());
    for k in 0..n {
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let r = row(i, j, k);
            let mut full = vec![f.zero(); total];
            for (t, v) in blocks[k].iter().enumerate() {
                full[offsets[k] + t] = dot(&r, v);
            }
            full[block_unknowns + p] = f.neg(&f.one());
            rows.push(full);
        }
    }
    let solutions = Matrix::from_rows(f, &rows).expect("rectangular").kernel_basis();
    solutions
        .into_iter()
        .enumerate()
        .map(|(s, sol)| {
            // tensor B[j][k][m]
            let mut b = vec![f.zero(); n * n * n];
            for k in 0..n {
                for (t, v) in blocks[k].iter().enumerate() {
                    let coef = &sol[offsets[k] + t];
                    if f.is_zero(coef) {
                        continue;
                    }
                    for j in 0..n {
                        for m in 0..n {
                            let idx = (j * n + k) * n + m;
                            b[idx] = f.add(&b[idx], &f.mul(coef, &v[j * n + m]));
                        }
                    }
                }
            }
            BilinearLaw::new(f, n, b, &format!("quasi-left-inverse #{}", s + 1)).expect("tensor size")
        })
        .collect()
}
