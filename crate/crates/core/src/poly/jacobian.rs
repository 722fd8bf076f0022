use super::{PolyError, Polynomial};

/// Determinant of the matrix of partial derivatives of `components`.
pub fn jacobian_determinant(components: &[Polynomial]) -> Result<Polynomial, PolyError> {
    let n = components.len();
    let nvars = components.first().map_or(0, Polynomial::nvars);
    if n == 0 || nvars != n {
        return Err(PolyError::NotSquare { rows: n, cols: nvars });
    }
    let mut matrix = Vec::with_capacity(n);
    for c in components {
        if c.nvars() != nvars {
            return Err(PolyError::VariableCountMismatch {
                left: nvars,
                right: c.nvars(),
            });
        }
        let row = (0..n).map(|j| c.derivative(j)).collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(determinant(&matrix, &rows, &cols, nvars))
}

/// Cofactor expansion along the row of the minor with the most zero entries.
pub(crate) fn determinant(m: &[Vec<Polynomial>], rows: &[usize], cols: &[usize], nvars: usize) -> Polynomial {
    if rows.is_empty() {
        return Polynomial::one(nvars);
    }
    if rows.len() == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let pivot_pos = (0..rows.len())
        .max_by_key(|&i| {
            let zeros = cols.iter().filter(|&&c| m[rows[i]][c].is_zero()).count();
            (zeros, std::cmp::Reverse(i))
        })
        .unwrap_or(0);
    let r = rows[pivot_pos];
    let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
    let mut acc = Polynomial::zero(nvars);
    for (j, &c) in cols.iter().enumerate() {
        let entry = &m[r][c];
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = determinant(m, &sub_rows, &sub_cols, nvars);
        if minor.is_zero() {
            continue;
        }
        let term = entry * &minor;
        acc = if (pivot_pos + j) % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}
