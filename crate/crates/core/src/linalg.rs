//! Dense helpers for the tiny systems that show up everywhere (d <= 10).

/// Solves `a x = b` for a square row-major matrix with partial pivoting.
/// Returns `None` when a pivot falls below `tol` times the largest entry.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if n == 0 {
        return Some(Vec::new());
    }
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() <= tol * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let (top, rest) = a.split_at_mut(row);
                for (x, p) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                    *x -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

pub(crate) fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, rest) = a.split_at_mut(row);
            for (x, p) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *x -= f * p;
            }
        }
    }
    det
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of the orthogonal complement of `vectors` in R^d.
pub(crate) fn orthogonal_complement(vectors: &[Vec<f64>], d: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if let Some(u) = reduce(v, &basis, tol) {
            basis.push(u);
        }
    }
    let spanned = basis.len();
    for axis in 0..d {
        if basis.len() == d {
            break;
        }
        let mut e = vec![0.0; d];
        e[axis] = 1.0;
        if let Some(u) = reduce(&e, &basis, 1e-6) {
            basis.push(u);
        }
    }
    basis.split_off(spanned)
}

fn reduce(v: &[f64], basis: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    let n0 = norm(v);
    if n0 == 0.0 {
        return None;
    }
    let mut u = v.to_vec();
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = dot(&u, b);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let n = norm(&u);
    if n <= tol * n0 {
        return None;
    }
    u.iter_mut().for_each(|x| *x /= n);
    Some(u)
}
