//! Symmetric tridiagonal eigenproblems.
//!
//! `diag` has length n, `off` has length n - 1 (off[i] couples i and i + 1).

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let denom = if q == 0.0 { f64::EPSILON * (off[i - 1].abs() + 1.0) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based) by bisection to full precision.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin(diag, off);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale * 0.25 {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve (T - shift I) x = rhs with partial pivoting. `rhs` is overwritten.
fn shifted_solve(diag: &[f64], off: &[f64], shift: f64, rhs: &mut [f64]) {
    let n = diag.len();
    // rows hold up to three band entries after pivoting: u0 (diag), u1, u2
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut mult = vec![0.0; n];
    let mut swapped = vec![false; n];
    let tiny = f64::EPSILON * (gershgorin(diag, off).1.abs() + shift.abs() + 1.0);

    let mut a = diag[0] - shift;
    let mut bnext = if n > 1 { off[0] } else { 0.0 };
    let mut cextra = 0.0;
    for i in 0..n {
        if i + 1 < n {
            let sub = off[i];
            let d1 = diag[i + 1] - shift;
            let sup1 = if i + 2 < n { off[i + 1] } else { 0.0 };
            if sub.abs() > a.abs() {
                // swap rows i and i+1
                swapped[i] = true;
                u0[i] = sub;
                u1[i] = d1;
                u2[i] = sup1;
                let m = a / sub;
                mult[i] = m;
                a = bnext - m * d1;
                bnext = cextra - m * sup1;
                cextra = 0.0;
            } else {
                let pivot = if a == 0.0 { tiny } else { a };
                u0[i] = pivot;
                u1[i] = bnext;
                u2[i] = cextra;
                let m = sub / pivot;
                mult[i] = m;
                a = d1 - m * bnext;
                bnext = sup1 - m * cextra;
                cextra = 0.0;
            }
        } else {
            u0[i] = if a == 0.0 { tiny } else { a };
        }
    }
    // forward elimination on rhs
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            rhs.swap(i, i + 1);
        }
        rhs[i + 1] -= mult[i] * rhs[i];
    }
    // back substitution
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= u1[i] * rhs[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * rhs[i + 2];
        }
        let p = if u0[i] == 0.0 { tiny } else { u0[i] };
        rhs[i] = s / p;
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Lowest `k` eigenpairs by bisection plus inverse iteration.
/// Eigenvectors are unit-norm in the Euclidean sense; close pairs are
/// re-orthogonalized so the returned set is orthonormal.
pub fn lowest_eigenpairs(diag: &[f64], off: &[f64], k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = diag.len();
    let k = k.min(n);
    let values: Vec<f64> = (0..k).map(|j| kth_eigenvalue(diag, off, j)).collect();
    let (lo, hi) = gershgorin(diag, off);
    let cluster_tol = 1e-3 * (hi - lo).abs().max(1.0);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, &lam) in values.iter().enumerate() {
        // deterministic, nowhere-orthogonal starting vector
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64 * 0.754_877_666 + j as f64 * 0.3).sin()))
            .collect();
        normalize(&mut v);
        let cluster: Vec<usize> = (0..j)
            .filter(|&p| (values[p] - lam).abs() < cluster_tol)
            .collect();
        for _ in 0..4 {
            shifted_solve(diag, off, lam, &mut v);
            for &p in &cluster {
                let dot: f64 = v.iter().zip(&vectors[p]).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(&vectors[p]).for_each(|(a, b)| *a -= dot * b);
            }
            normalize(&mut v);
        }
        vectors.push(v);
    }
    (values, vectors)
}

/// Full eigendecomposition by implicit QL with Wilkinson-type shifts.
/// Returns ascending eigenvalues and eigenvectors stored one per row.
pub fn full_eigen(diag: &[f64], off: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);
    // z[k] is eigenvector k; rotations act on pairs of rows
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut r = vec![0.0; n];
            r[k] = 1.0;
            r
        })
        .collect();

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (lo_rows, hi_rows) = z.split_at_mut(i + 1);
                let zi = &mut lo_rows[i];
                let zi1 = &mut hi_rows[0];
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let t = *b;
                    *b = s * *a + c * t;
                    *a = c * *a - s * t;
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order.iter().map(|&i| std::mem::take(&mut z[i])).collect();
    (values, vectors)
}
