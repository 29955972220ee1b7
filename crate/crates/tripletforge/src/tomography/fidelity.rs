use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;

/// Σ√(pq)/√(ΣpΣq); 1 for proportional maps, 0 for disjoint ones.
pub fn bhattacharyya(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::Validation("fidelity needs two maps on the same grid".into()));
    }
    if p.iter().chain(q).any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::Validation("fidelity needs finite nonnegative maps".into()));
    }
    let sp = pairwise_sum(p);
    let sq = pairwise_sum(q);
    if sp == 0.0 || sq == 0.0 {
        return Err(Error::Numerical("fidelity is undefined for an all-zero map".into()));
    }
    let cross: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).collect();
    Ok((pairwise_sum(&cross) / (sp * sq).sqrt()).min(1.0))
}

/// Replace NaN cells of a row-major `rows × cols` map by the mean of their
/// finite 4-neighbours, sweeping until nothing changes.
pub fn fill_holes(map: &mut [f64], rows: usize, cols: usize) {
    loop {
        let mut changed = false;
        let snapshot = map.to_vec();
        for r in 0..rows {
            for c in 0..cols {
                if !snapshot[r * cols + c].is_nan() {
                    continue;
                }
                let mut acc = 0.0;
                let mut n = 0;
                let nb = [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)];
                for (rr, cc) in nb {
                    if rr < rows && cc < cols && !snapshot[rr * cols + cc].is_nan() {
                        acc += snapshot[rr * cols + cc];
                        n += 1;
                    }
                }
                if n > 0 {
                    map[r * cols + c] = acc / n as f64;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn bracket(axis: &[f64], x: f64) -> Option<(usize, f64)> {
    let n = axis.len();
    if n < 2 {
        return None;
    }
    let (lo, hi) = (axis[0].min(axis[n - 1]), axis[0].max(axis[n - 1]));
    if x < lo || x > hi {
        return None;
    }
    let asc = axis[n - 1] > axis[0];
    let idx = if asc {
        axis.partition_point(|v| *v <= x)
    } else {
        axis.partition_point(|v| *v >= x)
    };
    let i = idx.clamp(1, n - 1) - 1;
    let t = (x - axis[i]) / (axis[i + 1] - axis[i]);
    Some((i, t.clamp(0.0, 1.0)))
}

/// Bilinear resampling of a row-major map from (rows_from, cols_from) onto
/// (rows_to, cols_to); points outside the source grid become 0.
pub fn upsample_bilinear(map: &[f64], rows_from: &[f64], cols_from: &[f64], rows_to: &[f64], cols_to: &[f64]) -> Vec<f64> {
    let nc = cols_from.len();
    let mut out = Vec::with_capacity(rows_to.len() * cols_to.len());
    for &y in rows_to {
        for &x in cols_to {
            let v = match (bracket(rows_from, y), bracket(cols_from, x)) {
                (Some((i, ty)), Some((j, tx))) => {
                    let at = |a: usize, b: usize| map[a * nc + b];
                    (1.0 - ty) * ((1.0 - tx) * at(i, j) + tx * at(i, j + 1))
                        + ty * ((1.0 - tx) * at(i + 1, j) + tx * at(i + 1, j + 1))
                }
                _ => 0.0,
            };
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_disjoint_maps() {
        let p = [1.0, 2.0, 0.0, 4.0];
        assert!((bhattacharyya(&p, &p).unwrap() - 1.0).abs() < 1e-15);
        assert!((bhattacharyya(&p, &p.map(|v| 7.0 * v)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(bhattacharyya(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 0.0);
        assert!(bhattacharyya(&[0.0, 0.0], &[0.0, 3.0]).is_err());
        assert!(bhattacharyya(&[1.0], &[0.0, 3.0]).is_err());
    }

    #[test]
    fn holes_take_neighbour_mean() {
        let mut m = vec![1.0, 2.0, 3.0, 4.0, f64::NAN, 6.0, 7.0, 8.0, 9.0];
        fill_holes(&mut m, 3, 3);
        assert_eq!(m[4], 5.0);
        let mut diag = vec![f64::NAN, 1.0, 1.0, f64::NAN];
        fill_holes(&mut diag, 2, 2);
        assert_eq!(diag, vec![1.0; 4]);
    }

    #[test]
    fn bilinear_reproduces_planes() {
        let ax = [0.0, 1.0, 2.0];
        let map: Vec<f64> = (0..9).map(|k| (k / 3) as f64 * 2.0 + (k % 3) as f64).collect();
        let fine = [0.0, 0.5, 1.25, 2.0];
        let up = upsample_bilinear(&map, &ax, &ax, &fine, &fine);
        for (k, v) in up.iter().enumerate() {
            let (y, x) = (fine[k / 4], fine[k % 4]);
            assert!((v - (2.0 * y + x)).abs() < 1e-14);
        }
        // descending axes work too
        let rev = [2.0, 1.0, 0.0];
        let map_rev: Vec<f64> = (0..9).map(|k| (2 - k / 3) as f64 * 2.0 + (2 - k % 3) as f64).collect();
        let up2 = upsample_bilinear(&map_rev, &rev, &rev, &fine, &fine);
        for (a, b) in up.iter().zip(&up2) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
