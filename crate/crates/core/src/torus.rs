//! Grid helpers on the angle cube `[0, 2pi)^k`.

use std::f64::consts::TAU;

use rayon::prelude::*;

pub(crate) fn grid_len(k: usize, g: usize) -> usize {
    g.pow(k as u32)
}

/// Angles of the grid node with linear index `idx` (first coordinate fastest).
pub(crate) fn index_to_angles(mut idx: usize, k: usize, g: usize) -> Vec<f64> {
    let h = TAU / g as f64;
    (0..k)
        .map(|_| {
            let i = idx % g;
            idx /= g;
            i as f64 * h
        })
        .collect()
}

fn index_to_multi(mut idx: usize, k: usize, g: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let i = idx % g;
            idx /= g;
            i
        })
        .collect()
}

fn multi_to_index(m: &[usize], g: usize) -> usize {
    m.iter().rev().fold(0, |acc, &i| acc * g + i)
}

/// Evaluates `f` on the full `g^k` grid in parallel; output order is the
/// linear index order, independent of scheduling.
pub(crate) fn grid_values<F>(k: usize, g: usize, f: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    (0..grid_len(k, g))
        .into_par_iter()
        .map(|idx| f(&index_to_angles(idx, k, g)))
        .collect()
}

/// Indices of the `count` smallest values (ties broken by index).
pub(crate) fn lowest_indices(values: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx.truncate(count);
    idx
}

/// Grid nodes not larger than any of their `3^k - 1` periodic neighbours.
pub(crate) fn local_minima(values: &[f64], k: usize, g: usize) -> Vec<usize> {
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(k as u32))
        .map(|mut o| {
            (0..k)
                .map(|_| {
                    let v = (o % 3) as i64 - 1;
                    o /= 3;
                    v
                })
                .collect()
        })
        .filter(|v: &Vec<i64>| v.iter().any(|&x| x != 0))
        .collect();
    (0..values.len())
        .into_par_iter()
        .filter(|&idx| {
            let m = index_to_multi(idx, k, g);
            let v = values[idx];
            offsets.iter().all(|off| {
                let nb: Vec<usize> = m
                    .iter()
                    .zip(off)
                    .map(|(&i, &o)| ((i as i64 + o).rem_euclid(g as i64)) as usize)
                    .collect();
                values[multi_to_index(&nb, g)] >= v
            })
        })
        .collect()
}

/// A local grid of `(2r+1)^k` points with spacing `h` around `center`.
pub(crate) fn local_grid(center: &[f64], h: f64, r: usize) -> Vec<Vec<f64>> {
    let k = center.len();
    let side = 2 * r + 1;
    (0..side.pow(k as u32))
        .map(|mut idx| {
            center
                .iter()
                .map(|c| {
                    let i = idx % side;
                    idx /= side;
                    c + (i as f64 - r as f64) * h
                })
                .collect()
        })
        .collect()
}
