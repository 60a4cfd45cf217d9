#![allow(dead_code)]

use std::collections::BTreeMap;

use reinhardt_core::{CoefficientRule, Complex, Direction, Domain, MultiIndex, Series};

pub const LN2: f64 = std::f64::consts::LN_2;

pub fn mi(v: &[u64]) -> MultiIndex {
    MultiIndex::new(v.to_vec()).unwrap()
}

pub fn dir(c: &[f64]) -> Direction {
    Direction::new(c.to_vec()).unwrap()
}

pub fn ray(d: &[u64], ratio: f64) -> CoefficientRule<f64> {
    CoefficientRule::RayGeometric {
        direction: mi(d),
        ratio: Complex::new(ratio, 0.0),
    }
}

pub fn geometric() -> Series {
    Series::full_geometric(2)
}

pub fn diagonal() -> Series {
    Series::new(2, ray(&[1, 1], 2.0), "diagonal").unwrap()
}

pub fn f0() -> Series {
    Series::new(
        2,
        CoefficientRule::Sum(vec![CoefficientRule::FullGeometric, ray(&[1, 1], 2.0)]),
        "f0",
    )
    .unwrap()
}

pub fn table(entries: &[(&[u64], f64)]) -> Series {
    let t: BTreeMap<_, _> = entries
        .iter()
        .map(|(j, c)| (mi(j), Complex::new(*c, 0.0)))
        .collect();
    Series::new(2, CoefficientRule::ExplicitTable(t), "table").unwrap()
}

pub fn quadrant() -> Domain {
    Domain::negative_orthant(2)
}

pub fn wedge() -> Domain {
    Domain::from_pairs(
        2,
        &[
            (vec![1.0, 0.0], 0.0),
            (vec![0.0, 1.0], 0.0),
            (vec![0.5, 0.5], -LN2 / 2.0),
        ],
    )
    .unwrap()
}

/// Triangle-shaped region cut by a normal that lies on neither the 11- nor
/// the 101-point direction lattice.
pub fn triangle() -> Domain {
    Domain::from_pairs(
        2,
        &[
            (vec![1.0, 0.0], 1.0),
            (vec![0.0, 1.0], 1.0),
            (vec![0.373, 0.627], 0.0),
        ],
    )
    .unwrap()
}

/// Exact support function of the wedge: `-min(t, 1-t) ln 2` at `(t, 1-t)`.
pub fn wedge_support(t: f64) -> f64 {
    -t.min(1.0 - t) * LN2
}

/// All multi-indices of degree `k` in dimension `n`, by nested loops.
pub fn brute_enumerate(n: usize, k: u64) -> Vec<Vec<u64>> {
    if n == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in brute_enumerate(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `max over the degree window [⌈K/2⌉, K] of (⟨J, s⟩ + ln|c_J|) / |J|`,
/// straight from coefficient lookups.
pub fn brute_psi(series: &Series, s: &[f64], k: u64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for d in k.div_ceil(2).max(1)..=k {
        for j in brute_enumerate(series.dimension(), d) {
            let c = series
                .coefficient(&MultiIndex::new(j.clone()).unwrap())
                .unwrap()
                .norm();
            if c == 0.0 {
                continue;
            }
            let dot: f64 = j.iter().zip(s).map(|(&a, &b)| a as f64 * b).sum();
            best = best.max((dot + c.ln()) / d as f64);
        }
    }
    best
}

/// Maximum of `⟨objective, x⟩` over `{x : rows·x ≤ rhs}` by enumerating every
/// vertex (all `n`-subsets of rows solved as square systems). Only valid for
/// pointed polyhedra whose objective is bounded above.
pub fn vertex_max(objective: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Option<f64> {
    let n = objective.len();
    let mut best: Option<f64> = None;
    let mut subset: Vec<usize> = (0..n).collect();
    if rows.len() < n {
        return None;
    }
    loop {
        let a: Vec<Vec<f64>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&i| rhs[i]).collect();
        if let Some(x) = solve(a, b) {
            let feasible = rows
                .iter()
                .zip(rhs)
                .all(|(r, &bi)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= bi + 1e-9);
            if feasible {
                let v: f64 = objective.iter().zip(&x).map(|(p, q)| p * q).sum();
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] < rows.len() - n + i {
                subset[i] += 1;
                for j in i + 1..n {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Gaussian elimination with partial pivoting; `None` for (near) singular systems.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot = a[col].clone();
        for row in col + 1..n {
            let f = a[row][col] / pivot[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

pub fn grid_points(lo: f64, hi: f64, count: usize) -> Vec<Vec<f64>> {
    let step = (hi - lo) / (count - 1) as f64;
    let mut out = Vec::new();
    for i in 0..count {
        for j in 0..count {
            out.push(vec![lo + step * i as f64, lo + step * j as f64]);
        }
    }
    out
}

pub fn ray21() -> Series {
    Series::new(2, ray(&[2, 1], 1.0 / 3.0), "ray (2,1)").unwrap()
}

/// Constructed series for the wedge: 25 uniform directions, 8 slots per row.
pub fn wedge_series() -> Series {
    reinhardt_core::mainthm_series(&wedge(), &Direction::lattice(2, 24), 8).unwrap()
}

pub fn corpus() -> Vec<Series> {
    vec![geometric(), diagonal(), f0(), ray21(), wedge_series()]
}

/// Each row of a constructed series as its own explicit table, with the
/// row's prescribed direction.
pub fn family_rows(series: &Series) -> Vec<(Direction, Series)> {
    let CoefficientRule::SupportWeighted(sw) = series.rule() else {
        panic!("not a constructed series")
    };
    sw.family()
        .rows()
        .iter()
        .zip(sw.family().directions())
        .map(|(row, alpha)| {
            let t: BTreeMap<_, _> = row
                .iter()
                .map(|j| (j.clone(), series.coefficient(j).unwrap()))
                .collect();
            (
                alpha.clone(),
                Series::new(series.dimension(), CoefficientRule::ExplicitTable(t), "row").unwrap(),
            )
        })
        .collect()
}
